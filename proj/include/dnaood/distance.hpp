#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dnaood/seqio.hpp"

namespace dnaood {

enum class DistanceMethod { Raw, K80 };

DistanceMethod parse_distance_method(std::string_view name);
std::string_view to_string(DistanceMethod method);

// Per-pair site classification under pairwise deletion: a site is comparable
// only when both characters are in {A,C,G,T}; gaps and ambiguity codes drop
// the site for that pair.
struct SiteCounts {
  std::size_t comparable = 0;
  std::size_t transitions = 0;   // A<->G, C<->T
  std::size_t transversions = 0; // all other mismatches
};

SiteCounts classify_sites(std::string_view a, std::string_view b);

// Fraction of comparable sites that differ, in [0, 1].
double raw_distance(const AlignedSequence& a, const AlignedSequence& b);
double raw_distance(std::string_view a, std::string_view b);

// Kimura two-parameter distance -ln(1-2P-Q)/2 - ln(1-2Q)/4 over the
// transition proportion P and transversion proportion Q. Returns +infinity
// when either log argument is <= 0 (saturated pair).
double k80_distance(const AlignedSequence& a, const AlignedSequence& b);
double k80_distance(std::string_view a, std::string_view b);

// Square, symmetric, zero-diagonal matrix of pairwise distances between taxa.
// Entries may be +infinity (saturated K80 pairs).
struct TaxonDistanceMatrix {
  std::vector<std::string> taxa;
  std::vector<double> values;  // row-major, size() == taxa.size()^2

  std::size_t size() const { return taxa.size(); }
  double at(std::size_t i, std::size_t j) const { return values[i * taxa.size() + j]; }
  double& at(std::size_t i, std::size_t j) { return values[i * taxa.size() + j]; }
  // Index of a taxon, or npos when absent.
  std::size_t index_of(std::string_view taxon) const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

TaxonDistanceMatrix distance_matrix(const Alignment& alignment, DistanceMethod method);

// Inlier classes ordered by ascending DNA distance to the outlier class.
struct RankedInlier {
  std::string taxon_id;
  double distance;
  std::size_t rank;  // 0 = closest
};

struct DnaRanking {
  std::string outlier;
  std::vector<RankedInlier> ranked_inliers;

  // Rank of a taxon, or npos when the taxon is not ranked.
  std::size_t rank_of(std::string_view taxon) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

// Sorts the inliers by distance to the outlier, ascending. Ties keep the
// order of the provided inlier list; +infinity sorts after all finite
// distances.
DnaRanking rank_inliers(const TaxonDistanceMatrix& matrix, const std::string& outlier,
                        std::span<const std::string> inliers);

}  // namespace dnaood
