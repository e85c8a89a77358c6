#include "dnaood/distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "dnaood/errors.hpp"

namespace dnaood {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_acgt(char c) { return c == 'A' || c == 'C' || c == 'G' || c == 'T'; }

bool is_purine(char c) { return c == 'A' || c == 'G'; }

void require_equal_length(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) {
    throw ValidationError("sequence length mismatch (" + std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()) + ")");
  }
}

SiteCounts counts_or_throw(std::string_view a, std::string_view b) {
  require_equal_length(a, b);
  const SiteCounts counts = classify_sites(a, b);
  if (counts.comparable == 0) {
    throw ComputationError("no comparable sites between sequences (pairwise deletion removed all)");
  }
  return counts;
}

double k80_from_counts(const SiteCounts& counts) {
  const double n = static_cast<double>(counts.comparable);
  const double p = static_cast<double>(counts.transitions) / n;
  const double q = static_cast<double>(counts.transversions) / n;
  const double w1 = 1.0 - 2.0 * p - q;
  const double w2 = 1.0 - 2.0 * q;
  if (w1 <= 0.0 || w2 <= 0.0) return kInf;
  return -0.5 * std::log(w1) - 0.25 * std::log(w2);
}

}  // namespace

DistanceMethod parse_distance_method(std::string_view name) {
  if (name == "raw") return DistanceMethod::Raw;
  if (name == "k80") return DistanceMethod::K80;
  throw ValidationError("unknown distance method '" + std::string(name) + "' (expected raw or k80)");
}

std::string_view to_string(DistanceMethod method) {
  return method == DistanceMethod::Raw ? "raw" : "k80";
}

SiteCounts classify_sites(std::string_view a, std::string_view b) {
  SiteCounts counts;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const char x = a[i];
    const char y = b[i];
    if (!is_acgt(x) || !is_acgt(y)) continue;
    ++counts.comparable;
    if (x == y) continue;
    if (is_purine(x) == is_purine(y)) {
      ++counts.transitions;
    } else {
      ++counts.transversions;
    }
  }
  return counts;
}

double raw_distance(std::string_view a, std::string_view b) {
  const SiteCounts counts = counts_or_throw(a, b);
  return static_cast<double>(counts.transitions + counts.transversions) /
         static_cast<double>(counts.comparable);
}

double raw_distance(const AlignedSequence& a, const AlignedSequence& b) {
  return raw_distance(std::string_view(a.bases), std::string_view(b.bases));
}

double k80_distance(std::string_view a, std::string_view b) {
  return k80_from_counts(counts_or_throw(a, b));
}

double k80_distance(const AlignedSequence& a, const AlignedSequence& b) {
  return k80_distance(std::string_view(a.bases), std::string_view(b.bases));
}

std::size_t TaxonDistanceMatrix::index_of(std::string_view taxon) const {
  for (std::size_t i = 0; i < taxa.size(); ++i) {
    if (taxa[i] == taxon) return i;
  }
  return npos;
}

TaxonDistanceMatrix distance_matrix(const Alignment& alignment, DistanceMethod method) {
  const std::size_t n = alignment.size();
  TaxonDistanceMatrix out;
  out.taxa.reserve(n);
  for (const auto& seq : alignment.sequences) out.taxa.push_back(seq.taxon_id);
  out.values.assign(n * n, 0.0);

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double d = 0.0;
      try {
        d = method == DistanceMethod::Raw
                ? raw_distance(alignment.sequences[i], alignment.sequences[j])
                : k80_distance(alignment.sequences[i], alignment.sequences[j]);
      } catch (const ComputationError& e) {
        throw ComputationError("taxa '" + out.taxa[i] + "' and '" + out.taxa[j] + "': " + e.what());
      }
      out.at(i, j) = d;
      out.at(j, i) = d;
    }
  }
  return out;
}

std::size_t DnaRanking::rank_of(std::string_view taxon) const {
  for (const auto& entry : ranked_inliers) {
    if (entry.taxon_id == taxon) return entry.rank;
  }
  return npos;
}

DnaRanking rank_inliers(const TaxonDistanceMatrix& matrix, const std::string& outlier,
                        std::span<const std::string> inliers) {
  const std::size_t outlier_idx = matrix.index_of(outlier);
  if (outlier_idx == TaxonDistanceMatrix::npos) {
    throw ValidationError("outlier taxon '" + outlier + "' is not in the distance matrix");
  }

  DnaRanking ranking;
  ranking.outlier = outlier;
  ranking.ranked_inliers.reserve(inliers.size());
  for (const auto& taxon : inliers) {
    if (taxon == outlier) {
      throw ValidationError("outlier taxon '" + outlier + "' listed among the inliers");
    }
    const std::size_t idx = matrix.index_of(taxon);
    if (idx == TaxonDistanceMatrix::npos) {
      throw ValidationError("inlier taxon '" + taxon + "' is not in the distance matrix");
    }
    ranking.ranked_inliers.push_back({taxon, matrix.at(outlier_idx, idx), 0});
  }

  std::stable_sort(ranking.ranked_inliers.begin(), ranking.ranked_inliers.end(),
                   [](const RankedInlier& a, const RankedInlier& b) { return a.distance < b.distance; });
  for (std::size_t i = 0; i < ranking.ranked_inliers.size(); ++i) {
    ranking.ranked_inliers[i].rank = i;
  }
  return ranking;
}

}  // namespace dnaood
