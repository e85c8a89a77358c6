#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dnaood/distance.hpp"

namespace dnaood {

// One test image with its classifier prediction and canonical OOD score.
// predicted_class is always an inlier (the model only knows inliers).
struct ScoredRecord {
  std::string image_id;
  std::string specimen_id;
  std::string true_class;
  std::string predicted_class;
  double score = 0.0;
  std::size_t input_index = 0;

  bool operator==(const ScoredRecord&) const = default;
};

struct RankedEntry {
  ScoredRecord record;
  bool is_outlier = false;  // true_class == designated outlier taxon

  bool operator==(const RankedEntry&) const = default;
};

// Total order over the test images; the first entry is the most probable
// outlier candidate.
struct RankedList {
  std::string outlier_taxon;
  std::vector<RankedEntry> entries;

  bool operator==(const RankedList&) const = default;
};

// How the bottom (1-q) block of the quantile method is ordered internally.
enum class BottomBlockOrder { Dna, Baseline };

// Score descending, ties by input index ascending.
RankedList baseline_order(std::span<const ScoredRecord> records, const std::string& outlier_taxon);

// DNA rank of the predicted class ascending, then score descending, then
// input index ascending. Every predicted class must appear in the ranking.
RankedList dna_order(std::span<const ScoredRecord> records, const DnaRanking& ranking);

// Splits off the ceil(q*N) records with the highest scores as a top block,
// orders each block independently, and concatenates top then bottom. The top
// block is always DNA-ordered; the bottom block follows `bottom` (DNA by
// default). q=0 and q=1 both reduce to dna_order.
RankedList dna_quantile_order(std::span<const ScoredRecord> records, const DnaRanking& ranking,
                              double q, BottomBlockOrder bottom = BottomBlockOrder::Dna);

}  // namespace dnaood
