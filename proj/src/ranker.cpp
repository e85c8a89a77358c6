#include "dnaood/ranker.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <utility>

#include "dnaood/errors.hpp"

namespace dnaood {

namespace {

void require_records(std::span<const ScoredRecord> records) {
  if (records.empty()) throw ValidationError("cannot rank an empty record list");
  for (const auto& rec : records) {
    if (!std::isfinite(rec.score)) {
      throw ValidationError("record '" + rec.image_id + "' has a non-finite score");
    }
  }
}

bool score_before(const ScoredRecord& a, const ScoredRecord& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.input_index < b.input_index;
}

RankedList flag_outliers(std::vector<ScoredRecord> ordered, const std::string& outlier_taxon) {
  RankedList out;
  out.outlier_taxon = outlier_taxon;
  out.entries.reserve(ordered.size());
  for (auto& rec : ordered) {
    const bool is_outlier = rec.true_class == outlier_taxon;
    out.entries.push_back({std::move(rec), is_outlier});
  }
  return out;
}

std::vector<ScoredRecord> dna_sorted(std::span<const ScoredRecord> records,
                                     const DnaRanking& ranking) {
  std::unordered_map<std::string_view, std::size_t> rank_by_taxon;
  rank_by_taxon.reserve(ranking.ranked_inliers.size());
  for (const auto& entry : ranking.ranked_inliers) {
    rank_by_taxon.emplace(entry.taxon_id, entry.rank);
  }

  std::vector<std::pair<std::size_t, ScoredRecord>> keyed;
  keyed.reserve(records.size());
  for (const auto& rec : records) {
    const auto it = rank_by_taxon.find(rec.predicted_class);
    if (it == rank_by_taxon.end()) {
      throw ValidationError("record '" + rec.image_id + "' is predicted as '" +
                            rec.predicted_class + "', which is not in the DNA ranking");
    }
    keyed.emplace_back(it->second, rec);
  }

  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return score_before(a.second, b.second);
  });

  std::vector<ScoredRecord> ordered;
  ordered.reserve(keyed.size());
  for (auto& [rank, rec] : keyed) ordered.push_back(std::move(rec));
  return ordered;
}

}  // namespace

RankedList baseline_order(std::span<const ScoredRecord> records, const std::string& outlier_taxon) {
  require_records(records);
  std::vector<ScoredRecord> ordered(records.begin(), records.end());
  std::sort(ordered.begin(), ordered.end(), score_before);
  return flag_outliers(std::move(ordered), outlier_taxon);
}

RankedList dna_order(std::span<const ScoredRecord> records, const DnaRanking& ranking) {
  require_records(records);
  return flag_outliers(dna_sorted(records, ranking), ranking.outlier);
}

RankedList dna_quantile_order(std::span<const ScoredRecord> records, const DnaRanking& ranking,
                              double q, BottomBlockOrder bottom) {
  require_records(records);
  if (!(q >= 0.0 && q <= 1.0)) {
    throw ValidationError("quantile parameter q must be in [0, 1], got " + std::to_string(q));
  }
  for (const auto& rec : records) {
    if (ranking.rank_of(rec.predicted_class) == DnaRanking::npos) {
      throw ValidationError("record '" + rec.image_id + "' is predicted as '" +
                            rec.predicted_class + "', which is not in the DNA ranking");
    }
  }

  const std::size_t n = records.size();
  // k = ceil(q*N), with decimal q values snapped to the nearest integer
  // product so binary representation error cannot shift the block boundary.
  const double t = q * static_cast<double>(n);
  const double nearest = std::nearbyint(t);
  const std::size_t k = std::abs(t - nearest) < 1e-9 ? static_cast<std::size_t>(nearest)
                                                     : static_cast<std::size_t>(std::ceil(t));

  std::vector<ScoredRecord> by_score(records.begin(), records.end());
  std::sort(by_score.begin(), by_score.end(), score_before);

  const std::span<const ScoredRecord> top(by_score.data(), k);
  const std::span<const ScoredRecord> rest(by_score.data() + k, n - k);

  std::vector<ScoredRecord> ordered;
  ordered.reserve(n);
  if (!top.empty()) {
    for (auto& rec : dna_sorted(top, ranking)) ordered.push_back(std::move(rec));
  }
  if (!rest.empty()) {
    std::vector<ScoredRecord> bottom_block;
    if (bottom == BottomBlockOrder::Dna) {
      bottom_block = dna_sorted(rest, ranking);
    } else {
      bottom_block.assign(rest.begin(), rest.end());  // already score-sorted
    }
    for (auto& rec : bottom_block) ordered.push_back(std::move(rec));
  }
  return flag_outliers(std::move(ordered), ranking.outlier);
}

}  // namespace dnaood
