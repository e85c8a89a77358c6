#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dnaood/distance.hpp"
#include "dnaood/logit_table.hpp"
#include "dnaood/metrics.hpp"
#include "dnaood/ranker.hpp"
#include "dnaood/scoring.hpp"
#include "dnaood/seqio.hpp"

namespace dnaood {

enum class Reordering { Baseline, Dna, DnaQuantile };

Reordering parse_reordering(std::string_view name);
std::string_view to_string(Reordering reordering);

struct ExperimentConfig {
  std::string outlier_taxon;
  OodMethod ood_method = OodMethod::Entropy;
  DistanceMethod distance_method = DistanceMethod::K80;
  Reordering reordering = Reordering::DnaQuantile;
  double q = 0.4;
  BottomBlockOrder bottom_block = BottomBlockOrder::Dna;
  std::uint64_t seed = 42;  // used by the correlation permutation test
};

struct ExperimentResult {
  MetricReport report;
  CurvePoints curve;
  RankedList ranked;
  std::vector<std::string> warnings;
};

// Scores every row of the table under the chosen method and predicts its
// class. Appends a diagnostic to `warnings` when ratio-logit runs on rows
// whose max logit is non-positive.
std::vector<ScoredRecord> score_table(const LogitTable& table, OodMethod method,
                                      std::vector<std::string>* warnings = nullptr);

// The full pipeline for one leave-one-taxon-out experiment: score, build the
// DNA ranking of inliers against the outlier, apply the configured ordering,
// and evaluate. Baseline ordering validates barcode coverage but its numbers
// never depend on the alignment.
ExperimentResult run_experiment(const LogitTable& table, const Alignment& alignment,
                                const ExperimentConfig& config);

struct SweepPoint {
  double q = 0.0;
  MetricReport report;
};

// DNA quantile metrics over a grid of q values; scoring and the DNA ranking
// are computed once and reused.
std::vector<SweepPoint> sweep_q(const LogitTable& table, const Alignment& alignment,
                                const ExperimentConfig& config, std::span<const double> q_grid);

std::vector<double> default_q_grid();

struct CorrelateInput {
  std::string outlier_taxon;
  LogitTable table;
};

// Builds the prediction-proportion matrix across experiments (one designated
// outlier each), pairs it with the DNA distance matrix, and returns the
// Pearson correlation with a permutation p-value.
CorrelationResult correlate_experiments(std::span<const CorrelateInput> experiments,
                                        const Alignment& alignment, DistanceMethod method,
                                        std::size_t n_permutations = 10000, std::uint64_t seed = 42);

}  // namespace dnaood
