#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dnaood/distance.hpp"
#include "dnaood/ranker.hpp"

namespace dnaood {

struct MetricReport {
  double auroc = 0.0;
  double auprc = 0.0;
  double fpr_at_95tpr = 0.0;
  std::size_t n_outliers = 0;
  std::size_t n_inliers = 0;
};

// One point per score threshold, walking the ranking from the top.
// rank is the number of items above the threshold.
struct CurvePoint {
  std::size_t rank = 0;
  double tpr = 0.0;
  double fpr = 0.0;
  double precision = 0.0;
  double recall = 0.0;
};

using CurvePoints = std::vector<CurvePoint>;

struct Evaluation {
  MetricReport report;
  CurvePoints curve;
};

// Evaluates a total order: AUROC as the fraction of (outlier, inlier) pairs
// where the outlier ranks higher, AUPRC as average precision over outlier
// positions (step rule), FPR@95 as the minimum FPR over prefixes whose TPR
// reaches 0.95. Requires at least one outlier and one inlier.
Evaluation evaluate_ranking(const RankedList& ranked);

// Score-based entry. Tied scores form a single threshold step; AUROC counts
// 0.5 per cross-class tie.
Evaluation evaluate_scores(const std::vector<bool>& is_outlier, const std::vector<double>& scores);

// Predictions of the outlier-class images from one leave-one-taxon-out
// experiment: predicted_classes[i] is the inlier class assigned to the i-th
// outlier image.
struct ExperimentPredictions {
  std::string outlier_taxon;
  std::vector<std::string> predicted_classes;
};

// Row per outlier experiment, column per inlier class; each cell holds the
// proportion of that experiment's outlier images predicted into the column
// class. Rows sum to 1.
struct PredictionProportionMatrix {
  std::vector<std::string> outlier_taxa;
  std::vector<std::string> inlier_taxa;
  std::vector<double> values;  // row-major

  double at(std::size_t row, std::size_t col) const { return values[row * inlier_taxa.size() + col]; }
};

PredictionProportionMatrix prediction_proportions(std::span<const ExperimentPredictions> experiments,
                                                  const std::vector<std::string>& inlier_taxa);

struct ScatterPoint {
  std::string outlier;
  std::string inlier;
  double distance = 0.0;
  double proportion = 0.0;
};

struct CorrelationResult {
  double pearson_r = 0.0;
  double p_value = 1.0;
  std::size_t n_pairs = 0;
  std::vector<ScatterPoint> points;
};

// Pearson correlation between DNA distance and prediction proportion over
// all (outlier, inlier) pairs, omitting zero proportions and non-finite
// distances. The two-sided p-value comes from a seeded permutation test, so
// results are reproducible for a fixed seed. Requires >= 3 surviving pairs
// and non-degenerate variance on both axes.
CorrelationResult correlate(const PredictionProportionMatrix& proportions,
                            const TaxonDistanceMatrix& distances,
                            std::size_t n_permutations = 10000, std::uint64_t seed = 0);

}  // namespace dnaood
