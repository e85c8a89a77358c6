#include "dnaood/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "dnaood/errors.hpp"
#include "dnaood/rng.hpp"

namespace dnaood {

namespace {

Evaluation evaluate_sorted_groups(const std::vector<bool>& is_outlier,
                                  const std::vector<double>& scores,
                                  const std::vector<std::size_t>& order) {
  const std::size_t n = order.size();
  std::size_t n_out = 0;
  for (bool b : is_outlier) n_out += b ? 1 : 0;
  const std::size_t n_in = n - n_out;
  if (n_out == 0) throw ComputationError("ranking contains no outlier images");
  if (n_in == 0) throw ComputationError("ranking contains no inlier images");

  Evaluation eval;
  eval.report.n_outliers = n_out;
  eval.report.n_inliers = n_in;

  double auroc_pairs = 0.0;  // correctly ordered (outlier, inlier) pairs, ties count 0.5
  double ap_sum = 0.0;
  double fpr95 = 1.0;
  bool tpr_reached = false;

  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t i = 0;
  while (i < n) {
    // one group of tied scores = one threshold step
    std::size_t j = i;
    std::size_t group_out = 0;
    std::size_t group_in = 0;
    while (j < n && scores[order[j]] == scores[order[i]]) {
      if (is_outlier[order[j]]) {
        ++group_out;
      } else {
        ++group_in;
      }
      ++j;
    }

    const std::size_t inliers_below = n_in - fp - group_in;
    auroc_pairs += static_cast<double>(group_out) * static_cast<double>(inliers_below) +
                   0.5 * static_cast<double>(group_out) * static_cast<double>(group_in);

    tp += group_out;
    fp += group_in;
    const double tpr = static_cast<double>(tp) / static_cast<double>(n_out);
    const double fpr = static_cast<double>(fp) / static_cast<double>(n_in);
    const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    ap_sum += static_cast<double>(group_out) * precision;
    if (tpr >= 0.95) {
      fpr95 = tpr_reached ? std::min(fpr95, fpr) : fpr;
      tpr_reached = true;
    }
    eval.curve.push_back({tp + fp, tpr, fpr, precision, tpr});
    i = j;
  }

  eval.report.auroc = auroc_pairs / (static_cast<double>(n_out) * static_cast<double>(n_in));
  eval.report.auprc = ap_sum / static_cast<double>(n_out);
  eval.report.fpr_at_95tpr = fpr95;
  return eval;
}

}  // namespace

Evaluation evaluate_scores(const std::vector<bool>& is_outlier, const std::vector<double>& scores) {
  if (is_outlier.size() != scores.size()) {
    throw ValidationError("labels and scores differ in length (" + std::to_string(is_outlier.size()) +
                          " vs " + std::to_string(scores.size()) + ")");
  }
  if (scores.empty()) throw ComputationError("cannot evaluate an empty ranking");
  for (double s : scores) {
    if (!std::isfinite(s)) throw ValidationError("scores contain a non-finite entry");
  }

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&scores](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return evaluate_sorted_groups(is_outlier, scores, order);
}

Evaluation evaluate_ranking(const RankedList& ranked) {
  const std::size_t n = ranked.entries.size();
  if (n == 0) throw ComputationError("cannot evaluate an empty ranking");
  // Rank position converted to a score as N - position: order-preserving and
  // exactly representable.
  std::vector<bool> labels(n);
  std::vector<double> scores(n);
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = ranked.entries[i].is_outlier;
    scores[i] = static_cast<double>(n - i);
  }
  return evaluate_scores(labels, scores);
}

PredictionProportionMatrix prediction_proportions(std::span<const ExperimentPredictions> experiments,
                                                  const std::vector<std::string>& inlier_taxa) {
  if (experiments.empty()) throw ValidationError("no experiments given");

  PredictionProportionMatrix out;
  out.inlier_taxa = inlier_taxa;
  for (const auto& exp : experiments) out.outlier_taxa.push_back(exp.outlier_taxon);
  out.values.assign(experiments.size() * inlier_taxa.size(), 0.0);

  for (std::size_t row = 0; row < experiments.size(); ++row) {
    const auto& exp = experiments[row];
    if (exp.predicted_classes.empty()) {
      throw ComputationError("experiment for outlier '" + exp.outlier_taxon +
                             "' has zero outlier images");
    }
    for (const auto& predicted : exp.predicted_classes) {
      const auto it = std::find(inlier_taxa.begin(), inlier_taxa.end(), predicted);
      if (it == inlier_taxa.end()) {
        throw ValidationError("experiment for outlier '" + exp.outlier_taxon +
                              "': prediction '" + predicted + "' is not an inlier class");
      }
      out.values[row * inlier_taxa.size() + (it - inlier_taxa.begin())] += 1.0;
    }
    const double n_out = static_cast<double>(exp.predicted_classes.size());
    for (std::size_t col = 0; col < inlier_taxa.size(); ++col) {
      out.values[row * inlier_taxa.size() + col] /= n_out;
    }
  }
  return out;
}

namespace {

double pearson(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw ComputationError("degenerate input: zero variance in distances or proportions");
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

CorrelationResult correlate(const PredictionProportionMatrix& proportions,
                            const TaxonDistanceMatrix& distances,
                            std::size_t n_permutations, std::uint64_t seed) {
  CorrelationResult result;
  for (std::size_t row = 0; row < proportions.outlier_taxa.size(); ++row) {
    const std::string& outlier = proportions.outlier_taxa[row];
    const std::size_t oi = distances.index_of(outlier);
    if (oi == TaxonDistanceMatrix::npos) {
      throw ValidationError("outlier taxon '" + outlier + "' is not in the distance matrix");
    }
    for (std::size_t col = 0; col < proportions.inlier_taxa.size(); ++col) {
      const std::string& inlier = proportions.inlier_taxa[col];
      const double r = proportions.at(row, col);
      if (r == 0.0 || inlier == outlier) continue;
      const std::size_t ii = distances.index_of(inlier);
      if (ii == TaxonDistanceMatrix::npos) {
        throw ValidationError("inlier taxon '" + inlier + "' is not in the distance matrix");
      }
      const double d = distances.at(oi, ii);
      if (!std::isfinite(d)) continue;
      result.points.push_back({outlier, inlier, d, r});
    }
  }

  result.n_pairs = result.points.size();
  if (result.n_pairs < 3) {
    throw ComputationError("fewer than 3 surviving (distance, proportion) pairs: " +
                           std::to_string(result.n_pairs));
  }

  std::vector<double> xs, ys;
  xs.reserve(result.n_pairs);
  ys.reserve(result.n_pairs);
  for (const auto& p : result.points) {
    xs.push_back(p.distance);
    ys.push_back(p.proportion);
  }
  result.pearson_r = pearson(xs, ys);

  // Two-sided permutation test; each permutation derives its own seed so the
  // result does not depend on evaluation order.
  const double observed = std::abs(result.pearson_r);
  std::size_t hits = 0;
  std::vector<double> shuffled = ys;
  for (std::size_t k = 0; k < n_permutations; ++k) {
    Rng rng(splitmix64(seed) ^ splitmix64(k + 1));
    shuffled = ys;
    rng.shuffle(shuffled);
    if (std::abs(pearson(xs, shuffled)) >= observed - 1e-12) ++hits;
  }
  result.p_value = static_cast<double>(hits + 1) / static_cast<double>(n_permutations + 1);
  return result;
}

}  // namespace dnaood
