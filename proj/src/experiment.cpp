#include "dnaood/experiment.hpp"

#include <algorithm>
#include <set>

#include "dnaood/errors.hpp"

namespace dnaood {

namespace {

// Validates that the alignment covers every inlier class plus the outlier.
void require_barcodes(const LogitTable& table, const Alignment& alignment,
                      const std::string& outlier_taxon) {
  std::set<std::string> needed(table.class_names.begin(), table.class_names.end());
  needed.insert(outlier_taxon);
  const std::set<std::string> missing = validate_against_classes(alignment, needed);
  if (!missing.empty()) {
    std::string msg = "missing barcode sequence for:";
    for (const auto& taxon : missing) msg += " '" + taxon + "'";
    throw ValidationError(msg);
  }
}

void require_outlier_config(const LogitTable& table, const std::string& outlier_taxon) {
  if (outlier_taxon.empty()) throw ValidationError("no outlier taxon configured");
  if (std::find(table.class_names.begin(), table.class_names.end(), outlier_taxon) !=
      table.class_names.end()) {
    throw ValidationError("outlier taxon '" + outlier_taxon +
                          "' appears in the logit table class map; the outlier must be unseen");
  }
}

DnaRanking build_ranking(const LogitTable& table, const Alignment& alignment,
                         const std::string& outlier_taxon, DistanceMethod method) {
  std::vector<std::string> taxa = table.class_names;
  taxa.push_back(outlier_taxon);
  const TaxonDistanceMatrix matrix = distance_matrix(filter_taxa(alignment, taxa), method);
  return rank_inliers(matrix, outlier_taxon, table.class_names);
}

}  // namespace

Reordering parse_reordering(std::string_view name) {
  if (name == "baseline") return Reordering::Baseline;
  if (name == "dna") return Reordering::Dna;
  if (name == "dna-quantile") return Reordering::DnaQuantile;
  throw ValidationError("unknown re-ordering method '" + std::string(name) +
                        "' (expected baseline, dna or dna-quantile)");
}

std::string_view to_string(Reordering reordering) {
  switch (reordering) {
    case Reordering::Baseline: return "baseline";
    case Reordering::Dna: return "dna";
    case Reordering::DnaQuantile: return "dna-quantile";
  }
  return "?";
}

std::vector<ScoredRecord> score_table(const LogitTable& table, OodMethod method,
                                      std::vector<std::string>* warnings) {
  std::vector<ScoredRecord> records;
  records.reserve(table.rows.size());
  std::size_t flipped = 0;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const LogitRow& row = table.rows[i];
    ScoredRecord rec;
    rec.image_id = row.image_id;
    rec.specimen_id = row.specimen_id;
    rec.true_class = row.true_class;
    rec.predicted_class = table.class_names[predict(row.logits)];
    rec.score = ood_score(method, row.logits);
    rec.input_index = i;
    if (method == OodMethod::RatioLogit && ratio_logit_orientation_flips(row.logits)) ++flipped;
    records.push_back(std::move(rec));
  }
  if (warnings != nullptr && flipped > 0) {
    warnings->push_back("ratio-logit orientation flips for " + std::to_string(flipped) +
                        " row(s) with max logit <= 0");
  }
  return records;
}

ExperimentResult run_experiment(const LogitTable& table, const Alignment& alignment,
                                const ExperimentConfig& config) {
  require_outlier_config(table, config.outlier_taxon);
  require_barcodes(table, alignment, config.outlier_taxon);

  std::size_t n_outlier_rows = 0;
  for (const auto& row : table.rows) n_outlier_rows += row.true_class == config.outlier_taxon;
  if (n_outlier_rows == 0) {
    throw ComputationError("no rows with true_class '" + config.outlier_taxon +
                           "' (the designated outlier)");
  }
  if (n_outlier_rows == table.rows.size()) {
    throw ComputationError("no inlier rows in the logit table");
  }

  ExperimentResult result;
  const std::vector<ScoredRecord> records =
      score_table(table, config.ood_method, &result.warnings);

  switch (config.reordering) {
    case Reordering::Baseline:
      result.ranked = baseline_order(records, config.outlier_taxon);
      break;
    case Reordering::Dna: {
      const DnaRanking ranking =
          build_ranking(table, alignment, config.outlier_taxon, config.distance_method);
      result.ranked = dna_order(records, ranking);
      break;
    }
    case Reordering::DnaQuantile: {
      const DnaRanking ranking =
          build_ranking(table, alignment, config.outlier_taxon, config.distance_method);
      result.ranked = dna_quantile_order(records, ranking, config.q, config.bottom_block);
      break;
    }
  }

  Evaluation eval = evaluate_ranking(result.ranked);
  result.report = eval.report;
  result.curve = std::move(eval.curve);
  return result;
}

std::vector<SweepPoint> sweep_q(const LogitTable& table, const Alignment& alignment,
                                const ExperimentConfig& config, std::span<const double> q_grid) {
  require_outlier_config(table, config.outlier_taxon);
  require_barcodes(table, alignment, config.outlier_taxon);
  if (q_grid.empty()) throw ValidationError("empty q grid");
  for (double q : q_grid) {
    if (!(q >= 0.0 && q <= 1.0)) {
      throw ValidationError("q grid value " + std::to_string(q) + " outside [0, 1]");
    }
  }

  const std::vector<ScoredRecord> records =
      score_table(table, config.ood_method, nullptr);
  const DnaRanking ranking =
      build_ranking(table, alignment, config.outlier_taxon, config.distance_method);

  std::vector<SweepPoint> points;
  points.reserve(q_grid.size());
  for (double q : q_grid) {
    const RankedList ranked = dna_quantile_order(records, ranking, q, config.bottom_block);
    points.push_back({q, evaluate_ranking(ranked).report});
  }
  return points;
}

std::vector<double> default_q_grid() {
  std::vector<double> grid;
  grid.reserve(21);
  for (int i = 0; i <= 20; ++i) grid.push_back(static_cast<double>(i) / 20.0);
  return grid;
}

CorrelationResult correlate_experiments(std::span<const CorrelateInput> experiments,
                                        const Alignment& alignment, DistanceMethod method,
                                        std::size_t n_permutations, std::uint64_t seed) {
  if (experiments.empty()) throw ValidationError("no experiments given");

  std::set<std::string> outliers;
  std::vector<std::string> columns;  // union of inlier classes, first-seen order
  std::set<std::string> column_set;
  for (const auto& exp : experiments) {
    require_outlier_config(exp.table, exp.outlier_taxon);
    require_barcodes(exp.table, alignment, exp.outlier_taxon);
    if (!outliers.insert(exp.outlier_taxon).second) {
      throw ValidationError("duplicate outlier taxon '" + exp.outlier_taxon +
                            "' across experiments");
    }
    for (const auto& name : exp.table.class_names) {
      if (column_set.insert(name).second) columns.push_back(name);
    }
  }

  std::vector<ExperimentPredictions> predictions;
  predictions.reserve(experiments.size());
  for (const auto& exp : experiments) {
    ExperimentPredictions pred;
    pred.outlier_taxon = exp.outlier_taxon;
    for (const auto& row : exp.table.rows) {
      if (row.true_class != exp.outlier_taxon) continue;
      pred.predicted_classes.push_back(exp.table.class_names[predict(row.logits)]);
    }
    if (pred.predicted_classes.empty()) {
      throw ComputationError("experiment for outlier '" + exp.outlier_taxon +
                             "' has zero outlier images");
    }
    predictions.push_back(std::move(pred));
  }

  const PredictionProportionMatrix proportions = prediction_proportions(predictions, columns);

  std::vector<std::string> all_taxa = columns;
  for (const auto& exp : experiments) {
    if (!column_set.contains(exp.outlier_taxon)) {
      all_taxa.push_back(exp.outlier_taxon);
      column_set.insert(exp.outlier_taxon);
    }
  }
  const TaxonDistanceMatrix matrix = distance_matrix(filter_taxa(alignment, all_taxa), method);

  return correlate(proportions, matrix, n_permutations, seed);
}

}  // namespace dnaood
