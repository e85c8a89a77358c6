#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "dnaood/errors.hpp"
#include "dnaood/experiment.hpp"
#include "dnaood/synth.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace dnaood;

namespace {

// 3 inlier classes, 12 images, 4 of them from the unseen outlier taxon.
// Distances from "out": x = 1/8, y = 2/8, z = 3/8.
const char* kBarcodes =
    ">out\nAAAAAAAA\n"
    ">x\nCAAAAAAA\n"
    ">y\nGCAAAAAA\n"
    ">z\nTACCAAAA\n";

LogitTable fixture_table() {
  LogitTable table;
  table.class_names = {"x", "y", "z"};
  const auto row = [](std::string id, std::string true_class, double lx, double ly, double lz) {
    return LogitRow{std::move(id), "sp", std::move(true_class), {lx, ly, lz}};
  };
  table.rows = {
      row("r0", "x", 5.0, 0.0, 0.0),    row("r1", "x", 4.0, 1.0, 0.0),
      row("r2", "y", 0.0, 6.0, 0.0),    row("r3", "y", 1.0, 3.0, 0.0),
      row("r4", "z", 0.0, 0.0, 7.0),    row("r5", "z", 0.0, 1.0, 2.0),
      row("r6", "out", 2.0, 0.0, 0.0),  row("r7", "out", 1.5, 1.0, 0.0),
      row("r8", "out", 0.0, 2.5, 0.0),  row("r9", "out", 0.0, 0.0, 3.5),
      row("r10", "x", 3.0, 2.0, 0.0),   row("r11", "y", 0.0, 2.0, 1.0),
  };
  return table;
}

ExperimentConfig fixture_config(Reordering reordering) {
  ExperimentConfig config;
  config.outlier_taxon = "out";
  config.ood_method = OodMethod::MaxLogit;
  config.distance_method = DistanceMethod::Raw;
  config.reordering = reordering;
  config.q = 0.5;
  return config;
}

std::vector<std::string> ranked_ids(const ExperimentResult& result) {
  std::vector<std::string> ids;
  for (const auto& entry : result.ranked.entries) ids.push_back(entry.record.image_id);
  return ids;
}

// Independent trace: maxlogit scores, explicit tuple sorts, oracle metrics.
struct Traced {
  std::vector<std::string> order;
  double auroc;
  double auprc;
  double fpr95;
};

Traced trace(const LogitTable& table, const std::vector<std::string>& dna_ranking,
             Reordering reordering, double q) {
  struct Item {
    std::string id;
    bool outlier;
    double score;
    std::size_t dna_rank;
    std::size_t index;
  };
  std::vector<Item> items;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const LogitRow& row = table.rows[i];
    const std::size_t arg =
        std::max_element(row.logits.begin(), row.logits.end()) - row.logits.begin();
    const std::string& predicted = table.class_names[arg];
    const std::size_t rank =
        std::find(dna_ranking.begin(), dna_ranking.end(), predicted) - dna_ranking.begin();
    items.push_back({row.image_id, row.true_class == "out",
                     -*std::max_element(row.logits.begin(), row.logits.end()), rank, i});
  }

  const auto by_score = [](const Item& a, const Item& b) {
    return std::tuple(-a.score, a.index) < std::tuple(-b.score, b.index);
  };
  const auto by_dna = [](const Item& a, const Item& b) {
    return std::tuple(a.dna_rank, -a.score, a.index) < std::tuple(b.dna_rank, -b.score, b.index);
  };

  switch (reordering) {
    case Reordering::Baseline:
      std::sort(items.begin(), items.end(), by_score);
      break;
    case Reordering::Dna:
      std::sort(items.begin(), items.end(), by_dna);
      break;
    case Reordering::DnaQuantile: {
      std::sort(items.begin(), items.end(), by_score);
      const std::size_t k =
          static_cast<std::size_t>(std::ceil(q * static_cast<double>(items.size()) - 1e-9));
      std::sort(items.begin(), items.begin() + k, by_dna);
      std::sort(items.begin() + k, items.end(), by_dna);
      break;
    }
  }

  Traced out;
  std::vector<bool> labels;
  std::vector<double> scores;
  for (std::size_t i = 0; i < items.size(); ++i) {
    out.order.push_back(items[i].id);
    labels.push_back(items[i].outlier);
    scores.push_back(static_cast<double>(items.size() - i));
  }
  out.auroc = oracles::auroc(labels, scores);
  out.auprc = oracles::average_precision(labels, scores);
  out.fpr95 = oracles::fpr_at_95tpr(labels, scores);
  return out;
}

}  // namespace

TEST_CASE("run_experiment matches an independent step-by-step trace") {
  const Alignment alignment = parse_fasta(kBarcodes);
  const LogitTable table = fixture_table();
  const std::vector<std::string> dna_ranking = {"x", "y", "z"};  // by distance to out

  for (Reordering reordering :
       {Reordering::Baseline, Reordering::Dna, Reordering::DnaQuantile}) {
    CAPTURE(to_string(reordering));
    const ExperimentResult result =
        run_experiment(table, alignment, fixture_config(reordering));
    const Traced expected = trace(table, dna_ranking, reordering, 0.5);
    CHECK(ranked_ids(result) == expected.order);
    CHECK(result.report.auroc == doctest::Approx(expected.auroc).epsilon(1e-12));
    CHECK(result.report.auprc == doctest::Approx(expected.auprc).epsilon(1e-12));
    CHECK(result.report.fpr_at_95tpr == doctest::Approx(expected.fpr95).epsilon(1e-12));
    CHECK(result.report.n_outliers == 4);
    CHECK(result.report.n_inliers == 8);
  }

  // frozen hand-traced values
  const ExperimentResult base = run_experiment(table, alignment, fixture_config(Reordering::Baseline));
  CHECK(base.report.auroc == doctest::Approx(25.0 / 32.0).epsilon(1e-12));
  CHECK(ranked_ids(base) == std::vector<std::string>{"r7", "r5", "r6", "r11", "r8", "r3", "r10",
                                                     "r9", "r1", "r0", "r2", "r4"});
  const ExperimentResult dna = run_experiment(table, alignment, fixture_config(Reordering::Dna));
  CHECK(dna.report.auroc == doctest::Approx(21.0 / 32.0).epsilon(1e-12));
  const ExperimentResult quant =
      run_experiment(table, alignment, fixture_config(Reordering::DnaQuantile));
  CHECK(quant.report.auroc == doctest::Approx(24.0 / 32.0).epsilon(1e-12));
  CHECK(ranked_ids(quant) == std::vector<std::string>{"r7", "r6", "r11", "r8", "r3", "r5", "r10",
                                                      "r1", "r0", "r2", "r9", "r4"});
}

TEST_CASE("baseline ordering with separable entropy scores reaches AUROC 1") {
  const Alignment alignment = parse_fasta(">out\nAAAA\n>a\nCCCC\n>b\nGGGG\n");
  LogitTable table;
  table.class_names = {"a", "b"};
  for (int i = 0; i < 6; ++i) {
    table.rows.push_back({"in" + std::to_string(i), "sp", i % 2 == 0 ? "a" : "b",
                          {i % 2 == 0 ? 10.0 : 0.0, i % 2 == 0 ? 0.0 : 10.0}});
  }
  for (int i = 0; i < 3; ++i) {
    table.rows.push_back({"o" + std::to_string(i), "sp", "out", {1.0, 1.0 - 0.01 * i}});
  }
  ExperimentConfig config;
  config.outlier_taxon = "out";
  config.ood_method = OodMethod::Entropy;
  config.reordering = Reordering::Baseline;
  const ExperimentResult result = run_experiment(table, alignment, config);
  CHECK(result.report.auroc == 1.0);
  CHECK(result.report.auprc == 1.0);
}

TEST_CASE("dna ordering with all outliers predicted into the nearest class reaches AUROC 1") {
  // b is DNA-nearest to out; all outliers predicted b, all inliers predicted a
  const Alignment alignment = parse_fasta(">out\nAAAA\n>a\nCCCC\n>b\nAAAC\n");
  LogitTable table;
  table.class_names = {"a", "b"};
  for (int i = 0; i < 5; ++i) {
    table.rows.push_back({"in" + std::to_string(i), "sp", "a", {5.0 + i, 0.0}});
  }
  for (int i = 0; i < 3; ++i) {
    table.rows.push_back({"o" + std::to_string(i), "sp", "out", {0.0, 5.0 + i}});
  }
  ExperimentConfig config;
  config.outlier_taxon = "out";
  config.ood_method = OodMethod::Msp;
  config.reordering = Reordering::Dna;
  const ExperimentResult result = run_experiment(table, alignment, config);
  CHECK(result.report.auroc == 1.0);
}

TEST_CASE("run_experiment validation and degenerate errors") {
  const Alignment alignment = parse_fasta(kBarcodes);
  const LogitTable table = fixture_table();

  SUBCASE("missing barcode names the taxon") {
    const Alignment partial = parse_fasta(">out\nAAAAAAAA\n>x\nCAAAAAAA\n>y\nGCAAAAAA\n");
    CHECK_THROWS_WITH_AS(run_experiment(table, partial, fixture_config(Reordering::Dna)),
                         doctest::Contains("'z'"), ValidationError);
  }
  SUBCASE("outlier taxon must be unseen") {
    ExperimentConfig config = fixture_config(Reordering::Baseline);
    config.outlier_taxon = "x";
    CHECK_THROWS_AS(run_experiment(table, alignment, config), ValidationError);
  }
  SUBCASE("no outlier rows") {
    LogitTable inliers_only = table;
    std::erase_if(inliers_only.rows, [](const LogitRow& r) { return r.true_class == "out"; });
    CHECK_THROWS_AS(run_experiment(inliers_only, alignment, fixture_config(Reordering::Baseline)),
                    ComputationError);
  }
  SUBCASE("no inlier rows") {
    LogitTable outliers_only = table;
    std::erase_if(outliers_only.rows, [](const LogitRow& r) { return r.true_class != "out"; });
    CHECK_THROWS_AS(run_experiment(outliers_only, alignment, fixture_config(Reordering::Baseline)),
                    ComputationError);
  }
  SUBCASE("q outside [0,1]") {
    ExperimentConfig config = fixture_config(Reordering::DnaQuantile);
    config.q = 1.5;
    CHECK_THROWS_AS(run_experiment(table, alignment, config), ValidationError);
  }
}

TEST_CASE("baseline numbers cannot depend on the barcode sequences") {
  const LogitTable table = fixture_table();
  const Alignment a1 = parse_fasta(kBarcodes);
  // same taxa, very different sequences
  const Alignment a2 = parse_fasta(">out\nGGGGGGGG\n>x\nGGGGGGGT\n>y\nTTTTTTTT\n>z\nGGTTGGTT\n");

  const ExperimentResult b1 = run_experiment(table, a1, fixture_config(Reordering::Baseline));
  const ExperimentResult b2 = run_experiment(table, a2, fixture_config(Reordering::Baseline));
  CHECK(ranked_ids(b1) == ranked_ids(b2));
  CHECK(b1.report.auroc == b2.report.auroc);

  const ExperimentResult d1 = run_experiment(table, a1, fixture_config(Reordering::Dna));
  const ExperimentResult d2 = run_experiment(table, a2, fixture_config(Reordering::Dna));
  CHECK(ranked_ids(d1) != ranked_ids(d2));  // the dna path does consult them
}

TEST_CASE("ratio-logit warning fires when max logit is non-positive") {
  const Alignment alignment = parse_fasta(kBarcodes);
  LogitTable table = fixture_table();
  table.rows[0].logits = {-1.0, -2.0, -3.0};
  ExperimentConfig config = fixture_config(Reordering::Baseline);
  config.ood_method = OodMethod::RatioLogit;
  const ExperimentResult result = run_experiment(table, alignment, config);
  REQUIRE(result.warnings.size() == 1);
  CHECK(result.warnings[0].find("ratio-logit") != std::string::npos);

  config.ood_method = OodMethod::MaxLogit;
  CHECK(run_experiment(table, alignment, config).warnings.empty());
}

TEST_CASE("sweep_q consistency with single runs") {
  const Alignment alignment = parse_fasta(kBarcodes);
  const LogitTable table = fixture_table();
  const ExperimentConfig config = fixture_config(Reordering::DnaQuantile);

  SUBCASE("q = 0 and q = 1 equal the plain dna report") {
    const std::vector<double> grid = {0.0, 1.0};
    const std::vector<SweepPoint> points = sweep_q(table, alignment, config, grid);
    const MetricReport dna =
        run_experiment(table, alignment, fixture_config(Reordering::Dna)).report;
    REQUIRE(points.size() == 2);
    for (const auto& point : points) {
      CHECK(point.report.auroc == dna.auroc);
      CHECK(point.report.auprc == dna.auprc);
      CHECK(point.report.fpr_at_95tpr == dna.fpr_at_95tpr);
    }
  }
  SUBCASE("grid point equals the single-q run") {
    const std::vector<double> grid = {0.4};
    const std::vector<SweepPoint> points = sweep_q(table, alignment, config, grid);
    ExperimentConfig single = config;
    single.q = 0.4;
    const MetricReport report = run_experiment(table, alignment, single).report;
    CHECK(points[0].report.auroc == report.auroc);
    CHECK(points[0].report.auprc == report.auprc);
  }
  SUBCASE("default grid spans [0,1] inclusive") {
    const std::vector<double> grid = default_q_grid();
    REQUIRE(grid.size() == 21);
    CHECK(grid.front() == 0.0);
    CHECK(grid.back() == 1.0);
    CHECK_NOTHROW(sweep_q(table, alignment, config, grid));
  }
  SUBCASE("bad grid rejected") {
    CHECK_THROWS_AS(sweep_q(table, alignment, config, std::vector<double>{}), ValidationError);
    CHECK_THROWS_AS(sweep_q(table, alignment, config, std::vector<double>{0.5, 1.2}),
                    ValidationError);
  }
}

TEST_CASE("sweep_q varies over a coupled synthetic world") {
  SynthConfig synth_cfg;
  synth_cfg.n_classes = 12;
  synth_cfg.images_per_class = 30;
  synth_cfg.outlier_index = 3;
  synth_cfg.seed = 5;
  const SynthWorld world = synth_world(synth_cfg);

  ExperimentConfig config;
  config.outlier_taxon = world.outlier_taxon;
  config.ood_method = OodMethod::MaxLogit;
  config.reordering = Reordering::DnaQuantile;

  const std::vector<double> grid = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
  const std::vector<SweepPoint> points = sweep_q(world.table, world.alignment, config, grid);
  REQUIRE(points.size() == grid.size());
  double lo = 1.0, hi = 0.0;
  for (const auto& point : points) {
    lo = std::min(lo, point.report.auroc);
    hi = std::max(hi, point.report.auroc);
    ExperimentConfig single = config;
    single.q = point.q;
    CHECK(run_experiment(world.table, world.alignment, single).report.auroc ==
          point.report.auroc);
  }
  CHECK(hi > lo);  // q genuinely moves the metric on a coupled instance
}

namespace {

// 24 outlier images whose predictions make proportions exactly linear in the
// raw distances 1/8, 2/8, 3/8 (counts 11, 8, 5).
LogitTable anti_linear_table(const std::vector<std::string>& class_names) {
  LogitTable table;
  table.class_names = class_names;
  const std::size_t counts[] = {11, 8, 5};
  std::size_t image = 0;
  for (std::size_t c = 0; c < 3; ++c) {
    for (std::size_t k = 0; k < counts[c]; ++k) {
      std::vector<double> logits(3, 0.0);
      logits[c] = 5.0;
      table.rows.push_back({"img" + std::to_string(image++), "sp", "outlier_row",
                            std::move(logits)});
    }
  }
  return table;
}

}  // namespace

TEST_CASE("correlate_experiments on anti-linear experiments returns r = -1") {
  const Alignment alignment = parse_fasta(
      ">A\nAAAAAAAA\n"
      ">B\nCAAAAAAA\n"
      ">C\nGCAAAAAA\n"
      ">D\nTACCAAAA\n");

  std::vector<CorrelateInput> experiments(2);
  experiments[0].outlier_taxon = "A";
  experiments[0].table = anti_linear_table({"B", "C", "D"});
  for (auto& row : experiments[0].table.rows) row.true_class = "A";
  experiments[1].outlier_taxon = "B";
  experiments[1].table = anti_linear_table({"A", "C", "D"});
  for (auto& row : experiments[1].table.rows) row.true_class = "B";

  const CorrelationResult result =
      correlate_experiments(experiments, alignment, DistanceMethod::Raw, 2000, 11);
  CHECK(result.n_pairs == 6);
  CHECK(result.pearson_r == doctest::Approx(-1.0).epsilon(1e-12));

  SUBCASE("duplicate outliers rejected") {
    experiments[1].outlier_taxon = "A";
    experiments[1].table = anti_linear_table({"B", "C", "D"});
    for (auto& row : experiments[1].table.rows) row.true_class = "A";
    CHECK_THROWS_AS(correlate_experiments(experiments, alignment, DistanceMethod::Raw, 100, 1),
                    ValidationError);
  }
}

TEST_CASE("correlate_experiments is strongly negative under full coupling") {
  SynthConfig cfg;
  cfg.n_classes = 39;
  cfg.images_per_class = 50;
  cfg.coupling = 1.0;
  cfg.seed = 20240601;
  cfg.outlier_index = 7;
  const SynthWorld world = synth_world(cfg);

  std::vector<CorrelateInput> experiments(1);
  experiments[0].outlier_taxon = world.outlier_taxon;
  experiments[0].table = world.table;
  const CorrelationResult result =
      correlate_experiments(experiments, world.alignment, DistanceMethod::K80, 2000, 1);
  CHECK(result.pearson_r < 0.0);
  CHECK(result.p_value < 0.05);
}

TEST_CASE("correlate_experiments is near zero without coupling across 20 seeds") {
  double sum_abs_r = 0.0;
  double sum_p = 0.0;
  const int n_seeds = 20;
  for (int seed = 0; seed < n_seeds; ++seed) {
    SynthConfig cfg;
    cfg.n_classes = 20;
    cfg.images_per_class = 60;
    cfg.coupling = 0.0;
    cfg.seed = static_cast<std::uint64_t>(seed);
    cfg.outlier_index = static_cast<std::size_t>(seed) % cfg.n_classes;
    const SynthWorld world = synth_world(cfg);

    std::vector<CorrelateInput> experiments(1);
    experiments[0].outlier_taxon = world.outlier_taxon;
    experiments[0].table = world.table;
    const CorrelationResult result =
        correlate_experiments(experiments, world.alignment, DistanceMethod::K80, 1000,
                              static_cast<std::uint64_t>(seed));
    sum_abs_r += std::abs(result.pearson_r);
    sum_p += result.p_value;
  }
  CHECK(sum_abs_r / n_seeds < 0.35);
  CHECK(sum_p / n_seeds > 0.1);  // expectation is ~0.5 under the null
}
