#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dnaood/csv.hpp"
#include "dnaood/distance.hpp"
#include "dnaood/errors.hpp"
#include "dnaood/experiment.hpp"
#include "dnaood/logit_table.hpp"
#include "dnaood/metrics.hpp"
#include "dnaood/seqio.hpp"
#include "dnaood/synth.hpp"
#include "json.hpp"

namespace {

using dnaood::format_double;
using json = nlohmann::ordered_json;

// "-" writes to stdout, anything else to the named file.
void emit(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
    std::cout.flush();
  } else {
    dnaood::write_file(path, content);
  }
}

std::string distance_matrix_csv(const dnaood::TaxonDistanceMatrix& matrix) {
  std::string out = "taxon";
  for (const auto& taxon : matrix.taxa) out += "," + taxon;
  out += '\n';
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    out += matrix.taxa[i];
    for (std::size_t j = 0; j < matrix.size(); ++j) {
      out += ',';
      out += format_double(matrix.at(i, j));
    }
    out += '\n';
  }
  return out;
}

std::string curve_csv(const dnaood::CurvePoints& curve) {
  std::string out = "rank,tpr,fpr,precision,recall\n";
  for (const auto& pt : curve) {
    out += std::to_string(pt.rank) + "," + format_double(pt.tpr) + "," + format_double(pt.fpr) +
           "," + format_double(pt.precision) + "," + format_double(pt.recall) + "\n";
  }
  return out;
}

std::string ranking_csv(const dnaood::RankedList& ranked) {
  std::string out = "rank,image_id,specimen_id,true_class,predicted_class,score,is_outlier\n";
  for (std::size_t i = 0; i < ranked.entries.size(); ++i) {
    const auto& entry = ranked.entries[i];
    out += std::to_string(i + 1) + "," + entry.record.image_id + "," + entry.record.specimen_id +
           "," + entry.record.true_class + "," + entry.record.predicted_class + "," +
           format_double(entry.record.score) + "," + (entry.is_outlier ? "1" : "0") + "\n";
  }
  return out;
}

json report_json(const dnaood::MetricReport& report) {
  json j;
  j["auroc"] = report.auroc;
  j["auprc"] = report.auprc;
  j["fpr_at_95tpr"] = report.fpr_at_95tpr;
  j["n_outliers"] = report.n_outliers;
  j["n_inliers"] = report.n_inliers;
  return j;
}

std::string report_table(const dnaood::ExperimentConfig& config,
                         const dnaood::MetricReport& report) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "outlier        %s\n"
                "score          %s\n"
                "order          %s\n"
                "auroc          %.6f\n"
                "auprc          %.6f\n"
                "fpr_at_95tpr   %.6f\n"
                "n_outliers     %zu\n"
                "n_inliers      %zu\n",
                config.outlier_taxon.c_str(), std::string(to_string(config.ood_method)).c_str(),
                std::string(to_string(config.reordering)).c_str(), report.auroc, report.auprc,
                report.fpr_at_95tpr, report.n_outliers, report.n_inliers);
  return buf;
}

struct EvaluateOptions {
  std::string logits;
  std::string classes;
  std::string fasta;
  std::string outlier;
  std::string score = "entropy";
  std::string distance = "k80";
  std::string order = "dna-quantile";
  double q = 0.4;
  std::string bottom_block = "dna";
  std::string report_path = "-";
  std::string report_format = "json";
  std::string curve_path;
  std::string ranking_path;
};

void add_pipeline_inputs(CLI::App* cmd, EvaluateOptions& opt) {
  cmd->add_option("--logits", opt.logits, "Logit table CSV")->required();
  cmd->add_option("--classes", opt.classes, "Class map CSV fixing logit column order")->required();
  cmd->add_option("--fasta", opt.fasta, "Aligned barcode FASTA covering all classes")->required();
  cmd->add_option("--outlier", opt.outlier, "Designated outlier taxon (unseen by the model)")
      ->required();
  cmd->add_option("--score", opt.score,
                  "OOD scoring method: msp, maxlogit, energy, entropy, ratio-logit, ratio-softmax")
      ->capture_default_str();
  cmd->add_option("--distance", opt.distance, "DNA distance: k80 or raw")->capture_default_str();
  cmd->add_option("--bottom-block", opt.bottom_block,
                  "Ordering of the bottom (1-q) block: dna or baseline")
      ->capture_default_str();
}

dnaood::ExperimentConfig to_config(const EvaluateOptions& opt) {
  dnaood::ExperimentConfig config;
  config.outlier_taxon = opt.outlier;
  config.ood_method = dnaood::parse_ood_method(opt.score);
  config.distance_method = dnaood::parse_distance_method(opt.distance);
  config.reordering = dnaood::parse_reordering(opt.order);
  config.q = opt.q;
  if (opt.bottom_block == "dna") {
    config.bottom_block = dnaood::BottomBlockOrder::Dna;
  } else if (opt.bottom_block == "baseline") {
    config.bottom_block = dnaood::BottomBlockOrder::Baseline;
  } else {
    throw dnaood::ValidationError("unknown bottom-block order '" + opt.bottom_block +
                                  "' (expected dna or baseline)");
  }
  return config;
}

int run_distances(const std::string& fasta, const std::string& method, const std::string& out) {
  const dnaood::Alignment alignment = dnaood::read_fasta_file(fasta);
  const dnaood::TaxonDistanceMatrix matrix =
      dnaood::distance_matrix(alignment, dnaood::parse_distance_method(method));
  emit(out, distance_matrix_csv(matrix));
  return 0;
}

int run_evaluate(const EvaluateOptions& opt) {
  const dnaood::LogitTable table = dnaood::load_logit_table(opt.logits, opt.classes);
  const dnaood::Alignment alignment = dnaood::read_fasta_file(opt.fasta);
  const dnaood::ExperimentConfig config = to_config(opt);
  const dnaood::ExperimentResult result = dnaood::run_experiment(table, alignment, config);

  for (const auto& warning : result.warnings) std::cerr << "warning: " << warning << "\n";

  if (opt.report_format == "table") {
    emit(opt.report_path, report_table(config, result.report));
  } else if (opt.report_format == "json") {
    json j;
    j["config"] = {{"outlier", config.outlier_taxon},
                   {"score", std::string(to_string(config.ood_method))},
                   {"distance", std::string(to_string(config.distance_method))},
                   {"order", std::string(to_string(config.reordering))}};
    if (config.reordering == dnaood::Reordering::DnaQuantile) {
      j["config"]["q"] = config.q;
      j["config"]["bottom_block"] =
          config.bottom_block == dnaood::BottomBlockOrder::Dna ? "dna" : "baseline";
    }
    j.update(report_json(result.report));
    emit(opt.report_path, j.dump(2) + "\n");
  } else {
    throw dnaood::ValidationError("unknown report format '" + opt.report_format +
                                  "' (expected json or table)");
  }

  if (!opt.curve_path.empty()) emit(opt.curve_path, curve_csv(result.curve));
  if (!opt.ranking_path.empty()) emit(opt.ranking_path, ranking_csv(result.ranked));
  return 0;
}

int run_sweep(const EvaluateOptions& opt, const std::vector<double>& grid,
              const std::string& out) {
  const dnaood::LogitTable table = dnaood::load_logit_table(opt.logits, opt.classes);
  const dnaood::Alignment alignment = dnaood::read_fasta_file(opt.fasta);
  dnaood::ExperimentConfig config = to_config(opt);
  config.reordering = dnaood::Reordering::DnaQuantile;

  const std::vector<double> q_grid = grid.empty() ? dnaood::default_q_grid() : grid;
  const std::vector<dnaood::SweepPoint> points = dnaood::sweep_q(table, alignment, config, q_grid);

  std::string csv = "q,auroc,auprc,fpr_at_95tpr\n";
  for (const auto& point : points) {
    csv += format_double(point.q) + "," + format_double(point.report.auroc) + "," +
           format_double(point.report.auprc) + "," + format_double(point.report.fpr_at_95tpr) +
           "\n";
  }
  emit(out, csv);
  return 0;
}

int run_correlate(const std::string& manifest_path, const std::string& fasta,
                  const std::string& distance, std::size_t permutations, std::uint64_t seed,
                  const std::string& report_path, const std::string& scatter_path) {
  const std::vector<std::string> lines = dnaood::read_lines(manifest_path);
  if (lines.empty()) throw dnaood::ValidationError(manifest_path + ": empty manifest");
  {
    const auto header = dnaood::split_csv_line(lines[0]);
    if (header != std::vector<std::string>{"outlier", "logits", "classes"}) {
      throw dnaood::ValidationError(
          manifest_path + ": malformed manifest header, expected 'outlier,logits,classes'");
    }
  }
  const std::filesystem::path base = std::filesystem::path(manifest_path).parent_path();
  const auto resolve = [&base](const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() ? path.string() : (base / path).string();
  };

  std::vector<dnaood::CorrelateInput> experiments;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty() || lines[i] == "\r") continue;
    const auto fields = dnaood::split_csv_line(lines[i]);
    if (fields.size() != 3) {
      throw dnaood::ValidationError(manifest_path + ": line " + std::to_string(i + 1) +
                                    ": expected 3 fields, got " + std::to_string(fields.size()));
    }
    dnaood::CorrelateInput input;
    input.outlier_taxon = fields[0];
    input.table = dnaood::load_logit_table(resolve(fields[1]), resolve(fields[2]));
    experiments.push_back(std::move(input));
  }
  if (experiments.empty()) throw dnaood::ValidationError(manifest_path + ": no experiments listed");

  const dnaood::Alignment alignment = dnaood::read_fasta_file(fasta);
  const dnaood::CorrelationResult result = dnaood::correlate_experiments(
      experiments, alignment, dnaood::parse_distance_method(distance), permutations, seed);

  json j;
  j["pearson_r"] = result.pearson_r;
  j["p_value"] = result.p_value;
  j["n_pairs"] = result.n_pairs;
  j["permutations"] = permutations;
  j["seed"] = seed;
  j["distance"] = distance;
  emit(report_path, j.dump(2) + "\n");

  if (!scatter_path.empty()) {
    std::string csv = "outlier,inlier,distance,proportion\n";
    for (const auto& point : result.points) {
      csv += point.outlier + "," + point.inlier + "," + format_double(point.distance) + "," +
             format_double(point.proportion) + "\n";
    }
    emit(scatter_path, csv);
  }
  return 0;
}

int run_synth(const dnaood::SynthConfig& config, const std::string& out_dir) {
  const dnaood::SynthWorld world = dnaood::synth_world(config);
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  dnaood::write_file((dir / "barcodes.fasta").string(), to_fasta(world.alignment));
  dnaood::write_file((dir / "logits.csv").string(), to_csv(world.table));
  dnaood::write_file((dir / "classes.csv").string(),
                     dnaood::class_map_to_csv(world.table.class_names));
  std::cout << "wrote " << (dir / "barcodes.fasta").string() << ", "
            << (dir / "logits.csv").string() << ", " << (dir / "classes.csv").string() << "\n"
            << "outlier taxon: " << world.outlier_taxon << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DNA-barcode-assisted out-of-distribution detection toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // lets --config appear after the subcommand too
  app.set_config("--config", "", "Read options from an ini-style key=value file");

  // distances
  std::string dist_fasta, dist_method = "k80", dist_out = "-";
  CLI::App* distances = app.add_subcommand("distances", "Pairwise DNA distance matrix as CSV");
  distances->add_option("--fasta", dist_fasta, "Aligned barcode FASTA")->required();
  distances->add_option("--method", dist_method, "Distance: k80 or raw")->capture_default_str();
  distances->add_option("--out", dist_out, "Output CSV path, or - for stdout")
      ->capture_default_str();

  // evaluate
  EvaluateOptions eval_opt;
  CLI::App* evaluate =
      app.add_subcommand("evaluate", "Score, re-order and evaluate one outlier experiment");
  add_pipeline_inputs(evaluate, eval_opt);
  evaluate->add_option("--order", eval_opt.order, "Ordering: baseline, dna or dna-quantile")
      ->capture_default_str();
  evaluate->add_option("--q", eval_opt.q, "Top-block fraction for dna-quantile")
      ->capture_default_str();
  evaluate->add_option("--report", eval_opt.report_path, "Report JSON path, or - for stdout")
      ->capture_default_str();
  evaluate->add_option("--report-format", eval_opt.report_format, "json or table (human-readable)")
      ->capture_default_str();
  evaluate->add_option("--curve", eval_opt.curve_path, "Optional curve-points CSV path");
  evaluate->add_option("--ranking", eval_opt.ranking_path, "Optional full ranking CSV path");

  // sweep-q
  EvaluateOptions sweep_opt;
  std::vector<double> sweep_grid;
  std::string sweep_out = "-";
  CLI::App* sweep = app.add_subcommand("sweep-q", "DNA quantile metrics over a grid of q values");
  add_pipeline_inputs(sweep, sweep_opt);
  sweep->add_option("--q-grid", sweep_grid, "Explicit q values (default: 0 to 1 in steps of 0.05)");
  sweep->add_option("--out", sweep_out, "Output CSV path, or - for stdout")->capture_default_str();

  // correlate
  std::string corr_manifest, corr_fasta, corr_distance = "k80";
  std::string corr_report = "-", corr_scatter;
  std::size_t corr_permutations = 10000;
  std::uint64_t corr_seed = 42;
  CLI::App* correlate = app.add_subcommand(
      "correlate", "Pearson correlation between DNA distance and prediction proportions");
  correlate
      ->add_option("--experiments", corr_manifest,
                   "Manifest CSV with header outlier,logits,classes (paths relative to it)")
      ->required();
  correlate->add_option("--fasta", corr_fasta, "Aligned barcode FASTA")->required();
  correlate->add_option("--distance", corr_distance, "Distance: k80 or raw")
      ->capture_default_str();
  correlate->add_option("--permutations", corr_permutations, "Permutation-test resamples")
      ->capture_default_str();
  correlate->add_option("--seed", corr_seed, "Permutation-test seed")->capture_default_str();
  correlate->add_option("--report", corr_report, "Report JSON path, or - for stdout")
      ->capture_default_str();
  correlate->add_option("--scatter", corr_scatter, "Optional scatter CSV path");

  // synth
  dnaood::SynthConfig synth_config;
  std::string synth_dir;
  CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic barcode + logit world");
  synth->add_option("--out-dir", synth_dir, "Directory for barcodes.fasta, logits.csv, classes.csv")
      ->required();
  synth->add_option("--classes", synth_config.n_classes, "Total taxa including the outlier")
      ->capture_default_str();
  synth->add_option("--images-per-class", synth_config.images_per_class, "Images per taxon")
      ->capture_default_str();
  synth->add_option("--outlier-index", synth_config.outlier_index, "Which taxon is the outlier")
      ->capture_default_str();
  synth->add_option("--coupling", synth_config.coupling,
                    "DNA-proximity coupling of outlier misclassification, 0..1")
      ->capture_default_str();
  synth->add_option("--noise", synth_config.logit_noise, "Logit noise standard deviation")
      ->capture_default_str();
  synth->add_option("--barcode-length", synth_config.barcode_length, "Alignment length")
      ->capture_default_str();
  synth->add_option("--seed", synth_config.seed, "World seed")->capture_default_str();

  try {
    app.parse(argc, argv);
    if (distances->parsed()) return run_distances(dist_fasta, dist_method, dist_out);
    if (evaluate->parsed()) return run_evaluate(eval_opt);
    if (sweep->parsed()) return run_sweep(sweep_opt, sweep_grid, sweep_out);
    if (correlate->parsed()) {
      return run_correlate(corr_manifest, corr_fasta, corr_distance, corr_permutations, corr_seed,
                           corr_report, corr_scatter);
    }
    if (synth->parsed()) return run_synth(synth_config, synth_dir);
    return 1;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const dnaood::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const dnaood::ComputationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
