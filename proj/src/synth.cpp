#include "dnaood/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dnaood/distance.hpp"
#include "dnaood/errors.hpp"
#include "dnaood/rng.hpp"

namespace dnaood {

namespace {

constexpr char kBases[] = {'A', 'C', 'G', 'T'};

// Phylogeny shape: deep lineages far from the root, sister tips close.
constexpr double kLineageDivergenceMin = 0.10;
constexpr double kLineageDivergenceMax = 0.22;
constexpr double kTipDivergence = 0.004;

// Nearest/farthest inlier odds ratio at coupling = 1.
constexpr double kNearFarOddsRatio = 10.0;

// Confidence-gap mixture. Low-gap images score as outlier-ish under every
// OOD method; inliers land in the high-confidence component more often.
constexpr double kHighConfidenceProbInlier = 0.60;
constexpr double kHighConfidenceProbOutlier = 0.25;
constexpr double kGapLowMin = 0.6, kGapLowMax = 2.6;
constexpr double kGapHighMin = 2.6, kGapHighMax = 4.6;

std::string random_sequence(Rng& rng, std::size_t length) {
  std::string seq(length, 'A');
  for (char& c : seq) c = kBases[rng.uniform_index(4)];
  return seq;
}

// Per-site substitution with probability `rate`; the new base is one of the
// three others, uniformly.
std::string mutate(Rng& rng, const std::string& seq, double rate) {
  std::string out = seq;
  for (char& c : out) {
    if (rng.uniform() >= rate) continue;
    const char* base = std::find(kBases, kBases + 4, c);
    std::size_t pick = rng.uniform_index(3);
    const std::size_t keep = static_cast<std::size_t>(base - kBases);
    if (pick >= keep) ++pick;
    c = kBases[pick];
  }
  return out;
}

std::size_t digits(std::size_t n) {
  std::size_t d = 1;
  while (n >= 10) {
    n /= 10;
    ++d;
  }
  return d;
}

std::string zero_padded(std::size_t value, std::size_t width) {
  std::string s = std::to_string(value);
  return std::string(width > s.size() ? width - s.size() : 0, '0') + s;
}

}  // namespace

void validate(const SynthConfig& config) {
  if (config.n_classes < 3) {
    throw ValidationError("synth needs at least 3 classes (2 inliers + 1 outlier), got " +
                          std::to_string(config.n_classes));
  }
  if (config.images_per_class == 0) throw ValidationError("images_per_class must be positive");
  if (config.outlier_index >= config.n_classes) {
    throw ValidationError("outlier index " + std::to_string(config.outlier_index) +
                          " out of range for " + std::to_string(config.n_classes) + " classes");
  }
  if (!(config.coupling >= 0.0 && config.coupling <= 1.0)) {
    throw ValidationError("coupling must be in [0, 1]");
  }
  if (!(config.logit_noise > 0.0)) throw ValidationError("logit_noise must be positive");
  if (config.barcode_length == 0) throw ValidationError("barcode_length must be positive");
}

std::string synth_taxon_name(const SynthConfig& config, std::size_t index) {
  const std::size_t width = std::max<std::size_t>(2, digits(config.n_classes - 1));
  return "taxon_" + zero_padded(index, width);
}

Alignment synth_barcodes(const SynthConfig& config) {
  validate(config);
  Rng rng(splitmix64(config.seed) + 1);

  const std::string root = random_sequence(rng, config.barcode_length);
  Alignment alignment;
  alignment.sequences.reserve(config.n_classes);

  const std::size_t n_lineages = (config.n_classes + 1) / 2;
  for (std::size_t k = 0; k < n_lineages; ++k) {
    const double divergence = rng.uniform(kLineageDivergenceMin, kLineageDivergenceMax);
    const std::string ancestor = mutate(rng, root, divergence);
    for (std::size_t leaf = 2 * k; leaf < std::min(2 * k + 2, config.n_classes); ++leaf) {
      alignment.sequences.push_back(
          {synth_taxon_name(config, leaf), "", mutate(rng, ancestor, kTipDivergence)});
    }
  }
  return alignment;
}

LogitTable synth_logit_table(const Alignment& alignment, const SynthConfig& config) {
  validate(config);
  const std::string outlier_taxon = synth_taxon_name(config, config.outlier_index);

  LogitTable table;
  for (std::size_t c = 0; c < config.n_classes; ++c) {
    if (c == config.outlier_index) continue;
    table.class_names.push_back(synth_taxon_name(config, c));
  }
  const std::size_t n_inliers = table.class_names.size();

  // DNA-proximity sampling weights for outlier predictions.
  std::vector<std::string> taxa = table.class_names;
  taxa.push_back(outlier_taxon);
  const TaxonDistanceMatrix matrix =
      distance_matrix(filter_taxa(alignment, taxa), DistanceMethod::K80);
  const std::size_t outlier_idx = matrix.index_of(outlier_taxon);

  std::vector<double> inlier_distances(n_inliers);
  double d_min = std::numeric_limits<double>::infinity();
  double d_max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n_inliers; ++i) {
    const double d = matrix.at(outlier_idx, matrix.index_of(table.class_names[i]));
    inlier_distances[i] = d;
    if (std::isfinite(d)) {
      d_min = std::min(d_min, d);
      d_max = std::max(d_max, d);
    }
  }
  if (!std::isfinite(d_min)) {
    throw ComputationError("all inlier distances to the outlier are saturated");
  }
  const double beta = d_max > d_min ? std::log(kNearFarOddsRatio) / (d_max - d_min) : 0.0;

  std::vector<double> weights(n_inliers);
  for (std::size_t i = 0; i < n_inliers; ++i) {
    weights[i] = std::isfinite(inlier_distances[i])
                     ? std::exp(-config.coupling * beta * (inlier_distances[i] - d_min))
                     : 0.0;
  }

  Rng rng(splitmix64(config.seed) + 2);
  const std::size_t id_width = digits(config.n_classes * config.images_per_class - 1);
  std::size_t image_counter = 0;

  for (std::size_t c = 0; c < config.n_classes; ++c) {
    const bool is_outlier_class = c == config.outlier_index;
    const std::string true_class = synth_taxon_name(config, c);
    for (std::size_t j = 0; j < config.images_per_class; ++j) {
      // Target column the logits peak at.
      std::size_t target;
      if (is_outlier_class) {
        target = rng.sample_weighted(weights);
      } else {
        target = c < config.outlier_index ? c : c - 1;  // own column
      }

      const double p_high =
          is_outlier_class ? kHighConfidenceProbOutlier : kHighConfidenceProbInlier;
      const bool high = rng.uniform() < p_high;
      const double gap = high ? rng.uniform(kGapHighMin, kGapHighMax)
                              : rng.uniform(kGapLowMin, kGapLowMax);

      LogitRow row;
      row.image_id = "img" + zero_padded(image_counter, id_width);
      row.specimen_id = "sp" + std::to_string(c) + "_" + std::to_string(j / 5);
      row.true_class = true_class;
      row.logits.resize(n_inliers);
      double max_other = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < n_inliers; ++i) {
        if (i == target) continue;
        row.logits[i] = rng.normal(0.0, config.logit_noise);
        max_other = std::max(max_other, row.logits[i]);
      }
      row.logits[target] = max_other + gap;
      table.rows.push_back(std::move(row));
      ++image_counter;
    }
  }
  return table;
}

SynthWorld synth_world(const SynthConfig& config) {
  SynthWorld world;
  world.alignment = synth_barcodes(config);
  world.table = synth_logit_table(world.alignment, config);
  world.outlier_taxon = synth_taxon_name(config, config.outlier_index);
  return world;
}

}  // namespace dnaood
