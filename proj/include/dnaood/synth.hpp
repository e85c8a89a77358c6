#pragma once

#include <cstdint>
#include <string>

#include "dnaood/logit_table.hpp"
#include "dnaood/seqio.hpp"

namespace dnaood {

// Configuration for the synthetic test-world generator. One world holds
// n_classes taxa with barcodes plus a logit table in which one taxon is the
// designated (unseen) outlier. `coupling` in [0, 1] controls how strongly
// outlier images are misclassified into DNA-proximate inlier classes:
// 0 = uniform, 1 = full exponential-decay coupling.
struct SynthConfig {
  std::size_t n_classes = 39;
  std::size_t images_per_class = 50;
  std::size_t outlier_index = 0;
  double coupling = 1.0;
  double logit_noise = 1.0;
  std::size_t barcode_length = 600;
  std::uint64_t seed = 0;
};

void validate(const SynthConfig& config);

std::string synth_taxon_name(const SynthConfig& config, std::size_t index);

// Barcodes from a two-level phylogeny: lineage ancestors diverge far from a
// shared root, sister leaves diverge a little from their lineage ancestor.
// Pairwise distances therefore vary from near-zero (sisters) to ~0.4
// substitutions/site (cross-lineage), with no K80 saturation.
Alignment synth_barcodes(const SynthConfig& config);

// Logit rows for every image of every class against an existing alignment
// (normally the one from synth_barcodes, but any alignment covering the
// taxon names works, which lets several seeds share one barcode set).
// Inlier images peak at their true class; outlier images peak at an inlier
// class sampled with probability proportional to
// exp(-coupling * beta * dna_distance), beta calibrated so the nearest and
// farthest inliers differ by 10x odds at coupling = 1.
LogitTable synth_logit_table(const Alignment& alignment, const SynthConfig& config);

struct SynthWorld {
  Alignment alignment;
  LogitTable table;
  std::string outlier_taxon;
};

SynthWorld synth_world(const SynthConfig& config);

}  // namespace dnaood
