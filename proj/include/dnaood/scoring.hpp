#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dnaood {

// The six per-image OOD scoring functions. All of them are normalized to the
// same convention: a higher score means the image is more likely an outlier.
enum class OodMethod { Msp, MaxLogit, Energy, Entropy, RatioLogit, RatioSoftmax };

inline constexpr OodMethod kAllOodMethods[] = {
    OodMethod::Msp,       OodMethod::MaxLogit,   OodMethod::Energy,
    OodMethod::Entropy,   OodMethod::RatioLogit, OodMethod::RatioSoftmax,
};

OodMethod parse_ood_method(std::string_view name);
std::string_view to_string(OodMethod method);

// Softmax with max-subtraction; output sums to 1 within 1e-9.
// Requires C >= 2 and finite entries.
std::vector<double> softmax(std::span<const double> logits);

// Argmax of the logits; ties break toward the lowest index.
std::size_t predict(std::span<const double> logits);

// Canonical OOD score (higher = more likely outlier):
//   msp           -max(softmax(s))
//   maxlogit      -max(s)
//   energy        -log(sum_i exp(s_i)), via shift-stable log-sum-exp
//   entropy       -sum_i p_i ln p_i over the softmax, with 0 ln 0 := 0
//   ratio-logit   max2(s) / max(s)
//   ratio-softmax max2(p) / max(p)
double ood_score(OodMethod method, std::span<const double> logits);

// The ratio-logit score is orientation-dependent: when max(s) <= 0 the
// second-highest/highest ratio flips direction. Callers surface this as a
// diagnostic warning.
bool ratio_logit_orientation_flips(std::span<const double> logits);

}  // namespace dnaood
