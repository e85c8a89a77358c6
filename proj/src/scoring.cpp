#include "dnaood/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "dnaood/errors.hpp"

namespace dnaood {

namespace {

void require_logit_vector(std::span<const double> logits) {
  if (logits.size() < 2) {
    throw ValidationError("logit vector must have at least 2 classes, got " +
                          std::to_string(logits.size()));
  }
  for (double v : logits) {
    if (!std::isfinite(v)) throw ValidationError("logit vector contains a non-finite entry");
  }
}

double max_of(std::span<const double> v) { return *std::max_element(v.begin(), v.end()); }

// Highest and second-highest values (equal when the maximum is duplicated).
std::pair<double, double> top_two(std::span<const double> v) {
  double hi = -std::numeric_limits<double>::infinity();
  double second = hi;
  for (double x : v) {
    if (x > hi) {
      second = hi;
      hi = x;
    } else if (x > second) {
      second = x;
    }
  }
  return {hi, second};
}

double log_sum_exp(std::span<const double> v) {
  const double m = max_of(v);
  double sum = 0.0;
  for (double x : v) sum += std::exp(x - m);
  return m + std::log(sum);
}

}  // namespace

OodMethod parse_ood_method(std::string_view name) {
  if (name == "msp") return OodMethod::Msp;
  if (name == "maxlogit") return OodMethod::MaxLogit;
  if (name == "energy") return OodMethod::Energy;
  if (name == "entropy") return OodMethod::Entropy;
  if (name == "ratio-logit") return OodMethod::RatioLogit;
  if (name == "ratio-softmax") return OodMethod::RatioSoftmax;
  throw ValidationError("unknown OOD scoring method '" + std::string(name) +
                        "' (expected msp, maxlogit, energy, entropy, ratio-logit or ratio-softmax)");
}

std::string_view to_string(OodMethod method) {
  switch (method) {
    case OodMethod::Msp: return "msp";
    case OodMethod::MaxLogit: return "maxlogit";
    case OodMethod::Energy: return "energy";
    case OodMethod::Entropy: return "entropy";
    case OodMethod::RatioLogit: return "ratio-logit";
    case OodMethod::RatioSoftmax: return "ratio-softmax";
  }
  return "?";
}

std::vector<double> softmax(std::span<const double> logits) {
  require_logit_vector(logits);
  const double m = max_of(logits);
  std::vector<double> p(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    p[i] = std::exp(logits[i] - m);
    sum += p[i];
  }
  for (double& v : p) v /= sum;
  return p;
}

std::size_t predict(std::span<const double> logits) {
  require_logit_vector(logits);
  return static_cast<std::size_t>(
      std::max_element(logits.begin(), logits.end()) - logits.begin());
}

double ood_score(OodMethod method, std::span<const double> logits) {
  require_logit_vector(logits);
  switch (method) {
    case OodMethod::Msp: {
      return -max_of(softmax(logits));
    }
    case OodMethod::MaxLogit: {
      return -max_of(logits);
    }
    case OodMethod::Energy: {
      return -log_sum_exp(logits);
    }
    case OodMethod::Entropy: {
      const std::vector<double> p = softmax(logits);
      double h = 0.0;
      for (double v : p) {
        if (v > 0.0) h -= v * std::log(v);
      }
      return h;
    }
    case OodMethod::RatioLogit: {
      const auto [hi, second] = top_two(logits);
      return second / hi;
    }
    case OodMethod::RatioSoftmax: {
      const std::vector<double> p = softmax(logits);
      const auto [hi, second] = top_two(p);
      return second / hi;
    }
  }
  throw ValidationError("unreachable OOD method");
}

bool ratio_logit_orientation_flips(std::span<const double> logits) {
  require_logit_vector(logits);
  return max_of(logits) <= 0.0;
}

}  // namespace dnaood
