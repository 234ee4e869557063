#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "preattack/types.hpp"

namespace preattack {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Streaming log(sum(exp(x_i))). Deterministic for a fixed visit order, which
// is what makes the parallel oracle reduction thread-count independent.
class LogSumExp {
 public:
  void add(double x) {
    if (x == kNegInf) return;
    if (x <= max_) {
      sum_ += std::exp(x - max_);
    } else {
      sum_ = sum_ * std::exp(max_ - x) + 1.0;
      max_ = x;
    }
  }

  double value() const {
    return max_ == kNegInf ? kNegInf : max_ + std::log(sum_);
  }

 private:
  double max_ = kNegInf;
  double sum_ = 0.0;
};

// Normalized probabilities from unnormalized log weights via max-shift.
// Entries at -inf come out exactly 0; an all(-inf) input has no normalization
// and is rejected.
inline std::vector<double> softmax_logs(std::span<const double> logs) {
  double m = kNegInf;
  for (double v : logs) m = std::max(m, v);
  if (m == kNegInf) {
    throw DomainError("posterior undefined: all class log-weights are -inf");
  }
  std::vector<double> out(logs.size());
  double z = 0.0;
  for (std::size_t i = 0; i < logs.size(); ++i) {
    out[i] = std::exp(logs[i] - m);
    z += out[i];
  }
  for (double& v : out) v /= z;
  return out;
}

}  // namespace preattack
