#include "preattack/types.hpp"

#include <cmath>

namespace preattack {

Prior::Prior(std::vector<double> pi) : pi_(std::move(pi)) {
  if (pi_.size() < 2) {
    throw DomainError("prior needs at least 2 classes, got " +
                      std::to_string(pi_.size()));
  }
  double sum = 0.0;
  for (double p : pi_) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw DomainError("prior entry outside [0,1]: " + std::to_string(p));
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw DomainError("prior entries sum to " + std::to_string(sum) +
                      ", expected 1");
  }
}

double Prior::p_fake() const {
  if (k() != 2) {
    throw DomainError("p_fake is a binary shorthand; prior has k=" +
                      std::to_string(k()));
  }
  return pi_[kFakeClass];
}

}  // namespace preattack
