#include "preattack/alpha.hpp"

#include <string>

namespace preattack {

AlphaSpec AlphaSpec::scalar(double a) {
  if (a < 0.0) throw DomainError("alpha must be nonnegative, got " + std::to_string(a));
  AlphaSpec spec;
  spec.is_scalar_ = true;
  spec.scalar_ = a;
  return spec;
}

AlphaSpec AlphaSpec::tensor(std::uint32_t k, std::vector<double> send,
                            std::vector<double> recv) {
  if (k < 2) throw DomainError("alpha tensor needs k >= 2");
  const std::size_t want = static_cast<std::size_t>(k) * k;
  if (send.size() != want || recv.size() != want) {
    throw DomainError("alpha tensor needs k*k send and recv entries (k=" +
                      std::to_string(k) + ")");
  }
  for (double v : send) {
    if (v < 0.0) throw DomainError("alpha tensor entry negative: " + std::to_string(v));
  }
  for (double v : recv) {
    if (v < 0.0) throw DomainError("alpha tensor entry negative: " + std::to_string(v));
  }
  AlphaSpec spec;
  spec.is_scalar_ = false;
  spec.k_ = k;
  spec.send_ = std::move(send);
  spec.recv_ = std::move(recv);
  return spec;
}

double AlphaSpec::scalar_value() const {
  if (!is_scalar_) throw DomainError("alpha spec is a tensor, not a scalar");
  return scalar_;
}

double AlphaSpec::send_total(const LabeledNetwork& net, ClassIndex c) const {
  double total = 0.0;
  for (ClassIndex l = 0; l < net.k(); ++l) {
    total += static_cast<double>(net.label_count(l)) * send(c, l);
  }
  return total;
}

double AlphaSpec::recv_total(const LabeledNetwork& net, ClassIndex c) const {
  double total = 0.0;
  for (ClassIndex l = 0; l < net.k(); ++l) {
    total += static_cast<double>(net.label_count(l)) * recv(l, c);
  }
  return total;
}

void AlphaSpec::validate(std::uint32_t k) const {
  if (!is_scalar_ && k_ != k) {
    throw DomainError("alpha tensor built for k=" + std::to_string(k_) +
                      " but instance has k=" + std::to_string(k));
  }
}

}  // namespace preattack
