#pragma once

#include <cstdint>
#include <vector>

#include "preattack/network.hpp"
#include "preattack/types.hpp"

namespace preattack {

// Attachment smoothing weights. Either a single scalar (plain kCDPA) or a
// label-dependent tensor: send(l_u, l_v) weights a new user of class l_u
// requesting a preexisting user labeled l_v; recv(l_v, l_u) weights a
// preexisting user labeled l_v requesting a new user of class l_u. For k = 2
// the tensor carries the full set of 8 values.
class AlphaSpec {
 public:
  static AlphaSpec scalar(double a);
  // send and recv are row-major k*k: send[l_u * k + l_v], recv[l_v * k + l_u].
  static AlphaSpec tensor(std::uint32_t k, std::vector<double> send,
                          std::vector<double> recv);

  bool is_scalar() const { return is_scalar_; }
  double scalar_value() const;

  // 0 for scalar specs (they apply to any class count).
  std::uint32_t k() const { return k_; }

  double send(ClassIndex new_class, ClassIndex pre_class) const {
    return is_scalar_ ? scalar_ : send_[new_class * k_ + pre_class];
  }
  double recv(ClassIndex pre_class, ClassIndex new_class) const {
    return is_scalar_ ? scalar_ : recv_[pre_class * k_ + new_class];
  }

  // Sum over all v in V of the alpha weight seen by a new user of class c:
  // the alpha part of every attachment denominator. Always accumulated per
  // label so the scalar case and an all-equal tensor agree bit for bit.
  double send_total(const LabeledNetwork& net, ClassIndex c) const;
  double recv_total(const LabeledNetwork& net, ClassIndex c) const;

  // Rejects negative entries and (for tensors) a class-count mismatch.
  void validate(std::uint32_t k) const;

 private:
  AlphaSpec() = default;

  bool is_scalar_ = true;
  double scalar_ = 1.0;
  std::uint32_t k_ = 0;
  std::vector<double> send_;
  std::vector<double> recv_;
};

}  // namespace preattack
