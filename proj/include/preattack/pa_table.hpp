#pragma once

#include <span>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "preattack/alpha.hpp"
#include "preattack/network.hpp"
#include "preattack/types.hpp"

namespace preattack {

// Frozen-E0 attachment probabilities, stored as natural logs:
//   log_send(v, c) = log[(alpha_send(c, l_v) + recv_from(v, c)) / send_denominator(c)]
//   log_recv(v, c) = log[(alpha_recv(l_v, c) + sent_to(v, c)) / recv_denominator(c)]
// with send_denominator(c) = sum_{v in V} alpha_send(c, l_v) + total_sent_by(c)
// and the receive-side analogue. Posteriors multiply up to hundreds of these
// factors, which underflows in linear space; linear values exist only on
// debug and audit paths. Entries are materialized lazily for the users a
// stream touches, and equal a full materialization restricted to that set.
class PATable {
 public:
  std::uint32_t k() const { return k_; }
  std::size_t touched_count() const { return ids_.size(); }
  bool has(UserId v) const { return slot_.count(v) != 0; }

  double log_send(UserId v, ClassIndex c) const { return log_send_[row(v) * k_ + c]; }
  double log_recv(UserId v, ClassIndex c) const { return log_recv_[row(v) * k_ + c]; }

  double send_denominator(ClassIndex c) const { return send_denom_[c]; }
  double recv_denominator(ClassIndex c) const { return recv_denom_[c]; }

  // Set when built from a scalar alpha; the bounds pass requires it.
  bool has_scalar_alpha() const { return has_scalar_alpha_; }
  double scalar_alpha() const;

  // Touched ids in ascending order, for dumps and audits.
  std::vector<UserId> touched_ids_sorted() const;

  double send_prob(UserId v, ClassIndex c) const;
  double recv_prob(UserId v, ClassIndex c) const;

 private:
  std::size_t row(UserId v) const;

  std::uint32_t k_ = 2;
  bool has_scalar_alpha_ = false;
  double scalar_alpha_ = 0.0;
  std::vector<UserId> ids_;
  std::unordered_map<UserId, std::size_t> slot_;
  std::vector<double> log_send_;
  std::vector<double> log_recv_;
  std::vector<double> send_denom_;
  std::vector<double> recv_denom_;

  friend PATable build_plusplus_table(const LabeledNetwork&, const AlphaSpec&,
                                      const std::unordered_set<UserId>&);
};

// Preexisting users appearing in the stream; one preliminary scan, keeping
// the table build O(|E|) overall.
std::unordered_set<UserId> touched_users(std::span<const EdgeEvent> events);

// Scalar-alpha PreAttacK table. Equivalent to an all-equal tensor build and
// shares its code path, so the two agree exactly.
PATable build_preattack_table(const LabeledNetwork& net, double alpha,
                              const std::unordered_set<UserId>& touched);

// Label-dependent alpha (PreAttacK++). The denominator sums the tensor entry
// for every v in V plus the E0 class total.
PATable build_plusplus_table(const LabeledNetwork& net, const AlphaSpec& alpha,
                             const std::unordered_set<UserId>& touched);

// The Homophily benchmark: PreAttacK++ over the same V and labels with E0
// empty, so only class-level rates remain.
PATable build_homophily_table(const LabeledNetwork& net, const AlphaSpec& alpha,
                              const std::unordered_set<UserId>& touched);

}  // namespace preattack
