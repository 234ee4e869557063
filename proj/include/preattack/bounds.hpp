#pragma once

#include <span>
#include <vector>

#include "preattack/network.hpp"
#include "preattack/pa_table.hpp"
#include "preattack/types.hpp"

namespace preattack {

// Instance-specific worst-case factors bracketing the frozen-E0 posterior
// against the exact one: f_lower <= p_hat / p_exact <= f_upper. Each new edge
// before one of u's edges is re-attributed to a unique phantom user with an
// adversarial label: fake when it touches the same preexisting partner as u's
// edge and real otherwise for the lower bound, the reverse for the upper.
struct BoundReport {
  UserId user = 0;
  double p_hat = 0.0;
  double f_lower = 1.0;  // <= 1, equality iff no new edge precedes u's
  double f_upper = 1.0;  // >= 1, same equality case
  double p_wcf = 0.0;    // posterior under the fake-favoring phantom labels
  double p_wcr = 0.0;    // posterior under the real-favoring phantom labels
};

struct BoundOptions {
  // One appendix denominator carries a stray alpha inside its E0 sum,
  // inconsistent with the other seven formulas. The corrected reading drops
  // it (default); the literal reading stays inspectable behind this flag.
  bool literal_wcr_alpha = false;
};

// Runs in the same single pass as classification, with running per-partner
// new-edge counters; the counters are sequential state, so this pass is
// single-threaded per stream. Requires a binary scalar-alpha table. An empty
// targets span means every user in the stream. Reports sorted by user id.
std::vector<BoundReport> compute_bounds(const LabeledNetwork& net,
                                        const PATable& table,
                                        std::span<const EdgeEvent> events,
                                        const Prior& prior,
                                        std::span<const UserId> targets = {},
                                        const BoundOptions& options = {});

// Largest prefix length n such that every user's bounds computed on the first
// n events satisfy f_lower >= min_f_lower and f_upper <= max_f_upper: the
// batch size that keeps a desired worst-case approximation guarantee.
std::uint64_t max_batch_within_bounds(const LabeledNetwork& net,
                                      const PATable& table,
                                      std::span<const EdgeEvent> events,
                                      const Prior& prior,
                                      double min_f_lower,
                                      double max_f_upper,
                                      const BoundOptions& options = {});

}  // namespace preattack
