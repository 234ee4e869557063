#pragma once

#include <span>
#include <unordered_map>
#include <vector>

#include "preattack/alpha.hpp"
#include "preattack/network.hpp"
#include "preattack/types.hpp"

namespace preattack {

struct ExactPosterior {
  UserId user = 0;
  std::vector<double> p_star;  // k entries, sums to 1
  std::uint64_t enumerated_combinations = 0;
};

// Log probability of the observed recipient/sender draws given every new
// user's label, replaying the stream in seq order with running E_{i-1}
// counts. Each conditional is the drawn weight over the sum of weights across
// all of V, so summing exp() over every possible draw sequence of a fixed
// schedule yields 1. The (user, direction) activity draws are
// label-independent constants that cancel in every posterior and are omitted;
// a label-dependent activity extension would have to put them back.
// Returns -inf for a draw that is impossible under the given labels (alpha 0
// and no matching count).
double sequence_log_prob(const LabeledNetwork& net,
                         std::span<const EdgeEvent> events,
                         const std::unordered_map<UserId, ClassIndex>& labels,
                         const AlphaSpec& alpha);

// Exact posterior for target by brute force: a weighted sum over all label
// assignments of the other new users in the stream, k^(m-1) replays per
// class, accumulated by streaming log-sum-exp in lexicographic assignment
// order. max_new_users caps the exponential blowup (default 12: 4096 replays
// at k = 2). threads > 1 parallelizes replays; the reduction always runs in
// fixed index order, so results do not depend on the thread count.
ExactPosterior exact_posterior(const LabeledNetwork& net,
                               std::span<const EdgeEvent> events,
                               const Prior& prior, UserId target,
                               const AlphaSpec& alpha,
                               std::uint32_t max_new_users = 12,
                               int threads = 1);

// Conditioned variant: other new users' labels are given rather than
// marginalized, one replay per class of target.
ExactPosterior exact_posterior_conditioned(
    const LabeledNetwork& net, std::span<const EdgeEvent> events,
    const Prior& prior, UserId target,
    const std::unordered_map<UserId, ClassIndex>& other_labels,
    const AlphaSpec& alpha);

}  // namespace preattack
