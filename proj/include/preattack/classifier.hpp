#pragma once

#include <span>
#include <vector>

#include "preattack/pa_table.hpp"
#include "preattack/types.hpp"

namespace preattack {

enum class ClassifyMode { Full, SendOnly };

struct PosteriorReport {
  UserId user = 0;
  std::vector<double> posterior;  // k entries, sums to 1
  std::vector<double> log_joint;  // per-class log evidence of u's edges
  std::uint64_t edge_count_send = 0;
  std::uint64_t edge_count_recv = 0;

  double posterior_fake() const { return posterior[kFakeClass]; }
};

// One pass over the stream: log_joint[c] accumulates log_send over the user's
// Send events (plus log_recv over Receive events unless SendOnly), and the
// posterior is the max-shifted softmax of log_joint[c] + log pi[c]. A user
// with no counted events gets the prior verbatim. Reports come back sorted by
// user id. threads > 1 shards users across OpenMP workers; per-user sums are
// accumulated in event order either way, so output is bit-identical for any
// thread count.
std::vector<PosteriorReport> classify(const PATable& table,
                                      std::span<const EdgeEvent> events,
                                      const Prior& prior,
                                      ClassifyMode mode = ClassifyMode::Full,
                                      int threads = 1);

// k-class entry point; same engine. For k = 2 the output matches classify().
std::vector<PosteriorReport> classify_multiclass(const PATable& table,
                                                 std::span<const EdgeEvent> events,
                                                 const Prior& prior,
                                                 int threads = 1);

struct PrefixReport {
  std::uint64_t checkpoint = 0;
  PosteriorReport report;
};

// Posterior snapshots after each user's first x counted events, for every x
// in checkpoints (strictly ascending; 0 means the bare prior). Users with
// fewer events than a checkpoint saturate at their full report. Computed
// incrementally in the same single pass as classify; results equal a
// from-scratch run on each truncated per-user substream exactly. Sorted by
// (user id, checkpoint).
std::vector<PrefixReport> classify_prefixes(const PATable& table,
                                            std::span<const EdgeEvent> events,
                                            const Prior& prior,
                                            std::span<const std::uint64_t> checkpoints,
                                            ClassifyMode mode = ClassifyMode::Full,
                                            int threads = 1);

}  // namespace preattack
