#pragma once

#include <span>
#include <utility>
#include <vector>

#include "preattack/alpha.hpp"
#include "preattack/network.hpp"
#include "preattack/rng.hpp"
#include "preattack/types.hpp"

namespace preattack {

// Who acts next. Proportional mode draws (new user, direction) with
// probability weight / total over all 2m weights; schedule mode replays an
// explicit event list, which keeps oracle tests exact.
struct ActivityDistribution {
  std::vector<double> weight_send;  // one entry per new user
  std::vector<double> weight_recv;
  std::vector<std::pair<std::uint32_t, Direction>> schedule;

  static ActivityDistribution uniform(std::uint32_t m);
  bool fixed_schedule() const { return !schedule.empty(); }
};

struct SimConfig {
  Prior prior = Prior::binary(0.5);
  AlphaSpec alpha = AlphaSpec::scalar(1.0);
  ActivityDistribution activity;
  std::uint64_t n_events = 0;
  std::uint64_t rng_seed = 0;
  std::uint32_t new_user_count = 1;
  UserId new_id_base = 0;  // new user i carries id new_id_base + i
};

// One label per new user, i.i.d. from the prior. Uses the seed substream
// derive_seed(rng_seed, 0) so labels and edges stay independent draws.
std::vector<ClassIndex> sample_labels(const SimConfig& config);

// The kCDPA process: at each step draw (u, direction) from the activity
// distribution, then the preexisting partner with probability proportional to
// alpha + the running count of matching edges (E0 plus all earlier new
// edges). Never emits a new<->new edge. Deterministic given the seed; uses
// substream derive_seed(rng_seed, 1).
std::vector<EdgeEvent> sample_stream(const LabeledNetwork& net,
                                     std::span<const ClassIndex> labels,
                                     const SimConfig& config);

// The partner draw kernel. Ball lists make each draw O(1): the count part is
// a uniform pick from the multiset of past partners, the alpha part a uniform
// pick within a label bucket weighted by the tensor entry. record() folds a
// drawn edge into the running counts. Exposed so tests can check the exact
// draw weights and next-draw frequencies directly.
class RecipientSampler {
 public:
  RecipientSampler(const LabeledNetwork& net, const AlphaSpec& alpha);

  // Throws DomainError when every weight is zero (alpha 0 and no counts).
  UserId draw(ClassIndex new_user_class, Direction d, SplitMix64& rng) const;
  void record(UserId partner, ClassIndex new_user_class, Direction d);

  double weight(UserId partner, ClassIndex new_user_class, Direction d) const;
  double total_weight(ClassIndex new_user_class, Direction d) const;

 private:
  std::size_t list_index(ClassIndex c, Direction d) const;

  const LabeledNetwork& net_;
  AlphaSpec alpha_;
  std::vector<std::vector<std::uint32_t>> label_members_;  // per label, V indices
  std::vector<std::vector<std::uint32_t>> balls_;          // per (c, d), partner indices
  std::vector<std::vector<std::uint32_t>> extra_;          // per (c, d), new-edge counts by V index
  std::vector<double> alpha_total_;                        // per (c, d)
};

}  // namespace preattack
