#pragma once

// Shared fixtures: the 4-user/3-edge desk instance exercised throughout the
// hand-value tests, plus a seeded random-instance generator for the
// oracle-agreement and bound-sandwich suites.

#include <vector>

#include "preattack/network.hpp"
#include "preattack/rng.hpp"
#include "preattack/types.hpp"

namespace testutil {

using namespace preattack;

// Users a=0, b=1, c=2 real, f=3 fake; edges f->a, b->a, c->b. Hand counts:
// recv_from(a) = {R:1, F:1}, recv_from(b) = {R:1, F:0},
// total_sent_by = {R:2, F:1}, total_recv_by = {R:3, F:0}.
inline constexpr UserId kA = 0, kB = 1, kC = 2, kF = 3;

inline LabeledNetwork make_t1() {
  LabeledNetwork net(2);
  net.add_user(kA, kRealClass);
  net.add_user(kB, kRealClass);
  net.add_user(kC, kRealClass);
  net.add_user(kF, kFakeClass);
  net.add_edge(kF, kA);
  net.add_edge(kB, kA);
  net.add_edge(kC, kB);
  return net;
}

inline constexpr UserId kNewBase = 100;

inline EdgeEvent event(std::uint64_t seq, UserId new_user, UserId partner,
                       Direction d) {
  return EdgeEvent{seq, new_user, partner, d};
}

struct RandomInstance {
  LabeledNetwork net{2};
  std::vector<EdgeEvent> events;
  std::vector<UserId> new_users;  // ids drawn from kNewBase upward
  double alpha = 1.0;
  double pi_fake = 0.5;
};

struct InstanceKnobs {
  std::uint64_t max_v = 20;
  std::uint64_t max_new_users = 4;
  std::uint64_t max_events = 10;
  std::uint64_t min_events = 0;
};

inline RandomInstance make_random_instance(SplitMix64& rng,
                                           const InstanceKnobs& knobs = {}) {
  RandomInstance inst;
  const std::uint64_t v = 2 + rng.next_below(knobs.max_v - 1);
  for (UserId id = 0; id < v; ++id) {
    inst.net.add_user(id, rng.next_unit() < 0.5 ? kRealClass : kFakeClass);
  }
  const std::uint64_t e0 = rng.next_below(3 * v + 1);
  for (std::uint64_t i = 0; i < e0; ++i) {
    inst.net.add_edge(rng.next_below(v), rng.next_below(v));
  }

  const std::uint64_t m = 1 + rng.next_below(knobs.max_new_users);
  for (std::uint64_t i = 0; i < m; ++i) inst.new_users.push_back(kNewBase + i);

  const std::uint64_t n_events =
      knobs.min_events +
      rng.next_below(knobs.max_events - knobs.min_events + 1);
  for (std::uint64_t i = 0; i < n_events; ++i) {
    inst.events.push_back(event(
        i + 1, inst.new_users[rng.next_below(m)], rng.next_below(v),
        rng.next_unit() < 0.5 ? Direction::Send : Direction::Receive));
  }

  const double alphas[] = {0.5, 1.0, 2.0};
  const double pis[] = {0.2, 0.5};
  inst.alpha = alphas[rng.next_below(3)];
  inst.pi_fake = pis[rng.next_below(2)];
  return inst;
}

}  // namespace testutil
