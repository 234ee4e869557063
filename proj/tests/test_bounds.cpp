#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "helpers.hpp"
#include "preattack/bounds.hpp"
#include "preattack/classifier.hpp"
#include "preattack/oracle.hpp"
#include "preattack/rng.hpp"

using namespace preattack;
using testutil::event;
using testutil::kA;
using testutil::kB;
using testutil::kNewBase;

namespace {

PATable table_for(const LabeledNetwork& net, double alpha,
                  std::span<const EdgeEvent> events) {
  return build_preattack_table(net, alpha, touched_users(events));
}

const BoundReport& report_for(const std::vector<BoundReport>& reports, UserId user) {
  for (const BoundReport& r : reports) {
    if (r.user == user) return r;
  }
  throw std::runtime_error("no bound report for user");
}

}  // namespace

TEST_CASE("single user, single edge: both factors are exactly 1") {
  LabeledNetwork net = testutil::make_t1();
  std::vector<EdgeEvent> events = {event(1, kNewBase, kA, Direction::Send)};
  PATable table = table_for(net, 1.0, events);
  auto reports = compute_bounds(net, table, events, Prior::binary(0.5));
  REQUIRE(reports.size() == 1);
  CHECK(reports[0].f_lower == 1.0);
  CHECK(reports[0].f_upper == 1.0);
  CHECK(reports[0].p_wcf == reports[0].p_hat);
  CHECK(reports[0].p_wcr == reports[0].p_hat);
}

TEST_CASE("a user's own earlier edges already open the bracket") {
  LabeledNetwork net = testutil::make_t1();
  std::vector<EdgeEvent> events = {event(1, kNewBase, kA, Direction::Send),
                                   event(2, kNewBase, kA, Direction::Send)};
  PATable table = table_for(net, 1.0, events);
  auto reports = compute_bounds(net, table, events, Prior::binary(0.5));
  CHECK(reports[0].f_lower < 1.0);
  CHECK(reports[0].f_upper > 1.0);
}

TEST_CASE("bracketing and the oracle sandwich on random instances") {
  SplitMix64 rng(1234);
  int nontrivial = 0;
  for (int trial = 0; trial < 150; ++trial) {
    auto inst = testutil::make_random_instance(rng, {.min_events = 1});
    Prior prior = Prior::binary(inst.pi_fake);
    PATable table = table_for(inst.net, inst.alpha, inst.events);
    auto reports = compute_bounds(inst.net, table, inst.events, prior);
    auto hats = classify(table, inst.events, prior);

    for (std::size_t i = 0; i < reports.size(); ++i) {
      const BoundReport& r = reports[i];
      CHECK(r.f_lower <= 1.0);
      CHECK(r.f_upper >= 1.0);
      CHECK(r.p_hat == hats[i].posterior_fake());  // same pass, same values

      auto exact = exact_posterior(inst.net, inst.events, prior, r.user,
                                   AlphaSpec::scalar(inst.alpha));
      const double ratio = r.p_hat / exact.p_star[kFakeClass];
      CHECK(r.f_lower - 1e-9 <= ratio);
      CHECK(ratio <= r.f_upper + 1e-9);
      if (r.f_lower < 1.0) nontrivial++;
    }
  }
  CHECK(nontrivial > 50);  // the sweep actually exercises interleavings
}

TEST_CASE("growing the interleaved prefix tightens monotonically") {
  SplitMix64 rng(77);
  for (int sweep = 0; sweep < 20; ++sweep) {
    auto inst = testutil::make_random_instance(
        rng, {.max_new_users = 2, .max_events = 4, .min_events = 2});
    Prior prior = Prior::binary(inst.pi_fake);
    const UserId target = inst.new_users[0];
    const UserId other = testutil::kNewBase + 60;

    // Hold the target's edges fixed; prepend a growing run of other-user
    // edges (mixed targets, so both phantom kinds appear).
    std::vector<EdgeEvent> own;
    for (const EdgeEvent& ev : inst.events) {
      if (ev.new_user == target) own.push_back(ev);
    }
    if (own.empty()) continue;

    std::vector<EdgeEvent> extras;
    SplitMix64 pick(sweep * 100 + 9);
    for (std::uint64_t i = 0; i < 6; ++i) {
      extras.push_back(event(
          i + 1, other,
          inst.net.id_at(static_cast<std::uint32_t>(
              pick.next_below(inst.net.user_count()))),
          pick.next_unit() < 0.5 ? Direction::Send : Direction::Receive));
    }

    double last_lower = 1.0;
    double last_upper = 1.0;
    for (std::uint64_t extra = 0; extra <= extras.size(); ++extra) {
      std::vector<EdgeEvent> events(extras.begin(), extras.begin() + extra);
      for (const EdgeEvent& ev : own) {
        events.push_back(event(events.size() + 1, target, ev.preexisting_user,
                               ev.direction));
      }
      PATable table = table_for(inst.net, inst.alpha, events);
      auto reports = compute_bounds(inst.net, table, events, prior,
                                    std::vector<UserId>{target});
      const BoundReport& r = report_for(reports, target);
      if (extra > 0) {
        CHECK(r.f_lower <= last_lower + 1e-12);
        CHECK(r.f_upper >= last_upper - 1e-12);
      }
      last_lower = r.f_lower;
      last_upper = r.f_upper;
    }
  }
}

TEST_CASE("bounds depend only on the multiset of preceding edges") {
  SplitMix64 rng(3001);
  for (int trial = 0; trial < 20; ++trial) {
    auto inst = testutil::make_random_instance(
        rng, {.max_new_users = 4, .max_events = 10, .min_events = 5});
    Prior prior = Prior::binary(inst.pi_fake);
    const UserId target = inst.new_users[0];
    PATable table = table_for(inst.net, inst.alpha, inst.events);
    auto base = compute_bounds(inst.net, table, inst.events, prior,
                               std::vector<UserId>{target});

    // Shuffle other users' edges within each gap between the target's edges:
    // before/after relations to every target edge are preserved.
    std::vector<EdgeEvent> permuted;
    std::vector<EdgeEvent> gap;
    auto flush = [&](SplitMix64& r) {
      for (std::size_t i = gap.size(); i > 1; --i) {
        std::swap(gap[i - 1], gap[r.next_below(i)]);
      }
      permuted.insert(permuted.end(), gap.begin(), gap.end());
      gap.clear();
    };
    for (const EdgeEvent& ev : inst.events) {
      if (ev.new_user == target) {
        flush(rng);
        permuted.push_back(ev);
      } else {
        gap.push_back(ev);
      }
    }
    flush(rng);
    for (std::size_t i = 0; i < permuted.size(); ++i) permuted[i].seq = i + 1;

    auto moved = compute_bounds(inst.net, table, permuted, prior,
                                std::vector<UserId>{target});
    CHECK(report_for(base, target).f_lower == report_for(moved, target).f_lower);
    CHECK(report_for(base, target).f_upper == report_for(moved, target).f_upper);
    CHECK(report_for(base, target).p_wcf == report_for(moved, target).p_wcf);
    CHECK(report_for(base, target).p_wcr == report_for(moved, target).p_wcr);
  }
}

TEST_CASE("the literal stray-alpha reading stays inspectable") {
  LabeledNetwork net = testutil::make_t1();
  std::vector<EdgeEvent> events = {event(1, kNewBase + 1, kB, Direction::Send),
                                   event(2, kNewBase, kA, Direction::Send)};
  PATable table = table_for(net, 1.0, events);
  Prior prior = Prior::binary(0.5);
  auto corrected = compute_bounds(net, table, events, prior);
  auto literal = compute_bounds(net, table, events, prior, {},
                                BoundOptions{.literal_wcr_alpha = true});
  const BoundReport& c = report_for(corrected, kNewBase);
  const BoundReport& l = report_for(literal, kNewBase);
  // The literal denominator is larger, so its WCR posterior sinks lower and
  // the upper factor grows.
  CHECK(l.f_upper > c.f_upper);
  CHECK(l.f_lower == c.f_lower);  // WCF formulas are untouched
  CHECK(c.f_upper >= 1.0);
  CHECK(l.f_upper >= 1.0);
}

TEST_CASE("zero-event targets sit exactly at the prior with unit factors") {
  LabeledNetwork net = testutil::make_t1();
  std::vector<EdgeEvent> events = {event(1, kNewBase, kA, Direction::Send)};
  PATable table = table_for(net, 1.0, events);
  auto reports = compute_bounds(net, table, events, Prior::binary(0.3),
                                std::vector<UserId>{kNewBase + 5});
  const BoundReport& r = report_for(reports, kNewBase + 5);
  CHECK(r.p_hat == 0.3);
  CHECK(r.f_lower == 1.0);
  CHECK(r.f_upper == 1.0);
}

TEST_CASE("max batch reports the largest in-threshold prefix") {
  LabeledNetwork net = testutil::make_t1();
  Prior prior = Prior::binary(0.5);
  std::vector<EdgeEvent> events;
  for (std::uint64_t i = 0; i < 40; ++i) {
    events.push_back(event(i + 1, kNewBase + (i % 3), kA, Direction::Send));
  }
  PATable table = table_for(net, 1.0, events);

  // Wide thresholds admit the whole stream; tight ones stop earlier.
  CHECK(max_batch_within_bounds(net, table, events, prior, 0.0, 100.0) == 40);
  const std::uint64_t tight =
      max_batch_within_bounds(net, table, events, prior, 0.85, 1.1);
  CHECK(tight < 40);
  CHECK(tight >= 1);  // a lone first edge is exact

  // Cross-check the reported prefix really satisfies the thresholds...
  std::vector<EdgeEvent> prefix(events.begin(), events.begin() + tight);
  for (const BoundReport& r : compute_bounds(net, table, prefix, prior)) {
    CHECK(r.f_lower >= 0.85);
    CHECK(r.f_upper <= 1.1);
  }
  // ...and that no longer prefix does.
  for (std::uint64_t n = tight + 1; n <= events.size(); ++n) {
    std::vector<EdgeEvent> longer(events.begin(), events.begin() + n);
    bool all_ok = true;
    for (const BoundReport& r : compute_bounds(net, table, longer, prior)) {
      all_ok = all_ok && r.f_lower >= 0.85 && r.f_upper <= 1.1;
    }
    CHECK_FALSE(all_ok);
  }
}

TEST_CASE("bounds require the binary scalar-alpha model") {
  LabeledNetwork net = testutil::make_t1();
  std::vector<EdgeEvent> events = {event(1, kNewBase, kA, Direction::Send)};
  AlphaSpec tensor = AlphaSpec::tensor(2, {1, 2, 3, 4}, {1, 1, 1, 1});
  PATable table = build_plusplus_table(net, tensor, touched_users(events));
  CHECK_THROWS_AS(compute_bounds(net, table, events, Prior::binary(0.5)),
                  DomainError);
}
