#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <unordered_set>

#include "helpers.hpp"
#include "preattack/pa_table.hpp"
#include "preattack/rng.hpp"

using namespace preattack;
using testutil::kA;
using testutil::kB;
using testutil::kC;
using testutil::kF;

namespace {

std::unordered_set<UserId> all_of(const LabeledNetwork& net) {
  std::unordered_set<UserId> out;
  for (std::uint32_t i = 0; i < net.user_count(); ++i) out.insert(net.id_at(i));
  return out;
}

}  // namespace

TEST_CASE("T1 hand values: send and receive probabilities at alpha=1") {
  LabeledNetwork net = testutil::make_t1();
  PATable table = build_preattack_table(net, 1.0, all_of(net));

  // P(a+|F) = (1+1)/(4+1), P(a+|R) = (1+1)/(4+2)
  CHECK(table.send_prob(kA, kFakeClass) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(table.send_prob(kA, kRealClass) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  // P(b-|F) = (1+0)/(4+0), P(b-|R) = (1+1)/(4+3)
  CHECK(table.recv_prob(kB, kFakeClass) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(table.recv_prob(kB, kRealClass) == doctest::Approx(2.0 / 7.0).epsilon(1e-12));
}

TEST_CASE("empty E0 with alpha=1 is uniform over V") {
  LabeledNetwork net(2);
  for (UserId id = 0; id < 5; ++id) net.add_user(id, id % 2);
  PATable table = build_preattack_table(net, 1.0, all_of(net));
  for (UserId id = 0; id < 5; ++id) {
    for (ClassIndex c = 0; c < 2; ++c) {
      CHECK(table.send_prob(id, c) == doctest::Approx(0.2).epsilon(1e-12));
      CHECK(table.recv_prob(id, c) == doctest::Approx(0.2).epsilon(1e-12));
    }
  }
}

TEST_CASE("alpha=0 on an empty network is a zero denominator") {
  LabeledNetwork net(2);
  net.add_user(0, kRealClass);
  net.add_user(1, kFakeClass);
  CHECK_THROWS_AS(build_preattack_table(net, 0.0, all_of(net)), DomainError);
}

TEST_CASE("all-equal tensor collapses to the scalar table exactly") {
  LabeledNetwork net = testutil::make_t1();
  const auto touched = all_of(net);
  PATable scalar = build_preattack_table(net, 1.0, touched);
  AlphaSpec ones = AlphaSpec::tensor(2, {1, 1, 1, 1}, {1, 1, 1, 1});
  PATable tensor = build_plusplus_table(net, ones, touched);
  for (UserId id : {kA, kB, kC, kF}) {
    for (ClassIndex c = 0; c < 2; ++c) {
      CHECK(scalar.log_send(id, c) == tensor.log_send(id, c));
      CHECK(scalar.log_recv(id, c) == tensor.log_recv(id, c));
    }
  }
}

TEST_CASE("plusplus hand value: empty E0, fake-to-real alpha dominates") {
  LabeledNetwork net(2);
  net.add_user(0, kRealClass);
  net.add_user(1, kFakeClass);
  // send alpha rows are [l_u][l_v]: fake row = {F->R: 0.9, F->F: 0.1}
  AlphaSpec alpha = AlphaSpec::tensor(2, {1, 1, 0.9, 0.1}, {1, 1, 1, 1});
  PATable table = build_plusplus_table(net, alpha, all_of(net));
  CHECK(table.send_prob(0, kFakeClass) == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(table.send_prob(1, kFakeClass) == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("homophily table equals plusplus on the emptied network exactly") {
  LabeledNetwork net = testutil::make_t1();
  const auto touched = all_of(net);
  AlphaSpec alpha = AlphaSpec::tensor(2, {3, 1, 2, 5}, {1, 2, 4, 1});
  PATable homophily = build_homophily_table(net, alpha, touched);
  PATable emptied = build_plusplus_table(net.empty_copy(), alpha, touched);
  for (UserId id : {kA, kB, kC, kF}) {
    for (ClassIndex c = 0; c < 2; ++c) {
      CHECK(homophily.log_send(id, c) == emptied.log_send(id, c));
      CHECK(homophily.log_recv(id, c) == emptied.log_recv(id, c));
    }
  }
}

TEST_CASE("homophily send probability ignores the target's identity") {
  LabeledNetwork net = testutil::make_t1();
  AlphaSpec alpha = AlphaSpec::tensor(2, {1, 1, 2, 2}, {1, 1, 1, 1});
  PATable table = build_homophily_table(net, alpha, all_of(net));
  const double p = table.send_prob(kA, kFakeClass);
  for (UserId id : {kB, kC, kF}) {
    CHECK(table.send_prob(id, kFakeClass) == doctest::Approx(p).epsilon(1e-15));
  }
}

TEST_CASE("homophily hand value: 2 reals + 2 fakes, alphas 3 vs 1") {
  LabeledNetwork net(2);
  net.add_user(0, kRealClass);
  net.add_user(1, kRealClass);
  net.add_user(2, kFakeClass);
  net.add_user(3, kFakeClass);
  net.add_edge(0, 2);  // edges must vanish from the homophily view
  AlphaSpec alpha = AlphaSpec::tensor(2, {1, 1, 3, 1}, {1, 1, 1, 1});
  PATable table = build_homophily_table(net, alpha, all_of(net));
  // normalize {3,3,1,1}: a real target gets 3/8
  CHECK(table.send_prob(0, kFakeClass) == doctest::Approx(3.0 / 8.0).epsilon(1e-12));
  CHECK(table.send_prob(2, kFakeClass) == doctest::Approx(1.0 / 8.0).epsilon(1e-12));
}

TEST_CASE("normalization: fully materialized probabilities sum to 1") {
  SplitMix64 rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    auto inst = testutil::make_random_instance(rng, {.max_v = 100});
    const auto touched = all_of(inst.net);

    std::vector<PATable> tables;
    tables.push_back(build_preattack_table(inst.net, inst.alpha, touched));
    AlphaSpec tensor = AlphaSpec::tensor(
        2, {1.5, 0.5, 2.0, 1.0}, {0.25, 1.0, 0.75, 2.0});
    tables.push_back(build_plusplus_table(inst.net, tensor, touched));
    tables.push_back(build_homophily_table(inst.net, tensor, touched));

    for (const PATable& table : tables) {
      for (ClassIndex c = 0; c < 2; ++c) {
        double send_sum = 0.0;
        double recv_sum = 0.0;
        for (std::uint32_t i = 0; i < inst.net.user_count(); ++i) {
          send_sum += table.send_prob(inst.net.id_at(i), c);
          recv_sum += table.recv_prob(inst.net.id_at(i), c);
        }
        CHECK(send_sum == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(recv_sum == doctest::Approx(1.0).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("monotonicity: an extra fake-sent edge to v raises only v") {
  LabeledNetwork before = testutil::make_t1();
  LabeledNetwork after = testutil::make_t1();
  after.add_edge(kF, kB);  // one more fake-sent edge, target b
  const auto touched = all_of(before);
  PATable t0 = build_preattack_table(before, 1.0, touched);
  PATable t1 = build_preattack_table(after, 1.0, touched);
  CHECK(t1.send_prob(kB, kFakeClass) > t0.send_prob(kB, kFakeClass));
  for (UserId other : {kA, kC, kF}) {
    CHECK(t1.send_prob(other, kFakeClass) < t0.send_prob(other, kFakeClass));
  }
}

TEST_CASE("lazy coverage matches full materialization and rejects misses") {
  LabeledNetwork net = testutil::make_t1();
  PATable lazy = build_preattack_table(net, 1.0, {kA});
  PATable full = build_preattack_table(net, 1.0, all_of(net));
  CHECK(lazy.touched_count() == 1);
  CHECK(lazy.log_send(kA, kFakeClass) == full.log_send(kA, kFakeClass));
  CHECK(lazy.log_recv(kA, kRealClass) == full.log_recv(kA, kRealClass));
  CHECK(lazy.has(kA));
  CHECK_FALSE(lazy.has(kB));
  CHECK_THROWS_AS(lazy.log_send(kB, kFakeClass), DomainError);
}

TEST_CASE("touched_users collects exactly the stream's preexisting side") {
  std::vector<EdgeEvent> events = {
      testutil::event(1, 100, kA, Direction::Send),
      testutil::event(2, 101, kB, Direction::Receive),
      testutil::event(3, 100, kA, Direction::Send),
  };
  auto touched = touched_users(events);
  CHECK(touched == std::unordered_set<UserId>{kA, kB});
}
