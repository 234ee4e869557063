#include "preattack/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_map>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "preattack/logspace.hpp"

namespace preattack {

namespace {

struct UserAcc {
  UserId id = 0;
  std::vector<double> log_joint;
  std::uint64_t n_send = 0;
  std::uint64_t n_recv = 0;
};

bool counted(const EdgeEvent& ev, ClassifyMode mode) {
  return ev.direction == Direction::Send || mode == ClassifyMode::Full;
}

// Registers every stream user (even ones whose events are all skipped in
// SendOnly mode) and returns a slot per user in first-appearance order.
std::vector<UserAcc> make_accs(std::span<const EdgeEvent> events, std::uint32_t k,
                               std::unordered_map<UserId, std::size_t>& slot) {
  std::vector<UserAcc> accs;
  for (const EdgeEvent& ev : events) {
    auto [it, fresh] = slot.try_emplace(ev.new_user, accs.size());
    (void)it;
    if (fresh) {
      accs.push_back(UserAcc{ev.new_user, std::vector<double>(k, 0.0), 0, 0});
    }
  }
  return accs;
}

void apply_event(const PATable& table, const EdgeEvent& ev, ClassifyMode mode,
                 UserAcc& acc) {
  const std::uint32_t k = table.k();
  if (ev.direction == Direction::Send) {
    for (ClassIndex c = 0; c < k; ++c) {
      acc.log_joint[c] += table.log_send(ev.preexisting_user, c);
    }
    acc.n_send++;
  } else if (mode == ClassifyMode::Full) {
    for (ClassIndex c = 0; c < k; ++c) {
      acc.log_joint[c] += table.log_recv(ev.preexisting_user, c);
    }
    acc.n_recv++;
  }
}

// Event indices grouped per user slot (stable, so per-user order is stream
// order); shared by the parallel paths.
std::vector<std::vector<std::size_t>> group_by_user(
    std::span<const EdgeEvent> events,
    const std::unordered_map<UserId, std::size_t>& slot, std::size_t n_users) {
  std::vector<std::vector<std::size_t>> grouped(n_users);
  for (std::size_t i = 0; i < events.size(); ++i) {
    grouped[slot.at(events[i].new_user)].push_back(i);
  }
  return grouped;
}

PosteriorReport finalize(const UserAcc& acc, const Prior& prior) {
  PosteriorReport report;
  report.user = acc.id;
  report.log_joint = acc.log_joint;
  report.edge_count_send = acc.n_send;
  report.edge_count_recv = acc.n_recv;
  if (acc.n_send + acc.n_recv == 0) {
    report.posterior = prior.values();  // empty product: the prior verbatim
    return report;
  }
  std::vector<double> logs(acc.log_joint.size());
  for (std::size_t c = 0; c < logs.size(); ++c) {
    logs[c] = acc.log_joint[c] + std::log(prior[static_cast<ClassIndex>(c)]);
  }
  report.posterior = softmax_logs(logs);
  return report;
}

void check_dimensions(const PATable& table, const Prior& prior) {
  if (table.k() != prior.k()) {
    throw DomainError("class count mismatch: table has k=" + std::to_string(table.k()) +
                      ", prior has k=" + std::to_string(prior.k()));
  }
}

}  // namespace

std::vector<PosteriorReport> classify(const PATable& table,
                                      std::span<const EdgeEvent> events,
                                      const Prior& prior, ClassifyMode mode,
                                      int threads) {
  check_dimensions(table, prior);
  std::unordered_map<UserId, std::size_t> slot;
  std::vector<UserAcc> accs = make_accs(events, table.k(), slot);

  if (threads <= 1) {
    // Serial reference: direct accumulation in stream order.
    for (const EdgeEvent& ev : events) {
      apply_event(table, ev, mode, accs[slot.at(ev.new_user)]);
    }
  } else {
    auto grouped = group_by_user(events, slot, accs.size());
    const auto n = static_cast<std::int64_t>(accs.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 64) num_threads(threads)
#endif
    for (std::int64_t u = 0; u < n; ++u) {
      for (std::size_t i : grouped[static_cast<std::size_t>(u)]) {
        apply_event(table, events[i], mode, accs[static_cast<std::size_t>(u)]);
      }
    }
  }

  std::vector<PosteriorReport> reports;
  reports.reserve(accs.size());
  for (const UserAcc& acc : accs) reports.push_back(finalize(acc, prior));
  std::sort(reports.begin(), reports.end(),
            [](const PosteriorReport& a, const PosteriorReport& b) {
              return a.user < b.user;
            });
  return reports;
}

std::vector<PosteriorReport> classify_multiclass(const PATable& table,
                                                 std::span<const EdgeEvent> events,
                                                 const Prior& prior, int threads) {
  return classify(table, events, prior, ClassifyMode::Full, threads);
}

namespace {

// Snapshots for one user across all checkpoints, filled during the pass and
// saturated with the final state afterwards.
struct PrefixAcc {
  UserAcc acc;
  std::size_t next_checkpoint = 0;           // index into checkpoints
  std::vector<UserAcc> snapshots;            // parallel to checkpoints
};

void snapshot_if_due(PrefixAcc& p, std::span<const std::uint64_t> checkpoints) {
  const std::uint64_t counted_events = p.acc.n_send + p.acc.n_recv;
  if (p.next_checkpoint < checkpoints.size() &&
      counted_events == checkpoints[p.next_checkpoint]) {
    p.snapshots[p.next_checkpoint] = p.acc;
    p.next_checkpoint++;
  }
}

}  // namespace

std::vector<PrefixReport> classify_prefixes(const PATable& table,
                                            std::span<const EdgeEvent> events,
                                            const Prior& prior,
                                            std::span<const std::uint64_t> checkpoints,
                                            ClassifyMode mode, int threads) {
  check_dimensions(table, prior);
  for (std::size_t i = 1; i < checkpoints.size(); ++i) {
    if (checkpoints[i] <= checkpoints[i - 1]) {
      throw DomainError("checkpoints must be strictly ascending");
    }
  }

  std::unordered_map<UserId, std::size_t> slot;
  std::vector<UserAcc> bare = make_accs(events, table.k(), slot);
  // Checkpoint 0 is the bare prior and never fires during the pass.
  const std::size_t first_live = (!checkpoints.empty() && checkpoints[0] == 0) ? 1 : 0;
  std::vector<PrefixAcc> prefix(bare.size());
  for (std::size_t i = 0; i < bare.size(); ++i) {
    prefix[i].acc = std::move(bare[i]);
    prefix[i].next_checkpoint = first_live;
    prefix[i].snapshots.resize(checkpoints.size());
  }

  auto run_user_events = [&](PrefixAcc& p, auto&& event_indices) {
    for (std::size_t i : event_indices) {
      const EdgeEvent& ev = events[i];
      if (!counted(ev, mode)) continue;
      apply_event(table, ev, mode, p.acc);
      snapshot_if_due(p, checkpoints);
    }
  };

  if (threads <= 1) {
    for (std::size_t i = 0; i < events.size(); ++i) {
      const EdgeEvent& ev = events[i];
      PrefixAcc& p = prefix[slot.at(ev.new_user)];
      if (!counted(ev, mode)) continue;
      apply_event(table, ev, mode, p.acc);
      snapshot_if_due(p, checkpoints);
    }
  } else {
    auto grouped = group_by_user(events, slot, prefix.size());
    const auto n = static_cast<std::int64_t>(prefix.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 64) num_threads(threads)
#endif
    for (std::int64_t u = 0; u < n; ++u) {
      run_user_events(prefix[static_cast<std::size_t>(u)],
                      grouped[static_cast<std::size_t>(u)]);
    }
  }

  std::vector<PrefixReport> reports;
  reports.reserve(prefix.size() * checkpoints.size());
  for (PrefixAcc& p : prefix) {
    // Checkpoints past the user's event count saturate at the full state.
    for (std::size_t ci = p.next_checkpoint; ci < checkpoints.size(); ++ci) {
      p.snapshots[ci] = p.acc;
    }
    for (std::size_t ci = 0; ci < checkpoints.size(); ++ci) {
      PrefixReport pr;
      pr.checkpoint = checkpoints[ci];
      if (checkpoints[ci] == 0) {
        UserAcc zero{p.acc.id, std::vector<double>(table.k(), 0.0), 0, 0};
        pr.report = finalize(zero, prior);
      } else {
        pr.report = finalize(p.snapshots[ci], prior);
      }
      reports.push_back(std::move(pr));
    }
  }
  std::sort(reports.begin(), reports.end(),
            [](const PrefixReport& a, const PrefixReport& b) {
              return a.report.user != b.report.user ? a.report.user < b.report.user
                                                    : a.checkpoint < b.checkpoint;
            });
  return reports;
}

}  // namespace preattack
