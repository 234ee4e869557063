#include "preattack/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "preattack/logspace.hpp"

namespace preattack {

namespace {

// Running log sums for one target user: the frozen-E0 probabilities and the
// two adversarial phantom-label variants, per class.
struct TargetAcc {
  UserId id = 0;
  double hat[2] = {0.0, 0.0};
  double wcf[2] = {0.0, 0.0};
  double wcr[2] = {0.0, 0.0};
  std::uint64_t n_events = 0;
};

double posterior_fake(const double (&log_joint)[2], const Prior& prior) {
  const double logs[2] = {log_joint[kRealClass] + std::log(prior[kRealClass]),
                          log_joint[kFakeClass] + std::log(prior[kFakeClass])};
  return softmax_logs(logs)[kFakeClass];
}

struct BoundsPass {
  const LabeledNetwork& net;
  const PATable& table;
  const Prior& prior;
  const BoundOptions& options;
  double alpha;
  double literal_extra;  // the stray alpha*|E0| of the literal WCR reading

  // New-edge counters: how many earlier new edges target v (send) or come
  // from v (receive), plus the total across all partners and directions.
  std::unordered_map<UserId, std::uint64_t> new_to;
  std::unordered_map<UserId, std::uint64_t> new_from;
  std::uint64_t total_new = 0;

  BoundsPass(const LabeledNetwork& net_, const PATable& table_, const Prior& prior_,
             const BoundOptions& options_)
      : net(net_), table(table_), prior(prior_), options(options_),
        alpha(table_.scalar_alpha()),
        literal_extra(options_.literal_wcr_alpha
                          ? table_.scalar_alpha() * static_cast<double>(net_.edge_count())
                          : 0.0) {
    if (table.k() != 2 || prior.k() != 2) {
      throw DomainError("bounds are defined for the binary (k=2) model");
    }
  }

  // Folds the event's three factor pairs into acc, using the counters as they
  // stand before this event (E_{i-1}).
  void accumulate(const EdgeEvent& ev, TargetAcc& acc) {
    const UserId v = ev.preexisting_user;
    const bool send = ev.direction == Direction::Send;
    const auto& same = send ? new_to : new_from;
    auto it = same.find(v);
    const double t_same = it == same.end() ? 0.0 : static_cast<double>(it->second);
    const double t_other = static_cast<double>(total_new) - t_same;

    for (ClassIndex c = 0; c < 2; ++c) {
      const std::uint64_t e0_count = send ? net.recv_from(v, c) : net.sent_to(v, c);
      const double num = alpha + static_cast<double>(e0_count);
      const double den = send ? table.send_denominator(c) : table.recv_denominator(c);

      acc.hat[c] += send ? table.log_send(v, c) : table.log_recv(v, c);
      if (c == kFakeClass) {
        // Phantoms on the same partner are fake, the rest real.
        const double extra = send ? literal_extra : 0.0;  // stray alpha sits in
                                                          // the send-side formula only
        acc.wcf[c] += std::log(num + t_same) - std::log(den + t_same);
        acc.wcr[c] += std::log(num) - std::log(den + extra + t_other);
      } else {
        acc.wcf[c] += std::log(num) - std::log(den + t_other);
        acc.wcr[c] += std::log(num + t_same) - std::log(den + t_same);
      }
    }
    acc.n_events++;
  }

  void advance(const EdgeEvent& ev) {
    auto& same = ev.direction == Direction::Send ? new_to : new_from;
    same[ev.preexisting_user]++;
    total_new++;
  }

  BoundReport finalize(const TargetAcc& acc) const {
    BoundReport report;
    report.user = acc.id;
    if (acc.n_events == 0) {
      report.p_hat = report.p_wcf = report.p_wcr = prior[kFakeClass];
      report.f_lower = report.f_upper = 1.0;
      return report;
    }
    report.p_hat = posterior_fake(acc.hat, prior);
    report.p_wcf = posterior_fake(acc.wcf, prior);
    report.p_wcr = posterior_fake(acc.wcr, prior);
    if (report.p_wcf == 0.0 || report.p_wcr == 0.0) {
      throw DomainError("zero worst-case posterior for user " + std::to_string(acc.id) +
                        " (degenerate alpha=0 instance)");
    }
    report.f_lower = report.p_hat / report.p_wcf;
    report.f_upper = report.p_hat / report.p_wcr;
    return report;
  }
};

}  // namespace

std::vector<BoundReport> compute_bounds(const LabeledNetwork& net,
                                        const PATable& table,
                                        std::span<const EdgeEvent> events,
                                        const Prior& prior,
                                        std::span<const UserId> targets,
                                        const BoundOptions& options) {
  BoundsPass pass(net, table, prior, options);

  const bool all_users = targets.empty();
  std::unordered_set<UserId> wanted(targets.begin(), targets.end());
  std::unordered_map<UserId, std::size_t> slot;
  std::vector<TargetAcc> accs;

  for (const EdgeEvent& ev : events) {
    if (all_users || wanted.count(ev.new_user) != 0) {
      auto [it, fresh] = slot.try_emplace(ev.new_user, accs.size());
      if (fresh) accs.push_back(TargetAcc{.id = ev.new_user});
      pass.accumulate(ev, accs[it->second]);
    }
    pass.advance(ev);
  }
  // Targets that never appear in the stream carry no evidence at all.
  for (UserId u : targets) {
    if (slot.try_emplace(u, accs.size()).second) accs.push_back(TargetAcc{.id = u});
  }

  std::vector<BoundReport> reports;
  reports.reserve(accs.size());
  for (const TargetAcc& acc : accs) reports.push_back(pass.finalize(acc));
  std::sort(reports.begin(), reports.end(),
            [](const BoundReport& a, const BoundReport& b) { return a.user < b.user; });
  return reports;
}

std::uint64_t max_batch_within_bounds(const LabeledNetwork& net,
                                      const PATable& table,
                                      std::span<const EdgeEvent> events,
                                      const Prior& prior,
                                      double min_f_lower,
                                      double max_f_upper,
                                      const BoundOptions& options) {
  BoundsPass pass(net, table, prior, options);
  std::unordered_map<UserId, std::size_t> slot;
  std::vector<TargetAcc> accs;
  std::vector<bool> violating;

  // A user's bounds only move when the user gains an event, so one pass with
  // an incremental violation count covers every prefix.
  std::size_t n_violating = 0;
  std::uint64_t best = 0;
  std::uint64_t prefix = 0;
  for (const EdgeEvent& ev : events) {
    auto [it, fresh] = slot.try_emplace(ev.new_user, accs.size());
    if (fresh) {
      accs.push_back(TargetAcc{.id = ev.new_user});
      violating.push_back(false);
    }
    const std::size_t idx = it->second;
    pass.accumulate(ev, accs[idx]);
    pass.advance(ev);
    ++prefix;

    const BoundReport report = pass.finalize(accs[idx]);
    const bool bad = report.f_lower < min_f_lower || report.f_upper > max_f_upper;
    if (bad != violating[idx]) {
      violating[idx] = bad;
      if (bad) {
        ++n_violating;
      } else {
        --n_violating;
      }
    }
    if (n_violating == 0) best = prefix;
  }
  return best;
}

}  // namespace preattack
