#include "preattack/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "preattack/logspace.hpp"

namespace preattack {

double sequence_log_prob(const LabeledNetwork& net,
                         std::span<const EdgeEvent> events,
                         const std::unordered_map<UserId, ClassIndex>& labels,
                         const AlphaSpec& alpha) {
  alpha.validate(net.k());
  const std::uint32_t k = net.k();

  // New-edge deltas on top of E0, per (partner, class), plus the per-class
  // totals that normalize each draw over all of V.
  std::unordered_map<UserId, std::vector<std::uint32_t>> recv_new;
  std::unordered_map<UserId, std::vector<std::uint32_t>> sent_new;
  std::vector<std::uint64_t> total_new_send(k, 0);
  std::vector<std::uint64_t> total_new_recv(k, 0);

  auto delta = [k](std::unordered_map<UserId, std::vector<std::uint32_t>>& map,
                   UserId v) -> std::vector<std::uint32_t>& {
    auto [it, fresh] = map.try_emplace(v);
    if (fresh) it->second.assign(k, 0);
    return it->second;
  };

  double log_prob = 0.0;
  for (const EdgeEvent& ev : events) {
    auto lit = labels.find(ev.new_user);
    if (lit == labels.end()) {
      throw DomainError("no label assignment for new user " +
                        std::to_string(ev.new_user));
    }
    const ClassIndex c = lit->second;
    const UserId v = ev.preexisting_user;
    const ClassIndex lv = net.label(v);

    double num, den;
    if (ev.direction == Direction::Send) {
      num = alpha.send(c, lv) +
            static_cast<double>(net.recv_from(v, c) + delta(recv_new, v)[c]);
      den = alpha.send_total(net, c) +
            static_cast<double>(net.total_sent_by(c) + total_new_send[c]);
    } else {
      num = alpha.recv(lv, c) +
            static_cast<double>(net.sent_to(v, c) + delta(sent_new, v)[c]);
      den = alpha.recv_total(net, c) +
            static_cast<double>(net.total_recv_by(c) + total_new_recv[c]);
    }
    if (den == 0.0) {
      throw DomainError("draw over an all-zero distribution at seq " +
                        std::to_string(ev.seq) + " (alpha 0, no matching counts)");
    }
    if (num == 0.0) {
      log_prob = kNegInf;  // impossible draw under these labels
    } else if (log_prob != kNegInf) {
      log_prob += std::log(num) - std::log(den);
    }

    if (ev.direction == Direction::Send) {
      delta(recv_new, v)[c]++;
      total_new_send[c]++;
    } else {
      delta(sent_new, v)[c]++;
      total_new_recv[c]++;
    }
  }
  return log_prob;
}

namespace {

std::vector<UserId> stream_users(std::span<const EdgeEvent> events) {
  std::set<UserId> users;
  for (const EdgeEvent& ev : events) users.insert(ev.new_user);
  return {users.begin(), users.end()};
}

std::uint64_t checked_pow(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t out = 1;
  for (std::uint64_t i = 0; i < exp; ++i) out *= base;
  return out;
}

}  // namespace

ExactPosterior exact_posterior(const LabeledNetwork& net,
                               std::span<const EdgeEvent> events,
                               const Prior& prior, UserId target,
                               const AlphaSpec& alpha,
                               std::uint32_t max_new_users, int threads) {
  if (prior.k() != net.k()) {
    throw DomainError("class count mismatch between prior and network");
  }
  const std::uint32_t k = net.k();

  std::vector<UserId> users = stream_users(events);
  ExactPosterior out;
  out.user = target;
  if (std::find(users.begin(), users.end(), target) == users.end()) {
    out.p_star = prior.values();  // target has no evidence in this stream
    out.enumerated_combinations = 0;
    return out;
  }
  if (users.size() > max_new_users) {
    throw DomainError("stream has " + std::to_string(users.size()) +
                      " new users; oracle cap is " + std::to_string(max_new_users) +
                      " (k^(m-1) label combinations per class)");
  }

  std::vector<UserId> others;
  for (UserId u : users) {
    if (u != target) others.push_back(u);  // already sorted ascending
  }
  const std::uint64_t n_assign = checked_pow(k, others.size());

  std::vector<double> class_logs(k, kNegInf);
  std::vector<double> terms(n_assign);
  for (ClassIndex c = 0; c < k; ++c) {
    const auto n = static_cast<std::int64_t>(n_assign);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16) num_threads(threads)
#endif
    for (std::int64_t a = 0; a < n; ++a) {
      std::unordered_map<UserId, ClassIndex> labels;
      labels.reserve(users.size());
      labels.emplace(target, c);
      double label_prior = 0.0;
      // Assignment digits in lexicographic order: the first other user is the
      // most significant digit.
      std::uint64_t rest = static_cast<std::uint64_t>(a);
      for (std::size_t j = others.size(); j-- > 0;) {
        const auto cls = static_cast<ClassIndex>(rest % k);
        rest /= k;
        labels.emplace(others[j], cls);
        label_prior += std::log(prior[cls]);
      }
      terms[static_cast<std::size_t>(a)] =
          label_prior + sequence_log_prob(net, events, labels, alpha);
    }
    LogSumExp lse;
    for (double t : terms) lse.add(t);  // fixed order: thread-count independent
    class_logs[c] = std::log(prior[c]) + lse.value();
  }

  out.p_star = softmax_logs(class_logs);
  out.enumerated_combinations = n_assign;
  return out;
}

ExactPosterior exact_posterior_conditioned(
    const LabeledNetwork& net, std::span<const EdgeEvent> events,
    const Prior& prior, UserId target,
    const std::unordered_map<UserId, ClassIndex>& other_labels,
    const AlphaSpec& alpha) {
  if (prior.k() != net.k()) {
    throw DomainError("class count mismatch between prior and network");
  }
  const std::uint32_t k = net.k();

  ExactPosterior out;
  out.user = target;
  std::vector<UserId> users = stream_users(events);
  if (std::find(users.begin(), users.end(), target) == users.end()) {
    out.p_star = prior.values();
    out.enumerated_combinations = 0;
    return out;
  }

  std::vector<double> class_logs(k);
  for (ClassIndex c = 0; c < k; ++c) {
    std::unordered_map<UserId, ClassIndex> labels = other_labels;
    labels[target] = c;
    class_logs[c] = std::log(prior[c]) + sequence_log_prob(net, events, labels, alpha);
  }
  out.p_star = softmax_logs(class_logs);
  out.enumerated_combinations = 1;
  return out;
}

}  // namespace preattack
