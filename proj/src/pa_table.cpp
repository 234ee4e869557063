#include "preattack/pa_table.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace preattack {

double PATable::scalar_alpha() const {
  if (!has_scalar_alpha_) {
    throw DomainError("table was built from a label-dependent alpha tensor");
  }
  return scalar_alpha_;
}

std::size_t PATable::row(UserId v) const {
  auto it = slot_.find(v);
  if (it == slot_.end()) {
    throw DomainError("no table entry for preexisting user " + std::to_string(v));
  }
  return it->second;
}

std::vector<UserId> PATable::touched_ids_sorted() const {
  std::vector<UserId> ids = ids_;
  std::sort(ids.begin(), ids.end());
  return ids;
}

double PATable::send_prob(UserId v, ClassIndex c) const {
  return std::exp(log_send(v, c));
}

double PATable::recv_prob(UserId v, ClassIndex c) const {
  return std::exp(log_recv(v, c));
}

std::unordered_set<UserId> touched_users(std::span<const EdgeEvent> events) {
  std::unordered_set<UserId> touched;
  touched.reserve(events.size());
  for (const EdgeEvent& ev : events) touched.insert(ev.preexisting_user);
  return touched;
}

PATable build_plusplus_table(const LabeledNetwork& net, const AlphaSpec& alpha,
                             const std::unordered_set<UserId>& touched) {
  alpha.validate(net.k());
  const std::uint32_t k = net.k();

  PATable table;
  table.k_ = k;
  table.has_scalar_alpha_ = alpha.is_scalar();
  table.scalar_alpha_ = alpha.is_scalar() ? alpha.scalar_value() : 0.0;

  table.send_denom_.resize(k);
  table.recv_denom_.resize(k);
  for (ClassIndex c = 0; c < k; ++c) {
    table.send_denom_[c] =
        alpha.send_total(net, c) + static_cast<double>(net.total_sent_by(c));
    table.recv_denom_[c] =
        alpha.recv_total(net, c) + static_cast<double>(net.total_recv_by(c));
    if (table.send_denom_[c] == 0.0 || table.recv_denom_[c] == 0.0) {
      throw DomainError("zero attachment denominator for class " + std::to_string(c) +
                        " (alpha 0 over an empty network)");
    }
  }

  table.ids_.reserve(touched.size());
  table.slot_.reserve(touched.size());
  table.log_send_.resize(static_cast<std::size_t>(touched.size()) * k);
  table.log_recv_.resize(static_cast<std::size_t>(touched.size()) * k);
  for (UserId v : touched) {
    if (!net.has_user(v)) {
      throw DomainError("touched user " + std::to_string(v) +
                        " is not in the preexisting network");
    }
    const ClassIndex lv = net.label(v);
    const std::size_t slot = table.ids_.size();
    table.ids_.push_back(v);
    table.slot_.emplace(v, slot);
    for (ClassIndex c = 0; c < k; ++c) {
      const double send_num = alpha.send(c, lv) + static_cast<double>(net.recv_from(v, c));
      const double recv_num = alpha.recv(lv, c) + static_cast<double>(net.sent_to(v, c));
      table.log_send_[slot * k + c] =
          std::log(send_num) - std::log(table.send_denom_[c]);
      table.log_recv_[slot * k + c] =
          std::log(recv_num) - std::log(table.recv_denom_[c]);
    }
  }
  return table;
}

PATable build_preattack_table(const LabeledNetwork& net, double alpha,
                              const std::unordered_set<UserId>& touched) {
  return build_plusplus_table(net, AlphaSpec::scalar(alpha), touched);
}

PATable build_homophily_table(const LabeledNetwork& net, const AlphaSpec& alpha,
                              const std::unordered_set<UserId>& touched) {
  return build_plusplus_table(net.empty_copy(), alpha, touched);
}

}  // namespace preattack
