#include "preattack/network.hpp"

#include <string>

namespace preattack {

LabeledNetwork::LabeledNetwork(std::uint32_t k)
    : k_(k),
      label_count_(k, 0),
      total_sent_by_(k, 0),
      total_recv_by_(k, 0) {
  if (k < 2) throw DomainError("class count must be >= 2, got " + std::to_string(k));
}

void LabeledNetwork::add_user(UserId id, ClassIndex label) {
  if (label >= k_) {
    throw DomainError("label " + std::to_string(label) + " out of range for k=" +
                      std::to_string(k_) + " (user " + std::to_string(id) + ")");
  }
  auto [it, fresh] = index_.try_emplace(id, static_cast<std::uint32_t>(ids_.size()));
  if (!fresh) {
    throw DomainError("duplicate label for user " + std::to_string(id));
  }
  ids_.push_back(id);
  labels_.push_back(label);
  label_count_[label]++;
  recv_from_.resize(recv_from_.size() + k_, 0);
  sent_to_.resize(sent_to_.size() + k_, 0);
}

void LabeledNetwork::add_edge(UserId src, UserId dst) {
  auto si = index_.find(src);
  auto di = index_.find(dst);
  if (si == index_.end()) {
    throw DomainError("unlabeled endpoint " + std::to_string(src));
  }
  if (di == index_.end()) {
    throw DomainError("unlabeled endpoint " + std::to_string(dst));
  }
  ClassIndex src_label = labels_[si->second];
  ClassIndex dst_label = labels_[di->second];
  recv_from_[static_cast<std::uint64_t>(di->second) * k_ + src_label]++;
  sent_to_[static_cast<std::uint64_t>(si->second) * k_ + dst_label]++;
  total_sent_by_[src_label]++;
  total_recv_by_[dst_label]++;
  edge_count_++;
}

std::uint32_t LabeledNetwork::index_of(UserId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) {
    throw DomainError("unknown preexisting user " + std::to_string(id));
  }
  return it->second;
}

LabeledNetwork LabeledNetwork::empty_copy() const {
  LabeledNetwork out(k_);
  out.ids_ = ids_;
  out.index_ = index_;
  out.labels_ = labels_;
  out.label_count_ = label_count_;
  out.recv_from_.assign(recv_from_.size(), 0);
  out.sent_to_.assign(sent_to_.size(), 0);
  return out;
}

}  // namespace preattack
