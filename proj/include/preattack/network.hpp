#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "preattack/types.hpp"

namespace preattack {

// The preexisting request graph E0 with per-user labels and the count
// summaries every downstream formula reads:
//   recv_from(v, c) = #{edges x->v in E0 with label(x) = c}
//   sent_to(v, c)   = #{edges v->y in E0 with label(y) = c}
//   total_sent_by(c), total_recv_by(c): the matching sums over all of E0.
// Multi-edges count with multiplicity. Built once by ingestion or synthesis,
// then treated as immutable and shared read-only across threads.
class LabeledNetwork {
 public:
  explicit LabeledNetwork(std::uint32_t k);

  void add_user(UserId id, ClassIndex label);
  void add_edge(UserId src, UserId dst);

  std::uint32_t k() const { return k_; }
  std::uint64_t user_count() const { return ids_.size(); }
  std::uint64_t edge_count() const { return edge_count_; }
  bool has_user(UserId id) const { return index_.count(id) != 0; }
  ClassIndex label(UserId id) const { return labels_[index_of(id)]; }
  std::uint64_t label_count(ClassIndex c) const { return label_count_[c]; }

  std::uint64_t recv_from(UserId v, ClassIndex c) const {
    return recv_from_[index_of(v) * k_ + c];
  }
  std::uint64_t sent_to(UserId v, ClassIndex c) const {
    return sent_to_[index_of(v) * k_ + c];
  }
  std::uint64_t total_sent_by(ClassIndex c) const { return total_sent_by_[c]; }
  std::uint64_t total_recv_by(ClassIndex c) const { return total_recv_by_[c]; }

  // Same users and labels, no edges: the Homophily benchmark's view of V.
  LabeledNetwork empty_copy() const;

  // Dense-index access for kernels that iterate all of V.
  std::uint32_t index_of(UserId id) const;
  UserId id_at(std::uint32_t idx) const { return ids_[idx]; }
  ClassIndex label_at(std::uint32_t idx) const { return labels_[idx]; }
  std::uint64_t recv_from_at(std::uint32_t idx, ClassIndex c) const {
    return recv_from_[static_cast<std::uint64_t>(idx) * k_ + c];
  }
  std::uint64_t sent_to_at(std::uint32_t idx, ClassIndex c) const {
    return sent_to_[static_cast<std::uint64_t>(idx) * k_ + c];
  }

 private:
  std::uint32_t k_;
  std::vector<UserId> ids_;
  std::unordered_map<UserId, std::uint32_t> index_;
  std::vector<ClassIndex> labels_;
  std::vector<std::uint64_t> label_count_;
  std::vector<std::uint64_t> recv_from_;  // idx * k + c
  std::vector<std::uint64_t> sent_to_;    // idx * k + c
  std::vector<std::uint64_t> total_sent_by_;
  std::vector<std::uint64_t> total_recv_by_;
  std::uint64_t edge_count_ = 0;
};

}  // namespace preattack
