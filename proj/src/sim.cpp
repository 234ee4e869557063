#include "preattack/sim.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

namespace preattack {

ActivityDistribution ActivityDistribution::uniform(std::uint32_t m) {
  ActivityDistribution d;
  d.weight_send.assign(m, 1.0);
  d.weight_recv.assign(m, 1.0);
  return d;
}

std::vector<ClassIndex> sample_labels(const SimConfig& config) {
  const std::uint32_t k = config.prior.k();
  SplitMix64 rng(derive_seed(config.rng_seed, 0));
  std::vector<ClassIndex> labels(config.new_user_count, 0);
  for (auto& label : labels) {
    const double u = rng.next_unit();
    double acc = 0.0;
    label = k - 1;
    for (ClassIndex c = 0; c < k; ++c) {
      acc += config.prior[c];
      if (u < acc) {
        label = c;
        break;
      }
    }
  }
  return labels;
}

RecipientSampler::RecipientSampler(const LabeledNetwork& net, const AlphaSpec& alpha)
    : net_(net), alpha_(alpha) {
  alpha_.validate(net.k());
  const std::uint32_t k = net.k();

  label_members_.resize(k);
  for (std::uint32_t idx = 0; idx < net.user_count(); ++idx) {
    label_members_[net.label_at(idx)].push_back(idx);
  }

  balls_.resize(static_cast<std::size_t>(k) * 2);
  extra_.assign(static_cast<std::size_t>(k) * 2,
                std::vector<std::uint32_t>(net.user_count(), 0));
  alpha_total_.resize(static_cast<std::size_t>(k) * 2);
  for (ClassIndex c = 0; c < k; ++c) {
    for (Direction d : {Direction::Send, Direction::Receive}) {
      const bool send = d == Direction::Send;
      auto& ball = balls_[list_index(c, d)];
      ball.reserve(send ? net.total_sent_by(c) : net.total_recv_by(c));
      for (std::uint32_t idx = 0; idx < net.user_count(); ++idx) {
        const std::uint64_t count =
            send ? net.recv_from_at(idx, c) : net.sent_to_at(idx, c);
        for (std::uint64_t i = 0; i < count; ++i) ball.push_back(idx);
      }
      alpha_total_[list_index(c, d)] =
          send ? alpha_.send_total(net, c) : alpha_.recv_total(net, c);
    }
  }
}

std::size_t RecipientSampler::list_index(ClassIndex c, Direction d) const {
  return static_cast<std::size_t>(c) * 2 + (d == Direction::Send ? 0 : 1);
}

UserId RecipientSampler::draw(ClassIndex c, Direction d, SplitMix64& rng) const {
  const std::size_t li = list_index(c, d);
  const auto& ball = balls_[li];
  const double alpha_total = alpha_total_[li];
  const double total = alpha_total + static_cast<double>(ball.size());
  if (total == 0.0) {
    throw DomainError("draw over an all-zero distribution (alpha 0, no counts)");
  }

  const bool send = d == Direction::Send;
  auto bucket_mass = [&](ClassIndex l) {
    return static_cast<double>(net_.label_count(l)) *
           (send ? alpha_.send(c, l) : alpha_.recv(l, c));
  };

  const double x = rng.next_unit() * total;
  if (x < alpha_total || ball.empty()) {
    // Alpha part: a label bucket by its count-weighted alpha mass, then a
    // uniform member. The bucket cumsum uses the same order as alpha_total's,
    // so a positive-mass bucket always catches x < alpha_total.
    double acc = 0.0;
    for (ClassIndex l = 0; l < net_.k(); ++l) {
      acc += bucket_mass(l);
      if (x < acc && !label_members_[l].empty()) {
        const auto& members = label_members_[l];
        return net_.id_at(members[rng.next_below(members.size())]);
      }
    }
    // Rounding pushed x onto the upper boundary; take the last live bucket.
    for (ClassIndex l = net_.k(); l-- > 0;) {
      if (bucket_mass(l) > 0.0 && !label_members_[l].empty()) {
        const auto& members = label_members_[l];
        return net_.id_at(members[rng.next_below(members.size())]);
      }
    }
  }
  return net_.id_at(ball[rng.next_below(ball.size())]);
}

void RecipientSampler::record(UserId partner, ClassIndex c, Direction d) {
  const std::uint32_t idx = net_.index_of(partner);
  const std::size_t li = list_index(c, d);
  balls_[li].push_back(idx);
  extra_[li][idx]++;
}

double RecipientSampler::weight(UserId partner, ClassIndex c, Direction d) const {
  const std::uint32_t idx = net_.index_of(partner);
  const bool send = d == Direction::Send;
  const ClassIndex lv = net_.label_at(idx);
  const double a = send ? alpha_.send(c, lv) : alpha_.recv(lv, c);
  const std::uint64_t e0 = send ? net_.recv_from_at(idx, c) : net_.sent_to_at(idx, c);
  return a + static_cast<double>(e0 + extra_[list_index(c, d)][idx]);
}

double RecipientSampler::total_weight(ClassIndex c, Direction d) const {
  const std::size_t li = list_index(c, d);
  return alpha_total_[li] + static_cast<double>(balls_[li].size());
}

namespace {

// Cumulative (user, direction) activity weights; send block first.
struct ActivityPicker {
  std::vector<double> cumulative;
  std::uint32_t m = 0;

  ActivityPicker(const ActivityDistribution& activity, std::uint32_t m_)
      : m(m_) {
    if (activity.weight_send.size() != m || activity.weight_recv.size() != m) {
      throw DomainError("activity weights must cover all new users");
    }
    cumulative.reserve(2 * static_cast<std::size_t>(m));
    double acc = 0.0;
    for (double w : activity.weight_send) {
      if (w < 0.0) throw DomainError("negative activity weight");
      acc += w;
      cumulative.push_back(acc);
    }
    for (double w : activity.weight_recv) {
      if (w < 0.0) throw DomainError("negative activity weight");
      acc += w;
      cumulative.push_back(acc);
    }
    if (acc <= 0.0) {
      throw DomainError("activity distribution needs a positive weight");
    }
  }

  std::pair<std::uint32_t, Direction> pick(SplitMix64& rng) const {
    const double x = rng.next_unit() * cumulative.back();
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), x);
    auto idx = static_cast<std::size_t>(std::min<std::ptrdiff_t>(
        it - cumulative.begin(), static_cast<std::ptrdiff_t>(cumulative.size()) - 1));
    return idx < m ? std::make_pair(static_cast<std::uint32_t>(idx), Direction::Send)
                   : std::make_pair(static_cast<std::uint32_t>(idx - m),
                                    Direction::Receive);
  }
};

}  // namespace

std::vector<EdgeEvent> sample_stream(const LabeledNetwork& net,
                                     std::span<const ClassIndex> labels,
                                     const SimConfig& config) {
  if (labels.size() != config.new_user_count) {
    throw DomainError("labels must cover all new users");
  }
  for (ClassIndex c : labels) {
    if (c >= net.k()) throw DomainError("new-user label out of range");
  }
  const auto& schedule = config.activity.schedule;
  if (config.activity.fixed_schedule() && schedule.size() != config.n_events) {
    throw DomainError("fixed schedule length must equal n_events");
  }

  SplitMix64 rng(derive_seed(config.rng_seed, 1));
  RecipientSampler sampler(net, config.alpha);
  std::vector<EdgeEvent> events;
  events.reserve(config.n_events);

  std::optional<ActivityPicker> picker;
  if (!config.activity.fixed_schedule()) {
    picker.emplace(config.activity, config.new_user_count);
  }

  for (std::uint64_t step = 0; step < config.n_events; ++step) {
    std::uint32_t user_index;
    Direction direction;
    if (picker.has_value()) {
      std::tie(user_index, direction) = picker->pick(rng);
    } else {
      std::tie(user_index, direction) = schedule[step];
      if (user_index >= config.new_user_count) {
        throw DomainError("schedule entry " + std::to_string(step) +
                          " names new user index " + std::to_string(user_index) +
                          " out of range");
      }
    }

    const ClassIndex c = labels[user_index];
    UserId partner;
    try {
      partner = sampler.draw(c, direction, rng);
    } catch (const DomainError& e) {
      throw DomainError("step " + std::to_string(step + 1) + ": " + e.what());
    }
    sampler.record(partner, c, direction);

    EdgeEvent ev;
    ev.seq = step + 1;
    ev.new_user = config.new_id_base + user_index;
    ev.preexisting_user = partner;
    ev.direction = direction;
    events.push_back(ev);
  }
  return events;
}

}  // namespace preattack
