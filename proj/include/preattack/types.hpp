#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace preattack {

using UserId = std::uint64_t;
using ClassIndex = std::uint32_t;

// Binary convention used everywhere: class 0 = real, class 1 = fake.
inline constexpr ClassIndex kRealClass = 0;
inline constexpr ClassIndex kFakeClass = 1;

enum class Direction : std::uint8_t { Send, Receive };

// One directed friend-request event in the new-user stream. Send means the
// new user requested preexisting_user; Receive means preexisting_user
// requested the new user. seq strictly increases within a stream.
struct EdgeEvent {
  std::uint64_t seq = 0;
  UserId new_user = 0;
  UserId preexisting_user = 0;
  Direction direction = Direction::Send;

  bool operator==(const EdgeEvent&) const = default;
};

// Closed id interval reserved for new users; disjoint from preexisting ids.
struct IdRange {
  UserId lo = 0;
  UserId hi = 0;

  bool contains(UserId id) const { return id >= lo && id <= hi; }
};

// Semantic failure: inputs violate a model or data contract.
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem failure: missing, unreadable or unwritable file.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Class prior over k labels; entries in [0,1], summing to 1 within 1e-12.
class Prior {
 public:
  explicit Prior(std::vector<double> pi);

  static Prior binary(double p_fake) { return Prior({1.0 - p_fake, p_fake}); }

  std::uint32_t k() const { return static_cast<std::uint32_t>(pi_.size()); }
  double operator[](ClassIndex c) const { return pi_[c]; }
  const std::vector<double>& values() const { return pi_; }
  double p_fake() const;

 private:
  std::vector<double> pi_;
};

}  // namespace preattack
