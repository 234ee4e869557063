#include "preattack/auc.hpp"

#include <algorithm>
#include <vector>

#include "preattack/types.hpp"

namespace preattack {

double auc(std::span<const std::pair<double, bool>> scored) {
  std::uint64_t n_pos = 0;
  std::uint64_t n_neg = 0;
  for (const auto& [score, positive] : scored) {
    (positive ? n_pos : n_neg)++;
  }
  if (n_pos == 0 || n_neg == 0) {
    throw DomainError("AUC needs at least one positive and one negative");
  }

  std::vector<std::pair<double, bool>> sorted(scored.begin(), scored.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  // Walk tie groups: each positive in a group beats every negative strictly
  // below it and half-beats the negatives tied with it.
  double concordant = 0.0;
  std::uint64_t neg_below = 0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    std::uint64_t pos_here = 0;
    std::uint64_t neg_here = 0;
    while (j < sorted.size() && sorted[j].first == sorted[i].first) {
      (sorted[j].second ? pos_here : neg_here)++;
      ++j;
    }
    concordant += static_cast<double>(pos_here) *
                  (static_cast<double>(neg_below) + 0.5 * static_cast<double>(neg_here));
    neg_below += neg_here;
    i = j;
  }
  return concordant / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

}  // namespace preattack
