#pragma once

#include <span>
#include <utility>

namespace preattack {

// ROC AUC via the Mann-Whitney U statistic: the probability that a uniformly
// chosen positive outscores a uniformly chosen negative, ties counted half.
// Needs at least one positive and one negative.
double auc(std::span<const std::pair<double, bool>> scored);

}  // namespace preattack
