#pragma once

#include <span>
#include <vector>

namespace lmqf {

/// Running sum carried as an unevaluated pair (high, low) using Knuth's TwoSum,
/// so every addition is an error-free transformation. The result depends only on
/// the order of additions, never on scheduling.
class CompensatedSum {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(double value) : high_(value) {}

  CompensatedSum& operator+=(double x) {
    const double t = high_ + x;
    const double z = t - high_;
    low_ += (high_ - (t - z)) + (x - z);
    high_ = t;
    return *this;
  }

  CompensatedSum& operator+=(const CompensatedSum& other) {
    *this += other.high_;
    low_ += other.low_;
    return *this;
  }

  double value() const { return high_ + low_; }
  double high() const { return high_; }
  double low() const { return low_; }

 private:
  double high_ = 0.0;
  double low_ = 0.0;
};

/// Combines partial sums pairwise in a fixed binary tree: (0+1), (2+3), ... then
/// the same on the results. Identical inputs give bit-identical outputs.
inline CompensatedSum tree_reduce(std::span<const CompensatedSum> parts) {
  if (parts.empty()) return {};
  std::vector<CompensatedSum> level(parts.begin(), parts.end());
  while (level.size() > 1) {
    std::vector<CompensatedSum> next;
    next.reserve((level.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < level.size(); i += 2) {
      CompensatedSum merged = level[i];
      merged += level[i + 1];
      next.push_back(merged);
    }
    if (level.size() % 2 == 1) next.push_back(level.back());
    level = std::move(next);
  }
  return level.front();
}

/// Compensated sum of a sequence in index order.
inline double compensated_sum(std::span<const double> values) {
  CompensatedSum sum;
  for (double v : values) sum += v;
  return sum.value();
}

}  // namespace lmqf
