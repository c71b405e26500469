#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace metaeval {

// Correlation value plus the pair count it was computed from. UNDEFINED
// (n < 2, or a zero-variance input) is a distinct state, never a sentinel
// number; callers that need a 0-for-undefined reporting rule apply it
// themselves.
struct CorrelationResult {
  std::optional<double> value;
  std::size_t n = 0;

  bool defined() const { return value.has_value(); }
};

// Compensated accumulator; branch-free TwoSum keeps the exact rounding error
// of every addition.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    const double vp = t - sum_;
    comp_ += (sum_ - (t - vp)) + (v - vp);
    sum_ = t;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Compensated total. Parallelized over fixed-size blocks whose partials are
// combined in block order, so the result does not depend on thread count.
double compensated_total(std::span<const double> xs);

// Population-moment Pearson correlation. UNDEFINED when n < 2 or either
// input is constant. Throws InputError on length mismatch.
CorrelationResult pearson(std::span<const double> u, std::span<const double> v);

// Pearson of fractional (average) ranks; ties get the mean of their rank span.
CorrelationResult spearman(std::span<const double> u, std::span<const double> v);

// All ordered pair differences u[i] - u[j], row-major over (i, j).
// Length n^2 with self pairs, n(n-1) without.
std::vector<double> pairwise_differences(std::span<const double> u,
                                         bool include_self);

// 1-based fractional ranks used by spearman().
std::vector<double> fractional_ranks(std::span<const double> u);

}  // namespace metaeval
