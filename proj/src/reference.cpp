#include "metaeval/reference.hpp"

#include <algorithm>
#include <cmath>

namespace metaeval::reference {

double mean(std::span<const double> xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double variance(std::span<const double> xs) {
  const double m = mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return s / static_cast<double>(xs.size());
}

double covariance(std::span<const double> u, std::span<const double> v) {
  const double mu = mean(u);
  const double mv = mean(v);
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += (u[i] - mu) * (v[i] - mv);
  return s / static_cast<double>(u.size());
}

std::optional<double> pearson(std::span<const double> u,
                              std::span<const double> v) {
  const std::size_t n = u.size();
  if (n < 2 || n != v.size()) return std::nullopt;
  double su = 0.0, sv = 0.0, suv = 0.0, suu = 0.0, svv = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    su += u[i];
    sv += v[i];
    suv += u[i] * v[i];
    suu += u[i] * u[i];
    svv += v[i] * v[i];
  }
  const double dn = static_cast<double>(n);
  const double num = dn * suv - su * sv;
  const double den_u = dn * suu - su * su;
  const double den_v = dn * svv - sv * sv;
  if (!(den_u > 0.0) || !(den_v > 0.0)) return std::nullopt;
  return num / std::sqrt(den_u * den_v);
}

std::vector<double> ranks_by_counting(std::span<const double> xs) {
  const std::size_t n = xs.size();
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t below = 0, equal = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (xs[j] < xs[i]) ++below;
      if (xs[j] == xs[i]) ++equal;
    }
    ranks[i] = static_cast<double>(below) + 0.5 * static_cast<double>(equal + 1);
  }
  return ranks;
}

std::optional<double> spearman(std::span<const double> u,
                               std::span<const double> v) {
  if (u.size() != v.size() || u.size() < 2) return std::nullopt;
  return pearson(ranks_by_counting(u), ranks_by_counting(v));
}

double acc_eq_value(const PairedData& d, double epsilon) {
  std::size_t correct = 0, total = 0;
  for (const auto& slice : segment_slices(d)) {
    const std::size_t k = slice.x_scores.size();
    for (std::size_t i = 0; i + 1 < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j) {
        ++total;
        const double dx = slice.x_scores[i] - slice.x_scores[j];
        const double dy = slice.y_scores[i] - slice.y_scores[j];
        if (slice.y_scores[i] == slice.y_scores[j]) {
          if (std::abs(dx) <= epsilon) ++correct;
        } else if (std::abs(dx) > epsilon && ((dx > 0.0) == (dy > 0.0))) {
          ++correct;
        }
      }
    }
  }
  return total == 0 ? 0.0
                    : static_cast<double>(correct) / static_cast<double>(total);
}

double best_acc_eq_on_grid(const PairedData& d, std::size_t grid_points) {
  double max_adx = 0.0;
  for (const auto& slice : segment_slices(d)) {
    const std::size_t k = slice.x_scores.size();
    for (std::size_t i = 0; i + 1 < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j) {
        max_adx =
            std::max(max_adx, std::abs(slice.x_scores[i] - slice.x_scores[j]));
      }
    }
  }
  double best = 0.0;
  for (std::size_t g = 0; g < grid_points; ++g) {
    const double eps = max_adx * static_cast<double>(g) /
                       static_cast<double>(grid_points - 1);
    best = std::max(best, acc_eq_value(d, eps));
  }
  return best;
}

}  // namespace metaeval::reference
