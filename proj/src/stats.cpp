#include "metaeval/stats.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <string>

#include "metaeval/errors.hpp"

namespace metaeval {
namespace {

// Reduction block size. Partials are always formed per block and combined in
// block order, so serial and parallel execution produce identical bits.
constexpr std::size_t kBlock = 4096;

// Blocks below this count run serially; the block structure (and therefore
// the result) is unchanged, only the omp region is skipped.
constexpr std::ptrdiff_t kMinParallelBlocks = 8;

std::size_t block_count(std::size_t n) {
  return n == 0 ? 0 : (n + kBlock - 1) / kBlock;
}

bool all_equal(std::span<const double> xs) {
  const double first = xs[0];
  const auto n = static_cast<std::ptrdiff_t>(xs.size());
  bool equal = true;
#pragma omp parallel for schedule(static) reduction(&& : equal) \
    if (n > kMinParallelBlocks * static_cast<std::ptrdiff_t>(kBlock))
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    equal = equal && (xs[static_cast<std::size_t>(i)] == first);
  }
  return equal;
}

struct CenteredMoments {
  double suv = 0.0;  // sum (u - mu)(v - mv)
  double suu = 0.0;  // sum (u - mu)^2
  double svv = 0.0;  // sum (v - mv)^2
};

CenteredMoments centered_moments(std::span<const double> u,
                                 std::span<const double> v, double mu,
                                 double mv) {
  const std::size_t n = u.size();
  const std::size_t blocks = block_count(n);
  std::vector<std::array<double, 3>> partial(blocks);
  const auto nb = static_cast<std::ptrdiff_t>(blocks);
#pragma omp parallel for schedule(static) if (nb >= kMinParallelBlocks)
  for (std::ptrdiff_t b = 0; b < nb; ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
    const std::size_t hi = std::min(n, lo + kBlock);
    CompensatedSum suv, suu, svv;
    for (std::size_t i = lo; i < hi; ++i) {
      const double du = u[i] - mu;
      const double dv = v[i] - mv;
      suv.add(du * dv);
      suu.add(du * du);
      svv.add(dv * dv);
    }
    partial[static_cast<std::size_t>(b)] = {suv.value(), suu.value(),
                                            svv.value()};
  }
  CompensatedSum suv, suu, svv;
  for (const auto& p : partial) {
    suv.add(p[0]);
    suu.add(p[1]);
    svv.add(p[2]);
  }
  return {suv.value(), suu.value(), svv.value()};
}

}  // namespace

double compensated_total(std::span<const double> xs) {
  const std::size_t n = xs.size();
  const std::size_t blocks = block_count(n);
  if (blocks <= 1) {
    CompensatedSum s;
    for (double x : xs) s.add(x);
    return s.value();
  }
  std::vector<double> partial(blocks);
  const auto nb = static_cast<std::ptrdiff_t>(blocks);
#pragma omp parallel for schedule(static) if (nb >= kMinParallelBlocks)
  for (std::ptrdiff_t b = 0; b < nb; ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
    const std::size_t hi = std::min(n, lo + kBlock);
    CompensatedSum s;
    for (std::size_t i = lo; i < hi; ++i) s.add(xs[i]);
    partial[static_cast<std::size_t>(b)] = s.value();
  }
  CompensatedSum total;
  for (double p : partial) total.add(p);
  return total.value();
}

CorrelationResult pearson(std::span<const double> u,
                          std::span<const double> v) {
  if (u.size() != v.size()) {
    throw InputError("pearson: length mismatch (" + std::to_string(u.size()) +
                     " vs " + std::to_string(v.size()) + ")");
  }
  const std::size_t n = u.size();
  if (n < 2) return {std::nullopt, n};
  // A constant vector has zero variance; detect it exactly rather than
  // trusting a computed variance that may underflow to a tiny nonzero value.
  if (all_equal(u) || all_equal(v)) return {std::nullopt, n};

  const double dn = static_cast<double>(n);
  const double mu = compensated_total(u) / dn;
  const double mv = compensated_total(v) / dn;
  const CenteredMoments m = centered_moments(u, v, mu, mv);
  if (!(m.suu > 0.0) || !(m.svv > 0.0)) return {std::nullopt, n};

  // The 1/n factors cancel between covariance and the variance product.
  double r = m.suv / std::sqrt(m.suu * m.svv);
  r = std::clamp(r, -1.0, 1.0);
  return {r, n};
}

CorrelationResult spearman(std::span<const double> u,
                           std::span<const double> v) {
  if (u.size() != v.size()) {
    throw InputError("spearman: length mismatch (" + std::to_string(u.size()) +
                     " vs " + std::to_string(v.size()) + ")");
  }
  if (u.size() < 2) return {std::nullopt, u.size()};
  const std::vector<double> ru = fractional_ranks(u);
  const std::vector<double> rv = fractional_ranks(v);
  return pearson(ru, rv);
}

std::vector<double> fractional_ranks(std::span<const double> u) {
  const std::size_t n = u.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return u[a] < u[b]; });

  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && u[order[j]] == u[order[i]]) ++j;
    // Mean of the 1-based ranks i+1 .. j.
    const double rank = 0.5 * static_cast<double>(i + j + 1);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

std::vector<double> pairwise_differences(std::span<const double> u,
                                         bool include_self) {
  const std::size_t n = u.size();
  if (n == 0) return {};
  const std::size_t row = include_self ? n : n - 1;
  std::vector<double> out(n * row);
  const auto pn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static) if (pn > 256)
  for (std::ptrdiff_t pi = 0; pi < pn; ++pi) {
    const auto i = static_cast<std::size_t>(pi);
    std::size_t k = i * row;
    for (std::size_t j = 0; j < n; ++j) {
      if (!include_self && j == i) continue;
      out[k++] = u[i] - u[j];
    }
  }
  return out;
}

}  // namespace metaeval
