#include "metaeval/noise.hpp"

#include <charconv>
#include <cmath>
#include <exception>
#include <ostream>
#include <string>

#include "metaeval/errors.hpp"
#include "metaeval/rng.hpp"
#include "metaeval/stats.hpp"

namespace metaeval {
namespace {

// Tags entering the seed-derivation hash. 0..3 match NoiseKind order.
constexpr std::uint64_t kind_code(NoiseKind k) {
  return static_cast<std::uint64_t>(k);
}
constexpr std::uint64_t kRandBaselineTag = 4;
constexpr std::uint64_t kSynthTag = 5;

// Snap a bias draw to a multiple of 2^-40. Scores at the magnitudes handled
// here are integer-valued, so the shifted cells stay exactly representable
// and intra-segment differences are bit-identical to the unshifted ones.
double quantize_bias(double c) { return std::nearbyint(c * 0x1.0p40) * 0x1.0p-40; }

void require_nonneg_level(const NoiseSpec& spec) {
  if (!(spec.level >= 0.0) || !std::isfinite(spec.level)) {
    throw InputError(std::string("noise level must be nonnegative for kind ") +
                     std::string(noise_kind_name(spec.kind)));
  }
}

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double theta(const ScoreMatrix& metric, const ScoreMatrix& human,
             Statistic stat) {
  return compute_statistic(pair(metric, human), stat).value;
}

// Mean over replicate scores, reduced in replicate order.
double ordered_mean(std::span<const double> values) {
  CompensatedSum s;
  for (double v : values) s.add(v);
  return s.value() / static_cast<double>(values.size());
}

}  // namespace

std::string_view noise_kind_name(NoiseKind k) {
  switch (k) {
    case NoiseKind::kRandom:
      return "random";
    case NoiseKind::kOutlier:
      return "outlier";
    case NoiseKind::kSystemBias:
      return "system";
    case NoiseKind::kSegmentBias:
      return "segment";
  }
  return "unknown";
}

std::optional<NoiseKind> parse_noise_kind(std::string_view token) {
  if (token == "random") return NoiseKind::kRandom;
  if (token == "outlier") return NoiseKind::kOutlier;
  if (token == "system" || token == "system_bias") return NoiseKind::kSystemBias;
  if (token == "segment" || token == "segment_bias") {
    return NoiseKind::kSegmentBias;
  }
  return std::nullopt;
}

ScoreMatrix inject_noise(const ScoreMatrix& y, const NoiseSpec& spec) {
  const std::size_t present = y.present_count();
  if (present == 0) {
    throw InputError("inject_noise: matrix has no present cells");
  }
  if (spec.kind == NoiseKind::kOutlier) {
    if (!std::isfinite(spec.level)) {
      throw InputError("outlier level must be finite");
    }
  } else {
    require_nonneg_level(spec);
  }

  ScoreMatrix out = y;
  SplitMix64 rng(spec.seed);
  const std::size_t n = y.num_systems();
  const std::size_t m = y.num_segments();

  switch (spec.kind) {
    case NoiseKind::kRandom:
      // One draw per present cell, row-major.
      for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t g = 0; g < m; ++g) {
          if (!y.present(s, g)) continue;
          out.set(s, g, y.at(s, g) + rng.normal(spec.level));
        }
      }
      break;
    case NoiseKind::kOutlier: {
      std::size_t target = rng.index(present);
      for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t g = 0; g < m; ++g) {
          if (!y.present(s, g)) continue;
          if (target == 0) {
            out.set(s, g, spec.level);
            return out;
          }
          --target;
        }
      }
      break;
    }
    case NoiseKind::kSystemBias: {
      const std::size_t s = rng.index(n);
      for (std::size_t g = 0; g < m; ++g) {
        if (!y.present(s, g)) continue;
        out.set(s, g, y.at(s, g) + spec.level);
      }
      break;
    }
    case NoiseKind::kSegmentBias:
      // One draw per segment, applied to all of its present cells.
      for (std::size_t g = 0; g < m; ++g) {
        const double c = quantize_bias(rng.normal(spec.level));
        for (std::size_t s = 0; s < n; ++s) {
          if (!y.present(s, g)) continue;
          out.set(s, g, y.at(s, g) + c);
        }
      }
      break;
  }
  return out;
}

ScoreMatrix sample_random_baseline(const ScoreMatrix& y, std::uint64_t seed) {
  const std::vector<double> pool = y.present_values();
  if (pool.empty()) {
    throw InputError("sample_random_baseline: matrix has no present cells");
  }
  ScoreMatrix out = y;
  SplitMix64 rng(seed);
  for (std::size_t s = 0; s < y.num_systems(); ++s) {
    for (std::size_t g = 0; g < y.num_segments(); ++g) {
      if (!y.present(s, g)) continue;
      out.set(s, g, pool[rng.index(pool.size())]);
    }
  }
  return out;
}

SdpBaseline sdp_baseline(const ScoreMatrix& y, Statistic stat,
                         std::uint64_t seed, std::size_t replicates) {
  if (replicates < 1) {
    throw InputError("sdp: replicates must be >= 1");
  }
  SdpBaseline b;
  b.theta_identity = theta(y, y, stat);

  std::vector<double> values(replicates);
  std::exception_ptr error;
  const auto reps = static_cast<std::ptrdiff_t>(replicates);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < reps; ++r) {
    try {
      const std::uint64_t rep_seed = hash64(
          {seed, kRandBaselineTag, 0, static_cast<std::uint64_t>(r)});
      values[static_cast<std::size_t>(r)] =
          theta(sample_random_baseline(y, rep_seed), y, stat);
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  b.theta_rand_mean = ordered_mean(values);
  return b;
}

namespace {

double sdp_at(const ScoreMatrix& y, Statistic stat, const SdpBaseline& base,
              NoiseKind kind, double level, std::uint64_t seed,
              std::size_t level_index, std::size_t replicates) {
  const double denom = base.theta_identity - base.theta_rand_mean;
  if (std::abs(denom) < 1e-9) {
    throw DegenerateStatisticError(
        std::string("sdp: degenerate random-baseline denominator for ") +
        std::string(statistic_name(stat)));
  }

  std::vector<double> values(replicates);
  std::exception_ptr error;
  const auto reps = static_cast<std::ptrdiff_t>(replicates);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < reps; ++r) {
    try {
      const std::uint64_t rep_seed =
          hash64({seed, kind_code(kind), static_cast<std::uint64_t>(level_index),
                  static_cast<std::uint64_t>(r)});
      const ScoreMatrix noisy = inject_noise(y, {kind, level, rep_seed});
      values[static_cast<std::size_t>(r)] = theta(noisy, y, stat);
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return (base.theta_identity - ordered_mean(values)) / denom;
}

void validate_levels(NoiseKind kind, std::span<const double> levels) {
  if (levels.empty()) {
    throw InputError("sweep: levels must be nonempty");
  }
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (!std::isfinite(levels[i])) {
      throw InputError("sweep: levels must be finite");
    }
    if (kind != NoiseKind::kOutlier && levels[i] < 0.0) {
      throw InputError("sweep: levels must be nonnegative for kind " +
                       std::string(noise_kind_name(kind)));
    }
    if (i > 0 && !(std::abs(levels[i]) > std::abs(levels[i - 1]))) {
      throw InputError("sweep: levels must be strictly increasing in magnitude");
    }
  }
}

}  // namespace

double sdp(const ScoreMatrix& y, Statistic stat, const NoiseSpec& spec,
           std::size_t replicates, std::size_t level_index) {
  const SdpBaseline base = sdp_baseline(y, stat, spec.seed, replicates);
  return sdp_at(y, stat, base, spec.kind, spec.level, spec.seed, level_index,
                replicates);
}

std::vector<SdpCurve> sweep(const ScoreMatrix& y,
                            std::span<const Statistic> statistics,
                            NoiseKind kind, std::span<const double> levels,
                            std::size_t replicates, std::uint64_t seed) {
  validate_levels(kind, levels);
  if (statistics.empty()) {
    throw InputError("sweep: no statistics selected");
  }

  std::vector<SdpCurve> curves;
  curves.reserve(statistics.size());
  for (const Statistic stat : statistics) {
    const SdpBaseline base = sdp_baseline(y, stat, seed, replicates);
    SdpCurve curve{stat, kind, {}, replicates, seed};
    curve.points.reserve(levels.size());
    for (std::size_t li = 0; li < levels.size(); ++li) {
      curve.points.emplace_back(
          levels[li],
          sdp_at(y, stat, base, kind, levels[li], seed, li, replicates));
    }
    curves.push_back(std::move(curve));
  }
  return curves;
}

void write_curves_csv(std::span<const SdpCurve> curves, std::ostream& out) {
  out << "statistic,kind,level,sdp,replicates,seed\n";
  for (const auto& curve : curves) {
    for (const auto& [level, value] : curve.points) {
      out << statistic_name(curve.statistic) << ','
          << noise_kind_name(curve.kind) << ',' << format_double(level) << ','
          << format_double(value) << ',' << curve.replicates << ','
          << curve.seed << '\n';
    }
  }
}

ScoreMatrix synthetic_mqm_matrix(std::size_t n_systems, std::size_t n_segments,
                                 std::uint64_t seed) {
  if (n_systems < 1 || n_segments < 1) {
    throw InputError("synthetic matrix needs at least one system and segment");
  }

  const auto pad = [](std::size_t value, std::size_t width) {
    std::string s = std::to_string(value);
    return std::string(width > s.size() ? width - s.size() : 0, '0') + s;
  };
  const std::size_t sys_width = std::to_string(n_systems).size();
  const std::size_t seg_width = std::to_string(n_segments).size();
  std::vector<std::string> systems, segments;
  systems.reserve(n_systems);
  segments.reserve(n_segments);
  for (std::size_t s = 1; s <= n_systems; ++s) {
    systems.push_back("sys" + pad(s, sys_width));
  }
  for (std::size_t g = 1; g <= n_segments; ++g) {
    segments.push_back("seg" + pad(g, seg_width));
  }

  ScoreMatrix m(std::move(systems), std::move(segments));
  SplitMix64 rng(hash64({seed, kSynthTag}));

  // Per-system error-rate multiplier and per-segment difficulty give the
  // matrix both within-segment spread and between-segment structure.
  std::vector<double> quality(n_systems);
  for (auto& q : quality) q = 0.5 + rng.uniform();
  std::vector<double> difficulty(n_segments);
  for (auto& d : difficulty) d = 0.25 + 1.75 * rng.uniform();

  for (std::size_t s = 0; s < n_systems; ++s) {
    for (std::size_t g = 0; g < n_segments; ++g) {
      const double rate = quality[s] * difficulty[g];
      double score;
      if (rng.uniform() < 0.01) {
        score = -25.0;  // non-translation floor
      } else {
        const double minors = static_cast<double>(rng.poisson(2.2 * rate));
        const double majors = static_cast<double>(rng.poisson(0.45 * rate));
        score = -(minors + 5.0 * majors);
        if (score < -100.0) score = -100.0;
      }
      m.set(s, g, score);
    }
  }
  return m;
}

}  // namespace metaeval
