#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "metaeval/meta_metrics.hpp"
#include "metaeval/score_matrix.hpp"

namespace metaeval {

enum class NoiseKind { kRandom, kOutlier, kSystemBias, kSegmentBias };

std::string_view noise_kind_name(NoiseKind k);
std::optional<NoiseKind> parse_noise_kind(std::string_view token);

// level is the standard deviation for kRandom/kSegmentBias, the additive
// shift for kSystemBias (all nonnegative), and the literal value written
// into the chosen cell for kOutlier (any finite real, typically a large
// negative score).
struct NoiseSpec {
  NoiseKind kind = NoiseKind::kRandom;
  double level = 0.0;
  std::uint64_t seed = 0;
};

// Returns a perturbed copy of y with the same shape; missing cells stay
// missing. Deterministic given the seed.
ScoreMatrix inject_noise(const ScoreMatrix& y, const NoiseSpec& spec);

// Every present position refilled with a draw (with replacement) from the
// multiset of y's present values. The random-guess baseline.
ScoreMatrix sample_random_baseline(const ScoreMatrix& y, std::uint64_t seed);

// Identity score theta(Y, Y) and the replicate-averaged random baseline
// theta(Y, X_rand) for one statistic. The denominator of the degradation
// ratio is theta_identity - theta_rand_mean.
struct SdpBaseline {
  double theta_identity = 0.0;
  double theta_rand_mean = 0.0;
};

SdpBaseline sdp_baseline(const ScoreMatrix& y, Statistic stat,
                         std::uint64_t seed, std::size_t replicates);

// Score degradation proportion:
//   (theta(Y,Y) - mean_r theta(Y, X_noise_r)) / (theta(Y,Y) - mean_r theta(Y, X_rand_r))
// Replicate r of a noise process uses the derived seed
// hash64({seed, kind_code, level_index, r}) with kind codes
// random=0, outlier=1, system=2, segment=3; the baseline replicates use
// hash64({seed, 4, 0, r}) so the denominator is shared across levels.
// Throws DegenerateStatisticError when |denominator| < 1e-9.
double sdp(const ScoreMatrix& y, Statistic stat, const NoiseSpec& spec,
           std::size_t replicates, std::size_t level_index = 0);

struct SdpCurve {
  Statistic statistic;
  NoiseKind kind;
  std::vector<std::pair<double, double>> points;  // (level, sdp)
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
};

// Full statistic x level grid. Levels must be finite and strictly increasing
// in magnitude; for every kind except kOutlier they must also be nonnegative.
std::vector<SdpCurve> sweep(const ScoreMatrix& y,
                            std::span<const Statistic> statistics,
                            NoiseKind kind, std::span<const double> levels,
                            std::size_t replicates, std::uint64_t seed);

// `statistic,kind,level,sdp,replicates,seed` rows.
void write_curves_csv(std::span<const SdpCurve> curves, std::ostream& out);

// Synthetic ground truth with the shape of human error-annotation totals:
// integer scores in [-100, 0] built from -1 minor and -5 major increments,
// an occasional -25 floor, with per-system quality and per-segment
// difficulty so segments carry real within-segment signal.
ScoreMatrix synthetic_mqm_matrix(std::size_t n_systems, std::size_t n_segments,
                                 std::uint64_t seed);

}  // namespace metaeval
