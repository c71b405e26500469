#pragma once

#include <optional>
#include <span>
#include <vector>

#include "metaeval/score_matrix.hpp"

namespace metaeval::reference {

// Serial reference implementations used as independent oracles by the test
// and benchmark targets. They deliberately take different computation routes
// than the library kernels: plain uncompensated sums, raw-moment formulas,
// brute-force searches. Not part of the shipped library surface.

double mean(std::span<const double> xs);
double variance(std::span<const double> xs);             // population
double covariance(std::span<const double> u, std::span<const double> v);

// Textbook raw-moment form (n*Suv - Su*Sv) / sqrt((n*Suu - Su^2)(n*Svv - Sv^2)).
std::optional<double> pearson(std::span<const double> u,
                              std::span<const double> v);

// Rank-by-counting (quadratic) then raw-moment Pearson.
std::optional<double> spearman(std::span<const double> u,
                               std::span<const double> v);
std::vector<double> ranks_by_counting(std::span<const double> xs);

// Direct recount of the tie-aware pairwise accuracy at a fixed threshold,
// walking segment_slices().
double acc_eq_value(const PairedData& d, double epsilon);

// Brute-force calibration oracle: max of acc_eq_value over a dense uniform
// epsilon grid spanning [0, max |dx|].
double best_acc_eq_on_grid(const PairedData& d, std::size_t grid_points);

}  // namespace metaeval::reference
