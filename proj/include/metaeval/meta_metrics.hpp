#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "metaeval/score_matrix.hpp"

namespace metaeval {

enum class Statistic { kGlobalPearson, kSegwisePearson, kAccEq, kPdp };

// Canonical name used in report columns and CSV rows.
std::string_view statistic_name(Statistic s);

// Accepts the canonical names plus the short CLI tokens
// (global, segwise, acceq, pdp).
std::optional<Statistic> parse_statistic(std::string_view token);

// Statistic-specific metadata carried next to a reported value.
struct ScoreDetail {
  // The raw statistic was UNDEFINED (constant predictions / too little
  // variation) and 0 was reported in its place.
  bool undefined = false;
  // Cells (global), diff entries (pdp), unordered pairs (acc_eq),
  // usable segments (segwise).
  std::size_t n = 0;
  std::size_t segments_used = 0;
  std::size_t segments_skipped = 0;      // fewer than 2 joint systems
  std::size_t zero_variance_segments = 0;  // contributed 0 to the mean
  std::optional<double> epsilon;         // acc_eq tie threshold
  std::size_t correct_pairs = 0;         // acc_eq numerator
};

struct MetaScore {
  Statistic statistic;
  double value = 0.0;
  ScoreDetail detail;
};

// Intra-segment ordered pairwise differences. For every unordered joint
// system pair both directions are present, so the entry set is closed under
// (dx, dy) -> (-dx, -dy). Axes are copied from the paired data; entries are
// index-based to keep the set compact.
struct PairwiseDiffSet {
  std::vector<std::string> systems;
  std::vector<std::string> segments;
  std::vector<std::uint32_t> segment;
  std::vector<std::uint32_t> sys_a;
  std::vector<std::uint32_t> sys_b;
  std::vector<double> dx;
  std::vector<double> dy;

  std::size_t size() const { return dx.size(); }
};

// Pearson over all jointly-present cells, flattened segment-major.
// Throws DegenerateStatisticError below 2 cells; an UNDEFINED correlation is
// reported as 0 with detail.undefined set.
MetaScore global_pearson(const PairedData& d);

// Unweighted mean of per-segment Pearson values. Segments with fewer than 2
// joint systems are skipped; segments whose correlation is UNDEFINED
// contribute 0. Throws DegenerateStatisticError when no segment is usable.
MetaScore segmentwise_pearson(const PairedData& d);

// Both ordered differences for every unordered intra-segment system pair,
// ordered by segment then row-major over system pairs.
PairwiseDiffSet build_pairwise_diffs(const PairedData& d);

// Pearson over the intra-segment pairwise differences. Degenerate inputs
// (no pairs, or constant differences) yield 0 with detail.undefined set.
MetaScore pdp(const PairedData& d);

// Pairwise ranking accuracy over unordered intra-segment pairs, counting
// correctly predicted ties: a pair is correct when the human scores are
// exactly equal and |dx| <= epsilon, or when they differ, |dx| > epsilon and
// the difference signs agree.
MetaScore acc_eq(const PairedData& d, double epsilon);

// Maximizes acc_eq over epsilon in {0} u {observed |dx|} u midpoints;
// objective ties break toward the smallest epsilon. The chosen epsilon is
// reported in detail.epsilon.
MetaScore calibrate_acc_eq(const PairedData& d);

// Dispatch; Statistic::kAccEq means the calibrated variant.
MetaScore compute_statistic(const PairedData& d, Statistic s);

}  // namespace metaeval
