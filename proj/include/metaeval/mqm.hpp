#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "metaeval/meta_metrics.hpp"
#include "metaeval/score_matrix.hpp"
#include "metaeval/stats.hpp"

namespace metaeval {

// One human error annotation. weight is the severity penalty magnitude
// (nonnegative; zero-weight categories exist and are kept).
struct MqmRecord {
  std::string segment_id;
  std::string system_id;
  std::string category;
  double weight = 0.0;
};

struct CategoryStats {
  std::string category;
  std::size_t count = 0;
  double avg_weight = 0.0;
  double importance = 0.0;  // sum of weights == count * avg_weight
};

// Reads `segment_id\tsystem_id\tcategory\tweight` rows; `#` lines ignored.
// An empty file is a valid empty annotation set. Negative weights are errors.
std::vector<MqmRecord> load_mqm(const std::filesystem::path& path);

// Axes template built from the records' (segment, system) ids in
// first-appearance order; all cells left missing.
ScoreMatrix axes_from_records(std::span<const MqmRecord> records);

// Cell = -(sum of that cell's annotation weights); unannotated cells are 0
// (an error-free translation), never missing.
ScoreMatrix total_human_scores(std::span<const MqmRecord> records,
                               const ScoreMatrix& axes);

// Same aggregation restricted to one category: the ideal detector for that
// error type. A category absent from the records yields an all-zero matrix
// and sets *category_present to false when provided.
ScoreMatrix oracle_metric(std::span<const MqmRecord> records,
                          std::string_view category, const ScoreMatrix& axes,
                          bool* category_present = nullptr);

// One row per distinct category, sorted by category name.
std::vector<CategoryStats> category_stats(std::span<const MqmRecord> records);

// Per-category oracle scores under each statistic, plus Spearman rank
// correlations of those scores against importance, average weight and count.
struct AlignmentReport {
  std::vector<Statistic> statistics;

  struct Row {
    std::string category;
    double importance = 0.0;
    std::size_t count = 0;
    double avg_weight = 0.0;
    std::vector<double> scores;  // aligned with `statistics`
  };
  std::vector<Row> rows;  // sorted by category name

  struct SpearmanRow {
    Statistic statistic;
    CorrelationResult vs_importance;
    CorrelationResult vs_avg_weight;
    CorrelationResult vs_count;
  };
  std::vector<SpearmanRow> spearman;
};

// Requires at least 3 distinct categories.
AlignmentReport alignment_report(std::span<const MqmRecord> records,
                                 const ScoreMatrix& axes,
                                 std::span<const Statistic> statistics);

}  // namespace metaeval
