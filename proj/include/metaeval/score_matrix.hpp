#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace metaeval {

// N systems x M segments of real scores with explicit missing entries.
// Filled once during construction, then treated as immutable; concurrent
// readers are safe.
class ScoreMatrix {
 public:
  ScoreMatrix(std::vector<std::string> systems,
              std::vector<std::string> segments);

  std::size_t num_systems() const { return systems_.size(); }
  std::size_t num_segments() const { return segments_.size(); }
  const std::vector<std::string>& systems() const { return systems_; }
  const std::vector<std::string>& segments() const { return segments_; }

  // value must be finite; overwrites any previous entry.
  void set(std::size_t sys, std::size_t seg, double value);

  bool present(std::size_t sys, std::size_t seg) const {
    return present_[sys * num_segments() + seg] != 0;
  }
  // Only meaningful where present().
  double at(std::size_t sys, std::size_t seg) const {
    return values_[sys * num_segments() + seg];
  }
  std::optional<double> get(std::size_t sys, std::size_t seg) const {
    if (!present(sys, seg)) return std::nullopt;
    return at(sys, seg);
  }

  std::optional<std::size_t> system_index(std::string_view id) const;
  std::optional<std::size_t> segment_index(std::string_view id) const;

  std::size_t present_count() const;
  // Present values in row-major (system-major) order.
  std::vector<double> present_values() const;

 private:
  struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };
  using IndexMap =
      std::unordered_map<std::string, std::size_t, StringHash, std::equal_to<>>;

  std::vector<std::string> systems_;
  std::vector<std::string> segments_;
  IndexMap system_lookup_;
  IndexMap segment_lookup_;
  std::vector<double> values_;
  std::vector<std::uint8_t> present_;
};

enum class ScoreFormat { kTsv };

// Reads a scores TSV: header `segment_id<TAB>system_id<TAB>score`, one row
// per cell, `NA` for a missing score, `#` lines ignored. Axes are ordered by
// first appearance; duplicate cells and malformed rows are errors.
ScoreMatrix load_scores(const std::filesystem::path& path,
                        ScoreFormat format = ScoreFormat::kTsv);

// Writes the same TSV format, one row per cell (NA for missing), grouped by
// segment. Scores are printed in shortest round-trip form.
void write_scores(const ScoreMatrix& m, std::ostream& out);
void write_scores(const ScoreMatrix& m, const std::filesystem::path& path);

// Metric scores x and human scores y on identical axes. Positions missing on
// either side are excluded from every downstream statistic.
struct PairedData {
  ScoreMatrix x;
  ScoreMatrix y;
  std::size_t dropped_systems = 0;
  std::size_t dropped_segments = 0;
};

// Intersects the two matrices' axes (order taken from y) and reindexes both.
// Throws InputError if the intersection is empty on either axis.
PairedData pair(const ScoreMatrix& x, const ScoreMatrix& y);

// Jointly-present cells of one segment, by index into the paired axes.
// Cheap form used by the statistic kernels.
struct JointSegment {
  std::uint32_t segment = 0;
  std::vector<std::uint32_t> systems;
  std::vector<double> x;
  std::vector<double> y;
};

// One entry per segment (possibly with 0 or 1 joint systems; consumers
// decide what to skip), in segment order.
std::vector<JointSegment> joint_segments(const PairedData& d);

// Identifier-carrying view of one segment's joint scores.
struct SegmentSlice {
  std::string segment_id;
  std::vector<std::string> systems;
  std::vector<double> x_scores;
  std::vector<double> y_scores;
};

std::vector<SegmentSlice> segment_slices(const PairedData& d);

}  // namespace metaeval
