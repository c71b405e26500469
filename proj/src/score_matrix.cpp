#include "metaeval/score_matrix.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <unordered_set>

#include "metaeval/errors.hpp"

namespace metaeval {
namespace {

void check_unique(const std::vector<std::string>& ids, const char* axis) {
  std::unordered_set<std::string_view> seen;
  for (const auto& id : ids) {
    if (!seen.insert(id).second) {
      throw InputError(std::string("duplicate ") + axis + " id: " + id);
    }
  }
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> cols;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      cols.push_back(line.substr(start));
      return cols;
    }
    cols.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

double parse_double(std::string_view tok, const std::string& context) {
  double v = 0.0;
  const char* end = tok.data() + tok.size();
  const auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw InputError(context + ": non-numeric score token '" +
                     std::string(tok) + "'");
  }
  if (!std::isfinite(v)) {
    throw InputError(context + ": score must be finite, got '" +
                     std::string(tok) + "'");
  }
  return v;
}

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

ScoreMatrix::ScoreMatrix(std::vector<std::string> systems,
                         std::vector<std::string> segments)
    : systems_(std::move(systems)), segments_(std::move(segments)) {
  if (systems_.empty() || segments_.empty()) {
    throw InputError("score matrix needs at least one system and one segment");
  }
  check_unique(systems_, "system");
  check_unique(segments_, "segment");
  for (std::size_t i = 0; i < systems_.size(); ++i) {
    system_lookup_.emplace(systems_[i], i);
  }
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    segment_lookup_.emplace(segments_[i], i);
  }
  values_.assign(systems_.size() * segments_.size(), 0.0);
  present_.assign(systems_.size() * segments_.size(), 0);
}

void ScoreMatrix::set(std::size_t sys, std::size_t seg, double value) {
  if (!std::isfinite(value)) {
    throw InputError("score must be finite");
  }
  values_[sys * num_segments() + seg] = value;
  present_[sys * num_segments() + seg] = 1;
}

std::optional<std::size_t> ScoreMatrix::system_index(
    std::string_view id) const {
  const auto it = system_lookup_.find(id);
  if (it == system_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> ScoreMatrix::segment_index(
    std::string_view id) const {
  const auto it = segment_lookup_.find(id);
  if (it == segment_lookup_.end()) return std::nullopt;
  return it->second;
}

std::size_t ScoreMatrix::present_count() const {
  std::size_t n = 0;
  for (auto p : present_) n += p;
  return n;
}

std::vector<double> ScoreMatrix::present_values() const {
  std::vector<double> out;
  out.reserve(values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (present_[i]) out.push_back(values_[i]);
  }
  return out;
}

ScoreMatrix load_scores(const std::filesystem::path& path,
                        ScoreFormat /*format*/) {
  std::ifstream in(path);
  if (!in) {
    throw InputError("cannot open scores file " + path.string());
  }

  struct RawRow {
    std::string segment;
    std::string system;
    std::optional<double> score;
    std::size_t line_no;
  };
  std::vector<RawRow> rows;
  bool header_seen = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const std::string context = path.string() + ":" + std::to_string(line_no);
    const auto cols = split_tabs(line);
    if (!header_seen) {
      if (cols.size() != 3 || cols[0] != "segment_id" ||
          cols[1] != "system_id" || cols[2] != "score") {
        throw InputError(context +
                         ": expected header 'segment_id\\tsystem_id\\tscore'");
      }
      header_seen = true;
      continue;
    }
    if (cols.size() != 3) {
      throw InputError(context + ": expected 3 tab-separated columns, got " +
                       std::to_string(cols.size()));
    }
    if (cols[0].empty() || cols[1].empty()) {
      throw InputError(context + ": empty segment or system id");
    }
    std::optional<double> score;
    if (cols[2] != "NA") score = parse_double(cols[2], context);
    rows.push_back(
        {std::string(cols[0]), std::string(cols[1]), score, line_no});
  }
  if (in.bad()) {
    throw InputError("I/O error while reading " + path.string());
  }
  if (rows.empty()) {
    throw InputError(path.string() + ": no rows");
  }

  // Axes in first-appearance order.
  std::vector<std::string> systems, segments;
  std::unordered_set<std::string_view> sys_seen, seg_seen;
  for (const auto& r : rows) {
    if (seg_seen.insert(r.segment).second) segments.push_back(r.segment);
    if (sys_seen.insert(r.system).second) systems.push_back(r.system);
  }

  ScoreMatrix m(std::move(systems), std::move(segments));
  std::vector<std::uint8_t> cell_seen(m.num_systems() * m.num_segments(), 0);
  for (const auto& r : rows) {
    const std::size_t sys = *m.system_index(r.system);
    const std::size_t seg = *m.segment_index(r.segment);
    auto& seen = cell_seen[sys * m.num_segments() + seg];
    if (seen) {
      throw InputError(path.string() + ":" + std::to_string(r.line_no) +
                       ": duplicate cell (" + r.segment + ", " + r.system +
                       ")");
    }
    seen = 1;
    if (r.score) m.set(sys, seg, *r.score);
  }
  return m;
}

void write_scores(const ScoreMatrix& m, std::ostream& out) {
  out << "segment_id\tsystem_id\tscore\n";
  for (std::size_t seg = 0; seg < m.num_segments(); ++seg) {
    for (std::size_t sys = 0; sys < m.num_systems(); ++sys) {
      out << m.segments()[seg] << '\t' << m.systems()[sys] << '\t';
      if (m.present(sys, seg)) {
        out << format_double(m.at(sys, seg));
      } else {
        out << "NA";
      }
      out << '\n';
    }
  }
}

void write_scores(const ScoreMatrix& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw InputError("cannot open output file " + path.string());
  }
  write_scores(m, out);
  out.flush();
  if (!out) {
    throw InputError("I/O error while writing " + path.string());
  }
}

PairedData pair(const ScoreMatrix& x, const ScoreMatrix& y) {
  // Intersection, ordered by y so reports are stable regardless of metric
  // file ordering.
  std::vector<std::string> systems, segments;
  for (const auto& id : y.systems()) {
    if (x.system_index(id)) systems.push_back(id);
  }
  for (const auto& id : y.segments()) {
    if (x.segment_index(id)) segments.push_back(id);
  }
  if (systems.empty()) {
    throw InputError("pair: empty system intersection");
  }
  if (segments.empty()) {
    throw InputError("pair: empty segment intersection");
  }

  PairedData d{ScoreMatrix(systems, segments), ScoreMatrix(systems, segments),
               0, 0};
  d.dropped_systems = x.num_systems() + y.num_systems() - 2 * systems.size();
  d.dropped_segments =
      x.num_segments() + y.num_segments() - 2 * segments.size();

  for (std::size_t s = 0; s < systems.size(); ++s) {
    const std::size_t xs = *x.system_index(systems[s]);
    const std::size_t ys = *y.system_index(systems[s]);
    for (std::size_t g = 0; g < segments.size(); ++g) {
      const std::size_t xg = *x.segment_index(segments[g]);
      const std::size_t yg = *y.segment_index(segments[g]);
      if (const auto v = x.get(xs, xg)) d.x.set(s, g, *v);
      if (const auto v = y.get(ys, yg)) d.y.set(s, g, *v);
    }
  }
  return d;
}

std::vector<JointSegment> joint_segments(const PairedData& d) {
  const std::size_t n = d.y.num_systems();
  const std::size_t m = d.y.num_segments();
  std::vector<JointSegment> out(m);
  for (std::size_t g = 0; g < m; ++g) {
    JointSegment& js = out[g];
    js.segment = static_cast<std::uint32_t>(g);
    for (std::size_t s = 0; s < n; ++s) {
      if (d.x.present(s, g) && d.y.present(s, g)) {
        js.systems.push_back(static_cast<std::uint32_t>(s));
        js.x.push_back(d.x.at(s, g));
        js.y.push_back(d.y.at(s, g));
      }
    }
  }
  return out;
}

std::vector<SegmentSlice> segment_slices(const PairedData& d) {
  const auto joint = joint_segments(d);
  std::vector<SegmentSlice> out;
  out.reserve(joint.size());
  for (const auto& js : joint) {
    SegmentSlice slice;
    slice.segment_id = d.y.segments()[js.segment];
    slice.systems.reserve(js.systems.size());
    for (const auto s : js.systems) slice.systems.push_back(d.y.systems()[s]);
    slice.x_scores = js.x;
    slice.y_scores = js.y;
    out.push_back(std::move(slice));
  }
  return out;
}

}  // namespace metaeval
