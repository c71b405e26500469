#include "metaeval/mqm.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <tuple>
#include <unordered_set>

#include "metaeval/errors.hpp"

namespace metaeval {
namespace {

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

std::size_t cell_of(const ScoreMatrix& axes, const MqmRecord& r) {
  const auto sys = axes.system_index(r.system_id);
  const auto seg = axes.segment_index(r.segment_id);
  if (!sys || !seg) {
    throw InputError("annotation references unknown cell (" + r.segment_id +
                     ", " + r.system_id + ")");
  }
  return *sys * axes.num_segments() + *seg;
}

// Negated per-cell weight totals, optionally restricted to one category.
// Per-cell sums fold one category subtotal at a time, each subtotal summing
// its weights in ascending order. The result depends only on the record
// multiset, and summing the per-category oracle matrices in category-name
// order reproduces the unrestricted totals bit-for-bit.
ScoreMatrix aggregate(std::span<const MqmRecord> records,
                      const ScoreMatrix& axes, const std::string_view* category,
                      bool* category_present) {
  struct Entry {
    std::size_t cell;
    std::string_view category;
    double weight;
  };
  std::vector<Entry> entries;
  bool found = false;
  for (const auto& r : records) {
    if (category && r.category != *category) continue;
    found = true;
    entries.push_back({cell_of(axes, r), r.category, r.weight});
  }
  if (category_present) *category_present = found;
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return std::tie(a.cell, a.category, a.weight) <
           std::tie(b.cell, b.category, b.weight);
  });

  std::vector<double> totals(axes.num_systems() * axes.num_segments(), 0.0);
  std::size_t i = 0;
  while (i < entries.size()) {
    const std::size_t j_cell = entries[i].cell;
    double subtotal = 0.0;
    std::size_t j = i;
    while (j < entries.size() && entries[j].cell == j_cell &&
           entries[j].category == entries[i].category) {
      subtotal += entries[j].weight;
      ++j;
    }
    totals[j_cell] += subtotal;
    i = j;
  }

  ScoreMatrix out(axes.systems(), axes.segments());
  for (std::size_t s = 0; s < axes.num_systems(); ++s) {
    for (std::size_t g = 0; g < axes.num_segments(); ++g) {
      const double total = totals[s * axes.num_segments() + g];
      out.set(s, g, total == 0.0 ? 0.0 : -total);
    }
  }
  return out;
}

}  // namespace

std::vector<MqmRecord> load_mqm(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw InputError("cannot open annotations file " + path.string());
  }

  std::vector<MqmRecord> records;
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
      if (cols.size() != 4 || cols[0] != "segment_id" ||
          cols[1] != "system_id" || cols[2] != "category" ||
          cols[3] != "weight") {
        throw InputError(
            context +
            ": expected header 'segment_id\\tsystem_id\\tcategory\\tweight'");
      }
      header_seen = true;
      continue;
    }
    if (cols.size() != 4) {
      throw InputError(context + ": expected 4 tab-separated columns, got " +
                       std::to_string(cols.size()));
    }
    if (cols[0].empty() || cols[1].empty() || cols[2].empty()) {
      throw InputError(context + ": empty segment, system or category");
    }
    double weight = 0.0;
    const char* end = cols[3].data() + cols[3].size();
    const auto [ptr, ec] = std::from_chars(cols[3].data(), end, weight);
    if (ec != std::errc() || ptr != end || !std::isfinite(weight)) {
      throw InputError(context + ": bad weight '" + std::string(cols[3]) + "'");
    }
    if (weight < 0.0) {
      throw InputError(context + ": negative weight");
    }
    records.push_back({std::string(cols[0]), std::string(cols[1]),
                       std::string(cols[2]), weight});
  }
  if (in.bad()) {
    throw InputError("I/O error while reading " + path.string());
  }
  return records;
}

ScoreMatrix axes_from_records(std::span<const MqmRecord> records) {
  if (records.empty()) {
    throw InputError("no records");
  }
  std::vector<std::string> systems, segments;
  std::unordered_set<std::string_view> sys_seen, seg_seen;
  for (const auto& r : records) {
    if (seg_seen.insert(r.segment_id).second) segments.push_back(r.segment_id);
    if (sys_seen.insert(r.system_id).second) systems.push_back(r.system_id);
  }
  return ScoreMatrix(std::move(systems), std::move(segments));
}

ScoreMatrix total_human_scores(std::span<const MqmRecord> records,
                               const ScoreMatrix& axes) {
  return aggregate(records, axes, nullptr, nullptr);
}

ScoreMatrix oracle_metric(std::span<const MqmRecord> records,
                          std::string_view category, const ScoreMatrix& axes,
                          bool* category_present) {
  return aggregate(records, axes, &category, category_present);
}

std::vector<CategoryStats> category_stats(std::span<const MqmRecord> records) {
  std::map<std::string, std::vector<double>> by_category;
  for (const auto& r : records) by_category[r.category].push_back(r.weight);

  std::vector<CategoryStats> out;
  out.reserve(by_category.size());
  for (auto& [name, weights] : by_category) {
    // Sum in sorted order: multiset semantics, independent of record order.
    std::sort(weights.begin(), weights.end());
    CategoryStats cs;
    cs.category = name;
    cs.count = weights.size();
    for (const double w : weights) cs.importance += w;
    cs.avg_weight = cs.importance / static_cast<double>(cs.count);
    out.push_back(std::move(cs));
  }
  return out;  // std::map iteration is already name-sorted
}

AlignmentReport alignment_report(std::span<const MqmRecord> records,
                                 const ScoreMatrix& axes,
                                 std::span<const Statistic> statistics) {
  const std::vector<CategoryStats> cats = category_stats(records);
  if (cats.size() < 3) {
    throw DegenerateStatisticError(
        "alignment_report: needs at least 3 distinct categories");
  }
  if (statistics.empty()) {
    throw InputError("alignment_report: no statistics selected");
  }

  const ScoreMatrix totals = total_human_scores(records, axes);

  AlignmentReport report;
  report.statistics.assign(statistics.begin(), statistics.end());
  report.rows.resize(cats.size());

  std::exception_ptr error;
  const auto nc = static_cast<std::ptrdiff_t>(cats.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t ci = 0; ci < nc; ++ci) {
    try {
      const auto& cs = cats[static_cast<std::size_t>(ci)];
      const ScoreMatrix oracle = oracle_metric(records, cs.category, axes);
      const PairedData paired = pair(oracle, totals);
      AlignmentReport::Row row;
      row.category = cs.category;
      row.importance = cs.importance;
      row.count = cs.count;
      row.avg_weight = cs.avg_weight;
      row.scores.reserve(statistics.size());
      for (const Statistic stat : statistics) {
        row.scores.push_back(compute_statistic(paired, stat).value);
      }
      report.rows[static_cast<std::size_t>(ci)] = std::move(row);
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);

  std::vector<double> importance, avg_weight, count;
  for (const auto& row : report.rows) {
    importance.push_back(row.importance);
    avg_weight.push_back(row.avg_weight);
    count.push_back(static_cast<double>(row.count));
  }
  for (std::size_t si = 0; si < report.statistics.size(); ++si) {
    std::vector<double> scores;
    scores.reserve(report.rows.size());
    for (const auto& row : report.rows) scores.push_back(row.scores[si]);
    report.spearman.push_back({report.statistics[si],
                               spearman(scores, importance),
                               spearman(scores, avg_weight),
                               spearman(scores, count)});
  }
  return report;
}

}  // namespace metaeval
