#include "metaeval/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

#include "json.hpp"
#include "metaeval/errors.hpp"

namespace metaeval {
namespace {

using ordered_json = nlohmann::ordered_json;

// 3-decimal reporting precision; computation stays at full precision.
double round3(double v) {
  const double r = std::round(v * 1000.0) / 1000.0;
  return r == 0.0 ? 0.0 : r;  // avoid "-0.000"
}

std::string fixed3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", round3(v));
  return buf;
}

}  // namespace

std::vector<std::size_t> competition_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] > values[b];
  });
  std::vector<std::size_t> ranks(n, 0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && values[order[j]] == values[order[i]]) ++j;
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = i + 1;
    i = j;
  }
  return ranks;
}

RankingTable make_ranking_table(std::span<const std::string> metric_names,
                                std::span<const std::vector<MetaScore>> scores,
                                std::span<const Statistic> statistics,
                                std::uint64_t seed) {
  if (metric_names.size() != scores.size()) {
    throw InputError("ranking table: names/scores size mismatch");
  }
  RankingTable table;
  table.statistics.assign(statistics.begin(), statistics.end());
  table.seed = seed;
  table.rows.resize(metric_names.size());
  for (std::size_t i = 0; i < metric_names.size(); ++i) {
    table.rows[i].metric = metric_names[i];
    table.rows[i].scores = scores[i];
    table.rows[i].ranks.resize(statistics.size());
  }

  for (std::size_t si = 0; si < table.statistics.size(); ++si) {
    std::vector<double> column;
    column.reserve(table.rows.size());
    for (const auto& row : table.rows) column.push_back(row.scores[si].value);
    const auto ranks = competition_ranks(column);
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
      table.rows[i].ranks[si] = ranks[i];
    }
  }

  std::size_t sort_column = 0;
  for (std::size_t si = 0; si < table.statistics.size(); ++si) {
    if (table.statistics[si] == Statistic::kPdp) sort_column = si;
  }
  std::sort(table.rows.begin(), table.rows.end(),
            [&](const RankingRow& a, const RankingRow& b) {
              if (a.ranks[sort_column] != b.ranks[sort_column]) {
                return a.ranks[sort_column] < b.ranks[sort_column];
              }
              return a.metric < b.metric;
            });
  return table;
}

void write_ranking_tsv(const RankingTable& table, std::ostream& out) {
  out << "# seed=" << table.seed << "\n";
  out << "metric";
  for (const Statistic s : table.statistics) {
    out << '\t' << statistic_name(s) << '\t' << statistic_name(s) << "_rank";
  }
  out << '\n';
  for (const auto& row : table.rows) {
    out << row.metric;
    for (std::size_t si = 0; si < table.statistics.size(); ++si) {
      out << '\t' << fixed3(row.scores[si].value) << '\t' << row.ranks[si];
    }
    out << '\n';
  }
}

std::string ranking_json(const RankingTable& table) {
  ordered_json j;
  j["seed"] = table.seed;
  j["statistics"] = ordered_json::array();
  for (const Statistic s : table.statistics) {
    j["statistics"].push_back(std::string(statistic_name(s)));
  }
  j["metrics"] = ordered_json::array();
  for (const auto& row : table.rows) {
    ordered_json entry;
    entry["name"] = row.metric;
    ordered_json scores, ranks;
    for (std::size_t si = 0; si < table.statistics.size(); ++si) {
      const auto name = std::string(statistic_name(table.statistics[si]));
      scores[name] = round3(row.scores[si].value);
      ranks[name] = row.ranks[si];
    }
    entry["scores"] = std::move(scores);
    entry["ranks"] = std::move(ranks);
    j["metrics"].push_back(std::move(entry));
  }
  return j.dump(2) + "\n";
}

void write_alignment_tsv(const AlignmentReport& report, std::uint64_t seed,
                         std::ostream& out) {
  out << "# seed=" << seed << "\n";
  out << "category\timportance\tcount\tavg_weight";
  for (const Statistic s : report.statistics) {
    out << '\t' << statistic_name(s);
  }
  out << '\n';
  for (const auto& row : report.rows) {
    out << row.category << '\t' << fixed3(row.importance) << '\t' << row.count
        << '\t' << fixed3(row.avg_weight);
    for (const double v : row.scores) out << '\t' << fixed3(v);
    out << '\n';
  }
  out << "\n# spearman\n";
  out << "statistic\tvs_importance\tvs_avg_weight\tvs_count\n";
  const auto cell = [](const CorrelationResult& r) {
    return r.defined() ? fixed3(*r.value) : std::string("NA");
  };
  for (const auto& s : report.spearman) {
    out << statistic_name(s.statistic) << '\t' << cell(s.vs_importance) << '\t'
        << cell(s.vs_avg_weight) << '\t' << cell(s.vs_count) << '\n';
  }
}

std::string alignment_json(const AlignmentReport& report, std::uint64_t seed) {
  ordered_json j;
  j["seed"] = seed;
  j["statistics"] = ordered_json::array();
  for (const Statistic s : report.statistics) {
    j["statistics"].push_back(std::string(statistic_name(s)));
  }
  j["categories"] = ordered_json::array();
  for (const auto& row : report.rows) {
    ordered_json entry;
    entry["category"] = row.category;
    entry["importance"] = round3(row.importance);
    entry["count"] = row.count;
    entry["avg_weight"] = round3(row.avg_weight);
    ordered_json scores;
    for (std::size_t si = 0; si < report.statistics.size(); ++si) {
      scores[std::string(statistic_name(report.statistics[si]))] =
          round3(row.scores[si]);
    }
    entry["scores"] = std::move(scores);
    j["categories"].push_back(std::move(entry));
  }
  j["spearman"] = ordered_json::array();
  const auto cell = [](const CorrelationResult& r) {
    return r.defined() ? ordered_json(round3(*r.value)) : ordered_json(nullptr);
  };
  for (const auto& s : report.spearman) {
    ordered_json entry;
    entry["statistic"] = std::string(statistic_name(s.statistic));
    entry["vs_importance"] = cell(s.vs_importance);
    entry["vs_avg_weight"] = cell(s.vs_avg_weight);
    entry["vs_count"] = cell(s.vs_count);
    j["spearman"].push_back(std::move(entry));
  }
  return j.dump(2) + "\n";
}

}  // namespace metaeval
