#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "metaeval/meta_metrics.hpp"
#include "metaeval/mqm.hpp"

namespace metaeval {

// 1-based competition ranks for values sorted descending: tied values share
// the smallest rank of their group and the following rank skips past the
// group. Ties are decided on full-precision equality.
std::vector<std::size_t> competition_ranks(std::span<const double> values);

struct RankingRow {
  std::string metric;
  std::vector<MetaScore> scores;     // aligned with `statistics`
  std::vector<std::size_t> ranks;    // aligned with `statistics`
};

struct RankingTable {
  std::vector<Statistic> statistics;
  std::vector<RankingRow> rows;
  std::uint64_t seed = 0;
};

// Ranks every statistic column on full-precision values, then sorts rows by
// the pdp rank when pdp is selected, else by the first statistic's rank
// (name-alphabetical within equal ranks).
RankingTable make_ranking_table(std::span<const std::string> metric_names,
                                std::span<const std::vector<MetaScore>> scores,
                                std::span<const Statistic> statistics,
                                std::uint64_t seed);

// Scores are printed with 3 decimals; ranks computed before rounding.
void write_ranking_tsv(const RankingTable& table, std::ostream& out);
std::string ranking_json(const RankingTable& table);

void write_alignment_tsv(const AlignmentReport& report, std::uint64_t seed,
                         std::ostream& out);
std::string alignment_json(const AlignmentReport& report, std::uint64_t seed);

}  // namespace metaeval
