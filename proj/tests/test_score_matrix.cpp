#include "metaeval/score_matrix.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>

#include "doctest.h"
#include "metaeval/errors.hpp"

using namespace metaeval;
namespace fs = std::filesystem;

namespace {

fs::path write_temp(const std::string& name, const std::string& content) {
  const fs::path path = fs::temp_directory_path() / name;
  std::ofstream out(path);
  out << content;
  return path;
}

using CellSet = std::map<std::pair<std::string, std::string>, double>;

CellSet cells_of(const ScoreMatrix& m) {
  CellSet cells;
  for (std::size_t s = 0; s < m.num_systems(); ++s) {
    for (std::size_t g = 0; g < m.num_segments(); ++g) {
      if (m.present(s, g)) {
        cells[{m.segments()[g], m.systems()[s]}] = m.at(s, g);
      }
    }
  }
  return cells;
}

}  // namespace

TEST_CASE("load_scores builds a matrix with missing cells") {
  const auto path = write_temp("sm_basic.tsv",
                               "segment_id\tsystem_id\tscore\n"
                               "segA\tsys1\t-1.0\n"
                               "segA\tsys2\t0.0\n"
                               "segB\tsys1\t-5.0\n"
                               "segB\tsys2\tNA\n");
  const ScoreMatrix m = load_scores(path);
  CHECK(m.num_systems() == 2);
  CHECK(m.num_segments() == 2);
  CHECK(m.systems() == std::vector<std::string>{"sys1", "sys2"});
  CHECK(m.segments() == std::vector<std::string>{"segA", "segB"});
  CHECK(m.at(0, 0) == -1.0);
  CHECK(m.at(1, 0) == 0.0);
  CHECK(m.at(0, 1) == -5.0);
  CHECK_FALSE(m.present(1, 1));
  CHECK(m.present_count() == 3);
}

TEST_CASE("load_scores rejects degenerate files") {
  CHECK_THROWS_AS((void)load_scores(write_temp("sm_empty.tsv", "")), InputError);
  CHECK_THROWS_AS(
      (void)load_scores(write_temp("sm_header_only.tsv",
                                   "segment_id\tsystem_id\tscore\n")),
      InputError);
  CHECK_THROWS_AS(
      (void)load_scores(write_temp("sm_dup.tsv",
                                   "segment_id\tsystem_id\tscore\n"
                                   "segA\tsys1\t1\n"
                                   "segA\tsys1\t2\n")),
      InputError);
  CHECK_THROWS_AS(
      (void)load_scores(write_temp("sm_cols.tsv",
                                   "segment_id\tsystem_id\tscore\n"
                                   "segA\tsys1\n")),
      InputError);
  CHECK_THROWS_AS(
      (void)load_scores(write_temp("sm_token.tsv",
                                   "segment_id\tsystem_id\tscore\n"
                                   "segA\tsys1\tn/a\n")),
      InputError);
  CHECK_THROWS_AS(
      (void)load_scores(write_temp("sm_inf.tsv",
                                   "segment_id\tsystem_id\tscore\n"
                                   "segA\tsys1\tinf\n")),
      InputError);
  CHECK_THROWS_AS(
      (void)load_scores(write_temp("sm_badheader.tsv",
                                   "seg\tsys\tscore\nsegA\tsys1\t1\n")),
      InputError);
  CHECK_THROWS_AS((void)load_scores(fs::path("/nonexistent/file.tsv")),
                  InputError);
}

TEST_CASE("load_scores ignores comments and keeps full precision") {
  const auto path = write_temp("sm_comment.tsv",
                               "# produced by a tool\n"
                               "segment_id\tsystem_id\tscore\n"
                               "segA\tsys1\t0.1000000000000000055511151231\n"
                               "# midway comment\n"
                               "segA\tsys2\t-2.5e-3\n");
  const ScoreMatrix m = load_scores(path);
  CHECK(m.at(0, 0) == 0.1);
  CHECK(m.at(1, 0) == -0.0025);
}

TEST_CASE("write/load round-trip preserves the cell set") {
  const auto path = write_temp("sm_roundtrip_src.tsv",
                               "segment_id\tsystem_id\tscore\n"
                               "segB\tsys2\t-0.3333333333333333\n"
                               "segB\tsys1\t17\n"
                               "segA\tsys1\t1e-12\n"
                               "segA\tsys2\tNA\n");
  const ScoreMatrix m = load_scores(path);
  std::ostringstream os;
  write_scores(m, os);
  const auto path2 = write_temp("sm_roundtrip_dst.tsv", os.str());
  const ScoreMatrix m2 = load_scores(path2);
  CHECK(cells_of(m) == cells_of(m2));
}

TEST_CASE("pair intersects axes in y order") {
  ScoreMatrix x({"a", "b", "c"}, {"s1", "s2"});
  ScoreMatrix y({"d", "c", "b"}, {"s2", "s1"});
  for (std::size_t s = 0; s < 3; ++s) {
    for (std::size_t g = 0; g < 2; ++g) {
      x.set(s, g, static_cast<double>(s + g));
      y.set(s, g, static_cast<double>(s * g));
    }
  }
  const PairedData d = pair(x, y);
  CHECK(d.x.systems() == std::vector<std::string>{"c", "b"});
  CHECK(d.x.segments() == std::vector<std::string>{"s2", "s1"});
  CHECK(d.y.systems() == d.x.systems());
  CHECK(d.dropped_systems == 2);  // a and d
  CHECK(d.dropped_segments == 0);
  // Values drawn from the right source cells.
  CHECK(d.x.at(0, 0) == x.at(2, 1));  // system c, segment s2
  CHECK(d.y.at(0, 0) == y.at(1, 0));
}

TEST_CASE("pair is the identity on equal axes and idempotent") {
  ScoreMatrix x({"a", "b"}, {"s1"});
  ScoreMatrix y({"a", "b"}, {"s1"});
  x.set(0, 0, 1.0);
  x.set(1, 0, 2.0);
  y.set(0, 0, 3.0);
  y.set(1, 0, 4.0);
  const PairedData d = pair(x, y);
  CHECK(d.dropped_systems == 0);
  CHECK(d.dropped_segments == 0);
  const PairedData d2 = pair(d.x, d.y);
  CHECK(d2.dropped_systems == 0);
  CHECK(d2.dropped_segments == 0);
  CHECK(d2.x.systems() == d.x.systems());
  CHECK(d2.x.segments() == d.x.segments());
  CHECK(d2.x.at(0, 0) == 1.0);
  CHECK(d2.y.at(1, 0) == 4.0);
}

TEST_CASE("pair rejects disjoint axes") {
  ScoreMatrix x({"a"}, {"s1"});
  ScoreMatrix y({"b"}, {"s1"});
  x.set(0, 0, 1.0);
  y.set(0, 0, 1.0);
  CHECK_THROWS_AS((void)pair(x, y), InputError);
}

TEST_CASE("segment_slices excludes positions missing on either side") {
  ScoreMatrix x({"a", "b"}, {"s1", "s2", "s3"});
  ScoreMatrix y({"a", "b"}, {"s1", "s2", "s3"});
  // s1 fully present; s2 missing x for system b; s3 all-missing on x.
  x.set(0, 0, 1.0);
  x.set(1, 0, 2.0);
  x.set(0, 1, 3.0);
  for (std::size_t s = 0; s < 2; ++s) {
    for (std::size_t g = 0; g < 3; ++g) y.set(s, g, 10.0 * (double)(s + g));
  }
  const auto slices = segment_slices(pair(x, y));
  REQUIRE(slices.size() == 3);
  CHECK(slices[0].systems == std::vector<std::string>{"a", "b"});
  CHECK(slices[1].systems == std::vector<std::string>{"a"});
  CHECK(slices[1].x_scores == std::vector<double>{3.0});
  CHECK(slices[2].systems.empty());
  CHECK(slices[2].segment_id == "s3");
}

TEST_CASE("fully present matrices slice into N scores per segment") {
  const std::size_t n = 4, m = 6;
  ScoreMatrix x({"a", "b", "c", "d"}, {"1", "2", "3", "4", "5", "6"});
  ScoreMatrix y = x;
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t g = 0; g < m; ++g) {
      x.set(s, g, static_cast<double>(s + g));
      y.set(s, g, static_cast<double>(s) - static_cast<double>(g));
    }
  }
  const auto slices = segment_slices(pair(x, y));
  std::size_t total_x = 0, total_y = 0;
  for (const auto& slice : slices) {
    total_x += slice.x_scores.size();
    total_y += slice.y_scores.size();
  }
  CHECK(total_x == n * m);
  CHECK(total_y == n * m);
}

TEST_CASE("matrix construction validates axes and values") {
  CHECK_THROWS_AS(ScoreMatrix({}, {"s"}), InputError);
  CHECK_THROWS_AS(ScoreMatrix({"a"}, {}), InputError);
  CHECK_THROWS_AS(ScoreMatrix({"a", "a"}, {"s"}), InputError);
  CHECK_THROWS_AS(ScoreMatrix({"a"}, {"s", "s"}), InputError);
  ScoreMatrix m({"a"}, {"s"});
  CHECK_THROWS_AS(m.set(0, 0, std::numeric_limits<double>::infinity()),
                  InputError);
  CHECK_THROWS_AS(m.set(0, 0, std::nan("")), InputError);
}
