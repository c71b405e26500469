// End-to-end tests running the real binary: formats, exit codes and
// byte-reproducibility.

#define DOCTEST_CONFIG_IMPLEMENT
#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "metaeval/noise.hpp"
#include "metaeval/score_matrix.hpp"

namespace fs = std::filesystem;

namespace {

std::string g_cli;
fs::path g_dir;

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

RunResult run_cli(const std::string& args) {
  const fs::path out_path = g_dir / "stdout.txt";
  const fs::path err_path = g_dir / "stderr.txt";
  const std::string cmd = "'" + g_cli + "' " + args + " > '" +
                          out_path.string() + "' 2> '" + err_path.string() +
                          "'";
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = read_file(out_path);
  r.err = read_file(err_path);
  return r;
}

fs::path write_file(const std::string& name, const std::string& content) {
  const fs::path path = g_dir / name;
  std::ofstream out(path, std::ios::binary);
  out << content;
  return path;
}

}  // namespace

TEST_CASE("evaluate scores a metric against itself as a perfect ranking") {
  const auto human = g_dir / "human.tsv";
  write_scores(metaeval::synthetic_mqm_matrix(5, 30, 21), human);
  const auto r = run_cli("evaluate --human '" + human.string() +
                         "' --metric self=" + human.string());
  REQUIRE(r.exit_code == 0);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);  // seed comment
  CHECK(line == "# seed=0");
  std::getline(lines, line);  // header
  CHECK(line ==
        "metric\tsegwise_pearson\tsegwise_pearson_rank\tglobal_pearson\t"
        "global_pearson_rank\tacc_eq\tacc_eq_rank\tpdp\tpdp_rank");
  std::getline(lines, line);
  CHECK(line == "self\t1.000\t1\t1.000\t1\t1.000\t1\t1.000\t1");
}

TEST_CASE("evaluate reports 0.000 pdp for within-segment-constant metrics") {
  const metaeval::ScoreMatrix y = metaeval::synthetic_mqm_matrix(5, 30, 22);
  const auto human = g_dir / "human2.tsv";
  write_scores(y, human);
  // Sentinel: one constant per segment.
  metaeval::ScoreMatrix sentinel = y;
  for (std::size_t g = 0; g < y.num_segments(); ++g) {
    for (std::size_t s = 0; s < y.num_systems(); ++s) {
      sentinel.set(s, g, static_cast<double>(g % 7));
    }
  }
  const auto sent_path = g_dir / "sentinel.tsv";
  write_scores(sentinel, sent_path);
  const auto r = run_cli("evaluate --human '" + human.string() +
                         "' --metric self=" + human.string() +
                         " --metric sentinel=" + sent_path.string() +
                         " --stats pdp,segwise");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("sentinel\t0.000\t2\t0.000\t2") != std::string::npos);
}

TEST_CASE("evaluate emits json when asked") {
  const auto human = g_dir / "human3.tsv";
  write_scores(metaeval::synthetic_mqm_matrix(4, 12, 5), human);
  const auto r = run_cli("evaluate --human '" + human.string() +
                         "' --metric self=" + human.string() +
                         " --format json --seed 9");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("\"seed\": 9") != std::string::npos);
  CHECK(r.out.find("\"name\": \"self\"") != std::string::npos);
}

TEST_CASE("noise at level zero emits zero sdp rows") {
  const auto human = g_dir / "human4.tsv";
  write_scores(metaeval::synthetic_mqm_matrix(5, 25, 77), human);
  const auto r = run_cli("noise --human '" + human.string() +
                         "' --kind random --levels 0 --replicates 2 --seed 3" +
                         " --stats pdp,global");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out ==
        "statistic,kind,level,sdp,replicates,seed\n"
        "pdp,random,0,0,2,3\n"
        "global_pearson,random,0,0,2,3\n");
}

TEST_CASE("oracle matches the hand-computed golden report") {
  const auto mqm = write_file("toy_mqm.tsv",
                              "segment_id\tsystem_id\tcategory\tweight\n"
                              "s1\tA\taccuracy/major\t5\n"
                              "s1\tB\tfluency/minor\t1\n"
                              "s2\tA\tfluency/minor\t1\n"
                              "s2\tB\taccuracy/major\t5\n"
                              "s2\tB\tzzz/none\t0\n");
  const auto r =
      run_cli("oracle --mqm '" + mqm.string() + "' --stats pdp,acceq");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out ==
        "# seed=0\n"
        "category\timportance\tcount\tavg_weight\tpdp\tacc_eq\n"
        "accuracy/major\t10.000\t2\t5.000\t1.000\t1.000\n"
        "fluency/minor\t2.000\t2\t1.000\t-1.000\t0.000\n"
        "zzz/none\t0.000\t1\t0.000\t0.000\t0.000\n"
        "\n# spearman\n"
        "statistic\tvs_importance\tvs_avg_weight\tvs_count\n"
        "pdp\t0.500\t0.500\t0.000\n"
        "acc_eq\t0.866\t0.866\t0.500\n");
}

TEST_CASE("oracle writes a tsv and json twin next to --out") {
  const auto mqm = write_file("toy_mqm2.tsv",
                              "segment_id\tsystem_id\tcategory\tweight\n"
                              "s1\tA\ta\t1\n"
                              "s1\tB\tb\t2\n"
                              "s2\tA\tc\t3\n"
                              "s2\tB\ta\t1\n");
  const auto out = g_dir / "report.tsv";
  const auto r = run_cli("oracle --mqm '" + mqm.string() + "' --out '" +
                         out.string() + "'");
  REQUIRE(r.exit_code == 0);
  CHECK(fs::exists(g_dir / "report.tsv"));
  CHECK(fs::exists(g_dir / "report.json"));
  CHECK(read_file(g_dir / "report.tsv").find("# spearman") !=
        std::string::npos);
  CHECK(read_file(g_dir / "report.json").find("\"spearman\"") !=
        std::string::npos);
}

TEST_CASE("synth emits a loadable, bounded score file") {
  const auto out = g_dir / "synth.tsv";
  const auto r = run_cli("synth --systems 6 --segments 40 --seed 11 --out '" +
                         out.string() + "'");
  REQUIRE(r.exit_code == 0);
  const std::string text = read_file(out);
  CHECK(text.rfind("# seed=11\n", 0) == 0);
  const metaeval::ScoreMatrix m = metaeval::load_scores(out);
  CHECK(m.num_systems() == 6);
  CHECK(m.num_segments() == 40);
  std::size_t mild = 0;
  const auto values = m.present_values();
  for (const double v : values) {
    CHECK(v <= 0.0);
    CHECK(v >= -100.0);
    if (v >= -25.0) ++mild;
  }
  CHECK(static_cast<double>(mild) >= 0.9 * static_cast<double>(values.size()));
}

TEST_CASE("every command is byte-reproducible under a fixed seed") {
  const auto human = g_dir / "human5.tsv";
  write_scores(metaeval::synthetic_mqm_matrix(5, 20, 8), human);
  const auto mqm = write_file("toy_mqm3.tsv",
                              "segment_id\tsystem_id\tcategory\tweight\n"
                              "s1\tA\ta\t1\n"
                              "s1\tB\tb\t2\n"
                              "s2\tA\tc\t3\n"
                              "s2\tB\ta\t1\n");
  const std::vector<std::string> commands{
      "synth --systems 4 --segments 9 --seed 123",
      "evaluate --human '" + human.string() + "' --metric self=" +
          human.string() + " --seed 5",
      "evaluate --human '" + human.string() + "' --metric self=" +
          human.string() + " --format json",
      "noise --human '" + human.string() +
          "' --kind segment --levels 1,5 --replicates 3 --seed 99",
      "oracle --mqm '" + mqm.string() + "'",
  };
  for (const auto& cmd : commands) {
    const auto first = run_cli(cmd);
    const auto second = run_cli(cmd);
    REQUIRE(first.exit_code == 0);
    REQUIRE(second.exit_code == 0);
    CHECK(first.out == second.out);
    CHECK_FALSE(first.out.empty());
  }
}

TEST_CASE("outputs do not depend on the OpenMP thread count") {
  const auto human = g_dir / "human_threads.tsv";
  write_scores(metaeval::synthetic_mqm_matrix(8, 60, 91), human);
  const std::string args = "noise --human '" + human.string() +
                           "' --kind random --levels 2,6 --replicates 4" +
                           " --seed 13";
  std::vector<std::string> outputs;
  for (const char* threads : {"1", "2", "4"}) {
    const fs::path out = g_dir / (std::string("threads_") + threads + ".csv");
    const std::string cmd = std::string("OMP_NUM_THREADS=") + threads + " '" +
                            g_cli + "' " + args + " > '" + out.string() + "'";
    REQUIRE(std::system(cmd.c_str()) == 0);
    outputs.push_back(read_file(out));
  }
  CHECK(outputs[0] == outputs[1]);
  CHECK(outputs[0] == outputs[2]);
  CHECK_FALSE(outputs[0].empty());
}

TEST_CASE("exit codes distinguish input and degenerate-statistic errors") {
  CHECK(run_cli("evaluate --human /nonexistent.tsv --metric m=/also_not.tsv")
            .exit_code == 1);
  CHECK(run_cli("bogus-subcommand").exit_code == 1);
  CHECK(run_cli("synth --systems 0 --segments 3").exit_code == 1);

  // Single system: no intra-segment pairs, acc_eq cannot be computed.
  const auto tiny = write_file("tiny.tsv",
                               "segment_id\tsystem_id\tscore\n"
                               "s1\tonly\t-1\n"
                               "s2\tonly\t-2\n");
  const auto r = run_cli("evaluate --human '" + tiny.string() +
                         "' --metric self=" + tiny.string() + " --stats acceq");
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("error:") != std::string::npos);

  // Metric errors name the offending file.
  const auto human = g_dir / "human6.tsv";
  write_scores(metaeval::synthetic_mqm_matrix(3, 5, 2), human);
  const auto bad = run_cli("evaluate --human '" + human.string() +
                           "' --metric broken=/missing_scores.tsv");
  CHECK(bad.exit_code == 1);
  CHECK(bad.err.find("broken") != std::string::npos);
  CHECK(bad.err.find("missing_scores") != std::string::npos);
}

int main(int argc, char** argv) {
  std::vector<char*> pass;
  pass.push_back(argv[0]);
  for (int i = 1; i < argc; ++i) {
    if (g_cli.empty() && argv[i][0] != '-') {
      g_cli = argv[i];
      continue;
    }
    pass.push_back(argv[i]);
  }
  if (g_cli.empty()) {
    std::fprintf(stderr, "usage: cli_tests <path-to-metaeval-binary>\n");
    return 1;
  }
  g_dir = fs::temp_directory_path() /
          ("metaeval_cli_tests_" + std::to_string(::getpid()));
  fs::create_directories(g_dir);
  doctest::Context context(static_cast<int>(pass.size()), pass.data());
  const int rc = context.run();
  fs::remove_all(g_dir);
  return rc;
}
