// Command-line front end: evaluate metric score files against human scores,
// run noise-robustness sweeps, analyze error-category annotations, and
// generate synthetic ground-truth score files.

#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "metaeval/errors.hpp"
#include "metaeval/meta_metrics.hpp"
#include "metaeval/mqm.hpp"
#include "metaeval/noise.hpp"
#include "metaeval/report.hpp"
#include "metaeval/score_matrix.hpp"

namespace {

using namespace metaeval;
namespace fs = std::filesystem;

std::vector<std::string> split_commas(const std::string& list) {
  std::vector<std::string> out;
  std::stringstream ss(list);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

std::vector<Statistic> parse_statistics(const std::string& list) {
  std::vector<Statistic> out;
  for (const auto& tok : split_commas(list)) {
    const auto s = parse_statistic(tok);
    if (!s) {
      throw InputError("unknown statistic '" + tok +
                       "' (expected pdp, acceq, global or segwise)");
    }
    out.push_back(*s);
  }
  if (out.empty()) throw InputError("no statistics selected");
  return out;
}

std::vector<double> parse_levels(const std::string& list) {
  std::vector<double> out;
  for (const auto& tok : split_commas(list)) {
    try {
      std::size_t used = 0;
      const double v = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      out.push_back(v);
    } catch (const std::exception&) {
      throw InputError("bad level '" + tok + "'");
    }
  }
  if (out.empty()) throw InputError("no levels given");
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open output file " + path.string());
  out << text;
  out.flush();
  if (!out) throw InputError("I/O error while writing " + path.string());
}

// Report destination: file when --out given, stdout otherwise.
void emit(const std::optional<std::string>& out_path, const std::string& text) {
  if (out_path) {
    write_text(*out_path, text);
  } else {
    std::cout << text;
  }
}

struct CommonOptions {
  std::string stats = "segwise,global,acceq,pdp";
  std::uint64_t seed = 0;
  std::optional<std::string> out;
  std::string format = "tsv";
};

void add_common(CLI::App* cmd, CommonOptions* opt, bool with_format = true) {
  cmd->add_option("--stats", opt->stats,
                  "comma-separated statistics (pdp,acceq,global,segwise)");
  cmd->add_option("--seed", opt->seed, "random seed (echoed in outputs)");
  cmd->add_option("--out", opt->out, "output file (stdout when omitted)");
  if (with_format) {
    cmd->add_option("--format", opt->format, "tsv or json")
        ->check(CLI::IsMember({"tsv", "json"}));
  }
}

int run_evaluate(const std::string& human_path,
                 const std::vector<std::string>& metric_args,
                 const CommonOptions& opt) {
  const auto statistics = parse_statistics(opt.stats);
  const ScoreMatrix human = load_scores(human_path);

  std::vector<std::string> names;
  std::vector<PairedData> paired;
  for (const auto& arg : metric_args) {
    const std::size_t eq = arg.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == arg.size()) {
      throw InputError("--metric expects name=path, got '" + arg + "'");
    }
    const std::string name = arg.substr(0, eq);
    const std::string path = arg.substr(eq + 1);
    try {
      paired.push_back(pair(load_scores(path), human));
    } catch (const InputError& e) {
      throw InputError("metric '" + name + "' (" + path + "): " + e.what());
    }
    names.push_back(name);
  }

  // Metrics are scored concurrently; any error aborts the whole report.
  std::vector<std::vector<MetaScore>> scores(names.size());
  std::exception_ptr error;
  const auto nm = static_cast<std::ptrdiff_t>(names.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < nm; ++i) {
    try {
      std::vector<MetaScore> row;
      row.reserve(statistics.size());
      for (const Statistic s : statistics) {
        row.push_back(compute_statistic(paired[static_cast<std::size_t>(i)], s));
      }
      scores[static_cast<std::size_t>(i)] = std::move(row);
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);

  const RankingTable table =
      make_ranking_table(names, scores, statistics, opt.seed);
  if (opt.format == "json") {
    emit(opt.out, ranking_json(table));
  } else {
    std::ostringstream os;
    write_ranking_tsv(table, os);
    emit(opt.out, os.str());
  }
  return 0;
}

int run_noise(const std::string& human_path, const std::string& kind_token,
              const std::string& levels_arg, std::size_t replicates,
              const CommonOptions& opt) {
  const auto statistics = parse_statistics(opt.stats);
  const auto kind = parse_noise_kind(kind_token);
  if (!kind) {
    throw InputError("unknown noise kind '" + kind_token +
                     "' (expected random, outlier, system or segment)");
  }
  const auto levels = parse_levels(levels_arg);
  const ScoreMatrix human = load_scores(human_path);
  const auto curves =
      sweep(human, statistics, *kind, levels, replicates, opt.seed);
  std::ostringstream os;
  write_curves_csv(curves, os);
  emit(opt.out, os.str());
  return 0;
}

int run_oracle(const std::string& mqm_path, const CommonOptions& opt) {
  const auto statistics = parse_statistics(opt.stats);
  const auto records = load_mqm(mqm_path);
  if (records.empty()) {
    throw InputError(mqm_path + ": no records");
  }
  const ScoreMatrix axes = axes_from_records(records);
  const AlignmentReport report = alignment_report(records, axes, statistics);

  std::ostringstream tsv;
  write_alignment_tsv(report, opt.seed, tsv);
  const std::string json = alignment_json(report, opt.seed);

  if (opt.out) {
    // Write the report and its twin next to each other.
    fs::path base(*opt.out);
    fs::path tsv_path = base;
    fs::path json_path = base;
    tsv_path.replace_extension(".tsv");
    json_path.replace_extension(".json");
    write_text(tsv_path, tsv.str());
    write_text(json_path, json);
  } else {
    std::cout << (opt.format == "json" ? json : tsv.str());
  }
  return 0;
}

int run_synth(std::size_t systems, std::size_t segments,
              const CommonOptions& opt) {
  const ScoreMatrix m = synthetic_mqm_matrix(systems, segments, opt.seed);
  std::ostringstream os;
  os << "# seed=" << opt.seed << "\n";
  write_scores(m, os);
  emit(opt.out, os.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Segment-level meta-evaluation of scoring metrics"};
  app.require_subcommand(1);

  CommonOptions eval_opt, noise_opt, oracle_opt, synth_opt;

  auto* evaluate = app.add_subcommand(
      "evaluate", "score metric files against human scores and rank them");
  std::string eval_human;
  std::vector<std::string> eval_metrics;
  evaluate->add_option("--human", eval_human, "human scores TSV")->required();
  evaluate->add_option("--metric", eval_metrics, "metric as name=path")
      ->required();
  add_common(evaluate, &eval_opt);

  auto* noise = app.add_subcommand(
      "noise", "score degradation under injected noise (CSV curves)");
  std::string noise_human, noise_kind, noise_levels;
  std::size_t replicates = 30;
  noise->add_option("--human", noise_human, "ground-truth scores TSV")
      ->required();
  noise->add_option("--kind", noise_kind, "random|outlier|system|segment")
      ->required();
  noise->add_option("--levels", noise_levels, "comma-separated noise levels")
      ->required();
  noise->add_option("--replicates", replicates, "replicates per level");
  add_common(noise, &noise_opt, /*with_format=*/false);

  auto* oracle = app.add_subcommand(
      "oracle", "error-category oracle analysis from annotations");
  std::string mqm_path;
  oracle->add_option("--mqm", mqm_path, "annotations TSV")->required();
  add_common(oracle, &oracle_opt);

  auto* synth = app.add_subcommand(
      "synth", "generate a synthetic ground-truth scores TSV");
  std::size_t synth_systems = 0, synth_segments = 0;
  synth->add_option("--systems", synth_systems, "number of systems")
      ->required()
      ->check(CLI::PositiveNumber);
  synth->add_option("--segments", synth_segments, "number of segments")
      ->required()
      ->check(CLI::PositiveNumber);
  add_common(synth, &synth_opt, /*with_format=*/false);

  try {
    app.parse(argc, argv);
    if (evaluate->parsed()) return run_evaluate(eval_human, eval_metrics, eval_opt);
    if (noise->parsed()) {
      return run_noise(noise_human, noise_kind, noise_levels, replicates,
                       noise_opt);
    }
    if (oracle->parsed()) return run_oracle(mqm_path, oracle_opt);
    if (synth->parsed()) return run_synth(synth_systems, synth_segments, synth_opt);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const DegenerateStatisticError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
