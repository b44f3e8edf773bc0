#pragma once

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "alq/datagen.hpp"
#include "alq/report.hpp"
#include "alq/simulation.hpp"

namespace alq::cli {

/// Exit statuses of the command-line tool.
enum ExitCode : int { kSuccess = 0, kRuntimeFailure = 1, kUsageError = 2 };

/// Options shared by the subcommands, as given on the command line.
struct RunSpec {
  std::string subcommand;
  std::string strategy = "shifted-normal";
  double class_sep = 1.0;
  double flip_y = 0.0;
  int queries = 20;
  int batch = 2;
  int rounds = 30;
  double cost_c = 1.0;
  std::optional<std::uint64_t> seed;
  std::string out;
  double mode = 0.45;
  double concentration = 12.0;
  bool shared_dataset = false;
  bool phi = false;
  double phi_delta = 0.05;
  std::string lambda_metric = "auc";
  int jobs = 1;
};

/// --seed wins, then ALQ_SEED, then 0.
inline std::uint64_t resolve_seed(const RunSpec& spec) {
  if (spec.seed) return *spec.seed;
  if (const char* env = std::getenv("ALQ_SEED"); env != nullptr && *env != '\0') {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument(env);
      return v;
    } catch (const std::exception&) {
      throw ConfigError(std::string("ALQ_SEED is not an unsigned integer: ") + env);
    }
  }
  return 0;
}

inline SimulationConfig to_config(const RunSpec& spec) {
  SimulationConfig c;
  c.dataset.class_sep = spec.class_sep;
  c.dataset.flip_y = spec.flip_y;
  c.strategy.kind = parse_strategy(spec.strategy);
  c.strategy.mode = spec.mode;
  c.strategy.concentration = spec.concentration;
  c.n_queries = spec.queries;
  c.batch_size = spec.batch;
  c.rounds = spec.rounds;
  c.cost.c = spec.cost_c;
  c.base_seed = resolve_seed(spec);
  c.shared_dataset = spec.shared_dataset;
  c.record_phi = spec.phi;
  c.phi_delta = spec.phi_delta;
  c.lambda_measure = parse_performance_measure(spec.lambda_metric);
  if (spec.jobs <= 0) throw ConfigError("--jobs must be positive");
  c.validate();
  return c;
}

namespace detail {

inline std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  return os;
}

inline void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  auto os = open_output(path);
  os << j.dump(2) << '\n';
}

inline int execute_run(const RunSpec& spec, const SimulationConfig& config, std::ostream& out) {
  const std::filesystem::path dir = spec.out.empty() ? "." : spec.out;
  std::filesystem::create_directories(dir);
  const auto rounds = run_rounds(config, spec.jobs);
  const auto summary = aggregate(config, rounds);

  write_json(dir / "summary.json", report::to_json(summary));
  {
    auto os = open_output(dir / "per_query.csv");
    report::write_per_query_csv(os, {&summary});
  }
  if (config.record_phi) {
    auto os = open_output(dir / "phi.csv");
    os << "strategy,round_seed,q,final_prob\n";
    report::write_phi_csv(os, to_string(config.strategy.kind), rounds);
  }
  report::write_final_table(out, {&summary});
  return kSuccess;
}

inline int execute_compare(const RunSpec& spec, const SimulationConfig& config, std::ostream& out) {
  const std::filesystem::path dir = spec.out.empty() ? "." : spec.out;
  std::filesystem::create_directories(dir);
  const auto cmp = compare_strategies(config, spec.jobs);
  std::vector<const ExperimentSummary*> summaries;
  nlohmann::json all = nlohmann::json::array();
  for (const auto& s : cmp.summaries) {
    summaries.push_back(&s);
    all.push_back(report::to_json(s));
  }
  write_json(dir / "summary.json", nlohmann::json{{"strategies", all}});
  {
    auto os = open_output(dir / "per_query.csv");
    report::write_per_query_csv(os, summaries);
  }
  if (config.record_phi) {
    auto os = open_output(dir / "phi.csv");
    os << "strategy,round_seed,q,final_prob\n";
    for (std::size_t i = 0; i < cmp.summaries.size(); ++i)
      report::write_phi_csv(os, to_string(cmp.summaries[i].config.strategy.kind), cmp.rounds[i]);
  }
  {
    auto os = open_output(dir / "final_table.txt");
    report::write_final_table(os, summaries);
  }
  report::write_final_table(out, summaries);
  return kSuccess;
}

inline int execute_dump(const RunSpec& spec, const SimulationConfig& config) {
  std::filesystem::path path = spec.out.empty() ? "dataset.csv" : spec.out;
  if (std::filesystem::is_directory(path) || spec.out.ends_with('/')) {
    std::filesystem::create_directories(path);
    path /= "dataset.csv";
  } else if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  Rng rng = make_rng(config.base_seed, Stream::data);
  const auto rows = generate_dataset(config.dataset, rng);
  auto os = open_output(path);
  write_dataset_csv(os, rows);
  return kSuccess;
}

}  // namespace detail

/// Entry point of the `alq` tool. Returns the process exit status.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  CLI::App app{"Pool-based active learning simulator with asymmetric labeling cost", "alq"};
  app.require_subcommand(1);
  RunSpec spec;

  auto add_data_options = [&](CLI::App* sub) {
    sub->add_option("--class-sep", spec.class_sep, "Class centroid separation per coordinate");
    sub->add_option("--flip-y", spec.flip_y, "Label flip probability");
    sub->add_option("--seed", spec.seed, "Base seed (falls back to ALQ_SEED, then 0)");
  };
  auto add_sim_options = [&](CLI::App* sub) {
    add_data_options(sub);
    sub->add_option("--queries", spec.queries, "Number of queries per round");
    sub->add_option("--batch", spec.batch, "Instances labeled per query");
    sub->add_option("--rounds", spec.rounds, "Independent simulation rounds");
    sub->add_option("--cost-c", spec.cost_c, "Relative cost of a positive label (>= 1)");
    sub->add_option("--out", spec.out, "Output directory");
    sub->add_option("--mode", spec.mode, "Peak of the shifted-normal target distribution");
    sub->add_option("--concentration", spec.concentration, "alpha + beta of the shifted-normal Beta");
    sub->add_flag("--shared-dataset", spec.shared_dataset, "Reuse one dataset across rounds");
    sub->add_flag("--phi", spec.phi, "Record the phi diagnostic");
    sub->add_option("--phi-delta", spec.phi_delta, "Half-width of the interim uncertainty band");
    sub->add_option("--lambda-metric", spec.lambda_metric, "Performance measure: auc, f1 or auc-f1");
    sub->add_option("--jobs", spec.jobs, "Maximum concurrent rounds");
  };

  auto* run = app.add_subcommand("run", "Run one strategy and write summary.json and per_query.csv");
  add_sim_options(run);
  run->add_option("--strategy", spec.strategy, "random, uncertainty or shifted-normal");

  auto* compare = app.add_subcommand("compare", "Run all strategies on paired seeds");
  add_sim_options(compare);

  auto* dump = app.add_subcommand("dump-dataset", "Write a generated dataset as CSV");
  add_data_options(dump);
  dump->add_option("--out", spec.out, "Output CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsageError;
  }
  spec.subcommand = app.get_subcommands().front()->get_name();

  SimulationConfig config;
  try {
    if (spec.subcommand == "compare") spec.strategy = "random";
    config = to_config(spec);
  } catch (const Error& e) {
    err << "alq: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    if (spec.subcommand == "run") return detail::execute_run(spec, config, out);
    if (spec.subcommand == "compare") return detail::execute_compare(spec, config, out);
    return detail::execute_dump(spec, config);
  } catch (const std::exception& e) {
    err << "alq: " << e.what() << '\n';
    return kRuntimeFailure;
  }
}

}  // namespace alq::cli
