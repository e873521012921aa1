// Command-line runner: train models, run limiting-phase trials against the
// baselines, verify single trials, and turn CSV results into reports.
//
// Exit codes: 0 success, 1 bad arguments or configuration, 2 I/O failure,
// 3 certificate verification failure.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "simax/bench.hpp"
#include "simax/engine.hpp"
#include "simax/model_io.hpp"
#include "simax/scenario_io.hpp"
#include "simax/search_tree.hpp"
#include "simax/training.hpp"

namespace fs = std::filesystem;
using namespace simax;

namespace {

constexpr int kExitError = 1;
constexpr int kExitIo = 2;
constexpr int kExitVerification = 3;

struct IoFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text) || !out.flush()) throw IoFailure("cannot write " + path.string());
}

ScenarioSpec resolve_scenario(const std::string& arg, std::size_t n) {
  if (auto kind = parse_scenario_kind(arg); kind && *kind != ScenarioKind::custom) {
    if (n == 0) throw ConfigError("--n is required for built-in scenarios");
    return build_scenario(*kind, n);
  }
  if (!fs::is_regular_file(arg)) {
    throw ConfigError("unknown scenario \"" + arg + "\" (neither a built-in name nor a file)");
  }
  ScenarioSpec spec = parse_scenario_config(read_file(arg));
  if (n != 0 && n != spec.n()) {
    throw ConfigError("--n " + std::to_string(n) + " disagrees with the scenario file (n = " +
                      std::to_string(spec.n()) + ")");
  }
  return spec;
}

struct TrainArgs {
  std::string scenario;
  std::size_t n = 0;
  TrainingConfig cfg;
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_train(const TrainArgs& a) {
  const ScenarioSpec spec = resolve_scenario(a.scenario, a.n);
  if (a.out.empty()) {
    std::cerr << "error: cannot write model: no output path given (--out)\n";
    return kExitIo;
  }

  EstimateMonitor monitor;
  bool mu_reducing = true;
  std::size_t deepest = 0;
  const TrainedModel model =
      train_model(spec, a.cfg, a.seed, [&](const SlabStructure& slabs, const SearchTree& tree, const FrequencyRow& row) {
        monitor_estimates(tree, row, slab_probabilities(spec.per_point[tree.point], slabs), a.cfg.delta, monitor);
        mu_reducing = mu_reducing && check_mu_reducing(tree, row, 2.0 / 3.0);
        deepest = std::max(deepest, max_search_depth(tree));
      });

  try {
    save_model(model, a.out);
  } catch (const ModelIoError&) {
    std::cerr << "error: cannot write model to " << a.out << "\n";
    return kExitIo;
  }

  const auto& m = model.meta;
  std::printf("scenario           %s\n", spec.name.c_str());
  std::printf("n                  %zu\n", model.n());
  std::printf("rng                %s seed %llu\n", m.rng_algorithm.c_str(), static_cast<unsigned long long>(m.seed));
  std::printf("leaf slabs         %zu\n", model.slabs.leaf_count());
  std::printf("slab rounds        %zu\n", m.slab_rounds);
  std::printf("tree rounds        %zu (cap %zu, %s)\n", m.tree_rounds, m.config.rounds_cap,
              m.rounds_capped ? "capped" : "within cap");
  std::printf("leaf threshold     %zu\n", m.leaf_threshold);
  std::printf("partial-tree nodes %zu (%.2f per point)\n", model.node_count(),
              static_cast<double>(model.node_count()) / static_cast<double>(model.n()));
  std::printf("storage            %zu bytes\n", model.storage_bytes());
  std::printf("max search depth   %zu\n", deepest);
  std::printf("2/3-reducing       %s\n", mu_reducing ? "yes" : "NO");
  std::printf("entropy total      %.4f bits\n", model.entropy_total());
  std::printf("estimate monitor   %zu/%zu internal slabs off by more than delta (%.4f)\n", monitor.deviating,
              monitor.checked, monitor.fraction());
  std::printf("model written to   %s\n", a.out.c_str());
  return 0;
}

struct RunArgs {
  std::string model;
  std::size_t trials = 1;
  std::uint64_t seed = 1;
  std::string out;
  bool timing = false;
};

int cmd_run(const RunArgs& a) {
  if (a.trials < 1) throw ConfigError("trials must be >= 1");
  const TrainedModel model = load_model(a.model);
  RunPlan plan;
  plan.trials = a.trials;
  plan.seed = a.seed;
  plan.record_wall_time = a.timing;
  const auto rows = run_trials(model, plan);
  const std::string csv = to_csv(rows);
  if (a.out.empty() || a.out == "-") {
    std::cout << csv;
  } else {
    write_file(a.out, csv);
    std::fprintf(stderr, "%zu rows written to %s\n", rows.size(), a.out.c_str());
  }
  return 0;
}

struct ReportArgs {
  std::vector<std::string> inputs;
  std::string out;
};

int cmd_report(const ReportArgs& a) {
  std::vector<ReportRow> rows;
  for (const auto& path : a.inputs) {
    try {
      auto part = parse_csv(read_file(path));
      rows.insert(rows.end(), part.begin(), part.end());
    } catch (const CsvError& e) {
      throw CsvError(path + ": " + e.what());
    }
  }
  const auto summary = summarize(rows);
  std::error_code ec;
  fs::create_directories(a.out, ec);
  if (ec) throw IoFailure("cannot create " + a.out + ": " + ec.message());
  const fs::path dir(a.out);
  write_file(dir / "summary.csv", summary_csv(summary));
  write_file(dir / "cost_per_point.svg", render_cost_chart_svg(summary));
  write_file(dir / "entropy_scatter.svg", render_entropy_scatter_svg(rows));
  std::cout << format_summary_table(summary);
  std::cout << "report written to " << dir.string() << "\n";
  return 0;
}

struct VerifyArgs {
  std::string model;
  std::uint64_t seed = 1;
};

int cmd_verify(const VerifyArgs& a) {
  const TrainedModel model = load_model(a.model);
  SeededRng rng(a.seed);
  const InputSet input = sample_input(model.scenario, rng);

  EngineOptions options;
  options.check_invariants = true;
  RunStats stats;
  Certificate cert;
  try {
    cert = run_maxima(model, input, stats, options);
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violated (seed " << a.seed << "): " << e.what() << "\n";
    return kExitVerification;
  }
  const bool valid = verify_certificate(input, cert);
  BaselineStats baseline;
  const Certificate reference = sort_scan_maxima(input, baseline);
  const bool agrees = reference.maxima == cert.maxima;

  std::printf("n                  %zu\n", input.size());
  std::printf("maxima             %zu\n", cert.maxima.size());
  std::printf("tree steps         %llu\n", static_cast<unsigned long long>(stats.tree_steps));
  std::printf("dominance checks   %llu\n", static_cast<unsigned long long>(stats.dominance_checks));
  std::printf("update calls       %llu (%llu points sorted)\n", static_cast<unsigned long long>(stats.update_calls),
              static_cast<unsigned long long>(stats.update_sorted_points));
  std::printf("queue cursor moves %llu (leaf slabs %zu)\n", static_cast<unsigned long long>(stats.find_max_scans),
              model.slabs.leaf_count());
  std::printf("frontier invariant held at every update\n");
  std::printf("certificate        %s\n", valid ? "valid" : "INVALID");
  std::printf("matches sort-scan  %s\n", agrees ? "yes" : "NO");
  if (!valid || !agrees) {
    std::cerr << "verification failed for seed " << a.seed << "\n";
    return kExitVerification;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-improving planar maxima: training, trials and reports"};
  app.require_subcommand(1);

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Run the learning phase and write a model");
  train_cmd->add_option("--scenario", train.scenario, "Built-in name or scenario JSON file")->required();
  train_cmd->add_option("--n", train.n, "Number of points (required for built-in scenarios)");
  train_cmd->add_option("--eps", train.cfg.epsilon, "Epsilon in (0, 1]")->capture_default_str();
  train_cmd->add_option("--delta", train.cfg.delta, "Delta in (0, 1]")->capture_default_str();
  train_cmd->add_option("--c-rounds", train.cfg.c_rounds, "Multiplier of the tree-round budget")
      ->capture_default_str();
  train_cmd->add_option("--rounds-cap", train.cfg.rounds_cap, "Hard cap on tree rounds")->capture_default_str();
  train_cmd->add_option("--seed", train.seed, "Training seed")->capture_default_str();
  train_cmd->add_option("--out", train.out, "Model output path");

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run limiting-phase trials and emit CSV rows");
  run_cmd->add_option("--model", run.model, "Trained model")->required();
  run_cmd->add_option("--trials", run.trials, "Trials (>= 1)")->capture_default_str();
  run_cmd->add_option("--seed", run.seed, "Trial seed")->capture_default_str();
  run_cmd->add_option("--out", run.out, "CSV output path (stdout if omitted)");
  run_cmd->add_flag("--timing", run.timing, "Record wall-clock times (output no longer reproducible)");

  ReportArgs report;
  auto* report_cmd = app.add_subcommand("report", "Summarize CSV results and draw SVG charts");
  report_cmd->add_option("--in", report.inputs, "CSV files")->required()->expected(1, -1);
  report_cmd->add_option("--out", report.out, "Output directory")->required();

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "Single trial with invariant checks");
  verify_cmd->add_option("--model", verify.model, "Trained model")->required();
  verify_cmd->add_option("--seed", verify.seed, "Input seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*train_cmd) return cmd_train(train);
    if (*run_cmd) return cmd_run(run);
    if (*report_cmd) return cmd_report(report);
    if (*verify_cmd) return cmd_verify(verify);
  } catch (const VerificationFailure& e) {
    std::cerr << "error: " << e.what() << " (reproduce with seed " << e.seed() << ")\n";
    return kExitVerification;
  } catch (const IoFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ModelIoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
