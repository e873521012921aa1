#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "simax/training.hpp"

namespace simax {

inline constexpr std::string_view kCsvHeader =
    "scenario,n,seed,phase,algorithm,tree_steps,dominance_checks,sort_comparisons,update_sorted_points,"
    "entropy_total,wall_time_ns,verified";

inline constexpr std::string_view kSelfImproving = "self_improving";
inline constexpr std::string_view kSortScan = "sort_scan";
inline constexpr std::string_view kBruteForce = "brute_force";

struct ReportRow {
  std::string scenario;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::string phase;  // "limiting", or "skipped" for a baseline that was not run
  std::string algorithm;
  std::uint64_t tree_steps = 0;
  std::uint64_t dominance_checks = 0;
  std::uint64_t sort_comparisons = 0;
  std::uint64_t update_sorted_points = 0;
  double entropy_total = 0.0;
  std::uint64_t wall_time_ns = 0;
  bool verified = false;

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a certificate fails verification; carries the trial seed.
class VerificationFailure : public std::runtime_error {
 public:
  VerificationFailure(const std::string& what, std::uint64_t seed) : std::runtime_error(what), seed_(seed) {}
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t seed_;
};

struct RunPlan {
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  // Wall-clock times make output nondeterministic; off by default (column is 0).
  bool record_wall_time = false;
  std::size_t brute_force_limit = 4096;
};

// Seed of trial t under `plan_seed`.
std::uint64_t trial_seed(std::uint64_t plan_seed, std::size_t trial);

// For each trial: draw an input from the model's scenario, run the
// self-improving engine and both baselines, verify every certificate. Rows are
// ordered by (n, seed, algorithm). Throws VerificationFailure on a bad
// certificate and ConfigError when trials == 0.
std::vector<ReportRow> run_trials(const TrainedModel& model, const RunPlan& plan);

std::string format_csv_row(const ReportRow& row);
void write_csv(std::ostream& out, std::span<const ReportRow> rows);
std::string to_csv(std::span<const ReportRow> rows);

// Strict reader for the format above; CsvError names the 1-based line.
std::vector<ReportRow> parse_csv(std::string_view text);

struct SummaryRow {
  std::string scenario;
  std::size_t n = 0;
  std::string algorithm;
  std::size_t trials = 0;
  // (tree_steps + dominance_checks + sort_comparisons) / n
  double mean_cost_per_point = 0.0;
  double stddev_cost_per_point = 0.0;
  // (tree_steps + dominance_checks) / n
  double mean_search_per_point = 0.0;
  double mean_update_per_point = 0.0;
  double mean_entropy_per_point = 0.0;
};

// Mean and sample standard deviation per (scenario, n, algorithm). Skipped
// rows are ignored.
std::vector<SummaryRow> summarize(std::span<const ReportRow> rows);

std::string format_summary_table(std::span<const SummaryRow> summary);
std::string summary_csv(std::span<const SummaryRow> summary);

// Cost per point against n (log scale), one line per (scenario, algorithm).
std::string render_cost_chart_svg(std::span<const SummaryRow> summary);
// Self-improving search cost per point against entropy per point, one dot per trial.
std::string render_entropy_scatter_svg(std::span<const ReportRow> rows);

}  // namespace simax
