#include "simax/bench.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

#include "simax/engine.hpp"
#include "simax/geometry.hpp"

namespace simax {

std::uint64_t trial_seed(std::uint64_t plan_seed, std::size_t trial) { return derive_seed(plan_seed, trial); }

namespace {

void require_valid(std::span<const Point> input, const Certificate& cert, std::string_view algorithm,
                   std::uint64_t seed) {
  if (!verify_certificate(input, cert)) {
    throw VerificationFailure(std::string(algorithm) + " produced an invalid certificate for trial seed " +
                                  std::to_string(seed),
                              seed);
  }
}

std::uint64_t nanos(std::chrono::nanoseconds d, bool record) {
  return record ? static_cast<std::uint64_t>(d.count()) : 0;
}

}  // namespace

std::vector<ReportRow> run_trials(const TrainedModel& model, const RunPlan& plan) {
  if (plan.trials < 1) throw ConfigError("trials must be >= 1");
  if (model.scenario.name.find_first_of(",\r\n") != std::string::npos) {
    throw ConfigError("scenario name must not contain commas or line breaks");
  }
  const std::size_t n = model.n();
  const double entropy = model.entropy_total();
  std::vector<ReportRow> rows;
  rows.reserve(plan.trials * 3);

  for (std::size_t t = 0; t < plan.trials; ++t) {
    const std::uint64_t seed = trial_seed(plan.seed, t);
    SeededRng rng(seed);
    const InputSet input = sample_input(model.scenario, rng);
    ReportRow base;
    base.scenario = model.scenario.name;
    base.n = n;
    base.seed = seed;
    base.phase = "limiting";
    base.entropy_total = entropy;

    {
      RunStats stats;
      const Certificate cert = run_maxima(model, input, stats);
      require_valid(input, cert, kSelfImproving, seed);
      ReportRow row = base;
      row.algorithm = kSelfImproving;
      row.tree_steps = stats.tree_steps;
      row.dominance_checks = stats.dominance_checks;
      row.sort_comparisons = stats.update_comparisons;
      row.update_sorted_points = stats.update_sorted_points;
      row.wall_time_ns = nanos(stats.wall_time, plan.record_wall_time);
      row.verified = true;
      rows.push_back(std::move(row));
    }
    {
      BaselineStats stats;
      const auto start = std::chrono::steady_clock::now();
      const Certificate cert = sort_scan_maxima(input, stats);
      const auto elapsed = std::chrono::steady_clock::now() - start;
      require_valid(input, cert, kSortScan, seed);
      ReportRow row = base;
      row.algorithm = kSortScan;
      row.dominance_checks = stats.comparisons;
      row.sort_comparisons = stats.sort_cost;
      row.wall_time_ns = nanos(elapsed, plan.record_wall_time);
      row.verified = true;
      rows.push_back(std::move(row));
    }
    {
      ReportRow row = base;
      row.algorithm = kBruteForce;
      if (n <= plan.brute_force_limit) {
        BaselineStats stats;
        const auto start = std::chrono::steady_clock::now();
        const Certificate cert = brute_force_maxima(input, stats);
        const auto elapsed = std::chrono::steady_clock::now() - start;
        require_valid(input, cert, kBruteForce, seed);
        row.dominance_checks = stats.comparisons;
        row.sort_comparisons = stats.sort_cost;
        row.wall_time_ns = nanos(elapsed, plan.record_wall_time);
        row.verified = true;
      } else {
        row.phase = "skipped";
        row.verified = false;
      }
      rows.push_back(std::move(row));
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const ReportRow& a, const ReportRow& b) {
    return std::tie(a.n, a.seed, a.algorithm) < std::tie(b.n, b.seed, b.algorithm);
  });
  return rows;
}

std::string format_csv_row(const ReportRow& r) {
  char entropy[64];
  std::snprintf(entropy, sizeof entropy, "%.6f", r.entropy_total);
  std::ostringstream out;
  out << r.scenario << ',' << r.n << ',' << r.seed << ',' << r.phase << ',' << r.algorithm << ',' << r.tree_steps
      << ',' << r.dominance_checks << ',' << r.sort_comparisons << ',' << r.update_sorted_points << ',' << entropy
      << ',' << r.wall_time_ns << ',' << (r.verified ? "true" : "false");
  return out.str();
}

void write_csv(std::ostream& out, std::span<const ReportRow> rows) {
  out << kCsvHeader << '\n';
  for (const auto& row : rows) out << format_csv_row(row) << '\n';
}

std::string to_csv(std::span<const ReportRow> rows) {
  std::ostringstream out;
  write_csv(out, rows);
  return out.str();
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

template <class T>
T parse_number(std::string_view text, std::size_t line, const char* column) {
  T value{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw CsvError("line " + std::to_string(line) + ": bad value for " + column + ": \"" + std::string(text) +
                   "\"");
  }
  return value;
}

}  // namespace

std::vector<ReportRow> parse_csv(std::string_view text) {
  std::vector<ReportRow> rows;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != kCsvHeader) throw CsvError("line " + std::to_string(line_no) + ": unexpected header");
      header_seen = true;
      continue;
    }
    const auto f = split_fields(line);
    if (f.size() != 12) {
      throw CsvError("line " + std::to_string(line_no) + ": expected 12 fields, found " + std::to_string(f.size()));
    }
    ReportRow r;
    r.scenario = std::string(f[0]);
    r.n = parse_number<std::size_t>(f[1], line_no, "n");
    r.seed = parse_number<std::uint64_t>(f[2], line_no, "seed");
    r.phase = std::string(f[3]);
    r.algorithm = std::string(f[4]);
    r.tree_steps = parse_number<std::uint64_t>(f[5], line_no, "tree_steps");
    r.dominance_checks = parse_number<std::uint64_t>(f[6], line_no, "dominance_checks");
    r.sort_comparisons = parse_number<std::uint64_t>(f[7], line_no, "sort_comparisons");
    r.update_sorted_points = parse_number<std::uint64_t>(f[8], line_no, "update_sorted_points");
    r.entropy_total = parse_number<double>(f[9], line_no, "entropy_total");
    r.wall_time_ns = parse_number<std::uint64_t>(f[10], line_no, "wall_time_ns");
    if (f[11] == "true") {
      r.verified = true;
    } else if (f[11] == "false") {
      r.verified = false;
    } else {
      throw CsvError("line " + std::to_string(line_no) + ": verified must be true or false");
    }
    if (r.n == 0) throw CsvError("line " + std::to_string(line_no) + ": n must be positive");
    rows.push_back(std::move(r));
  }
  if (!header_seen) throw CsvError("missing header");
  if (rows.empty()) throw CsvError("no data rows");
  return rows;
}

std::vector<SummaryRow> summarize(std::span<const ReportRow> rows) {
  struct Acc {
    std::vector<double> cost, search, update, entropy;
  };
  std::map<std::tuple<std::string, std::size_t, std::string>, Acc> groups;
  for (const auto& r : rows) {
    if (r.phase == "skipped") continue;
    const double n = static_cast<double>(r.n);
    auto& g = groups[{r.scenario, r.n, r.algorithm}];
    g.cost.push_back(static_cast<double>(r.tree_steps + r.dominance_checks + r.sort_comparisons) / n);
    g.search.push_back(static_cast<double>(r.tree_steps + r.dominance_checks) / n);
    g.update.push_back(static_cast<double>(r.update_sorted_points) / n);
    g.entropy.push_back(r.entropy_total / n);
  }
  auto mean = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  std::vector<SummaryRow> out;
  for (const auto& [key, g] : groups) {
    SummaryRow s;
    std::tie(s.scenario, s.n, s.algorithm) = key;
    s.trials = g.cost.size();
    s.mean_cost_per_point = mean(g.cost);
    if (g.cost.size() > 1) {
      double ss = 0.0;
      for (double x : g.cost) ss += (x - s.mean_cost_per_point) * (x - s.mean_cost_per_point);
      s.stddev_cost_per_point = std::sqrt(ss / static_cast<double>(g.cost.size() - 1));
    }
    s.mean_search_per_point = mean(g.search);
    s.mean_update_per_point = mean(g.update);
    s.mean_entropy_per_point = mean(g.entropy);
    out.push_back(std::move(s));
  }
  return out;
}

std::string format_summary_table(std::span<const SummaryRow> summary) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-16s %8s %-15s %6s %12s %10s %12s %10s\n", "scenario", "n", "algorithm",
                "trials", "cost/pt", "stddev", "search/pt", "H/pt");
  out << line;
  for (const auto& s : summary) {
    std::snprintf(line, sizeof line, "%-16s %8zu %-15s %6zu %12.4f %10.4f %12.4f %10.4f\n", s.scenario.c_str(), s.n,
                  s.algorithm.c_str(), s.trials, s.mean_cost_per_point, s.stddev_cost_per_point,
                  s.mean_search_per_point, s.mean_entropy_per_point);
    out << line;
  }
  return out.str();
}

std::string summary_csv(std::span<const SummaryRow> summary) {
  std::ostringstream out;
  out << "scenario,n,algorithm,trials,mean_cost_per_point,stddev_cost_per_point,mean_search_per_point,"
         "mean_update_per_point,mean_entropy_per_point\n";
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return std::string(buf);
  };
  for (const auto& s : summary) {
    out << s.scenario << ',' << s.n << ',' << s.algorithm << ',' << s.trials << ',' << num(s.mean_cost_per_point)
        << ',' << num(s.stddev_cost_per_point) << ',' << num(s.mean_search_per_point) << ','
        << num(s.mean_update_per_point) << ',' << num(s.mean_entropy_per_point) << '\n';
  }
  return out.str();
}

namespace {

constexpr double kWidth = 760, kHeight = 460;
constexpr double kLeft = 70, kRight = 220, kTop = 40, kBottom = 60;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Frame {
  double x_min, x_max, y_min, y_max;
  double px(double x) const {
    const double span = x_max > x_min ? x_max - x_min : 1.0;
    return kLeft + (x - x_min) / span * (kWidth - kLeft - kRight);
  }
  double py(double y) const {
    const double span = y_max > y_min ? y_max - y_min : 1.0;
    return kHeight - kBottom - (y - y_min) / span * (kHeight - kTop - kBottom);
  }
};

void open_svg(std::ostringstream& out, std::string_view title, std::string_view x_label, std::string_view y_label) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kLeft << "\" y=\"22\" font-size=\"15\">" << escape(title) << "</text>\n";
  out << "<text x=\"" << fmt((kLeft + kWidth - kRight) / 2) << "\" y=\"" << kHeight - 15
      << "\" text-anchor=\"middle\">" << escape(x_label) << "</text>\n";
  out << "<text transform=\"translate(18," << fmt((kTop + kHeight - kBottom) / 2)
      << ") rotate(-90)\" text-anchor=\"middle\">" << escape(y_label) << "</text>\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kHeight - kBottom << "\" x2=\"" << kWidth - kRight << "\" y2=\""
      << kHeight - kBottom << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kHeight - kBottom
      << "\" stroke=\"black\"/>\n";
}

void y_ticks(std::ostringstream& out, const Frame& f) {
  for (int k = 0; k <= 4; ++k) {
    const double v = f.y_min + (f.y_max - f.y_min) * k / 4.0;
    out << "<text class=\"ytick\" x=\"" << kLeft - 6 << "\" y=\"" << fmt(f.py(v) + 4) << "\" text-anchor=\"end\">"
        << fmt(v) << "</text>\n";
  }
}

void legend(std::ostringstream& out, std::size_t index, std::string_view label) {
  const double y = kTop + 18.0 * static_cast<double>(index);
  const double x = kWidth - kRight + 15;
  out << "<rect x=\"" << x << "\" y=\"" << fmt(y - 9) << "\" width=\"10\" height=\"10\" fill=\""
      << kPalette[index % std::size(kPalette)] << "\"/>\n";
  out << "<text x=\"" << x + 15 << "\" y=\"" << fmt(y) << "\">" << escape(label) << "</text>\n";
}

}  // namespace

std::string render_cost_chart_svg(std::span<const SummaryRow> summary) {
  std::map<std::string, std::vector<std::pair<double, double>>> series;
  std::vector<std::size_t> ns;
  double y_max = 0.0;
  for (const auto& s : summary) {
    series[s.scenario + " / " + s.algorithm].emplace_back(std::log2(static_cast<double>(s.n)), s.mean_cost_per_point);
    ns.push_back(s.n);
    y_max = std::max(y_max, s.mean_cost_per_point);
  }
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  Frame f{ns.empty() ? 0.0 : std::log2(static_cast<double>(ns.front())) - 0.5,
          ns.empty() ? 1.0 : std::log2(static_cast<double>(ns.back())) + 0.5, 0.0, y_max > 0 ? y_max * 1.1 : 1.0};

  std::ostringstream out;
  open_svg(out, "Comparisons per point", "n (log scale)", "mean cost per point");
  for (std::size_t n : ns) {
    const double x = f.px(std::log2(static_cast<double>(n)));
    out << "<line x1=\"" << fmt(x) << "\" y1=\"" << kHeight - kBottom << "\" x2=\"" << fmt(x) << "\" y2=\""
        << kHeight - kBottom + 5 << "\" stroke=\"black\"/>\n";
    out << "<text class=\"xtick\" x=\"" << fmt(x) << "\" y=\"" << kHeight - kBottom + 18
        << "\" text-anchor=\"middle\">" << n << "</text>\n";
  }
  y_ticks(out, f);
  std::size_t index = 0;
  for (auto& [label, points] : series) {
    std::sort(points.begin(), points.end());
    const char* color = kPalette[index % std::size(kPalette)];
    out << "<polyline class=\"series\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t k = 0; k < points.size(); ++k) {
      out << (k ? " " : "") << fmt(f.px(points[k].first)) << ',' << fmt(f.py(points[k].second));
    }
    out << "\"/>\n";
    for (const auto& [x, y] : points) {
      out << "<circle cx=\"" << fmt(f.px(x)) << "\" cy=\"" << fmt(f.py(y)) << "\" r=\"3\" fill=\"" << color
          << "\"/>\n";
    }
    legend(out, index, label);
    ++index;
  }
  out << "</svg>\n";
  return out.str();
}

std::string render_entropy_scatter_svg(std::span<const ReportRow> rows) {
  std::map<std::string, std::vector<std::pair<double, double>>> series;
  double x_max = 0.0, y_max = 0.0;
  for (const auto& r : rows) {
    if (r.algorithm != kSelfImproving || r.phase == "skipped") continue;
    const double n = static_cast<double>(r.n);
    const double x = r.entropy_total / n;
    const double y = static_cast<double>(r.tree_steps) / n;
    series[r.scenario + " n=" + std::to_string(r.n)].emplace_back(x, y);
    x_max = std::max(x_max, x);
    y_max = std::max(y_max, y);
  }
  Frame f{0.0, x_max > 0 ? x_max * 1.1 : 1.0, 0.0, y_max > 0 ? y_max * 1.1 : 1.0};
  std::ostringstream out;
  open_svg(out, "Self-improving search cost vs entropy", "entropy per point (bits)", "tree steps per point");
  for (int k = 0; k <= 4; ++k) {
    const double v = f.x_min + (f.x_max - f.x_min) * k / 4.0;
    out << "<text class=\"xtick\" x=\"" << fmt(f.px(v)) << "\" y=\"" << kHeight - kBottom + 18
        << "\" text-anchor=\"middle\">" << fmt(v) << "</text>\n";
  }
  y_ticks(out, f);
  std::size_t index = 0;
  for (const auto& [label, points] : series) {
    const char* color = kPalette[index % std::size(kPalette)];
    for (const auto& [x, y] : points) {
      out << "<circle cx=\"" << fmt(f.px(x)) << "\" cy=\"" << fmt(f.py(y)) << "\" r=\"3\" fill=\"" << color
          << "\" fill-opacity=\"0.6\"/>\n";
    }
    legend(out, index, label);
    ++index;
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace simax
