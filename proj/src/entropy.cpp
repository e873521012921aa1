#include "simax/entropy.hpp"

#include <cmath>
#include <stdexcept>

namespace simax {

double row_entropy(const FrequencyRow& row) {
  if (row.rounds() == 0) throw std::invalid_argument("entropy of a frequency row with zero rounds");
  const double rounds = static_cast<double>(row.rounds());
  const auto cumulative = row.cumulative();
  double h = 0.0;
  std::uint64_t previous = 0;
  for (std::uint64_t c : cumulative) {
    const double f = static_cast<double>(c - previous) / rounds;
    previous = c;
    h -= f * std::log2(f);
  }
  return h;
}

EntropyReport entropy_proxy(const FrequencyTable& table) {
  if (table.rounds == 0) throw std::invalid_argument("entropy of a frequency table with zero rounds");
  EntropyReport report;
  report.per_point.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    report.per_point.push_back(row_entropy(row));
    report.total += report.per_point.back();
  }
  return report;
}

}  // namespace simax
