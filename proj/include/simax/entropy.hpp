#pragma once

#include <vector>

#include "simax/frequency.hpp"

namespace simax {

// Empirical leaf-slab entropies (bits), a stand-in for the optimal
// comparison-tree depth of a product distribution.
struct EntropyReport {
  std::vector<double> per_point;
  double total = 0.0;
};

// -sum_j f_j log2 f_j with f_j = count_j / rounds. Throws std::invalid_argument
// when the row has no rounds.
double row_entropy(const FrequencyRow& row);

EntropyReport entropy_proxy(const FrequencyTable& table);

}  // namespace simax
