#include "simax/slab_structure.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace simax {

SlabStructure::SlabStructure(std::vector<double> boundaries) : boundaries_(std::move(boundaries)) {
  for (std::size_t i = 0; i < boundaries_.size(); ++i) {
    if (!std::isfinite(boundaries_[i])) throw std::invalid_argument("slab boundary must be finite");
    if (i > 0 && !(boundaries_[i - 1] < boundaries_[i])) {
      throw std::invalid_argument("slab boundaries must be strictly increasing");
    }
  }
}

std::size_t SlabStructure::locate(double x) const {
  return static_cast<std::size_t>(std::upper_bound(boundaries_.begin(), boundaries_.end(), x) -
                                  boundaries_.begin());
}

std::size_t SlabStructure::locate(double x, std::uint64_t& comparisons) const {
  std::size_t lo = 0, count = boundaries_.size();
  while (count > 0) {
    const std::size_t half = count / 2;
    ++comparisons;
    if (boundaries_[lo + half] <= x) {
      lo += half + 1;
      count -= half + 1;
    } else {
      count = half;
    }
  }
  return lo;
}

std::size_t ceil_log2(std::size_t n) {
  if (n <= 1) return 0;
  return static_cast<std::size_t>(std::bit_width(n - 1));
}

std::size_t slab_training_rounds(std::size_t n) { return std::max<std::size_t>(1, ceil_log2(n)); }

SlabStructure build_slab_structure(std::span<const InputSet> training) {
  if (training.empty()) throw std::invalid_argument("no training inputs for the slab structure");
  const std::size_t n = training.front().size();
  const std::size_t k = slab_training_rounds(n);
  if (training.size() < k) {
    throw std::invalid_argument("slab structure needs " + std::to_string(k) + " training inputs, got " +
                                std::to_string(training.size()));
  }
  std::vector<double> xs;
  xs.reserve(n * k);
  for (std::size_t r = 0; r < k; ++r) {
    if (training[r].size() != n) throw std::invalid_argument("training inputs differ in size");
    for (const Point& p : training[r]) xs.push_back(p.x);
  }
  std::sort(xs.begin(), xs.end());
  std::vector<double> boundaries;
  boundaries.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double b = xs[j * k];
    if (boundaries.empty() || boundaries.back() < b) boundaries.push_back(b);
  }
  return SlabStructure(std::move(boundaries));
}

}  // namespace simax
