#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "simax/geometry.hpp"

namespace simax {

// Vertical lines b_0 < ... < b_{m-1} cutting the plane into m+1 leaf slabs.
// Leaf slab j is [b_{j-1}, b_j); slab 0 is unbounded on the left and slab m
// on the right. A point on a line belongs to the slab on its right.
class SlabStructure {
 public:
  SlabStructure() = default;
  // Throws std::invalid_argument unless strictly increasing and finite.
  explicit SlabStructure(std::vector<double> boundaries);

  const std::vector<double>& boundaries() const noexcept { return boundaries_; }
  std::size_t leaf_count() const noexcept { return boundaries_.size() + 1; }

  // Right boundary of leaf slab j; j < leaf_count() - 1.
  double right_boundary(std::size_t j) const { return boundaries_[j]; }

  std::size_t locate(double x) const;
  // Same, adding the number of coordinate comparisons to *comparisons.
  std::size_t locate(double x, std::uint64_t& comparisons) const;

  friend bool operator==(const SlabStructure&, const SlabStructure&) = default;

 private:
  std::vector<double> boundaries_;
};

// ceil(log2 n); 0 for n <= 1.
std::size_t ceil_log2(std::size_t n);

// Number of training inputs used for the slab structure: ceil(log2 n), at least 1.
std::size_t slab_training_rounds(std::size_t n);

// Pools the x-coordinates of the first slab_training_rounds(n) inputs, sorts
// them and keeps every k-th value (x_0, x_k, ..., x_{(n-1)k}), dropping
// repeats. Throws std::invalid_argument if too few inputs are supplied or
// their sizes differ.
SlabStructure build_slab_structure(std::span<const InputSet> training);

}  // namespace simax
