#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "simax/distributions.hpp"
#include "simax/rng.hpp"
#include "simax/slab_structure.hpp"

namespace simax {

struct TrainingConfig {
  double epsilon = 0.5;
  double delta = 0.5;
  double c_rounds = 1.0;
  std::size_t rounds_cap = 10000;

  // Throws ConfigError when a parameter is out of range.
  void validate() const;

  // min(ceil(c * delta^-2 * n^epsilon * ceil(log2 n)), rounds_cap), at least 1.
  std::size_t tree_rounds(std::size_t n) const;
  // True if tree_rounds(n) was clipped by rounds_cap.
  bool tree_rounds_capped(std::size_t n) const;
  // Slabs visited fewer times than this become balanced-fallback leaves.
  static std::size_t leaf_threshold(std::size_t n);
};

// Leaf-slab histogram of one point over the training rounds, stored sparsely:
// occupied slabs in increasing order with running totals.
class FrequencyRow {
 public:
  FrequencyRow() = default;
  // Builds from the leaf slab observed in each round.
  FrequencyRow(std::vector<std::uint32_t> observed_slabs);

  std::uint64_t rounds() const noexcept { return rounds_; }
  std::uint64_t count(std::size_t slab) const;
  // Occurrences in leaf slabs lo..hi inclusive; 0 if lo > hi.
  std::uint64_t range_count(std::size_t lo, std::size_t hi) const;
  // Smallest slab s in [lo, hi] with range_count(lo, s) >= target; hi if none.
  std::size_t first_reaching(std::size_t lo, std::size_t hi, std::uint64_t target) const;

  std::span<const std::uint32_t> occupied() const noexcept { return slabs_; }
  std::span<const std::uint64_t> cumulative() const noexcept { return cumulative_; }

 private:
  std::uint64_t prefix_before(std::size_t slab) const;

  std::uint64_t rounds_ = 0;
  std::vector<std::uint32_t> slabs_;
  std::vector<std::uint64_t> cumulative_;  // cumulative_[k] = total over slabs_[0..k]
};

struct FrequencyTable {
  std::uint64_t rounds = 0;
  std::size_t leaf_count = 0;
  std::vector<FrequencyRow> rows;

  std::uint64_t count(std::size_t i, std::size_t slab) const { return rows[i].count(slab); }
};

// `rounds` draws from one distribution, located in `slabs`.
FrequencyRow collect_frequency_row(const PointDistribution& dist, const SlabStructure& slabs,
                                   std::size_t rounds, SeededRng& rng);

// Seed of the sampling stream for point i when the table is built from `base`.
std::uint64_t frequency_stream_seed(std::uint64_t base, std::size_t i);

// One independent stream per point, seeded from a single draw of `rng`, so
// rows can be produced in any order and still match.
FrequencyTable collect_frequencies(const ScenarioSpec& spec, const SlabStructure& slabs,
                                   const TrainingConfig& cfg, SeededRng& rng);

// Exact probability of each leaf slab under `dist`.
std::vector<double> slab_probabilities(const PointDistribution& dist, const SlabStructure& slabs);

}  // namespace simax
