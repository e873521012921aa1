#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "simax/distributions.hpp"
#include "simax/frequency.hpp"
#include "simax/search_tree.hpp"
#include "simax/slab_structure.hpp"

namespace simax {

struct TrainingMetadata {
  std::uint64_t seed = 0;
  std::string rng_algorithm;
  TrainingConfig config;
  std::size_t slab_rounds = 0;
  std::size_t tree_rounds = 0;
  bool rounds_capped = false;
  std::size_t leaf_threshold = 0;

  friend bool operator==(const TrainingMetadata& a, const TrainingMetadata& b) {
    return a.seed == b.seed && a.rng_algorithm == b.rng_algorithm && a.config.epsilon == b.config.epsilon &&
           a.config.delta == b.config.delta && a.config.c_rounds == b.config.c_rounds &&
           a.config.rounds_cap == b.config.rounds_cap && a.slab_rounds == b.slab_rounds &&
           a.tree_rounds == b.tree_rounds && a.rounds_capped == b.rounds_capped &&
           a.leaf_threshold == b.leaf_threshold;
  }
};

// Everything the limiting phase needs, plus the scenario it was trained on
// so fresh inputs can be drawn from the same distribution.
struct TrainedModel {
  ScenarioSpec scenario;
  SlabStructure slabs;
  std::vector<SearchTree> trees;
  std::vector<double> entropy;  // empirical leaf-slab entropy per point
  TrainingMetadata meta;

  std::size_t n() const noexcept { return trees.size(); }
  std::size_t node_count() const noexcept;
  std::size_t storage_bytes() const noexcept;
  double entropy_total() const noexcept;

  friend bool operator==(const TrainedModel&, const TrainedModel&) = default;
};

// Called once per point, after its tree is built and before its frequency
// row is dropped.
using RowObserver =
    std::function<void(const SlabStructure& slabs, const SearchTree& tree, const FrequencyRow& row)>;

// Learning phase: ceil(log2 n) inputs build the slab structure, then
// cfg.tree_rounds(n) draws per point estimate leaf-slab frequencies and build
// the search trees. Frequency rows are discarded once their tree is built.
TrainedModel train_model(const ScenarioSpec& spec, const TrainingConfig& cfg, std::uint64_t seed,
                         const RowObserver& observer = {});

}  // namespace simax
