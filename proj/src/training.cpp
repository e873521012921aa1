#include "simax/training.hpp"

#include "simax/entropy.hpp"

namespace simax {

std::size_t TrainedModel::node_count() const noexcept {
  std::size_t total = 0;
  for (const auto& t : trees) total += t.nodes.size();
  return total;
}

std::size_t TrainedModel::storage_bytes() const noexcept {
  return node_count() * sizeof(SearchTree::Node) + slabs.boundaries().size() * sizeof(double);
}

double TrainedModel::entropy_total() const noexcept {
  double total = 0.0;
  for (double h : entropy) total += h;
  return total;
}

TrainedModel train_model(const ScenarioSpec& spec, const TrainingConfig& cfg, std::uint64_t seed,
                         const RowObserver& observer) {
  validate(spec);
  cfg.validate();
  const std::size_t n = spec.n();

  TrainedModel model;
  model.scenario = spec;
  model.meta.seed = seed;
  model.meta.rng_algorithm = std::string(SeededRng::kAlgorithm);
  model.meta.config = cfg;
  model.meta.slab_rounds = slab_training_rounds(n);
  model.meta.tree_rounds = cfg.tree_rounds(n);
  model.meta.rounds_capped = cfg.tree_rounds_capped(n);
  model.meta.leaf_threshold = TrainingConfig::leaf_threshold(n);

  SeededRng rng(seed);
  std::vector<InputSet> training;
  training.reserve(model.meta.slab_rounds);
  for (std::size_t r = 0; r < model.meta.slab_rounds; ++r) training.push_back(sample_input(spec, rng));
  model.slabs = build_slab_structure(training);
  training.clear();

  // Same stream layout as collect_frequencies.
  const std::uint64_t base = rng.next_u64();
  model.trees.reserve(n);
  model.entropy.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    SeededRng stream(frequency_stream_seed(base, i));
    const FrequencyRow row = collect_frequency_row(spec.per_point[i], model.slabs, model.meta.tree_rounds, stream);
    model.trees.push_back(build_search_tree(i, row, model.slabs.leaf_count(), model.meta.leaf_threshold));
    if (observer) observer(model.slabs, model.trees.back(), row);
    model.entropy.push_back(row_entropy(row));
  }
  return model;
}

}  // namespace simax
