#include "simax/search_tree.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace simax {

namespace {

class TreeBuilder {
 public:
  TreeBuilder(SearchTree& tree, const FrequencyRow& row, std::size_t threshold)
      : tree_(tree), row_(row), threshold_(threshold) {}

  // Node for [lo, hi] (lo < hi); returns its index.
  std::int32_t build(std::uint32_t lo, std::uint32_t hi) {
    const auto index = static_cast<std::int32_t>(tree_.nodes.size());
    tree_.nodes.push_back({lo, hi, SearchTree::kNone, SearchTree::kNone, SearchTree::kNone});
    const std::uint64_t total = row_.range_count(lo, hi);
    if (total < threshold_) return index;

    // Weighted median: first leaf slab where the running count reaches half.
    const auto split = static_cast<std::uint32_t>(row_.first_reaching(lo, hi, (total + 1) / 2));
    std::int32_t left = SearchTree::kNone;
    std::int32_t right = SearchTree::kNone;
    if (split > lo + 1) left = build(lo, split - 1);
    if (split + 1 < hi) right = build(split + 1, hi);
    auto& node = tree_.nodes[static_cast<std::size_t>(index)];
    node.split = static_cast<std::int32_t>(split);
    node.left = left;
    node.right = right;
    return index;
  }

 private:
  SearchTree& tree_;
  const FrequencyRow& row_;
  std::size_t threshold_;
};

std::size_t depth_below(const SearchTree& tree, std::int32_t index, bool with_fallback) {
  const auto& node = tree.nodes[static_cast<std::size_t>(index)];
  if (node.fallback()) return with_fallback ? ceil_log2(node.hi - node.lo + 1) : 0;
  std::size_t deepest = 0;
  if (node.left != SearchTree::kNone) deepest = std::max(deepest, depth_below(tree, node.left, with_fallback));
  if (node.right != SearchTree::kNone) deepest = std::max(deepest, depth_below(tree, node.right, with_fallback));
  return 1 + deepest;
}

}  // namespace

TreeCursor tree_root(const SearchTree& tree) {
  TreeCursor cursor;
  cursor.lo = 0;
  cursor.hi = static_cast<std::uint32_t>(tree.leaf_count - 1);
  if (tree.leaf_count == 1) return cursor;
  cursor.node = tree.nodes.front().fallback() ? TreeCursor::kBinary : 0;
  return cursor;
}

SearchTree build_search_tree(std::size_t point, const FrequencyRow& row, std::size_t leaf_count,
                             std::size_t leaf_threshold) {
  if (leaf_count == 0) throw std::invalid_argument("search tree over zero leaf slabs");
  SearchTree tree;
  tree.point = point;
  tree.leaf_count = leaf_count;
  if (leaf_count > 1) {
    TreeBuilder(tree, row, leaf_threshold).build(0, static_cast<std::uint32_t>(leaf_count - 1));
  }
  return tree;
}

bool check_mu_reducing(const SearchTree& tree, const FrequencyRow& row, double mu) {
  for (const auto& node : tree.nodes) {
    if (node.fallback()) continue;
    const double parent = static_cast<double>(row.range_count(node.lo, node.hi));
    for (std::int32_t child : {node.left, node.right}) {
      if (child == SearchTree::kNone) continue;
      const auto& c = tree.nodes[static_cast<std::size_t>(child)];
      if (c.fallback()) continue;
      if (static_cast<double>(row.range_count(c.lo, c.hi)) > mu * parent) return false;
    }
  }
  return true;
}

std::size_t max_search_depth(const SearchTree& tree) {
  if (tree.nodes.empty()) return 0;
  return depth_below(tree, 0, true);
}

std::size_t partial_depth(const SearchTree& tree) {
  if (tree.nodes.empty()) return 0;
  return depth_below(tree, 0, false);
}

std::size_t full_search_depth(const SearchTree& tree, std::size_t leaf) {
  if (leaf >= tree.leaf_count) throw std::out_of_range("leaf slab outside the tree");
  TreeCursor cursor = tree_root(tree);
  std::size_t steps = 0;
  while (!cursor.located()) {
    tree_step(tree, cursor, [leaf](std::uint32_t t) { return leaf <= t; });
    ++steps;
  }
  return steps;
}

std::size_t restricted_search_depth(const SearchTree& tree, std::size_t interval_lo, std::size_t interval_hi,
                                    std::size_t leaf) {
  if (leaf < interval_lo || leaf > interval_hi || interval_hi >= tree.leaf_count) {
    throw std::invalid_argument("restricted search target outside its interval");
  }
  TreeCursor cursor = tree_root(tree);
  std::size_t steps = 0;
  while (!(cursor.lo >= interval_lo && cursor.hi <= interval_hi)) {
    tree_step(tree, cursor, [leaf](std::uint32_t t) { return leaf <= t; });
    ++steps;
  }
  return steps;
}

double simulate_restricted_search(const SearchTree& tree, std::size_t interval_lo, std::size_t interval_hi,
                                  const std::vector<double>& weights, std::size_t trials, SeededRng& rng) {
  if (weights.size() != tree.leaf_count) throw std::invalid_argument("one weight per leaf slab required");
  if (interval_lo > interval_hi || interval_hi >= tree.leaf_count) {
    throw std::invalid_argument("restricted interval out of range");
  }
  if (trials == 0) throw std::invalid_argument("restricted search needs at least one trial");
  std::vector<double> cumulative;
  cumulative.reserve(interval_hi - interval_lo + 1);
  double total = 0.0;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    if (weights[j] < 0.0) throw std::invalid_argument("negative restricted weight");
    if (weights[j] > 0.0 && (j < interval_lo || j > interval_hi)) {
      throw std::invalid_argument("restricted weights must be supported inside the interval");
    }
    if (j >= interval_lo && j <= interval_hi) {
      total += weights[j];
      cumulative.push_back(total);
    }
  }
  if (!(total > 0.0)) throw std::invalid_argument("restricted distribution has empty support");

  std::uint64_t steps = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    const double u = rng.uniform() * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    auto k = static_cast<std::size_t>(it - cumulative.begin());
    // u rounded up to the total: fall back to the last slab with weight.
    while (weights[interval_lo + k] == 0.0) --k;
    steps += restricted_search_depth(tree, interval_lo, interval_hi, interval_lo + k);
  }
  return static_cast<double>(steps) / static_cast<double>(trials);
}

void monitor_estimates(const SearchTree& tree, const FrequencyRow& row, const std::vector<double>& reference,
                       double delta, EstimateMonitor& monitor) {
  if (reference.size() != tree.leaf_count) throw std::invalid_argument("reference needs one entry per leaf slab");
  const double rounds = static_cast<double>(row.rounds());
  std::vector<double> prefix(reference.size() + 1, 0.0);
  for (std::size_t j = 0; j < reference.size(); ++j) prefix[j + 1] = prefix[j] + reference[j];
  for (const auto& node : tree.nodes) {
    if (node.fallback()) continue;
    const double q = prefix[node.hi + 1] - prefix[node.lo];
    const double estimate = static_cast<double>(row.range_count(node.lo, node.hi)) / rounds;
    ++monitor.checked;
    if (std::abs(estimate - q) > delta * q) ++monitor.deviating;
  }
}

}  // namespace simax
