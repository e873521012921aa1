#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "simax/frequency.hpp"
#include "simax/rng.hpp"

namespace simax {

// Per-point search tree over leaf-slab indices. Only the partial tree learned
// from training frequencies is stored. Each internal node covers a contiguous
// range [lo, hi] of leaf slabs and splits it at a leaf slab `split` into
// [lo, split-1], {split}, [split+1, hi]. A node whose range was visited too
// rarely in training is a fallback leaf: below it the search is a plain
// binary search over leaf-slab indices, computed on the fly.
struct SearchTree {
  static constexpr std::int32_t kNone = -1;

  struct Node {
    std::uint32_t lo = 0;
    std::uint32_t hi = 0;
    std::int32_t split = kNone;  // kNone marks a fallback leaf
    std::int32_t left = kNone;   // node for [lo, split-1] when it has 2+ slabs
    std::int32_t right = kNone;  // node for [split+1, hi] when it has 2+ slabs

    bool fallback() const noexcept { return split == kNone; }
    friend bool operator==(const Node&, const Node&) = default;
  };

  std::size_t point = 0;
  std::size_t leaf_count = 1;
  std::vector<Node> nodes;  // nodes[0] is the root when leaf_count > 1

  friend bool operator==(const SearchTree&, const SearchTree&) = default;
};

// Position of one search inside a tree.
struct TreeCursor {
  static constexpr std::int32_t kBinary = -2;

  std::int32_t node = SearchTree::kNone;  // node index, kBinary, or kNone once located
  std::uint32_t lo = 0;
  std::uint32_t hi = 0;

  bool located() const noexcept { return lo == hi; }
  bool in_fallback() const noexcept { return node == kBinary; }
};

TreeCursor tree_root(const SearchTree& tree);

// Advances a search by one node. `less(t)` must answer whether the query lies
// strictly left of the right boundary of leaf slab t. Returns the number of
// boundary comparisons made (1 or 2). Precondition: !cursor.located().
template <class LessThanBoundary>
unsigned tree_step(const SearchTree& tree, TreeCursor& cursor, LessThanBoundary&& less);

// Weighted-median construction. Ranges with fewer than `leaf_threshold`
// training hits become fallback leaves.
SearchTree build_search_tree(std::size_t point, const FrequencyRow& row, std::size_t leaf_count,
                             std::size_t leaf_threshold);

// Every internal child S' of an internal node S has count(S') <= mu * count(S).
bool check_mu_reducing(const SearchTree& tree, const FrequencyRow& row, double mu);

// Longest root-to-leaf-slab path, fallback levels included.
std::size_t max_search_depth(const SearchTree& tree);
std::size_t partial_depth(const SearchTree& tree);

// Steps needed to locate leaf slab `leaf` exactly.
std::size_t full_search_depth(const SearchTree& tree, std::size_t leaf);

// Mean number of steps of an S-restricted search: leaves are drawn with
// probability proportional to `weights` (one entry per leaf slab, zero outside
// [interval_lo, interval_hi]) and each search stops as soon as its current
// range lies inside the interval. Throws std::invalid_argument for an empty
// support, weights outside the interval, or a size mismatch.
double simulate_restricted_search(const SearchTree& tree, std::size_t interval_lo, std::size_t interval_hi,
                                  const std::vector<double>& weights, std::size_t trials, SeededRng& rng);

// Steps of one restricted search for leaf slab `leaf`.
std::size_t restricted_search_depth(const SearchTree& tree, std::size_t interval_lo, std::size_t interval_hi,
                                    std::size_t leaf);

// How many internal nodes have an estimated mass count/rounds farther than
// delta (relative) from the reference probability of their range.
struct EstimateMonitor {
  std::size_t checked = 0;
  std::size_t deviating = 0;
  double fraction() const noexcept { return checked ? static_cast<double>(deviating) / checked : 0.0; }
};
void monitor_estimates(const SearchTree& tree, const FrequencyRow& row, const std::vector<double>& reference,
                       double delta, EstimateMonitor& monitor);

// ---------------------------------------------------------------------------

namespace detail {
inline std::int32_t enter(const SearchTree& tree, std::int32_t child, std::uint32_t lo, std::uint32_t hi) {
  if (lo == hi) return SearchTree::kNone;
  return tree.nodes[static_cast<std::size_t>(child)].fallback() ? TreeCursor::kBinary : child;
}
}  // namespace detail

template <class LessThanBoundary>
unsigned tree_step(const SearchTree& tree, TreeCursor& cursor, LessThanBoundary&& less) {
  if (cursor.node == TreeCursor::kBinary) {
    const std::uint32_t mid = cursor.lo + (cursor.hi - cursor.lo) / 2;
    if (less(mid)) {
      cursor.hi = mid;
    } else {
      cursor.lo = mid + 1;
    }
    if (cursor.located()) cursor.node = SearchTree::kNone;
    return 1;
  }
  const SearchTree::Node& node = tree.nodes[static_cast<std::size_t>(cursor.node)];
  const auto split = static_cast<std::uint32_t>(node.split);
  unsigned comparisons = 0;
  if (split > cursor.lo) {
    ++comparisons;
    if (less(split - 1)) {
      cursor.hi = split - 1;
      cursor.node = detail::enter(tree, node.left, cursor.lo, cursor.hi);
      return comparisons;
    }
  }
  if (split < cursor.hi) {
    ++comparisons;
    if (!less(split)) {
      cursor.lo = split + 1;
      cursor.node = detail::enter(tree, node.right, cursor.lo, cursor.hi);
      return comparisons;
    }
  }
  cursor.lo = cursor.hi = split;
  cursor.node = SearchTree::kNone;
  return comparisons;
}

}  // namespace simax
