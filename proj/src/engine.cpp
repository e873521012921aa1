#include "simax/engine.hpp"

#include <algorithm>
#include <string>

namespace simax {

EngineState::EngineState(const TrainedModel& m, std::span<const Point> in, EngineOptions opts)
    : model(&m),
      input(in),
      options(opts),
      queue(in.size(), m.slabs.leaf_count()),
      frontier(m.slabs.leaf_count() - 1),
      dominator(in.size()) {
  if (in.empty()) throw DegenerateInputError("maxima of an empty input set are undefined");
  if (m.n() != in.size()) {
    throw std::invalid_argument("model trained for n = " + std::to_string(m.n()) + " but input has " +
                                std::to_string(in.size()) + " points");
  }
  search.reserve(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (m.trees[i].leaf_count != m.slabs.leaf_count()) {
      throw std::invalid_argument("search tree " + std::to_string(i) + " does not match the slab structure");
    }
    search.push_back(tree_root(m.trees[i]));
    queue.insert(i, search.back().hi);
  }
  if (options.check_invariants) {
    BaselineStats unused;
    reference_maxima = sort_scan_maxima(input, unused).maxima;
  }
}

std::vector<std::size_t> EngineState::maxima() const {
  return {maxima_rtl.rbegin(), maxima_rtl.rend()};
}

namespace {

void check_frontier_invariant(const EngineState& state) {
  const auto& slabs = state.model->slabs;
  for (std::size_t i : state.buffer) {
    if (slabs.locate(state.input[i].x) != state.frontier) {
      throw InvariantViolation("buffered point " + std::to_string(i) + " is not in the frontier slab");
    }
  }
  // Maxima right of the frontier slab: the oracle's suffix with x >= its
  // right boundary.
  std::vector<std::size_t> expected;
  if (state.frontier + 1 < slabs.leaf_count()) {
    const double boundary = slabs.right_boundary(state.frontier);
    for (std::size_t m : state.reference_maxima) {
      if (state.input[m].x >= boundary) expected.push_back(m);
    }
  }
  if (state.maxima() != expected) {
    throw InvariantViolation("maxima right of frontier slab " + std::to_string(state.frontier) +
                             " are incomplete or out of order");
  }
}

}  // namespace

void update_step(EngineState& state, RunStats& stats) {
  if (state.options.check_invariants) check_frontier_invariant(state);
  ++stats.update_calls;

  const auto input = state.input;
  auto& buffer = state.buffer;
  std::uint64_t comparisons = 0;
  std::sort(buffer.begin(), buffer.end(), [&](std::size_t a, std::size_t b) {
    ++comparisons;
    const Point& p = input[a];
    const Point& q = input[b];
    if (p.x != q.x) return p.x > q.x;
    if (p.y != q.y) return p.y > q.y;
    return a > b;
  });
  stats.update_comparisons += comparisons;
  stats.update_sorted_points += buffer.size();

  // Right-to-left sweep. Every known maximum lies strictly right of the
  // frontier slab, so the leftmost one dominates a buffered point iff it is
  // at least as high.
  std::optional<std::size_t> top = state.leftmost_maximum();
  for (std::size_t i : buffer) {
    const Point& p = input[i];
    bool dominated = false;
    if (top) {
      const Point& t = input[*top];
      ++stats.dominance_checks;
      dominated = p.y < t.y || (p.y == t.y && t.x > p.x);
    }
    if (dominated) {
      state.dominator[i] = *top;
    } else {
      state.maxima_rtl.push_back(i);
      if (!top || p.y > input[*top].y) top = i;
    }
  }
  buffer.clear();

  ++stats.find_max_calls;
  if (auto next = state.queue.find_max()) state.frontier = next->key;
}

bool search_step(EngineState& state, RunStats& stats) {
  ++stats.find_max_calls;
  auto top = state.queue.find_max();
  if (!top) return false;
  if (state.options.key_trace) state.options.key_trace->push_back(top->key);
  if (top->key < state.frontier) update_step(state, stats);

  const std::size_t i = top->item;
  const Point& p = state.input[i];
  if (auto hat = state.leftmost_maximum()) {
    ++stats.dominance_checks;
    if (dominates(state.input[*hat], p)) {
      state.queue.erase(i);
      state.dominator[i] = *hat;
      return true;
    }
  }

  TreeCursor& cursor = state.search[i];
  if (!cursor.located()) {
    const std::uint32_t old_hi = cursor.hi;
    const auto& slabs = state.model->slabs;
    stats.tree_comparisons += tree_step(state.model->trees[i], cursor,
                                        [&](std::uint32_t t) { return p.x < slabs.right_boundary(t); });
    ++stats.tree_steps;
    if (cursor.hi < old_hi) {
      state.queue.decrease_key(i, cursor.hi);
      ++stats.decrease_keys;
    }
  }
  if (cursor.located() && cursor.lo == state.frontier) {
    state.queue.erase(i);
    state.buffer.push_back(i);
  }
  return true;
}

Certificate run_maxima(const TrainedModel& model, std::span<const Point> input, RunStats& stats,
                       EngineOptions options) {
  const auto start = std::chrono::steady_clock::now();
  EngineState state(model, input, options);
  while (search_step(state, stats)) {
  }
  update_step(state, stats);
  stats.find_max_scans += state.queue.cursor_moves();

  Certificate cert;
  cert.maxima = state.maxima();
  cert.dominator = std::move(state.dominator);
  stats.wall_time += std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start);
  return cert;
}

}  // namespace simax
