#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "simax/bucket_queue.hpp"
#include "simax/geometry.hpp"
#include "simax/search_tree.hpp"
#include "simax/training.hpp"

namespace simax {

// Cost counters of one limiting-phase run. One tree step makes at most two
// coordinate comparisons, one dominance check makes two; sorting inside
// update steps is counted on its own.
struct RunStats {
  std::uint64_t tree_steps = 0;
  std::uint64_t tree_comparisons = 0;
  std::uint64_t dominance_checks = 0;
  std::uint64_t decrease_keys = 0;
  std::uint64_t find_max_calls = 0;
  std::uint64_t find_max_scans = 0;  // buckets skipped by the queue cursor
  std::uint64_t update_calls = 0;
  std::uint64_t update_sorted_points = 0;
  std::uint64_t update_comparisons = 0;
  std::chrono::nanoseconds wall_time{0};
};

struct EngineOptions {
  // Before each update, compare the discovered maxima with an oracle for the
  // points right of the current frontier slab. Costs O(n) per update.
  bool check_invariants = false;
  // If set, receives the key returned by every find_max.
  std::vector<std::size_t>* key_trace = nullptr;
};

class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// State of the interleaved search. Points start active with the full slab
// range; `frontier` is the leaf slab whose maxima are being settled, `buffer`
// holds points located in it, and `maxima_rtl` the maxima found so far from
// right to left (its back is the leftmost one).
struct EngineState {
  EngineState(const TrainedModel& model, std::span<const Point> input, EngineOptions options = {});

  const TrainedModel* model;
  std::span<const Point> input;
  EngineOptions options;

  BucketQueue queue;
  std::vector<TreeCursor> search;
  std::size_t frontier;
  std::vector<std::size_t> buffer;
  std::vector<std::size_t> maxima_rtl;
  std::vector<std::optional<std::size_t>> dominator;

  std::optional<std::size_t> leftmost_maximum() const {
    if (maxima_rtl.empty()) return std::nullopt;
    return maxima_rtl.back();
  }
  // Discovered maxima, left to right.
  std::vector<std::size_t> maxima() const;

  // Oracle maxima (left to right), filled when invariants are checked.
  std::vector<std::size_t> reference_maxima;
};

// One iteration of the search loop. Returns false when no active point is left.
bool search_step(EngineState& state, RunStats& stats);

// Settles the buffered points of the frontier slab against the leftmost known
// maximum, then moves the frontier to the current maximum key.
void update_step(EngineState& state, RunStats& stats);

// Limiting phase on one input. Throws std::invalid_argument if the model was
// trained for a different n, DegenerateInputError on empty input.
Certificate run_maxima(const TrainedModel& model, std::span<const Point> input, RunStats& stats,
                       EngineOptions options = {});

}  // namespace simax
