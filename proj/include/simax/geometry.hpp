#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace simax {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

// One input: point i is drawn from the i-th distribution.
using InputSet = std::vector<Point>;

// True iff p dominates q: p >= q in both coordinates, strictly in at least one.
// Identical points do not dominate each other.
constexpr bool dominates(const Point& p, const Point& q) noexcept {
  return p.x >= q.x && p.y >= q.y && (p.x > q.x || p.y > q.y);
}

// Maxima listed left to right plus a dominating witness for every other point.
struct Certificate {
  std::vector<std::size_t> maxima;
  std::vector<std::optional<std::size_t>> dominator;  // indexed by point

  friend bool operator==(const Certificate&, const Certificate&) = default;
};

struct BaselineStats {
  std::uint64_t comparisons = 0;
  std::uint64_t sort_cost = 0;
};

class DegenerateInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised by verify_certificate when the certificate refers to indices that do
// not exist in the input. An in-range but wrong certificate yields false.
class CertificateIndexError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// O(n^2) reference. Each non-maximal point gets its smallest-index dominator.
Certificate brute_force_maxima(std::span<const Point> input);
// Same, counting pairwise dominance tests in stats.comparisons.
Certificate brute_force_maxima(std::span<const Point> input, BaselineStats& stats);

// Sort by x and sweep right to left keeping the highest y seen so far.
Certificate sort_scan_maxima(std::span<const Point> input, BaselineStats& stats);

// Linear-time check of a certificate: witnesses dominate, the maxima form a
// staircase, and every index is accounted for exactly once.
bool verify_certificate(std::span<const Point> input, const Certificate& cert);

// Canonical left-to-right order of maximal points: x ascending, exact
// duplicates by index.
bool staircase_before(std::span<const Point> input, std::size_t a, std::size_t b);

}  // namespace simax
