#include "simax/geometry.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace simax {

namespace {

void require_nonempty(std::span<const Point> input) {
  if (input.empty()) {
    throw DegenerateInputError("maxima of an empty input set are undefined");
  }
}

}  // namespace

bool staircase_before(std::span<const Point> input, std::size_t a, std::size_t b) {
  const Point& p = input[a];
  const Point& q = input[b];
  if (p.x != q.x) return p.x < q.x;
  if (p.y != q.y) return p.y > q.y;
  return a < b;
}

Certificate brute_force_maxima(std::span<const Point> input) {
  BaselineStats unused;
  return brute_force_maxima(input, unused);
}

Certificate brute_force_maxima(std::span<const Point> input, BaselineStats& stats) {
  require_nonempty(input);
  const std::size_t n = input.size();
  Certificate cert;
  cert.dominator.assign(n, std::nullopt);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      ++stats.comparisons;
      if (dominates(input[j], input[i])) {
        cert.dominator[i] = j;
        break;
      }
    }
    if (!cert.dominator[i]) cert.maxima.push_back(i);
  }
  std::sort(cert.maxima.begin(), cert.maxima.end(), [&](std::size_t a, std::size_t b) {
    ++stats.sort_cost;
    return staircase_before(input, a, b);
  });
  return cert;
}

Certificate sort_scan_maxima(std::span<const Point> input, BaselineStats& stats) {
  require_nonempty(input);
  const std::size_t n = input.size();

  // Right-to-left visiting order: x descending, then y descending. Within an
  // x-column the topmost point is seen first, so it sets Y before the others.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::uint64_t sort_comparisons = 0;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    ++sort_comparisons;
    const Point& p = input[a];
    const Point& q = input[b];
    if (p.x != q.x) return p.x > q.x;
    if (p.y != q.y) return p.y > q.y;
    return a > b;
  });
  stats.sort_cost += sort_comparisons;

  Certificate cert;
  cert.dominator.assign(n, std::nullopt);
  std::optional<std::size_t> top;  // realizes Y
  std::uint64_t comparisons = 0;
  for (std::size_t i : order) {
    const Point& p = input[i];
    bool dominated = false;
    if (top) {
      const Point& t = input[*top];
      ++comparisons;
      if (p.y < t.y) {
        dominated = true;
      } else if (p.y == t.y) {
        ++comparisons;
        dominated = t.x > p.x;
      }
    }
    if (dominated) {
      cert.dominator[i] = *top;
    } else {
      cert.maxima.push_back(i);
      if (!top || p.y > input[*top].y) top = i;
    }
  }
  stats.comparisons += comparisons;
  std::reverse(cert.maxima.begin(), cert.maxima.end());
  return cert;
}

bool verify_certificate(std::span<const Point> input, const Certificate& cert) {
  const std::size_t n = input.size();
  if (cert.dominator.size() != n) {
    throw CertificateIndexError("certificate covers " + std::to_string(cert.dominator.size()) +
                                " points, input has " + std::to_string(n));
  }
  for (std::size_t m : cert.maxima) {
    if (m >= n) throw CertificateIndexError("maximum index " + std::to_string(m) + " out of range");
  }
  for (const auto& d : cert.dominator) {
    if (d && *d >= n) {
      throw CertificateIndexError("dominator index " + std::to_string(*d) + " out of range");
    }
  }

  std::vector<char> listed(n, 0);
  for (std::size_t m : cert.maxima) {
    if (listed[m] || cert.dominator[m]) return false;
    listed[m] = 1;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (listed[i]) continue;
    const auto& d = cert.dominator[i];
    if (!d || !dominates(input[*d], input[i])) return false;
  }
  for (std::size_t k = 1; k < cert.maxima.size(); ++k) {
    const Point& a = input[cert.maxima[k - 1]];
    const Point& b = input[cert.maxima[k]];
    if (a == b) continue;
    if (!(a.x < b.x && a.y > b.y)) return false;
  }
  return true;
}

}  // namespace simax
