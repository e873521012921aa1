#include "simax/frequency.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace simax {

void TrainingConfig::validate() const {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw ConfigError("epsilon must lie in (0, 1]");
  if (!(delta > 0.0 && delta <= 1.0)) throw ConfigError("delta must lie in (0, 1]");
  if (!(c_rounds > 0.0) || !std::isfinite(c_rounds)) throw ConfigError("c_rounds must be positive");
  if (rounds_cap == 0) throw ConfigError("rounds cap must be at least 1");
}

namespace {

double uncapped_rounds(const TrainingConfig& cfg, std::size_t n) {
  const double nn = static_cast<double>(n);
  const double logn = static_cast<double>(std::max<std::size_t>(1, ceil_log2(n)));
  return std::ceil(cfg.c_rounds / (cfg.delta * cfg.delta) * std::pow(nn, cfg.epsilon) * logn);
}

}  // namespace

std::size_t TrainingConfig::tree_rounds(std::size_t n) const {
  const double r = uncapped_rounds(*this, n);
  if (r >= static_cast<double>(rounds_cap)) return rounds_cap;
  return std::max<std::size_t>(1, static_cast<std::size_t>(r));
}

bool TrainingConfig::tree_rounds_capped(std::size_t n) const {
  return uncapped_rounds(*this, n) > static_cast<double>(rounds_cap);
}

std::size_t TrainingConfig::leaf_threshold(std::size_t n) { return 5 * std::max<std::size_t>(1, ceil_log2(n)); }

FrequencyRow::FrequencyRow(std::vector<std::uint32_t> observed) : rounds_(observed.size()) {
  std::sort(observed.begin(), observed.end());
  for (std::size_t k = 0; k < observed.size();) {
    std::size_t e = k;
    while (e < observed.size() && observed[e] == observed[k]) ++e;
    slabs_.push_back(observed[k]);
    cumulative_.push_back((cumulative_.empty() ? 0 : cumulative_.back()) + (e - k));
    k = e;
  }
}

std::uint64_t FrequencyRow::prefix_before(std::size_t slab) const {
  auto it = std::lower_bound(slabs_.begin(), slabs_.end(), slab);
  if (it == slabs_.begin()) return 0;
  return cumulative_[static_cast<std::size_t>(it - slabs_.begin()) - 1];
}

std::uint64_t FrequencyRow::count(std::size_t slab) const {
  return range_count(slab, slab);
}

std::uint64_t FrequencyRow::range_count(std::size_t lo, std::size_t hi) const {
  if (lo > hi) return 0;
  return prefix_before(hi + 1) - prefix_before(lo);
}

std::size_t FrequencyRow::first_reaching(std::size_t lo, std::size_t hi, std::uint64_t target) const {
  if (target == 0) return lo;
  const std::uint64_t base = prefix_before(lo);
  auto first = std::lower_bound(slabs_.begin(), slabs_.end(), lo);
  auto last = std::upper_bound(slabs_.begin(), slabs_.end(), hi);
  const auto offset = static_cast<std::size_t>(first - slabs_.begin());
  auto hit = std::lower_bound(cumulative_.begin() + static_cast<std::ptrdiff_t>(offset),
                              cumulative_.begin() + (last - slabs_.begin()), base + target);
  if (hit == cumulative_.begin() + (last - slabs_.begin())) return hi;
  return std::max<std::size_t>(lo, slabs_[static_cast<std::size_t>(hit - cumulative_.begin())]);
}

FrequencyRow collect_frequency_row(const PointDistribution& dist, const SlabStructure& slabs,
                                   std::size_t rounds, SeededRng& rng) {
  std::vector<std::uint32_t> observed;
  observed.reserve(rounds);
  for (std::size_t r = 0; r < rounds; ++r) {
    observed.push_back(static_cast<std::uint32_t>(slabs.locate(sample_point(dist, rng).x)));
  }
  return FrequencyRow(std::move(observed));
}

std::uint64_t frequency_stream_seed(std::uint64_t base, std::size_t i) { return derive_seed(base, i); }

FrequencyTable collect_frequencies(const ScenarioSpec& spec, const SlabStructure& slabs,
                                   const TrainingConfig& cfg, SeededRng& rng) {
  cfg.validate();
  FrequencyTable table;
  table.rounds = cfg.tree_rounds(spec.n());
  table.leaf_count = slabs.leaf_count();
  table.rows.reserve(spec.n());
  const std::uint64_t base = rng.next_u64();
  for (std::size_t i = 0; i < spec.n(); ++i) {
    SeededRng stream(frequency_stream_seed(base, i));
    table.rows.push_back(collect_frequency_row(spec.per_point[i], slabs, table.rounds, stream));
  }
  return table;
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Adds `mass` spread uniformly over x in [a, b] (a point if a == b).
void add_uniform_x(std::vector<double>& probs, const SlabStructure& slabs, double a, double b, double mass) {
  if (a > b) std::swap(a, b);
  if (a == b) {
    probs[slabs.locate(a)] += mass;
    return;
  }
  const auto& bs = slabs.boundaries();
  const std::size_t first = slabs.locate(a);
  const std::size_t last = slabs.locate(b);
  for (std::size_t j = first; j <= last; ++j) {
    const double left = j == 0 ? -std::numeric_limits<double>::infinity() : bs[j - 1];
    const double right = j + 1 == slabs.leaf_count() ? std::numeric_limits<double>::infinity() : bs[j];
    const double overlap = std::min(b, right) - std::max(a, left);
    if (overlap > 0.0) probs[j] += mass * overlap / (b - a);
  }
}

}  // namespace

std::vector<double> slab_probabilities(const PointDistribution& dist, const SlabStructure& slabs) {
  std::vector<double> probs(slabs.leaf_count(), 0.0);
  std::visit(overloaded{
                 [&](const PointMass& d) { probs[slabs.locate(d.at.x)] += 1.0; },
                 [&](const FiniteMixture& d) {
                   for (const auto& a : d.atoms) probs[slabs.locate(a.at.x)] += a.weight;
                 },
                 [&](const UniformRect& d) { add_uniform_x(probs, slabs, d.x0, d.x1, 1.0); },
                 [&](const UniformSegment& d) { add_uniform_x(probs, slabs, d.a.x, d.b.x, 1.0); },
             },
             dist);
  return probs;
}

}  // namespace simax
