#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "simax/geometry.hpp"
#include "simax/rng.hpp"

namespace simax {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct PointMass {
  Point at;
  friend bool operator==(const PointMass&, const PointMass&) = default;
};

struct WeightedAtom {
  Point at;
  double weight = 0.0;
  friend bool operator==(const WeightedAtom&, const WeightedAtom&) = default;
};

struct FiniteMixture {
  std::vector<WeightedAtom> atoms;
  friend bool operator==(const FiniteMixture&, const FiniteMixture&) = default;
};

struct UniformRect {
  double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
  friend bool operator==(const UniformRect&, const UniformRect&) = default;
};

struct UniformSegment {
  Point a, b;
  friend bool operator==(const UniformSegment&, const UniformSegment&) = default;
};

using PointDistribution = std::variant<PointMass, FiniteMixture, UniformRect, UniformSegment>;

inline constexpr double kWeightTolerance = 1e-9;

struct ScenarioSpec {
  std::string name;
  std::vector<PointDistribution> per_point;

  std::size_t n() const noexcept { return per_point.size(); }
  friend bool operator==(const ScenarioSpec&, const ScenarioSpec&) = default;
};

enum class ScenarioKind { staircase_line, two_level, uniform_square, custom };

std::string_view to_string(ScenarioKind kind);
std::optional<ScenarioKind> parse_scenario_kind(std::string_view name);

struct ScenarioParams {
  // two_level: probability that a paired distribution emits its high point.
  double high_weight = 0.5;
  // staircase_line: top y of the segment lying under the staircase, in (0, 1).
  double segment_height = 0.5;
  // custom: the distribution every point is drawn from.
  std::optional<PointDistribution> custom;
};

// Throws ConfigError naming the offending entry.
void validate(const PointDistribution& dist);
void validate(const ScenarioSpec& spec);

Point sample_point(const PointDistribution& dist, SeededRng& rng);

// Point i from per_point[i], in index order, all from one generator.
InputSet sample_input(const ScenarioSpec& spec, SeededRng& rng);

// Built-in scenarios:
//  staircase_line  first n/2 points are fixed on a descending staircase, the
//                  rest are uniform on a segment below its lowest step.
//  two_level       pair k: D_k emits a high or a low staircase point; D_{n/2+k}
//                  emits one of two points dominated by the high point only.
//  uniform_square  every point uniform on the unit square.
ScenarioSpec build_scenario(ScenarioKind kind, std::size_t n, const ScenarioParams& params = {});

}  // namespace simax
