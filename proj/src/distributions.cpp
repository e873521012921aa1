#include "simax/distributions.hpp"

#include <cmath>
#include <string>

namespace simax {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw ConfigError(std::string(what) + " must be finite");
}

void require_finite(const Point& p, const char* what) {
  require_finite(p.x, what);
  require_finite(p.y, what);
}

}  // namespace

std::string_view to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::staircase_line: return "staircase_line";
    case ScenarioKind::two_level: return "two_level";
    case ScenarioKind::uniform_square: return "uniform_square";
    case ScenarioKind::custom: return "custom";
  }
  return "unknown";
}

std::optional<ScenarioKind> parse_scenario_kind(std::string_view name) {
  for (auto k : {ScenarioKind::staircase_line, ScenarioKind::two_level,
                 ScenarioKind::uniform_square, ScenarioKind::custom}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

void validate(const PointDistribution& dist) {
  std::visit(overloaded{
                 [](const PointMass& d) { require_finite(d.at, "point_mass location"); },
                 [](const FiniteMixture& d) {
                   if (d.atoms.empty()) throw ConfigError("finite_mixture needs at least one atom");
                   double total = 0.0;
                   for (const auto& a : d.atoms) {
                     require_finite(a.at, "finite_mixture atom");
                     if (!(a.weight > 0.0)) throw ConfigError("mixture weights must be positive");
                     total += a.weight;
                   }
                   if (std::abs(total - 1.0) > kWeightTolerance) {
                     throw ConfigError("weights must sum to 1 (got " + std::to_string(total) + ")");
                   }
                 },
                 [](const UniformRect& d) {
                   for (double v : {d.x0, d.x1, d.y0, d.y1}) require_finite(v, "uniform_rect extent");
                   if (d.x0 > d.x1 || d.y0 > d.y1) {
                     throw ConfigError("uniform_rect requires x0 <= x1 and y0 <= y1");
                   }
                 },
                 [](const UniformSegment& d) {
                   require_finite(d.a, "uniform_segment endpoint");
                   require_finite(d.b, "uniform_segment endpoint");
                 },
             },
             dist);
}

void validate(const ScenarioSpec& spec) {
  if (spec.per_point.empty()) throw ConfigError("scenario has no points");
  for (std::size_t i = 0; i < spec.per_point.size(); ++i) {
    try {
      validate(spec.per_point[i]);
    } catch (const ConfigError& e) {
      throw ConfigError("per_point[" + std::to_string(i) + "]: " + e.what());
    }
  }
}

Point sample_point(const PointDistribution& dist, SeededRng& rng) {
  return std::visit(overloaded{
                        [](const PointMass& d) { return d.at; },
                        [&](const FiniteMixture& d) {
                          const double u = rng.uniform();
                          double acc = 0.0;
                          for (const auto& a : d.atoms) {
                            acc += a.weight;
                            if (u < acc) return a.at;
                          }
                          return d.atoms.back().at;
                        },
                        [&](const UniformRect& d) {
                          const double x = d.x0 + rng.uniform() * (d.x1 - d.x0);
                          const double y = d.y0 + rng.uniform() * (d.y1 - d.y0);
                          return Point{x, y};
                        },
                        [&](const UniformSegment& d) {
                          const double t = rng.uniform();
                          return Point{d.a.x + t * (d.b.x - d.a.x), d.a.y + t * (d.b.y - d.a.y)};
                        },
                    },
                    dist);
}

InputSet sample_input(const ScenarioSpec& spec, SeededRng& rng) {
  InputSet input;
  input.reserve(spec.n());
  for (const auto& dist : spec.per_point) input.push_back(sample_point(dist, rng));
  return input;
}

ScenarioSpec build_scenario(ScenarioKind kind, std::size_t n, const ScenarioParams& params) {
  if (n < 2) throw ConfigError("scenario needs n >= 2");
  ScenarioSpec spec;
  spec.name = std::string(to_string(kind));
  spec.per_point.reserve(n);
  const std::size_t half = n / 2;
  const double m = static_cast<double>(half);

  switch (kind) {
    case ScenarioKind::staircase_line: {
      if (n % 2 != 0) throw ConfigError("staircase_line requires even n");
      if (!(params.segment_height > 0.0 && params.segment_height < 1.0)) {
        throw ConfigError("segment_height must lie in (0, 1)");
      }
      // Steps at (k+1, m-k); the lowest is (m, 1). The segment stays strictly
      // left of and below it.
      for (std::size_t k = 0; k < half; ++k) {
        const double kk = static_cast<double>(k);
        spec.per_point.emplace_back(PointMass{{kk + 1.0, m - kk}});
      }
      const UniformSegment below{{0.5, 0.0}, {m - 0.5, params.segment_height}};
      for (std::size_t k = half; k < n; ++k) spec.per_point.emplace_back(below);
      break;
    }
    case ScenarioKind::two_level: {
      if (n % 2 != 0) throw ConfigError("two_level requires even n");
      const double wh = params.high_weight;
      if (!(wh > 0.0 && wh < 1.0)) throw ConfigError("high_weight must lie in (0, 1)");
      // High steps (k+1, 2m-k) sit above and right of low steps (k+0.9, m-k). The
      // partner atoms hide just left of and below the high step, above every
      // low step, so only the high choice settles them cheaply.
      for (std::size_t k = 0; k < half; ++k) {
        const double kk = static_cast<double>(k);
        spec.per_point.emplace_back(FiniteMixture{{
            {{kk + 1.0, 2.0 * m - kk}, wh},
            {{kk + 0.9, m - kk}, 1.0 - wh},
        }});
      }
      for (std::size_t k = 0; k < half; ++k) {
        const double kk = static_cast<double>(k);
        spec.per_point.emplace_back(FiniteMixture{{
            {{kk + 0.75, 2.0 * m - kk - 0.5}, 0.5},
            {{kk + 0.5, 2.0 * m - kk - 0.75}, 0.5},
        }});
      }
      break;
    }
    case ScenarioKind::uniform_square:
      spec.per_point.assign(n, UniformRect{0.0, 1.0, 0.0, 1.0});
      break;
    case ScenarioKind::custom:
      if (!params.custom) throw ConfigError("custom scenario needs a distribution");
      validate(*params.custom);
      spec.per_point.assign(n, *params.custom);
      break;
  }
  return spec;
}

}  // namespace simax
