#include "simax/scenario_io.hpp"

#include <cmath>

namespace simax {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const json& field(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw ConfigError(path + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(path + ": missing field \"" + key + "\"");
  return *it;
}

double number(const json& obj, const char* key, const std::string& path) {
  const json& v = field(obj, key, path);
  if (!v.is_number()) throw ConfigError(path + "." + key + ": expected a number");
  return v.get<double>();
}

json point_mass_json(const PointMass& d) {
  return {{"kind", "point_mass"}, {"x", d.at.x}, {"y", d.at.y}};
}

PointDistribution distribution_from_json(const json& entry, const std::string& path) {
  const json& kind = field(entry, "kind", path);
  if (!kind.is_string()) throw ConfigError(path + ".kind: expected a string");
  const auto name = kind.get<std::string>();
  PointDistribution dist;
  if (name == "point_mass") {
    dist = PointMass{{number(entry, "x", path), number(entry, "y", path)}};
  } else if (name == "finite_mixture") {
    const json& atoms = field(entry, "atoms", path);
    if (!atoms.is_array()) throw ConfigError(path + ".atoms: expected an array");
    FiniteMixture mix;
    for (std::size_t a = 0; a < atoms.size(); ++a) {
      const std::string apath = path + ".atoms[" + std::to_string(a) + "]";
      mix.atoms.push_back({{number(atoms[a], "x", apath), number(atoms[a], "y", apath)},
                           number(atoms[a], "weight", apath)});
    }
    dist = std::move(mix);
  } else if (name == "uniform_rect") {
    dist = UniformRect{number(entry, "x0", path), number(entry, "x1", path),
                       number(entry, "y0", path), number(entry, "y1", path)};
  } else if (name == "uniform_segment") {
    dist = UniformSegment{{number(entry, "ax", path), number(entry, "ay", path)},
                          {number(entry, "bx", path), number(entry, "by", path)}};
  } else {
    throw ConfigError(path + ".kind: unknown variant \"" + name + "\"");
  }
  try {
    validate(dist);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return dist;
}

}  // namespace

json scenario_to_json(const ScenarioSpec& spec) {
  json per_point = json::array();
  for (const auto& dist : spec.per_point) {
    per_point.push_back(std::visit(
        overloaded{
            [](const PointMass& d) { return point_mass_json(d); },
            [](const FiniteMixture& d) {
              json atoms = json::array();
              for (const auto& a : d.atoms) {
                atoms.push_back({{"x", a.at.x}, {"y", a.at.y}, {"weight", a.weight}});
              }
              return json{{"kind", "finite_mixture"}, {"atoms", std::move(atoms)}};
            },
            [](const UniformRect& d) {
              return json{{"kind", "uniform_rect"}, {"x0", d.x0}, {"x1", d.x1}, {"y0", d.y0}, {"y1", d.y1}};
            },
            [](const UniformSegment& d) {
              return json{{"kind", "uniform_segment"}, {"ax", d.a.x}, {"ay", d.a.y},
                          {"bx", d.b.x}, {"by", d.b.y}};
            },
        },
        dist));
  }
  return {{"name", spec.name}, {"n", spec.n()}, {"per_point", std::move(per_point)}};
}

ScenarioSpec scenario_from_json(const json& doc) {
  const std::string root = "scenario";
  ScenarioSpec spec;
  const json& name = field(doc, "name", root);
  if (!name.is_string()) throw ConfigError("scenario.name: expected a string");
  spec.name = name.get<std::string>();
  const json& n = field(doc, "n", root);
  if (!n.is_number_unsigned() && !(n.is_number_integer() && n.get<long long>() >= 0)) {
    throw ConfigError("scenario.n: expected a non-negative integer");
  }
  const json& per_point = field(doc, "per_point", root);
  if (!per_point.is_array()) throw ConfigError("scenario.per_point: expected an array");
  if (per_point.size() != n.get<std::size_t>()) {
    throw ConfigError("scenario.per_point: has " + std::to_string(per_point.size()) +
                      " entries but n = " + std::to_string(n.get<std::size_t>()));
  }
  spec.per_point.reserve(per_point.size());
  for (std::size_t i = 0; i < per_point.size(); ++i) {
    spec.per_point.push_back(
        distribution_from_json(per_point[i], "scenario.per_point[" + std::to_string(i) + "]"));
  }
  if (spec.per_point.empty()) throw ConfigError("scenario.per_point: no points");
  return spec;
}

ScenarioSpec parse_scenario_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("scenario config is not valid JSON: ") + e.what());
  }
  return scenario_from_json(doc);
}

std::string serialize_scenario(const ScenarioSpec& spec) { return scenario_to_json(spec).dump(2) + "\n"; }

}  // namespace simax
