#include "simax/model_io.hpp"

#include <fstream>
#include <sstream>

#include "simax/scenario_io.hpp"

namespace simax {

using nlohmann::json;

json model_to_json(const TrainedModel& model) {
  json trees = json::array();
  for (const auto& tree : model.trees) {
    json nodes = json::array();
    for (const auto& nd : tree.nodes) nodes.push_back({nd.lo, nd.hi, nd.split, nd.left, nd.right});
    trees.push_back(std::move(nodes));
  }
  const auto& m = model.meta;
  return {
      {"format", "simax-model"},
      {"version", kModelFormatVersion},
      {"training",
       {{"seed", m.seed},
        {"rng", m.rng_algorithm},
        {"epsilon", m.config.epsilon},
        {"delta", m.config.delta},
        {"c_rounds", m.config.c_rounds},
        {"rounds_cap", m.config.rounds_cap},
        {"slab_rounds", m.slab_rounds},
        {"tree_rounds", m.tree_rounds},
        {"rounds_capped", m.rounds_capped},
        {"leaf_threshold", m.leaf_threshold}}},
      {"scenario", scenario_to_json(model.scenario)},
      {"boundaries", model.slabs.boundaries()},
      {"entropy", model.entropy},
      {"trees", std::move(trees)},
  };
}

TrainedModel model_from_json(const json& doc) {
  try {
    if (doc.at("format").get<std::string>() != "simax-model") throw ModelIoError("not a simax model artifact");
    const int version = doc.at("version").get<int>();
    if (version != kModelFormatVersion) {
      throw ModelIoError("unsupported model version " + std::to_string(version));
    }
    TrainedModel model;
    const json& t = doc.at("training");
    model.meta.seed = t.at("seed").get<std::uint64_t>();
    model.meta.rng_algorithm = t.at("rng").get<std::string>();
    model.meta.config.epsilon = t.at("epsilon").get<double>();
    model.meta.config.delta = t.at("delta").get<double>();
    model.meta.config.c_rounds = t.at("c_rounds").get<double>();
    model.meta.config.rounds_cap = t.at("rounds_cap").get<std::size_t>();
    model.meta.slab_rounds = t.at("slab_rounds").get<std::size_t>();
    model.meta.tree_rounds = t.at("tree_rounds").get<std::size_t>();
    model.meta.rounds_capped = t.at("rounds_capped").get<bool>();
    model.meta.leaf_threshold = t.at("leaf_threshold").get<std::size_t>();
    model.scenario = scenario_from_json(doc.at("scenario"));
    model.slabs = SlabStructure(doc.at("boundaries").get<std::vector<double>>());
    model.entropy = doc.at("entropy").get<std::vector<double>>();

    const json& trees = doc.at("trees");
    const std::size_t leaves = model.slabs.leaf_count();
    model.trees.reserve(trees.size());
    for (std::size_t i = 0; i < trees.size(); ++i) {
      SearchTree tree;
      tree.point = i;
      tree.leaf_count = leaves;
      for (const json& row : trees[i]) {
        SearchTree::Node nd{row.at(0).get<std::uint32_t>(), row.at(1).get<std::uint32_t>(),
                            row.at(2).get<std::int32_t>(), row.at(3).get<std::int32_t>(),
                            row.at(4).get<std::int32_t>()};
        const auto count = static_cast<std::int32_t>(trees[i].size());
        if (nd.lo >= nd.hi || nd.hi >= leaves || nd.left >= count || nd.right >= count ||
            (!nd.fallback() && (nd.split < static_cast<std::int32_t>(nd.lo) ||
                                nd.split > static_cast<std::int32_t>(nd.hi)))) {
          throw ModelIoError("malformed node in tree " + std::to_string(i));
        }
        tree.nodes.push_back(nd);
      }
      if ((leaves > 1) == tree.nodes.empty()) throw ModelIoError("tree " + std::to_string(i) + " has no root");
      model.trees.push_back(std::move(tree));
    }
    if (model.trees.size() != model.scenario.n() || model.entropy.size() != model.trees.size()) {
      throw ModelIoError("model sizes disagree with the scenario");
    }
    return model;
  } catch (const json::exception& e) {
    throw ModelIoError(std::string("malformed model artifact: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ModelIoError(std::string("malformed model artifact: ") + e.what());
  }
}

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ModelIoError("cannot write model to " + path.string());
  out << model_to_json(model).dump() << '\n';
  if (!out) throw ModelIoError("cannot write model to " + path.string());
}

TrainedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelIoError("cannot read model " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ModelIoError("model " + path.string() + " is not valid JSON: " + e.what());
  }
  return model_from_json(doc);
}

}  // namespace simax
