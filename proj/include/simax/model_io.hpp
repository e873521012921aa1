#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "simax/training.hpp"

namespace simax {

class ModelIoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kModelFormatVersion = 1;

// JSON artifact: {"format": "simax-model", "version": 1, "training": {...},
// "scenario": {...}, "boundaries": [...], "entropy": [...],
// "trees": [[[lo, hi, split, left, right], ...], ...]}. Doubles are written
// in shortest round-trip form, so save/load is lossless.
nlohmann::json model_to_json(const TrainedModel& model);
TrainedModel model_from_json(const nlohmann::json& doc);

void save_model(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);

}  // namespace simax
