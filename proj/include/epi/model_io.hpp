#pragma once

#include <filesystem>
#include <variant>

#include <json.hpp>

#include "epi/model.hpp"

namespace epi {

/// Reads the JSON model format. States left out of every block of a
/// relation become singleton blocks. Shape errors throw ModelError.
ModelDescription description_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ModelDescription& d);

nlohmann::json to_json(const Model& m);
nlohmann::json to_json(const PreModel& p);

/// A model file holds a pre-model iff it has "group_relations".
using Structure = std::variant<Model, PreModel>;

Structure structure_from_json(const nlohmann::json& j);
Structure load_structure(const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path);

}  // namespace epi
