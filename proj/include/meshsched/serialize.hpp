#pragma once

#include <string>

#include "json.hpp"
#include "meshsched/conflict.hpp"
#include "meshsched/routing.hpp"
#include "meshsched/topology.hpp"

namespace meshsched {

// JSON codecs for the artifacts the tools pass around. Decoding validates
// shape and ranges and throws Error(bad_input) on anything malformed, so the
// CLI can fail with a sane message instead of an assertion.

nlohmann::json network_to_json(const MeshNetwork& net);
MeshNetwork network_from_json(const nlohmann::json& j);

nlohmann::json group_to_json(const PathGroup& group);
PathGroup group_from_json(const nlohmann::json& j);

nlohmann::json graph_to_json(const ConflictGraph& g);
ConflictGraph graph_from_json(const nlohmann::json& j);

nlohmann::json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const nlohmann::json& j);

}  // namespace meshsched
