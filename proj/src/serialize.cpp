#include "meshsched/serialize.hpp"

#include <fstream>

#include "meshsched/errors.hpp"

namespace meshsched {

using nlohmann::json;

namespace {

[[noreturn]] void malformed(const std::string& what) {
  throw Error(errc::bad_input, what);
}

const json& need(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) malformed(std::string("missing field: ") + key);
  return *it;
}

}  // namespace

json network_to_json(const MeshNetwork& net) {
  json sites = json::array();
  for (const auto& s : net.sites)
    sites.push_back({{"id", s.id}, {"x", s.x}, {"y", s.y}});
  return {{"kind", "network"},
          {"n", (int)net.sites.size()},
          {"delta", net.delta_max},
          {"radius", net.radius},
          {"seed", net.seed},
          {"sites", std::move(sites)}};
}

MeshNetwork network_from_json(const json& j) {
  try {
    if (need(j, "kind") != "network") malformed("not a network file");
    MeshNetwork net;
    net.delta_max = need(j, "delta").get<int>();
    net.radius = need(j, "radius").get<double>();
    net.seed = need(j, "seed").get<uint64_t>();
    int n = need(j, "n").get<int>();
    const json& sites = need(j, "sites");
    if (!sites.is_array() || (int)sites.size() != n || n < 1)
      malformed("site list does not match n");
    net.sites.resize(n);
    std::vector<char> seen(n, 0);
    for (const auto& js : sites) {
      int id = need(js, "id").get<int>();
      if (id < 0 || id >= n || seen[id]) malformed("bad site id");
      seen[id] = 1;
      net.sites[id] = {id, need(js, "x").get<double>(), need(js, "y").get<double>()};
    }
    if (net.delta_max < 1 || !(net.radius > 0)) malformed("bad network parameters");
    return net;
  } catch (const json::exception& e) {
    malformed(std::string("network json: ") + e.what());
  }
}

json group_to_json(const PathGroup& group) {
  json paths = json::array();
  for (const auto& p : group.paths)
    paths.push_back({{"path_id", p.path_id}, {"nodes", p.nodes}});
  return {{"kind", "path-group"}, {"paths", std::move(paths)}};
}

PathGroup group_from_json(const json& j) {
  try {
    if (need(j, "kind") != "path-group") malformed("not a path group file");
    PathGroup g;
    for (const auto& jp : need(j, "paths")) {
      RoutePath p;
      p.path_id = need(jp, "path_id").get<int>();
      p.nodes = need(jp, "nodes").get<std::vector<int>>();
      if (p.nodes.size() < 2) malformed("path shorter than one hop");
      g.paths.push_back(std::move(p));
    }
    return g;
  } catch (const json::exception& e) {
    malformed(std::string("path group json: ") + e.what());
  }
}

json graph_to_json(const ConflictGraph& g) {
  json nodes = json::array();
  for (const auto& t : g.nodes)
    nodes.push_back({{"path", t.path_id},
                     {"hop", t.hop_index},
                     {"tail", t.tail},
                     {"head", t.head}});
  json edges = json::array();
  for (auto [a, b] : g.edges) edges.push_back({a, b});
  return {{"kind", "conflict-graph"}, {"nodes", std::move(nodes)},
          {"edges", std::move(edges)}};
}

ConflictGraph graph_from_json(const json& j) {
  try {
    if (need(j, "kind") != "conflict-graph") malformed("not a conflict graph file");
    std::vector<Transmission> nodes;
    for (const auto& jn : need(j, "nodes")) {
      Transmission t;
      t.path_id = need(jn, "path").get<int>();
      t.hop_index = need(jn, "hop").get<int>();
      t.tail = need(jn, "tail").get<int>();
      t.head = need(jn, "head").get<int>();
      nodes.push_back(t);
    }
    std::vector<std::pair<int, int>> edges;
    for (const auto& je : need(j, "edges")) {
      if (!je.is_array() || je.size() != 2) malformed("bad edge entry");
      edges.push_back({je[0].get<int>(), je[1].get<int>()});
    }
    return assemble_conflict_graph(std::move(nodes), std::move(edges));
  } catch (const json::exception& e) {
    malformed(std::string("conflict graph json: ") + e.what());
  }
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(errc::bad_input, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(errc::bad_input, path + ": " + e.what());
  }
}

void save_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(errc::bad_input, "cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace meshsched
