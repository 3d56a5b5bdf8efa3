#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <string>

#include "meshsched/conflict.hpp"
#include "meshsched/errors.hpp"
#include "meshsched/rng.hpp"
#include "meshsched/routing.hpp"
#include "meshsched/serialize.hpp"
#include "meshsched/topology.hpp"

using namespace meshsched;
using nlohmann::json;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("meshsched-test-" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("network round trip is bit exact") {
  MeshNetwork net = generate_network(24, 4, 0xfeedULL);
  MeshNetwork back = network_from_json(network_to_json(net));
  CHECK(back.delta_max == net.delta_max);
  CHECK(back.radius == net.radius);
  CHECK(back.seed == net.seed);
  REQUIRE(back.sites.size() == net.sites.size());
  for (size_t i = 0; i < net.sites.size(); ++i) {
    CHECK(back.sites[i].id == net.sites[i].id);
    CHECK(back.sites[i].x == net.sites[i].x);  // doubles survive exactly
    CHECK(back.sites[i].y == net.sites[i].y);
  }
  // Adjacency is derived, so the decoded network answers the same queries.
  for (int v = 0; v < net.n(); ++v) CHECK(neighbors(back, v) == neighbors(net, v));
}

TEST_CASE("network decoding rejects malformed input") {
  json good = network_to_json(generate_network(10, 3, 7));

  json j = good;
  j.erase("radius");
  CHECK_THROWS_AS(network_from_json(j), Error);

  j = good;
  j["kind"] = "path-group";
  CHECK_THROWS_AS(network_from_json(j), Error);

  j = good;
  j["n"] = 9;  // site list length mismatch
  CHECK_THROWS_AS(network_from_json(j), Error);

  j = good;
  j["sites"][3]["id"] = 0;  // duplicate id
  CHECK_THROWS_AS(network_from_json(j), Error);

  j = good;
  j["sites"][0]["id"] = 99;  // out of range
  CHECK_THROWS_AS(network_from_json(j), Error);

  j = good;
  j["delta"] = 0;
  CHECK_THROWS_AS(network_from_json(j), Error);

  j = good;
  j["radius"] = "wide";  // wrong type surfaces as the same error
  CHECK_THROWS_AS(network_from_json(j), Error);
}

TEST_CASE("path group round trip") {
  MeshNetwork net = generate_network(20, 4, 11);
  PathGroup g = generate_path_groups(net, 1, 13)[0];
  PathGroup back = group_from_json(group_to_json(g));
  REQUIRE(back.paths.size() == g.paths.size());
  for (size_t i = 0; i < g.paths.size(); ++i) {
    CHECK(back.paths[i].path_id == g.paths[i].path_id);
    CHECK(back.paths[i].nodes == g.paths[i].nodes);
  }

  json j = group_to_json(g);
  j["paths"][0]["nodes"] = json::array({5});  // a path needs two endpoints
  CHECK_THROWS_AS(group_from_json(j), Error);
  j = group_to_json(g);
  j["paths"][0].erase("path_id");
  CHECK_THROWS_AS(group_from_json(j), Error);
}

TEST_CASE("conflict graph round trip preserves structure") {
  MeshNetwork net = generate_network(16, 4, 5);
  PathSet ps = generate_path_groups(net, 1, 6)[0].prefix(4);
  ConflictGraph g = build_conflict_graph(net, build_multigraph(net, ps));

  ConflictGraph back = graph_from_json(graph_to_json(g));
  CHECK(back.node_count() == g.node_count());
  CHECK(back.edges == g.edges);
  CHECK(back.pred == g.pred);
  CHECK(back.succ == g.succ);
  CHECK(back.terminals == g.terminals);
  for (int i = 0; i < g.node_count(); ++i) {
    CHECK(back.nodes[i].path_id == g.nodes[i].path_id);
    CHECK(back.nodes[i].hop_index == g.nodes[i].hop_index);
    CHECK(back.nodes[i].tail == g.nodes[i].tail);
    CHECK(back.nodes[i].head == g.nodes[i].head);
  }
}

TEST_CASE("conflict graph decoding rejects malformed input") {
  json good = graph_to_json(build_conflict_graph(
      Multigraph{{0, 1, 2}, {{0, 0, 0, 1}, {0, 1, 1, 2}}}, {}));

  json j = good;
  j["edges"].push_back(json::array({0, 9}));  // endpoint out of range
  CHECK_THROWS_AS(graph_from_json(j), Error);

  j = good;
  j["edges"][0] = json::array({0});  // not a pair
  CHECK_THROWS_AS(graph_from_json(j), Error);

  j = good;
  j["nodes"][1]["hop"] = 0;  // duplicate (path, hop)
  CHECK_THROWS_AS(graph_from_json(j), Error);

  j = good;
  j["kind"] = "network";
  CHECK_THROWS_AS(graph_from_json(j), Error);
}

TEST_CASE("file save and load round trip") {
  TempDir dir;
  std::string path = (dir.path / "net.json").string();
  json out = network_to_json(generate_network(12, 3, 21));
  save_json_file(path, out);
  json in = load_json_file(path);
  CHECK(in == out);

  CHECK_THROWS_AS(load_json_file((dir.path / "missing.json").string()), Error);

  std::string garbled = (dir.path / "garbled.json").string();
  {
    std::FILE* f = std::fopen(garbled.c_str(), "w");
    REQUIRE(f);
    std::fputs("{not json", f);
    std::fclose(f);
  }
  CHECK_THROWS_AS(load_json_file(garbled), Error);
}
