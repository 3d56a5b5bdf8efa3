#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "meshsched/topology.hpp"

namespace meshsched {

// A routed path: ordered node ids from origin to destination. Adjacent
// entries are always mesh neighbors; the node sequence is simple.
struct RoutePath {
  int path_id = 0;
  std::vector<int> nodes;

  int hops() const { return (int)nodes.size() - 1; }
  int origin() const { return nodes.front(); }
  int destination() const { return nodes.back(); }
};

struct PathSet {
  std::vector<RoutePath> paths;
  int path_count() const { return (int)paths.size(); }
};

// One nested sequence of path sets: set k consists of the first k paths.
struct PathGroup {
  std::vector<RoutePath> paths;

  PathSet prefix(int k) const {
    PathSet ps;
    ps.paths.assign(paths.begin(), paths.begin() + k);
    return ps;
  }
  PathSet full() const { return prefix((int)paths.size()); }
  int max_sets() const { return (int)paths.size(); }
};

// Minimum-hop path; among equals, the lexicographically smallest node
// sequence. Returns nullopt when src and dst are disconnected.
std::optional<RoutePath> shortest_path(const MeshNetwork& net, int src, int dst);
std::optional<RoutePath> shortest_path(const std::vector<std::vector<int>>& nbr,
                                       int src, int dst);

struct GroupOptions {
  int group_retry_cap = 100;
};

// Builds `groups` independent nested sequences, each with n/2 sets. Every new
// path's endpoints are drawn uniformly from nodes never yet used as an
// endpoint in the sequence (relay reuse is fine); pairs with no route are
// redrawn. A sequence that runs out of connected unused pairs is regenerated
// from scratch; past the retry cap this throws Error(pairing_exhausted).
// Requires even n. Group g draws from the substream derive_seed(seed, {g}).
std::vector<PathGroup> generate_path_groups(const MeshNetwork& net, int groups,
                                            uint64_t seed,
                                            const GroupOptions& opt = {});

}  // namespace meshsched
