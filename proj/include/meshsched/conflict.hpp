#pragma once

#include <utility>
#include <vector>

#include "meshsched/rational.hpp"
#include "meshsched/routing.hpp"
#include "meshsched/topology.hpp"

namespace meshsched {

// One directed path hop. Hops are the scheduling unit: every (path, hop)
// pair is a distinct transmission even when several paths reuse the same
// mesh link in either direction.
struct Transmission {
  int path_id = 0;
  int hop_index = 0;
  int tail = 0;  // transmitting mesh node
  int head = 0;  // receiving mesh node
};

// Directed multigraph of all hops of a path set, plus the set of mesh nodes
// they touch. Transmissions are grouped per path in hop order.
struct Multigraph {
  std::vector<int> mesh_nodes;  // sorted, unique
  std::vector<Transmission> transmissions;
};

Multigraph build_multigraph(const MeshNetwork& net, const PathSet& ps);

// An off-path pair of mesh nodes close enough to interfere: both appear on
// some path, they are within radio range of each other, and no hop of any
// path uses that node pair in either direction.
struct InterferencePair {
  int a = 0, b = 0;  // a < b
};

std::vector<InterferencePair> interference_pairs(const MeshNetwork& net,
                                                 const Multigraph& d);

// Undirected conflict graph over transmissions. Two transmissions conflict
// when they share a mesh node, or when they sit at distance exactly two in
// the sharing graph formed over transmissions plus interference pairs (the
// distance-two pass runs once, on that graph, not to a fixed point; the
// interference pairs are then discarded).
struct ConflictGraph {
  std::vector<Transmission> nodes;
  std::vector<int> pred;       // previous hop on the same path, -1 for first hops
  std::vector<int> succ;       // next hop on the same path, -1 for last hops
  std::vector<char> is_terminal;
  std::vector<int> terminals;  // ascending node indices, one per path
  int path_count = 0;

  std::vector<std::pair<int, int>> edges;  // a < b, lexicographically sorted
  std::vector<std::vector<int>> adj;       // sorted neighbor lists

  int node_count() const { return (int)nodes.size(); }
  int edge_count() const { return (int)edges.size(); }
  bool adjacent(int i, int j) const;
};

ConflictGraph build_conflict_graph(const Multigraph& d,
                                   const std::vector<InterferencePair>& pairs);

// Finishes a graph from raw parts: normalizes the edge list and derives the
// adjacency and path bookkeeping. Both the builder above and deserialization
// funnel through here.
ConflictGraph assemble_conflict_graph(std::vector<Transmission> nodes,
                                      std::vector<std::pair<int, int>> edges);

// Convenience: interference pairs derived from the network geometry.
ConflictGraph build_conflict_graph(const MeshNetwork& net, const Multigraph& d);

// Interference density: path_count * (edges whose endpoints belong to
// distinct paths) / total transmissions.
Rational rho(const ConflictGraph& g);

// Rebuilds the routed node sequences from the per-hop records, so a graph
// loaded without its originating network still knows its paths.
PathSet path_set_of(const ConflictGraph& g);

}  // namespace meshsched
