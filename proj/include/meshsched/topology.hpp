#pragma once

#include <cstdint>
#include <vector>

namespace meshsched {

struct NodeSite {
  int id = 0;
  double x = 0.0;
  double y = 0.0;
};

// Random geometric mesh over a 1500 x 1500 field. Two sites are neighbors
// when their Euclidean distance is at most `radius`; ties at exactly the
// radius count. All distance tests compare squared distances, which is exact
// in double arithmetic for the comparisons we need.
struct MeshNetwork {
  std::vector<NodeSite> sites;
  int delta_max = 0;
  double radius = 0.0;
  uint64_t seed = 0;

  int n() const { return (int)sites.size(); }
};

struct GenOptions {
  // Rejected placement attempts allowed per network before it is wiped and
  // regrown from scratch (the counter does not reset on success).
  int placement_budget = 1000;
  // Whole-network restarts allowed before giving up.
  int restart_cap = 100;
};

constexpr double field_side = 1500.0;
constexpr double min_separation = 25.0;

// radius = 200 * sqrt(20 * delta_max / n); exactly 200 at n=80, delta_max=4.
double radius_for(int n, int delta_max);

// Grows the network one site at a time: site 0 is pinned at the center, each
// later site must land within radius of at least one placed site, must not
// push any site (itself included) past delta_max neighbors, and must keep at
// least min_separation from every placed site.
// Throws Error(generation_budget_exhausted) when the restart cap is hit.
MeshNetwork generate_network(int n, int delta_max, uint64_t seed,
                             const GenOptions& opt = {});

// Sorted ids of all sites within radius of `id` (excluding `id` itself).
// Throws std::out_of_range for an invalid id.
std::vector<int> neighbors(const MeshNetwork& net, int id);

// Neighbor lists for every site at once.
std::vector<std::vector<int>> neighbor_lists(const MeshNetwork& net);

bool within_radius(const MeshNetwork& net, int a, int b);

}  // namespace meshsched
