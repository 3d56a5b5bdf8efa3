#include "meshsched/topology.hpp"

#include <cmath>
#include <stdexcept>

#include "meshsched/errors.hpp"
#include "meshsched/rng.hpp"

namespace meshsched {

double radius_for(int n, int delta_max) {
  if (n <= 0 || delta_max <= 0) throw Error(errc::bad_input, "n and delta_max must be positive");
  return 200.0 * std::sqrt(20.0 * double(delta_max) / double(n));
}

namespace {

inline double dist2(const NodeSite& a, double x, double y) {
  double dx = a.x - x, dy = a.y - y;
  return dx * dx + dy * dy;
}

}  // namespace

MeshNetwork generate_network(int n, int delta_max, uint64_t seed, const GenOptions& opt) {
  if (n < 1) throw Error(errc::bad_input, "need at least one node");
  MeshNetwork net;
  net.delta_max = delta_max;
  net.radius = radius_for(n, delta_max);
  net.seed = seed;
  const double r2 = net.radius * net.radius;
  const double sep2 = min_separation * min_separation;

  Rng rng(seed);
  std::vector<int> degree;
  std::vector<int> touching;  // scratch: placed sites within radius of a candidate

  for (int restart = 0; restart <= opt.restart_cap; ++restart) {
    net.sites.clear();
    degree.clear();
    net.sites.push_back({0, field_side / 2, field_side / 2});
    degree.push_back(0);
    int failures = 0;

    while ((int)net.sites.size() < n) {
      double x = rng.uniform(0.0, field_side);
      double y = rng.uniform(0.0, field_side);
      touching.clear();
      bool ok = true;
      for (const auto& s : net.sites) {
        double d2 = dist2(s, x, y);
        if (d2 < sep2) { ok = false; break; }
        if (d2 <= r2) touching.push_back(s.id);
      }
      // The candidate needs a link into the network; nobody may exceed the
      // degree cap, the candidate itself included.
      if (ok && (touching.empty() || (int)touching.size() > delta_max)) ok = false;
      if (ok) {
        for (int id : touching) {
          if (degree[id] >= delta_max) { ok = false; break; }
        }
      }
      if (ok) {
        int id = (int)net.sites.size();
        net.sites.push_back({id, x, y});
        degree.push_back((int)touching.size());
        for (int t : touching) ++degree[t];
      } else {
        if (++failures >= opt.placement_budget) break;  // wipe and regrow
      }
    }
    if ((int)net.sites.size() == n) return net;
  }
  throw Error(errc::generation_budget_exhausted,
              "could not place " + std::to_string(n) + " nodes with delta_max " +
                  std::to_string(delta_max));
}

bool within_radius(const MeshNetwork& net, int a, int b) {
  const auto& sa = net.sites[a];
  const auto& sb = net.sites[b];
  double dx = sa.x - sb.x, dy = sa.y - sb.y;
  return dx * dx + dy * dy <= net.radius * net.radius;
}

std::vector<int> neighbors(const MeshNetwork& net, int id) {
  if (id < 0 || id >= net.n()) throw std::out_of_range("site id out of range");
  std::vector<int> out;
  for (const auto& s : net.sites) {
    if (s.id != id && within_radius(net, id, s.id)) out.push_back(s.id);
  }
  return out;
}

std::vector<std::vector<int>> neighbor_lists(const MeshNetwork& net) {
  std::vector<std::vector<int>> out(net.n());
  for (int i = 0; i < net.n(); ++i) {
    for (int j = i + 1; j < net.n(); ++j) {
      if (within_radius(net, i, j)) {
        out[i].push_back(j);
        out[j].push_back(i);
      }
    }
  }
  return out;
}

}  // namespace meshsched
