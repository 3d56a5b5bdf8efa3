#include "meshsched/routing.hpp"

#include <algorithm>
#include <queue>

#include "meshsched/errors.hpp"
#include "meshsched/rng.hpp"

namespace meshsched {

namespace {

// BFS hop distances from `start`; unreachable nodes get -1.
std::vector<int> hop_distances(const std::vector<std::vector<int>>& nbr, int start) {
  std::vector<int> dist(nbr.size(), -1);
  std::queue<int> q;
  dist[start] = 0;
  q.push(start);
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int v : nbr[u]) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        q.push(v);
      }
    }
  }
  return dist;
}

std::vector<int> component_ids(const std::vector<std::vector<int>>& nbr) {
  std::vector<int> comp(nbr.size(), -1);
  int c = 0;
  for (size_t s = 0; s < nbr.size(); ++s) {
    if (comp[s] >= 0) continue;
    comp[s] = c;
    std::queue<int> q;
    q.push((int)s);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int v : nbr[u]) {
        if (comp[v] < 0) {
          comp[v] = c;
          q.push(v);
        }
      }
    }
    ++c;
  }
  return comp;
}

}  // namespace

std::optional<RoutePath> shortest_path(const std::vector<std::vector<int>>& nbr,
                                       int src, int dst) {
  if (src < 0 || dst < 0 || src >= (int)nbr.size() || dst >= (int)nbr.size())
    throw std::out_of_range("path endpoint out of range");
  if (src == dst) throw Error(errc::bad_input, "path endpoints must differ");
  std::vector<int> to_dst = hop_distances(nbr, dst);
  if (to_dst[src] < 0) return std::nullopt;

  // Walk greedily toward dst, always taking the smallest-id neighbor that
  // stays on a minimum-hop route; this yields the lexicographically smallest
  // of all minimum-hop node sequences.
  RoutePath path;
  path.nodes.push_back(src);
  int cur = src;
  while (cur != dst) {
    int best = -1;
    for (int v : nbr[cur]) {
      if (to_dst[v] == to_dst[cur] - 1 && (best < 0 || v < best)) best = v;
    }
    path.nodes.push_back(best);
    cur = best;
  }
  return path;
}

std::optional<RoutePath> shortest_path(const MeshNetwork& net, int src, int dst) {
  return shortest_path(neighbor_lists(net), src, dst);
}

std::vector<PathGroup> generate_path_groups(const MeshNetwork& net, int groups,
                                            uint64_t seed, const GroupOptions& opt) {
  if (net.n() % 2 != 0) throw Error(errc::bad_input, "path groups need an even node count");
  const int target = net.n() / 2;
  const auto nbr = neighbor_lists(net);
  const auto comp = component_ids(nbr);

  std::vector<PathGroup> out;
  out.reserve(groups);
  for (int g = 0; g < groups; ++g) {
    Rng rng(derive_seed(seed, {(uint64_t)g}));
    bool done = false;
    for (int attempt = 0; attempt < opt.group_retry_cap && !done; ++attempt) {
      PathGroup group;
      std::vector<int> unused(net.n());
      for (int i = 0; i < net.n(); ++i) unused[i] = i;
      bool dead = false;

      for (int k = 0; k < target; ++k) {
        // A pair is routable iff both ends share a component; count the
        // remaining routable ordered pairs so exhaustion is detected exactly.
        std::vector<long long> per_comp;
        for (int u : unused) {
          if ((int)per_comp.size() <= comp[u]) per_comp.resize(comp[u] + 1, 0);
          ++per_comp[comp[u]];
        }
        long long legal = 0;
        for (long long c : per_comp) legal += c * (c - 1);
        if (legal == 0) { dead = true; break; }

        int src, dst;
        while (true) {
          size_t i = (size_t)rng.below(unused.size());
          size_t j = (size_t)rng.below(unused.size() - 1);
          if (j >= i) ++j;
          src = unused[i];
          dst = unused[j];
          if (comp[src] == comp[dst]) break;  // disconnected pair: redraw
        }
        auto path = shortest_path(nbr, src, dst);
        path->path_id = k;
        group.paths.push_back(std::move(*path));
        unused.erase(std::remove_if(unused.begin(), unused.end(),
                                    [&](int u) { return u == src || u == dst; }),
                     unused.end());
      }
      if (!dead) {
        out.push_back(std::move(group));
        done = true;
      }
    }
    if (!done)
      throw Error(errc::pairing_exhausted,
                  "group " + std::to_string(g) + " ran out of connected unused pairs");
  }
  return out;
}

}  // namespace meshsched
