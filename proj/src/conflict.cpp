#include "meshsched/conflict.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "meshsched/errors.hpp"

namespace meshsched {

Multigraph build_multigraph(const MeshNetwork& net, const PathSet& ps) {
  Multigraph d;
  std::set<int> used;
  for (const auto& p : ps.paths) {
    if (p.hops() < 1) throw Error(errc::bad_input, "path with no hops");
    for (size_t i = 0; i + 1 < p.nodes.size(); ++i) {
      int tail = p.nodes[i], head = p.nodes[i + 1];
      if (tail < 0 || head < 0 || tail >= net.n() || head >= net.n())
        throw std::out_of_range("path node out of range");
      d.transmissions.push_back({p.path_id, (int)i, tail, head});
      used.insert(tail);
      used.insert(head);
    }
  }
  d.mesh_nodes.assign(used.begin(), used.end());
  return d;
}

std::vector<InterferencePair> interference_pairs(const MeshNetwork& net,
                                                 const Multigraph& d) {
  std::set<std::pair<int, int>> hop_pairs;
  for (const auto& t : d.transmissions)
    hop_pairs.insert({std::min(t.tail, t.head), std::max(t.tail, t.head)});

  std::vector<InterferencePair> out;
  for (size_t i = 0; i < d.mesh_nodes.size(); ++i) {
    for (size_t j = i + 1; j < d.mesh_nodes.size(); ++j) {
      int a = d.mesh_nodes[i], b = d.mesh_nodes[j];
      if (!within_radius(net, a, b)) continue;
      if (hop_pairs.count({a, b})) continue;
      out.push_back({a, b});
    }
  }
  return out;
}

namespace {

// Row-major bit matrix used while assembling the sharing graph.
class BitMatrix {
 public:
  BitMatrix(int n) : n_(n), words_((n + 63) / 64), bits_((size_t)n * words_, 0) {}

  void set(int i, int j) { bits_[(size_t)i * words_ + j / 64] |= 1ull << (j % 64); }
  bool get(int i, int j) const {
    return bits_[(size_t)i * words_ + j / 64] >> (j % 64) & 1;
  }
  const uint64_t* row(int i) const { return &bits_[(size_t)i * words_]; }
  uint64_t* row(int i) { return &bits_[(size_t)i * words_]; }
  int words() const { return words_; }
  int size() const { return n_; }

 private:
  int n_;
  int words_;
  std::vector<uint64_t> bits_;
};

}  // namespace

ConflictGraph build_conflict_graph(const Multigraph& d,
                                   const std::vector<InterferencePair>& pairs) {
  ConflictGraph g;
  g.nodes = d.transmissions;
  const int m = (int)g.nodes.size();
  const int total = m + (int)pairs.size();

  // Sharing graph: any two entries (transmission or interference pair) that
  // touch a common mesh node conflict directly.
  BitMatrix share(total);
  {
    std::vector<std::pair<int, int>> touch;  // (mesh node, graph node)
    for (int i = 0; i < m; ++i) {
      touch.push_back({g.nodes[i].tail, i});
      touch.push_back({g.nodes[i].head, i});
    }
    for (size_t k = 0; k < pairs.size(); ++k) {
      touch.push_back({pairs[k].a, m + (int)k});
      touch.push_back({pairs[k].b, m + (int)k});
    }
    std::sort(touch.begin(), touch.end());
    size_t lo = 0;
    while (lo < touch.size()) {
      size_t hi = lo;
      while (hi < touch.size() && touch[hi].first == touch[lo].first) ++hi;
      for (size_t i = lo; i < hi; ++i) {
        for (size_t j = i + 1; j < hi; ++j) {
          int u = touch[i].second, v = touch[j].second;
          if (u != v) {
            share.set(u, v);
            share.set(v, u);
          }
        }
      }
      lo = hi;
    }
  }

  // One pass of distance-exactly-two closure over the sharing graph; the new
  // edges are collected separately so later rows see the original distances.
  BitMatrix close(total);
  const int W = share.words();
  std::vector<uint64_t> acc(W);
  for (int u = 0; u < total; ++u) {
    std::fill(acc.begin(), acc.end(), 0);
    const uint64_t* ru = share.row(u);
    for (int w = 0; w < W; ++w) {
      uint64_t bits = ru[w];
      while (bits) {
        int v = w * 64 + __builtin_ctzll(bits);
        bits &= bits - 1;
        const uint64_t* rv = share.row(v);
        for (int k = 0; k < W; ++k) acc[k] |= rv[k];
      }
    }
    uint64_t* out = close.row(u);
    for (int w = 0; w < W; ++w) out[w] = acc[w] & ~ru[w];
    // clear the diagonal
    close.row(u)[u / 64] &= ~(1ull << (u % 64));
  }

  // Keep only transmission-transmission conflicts.
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      if (share.get(i, j) || close.get(i, j)) edges.push_back({i, j});
  return assemble_conflict_graph(std::move(g.nodes), std::move(edges));
}

ConflictGraph assemble_conflict_graph(std::vector<Transmission> nodes,
                                      std::vector<std::pair<int, int>> edges) {
  ConflictGraph g;
  g.nodes = std::move(nodes);
  const int m = (int)g.nodes.size();

  for (auto& [a, b] : edges) {
    if (a > b) std::swap(a, b);
    if (a < 0 || b >= m || a == b) throw Error(errc::bad_input, "bad conflict edge");
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  g.edges = std::move(edges);
  g.adj.assign(m, {});
  for (auto [a, b] : g.edges) {
    g.adj[a].push_back(b);
    g.adj[b].push_back(a);
  }
  for (auto& list : g.adj) std::sort(list.begin(), list.end());

  // Path bookkeeping, keyed on (path, hop) so node order never matters.
  g.pred.assign(m, -1);
  g.succ.assign(m, -1);
  g.is_terminal.assign(m, 0);
  std::set<std::pair<int, int>> ids;
  std::vector<std::pair<std::pair<int, int>, int>> by_hop;
  for (int i = 0; i < m; ++i) {
    auto key = std::make_pair(g.nodes[i].path_id, g.nodes[i].hop_index);
    if (!ids.insert(key).second) throw Error(errc::bad_input, "duplicate transmission id");
    by_hop.push_back({key, i});
  }
  std::sort(by_hop.begin(), by_hop.end());
  for (size_t k = 0; k + 1 < by_hop.size(); ++k) {
    const auto& [ka, ia] = by_hop[k];
    const auto& [kb, ib] = by_hop[k + 1];
    if (ka.first == kb.first && ka.second + 1 == kb.second) {
      g.succ[ia] = ib;
      g.pred[ib] = ia;
    }
  }
  for (int i = 0; i < m; ++i) {
    if (g.succ[i] < 0) {
      g.is_terminal[i] = 1;
      g.terminals.push_back(i);
      ++g.path_count;
    }
  }
  return g;
}

ConflictGraph build_conflict_graph(const MeshNetwork& net, const Multigraph& d) {
  return build_conflict_graph(d, interference_pairs(net, d));
}

bool ConflictGraph::adjacent(int i, int j) const {
  const auto& a = adj[i];
  return std::binary_search(a.begin(), a.end(), j);
}

PathSet path_set_of(const ConflictGraph& g) {
  std::map<int, std::vector<std::pair<int, int>>> by_path;  // id -> (hop, node)
  for (int i = 0; i < g.node_count(); ++i)
    by_path[g.nodes[i].path_id].push_back({g.nodes[i].hop_index, i});
  PathSet ps;
  for (auto& [id, hops] : by_path) {
    std::sort(hops.begin(), hops.end());
    RoutePath p;
    p.path_id = id;
    for (size_t k = 0; k < hops.size(); ++k) {
      const Transmission& t = g.nodes[hops[k].second];
      if ((int)k != hops[k].first || (k > 0 && p.nodes.back() != t.tail))
        throw Error(errc::bad_input, "hops of path " + std::to_string(id) +
                                         " do not chain");
      if (k == 0) p.nodes.push_back(t.tail);
      p.nodes.push_back(t.head);
    }
    ps.paths.push_back(std::move(p));
  }
  return ps;
}

Rational rho(const ConflictGraph& g) {
  if (g.node_count() == 0) throw Error(errc::bad_input, "empty conflict graph");
  long long cross = 0;
  for (const auto& [a, b] : g.edges)
    if (g.nodes[a].path_id != g.nodes[b].path_id) ++cross;
  return Rational((long long)g.path_count * cross, g.node_count());
}

}  // namespace meshsched
