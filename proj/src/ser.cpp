#include "meshsched/ser.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

#include "meshsched/errors.hpp"

namespace meshsched {

const char* scheme_name(NumberingScheme s) {
  switch (s) {
    case NumberingScheme::nd_bf: return "nd-bf";
    case NumberingScheme::nd_df: return "nd-df";
    case NumberingScheme::ni_bf: return "ni-bf";
    case NumberingScheme::ni_df: return "ni-df";
  }
  return "?";
}

NumberingScheme scheme_from_name(const std::string& name) {
  if (name == "nd-bf") return NumberingScheme::nd_bf;
  if (name == "nd-df") return NumberingScheme::nd_df;
  if (name == "ni-bf") return NumberingScheme::ni_bf;
  if (name == "ni-df") return NumberingScheme::ni_df;
  throw Error(errc::bad_input, "unknown numbering scheme: " + name);
}

Numbering number_transmissions(const ConflictGraph& g, NumberingScheme scheme) {
  // Group transmissions per path, in hop order.
  std::vector<std::pair<int, std::vector<int>>> paths;  // (path_id, hops)
  {
    std::vector<std::pair<std::pair<int, int>, int>> keyed;
    for (int i = 0; i < g.node_count(); ++i)
      keyed.push_back({{g.nodes[i].path_id, g.nodes[i].hop_index}, i});
    std::sort(keyed.begin(), keyed.end());
    for (const auto& [key, node] : keyed) {
      if (paths.empty() || paths.back().first != key.first) paths.push_back({key.first, {}});
      paths.back().second.push_back(node);
    }
  }

  const bool nondecreasing =
      scheme == NumberingScheme::nd_bf || scheme == NumberingScheme::nd_df;
  std::stable_sort(paths.begin(), paths.end(), [&](const auto& a, const auto& b) {
    size_t ha = a.second.size(), hb = b.second.size();
    if (ha != hb) return nondecreasing ? ha < hb : ha > hb;
    return a.first < b.first;
  });

  Numbering nb;
  nb.scheme = scheme;
  nb.label.assign(g.node_count(), 0);
  int next = 1;
  if (scheme == NumberingScheme::nd_df || scheme == NumberingScheme::ni_df) {
    for (const auto& [id, hops] : paths)
      for (int node : hops) nb.label[node] = next++;
  } else {
    size_t longest = 0;
    for (const auto& [id, hops] : paths) longest = std::max(longest, hops.size());
    for (size_t round = 0; round < longest; ++round)
      for (const auto& [id, hops] : paths)
        if (round < hops.size()) nb.label[hops[round]] = next++;
  }
  return nb;
}

Orientation initial_orientation(const ConflictGraph& g, const Numbering& nb) {
  Orientation w = make_orientation(g);
  for (int e = 0; e < g.edge_count(); ++e) {
    auto [a, b] = g.edges[e];
    w.set_forward(e, nb.label[a] > nb.label[b]);
  }
  return w;
}

Orientation initial_orientation(const ConflictGraph& g, NumberingScheme scheme) {
  return initial_orientation(g, number_transmissions(g, scheme));
}

namespace {

std::vector<int> out_degrees(const ConflictGraph& g, const Orientation& w) {
  std::vector<int> outdeg(g.node_count(), 0);
  for (int e = 0; e < g.edge_count(); ++e) {
    auto [a, b] = g.edges[e];
    ++outdeg[w.forward(e) ? a : b];
  }
  return outdeg;
}

}  // namespace

std::vector<int> sinks(const ConflictGraph& g, const Orientation& w) {
  auto outdeg = out_degrees(g, w);
  std::vector<int> out;
  for (int v = 0; v < g.node_count(); ++v)
    if (outdeg[v] == 0) out.push_back(v);
  return out;
}

Orientation reverse_sinks(const ConflictGraph& g, const Orientation& w) {
  auto outdeg = out_degrees(g, w);
  Orientation next = w;
  for (int e = 0; e < g.edge_count(); ++e) {
    auto [a, b] = g.edges[e];
    int head = w.forward(e) ? b : a;
    if (outdeg[head] == 0) next.flip(e);
  }
  return next;
}

std::vector<int> canonical_levels(const ConflictGraph& g, const Orientation& w) {
  auto outdeg = out_degrees(g, w);
  std::vector<int> level(g.node_count(), 0);
  std::vector<int> frontier;
  for (int v = 0; v < g.node_count(); ++v)
    if (outdeg[v] == 0) frontier.push_back(v);

  // Peel sinks layer by layer; a cycle would leave nodes unpeeled.
  int assigned = 0;
  int cur = 1;
  std::vector<int> nextf;
  while (!frontier.empty()) {
    nextf.clear();
    for (int v : frontier) {
      level[v] = cur;
      ++assigned;
    }
    for (int v : frontier) {
      for (int u : g.adj[v]) {
        if (level[u] == 0 && --outdeg[u] == 0) nextf.push_back(u);
      }
    }
    // Removing a peeled node only cancels edges directed at it.
    frontier.swap(nextf);
    ++cur;
  }
  if (assigned != g.node_count())
    throw Error(errc::bad_input, "orientation contains a directed cycle");
  return level;
}

bool is_acyclic(const ConflictGraph& g, const Orientation& w) {
  try {
    canonical_levels(g, w);
    return true;
  } catch (const Error&) {
    return false;
  }
}

SerDynamics::SerDynamics(const ConflictGraph& g, const Orientation& w0) : g_(g) {
  auto level = canonical_levels(g, w0);
  modulus_ = g.node_count() + 2;
  height_.assign(g.node_count(), 0);
  buckets_.assign(modulus_, {});
  for (int v = 0; v < g.node_count(); ++v) {
    height_[v] = level[v];
    buckets_[level[v] % modulus_].push_back(v);
  }
  refresh_sinks();
}

void SerDynamics::refresh_sinks() {
  sinks_ = buckets_[(t_ + 1) % modulus_];
  std::sort(sinks_.begin(), sinks_.end());
}

int SerDynamics::terminal_sink_count() const {
  int c = 0;
  for (int v : sinks_)
    if (g_.is_terminal[v]) ++c;
  return c;
}

void SerDynamics::step() {
  auto& cur = buckets_[(t_ + 1) % modulus_];
  // A reversed sink lands one level above its highest neighbor; neighbors of
  // a sink are never sinks themselves, so their heights are stable here.
  for (int v : cur) {
    long long best = t_ + 1;  // isolated nodes stay at level 1
    for (int u : g_.adj[v]) best = std::max(best, height_[u]);
    height_[v] = best + 1;
    buckets_[height_[v] % modulus_].push_back(v);
  }
  cur.clear();
  ++t_;
  refresh_sinks();
}

Orientation SerDynamics::orientation() const {
  Orientation w = make_orientation(g_);
  for (int e = 0; e < g_.edge_count(); ++e) {
    auto [a, b] = g_.edges[e];
    w.set_forward(e, height_[a] > height_[b]);
  }
  return w;
}

namespace {

struct WordsHash {
  size_t operator()(const std::vector<uint64_t>& v) const {
    uint64_t h = 1469598103934665603ull;
    for (uint64_t w : v) {
      h ^= w;
      h *= 1099511628211ull;
    }
    return (size_t)h;
  }
};

}  // namespace

SerResult run_ser(const ConflictGraph& g, NumberingScheme scheme, long long max_iters) {
  SerDynamics dyn(g, initial_orientation(g, scheme));
  std::unordered_map<std::vector<uint64_t>, long long, WordsHash> seen;
  std::vector<std::vector<int>> sink_history;

  long long first = -1, recur = -1;
  for (long long t = 0; t <= max_iters; ++t) {
    auto key = dyn.orientation().bits;
    auto [it, fresh] = seen.try_emplace(std::move(key), t);
    if (!fresh) {
      first = it->second;
      recur = t;
      break;
    }
    sink_history.push_back(dyn.current_sinks());
    dyn.step();
  }
  if (first < 0)
    throw Error(errc::period_not_found,
                "no orientation recurrence within " + std::to_string(max_iters) + " steps");

  SerResult r;
  r.iterations = recur;
  r.period.p = recur - first;
  r.period.first_index = first;
  r.period.sink_counts.assign(g.node_count(), 0);
  for (long long t = first; t < recur; ++t) {
    r.period.schedule.slots.push_back(sink_history[t]);
    for (int v : sink_history[t]) ++r.period.sink_counts[v];
  }
  // Within one period every node of a connected component is a sink equally
  // often; components with shorter sub-periods just repeat within p.
  std::vector<int> root(g.node_count());
  for (int v = 0; v < g.node_count(); ++v) root[v] = v;
  auto find = [&](int v) {
    while (root[v] != v) v = root[v] = root[root[v]];
    return v;
  };
  for (auto [a, b] : g.edges) root[find(a)] = find(b);
  for (int v = 0; v < g.node_count(); ++v)
    if (r.period.sink_counts[v] != r.period.sink_counts[find(v)])
      throw std::logic_error("unequal sink counts within a component's period");

  // A single shared count only exists when the graph is connected (or the
  // components happen to agree); the throughput sum needs no such luck.
  r.m = g.node_count() ? r.period.sink_counts[0] : 0;
  for (long long c : r.period.sink_counts)
    if (c != r.m) r.m = 0;
  long long delivered = 0;
  for (int t : g.terminals) delivered += r.period.sink_counts[t];
  r.throughput = Rational(delivered, r.period.p);
  return r;
}

}  // namespace meshsched
