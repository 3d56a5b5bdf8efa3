#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <numeric>
#include <set>
#include <vector>

#include "meshsched/conflict.hpp"
#include "meshsched/errors.hpp"
#include "meshsched/rng.hpp"
#include "meshsched/routing.hpp"
#include "meshsched/ser.hpp"
#include "meshsched/topology.hpp"

using namespace meshsched;

namespace {

Multigraph chain(int k) {
  Multigraph d;
  for (int i = 0; i <= k; ++i) d.mesh_nodes.push_back(i);
  for (int i = 0; i < k; ++i) d.transmissions.push_back({0, i, i, i + 1});
  return d;
}

ConflictGraph chain_graph(int k) { return build_conflict_graph(chain(k), {}); }

// Two paths with the given hop counts, no cross-path conflicts.
ConflictGraph two_paths(int hops_a, int hops_b) {
  Multigraph d;
  int next = 0;
  for (int p = 0; p < 2; ++p) {
    int hops = p == 0 ? hops_a : hops_b;
    for (int h = 0; h < hops; ++h) d.transmissions.push_back({p, h, next + h, next + h + 1});
    for (int v = next; v <= next + hops; ++v) d.mesh_nodes.push_back(v);
    next += hops + 1;
  }
  return build_conflict_graph(d, {});
}

ConflictGraph random_graph(uint64_t seed, int n_sites = 14, int delta = 3, int P = 3) {
  MeshNetwork net = generate_network(n_sites, delta, derive_seed(71, {seed}));
  auto groups = generate_path_groups(net, 1, derive_seed(72, {seed}));
  PathSet ps = groups[0].prefix(std::min(P, groups[0].max_sets()));
  return build_conflict_graph(net, build_multigraph(net, ps));
}

// Longest-outgoing-path levels by plain DP over a topological order.
std::vector<int> dp_levels(const ConflictGraph& g, const Orientation& w) {
  int n = g.node_count();
  std::vector<int> out_deg(n, 0), level(n, 1);
  std::vector<std::vector<int>> in_of(n);  // in_of[tail of reversed view]
  for (int e = 0; e < (int)g.edges.size(); ++e) {
    auto [a, b] = g.edges[e];
    int from = w.forward(e) ? a : b;
    int to = w.forward(e) ? b : a;
    ++out_deg[from];
    in_of[to].push_back(from);
  }
  std::vector<int> ready;
  for (int v = 0; v < n; ++v)
    if (out_deg[v] == 0) ready.push_back(v);
  int seen = 0;
  while (!ready.empty()) {
    int v = ready.back();
    ready.pop_back();
    ++seen;
    for (int u : in_of[v]) {
      level[u] = std::max(level[u], level[v] + 1);
      if (--out_deg[u] == 0) ready.push_back(u);
    }
  }
  REQUIRE(seen == n);
  return level;
}

bool independent(const ConflictGraph& g, const std::vector<int>& s) {
  for (size_t i = 0; i < s.size(); ++i)
    for (size_t j = i + 1; j < s.size(); ++j)
      if (g.adjacent(s[i], s[j])) return false;
  return true;
}

}  // namespace

TEST_CASE("numbering deals labels across paths or depth-first") {
  ConflictGraph g = two_paths(2, 2);  // transmissions: A0 A1 B0 B1 -> ids 0 1 2 3

  Numbering bf = number_transmissions(g, NumberingScheme::nd_bf);
  CHECK(bf.label == std::vector<int>{1, 3, 2, 4});

  Numbering df = number_transmissions(g, NumberingScheme::nd_df);
  CHECK(df.label == std::vector<int>{1, 2, 3, 4});
}

TEST_CASE("nd takes paths shortest first, ni longest first") {
  ConflictGraph g = two_paths(2, 1);  // A has 2 hops, B has 1

  // Non-decreasing size: B, then A. Dealing order makes no difference when
  // only one path is left holding cards.
  CHECK(number_transmissions(g, NumberingScheme::nd_bf).label ==
        std::vector<int>{2, 3, 1});
  CHECK(number_transmissions(g, NumberingScheme::nd_df).label ==
        std::vector<int>{2, 3, 1});
  // Non-increasing size: A, then B.
  CHECK(number_transmissions(g, NumberingScheme::ni_bf).label ==
        std::vector<int>{1, 3, 2});
  CHECK(number_transmissions(g, NumberingScheme::ni_df).label ==
        std::vector<int>{1, 2, 3});
}

TEST_CASE("labels are always a permutation of 1..N") {
  for (uint64_t seed = 0; seed < 8; ++seed) {
    ConflictGraph g = random_graph(seed);
    for (auto s : {NumberingScheme::nd_bf, NumberingScheme::nd_df,
                   NumberingScheme::ni_bf, NumberingScheme::ni_df}) {
      Numbering num = number_transmissions(g, s);
      std::vector<int> sorted = num.label;
      std::sort(sorted.begin(), sorted.end());
      std::vector<int> want(g.node_count());
      std::iota(want.begin(), want.end(), 1);
      CHECK(sorted == want);
    }
  }
}

TEST_CASE("initial orientation points each edge at the smaller label") {
  for (uint64_t seed = 0; seed < 8; ++seed) {
    ConflictGraph g = random_graph(seed);
    Numbering num = number_transmissions(g, NumberingScheme::nd_bf);
    Orientation w = initial_orientation(g, num);
    CHECK(is_acyclic(g, w));
    for (int e = 0; e < (int)g.edges.size(); ++e) {
      auto [a, b] = g.edges[e];
      int head = w.forward(e) ? b : a;
      int tail = w.forward(e) ? a : b;
      CHECK(num.label[tail] > num.label[head]);
    }
    // Sinks are exactly the local label minima.
    std::vector<int> got = sinks(g, w);
    std::vector<int> want;
    for (int v = 0; v < g.node_count(); ++v) {
      bool min = true;
      for (int u : g.adj[v]) min = min && num.label[v] < num.label[u];
      if (min) want.push_back(v);
    }
    CHECK(got == want);
  }
}

TEST_CASE("sink reversal alternates and never schedules conflicts") {
  for (uint64_t seed = 0; seed < 6; ++seed) {
    ConflictGraph g = random_graph(seed);
    Orientation w = initial_orientation(g, number_transmissions(g, NumberingScheme::nd_df));
    std::vector<int> prev;
    for (int t = 0; t < 60; ++t) {
      std::vector<int> s = sinks(g, w);
      REQUIRE(!s.empty());
      CHECK(independent(g, s));
      // A node never fires in consecutive slots unless isolated.
      for (int v : prev)
        if (!g.adj[v].empty())
          CHECK(std::find(s.begin(), s.end(), v) == s.end());
      w = reverse_sinks(g, w);
      CHECK(is_acyclic(g, w));
      prev = std::move(s);
    }
  }
}

TEST_CASE("incremental dynamics match literal reversal") {
  for (uint64_t seed = 0; seed < 6; ++seed) {
    ConflictGraph g = random_graph(seed, 14, 3, 4);
    Numbering num = number_transmissions(g, NumberingScheme::nd_bf);
    Orientation w = initial_orientation(g, num);
    SerDynamics dyn(g, w);
    for (int t = 0; t < 150; ++t) {
      std::vector<int> expect = sinks(g, w);
      CHECK(dyn.current_sinks() == expect);
      CHECK(dyn.step_index() == t);
      dyn.step();
      w = reverse_sinks(g, w);
      CHECK(dyn.orientation().bits == w.bits);
    }
  }
}

TEST_CASE("dynamics handle isolated transmissions") {
  ConflictGraph g = two_paths(1, 1);  // two single-hop paths, no edges at all
  Orientation w = initial_orientation(g, number_transmissions(g, NumberingScheme::nd_bf));
  SerDynamics dyn(g, w);
  for (int t = 0; t < 5; ++t) {
    CHECK(dyn.current_sinks() == std::vector<int>{0, 1});
    CHECK(dyn.terminal_sink_count() == 2);  // both hops are terminal
    dyn.step();
  }
}

TEST_CASE("canonical levels equal longest outgoing path") {
  for (uint64_t seed = 0; seed < 8; ++seed) {
    ConflictGraph g = random_graph(seed);
    Orientation w = initial_orientation(g, number_transmissions(g, NumberingScheme::nd_df));
    for (int t = 0; t < 10; ++t) {
      CHECK(canonical_levels(g, w) == dp_levels(g, w));
      w = reverse_sinks(g, w);
    }
  }
}

TEST_CASE("cyclic orientations are rejected") {
  ConflictGraph g = chain_graph(3);  // triangle on {0,1,2}, edges 01 02 12
  Orientation w = make_orientation(g);
  w.set_forward(0, true);   // 0 -> 1
  w.set_forward(2, true);   // 1 -> 2
  w.set_forward(1, false);  // 2 -> 0
  CHECK_FALSE(is_acyclic(g, w));
  CHECK_THROWS_AS(canonical_levels(g, w), Error);
  CHECK_THROWS_AS(SerDynamics(g, w), Error);
}

TEST_CASE("chain throughputs are exact") {
  struct Want {
    int k;
    Rational t;
  };
  for (auto [k, t] : {Want{1, Rational(1)}, Want{2, Rational(1, 2)},
                      Want{3, Rational(1, 3)}, Want{4, Rational(1, 3)}}) {
    for (auto s : {NumberingScheme::nd_bf, NumberingScheme::nd_df}) {
      SerResult r = run_ser(chain_graph(k), s);
      CHECK(r.throughput == t);
    }
  }
}

TEST_CASE("four-hop chain period structure") {
  SerResult r = run_ser(chain_graph(4), NumberingScheme::nd_df);
  CHECK(r.period.p == 3);
  CHECK(r.m == 1);
  REQUIRE(r.period.schedule.slots.size() == 3);

  // One firing per node per period, in some rotation of {0,3} {1} {2}.
  std::vector<std::vector<int>> want{{0, 3}, {1}, {2}};
  int at = -1;
  for (int i = 0; i < 3; ++i)
    if (r.period.schedule.slots[i] == want[0]) at = i;
  REQUIRE(at >= 0);
  CHECK(r.period.schedule.slots[(at + 1) % 3] == want[1]);
  CHECK(r.period.schedule.slots[(at + 2) % 3] == want[2]);
}

TEST_CASE("period report: per-component firing counts and exact throughput") {
  for (uint64_t seed = 0; seed < 6; ++seed) {
    ConflictGraph g = random_graph(seed, 16, 4, 4);

    // Connected components of the conflict graph, by flooding.
    std::vector<int> comp(g.node_count(), -1);
    int comps = 0;
    for (int v = 0; v < g.node_count(); ++v) {
      if (comp[v] >= 0) continue;
      std::vector<int> stack{v};
      comp[v] = comps;
      while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (int w : g.adj[u])
          if (comp[w] < 0) {
            comp[w] = comps;
            stack.push_back(w);
          }
      }
      ++comps;
    }

    for (auto s : {NumberingScheme::nd_bf, NumberingScheme::ni_df}) {
      SerResult r = run_ser(g, s);
      CHECK(r.period.p >= 1);
      CHECK((int)r.period.schedule.slots.size() == r.period.p);
      std::vector<long long> count(g.node_count(), 0);
      for (const auto& slot : r.period.schedule.slots) {
        CHECK(independent(g, slot));
        for (int v : slot) ++count[v];
      }
      CHECK(count == r.period.sink_counts);

      // Nodes sharing a component fire equally often inside the period.
      std::vector<long long> per_comp(comps, -1);
      bool uniform = true;
      for (int v = 0; v < g.node_count(); ++v) {
        if (per_comp[comp[v]] < 0) per_comp[comp[v]] = count[v];
        CHECK(per_comp[comp[v]] == count[v]);
        uniform = uniform && count[v] == count[0];
      }
      CHECK(r.m == (uniform ? count[0] : 0));

      long long delivered = 0;
      for (int t : g.terminals) delivered += count[t];
      CHECK(r.throughput == Rational(delivered, r.period.p));
    }
  }
}

TEST_CASE("ser runs are deterministic") {
  ConflictGraph g = random_graph(3, 16, 4, 5);
  SerResult a = run_ser(g, NumberingScheme::nd_bf);
  SerResult b = run_ser(g, NumberingScheme::nd_bf);
  CHECK(a.throughput == b.throughput);
  CHECK(a.period.p == b.period.p);
  CHECK(a.iterations == b.iterations);
  REQUIRE(a.period.schedule.slots.size() == b.period.schedule.slots.size());
  for (size_t i = 0; i < a.period.schedule.slots.size(); ++i)
    CHECK(a.period.schedule.slots[i] == b.period.schedule.slots[i]);
}

TEST_CASE("period search respects its iteration cap") {
  ConflictGraph g = chain_graph(4);
  CHECK_THROWS_AS(run_ser(g, NumberingScheme::nd_bf, 1), Error);
  try {
    run_ser(g, NumberingScheme::nd_bf, 1);
  } catch (const Error& e) {
    CHECK(e.code() == errc::period_not_found);
  }
}
