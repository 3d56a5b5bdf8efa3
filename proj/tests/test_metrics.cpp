#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "meshsched/conflict.hpp"
#include "meshsched/errors.hpp"
#include "meshsched/metrics.hpp"
#include "meshsched/rng.hpp"
#include "meshsched/routing.hpp"
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

// Feeds a fixed per-slot delivery sequence, repeating the last block forever.
auto cycle_feed(std::vector<long long> prefix, std::vector<long long> loop) {
  return [prefix = std::move(prefix), loop = std::move(loop),
          i = (size_t)0]() mutable -> long long {
    long long v;
    if (i < prefix.size())
      v = prefix[i];
    else
      v = loop[(i - prefix.size()) % loop.size()];
    ++i;
    return v;
  };
}

// All maximal cliques / independent sets the slow way, for cross-checking.
int brute_clique(const ConflictGraph& g) {
  int n = g.node_count(), best = 0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    bool ok = true;
    for (int i = 0; i < n && ok; ++i)
      for (int j = i + 1; j < n && ok; ++j)
        if ((mask >> i & 1) && (mask >> j & 1) && !g.adjacent(i, j)) ok = false;
    if (ok) best = std::max(best, __builtin_popcount(mask));
  }
  return best;
}

int brute_independent(const ConflictGraph& g) {
  int n = g.node_count(), best = 0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    bool ok = true;
    for (int i = 0; i < n && ok; ++i)
      for (int j = i + 1; j < n && ok; ++j)
        if ((mask >> i & 1) && (mask >> j & 1) && g.adjacent(i, j)) ok = false;
    if (ok) best = std::max(best, __builtin_popcount(mask));
  }
  return best;
}

}  // namespace

TEST_CASE("estimator settles on the alternating chain immediately") {
  // Two-hop chain: deliveries 0 1 0 1 ...; cum/t+1 hits exactly 1/2 at t=3.
  auto feed = cycle_feed({}, {0, 1});
  EstimatorResult r = streaming_estimator(feed, 2, Rational(1, 1000), 1'000'000);
  CHECK(r.t_plus == 3);
  CHECK(r.estimate == Rational(1, 2));
}

TEST_CASE("estimator with window one stops at the first slot") {
  auto feed = cycle_feed({}, {1});
  EstimatorResult r = streaming_estimator(feed, 1, Rational(1, 1000), 100);
  CHECK(r.t_plus == 1);
  CHECK(r.estimate == Rational(1));
}

TEST_CASE("the stopping comparison is exact at the tolerance boundary") {
  // Window 1, tol 1/1000. After slot 1: new = 1998/2, old = 1000/1.
  // |new - old| / old = 2/2000 = tol exactly, so it stops ...
  auto at = cycle_feed({1000, 998}, {0});
  EstimatorResult r = streaming_estimator(at, 1, Rational(1, 1000), 10);
  CHECK(r.t_plus == 1);
  CHECK(r.estimate == Rational(1998, 2));
  // ... while one packet fewer overshoots the band and keeps going.
  auto past = cycle_feed({1000, 997}, {0, 0, 0, 0});
  CHECK_THROWS_AS(streaming_estimator(past, 1, Rational(1, 1000), 4), Error);
}

TEST_CASE("estimator error taxonomy") {
  auto flat = cycle_feed({}, {5});
  try {
    streaming_estimator(flat, 3, Rational(1, 1'000'000'000), 2);
    FAIL("expected not_converged");
  } catch (const Error& e) {
    CHECK(e.code() == errc::not_converged);
  }

  auto zero = cycle_feed({}, {0});
  try {
    streaming_estimator(zero, 4, Rational(1, 1000), 1'000'000, 50);
    FAIL("expected zero_throughput_window");
  } catch (const Error& e) {
    CHECK(e.code() == errc::zero_throughput_window);
  }
  // Default grace period scales with the window.
  CHECK_THROWS_AS(streaming_estimator(zero, 4, Rational(1, 1000), 1'000'000), Error);

  CHECK_THROWS_AS(streaming_estimator(flat, 0, Rational(1, 1000), 10), Error);
  CHECK_THROWS_AS(streaming_estimator(flat, 2, Rational(0), 10), Error);
  CHECK_THROWS_AS(streaming_estimator(flat, 2, Rational(-1, 2), 10), Error);
}

TEST_CASE("estimator ignores an all-zero transient shorter than the grace") {
  auto slow = cycle_feed({0, 0, 0, 0, 0, 0}, {1});
  EstimatorResult r = streaming_estimator(slow, 2, Rational(1, 100), 1'000'000);
  CHECK(r.t_plus >= 2);
  // Long-run rate is 1; the stop can only happen once the window ratio
  // tightens, and the estimate must sit between the extremes seen so far.
  CHECK(r.estimate > Rational(0));
  CHECK(r.estimate <= Rational(1));
}

TEST_CASE("clique bound on hand graphs") {
  // Triangle: one packet in flight, tight bound 1/3.
  PhiBound b3 = *phi_bound(chain_graph(3), 1);
  CHECK(b3.omega == 3);
  CHECK(b3.alpha == 1);
  CHECK(b3.phi == Rational(3));
  CHECK(b3.bound == Rational(1, 3));

  // Four-hop chain graph: max clique 3, max independent set 2, N=4.
  PhiBound b4 = *phi_bound(chain_graph(4), 1);
  CHECK(b4.omega == 3);
  CHECK(b4.alpha == 2);
  CHECK(b4.phi == Rational(3));  // N/alpha = 2 loses to the clique
  CHECK(b4.bound == Rational(1, 3));

  // Edgeless graph: phi collapses to 1 packet per slot per path.
  Multigraph d;
  for (int p = 0; p < 5; ++p) {
    d.transmissions.push_back({p, 0, 2 * p, 2 * p + 1});
    d.mesh_nodes.push_back(2 * p);
    d.mesh_nodes.push_back(2 * p + 1);
  }
  PhiBound b5 = *phi_bound(build_conflict_graph(d, {}), 5);
  CHECK(b5.omega == 1);
  CHECK(b5.alpha == 5);
  CHECK(b5.phi == Rational(1));
  CHECK(b5.bound == Rational(5));
}

TEST_CASE("clique and independence numbers match subset enumeration") {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    MeshNetwork net = generate_network(12, 3, derive_seed(91, {seed}));
    auto groups = generate_path_groups(net, 1, derive_seed(92, {seed}));
    PathSet ps = groups[0].prefix(std::min(3, groups[0].max_sets()));
    ConflictGraph g = build_conflict_graph(net, build_multigraph(net, ps));
    if (g.node_count() > 14) continue;
    auto b = phi_bound(g, g.path_count);
    REQUIRE(b.has_value());
    CHECK(b->omega == brute_clique(g));
    CHECK(b->alpha == brute_independent(g));
    Rational crowd(g.node_count(), b->alpha);
    CHECK(b->phi == std::max(Rational(b->omega), crowd));
    CHECK(b->bound == Rational(g.path_count) / b->phi);
  }
}

TEST_CASE("phi bound declines instances it cannot solve exactly") {
  Multigraph d;
  for (int p = 0; p < 41; ++p) {
    d.transmissions.push_back({p, 0, 2 * p, 2 * p + 1});
    d.mesh_nodes.push_back(2 * p);
    d.mesh_nodes.push_back(2 * p + 1);
  }
  ConflictGraph big = build_conflict_graph(d, {});
  CHECK(big.node_count() == 41);
  CHECK_FALSE(phi_bound(big, 41).has_value());          // default exact limit is 40
  CHECK(phi_bound(big, 41, 41).has_value());            // but it is only a default
  ConflictGraph empty;
  CHECK_FALSE(phi_bound(empty, 0).has_value());
}

TEST_CASE("summary statistics with a normal-quantile half width") {
  Summary flat = summarize({1.0, 1.0, 1.0, 1.0}, 0.95);
  CHECK(flat.mean == doctest::Approx(1.0));
  CHECK(flat.half_width == doctest::Approx(0.0));

  std::vector<double> bits;
  for (int i = 0; i < 50; ++i) {
    bits.push_back(0.0);
    bits.push_back(1.0);
  }
  Summary s = summarize(bits, 0.95);
  CHECK(s.mean == doctest::Approx(0.5));
  // sd = sqrt(25/99), hw = 1.95996 * sd / 10
  CHECK(s.half_width == doctest::Approx(0.0984869).epsilon(1e-4));

  CHECK_THROWS_AS(summarize({1.0}, 0.95), Error);
  try {
    summarize({}, 0.95);
    FAIL("expected insufficient_samples");
  } catch (const Error& e) {
    CHECK(e.code() == errc::insufficient_samples);
  }
  CHECK_THROWS_AS(summarize({1.0, 2.0}, 0.0), Error);
  CHECK_THROWS_AS(summarize({1.0, 2.0}, 1.0), Error);
}

TEST_CASE("normal quantile function") {
  CHECK(inverse_normal_cdf(0.5) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(inverse_normal_cdf(0.975) == doctest::Approx(1.959963985).epsilon(1e-8));
  CHECK(inverse_normal_cdf(0.995) == doctest::Approx(2.575829304).epsilon(1e-8));
  for (double p : {0.01, 0.2, 0.7, 0.99})
    CHECK(inverse_normal_cdf(p) == doctest::Approx(-inverse_normal_cdf(1 - p)).epsilon(1e-9));
  CHECK_THROWS_AS(inverse_normal_cdf(0.0), Error);
  CHECK_THROWS_AS(inverse_normal_cdf(1.0), Error);
  CHECK_THROWS_AS(inverse_normal_cdf(-0.5), Error);
}
