#pragma once

#include <vector>

#include "meshsched/conflict.hpp"
#include "meshsched/rational.hpp"
#include "meshsched/schedule.hpp"

namespace meshsched {

Numbering number_transmissions(const ConflictGraph& g, NumberingScheme scheme);

// Orients every conflict edge from the higher-numbered endpoint to the
// lower-numbered one; the result is acyclic by construction.
Orientation initial_orientation(const ConflictGraph& g, const Numbering& nb);
Orientation initial_orientation(const ConflictGraph& g, NumberingScheme scheme);

// Nodes with no outgoing edge (isolated nodes included), ascending.
std::vector<int> sinks(const ConflictGraph& g, const Orientation& w);

// One scheduling step: every sink becomes a source. Sinks are pairwise
// non-adjacent, so all reversals commute.
Orientation reverse_sinks(const ConflictGraph& g, const Orientation& w);

bool is_acyclic(const ConflictGraph& g, const Orientation& w);

// Longest-path level of each node: sinks are level 1, and every node has an
// out-neighbor exactly one level below. Levels encode the orientation
// completely (each edge points from the higher level to the lower).
std::vector<int> canonical_levels(const ConflictGraph& g, const Orientation& w);

// Incremental engine for the reversal dynamics. Levels drop by one per step
// for non-sinks, so the engine keeps an absolute height per node in a ring of
// buckets and touches only the sinks' neighborhoods each step.
class SerDynamics {
 public:
  SerDynamics(const ConflictGraph& g, const Orientation& w0);

  void step();
  // Sinks of the current orientation, sorted ascending.
  const std::vector<int>& current_sinks() const { return sinks_; }
  int terminal_sink_count() const;
  long long step_index() const { return t_; }
  int level(int v) const { return (int)(height_[v] - t_); }
  Orientation orientation() const;

 protected:
  const ConflictGraph& g_;
  long long t_ = 0;
  int modulus_ = 0;
  std::vector<long long> height_;          // level(v) + step index
  std::vector<std::vector<int>> buckets_;  // nodes by height % modulus
  std::vector<int> sinks_;

  void refresh_sinks();
};

struct PeriodReport {
  long long p = 0;            // period length in steps
  long long first_index = 0;  // first step index of the periodic regime
  std::vector<long long> sink_counts;  // per node, within one period
  Schedule schedule;          // sink sets of the period, in order
};

struct SerResult {
  PeriodReport period;
  // Shared per-node sink count within the period. Uniform per connected
  // component; 0 here when disconnected components disagree.
  long long m = 0;
  Rational throughput;       // terminal sink count summed over the period / p
  long long iterations = 0;  // steps simulated until the recurrence was seen
};

// Iterates reversals from the initial orientation for `scheme` until an
// orientation repeats (states are hashed by their edge-direction words), then
// reports the period. Throws Error(period_not_found) past max_iters.
SerResult run_ser(const ConflictGraph& g, NumberingScheme scheme,
                  long long max_iters = 1'000'000);

}  // namespace meshsched
