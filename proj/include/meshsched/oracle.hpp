#pragma once

#include "meshsched/metrics.hpp"
#include "meshsched/routing.hpp"
#include "meshsched/schedule.hpp"

namespace meshsched {

// A problem small enough for exhaustive reference computations. The oracle
// deliberately reimplements packet flow from the conflict graph alone so its
// verdicts are independent of the scheduling engines.
struct TinyInstance {
  ConflictGraph g;
  PathSet ps;
  int buffer_capacity = 1;
};

struct ReplayReport {
  ThroughputSample steady;  // per-cycle deliveries once the buffer state recurs
  bool recurred = false;    // false means the rep cap ran out; steady is the last rep
  long long independence_violations = 0;  // conflicting pairs scheduled together
  long long c2_violations = 0;            // stalls: packet ready, out-buffer full
  int max_occupancy = 0;
};

// Replays a cyclic schedule slot by slot from empty buffers, at most `reps`
// cycles. A scheduled hop with no packet upstream fires empty; one whose
// out-buffer is full stalls and is counted. Within a slot hops execute in
// ascending id, which only matters for schedules that already violate
// independence. Steady throughput is measured over the recurrence cycle of
// the start-of-rep buffer state, so it is exact, not a long-run average.
ReplayReport replay_schedule(const TinyInstance& inst, const Schedule& s, int reps);

struct BruteForceResult {
  Rational best;      // highest steady throughput over all valid cyclic schedules
  Schedule schedule;  // a witness achieving it
};

// Exhausts every cyclic sequence of at most l_max nonempty independent sets
// that covers all transmissions, keeping those whose replay is stall-free,
// and returns the best steady throughput. Sequences are enumerated up to
// rotation. Instances beyond 8 nodes or l_max 8, or searches past the node
// budget, raise instance-too-large.
BruteForceResult brute_force_best_schedule(const TinyInstance& inst, int l_max);

}  // namespace meshsched
