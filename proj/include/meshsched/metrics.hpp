#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "meshsched/conflict.hpp"
#include "meshsched/rational.hpp"

namespace meshsched {

struct ThroughputSample {
  long long delivered = 0;
  long long length = 1;
  Rational throughput() const { return Rational(delivered, length); }
};

struct EstimatorResult {
  Rational estimate;     // running throughput at the stopping slot
  long long t_plus = 0;  // the stopping slot, 0-based
};

// Consumes slots from `next`, which must advance the underlying run by one
// slot and return that slot's terminal sink count. The running estimate is
// the cumulative count over slots 0..t divided by t+1; the run stops at the
// first t >= w where the estimate moved by at most `tol` relative to w slots
// earlier. Tests are skipped while the older estimate is still zero; if it
// stays zero past `zero_grace` slots (0 picks 10w+100) the run is starved.
// All comparisons are exact integer arithmetic.
EstimatorResult streaming_estimator(const std::function<long long()>& next,
                                    long long w, const Rational& tol,
                                    long long t_max, long long zero_grace = 0);

struct PhiBound {
  int omega = 0;     // largest clique
  int alpha = 0;     // largest independent set
  Rational phi;      // max(omega, |N| / alpha)
  Rational bound;    // P / phi, an upper limit on throughput
};

// Exact omega and alpha by branch and bound with a greedy coloring bound.
// Returns nullopt (skipped) above exact_limit nodes rather than degrading to
// a heuristic that could not back a sound bound.
std::optional<PhiBound> phi_bound(const ConflictGraph& g, int path_count,
                                  int exact_limit = 40);

struct Summary {
  double mean = 0.0;
  double half_width = 0.0;
};

// Sample mean and normal-approximation confidence half-width at `level`.
Summary summarize(const std::vector<double>& samples, double level = 0.95);

// Inverse of the standard normal CDF (Acklam's rational approximation,
// relative error under 1.2e-9). Exposed for the stats tooling.
double inverse_normal_cdf(double p);

}  // namespace meshsched
