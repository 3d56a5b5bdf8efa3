#include "meshsched/metrics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>

#include "meshsched/errors.hpp"

namespace meshsched {

EstimatorResult streaming_estimator(const std::function<long long()>& next,
                                    long long w, const Rational& tol,
                                    long long t_max, long long zero_grace) {
  if (w < 1) throw Error(errc::bad_input, "window must be >= 1");
  if (tol.num <= 0) throw Error(errc::bad_input, "tolerance must be positive");
  if (zero_grace <= 0) zero_grace = 10 * w + 100;

  std::vector<long long> ring((size_t)w + 1, 0);  // cumulative counts, last w+1 slots
  long long cum = 0;
  for (long long t = 0; t < t_max; ++t) {
    cum += next();
    ring[(size_t)(t % (w + 1))] = cum;
    if (t < w) continue;
    long long old = ring[(size_t)((t - w) % (w + 1))];
    if (old == 0) {
      if (t > zero_grace)
        throw Error(errc::zero_throughput_window,
                    "no deliveries in sight after " + std::to_string(t) + " slots");
      continue;
    }
    // |cum/(t+1) - old/(t-w+1)| <= tol * old/(t-w+1), cross-multiplied.
    __int128 diff = (__int128)cum * (t - w + 1) - (__int128)old * (t + 1);
    if (diff < 0) diff = -diff;
    if (diff * tol.den <= (__int128)tol.num * old * (t + 1))
      return {Rational(cum, t + 1), t};
  }
  throw Error(errc::not_converged,
              "estimate still moving after " + std::to_string(t_max) + " slots");
}

namespace {

// Exact max clique over an adjacency-mask graph, greedy-coloring bound.
class CliqueSolver {
 public:
  explicit CliqueSolver(const std::vector<uint64_t>& nbr) : nbr_(nbr) {}

  int solve() {
    uint64_t all = nbr_.size() == 64 ? ~0ull : (1ull << nbr_.size()) - 1;
    best_ = 0;
    expand(all, 0);
    return best_;
  }

 private:
  void expand(uint64_t cand, int size) {
    if (!cand) {
      best_ = std::max(best_, size);
      return;
    }
    // Color candidates greedily; a clique meets each color class at most once.
    colored_.clear();
    uint64_t rest = cand;
    int c = 0;
    while (rest) {
      ++c;
      uint64_t avail = rest;
      while (avail) {
        int v = std::countr_zero(avail);
        colored_.push_back({c, v});
        uint64_t bit = 1ull << v;
        avail &= ~(nbr_[v] | bit);
        rest &= ~bit;
      }
    }
    auto order = colored_;  // expand() below reuses the scratch vector
    for (size_t i = order.size(); i-- > 0;) {
      auto [col, v] = order[i];
      if (size + col <= best_) return;
      expand(cand & nbr_[v], size + 1);
      cand &= ~(1ull << v);
    }
  }

  const std::vector<uint64_t>& nbr_;
  int best_ = 0;
  std::vector<std::pair<int, int>> colored_;
};

}  // namespace

std::optional<PhiBound> phi_bound(const ConflictGraph& g, int path_count,
                                  int exact_limit) {
  int n = g.node_count();
  if (n == 0 || n > exact_limit || n > 64) return std::nullopt;

  std::vector<uint64_t> nbr(n, 0);
  for (auto [a, b] : g.edges) {
    nbr[a] |= 1ull << b;
    nbr[b] |= 1ull << a;
  }
  PhiBound r;
  r.omega = CliqueSolver(nbr).solve();

  uint64_t all = n == 64 ? ~0ull : (1ull << n) - 1;
  std::vector<uint64_t> co(n);
  for (int v = 0; v < n; ++v) co[v] = all & ~(nbr[v] | (1ull << v));
  r.alpha = CliqueSolver(co).solve();

  r.phi = std::max(Rational(r.omega), Rational(n, r.alpha));
  r.bound = Rational(path_count) / r.phi;
  return r;
}

Summary summarize(const std::vector<double>& samples, double level) {
  if (samples.size() < 2)
    throw Error(errc::insufficient_samples, "need at least two samples");
  if (!(level > 0.0 && level < 1.0))
    throw Error(errc::bad_input, "confidence level must be in (0, 1)");
  double k = (double)samples.size();
  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= k;
  double ss = 0.0;
  for (double x : samples) ss += (x - mean) * (x - mean);
  double sd = std::sqrt(ss / (k - 1));
  double z = inverse_normal_cdf(0.5 + level / 2.0);
  return {mean, z * sd / std::sqrt(k)};
}

double inverse_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0)) throw Error(errc::bad_input, "p must be in (0, 1)");
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425, phigh = 1 - plow;
  double q, r;
  if (p < plow) {
    q = std::sqrt(-2 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  if (p > phigh) {
    q = std::sqrt(-2 * std::log(1 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  q = p - 0.5;
  r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
}

}  // namespace meshsched
