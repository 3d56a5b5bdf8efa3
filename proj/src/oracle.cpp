#include "meshsched/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>

#include "meshsched/errors.hpp"

namespace meshsched {

namespace {

struct CycleStats {
  long long delivered = 0;
  long long stalls = 0;
  int max_occupancy = 0;
};

// One full pass over the schedule. Buffers are indexed by the transmitting
// hop; occupancy[i] holds packets awaiting hop succ(i).
CycleStats run_cycle(const ConflictGraph& g, int capacity,
                     const std::vector<std::vector<int>>& slots,
                     std::vector<int>& occupancy) {
  CycleStats cs;
  for (const auto& slot : slots) {
    for (int i : slot) {
      int pred = g.pred[i];
      if (pred >= 0 && occupancy[pred] == 0) continue;  // empty fire
      if (g.is_terminal[i]) {
        if (pred >= 0) --occupancy[pred];
        ++cs.delivered;
      } else if (occupancy[i] < capacity) {
        if (pred >= 0) --occupancy[pred];
        ++occupancy[i];
        cs.max_occupancy = std::max(cs.max_occupancy, occupancy[i]);
      } else {
        ++cs.stalls;
      }
    }
  }
  return cs;
}

ReplayReport replay_core(const ConflictGraph& g, int capacity, const Schedule& s,
                         int reps) {
  long long clashes_per_cycle = 0;
  for (const auto& slot : s.slots)
    for (size_t x = 0; x < slot.size(); ++x)
      for (size_t y = x + 1; y < slot.size(); ++y)
        if (g.adjacent(slot[x], slot[y])) ++clashes_per_cycle;

  ReplayReport r;
  std::vector<int> occupancy(g.node_count(), 0);
  std::map<std::vector<int>, int> seen;     // start-of-rep state -> rep index
  std::vector<long long> delivered_before;  // cumulative, per rep start
  long long delivered = 0;
  for (int rep = 0; rep < reps; ++rep) {
    auto [it, fresh] = seen.try_emplace(occupancy, rep);
    delivered_before.push_back(delivered);
    if (!fresh) {
      int start = it->second;
      r.recurred = true;
      r.steady.delivered = delivered - delivered_before[start];
      r.steady.length = (long long)(rep - start) * s.length();
      return r;
    }
    CycleStats cs = run_cycle(g, capacity, s.slots, occupancy);
    delivered += cs.delivered;
    r.c2_violations += cs.stalls;
    r.independence_violations += clashes_per_cycle;
    r.max_occupancy = std::max(r.max_occupancy, cs.max_occupancy);
  }
  r.steady.delivered = delivered - delivered_before.back();
  r.steady.length = s.length();
  return r;
}

}  // namespace

ReplayReport replay_schedule(const TinyInstance& inst, const Schedule& s, int reps) {
  if (s.length() < 1) throw Error(errc::bad_input, "schedule has no slots");
  if (reps < 1) throw Error(errc::bad_input, "need at least one repetition");
  if (inst.buffer_capacity < 1) throw Error(errc::bad_input, "buffer capacity must be positive");
  for (const auto& slot : s.slots)
    for (int i : slot)
      if (i < 0 || i >= inst.g.node_count())
        throw Error(errc::bad_input, "slot mentions an unknown transmission");
  return replay_core(inst.g, inst.buffer_capacity, s, reps);
}

namespace {

class BruteSearch {
 public:
  BruteSearch(const ConflictGraph& g, int capacity, int l_max)
      : g_(g), capacity_(capacity), l_max_(l_max) {
    int n = g.node_count();
    all_ = (uint16_t)((1u << n) - 1);
    std::vector<uint16_t> adj(n, 0);
    for (auto [a, b] : g_.edges) {
      adj[a] |= (uint16_t)(1u << b);
      adj[b] |= (uint16_t)(1u << a);
    }
    for (uint32_t m = 1; m <= all_; ++m) {
      bool ok = true;
      for (uint32_t rest = m; rest && ok;) {
        int v = std::countr_zero(rest);
        rest &= rest - 1;
        ok = (m & adj[v]) == 0;
      }
      if (ok) sets_.push_back((uint16_t)m);
    }
    // Per-path hop lists drive the count upper bound. Path ids need not be
    // contiguous in hand-built instances.
    std::map<int, std::vector<int>> by_path;
    for (int v = 0; v < n; ++v) by_path[g.nodes[v].path_id].push_back(v);
    for (auto& [id, hops] : by_path) path_hops_.push_back(std::move(hops));
  }

  BruteForceResult run() {
    best_ = Rational(0);
    counts_.assign(g_.node_count(), 0);
    for (int len = 1; len <= l_max_; ++len) {
      len_ = len;
      seq_.assign(len, 0);
      // Fix the numerically largest slot first; every cyclic schedule has
      // such a rotation, and throughput does not care about rotation.
      for (uint16_t first : sets_) {
        seq_[0] = first;
        apply(first, +1);
        extend(1, first);
        apply(first, -1);
      }
    }
    return {best_, best_schedule_};
  }

 private:
  void apply(uint16_t mask, int d) {
    for (uint32_t rest = mask; rest;) {
      int v = std::countr_zero(rest);
      rest &= rest - 1;
      counts_[v] += d;
    }
  }

  Rational upper_bound(int depth) const {
    long long total = 0;
    int left = len_ - depth;
    for (const auto& hops : path_hops_) {
      long long m = (long long)1 << 40;
      for (int v : hops) m = std::min(m, (long long)counts_[v] + left);
      total += m;
    }
    return Rational(total, len_);
  }

  void evaluate() {
    uint16_t cover = 0;
    for (uint16_t m : seq_) cover |= m;
    if (cover != all_) return;

    Schedule s;
    for (uint16_t m : seq_) {
      std::vector<int> slot;
      for (uint32_t rest = m; rest;) {
        slot.push_back(std::countr_zero(rest));
        rest &= rest - 1;
      }
      s.slots.push_back(std::move(slot));
    }
    int reps = 3 + capacity_ * g_.node_count() + 16;
    ReplayReport rep = replay_core(g_, capacity_, s, reps);
    if (!rep.recurred || rep.c2_violations > 0) return;
    Rational t = rep.steady.throughput();
    if (best_ < t) {
      best_ = t;
      best_schedule_ = std::move(s);
    }
  }

  void extend(int depth, uint16_t limit) {
    if (++visited_ > budget_)
      throw Error(errc::instance_too_large, "schedule search budget exceeded");
    if (depth == len_) {
      evaluate();
      return;
    }
    if (!(best_ < upper_bound(depth))) return;
    for (uint16_t m : sets_) {
      if (m > limit) break;
      seq_[depth] = m;
      apply(m, +1);
      extend(depth + 1, limit);
      apply(m, -1);
    }
  }

  const ConflictGraph& g_;
  int capacity_;
  int l_max_;
  uint16_t all_;
  std::vector<uint16_t> sets_;  // ascending mask order
  std::vector<std::vector<int>> path_hops_;

  int len_ = 0;
  std::vector<uint16_t> seq_;
  std::vector<int> counts_;
  Rational best_;
  Schedule best_schedule_;
  long long visited_ = 0;
  const long long budget_ = 50'000'000;
};

}  // namespace

BruteForceResult brute_force_best_schedule(const TinyInstance& inst, int l_max) {
  if (inst.g.node_count() < 1) throw Error(errc::bad_input, "empty conflict graph");
  if (inst.buffer_capacity < 1) throw Error(errc::bad_input, "buffer capacity must be positive");
  if (inst.g.node_count() > 8 || l_max > 8 || l_max < 1)
    throw Error(errc::instance_too_large, "exhaustive search is capped at 8 nodes, 8 slots");
  return BruteSearch(inst.g, inst.buffer_capacity, l_max).run();
}

}  // namespace meshsched
