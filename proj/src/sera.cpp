#include "meshsched/sera.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

#include "meshsched/errors.hpp"
#include "meshsched/rng.hpp"

namespace meshsched {

SinkDecomposition decompose(const ConflictGraph& g, const Orientation& w) {
  auto level = canonical_levels(g, w);
  SinkDecomposition d;
  d.subscript_of = level;
  int depth = 0;
  for (int l : level) depth = std::max(depth, l);
  d.sets.resize(depth);
  for (int v = 0; v < g.node_count(); ++v) d.sets[level[v] - 1].push_back(v);
  return d;
}

SeraState initial_sera_state(const ConflictGraph& g, NumberingScheme scheme,
                             int buffer_capacity) {
  if (buffer_capacity < 1) throw Error(errc::bad_input, "buffer capacity must be >= 1");
  SeraState s;
  s.orientation = initial_orientation(g, scheme);
  s.buffers.capacity = buffer_capacity;
  s.buffers.occupancy.assign(g.node_count(), 0);
  return s;
}

SeraDynamics::SeraDynamics(const ConflictGraph& g, const Orientation& w0,
                           int buffer_capacity, const SeraOptions& opt)
    : SeraDynamics(g, w0,
                   BufferState{buffer_capacity, std::vector<int>(g.node_count(), 0)},
                   opt) {}

SeraDynamics::SeraDynamics(const ConflictGraph& g, const Orientation& w0,
                           BufferState buffers, const SeraOptions& opt)
    : g_(g), opt_(opt), buf_(std::move(buffers)) {
  if (buf_.capacity < 1) throw Error(errc::bad_input, "buffer capacity must be >= 1");
  if ((int)buf_.occupancy.size() != g.node_count())
    throw Error(errc::bad_input, "occupancy size does not match graph");
  for (int v = 0; v < g.node_count(); ++v) {
    int limit = g.is_terminal[v] ? 0 : buf_.capacity;
    if (buf_.occupancy[v] < 0 || buf_.occupancy[v] > limit)
      throw Error(errc::bad_input, "occupancy out of range");
  }
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

void SeraDynamics::refresh_sinks() {
  sinks_ = buckets_[(t_ + 1) % modulus_];
  std::sort(sinks_.begin(), sinks_.end());
}

int SeraDynamics::terminal_sink_count() const {
  int c = 0;
  for (int v : sinks_)
    if (g_.is_terminal[v]) ++c;
  return c;
}

// Least admissible tier for former sink v, measured in post-renumber
// subscripts. Tiers below a starved predecessor or above a full successor
// are skipped outright; the first tier holding no neighbor wins. The plain
// alternation position, one above the highest neighbor, always qualifies.
int SeraDynamics::place(int v, long long t_new) const {
  scratch_.clear();
  for (int u : g_.adj[v]) scratch_.push_back((int)(height_[u] - t_new));
  if (!opt_.advancement) {
    int top = 0;
    for (int l : scratch_) top = std::max(top, l);
    return top + 1;
  }
  int k = 1;
  int pred = g_.pred[v], succ = g_.succ[v];
  if (pred >= 0 && buf_.occupancy[pred] == 0)
    k = std::max(k, (int)(height_[pred] - t_new) + 1);
  if (succ >= 0 && buf_.occupancy[v] >= buf_.capacity)
    k = std::max(k, (int)(height_[succ] - t_new) + 1);
  std::sort(scratch_.begin(), scratch_.end());
  for (int l : scratch_) {
    if (l > k) break;
    if (l == k) ++k;
  }
  return k;
}

long long SeraDynamics::step() {
  auto& cur = buckets_[(t_ + 1) % modulus_];

  long long deliveries = 0;
  for (int v : cur) {
    int pred = g_.pred[v];
    if (pred >= 0 && height_[pred] == height_[v])
      throw std::logic_error("consecutive hops fired in the same slot");
    bool real = pred < 0 || buf_.occupancy[pred] > 0;
    if (!real) continue;
    if (pred >= 0) --buf_.occupancy[pred];
    if (g_.is_terminal[v]) {
      ++deliveries;
    } else {
      if (buf_.occupancy[v] >= buf_.capacity)
        throw Error(errc::buffer_overflow_attempt,
                    "full out-buffer at fire time on transmission " + std::to_string(v));
      ++buf_.occupancy[v];
    }
  }

  long long t_new = t_ + 1;
  if (opt_.placement_shuffle_seed) {
    std::vector<int> order = cur;
    Rng rng(*opt_.placement_shuffle_seed ^ (uint64_t)t_);
    for (size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[rng.below(i)]);
    for (int v : order) height_[v] = place(v, t_new) + t_new;
  } else {
    for (int v : cur) height_[v] = place(v, t_new) + t_new;
  }
  for (int v : cur) buckets_[height_[v] % modulus_].push_back(v);
  cur.clear();
  t_ = t_new;
  refresh_sinks();
  return deliveries;
}

Orientation SeraDynamics::orientation() const {
  Orientation w = make_orientation(g_);
  for (int e = 0; e < g_.edge_count(); ++e) {
    auto [a, b] = g_.edges[e];
    w.set_forward(e, height_[a] > height_[b]);
  }
  return w;
}

SeraStepResult sera_step(const ConflictGraph& g, const SeraState& state,
                         const SeraOptions& opt) {
  SeraDynamics dyn(g, state.orientation, state.buffers, opt);
  SeraStepResult r;
  r.fired = dyn.current_sinks();
  r.deliveries = dyn.step();
  r.state = dyn.state();
  return r;
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

SeraReport run_sera(const ConflictGraph& g, const PathSet& ps, NumberingScheme scheme,
                    int buffer_capacity, long long max_iters, const SeraOptions& opt) {
  if (ps.path_count() != g.path_count)
    throw Error(errc::bad_input, "path set does not match graph");
  int hops = 0;
  for (const auto& p : ps.paths) hops += p.hops();
  if (hops != g.node_count())
    throw Error(errc::bad_input, "path set does not match graph");

  SeraDynamics dyn(g, initial_orientation(g, scheme), buffer_capacity, opt);
  std::unordered_map<std::vector<uint64_t>, long long, WordsHash> seen;
  std::vector<std::vector<int>> sink_history;
  std::vector<long long> delivery_history;

  long long first = -1, recur = -1;
  for (long long t = 0; t <= max_iters; ++t) {
    auto key = dyn.orientation().bits;
    key.reserve(key.size() + g.node_count());
    for (int occ : dyn.buffers().occupancy) key.push_back((uint64_t)occ);
    auto [it, fresh] = seen.try_emplace(std::move(key), t);
    if (!fresh) {
      first = it->second;
      recur = t;
      break;
    }
    sink_history.push_back(dyn.current_sinks());
    delivery_history.push_back(dyn.step());
  }
  if (first < 0)
    throw Error(errc::period_not_found,
                "no state recurrence within " + std::to_string(max_iters) + " steps");

  SeraReport r;
  r.iterations = recur;
  r.p = recur - first;
  r.first_index = first;
  r.sink_counts.assign(g.node_count(), 0);
  for (long long t = first; t < recur; ++t) {
    r.schedule.slots.push_back(sink_history[t]);
    r.delivered += delivery_history[t];
    for (int v : sink_history[t]) ++r.sink_counts[v];
  }
  // Steady state: a terminal sink always holds a packet, so deliveries and
  // terminal sink occurrences must agree over the period.
  long long terminal_sinks = 0;
  for (int v : g.terminals) terminal_sinks += r.sink_counts[v];
  if (terminal_sinks != r.delivered)
    throw std::logic_error("terminal sink fired empty inside the period");
  r.throughput = Rational(r.delivered, r.p);
  return r;
}

}  // namespace meshsched
