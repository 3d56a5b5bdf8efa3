#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "meshsched/conflict.hpp"

namespace meshsched {

// Order in which transmissions receive their initial numbers. Paths are
// sorted by hop count, nondecreasing (nd) or nonincreasing (ni), ties by
// increasing path id; numbers are then dealt breadth-first (bf: one hop per
// path per round, starting at the origins) or depth-first (df: a whole path
// origin to destination before the next).
enum class NumberingScheme { nd_bf, nd_df, ni_bf, ni_df };

const char* scheme_name(NumberingScheme s);
NumberingScheme scheme_from_name(const std::string& name);

// label[i] is transmission i's number, a permutation of 1..N.
struct Numbering {
  NumberingScheme scheme = NumberingScheme::nd_bf;
  std::vector<int> label;
};

// Direction of every conflict edge. Bit e set means the edge points from
// edges[e].first to edges[e].second (and clear means the reverse); the word
// layout doubles as the canonical state fingerprint.
struct Orientation {
  std::vector<uint64_t> bits;

  bool forward(int e) const { return bits[e / 64] >> (e % 64) & 1; }
  void set_forward(int e, bool f) {
    uint64_t mask = 1ull << (e % 64);
    if (f)
      bits[e / 64] |= mask;
    else
      bits[e / 64] &= ~mask;
  }
  void flip(int e) { bits[e / 64] ^= 1ull << (e % 64); }

  friend bool operator==(const Orientation&, const Orientation&) = default;
};

inline Orientation make_orientation(const ConflictGraph& g) {
  Orientation w;
  w.bits.assign((g.edge_count() + 63) / 64, 0);
  return w;
}

// A cyclic transmission schedule: each slot is a sorted set of pairwise
// non-conflicting transmissions, and every transmission appears somewhere.
struct Schedule {
  std::vector<std::vector<int>> slots;
  int length() const { return (int)slots.size(); }
};

}  // namespace meshsched
