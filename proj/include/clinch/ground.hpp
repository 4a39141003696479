// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CLINCH_GROUND_HPP_
#define CLINCH_GROUND_HPP_

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "clinch/rat.hpp"

namespace clinch {

// Subsets of a ground set are bitmasks; element k of the ground set is bit k.
using Mask = std::uint32_t;

inline Mask full_mask(int n) { return n >= 32 ? ~Mask{0} : (Mask{1} << n) - 1; }
inline int popcount(Mask m) { return std::popcount(m); }
inline bool has_bit(Mask m, int k) { return (m >> k) & 1u; }

// Visits every submask of m (including m itself and 0).
template <class Fn>
void for_each_submask(Mask m, Fn&& fn) {
  Mask s = m;
  while (true) {
    fn(s);
    if (s == 0) break;
    s = (s - 1) & m;
  }
}

// Ordered finite set of opaque element ids. The order is fixed at
// construction and drives all greedy tie-breaking.
struct GroundSet {
  std::vector<std::string> ids;

  int size() const { return static_cast<int>(ids.size()); }
  Mask all() const { return full_mask(size()); }

  int index_of(const std::string& id) const {
    for (int i = 0; i < size(); ++i)
      if (ids[i] == id) return i;
    return -1;
  }

  friend bool operator==(const GroundSet& a, const GroundSet& b) { return a.ids == b.ids; }
};

// Builds a ground set with ids "e0".."e{n-1}".
GroundSet numbered_ground(int n, const std::string& prefix = "e");

struct ContractViolation : std::logic_error {
  using std::logic_error::logic_error;
};

struct EnumerationRefused : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A derivation the engine relies on failed to hold; surfaced, never
// silently repaired.
struct InternalError : std::logic_error {
  using std::logic_error::logic_error;
};

// Nonnegative vector indexed by a ground set.
struct VecRat {
  GroundSet ground;
  std::vector<Rat> v;

  VecRat() = default;
  explicit VecRat(GroundSet g) : ground(std::move(g)), v(ground.size()) {}
  VecRat(GroundSet g, std::vector<Rat> vals) : ground(std::move(g)), v(std::move(vals)) {
    if (static_cast<int>(v.size()) != ground.size())
      throw ContractViolation("VecRat: size mismatch");
  }

  Rat sum(Mask m) const {
    Rat s;
    for (int i = 0; i < ground.size(); ++i)
      if (has_bit(m, i)) s += v[i];
    return s;
  }
  Rat total() const { return sum(ground.all()); }
};

// Vector with entries in [0, +inf].
struct VecExt {
  GroundSet ground;
  std::vector<ExtRat> v;

  VecExt() = default;
  explicit VecExt(GroundSet g) : ground(std::move(g)), v(ground.size()) {}
  VecExt(GroundSet g, std::vector<ExtRat> vals) : ground(std::move(g)), v(std::move(vals)) {
    if (static_cast<int>(v.size()) != ground.size())
      throw ContractViolation("VecExt: size mismatch");
  }

  static VecExt all_infinite(GroundSet g) {
    VecExt e(std::move(g));
    for (auto& x : e.v) x = ExtRat::infinity();
    return e;
  }

  ExtRat sum(Mask m) const {
    ExtRat s;
    for (int i = 0; i < ground.size(); ++i) {
      if (has_bit(m, i)) {
        if (v[i].is_inf()) return ExtRat::infinity();
        s += v[i];
      }
    }
    return s;
  }
};

}  // namespace clinch

#endif  // CLINCH_GROUND_HPP_
