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

#ifndef CLINCH_ORACLE_HPP_
#define CLINCH_ORACLE_HPP_

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "clinch/ground.hpp"
#include "clinch/rat.hpp"

namespace clinch {

// Subset-enumeration ops refuse ground sets above this size unless the caller
// raises the guard explicitly (CLI: env CLINCH_MAX_GROUND).
inline constexpr int kEnumGuard = 20;

// Value oracle for a set function on a ground set. All library operations
// assume (and verify_oracle checks) that the function is normalized,
// monotone, and submodular.
struct SubmodularOracle {
  GroundSet ground;
  std::function<Rat(Mask)> eval;

  Rat operator()(Mask m) const { return eval(m); }
};

SubmodularOracle table_oracle(GroundSet ground, std::vector<Rat> values);
// min(|F| * unit, cap)
SubmodularOracle rank_capacity(GroundSet ground, Rat unit, Rat cap);
// sum of per-element caps over F
SubmodularOracle additive_capacity(GroundSet ground, std::vector<Rat> caps);
// Dense-caches every value; the result is a table oracle.
SubmodularOracle materialize(const SubmodularOracle& f);

struct OracleReport {
  bool normalized = true;
  bool monotone = true;
  bool submodular = true;
  // Witness masks for the first violated axiom, if any.
  std::optional<std::pair<Mask, Mask>> witness;
  std::string detail;

  bool ok() const { return normalized && monotone && submodular; }
};

// Exhaustively checks normalization, monotonicity (over single-element
// extensions), and the submodular inequality over all pairs.
OracleReport verify_oracle(const SubmodularOracle& f, int guard = kEnumGuard);

// True iff x(S) <= f(S) for every subset S.
bool membership(const SubmodularOracle& f, const VecRat& x, int guard = kEnumGuard);

// Lexicographically greedy maximal point of {y in P(f) : y <= caps}, scanning
// coordinates in `order` (a permutation of the ground indices).
VecRat greedy_max(const SubmodularOracle& f, std::span<const int> order, const VecExt& caps,
                  int guard = kEnumGuard);

// min over F' >= F of f(F') - x(F'); requires x in P(f).
Rat contract_rank(const SubmodularOracle& f, const VecRat& x, Mask F, int guard = kEnumGuard);

// Rank function of {y in P(g) : y <= d}: g_d(S) = min_{T<=S} g(S\T) + d(T).
SubmodularOracle reduce_by_caps(const SubmodularOracle& g, const VecExt& d);

// Edmonds intersection value max{y(F) : y in P(f1) cap P(f2)} via the min
// over ordered covers F1 u F2 = F of f1(F1) + f2(F2).
Rat intersection_max(const SubmodularOracle& f1, const SubmodularOracle& f2, Mask F,
                     int guard = 16);

}  // namespace clinch

#endif  // CLINCH_ORACLE_HPP_
