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

#include "clinch/oracle.hpp"

#include <memory>
#include <utility>

namespace clinch {

GroundSet numbered_ground(int n, const std::string& prefix) {
  GroundSet g;
  g.ids.reserve(n);
  for (int i = 0; i < n; ++i) g.ids.push_back(prefix + std::to_string(i));
  return g;
}

namespace {

void check_guard(int n, int guard, const char* op) {
  if (n > guard)
    throw EnumerationRefused(std::string(op) + ": ground set of size " + std::to_string(n) +
                             " exceeds enumeration guard " + std::to_string(guard));
}

}  // namespace

SubmodularOracle table_oracle(GroundSet ground, std::vector<Rat> values) {
  const int n = ground.size();
  if (values.size() != (std::size_t{1} << n))
    throw ContractViolation("table_oracle: expected 2^n values");
  auto tab = std::make_shared<std::vector<Rat>>(std::move(values));
  return SubmodularOracle{std::move(ground), [tab](Mask m) { return (*tab)[m]; }};
}

SubmodularOracle rank_capacity(GroundSet ground, Rat unit, Rat cap) {
  return SubmodularOracle{std::move(ground), [unit = std::move(unit), cap = std::move(cap)](Mask m) {
                            Rat linear = unit * Rat(popcount(m));
                            return min(linear, cap);
                          }};
}

SubmodularOracle additive_capacity(GroundSet ground, std::vector<Rat> caps) {
  if (static_cast<int>(caps.size()) != ground.size())
    throw ContractViolation("additive_capacity: size mismatch");
  auto c = std::make_shared<std::vector<Rat>>(std::move(caps));
  const int n = ground.size();
  return SubmodularOracle{std::move(ground), [c, n](Mask m) {
                            Rat s;
                            for (int i = 0; i < n; ++i)
                              if (has_bit(m, i)) s += (*c)[i];
                            return s;
                          }};
}

SubmodularOracle materialize(const SubmodularOracle& f) {
  const int n = f.ground.size();
  check_guard(n, kEnumGuard, "materialize");
  std::vector<Rat> tab(std::size_t{1} << n);
  for (Mask m = 0; m < (Mask{1} << n); ++m) tab[m] = f(m);
  return table_oracle(f.ground, std::move(tab));
}

OracleReport verify_oracle(const SubmodularOracle& f, int guard) {
  const int n = f.ground.size();
  check_guard(n, guard, "verify_oracle");
  OracleReport rep;
  const Mask top = full_mask(n);
  std::vector<Rat> val(std::size_t{1} << n);
  for (Mask m = 0; m <= top && m < (Mask{1} << n); ++m) val[m] = f(m);

  if (!val[0].is_zero()) {
    rep.normalized = false;
    rep.witness = {Mask{0}, Mask{0}};
    rep.detail = "f(empty) = " + val[0].str();
    return rep;
  }
  for (Mask m = 0; m <= top; ++m) {
    if (val[m].sign() < 0) {
      rep.monotone = false;
      rep.witness = {m, m};
      rep.detail = "negative value " + val[m].str();
      return rep;
    }
    for (int k = 0; k < n; ++k) {
      if (has_bit(m, k)) continue;
      if (val[m | (Mask{1} << k)] < val[m]) {
        rep.monotone = false;
        rep.witness = {m, m | (Mask{1} << k)};
        rep.detail = "f decreases when adding element " + f.ground.ids[k];
        return rep;
      }
    }
  }
  for (Mask s = 0; s <= top; ++s) {
    for (Mask t = s + 1; t <= top; ++t) {
      if (val[s] + val[t] < val[s & t] + val[s | t]) {
        rep.submodular = false;
        rep.witness = {s, t};
        rep.detail = "submodular inequality fails";
        return rep;
      }
      if (t == top) break;
    }
    if (s == top) break;
  }
  return rep;
}

bool membership(const SubmodularOracle& f, const VecRat& x, int guard) {
  if (!(x.ground == f.ground)) throw ContractViolation("membership: ground set mismatch");
  const int n = f.ground.size();
  check_guard(n, guard, "membership");
  for (const Rat& xe : x.v)
    if (xe.sign() < 0) return false;
  const Mask top = full_mask(n);
  for (Mask m = 0;; ++m) {
    if (x.sum(m) > f(m)) return false;
    if (m == top) break;
  }
  return true;
}

VecRat greedy_max(const SubmodularOracle& f, std::span<const int> order, const VecExt& caps,
                  int guard) {
  if (!(caps.ground == f.ground)) throw ContractViolation("greedy_max: ground set mismatch");
  const int n = f.ground.size();
  check_guard(n, guard, "greedy_max");
  if (static_cast<int>(order.size()) != n)
    throw ContractViolation("greedy_max: order must be a full permutation");
  VecRat y(f.ground);
  const Mask top = full_mask(n);
  for (int e : order) {
    // Saturation capacity of e given the prefix: min over S containing e of
    // f(S) - y(S).
    std::optional<Rat> sat;
    for (Mask m = 0;; ++m) {
      if (has_bit(m, e)) {
        Rat slack = f(m) - y.sum(m);
        if (!sat || slack < *sat) sat = slack;
      }
      if (m == top) break;
    }
    y.v[e] = cap_by(*sat, caps.v[e]);
  }
  return y;
}

Rat contract_rank(const SubmodularOracle& f, const VecRat& x, Mask F, int guard) {
  if (!(x.ground == f.ground)) throw ContractViolation("contract_rank: ground set mismatch");
  const int n = f.ground.size();
  check_guard(n, guard, "contract_rank");
  if (!membership(f, x, guard)) throw ContractViolation("contract_rank: x not in P(f)");
  const Mask top = full_mask(n);
  const Mask rest = top & ~F;
  std::optional<Rat> best;
  for_each_submask(rest, [&](Mask extra) {
    Mask sup = F | extra;
    Rat v = f(sup) - x.sum(sup);
    if (!best || v < *best) best = v;
  });
  return *best;
}

SubmodularOracle reduce_by_caps(const SubmodularOracle& g, const VecExt& d) {
  if (!(d.ground == g.ground)) throw ContractViolation("reduce_by_caps: ground set mismatch");
  auto base = std::make_shared<SubmodularOracle>(g);
  auto caps = std::make_shared<VecExt>(d);
  return SubmodularOracle{g.ground, [base, caps](Mask S) {
                            std::optional<Rat> best;
                            for_each_submask(S, [&](Mask T) {
                              ExtRat capped = caps->sum(T);
                              if (capped.is_inf()) return;
                              Rat v = (*base)(S & ~T) + capped.finite();
                              if (!best || v < *best) best = v;
                            });
                            // T = empty always yields a finite candidate.
                            return *best;
                          }};
}

Rat intersection_max(const SubmodularOracle& f1, const SubmodularOracle& f2, Mask F, int guard) {
  if (!(f1.ground == f2.ground))
    throw ContractViolation("intersection_max: ground set mismatch");
  check_guard(popcount(F), guard, "intersection_max");
  std::optional<Rat> best;
  for_each_submask(F, [&](Mask F1) {
    // F2 must cover F \ F1; by monotonicity the cheapest such F2 is F \ F1.
    Rat v = f1(F1) + f2(F & ~F1);
    if (!best || v < *best) best = v;
  });
  return *best;
}

}  // namespace clinch
