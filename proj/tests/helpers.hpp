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

#ifndef CLINCH_TESTS_HELPERS_HPP_
#define CLINCH_TESTS_HELPERS_HPP_

#include <string>
#include <vector>

#include "clinch/market.hpp"
#include "clinch/optlw.hpp"

namespace clinch::testing {

inline Buyer buyer(std::string id, Rat valuation, ExtRat budget) {
  return Buyer{std::move(id), valuation, valuation, std::move(budget)};
}

inline Seller rank1_seller(std::string id, Rat valuation, Rat cap = Rat(1)) {
  Seller s;
  s.id = std::move(id);
  s.valuation = valuation;
  s.bid = valuation;
  s.capacity.kind = CapacitySpec::Kind::Rank;
  s.capacity.unit = cap;
  s.capacity.cap = cap;
  return s;
}

// Two buyers, one unit-supply seller: buyer 1 has valuation v_min + eps and
// no budget limit, buyer 2 has valuation v_max and budget v_min, the seller
// values the unit at v_min.
inline MarketInstance tight_lw_instance(Rat v_min = Rat(1), Rat v_max = Rat(3),
                                        Rat eps = Rat(1, 2)) {
  MarketInstance inst;
  inst.epsilon = eps;
  inst.buyers.push_back(buyer("b1", v_min + eps, ExtRat::infinity()));
  inst.buyers.push_back(buyer("b2", v_max, ExtRat(v_min)));
  inst.sellers.push_back(rank1_seller("s1", v_min));
  inst.edges = {{0, 0}, {1, 0}};
  return inst;
}

// Multi-unit single-sample market: buyer 1 has valuation 1 and no budget
// limit, buyer 2 has valuation k and budget 1, the seller owns one unit with
// (valuation, sample) = (rho, rho_s).
inline MarketInstance single_sample_instance(Rat k, Rat rho, Rat rho_s, Rat eps) {
  MarketInstance inst;
  inst.epsilon = eps;
  inst.buyers.push_back(buyer("b1", Rat(1), ExtRat::infinity()));
  inst.buyers.push_back(buyer("b2", k, ExtRat(Rat(1))));
  Seller s = rank1_seller("s1", rho);
  s.sample = rho_s;
  inst.sellers.push_back(s);
  inst.edges = {{0, 0}, {1, 0}};
  return inst;
}

// Brute-force maximum of a welfare functional over the grid
// {0, 1/steps, 2/steps, ...}^N intersected with the aggregate polytope.
// Enumerates depth-first and cuts a branch as soon as the partial point
// leaves the polytope (coordinates only ever grow).
template <class Welfare>
Rat grid_search_max(const PreprocessedMarket& pm, long steps, Welfare&& welfare) {
  const int n = pm.num_buyers();
  std::vector<Rat> gtab(std::size_t{1} << n);
  for (Mask m = 0; m < (Mask{1} << n); ++m) gtab[m] = pm.g_buyers(m);

  std::vector<Rat> y(n, Rat(0));
  Rat best(0);
  auto feasible_with = [&](int coord, const Rat& value) {
    for (Mask m = 0; m < (Mask{1} << n); ++m) {
      if (!has_bit(m, coord)) continue;
      Rat s = value;
      for (int i = 0; i < n; ++i)
        if (i != coord && has_bit(m, i)) s += y[i];
      if (s > gtab[m]) return false;
    }
    return true;
  };
  auto rec = [&](auto&& self, int i) -> void {
    if (i == n) {
      best = max(best, welfare(y));
      return;
    }
    for (long k = 0;; ++k) {
      Rat v(k, steps);
      if (!feasible_with(i, v)) break;
      y[i] = v;
      self(self, i + 1);
    }
    y[i] = Rat(0);
  };
  rec(rec, 0);
  return best;
}

}  // namespace clinch::testing

#endif  // CLINCH_TESTS_HELPERS_HPP_
