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

#include "clinch/optlw.hpp"

#include <algorithm>
#include <numeric>
#include <optional>

namespace clinch {

namespace {

// g_d(S) = min_{T <= S} g(S\T) + d(T), with infinite-d elements never capped.
Rat reduced_rank(const std::vector<Rat>& gtab, const std::vector<ExtRat>& d, Mask S) {
  std::optional<Rat> best;
  for_each_submask(S, [&](Mask T) {
    ExtRat capped;
    for (int i = 0; i < 32 && (T >> i); ++i)
      if (has_bit(T, i)) {
        if (d[i].is_inf()) return;
        capped += d[i];
      }
    Rat v = gtab[S & ~T] + capped.finite();
    if (!best || v < *best) best = v;
  });
  return *best;
}

}  // namespace

OptAllocation optimal_lw_allocation(const PreprocessedMarket& pm, int guard) {
  const int n = pm.num_buyers();
  if (n > guard) throw EnumerationRefused("optimal_lw_allocation: buyer set exceeds guard");

  std::vector<Rat> gtab(std::size_t{1} << n);
  for (Mask m = 0; m < (Mask{1} << n); ++m) gtab[m] = pm.g_buyers(m);

  OptAllocation out;
  out.x_star.assign(n, Rat());
  out.h_set.assign(n, 0);
  out.order.resize(n);
  std::iota(out.order.begin(), out.order.end(), 0);
  std::stable_sort(out.order.begin(), out.order.end(), [&](int a, int b) {
    if (pm.valuation[a] != pm.valuation[b]) return pm.valuation[a] > pm.valuation[b];
    return a < b;
  });

  std::vector<ExtRat> dstar(n);
  for (int i = 0; i < n; ++i) dstar[i] = pm.budget[i].div(pm.valuation[i]);

  // Route 1: the recursive formula x*_i = min(B_i/v_i,
  // min_{H <= H_i} f(E_{H u i}) - x*(H)).
  Mask prefix = 0;
  for (int i : out.order) {
    out.h_set[i] = prefix;
    std::optional<Rat> best;
    for_each_submask(prefix, [&](Mask H) {
      Rat xs;
      for (int k = 0; k < n; ++k)
        if (has_bit(H, k)) xs += out.x_star[k];
      Rat v = gtab[H | (Mask{1} << i)] - xs;
      if (!best || v < *best) best = v;
    });
    out.x_star[i] = cap_by(*best, dstar[i]);
    prefix |= Mask{1} << i;
  }

  // Route 2: marginals of the demand-reduced rank function along the same
  // order (the greedy algorithm on the reduced polymatroid).
  {
    Mask pfx = 0;
    Rat prev = reduced_rank(gtab, dstar, 0);
    for (int i : out.order) {
      Rat cur = reduced_rank(gtab, dstar, pfx | (Mask{1} << i));
      Rat marginal = cur - prev;
      if (marginal != out.x_star[i])
        throw InternalError("optimal_lw_allocation: recursive and reduced-greedy routes disagree at buyer " +
                            pm.buyer_ids[i] + " (" + out.x_star[i].str() + " vs " + marginal.str() + ")");
      prev = cur;
      pfx |= Mask{1} << i;
    }
  }

  Rat total;
  for (const Rat& v : out.x_star) total += v;
  if (total != gtab[full_mask(n)])
    throw InternalError("optimal_lw_allocation: x*(N) != f(E_N)");

  out.lw_opt = liquid_welfare(out.x_star, pm);
  return out;
}

Rat liquid_welfare(const std::vector<Rat>& x, const PreprocessedMarket& pm) {
  if (static_cast<int>(x.size()) != pm.num_buyers())
    throw ContractViolation("liquid_welfare: size mismatch");
  Rat s;
  for (int i = 0; i < pm.num_buyers(); ++i) s += cap_by(pm.valuation[i] * x[i], pm.budget[i]);
  return s;
}

Rat social_welfare(const std::vector<Rat>& x, const PreprocessedMarket& pm) {
  if (static_cast<int>(x.size()) != pm.num_buyers())
    throw ContractViolation("social_welfare: size mismatch");
  Rat s;
  for (int i = 0; i < pm.num_buyers(); ++i) s += pm.valuation[i] * x[i];
  return s;
}

}  // namespace clinch
