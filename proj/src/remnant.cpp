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

#include "clinch/remnant.hpp"

#include <optional>

namespace clinch {

BuyerIncidence incidence_of(const PreprocessedMarket& pm) {
  BuyerIncidence inc;
  inc.buyers = pm.buyer_ground();
  inc.edges = pm.edge_ground();
  inc.edges_of = pm.buyer_edge_masks;
  return inc;
}

namespace {

void check_remnant_args(const BuyerIncidence& inc, const VecRat& x, const VecExt& d, int guard) {
  if (!(x.ground == inc.buyers) || !(d.ground == inc.buyers))
    throw ContractViolation("remnant_rank: ground set mismatch");
  if (inc.buyers.size() > guard)
    throw EnumerationRefused("remnant_rank: buyer set exceeds enumeration guard");
}

}  // namespace

Rat remnant_rank(const SubmodularOracle& f, const BuyerIncidence& inc, const VecRat& x,
                 const VecExt& d, Mask S, int guard) {
  check_remnant_args(inc, x, d, guard);
  // Buyer-level aggregate of f; the inner minimum of the double enumeration
  // is exactly the contraction of this aggregate by x.
  SubmodularOracle aggregate{inc.buyers,
                             [&f, &inc](Mask buyers) { return f(inc.edge_mask(buyers)); }};
  std::optional<Rat> best;
  for_each_submask(S, [&](Mask sp) {
    ExtRat dsum = d.sum(S & ~sp);
    if (dsum.is_inf()) return;
    Rat cand = contract_rank(aggregate, x, sp, guard) + dsum.finite();
    if (!best || cand < *best) best = cand;
  });
  return *best;
}

Rat remnant_rank_simple(const SubmodularOracle& f, const BuyerIncidence& inc, const VecRat& x,
                        const VecExt& d, Mask S, int guard) {
  check_remnant_args(inc, x, d, guard);
  std::optional<Rat> best;
  for_each_submask(S, [&](Mask sp) {
    ExtRat dsum = d.sum(S & ~sp);
    if (dsum.is_inf()) return;
    Rat cand = f(inc.edge_mask(sp)) - x.sum(sp) + dsum.finite();
    if (!best || cand < *best) best = cand;
  });
  return *best;
}

RemnantEval::RemnantEval(std::shared_ptr<const std::vector<Rat>> g_table,
                         const std::vector<Rat>& x, const std::vector<ExtRat>& d)
    : g_(std::move(g_table)) {
  std::size_t size = g_->size();
  n_ = 0;
  while ((std::size_t{1} << n_) < size) ++n_;
  if ((std::size_t{1} << n_) != size || static_cast<int>(x.size()) != n_ ||
      static_cast<int>(d.size()) != n_)
    throw ContractViolation("RemnantEval: table/vector size mismatch");

  gx_.resize(size);
  dfin_.resize(size);
  dinf_.assign(size, 0);
  std::vector<Rat> xsum(size);
  gx_[0] = (*g_)[0];
  for (Mask m = 1; m < size; ++m) {
    int low = std::countr_zero(m);
    Mask rest = m & (m - 1);
    xsum[m] = xsum[rest] + x[low];
    gx_[m] = (*g_)[m] - xsum[m];
    if (d[low].is_inf() || dinf_[rest]) {
      dinf_[m] = 1;
    } else {
      dfin_[m] = dfin_[rest] + d[low].finite();
    }
  }
  contract_ = gx_;
  for (int b = 0; b < n_; ++b) {
    const Mask bit = Mask{1} << b;
    for (Mask m = 0; m < size; ++m) {
      if (!(m & bit) && contract_[m | bit] < contract_[m]) contract_[m] = contract_[m | bit];
    }
  }
}

Rat RemnantEval::rank(Mask S) const {
  std::optional<Rat> best;
  for_each_submask(S, [&](Mask sp) {
    Mask rest = S & ~sp;
    if (dinf_[rest]) return;
    Rat cand = contract_[sp] + dfin_[rest];
    if (!best || cand < *best) best = cand;
  });
  return *best;
}

Rat RemnantEval::rank_simple(Mask S) const {
  std::optional<Rat> best;
  for_each_submask(S, [&](Mask sp) {
    Mask rest = S & ~sp;
    if (dinf_[rest]) return;
    Rat cand = gx_[sp] + dfin_[rest];
    if (!best || cand < *best) best = cand;
  });
  return *best;
}

Rat RemnantEval::clinch_total(int buyer) const {
  const Mask all = full_mask(n_);
  return rank(all) - rank(all & ~(Mask{1} << buyer));
}

}  // namespace clinch
