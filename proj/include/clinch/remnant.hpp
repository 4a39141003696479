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

#ifndef CLINCH_REMNANT_HPP_
#define CLINCH_REMNANT_HPP_

#include <memory>
#include <vector>

#include "clinch/market.hpp"
#include "clinch/oracle.hpp"

namespace clinch {

// Buyer-to-edge incidence of a market: buyer set N, edge set E, and the edge
// subset E_i of each buyer. Edge sets of distinct buyers are disjoint.
struct BuyerIncidence {
  GroundSet buyers;
  GroundSet edges;
  std::vector<Mask> edges_of;  // per buyer

  Mask edge_mask(Mask buyer_set) const {
    Mask m = 0;
    for (int b = 0; b < buyers.size(); ++b)
      if (has_bit(buyer_set, b)) m |= edges_of[b];
    return m;
  }
};

BuyerIncidence incidence_of(const PreprocessedMarket& pm);

// Rank of the remnant supply polytope on buyers,
//   g_{x,d}(S) = min_{S' <= S} [ min_{S'' >= S'} (f(E_{S''}) - x(S'')) + d(S\S') ],
// by double subset enumeration; the inner minimum is the contraction of the
// buyer-aggregate of f by x.
Rat remnant_rank(const SubmodularOracle& f, const BuyerIncidence& inc, const VecRat& x,
                 const VecExt& d, Mask S, int guard = kEnumGuard);

// Simplified single-enumeration form
//   g_{x,d}(S) = min_{S' <= S} (f(E_{S'}) - x(S') + d(S\S')),
// valid at auction-reachable states (the caller enforces reachability).
Rat remnant_rank_simple(const SubmodularOracle& f, const BuyerIncidence& inc, const VecRat& x,
                        const VecExt& d, Mask S, int guard = kEnumGuard);

// Dense evaluator of the remnant rank at a fixed (x, d) state, sharing one
// table of g(S) = f(E_S) values. Cost to build: O(2^n * n).
class RemnantEval {
 public:
  RemnantEval(std::shared_ptr<const std::vector<Rat>> g_table, const std::vector<Rat>& x,
              const std::vector<ExtRat>& d);

  int size() const { return n_; }
  Rat rank(Mask S) const;         // double-enumeration form
  Rat rank_simple(Mask S) const;  // single-enumeration form
  // rank(N) - rank(N \ {buyer}): the buyer's marginal on the remnant
  // polytope, which is the total she clinches.
  Rat clinch_total(int buyer) const;

 private:
  int n_;
  std::shared_ptr<const std::vector<Rat>> g_;
  std::vector<Rat> gx_;        // g(S) - x(S)
  std::vector<Rat> contract_;  // min over supersets of gx_
  std::vector<Rat> dfin_;      // finite part of d(S)
  std::vector<char> dinf_;     // d(S) infinite?
};

}  // namespace clinch

#endif  // CLINCH_REMNANT_HPP_
