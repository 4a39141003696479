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

#ifndef CLINCH_OPTLW_HPP_
#define CLINCH_OPTLW_HPP_

#include <vector>

#include "clinch/market.hpp"

namespace clinch {

// Liquid-welfare-optimal allocation over the preprocessed buyer set.
struct OptAllocation {
  std::vector<Rat> x_star;   // per preprocessed buyer
  std::vector<Mask> h_set;   // H_i: buyers processed before i
  std::vector<int> order;    // descending valuation, ties by lower index
  Rat lw_opt;
};

// Greedy optimum: buyers in descending valuation (ties by lower index) each
// receive min(B_i/v_i, remaining polymatroid headroom). Computed both by the
// recursive formula and by marginals of the demand-reduced rank function;
// the two routes must agree.
OptAllocation optimal_lw_allocation(const PreprocessedMarket& pm, int guard = kEnumGuard);

// One-sided forms over the preprocessed buyer set (virtual buyers have
// infinite budget, so they contribute v_i * x_i to LW).
Rat liquid_welfare(const std::vector<Rat>& x, const PreprocessedMarket& pm);
Rat social_welfare(const std::vector<Rat>& x, const PreprocessedMarket& pm);

}  // namespace clinch

#endif  // CLINCH_OPTLW_HPP_
