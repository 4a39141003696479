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

#include "clinch/gen.hpp"

#include <algorithm>

#include "clinch/single_sample.hpp"

namespace clinch {

namespace {

Rat grid_value(SplitMix64& rng, const GenParams& p) {
  return p.base * Rat(1 + rng.below(p.max_value));
}

// Random monotone submodular table: a sum of budgeted additive pieces.
std::vector<Rat> random_capacity_table(SplitMix64& rng, int deg, const GenParams& p) {
  const int pieces = 1 + static_cast<int>(rng.below(2));
  std::vector<std::vector<Rat>> caps(pieces, std::vector<Rat>(deg));
  std::vector<Rat> roof(pieces);
  const Rat quarter = p.base / Rat(4);
  for (int k = 0; k < pieces; ++k) {
    roof[k] = quarter * Rat(1 + rng.below(6));  // up to 3/2 * base per piece
    for (int e = 0; e < deg; ++e) caps[k][e] = quarter * Rat(rng.below(5));
  }
  std::vector<Rat> tab(std::size_t{1} << deg);
  for (Mask m = 0; m < (Mask{1} << deg); ++m) {
    Rat v;
    for (int k = 0; k < pieces; ++k) {
      Rat s;
      for (int e = 0; e < deg; ++e)
        if (has_bit(m, e)) s += caps[k][e];
      v += min(s, roof[k]);
    }
    tab[m] = v;
  }
  if (!p.allow_zero_capacity && tab.back().is_zero()) {
    // Re-roll degenerate draws into a plain unit supply.
    for (Mask m = 1; m < (Mask{1} << deg); ++m) tab[m] = p.base;
  }
  return tab;
}

}  // namespace

MarketInstance generate_instance(const GenParams& params, std::uint64_t seed) {
  SplitMix64 rng(seed);
  MarketInstance inst;

  std::vector<Rat> values;
  if (params.distinct_values) {
    if (params.max_value < params.buyers + params.sellers)
      throw ContractViolation("generate_instance: grid too small for distinct values");
    std::vector<long> deck(params.max_value);
    for (long k = 0; k < params.max_value; ++k) deck[k] = k + 1;
    for (std::size_t k = deck.size(); k > 1; --k)
      std::swap(deck[k - 1], deck[rng.below(static_cast<long>(k))]);
    for (int k = 0; k < params.buyers + params.sellers; ++k)
      values.push_back(params.base * Rat(deck[k]));
  }
  auto next_value = [&](int slot) {
    return params.distinct_values ? values[slot] : grid_value(rng, params);
  };

  for (int i = 0; i < params.buyers; ++i) {
    Buyer b;
    b.id = "b" + std::to_string(i + 1);
    b.valuation = next_value(i);
    b.bid = b.valuation;
    b.budget = ExtRat::infinity();  // finite budgets assigned once epsilon is known
    inst.buyers.push_back(std::move(b));
  }

  // Every seller sees at least one buyer; extra edges appear with odds 1/2.
  for (int j = 0; j < params.sellers; ++j) {
    int anchor = static_cast<int>(rng.below(params.buyers));
    for (int i = 0; i < params.buyers; ++i)
      if (i == anchor || rng.below(2) == 0) inst.edges.emplace_back(i, j);
  }
  std::sort(inst.edges.begin(), inst.edges.end());
  inst.edges.erase(std::unique(inst.edges.begin(), inst.edges.end()), inst.edges.end());

  for (int j = 0; j < params.sellers; ++j) {
    Seller s;
    s.id = "s" + std::to_string(j + 1);
    s.valuation = next_value(params.buyers + j);
    s.bid = s.valuation;
    if (params.with_samples) s.sample = grid_value(rng, params);
    const int deg = static_cast<int>(inst.seller_edge_ids(j).size());
    const int kind = params.table_capacities_only ? 2 : static_cast<int>(rng.below(3));
    switch (kind) {
      case 0:
        s.capacity.kind = CapacitySpec::Kind::Rank;
        s.capacity.unit = params.base * Rat(1 + rng.below(3)) / Rat(2);
        s.capacity.cap =
            params.allow_zero_capacity && rng.below(6) == 0
                ? Rat(0)
                : params.base * Rat(1 + rng.below(4)) / Rat(2);
        break;
      case 1: {
        s.capacity.kind = CapacitySpec::Kind::Additive;
        for (int e = 0; e < deg; ++e)
          s.capacity.caps.push_back(params.base * Rat(rng.below(4)) / Rat(4));
        break;
      }
      default:
        s.capacity.kind = CapacitySpec::Kind::Table;
        s.capacity.table = random_capacity_table(rng, deg, params);
        break;
    }
    inst.sellers.push_back(std::move(s));
  }

  // Budgets live on the epsilon grid too, which keeps every derived
  // quantity's denominator tame; epsilon depends only on bids and samples.
  inst.epsilon = default_epsilon(inst);
  const long budget_steps =
      Rat::ceil_ratio(params.base * Rat(2 * params.max_value), *inst.epsilon);
  for (Buyer& b : inst.buyers) {
    if (params.allow_infinite_budget && rng.below(5) == 0) continue;
    b.budget = ExtRat(*inst.epsilon * Rat(1 + rng.below(budget_steps)));
  }

  auto rep = validate(inst);
  if (!rep.ok())
    throw InternalError("generate_instance produced an invalid market: " + rep.summary());
  return inst;
}

}  // namespace clinch
