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

#ifndef CLINCH_SINGLE_SAMPLE_HPP_
#define CLINCH_SINGLE_SAMPLE_HPP_

#include <cstdint>
#include <vector>

#include "clinch/auction.hpp"

namespace clinch {

// Outcome of the sample-threshold mechanism: sellers whose sample meets
// their bid participate; the auction runs on that submarket with samples as
// the seller-side values; kept sellers are paid their sample per sold unit.
struct MechanismResult {
  std::vector<char> kept;   // per seller of the original instance
  MarketInstance sub;       // kept-seller submarket (samples filled in)
  PcaResult inner;          // auction over the submarket
  Allocation alloc;         // lifted to the full market
};

MechanismResult run_mechanism(const MarketInstance& instance, const std::vector<Rat>& samples,
                              const RunOptions& opts = {});

// Evaluation of the mechanism on a pair of seller-value vectors, run both
// ways (each vector once as valuations, once as samples), together with the
// submarket decomposition the efficiency proof rests on.
struct PairwiseReport {
  // Run 1: rho_a as true values/bids, rho_b as samples. Run 2: swapped.
  Rat lw_run1, lw_run2, sw_run1, sw_run2;
  Rat lw_sum, sw_sum;
  Rat opt_a, opt_b, opt_sum;        // optimal LW of the full market per value vector
  Rat lw_pca_sub_a, lw_pca_sub_b;   // auction LW on the M_a / M_b submarkets
  Rat opt_sub_a, opt_sub_b;         // optimal LW on those submarkets
  bool gate_a = true, gate_b = true;  // epsilon gate of the half-LW theorem
  bool relation_pca_ok = false;     // lw_sum >= lw_pca_sub_a + lw_pca_sub_b
  bool relation_optimal_ok = false; // 2 (opt_sub_a + opt_sub_b) >= opt_sum
  bool lw_quarter_ok = false;       // 4 lw_sum >= opt_sum
  bool sw_half_ok = false;          // 2 sw_sum >= opt_sum
  bool wbb_ok = false;              // both runs: total payments >= total revenue

  bool gate_ok() const { return gate_a && gate_b; }
};

PairwiseReport pairwise_eval(const MarketInstance& instance, const std::vector<Rat>& rho_a,
                             const std::vector<Rat>& rho_b, const RunOptions& opts = {});

// Per-seller discrete distribution over positive rationals on the epsilon
// grid; drawn with a splittable deterministic generator.
struct DistributionSpec {
  struct PerSeller {
    std::vector<Rat> support;
    std::vector<long> weights;  // same length; positive
  };
  std::vector<PerSeller> sellers;

  static DistributionSpec uniform(int num_sellers, std::vector<Rat> support);
};

struct McTrial {
  std::vector<Rat> rho_a, rho_b;
  Rat lw_mech, sw_mech, lw_opt;  // per-trial averages over the two runs
};

struct McReport {
  long trials = 0;
  std::uint64_t seed = 0;
  Rat mean_lw_mech, mean_sw_mech, mean_lw_opt;
  Rat ratio_lw, ratio_sw;      // mean mech / mean opt
  double stderr_lw = 0.0;      // standard error of the per-trial LW ratio
  double stderr_sw = 0.0;
  std::vector<McTrial> per_trial;  // filled when keep_trials is set
};

McReport estimate_expectations(const MarketInstance& instance, const DistributionSpec& dist,
                               long trials, std::uint64_t seed, bool keep_trials = false,
                               const RunOptions& opts = {});

// Deterministic splittable generator used for draws.
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  long below(long n) { return static_cast<long>(next() % static_cast<std::uint64_t>(n)); }
};

// Utilities under true valuations. Payments never exceed budgets, so the
// buyer's utility is always the finite branch.
Rat buyer_utility(const MarketInstance& instance, const Allocation& alloc, int buyer);
Rat seller_utility(const MarketInstance& instance, const Allocation& alloc, int seller,
                   const Rat& true_value);

// f_j(E_j) of a raw instance seller.
Rat seller_capacity_total(const MarketInstance& instance, int seller);

}  // namespace clinch

#endif  // CLINCH_SINGLE_SAMPLE_HPP_
