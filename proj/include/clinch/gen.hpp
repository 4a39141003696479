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

#ifndef CLINCH_GEN_HPP_
#define CLINCH_GEN_HPP_

#include <cstdint>

#include "clinch/market.hpp"

namespace clinch {

// Knobs for random market generation. Values and bids land on the
// {1..max_value} * base grid; epsilon is derived so that it divides every
// bid and satisfies the efficiency-gate bound.
struct GenParams {
  int buyers = 3;
  int sellers = 2;
  long max_value = 5;
  Rat base = Rat(1);
  bool table_capacities_only = false;
  bool allow_zero_capacity = false;
  bool with_samples = true;
  bool allow_infinite_budget = true;
  // Draw pairwise distinct valuations across all participants (requires
  // max_value >= buyers + sellers).
  bool distinct_values = false;
};

// Deterministic per seed; the result always passes validate().
MarketInstance generate_instance(const GenParams& params, std::uint64_t seed);

}  // namespace clinch

#endif  // CLINCH_GEN_HPP_
