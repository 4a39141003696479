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

#ifndef CLINCH_VERIFY_HPP_
#define CLINCH_VERIFY_HPP_

#include <optional>
#include <string>
#include <vector>

#include "clinch/auction.hpp"
#include "clinch/optlw.hpp"
#include "clinch/single_sample.hpp"

namespace clinch {

struct CheckResult {
  std::string name;
  enum class Status { Pass, Fail, Skipped } status = Status::Pass;
  std::string witness;  // replayable detail for failures, reason for skips
};

struct CheckReport {
  std::vector<CheckResult> checks;

  void pass(const std::string& name) { checks.push_back({name, CheckResult::Status::Pass, ""}); }
  void fail(const std::string& name, const std::string& witness) {
    checks.push_back({name, CheckResult::Status::Fail, witness});
  }
  void skip(const std::string& name, const std::string& why) {
    checks.push_back({name, CheckResult::Status::Skipped, why});
  }
  void require(const std::string& name, bool ok, const std::string& witness = "") {
    if (ok) pass(name);
    else fail(name, witness);
  }
  void merge(const CheckReport& other) {
    checks.insert(checks.end(), other.checks.begin(), other.checks.end());
  }

  bool all_pass() const;
  bool any_skipped() const;
  std::size_t failures() const;
  // 0: all pass; 1: any failure; 2: all pass but a gate was skipped.
  int exit_code() const;
  std::string to_json() const;  // stable key order
  std::string first_failure() const;
};

// Per-state derived sets of the efficiency analysis.
struct IterationProbe {
  Mask active = 0;          // X = {i : d_i > 0}
  Mask underallocated = 0;  // Y = {i in X : x^f_i <= x*_i}
  std::optional<Rat> min_real_clock;  // min clock over non-virtual actives
};

IterationProbe probe_state(const PreprocessedMarket& pm, const AuctionState& state,
                           const std::vector<Rat>& x_final, const OptAllocation& opt);

// Replays the trace and asserts every per-iteration and final invariant of
// the auction against the optimal allocation: remnant-rank identities, SBB,
// budget feasibility, clinch soundness, the tight-set chain, and the payment
// lower bound. Subset-quantified checks enumerate fully up to
// `subset_guard` buyers and fall back to sampling above it.
CheckReport check_trace(const PreprocessedMarket& pm, const TraceLog& trace,
                        const AuctionState& final_state, const Allocation& alloc,
                        const OptAllocation& opt, int subset_guard = 10);

// Efficiency guarantees of a finished run: 2 LW >= LW_OPT under the epsilon
// gate, SW >= LW_OPT unconditionally.
CheckReport check_efficiency(const MarketInstance& instance, const PcaResult& res,
                             const OptAllocation& opt);

enum class MechanismKind { Pca, SingleSample };

// Truthfulness sweep: every buyer (and every seller under the single-sample
// mechanism) compares the truthful utility with every bid on the grid
// {grid_step, 2 grid_step, ...} up to twice the largest valuation.
CheckReport check_dsic(const MarketInstance& instance, const Rat& grid_step, MechanismKind kind,
                       const RunOptions& opts = {});

// Pins both worked examples to their closed-form values.
CheckReport reproduce_examples(const RunOptions& opts = {});

}  // namespace clinch

#endif  // CLINCH_VERIFY_HPP_
