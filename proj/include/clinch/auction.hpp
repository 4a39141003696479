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

#ifndef CLINCH_AUCTION_HPP_
#define CLINCH_AUCTION_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "clinch/market.hpp"
#include "clinch/remnant.hpp"

namespace clinch {

enum class EventKind { Clinch, Price, Demand };

// One elementary state change. Events are self-contained: replaying them
// from the initial state reproduces the final state exactly.
struct TraceEvent {
  int seq = 0;
  EventKind kind = EventKind::Price;
  int buyer = -1;
  // Clinch
  Rat price;                                 // buyer's clock at clinch time
  std::vector<std::pair<int, Rat>> amounts;  // (global edge, amount), all > 0
  Rat payment_delta;                         // price * total amount
  // Price
  Rat new_clock;
  // Demand
  ExtRat new_demand;

  Rat total_amount() const {
    Rat t;
    for (const auto& [e, a] : amounts) t += a;
    return t;
  }
};

struct TraceLog {
  std::vector<TraceEvent> events;
  void append(TraceEvent ev) {
    ev.seq = static_cast<int>(events.size());
    events.push_back(std::move(ev));
  }
};

// Price clocks, demands, cumulative transactions, payments, and revenues of
// a running auction over the preprocessed market.
struct AuctionState {
  std::vector<Rat> clock;      // per buyer
  std::vector<ExtRat> demand;  // per buyer
  std::vector<Rat> w;          // per edge
  std::vector<Rat> payment;    // per buyer
  std::vector<Rat> revenue;    // per seller
  std::vector<Rat> x;          // per buyer, x_i = w(E_i)
  int cursor = 0;              // round-robin position (buyer index)

  static AuctionState initial(const PreprocessedMarket& pm);
  void apply(const PreprocessedMarket& pm, const TraceEvent& ev);
  std::uint64_t digest() const;
};

// Demand at the given clock/payment point: infinity at clock 0, (B - p)/c
// while the clock is below the bid, and 0 once it reaches it.
ExtRat demand_value(const PreprocessedMarket& pm, int buyer, const Rat& clock, const Rat& paid);

// Final allocation on the raw two-sided market (virtual transactions
// cancelled).
struct Allocation {
  std::vector<Rat> w_f;     // per raw edge, instance edge order
  std::vector<Rat> p_f;     // per real buyer
  std::vector<Rat> r_f;     // per seller
  std::vector<Rat> x_real;  // goods received per real buyer
  std::vector<Rat> unsold;  // goods kept per seller
};

struct RunStats {
  long iterations = 0;
  long price_events = 0;
  long clinch_events = 0;
  long validated_clinches = 0;
};

struct RunOptions {
  bool record_trace = true;
  // Re-derive every clinch two ways and fail hard on disagreement.
  bool validate_clinches = true;
};

struct PcaResult {
  PreprocessedMarket pm;
  AuctionState final_state;  // before virtual transactions are cancelled
  Allocation alloc;
  TraceLog trace;
  RunStats stats;
};

// Runs the full ascending-clock auction: clinch, bump the cursor buyer's
// clock by epsilon, refresh her demand, advance the cursor, until every
// demand is zero.
PcaResult run_pca(const PreprocessedMarket& pm, const RunOptions& opts = {});

// Single steps, exposed for tests and the harness. Both mutate the state in
// place and append events to `trace` when it is non-null.
void clinch_round(AuctionState& state, const PreprocessedMarket& pm, TraceLog* trace = nullptr,
                  RunStats* stats = nullptr, const RunOptions& opts = {});
void advance_clock(AuctionState& state, const PreprocessedMarket& pm, TraceLog* trace = nullptr,
                   RunStats* stats = nullptr);

// Final allocation per Algorithm 1's last line: r^f_j = r_j - p_{n+j}, the
// transaction vector restricted to real edges.
Allocation finalize_allocation(const AuctionState& state, const PreprocessedMarket& pm);

// Shared 2^n table of g(S) = f(E_S) over buyer masks.
std::shared_ptr<const std::vector<Rat>> buyer_rank_table(const PreprocessedMarket& pm);

// Two-sided welfare of a final allocation, with the sellers' goods valued at
// `seller_values` (true per-unit valuations).
Rat liquid_welfare(const MarketInstance& instance, const Allocation& alloc,
                   const std::vector<Rat>& seller_values);
Rat social_welfare(const MarketInstance& instance, const Allocation& alloc,
                   const std::vector<Rat>& seller_values);

// Serializes a trace as line-delimited JSON, one event (or clinch edge) per
// line, with a post-event state digest.
std::string export_trace(const PreprocessedMarket& pm, const TraceLog& trace);

}  // namespace clinch

#endif  // CLINCH_AUCTION_HPP_
