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

#include <doctest.h>
#include <json.hpp>

#include "clinch/auction.hpp"
#include "clinch/optlw.hpp"
#include "helpers.hpp"

using namespace clinch;
using namespace clinch::testing;

TEST_CASE("tight-LW instance: buyer 2 wins the unit at the seller's value") {
  auto inst = tight_lw_instance();
  auto pm = preprocess(inst, SellerValueChannel::Bids);
  auto res = run_pca(pm);

  // Final holdings over the preprocessed market.
  CHECK(res.final_state.x[1] == Rat(1));
  CHECK(res.final_state.x[0] == Rat(0));
  CHECK(res.final_state.x[2] == Rat(0));
  CHECK(res.final_state.payment[1] == Rat(1));

  CHECK(res.alloc.p_f[1] == Rat(1));
  CHECK(res.alloc.r_f[0] == Rat(1));
  CHECK(res.alloc.unsold[0] == Rat(0));

  std::vector<Rat> seller_vals = {inst.sellers[0].valuation};
  CHECK(liquid_welfare(inst, res.alloc, seller_vals) == Rat(1));

  auto opt = optimal_lw_allocation(pm);
  CHECK(Rat(2) * liquid_welfare(inst, res.alloc, seller_vals) == opt.lw_opt);
}

TEST_CASE("single buyer with deep pockets pays the seller's ask") {
  // The buyer receives the unit at the clock value where the virtual buyer
  // drops out, i.e. the seller's bid.
  MarketInstance inst;
  inst.epsilon = Rat(1);
  inst.buyers.push_back(buyer("b", Rat(10), ExtRat::infinity()));
  inst.sellers.push_back(rank1_seller("s", Rat(3)));
  inst.edges = {{0, 0}};
  auto pm = preprocess(inst, SellerValueChannel::Bids);
  auto res = run_pca(pm);
  CHECK(res.final_state.x[0] == Rat(1));
  CHECK(res.alloc.p_f[0] == Rat(3));
  CHECK(res.alloc.p_f[0] <= inst.buyers[0].bid);
  CHECK(res.alloc.r_f[0] == Rat(3));
}

TEST_CASE("budgeted buyer clinches progressively, virtual buyer takes the slack") {
  MarketInstance inst;
  inst.epsilon = Rat(1);
  inst.buyers.push_back(buyer("b", Rat(10), ExtRat(Rat(1))));
  inst.sellers.push_back(rank1_seller("s", Rat(3)));
  inst.edges = {{0, 0}};
  auto pm = preprocess(inst, SellerValueChannel::Bids);
  auto res = run_pca(pm);
  CHECK(res.final_state.x[0] == Rat(1, 3));
  CHECK(res.final_state.x[1] == Rat(2, 3));  // virtual buyer = unsold goods
  CHECK(res.alloc.p_f[0] == Rat(1));         // budget exhausted
  CHECK(res.alloc.unsold[0] == Rat(2, 3));
  // Seller nets her valuation on the sold third.
  CHECK(res.alloc.r_f[0] == Rat(1));
  // Everything was allocated in the preprocessed market.
  Rat total = res.final_state.x[0] + res.final_state.x[1];
  CHECK(total == pm.g_buyers(0b11));
}

TEST_CASE("no trade when buyers bid below the seller") {
  MarketInstance inst;
  inst.epsilon = Rat(1);
  inst.buyers.push_back(buyer("b1", Rat(1), ExtRat(Rat(5))));
  inst.buyers.push_back(buyer("b2", Rat(2), ExtRat(Rat(5))));
  inst.sellers.push_back(rank1_seller("s", Rat(7)));
  inst.edges = {{0, 0}, {1, 0}};
  auto pm = preprocess(inst, SellerValueChannel::Bids);
  auto res = run_pca(pm);
  for (const Rat& wf : res.alloc.w_f) CHECK(wf == Rat(0));
  for (const Rat& p : res.alloc.p_f) CHECK(p == Rat(0));
  CHECK(res.alloc.r_f[0] == Rat(0));
  CHECK(res.alloc.unsold[0] == Rat(1));
  // The virtual buyer absorbed the whole supply.
  CHECK(res.final_state.x[2] == Rat(1));
}

TEST_CASE("clinch_round honors demands") {
  auto inst = tight_lw_instance();
  auto pm = preprocess(inst, SellerValueChannel::Bids);

  SUBCASE("zero demands clinch nothing") {
    AuctionState st = AuctionState::initial(pm);
    for (auto& d : st.demand) d = ExtRat(Rat(0));
    AuctionState before = st;
    clinch_round(st, pm);
    CHECK(st.x == before.x);
    CHECK(st.payment == before.payment);
  }
  SUBCASE("symmetric infinite contention clinches nothing") {
    AuctionState st = AuctionState::initial(pm);
    clinch_round(st, pm);
    for (const Rat& xi : st.x) CHECK(xi == Rat(0));
  }
  SUBCASE("a lone positive demand takes everything it can afford") {
    AuctionState st = AuctionState::initial(pm);
    st.clock = {Rat(1), Rat(1), Rat(1)};
    st.demand = {ExtRat(Rat(0)), ExtRat(Rat(1)), ExtRat(Rat(0))};
    TraceLog trace;
    clinch_round(st, pm, &trace);
    CHECK(st.x[1] == Rat(1));
    CHECK(st.payment[1] == Rat(1));
    CHECK(st.demand[1] == ExtRat(Rat(0)));  // refreshed after the clinch
    // One clinch event followed by one demand event.
    REQUIRE(trace.events.size() == 2);
    CHECK(trace.events[0].kind == EventKind::Clinch);
    CHECK(trace.events[1].kind == EventKind::Demand);
  }
}

TEST_CASE("advance_clock follows the price/demand/cursor schedule") {
  auto inst = tight_lw_instance();
  auto pm = preprocess(inst, SellerValueChannel::Bids);
  AuctionState st = AuctionState::initial(pm);

  advance_clock(st, pm);
  CHECK(st.clock[0] == Rat(1, 2));
  CHECK(st.demand[0].is_inf());  // infinite budget
  CHECK(st.cursor == 1);

  advance_clock(st, pm);
  CHECK(st.clock[1] == Rat(1, 2));
  CHECK(st.demand[1] == ExtRat(Rat(2)));  // (B - p)/c = 1 / (1/2)
  CHECK(st.cursor == 2);

  advance_clock(st, pm);
  CHECK(st.demand[2].is_inf());  // virtual: infinite budget, clock below bid
  CHECK(st.cursor == 0);

  // Drop at the bid.
  st.clock[1] = inst.buyers[1].bid - pm.epsilon;
  st.cursor = 1;
  advance_clock(st, pm);
  CHECK(st.clock[1] == inst.buyers[1].bid);
  CHECK(st.demand[1] == ExtRat(Rat(0)));
}

TEST_CASE("SBB, budget feasibility, and IR hold on the trace") {
  auto inst = tight_lw_instance();
  auto pm = preprocess(inst, SellerValueChannel::Bids);
  auto res = run_pca(pm);

  AuctionState st = AuctionState::initial(pm);
  for (const TraceEvent& ev : res.trace.events) {
    st.apply(pm, ev);
    Rat pays, revs;
    for (const Rat& p : st.payment) pays += p;
    for (const Rat& r : st.revenue) revs += r;
    CHECK(pays == revs);
    for (int i = 0; i < pm.num_buyers(); ++i) CHECK(ExtRat(st.payment[i]) <= pm.budget[i]);
  }
  // Replay reproduces the final state exactly.
  CHECK(st.digest() == res.final_state.digest());
  CHECK(st.w == res.final_state.w);
  CHECK(st.payment == res.final_state.payment);

  for (int i = 0; i < pm.num_buyers(); ++i)
    CHECK(pm.valuation[i] * res.final_state.x[i] >= res.final_state.payment[i]);
}

TEST_CASE("runs are deterministic") {
  auto inst = tight_lw_instance();
  auto pm = preprocess(inst, SellerValueChannel::Bids);
  auto r1 = run_pca(pm);
  auto r2 = run_pca(pm);
  CHECK(r1.final_state.digest() == r2.final_state.digest());
  CHECK(r1.trace.events.size() == r2.trace.events.size());
  CHECK(export_trace(pm, r1.trace) == export_trace(pm, r2.trace));
}

TEST_CASE("degenerate markets run to completion") {
  SUBCASE("no buyers: every seller keeps her goods") {
    MarketInstance inst;
    inst.epsilon = Rat(1);
    inst.sellers.push_back(rank1_seller("s", Rat(2)));
    // A seller needs an incident buyer edge to be valid, so give her one
    // buyer who bids below her.
    inst.buyers.push_back(buyer("b", Rat(1), ExtRat(Rat(0))));
    inst.edges = {{0, 0}};
    auto pm = preprocess(inst, SellerValueChannel::Bids);
    auto res = run_pca(pm);
    CHECK(res.alloc.unsold[0] == Rat(1));
    CHECK(res.alloc.p_f[0] == Rat(0));
  }
  SUBCASE("empty market") {
    MarketInstance inst;
    inst.epsilon = Rat(1);
    auto pm = preprocess(inst, SellerValueChannel::Bids);
    auto res = run_pca(pm);
    CHECK(res.trace.events.empty());
    auto opt = optimal_lw_allocation(pm);
    CHECK(opt.lw_opt == Rat(0));
  }
}

TEST_CASE("zero-capacity sellers are inert") {
  MarketInstance inst;
  inst.epsilon = Rat(1);
  inst.buyers.push_back(buyer("b", Rat(2), ExtRat(Rat(1))));
  inst.sellers.push_back(rank1_seller("s", Rat(1), Rat(0)));
  inst.edges = {{0, 0}};
  CHECK(validate(inst).ok());
  auto pm = preprocess(inst, SellerValueChannel::Bids);
  auto res = run_pca(pm);
  CHECK(res.alloc.p_f[0] == Rat(0));
  CHECK(res.alloc.unsold[0] == Rat(0));
}

TEST_CASE("trace export is line-delimited JSON with digests") {
  auto inst = tight_lw_instance();
  auto pm = preprocess(inst, SellerValueChannel::Bids);
  auto res = run_pca(pm);
  std::string nd = export_trace(pm, res.trace);
  CHECK(nd.find("\"kind\":\"clinch\"") != std::string::npos);
  CHECK(nd.find("\"kind\":\"price\"") != std::string::npos);
  CHECK(nd.find("snapshot_digest") != std::string::npos);
  // Every line parses as JSON.
  std::size_t lines = 0, pos = 0;
  while (pos < nd.size()) {
    std::size_t nl = nd.find('\n', pos);
    REQUIRE(nl != std::string::npos);
    auto parsed = nlohmann::json::parse(nd.substr(pos, nl - pos), nullptr, false);
    CHECK_FALSE(parsed.is_discarded());
    pos = nl + 1;
    ++lines;
  }
  std::size_t expected = 0;
  for (const TraceEvent& ev : res.trace.events)
    expected += ev.kind == EventKind::Clinch ? ev.amounts.size() : 1;
  CHECK(lines == expected);
}
