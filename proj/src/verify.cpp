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

#include "clinch/verify.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

namespace clinch {

bool CheckReport::all_pass() const {
  for (const auto& c : checks)
    if (c.status == CheckResult::Status::Fail) return false;
  return true;
}

bool CheckReport::any_skipped() const {
  for (const auto& c : checks)
    if (c.status == CheckResult::Status::Skipped) return true;
  return false;
}

std::size_t CheckReport::failures() const {
  std::size_t n = 0;
  for (const auto& c : checks)
    if (c.status == CheckResult::Status::Fail) ++n;
  return n;
}

int CheckReport::exit_code() const {
  if (!all_pass()) return 1;
  return any_skipped() ? 2 : 0;
}

std::string CheckReport::first_failure() const {
  for (const auto& c : checks)
    if (c.status == CheckResult::Status::Fail) return c.name + ": " + c.witness;
  return "";
}

std::string CheckReport::to_json() const {
  nlohmann::ordered_json j;
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    nlohmann::ordered_json cj;
    cj["name"] = c.name;
    cj["status"] = c.status == CheckResult::Status::Pass   ? "pass"
                   : c.status == CheckResult::Status::Fail ? "fail"
                                                           : "skipped";
    if (!c.witness.empty()) cj["witness"] = c.witness;
    j["checks"].push_back(cj);
  }
  j["all_pass"] = all_pass();
  j["exit_code"] = exit_code();
  return j.dump(2) + "\n";
}

IterationProbe probe_state(const PreprocessedMarket& pm, const AuctionState& state,
                           const std::vector<Rat>& x_final, const OptAllocation& opt) {
  IterationProbe p;
  for (int i = 0; i < pm.num_buyers(); ++i) {
    if (state.demand[i].is_zero()) continue;
    p.active |= Mask{1} << i;
    if (x_final[i] <= opt.x_star[i]) p.underallocated |= Mask{1} << i;
    if (!pm.is_virtual_buyer(i)) {
      if (!p.min_real_clock || state.clock[i] < *p.min_real_clock)
        p.min_real_clock = state.clock[i];
    }
  }
  return p;
}

namespace {

std::string state_witness(int event_index, const std::string& detail) {
  return "event " + std::to_string(event_index) + ": " + detail;
}

// Epsilon gate of the half-LW guarantee.
bool epsilon_gate_ok(const PreprocessedMarket& pm) {
  if (pm.num_buyers() == 0) return true;
  Rat lo = pm.vmin(), hi = pm.vmax();
  if (lo == hi) return true;
  return pm.epsilon <= lo * lo / (hi - lo);
}

std::vector<Mask> sampled_subsets(Mask universe, int count, std::uint64_t salt) {
  std::vector<Mask> out;
  SplitMix64 rng(0x5eedba5eull ^ salt);
  for (int k = 0; k < count; ++k) out.push_back(static_cast<Mask>(rng.next()) & universe);
  return out;
}

// Tracks one named per-state condition: records only the first failure so a
// long trace yields one witness instead of thousands.
class Sticky {
 public:
  explicit Sticky(std::string name) : name_(std::move(name)) {}
  void observe(bool ok, int event_index, const std::string& detail) {
    if (!ok && !failed_) {
      failed_ = true;
      witness_ = state_witness(event_index, detail);
    }
  }
  void report(CheckReport& rep) const {
    if (failed_) rep.fail(name_, witness_);
    else rep.pass(name_);
  }

 private:
  std::string name_;
  bool failed_ = false;
  std::string witness_;
};

}  // namespace

CheckReport check_trace(const PreprocessedMarket& pm, const TraceLog& trace,
                        const AuctionState& final_state, const Allocation& alloc,
                        const OptAllocation& opt, int subset_guard) {
  CheckReport rep;
  const int n = pm.num_buyers();
  const Mask all = full_mask(n);
  auto gtab = buyer_rank_table(pm);
  const Rat total_supply = (*gtab)[all];
  const bool enumerate_all = n <= subset_guard;

  // The over-allocation facts and the running payment bound are proved by
  // drop-order arguments that need pairwise distinct valuations: with a tie,
  // the earlier-numbered buyer can leave at her clock with money unspent,
  // which is exactly the case those inductions exclude. The checks are
  // asserted only in the tie-free regime where the claims hold.
  bool distinct_vals = true;
  for (int a = 0; a < n && distinct_vals; ++a)
    for (int b = a + 1; b < n; ++b)
      if (pm.valuation[a] == pm.valuation[b]) {
        distinct_vals = false;
        break;
      }
  const char* tie_reason = "valuation tie between participants";

  // First replay: the final holdings x^f drive Y and the chain conditions.
  AuctionState replayed = AuctionState::initial(pm);
  for (const TraceEvent& ev : trace.events) replayed.apply(pm, ev);
  const std::vector<Rat> x_final = replayed.x;

  {
    bool same = replayed.clock == final_state.clock && replayed.w == final_state.w &&
                replayed.payment == final_state.payment &&
                replayed.revenue == final_state.revenue && replayed.x == final_state.x &&
                replayed.demand.size() == final_state.demand.size();
    for (std::size_t i = 0; same && i < replayed.demand.size(); ++i)
      same = replayed.demand[i] == final_state.demand[i];
    rep.require("replay_integrity", same, "replayed final state differs from the recorded one");
  }

  Sticky membership_ok("membership");
  Sticky budget_ok("budget_feasible");
  Sticky demand_ok("demand_consistent");
  Sticky sbb_ok("sbb");
  Sticky eq_ok("remnant_eq1_eq2");
  Sticky allgoods_ok("remnant_total");
  Sticky remaining_ok("remaining_goods");
  Sticky payment3_ok("payment_bound_iter");
  Sticky clinch_price_ok("clinch_price_bounds");
  Sticky clinch_total_ok("clinch_total_marginal");
  Sticky clinch_pay_ok("clinch_payment_consistent");
  Sticky clinch_noharm_ok("clinch_no_harm");
  Sticky nested_ok("clinch_nested_bound");

  // Drop bookkeeping for the tight-set chain.
  struct Drop {
    int buyer;
    Mask active_before;
    bool by_price;
  };
  std::vector<Drop> drops;

  AuctionState st = AuctionState::initial(pm);
  std::optional<RemnantEval> pre_eval;  // state before the current event
  EventKind last_kind = EventKind::Demand;
  int last_buyer = -1;

  // Round bookkeeping for the nested-pair lemma: clinch amounts since the
  // last price event, evaluated against the remnant rank at round start.
  std::optional<RemnantEval> round_eval;
  std::vector<Rat> round_amounts(n, Rat(0));
  bool round_open = false;

  auto close_round = [&](int event_index) {
    if (!round_open) return;
    Mask clinchers = 0;
    for (int i = 0; i < n; ++i)
      if (round_amounts[i].sign() > 0) clinchers |= Mask{1} << i;
    if (clinchers != 0) {
      std::vector<std::pair<Mask, Mask>> pairs;
      for (int i = 0; i < n; ++i) {
        pairs.push_back({0, Mask{1} << i});
        pairs.push_back({Mask{1} << i, all});
      }
      pairs.push_back({0, all});
      for (Mask s : sampled_subsets(all, 16, static_cast<std::uint64_t>(event_index)))
        for (Mask extra : sampled_subsets(all, 2, static_cast<std::uint64_t>(event_index) ^ s))
          pairs.push_back({s, s | extra});
      for (const auto& [s, t] : pairs) {
        if ((s & t) != s || s == t) continue;
        Rat lhs;
        for (int i = 0; i < n; ++i)
          if (has_bit(t & ~s, i)) lhs += round_amounts[i];
        Rat rhs = round_eval->rank(t) - round_eval->rank(s);
        nested_ok.observe(lhs <= rhs, event_index,
                          "round clinch total " + lhs.str() + " exceeds rank gap " + rhs.str());
      }
    }
    round_open = false;
    std::fill(round_amounts.begin(), round_amounts.end(), Rat(0));
  };

  for (int t = 0; t < static_cast<int>(trace.events.size()); ++t) {
    const TraceEvent& ev = trace.events[t];
    if (!pre_eval) pre_eval.emplace(gtab, st.x, st.demand);

    if (ev.kind == EventKind::Clinch) {
      if (!round_open) {
        round_open = true;
        round_eval.emplace(gtab, st.x, st.demand);
      }
      // Soundness of the clinch against the pre-state.
      Rat marginal_total = pre_eval->clinch_total(ev.buyer);
      clinch_total_ok.observe(ev.total_amount() == marginal_total, t,
                              "split sum " + ev.total_amount().str() + " vs remnant marginal " +
                                  marginal_total.str());
      clinch_pay_ok.observe(ev.payment_delta == ev.price * ev.total_amount(), t,
                            "payment delta off the clock price");
      clinch_price_ok.observe(ev.price == st.clock[ev.buyer], t, "clinch price is not the clock");
      clinch_price_ok.observe(ev.price < pm.bid[ev.buyer], t,
                              "clinch at or above the buyer's bid");
      if (!pm.is_virtual_buyer(ev.buyer)) {
        for (const auto& [e, amt] : ev.amounts) {
          if (amt.sign() <= 0) continue;
          const int j = pm.edges[e].seller;
          clinch_price_ok.observe(ev.price >= pm.bid[pm.num_real + j], t,
                                  "real trade below the seller-side bid at seller " +
                                      pm.sellers[j].id);
        }
      }
      round_amounts[ev.buyer] += ev.total_amount();
    }
    if (ev.kind == EventKind::Price) close_round(t);

    const AuctionState before = st;
    st.apply(pm, ev);

    // The "not affecting other buyers" condition: a clinch leaves the
    // remnant rank of every subset avoiding the clincher unchanged.
    RemnantEval post_eval(gtab, st.x, st.demand);
    if (ev.kind == EventKind::Clinch) {
      const Mask others = all & ~(Mask{1} << ev.buyer);
      std::vector<Mask> subsets;
      if (enumerate_all) {
        for_each_submask(others, [&](Mask s) { subsets.push_back(s); });
      } else {
        for (int b = 0; b < n; ++b)
          if (b != ev.buyer) subsets.push_back(Mask{1} << b);
        subsets.push_back(others);
        for (Mask s : sampled_subsets(others, 64, t)) subsets.push_back(s);
      }
      for (Mask s : subsets)
        clinch_noharm_ok.observe(pre_eval->rank(s) == post_eval.rank(s), t,
                                 "remnant rank changed on subset mask " + std::to_string(s));
    }

    // Per-state invariants.
    {
      bool ok = true;
      std::string detail;
      for (const auto& sv : pm.sellers) {
        const int deg = static_cast<int>(sv.edge_ids.size());
        std::vector<Rat> wsum(std::size_t{1} << deg);
        for (Mask a = 1; a < (Mask{1} << deg); ++a) {
          wsum[a] = wsum[a & (a - 1)] + st.w[sv.edge_ids[std::countr_zero(a)]];
          if (wsum[a] > sv.ftab[a]) {
            ok = false;
            detail = "transactions exceed capacity at seller " + sv.id;
          }
        }
      }
      membership_ok.observe(ok, t, detail);
    }
    for (int i = 0; i < n; ++i) {
      budget_ok.observe(ExtRat(st.payment[i]) <= pm.budget[i], t,
                        "payment of " + pm.buyer_ids[i] + " exceeds the budget");
      // A price or clinch event is followed by the refresh of that buyer's
      // demand as the next event; the schedule binds everyone else.
      if (ev.kind != EventKind::Demand && i == ev.buyer) continue;
      demand_ok.observe(st.demand[i] == demand_value(pm, i, st.clock[i], st.payment[i]), t,
                        "demand of " + pm.buyer_ids[i] + " off the (B-p)/c schedule");
    }
    {
      Rat pays, revs;
      for (const Rat& p : st.payment) pays += p;
      for (const Rat& r : st.revenue) revs += r;
      sbb_ok.observe(pays == revs, t,
                     "payments " + pays.str() + " != revenues " + revs.str());
    }

    // Remnant-rank identities and the link to the optimum. A clinch and its
    // demand refresh form one atomic step of the algorithm; the identities
    // bind at every state except the half-applied one in between.
    if (ev.kind == EventKind::Clinch) {
      last_kind = ev.kind;
      last_buyer = ev.buyer;
      pre_eval = std::move(post_eval);
      continue;
    }
    IterationProbe probe = probe_state(pm, st, x_final, opt);
    {
      std::vector<Mask> subsets;
      if (enumerate_all) {
        for_each_submask(all, [&](Mask s) { subsets.push_back(s); });
      } else {
        for (int b = 0; b < n; ++b) subsets.push_back(Mask{1} << b);
        subsets.push_back(all);
        for (Mask s : sampled_subsets(all, 64, t)) subsets.push_back(s);
      }
      for (Mask s : subsets)
        eq_ok.observe(post_eval.rank(s) == post_eval.rank_simple(s), t,
                      "double and single enumeration disagree on mask " + std::to_string(s));

      Rat xtotal;
      for (const Rat& xi : st.x) xtotal += xi;
      allgoods_ok.observe(post_eval.rank(all) == total_supply - xtotal, t,
                          "g_{x,d}(N) != g(N) - x(N)");

      for (Mask s : subsets) {
        Mask sx = s & probe.active;
        Rat gap;
        for (int i = 0; i < n; ++i)
          if (has_bit(sx, i)) gap += opt.x_star[i] - st.x[i];
        remaining_ok.observe(post_eval.rank(sx) >= gap, t,
                             "remnant short of the optimum on mask " + std::to_string(sx));
      }
    }

    // Payment lower bound, maintained throughout the auction.
    if (distinct_vals && probe.min_real_clock) {
      Rat lhs;
      for (int i = 0; i < n; ++i)
        if (has_bit(probe.active & ~probe.underallocated, i))
          lhs += replayed.payment[i] - st.payment[i];
      Rat rhs;
      for (int i = 0; i < n; ++i)
        if (has_bit(probe.underallocated, i))
          rhs += (pm.valuation[i] - pm.epsilon) * (opt.x_star[i] - x_final[i]);
      Rat slack = post_eval.rank(probe.active);
      for (int i = 0; i < n; ++i)
        if (has_bit(probe.underallocated, i)) slack += st.x[i] - opt.x_star[i];
      rhs += *probe.min_real_clock * slack;
      payment3_ok.observe(lhs >= rhs, t,
                          "future payments " + lhs.str() + " below the bound " + rhs.str());
    }

    // Drop detection: a demand that reaches zero.
    if (ev.kind == EventKind::Demand && !before.demand[ev.buyer].is_zero() &&
        st.demand[ev.buyer].is_zero()) {
      Mask active_before = 0;
      for (int i = 0; i < n; ++i)
        if (!before.demand[i].is_zero()) active_before |= Mask{1} << i;
      bool by_price = last_kind == EventKind::Price && last_buyer == ev.buyer;
      drops.push_back({ev.buyer, active_before, by_price});
    }

    last_kind = ev.kind;
    last_buyer = ev.buyer;
    pre_eval = std::move(post_eval);
  }
  close_round(static_cast<int>(trace.events.size()));

  membership_ok.report(rep);
  budget_ok.report(rep);
  demand_ok.report(rep);
  sbb_ok.report(rep);
  eq_ok.report(rep);
  allgoods_ok.report(rep);
  remaining_ok.report(rep);
  if (distinct_vals) payment3_ok.report(rep);
  else rep.skip("payment_bound_iter", tie_reason);
  clinch_price_ok.report(rep);
  clinch_total_ok.report(rep);
  clinch_pay_ok.report(rep);
  clinch_noharm_ok.report(rep);
  nested_ok.report(rep);

  // Finalization arithmetic.
  {
    bool ok = static_cast<int>(alloc.p_f.size()) == pm.num_real;
    for (int i = 0; ok && i < pm.num_real; ++i) ok = alloc.p_f[i] == replayed.payment[i];
    for (int j = 0; ok && j < pm.num_sellers; ++j)
      ok = alloc.r_f[j] == replayed.revenue[j] - replayed.payment[pm.num_real + j];
    rep.require("finalization", ok, "final allocation does not match the trace");
  }

  // Final allocation facts.
  {
    Rat xtotal;
    for (const Rat& xi : x_final) xtotal += xi;
    rep.require("final_tight", xtotal == total_supply,
                "x^f(N) = " + xtotal.str() + " vs f(E_N) = " + total_supply.str());
  }
  {
    bool ok = true;
    std::string detail;
    for (int i = 0; i < n && ok; ++i) {
      if (pm.valuation[i] * x_final[i] < replayed.payment[i]) {
        ok = false;
        detail = "buyer " + pm.buyer_ids[i];
      }
    }
    rep.require("ir_buyers", ok, detail);
  }
  if (!distinct_vals) {
    rep.skip("overallocation_at_budget_cap", tie_reason);
    rep.skip("virtual_within_optimum", tie_reason);
  } else {
    bool ok = true;
    std::string detail;
    for (int i = 0; i < n && ok; ++i) {
      if (x_final[i] > opt.x_star[i]) {
        ExtRat cap = pm.budget[i].div(pm.valuation[i]);
        if (ExtRat(opt.x_star[i]) != cap) {
          ok = false;
          detail = "buyer " + pm.buyer_ids[i] + " over-allocated without a binding budget";
        }
      }
    }
    rep.require("overallocation_at_budget_cap", ok, detail);

    ok = true;
    for (int i = pm.num_real; i < n; ++i)
      if (x_final[i] > opt.x_star[i]) ok = false;
    rep.require("virtual_within_optimum", ok, "a virtual buyer exceeds its optimal holding");
  }

  // Tight-set chain from the price-increase drops.
  {
    bool ok = true;
    std::string detail;
    Mask prev = 0;
    std::vector<const Drop*> price_drops;
    for (const Drop& d : drops)
      if (d.by_price) price_drops.push_back(&d);
    // Specified in reverse drop order; traverse from the last drop back.
    for (auto it = price_drops.rbegin(); it != price_drops.rend() && ok; ++it) {
      const Drop& d = **it;
      Mask xk = d.active_before;
      if ((xk & prev) != prev || xk == prev) {
        ok = false;
        detail = "chain is not strictly increasing";
        break;
      }
      if (!has_bit(xk & ~prev, d.buyer)) {
        ok = false;
        detail = "dropper outside its chain layer";
        break;
      }
      Rat xsum;
      for (int i = 0; i < n; ++i)
        if (has_bit(xk, i)) xsum += x_final[i];
      if (xsum != pm.g_buyers(xk)) {
        ok = false;
        detail = "chain set with mask " + std::to_string(xk) + " is not tight";
        break;
      }
      for (int i = 0; i < n; ++i) {
        if (!has_bit(xk & ~prev, i) || i == d.buyer) continue;
        // Buyers leaving between price drops exhausted their budgets.
        if (pm.valuation[i] < pm.valuation[d.buyer]) {
          ok = false;
          detail = "buyer " + pm.buyer_ids[i] + " dropped before a higher-valued layer";
          break;
        }
        if (ExtRat(replayed.payment[i]) != pm.budget[i]) {
          ok = false;
          detail = "buyer " + pm.buyer_ids[i] + " left the chain without exhausting the budget";
          break;
        }
      }
      prev = xk;
    }
    if (ok && n > 0 && prev != all) {
      ok = false;
      detail = "chain does not reach the full buyer set";
    }
    rep.require("tight_set_chain", ok, detail);
  }

  // Gated payment guarantees.
  const bool gate = epsilon_gate_ok(pm);
  if (!distinct_vals) {
    rep.skip("payment_theorem", tie_reason);
    rep.skip("optimum_scaled_by_epsilon", tie_reason);
  } else if (!gate) {
    rep.skip("payment_theorem", "epsilon exceeds vmin^2/(vmax - vmin)");
    rep.skip("optimum_scaled_by_epsilon", "epsilon exceeds vmin^2/(vmax - vmin)");
  } else {
    Rat lhs, rhs;
    for (int i = 0; i < n; ++i) {
      if (x_final[i] > opt.x_star[i]) {
        lhs += replayed.payment[i];
      } else {
        lhs += pm.valuation[i] * x_final[i];
        rhs += pm.valuation[i] * opt.x_star[i];
      }
    }
    rep.require("payment_theorem", lhs >= rhs,
                "payment lower bound " + lhs.str() + " < " + rhs.str());

    bool ok = true;
    std::string detail;
    const Rat vmin = pm.vmin();
    for (int i = 0; i < n && ok; ++i) {
      if (x_final[i] > opt.x_star[i]) {
        if ((vmin + pm.epsilon) * opt.x_star[i] - pm.epsilon * x_final[i] < Rat(0)) {
          ok = false;
          detail = "buyer " + pm.buyer_ids[i];
        }
      }
    }
    rep.require("optimum_scaled_by_epsilon", ok, detail);
  }

  return rep;
}

CheckReport check_efficiency(const MarketInstance& instance, const PcaResult& res,
                             const OptAllocation& opt) {
  CheckReport rep;
  std::vector<Rat> seller_vals;
  for (const Seller& s : instance.sellers) seller_vals.push_back(s.valuation);
  Rat lw = liquid_welfare(instance, res.alloc, seller_vals);
  Rat sw = social_welfare(instance, res.alloc, seller_vals);

  if (epsilon_gate_ok(res.pm)) {
    rep.require("lw_half_of_optimum", Rat(2) * lw >= opt.lw_opt,
                "2 LW = " + (Rat(2) * lw).str() + " < LW_OPT = " + opt.lw_opt.str());
  } else {
    rep.skip("lw_half_of_optimum", "epsilon exceeds vmin^2/(vmax - vmin)");
  }
  rep.require("sw_at_least_optimal_lw", sw >= opt.lw_opt,
              "SW = " + sw.str() + " < LW_OPT = " + opt.lw_opt.str());
  return rep;
}

CheckReport check_dsic(const MarketInstance& instance, const Rat& grid_step, MechanismKind kind,
                       const RunOptions& opts) {
  CheckReport rep;
  const Rat eps = effective_epsilon(instance, std::nullopt);
  if (!(grid_step / eps).is_integer())
    throw ContractViolation("check_dsic: grid step must be a multiple of epsilon");

  MarketInstance truthful = instance;
  for (Buyer& b : truthful.buyers) b.bid = b.valuation;
  for (Seller& s : truthful.sellers) s.bid = s.valuation;

  Rat vmax;
  for (const Buyer& b : truthful.buyers) vmax = max(vmax, b.valuation);
  for (const Seller& s : truthful.sellers) vmax = max(vmax, s.valuation);
  std::vector<Rat> grid;
  for (Rat b = grid_step; b <= Rat(2) * vmax; b += grid_step) grid.push_back(b);

  auto samples_of = [&](const MarketInstance& inst) {
    std::vector<Rat> s;
    for (const Seller& sl : inst.sellers) {
      if (!sl.sample) throw ContractViolation("check_dsic: single-sample run without samples");
      s.push_back(*sl.sample);
    }
    return s;
  };

  RunOptions inner = opts;
  inner.record_trace = false;  // only the allocations feed the comparison
  auto run_alloc = [&](const MarketInstance& inst) {
    if (kind == MechanismKind::Pca)
      return run_pca(preprocess(inst, SellerValueChannel::Bids,
                                effective_epsilon(truthful, std::nullopt)),
                     inner)
          .alloc;
    return run_mechanism(inst, samples_of(inst), inner).alloc;
  };

  Allocation truthful_alloc = run_alloc(truthful);

  bool buyers_ok = true;
  std::string buyer_witness;
  for (std::size_t i = 0; i < truthful.buyers.size() && buyers_ok; ++i) {
    Rat u_truth = buyer_utility(truthful, truthful_alloc, static_cast<int>(i));
    for (const Rat& b : grid) {
      MarketInstance dev = truthful;
      dev.buyers[i].bid = b;
      Rat u_dev = buyer_utility(truthful, run_alloc(dev), static_cast<int>(i));
      if (u_dev > u_truth) {
        buyers_ok = false;
        buyer_witness = "buyer " + truthful.buyers[i].id + " gains " + (u_dev - u_truth).str() +
                        " bidding " + b.str();
        break;
      }
    }
  }
  rep.require("dsic_buyers", buyers_ok, buyer_witness);

  if (kind == MechanismKind::SingleSample) {
    bool sellers_ok = true;
    std::string seller_witness;
    for (std::size_t j = 0; j < truthful.sellers.size() && sellers_ok; ++j) {
      Rat u_truth =
          seller_utility(truthful, truthful_alloc, static_cast<int>(j), truthful.sellers[j].valuation);
      for (const Rat& b : grid) {
        MarketInstance dev = truthful;
        dev.sellers[j].bid = b;
        Rat u_dev = seller_utility(truthful, run_alloc(dev), static_cast<int>(j),
                                   truthful.sellers[j].valuation);
        if (u_dev > u_truth) {
          sellers_ok = false;
          seller_witness = "seller " + truthful.sellers[j].id + " gains " +
                           (u_dev - u_truth).str() + " bidding " + b.str();
          break;
        }
      }
    }
    rep.require("dsic_sellers", sellers_ok, seller_witness);
  }
  return rep;
}

namespace {

MarketInstance tight_example_instance() {
  MarketInstance inst;
  inst.epsilon = Rat(1, 2);
  inst.buyers.push_back({"b1", Rat(3, 2), Rat(3, 2), ExtRat::infinity()});
  inst.buyers.push_back({"b2", Rat(3), Rat(3), ExtRat(Rat(1))});
  Seller s;
  s.id = "s1";
  s.valuation = Rat(1);
  s.bid = Rat(1);
  s.capacity.kind = CapacitySpec::Kind::Rank;
  s.capacity.unit = Rat(1);
  s.capacity.cap = Rat(1);
  inst.sellers.push_back(s);
  inst.edges = {{0, 0}, {1, 0}};
  return inst;
}

MarketInstance sample_example_instance(Rat k, Rat delta) {
  MarketInstance inst;
  inst.epsilon = delta;
  inst.buyers.push_back({"b1", Rat(1), Rat(1), ExtRat::infinity()});
  inst.buyers.push_back({"b2", k, k, ExtRat(Rat(1))});
  Seller s;
  s.id = "s1";
  s.valuation = delta;
  s.bid = delta;
  s.capacity.kind = CapacitySpec::Kind::Rank;
  s.capacity.unit = Rat(1);
  s.capacity.cap = Rat(1);
  inst.sellers.push_back(s);
  inst.edges = {{0, 0}, {1, 0}};
  return inst;
}

}  // namespace

CheckReport reproduce_examples(const RunOptions& opts) {
  CheckReport rep;

  // Two buyers, one unit: the LW guarantee and its epsilon condition are
  // tight. Closed forms: LW = v_min, OPT = v_min + (v_min+eps)(1 - v_min/v_max).
  {
    MarketInstance inst = tight_example_instance();
    auto pm = preprocess(inst, SellerValueChannel::Bids);
    auto res = run_pca(pm, opts);
    auto opt = optimal_lw_allocation(pm);
    std::vector<Rat> vals = {inst.sellers[0].valuation};
    Rat lw = liquid_welfare(inst, res.alloc, vals);
    rep.require("tight_example_lw", lw == Rat(1), "LW = " + lw.str());
    rep.require("tight_example_opt", opt.lw_opt == Rat(2), "LW_OPT = " + opt.lw_opt.str());
    rep.require("tight_example_equality", Rat(2) * lw == opt.lw_opt,
                "2 LW != LW_OPT at the boundary epsilon");
    rep.require("tight_example_winner", res.final_state.x[1] == Rat(1) &&
                                            res.alloc.p_f[1] == Rat(1),
                "buyer 2 should win the unit paying 1");
  }

  // Two-point single-sample market at k = 100, delta = 1/1000.
  {
    const Rat k(100), delta(1, 1000);
    MarketInstance inst = sample_example_instance(k, delta);
    std::vector<Rat> lo = {delta}, hi = {Rat(2) * delta};
    PairwiseReport pw = pairwise_eval(inst, lo, hi, opts);
    rep.require("sample_example_lw_sum", pw.lw_sum == Rat(501, 500),
                "lw_sum = " + pw.lw_sum.str());
    rep.require("sample_example_opt_sum", pw.opt_sum == Rat(398, 100),
                "opt_sum = " + pw.opt_sum.str());
    rep.require("sample_example_quarter", Rat(4) * pw.lw_sum >= pw.opt_sum, "1/4 bound fails");
    rep.require("sample_example_sw_sum", pw.sw_sum == k + Rat(2) * delta,
                "sw_sum = " + pw.sw_sum.str());
    rep.require("sample_example_half_sw", Rat(2) * pw.sw_sum >= pw.opt_sum, "1/2 bound fails");

    // Seller paid her sample for the sold unit in the kept case.
    MarketInstance vals_lo = inst;
    vals_lo.sellers[0].valuation = delta;
    vals_lo.sellers[0].bid = delta;
    MechanismResult kept = run_mechanism(vals_lo, hi, opts);
    rep.require("sample_example_revenue", kept.alloc.r_f[0] == Rat(2) * delta,
                "r^f = " + kept.alloc.r_f[0].str());

    const Rat k2(2), delta2(1, 100);
    MarketInstance inst2 = sample_example_instance(k2, delta2);
    PairwiseReport pw2 =
        pairwise_eval(inst2, {delta2}, {Rat(2) * delta2}, opts);
    rep.require("sample_example_sw_sum_k2", pw2.sw_sum == k2 + Rat(2) * delta2,
                "sw_sum = " + pw2.sw_sum.str());
    rep.require("sample_example_sw_ratio_tightens",
                pw2.sw_sum * pw.opt_sum <= pw.sw_sum * pw2.opt_sum &&
                    Rat(2) * pw2.sw_sum >= pw2.opt_sum,
                "SW ratio does not tighten toward 1/2 as k decreases");
  }
  return rep;
}

}  // namespace clinch
