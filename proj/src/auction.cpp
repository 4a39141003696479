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

#include "clinch/auction.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

#include <json.hpp>

namespace clinch {

AuctionState AuctionState::initial(const PreprocessedMarket& pm) {
  AuctionState st;
  const int n = pm.num_buyers();
  st.clock.assign(n, Rat());
  st.demand.assign(n, ExtRat::infinity());
  st.w.assign(pm.num_edges(), Rat());
  st.payment.assign(n, Rat());
  st.revenue.assign(pm.num_sellers, Rat());
  st.x.assign(n, Rat());
  st.cursor = 0;
  return st;
}

void AuctionState::apply(const PreprocessedMarket& pm, const TraceEvent& ev) {
  if (ev.buyer < 0 || ev.buyer >= pm.num_buyers())
    throw ContractViolation("trace event references an unknown buyer");
  switch (ev.kind) {
    case EventKind::Price:
      clock[ev.buyer] = ev.new_clock;
      cursor = (ev.buyer + 1) % pm.num_buyers();
      break;
    case EventKind::Demand:
      demand[ev.buyer] = ev.new_demand;
      break;
    case EventKind::Clinch:
      for (const auto& [e, amt] : ev.amounts) {
        if (e < 0 || e >= pm.num_edges())
          throw ContractViolation("trace event references an unknown edge");
        w[e] += amt;
        x[ev.buyer] += amt;
        revenue[pm.edges[e].seller] += ev.price * amt;
      }
      payment[ev.buyer] += ev.payment_delta;
      break;
  }
}

std::uint64_t AuctionState::digest() const {
  std::string s;
  auto feed = [&s](const std::string& part) {
    s += part;
    s += ';';
  };
  for (const Rat& c : clock) feed(c.str());
  for (const ExtRat& d : demand) feed(d.str());
  for (const Rat& we : w) feed(we.str());
  for (const Rat& p : payment) feed(p.str());
  for (const Rat& r : revenue) feed(r.str());
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

ExtRat demand_value(const PreprocessedMarket& pm, int buyer, const Rat& clock, const Rat& paid) {
  if (clock.is_zero()) return ExtRat::infinity();
  if (clock < pm.bid[buyer]) return pm.budget[buyer].minus(paid).div(clock);
  return ExtRat(Rat(0));
}

std::shared_ptr<const std::vector<Rat>> buyer_rank_table(const PreprocessedMarket& pm) {
  const int n = pm.num_buyers();
  if (n > kEnumGuard) throw EnumerationRefused("buyer_rank_table: buyer set exceeds guard");
  auto tab = std::make_shared<std::vector<Rat>>(std::size_t{1} << n);
  for (Mask m = 0; m < (Mask{1} << n); ++m) (*tab)[m] = pm.g_buyers(m);
  return tab;
}

namespace {

// Per-edge decomposition of a clinch. The rank of the clinching polytope is
// re-derived from the remnant supply polytope: capacities contracted by the
// transactions so far, the clinching buyer's edge set restricted to a
// prefix, everyone's demands as caps.
class SplitContext {
 public:
  SplitContext(const AuctionState& st, const PreprocessedMarket& pm)
      : pm_(pm), n_(pm.num_buyers()), m_(pm.num_sellers) {
    const std::size_t size = std::size_t{1} << n_;
    dfin_.resize(size);
    dinf_.assign(size, 0);
    for (Mask m = 1; m < size; ++m) {
      int low = std::countr_zero(m);
      Mask rest = m & (m - 1);
      if (st.demand[low].is_inf() || dinf_[rest]) {
        dinf_[m] = 1;
      } else {
        dfin_[m] = dfin_[rest] + st.demand[low].finite();
      }
    }
    con_.resize(m_);
    for (int j = 0; j < m_; ++j) {
      const auto& sv = pm.sellers[j];
      const int deg = static_cast<int>(sv.edge_ids.size());
      const std::size_t lsize = std::size_t{1} << deg;
      std::vector<Rat> wsum(lsize);
      con_[j].resize(lsize);
      for (Mask a = 1; a < lsize; ++a)
        wsum[a] = wsum[a & (a - 1)] + st.w[sv.edge_ids[std::countr_zero(a)]];
      for (Mask a = 0; a < lsize; ++a) con_[j][a] = sv.ftab[a] - wsum[a];
      for (int b = 0; b < deg; ++b) {
        const Mask bit = Mask{1} << b;
        for (Mask a = 0; a < lsize; ++a)
          if (!(a & bit) && con_[j][a | bit] < con_[j][a]) con_[j][a] = con_[j][a | bit];
      }
    }
  }

  // Remnant rank over buyer set S; buyer `restricted` contributes only the
  // per-seller local edge masks in `override_local` (empty span: no
  // restriction applies because the buyer is outside S).
  Rat rank(Mask S, int restricted, std::span<const Mask> override_local) const {
    std::optional<Rat> best;
    std::vector<Mask> lm(m_);
    for_each_submask(S, [&](Mask sp) {
      if (dinf_[S & ~sp]) return;
      std::fill(lm.begin(), lm.end(), 0);
      for (int b = 0; b < n_; ++b) {
        if (!has_bit(sp, b)) continue;
        if (b == restricted) {
          for (int j = 0; j < m_; ++j) lm[j] |= override_local[j];
        } else {
          for (int e : pm_.buyer_edges[b])
            lm[pm_.edge_pos[e].first] |= Mask{1} << pm_.edge_pos[e].second;
        }
      }
      Rat cand = dfin_[S & ~sp];
      for (int j = 0; j < m_; ++j) cand += con_[j][lm[j]];
      if (!best || cand < *best) best = cand;
    });
    return *best;
  }

 private:
  const PreprocessedMarket& pm_;
  int n_, m_;
  std::vector<std::vector<Rat>> con_;  // per seller: superset-min of ftab - w
  std::vector<Rat> dfin_;
  std::vector<char> dinf_;
};

std::vector<std::pair<int, Rat>> edge_split(const AuctionState& st, const PreprocessedMarket& pm,
                                            int buyer, const Rat& total) {
  SplitContext sc(st, pm);
  const Mask all = full_mask(pm.num_buyers());
  const Mask without = all & ~(Mask{1} << buyer);
  const Rat base_rest = sc.rank(without, -1, {});

  std::vector<Mask> prefix(pm.num_sellers, 0);
  Rat h_prev = sc.rank(all, buyer, prefix) - base_rest;
  if (!h_prev.is_zero())
    throw InternalError("edge split: h(empty) = " + h_prev.str() + " for buyer " +
                        pm.buyer_ids[buyer]);

  std::vector<std::pair<int, Rat>> out;
  for (int e : pm.buyer_edges[buyer]) {
    prefix[pm.edge_pos[e].first] |= Mask{1} << pm.edge_pos[e].second;
    Rat h_cur = sc.rank(all, buyer, prefix) - base_rest;
    Rat delta = h_cur - h_prev;
    if (delta.sign() < 0)
      throw InternalError("edge split: negative increment on edge " + std::to_string(e));
    if (delta.sign() > 0) out.emplace_back(e, delta);
    h_prev = h_cur;
  }
  if (h_prev != total)
    throw InternalError("edge split: per-edge sum " + h_prev.str() +
                        " differs from clinch total " + total.str() + " for buyer " +
                        pm.buyer_ids[buyer]);
  return out;
}

void check_polymatroid_feasible(const AuctionState& st, const PreprocessedMarket& pm) {
  for (const auto& sv : pm.sellers) {
    const int deg = static_cast<int>(sv.edge_ids.size());
    const std::size_t lsize = std::size_t{1} << deg;
    std::vector<Rat> wsum(lsize);
    for (Mask a = 1; a < lsize; ++a) {
      wsum[a] = wsum[a & (a - 1)] + st.w[sv.edge_ids[std::countr_zero(a)]];
      if (wsum[a] > sv.ftab[a])
        throw InternalError("clinch left transactions outside the polymatroid at seller " + sv.id);
    }
  }
}

// Subsets on which the "not affecting other buyers" condition is re-checked.
std::vector<Mask> no_harm_subsets(int n, int buyer) {
  const Mask others = full_mask(n) & ~(Mask{1} << buyer);
  std::vector<Mask> out;
  if (n <= 10) {
    for_each_submask(others, [&](Mask s) { out.push_back(s); });
    return out;
  }
  // Sampling compromise above the enumeration bound: singletons, the full
  // complement, and 64 deterministic pseudo-random subsets.
  for (int b = 0; b < n; ++b)
    if (b != buyer) out.push_back(Mask{1} << b);
  out.push_back(others);
  std::uint64_t s = 0x9e3779b97f4a7c15ull ^ (static_cast<std::uint64_t>(buyer) << 32);
  for (int k = 0; k < 64; ++k) {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    out.push_back(static_cast<Mask>(s) & others);
  }
  return out;
}

void clinch_round_impl(AuctionState& state, const PreprocessedMarket& pm,
                       std::shared_ptr<const std::vector<Rat>> gtab, TraceLog* trace,
                       RunStats* stats, const RunOptions& opts) {
  const int n = pm.num_buyers();
  if (n == 0) return;

  // Supply exhausted: no buyer can clinch and every demand refresh is a
  // no-op, so the whole pass is skipped.
  Rat allocated;
  for (const Rat& xi : state.x) allocated += xi;
  if (allocated == (*gtab)[full_mask(n)]) return;

  std::optional<RemnantEval> eval;
  for (int i = 0; i < n; ++i) {
    if (!eval) eval.emplace(gtab, state.x, state.demand);
    Rat total = eval->clinch_total(i);
    if (total.sign() < 0)
      throw InternalError("clinch total negative for buyer " + pm.buyer_ids[i]);
    if (total.is_zero()) continue;  // the demand refresh below would be a no-op

    TraceEvent ce;
    ce.kind = EventKind::Clinch;
    ce.buyer = i;
    ce.price = state.clock[i];
    ce.amounts = edge_split(state, pm, i, total);
    ce.payment_delta = ce.price * total;
    state.apply(pm, ce);
    if (trace) trace->append(ce);
    if (stats) ++stats->clinch_events;

    TraceEvent de;
    de.kind = EventKind::Demand;
    de.buyer = i;
    de.new_demand = demand_value(pm, i, state.clock[i], state.payment[i]);
    state.apply(pm, de);
    if (trace) trace->append(de);

    RemnantEval after(gtab, state.x, state.demand);
    if (opts.validate_clinches) {
      check_polymatroid_feasible(state, pm);
      for (Mask s : no_harm_subsets(n, i)) {
        if (eval->rank(s) != after.rank(s))
          throw InternalError("clinch of buyer " + pm.buyer_ids[i] +
                              " changed the remnant rank of other buyers (subset mask " +
                              std::to_string(s) + ")");
      }
      if (stats) ++stats->validated_clinches;
    }
    eval = std::move(after);
  }
}

}  // namespace

void clinch_round(AuctionState& state, const PreprocessedMarket& pm, TraceLog* trace,
                  RunStats* stats, const RunOptions& opts) {
  clinch_round_impl(state, pm, buyer_rank_table(pm), trace, stats, opts);
}

void advance_clock(AuctionState& state, const PreprocessedMarket& pm, TraceLog* trace,
                   RunStats* stats) {
  const int l = state.cursor;
  TraceEvent pe;
  pe.kind = EventKind::Price;
  pe.buyer = l;
  pe.new_clock = state.clock[l] + pm.epsilon;
  state.apply(pm, pe);
  if (trace) trace->append(pe);
  if (stats) ++stats->price_events;

  TraceEvent de;
  de.kind = EventKind::Demand;
  de.buyer = l;
  de.new_demand = demand_value(pm, l, state.clock[l], state.payment[l]);
  state.apply(pm, de);
  if (trace) trace->append(de);
}

Allocation finalize_allocation(const AuctionState& state, const PreprocessedMarket& pm) {
  Allocation a;
  const int raw_edges = pm.num_edges() - pm.num_sellers;
  a.w_f.assign(state.w.begin(), state.w.begin() + raw_edges);
  a.p_f.assign(state.payment.begin(), state.payment.begin() + pm.num_real);
  a.x_real.assign(state.x.begin(), state.x.begin() + pm.num_real);
  a.r_f.resize(pm.num_sellers);
  a.unsold.resize(pm.num_sellers);
  for (int j = 0; j < pm.num_sellers; ++j) {
    a.r_f[j] = state.revenue[j] - state.payment[pm.num_real + j];
    Rat sold;
    for (int e : pm.sellers[j].edge_ids)
      if (!pm.edges[e].is_virtual) sold += state.w[e];
    a.unsold[j] = pm.sellers[j].total - sold;
  }
  return a;
}

PcaResult run_pca(const PreprocessedMarket& pm, const RunOptions& opts) {
  PcaResult res;
  res.pm = pm;
  AuctionState st = AuctionState::initial(pm);
  auto gtab = buyer_rank_table(pm);
  TraceLog* trace = opts.record_trace ? &res.trace : nullptr;

  long max_bumps = 0;
  for (const Rat& b : pm.bid) max_bumps = std::max(max_bumps, Rat::ceil_ratio(b, pm.epsilon));
  const long guard = static_cast<long>(pm.num_buyers()) * (max_bumps + 2);

  auto active = [&] {
    for (const ExtRat& d : st.demand)
      if (!d.is_zero()) return true;
    return false;
  };
  while (pm.num_buyers() > 0 && active()) {
    ++res.stats.iterations;
    clinch_round_impl(st, pm, gtab, trace, &res.stats, opts);
    advance_clock(st, pm, trace, &res.stats);
    if (res.stats.price_events > guard)
      throw InternalError("auction failed to terminate within the clock-event bound");
  }
  res.final_state = st;
  res.alloc = finalize_allocation(st, pm);
  return res;
}

Rat liquid_welfare(const MarketInstance& instance, const Allocation& alloc,
                   const std::vector<Rat>& seller_values) {
  Rat s;
  for (std::size_t i = 0; i < instance.buyers.size(); ++i)
    s += cap_by(instance.buyers[i].valuation * alloc.x_real[i], instance.buyers[i].budget);
  for (std::size_t j = 0; j < instance.sellers.size(); ++j)
    s += seller_values[j] * alloc.unsold[j];
  return s;
}

Rat social_welfare(const MarketInstance& instance, const Allocation& alloc,
                   const std::vector<Rat>& seller_values) {
  Rat s;
  for (std::size_t i = 0; i < instance.buyers.size(); ++i)
    s += instance.buyers[i].valuation * alloc.x_real[i];
  for (std::size_t j = 0; j < instance.sellers.size(); ++j)
    s += seller_values[j] * alloc.unsold[j];
  return s;
}

std::string export_trace(const PreprocessedMarket& pm, const TraceLog& trace) {
  std::ostringstream out;
  AuctionState st = AuctionState::initial(pm);
  for (const TraceEvent& ev : trace.events) {
    st.apply(pm, ev);
    char digest[32];
    std::snprintf(digest, sizeof digest, "%016llx",
                  static_cast<unsigned long long>(st.digest()));
    auto line = [&](nlohmann::ordered_json j) {
      j["snapshot_digest"] = digest;
      out << j.dump() << "\n";
    };
    switch (ev.kind) {
      case EventKind::Price:
        line({{"seq", ev.seq}, {"kind", "price"}, {"buyer", pm.buyer_ids[ev.buyer]},
              {"clock", ev.new_clock.str()}});
        break;
      case EventKind::Demand:
        line({{"seq", ev.seq}, {"kind", "demand"}, {"buyer", pm.buyer_ids[ev.buyer]},
              {"amount", ev.new_demand.str()}});
        break;
      case EventKind::Clinch:
        for (const auto& [e, amt] : ev.amounts) {
          const auto& edge = pm.edges[e];
          line({{"seq", ev.seq},
                {"kind", "clinch"},
                {"buyer", pm.buyer_ids[ev.buyer]},
                {"edge", nlohmann::ordered_json::array(
                             {pm.buyer_ids[edge.buyer], pm.sellers[edge.seller].id})},
                {"amount", amt.str()},
                {"clock", ev.price.str()}});
        }
        break;
    }
  }
  return out.str();
}

}  // namespace clinch
