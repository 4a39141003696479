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

#include "clinch/single_sample.hpp"

#include <cmath>

#include "clinch/optlw.hpp"

namespace clinch {

namespace {

void check_seller_vector(const MarketInstance& instance, const std::vector<Rat>& v,
                         const char* what) {
  if (v.size() != instance.sellers.size())
    throw ContractViolation(std::string(what) + ": expected one value per seller");
  for (const Rat& r : v)
    if (r.sign() <= 0) throw ContractViolation(std::string(what) + ": values must be positive");
}

MarketInstance with_seller_values(const MarketInstance& instance, const std::vector<Rat>& rho) {
  MarketInstance out = instance;
  for (std::size_t j = 0; j < out.sellers.size(); ++j) {
    out.sellers[j].valuation = rho[j];
    out.sellers[j].bid = rho[j];
  }
  return out;
}

// Epsilon gate of the half-LW guarantee for a preprocessed market.
bool epsilon_gate(const PreprocessedMarket& pm) {
  if (pm.num_buyers() == 0) return true;
  Rat lo = pm.vmin(), hi = pm.vmax();
  if (lo == hi) return true;
  return pm.epsilon <= lo * lo / (hi - lo);
}

}  // namespace

Rat seller_capacity_total(const MarketInstance& instance, int seller) {
  const Seller& s = instance.sellers[seller];
  const int deg = static_cast<int>(instance.seller_edge_ids(seller).size());
  switch (s.capacity.kind) {
    case CapacitySpec::Kind::Rank:
      return min(s.capacity.unit * Rat(deg), s.capacity.cap);
    case CapacitySpec::Kind::Additive: {
      Rat t;
      for (const Rat& c : s.capacity.caps) t += c;
      return t;
    }
    case CapacitySpec::Kind::Table:
      return s.capacity.table.at((std::size_t{1} << deg) - 1);
  }
  return Rat(0);
}

MechanismResult run_mechanism(const MarketInstance& instance, const std::vector<Rat>& samples,
                              const RunOptions& opts) {
  check_seller_vector(instance, samples, "run_mechanism samples");
  MechanismResult res;
  const int m = static_cast<int>(instance.sellers.size());
  res.kept.assign(m, 0);
  for (int j = 0; j < m; ++j) res.kept[j] = samples[j] >= instance.sellers[j].bid ? 1 : 0;

  MarketInstance sampled = instance;
  for (int j = 0; j < m; ++j) sampled.sellers[j].sample = samples[j];
  res.sub = submarket(sampled, res.kept);
  res.inner = run_pca(preprocess(res.sub, SellerValueChannel::Samples,
                                 effective_epsilon(sampled, std::nullopt)),
                      opts);

  // Lift to the full market: excluded sellers keep all their goods and earn
  // nothing; kept sellers are paid the sample per unit sold.
  Allocation& a = res.alloc;
  a.p_f = res.inner.alloc.p_f;
  a.x_real = res.inner.alloc.x_real;
  a.w_f.assign(instance.edges.size(), Rat(0));
  a.r_f.assign(m, Rat(0));
  a.unsold.assign(m, Rat(0));
  std::size_t sub_e = 0;
  for (std::size_t e = 0; e < instance.edges.size(); ++e) {
    if (res.kept[instance.edges[e].second]) a.w_f[e] = res.inner.alloc.w_f[sub_e++];
  }
  int sub_j = 0;
  for (int j = 0; j < m; ++j) {
    if (res.kept[j]) {
      Rat sold = seller_capacity_total(res.sub, sub_j) - res.inner.alloc.unsold[sub_j];
      a.r_f[j] = samples[j] * sold;
      a.unsold[j] = res.inner.alloc.unsold[sub_j];
      ++sub_j;
    } else {
      a.unsold[j] = seller_capacity_total(instance, j);
    }
  }
  return res;
}

PairwiseReport pairwise_eval(const MarketInstance& instance, const std::vector<Rat>& rho_a,
                             const std::vector<Rat>& rho_b, const RunOptions& opts) {
  check_seller_vector(instance, rho_a, "pairwise_eval rho_a");
  check_seller_vector(instance, rho_b, "pairwise_eval rho_b");
  PairwiseReport rep;

  MarketInstance inst_a = with_seller_values(instance, rho_a);
  MarketInstance inst_b = with_seller_values(instance, rho_b);

  // Only the allocations feed the report; skip trace recording.
  RunOptions inner = opts;
  inner.record_trace = false;

  MechanismResult run1 = run_mechanism(inst_a, rho_b, inner);  // values a, samples b
  MechanismResult run2 = run_mechanism(inst_b, rho_a, inner);  // values b, samples a

  rep.lw_run1 = liquid_welfare(inst_a, run1.alloc, rho_a);
  rep.lw_run2 = liquid_welfare(inst_b, run2.alloc, rho_b);
  rep.sw_run1 = social_welfare(inst_a, run1.alloc, rho_a);
  rep.sw_run2 = social_welfare(inst_b, run2.alloc, rho_b);
  rep.lw_sum = rep.lw_run1 + rep.lw_run2;
  rep.sw_sum = rep.sw_run1 + rep.sw_run2;

  rep.opt_a = optimal_lw_allocation(preprocess(inst_a, SellerValueChannel::Bids)).lw_opt;
  rep.opt_b = optimal_lw_allocation(preprocess(inst_b, SellerValueChannel::Bids)).lw_opt;
  rep.opt_sum = rep.opt_a + rep.opt_b;

  // Submarket decomposition: M_a = {j : a_j >= b_j} is exactly the kept set
  // of run 2 (ties in both), and run 2's auction is the auction on
  // (N, M_a, rho_a|M_a); symmetrically for M_b.
  std::vector<Rat> vals_sub_a, vals_sub_b;
  for (std::size_t j = 0; j < instance.sellers.size(); ++j) {
    if (run2.kept[j]) vals_sub_a.push_back(rho_a[j]);
    if (run1.kept[j]) vals_sub_b.push_back(rho_b[j]);
  }
  rep.lw_pca_sub_a = liquid_welfare(run2.sub, run2.inner.alloc, vals_sub_a);
  rep.lw_pca_sub_b = liquid_welfare(run1.sub, run1.inner.alloc, vals_sub_b);

  MarketInstance sub_a = submarket(inst_a, run2.kept);
  MarketInstance sub_b = submarket(inst_b, run1.kept);
  auto pm_sub_a = preprocess(sub_a, SellerValueChannel::Bids,
                             effective_epsilon(instance, std::nullopt));
  auto pm_sub_b = preprocess(sub_b, SellerValueChannel::Bids,
                             effective_epsilon(instance, std::nullopt));
  rep.opt_sub_a = optimal_lw_allocation(pm_sub_a).lw_opt;
  rep.opt_sub_b = optimal_lw_allocation(pm_sub_b).lw_opt;
  rep.gate_a = epsilon_gate(pm_sub_a);
  rep.gate_b = epsilon_gate(pm_sub_b);

  rep.relation_pca_ok = rep.lw_sum >= rep.lw_pca_sub_a + rep.lw_pca_sub_b;
  rep.relation_optimal_ok = Rat(2) * (rep.opt_sub_a + rep.opt_sub_b) >= rep.opt_sum;
  rep.lw_quarter_ok = Rat(4) * rep.lw_sum >= rep.opt_sum;
  rep.sw_half_ok = Rat(2) * rep.sw_sum >= rep.opt_sum;

  auto wbb = [](const MechanismResult& r) {
    Rat pays, revs;
    for (const Rat& p : r.alloc.p_f) pays += p;
    for (const Rat& v : r.alloc.r_f) revs += v;
    return pays >= revs;
  };
  rep.wbb_ok = wbb(run1) && wbb(run2);
  return rep;
}

DistributionSpec DistributionSpec::uniform(int num_sellers, std::vector<Rat> support) {
  DistributionSpec spec;
  PerSeller per;
  per.support = std::move(support);
  per.weights.assign(per.support.size(), 1);
  spec.sellers.assign(num_sellers, per);
  return spec;
}

namespace {

Rat draw(const DistributionSpec::PerSeller& d, SplitMix64& rng) {
  long total = 0;
  for (long w : d.weights) total += w;
  long t = rng.below(total);
  for (std::size_t i = 0; i < d.support.size(); ++i) {
    t -= d.weights[i];
    if (t < 0) return d.support[i];
  }
  return d.support.back();
}

}  // namespace

McReport estimate_expectations(const MarketInstance& instance, const DistributionSpec& dist,
                               long trials, std::uint64_t seed, bool keep_trials,
                               const RunOptions& opts) {
  if (trials < 1) throw ContractViolation("estimate_expectations: trials must be >= 1");
  if (dist.sellers.size() != instance.sellers.size())
    throw ContractViolation("estimate_expectations: distribution arity mismatch");
  McReport rep;
  rep.trials = trials;
  rep.seed = seed;
  SplitMix64 rng(seed);

  std::vector<Rat> lw_vals, sw_vals, opt_vals;
  lw_vals.reserve(trials);
  Rat lw_total, sw_total, opt_total;
  for (long t = 0; t < trials; ++t) {
    McTrial trial;
    for (const auto& d : dist.sellers) trial.rho_a.push_back(draw(d, rng));
    for (const auto& d : dist.sellers) trial.rho_b.push_back(draw(d, rng));
    PairwiseReport pw = pairwise_eval(instance, trial.rho_a, trial.rho_b, opts);
    const Rat half(1, 2);
    trial.lw_mech = pw.lw_sum * half;
    trial.sw_mech = pw.sw_sum * half;
    trial.lw_opt = pw.opt_sum * half;
    lw_total += trial.lw_mech;
    sw_total += trial.sw_mech;
    opt_total += trial.lw_opt;
    lw_vals.push_back(trial.lw_mech);
    sw_vals.push_back(trial.sw_mech);
    opt_vals.push_back(trial.lw_opt);
    if (keep_trials) rep.per_trial.push_back(std::move(trial));
  }
  const Rat n(trials);
  rep.mean_lw_mech = lw_total / n;
  rep.mean_sw_mech = sw_total / n;
  rep.mean_lw_opt = opt_total / n;
  if (rep.mean_lw_opt.sign() > 0) {
    rep.ratio_lw = rep.mean_lw_mech / rep.mean_lw_opt;
    rep.ratio_sw = rep.mean_sw_mech / rep.mean_lw_opt;
  }

  // Standard error of the per-trial means, in ratio units (divided by the
  // mean optimal LW). With one trial the spread is undefined; report 0.
  auto stderr_ratio = [&](const std::vector<Rat>& vals, const Rat& mean) {
    if (trials < 2 || rep.mean_lw_opt.sign() == 0) return 0.0;
    double acc = 0;
    for (const Rat& v : vals) {
      double dv = (v - mean).to_double();
      acc += dv * dv;
    }
    double sd = std::sqrt(acc / (static_cast<double>(trials) * (trials - 1)));
    return sd / rep.mean_lw_opt.to_double();
  };
  rep.stderr_lw = stderr_ratio(lw_vals, rep.mean_lw_mech);
  rep.stderr_sw = stderr_ratio(sw_vals, rep.mean_sw_mech);
  return rep;
}

Rat buyer_utility(const MarketInstance& instance, const Allocation& alloc, int buyer) {
  if (ExtRat(alloc.p_f[buyer]) > instance.buyers[buyer].budget)
    throw InternalError("buyer_utility: payment exceeds budget");
  return instance.buyers[buyer].valuation * alloc.x_real[buyer] - alloc.p_f[buyer];
}

Rat seller_utility(const MarketInstance& instance, const Allocation& alloc, int seller,
                   const Rat& true_value) {
  Rat sold = seller_capacity_total(instance, seller) - alloc.unsold[seller];
  return alloc.r_f[seller] - true_value * sold;
}

}  // namespace clinch
