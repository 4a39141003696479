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

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "clinch/gen.hpp"
#include "clinch/optlw.hpp"
#include "clinch/verify.hpp"

namespace {

using Json = nlohmann::ordered_json;
using namespace clinch;

constexpr int kExitUsage = 64;
constexpr int kExitValidation = 65;

int ground_guard() {
  if (const char* env = std::getenv("CLINCH_MAX_GROUND")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 16;
}

void emit(const std::string& text, const std::string& output_path) {
  if (output_path.empty() || output_path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(output_path);
  if (!out) throw std::runtime_error("cannot write to '" + output_path + "'");
  out << text;
}

std::optional<Rat> parse_eps(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return Rat::from_string(s);
}

MarketInstance load_validated(const std::string& path) {
  MarketInstance inst = load_instance_file(path);
  auto rep = validate(inst, ground_guard());
  for (const std::string& w : rep.warnings) std::cerr << "warning: " << w << "\n";
  if (!rep.ok()) {
    std::cerr << "validation failed: " << rep.summary() << "\n";
    std::exit(kExitValidation);
  }
  return inst;
}

void check_market_size(const PreprocessedMarket& pm) {
  if (pm.num_buyers() > ground_guard())
    throw EnumerationRefused("preprocessed market has " + std::to_string(pm.num_buyers()) +
                             " buyers, above the guard (" + std::to_string(ground_guard()) +
                             "); raise CLINCH_MAX_GROUND to proceed");
}

Json allocation_json(const MarketInstance& inst, const PcaResult& res,
                     const OptAllocation& opt) {
  std::vector<Rat> vals;
  for (const Seller& s : inst.sellers) vals.push_back(s.valuation);
  Rat lw = liquid_welfare(inst, res.alloc, vals);
  Rat sw = social_welfare(inst, res.alloc, vals);
  Json j;
  j["epsilon"] = res.pm.epsilon.str();
  j["lw_pca"] = lw.str();
  j["lw_opt"] = opt.lw_opt.str();
  j["sw_pca"] = sw.str();
  j["ratio_lw"] = opt.lw_opt.sign() > 0 ? (lw / opt.lw_opt).str() : "1";
  j["buyers"] = Json::array();
  for (std::size_t i = 0; i < inst.buyers.size(); ++i) {
    j["buyers"].push_back(Json{{"id", inst.buyers[i].id},
                               {"goods", res.alloc.x_real[i].str()},
                               {"payment", res.alloc.p_f[i].str()}});
  }
  j["sellers"] = Json::array();
  for (std::size_t s = 0; s < inst.sellers.size(); ++s) {
    j["sellers"].push_back(Json{{"id", inst.sellers[s].id},
                                {"revenue", res.alloc.r_f[s].str()},
                                {"unsold", res.alloc.unsold[s].str()}});
  }
  j["iterations"] = res.stats.iterations;
  j["clinches"] = res.stats.clinch_events;
  return j;
}

std::string tsv_row(std::initializer_list<std::string> cells) {
  std::string row;
  for (const auto& c : cells) {
    if (!row.empty()) row += '\t';
    row += c;
  }
  return row + "\n";
}

int cmd_run(const std::string& instance_path, const std::string& eps_str,
            const std::string& output, const std::string& trace_path,
            const std::string& format) {
  MarketInstance inst = load_validated(instance_path);
  auto pm = preprocess(inst, SellerValueChannel::Bids, parse_eps(eps_str));
  check_market_size(pm);
  auto res = run_pca(pm);
  auto opt = optimal_lw_allocation(pm, ground_guard());
  if (format == "tsv") {
    std::vector<Rat> vals;
    for (const Seller& s : inst.sellers) vals.push_back(s.valuation);
    Rat lw = liquid_welfare(inst, res.alloc, vals);
    Rat sw = social_welfare(inst, res.alloc, vals);
    std::string rl = opt.lw_opt.sign() > 0 ? (lw / opt.lw_opt).str() : "1";
    std::string rs = opt.lw_opt.sign() > 0 ? (sw / opt.lw_opt).str() : "1";
    emit(tsv_row({"lw_pca", "lw_opt", "sw_pca", "ratio_lw", "ratio_sw"}) +
             tsv_row({lw.str(), opt.lw_opt.str(), sw.str(), rl, rs}),
         output);
  } else {
    emit(allocation_json(inst, res, opt).dump(2) + "\n", output);
  }
  if (!trace_path.empty()) emit(export_trace(pm, res.trace), trace_path);
  return 0;
}

int cmd_opt(const std::string& instance_path, const std::string& eps_str,
            const std::string& output) {
  MarketInstance inst = load_validated(instance_path);
  auto pm = preprocess(inst, SellerValueChannel::Bids, parse_eps(eps_str));
  check_market_size(pm);
  auto opt = optimal_lw_allocation(pm, ground_guard());
  Json j;
  j["lw_opt"] = opt.lw_opt.str();
  j["allocation"] = Json::array();
  for (int i = 0; i < pm.num_buyers(); ++i)
    j["allocation"].push_back(Json{{"id", pm.buyer_ids[i]}, {"goods", opt.x_star[i].str()}});
  emit(j.dump(2) + "\n", output);
  return 0;
}

int cmd_single_sample(const std::string& instance_path, const std::string& output,
                      long trials, std::uint64_t seed, const std::string& support_str,
                      bool per_trial) {
  MarketInstance inst = load_validated(instance_path);

  if (trials > 0) {
    // Monte Carlo estimation over a shared two-point-or-more support.
    std::vector<Rat> support;
    std::stringstream ss(support_str);
    std::string tok;
    while (std::getline(ss, tok, ',')) support.push_back(Rat::from_string(tok));
    if (support.empty()) {
      std::cerr << "--support is required with --trials\n";
      return kExitUsage;
    }
    auto dist = DistributionSpec::uniform(static_cast<int>(inst.sellers.size()), support);
    auto rep = estimate_expectations(inst, dist, trials, seed, per_trial);
    Json j;
    j["trials"] = rep.trials;
    j["seed"] = rep.seed;
    j["mean_lw_mech"] = rep.mean_lw_mech.str();
    j["mean_sw_mech"] = rep.mean_sw_mech.str();
    j["mean_lw_opt"] = rep.mean_lw_opt.str();
    j["ratio_lw"] = rep.ratio_lw.str();
    j["ratio_sw"] = rep.ratio_sw.str();
    j["stderr_lw"] = rep.stderr_lw;
    j["stderr_sw"] = rep.stderr_sw;
    if (per_trial) {
      j["per_trial"] = Json::array();
      for (const auto& t : rep.per_trial) {
        Json tj;
        tj["rho_a"] = Json::array();
        for (const Rat& v : t.rho_a) tj["rho_a"].push_back(v.str());
        tj["rho_b"] = Json::array();
        for (const Rat& v : t.rho_b) tj["rho_b"].push_back(v.str());
        tj["lw_mech"] = t.lw_mech.str();
        tj["sw_mech"] = t.sw_mech.str();
        tj["lw_opt"] = t.lw_opt.str();
        j["per_trial"].push_back(tj);
      }
    }
    emit(j.dump(2) + "\n", output);
    return 0;
  }

  std::vector<Rat> samples;
  for (const Seller& s : inst.sellers) {
    if (!s.sample) {
      std::cerr << "instance has no samples; provide them or use --trials\n";
      return kExitValidation;
    }
    samples.push_back(*s.sample);
  }
  auto res = run_mechanism(inst, samples);
  std::vector<Rat> vals;
  for (const Seller& s : inst.sellers) vals.push_back(s.valuation);
  Json j;
  j["kept_sellers"] = Json::array();
  for (std::size_t s = 0; s < inst.sellers.size(); ++s)
    if (res.kept[s]) j["kept_sellers"].push_back(inst.sellers[s].id);
  j["lw"] = liquid_welfare(inst, res.alloc, vals).str();
  j["sw"] = social_welfare(inst, res.alloc, vals).str();
  j["buyers"] = Json::array();
  for (std::size_t i = 0; i < inst.buyers.size(); ++i)
    j["buyers"].push_back(Json{{"id", inst.buyers[i].id},
                               {"goods", res.alloc.x_real[i].str()},
                               {"payment", res.alloc.p_f[i].str()}});
  j["sellers"] = Json::array();
  for (std::size_t s = 0; s < inst.sellers.size(); ++s)
    j["sellers"].push_back(Json{{"id", inst.sellers[s].id},
                                {"revenue", res.alloc.r_f[s].str()},
                                {"unsold", res.alloc.unsold[s].str()}});
  emit(j.dump(2) + "\n", output);
  return 0;
}

int cmd_verify(const std::string& instance_path, const std::string& eps_str,
               const std::string& grid_str, bool dsic, const std::string& output) {
  MarketInstance inst = load_validated(instance_path);
  auto pm = preprocess(inst, SellerValueChannel::Bids, parse_eps(eps_str));
  check_market_size(pm);
  auto res = run_pca(pm);
  auto opt = optimal_lw_allocation(pm, ground_guard());
  CheckReport rep = check_trace(pm, res.trace, res.final_state, res.alloc, opt);
  rep.merge(check_efficiency(inst, res, opt));
  if (dsic) {
    Rat step = grid_str.empty() ? pm.epsilon : Rat::from_string(grid_str);
    rep.merge(check_dsic(inst, step, MechanismKind::Pca));
    bool has_samples = true;
    for (const Seller& s : inst.sellers) has_samples = has_samples && s.sample.has_value();
    if (has_samples && !inst.sellers.empty())
      rep.merge(check_dsic(inst, step, MechanismKind::SingleSample));
  }
  emit(rep.to_json(), output);
  return rep.exit_code();
}

int cmd_gen(int buyers, int sellers, std::uint64_t seed, long max_value, bool table_only,
            bool allow_zero, const std::string& output) {
  GenParams params;
  params.buyers = buyers;
  params.sellers = sellers;
  params.max_value = max_value;
  params.table_capacities_only = table_only;
  params.allow_zero_capacity = allow_zero;
  MarketInstance inst = generate_instance(params, seed);
  emit(serialize_instance(inst), output);
  return 0;
}

int cmd_reproduce(const std::string& output) {
  CheckReport rep = reproduce_examples();
  emit(rep.to_json(), output);
  return rep.exit_code();
}

int cmd_sweep(int count, std::uint64_t seed, int buyers, int sellers, const std::string& format,
              const std::string& output) {
  GenParams params;
  params.buyers = buyers;
  params.sellers = sellers;
  std::string text;
  Json rows = Json::array();
  if (format == "tsv")
    text += tsv_row({"seed", "lw_pca", "lw_opt", "sw_pca", "ratio_lw", "ratio_sw"});
  for (int k = 0; k < count; ++k) {
    std::uint64_t s = seed + static_cast<std::uint64_t>(k);
    MarketInstance inst = generate_instance(params, s);
    auto pm = preprocess(inst, SellerValueChannel::Bids);
    auto res = run_pca(pm);
    auto opt = optimal_lw_allocation(pm, ground_guard());
    std::vector<Rat> vals;
    for (const Seller& sl : inst.sellers) vals.push_back(sl.valuation);
    Rat lw = liquid_welfare(inst, res.alloc, vals);
    Rat sw = social_welfare(inst, res.alloc, vals);
    std::string rl = opt.lw_opt.sign() > 0 ? (lw / opt.lw_opt).str() : "1";
    std::string rs = opt.lw_opt.sign() > 0 ? (sw / opt.lw_opt).str() : "1";
    if (format == "tsv") {
      text += tsv_row({std::to_string(s), lw.str(), opt.lw_opt.str(), sw.str(), rl, rs});
    } else {
      rows.push_back(Json{{"seed", s},
                          {"lw_pca", lw.str()},
                          {"lw_opt", opt.lw_opt.str()},
                          {"sw_pca", sw.str()},
                          {"ratio_lw", rl},
                          {"ratio_sw", rs}});
    }
  }
  if (format != "tsv") text = rows.dump(2) + "\n";
  emit(text, output);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polyhedral clinching auctions for two-sided markets"};
  app.require_subcommand(1);

  std::string instance_path, eps_str, output, trace_path, grid_str, format = "json";
  std::string support_str;
  long trials = 0, max_value = 5;
  std::uint64_t seed = 1;
  int buyers = 3, sellers = 2, count = 10;
  bool dsic = false, table_only = false, allow_zero = false, per_trial = false;

  auto* run = app.add_subcommand("run", "run the clinching auction on an instance");
  run->add_option("--instance", instance_path)->required();
  run->add_option("--epsilon", eps_str, "override the clock increment");
  run->add_option("--output", output);
  run->add_option("--trace", trace_path, "write the event trace as JSON lines");
  run->add_option("--format", format)->check(CLI::IsMember({"json", "tsv"}));

  auto* opt_cmd = app.add_subcommand("opt", "optimal liquid-welfare benchmark");
  opt_cmd->add_option("--instance", instance_path)->required();
  opt_cmd->add_option("--epsilon", eps_str);
  opt_cmd->add_option("--output", output);

  auto* ss = app.add_subcommand("single-sample", "sample-threshold mechanism");
  ss->add_option("--instance", instance_path)->required();
  ss->add_option("--output", output);
  ss->add_option("--trials", trials, "Monte Carlo trials (0: one run from instance samples)");
  ss->add_option("--seed", seed);
  ss->add_option("--support", support_str, "comma-separated support of the value distribution");
  ss->add_flag("--per-trial", per_trial, "include per-trial rows in the report");

  auto* ver = app.add_subcommand("verify", "replay-based theorem checks");
  ver->add_option("--instance", instance_path)->required();
  ver->add_option("--epsilon", eps_str);
  ver->add_option("--grid-step", grid_str, "deviation grid step for --dsic");
  ver->add_flag("--dsic", dsic, "also sweep bid deviations");
  ver->add_option("--output", output);

  auto* gen = app.add_subcommand("gen", "generate a random instance");
  gen->add_option("--buyers", buyers);
  gen->add_option("--sellers", sellers);
  gen->add_option("--seed", seed);
  gen->add_option("--max-value", max_value);
  gen->add_flag("--table-only", table_only, "table capacities only");
  gen->add_flag("--allow-zero-capacity", allow_zero);
  gen->add_option("--output", output);

  auto* rep = app.add_subcommand("reproduce", "pin both worked examples");
  rep->add_option("--output", output);

  auto* sweep = app.add_subcommand("sweep", "welfare metrics over generated instances");
  sweep->add_option("--count", count);
  sweep->add_option("--seed", seed);
  sweep->add_option("--buyers", buyers);
  sweep->add_option("--sellers", sellers);
  sweep->add_option("--format", format)->check(CLI::IsMember({"json", "tsv"}));
  sweep->add_option("--output", output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (run->parsed()) return cmd_run(instance_path, eps_str, output, trace_path, format);
    if (opt_cmd->parsed()) return cmd_opt(instance_path, eps_str, output);
    if (ss->parsed())
      return cmd_single_sample(instance_path, output, trials, seed, support_str, per_trial);
    if (ver->parsed()) return cmd_verify(instance_path, eps_str, grid_str, dsic, output);
    if (gen->parsed())
      return cmd_gen(buyers, sellers, seed, max_value, table_only, allow_zero, output);
    if (rep->parsed()) return cmd_reproduce(output);
    if (sweep->parsed()) return cmd_sweep(count, seed, buyers, sellers, format, output);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitUsage;
}
