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

#include "clinch/market.hpp"

#include <algorithm>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>

#include <json.hpp>

namespace clinch {

namespace {

using Json = nlohmann::ordered_json;

Rat parse_rat_field(const Json& j, const std::string& where) {
  if (!j.is_string()) throw ParseError(where + ": expected rational string");
  try {
    return Rat::from_string(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ParseError(where + ": " + e.what());
  }
}

ExtRat parse_ext_field(const Json& j, const std::string& where) {
  if (!j.is_string()) throw ParseError(where + ": expected rational string or \"inf\"");
  try {
    return ExtRat::from_string(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ParseError(where + ": " + e.what());
  }
}

bool is_multiple(const Rat& value, const Rat& eps) {
  return (value / eps).is_integer();
}

// Raw capacity table over the seller's incident edges (no virtual edge).
std::vector<Rat> raw_capacity_table(const CapacitySpec& cap, int deg, const std::string& seller_id) {
  const std::size_t size = std::size_t{1} << deg;
  std::vector<Rat> tab(size);
  switch (cap.kind) {
    case CapacitySpec::Kind::Rank:
      for (Mask m = 0; m < size; ++m) tab[m] = min(cap.unit * Rat(popcount(m)), cap.cap);
      break;
    case CapacitySpec::Kind::Additive: {
      if (static_cast<int>(cap.caps.size()) != deg)
        throw ParseError("seller " + seller_id + ": additive capacity needs one cap per edge");
      for (Mask m = 0; m < size; ++m) {
        Rat s;
        for (int k = 0; k < deg; ++k)
          if (has_bit(m, k)) s += cap.caps[k];
        tab[m] = s;
      }
      break;
    }
    case CapacitySpec::Kind::Table:
      if (cap.table.size() != size)
        throw ParseError("seller " + seller_id + ": table capacity needs 2^deg values");
      tab = cap.table;
      break;
  }
  return tab;
}

}  // namespace

std::vector<int> MarketInstance::seller_edge_ids(int seller) const {
  std::vector<int> out;
  for (int e = 0; e < static_cast<int>(edges.size()); ++e)
    if (edges[e].second == seller) out.push_back(e);
  return out;
}

std::vector<int> MarketInstance::buyer_edge_ids(int buyer) const {
  std::vector<int> out;
  for (int e = 0; e < static_cast<int>(edges.size()); ++e)
    if (edges[e].first == buyer) out.push_back(e);
  return out;
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  if (ok()) {
    os << "ok";
  } else {
    os << violations.size() << " violation(s): ";
    for (const auto& v : violations) os << "[" << v.entity << "] " << v.message << "; ";
  }
  for (const auto& w : warnings) os << "warning: " << w << "; ";
  return os.str();
}

ValidationReport validate(const MarketInstance& instance, int guard) {
  ValidationReport rep;
  auto fail = [&](const std::string& entity, const std::string& msg) {
    rep.violations.push_back({entity, msg});
  };

  std::set<std::string> ids;
  for (const auto& b : instance.buyers) {
    if (!ids.insert(b.id).second) fail(b.id, "duplicate participant id");
    if (b.valuation.sign() <= 0) fail(b.id, "valuation must be positive");
    if (b.bid.sign() <= 0) fail(b.id, "bid must be positive");
    if (!b.budget.is_inf() && b.budget.finite().sign() < 0) fail(b.id, "budget must be nonnegative");
    if (b.budget.is_inf())
      rep.warnings.push_back("buyer " + b.id + " has infinite budget");
  }
  for (const auto& s : instance.sellers) {
    if (!ids.insert(s.id).second) fail(s.id, "duplicate participant id");
    if (s.valuation.sign() <= 0) fail(s.id, "valuation must be positive");
    if (s.bid.sign() <= 0) fail(s.id, "bid must be positive");
    if (s.sample && s.sample->sign() <= 0) fail(s.id, "sample must be positive");
  }

  std::set<std::pair<int, int>> seen;
  for (const auto& [b, s] : instance.edges) {
    if (b < 0 || b >= static_cast<int>(instance.buyers.size()) || s < 0 ||
        s >= static_cast<int>(instance.sellers.size())) {
      fail("edge", "edge endpoint out of range");
      continue;
    }
    if (!seen.insert({b, s}).second)
      fail(instance.buyers[b].id + "-" + instance.sellers[s].id, "duplicate edge");
  }

  if (instance.epsilon) {
    const Rat& eps = *instance.epsilon;
    if (eps.sign() <= 0) fail("epsilon", "epsilon must be positive");
    else {
      for (const auto& b : instance.buyers)
        if (!is_multiple(b.bid, eps)) fail(b.id, "bid " + b.bid.str() + " is not a multiple of epsilon");
      for (const auto& s : instance.sellers) {
        if (!is_multiple(s.bid, eps)) fail(s.id, "bid " + s.bid.str() + " is not a multiple of epsilon");
        if (s.sample && !is_multiple(*s.sample, eps))
          fail(s.id, "sample " + s.sample->str() + " is not a multiple of epsilon");
      }
    }
  }

  for (int j = 0; j < static_cast<int>(instance.sellers.size()); ++j) {
    const Seller& s = instance.sellers[j];
    auto eids = instance.seller_edge_ids(j);
    if (eids.empty()) {
      fail(s.id, "seller has no incident edges");
      continue;
    }
    const int deg = static_cast<int>(eids.size());
    if (deg > guard) {
      fail(s.id, "seller degree exceeds enumeration guard");
      continue;
    }
    std::vector<Rat> tab;
    try {
      tab = raw_capacity_table(s.capacity, deg, s.id);
    } catch (const ParseError& e) {
      fail(s.id, e.what());
      continue;
    }
    auto oracle = table_oracle(numbered_ground(deg), tab);
    auto orep = verify_oracle(oracle, guard);
    if (!orep.ok()) fail(s.id, "capacity is not a polymatroid rank function: " + orep.detail);
  }
  return rep;
}

Rat PreprocessedMarket::f_edges(Mask edge_set) const {
  std::vector<Mask> local(sellers.size(), 0);
  for (int e = 0; e < num_edges(); ++e)
    if (has_bit(edge_set, e)) local[edge_pos[e].first] |= Mask{1} << edge_pos[e].second;
  Rat s;
  for (std::size_t j = 0; j < sellers.size(); ++j) s += sellers[j].ftab[local[j]];
  return s;
}

Mask PreprocessedMarket::edge_mask_of(Mask buyer_set) const {
  Mask m = 0;
  for (int b = 0; b < num_buyers(); ++b)
    if (has_bit(buyer_set, b)) m |= buyer_edge_masks[b];
  return m;
}

Rat PreprocessedMarket::g_buyers(Mask buyer_set) const { return f_edges(edge_mask_of(buyer_set)); }

GroundSet PreprocessedMarket::buyer_ground() const { return GroundSet{buyer_ids}; }

GroundSet PreprocessedMarket::edge_ground() const {
  GroundSet g;
  for (const Edge& e : edges)
    g.ids.push_back(buyer_ids[e.buyer] + "-" + sellers[e.seller].id);
  return g;
}

SubmodularOracle PreprocessedMarket::f_oracle() const {
  auto self = std::make_shared<PreprocessedMarket>(*this);
  return SubmodularOracle{edge_ground(), [self](Mask m) { return self->f_edges(m); }};
}

SubmodularOracle PreprocessedMarket::g_oracle() const {
  auto self = std::make_shared<PreprocessedMarket>(*this);
  return SubmodularOracle{buyer_ground(), [self](Mask m) { return self->g_buyers(m); }};
}

Rat PreprocessedMarket::vmin() const {
  Rat m = valuation.at(0);
  for (const Rat& v : valuation) m = min(m, v);
  return m;
}

Rat PreprocessedMarket::vmax() const {
  Rat m = valuation.at(0);
  for (const Rat& v : valuation) m = max(m, v);
  return m;
}

PreprocessedMarket preprocess(const MarketInstance& instance, SellerValueChannel channel,
                              std::optional<Rat> epsilon_override) {
  PreprocessedMarket pm;
  pm.num_real = static_cast<int>(instance.buyers.size());
  pm.num_sellers = static_cast<int>(instance.sellers.size());
  pm.epsilon = effective_epsilon(instance, epsilon_override);

  for (const Buyer& b : instance.buyers) {
    pm.buyer_ids.push_back(b.id);
    pm.valuation.push_back(b.valuation);
    pm.bid.push_back(b.bid);
    pm.budget.push_back(b.budget);
  }
  for (const Seller& s : instance.sellers) {
    pm.buyer_ids.push_back("v#" + s.id);
    if (channel == SellerValueChannel::Samples) {
      if (!s.sample) throw ParseError("seller " + s.id + ": sample requested but absent");
      pm.valuation.push_back(*s.sample);
      pm.bid.push_back(*s.sample);
    } else {
      pm.valuation.push_back(s.valuation);
      pm.bid.push_back(s.bid);
    }
    pm.budget.push_back(ExtRat::infinity());
  }

  const int raw_edges = static_cast<int>(instance.edges.size());
  for (const auto& [b, s] : instance.edges) pm.edges.push_back({b, s, false});
  for (int j = 0; j < pm.num_sellers; ++j) pm.edges.push_back({pm.num_real + j, j, true});

  if (pm.num_edges() > 31)
    throw EnumerationRefused("preprocess: edge set exceeds 31 elements");

  pm.edge_pos.assign(pm.num_edges(), {-1, -1});
  for (int j = 0; j < pm.num_sellers; ++j) {
    PreprocessedMarket::SellerView sv;
    sv.id = instance.sellers[j].id;
    sv.edge_ids = instance.seller_edge_ids(j);
    const int deg = static_cast<int>(sv.edge_ids.size());
    sv.virtual_edge = raw_edges + j;
    sv.edge_ids.push_back(sv.virtual_edge);
    std::vector<Rat> raw_tab = raw_capacity_table(instance.sellers[j].capacity, deg, sv.id);
    sv.total = raw_tab[full_mask(deg)];
    // Modified capacity: any set containing the virtual edge has full supply.
    sv.ftab.resize(std::size_t{1} << (deg + 1));
    for (Mask m = 0; m < (Mask{1} << (deg + 1)); ++m)
      sv.ftab[m] = has_bit(m, deg) ? sv.total : raw_tab[m];
    for (int k = 0; k < deg + 1; ++k) pm.edge_pos[sv.edge_ids[k]] = {j, k};
    pm.sellers.push_back(std::move(sv));
  }

  pm.buyer_edges.assign(pm.num_buyers(), {});
  pm.buyer_edge_masks.assign(pm.num_buyers(), 0);
  for (int e = 0; e < pm.num_edges(); ++e) {
    pm.buyer_edges[pm.edges[e].buyer].push_back(e);
    pm.buyer_edge_masks[pm.edges[e].buyer] |= Mask{1} << e;
  }
  for (auto& list : pm.buyer_edges)
    std::sort(list.begin(), list.end(), [&](int a, int b) {
      return pm.edges[a].seller < pm.edges[b].seller;
    });
  return pm;
}

Rat default_epsilon(const MarketInstance& instance) {
  std::vector<Rat> values;
  for (const auto& b : instance.buyers) values.push_back(b.bid);
  for (const auto& s : instance.sellers) {
    values.push_back(s.bid);
    if (s.sample) values.push_back(*s.sample);
  }
  if (values.empty()) return Rat(1);
  Rat g;
  for (const Rat& v : values) g = Rat::gcd(g, v);
  Rat lo = values[0], hi = values[0];
  for (const Rat& v : values) {
    lo = min(lo, v);
    hi = max(hi, v);
  }
  if (lo == hi) return g;
  Rat bound = lo * lo / (hi - lo);
  if (g <= bound) return g;
  return g / Rat(Rat::ceil_ratio(g, bound));
}

Rat effective_epsilon(const MarketInstance& instance, std::optional<Rat> override_eps) {
  Rat eps = override_eps ? *override_eps
           : instance.epsilon ? *instance.epsilon
                              : default_epsilon(instance);
  if (eps.sign() <= 0) throw ParseError("epsilon must be positive");
  for (const auto& b : instance.buyers)
    if (!is_multiple(b.bid, eps))
      throw ParseError("bid of buyer " + b.id + " is not a multiple of epsilon " + eps.str());
  for (const auto& s : instance.sellers) {
    if (!is_multiple(s.bid, eps))
      throw ParseError("bid of seller " + s.id + " is not a multiple of epsilon " + eps.str());
    if (s.sample && !is_multiple(*s.sample, eps))
      throw ParseError("sample of seller " + s.id + " is not a multiple of epsilon " + eps.str());
  }
  return eps;
}

namespace {

MarketInstance parse_instance_fields(const Json& j);

}  // namespace

MarketInstance parse_instance(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("instance: invalid JSON: ") + e.what());
  }
  try {
    return parse_instance_fields(j);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("instance: missing or mistyped field: ") + e.what());
  }
}

namespace {

MarketInstance parse_instance_fields(const Json& j) {
  MarketInstance inst;
  if (j.contains("epsilon")) inst.epsilon = parse_rat_field(j["epsilon"], "epsilon");

  if (!j.contains("buyers") || !j["buyers"].is_array()) throw ParseError("instance: missing buyers[]");
  for (const auto& bj : j["buyers"]) {
    Buyer b;
    if (!bj.contains("id") || !bj["id"].is_string()) throw ParseError("buyer: missing id");
    b.id = bj["id"].get<std::string>();
    b.valuation = parse_rat_field(bj.at("valuation"), "buyer " + b.id + ".valuation");
    b.bid = bj.contains("bid") ? parse_rat_field(bj["bid"], "buyer " + b.id + ".bid") : b.valuation;
    b.budget = bj.contains("budget") ? parse_ext_field(bj["budget"], "buyer " + b.id + ".budget")
                                     : ExtRat::infinity();
    inst.buyers.push_back(std::move(b));
  }

  if (!j.contains("sellers") || !j["sellers"].is_array()) throw ParseError("instance: missing sellers[]");
  for (const auto& sj : j["sellers"]) {
    Seller s;
    if (!sj.contains("id") || !sj["id"].is_string()) throw ParseError("seller: missing id");
    s.id = sj["id"].get<std::string>();
    s.valuation = parse_rat_field(sj.at("valuation"), "seller " + s.id + ".valuation");
    s.bid = sj.contains("bid") ? parse_rat_field(sj["bid"], "seller " + s.id + ".bid") : s.valuation;
    if (sj.contains("sample")) s.sample = parse_rat_field(sj["sample"], "seller " + s.id + ".sample");
    if (!sj.contains("capacity") || !sj["capacity"].is_object())
      throw ParseError("seller " + s.id + ": missing capacity");
    const auto& cj = sj["capacity"];
    std::string kind = cj.value("kind", "");
    if (kind == "rank") {
      s.capacity.kind = CapacitySpec::Kind::Rank;
      s.capacity.unit = cj.contains("unit") ? parse_rat_field(cj["unit"], s.id + ".capacity.unit") : Rat(1);
      s.capacity.cap = parse_rat_field(cj.at("cap"), s.id + ".capacity.cap");
    } else if (kind == "additive") {
      s.capacity.kind = CapacitySpec::Kind::Additive;
      for (const auto& c : cj.at("caps"))
        s.capacity.caps.push_back(parse_rat_field(c, s.id + ".capacity.caps"));
    } else if (kind == "table") {
      s.capacity.kind = CapacitySpec::Kind::Table;
      for (const auto& c : cj.at("values"))
        s.capacity.table.push_back(parse_rat_field(c, s.id + ".capacity.values"));
    } else {
      throw ParseError("seller " + s.id + ": unknown capacity kind '" + kind + "'");
    }
    inst.sellers.push_back(std::move(s));
  }

  if (!j.contains("edges") || !j["edges"].is_array()) throw ParseError("instance: missing edges[]");
  for (const auto& ej : j["edges"]) {
    if (!ej.is_array() || ej.size() != 2) throw ParseError("edge: expected [buyer, seller]");
    std::string bid = ej[0].get<std::string>(), sid = ej[1].get<std::string>();
    int b = -1, s = -1;
    for (int i = 0; i < static_cast<int>(inst.buyers.size()); ++i)
      if (inst.buyers[i].id == bid) b = i;
    for (int i = 0; i < static_cast<int>(inst.sellers.size()); ++i)
      if (inst.sellers[i].id == sid) s = i;
    if (b < 0) throw ParseError("edge: unknown buyer '" + bid + "'");
    if (s < 0) throw ParseError("edge: unknown seller '" + sid + "'");
    inst.edges.emplace_back(b, s);
  }
  std::sort(inst.edges.begin(), inst.edges.end());
  if (std::adjacent_find(inst.edges.begin(), inst.edges.end()) != inst.edges.end())
    throw ParseError("edge: duplicate edge");
  return inst;
}

}  // namespace

std::string serialize_instance(const MarketInstance& instance) {
  Json j;
  if (instance.epsilon) j["epsilon"] = instance.epsilon->str();
  j["buyers"] = Json::array();
  for (const auto& b : instance.buyers) {
    Json bj;
    bj["id"] = b.id;
    bj["valuation"] = b.valuation.str();
    bj["bid"] = b.bid.str();
    bj["budget"] = b.budget.str();
    j["buyers"].push_back(bj);
  }
  j["sellers"] = Json::array();
  for (const auto& s : instance.sellers) {
    Json sj;
    sj["id"] = s.id;
    sj["valuation"] = s.valuation.str();
    sj["bid"] = s.bid.str();
    if (s.sample) sj["sample"] = s.sample->str();
    Json cj;
    switch (s.capacity.kind) {
      case CapacitySpec::Kind::Rank:
        cj["kind"] = "rank";
        cj["unit"] = s.capacity.unit.str();
        cj["cap"] = s.capacity.cap.str();
        break;
      case CapacitySpec::Kind::Additive: {
        cj["kind"] = "additive";
        Json arr = Json::array();
        for (const auto& c : s.capacity.caps) arr.push_back(c.str());
        cj["caps"] = arr;
        break;
      }
      case CapacitySpec::Kind::Table: {
        cj["kind"] = "table";
        Json arr = Json::array();
        for (const auto& c : s.capacity.table) arr.push_back(c.str());
        cj["values"] = arr;
        break;
      }
    }
    sj["capacity"] = cj;
    j["sellers"].push_back(sj);
  }
  auto sorted_edges = instance.edges;
  std::sort(sorted_edges.begin(), sorted_edges.end());
  j["edges"] = Json::array();
  for (const auto& [b, s] : sorted_edges)
    j["edges"].push_back(Json::array({instance.buyers[b].id, instance.sellers[s].id}));
  return j.dump(2) + "\n";
}

MarketInstance load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open instance file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

MarketInstance submarket(const MarketInstance& instance, const std::vector<char>& keep_seller) {
  if (keep_seller.size() != instance.sellers.size())
    throw ContractViolation("submarket: keep vector size mismatch");
  MarketInstance out;
  out.epsilon = instance.epsilon;
  out.buyers = instance.buyers;
  std::vector<int> remap(instance.sellers.size(), -1);
  for (std::size_t j = 0; j < instance.sellers.size(); ++j) {
    if (keep_seller[j]) {
      remap[j] = static_cast<int>(out.sellers.size());
      out.sellers.push_back(instance.sellers[j]);
    }
  }
  for (const auto& [b, s] : instance.edges)
    if (remap[s] >= 0) out.edges.emplace_back(b, remap[s]);
  return out;
}

}  // namespace clinch
