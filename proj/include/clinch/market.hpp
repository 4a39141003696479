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

#ifndef CLINCH_MARKET_HPP_
#define CLINCH_MARKET_HPP_

#include <optional>
#include <string>
#include <vector>

#include "clinch/oracle.hpp"
#include "clinch/rat.hpp"

namespace clinch {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Buyer {
  std::string id;
  Rat valuation;  // > 0
  Rat bid;        // > 0, multiple of epsilon
  ExtRat budget;  // >= 0; infinity permitted (validate warns for real buyers)
};

// Per-seller transaction capacity over her incident edges, in the canonical
// edge order of the instance.
struct CapacitySpec {
  enum class Kind { Rank, Additive, Table };
  Kind kind = Kind::Rank;
  Rat unit;               // Rank: per-edge slope
  Rat cap;                // Rank: overall cap
  std::vector<Rat> caps;  // Additive: one per incident edge
  std::vector<Rat> table; // Table: 2^deg values, bit k = k-th incident edge
};

struct Seller {
  std::string id;
  Rat valuation;             // > 0
  Rat bid;                   // > 0, multiple of epsilon
  std::optional<Rat> sample; // present in single-sample runs
  CapacitySpec capacity;
};

// Two-sided market instance as parsed from disk. Edges are stored as
// (buyer index, seller index) pairs, sorted and deduplicated.
struct MarketInstance {
  std::optional<Rat> epsilon;
  std::vector<Buyer> buyers;
  std::vector<Seller> sellers;
  std::vector<std::pair<int, int>> edges;

  std::vector<int> seller_edge_ids(int seller) const;
  std::vector<int> buyer_edge_ids(int buyer) const;
};

struct Violation {
  std::string entity;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  std::vector<std::string> warnings;
  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

// Checks bipartite structure, strict positivity of valuations and bids,
// epsilon-multiplicity of every bid (and sample, when present), and the
// monotone-submodular contract of every capacity.
ValidationReport validate(const MarketInstance& instance, int guard = kEnumGuard);

// Which seller-side value feeds the virtual buyers.
enum class SellerValueChannel { Bids, Samples };

// Market after adding one virtual buyer per seller: buyer n+j is adjacent
// only to seller j, carries the seller-side value as valuation and bid, and
// has infinite budget. Capacities are extended so a set containing the
// virtual edge always has the seller's full capacity.
struct PreprocessedMarket {
  struct Edge {
    int buyer;   // preprocessed buyer index
    int seller;
    bool is_virtual;
  };
  struct SellerView {
    std::string id;
    std::vector<int> edge_ids;   // global edge indices, virtual edge last
    int virtual_edge = -1;       // global edge index
    std::vector<Rat> ftab;       // modified capacity over local edge masks
    Rat total;                   // f_j(E_j)
  };

  int num_real = 0;
  int num_sellers = 0;
  std::vector<std::string> buyer_ids;  // real buyers then virtual buyers
  std::vector<Rat> valuation;
  std::vector<Rat> bid;
  std::vector<ExtRat> budget;
  std::vector<Edge> edges;                    // raw edges first, then virtual edges
  std::vector<std::vector<int>> buyer_edges;  // per buyer, ascending seller index
  std::vector<SellerView> sellers;
  std::vector<std::pair<int, int>> edge_pos;  // per edge: (seller, local bit)
  std::vector<Mask> buyer_edge_masks;         // per buyer: global edge mask
  Rat epsilon;

  int num_buyers() const { return static_cast<int>(buyer_ids.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }
  bool is_virtual_buyer(int b) const { return b >= num_real; }

  // f(A) for a global edge mask.
  Rat f_edges(Mask edge_set) const;
  // f(E_S) for a buyer mask.
  Rat g_buyers(Mask buyer_set) const;
  // Global edge mask of the edges incident to a buyer set.
  Mask edge_mask_of(Mask buyer_set) const;

  GroundSet buyer_ground() const;
  GroundSet edge_ground() const;
  SubmodularOracle f_oracle() const;  // on edges
  SubmodularOracle g_oracle() const;  // on buyers

  Rat vmin() const;  // over all preprocessed buyers' valuations
  Rat vmax() const;
};

// Adds virtual buyers per the chosen seller-side channel. Requires a
// validated instance; throws ParseError if samples are requested but absent.
PreprocessedMarket preprocess(const MarketInstance& instance, SellerValueChannel channel,
                              std::optional<Rat> epsilon_override = std::nullopt);

// Largest epsilon that divides every bid (buyer bids, seller bids, samples)
// and satisfies eps <= vmin^2 / (vmax - vmin) over all valuations that can
// reach the auction; falls back to the bid gcd when vmax == vmin.
Rat default_epsilon(const MarketInstance& instance);

// Epsilon actually used for a run: the override if given, else the
// instance's, else default_epsilon. Throws ParseError if the choice fails
// the multiplicity assumption.
Rat effective_epsilon(const MarketInstance& instance, std::optional<Rat> override_eps);

MarketInstance parse_instance(const std::string& text);
std::string serialize_instance(const MarketInstance& instance);
MarketInstance load_instance_file(const std::string& path);

// Restriction to a seller subset: drops other sellers and their edges.
MarketInstance submarket(const MarketInstance& instance, const std::vector<char>& keep_seller);

}  // namespace clinch

#endif  // CLINCH_MARKET_HPP_
