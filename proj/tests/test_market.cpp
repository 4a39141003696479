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

#include "clinch/market.hpp"
#include "clinch/oracle.hpp"
#include "helpers.hpp"

using namespace clinch;
using namespace clinch::testing;

TEST_CASE("validate passes the tight-LW instance") {
  auto inst = tight_lw_instance();
  auto rep = validate(inst);
  CHECK(rep.ok());
  CHECK(rep.warnings.size() == 1);  // b1's infinite budget
}

TEST_CASE("validate rejects bids off the epsilon grid") {
  auto inst = tight_lw_instance();
  inst.epsilon = Rat(1, 3);
  auto rep = validate(inst);
  CHECK_FALSE(rep.ok());
  CHECK(rep.violations[0].entity == "b1");  // 3/2 is not a multiple of 1/3
}

TEST_CASE("validate rejects capacities violating normalization") {
  auto inst = tight_lw_instance();
  inst.sellers[0].capacity.kind = CapacitySpec::Kind::Table;
  inst.sellers[0].capacity.table = {Rat(1), Rat(1), Rat(1), Rat(1)};  // f(empty) = 1
  auto rep = validate(inst);
  CHECK_FALSE(rep.ok());
  CHECK(rep.violations[0].entity == "s1");
}

TEST_CASE("validate flags degenerate structure") {
  MarketInstance inst;
  inst.buyers.push_back(buyer("b", Rat(1), ExtRat(Rat(1))));
  inst.sellers.push_back(rank1_seller("s", Rat(1)));
  auto rep = validate(inst);  // seller has no edges
  CHECK_FALSE(rep.ok());

  inst.edges = {{0, 0}};
  CHECK(validate(inst).ok());

  inst.buyers[0].valuation = Rat(0);
  CHECK_FALSE(validate(inst).ok());
}

TEST_CASE("preprocess adds one virtual buyer per seller") {
  auto inst = tight_lw_instance();
  auto pm = preprocess(inst, SellerValueChannel::Bids);
  CHECK(pm.num_buyers() == 3);
  CHECK(pm.num_real == 2);
  CHECK(pm.buyer_ids[2] == "v#s1");
  CHECK(pm.valuation[2] == Rat(1));
  CHECK(pm.bid[2] == Rat(1));
  CHECK(pm.budget[2].is_inf());
  CHECK(pm.num_edges() == 3);
  CHECK(pm.edges[2].is_virtual);
  // Virtual buyer adjacent only to its seller.
  CHECK(pm.buyer_edges[2].size() == 1);

  // Sets containing the virtual edge carry full capacity.
  const auto& sv = pm.sellers[0];
  CHECK(sv.ftab[0b100] == Rat(1));   // just the virtual edge
  CHECK(sv.ftab[0b001] == Rat(1));   // a real edge (rank-1)
  CHECK(sv.ftab[0b000] == Rat(0));
  // g over buyers: every nonempty set sees the unit.
  CHECK(pm.g_buyers(0b001) == Rat(1));
  CHECK(pm.g_buyers(0b111) == Rat(1));
  CHECK(pm.g_buyers(0) == Rat(0));
}

TEST_CASE("preprocess with no sellers is the identity") {
  MarketInstance inst;
  inst.epsilon = Rat(1);
  inst.buyers.push_back(buyer("b", Rat(2), ExtRat(Rat(1))));
  auto pm = preprocess(inst, SellerValueChannel::Bids);
  CHECK(pm.num_buyers() == 1);
  CHECK(pm.num_edges() == 0);
  CHECK(pm.g_buyers(0b1) == Rat(0));
}

TEST_CASE("preprocess never changes capacities without the virtual edge") {
  MarketInstance inst;
  inst.epsilon = Rat(1, 4);
  inst.buyers.push_back(buyer("b1", Rat(1), ExtRat(Rat(1))));
  inst.buyers.push_back(buyer("b2", Rat(2), ExtRat(Rat(1))));
  Seller s = rank1_seller("s1", Rat(1));
  s.capacity.kind = CapacitySpec::Kind::Table;
  s.capacity.table = {Rat(0), Rat(1, 2), Rat(3, 4), Rat(1)};
  inst.sellers.push_back(s);
  inst.edges = {{0, 0}, {1, 0}};
  auto pm = preprocess(inst, SellerValueChannel::Bids);
  const auto& sv = pm.sellers[0];
  for (Mask m = 0; m < 4; ++m) CHECK(sv.ftab[m] == s.capacity.table[m]);
  for (Mask m = 0; m < 4; ++m) CHECK(sv.ftab[m | 0b100] == Rat(1));
  // Aggregate rank passes the axioms, g(V) = g(N) = sum of capacities.
  CHECK(verify_oracle(pm.g_oracle()).ok());
  CHECK(pm.g_buyers(0b100) == pm.g_buyers(0b111));
  Rat caps_total;
  for (const auto& seller : pm.sellers) caps_total += seller.total;
  CHECK(pm.g_buyers(0b111) == caps_total);
}

TEST_CASE("samples channel requires samples") {
  auto inst = tight_lw_instance();
  CHECK_THROWS_AS(preprocess(inst, SellerValueChannel::Samples), ParseError);
  inst.sellers[0].sample = Rat(2);
  auto pm = preprocess(inst, SellerValueChannel::Samples);
  CHECK(pm.valuation[2] == Rat(2));
  CHECK(pm.bid[2] == Rat(2));
}

TEST_CASE("instance JSON round-trip") {
  auto inst = tight_lw_instance();
  inst.sellers[0].sample = Rat(3, 2);
  std::string text = serialize_instance(inst);
  MarketInstance back = parse_instance(text);
  CHECK(serialize_instance(back) == text);
  CHECK(back.buyers.size() == 2);
  CHECK(back.buyers[0].budget.is_inf());
  CHECK(back.sellers[0].sample == Rat(3, 2));
  CHECK(back.edges == inst.edges);
  CHECK(*back.epsilon == Rat(1, 2));
}

TEST_CASE("parse errors carry the field path") {
  CHECK_THROWS_AS(parse_instance("not json"), ParseError);
  // Missing required fields surface as parse errors, not library exceptions.
  CHECK_THROWS_AS(parse_instance(R"({"buyers":[{"id":"b"}],"sellers":[],"edges":[]})"),
                  ParseError);
  CHECK_THROWS_AS(
      parse_instance(
          R"({"buyers":[],"sellers":[{"id":"s","valuation":"1","capacity":{"kind":"rank"}}],"edges":[]})"),
      ParseError);
  CHECK_THROWS_WITH_AS(parse_instance(R"({"buyers":[{"id":"b","valuation":"x"}],"sellers":[],"edges":[]})"),
                       doctest::Contains("b.valuation"), ParseError);
  CHECK_THROWS_WITH_AS(
      parse_instance(R"({"buyers":[],"sellers":[],"edges":[["a","b"]]})"),
      doctest::Contains("unknown buyer"), ParseError);
  // Budget "inf" is accepted at parse time; validate only warns.
  auto inst = parse_instance(
      R"({"buyers":[{"id":"b","valuation":"1","bid":"1","budget":"inf"}],
          "sellers":[{"id":"s","valuation":"1","bid":"1","capacity":{"kind":"rank","cap":"1"}}],
          "edges":[["b","s"]]})");
  auto rep = validate(inst);
  CHECK(rep.ok());
  CHECK(rep.warnings.size() == 1);
}

TEST_CASE("default epsilon honors the gcd and the efficiency gate") {
  // gcd of bids 3/2, 3, 1 is 1/2; gate is vmin^2/(vmax-vmin) = 1/2.
  auto inst = tight_lw_instance();
  inst.epsilon.reset();
  CHECK(default_epsilon(inst) == Rat(1, 2));

  // Larger spread: gcd 1, gate 1/4 -> epsilon falls to 1/4.
  MarketInstance wide;
  wide.buyers.push_back(buyer("b1", Rat(1), ExtRat(Rat(1))));
  wide.buyers.push_back(buyer("b2", Rat(5), ExtRat(Rat(1))));
  wide.sellers.push_back(rank1_seller("s", Rat(2)));
  wide.edges = {{0, 0}, {1, 0}};
  CHECK(default_epsilon(wide) == Rat(1, 4));

  // Override must satisfy multiplicity.
  CHECK_THROWS_AS(effective_epsilon(wide, Rat(2, 3)), ParseError);
  CHECK(effective_epsilon(wide, Rat(1, 8)) == Rat(1, 8));
}

TEST_CASE("submarket keeps buyers and drops excluded sellers") {
  MarketInstance inst;
  inst.epsilon = Rat(1);
  inst.buyers.push_back(buyer("b1", Rat(2), ExtRat(Rat(4))));
  inst.sellers.push_back(rank1_seller("s1", Rat(1)));
  inst.sellers.push_back(rank1_seller("s2", Rat(1)));
  inst.edges = {{0, 0}, {0, 1}};
  auto sub = submarket(inst, {0, 1});
  CHECK(sub.sellers.size() == 1);
  CHECK(sub.sellers[0].id == "s2");
  REQUIRE(sub.edges.size() == 1);
  CHECK(sub.edges[0] == std::pair<int, int>{0, 0});
}
