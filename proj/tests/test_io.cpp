//============================================================================//
// Copyright 2026 The mup authors                                             //
//                                                                            //
// Licensed under the Apache License, Version 2.0 (the "License");            //
// you may not use this file except in compliance with the License.           //
// You may obtain a copy of the License at                                    //
//                                                                            //
//     http://www.apache.org/licenses/LICENSE-2.0                             //
//                                                                            //
// Unless required by applicable law or agreed to in writing, software        //
// distributed under the License is distributed on an "AS IS" BASIS,          //
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.   //
// See the License for the specific language governing permissions and        //
// limitations under the License.                                             //
//============================================================================//

#include "mup/io.hpp"
#include "mup/random_gen.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <string>
#include <vector>

using namespace mup;

namespace {

Valuation val(std::vector<std::string> const &entries)
{
  std::vector<Rat> xs;
  for (auto const &e : entries)
  {
    xs.push_back(parse_rat(e));
  }
  return Valuation(xs);
}

Market two_agent_example()
{
  return Market(3, {val({"0", "5", "9", "11"}), val({"0", "2", "4", "5"})});
}

/// Self-deleting temp file path.
struct TempFile
{
  std::string path;

  explicit TempFile(std::string name)
    : path("/tmp/mup_io_" + std::move(name))
  {
  }

  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("rational json forms")
{
  CHECK(rat_from_json(Json("3/2")) == Rat(3, 2));
  CHECK(rat_from_json(Json("1.5")) == Rat(3, 2));
  CHECK(rat_from_json(Json("-0.25")) == Rat(-1, 4));
  CHECK(rat_from_json(Json(7)) == 7);
  CHECK(rat_from_json(Json(-3)) == -3);
  CHECK((rat_from_json(Json(std::uint64_t(1) << 63)) == Rat(Int(1) << 63)));

  // Unquoted decimals would arrive as doubles; exactness forbids them.
  CHECK_THROWS_AS(rat_from_json(Json(1.5)), ParseError);
  CHECK_THROWS_AS(rat_from_json(Json(true)), ParseError);
  CHECK_THROWS_AS(rat_from_json(Json::array()), ParseError);
  CHECK_THROWS_AS(rat_from_json(Json("3/0")), ParseError);

  CHECK(rat_to_json(Rat(3, 2)) == Json("3/2"));
  CHECK(rat_to_json(Rat(-7)) == Json("-7"));

  Rng rng(20260821);
  for (int trial = 0; trial < 50; ++trial)
  {
    Rat const x(rand_int(rng, -1000, 1000), rand_int(rng, 1, 60));
    CHECK(rat_from_json(rat_to_json(x)) == x);
  }
}

TEST_CASE("market round trip through text and files")
{
  Market const market = two_agent_example();
  Json const   j      = market_to_json(market);
  Market const back   = market_from_json(Json::parse(j.dump()));

  REQUIRE(back.m == market.m);
  REQUIRE(back.agents.size() == market.agents.size());
  CHECK(back.agents[0] == market.agents[0]);
  CHECK(back.agents[1] == market.agents[1]);

  TempFile file("roundtrip.market.json");
  save_json_file(file.path, j);
  Market const loaded = market_from_json(load_json_file(file.path));
  CHECK(loaded.agents[0] == market.agents[0]);
  CHECK(optimal_welfare(loaded).first == 11);

  // Byte-stable output: dumping the same value twice is identical.
  CHECK(market_to_json(loaded).dump(2) == j.dump(2));

  CHECK_THROWS_AS(load_json_file("/tmp/mup_io_no_such_file.json"), ParseError);

  TempFile garbage("garbage.json");
  {
    std::ofstream out(garbage.path);
    out << "{ definitely not json";
  }
  CHECK_THROWS_AS(load_json_file(garbage.path), ParseError);
}

TEST_CASE("market shape and content errors")
{
  CHECK_THROWS_AS(market_from_json(Json::parse(R"({"agents": []})")), ParseError);
  CHECK_THROWS_AS(market_from_json(Json::parse(R"({"m": "3", "agents": []})")), ParseError);
  CHECK_THROWS_AS(market_from_json(Json::parse(R"({"m": 3})")), ParseError);
  CHECK_THROWS_AS(market_from_json(Json::parse(R"({"m": 3, "agents": 5})")), ParseError);
  CHECK_THROWS_AS(market_from_json(Json::parse(R"({"m": 1, "agents": [{}]})")), ParseError);
  CHECK_THROWS_AS(market_from_json(Json::parse(R"({"m": 1, "agents": [{"values": [0, 0.5]}]})")),
                  ParseError);
  CHECK_THROWS_AS(market_from_json(Json::parse(R"({"m": 1, "agents": [{"values": ["0", "-1"]}]})")),
                  NotMonotone);
  CHECK_THROWS_AS(market_from_json(Json::parse(R"({"m": 1, "agents": [{"values": ["1", "2"]}]})")),
                  NotNormalized);
  CHECK_THROWS_AS(market_from_json(Json::parse(R"({"m": 2, "agents": [{"values": ["0", "1"]}]})")),
                  LengthMismatch);
  CHECK_THROWS_AS(market_from_json(Json::parse(R"({"m": -1, "agents": []})")), BadParams);

  // No agents is a valid market; its optimum is zero.
  Market const empty = market_from_json(Json::parse(R"({"m": 4, "agents": []})"));
  CHECK(empty.agents.empty());
  CHECK(optimal_welfare(empty).first == 0);
}

TEST_CASE("price file forms")
{
  Prices const uniform = prices_from_json(Json::parse(R"({"uniform": "3/2"})"), 3);
  CHECK((uniform == Prices{Rat(3, 2), Rat(3, 2), Rat(3, 2)}));

  Prices const listed = prices_from_json(Json::parse(R"({"prices": ["1/2", "1", "2"]})"), 3);
  CHECK((listed == Prices{Rat(1, 2), Rat(1), Rat(2)}));
  CHECK(prices_from_json(prices_to_json(listed), 3) == listed);

  CHECK_THROWS_AS(prices_from_json(Json::parse(R"({"prices": ["1"], "uniform": "1"})"), 1),
                  ParseError);
  CHECK_THROWS_AS(prices_from_json(Json::parse(R"({})"), 1), ParseError);
  CHECK_THROWS_AS(prices_from_json(Json::parse(R"(["1", "2"])"), 2), ParseError);
  CHECK_THROWS_AS(prices_from_json(Json::parse(R"({"prices": ["1", "2"]})"), 3),
                  PriceCountMismatch);
  CHECK_THROWS_AS(prices_from_json(Json::parse(R"({"prices": ["-1", "2"]})"), 2), NegativePrice);
  CHECK_THROWS_AS(prices_from_json(Json::parse(R"({"uniform": "-1/2"})"), 2), NegativePrice);

  // Zero items: the uniform form degenerates to an empty vector.
  CHECK(prices_from_json(Json::parse(R"({"uniform": "5"})"), 0).empty());
}

TEST_CASE("distribution round trip and generator form")
{
  ValuationDistribution dist;
  dist.m        = 2;
  dist.declared = ValClass::Additive;
  dist.agents   = {{{Rat(1, 3), val({"0", "1", "2"})}, {Rat(2, 3), val({"0", "3", "6"})}},
                   {{Rat(1, 2), val({"0", "2", "2"})}, {Rat(1, 2), val({"0", "2", "4"})}}};
  validate_distribution(dist);

  ValuationDistribution const back = distribution_from_json(distribution_to_json(dist));
  REQUIRE(back.m == 2);
  REQUIRE(back.declared == ValClass::Additive);
  REQUIRE(back.n() == 2);
  for (int i = 0; i < 2; ++i)
  {
    REQUIRE(back.agents[i].size() == dist.agents[i].size());
    for (std::size_t s = 0; s < back.agents[i].size(); ++s)
    {
      CHECK(back.agents[i][s].prob == dist.agents[i][s].prob);
      CHECK(back.agents[i][s].value == dist.agents[i][s].value);
    }
  }
  CHECK(exhaustive_expected_opt(back) == Rat(31, 6));

  // "m" and "declared" may be omitted; the length is taken from the support.
  Json trimmed = distribution_to_json(dist);
  trimmed.erase("m");
  trimmed.erase("declared");
  ValuationDistribution const inferred = distribution_from_json(trimmed);
  CHECK(inferred.m == 2);
  CHECK(inferred.declared == ValClass::General);

  Json const gen = Json::parse(R"({"generator": "bayes_lower", "params": {"n": 2}})");
  ValuationDistribution const named    = distribution_from_json(gen);
  ValuationDistribution const expected = *generate("bayes_lower", {{"n", Rat(2)}}).distribution;
  REQUIRE(named.n() == expected.n());
  REQUIRE(named.m == expected.m);
  for (int i = 0; i < named.n(); ++i)
  {
    REQUIRE(named.agents[i].size() == expected.agents[i].size());
    for (std::size_t s = 0; s < named.agents[i].size(); ++s)
    {
      CHECK(named.agents[i][s].prob == expected.agents[i][s].prob);
      CHECK(named.agents[i][s].value == expected.agents[i][s].value);
    }
  }

  CHECK_THROWS_AS(distribution_from_json(Json::parse(R"({"generator": "intro_example"})")),
                  ParseError);
  CHECK_THROWS_AS(distribution_from_json(Json::parse(R"({"generator": "nope"})")), UnknownId);
  CHECK_THROWS_AS(distribution_from_json(Json::parse(R"({"generator": 3})")), ParseError);
  CHECK_THROWS_AS(
      distribution_from_json(Json::parse(
          R"({"agents": [{"support": [{"prob": "1/2", "values": ["0", "1"]}]}]})")),
      BadSupport);
}

TEST_CASE("witness json replays to the reported welfare")
{
  Market const market = two_agent_example();
  Prices const prices{Rat(3, 2), Rat(5, 2), Rat(5, 2)};

  auto const [welfare, witness] = worst_case_welfare(market, prices);
  REQUIRE(welfare == 9);

  Json const j = witness_to_json(welfare, witness);
  CHECK(j.at("welfare") == Json("9"));

  OrderTies const parsed = order_ties_from_json(Json::parse(j.dump()));
  CHECK(parsed.order == witness.order);
  CHECK(parsed.ties == witness.ties);

  Outcome const replay = simulate(market, prices, parsed.order, parsed.ties);
  CHECK(replay.welfare == welfare);

  Json const out = outcome_to_json(replay);
  CHECK(out.at("welfare") == Json("9"));
  CHECK(out.at("order").size() == 2);
  CHECK(out.at("steps").size() == 2);
  CHECK(rat_from_json(out.at("revenue")) == replay.revenue);

  CHECK_THROWS_AS(order_ties_from_json(Json::parse(R"({"order": [0, 1]})")), ParseError);
  CHECK_THROWS_AS(order_ties_from_json(Json::parse(R"({"order": ["a"], "ties": []})")),
                  ParseError);
}

TEST_CASE("scheme results and region reports serialize")
{
  Market const market = two_agent_example();

  SchemeResult const result = scheme_submodular_23(market);
  Json const         j      = scheme_result_to_json(result);
  REQUIRE(j.at("candidates").size() == result.candidates.size());
  CHECK(j.at("chosen").get<int>() == result.chosen);
  CHECK(rat_from_json(j.at("guarantee")) == result.guarantee);
  CHECK(rat_from_json(j.at("opt")) == 11);
  for (std::size_t c = 0; c < result.candidates.size(); ++c)
  {
    CHECK(prices_from_json(j.at("candidates")[c], market.m) == result.candidates[c]);
  }

  BoundReport const report = verify_bound(generate("submod_2item"));
  Json const        rep    = bound_report_to_json(report);
  CHECK(rep.at("id") == Json("submod_2item"));
  CHECK(rep.at("ok") == Json(true));
  REQUIRE(rep.at("regions").size() == report.regions.size());
  CHECK(rep.at("regions")[0].contains("label"));
  CHECK(rep.at("regions")[0].contains("observed"));
  CHECK(rep.at("regions")[0].contains("limit"));

  BayesEstimate const est{Rat(11), Rat(9), 64, 42};
  Json const          bj = bayes_estimate_to_json(est);
  CHECK(rat_from_json(bj.at("expected_opt")) == 11);
  CHECK(bj.at("samples").get<int>() == 64);
  CHECK(bj.at("seed").get<std::uint64_t>() == 42);
}

TEST_CASE("instance summaries cover both payload kinds")
{
  Json const intro = instance_summary_json(generate("intro_example"));
  CHECK(intro.at("id") == Json("intro_example"));
  CHECK(intro.at("n").get<int>() == 2);
  CHECK(intro.at("m").get<int>() == 3);
  CHECK(rat_from_json(intro.at("opt")) == 14);
  CHECK(intro.at("agent_classes").size() == 2);

  Json const bayes = instance_summary_json(generate("bayes_lower"));
  CHECK(bayes.at("n").get<int>() == 4);
  CHECK(bayes.at("m").get<int>() == 16);
  CHECK(bayes.at("kind").is_string());
  CHECK(bayes.at("grid_labels").size() >= 4);

  for (auto const &id : instance_ids())
  {
    Json const row = instance_summary_json(generate(id));
    CHECK(row.at("id") == Json(id));
    CHECK(row.at("summary").is_string());
  }
}
