//------------------------------------------------------------------------------
//
//   Copyright 2026 The mup authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#include "mup/pricing.hpp"
#include "mup/random_gen.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <numeric>

using namespace mup;

namespace {

Valuation val(std::vector<std::string> const &strs)
{
  std::vector<Rat> vals;
  vals.reserve(strs.size());
  for (auto const &s : strs)
  {
    vals.push_back(parse_rat(s));
  }
  return Valuation(vals);
}

/// m=3, marginals (5,4,2) and (2,2,1): cutoff b=2, eps=1/2, OPT=11.
Market two_agent_example()
{
  return Market(3, {val({"0", "5", "9", "11"}), val({"0", "2", "4", "5"})});
}

Rat worst_of(Market const &market, Prices const &prices)
{
  return worst_case_welfare(market, prices).first;
}

}  // namespace

TEST_CASE("two-thirds scheme: worked example")
{
  Market const market = two_agent_example();
  auto const   res    = scheme_submodular_23(market);

  REQUIRE(res.candidates.size() == 2);
  CHECK(res.candidates[0] == uniform_prices(3, Rat(3, 2)));
  CHECK(res.candidates[1] == Prices{Rat(3, 2), Rat(5, 2), Rat(5, 2)});
  CHECK(res.opt == 11);
  CHECK(res.guarantee == Rat(2, 3));

  CHECK(worst_of(market, res.candidates[0]) == 9);
  CHECK(worst_of(market, res.candidates[1]) == 9);
  CHECK(res.chosen == 0);
  CHECK((worst_of(market, res.candidates[static_cast<std::size_t>(res.chosen)]) >=
         res.guarantee * res.opt));
}

TEST_CASE("five-sevenths scheme: worked example")
{
  Market const market = two_agent_example();
  auto const   res    = scheme_submodular_57(market);

  // Pool values at least 2b=4: {5,4}, so two items get the top tier.
  REQUIRE(res.candidates.size() == 4);
  CHECK(res.candidates[0] == uniform_prices(3, Rat(3, 2)));
  CHECK(res.candidates[1] == Prices{Rat(3, 2), Rat(5, 2), Rat(5, 2)});
  CHECK(res.candidates[2] == Prices{Rat(3, 2), Rat(7, 2), Rat(7, 2)});
  CHECK(res.candidates[3] == Prices{Rat(3, 2), Rat(3, 2), Rat(5, 2)});
  CHECK(res.opt == 11);
  CHECK(res.guarantee == Rat(5, 7) - Rat(1, 3));

  for (auto const &cand : res.candidates)
  {
    CHECK(worst_of(market, cand) == 9);
  }
  CHECK(res.chosen == 0);
  CHECK((Rat(9) >= res.guarantee * res.opt));
}

TEST_CASE("five-sevenths scheme: vacuous guarantee at m=1")
{
  Market const market(1, {val({"0", "5"})});
  auto const   res = scheme_submodular_57(market);
  CHECK(res.guarantee == Rat(5, 7) - Rat(1));
  CHECK((res.guarantee < 0));
  for (auto const &cand : res.candidates)
  {
    CHECK(cand == uniform_prices(1, Rat(5, 2)));
  }
  CHECK(worst_of(market, res.candidates[static_cast<std::size_t>(res.chosen)]) == 5);
}

TEST_CASE("known order: worked example, both orders reach the optimum")
{
  Market const market = two_agent_example();

  Prices const p01 = scheme_known_order(market, {0, 1});
  CHECK(p01 == uniform_prices(3, Rat(3, 2)));
  CHECK(worst_case_fixed_order(market, p01, {0, 1}).first == 11);

  Prices const p10 = scheme_known_order(market, {1, 0});
  CHECK(p10 == Prices{Rat(3, 2), Rat(5, 2), Rat(5, 2)});
  CHECK(worst_case_fixed_order(market, p10, {1, 0}).first == 11);
}

TEST_CASE("known order: order validation")
{
  Market const market = two_agent_example();
  CHECK_THROWS_AS(scheme_known_order(market, {0}), InvalidOrder);
  CHECK_THROWS_AS(scheme_known_order(market, {0, 0}), InvalidOrder);
  CHECK_THROWS_AS(scheme_known_order(market, {0, 2}), InvalidOrder);
}

TEST_CASE("uniform half: worked example")
{
  Market const market = two_agent_example();
  auto const   res    = scheme_uniform_half(market);

  REQUIRE(res.candidates.size() == 2);
  CHECK(res.candidates[0] == uniform_prices(3, Rat(3, 2)));
  CHECK(res.candidates[1] == uniform_prices(3, Rat(5, 2)));
  CHECK(worst_of(market, res.candidates[0]) == 9);
  CHECK(worst_of(market, res.candidates[1]) == 9);
  CHECK(res.chosen == 0);
  CHECK(res.guarantee == Rat(1, 2));
  CHECK((Rat(9) >= res.opt / 2));
}

TEST_CASE("dynamic policy: worked example")
{
  Market const market = two_agent_example();
  auto const   policy = dynamic_policy_submodular(market);

  // Opening round: agent 1 holds two cutoff marginals but only one spare
  // cutoff slot exists, so one item sells low.
  CHECK(policy({0, 1}, 3) == Prices{Rat(3, 2), Rat(5, 2), Rat(5, 2)});

  // Agent 1 alone with both its cutoff slots available sells everything low.
  CHECK(policy({1}, 2) == uniform_prices(2, Rat(3, 2)));
  CHECK(policy({1}, 1) == uniform_prices(1, Rat(3, 2)));
  // Agent 0 alone can absorb all three items.
  CHECK(policy({0}, 3) == uniform_prices(3, Rat(3, 2)));

  // No completable allocation: agent 1 cannot take three items.
  CHECK_THROWS_AS(policy({1}, 3), PolicyDomainError);

  CHECK(worst_case_welfare_dynamic(market, policy).first == 11);
}

TEST_CASE("weak demand: every submodular scheme falls back to the tiny price")
{
  // One agent, one positive marginal, three items: the cutoff machinery
  // has no well-defined b, and the tiny price sells the agent its peak.
  Market const market(3, {val({"0", "5", "5", "5"})});
  Prices const tiny = uniform_prices(3, Rat(5, 2));

  auto const r23 = scheme_submodular_23(market);
  REQUIRE(r23.candidates.size() == 1);
  CHECK(r23.candidates[0] == tiny);
  CHECK(worst_of(market, r23.candidates[0]) == 5);
  CHECK(r23.opt == 5);

  auto const r57 = scheme_submodular_57(market);
  CHECK(r57.candidates == std::vector<Prices>{tiny});

  auto const rhalf = scheme_uniform_half(market);
  CHECK(rhalf.candidates == std::vector<Prices>{tiny});

  CHECK(scheme_known_order(market, {0}) == tiny);
  CHECK(worst_case_fixed_order(market, tiny, {0}).first == 5);

  auto const policy = dynamic_policy_submodular(market);
  CHECK(policy({0}, 3) == tiny);
  CHECK(worst_case_welfare_dynamic(market, policy).first == 5);
}

TEST_CASE("submodular preconditions reject a non-submodular agent")
{
  Market const bad(3, {val({"0", "2", "3", "9/2"})});
  CHECK_THROWS_AS(scheme_submodular_23(bad), NotSubmodular);
  CHECK_THROWS_AS(scheme_submodular_57(bad), NotSubmodular);
  CHECK_THROWS_AS(scheme_uniform_half(bad), NotSubmodular);
  CHECK_THROWS_AS(scheme_known_order(bad, {0}), NotSubmodular);
  CHECK_THROWS_AS(dynamic_policy_submodular(bad), NotSubmodular);
}

TEST_CASE("single additive agent: all submodular schemes sell everything")
{
  Market const market(3, {val({"0", "2", "4", "6"})});
  Rat const    opt = optimal_welfare(market).first;
  REQUIRE(opt == 6);

  auto const r23 = scheme_submodular_23(market);
  CHECK(worst_of(market, r23.candidates[static_cast<std::size_t>(r23.chosen)]) == 6);

  auto const r57 = scheme_submodular_57(market);
  CHECK(worst_of(market, r57.candidates[static_cast<std::size_t>(r57.chosen)]) == 6);

  auto const rhalf = scheme_uniform_half(market);
  CHECK(rhalf.candidates[0] == uniform_prices(3, Rat(1)));
  CHECK(worst_of(market, rhalf.candidates[static_cast<std::size_t>(rhalf.chosen)]) == 6);

  CHECK(worst_case_fixed_order(market, scheme_known_order(market, {0}), {0}).first == 6);
  CHECK(worst_case_welfare_dynamic(market, dynamic_policy_submodular(market)).first == 6);
}

TEST_CASE("subadditive third: worked example")
{
  Valuation const v = val({"0", "1", "1", "2"});
  Market const    market(3, {v, v});
  auto const      res = scheme_subadditive_third(market);

  // Envelope (0,1,3/2,2) per agent: pool {1,1,1/2,1/2,1/2,1/2}, b=1/2,
  // eps=1/4.
  REQUIRE(res.candidates.size() == 2);
  CHECK(res.candidates[0] == uniform_prices(3, Rat(3, 4)));
  CHECK(res.candidates[1] == uniform_prices(3, Rat(1, 4)));
  CHECK(res.opt == 2);
  CHECK(res.guarantee == Rat(1, 3));
  CHECK(worst_of(market, res.candidates[0]) == 2);
  CHECK(worst_of(market, res.candidates[1]) == 2);
  CHECK(res.chosen == 0);
}

TEST_CASE("subadditive third: submodular input uses its own profile")
{
  Market const market = two_agent_example();
  auto const   res    = scheme_subadditive_third(market);
  CHECK(res.candidates[0] == uniform_prices(3, Rat(5, 2)));
  CHECK(res.candidates[1] == uniform_prices(3, Rat(1)));
  CHECK(worst_of(market, res.candidates[0]) == 9);
  CHECK(worst_of(market, res.candidates[1]) == 5);
  CHECK(res.chosen == 0);
  CHECK((Rat(9) >= res.opt / 3));
}

TEST_CASE("subadditive third: envelope decides the weak-demand fallback")
{
  // Raw marginals of agent 0 hit zero inside the horizon, but both
  // envelopes stay strictly increasing, so the scheme prices normally.
  Market const market(5, {val({"0", "1", "1", "1", "1", "2"}),
                          val({"0", "2", "2", "2", "2", "2"})});
  auto const   res = scheme_subadditive_third(market);
  REQUIRE(res.candidates.size() == 2);
  CHECK(res.opt == 3);
  CHECK((worst_of(market, res.candidates[static_cast<std::size_t>(res.chosen)]) >=
         res.opt / 3));
}

TEST_CASE("subadditive third: rejects a non-subadditive agent")
{
  Market const bad(3, {val({"0", "1", "1", "3"})});
  CHECK_THROWS_AS(scheme_subadditive_third(bad), NotSubadditive);
}

TEST_CASE("two identical subadditive agents: worked example")
{
  Valuation const v = val({"0", "7", "8", "9", "10", "11", "12"});
  Market const    market(6, {v, v});
  auto const      res = scheme_two_identical_subadditive(market);

  REQUIRE(res.candidates.size() == 1);
  CHECK(res.opt == 18);
  CHECK(res.candidates[0] == uniform_prices(6, Rat(1)));
  CHECK(res.guarantee == Rat(2, 3));
  CHECK(worst_of(market, res.candidates[0]) == 12);
  CHECK((Rat(12) == res.guarantee * res.opt));
}

TEST_CASE("two identical subadditive agents: preconditions")
{
  CHECK_THROWS_AS(scheme_two_identical_subadditive(two_agent_example()), NotTwoIdentical);
  CHECK_THROWS_AS(scheme_two_identical_subadditive(Market(2, {val({"0", "1", "2"})})),
                  NotTwoIdentical);
  Valuation const gen = val({"0", "1", "1", "3"});
  CHECK_THROWS_AS(scheme_two_identical_subadditive(Market(3, {gen, gen})), NotSubadditive);
}

TEST_CASE("one-over-m scheme: worked example")
{
  // Unit-demand value 1 plus a single-minded agent wanting all four.
  Market const market(4, {val({"0", "1", "1", "1", "1"}),
                          val({"0", "0", "0", "0", "4"})});
  auto const   res = scheme_general_1m(market);

  CHECK(res.opt == 4);
  REQUIRE(res.candidates.size() == 1);
  CHECK(res.candidates[0] == uniform_prices(4, Rat(3, 4)));
  CHECK(res.guarantee == Rat(1, 4));
  CHECK(worst_of(market, res.candidates[0]) == 1);
  CHECK((Rat(1) == res.opt * res.guarantee));
}

TEST_CASE("one-over-m scheme: averages above the benchmark do not matter")
{
  Market const market(2, {val({"0", "0", "10"}), val({"0", "6", "6"})});
  auto const   res = scheme_general_1m(market);
  CHECK(res.opt == 10);
  CHECK(res.candidates[0] == uniform_prices(2, Rat(4)));
  CHECK(worst_of(market, res.candidates[0]) == 6);
  CHECK((Rat(6) >= res.opt / 2));
}

TEST_CASE("one-over-m scheme: zero optimum prices at zero")
{
  Market const market(2, {val({"0", "0", "0"}), val({"0", "0", "0"})});
  auto const   res = scheme_general_1m(market);
  CHECK(res.opt == 0);
  CHECK(res.candidates[0] == uniform_prices(2, Rat(0)));
  CHECK(worst_of(market, res.candidates[0]) == 0);
}

TEST_CASE("best order scheme: worked example")
{
  Valuation const v = val({"0", "0", "31/16", "3", "3"});
  Market const    market(4, {v, v});
  auto const [prices, order] = scheme_general_best_order(market);

  // Envelope (0,1,2,3,3): b=1, profile eps 1/2, within-segment averages
  // shrink eps to 1/64.
  CHECK(prices == uniform_prices(4, Rat(63, 64)));
  CHECK(order == std::vector<int>{0, 1});
  Rat const achieved = worst_case_fixed_order(market, prices, order).first;
  CHECK(achieved == 3);
  Rat const opt = optimal_welfare(market).first;
  CHECK(opt == Rat(31, 8));
  CHECK((achieved >= opt / 2));
}

TEST_CASE("best order scheme: single additive agent")
{
  Market const market(3, {val({"0", "2", "4", "6"})});
  auto const [prices, order] = scheme_general_best_order(market);
  CHECK(prices == uniform_prices(3, Rat(1)));
  CHECK(order == std::vector<int>{0});
  CHECK(worst_case_fixed_order(market, prices, order).first == 6);
}

TEST_CASE("subadditive best responses shrink as the uniform price rises")
{
  Rng rng(411);
  for (int trial = 0; trial < 100; ++trial)
  {
    int const m = rand_int(rng, 1, 8);
    auto const v = random_subadditive(rng, m, 6);
    Rat const p1 = Rat(rand_int(rng, 0, 12), 2);
    Rat const p2 = p1 + Rat(rand_int(rng, 1, 6), 2);
    auto const r1 = best_response(v, uniform_prices(m, p1));
    auto const r2 = best_response(v, uniform_prices(m, p2));
    CHECK((r1.quantities.back() >= r2.quantities.back()));
  }
}

TEST_CASE("guarantees hold on random submodular markets")
{
  Rng rng(42);
  for (int trial = 0; trial < 200; ++trial)
  {
    int const    n      = rand_int(rng, 1, 5);
    int const    m      = rand_int(rng, 1, 8);
    Market const market = random_market_in_class(rng, ValClass::Submodular, n, m, 6);
    Rat const    opt    = optimal_welfare(market).first;

    auto const r23 = scheme_submodular_23(market);
    CHECK(r23.opt == opt);
    CHECK((worst_of(market, r23.candidates[static_cast<std::size_t>(r23.chosen)]) >=
           Rat(2, 3) * opt));

    auto const rhalf = scheme_uniform_half(market);
    CHECK((worst_of(market, rhalf.candidates[static_cast<std::size_t>(rhalf.chosen)]) >=
           opt / 2));

    // The low uniform candidate clears all stock whenever the cutoff exists.
    if (auto const profile = detail::try_profile(market.agents, market.m))
    {
      Prices const low     = uniform_prices(m, profile->b - profile->epsilon);
      auto const [w, wit]  = worst_case_welfare(market, low);
      auto const   outcome = simulate(market, low, wit.order, wit.ties);
      CHECK(outcome.welfare == w);
      int const sold = std::accumulate(outcome.allocation.begin(), outcome.allocation.end(), 0);
      CHECK(sold == m);
    }
  }
}

TEST_CASE("five-sevenths guarantee on random markets with seven or more items")
{
  Rng rng(43);
  for (int trial = 0; trial < 200; ++trial)
  {
    int const    n      = rand_int(rng, 1, 4);
    int const    m      = rand_int(rng, 7, 10);
    Market const market = random_market_in_class(rng, ValClass::Submodular, n, m, 6);
    auto const   res    = scheme_submodular_57(market);
    CHECK((worst_of(market, res.candidates[static_cast<std::size_t>(res.chosen)]) >=
           (Rat(5, 7) - Rat(1, m)) * res.opt));
  }
}

TEST_CASE("known order reaches OPT on random submodular markets and orders")
{
  Rng rng(44);
  for (int trial = 0; trial < 200; ++trial)
  {
    int const    n      = rand_int(rng, 1, 4);
    int const    m      = rand_int(rng, 1, 6);
    Market const market = random_market_in_class(rng, ValClass::Submodular, n, m, 6);
    auto const   order  = random_order(rng, n);
    Prices const prices = scheme_known_order(market, order);
    REQUIRE(prices.size() == static_cast<std::size_t>(m));
    CHECK(worst_case_fixed_order(market, prices, order).first ==
          optimal_welfare(market).first);
  }
}

TEST_CASE("dynamic policy reaches OPT on random submodular markets")
{
  Rng rng(45);
  for (int trial = 0; trial < 100; ++trial)
  {
    int const    n      = rand_int(rng, 1, 5);
    int const    m      = rand_int(rng, 1, 6);
    Market const market = random_market_in_class(rng, ValClass::Submodular, n, m, 6);
    auto const   policy = dynamic_policy_submodular(market);
    CHECK(worst_case_welfare_dynamic(market, policy).first ==
          optimal_welfare(market).first);
  }
}

TEST_CASE("one-third guarantee on random subadditive and fractionally-subadditive markets")
{
  Rng rng(46);
  for (int trial = 0; trial < 200; ++trial)
  {
    int const    n   = rand_int(rng, 1, 4);
    int const    m   = rand_int(rng, 1, 8);
    ValClass const cls = trial % 2 == 0 ? ValClass::Subadditive : ValClass::Xos;
    Market const market = random_market_in_class(rng, cls, n, m, 6);
    auto const   res    = scheme_subadditive_third(market);
    CHECK((worst_of(market, res.candidates[static_cast<std::size_t>(res.chosen)]) >=
           res.opt / 3));
  }
}

TEST_CASE("two-thirds guarantee on random identical subadditive pairs")
{
  Rng rng(47);
  for (int trial = 0; trial < 200; ++trial)
  {
    int const    m      = rand_int(rng, 1, 8);
    Market const market = random_identical_pair(rng, ValClass::Subadditive, m, 6);
    auto const   res    = scheme_two_identical_subadditive(market);
    CHECK((worst_of(market, res.candidates[0]) >= Rat(2, 3) * res.opt));
  }
}

TEST_CASE("one-over-m guarantee on random general markets")
{
  Rng rng(48);
  for (int trial = 0; trial < 200; ++trial)
  {
    int const    n      = rand_int(rng, 1, 4);
    int const    m      = rand_int(rng, 1, 6);
    Market const market = random_market_in_class(rng, ValClass::General, n, m, 6);
    auto const   res    = scheme_general_1m(market);
    CHECK((worst_of(market, res.candidates[0]) >= res.opt / m));
  }
}

TEST_CASE("best order guarantee on random general markets")
{
  Rng rng(49);
  for (int trial = 0; trial < 200; ++trial)
  {
    int const    n      = rand_int(rng, 1, 4);
    int const    m      = rand_int(rng, 1, 6);
    Market const market = random_market_in_class(rng, ValClass::General, n, m, 6);
    auto const [prices, order] = scheme_general_best_order(market);
    Rat const opt = optimal_welfare(market).first;
    CHECK((worst_case_fixed_order(market, prices, order).first * 2 >= opt));
  }
}

TEST_CASE("schemes on an empty supply are degenerate but well formed")
{
  Market const market(0, {Valuation({Rat(0)}), Valuation({Rat(0)})});
  CHECK(scheme_submodular_23(market).candidates == std::vector<Prices>{{}});
  CHECK(scheme_submodular_57(market).opt == 0);
  CHECK(scheme_uniform_half(market).guarantee == Rat(1, 2));
  CHECK(scheme_known_order(market, {0, 1}).empty());
  CHECK(scheme_subadditive_third(market).opt == 0);
  CHECK(scheme_two_identical_subadditive(market).opt == 0);
  CHECK(scheme_general_1m(market).opt == 0);
  auto const [prices, order] = scheme_general_best_order(market);
  CHECK(prices.empty());
  CHECK(order == std::vector<int>{0, 1});
}
