#pragma once
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

/// Seeded certification suites. Each suite re-proves one welfare guarantee
/// on freshly drawn markets (or replays a fixed check set) and reports the
/// failures, if any, with enough detail to reproduce them. Trials carry
/// independent generators derived from (seed, trial index), so a report is
/// identical no matter how many worker threads run it.

#include "mup/bayes.hpp"
#include "mup/errors.hpp"
#include "mup/instances.hpp"
#include "mup/market.hpp"
#include "mup/pricing.hpp"
#include "mup/random_gen.hpp"
#include "mup/rational.hpp"
#include "mup/simulate.hpp"
#include "mup/valuation.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace mup {

/// Knobs for one suite run. Agent and item counts are inclusive bounds on
/// the drawn markets. Fixed suites (counterexamples, examples) ignore the
/// trial count and sizes; they run one trial per stored check.
struct SuiteConfig
{
  int           trials     = 200;
  int           max_agents = 5;
  int           min_items  = 1;
  int           max_items  = 8;
  int           value_cap  = 8;
  std::uint64_t seed       = 20260821;
  SearchOptions search;
};

struct TrialFailure
{
  int         trial = 0;
  std::string detail;
};

struct SuiteReport
{
  std::string               suite;
  int                       trials = 0;  // checks actually run
  std::vector<TrialFailure> failures;    // sorted by trial index

  bool ok() const { return failures.empty(); }
  int  passed() const { return trials - static_cast<int>(failures.size()); }
};

namespace detail {

/// nullopt on success, a failure description otherwise.
using TrialFn = std::function<std::optional<std::string>(int, Rng &)>;

inline SuiteReport run_trials(std::string suite, SuiteConfig const &config, int count,
                              TrialFn const &fn)
{
  SuiteReport report;
  report.suite  = std::move(suite);
  report.trials = count;

  std::vector<std::optional<std::string>> slots(static_cast<std::size_t>(count));
  std::atomic<int>                        next{0};
  auto const                              worker = [&]()
  {
    for (int t = next.fetch_add(1); t < count; t = next.fetch_add(1))
    {
      Rng rng(mix64(config.seed ^ mix64(static_cast<std::uint64_t>(t) + 1)));
      try
      {
        slots[static_cast<std::size_t>(t)] = fn(t, rng);
      }
      catch (std::exception const &e)
      {
        slots[static_cast<std::size_t>(t)] = std::string("exception: ") + e.what();
      }
    }
  };

  unsigned const hw = std::thread::hardware_concurrency();
  int const      workers =
      std::max(1, std::min({count, 8, hw == 0 ? 1 : static_cast<int>(hw)}));
  if (workers == 1)
  {
    worker();
  }
  else
  {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
    {
      pool.emplace_back(worker);
    }
    for (std::thread &thread : pool)
    {
      thread.join();
    }
  }

  for (int t = 0; t < count; ++t)
  {
    if (slots[static_cast<std::size_t>(t)])
    {
      report.failures.push_back({t, *slots[static_cast<std::size_t>(t)]});
    }
  }
  return report;
}

inline void validate_config(SuiteConfig const &config)
{
  if (config.trials < 1)
  {
    throw BadParams("trials must be positive");
  }
  if (config.max_agents < 1)
  {
    throw BadParams("agent bound must be positive");
  }
  if (config.min_items < 1 || config.max_items < config.min_items)
  {
    throw BadParams("item bounds must satisfy 1 <= min <= max");
  }
  if (config.value_cap < 1)
  {
    throw BadParams("value cap must be positive");
  }
  if (config.search.max_n < config.max_agents)
  {
    throw BadParams("search cap below the agent bound");
  }
}

inline std::string describe_market(Market const &market)
{
  std::string out = "m=" + std::to_string(market.m);
  for (Valuation const &v : market.agents)
  {
    out += " (";
    for (int i = 0; i <= v.items(); ++i)
    {
      out += (i == 0 ? "" : ",") + rat_to_string(v(i));
    }
    out += ")";
  }
  return out;
}

inline ValClass cycle_class(int trial)
{
  ValClass const order[] = {ValClass::Additive, ValClass::Submodular, ValClass::Xos,
                            ValClass::Subadditive, ValClass::General};
  return order[trial % 5];
}

/// One scheme trial: run the construction, re-evaluate its chosen candidate
/// with the adversarial engine, and demand guarantee * opt.
template <typename SchemeFn>
std::optional<std::string> scheme_trial(Rng &rng, SuiteConfig const &config, ValClass cls,
                                        SchemeFn const &scheme)
{
  int const    n      = rand_int(rng, 1, config.max_agents);
  int const    m      = rand_int(rng, config.min_items, config.max_items);
  Market const market = random_market_in_class(rng, cls, n, m, config.value_cap);

  SchemeResult const res = scheme(market);
  Rat const achieved =
      worst_case_welfare(market, res.candidates[static_cast<std::size_t>(res.chosen)],
                         config.search)
          .first;
  if (achieved >= res.guarantee * res.opt)
  {
    return std::nullopt;
  }
  return describe_market(market) + ": worst " + rat_to_string(achieved) + " < " +
         rat_to_string(res.guarantee) + " * " + rat_to_string(res.opt);
}

}  // namespace detail

inline std::vector<std::string> suite_ids()
{
  return {"oracle",     "submod23",    "submod57",        "uniform-half",
          "known-order", "dynamic-submod", "subadd13",    "subadd-2iden",
          "general-1m", "general-best-order", "counterexamples", "envelopes",
          "bayes",      "examples"};
}

inline SuiteReport run_suite(std::string const &id, SuiteConfig const &config = {})
{
  detail::validate_config(config);
  SearchOptions const search = config.search;

  if (id == "oracle")
  {
    return detail::run_trials(id, config, config.trials,
                              [&](int trial, Rng &rng) -> std::optional<std::string>
                              {
                                int const    n = rand_int(rng, 1, config.max_agents);
                                int const    m = rand_int(rng, config.min_items, config.max_items);
                                Market const market = random_market_in_class(
                                    rng, detail::cycle_class(trial), n, m, config.value_cap);
                                Prices const prices = random_price_vector(rng, m, config.value_cap);

                                Rat const worst = worst_case_welfare(market, prices, search).first;
                                Rat const worst_ref = worst_case_welfare_naive(market, prices);
                                if (worst != worst_ref)
                                {
                                  return detail::describe_market(market) + ": memoized worst " +
                                         rat_to_string(worst) + " != naive " +
                                         rat_to_string(worst_ref);
                                }
                                Rat const best     = best_case_welfare(market, prices, search).first;
                                Rat const best_ref = best_case_welfare_naive(market, prices);
                                if (best != best_ref)
                                {
                                  return detail::describe_market(market) + ": memoized best " +
                                         rat_to_string(best) + " != naive " +
                                         rat_to_string(best_ref);
                                }
                                return std::nullopt;
                              });
  }

  if (id == "submod23")
  {
    return detail::run_trials(id, config, config.trials,
                              [&](int, Rng &rng)
                              {
                                return detail::scheme_trial(rng, config, ValClass::Submodular,
                                                            [&](Market const &market)
                                                            { return scheme_submodular_23(market, search); });
                              });
  }

  if (id == "submod57")
  {
    return detail::run_trials(id, config, config.trials,
                              [&](int, Rng &rng)
                              {
                                return detail::scheme_trial(rng, config, ValClass::Submodular,
                                                            [&](Market const &market)
                                                            { return scheme_submodular_57(market, search); });
                              });
  }

  if (id == "uniform-half")
  {
    return detail::run_trials(id, config, config.trials,
                              [&](int, Rng &rng)
                              {
                                return detail::scheme_trial(rng, config, ValClass::Submodular,
                                                            [&](Market const &market)
                                                            { return scheme_uniform_half(market, search); });
                              });
  }

  if (id == "known-order")
  {
    return detail::run_trials(
        id, config, config.trials,
        [&](int, Rng &rng) -> std::optional<std::string>
        {
          int const    n      = rand_int(rng, 1, config.max_agents);
          int const    m      = rand_int(rng, config.min_items, config.max_items);
          Market const market = random_market_in_class(rng, ValClass::Submodular, n, m,
                                                       config.value_cap);
          std::vector<int> const order  = random_order(rng, n);
          Prices const           prices = scheme_known_order(market, order);
          Rat const achieved = worst_case_fixed_order(market, prices, order).first;
          Rat const opt      = optimal_welfare(market).first;
          if (achieved == opt)
          {
            return std::nullopt;
          }
          return detail::describe_market(market) + ": fixed-order welfare " +
                 rat_to_string(achieved) + " != opt " + rat_to_string(opt);
        });
  }

  if (id == "dynamic-submod")
  {
    return detail::run_trials(
        id, config, config.trials,
        [&](int, Rng &rng) -> std::optional<std::string>
        {
          int const    n      = rand_int(rng, 1, config.max_agents);
          int const    m      = rand_int(rng, config.min_items, config.max_items);
          Market const market = random_market_in_class(rng, ValClass::Submodular, n, m,
                                                       config.value_cap);
          Rat const achieved =
              worst_case_welfare_dynamic(market, dynamic_policy_submodular(market), search).first;
          Rat const opt = optimal_welfare(market).first;
          if (achieved == opt)
          {
            return std::nullopt;
          }
          return detail::describe_market(market) + ": dynamic welfare " +
                 rat_to_string(achieved) + " != opt " + rat_to_string(opt);
        });
  }

  if (id == "subadd13")
  {
    return detail::run_trials(id, config, config.trials,
                              [&](int, Rng &rng)
                              {
                                return detail::scheme_trial(rng, config, ValClass::Subadditive,
                                                            [&](Market const &market)
                                                            { return scheme_subadditive_third(market, search); });
                              });
  }

  if (id == "subadd-2iden")
  {
    return detail::run_trials(
        id, config, config.trials,
        [&](int, Rng &rng) -> std::optional<std::string>
        {
          int const    m      = rand_int(rng, config.min_items, config.max_items);
          Market const market = random_identical_pair(rng, ValClass::Subadditive, m,
                                                      config.value_cap);
          SchemeResult const res = scheme_two_identical_subadditive(market, search);
          Rat const          achieved =
              worst_case_welfare(market, res.candidates[static_cast<std::size_t>(res.chosen)],
                                 search)
                  .first;
          if (achieved >= res.guarantee * res.opt)
          {
            return std::nullopt;
          }
          return detail::describe_market(market) + ": worst " + rat_to_string(achieved) +
                 " < " + rat_to_string(res.guarantee) + " * " + rat_to_string(res.opt);
        });
  }

  if (id == "general-1m")
  {
    return detail::run_trials(id, config, config.trials,
                              [&](int, Rng &rng)
                              {
                                return detail::scheme_trial(rng, config, ValClass::General,
                                                            [&](Market const &market)
                                                            { return scheme_general_1m(market, search); });
                              });
  }

  if (id == "general-best-order")
  {
    return detail::run_trials(
        id, config, config.trials,
        [&](int, Rng &rng) -> std::optional<std::string>
        {
          int const    n      = rand_int(rng, 1, config.max_agents);
          int const    m      = rand_int(rng, config.min_items, config.max_items);
          Market const market = random_market_in_class(rng, ValClass::General, n, m,
                                                       config.value_cap);
          auto const [prices, order] = scheme_general_best_order(market, search);
          Rat const achieved         = worst_case_fixed_order(market, prices, order).first;
          Rat const opt              = optimal_welfare(market).first;
          if (achieved * 2 >= opt)
          {
            return std::nullopt;
          }
          return detail::describe_market(market) + ": chosen-order welfare " +
                 rat_to_string(achieved) + " < half of opt " + rat_to_string(opt);
        });
  }

  if (id == "counterexamples")
  {
    std::vector<std::string> const ids = instance_ids();
    return detail::run_trials(id, config, static_cast<int>(ids.size()),
                              [&, ids](int trial, Rng &) -> std::optional<std::string>
                              {
                                try
                                {
                                  verify_bound(generate(ids[static_cast<std::size_t>(trial)]),
                                               search);
                                  return std::nullopt;
                                }
                                catch (BoundViolated const &e)
                                {
                                  return std::string(e.what());
                                }
                              });
  }

  if (id == "envelopes")
  {
    return detail::run_trials(
        id, config, config.trials,
        [&](int trial, Rng &rng) -> std::optional<std::string>
        {
          int const       m = rand_int(rng, config.min_items, config.max_items);
          Valuation const v =
              random_valuation(rng, detail::cycle_class(trial), m, config.value_cap);
          Valuation const x = minimal_xos_envelope(v);
          Valuation const s = minimal_submodular_envelope(v);

          if (!is_xos(x) || !is_submodular(s))
          {
            return "envelope left its class for " + detail::describe_market(Market(m, {v}));
          }
          for (int i = 0; i <= m; ++i)
          {
            if (v(i) > x(i) || x(i) > s(i))
            {
              return "domination chain broke at quantity " + std::to_string(i) + " for " +
                     detail::describe_market(Market(m, {v}));
            }
          }
          if (minimal_xos_envelope(x) != x || minimal_submodular_envelope(s) != s)
          {
            return "envelope is not idempotent for " + detail::describe_market(Market(m, {v}));
          }

          // Minimality: any random in-class upper bound sits above the
          // envelope. The bound is an unrelated draw, rescaled to dominate.
          {
            std::vector<Rat> raw = random_xos(rng, m, config.value_cap).values();
            for (int i = 0; i <= m; ++i)
            {
              raw[static_cast<std::size_t>(i)] += i;
            }
            Valuation const u(raw);
            Rat             lambda = 0;
            for (int i = 1; i <= m; ++i)
            {
              lambda = rat_max(lambda, v(i) / u(i));
            }
            for (int i = 0; i <= m; ++i)
            {
              if (x(i) > lambda * u(i))
              {
                return "a dominating max-of-additive bound undercut the envelope at quantity " +
                       std::to_string(i);
              }
            }
          }
          {
            std::vector<Rat> raw = random_submodular(rng, m, config.value_cap).values();
            for (int i = 0; i <= m; ++i)
            {
              raw[static_cast<std::size_t>(i)] += i;
            }
            Valuation const u(raw);
            Rat             lambda = 0;
            for (int i = 1; i <= m; ++i)
            {
              lambda = rat_max(lambda, v(i) / u(i));
            }
            for (int i = 0; i <= m; ++i)
            {
              if (s(i) > lambda * u(i))
              {
                return "a dominating concave bound undercut the envelope at quantity " +
                       std::to_string(i);
              }
            }
          }

          // Factor-2 sandwich for subadditive inputs.
          Valuation const vsub   = random_subadditive(rng, m, config.value_cap);
          Rat const       factor = closeness_factor(vsub, minimal_xos_envelope(vsub));
          if (factor > 2)
          {
            return "closeness " + rat_to_string(factor) + " > 2 for " +
                   detail::describe_market(Market(m, {vsub}));
          }
          return std::nullopt;
        });
  }

  if (id == "bayes")
  {
    return detail::run_trials(
        id, config, config.trials,
        [&](int trial, Rng &rng) -> std::optional<std::string>
        {
          std::uint64_t const trial_seed =
              detail::mix64(config.seed ^ detail::mix64(static_cast<std::uint64_t>(trial) + 77));

          // Finite-support product distribution, at most four profiles.
          int const m = rand_int(rng, config.min_items, config.max_items);
          ValuationDistribution dist;
          dist.m        = m;
          dist.declared = ValClass::Xos;
          int const n   = rand_int(rng, 1, 2);
          for (int i = 0; i < n; ++i)
          {
            if (rand_int(rng, 0, 1) == 0)
            {
              dist.agents.push_back({{Rat(1), random_xos(rng, m, config.value_cap)}});
            }
            else
            {
              dist.agents.push_back({{Rat(1, 3), random_xos(rng, m, config.value_cap)},
                                     {Rat(2, 3), random_xos(rng, m, config.value_cap)}});
            }
          }
          validate_distribution(dist);

          Rat const    eopt = exhaustive_expected_opt(dist);
          Prices const half = uniform_prices(m, eopt / (2 * Rat(m)));
          Rat const    ew   = exhaustive_expected_welfare(dist, half, search);
          if (ew * 2 < eopt)
          {
            return "expected welfare " + rat_to_string(ew) + " below half of expected opt " +
                   rat_to_string(eopt);
          }
          // A draw-clairvoyant adversary is at least as strong as any
          // realizable arrival process.
          Rat const seen = exhaustive_expected_welfare_clairvoyant(dist, half, search);
          if (seen > ew)
          {
            return "clairvoyant welfare " + rat_to_string(seen) + " above the sequential " +
                   rat_to_string(ew);
          }

          // Determinism: one seed, one estimate.
          if (expected_opt(dist, 16, trial_seed).mean != expected_opt(dist, 16, trial_seed).mean)
          {
            return "matching seeds disagree on the sampled expected optimum";
          }

          // Point masses: sampling is exact and the quarter bound holds.
          int const    pn = rand_int(rng, 1, config.max_agents);
          Market const market =
              random_market_in_class(rng, ValClass::Subadditive, pn, m, config.value_cap);
          ValuationDistribution const pm = point_mass(market, ValClass::Subadditive);
          if (expected_opt(pm, 5, trial_seed).mean != exhaustive_expected_opt(pm))
          {
            return "point-mass sampling missed the exhaustive optimum for " +
                   detail::describe_market(market);
          }
          auto const [prices, est] = bayes_prices_c_close(pm, Rat(2), 4, trial_seed, search);
          (void)prices;
          if (est.expected_welfare * 4 < est.expected_opt)
          {
            return "point-mass welfare " + rat_to_string(est.expected_welfare) +
                   " below a quarter of " + rat_to_string(est.expected_opt) + " for " +
                   detail::describe_market(market);
          }
          return std::nullopt;
        });
  }

  if (id == "examples")
  {
    return detail::run_trials(
        id, config, 2,
        [&](int trial, Rng &) -> std::optional<std::string>
        {
          Valuation const v({Rat(0), Rat(5), Rat(9), Rat(11)});
          if (trial == 0)
          {
            // Two identical agents at a uniform price of 4: the first buyer
            // is torn between one and two items; resolving to (2, 1) sells
            // everything at welfare 14.
            BestResponse const br = best_response(v, uniform_prices(3, Rat(4)));
            if (br.quantities != std::vector<int>{1, 2})
            {
              return std::string("argmax set is not {1, 2}");
            }
            Market const twins(3, {v, v});
            Outcome const out = simulate(twins, uniform_prices(3, Rat(4)), {0, 1}, {2, 1});
            if (out.welfare != 14)
            {
              return "welfare " + rat_to_string(out.welfare) + " != 14";
            }
            return std::nullopt;
          }

          // Mixed market: marginal pool, cutoff data, and the optimum.
          Market const market(3, {v, Valuation({Rat(0), Rat(2), Rat(4), Rat(5)})});
          MarginalProfile const profile = marginal_profile(market);
          std::vector<Rat> const pool{5, 4, 2, 2, 2, 1};
          if (profile.marginals != pool)
          {
            return std::string("marginal pool mismatch");
          }
          if (profile.b != 2 || profile.m_prime != 2 || profile.delta != 1 ||
              profile.epsilon != Rat(1, 2))
          {
            return std::string("cutoff data mismatch: b=") + rat_to_string(profile.b) +
                   " m'=" + std::to_string(profile.m_prime) + " delta=" +
                   rat_to_string(profile.delta) + " eps=" + rat_to_string(profile.epsilon);
          }
          if (optimal_welfare(market).first != 11)
          {
            return std::string("optimum is not 11");
          }
          return std::nullopt;
        });
  }

  throw UnknownId("no suite named '" + id + "'");
}

}  // namespace mup
