#pragma once
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

#include "mup/errors.hpp"
#include "mup/market.hpp"
#include "mup/rational.hpp"
#include "mup/simulate.hpp"
#include "mup/valuation.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mup {

/// Output of a static pricing scheme: one or more candidate price vectors,
/// the index of the best one under exact adversarial evaluation, and the
/// guarantee factor the construction proves for that best candidate.
struct SchemeResult
{
  std::vector<Prices> candidates;
  int                 chosen = 0;
  Rat                 guarantee;
  Rat                 opt;
};

namespace detail {

inline void require_submodular(Market const &market)
{
  for (std::size_t i = 0; i < market.agents.size(); ++i)
  {
    if (!is_submodular(market.agents[i]))
    {
      throw NotSubmodular("agent " + std::to_string(i));
    }
  }
}

inline void require_subadditive(Market const &market)
{
  for (std::size_t i = 0; i < market.agents.size(); ++i)
  {
    if (!is_subadditive(market.agents[i]))
    {
      throw NotSubadditive("agent " + std::to_string(i));
    }
  }
}

inline std::optional<MarginalProfile> try_profile(std::vector<Valuation> const &vals, int m)
{
  try
  {
    return marginal_profile(vals, m);
  }
  catch (InsufficientDemand const &)
  {
    return std::nullopt;
  }
}

/// Smallest purchase size attaining an agent's maximum value.
inline int first_argmax(Valuation const &v)
{
  Rat const top = v(v.items());
  for (int q = 0; q <= v.items(); ++q)
  {
    if (v(q) == top)
    {
      return q;
    }
  }
  return v.items();
}

/// Fallback price for markets with fewer positive marginals than items
/// (where the cutoff machinery is undefined): a uniform price low enough
/// that every agent's unique best response is its smallest maximizer.
/// Total demand then fits the supply, so welfare equals the optimum in
/// every arrival order and tie resolution.
inline Rat tiny_uniform_price(Market const &market)
{
  std::optional<Rat> slope;
  for (auto const &v : market.agents)
  {
    int const jmax = first_argmax(v);
    for (int k = 0; k < jmax; ++k)
    {
      Rat const s = (v(jmax) - v(k)) / Rat(jmax - k);
      if (!slope || s < *slope)
      {
        slope = s;
      }
    }
  }
  return slope ? *slope / 2 : Rat(1, 2);
}

inline SchemeResult fallback_result(Market const &market, Rat const &guarantee)
{
  SchemeResult out;
  out.candidates = {uniform_prices(market.m, tiny_uniform_price(market))};
  out.chosen     = 0;
  out.guarantee  = guarantee;
  out.opt        = optimal_welfare(market).first;
  return out;
}

inline SchemeResult degenerate_result(Market const &market, Rat const &guarantee)
{
  SchemeResult out;
  out.candidates = {Prices{}};
  out.chosen     = 0;
  out.guarantee  = guarantee;
  out.opt        = optimal_welfare(market).first;
  return out;
}

/// count_low items at price `low` followed by the rest at price `high`.
inline Prices two_tier_prices(int m, int count_low, Rat const &low, Rat const &high)
{
  Prices out(static_cast<std::size_t>(m), high);
  for (int j = 0; j < count_low; ++j)
  {
    out[static_cast<std::size_t>(j)] = low;
  }
  return out;
}

inline int pick_best(Market const &market, std::vector<Prices> const &candidates,
                     SearchOptions const &opts)
{
  int                chosen = 0;
  std::optional<Rat> best;
  for (std::size_t c = 0; c < candidates.size(); ++c)
  {
    Rat const w = worst_case_welfare(market, candidates[c], opts).first;
    if (!best || w > *best)
    {
      best   = w;
      chosen = static_cast<int>(c);
    }
  }
  return chosen;
}

}  // namespace detail

/// Two-candidate scheme for submodular agents: all items at b-eps, or
/// m-m' items at b-eps and m' at b+eps. The better of the two secures at
/// least 2/3 of the optimal welfare. The profile is taken over the
/// unit-demand split of the market (which shares its value pool).
inline SchemeResult scheme_submodular_23(Market const &market, SearchOptions const &opts = {})
{
  detail::require_submodular(market);
  if (market.m == 0)
  {
    return detail::degenerate_result(market, Rat(2, 3));
  }

  auto const profile = detail::try_profile(unit_demand_reduction(market).agents, market.m);
  if (!profile)
  {
    return detail::fallback_result(market, Rat(2, 3));
  }

  Rat const low  = profile->b - profile->epsilon;
  Rat const high = profile->b + profile->epsilon;

  SchemeResult out;
  out.candidates = {uniform_prices(market.m, low),
                    detail::two_tier_prices(market.m, market.m - profile->m_prime, low, high)};
  out.chosen     = detail::pick_best(market, out.candidates, opts);
  out.guarantee  = Rat(2, 3);
  out.opt        = optimal_welfare(market).first;
  return out;
}

/// Four-candidate refinement reaching 5/7 - 1/m for submodular agents.
/// k counts pool values at least 2b; the separation radius is shrunk so
/// no pool value falls between 2b-eps and 2b.
inline SchemeResult scheme_submodular_57(Market const &market, SearchOptions const &opts = {})
{
  detail::require_submodular(market);
  Rat const guarantee = market.m == 0 ? Rat(0) : Rat(5, 7) - Rat(1, market.m);
  if (market.m == 0)
  {
    return detail::degenerate_result(market, guarantee);
  }

  auto const profile = detail::try_profile(market.agents, market.m);
  if (!profile)
  {
    return detail::fallback_result(market, guarantee);
  }

  Rat const two_b = 2 * profile->b;
  int       k     = 0;
  Rat       eps   = profile->epsilon;
  for (auto const &x : profile->marginals)
  {
    if (x >= two_b)
    {
      ++k;
    }
    Rat const dist = rat_abs(x - two_b);
    if (dist > 0 && dist / 2 < eps)
    {
      eps = dist / 2;
    }
  }

  Rat const low     = profile->b - eps;
  Rat const high    = profile->b + eps;
  int const  m      = market.m;
  int const  half_p = (profile->m_prime + 1) / 2;  // ceil(m'/2)

  SchemeResult out;
  out.candidates = {uniform_prices(m, low),
                    detail::two_tier_prices(m, m - profile->m_prime, low, high),
                    detail::two_tier_prices(m, m - k, low, two_b - eps),
                    detail::two_tier_prices(m, m - half_p, low, high)};
  out.chosen     = detail::pick_best(market, out.candidates, opts);
  out.guarantee  = guarantee;
  out.opt        = optimal_welfare(market).first;
  return out;
}

/// Known-order pricing for submodular agents: greedy cutoff allocation in
/// arrival order, low prices covering the prefix through the last agent
/// that receives a cutoff-valued item. Every agent then buys exactly its
/// optimal share, so min-over-ties welfare under `order` equals OPT.
inline Prices scheme_known_order(Market const &market, std::vector<int> const &order)
{
  detail::require_submodular(market);
  detail::validate_order(market, order);
  if (market.m == 0)
  {
    return {};
  }

  auto const profile = detail::try_profile(market.agents, market.m);
  if (!profile)
  {
    return uniform_prices(market.m, detail::tiny_uniform_price(market));
  }

  int const n = market.n();
  int       slots = market.m - profile->m_prime;  // items going to cutoff marginals
  int       last_cutoff_agent = -1;

  std::vector<int> x(static_cast<std::size_t>(n), 0);
  for (int pos = 0; pos < n; ++pos)
  {
    Valuation const &v = market.agents[static_cast<std::size_t>(order[static_cast<std::size_t>(pos)])];
    int k_i = 0;
    int y_i = 0;
    for (int j = 1; j <= market.m; ++j)
    {
      if (v.marginal(j) > profile->b)
      {
        ++k_i;
      }
      else if (v.marginal(j) == profile->b)
      {
        ++y_i;
      }
    }
    int const share = std::min(y_i, slots);
    slots -= share;
    x[static_cast<std::size_t>(pos)] = k_i + share;
    if (share > 0)
    {
      last_cutoff_agent = pos;
    }
  }
  int low_count = 0;
  for (int pos = 0; pos <= last_cutoff_agent; ++pos)
  {
    low_count += x[static_cast<std::size_t>(pos)];
  }

  return detail::two_tier_prices(market.m, low_count, profile->b - profile->epsilon,
                                 profile->b + profile->epsilon);
}

/// Uniform-price scheme for submodular agents: the better of b-eps and
/// b+eps guarantees half the optimal welfare.
inline SchemeResult scheme_uniform_half(Market const &market, SearchOptions const &opts = {})
{
  detail::require_submodular(market);
  if (market.m == 0)
  {
    return detail::degenerate_result(market, Rat(1, 2));
  }

  auto const profile = detail::try_profile(market.agents, market.m);
  if (!profile)
  {
    return detail::fallback_result(market, Rat(1, 2));
  }

  SchemeResult out;
  out.candidates = {uniform_prices(market.m, profile->b - profile->epsilon),
                    uniform_prices(market.m, profile->b + profile->epsilon)};
  out.chosen     = detail::pick_best(market, out.candidates, opts);
  out.guarantee  = Rat(1, 2);
  out.opt        = optimal_welfare(market).first;
  return out;
}

/// Dynamic pricing for submodular agents achieving the full optimum. Each
/// round reprices from the remaining agent set and stock: when some
/// remaining agent holds more cutoff-valued marginals than the spare
/// cutoff slots, a calibrated low block forces the next arrival to stay
/// within a completable allocation; otherwise everything sells low.
inline DynamicPolicy dynamic_policy_submodular(Market const &market)
{
  detail::require_submodular(market);

  auto const profile = detail::try_profile(market.agents, market.m);
  if (!profile)
  {
    Rat const p = detail::tiny_uniform_price(market);
    return [p](std::vector<int> const &, int items) { return uniform_prices(items, p); };
  }

  int const        n = market.n();
  std::vector<int> k(static_cast<std::size_t>(n), 0);
  std::vector<int> y(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i)
  {
    for (int j = 1; j <= market.m; ++j)
    {
      if (market.agents[static_cast<std::size_t>(i)].marginal(j) > profile->b)
      {
        ++k[static_cast<std::size_t>(i)];
      }
      else if (market.agents[static_cast<std::size_t>(i)].marginal(j) == profile->b)
      {
        ++y[static_cast<std::size_t>(i)];
      }
    }
  }

  Rat const low  = profile->b - profile->epsilon;
  Rat const high = profile->b + profile->epsilon;

  return [k, y, low, high](std::vector<int> const &remaining, int items) {
    int sum_k  = 0;
    int sum_ky = 0;
    for (int i : remaining)
    {
      sum_k += k[static_cast<std::size_t>(i)];
      sum_ky += k[static_cast<std::size_t>(i)] + y[static_cast<std::size_t>(i)];
    }
    if (sum_k > items || sum_ky < items)
    {
      throw PolicyDomainError("completable-allocation invariant broken at " +
                              std::to_string(items) + " items");
    }

    std::optional<int> min_k;
    for (int i : remaining)
    {
      if (y[static_cast<std::size_t>(i)] > items - sum_k)
      {
        if (!min_k || k[static_cast<std::size_t>(i)] < *min_k)
        {
          min_k = k[static_cast<std::size_t>(i)];
        }
      }
    }
    if (!min_k)
    {
      return uniform_prices(items, low);
    }
    return detail::two_tier_prices(items, *min_k + items - sum_k, low, high);
  };
}

/// Subadditive agents: prices derive from the cutoff of the minimal
/// submodular envelopes. The better of uniform b+eps and uniform b/2
/// secures a third of the optimal welfare.
inline SchemeResult scheme_subadditive_third(Market const &market, SearchOptions const &opts = {})
{
  detail::require_subadditive(market);
  if (market.m == 0)
  {
    return detail::degenerate_result(market, Rat(1, 3));
  }

  std::vector<Valuation> envelopes;
  envelopes.reserve(market.agents.size());
  for (auto const &v : market.agents)
  {
    envelopes.push_back(minimal_submodular_envelope(v));
  }

  auto const profile = detail::try_profile(envelopes, market.m);
  if (!profile)
  {
    return detail::fallback_result(market, Rat(1, 3));
  }

  SchemeResult out;
  out.candidates = {uniform_prices(market.m, profile->b + profile->epsilon),
                    uniform_prices(market.m, profile->b / 2)};
  out.chosen     = detail::pick_best(market, out.candidates, opts);
  out.guarantee  = Rat(1, 3);
  out.opt        = optimal_welfare(market).first;
  return out;
}

/// Two identical subadditive agents: a single uniform price of OPT/3m
/// guarantees two thirds of the optimum.
inline SchemeResult scheme_two_identical_subadditive(Market const &market,
                                                     SearchOptions const & = {})
{
  if (market.n() != 2 || !(market.agents[0] == market.agents[1]))
  {
    throw NotTwoIdentical(std::to_string(market.n()) + " agents");
  }
  detail::require_subadditive(market);
  if (market.m == 0)
  {
    return detail::degenerate_result(market, Rat(2, 3));
  }

  Rat const opt = optimal_welfare(market).first;

  SchemeResult out;
  out.candidates = {uniform_prices(market.m, opt / Rat(3 * market.m))};
  out.chosen     = 0;
  out.guarantee  = Rat(2, 3);
  out.opt        = opt;
  return out;
}

/// Arbitrary valuations: a uniform price just under the highest per-item
/// average of the optimal allocation guarantees OPT/m. The undercut is
/// half the gap to the next achievable per-item average, so no tie can
/// land between the price and that average.
inline SchemeResult scheme_general_1m(Market const &market, SearchOptions const & = {})
{
  Rat const guarantee = market.m == 0 ? Rat(0) : Rat(1, market.m);
  if (market.m == 0)
  {
    return detail::degenerate_result(market, guarantee);
  }

  auto const [opt, witness] = optimal_welfare(market);

  SchemeResult out;
  out.guarantee = guarantee;
  out.opt       = opt;
  out.chosen    = 0;
  if (opt == 0)
  {
    out.candidates = {uniform_prices(market.m, Rat(0))};
    return out;
  }

  Rat beta = 0;
  for (int i = 0; i < market.n(); ++i)
  {
    int const q = witness.quantities[static_cast<std::size_t>(i)];
    if (q > 0)
    {
      beta = rat_max(beta, market.agents[static_cast<std::size_t>(i)](q) / Rat(q));
    }
  }

  std::optional<Rat> runner_up;
  for (auto const &v : market.agents)
  {
    for (int q = 1; q <= market.m; ++q)
    {
      Rat const avg = v(q) / Rat(q);
      if (avg < beta && (!runner_up || avg > *runner_up))
      {
        runner_up = avg;
      }
    }
  }
  Rat const eps  = runner_up ? Rat((beta - *runner_up) / 2) : Rat(beta / 2);
  out.candidates = {uniform_prices(market.m, beta - eps)};
  return out;
}

/// Arbitrary valuations with a chosen arrival order: the best of uniform
/// b+eps (order-independent) and uniform b-eps under the identity order
/// or any single-agent-first order guarantees half the optimum. b comes
/// from the submodular envelopes; eps additionally undercuts every
/// within-segment average of the true valuations that falls below b.
inline std::pair<Prices, std::vector<int>> scheme_general_best_order(Market const &market,
                                                                     SearchOptions const &opts = {})
{
  int const        n = market.n();
  std::vector<int> identity(static_cast<std::size_t>(n));
  std::iota(identity.begin(), identity.end(), 0);
  if (market.m == 0)
  {
    return {Prices{}, identity};
  }

  std::vector<Valuation> envelopes;
  envelopes.reserve(market.agents.size());
  for (auto const &v : market.agents)
  {
    envelopes.push_back(minimal_submodular_envelope(v));
  }

  auto const profile = detail::try_profile(envelopes, market.m);
  if (!profile)
  {
    return {uniform_prices(market.m, detail::tiny_uniform_price(market)), identity};
  }

  // Shrink eps until no within-segment purchase with true average below b
  // is profitable at price b-eps. Segments are maximal runs of equal
  // envelope marginals.
  Rat eps = profile->epsilon;
  for (int i = 0; i < n; ++i)
  {
    Valuation const &v = market.agents[static_cast<std::size_t>(i)];
    Valuation const &u = envelopes[static_cast<std::size_t>(i)];
    int seg_start = 0;  // segment covers items seg_start+1 .. j
    for (int j = 1; j <= market.m; ++j)
    {
      if (j < market.m && u.marginal(j + 1) == u.marginal(j))
      {
        continue;
      }
      for (int s = seg_start; s < j; ++s)
      {
        for (int x = s + 1; x <= j; ++x)
        {
          Rat const avg = (v(x) - v(s)) / Rat(x - s);
          if (avg < profile->b)
          {
            Rat const slack = (profile->b - avg) / 2;
            if (slack < eps)
            {
              eps = slack;
            }
          }
        }
      }
      seg_start = j;
    }
  }

  Prices const high = uniform_prices(market.m, profile->b + eps);
  Prices const low  = uniform_prices(market.m, profile->b - eps);

  Prices           best_prices = high;
  std::vector<int> best_order  = identity;
  Rat              best_value  = worst_case_welfare(market, high, opts).first;

  auto const consider = [&](std::vector<int> const &order) {
    Rat const value = worst_case_fixed_order(market, low, order).first;
    if (value > best_value)
    {
      best_value  = value;
      best_prices = low;
      best_order  = order;
    }
  };

  consider(identity);
  for (int i = 1; i < n; ++i)
  {
    std::vector<int> order{i};
    for (int j = 0; j < n; ++j)
    {
      if (j != i)
      {
        order.push_back(j);
      }
    }
    consider(order);
  }
  return {best_prices, best_order};
}

}  // namespace mup
