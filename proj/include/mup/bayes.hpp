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
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace mup {

/// One weighted point of an agent's finite valuation support.
struct SupportEntry
{
  Rat       prob;
  Valuation value;
};

/// Product distribution: each agent draws independently from its own
/// finite support. Sampling is a pure function of (seed, stream, index),
/// so estimates are reproducible bit for bit.
struct ValuationDistribution
{
  int                                    m = 0;
  ValClass                               declared = ValClass::General;
  std::vector<std::vector<SupportEntry>> agents;

  int n() const { return static_cast<int>(agents.size()); }
};

inline void validate_distribution(ValuationDistribution const &dist)
{
  if (dist.m < 0)
  {
    throw BadSupport("negative item count");
  }
  for (std::size_t i = 0; i < dist.agents.size(); ++i)
  {
    auto const &support = dist.agents[i];
    if (support.empty())
    {
      throw BadSupport("agent " + std::to_string(i) + " has empty support");
    }
    Rat total = 0;
    for (auto const &entry : support)
    {
      if (entry.prob <= 0)
      {
        throw BadSupport("agent " + std::to_string(i) + " has a non-positive probability");
      }
      if (entry.value.items() != dist.m)
      {
        throw BadSupport("agent " + std::to_string(i) + " support length mismatch");
      }
      total += entry.prob;
    }
    if (total != 1)
    {
      throw BadSupport("agent " + std::to_string(i) + " probabilities sum to " +
                       rat_to_string(total));
    }
  }
}

inline ValuationDistribution point_mass(Market const &market, ValClass declared)
{
  ValuationDistribution dist;
  dist.m        = market.m;
  dist.declared = declared;
  dist.agents.reserve(market.agents.size());
  for (auto const &v : market.agents)
  {
    dist.agents.push_back({SupportEntry{Rat(1), v}});
  }
  return dist;
}

namespace detail {

inline std::uint64_t mix64(std::uint64_t x)
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Exact CDF inversion: the hash is read as a rational in [0,1) and
/// compared against cumulative probabilities with no rounding.
inline Valuation const &draw(ValuationDistribution const &dist, std::size_t agent,
                             std::uint64_t seed, std::uint64_t stream, std::uint64_t index)
{
  std::uint64_t h = mix64(seed);
  h               = mix64(h ^ stream);
  h               = mix64(h ^ index);
  h               = mix64(h ^ static_cast<std::uint64_t>(agent));

  Rat const u(Int(h), Int(1) << 64);
  Rat       cum = 0;
  for (auto const &entry : dist.agents[agent])
  {
    cum += entry.prob;
    if (u < cum)
    {
      return entry.value;
    }
  }
  return dist.agents[agent].back().value;
}

/// Walks every profile of the product support, weighting by the product
/// probability. visit(prob, market) must not retain the reference.
template <typename F>
void for_each_profile(ValuationDistribution const &dist, F &&visit)
{
  std::size_t const      n = dist.agents.size();
  std::vector<std::size_t> pick(n, 0);
  std::vector<Valuation>   vals;
  for (;;)
  {
    vals.clear();
    Rat prob = 1;
    for (std::size_t i = 0; i < n; ++i)
    {
      auto const &entry = dist.agents[i][pick[i]];
      prob *= entry.prob;
      vals.push_back(entry.value);
    }
    visit(prob, Market(dist.m, vals));

    std::size_t i = 0;
    while (i < n && ++pick[i] == dist.agents[i].size())
    {
      pick[i] = 0;
      ++i;
    }
    if (i == n)
    {
      break;
    }
  }
}

}  // namespace detail

inline Market sample_market(ValuationDistribution const &dist, std::uint64_t seed,
                            std::uint64_t stream, std::uint64_t index)
{
  validate_distribution(dist);
  std::vector<Valuation> vals;
  vals.reserve(dist.agents.size());
  for (std::size_t i = 0; i < dist.agents.size(); ++i)
  {
    vals.push_back(detail::draw(dist, i, seed, stream, index));
  }
  return Market(dist.m, std::move(vals));
}

/// Sample mean plus the variance of that mean, both exact rationals, so
/// callers can run k-sigma checks without floating point.
struct MeanEstimate
{
  Rat mean;
  Rat variance_of_mean;
  int samples = 0;
};

inline MeanEstimate expected_opt(ValuationDistribution const &dist, int samples,
                                 std::uint64_t seed)
{
  if (samples < 1)
  {
    throw BadParams("samples must be at least 1");
  }
  validate_distribution(dist);

  Rat sum = 0;
  Rat sum_sq = 0;
  for (int s = 0; s < samples; ++s)
  {
    Rat const x = optimal_welfare(sample_market(dist, seed, 0, static_cast<std::uint64_t>(s))).first;
    sum += x;
    sum_sq += x * x;
  }
  MeanEstimate out;
  out.samples = samples;
  out.mean    = sum / samples;
  if (samples > 1)
  {
    Rat const var = (sum_sq - sum * out.mean) / (samples - 1);
    out.variance_of_mean = var / samples;
  }
  return out;
}

inline Rat exhaustive_expected_opt(ValuationDistribution const &dist)
{
  validate_distribution(dist);
  Rat total = 0;
  detail::for_each_profile(dist, [&](Rat const &prob, Market const &market) {
    total += prob * optimal_welfare(market).first;
  });
  return total;
}

/// Exact expected welfare against the strongest realizable adversary. The
/// adversary schedules arrivals and resolves ties knowing each arriving
/// agent's own draw and the public history (items sold so far), but never
/// draws that have not happened yet. Evaluated by a minimizing recursion
/// over (remaining agents, items sold) with the expectation taken as each
/// agent arrives.
inline Rat exhaustive_expected_welfare(ValuationDistribution const &dist, Prices const &prices,
                                       SearchOptions const &opts = {})
{
  validate_distribution(dist);
  int const n = dist.n();
  int const m = dist.m;
  if (static_cast<int>(prices.size()) != m)
  {
    throw PriceCountMismatch(std::to_string(prices.size()) + " prices for m = " +
                             std::to_string(m));
  }
  if (n > opts.max_n)
  {
    throw SizeLimit(std::to_string(n) + " agents exceeds the cap of " +
                    std::to_string(opts.max_n) + " (raise SearchOptions::max_n to override)");
  }
  if (n == 0)
  {
    return 0;
  }

  Prices sorted = prices;
  std::sort(sorted.begin(), sorted.end());

  // argmax[i][e][s]: best-response sizes of agent i's support entry e once
  // s items are gone. Stock is always the suffix of the ascending prices.
  std::vector<std::vector<std::vector<std::vector<int>>>> argmax(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
  {
    auto &per_entry = argmax[static_cast<std::size_t>(i)];
    per_entry.resize(dist.agents[static_cast<std::size_t>(i)].size());
    for (std::size_t e = 0; e < per_entry.size(); ++e)
    {
      per_entry[e].resize(static_cast<std::size_t>(m) + 1);
      for (int s = 0; s <= m; ++s)
      {
        Prices const remaining(sorted.begin() + s, sorted.end());
        per_entry[e][static_cast<std::size_t>(s)] =
            best_response(dist.agents[static_cast<std::size_t>(i)][e].value, remaining).quantities;
      }
    }
  }

  std::unordered_map<std::uint64_t, Rat> memo;
  auto const key = [m](std::uint64_t mask, int s) {
    return mask * static_cast<std::uint64_t>(m + 1) + static_cast<std::uint64_t>(s);
  };

  std::function<Rat(std::uint64_t, int)> rec = [&](std::uint64_t mask, int s) -> Rat {
    if (mask == 0)
    {
      return 0;
    }
    if (auto const it = memo.find(key(mask, s)); it != memo.end())
    {
      return it->second;
    }
    std::optional<Rat> best;
    for (int i = 0; i < n; ++i)
    {
      if (!(mask & (std::uint64_t(1) << i)))
      {
        continue;
      }
      // The next arrival is chosen before its draw is revealed, so the
      // candidate value is an expectation over the agent's support.
      Rat value = 0;
      for (std::size_t e = 0; e < dist.agents[static_cast<std::size_t>(i)].size(); ++e)
      {
        auto const        &entry = dist.agents[static_cast<std::size_t>(i)][e];
        std::optional<Rat> inner;
        for (int k : argmax[static_cast<std::size_t>(i)][e][static_cast<std::size_t>(s)])
        {
          Rat const cand = entry.value(k) + rec(mask & ~(std::uint64_t(1) << i), s + k);
          if (!inner || cand < *inner)
          {
            inner = cand;
          }
        }
        value += entry.prob * *inner;
      }
      if (!best || value < *best)
      {
        best = value;
      }
    }
    memo.emplace(key(mask, s), *best);
    return *best;
  };

  std::uint64_t const full = (n == 64) ? ~std::uint64_t(0) : ((std::uint64_t(1) << n) - 1);
  return rec(full, 0);
}

/// Diagnostic twin where the adversary additionally sees every draw up
/// front and minimizes each profile separately. No arrival process can
/// correlate an early tie break with a later agent's private draw, so this
/// is strictly stronger than the sequential adversary above and can dip
/// below guarantees that hold against it.
inline Rat exhaustive_expected_welfare_clairvoyant(ValuationDistribution const &dist,
                                                   Prices const &prices,
                                                   SearchOptions const &opts = {})
{
  validate_distribution(dist);
  Rat total = 0;
  detail::for_each_profile(dist, [&](Rat const &prob, Market const &market) {
    total += prob * worst_case_welfare(market, prices, opts).first;
  });
  return total;
}

struct BayesEstimate
{
  Rat           expected_opt;
  Rat           expected_welfare;
  int           samples = 0;
  std::uint64_t seed    = 0;
};

namespace detail {

template <typename Check>
std::pair<Prices, BayesEstimate> bayes_uniform_impl(ValuationDistribution const &dist,
                                                    int samples, std::uint64_t seed,
                                                    SearchOptions const &opts, Check &&check,
                                                    bool price_from_envelope)
{
  if (samples < 1)
  {
    throw BadParams("samples must be at least 1");
  }
  validate_distribution(dist);

  // Stream 0 estimates the price, stream 1 scores it on fresh draws.
  Rat opt_sum = 0;
  for (int s = 0; s < samples; ++s)
  {
    Market market = sample_market(dist, seed, 0, static_cast<std::uint64_t>(s));
    for (auto &v : market.agents)
    {
      check(v);
      if (price_from_envelope)
      {
        v = minimal_xos_envelope(v);
      }
    }
    opt_sum += optimal_welfare(market).first;
  }

  BayesEstimate est;
  est.samples      = samples;
  est.seed         = seed;
  est.expected_opt = opt_sum / samples;

  Prices const prices =
      dist.m == 0 ? Prices{} : uniform_prices(dist.m, est.expected_opt / (2 * dist.m));

  Rat welfare_sum = 0;
  for (int s = 0; s < samples; ++s)
  {
    Market const market = sample_market(dist, seed, 1, static_cast<std::uint64_t>(s));
    for (auto const &v : market.agents)
    {
      check(v);
    }
    welfare_sum += worst_case_welfare(market, prices, opts).first;
  }
  est.expected_welfare = welfare_sum / samples;
  return {prices, est};
}

}  // namespace detail

/// Uniform price of half the estimated per-item expected optimum. For
/// fractionally subadditive draws this secures half the expected optimal
/// welfare in every arrival order.
inline std::pair<Prices, BayesEstimate> bayes_uniform_xos(ValuationDistribution const &dist,
                                                          int samples, std::uint64_t seed,
                                                          SearchOptions const &opts = {})
{
  if (dist.declared != ValClass::Additive && dist.declared != ValClass::Submodular &&
      dist.declared != ValClass::Xos)
  {
    throw ClassMismatch(std::string("declared class is ") + to_string(dist.declared));
  }
  return detail::bayes_uniform_impl(
      dist, samples, seed, opts,
      [](Valuation const &v) {
        if (!is_xos(v))
        {
          throw ClassMismatch("sampled valuation is not fractionally subadditive");
        }
      },
      false);
}

/// Prices from the minimal fractionally-subadditive envelopes: uniform
/// half the per-item expected envelope optimum. Guarantees 1/(2c) of the
/// expected optimal welfare when every draw is within factor c of its
/// envelope. The returned expected_opt is the envelope optimum, an upper
/// bound on the real one.
inline std::pair<Prices, BayesEstimate> bayes_prices_c_close(ValuationDistribution const &dist,
                                                             Rat const &c, int samples,
                                                             std::uint64_t seed,
                                                             SearchOptions const &opts = {})
{
  if (c < 1)
  {
    throw BadParams("closeness factor below 1");
  }
  return detail::bayes_uniform_impl(
      dist, samples, seed, opts,
      [&c](Valuation const &v) {
        Rat factor;
        try
        {
          factor = closeness_factor(v, minimal_xos_envelope(v));
        }
        catch (CoverageError const &)
        {
          throw ClassMismatch("sampled valuation has no finite envelope factor");
        }
        if (factor > c)
        {
          throw ClassMismatch("sampled valuation is " + rat_to_string(factor) +
                              "-close, beyond " + rat_to_string(c));
        }
      },
      true);
}

}  // namespace mup
