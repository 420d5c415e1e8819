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
#include "mup/rational.hpp"
#include "mup/valuation.hpp"

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

namespace mup {

/// A market of m identical items and one symmetric valuation per agent.
struct Market
{
  int                    m = 0;
  std::vector<Valuation> agents;

  Market(int m_, std::vector<Valuation> agents_)
    : m(m_)
    , agents(std::move(agents_))
  {
    if (m < 0)
    {
      throw BadParams("negative item count");
    }
    for (std::size_t i = 0; i < agents.size(); ++i)
    {
      if (agents[i].items() != m)
      {
        throw LengthMismatch("agent " + std::to_string(i) + " is defined over " +
                             std::to_string(agents[i].items()) + " items, market has " +
                             std::to_string(m));
      }
    }
  }

  int n() const
  {
    return static_cast<int>(agents.size());
  }
};

/// Quantities per agent; sum(quantities) <= m.
struct Allocation
{
  std::vector<int> quantities;

  int total() const
  {
    int t = 0;
    for (int q : quantities)
    {
      t += q;
    }
    return t;
  }
};

namespace detail {

/// Common-denominator view of a market (and optional prices): every value is
/// multiplied by `scale` so all arithmetic runs over integers. Comparisons
/// and argmax sets are unchanged by the positive scaling.
struct ScaledMarket
{
  Int                           scale = 1;
  std::vector<std::vector<Int>> values;  // values[i][q] = v_i(q) * scale
  std::vector<Int>              prices;  // ascending, p[j] * scale

  Rat unscale(Int const &x) const
  {
    return Rat(x, scale);
  }
};

inline ScaledMarket scale_market(Market const &market, std::vector<Rat> const &prices)
{
  ScaledMarket out;
  for (auto const &agent : market.agents)
  {
    for (auto const &x : agent.values())
    {
      out.scale = lcm(out.scale, denominator(x));
    }
  }
  for (auto const &p : prices)
  {
    out.scale = lcm(out.scale, denominator(p));
  }
  out.values.reserve(market.agents.size());
  for (auto const &agent : market.agents)
  {
    std::vector<Int> row;
    row.reserve(agent.values().size());
    for (auto const &x : agent.values())
    {
      row.push_back(numerator(x) * (out.scale / denominator(x)));
    }
    out.values.push_back(std::move(row));
  }
  out.prices.reserve(prices.size());
  for (auto const &p : prices)
  {
    out.prices.push_back(numerator(p) * (out.scale / denominator(p)));
  }
  return out;
}

}  // namespace detail

/// Maximum achievable welfare and a witness allocation. Ties are broken
/// lexicographically: smallest q_0, then smallest q_1, and so on.
inline std::pair<Rat, Allocation> optimal_welfare(Market const &market)
{
  int const n = market.n();
  int const m = market.m;

  auto const scaled = detail::scale_market(market, {});

  // suffix[i][r] = best welfare over agents i..n-1 with r items available
  std::vector<std::vector<Int>> suffix(static_cast<std::size_t>(n) + 1,
                                       std::vector<Int>(static_cast<std::size_t>(m) + 1, Int(0)));
  for (int i = n - 1; i >= 0; --i)
  {
    for (int r = 0; r <= m; ++r)
    {
      Int best = 0;
      for (int q = 0; q <= r; ++q)
      {
        Int const cand = scaled.values[i][q] + suffix[i + 1][r - q];
        if (cand > best)
        {
          best = cand;
        }
      }
      suffix[i][r] = best;
    }
  }

  Allocation witness;
  witness.quantities.assign(static_cast<std::size_t>(n), 0);
  int r = m;
  for (int i = 0; i < n; ++i)
  {
    for (int q = 0; q <= r; ++q)
    {
      if (scaled.values[i][q] + suffix[i + 1][r - q] == suffix[i][r])
      {
        witness.quantities[static_cast<std::size_t>(i)] = q;
        r -= q;
        break;
      }
    }
  }
  return {scaled.unscale(suffix[0][m]), witness};
}

/// The cutoff machinery: V is the multiset of all n*m marginal values,
/// b the m-th largest element of V, m' = G(b) the number of marginals
/// strictly above b, and epsilon = delta/2 a separation radius.
///
/// delta is the smallest positive pairwise gap in V, additionally clamped
/// to b so that b - epsilon stays strictly positive (the source analysis
/// treats epsilon as "small enough"; the clamp makes that concrete without
/// weakening the separation property |x - y| >= 2 epsilon for x != y in V).
struct MarginalProfile
{
  std::vector<Rat> marginals;  // V, sorted descending, n*m entries
  Rat              delta;
  Rat              epsilon;
  Rat              b;
  int              m_prime  = 0;  // G(b)
  int              eq_b     = 0;  // E(b)
  int              positive = 0;  // G(0)

  /// Sum of the m largest marginals; equals OPT when all agents are
  /// submodular.
  Rat top_m_sum(int m) const
  {
    Rat out = 0;
    for (int i = 0; i < m; ++i)
    {
      out += marginals[static_cast<std::size_t>(i)];
    }
    return out;
  }
};

/// Computes the profile for an explicit valuation list (callers substitute
/// envelopes when a theorem asks for them). Throws InsufficientDemand when
/// fewer than m marginals are strictly positive; the schemes fall back to a
/// uniform epsilon price in that case.
inline MarginalProfile marginal_profile(std::vector<Valuation> const &vals, int m)
{
  MarginalProfile out;
  for (std::size_t i = 0; i < vals.size(); ++i)
  {
    if (vals[i].items() != m)
    {
      throw LengthMismatch("valuation " + std::to_string(i) + " not over " + std::to_string(m) +
                           " items");
    }
    for (int j = 1; j <= m; ++j)
    {
      out.marginals.push_back(vals[i].marginal(j));
    }
  }
  std::sort(out.marginals.begin(), out.marginals.end(), std::greater<Rat>());
  for (auto const &x : out.marginals)
  {
    if (x > 0)
    {
      ++out.positive;
    }
  }
  if (out.positive < m)
  {
    throw InsufficientDemand(std::to_string(out.positive) + " positive marginals for m = " +
                             std::to_string(m));
  }

  out.b = out.marginals[static_cast<std::size_t>(m) - 1];
  for (auto const &x : out.marginals)
  {
    if (x > out.b)
    {
      ++out.m_prime;
    }
    else if (x == out.b)
    {
      ++out.eq_b;
    }
  }

  out.delta = out.b;
  for (std::size_t i = 1; i < out.marginals.size(); ++i)
  {
    Rat const gap = out.marginals[i - 1] - out.marginals[i];
    if (gap > 0 && gap < out.delta)
    {
      out.delta = gap;
    }
  }
  out.epsilon = out.delta / 2;
  return out;
}

inline MarginalProfile marginal_profile(Market const &market)
{
  return marginal_profile(market.agents, market.m);
}

/// Splits every agent into m unit-demand agents, one per marginal. The
/// reduced market has the same optimal welfare, and any price vector earns
/// at least as much welfare in the original market as in the reduced one.
inline Market unit_demand_reduction(Market const &market)
{
  std::vector<Valuation> agents;
  agents.reserve(static_cast<std::size_t>(market.n()) * static_cast<std::size_t>(market.m));
  for (auto const &agent : market.agents)
  {
    for (int j = 1; j <= market.m; ++j)
    {
      std::vector<Rat> vals(static_cast<std::size_t>(market.m) + 1, agent.marginal(j));
      vals[0] = 0;
      agents.emplace_back(std::move(vals));
    }
  }
  return Market(market.m, std::move(agents));
}

}  // namespace mup
