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

#include "mup/bayes.hpp"
#include "mup/errors.hpp"
#include "mup/market.hpp"
#include "mup/pricing.hpp"
#include "mup/rational.hpp"
#include "mup/simulate.hpp"
#include "mup/valuation.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace mup {

/// Which family of pricing schemes the instance's ceiling applies to.
enum class BoundKind
{
  AllStaticPrices,      // no static price vector beats the ceiling
  UniformStaticPrices,  // no single posted price beats it
  DynamicPrices,        // not even adaptive per-arrival repricing does
  BestOrderPrices,      // static prices plus a chosen arrival order
};

inline char const *to_string(BoundKind k)
{
  switch (k)
  {
    case BoundKind::AllStaticPrices: return "all static prices";
    case BoundKind::UniformStaticPrices: return "uniform static prices";
    case BoundKind::DynamicPrices: return "dynamic prices";
    case BoundKind::BestOrderPrices: return "static prices with a chosen order";
  }
  return "?";
}

/// A hard market (or market distribution) with a welfare ceiling attached.
///
/// claimed_bound is the ceiling as a fraction of opt. The price grid holds
/// one representative vector per region of the case analysis behind the
/// ceiling; verify_bound() replays the analysis on exactly those vectors.
/// tolerance widens the ratio check for the two instances whose ceiling is
/// an irrational constant snapped to a nearby rational.
struct NamedInstance
{
  std::string                          id;
  std::string                          summary;
  std::optional<Market>                market;
  std::optional<ValuationDistribution> distribution;
  std::vector<ValClass>                agent_classes;
  Rat                                  opt;
  Rat                                  claimed_bound;
  Rat                                  tolerance;
  BoundKind                            kind = BoundKind::AllStaticPrices;
  std::vector<Prices>                  price_grid;
  std::vector<std::string>             grid_labels;
  std::map<std::string, Rat>           params;
};

struct RegionCheck
{
  std::string label;
  Rat         observed;
  Rat         limit;
  bool        ok = false;
};

struct BoundReport
{
  std::string              id;
  std::vector<RegionCheck> regions;
};

namespace detail {

/// Pulls named parameters out of the caller's map, rejecting strays.
struct ParamReader
{
  std::string                id;
  std::map<std::string, Rat> in;
  std::set<std::string>      used;

  ParamReader(std::string name, std::map<std::string, Rat> params)
    : id(std::move(name)),
      in(std::move(params))
  {
  }

  long integer(std::string const &key, long fallback, long lo, long hi)
  {
    auto const it = in.find(key);
    if (it == in.end())
    {
      return fallback;
    }
    used.insert(key);
    if (denominator(it->second) != 1)
    {
      throw BadParams(id + ": " + key + " must be an integer");
    }
    Int const num = numerator(it->second);
    if (num < lo || num > hi)
    {
      throw BadParams(id + ": " + key + " must lie in " + std::to_string(lo) + ".." +
                      std::to_string(hi));
    }
    return num.convert_to<long>();
  }

  Rat rational(std::string const &key, Rat const &fallback)
  {
    auto const it = in.find(key);
    if (it == in.end())
    {
      return fallback;
    }
    used.insert(key);
    return it->second;
  }

  void done() const
  {
    for (auto const &[key, value] : in)
    {
      if (used.find(key) == used.end())
      {
        throw BadParams(id + ": unknown parameter " + key);
      }
    }
  }
};

inline Valuation unit_demand_val(int m, Rat const &worth)
{
  std::vector<Rat> xs(static_cast<std::size_t>(m) + 1, worth);
  xs[0] = 0;
  return Valuation(std::move(xs));
}

inline Valuation all_or_nothing_val(int m, Rat const &worth)
{
  std::vector<Rat> xs(static_cast<std::size_t>(m) + 1, Rat(0));
  xs.back() = worth;
  return Valuation(std::move(xs));
}

inline Valuation additive_val(int m, Rat const &slope)
{
  std::vector<Rat> xs(static_cast<std::size_t>(m) + 1);
  for (int i = 0; i <= m; ++i)
  {
    xs[static_cast<std::size_t>(i)] = slope * i;
  }
  return Valuation(std::move(xs));
}

inline std::string prices_to_string(Prices const &prices)
{
  if (!prices.empty() &&
      std::all_of(prices.begin(), prices.end(), [&](Rat const &p) { return p == prices[0]; }))
  {
    return "[" + rat_to_string(prices[0]) + " x" + std::to_string(prices.size()) + "]";
  }
  std::size_t const shown = std::min<std::size_t>(prices.size(), 12);
  std::string       out   = "[";
  for (std::size_t j = 0; j < shown; ++j)
  {
    if (j > 0)
    {
      out += ", ";
    }
    out += rat_to_string(prices[j]);
  }
  if (shown < prices.size())
  {
    out += ", ... +" + std::to_string(prices.size() - shown) + " more";
  }
  return out + "]";
}

/// Root of x^3 - 2x^2 - x + 1 in (2.2, 2.3), from below, within 1e-12.
/// The growth-rate constant behind the strongest submodular ceiling.
inline Rat cubic_root_beta()
{
  auto const f = [](Rat const &x) { return ((x - 2) * x - 1) * x + 1; };

  Rat lo(11, 5);
  Rat hi(23, 10);
  Rat const width(1, Int("1000000000000"));
  while (hi - lo > width)
  {
    Rat const mid = (lo + hi) / 2;
    if (f(mid) < 0)
    {
      lo = mid;
    }
    else
    {
      hi = mid;
    }
  }
  return lo;
}

/// Twenty digits of Euler's number as an exact rational.
inline Rat euler_20()
{
  return Rat(Int("27182818284590452354"), Int("10000000000000000000"));
}

inline Int floor_rat(Rat const &x)
{
  return numerator(x) / denominator(x);  // callers only pass x >= 0
}

inline void add_uniform(NamedInstance &inst, int m, Rat const &p, std::string label)
{
  inst.price_grid.push_back(uniform_prices(m, p));
  inst.grid_labels.push_back(std::move(label));
}

inline void add_vector(NamedInstance &inst, Prices prices, std::string label)
{
  inst.price_grid.push_back(std::move(prices));
  inst.grid_labels.push_back(std::move(label));
}

inline NamedInstance make_intro_example()
{
  NamedInstance inst;
  inst.id      = "intro_example";
  inst.summary = "two identical concave-marginal agents; uniform four forfeits the third sale";
  Valuation const v({Rat(0), Rat(5), Rat(9), Rat(11)});
  inst.market        = Market(3, {v, v});
  inst.agent_classes = {ValClass::Submodular, ValClass::Submodular};
  inst.opt           = 14;
  inst.claimed_bound = Rat(5, 7);
  inst.kind          = BoundKind::UniformStaticPrices;
  add_uniform(inst, 3, Rat(4), "uniform four");
  return inst;
}

inline NamedInstance make_prelim_example()
{
  NamedInstance inst;
  inst.id      = "prelim_example";
  inst.summary = "the two-agent walkthrough market; uniform four sells one item out of three";
  inst.market  = Market(3, {Valuation({Rat(0), Rat(5), Rat(9), Rat(11)}),
                            Valuation({Rat(0), Rat(2), Rat(4), Rat(5)})});
  inst.agent_classes = {ValClass::Submodular, ValClass::Submodular};
  inst.opt           = 11;
  inst.claimed_bound = Rat(5, 11);
  inst.kind          = BoundKind::UniformStaticPrices;
  add_uniform(inst, 3, Rat(4), "uniform four");
  return inst;
}

inline NamedInstance make_submod_2item()
{
  NamedInstance inst;
  inst.id      = "submod_2item";
  inst.summary = "two items, a single-item agent against an additive one; two thirds is all "
                 "any static prices get";
  inst.market        = Market(2, {unit_demand_val(2, Rat(2)), additive_val(2, Rat(1))});
  inst.agent_classes = {ValClass::Submodular, ValClass::Additive};
  inst.opt           = 3;
  inst.claimed_bound = Rat(2, 3);
  inst.kind          = BoundKind::AllStaticPrices;
  add_uniform(inst, 2, Rat(1, 2), "both cheap");
  add_vector(inst, {Rat(1, 2), Rat(3, 2)}, "split across one");
  add_uniform(inst, 2, Rat(1), "both at one");
  add_vector(inst, {Rat(1), Rat(3, 2)}, "one at each threshold");
  add_uniform(inst, 2, Rat(3, 2), "both above one");
  add_uniform(inst, 2, Rat(5, 2), "both above the single-item value");
  return inst;
}

inline NamedInstance make_submod_0802(std::map<std::string, Rat> params)
{
  ParamReader reader("submod_0802", std::move(params));
  long const  m = reader.integer("m", 10, 2, 64);
  reader.done();

  Rat const beta  = cubic_root_beta();
  Rat const alpha = Rat(1) / ((beta - 1) * (beta - 1));
  long const high_count = floor_rat(alpha * m).convert_to<long>();

  NamedInstance inst;
  inst.id      = "submod_0802";
  inst.summary = "single-item agents at two value levels; static prices stall near four fifths";
  std::vector<Valuation> agents;
  for (long i = 0; i < m; ++i)
  {
    agents.push_back(unit_demand_val(static_cast<int>(m), Rat(1)));
  }
  for (long i = 0; i < high_count; ++i)
  {
    agents.push_back(unit_demand_val(static_cast<int>(m), beta));
  }
  inst.market = Market(static_cast<int>(m), agents);
  inst.agent_classes.assign(agents.size(), ValClass::Submodular);
  inst.opt           = high_count * beta + (m - high_count);
  inst.claimed_bound = Rat(401, 500);
  inst.tolerance     = Rat(1, 1000);
  inst.kind          = BoundKind::AllStaticPrices;
  inst.params["m"]   = m;
  add_uniform(inst, static_cast<int>(m), Rat(1, 2), "uniform below both values");
  add_uniform(inst, static_cast<int>(m), Rat(1), "uniform at the low value");
  add_uniform(inst, static_cast<int>(m), Rat(3, 2), "uniform between the values");
  add_uniform(inst, static_cast<int>(m), beta, "uniform at the high value");
  add_uniform(inst, static_cast<int>(m), beta + Rat(1, 2), "uniform above both values");
  long const cheap = m - high_count;
  add_vector(inst, detail::two_tier_prices(static_cast<int>(m), static_cast<int>(cheap),
                                           Rat(1, 2), Rat(3, 2)),
             "two tiers, cheap slots for the low type");
  if (cheap + 1 <= m)
  {
    add_vector(inst, detail::two_tier_prices(static_cast<int>(m), static_cast<int>(cheap + 1),
                                             Rat(1, 2), Rat(3, 2)),
               "two tiers, one extra cheap slot");
  }
  return inst;
}

inline NamedInstance make_submod_uniform_2agents(std::map<std::string, Rat> params)
{
  ParamReader reader("submod_uniform_2agents", std::move(params));
  long const  m = reader.integer("m", 10, 2, 2000);
  reader.done();

  NamedInstance inst;
  inst.id      = "submod_uniform_2agents";
  inst.summary = "a single-item agent worth m against an additive drip; one posted price "
                 "cannot serve both";
  inst.market        = Market(static_cast<int>(m),
                              {unit_demand_val(static_cast<int>(m), Rat(m)),
                               additive_val(static_cast<int>(m), Rat(1))});
  inst.agent_classes = {ValClass::Submodular, ValClass::Additive};
  inst.opt           = 2 * m - 1;
  inst.claimed_bound = Rat(m, 2 * m - 1);
  inst.kind          = BoundKind::UniformStaticPrices;
  inst.params["m"]   = m;
  add_uniform(inst, static_cast<int>(m), Rat(1, 2), "uniform below the drip");
  add_uniform(inst, static_cast<int>(m), Rat(1), "uniform at the drip");
  add_uniform(inst, static_cast<int>(m), Rat(3, 2), "uniform above the drip");
  add_uniform(inst, static_cast<int>(m), Rat(m) - Rat(1, 2), "uniform just under the big value");
  add_uniform(inst, static_cast<int>(m), Rat(m), "uniform at the big value");
  add_uniform(inst, static_cast<int>(m), Rat(m) + Rat(1, 2), "uniform above everything");
  return inst;
}

inline NamedInstance make_submod_identical(std::map<std::string, Rat> params)
{
  ParamReader reader("submod_identical", std::move(params));
  long const  n = reader.integer("n", 4, 2, 40);
  reader.done();

  long const m = n * n;
  std::vector<Rat> xs(static_cast<std::size_t>(m) + 1, Rat(0));
  for (long i = 1; i <= m; ++i)
  {
    xs[static_cast<std::size_t>(i)] = Rat(n + i);
  }
  Valuation const v(xs);

  NamedInstance inst;
  inst.id      = "submod_identical";
  inst.summary = "n identical agents with a big first step; uniform prices leak half the "
                 "step values";
  inst.market  = Market(static_cast<int>(m), std::vector<Valuation>(static_cast<std::size_t>(n), v));
  inst.agent_classes.assign(static_cast<std::size_t>(n), ValClass::Submodular);
  inst.opt           = 2 * n * n;
  inst.claimed_bound = Rat(n + 1, 2 * n);
  inst.kind          = BoundKind::UniformStaticPrices;
  inst.params["n"]   = n;
  add_uniform(inst, static_cast<int>(m), Rat(1, 2), "uniform below the tail marginal");
  add_uniform(inst, static_cast<int>(m), Rat(1), "uniform at the tail marginal");
  add_uniform(inst, static_cast<int>(m), Rat(3, 2), "uniform above the tail marginal");
  add_uniform(inst, static_cast<int>(m), Rat(n + 1), "uniform at the first step");
  add_uniform(inst, static_cast<int>(m), Rat(n + 1) + Rat(1, 2), "uniform above the first step");
  return inst;
}

inline NamedInstance make_xos_static_1e(std::map<std::string, Rat> params)
{
  ParamReader reader("xos_static_1e", std::move(params));
  long const  m = reader.integer("m", 1000, 3, 2000);
  reader.done();

  Rat const  e20 = euler_20();
  long const k   = floor_rat(Rat(m) / e20).convert_to<long>();

  std::vector<Rat> first(static_cast<std::size_t>(m) + 1, Rat(0));
  for (long i = 1; i <= m; ++i)
  {
    first[static_cast<std::size_t>(i)] = i < k ? Rat(k) : Rat(i);
  }

  std::vector<Rat> marginals;
  for (long j = 0; j < m - k; ++j)
  {
    marginals.emplace_back(m - k - j, m - 1 - j);
  }
  marginals.resize(static_cast<std::size_t>(m), Rat(0));

  NamedInstance inst;
  inst.id      = "xos_static_1e";
  inst.summary = "a block valuation against a coupon collector; static prices top out near "
                 "1 - 1/e of the optimum";
  inst.market  = Market(static_cast<int>(m),
                        {Valuation(first), Valuation::from_marginals(marginals)});
  inst.agent_classes = {ValClass::Xos, ValClass::Submodular};
  inst.opt           = m;
  inst.claimed_bound = (e20 - 1) / e20;
  inst.tolerance     = Rat(1, 1000);
  inst.kind          = BoundKind::AllStaticPrices;
  inst.params["m"]   = m;
  add_uniform(inst, static_cast<int>(m), Rat(1, 2 * k), "uniform under every positive marginal");
  add_uniform(inst, static_cast<int>(m), Rat(1, 2), "uniform at one half");
  add_uniform(inst, static_cast<int>(m), Rat(m - k, m - 1), "uniform at the top collector marginal");
  add_uniform(inst, static_cast<int>(m), Rat(1), "uniform at one");
  add_uniform(inst, static_cast<int>(m), Rat(1) + Rat(1, m), "uniform just above one");
  return inst;
}

inline NamedInstance make_xos_dynamic_56()
{
  NamedInstance inst;
  inst.id      = "xos_dynamic_56";
  inst.summary = "three items where even adaptive repricing loses a sixth of the optimum";
  inst.market  = Market(3, {Valuation({Rat(0), Rat(4), Rat(4), Rat(6)}),
                            unit_demand_val(3, Rat(1))});
  inst.agent_classes = {ValClass::Xos, ValClass::Submodular};
  inst.opt           = 6;
  inst.claimed_bound = Rat(5, 6);
  inst.kind          = BoundKind::DynamicPrices;
  add_uniform(inst, 3, Rat(1, 2), "first round, everything cheap");
  add_uniform(inst, 3, Rat(1), "first round, everything at one");
  add_vector(inst, {Rat(1, 2), Rat(2), Rat(2)}, "first round, one cheap item");
  add_uniform(inst, 3, Rat(3, 2), "first round, everything above one");
  add_uniform(inst, 3, Rat(101, 100), "first round, barely above one");
  add_vector(inst, {Rat(2), Rat(3), Rat(4)}, "first round, steep and uneven");
  return inst;
}

inline NamedInstance make_subadd_half(std::map<std::string, Rat> params)
{
  ParamReader reader("subadd_half", std::move(params));
  long const  m = reader.integer("m", 10, 3, 2000);
  reader.done();

  std::vector<Rat> xs(static_cast<std::size_t>(m) + 1, Rat(1));
  xs[0]                             = 0;
  xs[static_cast<std::size_t>(m)]   = 2;

  NamedInstance inst;
  inst.id      = "subadd_half";
  inst.summary = "an all-or-double agent against a tiny single-item one; static prices stop "
                 "at half for large m";
  inst.market  = Market(static_cast<int>(m),
                        {Valuation(xs), unit_demand_val(static_cast<int>(m), Rat(1, m - 1))});
  inst.agent_classes = {ValClass::Subadditive, ValClass::Submodular};
  inst.opt           = 2;
  inst.claimed_bound = Rat(m, 2 * (m - 1));
  inst.kind          = BoundKind::AllStaticPrices;
  inst.params["m"]   = m;
  add_uniform(inst, static_cast<int>(m), Rat(1, 2 * (m - 1)), "uniform below the tiny value");
  add_uniform(inst, static_cast<int>(m), Rat(1, m - 1), "uniform at the tiny value");
  add_uniform(inst, static_cast<int>(m), Rat(2, m - 1), "uniform above the tiny value");
  add_uniform(inst, static_cast<int>(m), Rat(1, 2), "uniform at one half");
  add_uniform(inst, static_cast<int>(m), Rat(1), "uniform at the plateau");
  add_uniform(inst, static_cast<int>(m), Rat(3, 2), "uniform above the plateau");
  Prices mixed(static_cast<std::size_t>(m), Rat(1));
  mixed[0] = Rat(1, 2 * (m - 1));
  add_vector(inst, std::move(mixed), "one token item, the rest at the plateau");
  return inst;
}

inline NamedInstance make_subadd_third(std::map<std::string, Rat> params)
{
  ParamReader reader("subadd_third", std::move(params));
  long const  m = reader.integer("m", 50, 3, 2000);
  reader.done();

  std::vector<Rat> xs(static_cast<std::size_t>(m) + 1, Rat(0));
  for (long i = 1; i < m; ++i)
  {
    xs[static_cast<std::size_t>(i)] = Rat(m - 1 + i);
  }
  xs[static_cast<std::size_t>(m)] = Rat(3 * m - 2);

  NamedInstance inst;
  inst.id      = "subadd_third";
  inst.summary = "a bulk bonus only the full bundle unlocks; one posted price approaches a "
                 "third of the optimum";
  inst.market  = Market(static_cast<int>(m),
                        {Valuation(xs), unit_demand_val(static_cast<int>(m), Rat(2)),
                         additive_val(static_cast<int>(m), Rat(1))});
  inst.agent_classes = {ValClass::Subadditive, ValClass::Submodular, ValClass::Additive};
  inst.opt           = 3 * m - 2;
  inst.claimed_bound = Rat(m + 2, 3 * m - 2);
  inst.kind          = BoundKind::UniformStaticPrices;
  inst.params["m"]   = m;
  add_uniform(inst, static_cast<int>(m), Rat(1, 2), "uniform below the additive drip");
  add_uniform(inst, static_cast<int>(m), Rat(1), "uniform at the additive drip");
  add_uniform(inst, static_cast<int>(m), Rat(3, 2), "uniform between the small values");
  add_uniform(inst, static_cast<int>(m), Rat(2), "uniform at the single-item value");
  add_uniform(inst, static_cast<int>(m), Rat(5, 2), "uniform above the single-item value");
  add_uniform(inst, static_cast<int>(m), Rat(m) + Rat(1, 2), "uniform above the big first step");
  return inst;
}

inline NamedInstance make_subadd_34_identical(std::map<std::string, Rat> params)
{
  ParamReader reader("subadd_34_identical", std::move(params));
  long const  m   = reader.integer("m", 12, 10, 2000);
  Rat const   eps = reader.rational("eps", Rat(1, m * m));
  reader.done();

  if (m % 2 != 0)
  {
    throw BadParams("subadd_34_identical: m must be even");
  }
  // opt = m - 2 - 2 eps needs the split (m/2, m/2) to beat (m/2 + a, m/2 - a).
  if (eps <= 0 || 8 * eps >= m - 8)
  {
    throw BadParams("subadd_34_identical: eps must lie in (0, (m - 8) / 8)");
  }

  std::vector<Rat> xs(static_cast<std::size_t>(m) + 1);
  for (long i = 0; i <= m; ++i)
  {
    if (i == 0)
    {
      xs[static_cast<std::size_t>(i)] = 0;
    }
    else if (i < m / 2)
    {
      xs[static_cast<std::size_t>(i)] = Rat(m, 4);
    }
    else if (i == m / 2)
    {
      xs[static_cast<std::size_t>(i)] = Rat(m, 2) - 1 - eps;
    }
    else
    {
      xs[static_cast<std::size_t>(i)] = Rat(m, 2);
    }
  }
  Valuation const v(xs);

  NamedInstance inst;
  inst.id      = "subadd_34_identical";
  inst.summary = "two identical plateau agents; pricing the even split cheap enough always "
                 "lets one agent overbuy";
  inst.market  = Market(static_cast<int>(m), {v, v});
  inst.agent_classes = {ValClass::Subadditive, ValClass::Subadditive};
  inst.opt           = Rat(m) - 2 - 2 * eps;
  inst.claimed_bound = Rat(3 * m, 4) / inst.opt;
  inst.kind          = BoundKind::AllStaticPrices;
  inst.params["m"]   = m;
  inst.params["eps"] = eps;
  add_uniform(inst, static_cast<int>(m), Rat(1, 4), "uniform cheap");
  add_uniform(inst, static_cast<int>(m), Rat(1, 2), "uniform at one half");
  add_uniform(inst, static_cast<int>(m), (Rat(m, 2) - 1 - eps) / Rat(m, 2),
              "uniform at the even-split average");
  add_uniform(inst, static_cast<int>(m), Rat(1), "uniform at one");
  add_uniform(inst, static_cast<int>(m), Rat(m, 4) + Rat(1, 2), "uniform above the shelf");
  add_vector(inst, detail::two_tier_prices(static_cast<int>(m), static_cast<int>(m / 2),
                                           Rat(1, 4), Rat(1)),
             "half the items cheap, half at one");
  add_vector(inst, detail::two_tier_prices(static_cast<int>(m), static_cast<int>(m / 2),
                                           Rat(1, 2), (Rat(m, 2) - 1) / Rat(m, 2)),
             "half cheap, half near the split average");
  return inst;
}

inline NamedInstance make_subadd_23_identical(std::map<std::string, Rat> params)
{
  ParamReader reader("subadd_23_identical", std::move(params));
  long const  m = reader.integer("m", 6, 2, 2000);
  reader.done();

  std::vector<Rat> xs(static_cast<std::size_t>(m) + 1, Rat(0));
  for (long i = 1; i <= m; ++i)
  {
    xs[static_cast<std::size_t>(i)] = Rat(m + i);
  }
  Valuation const v(xs);

  NamedInstance inst;
  inst.id      = "subadd_23_identical";
  inst.summary = "two identical agents with a big entry step; any single price loses a third "
                 "as m grows";
  inst.market  = Market(static_cast<int>(m), {v, v});
  inst.agent_classes = {ValClass::Subadditive, ValClass::Subadditive};
  inst.opt           = 3 * m;
  inst.claimed_bound = Rat(2 * m + 2, 3 * m);
  inst.kind          = BoundKind::UniformStaticPrices;
  inst.params["m"]   = m;
  add_uniform(inst, static_cast<int>(m), Rat(1, 2), "uniform below the tail marginal");
  add_uniform(inst, static_cast<int>(m), Rat(1), "uniform at the tail marginal");
  add_uniform(inst, static_cast<int>(m), Rat(3, 2), "uniform above the tail marginal");
  add_uniform(inst, static_cast<int>(m), Rat(m + 1), "uniform at the first-item value");
  add_uniform(inst, static_cast<int>(m), Rat(m + 2), "uniform above the first-item value");
  return inst;
}

inline NamedInstance make_general_1m(std::map<std::string, Rat> params)
{
  ParamReader reader("general_1m", std::move(params));
  long const  m = reader.integer("m", 5, 2, 2000);
  reader.done();

  NamedInstance inst;
  inst.id      = "general_1m";
  inst.summary = "a single-item agent can always block the grand-bundle agent, so 1/m is "
                 "the best any static prices do";
  inst.market  = Market(static_cast<int>(m),
                        {unit_demand_val(static_cast<int>(m), Rat(1)),
                         all_or_nothing_val(static_cast<int>(m), Rat(m))});
  inst.agent_classes = {ValClass::Submodular, ValClass::General};
  inst.opt           = m;
  inst.claimed_bound = Rat(1, m);
  inst.kind          = BoundKind::AllStaticPrices;
  inst.params["m"]   = m;
  add_uniform(inst, static_cast<int>(m), Rat(1, 2), "uniform at one half");
  add_uniform(inst, static_cast<int>(m), Rat(1, m), "uniform at the bundle average");
  add_uniform(inst, static_cast<int>(m), Rat(1), "uniform at the blocker's value");
  Prices mixed(static_cast<std::size_t>(m), Rat(2));
  mixed[0] = Rat(1, 2);
  add_vector(inst, std::move(mixed), "one affordable item, the rest out of reach");
  return inst;
}

inline NamedInstance make_general_best_order(std::map<std::string, Rat> params)
{
  ParamReader reader("general_best_order", std::move(params));
  long const  m   = reader.integer("m", 10, 4, 2000);
  Rat const   eps = reader.rational("eps", Rat(1, m * m));
  reader.done();

  if (m % 2 != 0)
  {
    throw BadParams("general_best_order: m must be even");
  }
  if (eps <= 0 || 2 * eps >= m)
  {
    throw BadParams("general_best_order: eps must lie in (0, m / 2)");
  }

  std::vector<Rat> xs(static_cast<std::size_t>(m) + 1, Rat(0));
  for (long i = m / 2; i <= m; ++i)
  {
    xs[static_cast<std::size_t>(i)] = i == m / 2 ? Rat(m, 2) - eps : Rat(m, 2) + 1;
  }
  Valuation const v(xs);

  NamedInstance inst;
  inst.id      = "general_best_order";
  inst.summary = "two identical cliff agents; even hand-picking the order, static prices "
                 "cannot serve both cliffs";
  inst.market  = Market(static_cast<int>(m), {v, v});
  inst.agent_classes = {ValClass::General, ValClass::General};
  inst.opt           = Rat(m) - 2 * eps;
  inst.claimed_bound = (Rat(m, 2) + 1) / inst.opt;
  inst.kind          = BoundKind::BestOrderPrices;
  inst.params["m"]   = m;
  inst.params["eps"] = eps;
  add_uniform(inst, static_cast<int>(m), Rat(1, 4), "uniform cheap");
  add_uniform(inst, static_cast<int>(m), Rat(1, 2), "uniform at one half");
  add_uniform(inst, static_cast<int>(m), Rat(1) - Rat(1, 2 * m), "uniform just under one");
  add_uniform(inst, static_cast<int>(m), (Rat(m, 2) - eps) / Rat(m, 2),
              "uniform at the cliff average");
  add_uniform(inst, static_cast<int>(m), Rat(1), "uniform at one");
  add_uniform(inst, static_cast<int>(m), Rat(3, 2), "uniform above one");
  add_vector(inst, detail::two_tier_prices(static_cast<int>(m), static_cast<int>(m / 2),
                                           Rat(1, 4), Rat(1)),
             "cliff-sized cheap block, the rest at one");
  return inst;
}

inline NamedInstance make_bayes_lower(std::map<std::string, Rat> params)
{
  ParamReader reader("bayes_lower", std::move(params));
  long const  n = reader.integer("n", 4, 2, 8);
  reader.done();

  long const m = n * n;

  ValuationDistribution dist;
  dist.m        = static_cast<int>(m);
  dist.declared = ValClass::General;
  for (long i = 0; i < n; ++i)
  {
    dist.agents.push_back({{Rat(n - 1, n), unit_demand_val(static_cast<int>(m), Rat(1))},
                           {Rat(1, n), all_or_nothing_val(static_cast<int>(m), Rat(m))}});
  }

  // E[opt] = (1 - (1 - 1/n)^n) m + (1 - 1/n)^n n: the grand bundle counts
  // whenever at least one agent drew it, else every small agent scores 1.
  Rat miss(1);
  for (long i = 0; i < n; ++i)
  {
    miss *= Rat(n - 1, n);
  }
  Rat const eopt = (1 - miss) * m + miss * n;

  NamedInstance inst;
  inst.id      = "bayes_lower";
  inst.summary = "independent agents that are rarely grand-bundle buyers; no static prices "
                 "beat 2/e of the expected optimum as n grows";
  inst.distribution  = dist;
  inst.opt           = eopt;
  inst.claimed_bound = Rat(2 * n - 1) / eopt;
  inst.kind          = BoundKind::AllStaticPrices;
  inst.params["n"]   = n;
  add_uniform(inst, static_cast<int>(m), Rat(3, 2), "every price above one");
  add_uniform(inst, static_cast<int>(m), Rat(1), "every price at one");
  add_uniform(inst, static_cast<int>(m), Rat(1, 2), "a price below one");
  Prices mixed(static_cast<std::size_t>(m), Rat(3, 2));
  mixed[0] = Rat(1, 2);
  add_vector(inst, std::move(mixed), "a single price below one");
  return inst;
}

inline NamedInstance make_envelope_tight_xos(std::map<std::string, Rat> params)
{
  ParamReader reader("envelope_tight_xos", std::move(params));
  long const  l = reader.integer("l", 39, 2, 512);
  reader.done();

  long const m = l * l;
  std::vector<Rat> xs(static_cast<std::size_t>(m) + 1, Rat(0));
  for (long i = 1; i <= m; ++i)
  {
    xs[static_cast<std::size_t>(i)] = i <= l ? Rat(1) : Rat(i, l);
  }

  NamedInstance inst;
  inst.id      = "envelope_tight_xos";
  inst.summary = "a plateau-then-ramp valuation sitting factor 2l/(l+1) below its concave "
                 "envelope";
  inst.market        = Market(static_cast<int>(m), {Valuation(xs)});
  inst.agent_classes = {ValClass::Xos};
  inst.opt           = l;
  inst.claimed_bound = Rat(2 * l, l + 1);
  inst.kind          = BoundKind::AllStaticPrices;
  inst.params["l"]   = l;
  return inst;
}

inline NamedInstance make_envelope_tight_subadd(std::map<std::string, Rat> params)
{
  ParamReader reader("envelope_tight_subadd", std::move(params));
  long const  l = reader.integer("l", 20, 2, 2000);
  reader.done();

  long const m = l + 1;
  std::vector<Rat> xs(static_cast<std::size_t>(m) + 1, Rat(1));
  xs[0]                           = 0;
  xs[static_cast<std::size_t>(m)] = 2;

  NamedInstance inst;
  inst.id      = "envelope_tight_subadd";
  inst.summary = "the all-or-double valuation sitting factor 2l/(l+1) below its "
                 "fractionally subadditive envelope";
  inst.market        = Market(static_cast<int>(m), {Valuation(xs)});
  inst.agent_classes = {ValClass::Subadditive};
  inst.opt           = 2;
  inst.claimed_bound = Rat(2 * l, l + 1);
  inst.kind          = BoundKind::AllStaticPrices;
  inst.params["l"]   = l;
  return inst;
}

}  // namespace detail

inline std::vector<std::string> instance_ids()
{
  return {
      "intro_example",
      "prelim_example",
      "submod_2item",
      "submod_0802",
      "submod_uniform_2agents",
      "submod_identical",
      "xos_static_1e",
      "xos_dynamic_56",
      "subadd_half",
      "subadd_third",
      "subadd_34_identical",
      "subadd_23_identical",
      "general_1m",
      "general_best_order",
      "bayes_lower",
      "envelope_tight_xos",
      "envelope_tight_subadd",
  };
}

inline NamedInstance generate(std::string const &id, std::map<std::string, Rat> const &params = {})
{
  if (id == "intro_example" || id == "prelim_example" || id == "submod_2item" ||
      id == "xos_dynamic_56")
  {
    detail::ParamReader reader(id, params);
    reader.done();
    if (id == "intro_example")
    {
      return detail::make_intro_example();
    }
    if (id == "prelim_example")
    {
      return detail::make_prelim_example();
    }
    if (id == "submod_2item")
    {
      return detail::make_submod_2item();
    }
    return detail::make_xos_dynamic_56();
  }
  if (id == "submod_0802")
  {
    return detail::make_submod_0802(params);
  }
  if (id == "submod_uniform_2agents")
  {
    return detail::make_submod_uniform_2agents(params);
  }
  if (id == "submod_identical")
  {
    return detail::make_submod_identical(params);
  }
  if (id == "xos_static_1e")
  {
    return detail::make_xos_static_1e(params);
  }
  if (id == "subadd_half")
  {
    return detail::make_subadd_half(params);
  }
  if (id == "subadd_third")
  {
    return detail::make_subadd_third(params);
  }
  if (id == "subadd_34_identical")
  {
    return detail::make_subadd_34_identical(params);
  }
  if (id == "subadd_23_identical")
  {
    return detail::make_subadd_23_identical(params);
  }
  if (id == "general_1m")
  {
    return detail::make_general_1m(params);
  }
  if (id == "general_best_order")
  {
    return detail::make_general_best_order(params);
  }
  if (id == "bayes_lower")
  {
    return detail::make_bayes_lower(params);
  }
  if (id == "envelope_tight_xos")
  {
    return detail::make_envelope_tight_xos(params);
  }
  if (id == "envelope_tight_subadd")
  {
    return detail::make_envelope_tight_subadd(params);
  }
  throw UnknownId(id);
}

namespace detail {

inline void check_region(BoundReport &report, RegionCheck check)
{
  report.regions.push_back(std::move(check));
}

inline void require_all_ok(BoundReport const &report)
{
  for (auto const &region : report.regions)
  {
    if (!region.ok)
    {
      throw BoundViolated(report.id + ": " + region.label + " (observed " +
                          rat_to_string(region.observed) + ", limit " +
                          rat_to_string(region.limit) + ")");
    }
  }
}

/// Class membership and closed-form optimum, shared by every market instance.
inline void verify_market_prologue(NamedInstance const &inst, BoundReport &report)
{
  Market const &market = *inst.market;
  long          in_class = 0;
  for (std::size_t i = 0; i < market.agents.size(); ++i)
  {
    if (is_in_class(market.agents[i], inst.agent_classes[i]))
    {
      ++in_class;
    }
  }
  check_region(report, {"every valuation lies in its declared class", Rat(in_class),
                        Rat(market.n()), in_class == market.n()});

  Rat const engine_opt = optimal_welfare(market).first;
  check_region(report, {"allocation search confirms the closed-form optimum", engine_opt,
                        inst.opt, engine_opt == inst.opt});
}

inline void verify_envelope_instance(NamedInstance const &inst, BoundReport &report)
{
  Valuation const &v = inst.market->agents[0];
  Valuation const  envelope =
      inst.id == "envelope_tight_xos" ? minimal_submodular_envelope(v) : minimal_xos_envelope(v);

  Rat const factor = closeness_factor(v, envelope);
  check_region(report, {"closeness to the envelope equals the closed form", factor,
                        inst.claimed_bound, factor == inst.claimed_bound});
  if (inst.params.at("l") > 19)
  {
    check_region(report, {"closeness clears nineteen tenths", factor, Rat(19, 10),
                          factor > Rat(19, 10)});
  }

  Valuation const again =
      inst.id == "envelope_tight_xos" ? minimal_submodular_envelope(envelope)
                                      : minimal_xos_envelope(envelope);
  check_region(report, {"the envelope is its own envelope", Rat(again == envelope ? 1 : 0),
                        Rat(1), again == envelope});
}

inline void verify_dynamic_instance(NamedInstance const &inst, BoundReport &report)
{
  Market const &market = *inst.market;
  Rat const     limit  = inst.claimed_bound * inst.opt;

  for (std::size_t g = 0; g < inst.price_grid.size(); ++g)
  {
    Prices const &prices = inst.price_grid[g];
    Rat const     low    = *std::min_element(prices.begin(), prices.end());

    // Whatever the later rounds charge, one first round already caps the run:
    // a cheap item lets the small agent start and strand the big one's third
    // item, and an expensive board stops the big agent after one item.
    bool ceiling_holds = false;
    Rat  ceiling;
    if (low <= 1)
    {
      auto const response = best_response(market.agents[1], prices);
      ceiling             = market.agents[1](1) + market.agents[0](2);
      ceiling_holds       = response.quantities.back() >= 1;
    }
    else
    {
      auto const response = best_response(market.agents[0], prices);
      ceiling             = market.agents[0](1) + market.agents[1](1);
      ceiling_holds       = response.quantities.back() <= 1;
    }
    check_region(report, {inst.grid_labels[g] + ": welfare ceiling binds", ceiling, limit,
                          ceiling_holds && ceiling <= limit});
  }
}

inline void verify_bayes_instance(NamedInstance const &inst, BoundReport &report,
                                  SearchOptions const &opts)
{
  ValuationDistribution const &dist = *inst.distribution;

  Rat const eopt = exhaustive_expected_opt(dist);
  check_region(report, {"support enumeration confirms the closed-form expected optimum", eopt,
                        inst.opt, eopt == inst.opt});

  long const n = dist.n();
  for (std::size_t g = 0; g < inst.price_grid.size(); ++g)
  {
    Prices const &prices = inst.price_grid[g];
    Rat const     low    = *std::min_element(prices.begin(), prices.end());
    // Above one only sure things sell; below one the bundle agent is blocked
    // whenever any small agent shows up first.
    Rat const limit = low >= 1 ? Rat(n) : Rat(2 * n - 1);
    Rat const ew    = exhaustive_expected_welfare(dist, prices, opts);
    check_region(report,
                 {inst.grid_labels[g] + ": expected welfare stays under the case bound", ew,
                  limit, ew <= limit});
  }
}

}  // namespace detail

/// Replays the case analysis behind the instance's ceiling: one adversarial
/// evaluation per grid region plus the structural facts the analysis leans
/// on. Throws BoundViolated on the first region that comes out too high.
inline BoundReport verify_bound(NamedInstance const &inst, SearchOptions opts = {})
{
  BoundReport report;
  report.id = inst.id;

  if (inst.distribution)
  {
    opts.max_n = std::max(opts.max_n, inst.distribution->n());
    detail::verify_bayes_instance(inst, report, opts);
    detail::require_all_ok(report);
    return report;
  }

  opts.max_n = std::max(opts.max_n, inst.market->n());
  detail::verify_market_prologue(inst, report);

  if (inst.id == "envelope_tight_xos" || inst.id == "envelope_tight_subadd")
  {
    detail::verify_envelope_instance(inst, report);
  }
  else if (inst.kind == BoundKind::DynamicPrices)
  {
    detail::verify_dynamic_instance(inst, report);
  }
  else
  {
    Rat const limit = (inst.claimed_bound + inst.tolerance) * inst.opt;
    for (std::size_t g = 0; g < inst.price_grid.size(); ++g)
    {
      Prices const &prices = inst.price_grid[g];
      Rat const     observed = inst.kind == BoundKind::BestOrderPrices
                                   ? best_case_welfare(*inst.market, prices, opts).first
                                   : worst_case_welfare(*inst.market, prices, opts).first;
      detail::check_region(report,
                           {inst.grid_labels[g] + " " + detail::prices_to_string(prices),
                            observed, limit, observed <= limit});
    }
  }

  detail::require_all_ok(report);
  return report;
}

}  // namespace mup
