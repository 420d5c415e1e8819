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

#include "mup/market.hpp"
#include "mup/rational.hpp"
#include "mup/simulate.hpp"
#include "mup/valuation.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

namespace mup {

/// Seeded generator for reproducible trials. Draws below avoid
/// std::uniform_int_distribution on purpose: its output is
/// implementation-defined, mt19937_64 itself is not.
using Rng = std::mt19937_64;

inline int rand_int(Rng &rng, int lo, int hi)
{
  return lo + static_cast<int>(rng() % static_cast<unsigned long long>(hi - lo + 1));
}

inline Valuation random_additive(Rng &rng, int m, int cap)
{
  Rat const        a = Rat(rand_int(rng, 0, cap));
  std::vector<Rat> vals(static_cast<std::size_t>(m) + 1, Rat(0));
  for (int i = 1; i <= m; ++i)
  {
    vals[static_cast<std::size_t>(i)] = a * i;
  }
  return Valuation(vals);
}

/// Decreasing marginals drawn from 0..cap.
inline Valuation random_submodular(Rng &rng, int m, int cap)
{
  std::vector<Rat> marg(static_cast<std::size_t>(m));
  for (auto &x : marg)
  {
    x = Rat(rand_int(rng, 0, cap));
  }
  std::sort(marg.begin(), marg.end(), [](Rat const &a, Rat const &b) { return a > b; });
  return Valuation::from_marginals(marg);
}

/// Pointwise maximum of a few capped linear clauses. Each clause has a
/// nonincreasing per-item average, hence so does the maximum.
inline Valuation random_xos(Rng &rng, int m, int cap)
{
  int const clauses = rand_int(rng, 1, 3);
  std::vector<Rat> vals(static_cast<std::size_t>(m) + 1, Rat(0));
  for (int c = 0; c < clauses; ++c)
  {
    int const slope   = rand_int(rng, 0, cap);
    int const ceiling = rand_int(rng, 0, cap * m);
    for (int i = 1; i <= m; ++i)
    {
      Rat const clause = rat_min(Rat(slope) * i, Rat(ceiling));
      vals[static_cast<std::size_t>(i)] = rat_max(vals[static_cast<std::size_t>(i)], clause);
    }
  }
  return Valuation(vals);
}

/// Builds values left to right inside the exact feasibility interval:
/// at least the previous value, at most every split sum.
inline Valuation random_subadditive(Rng &rng, int m, int cap)
{
  std::vector<Rat> vals(static_cast<std::size_t>(m) + 1, Rat(0));
  if (m >= 1)
  {
    vals[1] = Rat(rand_int(rng, 0, cap));
  }
  for (int i = 2; i <= m; ++i)
  {
    Rat lo = vals[static_cast<std::size_t>(i) - 1];
    Rat hi = vals[1] + vals[static_cast<std::size_t>(i) - 1];
    for (int j = 2; j <= i / 2; ++j)
    {
      hi = rat_min(hi, vals[static_cast<std::size_t>(j)] + vals[static_cast<std::size_t>(i - j)]);
    }
    Int const span = rat_floor(hi - lo);
    vals[static_cast<std::size_t>(i)] =
        lo + Rat(rand_int(rng, 0, static_cast<int>(span)));
  }
  return Valuation(vals);
}

/// Monotone values with unconstrained jumps.
inline Valuation random_general(Rng &rng, int m, int cap)
{
  std::vector<Rat> marg(static_cast<std::size_t>(m));
  for (auto &x : marg)
  {
    x = Rat(rand_int(rng, 0, cap));
  }
  return Valuation::from_marginals(marg);
}

inline Valuation random_valuation(Rng &rng, ValClass cls, int m, int cap)
{
  switch (cls)
  {
    case ValClass::Additive: return random_additive(rng, m, cap);
    case ValClass::Submodular: return random_submodular(rng, m, cap);
    case ValClass::Xos: return random_xos(rng, m, cap);
    case ValClass::Subadditive: return random_subadditive(rng, m, cap);
    case ValClass::General: return random_general(rng, m, cap);
  }
  return random_general(rng, m, cap);
}

inline Market random_market_in_class(Rng &rng, ValClass cls, int n, int m, int cap)
{
  std::vector<Valuation> agents;
  agents.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
  {
    agents.push_back(random_valuation(rng, cls, m, cap));
  }
  return Market(m, std::move(agents));
}

inline Market random_identical_pair(Rng &rng, ValClass cls, int m, int cap)
{
  Valuation const v = random_valuation(rng, cls, m, cap);
  return Market(m, {v, v});
}

/// Half-integer price vector over 0..cap.
inline Prices random_price_vector(Rng &rng, int m, int cap)
{
  Prices out(static_cast<std::size_t>(m));
  for (auto &p : out)
  {
    p = Rat(rand_int(rng, 0, 2 * cap), 2);
  }
  return out;
}

inline std::vector<int> random_order(Rng &rng, int n)
{
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  for (int i = n - 1; i > 0; --i)
  {
    std::swap(order[static_cast<std::size_t>(i)],
              order[static_cast<std::size_t>(rand_int(rng, 0, i))]);
  }
  return order;
}

}  // namespace mup
