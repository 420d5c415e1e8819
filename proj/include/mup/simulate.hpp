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
#include "mup/valuation.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace mup {

using Prices = std::vector<Rat>;

inline Prices uniform_prices(int m, Rat const &p)
{
  if (p < 0)
  {
    throw NegativePrice(rat_to_string(p));
  }
  return Prices(static_cast<std::size_t>(m), p);
}

/// A buyer's exact best response against a remaining stock of priced items.
/// `quantities` lists every utility-maximizing purchase size in ascending
/// order; buying k items always means the k cheapest remaining ones.
struct BestResponse
{
  Rat              utility;
  std::vector<int> quantities;
};

inline BestResponse best_response(Valuation const &v, Prices const &remaining)
{
  Prices sorted = remaining;
  std::sort(sorted.begin(), sorted.end());
  int const limit = std::min<int>(static_cast<int>(sorted.size()), v.items());

  BestResponse out;
  out.utility = 0;
  out.quantities = {0};
  Rat cost = 0;
  for (int k = 1; k <= limit; ++k)
  {
    if (sorted[static_cast<std::size_t>(k - 1)] < 0)
    {
      throw NegativePrice(rat_to_string(sorted[static_cast<std::size_t>(k - 1)]));
    }
    cost += sorted[static_cast<std::size_t>(k - 1)];
    Rat const u = v(k) - cost;
    if (u > out.utility)
    {
      out.utility = u;
      out.quantities.assign(1, k);
    }
    else if (u == out.utility)
    {
      out.quantities.push_back(k);
    }
  }
  return out;
}

struct Purchase
{
  int agent    = 0;
  int quantity = 0;
  Rat paid;
};

struct Outcome
{
  Rat                   welfare;
  Rat                   revenue;
  std::vector<int>      allocation;  // quantity per agent
  std::vector<Purchase> steps;       // in arrival order
};

namespace detail {

inline void validate_prices(Market const &market, Prices const &prices)
{
  if (static_cast<int>(prices.size()) != market.m)
  {
    throw PriceCountMismatch(std::to_string(prices.size()) + " prices for m = " +
                             std::to_string(market.m));
  }
  for (auto const &p : prices)
  {
    if (p < 0)
    {
      throw NegativePrice(rat_to_string(p));
    }
  }
}

inline void validate_order(Market const &market, std::vector<int> const &order)
{
  std::vector<char> seen(static_cast<std::size_t>(market.n()), 0);
  if (static_cast<int>(order.size()) != market.n())
  {
    throw InvalidOrder("order lists " + std::to_string(order.size()) + " of " +
                       std::to_string(market.n()) + " agents");
  }
  for (int a : order)
  {
    if (a < 0 || a >= market.n() || seen[static_cast<std::size_t>(a)])
    {
      throw InvalidOrder("agent " + std::to_string(a) + " repeated or out of range");
    }
    seen[static_cast<std::size_t>(a)] = 1;
  }
}

}  // namespace detail

/// Replays one arrival sequence. `ties` fixes the purchase size per arrival
/// and must pick a member of that arrival's argmax set; when empty, every
/// agent takes the canonical choice (the largest maximizer). Items always
/// sell cheapest-first, so the remaining stock is a suffix of the ascending
/// price list.
inline Outcome simulate(Market const &market, Prices const &prices, std::vector<int> const &order,
                        std::vector<int> const &ties = {})
{
  detail::validate_prices(market, prices);
  detail::validate_order(market, order);
  if (!ties.empty() && ties.size() != order.size())
  {
    throw InvalidTieChoice("got " + std::to_string(ties.size()) + " tie choices for " +
                           std::to_string(order.size()) + " arrivals");
  }

  Prices sorted = prices;
  std::sort(sorted.begin(), sorted.end());

  Outcome out;
  out.welfare = 0;
  out.revenue = 0;
  out.allocation.assign(static_cast<std::size_t>(market.n()), 0);

  std::size_t s = 0;  // items sold so far = start of the remaining suffix
  for (std::size_t step = 0; step < order.size(); ++step)
  {
    int const agent = order[step];
    Prices const remaining(sorted.begin() + static_cast<std::ptrdiff_t>(s), sorted.end());
    BestResponse const br = best_response(market.agents[static_cast<std::size_t>(agent)], remaining);

    int k = br.quantities.back();
    if (!ties.empty())
    {
      k = ties[step];
      if (std::find(br.quantities.begin(), br.quantities.end(), k) == br.quantities.end())
      {
        throw InvalidTieChoice("quantity " + std::to_string(k) + " is not a best response of agent " +
                               std::to_string(agent) + " at step " + std::to_string(step));
      }
    }

    Purchase purchase;
    purchase.agent    = agent;
    purchase.quantity = k;
    purchase.paid     = 0;
    for (int i = 0; i < k; ++i)
    {
      purchase.paid += sorted[s + static_cast<std::size_t>(i)];
    }
    s += static_cast<std::size_t>(k);

    out.allocation[static_cast<std::size_t>(agent)] = k;
    out.welfare += market.agents[static_cast<std::size_t>(agent)](k);
    out.revenue += purchase.paid;
    out.steps.push_back(std::move(purchase));
  }
  return out;
}

struct SearchOptions
{
  int  max_n      = 12;        // adversarial searches refuse larger markets
  long max_orders = 2000000;   // distinct arrival orders best_case may enumerate
};

/// Replayable adversary witness: feed both vectors back into simulate().
struct OrderTies
{
  std::vector<int> order;
  std::vector<int> ties;
};

namespace detail {

/// Search engine state: agents grouped into types of identical valuations
/// (interchangeable under any order), values and prices scaled to a common
/// integer grid. Memo keys are mixed-radix encodings of (type counts,
/// suffix start); for all-distinct agents this is the plain bitmask key.
struct TypedSearch
{
  int                           m      = 0;
  int                           ntypes = 0;
  int                           total  = 0;
  Int                           scale  = 1;
  std::vector<std::vector<Int>> values;   // per type, scaled
  std::vector<int>              counts;   // agents per type
  std::vector<std::vector<int>> members;  // original agent ids per type, ascending
  std::vector<int>              type_of;  // agent id -> type
  std::vector<Int>              prefix;   // prefix[k] = k cheapest scaled prices
  Prices                        sorted;   // ascending rational prices

  mutable std::vector<std::vector<int>> amax;
  mutable std::vector<char>             amax_ready;

  Rat unscale(Int const &x) const
  {
    return Rat(x, scale);
  }

  std::vector<int> const &argmax(int t, int s) const
  {
    std::size_t const idx = static_cast<std::size_t>(t) * (static_cast<std::size_t>(m) + 1) +
                            static_cast<std::size_t>(s);
    if (!amax_ready[idx])
    {
      std::vector<int> ks{0};
      Int              best = 0;
      for (int k = 1; k <= m - s; ++k)
      {
        Int const u = values[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)] -
                      (prefix[static_cast<std::size_t>(s + k)] - prefix[static_cast<std::size_t>(s)]);
        if (u > best)
        {
          best = u;
          ks.assign(1, k);
        }
        else if (u == best)
        {
          ks.push_back(k);
        }
      }
      amax[idx]       = std::move(ks);
      amax_ready[idx] = 1;
    }
    return amax[idx];
  }

  Int const &value(int t, int k) const
  {
    return values[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)];
  }
};

inline TypedSearch build_typed(Market const &market, Prices const &prices)
{
  validate_prices(market, prices);

  TypedSearch ts;
  ts.m      = market.m;
  ts.total  = market.n();
  ts.sorted = prices;
  std::sort(ts.sorted.begin(), ts.sorted.end());

  auto const scaled = scale_market(market, ts.sorted);
  ts.scale          = scaled.scale;

  ts.type_of.assign(static_cast<std::size_t>(market.n()), -1);
  for (int i = 0; i < market.n(); ++i)
  {
    int t = -1;
    for (int u = 0; u < ts.ntypes; ++u)
    {
      if (ts.values[static_cast<std::size_t>(u)] == scaled.values[static_cast<std::size_t>(i)])
      {
        t = u;
        break;
      }
    }
    if (t < 0)
    {
      t = ts.ntypes++;
      ts.values.push_back(scaled.values[static_cast<std::size_t>(i)]);
      ts.counts.push_back(0);
      ts.members.emplace_back();
    }
    ++ts.counts[static_cast<std::size_t>(t)];
    ts.members[static_cast<std::size_t>(t)].push_back(i);
    ts.type_of[static_cast<std::size_t>(i)] = t;
  }

  ts.prefix.assign(static_cast<std::size_t>(ts.m) + 1, Int(0));
  for (int k = 0; k < ts.m; ++k)
  {
    ts.prefix[static_cast<std::size_t>(k) + 1] =
        ts.prefix[static_cast<std::size_t>(k)] + scaled.prices[static_cast<std::size_t>(k)];
  }

  ts.amax.assign(static_cast<std::size_t>(ts.ntypes) * (static_cast<std::size_t>(ts.m) + 1), {});
  ts.amax_ready.assign(ts.amax.size(), 0);
  return ts;
}

/// Min-over-adversary welfare search. The adversary picks both the next
/// arrival and the tie among that arrival's best responses.
class WorstEngine
{
public:
  WorstEngine(TypedSearch const &ts)
    : ts_(ts)
  {
    mult_.assign(static_cast<std::size_t>(ts.ntypes), 0);
    std::uint64_t acc = static_cast<std::uint64_t>(ts.m) + 1;
    for (int t = 0; t < ts.ntypes; ++t)
    {
      mult_[static_cast<std::size_t>(t)] = acc;
      acc *= static_cast<std::uint64_t>(ts.counts[static_cast<std::size_t>(t)]) + 1;
    }
  }

  Int run(std::vector<int> &counts, int s, int remaining)
  {
    if (remaining == 0 || s == ts_.m)
    {
      return 0;
    }
    std::uint64_t const key = encode(counts, s);
    if (auto const it = memo_.find(key); it != memo_.end())
    {
      return it->second;
    }
    std::optional<Int> best;
    for (int t = 0; t < ts_.ntypes; ++t)
    {
      if (counts[static_cast<std::size_t>(t)] == 0)
      {
        continue;
      }
      --counts[static_cast<std::size_t>(t)];
      for (int k : ts_.argmax(t, s))
      {
        Int const cand = ts_.value(t, k) + run(counts, s + k, remaining - 1);
        if (!best || cand < *best)
        {
          best = cand;
        }
      }
      ++counts[static_cast<std::size_t>(t)];
    }
    memo_.emplace(key, *best);
    return *best;
  }

  /// Rebuilds an arrival order and tie sequence that attains the memoized
  /// minimum. Deterministic: lowest type, then smallest quantity.
  OrderTies witness(std::vector<int> counts, int s)
  {
    OrderTies        out;
    std::vector<int> next_member(static_cast<std::size_t>(ts_.ntypes), 0);
    int              remaining = 0;
    for (int c : counts)
    {
      remaining += c;
    }
    while (remaining > 0)
    {
      Int const target = lookup(counts, s, remaining);
      bool      found  = false;
      for (int t = 0; t < ts_.ntypes && !found; ++t)
      {
        if (counts[static_cast<std::size_t>(t)] == 0)
        {
          continue;
        }
        --counts[static_cast<std::size_t>(t)];
        for (int k : ts_.argmax(t, s))
        {
          if (ts_.value(t, k) + lookup(counts, s + k, remaining - 1) == target)
          {
            out.order.push_back(
                ts_.members[static_cast<std::size_t>(t)]
                           [static_cast<std::size_t>(next_member[static_cast<std::size_t>(t)]++)]);
            out.ties.push_back(k);
            s += k;
            --remaining;
            found = true;
            break;
          }
        }
        if (!found)
        {
          ++counts[static_cast<std::size_t>(t)];
        }
      }
    }
    return out;
  }

private:
  std::uint64_t encode(std::vector<int> const &counts, int s) const
  {
    std::uint64_t key = static_cast<std::uint64_t>(s);
    for (int t = 0; t < ts_.ntypes; ++t)
    {
      key += mult_[static_cast<std::size_t>(t)] *
             static_cast<std::uint64_t>(counts[static_cast<std::size_t>(t)]);
    }
    return key;
  }

  Int lookup(std::vector<int> &counts, int s, int remaining)
  {
    if (remaining == 0 || s == ts_.m)
    {
      return 0;
    }
    return memo_.at(encode(counts, s));
  }

  TypedSearch const                       &ts_;
  std::vector<std::uint64_t>               mult_;
  std::unordered_map<std::uint64_t, Int>   memo_;
};

/// Min-over-ties value of one fixed arrival sequence (types, in order).
/// Memo over (position, suffix); also reconstructs the minimizing ties.
class FixedOrderEngine
{
public:
  FixedOrderEngine(TypedSearch const &ts, std::vector<int> seq_types)
    : ts_(ts)
    , seq_(std::move(seq_types))
    , memo_(static_cast<std::size_t>(seq_.size() + 1) * (static_cast<std::size_t>(ts.m) + 1))
    , ready_(memo_.size(), 0)
  {}

  Int run(std::size_t pos, int s)
  {
    if (pos == seq_.size() || s == ts_.m)
    {
      // Agents arriving with no stock left buy nothing and add nothing.
      return 0;
    }
    std::size_t const idx = pos * (static_cast<std::size_t>(ts_.m) + 1) + static_cast<std::size_t>(s);
    if (ready_[idx])
    {
      return memo_[idx];
    }
    int const          t = seq_[pos];
    std::optional<Int> best;
    for (int k : ts_.argmax(t, s))
    {
      Int const cand = ts_.value(t, k) + run(pos + 1, s + k);
      if (!best || cand < *best)
      {
        best = cand;
      }
    }
    memo_[idx]  = *best;
    ready_[idx] = 1;
    return memo_[idx];
  }

  std::vector<int> ties()
  {
    std::vector<int> out;
    int              s = 0;
    for (std::size_t pos = 0; pos < seq_.size(); ++pos)
    {
      Int const target = run(pos, s);
      for (int k : ts_.argmax(seq_[pos], s))
      {
        if (ts_.value(seq_[pos], k) + run(pos + 1, s + k) == target)
        {
          out.push_back(k);
          s += k;
          break;
        }
      }
    }
    return out;
  }

private:
  TypedSearch const &ts_;
  std::vector<int>   seq_;
  std::vector<Int>   memo_;
  std::vector<char>  ready_;
};

inline void check_size(Market const &market, SearchOptions const &opts)
{
  if (market.n() > opts.max_n)
  {
    throw SizeLimit(std::to_string(market.n()) + " agents exceeds the cap of " +
                    std::to_string(opts.max_n) + " (raise SearchOptions::max_n to override)");
  }
}

/// Maps a type sequence to original agent ids (ascending within a type).
inline std::vector<int> order_from_types(TypedSearch const &ts, std::vector<int> const &seq)
{
  std::vector<int> next(static_cast<std::size_t>(ts.ntypes), 0);
  std::vector<int> order;
  order.reserve(seq.size());
  for (int t : seq)
  {
    order.push_back(
        ts.members[static_cast<std::size_t>(t)][static_cast<std::size_t>(next[static_cast<std::size_t>(t)]++)]);
  }
  return order;
}

}  // namespace detail

/// Exact adversarial welfare: the minimum of simulate() over every arrival
/// order and every tie resolution. Also returns a witness attaining it.
inline std::pair<Rat, OrderTies> worst_case_welfare(Market const &market, Prices const &prices,
                                                    SearchOptions const &opts = {})
{
  detail::check_size(market, opts);
  auto const ts = detail::build_typed(market, prices);

  detail::WorstEngine engine(ts);
  std::vector<int>    counts = ts.counts;
  Int const           value  = engine.run(counts, 0, ts.total);
  return {ts.unscale(value), engine.witness(ts.counts, 0)};
}

/// Best welfare the seller can lock in by committing to an arrival order up
/// front, with ties still resolved adversarially afterwards. The maximum is
/// over static orders: the order may not react to tie outcomes, so each
/// candidate order is scored by its own min-over-ties value.
inline std::pair<Rat, OrderTies> best_case_welfare(Market const &market, Prices const &prices,
                                                   SearchOptions const &opts = {})
{
  detail::check_size(market, opts);
  auto const ts = detail::build_typed(market, prices);

  // Count distinct type sequences: n! / prod(count_t!)
  long double distinct = 1;
  {
    int placed = 0;
    for (int c : ts.counts)
    {
      for (int i = 1; i <= c; ++i)
      {
        ++placed;
        distinct = distinct * placed / i;
      }
    }
  }
  if (distinct > static_cast<long double>(opts.max_orders))
  {
    throw SizeLimit("best_case_welfare would enumerate too many arrival orders");
  }

  std::optional<Int> best;
  std::vector<int>   best_seq;
  std::vector<int>   seq;
  std::vector<int>   counts = ts.counts;

  std::function<void()> dfs = [&]() {
    if (static_cast<int>(seq.size()) == ts.total)
    {
      detail::FixedOrderEngine engine(ts, seq);
      Int const                value = engine.run(0, 0);
      if (!best || value > *best)
      {
        best     = value;
        best_seq = seq;
      }
      return;
    }
    for (int t = 0; t < ts.ntypes; ++t)
    {
      if (counts[static_cast<std::size_t>(t)] == 0)
      {
        continue;
      }
      --counts[static_cast<std::size_t>(t)];
      seq.push_back(t);
      dfs();
      seq.pop_back();
      ++counts[static_cast<std::size_t>(t)];
    }
  };
  dfs();

  detail::FixedOrderEngine engine(ts, best_seq);
  engine.run(0, 0);
  OrderTies witness;
  witness.order = detail::order_from_types(ts, best_seq);
  witness.ties  = engine.ties();
  return {ts.unscale(*best), witness};
}

/// Min-over-ties welfare of one given arrival order.
inline std::pair<Rat, OrderTies> worst_case_fixed_order(Market const &market, Prices const &prices,
                                                        std::vector<int> const &order)
{
  detail::validate_order(market, order);
  auto const ts = detail::build_typed(market, prices);

  std::vector<int> seq;
  seq.reserve(order.size());
  for (int a : order)
  {
    seq.push_back(ts.type_of[static_cast<std::size_t>(a)]);
  }
  detail::FixedOrderEngine engine(ts, seq);
  Int const                value = engine.run(0, 0);
  OrderTies                witness{order, engine.ties()};
  return {ts.unscale(value), witness};
}

// --- Naive oracles --------------------------------------------------------
//
// Straightforward enumeration with rational arithmetic, no memoization, no
// agent grouping, no integer scaling. These exist as an independent route
// for cross-checking the engines above and back the --naive CLI flag.

namespace detail {

inline Rat naive_min_tie(Market const &market, std::vector<int> const &order, std::size_t pos,
                         Prices const &remaining)
{
  if (pos == order.size())
  {
    return 0;
  }
  Valuation const &agent = market.agents[static_cast<std::size_t>(order[pos])];
  BestResponse const br  = best_response(agent, remaining);

  std::optional<Rat> best;
  for (int k : br.quantities)
  {
    Prices next(remaining.begin() + k, remaining.end());
    Rat const cand = agent(k) + naive_min_tie(market, order, pos + 1, next);
    if (!best || cand < *best)
    {
      best = cand;
    }
  }
  return *best;
}

}  // namespace detail

inline Rat worst_case_welfare_naive(Market const &market, Prices const &prices)
{
  detail::validate_prices(market, prices);
  Prices sorted = prices;
  std::sort(sorted.begin(), sorted.end());

  std::vector<int> order(static_cast<std::size_t>(market.n()));
  std::iota(order.begin(), order.end(), 0);

  std::optional<Rat> best;
  do
  {
    Rat const value = detail::naive_min_tie(market, order, 0, sorted);
    if (!best || value < *best)
    {
      best = value;
    }
  } while (std::next_permutation(order.begin(), order.end()));
  return *best;
}

inline Rat best_case_welfare_naive(Market const &market, Prices const &prices)
{
  detail::validate_prices(market, prices);
  Prices sorted = prices;
  std::sort(sorted.begin(), sorted.end());

  std::vector<int> order(static_cast<std::size_t>(market.n()));
  std::iota(order.begin(), order.end(), 0);

  std::optional<Rat> best;
  do
  {
    Rat const value = detail::naive_min_tie(market, order, 0, sorted);
    if (!best || value > *best)
    {
      best = value;
    }
  } while (std::next_permutation(order.begin(), order.end()));
  return *best;
}

inline Rat worst_case_fixed_order_naive(Market const &market, Prices const &prices,
                                        std::vector<int> const &order)
{
  detail::validate_prices(market, prices);
  detail::validate_order(market, order);
  Prices sorted = prices;
  std::sort(sorted.begin(), sorted.end());
  return detail::naive_min_tie(market, order, 0, sorted);
}

// --- Dynamic pricing -------------------------------------------------------

/// A dynamic policy posts fresh prices each round from the remaining agent
/// set (ascending ids) and the remaining item count; it must return exactly
/// that many non-negative prices.
using DynamicPolicy = std::function<Prices(std::vector<int> const &, int)>;

inline std::pair<Rat, OrderTies> worst_case_welfare_dynamic(Market const &market,
                                                            DynamicPolicy const &policy,
                                                            SearchOptions const &opts = {})
{
  detail::check_size(market, opts);
  int const n = market.n();
  int const m = market.m;

  std::unordered_map<std::uint64_t, Rat> memo;
  auto const key = [m](std::uint64_t mask, int items) {
    return mask * static_cast<std::uint64_t>(m + 1) + static_cast<std::uint64_t>(items);
  };

  auto const round_prices = [&](std::uint64_t mask, int items) {
    std::vector<int> remaining;
    for (int i = 0; i < n; ++i)
    {
      if (mask & (std::uint64_t(1) << i))
      {
        remaining.push_back(i);
      }
    }
    Prices prices = policy(remaining, items);
    if (static_cast<int>(prices.size()) != items)
    {
      throw PolicyDomainError("policy returned " + std::to_string(prices.size()) +
                              " prices for " + std::to_string(items) + " items");
    }
    for (auto const &p : prices)
    {
      if (p < 0)
      {
        throw NegativePrice(rat_to_string(p));
      }
    }
    std::sort(prices.begin(), prices.end());
    return prices;
  };

  std::function<Rat(std::uint64_t, int)> rec = [&](std::uint64_t mask, int items) -> Rat {
    if (mask == 0)
    {
      return 0;
    }
    if (auto const it = memo.find(key(mask, items)); it != memo.end())
    {
      return it->second;
    }
    Prices const       prices = round_prices(mask, items);
    std::optional<Rat> best;
    for (int i = 0; i < n; ++i)
    {
      if (!(mask & (std::uint64_t(1) << i)))
      {
        continue;
      }
      BestResponse const br = best_response(market.agents[static_cast<std::size_t>(i)], prices);
      for (int k : br.quantities)
      {
        Rat const cand =
            market.agents[static_cast<std::size_t>(i)](k) + rec(mask & ~(std::uint64_t(1) << i), items - k);
        if (!best || cand < *best)
        {
          best = cand;
        }
      }
    }
    memo.emplace(key(mask, items), *best);
    return *best;
  };

  std::uint64_t const full  = (n == 64) ? ~std::uint64_t(0) : ((std::uint64_t(1) << n) - 1);
  Rat const           value = rec(full, m);

  OrderTies     witness;
  std::uint64_t mask  = full;
  int           items = m;
  while (mask != 0)
  {
    Rat const    target = rec(mask, items);
    Prices const prices = round_prices(mask, items);
    bool         found  = false;
    for (int i = 0; i < n && !found; ++i)
    {
      if (!(mask & (std::uint64_t(1) << i)))
      {
        continue;
      }
      BestResponse const br = best_response(market.agents[static_cast<std::size_t>(i)], prices);
      for (int k : br.quantities)
      {
        if (market.agents[static_cast<std::size_t>(i)](k) + rec(mask & ~(std::uint64_t(1) << i), items - k) ==
            target)
        {
          witness.order.push_back(i);
          witness.ties.push_back(k);
          mask &= ~(std::uint64_t(1) << i);
          items -= k;
          found = true;
          break;
        }
      }
    }
  }
  return {value, witness};
}

}  // namespace mup
