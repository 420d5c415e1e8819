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

/// JSON serialization for every value the command-line tool reads or writes.
/// Rationals travel as strings ("3/2", "1.5", "7"), never as floating point,
/// so a round trip is always exact. Object keys come out alphabetically
/// sorted, which keeps emitted files byte-stable across runs.

#include "mup/bayes.hpp"
#include "mup/errors.hpp"
#include "mup/instances.hpp"
#include "mup/market.hpp"
#include "mup/pricing.hpp"
#include "mup/rational.hpp"
#include "mup/simulate.hpp"
#include "mup/valuation.hpp"

#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <map>
#include <string>
#include <vector>

namespace mup {

using Json = nlohmann::json;

/// Accepts a quoted rational ("3/2", "-1.25") or a plain JSON integer.
/// Unquoted decimals are rejected: the parser would have read them as
/// doubles, and exactness is the whole point.
inline Rat rat_from_json(Json const &j)
{
  if (j.is_string())
  {
    return parse_rat(j.get<std::string>());
  }
  if (j.is_number_unsigned())
  {
    return Rat(Int(j.get<std::uint64_t>()));
  }
  if (j.is_number_integer())
  {
    return Rat(Int(j.get<std::int64_t>()));
  }
  if (j.is_number_float())
  {
    throw ParseError("decimal literals must be quoted strings, got " + j.dump());
  }
  throw ParseError("expected a rational, got " + j.dump());
}

inline Json rat_to_json(Rat const &x)
{
  return Json(rat_to_string(x));
}

inline ValClass class_from_string(std::string const &name)
{
  for (ValClass c : {ValClass::Additive, ValClass::Submodular, ValClass::Xos,
                     ValClass::Subadditive, ValClass::General})
  {
    if (name == to_string(c))
    {
      return c;
    }
  }
  throw ParseError("unknown valuation class '" + name +
                   "' (additive, submodular, xos, subadditive, general)");
}

namespace detail {

inline Json const &require_key(Json const &j, char const *key)
{
  if (!j.is_object())
  {
    throw ParseError(std::string("expected an object with key \"") + key + "\"");
  }
  auto const it = j.find(key);
  if (it == j.end())
  {
    throw ParseError(std::string("missing key \"") + key + "\"");
  }
  return *it;
}

inline std::vector<Rat> rat_array(Json const &j, char const *what)
{
  if (!j.is_array())
  {
    throw ParseError(std::string(what) + " must be an array");
  }
  std::vector<Rat> out;
  out.reserve(j.size());
  for (Json const &entry : j)
  {
    out.push_back(rat_from_json(entry));
  }
  return out;
}

inline std::vector<int> int_array(Json const &j, char const *what)
{
  if (!j.is_array())
  {
    throw ParseError(std::string(what) + " must be an array");
  }
  std::vector<int> out;
  out.reserve(j.size());
  for (Json const &entry : j)
  {
    if (!entry.is_number_integer())
    {
      throw ParseError(std::string(what) + " entries must be integers, got " + entry.dump());
    }
    out.push_back(entry.get<int>());
  }
  return out;
}

}  // namespace detail

/// A valuation is a bare array of m+1 values, v(0) first.
inline Json valuation_to_json(Valuation const &v)
{
  Json out = Json::array();
  for (Rat const &value : v.values())
  {
    out.push_back(rat_to_json(value));
  }
  return out;
}

inline Valuation valuation_from_json(Json const &j)
{
  return Valuation(detail::rat_array(j, "\"values\""));
}

/// {"m": 3, "agents": [{"values": ["0", "5", "9", "11"]}, ...]}
inline Json market_to_json(Market const &market)
{
  Json agents = Json::array();
  for (Valuation const &v : market.agents)
  {
    agents.push_back(Json{{"values", valuation_to_json(v)}});
  }
  return Json{{"m", market.m}, {"agents", agents}};
}

inline Market market_from_json(Json const &j)
{
  Json const &m_field = detail::require_key(j, "m");
  if (!m_field.is_number_integer())
  {
    throw ParseError("\"m\" must be an integer, got " + m_field.dump());
  }
  Json const &agents_field = detail::require_key(j, "agents");
  if (!agents_field.is_array())
  {
    throw ParseError("\"agents\" must be an array");
  }
  std::vector<Valuation> agents;
  agents.reserve(agents_field.size());
  for (Json const &agent : agents_field)
  {
    agents.push_back(valuation_from_json(detail::require_key(agent, "values")));
  }
  return Market(m_field.get<int>(), std::move(agents));
}

/// Either {"prices": [per-item rational × m]} or {"uniform": rational}.
/// Validates length and non-negativity against the market size m.
inline Prices prices_from_json(Json const &j, int m)
{
  if (!j.is_object())
  {
    throw ParseError("expected an object with \"prices\" or \"uniform\"");
  }
  bool const has_list    = j.contains("prices");
  bool const has_uniform = j.contains("uniform");
  if (has_list == has_uniform)
  {
    throw ParseError("give exactly one of \"prices\" and \"uniform\"");
  }
  Prices prices;
  if (has_uniform)
  {
    prices = uniform_prices(m, rat_from_json(j.at("uniform")));
  }
  else
  {
    prices = detail::rat_array(j.at("prices"), "\"prices\"");
    if (static_cast<int>(prices.size()) != m)
    {
      throw PriceCountMismatch(std::to_string(prices.size()) + " prices for " +
                               std::to_string(m) + " items");
    }
  }
  for (Rat const &p : prices)
  {
    if (p < 0)
    {
      throw NegativePrice(rat_to_string(p));
    }
  }
  return prices;
}

inline Json prices_to_json(Prices const &prices)
{
  Json list = Json::array();
  for (Rat const &p : prices)
  {
    list.push_back(rat_to_json(p));
  }
  return Json{{"prices", list}};
}

/// {"m": 2, "declared": "xos", "agents": [{"support": [{"prob": "1/3",
/// "values": [...]}, ...]}, ...]}. "declared" defaults to "general" and "m"
/// may be omitted when at least one support entry pins the length.
///
/// A file may instead name a catalog entry that carries a distribution:
/// {"generator": "bayes_lower", "params": {"n": 4}}.
inline ValuationDistribution distribution_from_json(Json const &j)
{
  if (j.is_object() && j.contains("generator"))
  {
    if (!j.at("generator").is_string())
    {
      throw ParseError("\"generator\" must be a catalog id string");
    }
    std::map<std::string, Rat> params;
    if (j.contains("params"))
    {
      Json const &raw = j.at("params");
      if (!raw.is_object())
      {
        throw ParseError("\"params\" must be an object");
      }
      for (auto const &[key, value] : raw.items())
      {
        params[key] = rat_from_json(value);
      }
    }
    NamedInstance const inst = generate(j.at("generator").get<std::string>(), params);
    if (!inst.distribution)
    {
      throw ParseError("catalog entry '" + inst.id + "' has no distribution");
    }
    return *inst.distribution;
  }

  Json const &agents_field = detail::require_key(j, "agents");
  if (!agents_field.is_array())
  {
    throw ParseError("\"agents\" must be an array");
  }
  ValuationDistribution dist;
  if (j.contains("declared"))
  {
    if (!j.at("declared").is_string())
    {
      throw ParseError("\"declared\" must be a class name string");
    }
    dist.declared = class_from_string(j.at("declared").get<std::string>());
  }
  for (Json const &agent : agents_field)
  {
    Json const &support = detail::require_key(agent, "support");
    if (!support.is_array())
    {
      throw ParseError("\"support\" must be an array");
    }
    std::vector<SupportEntry> entries;
    for (Json const &entry : support)
    {
      SupportEntry e{rat_from_json(detail::require_key(entry, "prob")),
                     valuation_from_json(detail::require_key(entry, "values"))};
      entries.push_back(std::move(e));
    }
    dist.agents.push_back(std::move(entries));
  }
  if (j.contains("m"))
  {
    if (!j.at("m").is_number_integer())
    {
      throw ParseError("\"m\" must be an integer, got " + j.at("m").dump());
    }
    dist.m = j.at("m").get<int>();
  }
  else
  {
    for (auto const &support : dist.agents)
    {
      if (!support.empty())
      {
        dist.m = support.front().value.items();
        break;
      }
    }
  }
  validate_distribution(dist);
  return dist;
}

inline Json distribution_to_json(ValuationDistribution const &dist)
{
  Json agents = Json::array();
  for (auto const &support : dist.agents)
  {
    Json entries = Json::array();
    for (SupportEntry const &e : support)
    {
      entries.push_back(Json{{"prob", rat_to_json(e.prob)}, {"values", valuation_to_json(e.value)}});
    }
    agents.push_back(Json{{"support", entries}});
  }
  return Json{{"m", dist.m}, {"declared", to_string(dist.declared)}, {"agents", agents}};
}

/// Adversary witness: replay with simulate(market, prices, order, ties) to
/// land on exactly the reported welfare.
inline Json witness_to_json(Rat const &welfare, OrderTies const &witness)
{
  return Json{{"welfare", rat_to_json(welfare)},
              {"order", witness.order},
              {"ties", witness.ties}};
}

inline OrderTies order_ties_from_json(Json const &j)
{
  OrderTies out;
  out.order = detail::int_array(detail::require_key(j, "order"), "\"order\"");
  out.ties  = detail::int_array(detail::require_key(j, "ties"), "\"ties\"");
  return out;
}

inline Json outcome_to_json(Outcome const &out)
{
  Json steps = Json::array();
  Json order = Json::array();
  for (Purchase const &step : out.steps)
  {
    order.push_back(step.agent);
    steps.push_back(Json{{"agent", step.agent},
                         {"quantity", step.quantity},
                         {"paid", rat_to_json(step.paid)}});
  }
  return Json{{"welfare", rat_to_json(out.welfare)},
              {"revenue", rat_to_json(out.revenue)},
              {"allocation", out.allocation},
              {"order", order},
              {"steps", steps}};
}

inline Json scheme_result_to_json(SchemeResult const &result)
{
  Json candidates = Json::array();
  for (Prices const &prices : result.candidates)
  {
    candidates.push_back(prices_to_json(prices));
  }
  return Json{{"candidates", candidates},
              {"chosen", result.chosen},
              {"guarantee", rat_to_json(result.guarantee)},
              {"opt", rat_to_json(result.opt)}};
}

inline Json bound_report_to_json(BoundReport const &report)
{
  Json regions = Json::array();
  bool ok      = true;
  for (RegionCheck const &region : report.regions)
  {
    ok = ok && region.ok;
    regions.push_back(Json{{"label", region.label},
                           {"observed", rat_to_json(region.observed)},
                           {"limit", rat_to_json(region.limit)},
                           {"ok", region.ok}});
  }
  return Json{{"id", report.id}, {"ok", ok}, {"regions", regions}};
}

inline Json bayes_estimate_to_json(BayesEstimate const &est)
{
  return Json{{"expected_opt", rat_to_json(est.expected_opt)},
              {"expected_welfare", rat_to_json(est.expected_welfare)},
              {"samples", est.samples},
              {"seed", est.seed}};
}

/// Catalog row for listings; the payload itself goes through market_to_json
/// or distribution_to_json.
inline Json instance_summary_json(NamedInstance const &inst)
{
  Json params = Json::object();
  for (auto const &[key, value] : inst.params)
  {
    params[key] = rat_to_json(value);
  }
  Json classes = Json::array();
  for (ValClass c : inst.agent_classes)
  {
    classes.push_back(to_string(c));
  }
  int const n = inst.market ? static_cast<int>(inst.market->agents.size())
                            : static_cast<int>(inst.distribution->agents.size());
  int const m = inst.market ? inst.market->m : inst.distribution->m;
  return Json{{"id", inst.id},           {"summary", inst.summary},
              {"kind", to_string(inst.kind)}, {"opt", rat_to_json(inst.opt)},
              {"claimed_bound", rat_to_json(inst.claimed_bound)},
              {"tolerance", rat_to_json(inst.tolerance)},
              {"n", n},                  {"m", m},
              {"agent_classes", classes}, {"params", params},
              {"grid_labels", inst.grid_labels}};
}

inline Json load_json_file(std::string const &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw ParseError("cannot open '" + path + "'");
  }
  try
  {
    return Json::parse(in);
  }
  catch (Json::exception const &e)
  {
    throw ParseError(path + ": " + e.what());
  }
}

inline void save_json_file(std::string const &path, Json const &j)
{
  std::ofstream out(path);
  if (!out)
  {
    throw ParseError("cannot open '" + path + "' for writing");
  }
  out << j.dump(2) << '\n';
}

}  // namespace mup
