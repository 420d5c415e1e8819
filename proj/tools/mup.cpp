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

// Command-line surface over the library: compute optima, run the
// adversarial simulator, apply pricing schemes, replay witnesses, and run
// the certification suites. Exit code 0 means every requested check
// passed; 1 means some check failed; 2 means bad input.

#include "mup/io.hpp"
#include "mup/verify.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

using namespace mup;

namespace {

/// Everything a single invocation needs, gathered in one place.
struct RunConfig
{
  std::string      command;
  std::string      input;     // market or distribution file
  std::string      prices;    // prices file
  std::string      uniform;   // inline uniform price, alternative to a file
  std::string      witness;   // witness file for replay
  std::string      scheme;
  std::string      suite = "all";
  std::string      id;        // catalog id
  std::string      output;    // emit target, empty = stdout
  std::vector<int> order;
  std::string      ties   = "adversarial";
  bool             naive  = false;
  int              trials = 200;
  int              max_agents = 5;
  int              min_items  = 1;
  int              max_items  = 8;
  std::uint64_t    seed   = 0;
  int              max_n  = 12;
  std::string      format = "table";
  std::vector<std::string> params;
};

bool json_mode(RunConfig const &config)
{
  return config.format == "json";
}

void emit(Json const &doc)
{
  std::cout << doc.dump(2) << '\n';
}

/// "3/2 (~1.5)" for fractions, plain digits for integers.
std::string pretty(Rat const &x)
{
  if (denominator(x) == 1)
  {
    return rat_to_string(x);
  }
  char approx[32];
  std::snprintf(approx, sizeof approx, "%g", rat_to_double(x));
  return rat_to_string(x) + " (~" + approx + ")";
}

std::string join_ints(std::vector<int> const &xs)
{
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i)
  {
    out += (i == 0 ? "" : ",") + std::to_string(xs[i]);
  }
  return out;
}

Market load_market(RunConfig const &config)
{
  return market_from_json(load_json_file(config.input));
}

Prices load_prices(RunConfig const &config, int m)
{
  if (!config.uniform.empty())
  {
    return prices_from_json(Json{{"uniform", config.uniform}}, m);
  }
  if (config.prices.empty())
  {
    throw ParseError("give a prices file (-p) or --uniform");
  }
  return prices_from_json(load_json_file(config.prices), m);
}

std::map<std::string, Rat> parse_params(std::vector<std::string> const &raw)
{
  std::map<std::string, Rat> out;
  for (std::string const &entry : raw)
  {
    auto const eq = entry.find('=');
    if (eq == std::string::npos || eq == 0)
    {
      throw BadParams("expected key=value, got '" + entry + "'");
    }
    out[entry.substr(0, eq)] = parse_rat(entry.substr(eq + 1));
  }
  return out;
}

SearchOptions search_options(RunConfig const &config)
{
  SearchOptions opts;
  opts.max_n = config.max_n;
  return opts;
}

int cmd_opt(RunConfig const &config)
{
  Market const market         = load_market(config);
  auto const [opt, allocation] = optimal_welfare(market);
  if (json_mode(config))
  {
    emit(Json{{"opt", rat_to_json(opt)}, {"allocation", allocation.quantities}});
  }
  else
  {
    std::cout << "opt = " << pretty(opt) << '\n';
    std::cout << "allocation = [" << join_ints(allocation.quantities) << "]\n";
  }
  return 0;
}

int cmd_worst(RunConfig const &config)
{
  Market const market = load_market(config);
  Prices const prices = load_prices(config, market.m);

  if (config.ties == "canonical")
  {
    if (config.order.empty())
    {
      throw ParseError("--ties canonical needs --order (one pass, no adversary)");
    }
    if (config.naive)
    {
      throw ParseError("--naive only checks adversarial searches");
    }
    Outcome const out = simulate(market, prices, config.order);
    if (json_mode(config))
    {
      emit(outcome_to_json(out));
    }
    else
    {
      std::cout << "welfare = " << pretty(out.welfare) << '\n';
      std::cout << "revenue = " << pretty(out.revenue) << '\n';
    }
    return 0;
  }

  Rat       welfare;
  OrderTies witness;
  if (config.order.empty())
  {
    std::tie(welfare, witness) = worst_case_welfare(market, prices, search_options(config));
  }
  else
  {
    std::tie(welfare, witness) = worst_case_fixed_order(market, prices, config.order);
  }

  bool match = true;
  Rat  reference;
  if (config.naive)
  {
    reference = config.order.empty() ? worst_case_welfare_naive(market, prices)
                                     : worst_case_fixed_order_naive(market, prices, config.order);
    match = welfare == reference;
  }

  if (json_mode(config))
  {
    Json doc = witness_to_json(welfare, witness);
    if (config.naive)
    {
      doc["naive"] = rat_to_json(reference);
      doc["match"] = match;
    }
    emit(doc);
  }
  else
  {
    std::cout << "worst-case welfare = " << pretty(welfare) << '\n';
    std::cout << "order = " << join_ints(witness.order) << '\n';
    std::cout << "ties = " << join_ints(witness.ties) << '\n';
    if (config.naive)
    {
      std::cout << "naive check: " << (match ? "match" : "MISMATCH, naive says " + pretty(reference))
                << '\n';
    }
  }
  return match ? 0 : 1;
}

int cmd_simulate(RunConfig const &config)
{
  Market const market = load_market(config);
  Prices const prices = load_prices(config, market.m);

  std::vector<int> order = config.order;
  std::vector<int> ties;
  if (!config.witness.empty())
  {
    OrderTies const loaded = order_ties_from_json(load_json_file(config.witness));
    order                  = loaded.order;
    ties                   = loaded.ties;
  }
  if (order.empty())
  {
    throw ParseError("give --order or --witness to fix the arrivals");
  }

  Outcome const out = simulate(market, prices, order, ties);
  if (json_mode(config))
  {
    emit(outcome_to_json(out));
  }
  else
  {
    std::cout << "welfare = " << pretty(out.welfare) << '\n';
    std::cout << "revenue = " << pretty(out.revenue) << '\n';
    std::cout << "allocation = [" << join_ints(out.allocation) << "]\n";
    for (std::size_t s = 0; s < out.steps.size(); ++s)
    {
      Purchase const &step = out.steps[s];
      std::cout << "step " << s << ": agent " << step.agent << " buys " << step.quantity
                << " for " << pretty(step.paid) << '\n';
    }
  }
  return 0;
}

/// Static multi-candidate schemes share one report shape.
int emit_scheme_result(RunConfig const &config, Market const &market, SchemeResult const &res)
{
  Prices const &chosen = res.candidates[static_cast<std::size_t>(res.chosen)];
  Rat const achieved   = worst_case_welfare(market, chosen, search_options(config)).first;
  bool const ok        = achieved >= res.guarantee * res.opt;

  if (json_mode(config))
  {
    Json doc        = scheme_result_to_json(res);
    doc["scheme"]   = config.scheme;
    doc["achieved"] = rat_to_json(achieved);
    doc["ok"]       = ok;
    emit(doc);
  }
  else
  {
    std::cout << "scheme = " << config.scheme << '\n';
    std::cout << "opt = " << pretty(res.opt) << '\n';
    std::cout << "guarantee factor = " << pretty(res.guarantee) << '\n';
    for (std::size_t c = 0; c < res.candidates.size(); ++c)
    {
      std::cout << (static_cast<int>(c) == res.chosen ? "chosen    " : "candidate ") << c << ": [";
      for (std::size_t j = 0; j < res.candidates[c].size(); ++j)
      {
        std::cout << (j == 0 ? "" : ", ") << rat_to_string(res.candidates[c][j]);
      }
      std::cout << "]\n";
    }
    std::cout << "worst-case welfare of chosen = " << pretty(achieved) << '\n';
    std::cout << "meets guarantee: " << (ok ? "yes" : "NO") << '\n';
  }
  return ok ? 0 : 1;
}

/// Constructions that fix an order or reprice dynamically report welfare
/// against the optimum directly.
int emit_targeted(RunConfig const &config, Json doc, Rat const &achieved, Rat const &opt,
                  Rat const &factor)
{
  bool const ok   = achieved >= factor * opt;
  doc["achieved"] = rat_to_json(achieved);
  doc["opt"]      = rat_to_json(opt);
  doc["ok"]       = ok;
  if (json_mode(config))
  {
    emit(doc);
  }
  else
  {
    std::cout << "scheme = " << config.scheme << '\n';
    for (auto const &[key, value] : doc.items())
    {
      if (key != "scheme" && key != "ok")
      {
        std::cout << key << " = " << (value.is_string() ? value.get<std::string>() : value.dump())
                  << '\n';
      }
    }
    std::cout << "meets guarantee: " << (ok ? "yes" : "NO") << '\n';
  }
  return ok ? 0 : 1;
}

int cmd_scheme(RunConfig const &config)
{
  Market const        market = load_market(config);
  SearchOptions const opts   = search_options(config);

  if (config.scheme == "submod23")
  {
    return emit_scheme_result(config, market, scheme_submodular_23(market, opts));
  }
  if (config.scheme == "submod57")
  {
    return emit_scheme_result(config, market, scheme_submodular_57(market, opts));
  }
  if (config.scheme == "uniform-half")
  {
    return emit_scheme_result(config, market, scheme_uniform_half(market, opts));
  }
  if (config.scheme == "subadd13")
  {
    return emit_scheme_result(config, market, scheme_subadditive_third(market, opts));
  }
  if (config.scheme == "subadd-2iden")
  {
    return emit_scheme_result(config, market, scheme_two_identical_subadditive(market, opts));
  }
  if (config.scheme == "general-1m")
  {
    return emit_scheme_result(config, market, scheme_general_1m(market, opts));
  }

  if (config.scheme == "known-order")
  {
    std::vector<int> order = config.order;
    if (order.empty())
    {
      order.resize(market.agents.size());
      for (std::size_t i = 0; i < order.size(); ++i)
      {
        order[i] = static_cast<int>(i);
      }
    }
    Prices const prices   = scheme_known_order(market, order);
    Rat const    achieved = worst_case_fixed_order(market, prices, order).first;
    Json         doc{{"scheme", config.scheme}, {"order", order}};
    doc.update(prices_to_json(prices));
    return emit_targeted(config, doc, achieved, optimal_welfare(market).first, Rat(1));
  }

  if (config.scheme == "dynamic-submod")
  {
    DynamicPolicy const policy = dynamic_policy_submodular(market);
    Rat const achieved = worst_case_welfare_dynamic(market, policy, opts).first;

    std::vector<int> everyone(market.agents.size());
    for (std::size_t i = 0; i < everyone.size(); ++i)
    {
      everyone[i] = static_cast<int>(i);
    }
    Json doc{{"scheme", config.scheme}};
    doc["first_round"] = prices_to_json(policy(everyone, market.m));
    return emit_targeted(config, doc, achieved, optimal_welfare(market).first, Rat(1));
  }

  if (config.scheme == "general-best-order")
  {
    auto const [prices, order] = scheme_general_best_order(market, opts);
    Rat const achieved         = worst_case_fixed_order(market, prices, order).first;
    Json      doc{{"scheme", config.scheme}, {"order", order}};
    doc.update(prices_to_json(prices));
    return emit_targeted(config, doc, achieved, optimal_welfare(market).first, Rat(1, 2));
  }

  throw UnknownId("no scheme named '" + config.scheme + "'");
}

int cmd_verify(RunConfig const &config)
{
  SuiteConfig suite_config;
  suite_config.trials       = config.trials;
  suite_config.max_agents   = config.max_agents;
  suite_config.min_items    = config.min_items;
  suite_config.max_items    = config.max_items;
  suite_config.seed         = config.seed;
  suite_config.search.max_n = config.max_n;

  std::vector<std::string> ids;
  if (config.suite == "all")
  {
    ids = suite_ids();
  }
  else
  {
    ids.push_back(config.suite);
  }

  Json const header{{"seed", config.seed},
                    {"trials", config.trials},
                    {"max_agents", config.max_agents},
                    {"min_items", config.min_items},
                    {"max_items", config.max_items},
                    {"value_cap", suite_config.value_cap},
                    {"search_cap", config.max_n}};
  if (!json_mode(config))
  {
    std::cout << "# verify " << header.dump() << '\n';
  }

  bool all_ok = true;
  Json suites = Json::array();
  for (std::string const &id : ids)
  {
    SuiteReport const report = run_suite(id, suite_config);
    all_ok                   = all_ok && report.ok();
    if (json_mode(config))
    {
      Json failures = Json::array();
      for (TrialFailure const &f : report.failures)
      {
        failures.push_back(Json{{"trial", f.trial}, {"detail", f.detail}});
      }
      suites.push_back(Json{{"suite", report.suite},
                            {"trials", report.trials},
                            {"passed", report.passed()},
                            {"ok", report.ok()},
                            {"failures", failures}});
    }
    else
    {
      std::cout << report.suite << ": " << (report.ok() ? "PASS" : "FAIL") << " ("
                << report.passed() << "/" << report.trials << ")\n";
      for (TrialFailure const &f : report.failures)
      {
        std::cout << "  trial " << f.trial << ": " << f.detail << '\n';
      }
    }
  }

  if (json_mode(config))
  {
    emit(Json{{"config", header}, {"suites", suites}, {"ok", all_ok}});
  }
  return all_ok ? 0 : 1;
}

int cmd_instances_list(RunConfig const &config)
{
  if (json_mode(config))
  {
    Json rows = Json::array();
    for (std::string const &id : instance_ids())
    {
      rows.push_back(instance_summary_json(generate(id)));
    }
    emit(rows);
    return 0;
  }
  for (std::string const &id : instance_ids())
  {
    NamedInstance const inst = generate(id);
    std::cout << inst.id << ": " << inst.summary << '\n';
    std::cout << "  kind = " << to_string(inst.kind) << ", opt = " << rat_to_string(inst.opt)
              << ", ceiling = " << rat_to_string(inst.claimed_bound);
    if (inst.tolerance != 0)
    {
      std::cout << " + " << rat_to_string(inst.tolerance);
    }
    std::cout << '\n';
  }
  return 0;
}

int cmd_instances_emit(RunConfig const &config)
{
  NamedInstance const inst = generate(config.id, parse_params(config.params));
  Json const payload = inst.market ? market_to_json(*inst.market)
                                   : distribution_to_json(*inst.distribution);
  if (config.output.empty() || config.output == "-")
  {
    emit(payload);
  }
  else
  {
    save_json_file(config.output, payload);
  }
  return 0;
}

int cmd_instances_check(RunConfig const &config)
{
  NamedInstance const inst = generate(config.id, parse_params(config.params));
  try
  {
    BoundReport const report = verify_bound(inst, search_options(config));
    if (json_mode(config))
    {
      emit(bound_report_to_json(report));
    }
    else
    {
      std::cout << report.id << ": PASS\n";
      for (RegionCheck const &region : report.regions)
      {
        std::cout << "  " << region.label << ": " << rat_to_string(region.observed)
                  << " within " << rat_to_string(region.limit) << '\n';
      }
    }
    return 0;
  }
  catch (BoundViolated const &e)
  {
    if (json_mode(config))
    {
      emit(Json{{"id", inst.id}, {"ok", false}, {"error", e.what()}});
    }
    else
    {
      std::cout << inst.id << ": FAIL\n  " << e.what() << '\n';
    }
    return 1;
  }
}

}  // namespace

int main(int argc, char **argv)
{
  RunConfig config;
  CLI::App  app{"exact posted-price analysis for multi-unit markets"};
  app.require_subcommand(1);

  auto const add_format = [&](CLI::App *cmd)
  { cmd->add_option("--format", config.format, "table or json")
        ->check(CLI::IsMember({"table", "json"})); };
  auto const add_input = [&](CLI::App *cmd)
  { cmd->add_option("-i,--input", config.input, "market file (.market.json)")->required(); };
  auto const add_prices = [&](CLI::App *cmd)
  {
    auto *file = cmd->add_option("-p,--prices", config.prices, "prices file (.prices.json)");
    cmd->add_option("--uniform", config.uniform, "uniform price, e.g. 3/2")->excludes(file);
  };
  auto const add_max_n = [&](CLI::App *cmd)
  { cmd->add_option("--max-n", config.max_n, "adversarial search cap on agents"); };

  CLI::App *opt = app.add_subcommand("opt", "optimal welfare and a witness allocation");
  add_input(opt);
  add_format(opt);

  CLI::App *worst =
      app.add_subcommand("worst", "adversarial welfare under prices, with a replayable witness");
  add_input(worst);
  add_prices(worst);
  worst->add_option("--order", config.order, "fixed arrival order, e.g. 1,0")->delimiter(',');
  worst->add_option("--ties", config.ties, "adversarial explores the argmax sets; canonical buys the largest")
      ->check(CLI::IsMember({"adversarial", "canonical"}));
  worst->add_flag("--naive", config.naive, "cross-check against brute-force enumeration");
  add_max_n(worst);
  add_format(worst);

  CLI::App *sim = app.add_subcommand("simulate", "replay one arrival sequence");
  add_input(sim);
  add_prices(sim);
  sim->add_option("--order", config.order, "arrival order, canonical tie-breaks")->delimiter(',');
  sim->add_option("--witness", config.witness, "witness file with order and tie choices");
  add_format(sim);

  CLI::App *scheme = app.add_subcommand("scheme", "price a market with one of the constructions");
  add_input(scheme);
  scheme->add_option("--scheme", config.scheme, "construction id")
      ->required()
      ->check(CLI::IsMember({"submod23", "submod57", "uniform-half", "known-order",
                             "dynamic-submod", "subadd13", "subadd-2iden", "general-1m",
                             "general-best-order"}));
  scheme->add_option("--order", config.order, "arrival order for known-order (default 0,1,...)")
      ->delimiter(',');
  add_max_n(scheme);
  add_format(scheme);

  CLI::App *verify = app.add_subcommand("verify", "run seeded certification suites");
  {
    std::vector<std::string> allowed = suite_ids();
    allowed.push_back("all");
    verify->add_option("--suite", config.suite, "suite id or 'all'")->check(CLI::IsMember(allowed));
  }
  verify->add_option("--trials", config.trials, "random trials per suite");
  verify->add_option("--n", config.max_agents, "largest agent count drawn");
  verify->add_option("--m", config.max_items, "largest item count drawn");
  verify->add_option("--min-m", config.min_items, "smallest item count drawn");
  verify->add_option("--seed", config.seed, "base seed; trials derive their own")->required();
  add_max_n(verify);
  add_format(verify);

  CLI::App *instances = app.add_subcommand("instances", "the built-in lower-bound catalog");
  instances->require_subcommand(1);
  CLI::App *ilist = instances->add_subcommand("list", "one row per catalog entry");
  add_format(ilist);
  CLI::App *iemit = instances->add_subcommand("emit", "write an entry's market or distribution");
  iemit->add_option("--id", config.id, "catalog id")->required();
  iemit->add_option("--param", config.params, "generator parameter key=value")->allow_extra_args(false);
  iemit->add_option("-o,--output", config.output, "output file, '-' for stdout");
  CLI::App *icheck = instances->add_subcommand("check", "re-verify an entry's ceiling by regions");
  icheck->add_option("--id", config.id, "catalog id")->required();
  icheck->add_option("--param", config.params, "generator parameter key=value")->allow_extra_args(false);
  add_max_n(icheck);
  add_format(icheck);

  CLI11_PARSE(app, argc, argv);
  config.command = app.get_subcommands().front()->get_name();

  try
  {
    if (opt->parsed())
    {
      return cmd_opt(config);
    }
    if (worst->parsed())
    {
      return cmd_worst(config);
    }
    if (sim->parsed())
    {
      return cmd_simulate(config);
    }
    if (scheme->parsed())
    {
      return cmd_scheme(config);
    }
    if (verify->parsed())
    {
      return cmd_verify(config);
    }
    if (instances->parsed())
    {
      if (ilist->parsed())
      {
        return cmd_instances_list(config);
      }
      if (iemit->parsed())
      {
        return cmd_instances_emit(config);
      }
      return cmd_instances_check(config);
    }
  }
  catch (Error const &e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  catch (std::exception const &e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
