#include "dam/cli.h"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "dam/analysis.h"
#include "dam/checker.h"
#include "dam/errors.h"
#include "dam/gadgets.h"
#include "dam/mechanism_io.h"
#include "dam/syntax.h"
#include "json.hpp"

namespace dam::cli {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
  if (!out) throw Error("failed writing '" + path + "'");
}

// Inline text, or the contents of a file when written as @path.
std::string formula_text(const std::string& arg) {
  if (!arg.empty() && arg.front() == '@') return read_file(arg.substr(1));
  return arg;
}

ParseOptions options_for(const Mechanism& m) {
  ParseOptions opts;
  opts.seller_names.emplace();
  for (AgentIndex s : m.network.sellers()) {
    for (const auto& name : m.network.agent(s).names) opts.seller_names->insert(name);
  }
  return opts;
}

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

json stats_json(const Mechanism& m, std::size_t states, Clock::time_point start) {
  return {{"agents", m.network.size()},
          {"states_explored", states},
          {"elapsed_ms", elapsed_ms(start)}};
}

std::string rational_text(const Rational& r) { return to_string(r); }

struct CheckArgs {
  std::string model, at, formula;
  bool strategic = false;
  bool json = false;
};

int do_check(const CheckArgs& a, std::ostream& out) {
  const auto start = Clock::now();
  const Mechanism m = load_mechanism(a.model);
  const auto at = m.network.find_id(a.at);
  if (!at) throw Error("unknown agent id '" + a.at + "'");
  const Formula f = parse_surface(formula_text(a.formula), options_for(m));
  CheckStats stats;
  const bool value = a.strategic ? check_strategic(m, *at, f, &stats)
                                 : check(m, *at, f, &stats);
  if (a.json) {
    out << json{{"result", value},
                {"stats", stats_json(m, stats.states_explored, start)}}
               .dump()
        << "\n";
  } else {
    out << (value ? "true" : "false") << "\n";
  }
  return value ? 0 : 1;
}

struct StrategyArgs {
  std::string model, goal;
  std::optional<std::size_t> max_depth;
  bool json = false;
};

int do_strategy(const StrategyArgs& a, std::ostream& out) {
  const auto start = Clock::now();
  const Mechanism m = load_mechanism(a.model);
  const Formula goal = parse_surface(formula_text(a.goal), options_for(m));
  const StrategyResult r = strategy_exists(m, goal, a.max_depth);
  std::vector<std::string> steps;
  for (const auto& act : r.witness) steps.push_back(format_joint_action(m.network, act));
  if (a.json) {
    json doc{{"result", r.found}, {"stats", stats_json(m, r.states_explored, start)}};
    if (r.found) doc["witness"] = steps;
    out << doc.dump() << "\n";
  } else {
    out << (r.found ? "true" : "false") << "\n";
    if (r.found) {
      std::string line;
      for (const auto& s : steps) line += (line.empty() ? "" : "; ") + s;
      out << "witness: " << (line.empty() ? "(empty)" : line) << "\n";
    }
  }
  return r.found ? 0 : 1;
}

struct NeArgs {
  std::string model, profile;
  bool emit_formula = false;
  bool json = false;
};

int do_ne(const NeArgs& a, std::ostream& out) {
  const auto start = Clock::now();
  const Mechanism m = load_mechanism(a.model);
  const Profile profile = parse_profile(m.network, a.profile);
  const NeResult r = check_ne_direct(m, profile);
  const MarketNetwork& net = m.network;

  if (a.emit_formula) {
    out << format_formula(ne_formula(m, profile, r.utilities)) << "\n";
  }
  if (a.json) {
    json doc{{"result", r.equilibrium},
             {"stats", stats_json(m, r.deviations_checked, start)}};
    json utilities = json::object();
    const auto sellers = net.sellers();
    for (std::size_t p = 0; p < sellers.size(); ++p) {
      utilities[net.agent(sellers[p]).id] = rational_text(r.utilities[p]);
    }
    doc["utilities"] = utilities;
    if (r.witness) {
      const auto& w = *r.witness;
      doc["witness"] = {{"seller", net.agent(w.seller).id},
                        {"step", w.step + 1},
                        {"target", w.target ? net.agent(*w.target).id : "skip"},
                        {"utility", rational_text(w.utility)}};
    }
    out << doc.dump() << "\n";
  } else {
    out << (r.equilibrium ? "true" : "false") << "\n";
    if (r.witness) {
      const auto& w = *r.witness;
      const AgentIndex pos = net.seller_position(w.seller);
      out << "witness: " << net.agent(w.seller).id << ":"
          << (w.target ? net.agent(*w.target).id : "skip") << " at step "
          << w.step + 1 << " gives " << rational_text(w.utility) << " > "
          << rational_text(r.utilities[pos]) << "\n";
    }
  }
  return r.equilibrium ? 0 : 1;
}

int do_translate(const std::string& model, const std::string& formula,
                 std::ostream& out) {
  const Mechanism m = load_mechanism(model);
  const Formula f = parse_surface(formula_text(formula), options_for(m));
  out << format_formula(translate(m, f)) << "\n";
  return 0;
}

int do_gen_sat(const std::string& dimacs, const std::string& out_model,
               const std::string& out_goal) {
  const GadgetInstance g = gen_sat_gadget(read_dimacs(read_file(dimacs)));
  save_mechanism(out_model, g.mechanism);
  write_file(out_goal, format_formula(g.formula) + "\n");
  return 0;
}

int do_gen_qbf(const std::string& qdimacs, const std::string& out_model,
               const std::string& out_formula) {
  const GadgetInstance g = gen_qbf_gadget(read_qdimacs(read_file(qdimacs)));
  save_mechanism(out_model, g.mechanism);
  write_file(out_formula, format_formula(g.formula) + "\n");
  return 0;
}

int do_gen_expressivity(int n, const std::string& dir) {
  const ExpressivityPair p = expressivity_pair(n);
  std::filesystem::create_directories(dir);
  const std::filesystem::path base(dir);
  save_mechanism((base / "m1.json").string(), p.m1);
  save_mechanism((base / "m2.json").string(), p.m2);
  write_file((base / "formula.txt").string(), format_formula(p.formula) + "\n");
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Model checker for diffusion auction mechanisms", "damc"};
  app.require_subcommand(1);

  CheckArgs check_args;
  auto* check_cmd = app.add_subcommand("check", "Evaluate a formula at an agent");
  check_cmd->add_option("--model", check_args.model, "Mechanism JSON file")->required();
  check_cmd->add_option("--at", check_args.at, "Agent id")->required();
  check_cmd->add_option("--formula", check_args.formula, "Formula text or @file")->required();
  check_cmd->add_flag("--strategic", check_args.strategic, "Allow coalition modalities");
  check_cmd->add_flag("--json", check_args.json, "JSON report");

  StrategyArgs strategy_args;
  std::size_t max_depth = 0;
  auto* strategy_cmd =
      app.add_subcommand("strategy", "Search for a sequence of joint actions reaching a goal");
  strategy_cmd->add_option("--model", strategy_args.model, "Mechanism JSON file")->required();
  strategy_cmd->add_option("--goal", strategy_args.goal, "Goal formula or @file")->required();
  auto* depth_opt = strategy_cmd->add_option("--max-depth", max_depth, "Search depth (default |S|*|B|)")
                        ->check(CLI::PositiveNumber);
  strategy_cmd->add_flag("--json", strategy_args.json, "JSON report");

  NeArgs ne_args;
  auto* ne_cmd = app.add_subcommand("ne", "Check a profile for a Nash equilibrium");
  ne_cmd->add_option("--model", ne_args.model, "Mechanism JSON file")->required();
  ne_cmd->add_option("--profile", ne_args.profile, "\"s1:a,s2:skip[;step2...]\"")->required();
  ne_cmd->add_flag("--emit-formula", ne_args.emit_formula, "Print the equilibrium formula first");
  ne_cmd->add_flag("--json", ne_args.json, "JSON report");

  std::string tr_model, tr_formula;
  auto* tr_cmd = app.add_subcommand("translate", "Remove coalition modalities");
  tr_cmd->add_option("--model", tr_model, "Mechanism JSON file")->required();
  tr_cmd->add_option("--formula", tr_formula, "Formula text or @file")->required();

  auto* gen_cmd = app.add_subcommand("gen", "Generate gadget instances");
  gen_cmd->require_subcommand(1);
  std::string dimacs, sat_model, sat_goal;
  auto* sat_cmd = gen_cmd->add_subcommand("sat", "3-SAT gadget from DIMACS");
  sat_cmd->add_option("--dimacs", dimacs, "DIMACS CNF file")->required();
  sat_cmd->add_option("--out-model", sat_model, "Output mechanism")->required();
  sat_cmd->add_option("--out-goal", sat_goal, "Output goal formula")->required();
  std::string qdimacs, qbf_model, qbf_formula;
  auto* qbf_cmd = gen_cmd->add_subcommand("qbf", "QBF gadget from QDIMACS");
  qbf_cmd->add_option("--qdimacs", qdimacs, "QDIMACS file")->required();
  qbf_cmd->add_option("--out-model", qbf_model, "Output mechanism")->required();
  qbf_cmd->add_option("--out-formula", qbf_formula, "Output formula")->required();
  int expr_n = 1;
  std::string expr_dir;
  auto* expr_cmd = gen_cmd->add_subcommand("expressivity", "The two-mechanism expressivity pair");
  expr_cmd->add_option("--n", expr_n, "Number of alpha buyers")->required()->check(CLI::PositiveNumber);
  expr_cmd->add_option("--out-dir", expr_dir, "Output directory")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return 2;
  }
  if (depth_opt->count() > 0) strategy_args.max_depth = max_depth;

  try {
    if (check_cmd->parsed()) return do_check(check_args, out);
    if (strategy_cmd->parsed()) return do_strategy(strategy_args, out);
    if (ne_cmd->parsed()) return do_ne(ne_args, out);
    if (tr_cmd->parsed()) return do_translate(tr_model, tr_formula, out);
    if (sat_cmd->parsed()) return do_gen_sat(dimacs, sat_model, sat_goal);
    if (qbf_cmd->parsed()) return do_gen_qbf(qdimacs, qbf_model, qbf_formula);
    if (expr_cmd->parsed()) return do_gen_expressivity(expr_n, expr_dir);
  } catch (const CoalitionOperatorPresent& e) {
    err << "error: " << e.what() << " (pass --strategic)\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  err << "error: no command\n";
  return 2;
}

}  // namespace dam::cli
