#include "setrel/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "setrel/benchgen.hpp"
#include "setrel/bruteforce.hpp"
#include "setrel/frontend.hpp"
#include "setrel/solver.hpp"

namespace setrel::cli {

namespace {

std::string trace_line(const TraceEvent& ev) {
  std::ostringstream os;
  os << ev.step << ' ' << rule_name(ev.rule) << " depth=" << ev.depth;
  if (ev.branch >= 0) os << " branch=" << ev.branch;
  os << " :";
  for (const auto& l : ev.premises) os << ' ' << l.to_string();
  return os.str();
}

void print_stats(std::ostream& out, const SolveResult& r) {
  out << "; in-F " << (r.in_F ? "yes" : "no") << '\n';
  for (std::size_t i = 0; i < kNumRules; ++i) {
    if (r.stats.applications[i] == 0) continue;
    out << "; rule " << rule_name(static_cast<Rule>(i)) << ' ' << r.stats.applications[i] << '\n';
  }
  out << "; steps " << r.stats.steps << "\n; choice-points " << r.stats.choice_points << "\n; max-depth "
      << r.stats.max_depth << "\n; oracle-calls " << r.stats.oracle_calls << '\n';
  for (std::size_t i = 0; i < r.disjuncts.size(); ++i) {
    const auto& d = r.disjuncts[i];
    out << "; disjunct " << i << ' ' << status_name(d.status) << ' ' << d.stats.seconds << "s steps "
        << d.stats.steps << '\n';
  }
}

int run_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::ifstream in(cfg.file);
  if (!in) {
    err << "error: cannot open " << cfg.file << '\n';
    return kUsage;
  }
  std::stringstream buf;
  buf << in.rdbuf();

  TermManager tm;
  Script sc;
  try {
    sc = parse(tm, buf.str());
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInput;
  }

  if (cfg.fragment_only) {
    try {
      out << preprocess(tm, sc.assertions, {cfg.dnf_cap}).report.to_string() << '\n';
    } catch (const ResourceLimit& e) {
      err << "error: " << e.what() << '\n';
      return kInput;
    }
    return kOk;
  }

  SolverOptions opt;
  opt.jobs = std::max<std::size_t>(cfg.jobs, 1);
  opt.tableau.oracle = cfg.oracle;
  opt.tableau.max_steps = cfg.max_steps;
  opt.timeout_seconds = cfg.timeout;
  opt.tableau.dnf_cap = cfg.dnf_cap;
  if (cfg.dump_trace) opt.tableau.trace = [&err](const TraceEvent& ev) { err << trace_line(ev) << '\n'; };

  SolveResult r;
  try {
    r = solve_assertions(tm, sc.assertions, opt);
  } catch (const UnsupportedLiteral& e) {
    err << "error: " << e.what() << '\n';
    return kInput;
  } catch (const SortError& e) {
    err << "error: " << e.what() << '\n';
    return kInput;
  }

  if (cfg.check_model && r.status == Status::Sat) {
    bool ok = false;
    try {
      ok = eval_all(r.model, sc.assertions);
    } catch (const Error& e) {
      err << "error: " << e.what() << '\n';
    }
    if (!ok) {
      err << "error: model does not satisfy the assertions\n";
      return kVerification;
    }
  }
  if (cfg.check_model && r.internal_error) {
    err << "error: a fragment-F disjunct produced a model that failed verification\n";
    return kVerification;
  }

  out << status_name(r.status) << '\n';
  if (r.status == Status::Unknown && !r.reason.empty()) err << "; reason: " << r.reason << '\n';
  if (r.status == Status::Sat && (cfg.model || sc.get_model)) out << print_model(r.model, sc.constants);
  if (cfg.stats) print_stats(out, r);
  return kOk;
}

int run_gen(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  TermManager tm;
  Script sc;
  if (cfg.family == "hilbert") {
    sc = gen_hilbert(tm, random_hilbert(cfg.seed));
  } else if (cfg.family == "random") {
    sc = gen_random(tm, cfg.seed);
  } else {
    err << "error: unknown family " << cfg.family << '\n';
    return kUsage;
  }
  std::string text = print_script(tm, sc);
  if (cfg.out.empty() || cfg.out == "-") {
    out << text;
    return kOk;
  }
  std::ofstream f(cfg.out);
  if (!f) {
    err << "error: cannot write " << cfg.out << '\n';
    return kUsage;
  }
  f << text;
  return kOk;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.command == "solve") return run_solve(cfg, out, err);
  if (cfg.command == "gen") return run_gen(cfg, out, err);
  err << "error: unknown command " << cfg.command << '\n';
  return kUsage;
}

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"setrel: satisfiability of finite set and relation constraints"};
  app.require_subcommand(1);

  std::string oracle = "auto";
  auto* solve = app.add_subcommand("solve", "decide an SMT-LIB script");
  solve->add_option("file", cfg.file, "input script")->required();
  solve->add_option("--oracle", oracle, "element theory oracle")->check(CLI::IsMember({"euf", "lia", "auto"}));
  solve->add_option("--max-steps", cfg.max_steps, "rule applications per disjunct");
  solve->add_option("--timeout", cfg.timeout, "wall-clock seconds for the whole run, 0 for none");
  solve->add_flag("--check-model", cfg.check_model, "re-evaluate the model on the input");
  solve->add_flag("--dump-trace", cfg.dump_trace, "print rule applications to stderr");
  solve->add_flag("--stats", cfg.stats, "print rule counts and timings");
  solve->add_flag("--fragment-check-only", cfg.fragment_only, "print the fragment report and exit");
  solve->add_flag("--model", cfg.model, "print the model when sat");
  solve->add_option("--jobs", cfg.jobs, "parallel disjunct walkers");
  solve->add_option("--dnf-cap", cfg.dnf_cap, "maximum number of disjuncts");

  auto* gen = app.add_subcommand("gen", "generate an instance");
  gen->add_option("--family", cfg.family, "instance family")->check(CLI::IsMember({"hilbert", "random"}));
  gen->add_option("--seed", cfg.seed, "random seed");
  gen->add_option("--out", cfg.out, "output file, stdout by default");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  cfg.command = solve->parsed() ? "solve" : "gen";
  cfg.oracle = parse_oracle_kind(oracle).value_or(OracleKind::Auto);
  return run(cfg, out, err);
}

}  // namespace setrel::cli
