#include "setrel/solver.hpp"

#include <atomic>
#include <chrono>
#include <mutex>
#include <thread>

#include "setrel/bruteforce.hpp"

namespace setrel {

void complete_model(Model& m, const std::vector<Term>& formulas) {
  for (Term f : formulas)
    for (Term x : free_vars(f))
      if (!m.has(x)) m.set(x, default_value(x.sort()));
}

namespace {

bool verified(const Model& m, const std::vector<Term>& formulas) {
  try {
    return eval_all(m, formulas);
  } catch (const Error&) {
    return false;
  }
}

struct Outcome {
  DisjunctResult result;
  Model model;
  bool internal_error = false;
};

Outcome run_disjunct(TermManager& tm, const Disjunct& d, bool in_F, const std::vector<Term>& assertions,
                     const TableauOptions& topt) {
  Outcome o;
  o.result.in_F = in_F;
  Verdict v = solve(tm, d, topt);
  o.result.status = v.status;
  o.result.reason = v.reason;
  o.result.stats = v.stats;
  o.internal_error = v.internal_error && in_F;
  if (v.status != Status::Sat) return o;
  o.model = std::move(v.model);
  complete_model(o.model, assertions);
  if (!verified(o.model, assertions)) {
    o.result.status = Status::Unknown;
    o.result.reason = "model failed verification";
    o.internal_error = in_F;
  }
  return o;
}

}  // namespace

SolveResult solve_assertions(TermManager& tm, const std::vector<Term>& assertions, const SolverOptions& opt) {
  using clock = std::chrono::steady_clock;
  auto start = clock::now();
  // Options for the next disjunct; false once the overall budget is spent.
  auto budget = [&](TableauOptions& t) {
    if (opt.timeout_seconds <= 0) return true;
    double left = opt.timeout_seconds - std::chrono::duration<double>(clock::now() - start).count();
    if (left <= 0) return false;
    t.timeout_seconds = t.timeout_seconds > 0 ? std::min(t.timeout_seconds, left) : left;
    return true;
  };
  SolveResult out;
  Preprocessed pre;
  try {
    pre = preprocess(tm, assertions, {opt.tableau.dnf_cap});
  } catch (const ResourceLimit& e) {
    out.status = Status::Unknown;
    out.reason = e.what();
    return out;
  }
  out.report = pre.report;
  out.in_F = pre.report.in_F;

  const std::size_t n = pre.disjuncts.size();
  std::vector<Outcome> results(n);
  std::vector<bool> done(n, false);

  if (opt.jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      TableauOptions topt = opt.tableau;
      if (!budget(topt)) break;
      results[i] = run_disjunct(tm, pre.disjuncts[i], pre.reports[i].in_F, assertions, topt);
      done[i] = true;
      if (results[i].result.status == Status::Sat) break;
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};
    std::mutex mu;
    TableauOptions topt = opt.tableau;
    topt.stop = &stop;
    topt.trace = nullptr;
    auto worker = [&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= n || stop.load()) return;
        TableauOptions local = topt;
        if (!budget(local)) return;
        Outcome o = run_disjunct(tm, pre.disjuncts[i], pre.reports[i].in_F, assertions, local);
        std::lock_guard<std::mutex> lock(mu);
        if (o.result.status == Status::Sat) stop = true;
        results[i] = std::move(o);
        done[i] = true;
      }
    };
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < std::min(opt.jobs, n); ++k) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  bool all_unsat = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (!done[i]) continue;
    Outcome& o = results[i];
    out.disjuncts.push_back(o.result);
    out.stats.merge(o.result.stats);
    out.internal_error |= o.internal_error;
    if (o.result.status == Status::Sat && out.status != Status::Sat) {
      out.status = Status::Sat;
      out.model = std::move(o.model);
    }
    if (o.result.status != Status::Unsat) {
      all_unsat = false;
      if (o.result.status == Status::Unknown && out.reason.empty()) out.reason = o.result.reason;
    }
  }
  if (out.status == Status::Sat) {
    out.reason.clear();
    return out;
  }
  bool complete = std::all_of(done.begin(), done.end(), [](bool b) { return b; });
  out.status = all_unsat && complete ? Status::Unsat : Status::Unknown;
  if (out.status == Status::Unknown && out.reason.empty() && !complete) out.reason = "timeout";
  if (out.status == Status::Unsat) out.reason.clear();
  return out;
}

}  // namespace setrel
