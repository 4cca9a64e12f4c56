// Acceptance run: one PASS/FAIL line per criterion; exit status 1 if any fails.
#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "ebsched/cli/commands.hpp"
#include "ebsched/cli/report.hpp"
#include "ebsched/error.hpp"
#include "ebsched/kernel/apply.hpp"
#include "ebsched/kernel/laws.hpp"
#include "ebsched/model/checks.hpp"
#include "ebsched/runtime/run.hpp"
#include "ebsched/verify/verify.hpp"
#include "support.hpp"

using namespace ebsched;
using ebsched::testing::corpus;
using ebsched::testing::Loaded;

namespace {

// Time limits in seconds.
constexpr double kLawsLimit = 60;
constexpr double kOracleLimit = 120;
constexpr double kWellFormedLimit = 30;
constexpr double kRefinementLimit = 30;
constexpr double kDecompositionLimit = 30;
constexpr double kScheduleLimit = 120;
constexpr double kDeadlockLimit = 60;
constexpr double kRuntimeLimit = 60;
constexpr double kNegativeLimit = 30;

// Sizes and counts.
constexpr std::size_t kLawSize = 8;
constexpr std::size_t kLawCases = 200;
constexpr std::uint64_t kLawSeed = 7;
constexpr int kOracleExprs = 120;
constexpr std::size_t kOracleMaxSize = 8;
constexpr std::uint64_t kForkStates = 10000;
constexpr model::Value kInitialVariant = 20;
constexpr std::uint64_t kAbstractStates = 16;
constexpr std::size_t kDeadlockTraceLength = 4;
constexpr std::uint64_t kRuns = 1000;

struct Outcome {
  bool pass = true;
  std::string detail;
};

/// Collects failures; detail keeps the first few.
struct Checker {
  Outcome o;
  std::ostringstream notes;
  void expect(bool ok, const std::string& what) {
    if (!ok) {
      if (o.pass) notes << "failed: ";
      else notes << "; ";
      notes << what;
      o.pass = false;
    }
  }
  Outcome done(const std::string& summary) {
    o.detail = o.pass ? summary : notes.str();
    return o;
  }
};

int failures = 0;

void criterion(int n, const std::string& name, double limit, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs >= limit) {
    out.pass = false;
    out.detail += " (over the " + std::to_string(static_cast<int>(limit)) + " s limit)";
  }
  failures += !out.pass;
  std::cout << "criterion " << n << " [" << (out.pass ? "PASS" : "FAIL") << "] " << name << ": " << out.detail
            << " (" << std::fixed;
  std::cout.precision(2);
  std::cout << secs << " s)" << std::endl;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<verify::TaskReport> verify_tasks(const Loaded& l) {
  std::vector<verify::TaskReport> out;
  for (const auto& t : l.file.tasks) out.push_back(verify::verify_task(l.file.machine, l.part(t.submodel), t));
  return out;
}

kernel::Bits where(const Loaded& l, const std::string& expr, const model::Scope& scope) {
  return model::states_where(model::resolve_predicate(model::parse_expr(expr), scope, "criterion"), scope);
}

Outcome laws() {
  Checker c;
  kernel::LawOptions opt;
  opt.max_size = kLawSize;
  opt.cases = kLawCases;
  opt.seed = kLawSeed;
  const auto r = kernel::run_laws(opt);
  for (const auto& f : r.failures) c.expect(false, f.law + " on " + f.counterexample.to_string());
  c.expect(r.cases == kLawCases, "ran " + std::to_string(r.cases) + " cases");
  std::ostringstream cli_out, cli_err;
  c.expect(cli::run_cli({"laws", "--size", "8", "--cases", "200", "--seed", "7"}, cli_out, cli_err) == 0,
           "cmd laws exit status");
  return c.done(std::to_string(kernel::algebraic_laws().size()) + " laws x " + std::to_string(r.cases) +
                " cases, " + std::to_string(r.checks) + " checks exact");
}

Outcome oracle() {
  Checker c;
  kernel::Rng rng(2024);
  std::size_t sets = 0;
  for (int i = 0; i < kOracleExprs && c.o.pass; ++i) {
    const auto space = kernel::random_space(rng, kOracleMaxSize);
    const auto t = kernel::random_transformer(rng, space, 4);
    const auto nf = kernel::to_normal_form(t);
    const std::size_t n = space->size();
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
      kernel::Bits q(n);
      for (std::size_t b = 0; b < n; ++b)
        if ((m >> b) & 1u) q.set(static_cast<kernel::StateIndex>(b));
      ++sets;
      if (nf.apply(q) != kernel::apply(t, q)) {
        c.expect(false, t.to_string());
        break;
      }
    }
  }
  return c.done(std::to_string(kOracleExprs) + " expressions, " + std::to_string(sets) +
                " postconditions, normal form equals direct apply");
}

Outcome well_formed() {
  Checker c;
  const Loaded l("dining_forks.ebt");
  c.expect(l.el.space->size() == kForkStates, "state count " + std::to_string(l.el.space->size()));
  c.expect(model::check_invariant(l.el).pass, "INV");
  const auto init = l.el.init.to_vector();
  c.expect(init.size() == 1 && l.el.variant.at(init[0]) == kInitialVariant, "initial variant");
  c.expect(model::check_convergence_variant(l.el).pass, "CONV.variant");
  c.expect(model::check_convergence_semantic(l.el).pass, "CONV.semantic");
  return c.done("10000 states, invariant holds, initial variant 20, both convergence checks pass");
}

Outcome refinement() {
  Checker c;
  const Loaded abs("dining_abstract.ebt");
  const Loaded conc("dining_forks.ebt");
  c.expect(abs.el.space->size() == kAbstractStates, "abstract state count");
  const auto vs = model::check_machine_refinement(abs.file.machine, abs.el, conc.file.machine, conc.el);
  for (const auto& v : vs) c.expect(v.pass, v.id + ": " + v.message);
  const Loaded mutant("mutants/guard_weakened.ebt");
  std::string witness;
  bool guard_failed = false;
  for (const auto& v : model::check_machine_refinement(abs.file.machine, abs.el, mutant.file.machine, mutant.el))
    if (!v.pass && v.id == "REF.guard.Ph1Eat" && !v.witnesses.empty()) {
      guard_failed = true;
      witness = cli::witness_json(v, v.witnesses[0]).dump();
    }
  c.expect(guard_failed, "guard-weakening mutant not caught");
  return c.done(std::to_string(vs.size()) + " refinement obligations pass; mutant fails REF.guard.Ph1Eat at " +
                witness);
}

Outcome decomposition() {
  Checker c;
  const Loaded l("dining_forks.ebt");
  const auto golden = slurp(std::string(EBSCHED_GOLDEN_DIR) + "/decomposition.txt");
  c.expect(!golden.empty() && model::decomposition_table(l.parts) == golden, "table differs from golden file");
  std::size_t n = 0;
  for (std::size_t a = 0; a < l.parts.size(); ++a)
    for (std::size_t b = a + 1; b < l.parts.size(); ++b)
      for (const auto& v : model::check_external_abstraction(l.file.machine, l.parts[a], l.parts[b])) {
        ++n;
        c.expect(v.pass, v.id);
      }
  c.expect(n > 0, "no external abstraction obligations");
  return c.done("table matches golden; " + std::to_string(n) + " external abstraction obligations pass");
}

Outcome schedules() {
  Checker c;
  const Loaded l("dining_forks.ebt");
  const auto reports = verify_tasks(l);
  std::size_t obligations = 0;
  for (const auto& r : reports) {
    std::string script;
    for (const auto& st : r.steps) script += st.app.kind == model::ScriptStep::Kind::P1 ? "P1 " : "P2 ";
    c.expect(script == "P1 P2 P1 P1 ", r.task + " script " + script);
    for (const auto* o : r.all()) {
      ++obligations;
      c.expect(o->pass(), r.task + "." + o->id);
    }
  }
  // The P1 instance of task 1: event Ph1GetFork1 with the stated h1 and g1.
  const auto sme = model::elaborate(l.file.machine, l.part("Sub1"));
  const auto& first = reports.at(0).steps.at(0).app;
  c.expect(first.events == std::vector<std::string>{"Ph1GetFork1"}, "first event");
  c.expect(model::states_where(first.h, sme.el.scope) == where(l, "fork1 /= 1 and ph1eaten = FALSE", sme.el.scope),
           "h1");
  c.expect(model::states_where(first.g, sme.el.scope) == where(l, "fork1 = 1 or ph1eaten = TRUE", sme.el.scope),
           "g1");
  const auto sys = verify::verify_system(l.file.machine, l.el, l.parts, l.file.tasks, reports);
  std::size_t ext = 0;
  for (const auto& o : sys.obligations) {
    c.expect(o.pass(), o.id);
    ext += o.id.rfind("SYS.ext.", 0) == 0;
  }
  c.expect(ext > 0, "no per-external-event system obligations");
  // The five-step script from the requirement does not tile the schedule
  // (five events, one of them grouped by P2).
  auto literal = l.file.tasks[0];
  literal.script.push_back(literal.script.back());
  const auto lr = verify::verify_task(l.file.machine, l.part(literal.submodel), literal);
  const bool rejected = !lr.pass() && lr.obligations.size() == 1 && lr.obligations[0].id == "TASK.tiling";
  c.expect(rejected, "five-step script was not rejected by tiling");
  return c.done("4 tasks x [P1, P2, P1, P1], " + std::to_string(obligations) + " obligations pass; h1/g1 as stated; " +
                std::to_string(sys.obligations.size()) + " system obligations pass (" + std::to_string(ext) +
                " per external event); literal [P1, P2, P1, P1, P1] rejected: " + lr.obligations[0].verdict.message);
}

Outcome deadlocks() {
  Checker c;
  const Loaded good("dining_forks.ebt");
  const auto gsys = runtime::make_system(good.el, good.parts, good.file.tasks);
  const auto g = runtime::explore(gsys);
  c.expect(!g.partial, "good exploration partial");
  c.expect(g.deadlocks.empty(), std::to_string(g.deadlocks.size()) + " deadlocks in the verified system");
  c.expect(g.assertion_failures.empty(), "assertion failures in the verified system");
  c.expect(!g.finals.empty(), "no terminal state");
  const auto done = good.el.space->encode(std::vector<model::Value>{0, 0, 0, 0, 1, 1, 1, 1});
  for (const auto& f : g.finals) c.expect(good.el.fin.test(f.state) && f.state == done, "terminal state misses fin");

  const Loaded bad("dining_forks_bad.ebt");
  const auto bsys = runtime::make_system(bad.el, bad.parts, bad.file.tasks);
  const auto b = runtime::explore(bsys);
  const auto cycle = bad.el.space->encode(std::vector<model::Value>{1, 2, 3, 4, 0, 0, 0, 0});
  const auto* d = b.shortest_deadlock();
  c.expect(d && d->state == cycle, "shortest deadlock is not the fork cycle");
  c.expect(d && d->trace.size() == kDeadlockTraceLength, "shortest deadlock trace length");
  c.expect(d && runtime::replay(bsys, d->trace), "deadlock trace does not replay");
  return c.done("verified: " + std::to_string(g.configurations) + " configurations, 0 deadlocks, every terminal state " +
                "all eaten with forks down; bad: " + std::to_string(b.deadlocks.size()) +
                " stuck states, shortest " + bad.el.space->format(cycle) + " after " +
                std::to_string(d ? d->trace.size() : 0) + " steps");
}

Outcome concurrent() {
  Checker c;
  const Loaded l("dining_forks.ebt");
  const auto sys = runtime::make_system(l.el, l.parts, l.file.tasks);
  const auto done = l.el.space->encode(std::vector<model::Value>{0, 0, 0, 0, 1, 1, 1, 1});
  std::vector<std::vector<std::string>> expect;
  for (const auto& t : sys.tasks) {
    std::vector<std::string> names;
    for (const auto& tr : t.automaton.transitions)
      if (tr.label == runtime::Label::Event) names.push_back(tr.event);
    expect.push_back(names);
  }
  for (std::uint64_t seed = 0; seed < kRuns && c.o.pass; ++seed) {
    const auto r = runtime::run(sys, seed);
    c.expect(r.outcome == runtime::Outcome::Completed, "seed " + std::to_string(seed) + " " +
                                                           runtime::outcome_name(r.outcome));
    c.expect(r.final_state == done, "seed " + std::to_string(seed) + " final state");
    std::vector<std::vector<std::string>> seen(sys.tasks.size());
    for (const auto& s : r.trace) seen[static_cast<std::size_t>(s.task)].push_back(l.el.events[s.event].name);
    for (std::size_t k = 0; k < seen.size(); ++k) {
      c.expect(seen[k].size() == 5, "task trace length");
      c.expect(seen[k] == expect[k], "seed " + std::to_string(seed) + " " + sys.tasks[k].name + " order");
    }
  }
  for (std::uint64_t seed : {0ull, 42ull, 999ull})
    c.expect(runtime::trace_text(sys, runtime::run(sys, seed)) == runtime::trace_text(sys, runtime::run(sys, seed)),
             "seed " + std::to_string(seed) + " not reproducible");
  return c.done(std::to_string(kRuns) + " runs complete with all eaten and forks down, 5 events per task in " +
                "schedule order, traces reproducible");
}

Outcome negative() {
  Checker c;
  const Loaded l("mutants/g1_weakened.ebt");
  const auto* t = l.file.find_task("Task1");
  const auto r = verify::verify_task(l.file.machine, l.part(t->submodel), *t);
  std::string found;
  for (const auto& o : r.steps.at(0).obligations)
    if ((o.id == "P1.A5" || o.id == "P1.A3") && !o.pass() && !o.verdict.witnesses.empty() && found.empty())
      found = o.id + " at " + cli::witness_json(o.verdict, o.verdict.witnesses[0]).dump();
  c.expect(!found.empty(), "neither A3 nor A5 fails");
  std::ostringstream out, err;
  const int code = cli::run_cli({"verify", corpus("mutants/g1_weakened.ebt"), "--task", "Task1"}, out, err);
  c.expect(code == 1, "exit status " + std::to_string(code));
  return c.done("g1 := (fork1 = 1) fails " + found + ", exit 1");
}

}  // namespace

int main() {
  criterion(1, "algebraic law suite", kLawsLimit, laws);
  criterion(2, "normal form oracle", kOracleLimit, oracle);
  criterion(3, "fork machine well-formed", kWellFormedLimit, well_formed);
  criterion(4, "refinement of the abstract machine", kRefinementLimit, refinement);
  criterion(5, "decomposition table", kDecompositionLimit, decomposition);
  criterion(6, "schedule verification", kScheduleLimit, schedules);
  criterion(7, "deadlock discrimination", kDeadlockLimit, deadlocks);
  criterion(8, "concurrent runtime", kRuntimeLimit, concurrent);
  criterion(9, "negative pattern test", kNegativeLimit, negative);
  std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria fail") << std::endl;
  return failures == 0 ? 0 : 1;
}
