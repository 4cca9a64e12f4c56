#include "ebsched/cli/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "ebsched/cli/model_file.hpp"
#include "ebsched/cli/report.hpp"
#include "ebsched/error.hpp"
#include "ebsched/kernel/laws.hpp"
#include "ebsched/model/checks.hpp"
#include "ebsched/verify/verify.hpp"

namespace ebsched::cli {

namespace {

struct Options {
  std::string model;
  std::string report;
  // verify
  std::string task;
  bool all = false;
  // explore
  std::uint64_t max_states = 10'000'000;
  // run
  std::uint64_t seed = 0;
  std::uint64_t steps = 1'000'000;
  std::uint64_t repeat = 1;
  std::string trace;
  bool force = false;
  // laws
  std::size_t size = 8;
  std::size_t cases = 200;
  std::uint64_t law_seed = 7;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// A loaded model with its elaboration and decomposition.
struct Session {
  ModelFile file;
  std::string digest;
  model::Elaboration el;
  std::vector<model::SubModel> parts;

  explicit Session(const std::string& path) {
    const auto text = read_file(path);
    file = parse_model(text, path);
    digest = cli::digest(text);
    el = model::elaborate(file.machine);
    if (file.partition) parts = model::decompose(file.machine, *file.partition);
  }
  void need_tasks() const {
    if (file.tasks.empty()) throw ModelError("model declares no tasks");
    if (!file.partition) throw ModelError("model declares tasks but no decomposition");
  }
  const model::SubModel& part(const std::string& name) const {
    for (const auto& p : parts)
      if (p.name == name) return p;
    throw ModelError("unknown sub-model " + name);
  }
};

verify::Obligation from_verdict(const kernel::Verdict& v, double millis = 0) {
  return {v.id, v.description, v, millis};
}

void print_obligation(std::ostream& out, const verify::Obligation& o, const std::string& prefix = {}) {
  out << (o.pass() ? "  pass " : "  FAIL ") << prefix << o.id;
  if (!o.pass() && !o.verdict.message.empty()) out << ": " << o.verdict.message;
  out << '\n';
  if (o.pass() || !o.verdict.space) return;
  for (const auto& w : o.verdict.witnesses) {
    out << "      " << o.verdict.space->format(w.state);
    if (w.post) out << " -> " << o.verdict.space->format(*w.post);
    out << '\n';
  }
}

verify::Obligation prefixed(verify::Obligation o, const std::string& prefix) {
  o.id = prefix + o.id;
  return o;
}

void finish(Report& report, const Options& opt, int code) {
  report.finish(code);
  if (!opt.report.empty()) write_atomically(opt.report, report.doc.dump(2) + "\n");
}

std::string step_text(const runtime::TaskSystem& sys, const std::vector<runtime::Step>& trace) {
  std::ostringstream os;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const auto& s = trace[i];
    os << "    " << i + 1 << ' ' << sys.tasks[static_cast<std::size_t>(s.task)].name << ' '
       << sys.el->events[static_cast<std::size_t>(s.event)].name << ' ' << sys.el->space->format(s.pre) << '\n';
  }
  return os.str();
}

json steps_json(const runtime::TaskSystem& sys, const std::vector<runtime::Step>& trace) {
  runtime::RunResult r;
  r.trace = trace;
  return trace_json(sys, r);
}

json exploration_json(const runtime::TaskSystem& sys, const runtime::ExplorationResult& r) {
  const auto& space = *sys.el->space;
  json dead = json::array();
  for (const auto& d : r.deadlocks)
    dead.push_back({{"state", state_json(space, d.state)}, {"trace_length", d.trace.size()},
                    {"trace", steps_json(sys, d.trace)}});
  json failed = json::array();
  for (const auto& a : r.assertion_failures)
    failed.push_back({{"state", state_json(space, a.state)},
                      {"task", sys.tasks[static_cast<std::size_t>(a.task)].name},
                      {"trace_length", a.trace.size()},
                      {"trace", steps_json(sys, a.trace)}});
  json finals = json::array();
  for (const auto& f : r.finals) finals.push_back(state_json(space, f.state));
  json out{{"configurations", r.configurations},
           {"states", r.states},
           {"final_states", finals},
           {"all_tasks_finished", r.all_finished},
           {"deadlock_count", r.deadlocks.size()},
           {"deadlocks", dead},
           {"assertion_failure_count", r.assertion_failures.size()},
           {"assertion_failures", failed},
           {"partial", r.partial}};
  if (const auto* d = r.shortest_deadlock()) out["shortest_deadlock_trace"] = d->trace.size();
  return out;
}

void print_exploration(std::ostream& out, const runtime::TaskSystem& sys, const runtime::ExplorationResult& r) {
  out << "configurations: " << r.configurations << "\nstates: " << r.states << "\nfinal states: " << r.finals.size()
      << "\ndeadlocks: " << r.deadlocks.size() << "\nassertion failures: " << r.assertion_failures.size() << '\n';
  if (r.partial) out << "limit exceeded: result is partial\n";
  for (const auto& d : r.deadlocks)
    out << "deadlock " << sys.el->space->format(d.state) << " after " << d.trace.size() << " steps\n";
  if (const auto* d = r.shortest_deadlock()) out << "  shortest deadlock trace:\n" << step_text(sys, d->trace);
  if (const auto* a = r.shortest_assertion_failure()) {
    const auto& t = sys.tasks[static_cast<std::size_t>(a->task)];
    const auto& tr = t.automaton.transitions[static_cast<std::size_t>(a->transition)];
    out << "assertion {" << model::to_string(tr.expr) << "} of " << t.name << " fails in "
        << sys.el->space->format(a->state) << "\n  trace:\n"
        << step_text(sys, a->trace);
  }
}

int cmd_check(const Options& opt, std::ostream& out) {
  Session s(opt.model);
  Report report("check", opt.model, s.digest);
  std::vector<verify::Obligation> obs;
  obs.push_back(verify::discharge("INV", "initialisation and events keep the invariant",
                                  [&] { return model::check_invariant(s.el); }));
  if (s.file.machine.variant)
    obs.push_back(verify::discharge("CONV.variant", "variant bounded and decreased by convergent events",
                                    [&] { return model::check_convergence_variant(s.el); }));
  obs.push_back(verify::discharge("CONV.semantic", "convergent events cannot run forever",
                                  [&] { return model::check_convergence_semantic(s.el); }));
  if (const auto path = s.file.refines_path()) {
    const auto abs_file = load_model(*path);
    const auto abs_el = model::elaborate(abs_file.machine);
    const auto t0 = std::chrono::steady_clock::now();
    const auto vs = model::check_machine_refinement(abs_file.machine, abs_el, s.file.machine, s.el);
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    for (const auto& v : vs) obs.push_back(from_verdict(v, ms / static_cast<double>(vs.size())));
    report.summary("refines") = abs_file.machine.name;
  }
  if (!s.parts.empty()) {
    for (std::size_t a = 0; a < s.parts.size(); ++a)
      for (std::size_t b = a + 1; b < s.parts.size(); ++b)
        for (const auto& v : model::check_external_abstraction(s.file.machine, s.parts[a], s.parts[b]))
          obs.push_back(from_verdict(v));
    std::istringstream table(model::decomposition_table(s.parts));
    json lines = json::array();
    for (std::string line; std::getline(table, line);) lines.push_back(line);
    report.summary("decomposition") = lines;
  }
  report.summary("machine") = {{"name", s.file.machine.name},
                               {"states", s.el.space->size()},
                               {"events", s.el.events.size()}};
  bool ok = true;
  out << "check " << s.file.machine.name << " (" << s.el.space->size() << " states)\n";
  for (const auto& o : obs) {
    print_obligation(out, o);
    ok &= o.pass();
  }
  report.add(obs);
  const int code = ok ? kPass : kFail;
  out << (ok ? "all " + std::to_string(obs.size()) + " obligations pass\n" : "some obligations fail\n");
  finish(report, opt, code);
  return code;
}

json task_json(const verify::TaskReport& r) {
  json steps = json::array();
  for (const auto& st : r.steps)
    steps.push_back({{"pattern", st.app.kind == model::ScriptStep::Kind::P1 ? "P1" : "P2"},
                     {"events", st.app.events},
                     {"h", st.app.h ? model::to_string(st.app.h) : ""},
                     {"g", st.app.g ? model::to_string(st.app.g) : ""},
                     {"remainder", st.app.remainder ? sched::to_string(st.app.remainder) : ""},
                     {"pass", st.pass()}});
  return {{"task", r.task},   {"submodel", r.submodel},         {"steps", steps},
          {"pass", r.pass()}, {"decomposition", r.decomposition}, {"millis", r.millis}};
}

int cmd_verify(const Options& opt, std::ostream& out) {
  Session s(opt.model);
  s.need_tasks();
  if (!opt.all && opt.task.empty()) throw UsageError("verify needs --task NAME or --all");
  std::vector<model::TaskDecl> chosen;
  if (opt.all) {
    chosen = s.file.tasks;
  } else {
    const auto* t = s.file.find_task(opt.task);
    if (!t) throw UsageError("unknown task " + opt.task);
    chosen.push_back(*t);
  }
  Report report("verify", opt.model, s.digest);
  bool ok = true;
  std::vector<verify::TaskReport> reports;
  json tasks = json::array();
  for (const auto& t : chosen) {
    auto r = verify::verify_task(s.file.machine, s.part(t.submodel), t);
    out << t.name << " (" << r.steps.size() << " pattern steps, " << r.millis << " ms)\n";
    auto emit = [&](const verify::Obligation& o, const std::string& prefix) {
      print_obligation(out, o, prefix);
      report.add(prefixed(o, prefix));
    };
    for (const auto& o : r.obligations) emit(o, t.name + ".");
    for (std::size_t k = 0; k < r.steps.size(); ++k)
      for (const auto& o : r.steps[k].obligations) emit(o, t.name + ".step" + std::to_string(k + 1) + ".");
    out << "  loop decomposition:";
    for (const auto& atom : r.decomposition) {
      out << " (";
      for (std::size_t i = 0; i < atom.size(); ++i) out << (i ? ";" : "") << atom[i];
      out << ")";
    }
    out << '\n';
    ok &= r.pass();
    tasks.push_back(task_json(r));
    reports.push_back(std::move(r));
  }
  report.summary("tasks") = tasks;
  if (opt.all) {
    const auto sys = verify::verify_system(s.file.machine, s.el, s.parts, chosen, reports);
    out << "system (" << sys.millis << " ms)\n";
    for (const auto& o : sys.obligations) {
      print_obligation(out, o);
      report.add(o);
    }
    ok &= sys.pass();
    // The operational view of the same question, reported alongside.
    const auto prog = runtime::make_system(s.el, s.parts, chosen);
    const auto ex = runtime::explore(prog);
    report.summary("exploration") = exploration_json(prog, ex);
    out << "explorer: " << ex.deadlocks.size() << " deadlocks, " << ex.assertion_failures.size()
        << " assertion failures" << (ex.partial ? " (partial)" : "") << '\n';
  }
  const int code = ok ? kPass : kFail;
  out << (ok ? "verified\n" : "verification failed\n");
  finish(report, opt, code);
  return code;
}

int cmd_explore(const Options& opt, std::ostream& out) {
  Session s(opt.model);
  s.need_tasks();
  Report report("explore", opt.model, s.digest);
  const auto sys = runtime::make_system(s.el, s.parts, s.file.tasks);
  const auto r = runtime::explore(sys, {opt.max_states});
  print_exploration(out, sys, r);
  report.summary("exploration") = exploration_json(sys, r);
  int code = kPass;
  if (!r.deadlocks.empty() || !r.assertion_failures.empty())
    code = kFail;
  else if (r.partial)
    code = kInconclusive;
  finish(report, opt, code);
  return code;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

int cmd_run(const Options& opt, std::ostream& out) {
  Session s(opt.model);
  s.need_tasks();
  Report report("run", opt.model, s.digest);
  if (!opt.force) {
    std::vector<verify::TaskReport> reports;
    bool ok = true;
    for (const auto& t : s.file.tasks) {
      reports.push_back(verify::verify_task(s.file.machine, s.part(t.submodel), t));
      ok &= reports.back().pass();
    }
    ok = ok && verify::verify_system(s.file.machine, s.el, s.parts, s.file.tasks, reports).pass();
    if (!ok) {
      out << "tasks do not verify; rerun with --force to execute them anyway\n";
      finish(report, opt, kFail);
      return kFail;
    }
  }
  const auto sys = runtime::make_system(s.el, s.parts, s.file.tasks);
  std::map<std::string, std::size_t> counts;
  std::string text;
  json runs = json::array();
  json summaries = json::array();
  bool any_bad = false, any_limit = false;
  for (std::uint64_t i = 0; i < opt.repeat; ++i) {
    const auto r = runtime::run(sys, opt.seed + i, opt.steps);
    ++counts[runtime::outcome_name(r.outcome)];
    any_bad |= r.outcome == runtime::Outcome::Deadlocked || r.outcome == runtime::Outcome::AssertionFailed;
    any_limit |= r.outcome == runtime::Outcome::StepLimit;
    if (r.outcome != runtime::Outcome::Completed)
      out << "seed " << r.seed << ": " << runtime::outcome_name(r.outcome) << " in "
          << s.el.space->format(r.final_state) << (r.message.empty() ? "" : " (" + r.message + ")") << '\n';
    json one{{"seed", r.seed},
             {"outcome", runtime::outcome_name(r.outcome)},
             {"steps", r.trace.size()},
             {"final_state", state_json(*s.el.space, r.final_state)}};
    if (!opt.trace.empty()) {
      text += "# seed " + std::to_string(r.seed) + " " + runtime::outcome_name(r.outcome) + "\n" +
              runtime::trace_text(sys, r);
      json full = one;
      full["trace"] = trace_json(sys, r);
      runs.push_back(std::move(full));
    }
    if (opt.repeat <= 100) summaries.push_back(std::move(one));
  }
  if (!opt.trace.empty()) write_atomically(opt.trace, ends_with(opt.trace, ".json") ? runs.dump(2) + "\n" : text);
  json c = json::object();
  for (const auto& [k, v] : counts) c[k] = v;
  report.summary("runs") = {{"seed", opt.seed}, {"repeat", opt.repeat}, {"outcomes", c}, {"results", summaries}};
  out << opt.repeat << " runs:";
  for (const auto& [k, v] : counts) out << ' ' << k << '=' << v;
  out << '\n';
  const int code = any_bad ? kFail : any_limit ? kInconclusive : kPass;
  finish(report, opt, code);
  return code;
}

int cmd_laws(const Options& opt, std::ostream& out) {
  kernel::LawOptions lo;
  lo.max_size = opt.size;
  lo.cases = opt.cases;
  lo.seed = opt.law_seed;
  const auto r = kernel::run_laws(lo);
  Report report("laws", "", "");
  json failures = json::array();
  for (const auto& f : r.failures) {
    out << "FAIL " << f.law << " (case " << f.case_index << "): " << f.verdict.message << "\n  "
        << f.counterexample.to_string() << '\n';
    failures.push_back({{"law", f.law}, {"case", f.case_index}, {"counterexample", f.counterexample.to_string()},
                        {"message", f.verdict.message}});
  }
  out << kernel::algebraic_laws().size() << " laws, " << r.cases << " cases, " << r.checks << " checks, "
      << r.vacuous << " vacuous: " << (r.pass() ? "pass" : "FAIL") << '\n';
  report.summary("laws") = {{"laws", kernel::algebraic_laws().size()},
                            {"cases", r.cases},
                            {"checks", r.checks},
                            {"vacuous", r.vacuous},
                            {"size", opt.size},
                            {"seed", opt.law_seed},
                            {"failures", failures}};
  const int code = r.pass() ? kPass : kFail;
  finish(report, opt, code);
  return code;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Checks, verifies and runs scheduled event systems", "ebsched"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.add_option("--report", opt.report, "Write a JSON report to this file");
  app.set_version_flag("--version", kToolVersion);

  auto* check = app.add_subcommand("check", "Elaborate a model and discharge its machine obligations");
  check->add_option("model", opt.model, "Model file (.ebt)")->required();

  auto* verify = app.add_subcommand("verify", "Verify task schedules and the composed system");
  verify->add_option("model", opt.model, "Model file (.ebt)")->required();
  auto* task_opt = verify->add_option("--task", opt.task, "One task by name");
  auto* all_opt = verify->add_flag("--all", opt.all, "Every task, then the system");
  task_opt->excludes(all_opt);

  auto* explore = app.add_subcommand("explore", "Search every interleaving of the tasks");
  explore->add_option("model", opt.model, "Model file (.ebt)")->required();
  explore->add_option("--max-states", opt.max_states, "Configuration limit")->check(CLI::PositiveNumber);

  auto* run = app.add_subcommand("run", "Execute the tasks concurrently with seeded scheduling");
  run->add_option("model", opt.model, "Model file (.ebt)")->required();
  run->add_option("--seed", opt.seed, "Seed of the first run");
  run->add_option("--steps", opt.steps, "Event limit per run");
  run->add_option("--repeat", opt.repeat, "Number of runs, seeds counting up")->check(CLI::PositiveNumber);
  run->add_option("--trace", opt.trace, "Trace file; JSON when the name ends in .json");
  run->add_flag("--force", opt.force, "Run without verifying the tasks first");

  auto* laws = app.add_subcommand("laws", "Check the algebraic laws on random transformers");
  laws->add_option("--size", opt.size, "Largest state space")->check(CLI::Range(1, 16));
  laws->add_option("--cases", opt.cases, "Number of random cases");
  laws->add_option("--seed", opt.law_seed, "Generator seed");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kPass;
  } catch (const CLI::CallForVersion& e) {
    out << kToolVersion << '\n';
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "ebsched: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (check->parsed()) return cmd_check(opt, out);
    if (verify->parsed()) return cmd_verify(opt, out);
    if (explore->parsed()) return cmd_explore(opt, out);
    if (run->parsed()) return cmd_run(opt, out);
    if (laws->parsed()) return cmd_laws(opt, out);
  } catch (const ParseError& e) {
    err << opt.model << ":" << e.what() << '\n';
    return kUsage;
  } catch (const LimitExceeded& e) {
    err << "ebsched: " << e.what() << '\n';
    return kInconclusive;
  } catch (const Error& e) {
    err << "ebsched: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace ebsched::cli
