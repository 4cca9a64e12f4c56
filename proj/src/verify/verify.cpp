#include "ebsched/verify/verify.hpp"

#include <chrono>
#include <map>

#include "ebsched/error.hpp"
#include "ebsched/kernel/checks.hpp"
#include "ebsched/kernel/kernels.hpp"

namespace ebsched::verify {

using kernel::Bits;
using kernel::StateSet;
using model::ScriptStep;

bool TaskReport::pass() const {
  for (const auto* o : all())
    if (!o->pass()) return false;
  return true;
}

std::vector<const Obligation*> TaskReport::all() const {
  std::vector<const Obligation*> out;
  for (const auto& o : obligations) out.push_back(&o);
  for (const auto& s : steps)
    for (const auto& o : s.obligations) out.push_back(&o);
  return out;
}

bool SystemReport::pass() const {
  for (const auto& o : obligations)
    if (!o.pass()) return false;
  return true;
}

namespace {

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

Obligation failed_now(std::string id, std::string description, const kernel::SpacePtr& space, std::string why) {
  return discharge(std::move(id), std::move(description), [&] { return Verdict::failed(space, why); });
}

const char* kind_name(ScriptStep::Kind k) { return k == ScriptStep::Kind::P1 ? "P1" : "P2"; }

std::string describe(const sched::NodePtr& n) { return n->is_end() ? "the end of the schedule" : sched::to_string(n); }

/// The schedule followed by the loop over no internal events: what is left
/// of a task once its schedule has run out.
Transformer task_semantics(const sched::NodePtr& s, const sched::Context& ctx) {
  std::vector<Transformer> parts;
  for (const auto& part : sched::spine(s))
    if (!part->is_end()) parts.push_back(sched::translate(*part, ctx));
  parts.push_back(sched::loop_form(std::set<std::string>{}, ctx));
  return Transformer::seq(ctx.space, std::move(parts));
}

}  // namespace

TaskReport verify_task(const model::Machine& m, const model::SubModel& sm, const model::TaskDecl& task,
                       std::uint64_t cap) {
  const auto t0 = std::chrono::steady_clock::now();
  TaskReport rep;
  rep.task = task.name;
  rep.submodel = sm.name;

  const auto sme = model::elaborate(m, sm, cap);
  const sched::Context ctx = sched::make_context(sme);
  const auto& space = ctx.space;
  const Bits& inv = sme.el.invariant;
  auto assertion = [&](const Bits& b) { return Transformer::assertion(StateSet(space, b)); };

  auto names = sm.event_names();
  const auto schedule = sched::resolve(sched::parse_schedule(task.schedule, task.schedule_line, task.schedule_column),
                                       sme.el.scope, {names.begin(), names.end()});
  const auto parts = sched::spine(schedule);

  // Tile the schedule with the script, left to right.
  std::vector<PatternApplication> apps;
  std::size_t pos = 0;
  std::string tiling_error;
  for (std::size_t k = 0; k < task.script.size() && tiling_error.empty(); ++k) {
    const auto& st = task.script[k];
    const std::string where = "step " + std::to_string(k + 1) + " (" + kind_name(st.kind) + ")";
    PatternApplication app;
    app.kind = st.kind;
    app.events = st.events;
    for (std::size_t j = 0; j < st.events.size() && tiling_error.empty(); ++j) {
      if (pos >= parts.size() || parts[pos]->kind != sched::NodeKind::Event) {
        tiling_error = where + " expects event " + st.events[j] + " but finds " +
                       (pos < parts.size() ? describe(parts[pos]) : std::string("nothing left"));
        break;
      }
      if (parts[pos]->event != st.events[j]) {
        tiling_error = where + " expects event " + st.events[j] + " but finds " + parts[pos]->event;
        break;
      }
      ++pos;
    }
    if (!tiling_error.empty()) break;
    if (pos >= parts.size() || parts[pos]->kind != sched::NodeKind::Assert) {
      tiling_error = where + " expects an assertion after " + st.events.back() + " but finds " +
                     (pos < parts.size() ? describe(parts[pos]) : std::string("nothing left"));
      break;
    }
    app.g = parts[pos]->expr;
    ++pos;
    app.remainder = sched::from_spine({parts.begin() + static_cast<std::ptrdiff_t>(pos), parts.end()});
    app.h = model::resolve_predicate(st.h, sme.el.scope, "precondition of " + where);
    apps.push_back(std::move(app));
  }
  if (tiling_error.empty() && pos < parts.size() && !parts[pos]->is_end())
    tiling_error = "the script ends before the schedule: " + describe(sched::from_spine(
                                                                 {parts.begin() + static_cast<std::ptrdiff_t>(pos),
                                                                  parts.end()}));
  if (tiling_error.empty() && apps.empty()) tiling_error = "the script is empty";

  const std::string tiling_desc = "the script covers the schedule left to right";
  if (!tiling_error.empty()) {
    rep.obligations.push_back(failed_now("TASK.tiling", tiling_desc, space, tiling_error));
    rep.millis = since(t0);
    return rep;
  }
  rep.obligations.push_back(discharge("TASK.tiling", tiling_desc, [&] { return Verdict::ok(space); }));

  std::vector<Bits> hs;
  for (const auto& app : apps) hs.push_back(ctx.where(app.h));
  rep.obligations.push_back(discharge("TASK.init", "the initialisation establishes the first precondition", [&] {
    return kernel::subset_verdict(space, sme.el.init, inv & hs.front(), "initial state outside i ∩ h");
  }));

  std::set<std::string> all_events = sched::events_of(*schedule);
  rep.obligations.push_back(discharge("TASK.side", "where nothing is enabled, fin holds", [&] {
    const Bits stuck = inv & ~ctx.guard(ctx.with_environment(all_events));
    return kernel::subset_verdict(space, stuck, sme.el.fin, "quiescent state outside fin");
  }));

  for (std::size_t k = 0; k < apps.size(); ++k) {
    rep.steps.push_back(apply_pattern(apps[k], ctx, inv));
    const auto& step = rep.steps.back();
    rep.decomposition.push_back(apps[k].events);
    if (k + 1 < apps.size()) {
      const std::string id = "TASK.thread." + std::to_string(k + 1);
      rep.obligations.push_back(discharge(id, "step " + std::to_string(k + 1) + " leaves the precondition of the next",
                                          [&] {
                                            const Transformer pre = assertion(inv & hs[k]);
                                            return kernel::refines(
                                                Transformer::seq(space, {pre, step.prefix}),
                                                Transformer::seq(space, {pre, step.prefix, assertion(inv & hs[k + 1])}));
                                          }));
    }
  }

  rep.obligations.push_back(discharge("TASK.schedule", "the schedule equals the loop over its atoms", [&] {
    std::vector<Transformer> atoms;
    for (const auto& s : rep.steps) atoms.push_back(s.atom);
    for (const auto& n : ctx.external_names) atoms.push_back(ctx.external.at(n));
    const Transformer body = Transformer::choice(space, atoms);
    const Bits stop = ~ctx.guard(ctx.with_environment(all_events));
    const Transformer loop =
        Transformer::seq(space, {Transformer::weak_iter(body), Transformer::assume(StateSet(space, stop))});
    const Transformer pre = assertion(inv & hs.front());
    return kernel::equivalent(Transformer::seq(space, {pre, task_semantics(schedule, ctx)}),
                              Transformer::seq(space, {pre, loop}));
  }));

  rep.millis = since(t0);
  return rep;
}

Transformer atom_transformer(const model::Elaboration& el, const std::vector<std::string>& atom) {
  std::vector<Transformer> steps;
  for (const auto& n : atom) steps.push_back(el.transformer(n));
  return Transformer::seq(el.space, std::move(steps));
}

SystemReport verify_system(const model::Machine& m, const model::Elaboration& el,
                           const std::vector<model::SubModel>& parts, const std::vector<model::TaskDecl>& tasks,
                           const std::vector<TaskReport>& reports) {
  const auto t0 = std::chrono::steady_clock::now();
  SystemReport rep;
  const auto& space = el.space;
  if (reports.size() != tasks.size()) throw ModelError("verify_system needs one report per task");

  auto find_part = [&](const std::string& name) -> const model::SubModel& {
    for (const auto& p : parts)
      if (p.name == name) return p;
    throw ModelError("unknown sub-model " + name);
  };
  std::map<std::string, std::size_t> task_of_part;
  for (std::size_t k = 0; k < tasks.size(); ++k) task_of_part[tasks[k].submodel] = k;

  // Atoms on the machine space.
  std::vector<Transformer> atoms;
  std::map<std::string, std::pair<std::size_t, std::size_t>> atom_of_event;  // event -> (task, atom)
  for (std::size_t k = 0; k < reports.size(); ++k)
    for (std::size_t a = 0; a < reports[k].decomposition.size(); ++a) {
      atoms.push_back(atom_transformer(el, reports[k].decomposition[a]));
      for (const auto& e : reports[k].decomposition[a]) atom_of_event[e] = {k, atoms.size() - 1};
    }
  kernel::NormalFormCache cache;

  auto part_invariant = [&](const model::SubModel& sm) {
    std::vector<model::ExprPtr> conj;
    for (const auto& l : sm.invariant) conj.push_back(l.expr);
    return model::elaborate_predicate(model::conjoin(conj), m.scope(space), "invariant of " + sm.name);
  };

  for (std::size_t k = 0; k < tasks.size(); ++k) {
    const auto& sm = find_part(tasks[k].submodel);
    const auto sme = model::elaborate(m, sm);
    const Bits ik = part_invariant(sm);
    for (const auto& x : sme.externals) {
      const std::string id = "SYS.ext." + tasks[k].name + "." + x.name;
      const auto* ext = sm.find_external(x.name);
      auto home = ext ? task_of_part.find(ext->home) : task_of_part.end();
      auto atom = atom_of_event.find(x.name);
      if (!ext || home == task_of_part.end() || atom == atom_of_event.end() || atom->second.first != home->second) {
        rep.obligations.push_back(failed_now(id, "external event " + x.name + " is refined by an atom of its home task",
                                             space, "no task atom holds " + x.name));
        continue;
      }
      const Bits i = ik & part_invariant(find_part(ext->home));
      rep.obligations.push_back(discharge(id, "external event " + x.name + " is refined by an atom of its home task",
                                          [&] {
                                            return model::refines_lifted(i, x, sme.el.space,
                                                                         cache.get(atoms[atom->second.second]));
                                          }));
    }
  }

  const Transformer tasks_choice = Transformer::choice(space, atoms);
  const Transformer machine_choice = el.choice_all();
  const Transformer fin = Transformer::assume(StateSet(space, el.fin));
  const Transformer system = Transformer::seq(space, {el.initialisation(), Transformer::weak_iter(tasks_choice), fin});

  rep.obligations.push_back(discharge("SYS.refines", "the task system refines the unscheduled machine", [&] {
    return kernel::refines(cache.get(el.semantics()), cache.get(system));
  }));

  const auto& step_nf = cache.get(tasks_choice);
  const Bits reach = kernel::par::forward_reach(step_nf.R, el.init);
  const Transformer at_reach = Transformer::assertion(StateSet(space, reach));
  const Transformer step_or_finish = Transformer::seq(space, {at_reach, Transformer::choice(space, {tasks_choice, fin})});

  rep.obligations.push_back(discharge("SYS.deadlock", "no reachable state is stuck outside fin", [&] {
    Verdict v = kernel::miracle_equal(
        cache.get(step_or_finish),
        cache.get(Transformer::seq(space, {at_reach, Transformer::choice(space, {tasks_choice, Transformer::skip(space)})})));
    if (!v.pass) v.message = "reachable deadlock";
    return v;
  }));
  rep.obligations.push_back(discharge("SYS.miracle", "the tasks are stuck exactly where the machine is", [&] {
    return kernel::miracle_equal(
        cache.get(step_or_finish),
        cache.get(Transformer::seq(space, {at_reach, Transformer::choice(space, {machine_choice, fin})})));
  }));
  rep.obligations.push_back(discharge("SYS.final", "every quiescent end state satisfies fin", [&] {
    const Bits quiet = ~step_nf.guard();
    const Transformer run =
        Transformer::seq(space, {Transformer::weak_iter(tasks_choice), Transformer::assume(StateSet(space, quiet))});
    return kernel::subset_verdict(space, el.init, cache.get(run).apply(el.fin), "a quiescent end state misses fin");
  }));

  rep.millis = since(t0);
  return rep;
}

}  // namespace ebsched::verify
