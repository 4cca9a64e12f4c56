#include "ebsched/model/compose.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "ebsched/error.hpp"

namespace ebsched::model {

namespace {

bool contains(const std::vector<std::string>& v, const std::string& x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

std::set<std::string> names_in(const Expr& e) {
  std::set<std::string> un, pr;
  collect_names(e, un, pr);
  un.insert(pr.begin(), pr.end());
  return un;
}

bool within(const std::set<std::string>& names, const std::set<std::string>& vars, const Machine& m) {
  for (const auto& n : names)
    if (m.find_variable(n) && !vars.count(n)) return false;
  return true;
}

void add_unique(std::vector<Labelled>& into, const Labelled& l) {
  const std::string text = to_string(l.expr);
  for (const auto& x : into)
    if (to_string(x.expr) == text) return;
  into.push_back(l);
}

}  // namespace

std::set<std::string> SubModel::variables() const {
  std::set<std::string> out(internal_vars.begin(), internal_vars.end());
  out.insert(external_vars.begin(), external_vars.end());
  return out;
}

const Event* SubModel::find_event(const std::string& n) const {
  for (const auto& e : events)
    if (e.name == n) return &e;
  return nullptr;
}

const ExternalEvent* SubModel::find_external(const std::string& n) const {
  for (const auto& x : externals)
    if (x.name == n) return &x;
  return nullptr;
}

std::vector<std::string> SubModel::event_names() const {
  std::vector<std::string> out;
  for (const auto& e : events) out.push_back(e.name);
  return out;
}

std::vector<std::string> SubModel::external_names() const {
  std::vector<std::string> out;
  for (const auto& x : externals) out.push_back(x.name);
  return out;
}

const Block* Partition::find(const std::string& n) const {
  for (const auto& b : blocks)
    if (b.name == n) return &b;
  return nullptr;
}

std::vector<SubModel> decompose(const Machine& m, const Partition& p) {
  std::map<std::string, std::string> var_owner;
  std::set<std::string> shared(p.shared.begin(), p.shared.end());
  for (const auto& s : p.shared)
    if (!m.find_variable(s)) throw ModelError("shared variable " + s + " is not declared");
  for (const auto& b : p.blocks)
    for (const auto& v : b.variables) {
      if (!m.find_variable(v)) throw ModelError("sub-model " + b.name + " lists unknown variable " + v);
      if (shared.count(v) || var_owner.count(v)) throw ModelError("variable " + v + " is in more than one partition");
      var_owner[v] = b.name;
    }
  for (const auto& v : m.variables)
    if (!shared.count(v.name) && !var_owner.count(v.name))
      throw ModelError("variable " + v.name + " is in no partition");

  std::map<std::string, std::string> event_owner;
  for (const auto& b : p.blocks)
    for (const auto& e : b.events) {
      if (!m.find_event(e)) throw ModelError("sub-model " + b.name + " lists unknown event " + e);
      if (event_owner.count(e)) throw ModelError("event " + e + " is in more than one partition");
      event_owner[e] = b.name;
    }
  for (const auto& e : m.events)
    if (!event_owner.count(e.name)) throw ModelError("event " + e.name + " is in no partition");

  std::vector<SubModel> out;
  std::vector<bool> inv_used(m.invariant.size(), false);
  std::vector<bool> fin_used(m.fin.guards.size(), false);
  for (const auto& b : p.blocks) {
    SubModel sm;
    sm.name = b.name;
    sm.parts = {b.name};
    std::set<std::string> mentioned;
    for (const auto& en : b.events) {
      const Event& e = *m.find_event(en);
      for (const auto& n : e.mentioned()) {
        if (!m.find_variable(n)) continue;
        auto owner = var_owner.find(n);
        if (owner != var_owner.end() && owner->second != b.name)
          throw ModelError("event " + en + " of " + b.name + " uses " + n + ", which is private to " + owner->second);
        mentioned.insert(n);
      }
    }
    for (const auto& v : m.variables) {
      if (var_owner.count(v.name) && var_owner[v.name] == b.name) sm.internal_vars.push_back(v.name);
      if (shared.count(v.name) && mentioned.count(v.name)) sm.external_vars.push_back(v.name);
    }
    const std::set<std::string> vars = sm.variables();
    for (const auto& e : m.events) {
      if (event_owner[e.name] == b.name) {
        sm.events.push_back(e);
        continue;
      }
      bool touches = false;
      for (const auto& w : e.written()) touches = touches || contains(sm.external_vars, w);
      if (touches) sm.externals.push_back({e.name, event_owner[e.name], e, false});
    }
    for (const auto& o : b.overrides) {
      auto it = std::find_if(sm.externals.begin(), sm.externals.end(),
                             [&](const ExternalEvent& x) { return x.name == o.name; });
      if (it == sm.externals.end()) throw ModelError(o.name + " is not an external event of " + b.name);
      for (const auto& n : o.mentioned())
        if (m.find_variable(n) && !contains(sm.external_vars, n))
          throw ModelError("external event " + o.name + " of " + b.name + " mentions " + n +
                           ", which is not an external variable");
      it->source = o;
      it->overridden = true;
    }
    for (std::size_t k = 0; k < m.invariant.size(); ++k)
      if (within(names_in(*m.invariant[k].expr), vars, m)) {
        sm.invariant.push_back(m.invariant[k]);
        inv_used[k] = true;
      }
    sm.init.name = m.init.name;
    for (const auto& a : m.init.actions) {
      std::size_t in = 0;
      for (const auto& t : a.targets) in += vars.count(t);
      if (in == a.targets.size()) sm.init.actions.push_back(a);
      else if (in != 0) throw ModelError("an initialisation action spans several sub-models");
    }
    sm.fin.name = m.fin.name;
    for (std::size_t k = 0; k < m.fin.guards.size(); ++k)
      if (within(names_in(*m.fin.guards[k].expr), vars, m)) {
        sm.fin.guards.push_back(m.fin.guards[k]);
        fin_used[k] = true;
      }
    out.push_back(std::move(sm));
  }
  for (std::size_t k = 0; k < m.invariant.size(); ++k)
    if (!inv_used[k])
      throw ModelError("invariant " + to_string(m.invariant[k].expr) + " spans the private variables of several sub-models");
  for (std::size_t k = 0; k < m.fin.guards.size(); ++k)
    if (!fin_used[k])
      throw ModelError("finalisation guard " + to_string(m.fin.guards[k].expr) + " spans several sub-models");
  return out;
}

SubModel empty_submodel(const std::string& name) {
  SubModel sm;
  sm.name = name;
  return sm;
}

SubModel compose_submodels(const SubModel& a, const SubModel& b, const std::string& name) {
  for (const auto& x : a.externals)
    if (contains(b.parts, x.home) && !b.find_event(x.name))
      throw ModelError("external event " + x.name + " of " + a.name + " has no counterpart in " + b.name);
  for (const auto& x : b.externals)
    if (contains(a.parts, x.home) && !a.find_event(x.name))
      throw ModelError("external event " + x.name + " of " + b.name + " has no counterpart in " + a.name);

  SubModel out;
  out.name = name.empty() ? (a.name + "|" + b.name) : name;
  out.parts = a.parts;
  for (const auto& p : b.parts)
    if (!contains(out.parts, p)) out.parts.push_back(p);
  out.internal_vars = a.internal_vars;
  for (const auto& v : b.internal_vars) {
    if (contains(out.internal_vars, v)) throw ModelError("variable " + v + " is internal to both sub-models");
    out.internal_vars.push_back(v);
  }
  for (const auto* xs : {&a.external_vars, &b.external_vars})
    for (const auto& v : *xs)
      if (!contains(out.internal_vars, v) && !contains(out.external_vars, v)) out.external_vars.push_back(v);
  out.events = a.events;
  for (const auto& e : b.events) {
    if (out.find_event(e.name)) throw ModelError("event " + e.name + " is internal to both sub-models");
    out.events.push_back(e);
  }
  for (const auto* xs : {&a.externals, &b.externals})
    for (const auto& x : *xs)
      if (!out.find_event(x.name) && !out.find_external(x.name)) out.externals.push_back(x);
  out.invariant = a.invariant;
  for (const auto& l : b.invariant) add_unique(out.invariant, l);
  out.init = compose_events(a.init, b.init);
  out.fin = compose_events(a.fin, b.fin);
  return out;
}

SubModel compose_all(const std::vector<SubModel>& parts, const std::string& name) {
  if (parts.empty()) return empty_submodel(name.empty() ? "empty" : name);
  SubModel acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = compose_submodels(acc, parts[i]);
  if (!name.empty()) acc.name = name;
  return acc;
}

std::string decomposition_table(const std::vector<SubModel>& parts) {
  std::ostringstream os;
  auto line = [&](const char* label, std::vector<std::string> names) {
    std::sort(names.begin(), names.end());
    os << "  " << label << ":";
    for (const auto& n : names) os << ' ' << n;
    os << '\n';
  };
  for (const auto& sm : parts) {
    os << sm.name << '\n';
    line("internal", sm.event_names());
    line("external", sm.external_names());
  }
  return os.str();
}

ElaboratedEvent project_event(const Machine& m, const Event& e, const SpacePtr& target) {
  std::set<std::string> names;
  for (const auto& v : target->variables()) names.insert(v.name);
  for (const auto& n : e.mentioned())
    if (m.find_variable(n)) names.insert(n);
  SpacePtr wide = m.space_over(names);
  ElaboratedEvent full = elaborate_event(e, m.scope(wide));
  kernel::Projection proj(wide, target);
  ElaboratedEvent out;
  out.name = e.name;
  out.convergence = e.convergence;
  out.guard = Bits(target->size());
  std::vector<std::vector<StateIndex>> lists(target->size());
  full.guard.for_each([&](StateIndex s) {
    StateIndex ps = proj(s);
    out.guard.set(ps);
    for (auto t : full.action.row(s)) lists[ps].push_back(proj(t));
  });
  out.action = Rows::from_lists(std::move(lists));
  return out;
}

Transformer SubModelElaboration::external(const std::string& name, bool strict) const {
  for (const auto& x : externals)
    if (x.name == name) return el.transformer(x, strict);
  throw ModelError("unknown external event " + name);
}

Transformer SubModelElaboration::external_choice(bool strict) const {
  std::vector<Transformer> opts;
  for (const auto& x : externals) opts.push_back(el.transformer(x, strict));
  return Transformer::choice(el.space, std::move(opts));
}

std::vector<std::string> SubModelElaboration::external_names() const {
  std::vector<std::string> out;
  for (const auto& x : externals) out.push_back(x.name);
  return out;
}

SubModelElaboration elaborate(const Machine& m, const SubModel& sm, std::uint64_t cap) {
  SubModelElaboration se;
  Elaboration& el = se.el;
  el.space = m.space_over(sm.variables(), cap);
  el.scope = m.scope(el.space);
  std::vector<ExprPtr> inv;
  for (const auto& l : sm.invariant) inv.push_back(l.expr);
  el.invariant = elaborate_predicate(conjoin(inv), el.scope, "invariant of " + sm.name);
  el.init = elaborate_init(sm.init, el.scope);
  el.fin = elaborate_predicate(sm.fin.guard(), el.scope, "finalisation of " + sm.name);
  for (const auto& e : sm.events) el.events.push_back(elaborate_event(e, el.scope));
  for (const auto& x : sm.externals) se.externals.push_back(project_event(m, x.source, el.space));
  return se;
}

Verdict refines_lifted(const Bits& i, const ElaboratedEvent& e, const SpacePtr& small,
                       const kernel::NormalForm& concrete) {
  kernel::Projection proj(concrete.space, small);
  if (!i.is_subset_of(concrete.p))
    return kernel::subset_verdict(concrete.space, i, concrete.p, "the internal event may abort");
  Verdict v = Verdict::ok(concrete.space);
  bool room = true;
  i.for_each([&](StateIndex s) {
    if (!room) return;
    StateIndex ps = proj(s);
    auto row = concrete.R.row(s);
    if (!e.guard.test(ps)) {
      if (row.empty()) return;
      if (v.pass) v = Verdict::failed(concrete.space, "the internal event is enabled where its abstraction is not");
      room = v.add({s, row.front(), e.name});
      return;
    }
    for (auto t : row) {
      if (e.action.contains(ps, proj(t))) continue;
      if (v.pass) v = Verdict::failed(concrete.space, "the internal event makes a move its abstraction does not allow");
      room = v.add({s, t, e.name});
      break;
    }
  });
  return v;
}

std::vector<Verdict> check_external_abstraction(const Machine& m, const SubModel& a, const SubModel& b) {
  std::set<std::string> names = a.variables();
  for (const auto& n : b.variables()) names.insert(n);
  SpacePtr joint = m.space_over(names);
  Scope scope = m.scope(joint);
  std::vector<ExprPtr> inv;
  for (const auto& l : a.invariant) inv.push_back(l.expr);
  for (const auto& l : b.invariant) inv.push_back(l.expr);
  Bits i = elaborate_predicate(conjoin(inv), scope, "joint invariant");

  std::vector<Verdict> out;
  auto one_way = [&](const SubModel& from, const SubModel& home) {
    SpacePtr small = m.space_over(from.variables());
    for (const auto& x : from.externals) {
      if (!contains(home.parts, x.home)) continue;
      const Event* counterpart = home.find_event(x.name);
      if (!counterpart) throw ModelError("external event " + x.name + " of " + from.name + " is unlinked");
      ElaboratedEvent inner = elaborate_event(*counterpart, scope);
      kernel::NormalForm nf{joint, Bits(joint->size(), true), inner.action};
      Verdict v = refines_lifted(i, project_event(m, x.source, small), small, nf);
      v.id = "EXT." + from.name + "." + x.name;
      v.description = "external event of " + from.name + " abstracts " + x.name + " of " + home.name;
      out.push_back(std::move(v));
    }
  };
  one_way(a, b);
  one_way(b, a);
  return out;
}

}  // namespace ebsched::model
