#include "ebsched/model/elaborate.hpp"

#include <algorithm>

#include "ebsched/error.hpp"

namespace ebsched::model {

using kernel::StateRelation;
using kernel::StateSet;

namespace {

struct CompiledAction {
  Action::Kind kind;
  std::vector<std::size_t> targets;
  ExprPtr expr;  // Becomes: value; otherwise a predicate over primed targets
};

// x :: S is checked as x' in S.
ExprPtr prime_member(const Action& a) {
  auto e = std::make_shared<Expr>(*a.expr);
  auto x = std::make_shared<Expr>(*e->args[0]);
  x->op = Op::Primed;
  e->args[0] = x;
  return e;
}

std::string where(const std::string& event) { return event.empty() ? "expression" : "event " + event; }

}  // namespace

Bits elaborate_predicate(const ExprPtr& p, const Scope& scope, const std::string& what) {
  return states_where(resolve_predicate(p, scope, what), scope);
}

ElaboratedEvent elaborate_event(const Event& e, const Scope& scope_in) {
  const auto& space = *scope_in.space;
  Scope scope = scope_in;
  scope.allow_primed = false;
  ExprPtr guard = resolve_predicate(e.guard(), scope, "guard of " + e.name);

  std::vector<CompiledAction> actions;
  std::vector<bool> assigned(space.variables().size(), false);
  std::vector<std::size_t> chosen;  // targets enumerated over their domains
  for (const auto& a : e.actions) {
    CompiledAction c{a.kind, {}, nullptr};
    for (const auto& t : a.targets) {
      auto idx = space.find(t);
      if (!idx) throw ModelError(where(e.name) + " assigns unknown variable " + t);
      if (assigned[*idx]) throw ModelError(where(e.name) + " assigns " + t + " twice");
      assigned[*idx] = true;
      c.targets.push_back(*idx);
    }
    if (a.kind == Action::Kind::Becomes) {
      auto [r, t] = resolve(a.expr, scope);
      if (!(t == scope.type_of(space.variables()[c.targets[0]].domain)))
        throw ParseError("assignment to " + a.targets[0] + " has the wrong type", a.expr->line, a.expr->column);
      c.expr = r;
    } else {
      Scope rel = scope;
      rel.allow_primed = true;
      ExprPtr pred = a.kind == Action::Kind::ChooseIn ? prime_member(a) : a.expr;
      c.expr = resolve_predicate(pred, rel, "action of " + e.name);
      std::set<std::string> un, pr;
      collect_names(*c.expr, un, pr);
      for (const auto& p : pr)
        if (std::find(a.targets.begin(), a.targets.end(), p) == a.targets.end())
          throw ModelError(where(e.name) + " primes " + p + ", which it does not assign");
      chosen.insert(chosen.end(), c.targets.begin(), c.targets.end());
    }
    actions.push_back(std::move(c));
  }

  std::uint64_t combos = 1;
  for (auto t : chosen) {
    combos *= space.variables()[t].domain.size();
    if (combos > (std::uint64_t{1} << 22)) throw LimitExceeded(where(e.name) + " chooses from too many values");
  }

  ElaboratedEvent out;
  out.name = e.name;
  out.convergence = e.convergence;
  out.guard = Bits(space.size());
  kernel::RowsBuilder rows(space.size());
  std::vector<StateIndex> targets;
  for (StateIndex s = 0; s < space.size(); ++s) {
    auto pre = space.decode(s);
    targets.clear();
    if (eval(*guard, scope, pre)) {
      out.guard.set(s);
      auto post = pre;
      for (const auto& c : actions) {
        if (c.kind != Action::Kind::Becomes) continue;
        Value v = eval(*c.expr, scope, pre);
        const auto& var = space.variables()[c.targets[0]];
        if (!var.domain.contains(v))
          throw ModelError(where(e.name) + " sets " + var.name + " := " + std::to_string(v) + ", outside " +
                           var.domain.to_string() + ", in state " + space.format(s));
        post[c.targets[0]] = v;
      }
      for (std::uint64_t k = 0; k < combos; ++k) {
        std::uint64_t rest = k;
        for (auto it = chosen.rbegin(); it != chosen.rend(); ++it) {
          const auto& d = space.variables()[*it].domain;
          post[*it] = d.lo + static_cast<Value>(rest % d.size());
          rest /= d.size();
        }
        bool ok = true;
        for (const auto& c : actions)
          if (c.kind != Action::Kind::Becomes && !eval(*c.expr, scope, pre, post)) {
            ok = false;
            break;
          }
        if (ok) targets.push_back(space.encode(post));
      }
      std::sort(targets.begin(), targets.end());
      targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    }
    rows.append_row(targets);
  }
  out.action = rows.finish();
  return out;
}

Bits elaborate_init(const Event& init, const Scope& scope_in) {
  if (!init.guards.empty()) throw ModelError("the initialisation must not have a guard");
  Scope scope = scope_in;
  scope.allow_unprimed = false;
  const auto& space = *scope.space;
  std::set<std::string> written;
  for (const auto& w : init.written()) written.insert(w);
  for (const auto& v : space.variables())
    if (!written.count(v.name)) throw ModelError("the initialisation leaves " + v.name + " unassigned");
  Event probe = init;
  probe.name = init.name.empty() ? "INITIALISATION" : init.name;
  // No unprimed reads were allowed, so the row of any one pre-state is a_0.
  ElaboratedEvent e = elaborate_event(probe, scope);
  Bits out(space.size());
  if (space.size() > 0)
    for (auto t : e.action.row(0)) out.set(t);
  return out;
}

Elaboration elaborate(const Machine& m, std::uint64_t cap) {
  Elaboration el;
  el.space = m.space(cap);
  el.scope = m.scope(el.space);
  std::vector<ExprPtr> inv;
  for (const auto& l : m.invariant) inv.push_back(l.expr);
  el.invariant = elaborate_predicate(conjoin(inv), el.scope, "invariant");
  el.init = elaborate_init(m.init, el.scope);
  if (!m.fin.actions.empty()) throw ModelError("the finalisation must not have actions");
  el.fin = elaborate_predicate(m.fin.guard(), el.scope, "finalisation guard");
  for (const auto& e : m.events) el.events.push_back(elaborate_event(e, el.scope));
  if (m.variant) {
    ExprPtr v = resolve_integer(m.variant, el.scope, "variant");
    el.variant.assign(el.space->size(), 0);
    el.variant_defined = Bits(el.space->size());
    el.invariant.for_each([&](StateIndex s) {
      auto pre = el.space->decode(s);
      try {
        el.variant[s] = eval(*v, el.scope, pre);
      } catch (const ModelError& err) {
        throw ModelError(std::string("variant: ") + err.what() + " in state " + el.space->format(s));
      }
      el.variant_defined.set(s);
    });
  }
  return el;
}

const ElaboratedEvent* Elaboration::find(const std::string& name) const {
  for (const auto& e : events)
    if (e.name == name) return &e;
  return nullptr;
}

const ElaboratedEvent& Elaboration::event(const std::string& name) const {
  if (auto* e = find(name)) return *e;
  throw ModelError("unknown event " + name);
}

Transformer Elaboration::transformer(const ElaboratedEvent& e, bool strict) const {
  std::vector<Transformer> steps;
  if (strict) steps.push_back(Transformer::assertion(StateSet(space, invariant)));
  steps.push_back(Transformer::assume(StateSet(space, e.guard)));
  steps.push_back(Transformer::update(StateRelation(space, e.action)));
  if (strict) steps.push_back(Transformer::assertion(StateSet(space, invariant)));
  return Transformer::seq(space, std::move(steps));
}

Transformer Elaboration::transformer(const std::string& name, bool strict) const {
  return transformer(event(name), strict);
}

Transformer Elaboration::choice(const std::vector<std::string>& names, bool strict) const {
  std::vector<Transformer> opts;
  for (const auto& n : names) opts.push_back(transformer(n, strict));
  return Transformer::choice(space, std::move(opts));
}

Transformer Elaboration::choice_all(bool strict) const { return choice(event_names(), strict); }

Transformer Elaboration::initialisation() const {
  std::vector<std::vector<StateIndex>> lists(space->size(), init.to_vector());
  return Transformer::update(StateRelation(space, Rows::from_lists(std::move(lists))));
}

Transformer Elaboration::semantics(bool strict) const {
  return Transformer::seq(space, {initialisation(), Transformer::weak_iter(choice_all(strict)),
                                  Transformer::assume(StateSet(space, fin))});
}

kernel::EventTable Elaboration::table(bool strict) const {
  kernel::EventTable t;
  for (const auto& e : events) t.emplace(e.name, transformer(e, strict));
  return t;
}

std::vector<std::string> Elaboration::event_names() const {
  std::vector<std::string> out;
  for (const auto& e : events) out.push_back(e.name);
  return out;
}

}  // namespace ebsched::model
