#include "ebsched/model/checks.hpp"

#include "ebsched/error.hpp"

namespace ebsched::model {

using kernel::Witness;

Verdict check_invariant(const Elaboration& el) {
  Verdict v = kernel::subset_verdict(el.space, el.init, el.invariant, "initialisation breaks the invariant");
  v.id = "INV";
  for (auto& w : v.witnesses) w.note = "INITIALISATION";
  if (!v.pass) return v;
  for (const auto& e : el.events) {
    bool room = true;
    (el.invariant & e.guard).for_each([&](StateIndex s) {
      if (!room) return;
      for (auto t : e.action.row(s)) {
        if (el.invariant.test(t)) continue;
        if (v.pass) v = Verdict::failed(el.space, "event breaks the invariant");
        room = v.add({s, t, e.name});
        break;
      }
    });
  }
  v.id = "INV";
  v.description = "the invariant holds initially and is kept by every event";
  return v;
}

Verdict check_convergence_variant(const Elaboration& el) {
  if (el.variant.empty()) throw ModelError("the machine has no variant");
  Verdict v = Verdict::ok(el.space);
  v.id = "CONV.variant";
  bool room = true;
  el.invariant.for_each([&](StateIndex s) {
    if (room && el.variant[s] < 0) {
      if (v.pass) v = Verdict::failed(el.space, "variant is negative");
      room = v.add({s, std::nullopt, "variant " + std::to_string(el.variant[s])});
    }
  });
  for (const auto& e : el.events) {
    if (e.convergence == Convergence::Ordinary) continue;
    const bool strict = e.convergence == Convergence::Convergent;
    (el.invariant & e.guard).for_each([&](StateIndex s) {
      if (!room) return;
      for (auto t : e.action.row(s)) {
        // Posts outside i are reported by INV; their variant is undefined.
        if (!el.variant_defined.test(t)) continue;
        bool ok = strict ? el.variant[t] < el.variant[s] : el.variant[t] <= el.variant[s];
        if (ok) continue;
        if (v.pass) v = Verdict::failed(el.space, strict ? "convergent event does not decrease the variant"
                                                         : "anticipated event increases the variant");
        room = v.add({s, t, e.name + ": " + std::to_string(el.variant[s]) + " -> " + std::to_string(el.variant[t])});
        break;
      }
    });
  }
  v.id = "CONV.variant";
  v.description = "the variant is a natural number decreased by convergent events";
  return v;
}

Verdict check_convergence_semantic(const Elaboration& el, const std::vector<std::string>& events, bool strict) {
  Transformer body = el.choice(events, strict);
  Verdict v = kernel::equivalent(Transformer::strong_iter(body), Transformer::weak_iter(body));
  if (!v.pass) v.message = "the events can run forever: " + v.message;
  v.id = "CONV.semantic";
  v.description = "strong and weak iteration of the events coincide";
  return v;
}

Verdict check_convergence_semantic(const Elaboration& el, bool strict) {
  std::vector<std::string> names;
  for (const auto& e : el.events)
    if (e.convergence == Convergence::Convergent) names.push_back(e.name);
  return check_convergence_semantic(el, names, strict);
}

std::vector<Verdict> check_machine_refinement(const Machine& abstract, const Elaboration& abs,
                                              const Machine& concrete, const Elaboration& conc) {
  for (const auto& av : abstract.variables) {
    const auto* cv = concrete.find_variable(av.name);
    if (!cv) throw ModelError("abstract variable " + av.name + " is not kept by the refinement");
    if (!(cv->domain == av.domain)) throw ModelError("variable " + av.name + " changes its domain in the refinement");
  }
  kernel::Projection proj(conc.space, abs.space);
  std::vector<Verdict> out;
  auto finish = [&](Verdict v, std::string id, std::string description) {
    v.id = std::move(id);
    v.description = std::move(description);
    out.push_back(std::move(v));
  };

  {
    Verdict v = Verdict::ok(conc.space);
    conc.init.for_each([&](StateIndex s) {
      if (!abs.init.test(proj(s))) {
        if (v.pass) v = Verdict::failed(conc.space, "initial state not allowed by the abstract initialisation");
        v.add({s, std::nullopt, {}});
      }
    });
    finish(std::move(v), "REF.init", "initial states project into the abstract initialisation");
  }

  for (const auto& e : conc.events) {
    const ElaboratedEvent* a = abs.find(e.name);
    const Bits from = conc.invariant & e.guard;
    if (a) {
      Verdict g = Verdict::ok(conc.space);
      Verdict act = Verdict::ok(conc.space);
      from.for_each([&](StateIndex s) {
        StateIndex ps = proj(s);
        if (!a->guard.test(ps)) {
          if (g.pass) g = Verdict::failed(conc.space, "concrete guard is weaker than the abstract guard");
          g.add({s, std::nullopt, e.name});
          return;
        }
        for (auto t : e.action.row(s)) {
          if (a->action.contains(ps, proj(t))) continue;
          if (act.pass) act = Verdict::failed(conc.space, "transition has no abstract counterpart");
          act.add({s, t, e.name});
          break;
        }
      });
      finish(std::move(g), "REF.guard." + e.name, "guard strengthening");
      finish(std::move(act), "REF.action." + e.name, "transitions simulate the abstract event");
    } else {
      Verdict sk = Verdict::ok(conc.space);
      from.for_each([&](StateIndex s) {
        for (auto t : e.action.row(s)) {
          if (proj(s) == proj(t)) continue;
          if (sk.pass) sk = Verdict::failed(conc.space, "new event changes abstract variables");
          sk.add({s, t, e.name});
          break;
        }
      });
      finish(std::move(sk), "REF.skip." + e.name, "new event refines skip");
    }
  }

  for (const auto& e : abstract.events)
    if (!conc.find(e.name)) throw ModelError("abstract event " + e.name + " has no refinement");

  bool new_convergent = false;
  for (const auto& e : conc.events)
    if (!abs.find(e.name) && e.convergence == Convergence::Convergent) new_convergent = true;
  if (!conc.variant.empty()) {
    Verdict v = check_convergence_variant(conc);
    finish(std::move(v), "REF.variant", "new and convergent events decrease the variant");
  } else if (new_convergent) {
    Verdict v = check_convergence_semantic(conc);
    finish(std::move(v), "REF.variant", "convergent events terminate");
  }

  {
    Verdict v = Verdict::ok(conc.space);
    (conc.invariant & conc.fin).for_each([&](StateIndex s) {
      if (!abs.fin.test(proj(s))) {
        if (v.pass) v = Verdict::failed(conc.space, "concrete finalisation is weaker than the abstract one");
        v.add({s, std::nullopt, {}});
      }
    });
    finish(std::move(v), "REF.fin", "finalisation guard strengthening");
  }
  return out;
}

}  // namespace ebsched::model
