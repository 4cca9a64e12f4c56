#include "ebsched/verify/patterns.hpp"

#include <chrono>

#include "ebsched/error.hpp"
#include "ebsched/kernel/checks.hpp"

namespace ebsched::verify {

using kernel::Bits;
using kernel::StateSet;

bool StepResult::pass() const {
  for (const auto& o : obligations)
    if (!o.pass()) return false;
  return true;
}

Obligation discharge(std::string id, std::string description, const std::function<Verdict()>& check) {
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v = check();
  const auto t1 = std::chrono::steady_clock::now();
  v.with_id(id).describe(description);
  return {std::move(id), std::move(description), std::move(v),
          std::chrono::duration<double, std::milli>(t1 - t0).count()};
}

namespace {

struct Parts {
  const sched::Context& ctx;
  Bits i, h, g;
  Transformer I, H, G, IH, X, Xstar;
  std::set<std::string> rest;  // e(S)
  Transformer rest_choice;     // ⊓ e(S), internal only
  Transformer rest_env;        // ⊓ e(S) ⊓ X

  Parts(const PatternApplication& app, const sched::Context& c, const Bits& invariant)
      : ctx(c),
        i(invariant),
        h(c.where(app.h)),
        g(c.where(app.g)),
        I(assertion(i)),
        H(assertion(h)),
        G(assertion(g)),
        IH(assertion(i & h)),
        X(c.environment()),
        Xstar(Transformer::weak_iter(X)),
        rest(sched::events_of(*app.remainder)),
        rest_choice(internal_choice(rest)),
        rest_env(c.with_environment(rest)) {}

  Transformer assertion(const Bits& b) const { return Transformer::assertion(StateSet(ctx.space, b)); }
  Transformer assume(const Bits& b) const { return Transformer::assume(StateSet(ctx.space, b)); }
  Transformer seq(std::vector<Transformer> ts) const { return Transformer::seq(ctx.space, std::move(ts)); }

  Transformer internal_choice(const std::set<std::string>& names) const {
    std::vector<Transformer> opts;
    for (const auto& n : names) opts.push_back(ctx.event(n));
    return Transformer::choice(ctx.space, std::move(opts));
  }

  /// {g};C ⊑ C;{g} under {i}: C keeps g.
  Verdict keeps(const Transformer& A, const Transformer& C) const {
    return kernel::refines(seq({I, A, C}), seq({I, C, A}));
  }

  Obligation disabled_by(std::string id, const Bits& pre, const Transformer& events, std::string what,
                         std::string description) const {
    return discharge(std::move(id), std::move(description), [&] {
      return kernel::subset_verdict(ctx.space, i & pre, ~ctx.guard(events), what + " is enabled");
    });
  }
};

void check_names(const PatternApplication& app, const sched::Context& ctx, std::size_t n) {
  if (app.events.size() != n) throw ModelError("pattern expects " + std::to_string(n) + " events");
  for (const auto& e : app.events) ctx.event(e);
  if (!app.h || !app.g || !app.remainder) throw ModelError("pattern application is incomplete");
}

}  // namespace

StepResult apply_p1(const PatternApplication& app, const sched::Context& ctx, const Bits& invariant) {
  check_names(app, ctx, 1);
  const Parts p(app, ctx, invariant);
  const Transformer E1 = ctx.event(app.events[0]);
  const Transformer prefix = p.seq({p.H, p.Xstar, E1, p.Xstar, p.G});
  StepResult r{app, {}, p.seq({prefix, sched::loop_form(p.rest, ctx)}), prefix, E1};

  auto& ob = r.obligations;
  ob.push_back(p.disabled_by("P1.A1", p.h, p.rest_choice, "an event of the remainder",
                             "h disables every event of the remainder"));
  ob.push_back(p.disabled_by("P1.A2", p.g, E1, app.events[0], "g disables E1"));
  ob.push_back(discharge("P1.A3", "g is kept by X and by the events of the remainder",
                         [&] { return p.keeps(p.G, p.rest_env); }));
  ob.push_back(discharge("P1.A4", "h is kept by X", [&] { return p.keeps(p.H, p.X); }));
  ob.push_back(discharge("P1.A5", "E1 establishes g",
                         [&] { return kernel::equivalent(p.seq({p.I, E1}), p.seq({p.I, E1, p.G})); }));
  ob.push_back(discharge("P1.STEP", "{h};loop(E1, e(S), X) equals the pattern result", [&] {
    std::set<std::string> all = p.rest;
    all.insert(app.events[0]);
    return kernel::equivalent(p.seq({p.IH, sched::loop_form(all, ctx)}), p.seq({p.IH, r.result}));
  }));
  return r;
}

StepResult apply_p2(const PatternApplication& app, const sched::Context& ctx, const Bits& invariant) {
  check_names(app, ctx, 2);
  const Parts p(app, ctx, invariant);
  const Transformer E1 = ctx.event(app.events[0]);
  const Transformer E2 = ctx.event(app.events[1]);
  const Bits gE2 = ctx.guard(E2);
  const Transformer prefix = p.seq({p.H, p.Xstar, E1, p.Xstar, E2, p.Xstar, p.G});
  StepResult r{app, {}, p.seq({prefix, sched::loop_form(p.rest, ctx)}), prefix, p.seq({E1, E2})};

  std::set<std::string> all = p.rest;
  all.insert(app.events.begin(), app.events.end());
  // (E1;E2 ⊓ e(S) ⊓ X)*;[¬g(E1 ⊓ E2 ⊓ e(S) ⊓ X)]
  const Transformer grouped_body = Transformer::choice(ctx.space, {r.atom, p.rest_env});
  const Transformer grouped =
      p.seq({Transformer::weak_iter(grouped_body), p.assume(~ctx.guard(ctx.with_environment(all)))});
  const Transformer ungrouped = sched::loop_form(all, ctx);

  auto per_external = [&](const std::function<Verdict(const Transformer&)>& check) {
    for (const auto& n : ctx.external_names) {
      Verdict v = check(ctx.external.at(n));
      if (!v.pass) {
        v.message = n + ": " + v.message;
        return v;
      }
    }
    return Verdict::ok(ctx.space);
  };

  auto& ob = r.obligations;
  ob.push_back(p.disabled_by("P2.A1", p.h, p.rest_choice, "an event of the remainder",
                             "h disables every event of the remainder"));
  ob.push_back(p.disabled_by("P2.A2", p.g, Transformer::choice(ctx.space, {E1, E2}), "E1 or E2",
                             "g disables E1 and E2"));
  ob.push_back(discharge("P2.A3", "E2 commutes with each external event", [&] {
    return per_external(
        [&](const Transformer& x) { return kernel::equivalent(p.seq({p.I, E2, x}), p.seq({p.I, x, E2})); });
  }));
  ob.push_back(discharge("P2.A4", "no external event changes whether E2 is enabled", [&] {
    const Transformer on = p.assertion(gE2), off = p.assertion(~gE2);
    return per_external([&](const Transformer& x) {
      Verdict v = p.keeps(on, x);
      return v.pass ? p.keeps(off, x) : v;
    });
  }));
  ob.push_back(discharge("P2.A5", "g is kept by X and by the events of the remainder",
                         [&] { return p.keeps(p.G, p.rest_env); }));
  ob.push_back(discharge("P2.A6", "h is kept by X", [&] { return p.keeps(p.H, p.X); }));
  ob.push_back(discharge("P2.A7", "E2 establishes g",
                         [&] { return kernel::equivalent(p.seq({p.I, E2}), p.seq({p.I, E2, p.G})); }));
  ob.push_back(discharge("P2.B1", "the pattern result equals the loop with E1;E2 as one atom", [&] {
    return kernel::equivalent(p.seq({p.IH, r.result}), p.seq({p.IH, grouped}));
  }));
  ob.push_back(discharge("P2.B2", "grouping E1;E2 refines the loop over the separate events", [&] {
    return kernel::refines(p.seq({p.IH, ungrouped}), p.seq({p.IH, grouped}));
  }));
  ob.push_back(discharge("P2.B3", "grouping E1;E2 introduces no deadlock", [&] {
    return kernel::miracle_equal(p.seq({p.IH, grouped}), p.seq({p.IH, ungrouped}));
  }));
  return r;
}

StepResult apply_pattern(const PatternApplication& app, const sched::Context& ctx, const Bits& invariant) {
  return app.kind == model::ScriptStep::Kind::P1 ? apply_p1(app, ctx, invariant) : apply_p2(app, ctx, invariant);
}

}  // namespace ebsched::verify
