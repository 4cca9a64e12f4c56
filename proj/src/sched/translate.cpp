#include "ebsched/sched/translate.hpp"

#include "ebsched/error.hpp"
#include "ebsched/kernel/normal_form.hpp"

namespace ebsched::sched {

using kernel::StateSet;

const Transformer& Context::event(const std::string& name) const {
  auto it = internal.find(name);
  if (it == internal.end()) throw ModelError("schedule names unknown event " + name);
  return it->second;
}

Transformer Context::environment() const {
  std::vector<Transformer> xs;
  for (const auto& n : external_names) xs.push_back(external.at(n));
  return Transformer::choice(space, std::move(xs));
}

Transformer Context::with_environment(const std::set<std::string>& names) const {
  std::vector<Transformer> opts;
  for (const auto& n : names) opts.push_back(event(n));
  for (const auto& n : external_names) opts.push_back(external.at(n));
  return Transformer::choice(space, std::move(opts));
}

kernel::Bits Context::where(const model::ExprPtr& resolved) const { return model::states_where(resolved, scope); }

kernel::Bits Context::guard(const Transformer& t) const { return kernel::to_normal_form(t).guard(); }

Context make_context(const model::Elaboration& el, bool strict) {
  Context ctx{el.space, el.scope, {}, {}, {}};
  for (const auto& e : el.events) ctx.internal.emplace(e.name, el.transformer(e, strict));
  return ctx;
}

Context make_context(const model::SubModelElaboration& sm, bool strict) {
  Context ctx = make_context(sm.el, strict);
  ctx.external_names = sm.external_names();
  for (const auto& n : ctx.external_names) ctx.external.emplace(n, sm.external(n, strict));
  return ctx;
}

Transformer translate(const Node& s, const Context& ctx) {
  switch (s.kind) {
    case NodeKind::Seq:
      return Transformer::seq(ctx.space, {translate(*s.head(), ctx), translate(*s.tail(), ctx)});
    case NodeKind::Loop: {
      const auto body = s.children[0];
      const kernel::Bits g = ctx.guard(ctx.with_environment(events_of(*body)));
      const Transformer step =
          Transformer::seq(ctx.space, {Transformer::assume(StateSet(ctx.space, g)), translate(*body, ctx)});
      return Transformer::seq(ctx.space,
                              {Transformer::weak_iter(step), Transformer::assume(StateSet(ctx.space, ~g))});
    }
    case NodeKind::Choice: {
      std::vector<Transformer> alts;
      for (const auto& c : s.children) alts.push_back(translate(*c, ctx));
      return Transformer::choice(ctx.space, std::move(alts));
    }
    case NodeKind::Event: {
      const Transformer x = Transformer::weak_iter(ctx.environment());
      return Transformer::seq(ctx.space, {x, ctx.event(s.event), x});
    }
    case NodeKind::Assert:
      return Transformer::assertion(StateSet(ctx.space, ctx.where(s.expr)));
  }
  throw Error("bad schedule node");
}

Transformer loop_form(const std::vector<Transformer>& atoms, const Context& ctx) {
  std::vector<Transformer> opts = atoms;
  for (const auto& n : ctx.external_names) opts.push_back(ctx.external.at(n));
  const Transformer all = Transformer::choice(ctx.space, std::move(opts));
  const kernel::Bits g = ctx.guard(all);
  return Transformer::seq(ctx.space, {Transformer::weak_iter(all), Transformer::assume(StateSet(ctx.space, ~g))});
}

Transformer loop_form(const std::set<std::string>& names, const Context& ctx) {
  std::vector<Transformer> atoms;
  for (const auto& n : names) atoms.push_back(ctx.event(n));
  return loop_form(atoms, ctx);
}

}  // namespace ebsched::sched
