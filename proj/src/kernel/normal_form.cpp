#include "ebsched/kernel/normal_form.hpp"

#include <algorithm>
#include <iterator>

#include "ebsched/error.hpp"
#include "ebsched/kernel/kernels.hpp"

namespace ebsched::kernel {

namespace {

Bits empty_rows(const Rows& r) {
  Bits out(r.size());
  for (std::size_t s = 0; s < r.size(); ++s)
    if (r.row_empty(static_cast<StateIndex>(s))) out.set(static_cast<StateIndex>(s));
  return out;
}

void require_same(const NormalForm& a, const NormalForm& b) { require_same_space(a.space, b.space); }

thread_local std::size_t kleene_steps = 0;

}  // namespace

Bits NormalForm::apply(const Bits& q) const { return p & par::successors_within(R, q); }

StateSet NormalForm::apply(const StateSet& q) const {
  require_same_space(space, q.space());
  return StateSet(space, apply(q.bits()));
}

Bits NormalForm::guard() const { return ~miracles(); }

Bits NormalForm::miracles() const { return p & empty_rows(R); }

bool NormalForm::canonical() const {
  for (std::size_t s = 0; s < R.size(); ++s)
    if (!p.test(static_cast<StateIndex>(s)) && !R.row_empty(static_cast<StateIndex>(s))) return false;
  return true;
}

bool NormalForm::operator==(const NormalForm& o) const {
  return space && o.space && space->same_as(*o.space) && p == o.p && R == o.R;
}

NormalForm NormalFormRules::update(const SpacePtr& s, const Rows& a) const {
  return {s, Bits(s->size(), true), a};
}

NormalForm NormalFormRules::assume(const SpacePtr& s, const Bits& g) const {
  return {s, Bits(s->size(), true), Rows::identity(g)};
}

NormalForm NormalFormRules::assertion(const SpacePtr& s, const Bits& g) const {
  return {s, g, Rows::identity(g)};
}

NormalForm NormalFormRules::skip(const SpacePtr& s) const {
  Bits all(s->size(), true);
  return {s, all, Rows::identity(all)};
}

NormalForm NormalFormRules::magic(const SpacePtr& s) const {
  return {s, Bits(s->size(), true), Rows(s->size())};
}

NormalForm NormalFormRules::abort(const SpacePtr& s) const {
  return {s, Bits(s->size()), Rows(s->size())};
}

NormalForm NormalFormRules::choice(const NormalForm& a, const NormalForm& b) const {
  require_same(a, b);
  Bits p = a.p & b.p;
  return {a.space, p, par::unite(a.R, b.R, p)};
}

NormalForm NormalFormRules::seq(const NormalForm& a, const NormalForm& b) const {
  require_same(a, b);
  Bits p = a.p & par::successors_within(a.R, b.p);
  return {a.space, p, par::compose(a.R, b.R, p)};
}

NormalForm NormalFormRules::strong_iter(const NormalForm& body) const {
  // Every path from the state stays inside p and is finite.
  Bits stay = ~par::backward_reach(body.R, ~body.p);
  Bits p = stay & par::well_founded(body.R);
  return {body.space, p, par::closure(body.R, p)};
}

NormalForm NormalFormRules::weak_iter(const NormalForm& body) const {
  Bits p = ~par::backward_reach(body.R, ~body.p);
  return {body.space, p, par::closure(body.R, p)};
}

namespace {

NormalForm kleene(const NormalFormRules& rules, const NormalForm& body, NormalForm x) {
  const std::size_t n = body.space->size();
  const std::size_t cap = n * (n * n + 1);
  NormalForm skip = rules.skip(body.space);
  kleene_steps = 0;
  for (;;) {
    NormalForm next = rules.choice(rules.seq(body, x), skip);
    ++kleene_steps;
    if (next == x) return x;
    if (kleene_steps > cap) throw Error("normal-form iteration did not converge");
    x = std::move(next);
  }
}

}  // namespace

NormalForm KleeneRules::seq(const NormalForm& a, const NormalForm& b) const {
  require_same(a, b);
  Bits p = a.p & serial::successors_within(a.R, b.p);
  return {a.space, p, serial::compose(a.R, b.R, p)};
}

NormalForm KleeneRules::strong_iter(const NormalForm& body) const {
  return kleene(*this, body, abort(body.space));
}

NormalForm KleeneRules::weak_iter(const NormalForm& body) const {
  return kleene(*this, body, magic(body.space));
}

std::size_t KleeneRules::last_steps() { return kleene_steps; }

const NormalFormRules& default_rules() {
  static const NormalFormRules rules;
  return rules;
}

const NormalFormRules& kleene_rules() {
  static const KleeneRules rules;
  return rules;
}

const NormalForm& NormalFormCache::get(const Transformer& t) {
  auto it = memo_.find(&t.node());
  if (it != memo_.end()) return it->second;

  const auto& n = t.node();
  const auto& s = n.space;
  NormalForm out;
  switch (n.kind) {
    case TransformerKind::Update:
      out = rules_->update(s, n.relation);
      break;
    case TransformerKind::Assume:
      out = rules_->assume(s, n.set);
      break;
    case TransformerKind::Assert:
      out = rules_->assertion(s, n.set);
      break;
    case TransformerKind::Skip:
      out = rules_->skip(s);
      break;
    case TransformerKind::Magic:
      out = rules_->magic(s);
      break;
    case TransformerKind::Abort:
      out = rules_->abort(s);
      break;
    case TransformerKind::Choice: {
      out = get(n.children.front());
      for (std::size_t i = 1; i < n.children.size(); ++i) out = rules_->choice(out, get(n.children[i]));
      break;
    }
    case TransformerKind::Seq: {
      out = get(n.children.back());
      for (std::size_t i = n.children.size() - 1; i-- > 0;) out = rules_->seq(get(n.children[i]), out);
      break;
    }
    case TransformerKind::StrongIter:
      out = rules_->strong_iter(get(n.children.front()));
      break;
    case TransformerKind::WeakIter:
      out = rules_->weak_iter(get(n.children.front()));
      break;
    case TransformerKind::EventRef: {
      if (!events_) throw Error("unresolved event reference " + n.event);
      auto e = events_->find(n.event);
      if (e == events_->end()) throw Error("unresolved event reference " + n.event);
      require_same_space(s, e->second.space());
      out = get(e->second);
      break;
    }
  }
  keep_.push_back(t.node_ptr());
  return memo_.emplace(&t.node(), std::move(out)).first->second;
}

NormalForm to_normal_form(const Transformer& t, const EventTable* events) {
  return to_normal_form(t, default_rules(), events);
}

NormalForm to_normal_form(const Transformer& t, const NormalFormRules& rules, const EventTable* events) {
  NormalFormCache cache(rules, events);
  return cache.get(t);
}

Transformer from_normal_form(const NormalForm& nf) {
  return Transformer::seq(nf.space, {Transformer::assertion(StateSet(nf.space, nf.p)),
                                     Transformer::update(StateRelation(nf.space, nf.R))});
}

}  // namespace ebsched::kernel
