#include "ebsched/kernel/apply.hpp"

#include "ebsched/error.hpp"
#include "ebsched/kernel/kernels.hpp"

namespace ebsched::kernel {

namespace {

Bits eval(const Transformer& t, const Bits& q, const EventTable* events) {
  const auto& n = t.node();
  switch (n.kind) {
    case TransformerKind::Update:
      return serial::successors_within(n.relation, q);
    case TransformerKind::Assume:
      return ~n.set | q;
    case TransformerKind::Assert:
      return n.set & q;
    case TransformerKind::Skip:
      return q;
    case TransformerKind::Magic:
      return Bits(q.size(), true);
    case TransformerKind::Abort:
      return Bits(q.size());
    case TransformerKind::Choice: {
      Bits out(q.size(), true);
      for (const auto& c : n.children) out &= eval(c, q, events);
      return out;
    }
    case TransformerKind::Seq: {
      Bits out = q;
      for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) out = eval(*it, out, events);
      return out;
    }
    case TransformerKind::StrongIter:
    case TransformerKind::WeakIter: {
      const bool least = n.kind == TransformerKind::StrongIter;
      Bits x(q.size(), !least);
      for (std::size_t step = 0; step <= q.size() + 1; ++step) {
        Bits next = eval(n.children.front(), x, events) & q;
        if (next == x) return x;
        x = std::move(next);
      }
      throw Error("iteration failed to reach a fixpoint");
    }
    case TransformerKind::EventRef: {
      auto e = events ? events->find(n.event) : EventTable::const_iterator{};
      if (!events || e == events->end()) throw Error("unresolved event reference " + n.event);
      return eval(e->second, q, events);
    }
  }
  throw Error("unknown transformer kind");
}

}  // namespace

Bits apply(const Transformer& t, const Bits& q, const EventTable* events) {
  if (q.size() != t.space()->size()) throw SpaceMismatch("postcondition size differs from transformer space");
  return eval(t, q, events);
}

StateSet apply(const Transformer& t, const StateSet& q, const EventTable* events) {
  require_same_space(t.space(), q.space());
  return StateSet(t.space(), eval(t, q.bits(), events));
}

StateSet guard_of(const Transformer& t, const EventTable* events) {
  return ~apply(t, StateSet::empty(t.space()), events);
}

}  // namespace ebsched::kernel
