#pragma once

#include <map>
#include <string>
#include <vector>

#include "ebsched/model/compose.hpp"
#include "ebsched/sched/schedule.hpp"

namespace ebsched::sched {

using kernel::Transformer;

/// Internal and external events of one task over its state space.
struct Context {
  kernel::SpacePtr space;
  model::Scope scope;
  std::map<std::string, Transformer> internal;
  std::vector<std::string> external_names;
  std::map<std::string, Transformer> external;

  const Transformer& event(const std::string& name) const;
  /// ⊓X, magic when there are no external events.
  Transformer environment() const;
  /// ⊓ of the named internal events and every external one.
  Transformer with_environment(const std::set<std::string>& names) const;
  kernel::Bits where(const model::ExprPtr& resolved) const;
  kernel::Bits guard(const Transformer& t) const;
};

Context make_context(const model::SubModelElaboration& sm, bool strict = false);
/// Context without external events.
Context make_context(const model::Elaboration& el, bool strict = false);

/// sched(S, X): events become X*;[E];X*, loops
/// ([g(e(S) ∪ X)];sched(S))*;[¬g(e(S) ∪ X)], choices ⊓ and assertions {g}.
Transformer translate(const Node& s, const Context& ctx);

/// Unscheduled loop over the atoms and the environment:
/// (⊓atoms ⊓ X)*;[¬g(⊓atoms ⊓ X)].
Transformer loop_form(const std::vector<Transformer>& atoms, const Context& ctx);
/// loop_form over the named internal events.
Transformer loop_form(const std::set<std::string>& names, const Context& ctx);

}  // namespace ebsched::sched
