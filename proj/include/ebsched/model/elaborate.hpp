#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ebsched/kernel/normal_form.hpp"
#include "ebsched/model/machine.hpp"

namespace ebsched::model {

using kernel::Bits;
using kernel::Rows;
using kernel::SpacePtr;
using kernel::StateIndex;
using kernel::Transformer;

struct ElaboratedEvent {
  std::string name;
  Convergence convergence = Convergence::Ordinary;
  Bits guard;   // g_k
  Rows action;  // a_k, rows only inside g_k
};

/// Enumerated semantics of a machine (or of a sub-model over its own space).
struct Elaboration {
  SpacePtr space;
  Scope scope;
  Bits invariant;
  Bits init;  // a_0
  Bits fin;   // guard of the finalisation
  std::vector<ElaboratedEvent> events;
  std::vector<Value> variant;  // per state; empty without a variant
  Bits variant_defined;

  const ElaboratedEvent* find(const std::string& name) const;
  const ElaboratedEvent& event(const std::string& name) const;

  /// [g];[a], or {i};[g];[a];{i} when strict.
  Transformer transformer(const ElaboratedEvent& e, bool strict = false) const;
  Transformer transformer(const std::string& name, bool strict = false) const;
  /// Demonic choice over the named events; magic when empty.
  Transformer choice(const std::vector<std::string>& names, bool strict = false) const;
  Transformer choice_all(bool strict = false) const;
  /// Update from any state into a_0.
  Transformer initialisation() const;
  /// init; (⊓ events)*; [fin]
  Transformer semantics(bool strict = false) const;
  kernel::EventTable table(bool strict = false) const;
  std::vector<std::string> event_names() const;
};

/// Guard and relation of one event over scope.space. Throws ModelError when
/// an assignment leaves a variable's domain.
ElaboratedEvent elaborate_event(const Event& e, const Scope& scope);
/// a_0 for an unguarded initialisation that assigns every variable.
Bits elaborate_init(const Event& init, const Scope& scope);
Bits elaborate_predicate(const ExprPtr& p, const Scope& scope, const std::string& where);

Elaboration elaborate(const Machine& m, std::uint64_t cap = kernel::StateSpace::kDefaultCap);

}  // namespace ebsched::model
