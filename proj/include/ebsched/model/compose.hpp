#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ebsched/model/checks.hpp"

namespace ebsched::model {

/// An abstraction, inside one sub-model, of an event owned by another.
struct ExternalEvent {
  std::string name;
  std::string home;  // sub-model holding the internal counterpart
  Event source;      // the counterpart, or an explicit override
  bool overridden = false;
};

struct SubModel {
  std::string name;
  std::vector<std::string> internal_vars;
  std::vector<std::string> external_vars;
  std::vector<Event> events;
  std::vector<ExternalEvent> externals;
  std::vector<Labelled> invariant;
  Event init;
  Event fin;
  std::vector<std::string> parts;  // names of the blocks composed into this one

  std::set<std::string> variables() const;
  const Event* find_event(const std::string& name) const;
  const ExternalEvent* find_external(const std::string& name) const;
  std::vector<std::string> event_names() const;
  std::vector<std::string> external_names() const;
};

struct Block {
  std::string name;
  std::vector<std::string> variables;
  std::vector<std::string> events;
  std::vector<Event> overrides;  // explicit external events
};

struct Partition {
  std::vector<std::string> shared;
  std::vector<Block> blocks;

  const Block* find(const std::string& name) const;
};

/// Splits a machine along the partition. Shared variables become external
/// in every block whose events mention them; the external events of a block
/// are the other blocks' events that write one of its external variables.
std::vector<SubModel> decompose(const Machine& m, const Partition& p);

SubModel empty_submodel(const std::string& name = "empty");
SubModel compose_submodels(const SubModel& a, const SubModel& b, const std::string& name = {});
SubModel compose_all(const std::vector<SubModel>& parts, const std::string& name = {});

/// One line per block: name, then sorted internal and external event names.
std::string decomposition_table(const std::vector<SubModel>& parts);

/// Existential image of an event on a space over a subset of the variables
/// it may touch. Variables outside `target` are projected away.
ElaboratedEvent project_event(const Machine& m, const Event& e, const SpacePtr& target);

/// Semantics of a sub-model over v ∪ x.
struct SubModelElaboration {
  Elaboration el;  // internal events, invariant, init, fin
  std::vector<ElaboratedEvent> externals;

  Transformer external(const std::string& name, bool strict = false) const;
  Transformer external_choice(bool strict = false) const;
  std::vector<std::string> external_names() const;
};

SubModelElaboration elaborate(const Machine& m, const SubModel& sm,
                              std::uint64_t cap = kernel::StateSpace::kDefaultCap);

/// {i};[lift(e)] ⊑ S on a larger space, where lift(e) leaves the variables
/// outside e's space unconstrained. Checked directly on the normal form of S.
Verdict refines_lifted(const Bits& i, const ElaboratedEvent& e, const SpacePtr& small,
                       const kernel::NormalForm& concrete);

/// For every external event of `a` whose counterpart lives in `b` (and the
/// other way round): {i_a ∩ i_b};[X] ⊑ [E] on the joint space. Ids
/// EXT.<submodel>.<event>. Throws ModelError on an unlinked external event.
std::vector<Verdict> check_external_abstraction(const Machine& m, const SubModel& a, const SubModel& b);

}  // namespace ebsched::model
