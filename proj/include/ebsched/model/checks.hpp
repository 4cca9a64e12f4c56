#pragma once

#include <vector>

#include "ebsched/kernel/checks.hpp"
#include "ebsched/model/elaborate.hpp"

namespace ebsched::model {

using kernel::Verdict;

/// a_0 ⊆ i, and every event keeps i. Id "INV".
Verdict check_invariant(const Elaboration& el);

/// Variant is non-negative on i, strictly decreased by convergent events and
/// not increased by anticipated ones. Id "CONV.variant". Throws ModelError
/// when the machine has no variant.
Verdict check_convergence_variant(const Elaboration& el);

/// [E]^ω ≡ [E]^* over the named events. Id "CONV.semantic".
Verdict check_convergence_semantic(const Elaboration& el, const std::vector<std::string>& events,
                                   bool strict = true);
/// Same, over the convergent events of the machine.
Verdict check_convergence_semantic(const Elaboration& el, bool strict = true);

/// Superposition refinement. Ids REF.init, REF.guard.<E>, REF.action.<E>,
/// REF.skip.<E>, REF.variant, REF.fin.
std::vector<Verdict> check_machine_refinement(const Machine& abstract, const Elaboration& abs,
                                              const Machine& concrete, const Elaboration& conc);

}  // namespace ebsched::model
