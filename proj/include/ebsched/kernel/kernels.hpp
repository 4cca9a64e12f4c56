#pragma once

// Relation kernels used by the normal-form algebra. The `par` versions split
// independent rows across OpenMP workers; `serial` holds the plain reference
// algorithms the tests and benchmarks compare them against.

#include "ebsched/kernel/bits.hpp"
#include "ebsched/kernel/relation.hpp"

namespace ebsched::kernel {

namespace par {

Rows restrict_domain(const Rows& r, const Bits& domain);
/// Relational composition a;b, rows computed only for states in `domain`.
Rows compose(const Rows& a, const Rows& b, const Bits& domain);
Rows unite(const Rows& a, const Rows& b, const Bits& domain);
/// { s | r[s] ⊆ q }
Bits successors_within(const Rows& r, const Bits& q);
Bits image(const Rows& r, const Bits& from);
/// States from which some member of `targets` is reachable (reflexive).
Bits backward_reach(const Rows& r, const Bits& targets);
/// States reachable from `from` (reflexive).
Bits forward_reach(const Rows& r, const Bits& from);
/// States from which no infinite r-path starts.
Bits well_founded(const Rows& r);
/// Reflexive-transitive closure, rows populated for `sources` only.
Rows closure(const Rows& r, const Bits& sources);
/// First state s in `domain` with sub[s] ⊄ super[s].
std::optional<std::pair<StateIndex, StateIndex>> first_excess(const Rows& sub, const Rows& super,
                                                              const Bits& domain);

}  // namespace par

namespace serial {

Rows compose(const Rows& a, const Rows& b, const Bits& domain);
Bits successors_within(const Rows& r, const Bits& q);
Bits backward_reach(const Rows& r, const Bits& targets);
Bits well_founded(const Rows& r);
/// Closure by Kleene iteration C := id ∪ r;C.
Rows closure(const Rows& r, const Bits& sources);

}  // namespace serial

}  // namespace ebsched::kernel
