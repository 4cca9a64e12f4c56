#pragma once

#include "ebsched/kernel/normal_form.hpp"

namespace ebsched::kernel {

/// Direct denotation of t at postcondition q. Iterations are solved for this
/// q alone by Kleene iteration on state sets; no normal forms are involved,
/// which makes this the independent oracle for to_normal_form.
StateSet apply(const Transformer& t, const StateSet& q, const EventTable* events = nullptr);
Bits apply(const Transformer& t, const Bits& q, const EventTable* events = nullptr);

/// ¬t(false), evaluated through apply.
StateSet guard_of(const Transformer& t, const EventTable* events = nullptr);

}  // namespace ebsched::kernel
