#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ebsched/kernel/normal_form.hpp"

namespace ebsched::kernel {

inline constexpr std::size_t kMaxWitnesses = 5;

/// A counterexample: a state, optionally with an offending post-state.
struct Witness {
  StateIndex state = 0;
  std::optional<StateIndex> post;
  std::string note;

  bool operator==(const Witness& o) const = default;
};

struct Verdict {
  bool pass = true;
  std::string id;
  std::string description;
  std::string message;  // why it failed
  SpacePtr space;
  std::vector<Witness> witnesses;

  static Verdict ok(SpacePtr space = nullptr);
  static Verdict failed(SpacePtr space, std::string message);

  /// Appends while under the witness cap; returns false once full.
  bool add(Witness w);
  Verdict& with_id(std::string id_);
  Verdict& describe(std::string text);
};

/// Witnesses for members of `bad`, capped.
Verdict subset_verdict(const SpacePtr& space, const Bits& sub, const Bits& super,
                       const std::string& message);

Verdict refines(const NormalForm& a, const NormalForm& b);
Verdict equivalent(const NormalForm& a, const NormalForm& b);
Verdict miracle_equal(const NormalForm& a, const NormalForm& b);

Verdict refines(const Transformer& a, const Transformer& b, const EventTable* events = nullptr);
Verdict equivalent(const Transformer& a, const Transformer& b, const EventTable* events = nullptr);
Verdict miracle_equal(const Transformer& a, const Transformer& b, const EventTable* events = nullptr);

/// Pointwise refinement over every postcondition set. Exponential in the
/// space size; the oracle for `refines` on small spaces.
Verdict refines_pointwise(const Transformer& a, const Transformer& b, const EventTable* events = nullptr);

}  // namespace ebsched::kernel
