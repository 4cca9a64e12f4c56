#pragma once

#include <functional>
#include <map>
#include <string>
#include <unordered_map>

#include "ebsched/kernel/transformer.hpp"

namespace ebsched::kernel {

/// Conjunctive transformer {p};[R] in canonical form: rows of R outside p
/// are empty.
struct NormalForm {
  SpacePtr space;
  Bits p;
  Rows R;

  /// p ∩ { σ | R[σ] ⊆ q }
  Bits apply(const Bits& q) const;
  StateSet apply(const StateSet& q) const;
  /// ¬(p ∩ { σ | R[σ] = ∅ })
  Bits guard() const;
  /// States where the transformer is miraculous: apply(∅).
  Bits miracles() const;
  bool canonical() const;

  bool operator==(const NormalForm& o) const;
};

/// Named events referenced by EventRef leaves.
using EventTable = std::map<std::string, Transformer>;

/// Combination rules for each constructor. The defaults run the closed-form
/// parallel kernels; subclasses replace individual rules (the serial Kleene
/// reference, or a deliberately broken rule when testing the law harness).
class NormalFormRules {
 public:
  virtual ~NormalFormRules() = default;

  virtual NormalForm update(const SpacePtr& s, const Rows& a) const;
  virtual NormalForm assume(const SpacePtr& s, const Bits& g) const;
  virtual NormalForm assertion(const SpacePtr& s, const Bits& g) const;
  virtual NormalForm skip(const SpacePtr& s) const;
  virtual NormalForm magic(const SpacePtr& s) const;
  virtual NormalForm abort(const SpacePtr& s) const;
  virtual NormalForm choice(const NormalForm& a, const NormalForm& b) const;
  virtual NormalForm seq(const NormalForm& a, const NormalForm& b) const;
  virtual NormalForm strong_iter(const NormalForm& body) const;
  virtual NormalForm weak_iter(const NormalForm& body) const;
};

/// Iterations by Kleene iteration of F(X) = S;X ⊓ skip in the refinement
/// order, using the serial kernels throughout.
class KleeneRules : public NormalFormRules {
 public:
  NormalForm seq(const NormalForm& a, const NormalForm& b) const override;
  NormalForm strong_iter(const NormalForm& body) const override;
  NormalForm weak_iter(const NormalForm& body) const override;

  /// Number of F applications performed by the last iteration on this thread.
  static std::size_t last_steps();
};

const NormalFormRules& default_rules();
const NormalFormRules& kleene_rules();

/// Memoises normal forms per shared tree node. Not thread-safe; use one per
/// worker.
class NormalFormCache {
 public:
  explicit NormalFormCache(const NormalFormRules& rules = default_rules(),
                           const EventTable* events = nullptr)
      : rules_(&rules), events_(events) {}

  const NormalForm& get(const Transformer& t);

 private:
  const NormalFormRules* rules_;
  const EventTable* events_;
  std::unordered_map<const Transformer::Node*, NormalForm> memo_;
  std::vector<std::shared_ptr<const Transformer::Node>> keep_;
};

NormalForm to_normal_form(const Transformer& t, const EventTable* events = nullptr);
NormalForm to_normal_form(const Transformer& t, const NormalFormRules& rules,
                          const EventTable* events = nullptr);

/// Turns a normal form back into a transformer, {p};[R].
Transformer from_normal_form(const NormalForm& nf);

}  // namespace ebsched::kernel
