#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ebsched/kernel/bits.hpp"
#include "ebsched/kernel/relation.hpp"
#include "ebsched/kernel/state_space.hpp"

namespace ebsched::kernel {

/// A set of states of one space.
class StateSet {
 public:
  StateSet() = default;
  StateSet(SpacePtr space, Bits bits);

  static StateSet empty(SpacePtr space);
  static StateSet full(SpacePtr space);

  const SpacePtr& space() const { return space_; }
  const Bits& bits() const { return bits_; }
  bool contains(StateIndex s) const { return bits_.test(s); }
  std::size_t count() const { return bits_.count(); }

  StateSet operator&(const StateSet& o) const;
  StateSet operator|(const StateSet& o) const;
  StateSet operator-(const StateSet& o) const;
  StateSet operator~() const;
  bool is_subset_of(const StateSet& o) const;
  bool operator==(const StateSet& o) const;

 private:
  SpacePtr space_;
  Bits bits_;
};

/// Before-after relation on one space.
class StateRelation {
 public:
  StateRelation() = default;
  StateRelation(SpacePtr space, Rows rows);

  static StateRelation identity(const StateSet& on);

  const SpacePtr& space() const { return space_; }
  const Rows& rows() const { return rows_; }
  bool operator==(const StateRelation& o) const;

 private:
  SpacePtr space_;
  Rows rows_;
};

enum class TransformerKind {
  Update,
  Assume,
  Assert,
  Choice,
  Seq,
  StrongIter,
  WeakIter,
  Skip,
  Magic,
  Abort,
  EventRef,
};

/// Immutable syntax tree of set-transformer constructors. Nodes are shared,
/// so repeated subterms cost nothing and normal forms can be cached by node.
class Transformer {
 public:
  struct Node {
    TransformerKind kind;
    SpacePtr space;
    Bits set;
    Rows relation;
    std::vector<Transformer> children;
    std::string event;
  };

  static Transformer update(const StateRelation& r);
  static Transformer assume(const StateSet& g);
  static Transformer assertion(const StateSet& g);
  /// Demonic choice; an empty list is magic.
  static Transformer choice(SpacePtr space, std::vector<Transformer> options);
  static Transformer choice(std::vector<Transformer> options);
  /// Sequential composition; an empty list is skip.
  static Transformer seq(SpacePtr space, std::vector<Transformer> steps);
  static Transformer seq(std::vector<Transformer> steps);
  static Transformer strong_iter(Transformer body);
  static Transformer weak_iter(Transformer body);
  static Transformer skip(SpacePtr space);
  static Transformer magic(SpacePtr space);
  static Transformer abort(SpacePtr space);
  static Transformer event_ref(SpacePtr space, std::string name);

  TransformerKind kind() const { return node_->kind; }
  const SpacePtr& space() const { return node_->space; }
  const Node& node() const { return *node_; }
  const std::shared_ptr<const Node>& node_ptr() const { return node_; }
  const std::vector<Transformer>& children() const { return node_->children; }

  std::size_t node_count() const;

  /// S-expression rendering, e.g. (seq (assert {0 2}) (update {0>1})).
  std::string to_string() const;

 private:
  explicit Transformer(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

}  // namespace ebsched::kernel
