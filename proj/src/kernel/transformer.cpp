#include "ebsched/kernel/transformer.hpp"

#include <sstream>

#include "ebsched/error.hpp"

namespace ebsched::kernel {

StateSet::StateSet(SpacePtr space, Bits bits) : space_(std::move(space)), bits_(std::move(bits)) {
  if (bits_.size() != space_->size()) throw SpaceMismatch("bitset size differs from space size");
}

StateSet StateSet::empty(SpacePtr space) {
  auto n = space->size();
  return StateSet(std::move(space), Bits(n));
}

StateSet StateSet::full(SpacePtr space) {
  auto n = space->size();
  return StateSet(std::move(space), Bits(n, true));
}

StateSet StateSet::operator&(const StateSet& o) const {
  require_same_space(space_, o.space_);
  return StateSet(space_, bits_ & o.bits_);
}

StateSet StateSet::operator|(const StateSet& o) const {
  require_same_space(space_, o.space_);
  return StateSet(space_, bits_ | o.bits_);
}

StateSet StateSet::operator-(const StateSet& o) const {
  require_same_space(space_, o.space_);
  return StateSet(space_, bits_ - o.bits_);
}

StateSet StateSet::operator~() const { return StateSet(space_, ~bits_); }

bool StateSet::is_subset_of(const StateSet& o) const {
  require_same_space(space_, o.space_);
  return bits_.is_subset_of(o.bits_);
}

bool StateSet::operator==(const StateSet& o) const {
  return space_ && o.space_ && space_->same_as(*o.space_) && bits_ == o.bits_;
}

StateRelation::StateRelation(SpacePtr space, Rows rows)
    : space_(std::move(space)), rows_(std::move(rows)) {
  if (rows_.size() != space_->size()) throw SpaceMismatch("relation size differs from space size");
}

StateRelation StateRelation::identity(const StateSet& on) {
  return StateRelation(on.space(), Rows::identity(on.bits()));
}

bool StateRelation::operator==(const StateRelation& o) const {
  return space_ && o.space_ && space_->same_as(*o.space_) && rows_ == o.rows_;
}

namespace {

Transformer::Node leaf(TransformerKind k, SpacePtr space) {
  Transformer::Node n;
  n.kind = k;
  n.space = std::move(space);
  return n;
}

SpacePtr common_space(const std::vector<Transformer>& ts) {
  if (ts.empty()) throw Error("cannot infer the space of an empty combinator");
  SpacePtr s = ts.front().space();
  for (const auto& t : ts) require_same_space(s, t.space());
  return s;
}

}  // namespace

Transformer Transformer::update(const StateRelation& r) {
  auto n = leaf(TransformerKind::Update, r.space());
  n.relation = r.rows();
  return Transformer(std::make_shared<const Node>(std::move(n)));
}

Transformer Transformer::assume(const StateSet& g) {
  auto n = leaf(TransformerKind::Assume, g.space());
  n.set = g.bits();
  return Transformer(std::make_shared<const Node>(std::move(n)));
}

Transformer Transformer::assertion(const StateSet& g) {
  auto n = leaf(TransformerKind::Assert, g.space());
  n.set = g.bits();
  return Transformer(std::make_shared<const Node>(std::move(n)));
}

Transformer Transformer::choice(SpacePtr space, std::vector<Transformer> options) {
  for (const auto& t : options) require_same_space(space, t.space());
  if (options.empty()) return magic(std::move(space));
  if (options.size() == 1) return options.front();
  auto n = leaf(TransformerKind::Choice, std::move(space));
  n.children = std::move(options);
  return Transformer(std::make_shared<const Node>(std::move(n)));
}

Transformer Transformer::choice(std::vector<Transformer> options) {
  auto s = common_space(options);
  return choice(std::move(s), std::move(options));
}

Transformer Transformer::seq(SpacePtr space, std::vector<Transformer> steps) {
  for (const auto& t : steps) require_same_space(space, t.space());
  if (steps.empty()) return skip(std::move(space));
  if (steps.size() == 1) return steps.front();
  auto n = leaf(TransformerKind::Seq, std::move(space));
  n.children = std::move(steps);
  return Transformer(std::make_shared<const Node>(std::move(n)));
}

Transformer Transformer::seq(std::vector<Transformer> steps) {
  auto s = common_space(steps);
  return seq(std::move(s), std::move(steps));
}

Transformer Transformer::strong_iter(Transformer body) {
  auto n = leaf(TransformerKind::StrongIter, body.space());
  n.children.push_back(std::move(body));
  return Transformer(std::make_shared<const Node>(std::move(n)));
}

Transformer Transformer::weak_iter(Transformer body) {
  auto n = leaf(TransformerKind::WeakIter, body.space());
  n.children.push_back(std::move(body));
  return Transformer(std::make_shared<const Node>(std::move(n)));
}

Transformer Transformer::skip(SpacePtr space) {
  return Transformer(std::make_shared<const Node>(leaf(TransformerKind::Skip, std::move(space))));
}

Transformer Transformer::magic(SpacePtr space) {
  return Transformer(std::make_shared<const Node>(leaf(TransformerKind::Magic, std::move(space))));
}

Transformer Transformer::abort(SpacePtr space) {
  return Transformer(std::make_shared<const Node>(leaf(TransformerKind::Abort, std::move(space))));
}

Transformer Transformer::event_ref(SpacePtr space, std::string name) {
  auto n = leaf(TransformerKind::EventRef, std::move(space));
  n.event = std::move(name);
  return Transformer(std::make_shared<const Node>(std::move(n)));
}

std::size_t Transformer::node_count() const {
  std::size_t c = 1;
  for (const auto& ch : children()) c += ch.node_count();
  return c;
}

namespace {

void render(const Transformer& t, std::ostream& os) {
  const auto& n = t.node();
  auto set = [&](const Bits& b) {
    os << '{';
    bool first = true;
    b.for_each([&](StateIndex s) {
      os << (first ? "" : " ") << s;
      first = false;
    });
    os << '}';
  };
  auto kids = [&](const char* name) {
    os << '(' << name;
    for (const auto& c : n.children) {
      os << ' ';
      render(c, os);
    }
    os << ')';
  };
  switch (n.kind) {
    case TransformerKind::Update: {
      os << "(update {";
      bool first = true;
      for (auto [a, b] : n.relation.pairs()) {
        os << (first ? "" : " ") << a << '>' << b;
        first = false;
      }
      os << "})";
      break;
    }
    case TransformerKind::Assume:
      os << "(assume ";
      set(n.set);
      os << ')';
      break;
    case TransformerKind::Assert:
      os << "(assert ";
      set(n.set);
      os << ')';
      break;
    case TransformerKind::Choice:
      kids("choice");
      break;
    case TransformerKind::Seq:
      kids("seq");
      break;
    case TransformerKind::StrongIter:
      kids("omega");
      break;
    case TransformerKind::WeakIter:
      kids("star");
      break;
    case TransformerKind::Skip:
      os << "skip";
      break;
    case TransformerKind::Magic:
      os << "magic";
      break;
    case TransformerKind::Abort:
      os << "abort";
      break;
    case TransformerKind::EventRef:
      os << "(event " << n.event << ')';
      break;
  }
}

}  // namespace

std::string Transformer::to_string() const {
  std::ostringstream os;
  render(*this, os);
  return os.str();
}

}  // namespace ebsched::kernel
