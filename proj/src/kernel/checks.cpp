#include "ebsched/kernel/checks.hpp"

#include <algorithm>

#include "ebsched/error.hpp"
#include "ebsched/kernel/apply.hpp"

namespace ebsched::kernel {

Verdict Verdict::ok(SpacePtr space) {
  Verdict v;
  v.space = std::move(space);
  return v;
}

Verdict Verdict::failed(SpacePtr space, std::string message) {
  Verdict v;
  v.pass = false;
  v.space = std::move(space);
  v.message = std::move(message);
  return v;
}

bool Verdict::add(Witness w) {
  if (witnesses.size() >= kMaxWitnesses) return false;
  witnesses.push_back(std::move(w));
  return witnesses.size() < kMaxWitnesses;
}

Verdict& Verdict::with_id(std::string id_) {
  id = std::move(id_);
  return *this;
}

Verdict& Verdict::describe(std::string text) {
  description = std::move(text);
  return *this;
}

Verdict subset_verdict(const SpacePtr& space, const Bits& sub, const Bits& super,
                       const std::string& message) {
  if (sub.is_subset_of(super)) return Verdict::ok(space);
  Verdict v = Verdict::failed(space, message);
  for (StateIndex s : (sub - super).to_vector())
    if (!v.add({s, std::nullopt, {}})) break;
  return v;
}

Verdict refines(const NormalForm& a, const NormalForm& b) {
  require_same_space(a.space, b.space);
  if (!a.p.is_subset_of(b.p))
    return subset_verdict(a.space, a.p, b.p, "aborts where the refinement must terminate");
  Verdict v = Verdict::ok(a.space);
  bool room = true;
  for (StateIndex s : a.p.to_vector()) {
    if (!room) break;
    auto ra = a.R.row(s);
    for (StateIndex t : b.R.row(s)) {
      if (std::binary_search(ra.begin(), ra.end(), t)) continue;
      if (v.pass) v = Verdict::failed(a.space, "refinement adds a transition");
      room = v.add({s, t, {}});
      break;
    }
  }
  return v;
}

Verdict equivalent(const NormalForm& a, const NormalForm& b) {
  Verdict ab = refines(a, b);
  if (!ab.pass) return ab;
  Verdict ba = refines(b, a);
  if (!ba.pass) ba.message = "reverse refinement fails: " + ba.message;
  return ba;
}

Verdict miracle_equal(const NormalForm& a, const NormalForm& b) {
  require_same_space(a.space, b.space);
  Bits ma = a.miracles();
  Bits mb = b.miracles();
  if (ma == mb) return Verdict::ok(a.space);
  Verdict v = Verdict::failed(a.space, "miraculous behaviour differs");
  for (StateIndex s : ((ma - mb) | (mb - ma)).to_vector()) {
    std::string note = ma.test(s) ? "miraculous only on the left" : "miraculous only on the right";
    if (!v.add({s, std::nullopt, note})) break;
  }
  return v;
}

namespace {

struct Pair {
  NormalForm a, b;
};

Pair both(const Transformer& a, const Transformer& b, const EventTable* events) {
  require_same_space(a.space(), b.space());
  NormalFormCache cache(default_rules(), events);
  NormalForm na = cache.get(a);
  NormalForm nb = cache.get(b);
  return {std::move(na), std::move(nb)};
}

}  // namespace

Verdict refines(const Transformer& a, const Transformer& b, const EventTable* events) {
  auto p = both(a, b, events);
  return refines(p.a, p.b);
}

Verdict equivalent(const Transformer& a, const Transformer& b, const EventTable* events) {
  auto p = both(a, b, events);
  return equivalent(p.a, p.b);
}

Verdict miracle_equal(const Transformer& a, const Transformer& b, const EventTable* events) {
  auto p = both(a, b, events);
  return miracle_equal(p.a, p.b);
}

Verdict refines_pointwise(const Transformer& a, const Transformer& b, const EventTable* events) {
  require_same_space(a.space(), b.space());
  const std::size_t n = a.space()->size();
  if (n > 20) throw LimitExceeded("pointwise refinement needs a space of at most 20 states");
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    Bits q(n);
    for (std::size_t i = 0; i < n; ++i)
      if ((mask >> i) & 1u) q.set(static_cast<StateIndex>(i));
    Bits qa = apply(a, q, events);
    Bits qb = apply(b, q, events);
    if (!qa.is_subset_of(qb)) {
      Verdict v = Verdict::failed(a.space(), "postcondition gained only by the abstraction");
      v.add({*qa.first_not_in(qb), std::nullopt, {}});
      return v;
    }
  }
  return Verdict::ok(a.space());
}

}  // namespace ebsched::kernel
