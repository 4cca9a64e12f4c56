#include "ebsched/kernel/laws.hpp"

#include <sstream>

#include "ebsched/kernel/apply.hpp"
#include "ebsched/kernel/kernels.hpp"

namespace ebsched::kernel {

namespace {

using T = Transformer;

std::string bits_string(const Bits& b) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  b.for_each([&](StateIndex s) {
    os << (first ? "" : " ") << s;
    first = false;
  });
  os << '}';
  return os.str();
}

LawOutcome eq(const NormalFormRules& rules, const T& a, const T& b) {
  NormalFormCache cache(rules);
  return {false, equivalent(cache.get(a), cache.get(b))};
}

T as(const LawCase& c, const Bits& b) { return T::assertion(StateSet(c.space, b)); }
T am(const LawCase& c, const Bits& b) { return T::assume(StateSet(c.space, b)); }
T seq(std::vector<T> ts) { return T::seq(std::move(ts)); }
T choice(std::vector<T> ts) { return T::choice(std::move(ts)); }
T star(T t) { return T::weak_iter(std::move(t)); }
T omega(T t) { return T::strong_iter(std::move(t)); }

// Lemma premise {g};S ⊑ S;{g}; its own outcome when it fails.
bool lemma_premise(const NormalFormRules& rules, const LawCase& c) {
  NormalFormCache cache(rules);
  return refines(cache.get(seq({as(c, c.g), c.S})), cache.get(seq({c.S, as(c, c.g)}))).pass;
}

std::vector<Law> make_laws() {
  std::vector<Law> laws;
  auto add = [&](std::string id, std::function<LawOutcome(const NormalFormRules&, const LawCase&)> f) {
    laws.push_back({std::move(id), std::move(f)});
  };

  add("choice.magic_unit", [](auto& r, auto& c) { return eq(r, choice({T::magic(c.space), c.S}), c.S); });
  add("choice.abort_zero",
      [](auto& r, auto& c) { return eq(r, choice({T::abort(c.space), c.S}), T::abort(c.space)); });
  add("seq.skip_unit_left", [](auto& r, auto& c) { return eq(r, seq({T::skip(c.space), c.S}), c.S); });
  add("seq.skip_unit_right", [](auto& r, auto& c) { return eq(r, seq({c.S, T::skip(c.space)}), c.S); });
  add("seq.magic_left", [](auto& r, auto& c) { return eq(r, seq({T::magic(c.space), c.S}), T::magic(c.space)); });
  add("seq.abort_left", [](auto& r, auto& c) { return eq(r, seq({T::abort(c.space), c.S}), T::abort(c.space)); });
  add("seq.assoc", [](auto& r, auto& c) {
    T mid = omega(c.T);
    return eq(r, seq({seq({c.S, c.T}), mid}), seq({c.S, seq({c.T, mid})}));
  });
  add("seq.distributes_left", [](auto& r, auto& c) {
    // S;(T ⊓ U) = S;T ⊓ S;U for conjunctive S.
    T u = am(c, c.g);
    return eq(r, seq({c.S, choice({c.T, u})}), choice({seq({c.S, c.T}), seq({c.S, u})}));
  });

  add("guard.assert_assume", [](auto& r, auto& c) { return eq(r, seq({as(c, c.g), am(c, c.g)}), as(c, c.g)); });
  add("guard.assume_assert", [](auto& r, auto& c) { return eq(r, seq({am(c, c.g), as(c, c.g)}), am(c, c.g)); });
  add("guard.assert_meet",
      [](auto& r, auto& c) { return eq(r, as(c, c.g & c.h), seq({as(c, c.g), as(c, c.h)})); });
  add("guard.assume_meet",
      [](auto& r, auto& c) { return eq(r, am(c, c.g & c.h), seq({am(c, c.g), am(c, c.h)})); });
  add("guard.assert_then_weaker_assume", [](auto& r, auto& c) {
    Bits wider = c.g | c.h;
    return eq(r, seq({as(c, c.g), am(c, wider)}), as(c, c.g));
  });
  add("guard.assume_then_weaker_assert", [](auto& r, auto& c) {
    Bits wider = c.g | c.h;
    return eq(r, seq({am(c, c.g), as(c, wider)}), am(c, c.g));
  });

  add("unfold.strong", [](auto& r, auto& c) {
    return eq(r, omega(c.S), choice({seq({c.S, omega(c.S)}), T::skip(c.space)}));
  });
  add("unfold.weak", [](auto& r, auto& c) {
    return eq(r, star(c.S), choice({seq({c.S, star(c.S)}), T::skip(c.space)}));
  });
  add("iter.decomposition", [](auto& r, auto& c) {
    return eq(r, star(choice({c.S, c.T})), seq({star(c.T), star(seq({c.S, star(c.T)}))}));
  });
  add("iter.decomposition_mirror", [](auto& r, auto& c) {
    return eq(r, star(choice({c.S, c.T})), seq({star(seq({star(c.S), c.T})), star(c.S)}));
  });
  add("iter.leapfrog", [](auto& r, auto& c) {
    return eq(r, seq({c.S, star(seq({c.T, c.S}))}), seq({star(seq({c.S, c.T})), c.S}));
  });

  add("lemma.post_assert", [](auto& r, auto& c) -> LawOutcome {
    if (!lemma_premise(r, c)) return {true, Verdict::ok(c.space)};
    return eq(r, seq({as(c, c.g), c.S}), seq({as(c, c.g), c.S, as(c, c.g)}));
  });
  add("lemma.star_post_assert", [](auto& r, auto& c) -> LawOutcome {
    if (!lemma_premise(r, c)) return {true, Verdict::ok(c.space)};
    return eq(r, seq({as(c, c.g), star(c.S)}), seq({as(c, c.g), star(c.S), as(c, c.g)}));
  });
  add("lemma.star_inner_assert", [](auto& r, auto& c) -> LawOutcome {
    if (!lemma_premise(r, c)) return {true, Verdict::ok(c.space)};
    return eq(r, seq({as(c, c.g), star(c.S)}), star(seq({as(c, c.g), c.S})));
  });

  add("nf.pointwise", [](auto& r, auto& c) -> LawOutcome {
    NormalFormCache cache(r);
    const NormalForm& nf = cache.get(c.S);
    const std::size_t n = c.space->size();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      Bits q(n);
      for (std::size_t i = 0; i < n; ++i)
        if ((mask >> i) & 1u) q.set(static_cast<StateIndex>(i));
      Bits want = apply(c.S, q);
      Bits got = nf.apply(q);
      if (want != got) {
        Verdict v = Verdict::failed(c.space, "normal form disagrees with apply at q=" + bits_string(q));
        v.add({*((want - got) | (got - want)).first(), std::nullopt, {}});
        return {false, v};
      }
    }
    return {false, Verdict::ok(c.space)};
  });
  add("refines.pointwise", [](auto& r, auto& c) -> LawOutcome {
    NormalFormCache cache(r);
    bool nf = refines(cache.get(c.S), cache.get(c.T)).pass;
    bool pw = refines_pointwise(c.S, c.T).pass;
    if (nf == pw) return {false, Verdict::ok(c.space)};
    return {false, Verdict::failed(c.space, nf ? "normal form accepts a pointwise failure"
                                               : "normal form rejects a pointwise refinement")};
  });
  return laws;
}

Bits closed_under(const NormalForm& nf, const Bits& seed) { return par::forward_reach(nf.R, seed); }

}  // namespace

std::string LawCase::to_string() const {
  std::ostringstream os;
  os << "size=" << space->size() << " S=" << S.to_string() << " T=" << T.to_string()
     << " g=" << bits_string(g) << " h=" << bits_string(h);
  return os.str();
}

const std::vector<Law>& algebraic_laws() {
  static const std::vector<Law> laws = make_laws();
  return laws;
}

LawCase random_case(Rng& rng, std::size_t max_size, int depth) {
  SpacePtr space = random_space(rng, max_size);
  const std::size_t n = space->size();
  LawCase c{space, random_transformer(rng, space, depth), random_transformer(rng, space, depth),
            random_bits(rng, n), random_bits(rng, n)};
  // Most of the time pick g closed under S so the lemma premise holds.
  if (rng.chance(75)) c.g = closed_under(to_normal_form(c.S), c.g);
  return c;
}

namespace {

std::size_t weight(const T& t) {
  const auto& n = t.node();
  std::size_t w = 1 + n.relation.pair_count() + n.set.count();
  for (const auto& ch : n.children) w += weight(ch);
  return w;
}

std::size_t weight(const LawCase& c) { return weight(c.S) + weight(c.T) + c.g.count() + c.h.count(); }

std::vector<T> simpler(const T& t) {
  std::vector<T> out;
  const auto& n = t.node();
  const auto& s = n.space;
  if (n.kind != TransformerKind::Skip) out.push_back(T::skip(s));
  if (n.kind != TransformerKind::Magic) out.push_back(T::magic(s));
  if (n.kind != TransformerKind::Abort) out.push_back(T::abort(s));
  for (const auto& ch : n.children) out.push_back(ch);
  switch (n.kind) {
    case TransformerKind::Update: {
      auto pairs = n.relation.pairs();
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        auto fewer = pairs;
        fewer.erase(fewer.begin() + static_cast<long>(i));
        out.push_back(T::update(StateRelation(s, Rows::from_pairs(s->size(), std::move(fewer)))));
      }
      break;
    }
    case TransformerKind::Assume:
    case TransformerKind::Assert:
      n.set.for_each([&](StateIndex m) {
        Bits fewer = n.set;
        fewer.reset(m);
        out.push_back(n.kind == TransformerKind::Assume ? T::assume(StateSet(s, fewer))
                                                        : T::assertion(StateSet(s, fewer)));
      });
      break;
    case TransformerKind::Choice:
    case TransformerKind::Seq:
      for (std::size_t i = 0; i < n.children.size(); ++i)
        for (const auto& alt : simpler(n.children[i])) {
          auto kids = n.children;
          kids[i] = alt;
          out.push_back(n.kind == TransformerKind::Choice ? T::choice(s, std::move(kids))
                                                          : T::seq(s, std::move(kids)));
        }
      break;
    case TransformerKind::StrongIter:
      for (const auto& alt : simpler(n.children.front())) out.push_back(T::strong_iter(alt));
      break;
    case TransformerKind::WeakIter:
      for (const auto& alt : simpler(n.children.front())) out.push_back(T::weak_iter(alt));
      break;
    default:
      break;
  }
  return out;
}

bool fails(const Law& law, const NormalFormRules& rules, const LawCase& c) {
  auto o = law.check(rules, c);
  return !o.vacuous && !o.verdict.pass;
}

}  // namespace

LawCase shrink_case(const Law& law, const NormalFormRules& rules, LawCase c) {
  for (bool progress = true; progress;) {
    progress = false;
    std::vector<LawCase> candidates;
    for (const auto& s : simpler(c.S)) candidates.push_back({c.space, s, c.T, c.g, c.h});
    for (const auto& t : simpler(c.T)) candidates.push_back({c.space, c.S, t, c.g, c.h});
    c.g.for_each([&](StateIndex m) {
      LawCase d = c;
      d.g.reset(m);
      candidates.push_back(std::move(d));
    });
    c.h.for_each([&](StateIndex m) {
      LawCase d = c;
      d.h.reset(m);
      candidates.push_back(std::move(d));
    });
    const std::size_t w = weight(c);
    for (auto& d : candidates) {
      if (weight(d) < w && fails(law, rules, d)) {
        c = std::move(d);
        progress = true;
        break;
      }
    }
  }
  return c;
}

LawReport run_laws(const LawOptions& options) {
  const NormalFormRules& rules = options.rules ? *options.rules : default_rules();
  const auto& laws = algebraic_laws();
  LawReport report;
  std::vector<bool> failed(laws.size(), false);
  Rng rng(options.seed);
  for (std::size_t i = 0; i < options.cases; ++i) {
    LawCase c = random_case(rng, options.max_size, options.depth);
    ++report.cases;
    for (std::size_t l = 0; l < laws.size(); ++l) {
      if (failed[l]) continue;
      auto o = laws[l].check(rules, c);
      ++report.checks;
      if (o.vacuous) {
        ++report.vacuous;
        continue;
      }
      if (o.verdict.pass) continue;
      failed[l] = true;
      LawCase small = options.shrink ? shrink_case(laws[l], rules, c) : c;
      Verdict v = laws[l].check(rules, small).verdict;
      v.id = laws[l].id;
      report.failures.push_back({laws[l].id, i, std::move(small), std::move(v)});
    }
  }
  return report;
}

}  // namespace ebsched::kernel
