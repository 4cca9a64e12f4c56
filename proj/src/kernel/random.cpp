#include "ebsched/kernel/random.hpp"

namespace ebsched::kernel {

std::uint64_t Rng::below(std::uint64_t n) {
  // Rejection sampling keeps the draw unbiased.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  for (;;) {
    std::uint64_t v = engine_();
    if (v < limit) return v % n;
  }
}

SpacePtr line_space(std::size_t n) {
  return StateSpace::make({{"x", Domain::range(0, static_cast<Value>(n) - 1)}});
}

SpacePtr random_space(Rng& rng, std::size_t max_size) {
  return line_space(1 + rng.below(max_size));
}

Bits random_bits(Rng& rng, std::size_t n, unsigned percent) {
  Bits b(n);
  for (std::size_t i = 0; i < n; ++i)
    if (rng.chance(percent)) b.set(static_cast<StateIndex>(i));
  return b;
}

Rows random_rows(Rng& rng, std::size_t n, unsigned percent) {
  std::vector<std::vector<StateIndex>> lists(n);
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = 0; t < n; ++t)
      if (rng.chance(percent)) lists[s].push_back(static_cast<StateIndex>(t));
  return Rows::from_lists(std::move(lists));
}

namespace {

Transformer random_leaf(Rng& rng, const SpacePtr& space) {
  const std::size_t n = space->size();
  switch (rng.below(10)) {
    case 0:
      return Transformer::skip(space);
    case 1:
      return Transformer::magic(space);
    case 2:
      return Transformer::abort(space);
    case 3:
    case 4:
      return Transformer::assume(StateSet(space, random_bits(rng, n, 70)));
    case 5:
      return Transformer::assertion(StateSet(space, random_bits(rng, n, 80)));
    default:
      return Transformer::update(StateRelation(space, random_rows(rng, n, 100 / static_cast<unsigned>(n + 1) + 10)));
  }
}

}  // namespace

Transformer random_transformer(Rng& rng, const SpacePtr& space, int depth) {
  if (depth <= 0 || rng.chance(25)) return random_leaf(rng, space);
  switch (rng.below(4)) {
    case 0: {
      std::vector<Transformer> kids;
      const auto k = 2 + rng.below(2);
      for (std::uint64_t i = 0; i < k; ++i) kids.push_back(random_transformer(rng, space, depth - 1));
      return Transformer::choice(space, std::move(kids));
    }
    case 1: {
      std::vector<Transformer> kids;
      const auto k = 2 + rng.below(2);
      for (std::uint64_t i = 0; i < k; ++i) kids.push_back(random_transformer(rng, space, depth - 1));
      return Transformer::seq(space, std::move(kids));
    }
    case 2:
      return Transformer::strong_iter(random_transformer(rng, space, depth - 1));
    default:
      return Transformer::weak_iter(random_transformer(rng, space, depth - 1));
  }
}

}  // namespace ebsched::kernel
