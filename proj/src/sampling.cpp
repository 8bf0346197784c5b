#include "thompson/sampling.hpp"

#include <algorithm>

namespace thompson {

namespace {

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

std::vector<Word> grow_code(Rng& rng, std::size_t leaves, std::size_t max_depth) {
  std::vector<Word> code{Word{}};
  while (code.size() < leaves) {
    std::vector<std::size_t> splittable;
    for (std::size_t i = 0; i < code.size(); ++i) {
      if (code[i].size() < max_depth) splittable.push_back(i);
    }
    if (splittable.empty()) break;
    const std::size_t pick = splittable[uniform(rng, 0, splittable.size() - 1)];
    Word w = code[pick];
    code.erase(code.begin() + static_cast<std::ptrdiff_t>(pick));
    Word left = w;
    left.push_back(0);
    w.push_back(1);
    code.push_back(std::move(left));
    code.push_back(std::move(w));
  }
  std::sort(code.begin(), code.end());
  return code;
}

}  // namespace

Word random_word(Rng& rng, std::size_t length) {
  Word w;
  for (std::size_t i = 0; i < length; ++i) w.push_back(static_cast<int>(rng() & 1u));
  return w;
}

RationalPoint random_point(Rng& rng, std::size_t max_pre, std::size_t max_period) {
  Word pre = random_word(rng, uniform(rng, 0, max_pre));
  Word per = random_word(rng, uniform(rng, 1, max_period));
  return RationalPoint::canonical(std::move(pre), std::move(per));
}

std::vector<Word> random_prefix_code(Rng& rng, std::size_t splits, std::size_t max_depth) {
  return grow_code(rng, splits + 1, max_depth);
}

PrefixMap random_element(Rng& rng, std::size_t max_depth) {
  // Both codes need the same number of leaves; grow until they match.
  const std::size_t cap = std::size_t{1} << std::min<std::size_t>(max_depth, 4);
  const std::size_t leaves = uniform(rng, 1, cap);
  std::vector<Word> domain = grow_code(rng, leaves, max_depth);
  std::vector<Word> range = grow_code(rng, domain.size(), max_depth);
  std::shuffle(range.begin(), range.end(), rng);
  std::vector<PrefixPair> table;
  for (std::size_t i = 0; i < domain.size(); ++i) table.push_back(PrefixPair{domain[i], range[i]});
  return PrefixMap::from_pairs(std::move(table));
}

PrefixMap random_order_preserving(Rng& rng, std::size_t max_depth) {
  const std::size_t cap = std::size_t{1} << std::min<std::size_t>(max_depth, 4);
  const std::size_t leaves = uniform(rng, 1, cap);
  std::vector<Word> domain = grow_code(rng, leaves, max_depth);
  std::vector<Word> range = grow_code(rng, domain.size(), max_depth);
  std::vector<PrefixPair> table;
  for (std::size_t i = 0; i < domain.size(); ++i) table.push_back(PrefixPair{domain[i], range[i]});
  return PrefixMap::from_pairs(std::move(table));
}

}  // namespace thompson
