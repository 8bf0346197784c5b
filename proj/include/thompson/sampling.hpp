#pragma once

#include "thompson/cantor.hpp"
#include "thompson/velement.hpp"

#include <random>

namespace thompson {

/// Deterministic generator used by every randomized routine; seeded by the
/// caller, never from the clock.
using Rng = std::mt19937_64;

Word random_word(Rng& rng, std::size_t length);

/// Point with preperiod length in [0, max_pre] and period length in
/// [1, max_period].
RationalPoint random_point(Rng& rng, std::size_t max_pre, std::size_t max_period);

/// Complete prefix code grown by splitting random leaves of length below
/// max_depth, `splits` times (fewer if the tree fills up).
std::vector<Word> random_prefix_code(Rng& rng, std::size_t splits, std::size_t max_depth);

/// Element of V whose unreduced domain and range codes have depth at most
/// max_depth.
PrefixMap random_element(Rng& rng, std::size_t max_depth);

/// Order-preserving element (an element of F) with codes of depth at most
/// max_depth.
PrefixMap random_order_preserving(Rng& rng, std::size_t max_depth);

}  // namespace thompson
