#pragma once

#include "thompson/cantor.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace thompson {

/// True when the words form a finite antichain whose cones partition Cantor
/// space.
bool is_complete_prefix_code(std::span<const Word> words);

/// Antichain of cones covering exactly the complement of the union of the
/// given cones.
std::vector<Word> complement_cones(std::span<const Word> cones);

/// Finite union of cones with finitely many rational points removed from
/// it and finitely many rational points added outside it. This is the exact
/// shape of supports and fixed sets of elements of V.
class ClopenishSet {
 public:
  ClopenishSet() = default;
  ClopenishSet(std::vector<Word> cones, std::vector<RationalPoint> deleted,
               std::vector<RationalPoint> added);

  static ClopenishSet everything() { return ClopenishSet({Word{}}, {}, {}); }

  /// Sorted antichain with sibling cones merged.
  const std::vector<Word>& cones() const { return cones_; }
  const std::vector<RationalPoint>& deleted_points() const { return deleted_; }
  const std::vector<RationalPoint>& added_points() const { return added_; }

  bool contains(const RationalPoint& p) const;
  bool in_cones(const RationalPoint& p) const;
  ClopenishSet complement() const;

  bool empty() const { return cones_.empty() && added_.empty(); }
  bool is_everything() const {
    return cones_.size() == 1 && cones_[0].empty() && deleted_.empty();
  }

  std::string to_string() const;

  friend bool operator==(const ClopenishSet&, const ClopenishSet&) = default;

 private:
  std::vector<Word> cones_;
  std::vector<RationalPoint> deleted_;
  std::vector<RationalPoint> added_;
};

struct PrefixPair {
  Word domain;
  Word range;

  friend bool operator==(const PrefixPair&, const PrefixPair&) = default;
};

/// An element of Thompson's group V: a bijection between two complete
/// prefix codes, acting by `domain·ξ ↦ range·ξ`. Instances are always in
/// reduced form (no collapsible sibling pair) with pairs sorted by domain,
/// so equality of tables is equality of homeomorphisms.
///
/// Composition follows the right-action convention: compose(f, g) is
/// "f first, then g".
class PrefixMap {
 public:
  /// The identity, table {ε ↦ ε}.
  PrefixMap();

  /// Validates and reduces an arbitrary (possibly unreduced) table.
  /// Throws std::invalid_argument when either side is not a complete prefix
  /// code or the sides have different sizes.
  static PrefixMap from_pairs(std::vector<PrefixPair> table);

  /// Element grammar `d>r;d>r;...`; the identity is `>` (or `id`).
  static PrefixMap parse(std::string_view text);
  std::string to_string() const;

  const std::vector<PrefixPair>& pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }
  bool is_identity() const { return pairs_.size() == 1 && pairs_[0].domain.empty(); }

  /// Index of the pair whose domain word is a prefix of p.
  std::size_t locate(const RationalPoint& p) const;
  /// Longest domain or range word.
  std::size_t max_word_length() const;

  std::size_t hash() const;
  friend bool operator==(const PrefixMap& a, const PrefixMap& b) { return a.pairs_ == b.pairs_; }

 private:
  explicit PrefixMap(std::vector<PrefixPair> reduced);

  std::vector<PrefixPair> pairs_;
  std::unordered_map<Word, std::size_t> domain_index_;
  std::size_t max_domain_length_ = 0;
};

/// Reduced form of a raw table.
PrefixMap reduce(std::vector<PrefixPair> table);

PrefixMap identity_element();
/// κ ↦ (κ.f).g
PrefixMap compose(const PrefixMap& f, const PrefixMap& g);
PrefixMap invert(const PrefixMap& f);
/// f^n for any integer n.
PrefixMap power(const PrefixMap& f, long n);
/// f⁻¹ g⁻¹ f g
PrefixMap commutator(const PrefixMap& f, const PrefixMap& g);

RationalPoint apply_point(const PrefixMap& f, const RationalPoint& p);
/// Image of the cone w, or nullopt when w is a proper prefix of several
/// domain words (the cone is not mapped by a single replacement).
std::optional<Word> apply_word(const PrefixMap& f, const Word& w);

/// Membership in F: the pairing is monotone in lexicographic order.
bool is_order_preserving(const PrefixMap& f);

ClopenishSet fixed_points(const PrefixMap& f);
ClopenishSet support(const PrefixMap& f);

/// Germ exponent at a fixed point: (|range| − |domain|) / |period| for the
/// replacement acting near p. Positive when f inserts periods (attracting
/// along the period), zero exactly when f fixes a neighbourhood of p.
/// nullopt when p is not fixed.
std::optional<long> germ_at(const PrefixMap& f, const RationalPoint& p);

/// Copy of f acting inside the cone w (w·ξ ↦ w·(ξ.f)) and trivially
/// elsewhere.
PrefixMap deferment(const PrefixMap& f, const Word& w);

struct StandardGenerators {
  PrefixMap x0;     ///< 0>00;10>01;11>1
  PrefixMap x1;     ///< deferment of x0 to the cone 1
  PrefixMap swap;   ///< 0>0;10>11;11>10
  PrefixMap cycle;  ///< 0>11;10>0;11>10
};

/// Fixed generators of V; ⟨x0, x1⟩ is the standard copy of F.
const StandardGenerators& standard_generators();

}  // namespace thompson

template <>
struct std::hash<thompson::PrefixMap> {
  std::size_t operator()(const thompson::PrefixMap& f) const { return f.hash(); }
};
