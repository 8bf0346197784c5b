#pragma once

#include "thompson/rational.hpp"

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace thompson {

/// A finite word over {0,1}, stored as packed bits. The empty word is valid.
class Word {
 public:
  Word() = default;

  /// Parses a string of '0'/'1' characters. Throws std::invalid_argument.
  static Word parse(std::string_view bits);
  static Word repeat(int letter, std::size_t count);

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  int operator[](std::size_t i) const {
    return static_cast<int>((blocks_[i >> 6] >> (i & 63)) & 1u);
  }
  int back() const { return (*this)[size_ - 1]; }

  void push_back(int letter);
  void pop_back();
  void append(const Word& other);

  Word prefix(std::size_t n) const { return substr(0, n); }
  Word suffix_from(std::size_t pos) const { return substr(pos, size_ - pos); }
  Word substr(std::size_t pos, std::size_t len) const;

  bool starts_with(const Word& prefix) const;
  bool is_prefix_comparable(const Word& other) const {
    return starts_with(other) || other.starts_with(*this);
  }

  /// Rotation moving the first `k` letters to the end.
  Word rotate_left(std::size_t k) const;

  std::string to_string() const;
  std::size_t hash() const;

  friend bool operator==(const Word& a, const Word& b);
  /// Lexicographic order with a proper prefix ordered first.
  friend std::strong_ordering operator<=>(const Word& a, const Word& b);

  friend Word operator+(Word a, const Word& b) {
    a.append(b);
    return a;
  }

 private:
  std::vector<std::uint64_t> blocks_;
  std::size_t size_ = 0;
};

/// An eventually periodic point preperiod·period^∞ of Cantor space, always
/// held in canonical form: the period is primitive and the preperiod is as
/// short as possible.
class RationalPoint {
 public:
  /// All-zeros point.
  RationalPoint();

  /// Canonical representative of w·u^∞. Throws std::invalid_argument if u
  /// is empty.
  static RationalPoint canonical(Word w, Word u);

  /// Text grammar `w(u)`, e.g. `01(10)` or `(0)`.
  static RationalPoint parse(std::string_view text);
  std::string to_string() const;

  const Word& preperiod() const { return pre_; }
  const Word& period() const { return per_; }

  /// Letter at position i of the infinite sequence.
  int letter(std::size_t i) const;
  /// The first n letters of the sequence.
  Word first_letters(std::size_t n) const;

  /// w·this.
  RationalPoint prepend(const Word& w) const;
  /// τ with this = w·τ, or nullopt when w is not a prefix.
  std::optional<RationalPoint> strip_prefix(const Word& w) const;
  bool has_prefix(const Word& w) const;

  /// Exact value of the binary expansion in [0,1].
  Rational to_dyadic() const;

  std::size_t hash() const;

  friend bool operator==(const RationalPoint& a, const RationalPoint& b) {
    return a.per_ == b.per_ && a.pre_ == b.pre_;
  }
  /// Lexicographic order on Cantor space.
  friend std::strong_ordering operator<=>(const RationalPoint& a, const RationalPoint& b);

 private:
  RationalPoint(Word pre, Word per) : pre_(std::move(pre)), per_(std::move(per)) {}

  Word pre_;
  Word per_;
};

/// Three-way lexicographic comparison of points.
inline std::strong_ordering compare_lex(const RationalPoint& a, const RationalPoint& b) {
  return a <=> b;
}

inline Rational to_dyadic(const RationalPoint& p) { return p.to_dyadic(); }

/// Exact value of the finite binary fraction 0.w, i.e. the left end of the
/// interval of the cone w.
Rational word_value(const Word& w);

}  // namespace thompson

template <>
struct std::hash<thompson::Word> {
  std::size_t operator()(const thompson::Word& w) const { return w.hash(); }
};

template <>
struct std::hash<thompson::RationalPoint> {
  std::size_t operator()(const thompson::RationalPoint& p) const { return p.hash(); }
};
