#include "thompson/cantor.hpp"

#include <numeric>
#include <stdexcept>

namespace thompson {

// ---------------------------------------------------------------- Word

Word Word::parse(std::string_view bits) {
  Word w;
  for (char c : bits) {
    if (c != '0' && c != '1') {
      throw std::invalid_argument("word contains a letter other than 0/1: '" +
                                  std::string(bits) + "'");
    }
    w.push_back(c - '0');
  }
  return w;
}

Word Word::repeat(int letter, std::size_t count) {
  Word w;
  for (std::size_t i = 0; i < count; ++i) w.push_back(letter);
  return w;
}

void Word::push_back(int letter) {
  if ((size_ & 63) == 0) blocks_.push_back(0);
  if (letter) blocks_[size_ >> 6] |= (std::uint64_t{1} << (size_ & 63));
  ++size_;
}

void Word::pop_back() {
  --size_;
  blocks_[size_ >> 6] &= ~(std::uint64_t{1} << (size_ & 63));
  if ((size_ & 63) == 0) blocks_.pop_back();
}

void Word::append(const Word& other) {
  for (std::size_t i = 0; i < other.size_; ++i) push_back(other[i]);
}

Word Word::substr(std::size_t pos, std::size_t len) const {
  Word out;
  out.blocks_.reserve((len + 63) / 64);
  for (std::size_t i = 0; i < len; ++i) out.push_back((*this)[pos + i]);
  return out;
}

bool Word::starts_with(const Word& prefix) const {
  if (prefix.size_ > size_) return false;
  const std::size_t full = prefix.size_ >> 6;
  for (std::size_t b = 0; b < full; ++b) {
    if (blocks_[b] != prefix.blocks_[b]) return false;
  }
  const std::size_t rest = prefix.size_ & 63;
  if (rest == 0) return true;
  const std::uint64_t mask = (std::uint64_t{1} << rest) - 1;
  return (blocks_[full] & mask) == (prefix.blocks_[full] & mask);
}

Word Word::rotate_left(std::size_t k) const {
  if (size_ == 0) return *this;
  k %= size_;
  return suffix_from(k) + prefix(k);
}

std::string Word::to_string() const {
  std::string s(size_, '0');
  for (std::size_t i = 0; i < size_; ++i) s[i] = static_cast<char>('0' + (*this)[i]);
  return s;
}

std::size_t Word::hash() const {
  std::size_t h = std::hash<std::size_t>{}(size_);
  for (std::uint64_t b : blocks_) {
    h ^= std::hash<std::uint64_t>{}(b) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

bool operator==(const Word& a, const Word& b) {
  return a.size_ == b.size_ && a.blocks_ == b.blocks_;
}

std::strong_ordering operator<=>(const Word& a, const Word& b) {
  const std::size_t n = std::min(a.size_, b.size_);
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] != b[i]) return a[i] <=> b[i];
  }
  return a.size_ <=> b.size_;
}

// ---------------------------------------------------------------- RationalPoint

RationalPoint::RationalPoint() : per_(Word::repeat(0, 1)) {}

RationalPoint RationalPoint::canonical(Word w, Word u) {
  if (u.empty()) throw std::invalid_argument("rational point needs a non-empty period");

  // Primitive root of the period.
  const std::size_t n = u.size();
  for (std::size_t d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    bool periodic = true;
    for (std::size_t i = d; i < n && periodic; ++i) periodic = u[i] == u[i - d];
    if (periodic) {
      u = u.prefix(d);
      break;
    }
  }

  // Earliest phase: absorb trailing preperiod letters into the period.
  while (!w.empty() && w.back() == u.back()) {
    w.pop_back();
    u = u.rotate_left(u.size() - 1);
  }
  return RationalPoint(std::move(w), std::move(u));
}

RationalPoint RationalPoint::parse(std::string_view text) {
  const auto open = text.find('(');
  if (open == std::string_view::npos || text.empty() || text.back() != ')') {
    throw std::invalid_argument("point must look like w(u): '" + std::string(text) + "'");
  }
  const Word w = Word::parse(text.substr(0, open));
  const Word u = Word::parse(text.substr(open + 1, text.size() - open - 2));
  return canonical(w, u);
}

std::string RationalPoint::to_string() const {
  return pre_.to_string() + "(" + per_.to_string() + ")";
}

int RationalPoint::letter(std::size_t i) const {
  if (i < pre_.size()) return pre_[i];
  return per_[(i - pre_.size()) % per_.size()];
}

Word RationalPoint::first_letters(std::size_t n) const {
  Word out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(letter(i));
  return out;
}

RationalPoint RationalPoint::prepend(const Word& w) const { return canonical(w + pre_, per_); }

bool RationalPoint::has_prefix(const Word& w) const {
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (letter(i) != w[i]) return false;
  }
  return true;
}

std::optional<RationalPoint> RationalPoint::strip_prefix(const Word& w) const {
  if (!has_prefix(w)) return std::nullopt;
  if (w.size() <= pre_.size()) return RationalPoint(pre_.suffix_from(w.size()), per_);
  const std::size_t k = (w.size() - pre_.size()) % per_.size();
  return RationalPoint(Word{}, per_.rotate_left(k));
}

Rational word_value(const Word& w) {
  Integer numerator = 0;
  for (std::size_t i = 0; i < w.size(); ++i) numerator = numerator * 2 + w[i];
  Rational q(numerator, 1);
  q /= pow2(static_cast<long>(w.size()));
  q.canonicalize();
  return q;
}

Rational RationalPoint::to_dyadic() const {
  // 0.w + 2^{-|w|} * U / (2^{|u|} - 1)
  Integer periodic_numerator = 0;
  for (std::size_t i = 0; i < per_.size(); ++i) {
    periodic_numerator = periodic_numerator * 2 + per_[i];
  }
  Integer denominator;
  mpz_ui_pow_ui(denominator.get_mpz_t(), 2, per_.size());
  denominator -= 1;
  Rational tail(periodic_numerator, denominator);
  tail.canonicalize();
  tail /= pow2(static_cast<long>(pre_.size()));
  Rational value = word_value(pre_) + tail;
  value.canonicalize();
  return value;
}

std::size_t RationalPoint::hash() const {
  std::size_t h = pre_.hash();
  h ^= per_.hash() + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

std::strong_ordering operator<=>(const RationalPoint& a, const RationalPoint& b) {
  if (a == b) return std::strong_ordering::equal;
  // Beyond max(preperiods) + lcm(periods) both sequences repeat in lockstep.
  const std::size_t horizon = std::max(a.pre_.size(), b.pre_.size()) +
                              std::lcm(a.per_.size(), b.per_.size());
  for (std::size_t i = 0; i < horizon; ++i) {
    const int x = a.letter(i);
    const int y = b.letter(i);
    if (x != y) return x <=> y;
  }
  // Unreachable for distinct canonical forms.
  return std::strong_ordering::equal;
}

}  // namespace thompson
