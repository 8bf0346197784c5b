#include "doctest.h"

#include "thompson/cantor.hpp"
#include "thompson/sampling.hpp"

#include <string>

using namespace thompson;

namespace {

// Independent string-based model of w·u^∞ used as an oracle.
std::string expand(const std::string& w, const std::string& u, std::size_t n) {
  std::string s = w;
  while (s.size() < n) s += u;
  return s.substr(0, n);
}

// Brute force over all (w', u') with |w'| + |u'| <= bound: the
// representation of the same point with shortest u', then shortest w'.
std::pair<std::string, std::string> brute_canonical(const std::string& w, const std::string& u) {
  const std::size_t bound = w.size() + u.size();
  const std::size_t horizon = 4 * bound + 8;
  const std::string target = expand(w, u, horizon);
  for (std::size_t lu = 1; lu <= bound; ++lu) {
    for (std::size_t lw = 0; lw + lu <= bound; ++lw) {
      // Enumerating only the candidates consistent with the target prefix.
      const std::string cw = target.substr(0, lw);
      const std::string cu = target.substr(lw, lu);
      if (expand(cw, cu, horizon) == target) return {cw, cu};
    }
  }
  return {w, u};
}

RationalPoint pt(const char* text) { return RationalPoint::parse(text); }

}  // namespace

TEST_CASE("canonicalize examples") {
  auto a = RationalPoint::canonical(Word::parse("01"), Word::parse("1010"));
  CHECK(a.preperiod().to_string() == "01");
  CHECK(a.period().to_string() == "10");
  CHECK(brute_canonical("01", "1010") == std::pair<std::string, std::string>{"01", "10"});

  auto b = RationalPoint::canonical(Word::parse("01"), Word::parse("01"));
  CHECK(b.to_string() == "(01)");

  auto c = RationalPoint::canonical(Word::parse("0"), Word::parse("00"));
  CHECK(c.to_string() == "(0)");
}

TEST_CASE("canonicalize rejects an empty period") {
  CHECK_THROWS_AS(RationalPoint::canonical(Word::parse("01"), Word{}), std::invalid_argument);
  CHECK_THROWS_AS(RationalPoint::parse("01()"), std::invalid_argument);
  CHECK_THROWS_AS(RationalPoint::parse("012(1)"), std::invalid_argument);
  CHECK_THROWS_AS(RationalPoint::parse("01"), std::invalid_argument);
}

TEST_CASE("canonicalize agrees with brute force") {
  Rng rng(11);
  for (int trial = 0; trial < 400; ++trial) {
    const Word w = random_word(rng, rng() % 6);
    const Word u = random_word(rng, 1 + rng() % 5);
    const auto p = RationalPoint::canonical(w, u);
    const auto [bw, bu] = brute_canonical(w.to_string(), u.to_string());
    CHECK(p.preperiod().to_string() == bw);
    CHECK(p.period().to_string() == bu);
  }
}

TEST_CASE("canonical form is constant on unrolled representations") {
  Rng rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    const Word w = random_word(rng, rng() % 5);
    const Word u = random_word(rng, 1 + rng() % 4);
    const auto p = RationalPoint::canonical(w, u);
    CHECK(RationalPoint::canonical(p.preperiod(), p.period()) == p);
    const std::size_t k = rng() % 3;
    Word unrolled = w;
    for (std::size_t i = 0; i < k; ++i) unrolled.append(u);
    const std::size_t shift = rng() % u.size();
    unrolled.append(u.prefix(shift));
    CHECK(RationalPoint::canonical(unrolled, u.rotate_left(shift) + u.rotate_left(shift)) == p);
  }
}

TEST_CASE("lexicographic comparison") {
  CHECK(compare_lex(pt("(0)"), pt("1(0)")) == std::strong_ordering::less);
  CHECK(compare_lex(pt("(01)"), pt("0(1)")) == std::strong_ordering::less);
  CHECK(expand("", "01", 8) < expand("0", "1", 8));
  CHECK(compare_lex(pt("01(10)"), pt("01(10)")) == std::strong_ordering::equal);
  CHECK(compare_lex(pt("1(0)"), pt("(0)")) == std::strong_ordering::greater);
}

TEST_CASE("lexicographic order agrees with string expansion and dyadic values") {
  Rng rng(13);
  for (int trial = 0; trial < 500; ++trial) {
    const auto a = random_point(rng, 5, 4);
    const auto b = random_point(rng, 5, 4);
    const std::size_t horizon = 64;
    const auto sa = a.first_letters(horizon).to_string();
    const auto sb = b.first_letters(horizon).to_string();
    const auto ord = compare_lex(a, b);
    if (a == b) {
      CHECK(ord == std::strong_ordering::equal);
    } else {
      CHECK(sa != sb);
      CHECK((ord == std::strong_ordering::less) == (sa < sb));
      const Rational va = a.to_dyadic();
      const Rational vb = b.to_dyadic();
      if (va != vb) CHECK((ord == std::strong_ordering::less) == (va < vb));
    }
  }
}

TEST_CASE("strip_prefix") {
  CHECK(pt("0(10)").strip_prefix(Word::parse("0"))->to_string() == "(10)");
  CHECK(pt("(10)").strip_prefix(Word::parse("101"))->to_string() == "(01)");
  CHECK_FALSE(pt("(0)").strip_prefix(Word::parse("1")).has_value());
  CHECK(pt("(0)").strip_prefix(Word{}) == pt("(0)"));
}

TEST_CASE("strip then prepend restores the point") {
  Rng rng(14);
  for (int trial = 0; trial < 300; ++trial) {
    const auto p = random_point(rng, 6, 4);
    const Word w = p.first_letters(rng() % 12);
    const auto tail = p.strip_prefix(w);
    REQUIRE(tail.has_value());
    CHECK(tail->prepend(w) == p);
    Word other = w;
    if (!other.empty()) {
      const int last = other.back();
      other.pop_back();
      other.push_back(1 - last);
      CHECK_FALSE(p.strip_prefix(other).has_value());
    }
  }
}

TEST_CASE("to_dyadic") {
  CHECK(pt("(0)").to_dyadic() == 0);
  CHECK(pt("(1)").to_dyadic() == 1);
  CHECK(pt("(01)").to_dyadic() == Rational(1, 3));
  CHECK(pt("1(0)").to_dyadic() == Rational(1, 2));
  CHECK(pt("0(1)").to_dyadic() == Rational(1, 2));

  // Partial sums of sum 4^-i approach the closed form from below within 4^-k.
  Rational partial = 0;
  for (int k = 1; k <= 20; ++k) {
    partial += pow(Rational(1, 4), k);
    const Rational gap = Rational(1, 3) - partial;
    CHECK(gap > 0);
    CHECK(gap <= pow(Rational(1, 4), k));
  }
}

TEST_CASE("point grammar round trip") {
  Rng rng(15);
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = random_point(rng, 6, 5);
    CHECK(RationalPoint::parse(p.to_string()) == p);
  }
  CHECK(pt("(001)").to_string() == "(001)");
  CHECK(pt("1(0)").to_string() == "1(0)");
}
