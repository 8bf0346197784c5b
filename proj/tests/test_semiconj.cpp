#include "doctest.h"

#include "thompson/sampling.hpp"
#include "thompson/semiconj.hpp"
#include "thompson/transducer.hpp"

using namespace thompson;

namespace {

Rational q(long p, long d = 1) {
  Rational r(p, d);
  r.canonicalize();
  return r;
}

RationalPoint pt(const char* text) { return RationalPoint::parse(text); }

PhiEstimator& standard_estimator() {
  static PhiEstimator estimator(Embedding::standard());
  return estimator;
}

Embedding conjugated_embedding() {
  const auto h = Transducer::builtin("paper-h");
  const auto& s = standard_generators();
  return Embedding{conjugate_v_element(h, s.x0, 24), conjugate_v_element(h, s.x1, 24)};
}

}  // namespace

TEST_CASE("words for elements of F") {
  const auto& s = standard_generators();
  CHECK(f_word(identity_element()).empty());
  CHECK(format_word(f_word(identity_element())) == "1");
  CHECK(format_word(f_word(s.x0)) == "x0");
  CHECK(format_word(f_word(s.x1)) == "x1");
  CHECK(format_word(f_word(invert(s.x1))) == "x1^-1");
  CHECK_THROWS_AS(f_word(s.swap), std::invalid_argument);

  const auto e = Embedding::standard();
  // x_n is x0 acting inside the cone 1^n.
  for (std::size_t n = 1; n < 6; ++n) {
    FWord w;
    for (std::size_t i = 1; i < n; ++i) w.push_back({0, 1});
    w.push_back({1, 1});
    for (std::size_t i = 1; i < n; ++i) w.push_back({0, -1});
    CHECK(e.image(w) == deferment(s.x0, Word::repeat(1, n)));
  }

  Rng rng(51);
  for (int trial = 0; trial < 300; ++trial) {
    const auto g = random_order_preserving(rng, 5);
    const auto w = f_word(g);
    CHECK(e.image(w) == g);
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      CHECK_FALSE((w[i].generator == w[i + 1].generator && w[i].exponent == -w[i + 1].exponent));
    }
  }
}

TEST_CASE("embedding JSON") {
  const auto e = Embedding::standard();
  const auto back = Embedding::from_json(e.to_json());
  CHECK(back.x0_image == e.x0_image);
  CHECK(back.x1_image == e.x1_image);
  CHECK(back.word_length_budget == e.word_length_budget);
  const auto custom = Embedding::from_json(R"({"x0": "0>00;10>01;11>1", "x1": "0>0;10>100;110>101;111>11", "depth_budget": 5})");
  CHECK(custom.depth_budget == 5);
  CHECK(custom.x1_image == standard_generators().x1);
  CHECK_THROWS_AS(Embedding::from_json("[1]"), std::invalid_argument);
  CHECK_THROWS_AS(Embedding::from_json(R"({"x0": "0>00"})"), std::invalid_argument);
  CHECK_THROWS_AS(Embedding::from_json(R"({"x0": ">", "x1": ">", "depth_budget": -1})"), std::invalid_argument);
  CHECK_THROWS_AS(Embedding::from_json("{"), std::invalid_argument);
}

TEST_CASE("subgroup samples") {
  const auto e = Embedding::standard();
  const auto& s = standard_generators();
  const auto whole = subgroup_words(e, q(0), q(1), 2);
  CHECK(whole.generators == std::vector<PrefixMap>{s.x0, s.x1});
  CHECK(std::find(whole.commutators.begin(), whole.commutators.end(), commutator(s.x0, s.x1)) !=
        whole.commutators.end());
  CHECK_FALSE(whole.commutators.empty());
  CHECK(subgroup_words(e, q(0), q(1), 1).commutators.empty());

  for (int budget : {2, 3}) {
    const auto middle = subgroup_words(e, q(1, 4), q(3, 4), budget);
    for (const auto& list : {middle.generators, middle.commutators}) {
      for (const auto& g : list) {
        for (const auto& [lo, hi] : support_intervals(v_to_pl(g))) {
          CHECK(lo >= q(1, 4));
          CHECK(hi <= q(3, 4));
        }
      }
    }
  }
  CHECK_THROWS_AS(subgroup_words(e, q(1, 3), q(1, 2), 2), std::invalid_argument);
}

TEST_CASE("support evidence") {
  const auto e = Embedding::standard();
  const auto yes = in_support_of_commutators(e, q(1, 4), q(3, 4), pt("1(0)"));
  REQUIRE(yes.yes());
  CHECK(apply_point(*yes.witness, pt("1(0)")) != pt("1(0)"));
  for (const auto& [a, b] : {std::pair{q(0), q(1)}, std::pair{q(0), q(1, 2)}, std::pair{q(1, 4), q(3, 4)}}) {
    CHECK_FALSE(in_support_of_commutators(e, a, b, pt("(0)")).yes());
    CHECK_FALSE(in_support_of_commutators(e, a, b, pt("(1)")).yes());
  }
  // Points outside the window are never moved.
  CHECK_FALSE(in_support_of_commutators(e, q(1, 2), q(3, 4), pt("(01)")).yes());
}

TEST_CASE("brackets for the standard embedding") {
  auto& est = standard_estimator();
  const auto third = est.bracket(pt("(01)"), 6);
  REQUIRE(third.status == BracketStatus::Interval);
  CHECK(third.contains(q(1, 3)));
  CHECK(third.hi - third.lo <= q(2, 64));
  CHECK(est.bracket(pt("(0)"), 6).status == BracketStatus::Infinity);
  CHECK(est.bracket(pt("(1)"), 6).status == BracketStatus::Infinity);
  CHECK(est.bracket(pt("(01)"), 0).status == BracketStatus::Unknown);
  CHECK(third.to_string() == "[" + format_rational(third.lo) + ", " + format_rational(third.hi) + "]");

  Rng rng(52);
  for (int trial = 0; trial < 60; ++trial) {
    const auto k = random_point(rng, 5, 4);
    const Rational x = to_dyadic(k);
    if (x == 0 || x == 1) {
      CHECK(est.bracket(k, 7).status == BracketStatus::Infinity);
      continue;
    }
    PhiBracket previous;
    for (int d = 1; d <= 7; ++d) {
      const auto b = est.bracket(k, d);
      if (b.status != BracketStatus::Interval) continue;
      CHECK(b.contains(x));
      if (previous.status == BracketStatus::Interval) {
        CHECK(previous.lo <= b.lo);
        CHECK(b.hi <= previous.hi);
      }
      previous = b;
    }
    REQUIRE(previous.status == BracketStatus::Interval);
    CHECK(previous.depth == 7);
    CHECK(previous.hi - previous.lo <= q(2, 128));
  }
}

TEST_CASE("serial and parallel brackets agree") {
  PhiEstimator est(Embedding::standard());
  Rng rng(53);
  for (int trial = 0; trial < 10; ++trial) {
    const auto k = random_point(rng, 4, 3);
    const auto a = est.bracket(k, 5, Execution::Serial);
    const auto b = est.bracket(k, 5, Execution::Parallel);
    CHECK(a.to_json() == b.to_json());
  }
}

TEST_CASE("brackets for the conjugated embedding") {
  const auto h = Transducer::builtin("paper-h");
  PhiEstimator est(conjugated_embedding());
  Rng rng(54);
  for (int trial = 0; trial < 15; ++trial) {
    const auto k = random_point(rng, 5, 4);
    const auto b = est.bracket(k, 6);
    const Rational x = to_dyadic(inverse_point(h, k));
    if (x == 0 || x == 1) {
      CHECK(b.status == BracketStatus::Infinity);
    } else {
      REQUIRE(b.status == BracketStatus::Interval);
      CHECK(b.contains(x));
    }
  }
}

TEST_CASE("equivariance") {
  auto& est = standard_estimator();
  const std::vector<RationalPoint> one{pt("1(0)")};
  const auto report = verify_equivariance(est, standard_x0(), one, 6);
  CHECK(report.ok());
  CHECK(report.checked == 1);
  CHECK(est.bracket(pt("01(0)"), 6).contains(q(1, 4)));

  Rng rng(55);
  std::vector<RationalPoint> samples;
  for (int i = 0; i < 20; ++i) samples.push_back(random_point(rng, 4, 3));
  CHECK(verify_equivariance(est, PLMap(), samples, 5).ok());
  CHECK(verify_equivariance(est, standard_x1(), samples, 5).ok());

  // The swap of the cones 10 and 11 in place of x0.
  Embedding wrong = Embedding::standard();
  wrong.x0_image = standard_generators().swap;
  const auto bad = verify_equivariance(wrong, standard_x0(), samples, 3);
  CHECK_FALSE(bad.ok());
  // A genuine embedding never yields contradictory brackets.
  for (const auto& k : samples) CHECK_FALSE(est.bracket(k, 6).contradictory);
}
