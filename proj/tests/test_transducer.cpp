#include "doctest.h"

#include "thompson/sampling.hpp"
#include "thompson/transducer.hpp"

using namespace thompson;

namespace {

RationalPoint pt(const char* text) { return RationalPoint::parse(text); }
Word wd(const char* bits) { return Word::parse(bits); }

const Transducer& h() {
  static const Transducer machine = Transducer::builtin("paper-h");
  return machine;
}

Transducer random_machine(Rng& rng, std::size_t states) {
  std::vector<std::string> names;
  std::vector<std::array<Transition, 2>> table(states);
  for (std::size_t s = 0; s < states; ++s) {
    names.push_back("s" + std::to_string(s));
    for (int a = 0; a < 2; ++a) table[s][a] = Transition{random_word(rng, rng() % 3), rng() % states};
  }
  return Transducer(std::move(names), 0, std::move(table));
}

// Letter-by-letter reference run.
std::string run_string(const Transducer& t, const std::string& input, std::size_t state) {
  std::string out;
  for (char c : input) {
    const auto& tr = t.transition(state, c - '0');
    out += tr.output.to_string();
    state = tr.next;
  }
  return out;
}

}  // namespace

TEST_CASE("apply_word on the fixture") {
  const auto q1 = *h().find_state("q1");
  const auto q2 = *h().find_state("q2");
  const auto q0 = *h().find_state("q0");
  auto r = apply_word(h(), wd("11"));
  CHECK(r.output.to_string() == "11");
  CHECK(r.final_state == q2);
  r = apply_word(h(), wd("00"), q1);
  CHECK(r.output.to_string() == "010");
  CHECK(r.final_state == q0);
  r = apply_word(h(), Word{}, q1);
  CHECK(r.output.empty());
  CHECK(r.final_state == q1);
}

TEST_CASE("apply_point on the fixture") {
  CHECK(apply_point(h(), pt("(0)")) == pt("(10)"));
  CHECK(apply_point(h(), pt("(1)")) == pt("(1)"));

  const Word z = wd("1100");
  const Run run = apply_word(h(), z + wd("00"));
  REQUIRE(run.output.size() >= 3);
  CHECK(run.output.suffix_from(run.output.size() - 3).to_string() == "010");
  CHECK(run.final_state == *h().find_state("q0"));
  const Word z_image = run.output.prefix(run.output.size() - 3);
  CHECK(z_image.to_string() == "110101");
  CHECK(apply_point(h(), RationalPoint::canonical(z + wd("00"), wd("0"))).has_prefix(z_image + wd("010")));
}

TEST_CASE("apply_point agrees with apply_word on prefixes") {
  Rng rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    const auto p = random_point(rng, 6, 4);
    const auto image = apply_point(h(), p);
    const std::size_t n = rng() % 20;
    const Word out = apply_word(h(), p.first_letters(n)).output;
    CHECK(image.has_prefix(out));
    CHECK(run_string(h(), p.first_letters(n).to_string(), 0) == out.to_string());
  }
}

TEST_CASE("degenerate output is rejected") {
  const Transducer stall({"s", "t"}, 0,
                         {{{Transition{Word{}, 0}, Transition{wd("1"), 1}}, {Transition{wd("0"), 1}, Transition{wd("1"), 1}}}});
  CHECK_THROWS_AS(apply_point(stall, pt("(0)")), DegenerateOutput);
  CHECK(apply_point(stall, pt("1(0)")) == pt("1(0)"));
}

TEST_CASE("inverse points") {
  const Word z = wd("1100");
  const auto target = RationalPoint::canonical(wd("110101") + wd("010"), wd("0"));
  CHECK(inverse_point(h(), target) == RationalPoint::canonical(z + wd("00"), wd("10")));

  Rng rng(32);
  for (int trial = 0; trial < 300; ++trial) {
    const auto p = random_point(rng, 6, 4);
    CHECK(inverse_point(h(), apply_point(h(), p)) == p);
    // h has order 2.
    CHECK(inverse_point(h(), p) == apply_point(h(), p));
  }
  const auto drop = Transducer({"s"}, 0, {{{Transition{wd("0"), 0}, Transition{wd("0"), 0}}}});
  CHECK_THROWS_AS(inverse_point(drop, pt("(0)")), std::domain_error);
  CHECK_THROWS_AS(inverse_point(drop, pt("(1)")), std::domain_error);
}

TEST_CASE("synchronizing levels") {
  CHECK(synchronizing_level(h(), 8) == 2);
  CHECK(synchronizing_level(h(), 1) == std::nullopt);
  CHECK(synchronizing_level(Transducer::builtin("identity"), 4) == 0);
  CHECK(synchronizing_level(Transducer::builtin("parity"), 12) == std::nullopt);
}

TEST_CASE("composition and identity checks") {
  const auto hh = compose(h(), h());
  CHECK(is_identity(hh, 12));
  CHECK(is_identity_exact(hh));
  CHECK_FALSE(is_identity(h(), 6));
  CHECK_FALSE(is_identity_exact(h()));

  const auto id = Transducer::builtin("identity");
  CHECK(minimize(compose(h(), id)) == minimize(h()));
  CHECK(minimize(compose(id, h())) == minimize(h()));

  const auto swap = Transducer::builtin("letter-swap");
  CHECK(is_identity(compose(swap, swap), 10));
  CHECK_FALSE(is_identity(swap, 3));
  CHECK(is_identity_exact(Transducer::builtin("parity")));
  CHECK(minimize(Transducer::builtin("parity")).size() == 1);

  CHECK_THROWS_AS(compose(h(), h(), 2), BufferOverflow);
}

TEST_CASE("composition runs the machines in sequence") {
  Rng rng(33);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_machine(rng, 1 + rng() % 3);
    const auto b = random_machine(rng, 1 + rng() % 3);
    const auto ab = compose(a, b);
    const auto m = minimize(ab);
    for (int k = 0; k < 10; ++k) {
      const Word w = random_word(rng, rng() % 12);
      const Word mid = apply_word(a, w).output;
      const Word expect = apply_word(b, mid).output;
      CHECK(apply_word(ab, w).output == expect);
      CHECK(apply_word(m, w).output == expect);
    }
  }
}

TEST_CASE("identity checks agree on random machines") {
  Rng rng(34);
  for (int trial = 0; trial < 300; ++trial) {
    const auto t = random_machine(rng, 1 + rng() % 3);
    CHECK(is_identity(t, 10) == is_identity_exact(t));
  }
}

TEST_CASE("machine JSON round trip") {
  for (const auto& name : Transducer::builtin_names()) {
    const auto t = Transducer::builtin(name);
    const auto back = Transducer::from_json(t.to_json());
    CHECK(back == t);
    CHECK(back.to_json() == t.to_json());
  }
  CHECK_THROWS_AS(Transducer::from_json("{"), std::invalid_argument);
  CHECK_THROWS_AS(Transducer::from_json(R"({"states":["a"],"initial":"a","transitions":[]})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(Transducer::from_json(
                      R"({"states":["a"],"initial":"b","transitions":[{"state":"a","in":"0","out":"","next":"a"},{"state":"a","in":"1","out":"1","next":"a"}]})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(Transducer::builtin("nope"), std::invalid_argument);
}

TEST_CASE("conjugation by the identity machine") {
  const auto id = Transducer::builtin("identity");
  Rng rng(35);
  for (int trial = 0; trial < 30; ++trial) {
    const auto g = random_element(rng, 4);
    CHECK(conjugate_v_element(id, g, 12) == g);
  }
}

TEST_CASE("conjugation by the fixture") {
  const auto& s = standard_generators();
  std::vector<PrefixMap> elements{s.x0, s.x1, deferment(s.x0, wd("0")), deferment(s.x0, wd("1")),
                                  deferment(s.x0, wd("1100"))};
  Rng rng(36);
  for (const auto& g : elements) {
    const auto gh = conjugate_v_element(h(), g, 24);
    for (int k = 0; k < 200; ++k) {
      const auto p = random_point(rng, 8, 5);
      CHECK(apply_point(h(), apply_point(g, p)) == apply_point(gh, apply_point(h(), p)));
    }
    // Order 2: conjugating twice returns g.
    CHECK(conjugate_v_element(h(), gh, 24) == g);
  }
}

TEST_CASE("the conjugated deferment leaves F") {
  const Word z = wd("1100");
  const auto a = deferment(standard_generators().x0, z + wd("00"));
  const auto ah = conjugate_v_element(h(), a, 24);
  const auto supp = support(ah);
  CHECK(supp.cones() == std::vector<Word>{wd("110101010")});
  CHECK(supp.added_points().empty());
  // The closure is the cone; the deleted points are fixed points inside it.
  for (const auto& q : supp.deleted_points()) CHECK(q.has_prefix(wd("110101010")));
  CHECK_FALSE(is_order_preserving(ah));

  const auto corner = RationalPoint::canonical(wd("110101010"), wd("0"));
  CHECK(apply_point(ah, corner) != corner);
  const auto pre = inverse_point(h(), corner);
  CHECK(pre == RationalPoint::canonical(z + wd("00"), wd("10")));
  CHECK(apply_point(a, pre) == RationalPoint::canonical(z + wd("0001"), wd("10")));
}

TEST_CASE("conjugation is an action") {
  Rng rng(37);
  for (int trial = 0; trial < 25; ++trial) {
    const auto g1 = random_element(rng, 3);
    const auto g2 = random_element(rng, 3);
    const auto lhs = conjugate_v_element(h(), compose(g1, g2), 24);
    const auto rhs = compose(conjugate_v_element(h(), g1, 24), conjugate_v_element(h(), g2, 24));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("conjugation depth limits") {
  CHECK_THROWS_AS(conjugate_v_element(h(), deferment(standard_generators().x0, wd("1100")), 3), DepthExceeded);
  CHECK_THROWS_AS(conjugate_v_element(Transducer::builtin("parity"), standard_generators().x0, 6), DepthExceeded);
}
