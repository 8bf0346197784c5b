#include "doctest.h"
#include "json.hpp"

#include "thompson/actiongraph.hpp"
#include "thompson/sampling.hpp"

#include <regex>
#include <set>

using namespace thompson;

namespace {

RationalPoint pt(const char* text) { return RationalPoint::parse(text); }
PrefixMap el(const char* text) { return PrefixMap::parse(text); }

// Cycle rank |E| − |V| + #components of the underlying multigraph.
long cycle_rank(const OrbitGraph& g) {
  std::vector<char> seen(g.size(), 0);
  long components = 0;
  for (std::size_t s = 0; s < g.size(); ++s) {
    if (seen[s]) continue;
    ++components;
    const auto d = g.distances_from(s);
    for (std::size_t v = 0; v < g.size(); ++v) {
      if (d[v] >= 0) seen[v] = 1;
    }
  }
  return static_cast<long>(g.edges().size()) - static_cast<long>(g.size()) + components;
}

// Increment of one QT edge, written independently of the library.
long qt_increment(const RationalPoint& a, const RationalPoint& b) {
  if (a.preperiod().empty() && b.preperiod().empty()) return 0;
  for (const char* letter : {"0", "1"}) {
    if (a.prepend(Word::parse(letter)) == b) return 1;
  }
  return -1;
}

// Closed form on a rational component: net change of the preperiod length.
long closed_form(const RationalPoint& a, const RationalPoint& b) {
  return static_cast<long>(b.preperiod().size()) - static_cast<long>(a.preperiod().size());
}

RationalPoint long_preperiod_point(Rng& rng, std::size_t length) {
  Word u = random_word(rng, 1 + rng() % 3);
  Word w = random_word(rng, length - 1);
  w.push_back(1 - u.back());
  return RationalPoint::canonical(w, u);
}

std::vector<NamedElement> f_generators() {
  const auto& s = standard_generators();
  return symmetrize({{"x0", s.x0}, {"x1", s.x1}});
}

}  // namespace

TEST_CASE("QT cycles") {
  const auto c = detect_cycle(pt("(001)"));
  REQUIRE(c.length() == 3);
  std::set<std::string> names;
  for (const auto& v : c.vertices) names.insert(v.to_string());
  CHECK(names == std::set<std::string>{"(001)", "(100)", "(010)"});
  CHECK(detect_cycle(pt("(0)")).length() == 1);
  CHECK(detect_cycle(pt("(01)")).length() == 2);
  CHECK(detect_cycle(pt("110(01)")).length() == 2);
  // Each cycle vertex is the previous one with a letter prepended.
  for (std::size_t i = 0; i + 1 < c.length(); ++i) {
    CHECK(c.vertices[i + 1].strip_prefix(c.vertices[i + 1].first_letters(1)) == c.vertices[i]);
  }
}

TEST_CASE("QT balls: one cycle for rational bases, degree 3 inside") {
  const auto ball = build_qt_ball(pt("(001)"), 8);
  CHECK(cycle_rank(ball) == 1);
  for (std::size_t v = 0; v < ball.size(); ++v) {
    if (ball.depth()[v] < ball.radius()) CHECK(ball.degree(v) == 3);
  }
  const auto zero = build_qt_ball(pt("(0)"), 4);
  CHECK(zero.edge_between(0, 0) != nullptr);
  CHECK(zero.degree(0) == 3);
  CHECK(cycle_rank(zero) == 1);
  CHECK(cycle_rank(build_qt_ball(pt("(01)"), 5)) == 1);

  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const auto base = long_preperiod_point(rng, 24);
    REQUIRE(base.preperiod().size() == 24);
    const auto b = build_qt_ball(base, 8);
    CHECK(cycle_rank(b) == 0);
    for (std::size_t v = 0; v < b.size(); ++v) {
      if (b.depth()[v] < b.radius()) CHECK(b.degree(v) == 3);
    }
  }
}

TEST_CASE("QT ball sizes") {
  // Acyclic phase: the ball is a 3-regular tree, 1 + 3(2^r − 1) vertices.
  Rng rng(22);
  const auto base = long_preperiod_point(rng, 24);
  for (int r = 0; r <= 6; ++r) CHECK(build_qt_ball(base, r).size() == 1 + 3 * ((std::size_t{1} << r) - 1));
}

TEST_CASE("serial and parallel ball growth agree") {
  for (const char* base : {"(001)", "(0)", "1101(01)"}) {
    const auto a = build_qt_ball(pt(base), 7, Execution::Serial);
    const auto b = build_qt_ball(pt(base), 7, Execution::Parallel);
    CHECK(a.vertices() == b.vertices());
    CHECK(to_json(a) == to_json(b));
  }
  const auto gens = f_generators();
  const auto a = build_action_graph(gens, pt("1(0)"), 6, 100000, Execution::Serial);
  const auto b = build_action_graph(gens, pt("1(0)"), 6, 100000, Execution::Parallel);
  CHECK(to_json(a) == to_json(b));
}

TEST_CASE("discrepancy examples") {
  const auto kappa = pt("1(0)");
  const auto base = kappa.prepend(Word::parse("0"));
  CHECK(discrepancy(base, base, kappa) == -1);
  CHECK(discrepancy(base, base, kappa.prepend(Word::parse("000"))) == 2);
  CHECK(discrepancy(base, base, base.prepend(Word::parse("1"))) == 1);
  CHECK(discrepancy(base, base, base.prepend(Word::parse("10"))) == 2);

  const auto c = detect_cycle(pt("(001)"));
  for (const auto& a : c.vertices) {
    for (const auto& b : c.vertices) CHECK(discrepancy(pt("(001)"), a, b) == 0);
  }
  Rng rng(23);
  const auto far = long_preperiod_point(rng, 24);
  CHECK(discrepancy(far, far, far.prepend(Word::parse("0"))) == 1);

  CHECK_THROWS_AS(discrepancy(pt("(001)"), pt("(001)"), pt("(01)")), std::invalid_argument);
  CHECK_THROWS_AS(discrepancy(pt("(0)"), pt("(0)"), pt("(1)")), std::invalid_argument);
}

TEST_CASE("discrepancy agrees with ball search and the closed form") {
  Rng rng(24);
  for (int trial = 0; trial < 150; ++trial) {
    const auto base = random_point(rng, 5, 3);
    // Move a few random QT steps from base to get two nearby points.
    auto wander = [&](RationalPoint p) {
      const int steps = static_cast<int>(rng() % 6);
      for (int i = 0; i < steps; ++i) {
        if (rng() % 3 == 0) {
          p = *p.strip_prefix(p.first_letters(1));
        } else {
          p = p.prepend(random_word(rng, 1));
        }
      }
      return p;
    };
    const auto a = wander(base);
    const auto b = wander(base);
    const long d = discrepancy(base, a, b);
    CHECK(d == discrepancy_by_search(base, a, b));
    CHECK(d == closed_form(a, b));
    const auto path = qt_geodesic(a, b);
    CHECK(static_cast<int>(path.size()) - 1 == qt_distance(a, b));
    const auto ball = build_qt_ball(a, qt_distance(a, b), Execution::Serial);
    const auto target = ball.find(b);
    REQUIRE(target.has_value());
    CHECK(ball.depth()[*target] == qt_distance(a, b));
  }
}

TEST_CASE("closed walks in QT balls have zero discrepancy") {
  Rng rng(25);
  for (int trial = 0; trial < 100; ++trial) {
    const auto base = random_point(rng, 4, 3);
    const auto ball = build_qt_ball(base, 6, Execution::Serial);
    std::size_t v = 0;
    long sum = 0;
    const int steps = 2 + static_cast<int>(rng() % 10);
    for (int i = 0; i < steps; ++i) {
      const auto& nb = ball.neighbours()[v];
      const std::size_t w = nb[rng() % nb.size()];
      sum += qt_increment(ball.vertices()[v], ball.vertices()[w]);
      v = w;
    }
    // Return along some shortest path.
    const auto back = ball.shortest_path(v, 0);
    for (std::size_t i = 0; i + 1 < back.size(); ++i) {
      sum += qt_increment(ball.vertices()[back[i]], ball.vertices()[back[i + 1]]);
    }
    CHECK(sum == 0);
  }
}

TEST_CASE("potential over a ball matches the per-vertex discrepancy") {
  const auto base = pt("01(001)");
  const auto ball = build_qt_ball(base, 6);
  const auto f = discrepancy_potential(ball, base);
  for (std::size_t v = 0; v < ball.size(); ++v) CHECK(f[v] == closed_form(base, ball.vertices()[v]));
  for (const auto& e : ball.edges()) {
    CHECK(f[e.target] - f[e.source] == qt_increment(ball.vertices()[e.source], ball.vertices()[e.target]));
  }
}

TEST_CASE("action graph examples") {
  const auto single = build_action_graph({{"id", identity_element()}}, pt("1(0)"), 3, 100);
  CHECK(single.size() == 1);
  CHECK(single.edges().size() == 1);
  CHECK(single.edge_between(0, 0) != nullptr);

  const auto gens = symmetrize({{"x0", standard_generators().x0}});
  REQUIRE(gens.size() == 2);
  CHECK(gens[1].name == "x0^-1");
  const auto g = build_action_graph(gens, pt("1(0)"), 2, 100);
  const auto target = g.find(pt("01(0)"));
  REQUIRE(target.has_value());
  const Edge* e = g.edge_between(0, *target);
  REQUIRE(e != nullptr);
  CHECK(e->label == "x0");
  CHECK_FALSE(g.truncated());

  const auto capped = build_action_graph(f_generators(), pt("1(0)"), 10, 50);
  CHECK(capped.truncated());
  CHECK(capped.size() == 50);
}

TEST_CASE("max_prefix_depth") {
  CHECK(max_prefix_depth({{"x0", standard_generators().x0}}) == 3);
  CHECK(max_prefix_depth({{"id", identity_element()}}) == 1);
  CHECK(max_prefix_depth({{"h", el("000>00;001>010;01>011;10>100;110>101;111>11")}}) == 4);
}

TEST_CASE("Schreier edges are Lipschitz into QT") {
  const auto gens = f_generators();
  const auto g = build_action_graph(gens, pt("1(0)"), 6, 100000);
  const auto prof = measure_lipschitz(g, g.base());
  CHECK(prof.max_qt_distance <= 2 * max_prefix_depth(gens));
  CHECK(prof.max_potential_jump <= prof.max_qt_distance);
  for (const auto& v : g.vertices()) CHECK(same_qt_component(g.base(), v));
}

TEST_CASE("distortion: action distance from 1^k 0^∞ to its 0-child grows") {
  const auto g = el("00>10;01>01;10>00;11>11");
  const auto h = el("000>00;001>010;01>011;10>100;110>101;111>11");
  const auto gens = symmetrize({{"g", g}, {"h", h}});
  std::vector<int> distances;
  // 1·0^∞ has a two-point orbit, so start at k = 2.
  for (std::size_t k = 2; k <= 6; ++k) {
    const auto kappa = RationalPoint::canonical(Word::repeat(1, k), Word::parse("0"));
    const auto target = kappa.prepend(Word::parse("0"));
    CHECK(qt_distance(kappa, target) == 1);
    int found = -1;
    for (int r = 1; r <= 24 && found < 0; ++r) {
      const auto ball = build_action_graph(gens, kappa, r, 2000000);
      if (auto t = ball.find(target)) found = ball.depth()[*t];
    }
    REQUIRE(found > 0);
    distances.push_back(found);
  }
  for (std::size_t i = 0; i + 1 < distances.size(); ++i) CHECK(distances[i] <= distances[i + 1]);
  CHECK(distances.back() > distances.front());
}

TEST_CASE("band components in acyclic QT balls") {
  Rng rng(26);
  const auto base = long_preperiod_point(rng, 24);
  const auto ball = build_qt_ball(base, 8);
  const auto f = discrepancy_potential(ball, base);
  for (long m = -8; m <= 8; ++m) {
    for (const auto& c : band_components(ball, f, m, 0)) CHECK(c.vertices.size() == 1);
  }
  CHECK(empirical_band_constant(ball, f, 1) == 3);
  for (long d = 0; d <= 4; ++d) {
    CHECK(empirical_band_constant(ball, f, d) <= (std::size_t{1} << (d + 1)) - 1);
  }
}

TEST_CASE("band components in the QT ball of (001)") {
  const auto base = pt("(001)");
  const auto ball = build_qt_ball(base, 10);
  for (const auto& row : band_statistics(ball, base, 4)) {
    CHECK(row.violations == 0);
    CHECK(row.max_size_with_cycle <= (std::size_t{1} << (row.d + 1)) * 3);
  }
  const auto comps = band_components(ball, base, 0, 2);
  const auto with_cycle = std::count_if(comps.begin(), comps.end(), [](const auto& c) { return c.meets_cycle; });
  CHECK(with_cycle == 1);
}

TEST_CASE("bottleneck on synthetic graphs") {
  // Binary tree of depth 4.
  std::vector<std::pair<std::size_t, std::size_t>> tree;
  for (std::size_t v = 1; v < 31; ++v) tree.push_back({(v - 1) / 2, v});
  const auto t = OrbitGraph::synthetic(31, tree);
  const auto rt = bottleneck_check(t, 1, {});
  CHECK(rt.failed == 0);
  CHECK(rt.pairs_tested == 31 * 30 / 2);
  CHECK(rt.minimal_passing_delta == 0);

  std::vector<std::pair<std::size_t, std::size_t>> ring;
  for (std::size_t v = 0; v < 12; ++v) ring.push_back({v, (v + 1) % 12});
  const auto c12 = OrbitGraph::synthetic(12, ring);
  const auto rc = bottleneck_check(c12, 1, {});
  CHECK(rc.failed > 0);
  CHECK_FALSE(rc.minimal_passing_delta.has_value());
  bool antipodal = false;
  for (const auto& f : rc.failures) antipodal = antipodal || f.distance == 6;
  CHECK(antipodal);
  // Radius 3 ball of the centre swallows a 6-arc: passes.
  CHECK(bottleneck_check(c12, 3, {}).minimal_passing_delta == 3);
}

TEST_CASE("bottleneck kernels agree") {
  const auto ball = build_qt_ball(pt("(001)"), 5);
  for (int delta = 0; delta <= 2; ++delta) {
    const auto a = bottleneck_check(ball, delta, {}, Execution::Serial);
    const auto b = bottleneck_check(ball, delta, {}, Execution::Parallel);
    CHECK(a.passed == b.passed);
    CHECK(a.failed == b.failed);
    CHECK(a.minimal_passing_delta == b.minimal_passing_delta);
  }
  PairSampling sample{false, 200, 7};
  const auto ga = build_action_graph(f_generators(), pt("1(0)"), 5, 100000);
  const auto a = bottleneck_check(ga, 1, sample, Execution::Serial);
  const auto b = bottleneck_check(ga, 1, sample, Execution::Parallel);
  CHECK(a.passed == b.passed);
  CHECK(a.failed == b.failed);
}

TEST_CASE("bottleneck on the QT ball of (001)") {
  const auto ball = build_qt_ball(pt("(001)"), 8);
  const auto r = bottleneck_check(ball, 2, {});
  REQUIRE(r.minimal_passing_delta.has_value());
  CHECK(*r.minimal_passing_delta <= 2);
  CHECK(r.failed == 0);
}

// Runs find_shortcut on every simple cycle and re-verifies each output
// against the cycle and a brute-force shortest path. Returns the number of
// cycles and of shortcuts.
static std::pair<std::size_t, std::size_t> audit_shortcuts(const std::vector<NamedElement>& gens, int radius,
                                                           std::size_t max_length) {
  const auto g = build_action_graph(gens, pt("1(0)"), radius, 200000);
  const auto cycles = simple_cycles(g, max_length);
  std::size_t emitted = 0;
  for (const auto& cycle : cycles) {
    const auto sc = find_shortcut(g, cycle, gens);
    if (!sc) continue;
    ++emitted;
    REQUIRE(sc->path.size() >= 2);
    CHECK(sc->path.front() == sc->x);
    CHECK(sc->path.back() == sc->y);
    for (std::size_t i = 0; i + 1 < sc->path.size(); ++i) {
      const bool edge = g.edge_between(sc->path[i], sc->path[i + 1]) || g.edge_between(sc->path[i + 1], sc->path[i]);
      CHECK(edge);
    }
    const std::size_t length = sc->path.size() - 1;
    CHECK(length < sc->arc_short);
    CHECK(sc->arc_short + sc->arc_long == cycle.size());
    const auto px = std::find(cycle.begin(), cycle.end(), sc->x) - cycle.begin();
    const auto py = std::find(cycle.begin(), cycle.end(), sc->y) - cycle.begin();
    const std::size_t arc = static_cast<std::size_t>(std::abs(px - py));
    CHECK(length < std::min(arc, cycle.size() - arc));
    CHECK(g.shortest_path(sc->x, sc->y).size() - 1 <= length);
  }
  return {cycles.size(), emitted};
}

TEST_CASE("shortcuts are valid and strictly shorter") {
  // The F ball is a tree apart from loops and inverse pairs.
  const auto [f_cycles, f_emitted] = audit_shortcuts(f_generators(), 10, 20);
  CHECK(f_cycles == 0);
  CHECK(f_emitted == 0);

  const auto& s = standard_generators();
  const auto v_gens = symmetrize({{"x0", s.x0}, {"x1", s.x1}, {"swap", s.swap}, {"cycle", s.cycle}});
  const auto [v_cycles, v_emitted] = audit_shortcuts(v_gens, 5, 10);
  CHECK(v_cycles > 0);
  CHECK(v_emitted > 0);
}

TEST_CASE("find_shortcut input checks") {
  const auto& s = standard_generators();
  const auto gens = symmetrize({{"x0", s.x0}, {"swap", s.swap}, {"cycle", s.cycle}});
  const auto g = build_action_graph(gens, pt("1(0)"), 4, 10000);
  const auto cycles = simple_cycles(g, 8);
  REQUIRE(!cycles.empty());
  auto broken = cycles.front();
  broken.push_back(broken.front());
  CHECK_THROWS_AS(find_shortcut(g, broken, gens), std::invalid_argument);
  auto open = cycles.front();
  std::swap(open[0], open[1]);
  if (!(g.edge_between(open.back(), open.front()) || g.edge_between(open.front(), open.back()))) {
    CHECK_THROWS_AS(find_shortcut(g, open, gens), std::invalid_argument);
  }
  for (const auto& c : cycles) {
    if (c.size() <= 4) CHECK_FALSE(find_shortcut(g, c, gens).has_value());
  }
}

TEST_CASE("simple cycle enumeration on a synthetic graph") {
  // K4 has 4 triangles and 3 four-cycles.
  std::vector<std::pair<std::size_t, std::size_t>> k4;
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = a + 1; b < 4; ++b) k4.push_back({a, b});
  }
  const auto g = OrbitGraph::synthetic(4, k4);
  CHECK(simple_cycles(g, 3).size() == 4);
  CHECK(simple_cycles(g, 4).size() == 7);
}

TEST_CASE("z2 stabilizer witnesses") {
  const auto& s = standard_generators();
  const auto d0 = deferment(s.x0, Word::parse("0"));
  const auto d1 = deferment(s.x0, Word::parse("1"));

  const auto w1 = z2_stabilizer_witness(d0, d1, pt("01(0)"), 6);
  REQUIRE(w1.has_value());
  CHECK(w1->n == 0);
  CHECK(w1->m == 1);
  CHECK(w1->n_prime == 0);
  CHECK(w1->m_prime == 0);
  CHECK(w1->element == d1);

  const auto g = compose(d0, d1);
  const auto h = compose(d0, invert(d1));
  const auto w2 = z2_stabilizer_witness(g, h, pt("01(0)"), 6);
  REQUIRE(w2.has_value());
  CHECK(w2->n + w2->m == w2->n_prime + w2->m_prime);
  CHECK(w2->nontrivial);
  CHECK(apply_point(w2->element, pt("01(0)")) == pt("01(0)"));
  // A pure power of d1.
  const long k = w2->n - w2->n_prime;
  CHECK(w2->element == power(d1, 2 * k));

  const auto w3 = z2_stabilizer_witness(identity_element(), identity_element(), pt("(01)"), 2);
  REQUIRE(w3.has_value());
  CHECK(w3->n == 1);
  CHECK(w3->m == 0);
  CHECK(w3->n_prime == 0);
  CHECK(w3->m_prime == 0);
  CHECK_FALSE(w3->nontrivial);

  CHECK_THROWS_AS(z2_stabilizer_witness(s.x0, s.x1, pt("(01)"), 3), std::invalid_argument);

  Rng rng(27);
  for (int trial = 0; trial < 50; ++trial) {
    const auto kappa = random_point(rng, 6, 4);
    const auto w = z2_stabilizer_witness(g, h, kappa, 8);
    REQUIRE(w.has_value());
    CHECK(w->nontrivial);
    CHECK(apply_point(w->element, kappa) == kappa);
  }
}

TEST_CASE("DOT and JSON exports describe the same vertices") {
  const auto ball = build_qt_ball(pt("(001)"), 3);
  const auto dot = to_dot(ball);
  const auto j = nlohmann::json::parse(to_json(ball));
  std::vector<std::string> from_dot;
  const std::regex vertex_line(R"re(^\s*v(\d+) \[label="([^"]*)"\];$)re");
  std::istringstream is(dot);
  std::string line;
  std::size_t edge_lines = 0;
  while (std::getline(is, line)) {
    std::smatch m;
    if (std::regex_match(line, m, vertex_line)) from_dot.push_back(m[2]);
    if (line.find("->") != std::string::npos) ++edge_lines;
  }
  CHECK(dot.rfind("digraph", 0) == 0);
  REQUIRE(from_dot.size() == j["vertices"].size());
  for (std::size_t i = 0; i < from_dot.size(); ++i) CHECK(from_dot[i] == j["vertices"][i]["point"]);
  CHECK(edge_lines == j["edges"].size());
  std::set<std::string> unique(from_dot.begin(), from_dot.end());
  CHECK(unique.size() == from_dot.size());
}
