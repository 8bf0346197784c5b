#include "thompson/plhomeo.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace thompson {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<Rational> parse_list(std::string_view text) {
  std::vector<Rational> out;
  const std::string body = trim(text);
  if (body.empty()) return out;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_rational(trim(item)));
  return out;
}

std::string join(const std::vector<Rational>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += format_rational(xs[i]);
  }
  return out;
}

// Piecewise-linear interpolation through sorted nodes.
Rational eval_nodes(const std::vector<std::pair<Rational, Rational>>& nodes, const Rational& x) {
  auto it = std::upper_bound(nodes.begin(), nodes.end(), x,
                             [](const Rational& v, const auto& n) { return v < n.first; });
  if (it == nodes.begin() || (it == nodes.end() && x > nodes.back().first)) {
    throw std::invalid_argument("point outside the chart domain: " + format_rational(x));
  }
  if (it == nodes.end()) return nodes.back().second;
  const auto& lo = *(it - 1);
  const auto& hi = *it;
  Rational y = lo.second + (hi.second - lo.second) / (hi.first - lo.first) * (x - lo.first);
  y.canonicalize();
  return y;
}

bool is_power_of(const Integer& value, const Integer& base) {
  if (value < 1) return false;
  Integer v = value;
  while (v % base == 0) v /= base;
  return v == 1;
}

// Cuts a = c₀ < c₁ < … < c_k = b such that every [c_i, c_{i+1}] is an n-adic
// interval [j/n^e, (j+1)/n^e], each as long as possible from the left.
std::vector<Rational> nadic_cuts(const Rational& a, const Rational& b, const Integer& n) {
  std::vector<Rational> cuts{a};
  Rational x = a;
  while (x < b) {
    Rational len = 1;
    while (true) {
      const Rational scaled = x / len;
      if (scaled.get_den() == 1 && x + len <= b) break;
      len /= n;
    }
    x += len;
    x.canonicalize();
    cuts.push_back(x);
  }
  return cuts;
}

// Splits the longest piece into n equal pieces.
void split_longest(std::vector<Rational>& cuts, const Integer& n) {
  std::size_t best = 0;
  for (std::size_t i = 1; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] - cuts[i] > cuts[best + 1] - cuts[best]) best = i;
  }
  const Rational step = (cuts[best + 1] - cuts[best]) / Rational(n);
  std::vector<Rational> extra;
  for (long k = 1; Integer(k) < n; ++k) {
    Rational c = cuts[best] + step * k;
    c.canonicalize();
    extra.push_back(c);
  }
  cuts.insert(cuts.begin() + static_cast<std::ptrdiff_t>(best) + 1, extra.begin(), extra.end());
}

// Nodes of a map [a,b] → [c,d] matching n-adic decompositions piece by piece.
std::vector<std::pair<Rational, Rational>> match_nadic(const Rational& a, const Rational& b, const Rational& c,
                                                       const Rational& d, const Integer& n) {
  auto left = nadic_cuts(a, b, n);
  auto right = nadic_cuts(c, d, n);
  const Integer diff = Integer(static_cast<long>(left.size())) - Integer(static_cast<long>(right.size()));
  if (diff % (n - 1) != 0) {
    throw Infeasible("no map in the group carries [" + format_rational(a) + "," + format_rational(b) + "] to [" +
                     format_rational(c) + "," + format_rational(d) + "]");
  }
  while (left.size() < right.size()) split_longest(left, n);
  while (right.size() < left.size()) split_longest(right, n);
  std::vector<std::pair<Rational, Rational>> nodes;
  for (std::size_t i = 0; i < left.size(); ++i) nodes.emplace_back(left[i], right[i]);
  return nodes;
}

// Exponents of the primes of `primes` in q; nullopt when q has another prime.
std::optional<std::vector<Integer>> exponents(const Rational& q, const std::vector<Integer>& primes) {
  Integer num = q.get_num();
  Integer den = q.get_den();
  std::vector<Integer> e(primes.size(), 0);
  for (std::size_t i = 0; i < primes.size(); ++i) {
    while (num % primes[i] == 0) {
      num /= primes[i];
      ++e[i];
    }
    while (den % primes[i] == 0) {
      den /= primes[i];
      --e[i];
    }
  }
  if (num != 1 || den != 1) return std::nullopt;
  return e;
}

void add_prime_factors(Integer n, std::vector<Integer>& primes) {
  for (Integer d = 2; d * d <= n; ++d) {
    if (n % d != 0) continue;
    primes.push_back(d);
    while (n % d == 0) n /= d;
  }
  if (n > 1) primes.push_back(n);
}

std::vector<Integer> primes_of(const std::vector<Rational>& generators) {
  std::vector<Integer> primes;
  for (const auto& g : generators) {
    if (g <= 0) throw std::invalid_argument("slope generators must be positive");
    add_prime_factors(g.get_num(), primes);
    add_prime_factors(g.get_den(), primes);
  }
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  return primes;
}

using Row = std::vector<Integer>;

// Row echelon form over ℤ by repeated division with remainder; zero rows
// are dropped, so the result size is the lattice rank.
std::vector<Row> echelon(std::vector<Row> rows, std::size_t cols) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    while (true) {
      std::size_t best = rows.size();
      for (std::size_t i = r; i < rows.size(); ++i) {
        if (rows[i][c] != 0 && (best == rows.size() || abs(rows[i][c]) < abs(rows[best][c]))) best = i;
      }
      if (best == rows.size()) break;
      std::swap(rows[r], rows[best]);
      bool cleared = true;
      for (std::size_t i = r + 1; i < rows.size(); ++i) {
        if (rows[i][c] == 0) continue;
        const Integer q = rows[i][c] / rows[r][c];
        for (std::size_t k = 0; k < cols; ++k) rows[i][k] -= q * rows[r][k];
        if (rows[i][c] != 0) cleared = false;
      }
      if (cleared) {
        if (rows[r][c] < 0) {
          for (auto& v : rows[r]) v = -v;
        }
        ++r;
        break;
      }
    }
  }
  rows.resize(r);
  return rows;
}

bool in_lattice(const std::vector<Row>& basis, Row e) {
  for (const auto& row : basis) {
    const auto pivot = static_cast<std::size_t>(
        std::find_if(row.begin(), row.end(), [](const Integer& v) { return v != 0; }) - row.begin());
    if (e[pivot] % row[pivot] != 0) return false;
    const Integer q = e[pivot] / row[pivot];
    for (std::size_t k = 0; k < e.size(); ++k) e[k] -= q * row[k];
  }
  return std::all_of(e.begin(), e.end(), [](const Integer& v) { return v == 0; });
}

std::vector<Row> slope_lattice(const std::vector<Rational>& generators, std::vector<Integer>& primes) {
  primes = primes_of(generators);
  std::vector<Row> rows;
  for (const auto& g : generators) rows.push_back(*exponents(g, primes));
  return echelon(std::move(rows), primes.size());
}

bool is_dyadic(const Rational& q) { return is_power_of(q.get_den(), 2); }

Word dyadic_word(const Rational& left, const Rational& length) {
  const Integer depth_den = length.get_den();
  const auto bits = static_cast<long>(mpz_sizeinbase(depth_den.get_mpz_t(), 2)) - 1;
  const Rational scaled = left / length;
  const Integer k = scaled.get_num();
  Word w;
  for (long i = bits - 1; i >= 0; --i) w.push_back(mpz_tstbit(k.get_mpz_t(), static_cast<mp_bitcnt_t>(i)));
  return w;
}

void collect_pairs(const PLMap& f, const Word& w, const Rational& lo, const Rational& hi,
                   std::vector<PrefixPair>& out) {
  const auto& bp = f.breakpoints();
  const auto inside = std::upper_bound(bp.begin(), bp.end(), lo);
  const bool affine = inside == bp.end() || *inside >= hi;
  if (affine) {
    const Rational a = evaluate(f, lo);
    Rational len = evaluate(f, hi) - a;
    len.canonicalize();
    const Rational scaled = a / len;
    if (len.get_num() == 1 && is_power_of(len.get_den(), 2) && scaled.get_den() == 1) {
      out.push_back({w, dyadic_word(a, len)});
      return;
    }
  }
  Rational mid = (lo + hi) / 2;
  mid.canonicalize();
  for (int letter = 0; letter < 2; ++letter) {
    Word child = w;
    child.push_back(letter);
    collect_pairs(f, child, letter == 0 ? lo : mid, letter == 0 ? mid : hi, out);
  }
}

}  // namespace

PLMap::PLMap() : slopes_{Rational(1)} {}

PLMap PLMap::from_nodes(const std::vector<std::pair<Rational, Rational>>& nodes) {
  if (nodes.size() < 2 || nodes.front().first != 0 || nodes.front().second != 0 || nodes.back().first != 1 ||
      nodes.back().second != 1) {
    throw std::invalid_argument("nodes must run from (0,0) to (1,1)");
  }
  std::vector<Rational> bp, sl, images;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const auto& [x0, y0] = nodes[i];
    const auto& [x1, y1] = nodes[i + 1];
    if (x1 <= x0 || y1 <= y0) throw std::invalid_argument("nodes must increase strictly");
    Rational s = (y1 - y0) / (x1 - x0);
    s.canonicalize();
    if (!sl.empty() && sl.back() == s) continue;
    if (!sl.empty()) {
      bp.push_back(x0);
      images.push_back(y0);
    }
    sl.push_back(s);
  }
  return PLMap(std::move(bp), std::move(sl), std::move(images));
}

PLMap PLMap::from_breakpoints(std::vector<Rational> breakpoints, std::vector<Rational> slopes) {
  if (slopes.size() != breakpoints.size() + 1) {
    throw std::invalid_argument("need exactly one more slope than breakpoints");
  }
  std::vector<std::pair<Rational, Rational>> nodes{{0, 0}};
  Rational x = 0, y = 0;
  for (std::size_t i = 0; i < slopes.size(); ++i) {
    if (slopes[i] <= 0) throw std::invalid_argument("slopes must be positive");
    const Rational next = i < breakpoints.size() ? breakpoints[i] : Rational(1);
    if (next <= x || next > 1 || (i < breakpoints.size() && next == 1)) {
      throw std::invalid_argument("breakpoints must increase strictly inside (0,1)");
    }
    y += slopes[i] * (next - x);
    y.canonicalize();
    x = next;
    nodes.emplace_back(x, y);
  }
  if (y != 1) throw std::invalid_argument("pieces do not carry 1 to 1");
  return from_nodes(nodes);
}

PLMap PLMap::parse(std::string_view text) {
  const auto semi = text.find(';');
  if (semi == std::string_view::npos) throw std::invalid_argument("PL map needs 'bp: ...; sl: ...'");
  const std::string bp = trim(text.substr(0, semi));
  const std::string sl = trim(text.substr(semi + 1));
  if (bp.rfind("bp:", 0) != 0 || sl.rfind("sl:", 0) != 0) {
    throw std::invalid_argument("PL map needs 'bp: ...; sl: ...'");
  }
  return from_breakpoints(parse_list(std::string_view(bp).substr(3)), parse_list(std::string_view(sl).substr(3)));
}

std::string PLMap::to_string() const {
  return "bp: " + join(breakpoints_) + "; sl: " + join(slopes_);
}

std::vector<std::pair<Rational, Rational>> PLMap::nodes() const {
  std::vector<std::pair<Rational, Rational>> out{{0, 0}};
  for (std::size_t i = 0; i < breakpoints_.size(); ++i) out.emplace_back(breakpoints_[i], images_[i]);
  out.emplace_back(1, 1);
  return out;
}

Rational evaluate(const PLMap& f, const Rational& x) {
  if (x < 0 || x > 1) throw std::invalid_argument("point outside [0,1]: " + format_rational(x));
  const auto& bp = f.breakpoints_;
  const auto idx = static_cast<std::size_t>(std::upper_bound(bp.begin(), bp.end(), x) - bp.begin());
  const Rational base_x = idx == 0 ? Rational(0) : bp[idx - 1];
  const Rational base_y = idx == 0 ? Rational(0) : f.images_[idx - 1];
  Rational y = base_y + f.slopes_[idx] * (x - base_x);
  y.canonicalize();
  return y;
}

PLMap invert(const PLMap& f) {
  auto nodes = f.nodes();
  for (auto& [x, y] : nodes) std::swap(x, y);
  return PLMap::from_nodes(nodes);
}

PLMap compose(const PLMap& f, const PLMap& g) {
  std::vector<Rational> xs{0, 1};
  xs.insert(xs.end(), f.breakpoints().begin(), f.breakpoints().end());
  const PLMap f_inv = invert(f);
  for (const auto& b : g.breakpoints()) xs.push_back(evaluate(f_inv, b));
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<std::pair<Rational, Rational>> nodes;
  for (const auto& x : xs) nodes.emplace_back(x, evaluate(g, evaluate(f, x)));
  return PLMap::from_nodes(nodes);
}

PLMap commutator(const PLMap& f, const PLMap& g) {
  return compose(compose(compose(invert(f), invert(g)), f), g);
}

void BSParams::validate() const {
  for (const auto& g : slope_generators) {
    if (g <= 1) throw std::invalid_argument("slope generators must exceed 1");
  }
  if (breakpoint_denominator < 2) throw std::invalid_argument("breakpoint denominator must be at least 2");
}

BSParams thompson_params() { return f_n_params(2); }

BSParams f_n_params(long n) { return BSParams{{Rational(n)}, Integer(n)}; }

BSParams stein_params() { return BSParams{{Rational(2), Rational(3)}, Integer(6)}; }

bool in_ring(const Rational& q, const Integer& m) {
  Integer den = q.get_den();
  Integer g;
  while (true) {
    mpz_gcd(g.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t());
    if (g == 1) break;
    den /= g;
  }
  return den == 1;
}

bool in_slope_group(const Rational& q, const std::vector<Rational>& generators) {
  if (q <= 0) return false;
  std::vector<Integer> primes;
  const auto basis = slope_lattice(generators, primes);
  const auto e = exponents(q, primes);
  return e && in_lattice(basis, *e);
}

bool membership(const PLMap& f, const BSParams& p) {
  const auto& m = p.breakpoint_denominator;
  for (std::size_t i = 0; i < f.breakpoints().size(); ++i) {
    if (!in_ring(f.breakpoints()[i], m) || !in_ring(evaluate(f, f.breakpoints()[i]), m)) return false;
  }
  std::vector<Integer> primes;
  const auto basis = slope_lattice(p.slope_generators, primes);
  for (const auto& s : f.slopes()) {
    const auto e = exponents(s, primes);
    if (!e || !in_lattice(basis, *e)) return false;
  }
  return true;
}

GermPair germs(const PLMap& f) { return GermPair{f.slopes().front(), f.slopes().back()}; }

std::vector<std::pair<Rational, Rational>> support_intervals(const PLMap& f) {
  const auto nodes = f.nodes();
  std::vector<Rational> cuts;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const auto& [x, y] = nodes[i];
    cuts.push_back(x);
    const Rational s = f.slopes()[i];
    if (s == 1) continue;
    Rational cross = (y - s * x) / (1 - s);
    cross.canonicalize();
    if (cross > x && cross < nodes[i + 1].first) cuts.push_back(cross);
  }
  cuts.push_back(1);

  std::vector<std::pair<Rational, Rational>> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Rational mid = (cuts[i] + cuts[i + 1]) / 2;
    mid.canonicalize();
    if (evaluate(f, mid) == mid) continue;
    if (!out.empty() && out.back().second == cuts[i] && evaluate(f, cuts[i]) != cuts[i]) {
      out.back().second = cuts[i + 1];
    } else {
      out.emplace_back(cuts[i], cuts[i + 1]);
    }
  }
  return out;
}

bool is_cyclic_slope_group(const BSParams& p) {
  std::vector<Integer> primes;
  return slope_lattice(p.slope_generators, primes).size() <= 1;
}

std::optional<Rational> cyclic_generator(const BSParams& p) {
  std::vector<Integer> primes;
  const auto basis = slope_lattice(p.slope_generators, primes);
  if (basis.size() != 1) return std::nullopt;
  Rational g = 1;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    g *= pow(Rational(primes[i]), basis[0][i].get_si());
  }
  if (g < 1) g = 1 / g;
  g.canonicalize();
  return g;
}

PLMap interpolate(const std::vector<std::pair<Rational, Rational>>& pairs, const BSParams& p) {
  p.validate();
  const auto& gens = p.slope_generators;
  if (gens.size() != 1 || gens[0].get_den() != 1) {
    throw Infeasible("interpolation is implemented only for slopes generated by one integer n");
  }
  const Integer n = gens[0].get_num();
  const Integer& m = p.breakpoint_denominator;
  if (!in_ring(Rational(1, 1) / Rational(n), m) || !in_ring(Rational(1, 1) / Rational(m), n)) {
    throw Infeasible("interpolation needs breakpoints in Z[1/n] for slopes <n>");
  }
  std::vector<std::pair<Rational, Rational>> anchors{{0, 0}};
  for (const auto& [x, y] : pairs) {
    for (const auto& v : {x, y}) {
      if (v <= 0 || v >= 1 || !in_ring(v, m)) {
        throw Infeasible("interpolation point " + format_rational(v) + " is not in the breakpoint ring inside (0,1)");
      }
    }
    if (x <= anchors.back().first || y <= anchors.back().second) {
      throw std::invalid_argument("interpolation points must increase in both coordinates");
    }
    anchors.emplace_back(x, y);
  }
  anchors.emplace_back(1, 1);

  std::vector<std::pair<Rational, Rational>> nodes;
  for (std::size_t i = 0; i + 1 < anchors.size(); ++i) {
    auto piece = match_nadic(anchors[i].first, anchors[i + 1].first, anchors[i].second, anchors[i + 1].second, n);
    nodes.insert(nodes.end(), piece.begin() + (i == 0 ? 0 : 1), piece.end());
  }
  return PLMap::from_nodes(nodes);
}

PrefixMap pl_to_v(const PLMap& f) {
  if (!membership(f, thompson_params())) throw std::invalid_argument("PL map is not in F: " + f.to_string());
  std::vector<PrefixPair> table;
  collect_pairs(f, Word{}, 0, 1, table);
  return PrefixMap::from_pairs(std::move(table));
}

PLMap v_to_pl(const PrefixMap& g) {
  if (!is_order_preserving(g)) throw std::invalid_argument("element is not order-preserving: " + g.to_string());
  std::vector<std::pair<Rational, Rational>> nodes;
  for (const auto& [d, r] : g.pairs()) nodes.emplace_back(word_value(d), word_value(r));
  nodes.emplace_back(1, 1);
  return PLMap::from_nodes(nodes);
}

PLMap standard_x0() {
  return PLMap::from_nodes({{0, 0}, {Rational(1, 2), Rational(1, 4)}, {Rational(3, 4), Rational(1, 2)}, {1, 1}});
}

PLMap standard_x1() {
  return PLMap::from_nodes({{0, 0},
                            {Rational(1, 2), Rational(1, 2)},
                            {Rational(3, 4), Rational(5, 8)},
                            {Rational(7, 8), Rational(3, 4)},
                            {1, 1}});
}

std::vector<std::pair<Rational, Rational>> dyadic_chart(const Rational& a, const Rational& b) {
  if (!(a >= 0 && a < b && b <= 1) || !is_dyadic(a) || !is_dyadic(b)) {
    throw std::invalid_argument("chart needs dyadic 0 <= a < b <= 1");
  }
  return match_nadic(0, 1, a, b, 2);
}

PLMap transplant(const PLMap& f, const Rational& a, const Rational& b) {
  const auto chart = dyadic_chart(a, b);
  std::vector<Rational> ts{0, 1};
  ts.insert(ts.end(), f.breakpoints().begin(), f.breakpoints().end());
  const PLMap f_inv = invert(f);
  for (const auto& [t, x] : chart) {
    ts.push_back(t);
    ts.push_back(evaluate(f_inv, t));
  }
  std::map<Rational, Rational> nodes{{Rational(0), Rational(0)}, {Rational(1), Rational(1)}};
  for (const auto& t : ts) nodes[eval_nodes(chart, t)] = eval_nodes(chart, evaluate(f, t));
  return PLMap::from_nodes({nodes.begin(), nodes.end()});
}

std::pair<PLMap, PLMap> interval_generators(const Rational& a, const Rational& b) {
  return {transplant(standard_x0(), a, b), transplant(standard_x1(), a, b)};
}

}  // namespace thompson
