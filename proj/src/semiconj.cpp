#include "thompson/semiconj.hpp"

#include "json.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace thompson {

namespace {

using nlohmann::json;

std::size_t leading_ones(const Word& w) {
  std::size_t k = 0;
  while (k < w.size() && w[k] == 1) ++k;
  return k;
}

// Rotations x_n^{-1} carrying the tree with the given leaves onto the right
// vine, where x_n is x0 acting inside the cone 1^n.
std::vector<std::size_t> vine_rotations(std::vector<Word> leaves) {
  std::vector<std::size_t> moves;
  while (true) {
    std::optional<std::size_t> n;
    for (const auto& w : leaves) {
      const std::size_t k = leading_ones(w);
      if (w.size() > k + 1 && (!n || k < *n)) n = k;
    }
    if (!n) return moves;
    const Word spine = Word::repeat(1, *n);
    for (auto& w : leaves) {
      if (!w.starts_with(spine)) continue;
      const Word rest = w.suffix_from(*n);
      if (rest[0] == 1) {
        w = spine + Word::parse("11") + rest.suffix_from(1);
      } else if (rest[1] == 0) {
        w = spine + Word::parse("0") + rest.suffix_from(2);
      } else {
        w = spine + Word::parse("10") + rest.suffix_from(2);
      }
    }
    moves.push_back(*n);
  }
}

void push_reduced(FWord& w, FLetter letter) {
  if (!w.empty() && w.back().generator == letter.generator && w.back().exponent == -letter.exponent) {
    w.pop_back();
  } else {
    w.push_back(letter);
  }
}

// x_n^e = x0^{n-1} x1^e x0^{-(n-1)} for n ≥ 1.
void push_rotation(FWord& w, std::size_t n, int e) {
  if (n == 0) {
    push_reduced(w, {0, e});
    return;
  }
  for (std::size_t i = 1; i < n; ++i) push_reduced(w, {0, 1});
  push_reduced(w, {1, e});
  for (std::size_t i = 1; i < n; ++i) push_reduced(w, {0, -1});
}

std::vector<Word> domain_words(const PrefixMap& g) {
  std::vector<Word> out;
  for (const auto& pair : g.pairs()) out.push_back(pair.domain);
  return out;
}

std::vector<Word> range_words(const PrefixMap& g) {
  std::vector<Word> out;
  for (const auto& pair : g.pairs()) out.push_back(pair.range);
  return out;
}

Rational window_end(int level, long j) {
  Rational q(j, 1);
  q *= pow2(-level);
  q.canonicalize();
  return q;
}

const char* status_name(BracketStatus s) {
  switch (s) {
    case BracketStatus::Interval:
      return "interval";
    case BracketStatus::Infinity:
      return "infinity";
    case BracketStatus::Unknown:
      break;
  }
  return "unknown";
}

json bracket_json(const PhiBracket& b) {
  json out{{"status", status_name(b.status)}, {"depth", b.depth}};
  if (b.contradictory) out["contradictory"] = true;
  if (b.status == BracketStatus::Interval) {
    out["lo"] = format_rational(b.lo);
    out["hi"] = format_rational(b.hi);
  }
  return out;
}

}  // namespace

FWord f_word(const PrefixMap& g) {
  if (!is_order_preserving(g)) throw std::invalid_argument("element is not in F: " + g.to_string());
  const auto down = vine_rotations(domain_words(g));
  const auto up = vine_rotations(range_words(g));
  FWord w;
  for (std::size_t n : down) push_rotation(w, n, -1);
  for (auto it = up.rbegin(); it != up.rend(); ++it) push_rotation(w, *it, 1);
  return w;
}

std::string format_word(const FWord& w) {
  if (w.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    out += w[i].generator == 0 ? "x0" : "x1";
    if (w[i].exponent != 1) out += "^" + std::to_string(w[i].exponent);
  }
  return out;
}

Embedding Embedding::standard() {
  const auto& s = standard_generators();
  return Embedding{s.x0, s.x1};
}

Embedding Embedding::from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("embedding is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("x0") || !doc.contains("x1") || !doc["x0"].is_string() ||
      !doc["x1"].is_string()) {
    throw std::invalid_argument("embedding needs string entries \"x0\" and \"x1\"");
  }
  Embedding e{PrefixMap::parse(doc["x0"].get<std::string>()), PrefixMap::parse(doc["x1"].get<std::string>())};
  for (auto [key, field] : {std::pair{"word_length_budget", &e.word_length_budget},
                            std::pair{"depth_budget", &e.depth_budget}}) {
    if (!doc.contains(key)) continue;
    if (!doc[key].is_number_integer() || doc[key].get<int>() < 0) {
      throw std::invalid_argument(std::string("embedding key ") + key + " must be a non-negative integer");
    }
    *field = doc[key].get<int>();
  }
  return e;
}

std::string Embedding::to_json() const {
  json doc{{"x0", x0_image.to_string()},
           {"x1", x1_image.to_string()},
           {"word_length_budget", word_length_budget},
           {"depth_budget", depth_budget}};
  return doc.dump(2);
}

PrefixMap Embedding::image(const FWord& w) const {
  const PrefixMap letters[2][2] = {{invert(x0_image), x0_image}, {invert(x1_image), x1_image}};
  PrefixMap out;
  for (const auto& l : w) out = compose(out, letters[l.generator][l.exponent > 0 ? 1 : 0]);
  return out;
}

PrefixMap Embedding::image(const PLMap& f) const { return image(f_word(pl_to_v(f))); }

SubgroupSample subgroup_words(const Embedding& e, const Rational& a, const Rational& b, int budget) {
  const auto [t0, t1] = interval_generators(a, b);
  SubgroupSample sample;
  sample.generators = {e.image(t0), e.image(t1)};
  const std::vector<PrefixMap> letters{sample.generators[0], invert(sample.generators[0]), sample.generators[1],
                                       invert(sample.generators[1])};

  // balls[L]: distinct elements of reduced words of length exactly L, with
  // the last letter for reduction.
  struct Entry {
    PrefixMap element;
    std::size_t last;
  };
  std::vector<std::vector<Entry>> balls(1);
  balls[0].push_back({PrefixMap(), letters.size()});
  std::unordered_set<PrefixMap> seen{PrefixMap()};
  for (int len = 1; len < budget; ++len) {
    std::vector<Entry> next;
    for (const auto& entry : balls.back()) {
      for (std::size_t l = 0; l < letters.size(); ++l) {
        if (entry.last < letters.size() && (entry.last ^ 1u) == l) continue;
        auto g = compose(entry.element, letters[l]);
        if (seen.insert(g).second) next.push_back({std::move(g), l});
      }
    }
    balls.push_back(std::move(next));
  }

  std::unordered_set<PrefixMap> found;
  for (int lu = 1; lu < budget; ++lu) {
    for (int lv = 1; lu + lv <= budget && lv < budget; ++lv) {
      for (const auto& u : balls[static_cast<std::size_t>(lu)]) {
        for (const auto& v : balls[static_cast<std::size_t>(lv)]) {
          auto c = commutator(u.element, v.element);
          if (c.is_identity() || !found.insert(c).second) continue;
          const auto moved = support(c);
          sample.support_cones.insert(sample.support_cones.end(), moved.cones().begin(), moved.cones().end());
          sample.commutators.push_back(std::move(c));
        }
      }
    }
  }
  std::sort(sample.support_cones.begin(), sample.support_cones.end());
  sample.support_cones.erase(std::unique(sample.support_cones.begin(), sample.support_cones.end()),
                             sample.support_cones.end());
  return sample;
}

SupportEvidence in_support_of_commutators(const SubgroupSample& sample, const RationalPoint& k) {
  const bool near = std::any_of(sample.support_cones.begin(), sample.support_cones.end(),
                                [&](const Word& cone) { return k.has_prefix(cone); });
  if (!near) return {};
  for (const auto& c : sample.commutators) {
    if (apply_point(c, k) != k) return SupportEvidence{c};
  }
  return {};
}

SupportEvidence in_support_of_commutators(const Embedding& e, const Rational& a, const Rational& b,
                                          const RationalPoint& k) {
  return in_support_of_commutators(subgroup_words(e, a, b, e.word_length_budget), k);
}

bool PhiBracket::contains(const Rational& x) const {
  return status == BracketStatus::Interval && lo <= x && x <= hi;
}

std::string PhiBracket::to_string() const {
  if (status == BracketStatus::Interval) return "[" + format_rational(lo) + ", " + format_rational(hi) + "]";
  return status_name(status);
}

std::string PhiBracket::to_json() const { return bracket_json(*this).dump(2); }

PhiEstimator::PhiEstimator(Embedding e) : embedding_(std::move(e)) {}

std::shared_ptr<const SubgroupSample> PhiEstimator::window(int level, long j) {
  const std::pair<int, long> key{level, j};
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  auto sample = std::make_shared<const SubgroupSample>(
      subgroup_words(embedding_, window_end(level, j), window_end(level, j + 2), embedding_.word_length_budget));
  std::lock_guard lock(mutex_);
  return cache_.emplace(key, std::move(sample)).first->second;
}

PhiBracket PhiEstimator::bracket(const RationalPoint& k, int depth, Execution exec) {
  PhiBracket out;
  out.depth = depth;
  if (depth <= 0) return out;
  Rational lo = 0, hi = 1;
  bool any = false;
  for (int level = 1; level <= depth; ++level) {
    const long count = (1L << level) - 1;
    std::vector<char> yes(static_cast<std::size_t>(count), 0);
    if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic)
      for (long j = 0; j < count; ++j) yes[static_cast<std::size_t>(j)] = in_support_of_commutators(*window(level, j), k).yes();
    } else {
      for (long j = 0; j < count; ++j) yes[static_cast<std::size_t>(j)] = in_support_of_commutators(*window(level, j), k).yes();
    }
    for (long j = 0; j < count; ++j) {
      if (!yes[static_cast<std::size_t>(j)]) continue;
      any = true;
      lo = std::max(lo, window_end(level, j));
      hi = std::min(hi, window_end(level, j + 2));
    }
  }
  if (!any) {
    // The level-1 window is the whole group, so κ was checked against every
    // sampled commutator.
    out.status = BracketStatus::Infinity;
  } else if (lo < hi) {
    out.status = BracketStatus::Interval;
    out.lo = lo;
    out.hi = hi;
  } else {
    out.contradictory = true;
  }
  return out;
}

PhiBracket phi_bracket(const Embedding& e, const RationalPoint& k, int depth) {
  PhiEstimator estimator(e);
  return estimator.bracket(k, depth);
}

std::string EquivarianceReport::to_json() const {
  json doc{{"checked", checked}, {"inconclusive", inconclusive}, {"ok", ok()}};
  json list = json::array();
  for (const auto& v : violations) {
    list.push_back({{"point", v.point.to_string()}, {"source", bracket_json(v.source)}, {"image", bracket_json(v.image)}});
  }
  doc["violations"] = std::move(list);
  return doc.dump(2);
}

EquivarianceReport verify_equivariance(PhiEstimator& estimator, const PLMap& f,
                                       std::span<const RationalPoint> samples, int depth) {
  const PrefixMap g = estimator.embedding().image(f);
  EquivarianceReport report;
  for (const auto& k : samples) {
    const auto source = estimator.bracket(k, depth);
    const auto image = estimator.bracket(apply_point(g, k), depth);
    if (source.contradictory || image.contradictory) {
      ++report.checked;
      report.violations.push_back({k, source, image});
      continue;
    }
    if (source.status == BracketStatus::Unknown || image.status == BracketStatus::Unknown) {
      ++report.inconclusive;
      continue;
    }
    ++report.checked;
    bool consistent = source.status == image.status;
    if (consistent && source.status == BracketStatus::Interval) {
      const Rational lo = evaluate(f, source.lo);
      const Rational hi = evaluate(f, source.hi);
      consistent = std::max(lo, image.lo) <= std::min(hi, image.hi);
    }
    if (!consistent) report.violations.push_back({k, source, image});
  }
  return report;
}

EquivarianceReport verify_equivariance(const Embedding& e, const PLMap& f, std::span<const RationalPoint> samples,
                                       int depth) {
  PhiEstimator estimator(e);
  return verify_equivariance(estimator, f, samples, depth);
}

}  // namespace thompson
