#include "thompson/velement.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace thompson {

namespace {

Word with_letter(Word w, int letter) {
  w.push_back(letter);
  return w;
}

// Recursive completeness test on the subtree below `prefix`; `words` holds
// the candidates that extend it.
bool complete_below(std::vector<Word> words, const Word& prefix) {
  if (words.empty()) return false;
  if (std::find(words.begin(), words.end(), prefix) != words.end()) {
    return words.size() == 1;
  }
  std::vector<Word> left;
  std::vector<Word> right;
  for (auto& w : words) {
    (w[prefix.size()] == 0 ? left : right).push_back(std::move(w));
  }
  return complete_below(std::move(left), with_letter(prefix, 0)) &&
         complete_below(std::move(right), with_letter(prefix, 1));
}

void complement_below(std::vector<Word> cones, const Word& prefix, std::vector<Word>& out) {
  if (cones.empty()) {
    out.push_back(prefix);
    return;
  }
  for (const auto& c : cones) {
    if (c.size() <= prefix.size()) return;  // prefix lies inside a cone
  }
  std::vector<Word> left;
  std::vector<Word> right;
  for (auto& c : cones) (c[prefix.size()] == 0 ? left : right).push_back(std::move(c));
  complement_below(std::move(left), with_letter(prefix, 0), out);
  complement_below(std::move(right), with_letter(prefix, 1), out);
}

// Minimal antichain covering the same union of cones, siblings merged.
std::vector<Word> normalize_cones(std::vector<Word> cones) {
  std::sort(cones.begin(), cones.end());
  cones.erase(std::unique(cones.begin(), cones.end()), cones.end());
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<Word> kept;
    for (const auto& c : cones) {
      // Sorted order puts a prefix before its extensions.
      if (!kept.empty() && c.starts_with(kept.back())) continue;
      kept.push_back(c);
    }
    std::vector<Word> merged;
    for (std::size_t i = 0; i < kept.size(); ++i) {
      const Word& c = kept[i];
      if (i + 1 < kept.size() && !c.empty() && c.back() == 0 &&
          kept[i + 1].size() == c.size() && kept[i + 1].back() == 1 &&
          kept[i + 1].prefix(c.size() - 1) == c.prefix(c.size() - 1)) {
        merged.push_back(c.prefix(c.size() - 1));
        ++i;
        changed = true;
      } else {
        merged.push_back(c);
      }
    }
    std::sort(merged.begin(), merged.end());
    cones = std::move(merged);
  }
  return cones;
}

void sort_unique(std::vector<RationalPoint>& pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
}

}  // namespace

bool is_complete_prefix_code(std::span<const Word> words) {
  return complete_below(std::vector<Word>(words.begin(), words.end()), Word{});
}

std::vector<Word> complement_cones(std::span<const Word> cones) {
  std::vector<Word> out;
  complement_below(std::vector<Word>(cones.begin(), cones.end()), Word{}, out);
  return normalize_cones(std::move(out));
}

// ---------------------------------------------------------------- ClopenishSet

ClopenishSet::ClopenishSet(std::vector<Word> cones, std::vector<RationalPoint> deleted,
                           std::vector<RationalPoint> added)
    : cones_(normalize_cones(std::move(cones))) {
  for (auto& p : deleted) {
    if (in_cones(p)) deleted_.push_back(std::move(p));
  }
  for (auto& p : added) {
    if (!in_cones(p)) added_.push_back(std::move(p));
  }
  sort_unique(deleted_);
  sort_unique(added_);
}

bool ClopenishSet::in_cones(const RationalPoint& p) const {
  return std::any_of(cones_.begin(), cones_.end(), [&](const Word& c) { return p.has_prefix(c); });
}

bool ClopenishSet::contains(const RationalPoint& p) const {
  if (in_cones(p)) return !std::binary_search(deleted_.begin(), deleted_.end(), p);
  return std::binary_search(added_.begin(), added_.end(), p);
}

ClopenishSet ClopenishSet::complement() const {
  return ClopenishSet(complement_cones(cones_), added_, deleted_);
}

std::string ClopenishSet::to_string() const {
  std::ostringstream out;
  out << "cones{";
  for (std::size_t i = 0; i < cones_.size(); ++i) out << (i ? "," : "") << cones_[i].to_string();
  out << "} minus{";
  for (std::size_t i = 0; i < deleted_.size(); ++i) out << (i ? "," : "") << deleted_[i].to_string();
  out << "} plus{";
  for (std::size_t i = 0; i < added_.size(); ++i) out << (i ? "," : "") << added_[i].to_string();
  out << "}";
  return out.str();
}

// ---------------------------------------------------------------- PrefixMap

PrefixMap::PrefixMap() : PrefixMap(std::vector<PrefixPair>{PrefixPair{}}) {}

PrefixMap::PrefixMap(std::vector<PrefixPair> reduced) : pairs_(std::move(reduced)) {
  domain_index_.reserve(pairs_.size());
  for (std::size_t i = 0; i < pairs_.size(); ++i) {
    domain_index_.emplace(pairs_[i].domain, i);
    max_domain_length_ = std::max(max_domain_length_, pairs_[i].domain.size());
  }
}

PrefixMap PrefixMap::from_pairs(std::vector<PrefixPair> table) {
  std::vector<Word> domain;
  std::vector<Word> range;
  for (const auto& p : table) {
    domain.push_back(p.domain);
    range.push_back(p.range);
  }
  if (!is_complete_prefix_code(domain)) {
    throw std::invalid_argument("domain is not a complete prefix code");
  }
  if (!is_complete_prefix_code(range)) {
    throw std::invalid_argument("range is not a complete prefix code");
  }

  std::map<Word, Word> table_map;
  for (auto& p : table) table_map.emplace(std::move(p.domain), std::move(p.range));

  // Collapse sibling pairs v0>s0, v1>s1 into v>s until none remain.
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto it = table_map.begin(); it != table_map.end();) {
      const Word& d0 = it->first;
      const Word& r0 = it->second;
      if (d0.empty() || d0.back() != 0 || r0.empty() || r0.back() != 0) {
        ++it;
        continue;
      }
      Word d1 = d0;
      d1.pop_back();
      d1.push_back(1);
      auto sib = table_map.find(d1);
      if (sib == table_map.end()) {
        ++it;
        continue;
      }
      const Word& r1 = sib->second;
      if (r1.size() != r0.size() || r1.back() != 1 ||
          r1.prefix(r1.size() - 1) != r0.prefix(r0.size() - 1)) {
        ++it;
        continue;
      }
      Word parent = d0.prefix(d0.size() - 1);
      Word image = r0.prefix(r0.size() - 1);
      table_map.erase(sib);
      it = table_map.erase(it);
      table_map.emplace(std::move(parent), std::move(image));
      changed = true;
    }
  }

  std::vector<PrefixPair> reduced;
  reduced.reserve(table_map.size());
  for (auto& [d, r] : table_map) reduced.push_back(PrefixPair{d, r});
  return PrefixMap(std::move(reduced));
}

PrefixMap reduce(std::vector<PrefixPair> table) { return PrefixMap::from_pairs(std::move(table)); }

PrefixMap PrefixMap::parse(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (text == "id") return PrefixMap();
  std::vector<PrefixPair> table;
  while (true) {
    const auto semi = text.find(';');
    const std::string_view item = trim(text.substr(0, semi));
    const auto gt = item.find('>');
    if (gt == std::string_view::npos) {
      throw std::invalid_argument("element pair must look like d>r: '" + std::string(item) + "'");
    }
    table.push_back(PrefixPair{Word::parse(trim(item.substr(0, gt))),
                               Word::parse(trim(item.substr(gt + 1)))});
    if (semi == std::string_view::npos) break;
    text.remove_prefix(semi + 1);
  }
  return from_pairs(std::move(table));
}

std::string PrefixMap::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < pairs_.size(); ++i) {
    if (i) out += ';';
    out += pairs_[i].domain.to_string() + ">" + pairs_[i].range.to_string();
  }
  return out;
}

std::size_t PrefixMap::locate(const RationalPoint& p) const {
  Word prefix;
  for (std::size_t len = 0; len <= max_domain_length_; ++len) {
    if (auto it = domain_index_.find(prefix); it != domain_index_.end()) return it->second;
    prefix.push_back(p.letter(len));
  }
  throw std::logic_error("domain code does not cover point");
}

std::size_t PrefixMap::max_word_length() const {
  std::size_t n = 0;
  for (const auto& p : pairs_) n = std::max({n, p.domain.size(), p.range.size()});
  return n;
}

std::size_t PrefixMap::hash() const {
  std::size_t h = pairs_.size();
  for (const auto& p : pairs_) {
    h ^= p.domain.hash() + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= p.range.hash() + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

// ---------------------------------------------------------------- algebra

PrefixMap identity_element() { return PrefixMap(); }

PrefixMap compose(const PrefixMap& f, const PrefixMap& g) {
  std::map<Word, Word> g_table;
  for (const auto& p : g.pairs()) g_table.emplace(p.domain, p.range);

  std::vector<PrefixPair> table;
  for (const auto& [d, r] : f.pairs()) {
    // Is r inside a single g-cone?
    bool found = false;
    for (std::size_t len = 0; len <= r.size() && !found; ++len) {
      auto it = g_table.find(r.prefix(len));
      if (it != g_table.end()) {
        table.push_back(PrefixPair{d, it->second + r.suffix_from(len)});
        found = true;
      }
    }
    if (found) continue;
    // Otherwise r splits into the g-domain words extending it.
    for (auto it = g_table.lower_bound(r); it != g_table.end() && it->first.starts_with(r); ++it) {
      table.push_back(PrefixPair{d + it->first.suffix_from(r.size()), it->second});
    }
  }
  return PrefixMap::from_pairs(std::move(table));
}

PrefixMap invert(const PrefixMap& f) {
  std::vector<PrefixPair> table;
  table.reserve(f.size());
  for (const auto& p : f.pairs()) table.push_back(PrefixPair{p.range, p.domain});
  return PrefixMap::from_pairs(std::move(table));
}

PrefixMap power(const PrefixMap& f, long n) {
  PrefixMap base = n < 0 ? invert(f) : f;
  PrefixMap result;
  for (long e = n < 0 ? -n : n; e > 0; e >>= 1) {
    if (e & 1) result = compose(result, base);
    if (e > 1) base = compose(base, base);
  }
  return result;
}

PrefixMap commutator(const PrefixMap& f, const PrefixMap& g) {
  return compose(compose(invert(f), invert(g)), compose(f, g));
}

RationalPoint apply_point(const PrefixMap& f, const RationalPoint& p) {
  const auto& pair = f.pairs()[f.locate(p)];
  return p.strip_prefix(pair.domain)->prepend(pair.range);
}

std::optional<Word> apply_word(const PrefixMap& f, const Word& w) {
  for (const auto& p : f.pairs()) {
    if (w.starts_with(p.domain)) return p.range + w.suffix_from(p.domain.size());
  }
  return std::nullopt;
}

bool is_order_preserving(const PrefixMap& f) {
  const auto& pairs = f.pairs();
  for (std::size_t i = 1; i < pairs.size(); ++i) {
    if (!(pairs[i - 1].range < pairs[i].range)) return false;
  }
  return true;
}

ClopenishSet fixed_points(const PrefixMap& f) {
  std::vector<Word> cones;
  std::vector<RationalPoint> isolated;
  for (const auto& [d, r] : f.pairs()) {
    if (d == r) {
      cones.push_back(d);
    } else if (r.starts_with(d)) {
      // dξ ↦ d s ξ fixes exactly d·s^∞.
      isolated.push_back(RationalPoint::canonical(d, r.suffix_from(d.size())));
    } else if (d.starts_with(r)) {
      isolated.push_back(RationalPoint::canonical(r, d.suffix_from(r.size())));
    }
  }
  return ClopenishSet(std::move(cones), {}, std::move(isolated));
}

ClopenishSet support(const PrefixMap& f) { return fixed_points(f).complement(); }

std::optional<long> germ_at(const PrefixMap& f, const RationalPoint& p) {
  const auto& [d, r] = f.pairs()[f.locate(p)];
  if (d == r) return 0;
  if (!(p.strip_prefix(d)->prepend(r) == p)) return std::nullopt;
  const long shift = static_cast<long>(r.size()) - static_cast<long>(d.size());
  return shift / static_cast<long>(p.period().size());
}

PrefixMap deferment(const PrefixMap& f, const Word& w) {
  std::vector<PrefixPair> table;
  for (const auto& p : f.pairs()) table.push_back(PrefixPair{w + p.domain, w + p.range});
  const Word cone[] = {w};
  for (auto& c : complement_cones(cone)) table.push_back(PrefixPair{c, c});
  return PrefixMap::from_pairs(std::move(table));
}

const StandardGenerators& standard_generators() {
  static const StandardGenerators gens = [] {
    PrefixMap x0 = PrefixMap::parse("0>00;10>01;11>1");
    PrefixMap x1 = deferment(x0, Word::parse("1"));
    return StandardGenerators{std::move(x0), std::move(x1), PrefixMap::parse("0>0;10>11;11>10"),
                              PrefixMap::parse("0>11;10>0;11>10")};
  }();
  return gens;
}

}  // namespace thompson
