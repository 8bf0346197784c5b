#include "thompson/transducer.hpp"

#include "thompson/sampling.hpp"

#include "json.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <unordered_map>

namespace thompson {

// ---------------------------------------------------------------- machine

Transducer::Transducer(std::vector<std::string> state_names, std::size_t initial,
                       std::vector<std::array<Transition, 2>> table)
    : names_(std::move(state_names)), initial_(initial), table_(std::move(table)) {
  if (table_.empty()) throw std::invalid_argument("transducer needs a state");
  if (names_.size() != table_.size()) throw std::invalid_argument("state names and table differ in size");
  if (initial_ >= table_.size()) throw std::invalid_argument("initial state out of range");
  for (const auto& row : table_) {
    for (const auto& tr : row) {
      if (tr.next >= table_.size()) throw std::invalid_argument("transition to a missing state");
    }
  }
}

std::optional<std::size_t> Transducer::find_state(std::string_view name) const {
  for (std::size_t s = 0; s < names_.size(); ++s) {
    if (names_[s] == name) return s;
  }
  return std::nullopt;
}

Transducer Transducer::from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("machine JSON: ") + e.what());
  }
  try {
    std::vector<std::string> names = j.at("states").get<std::vector<std::string>>();
    std::map<std::string, std::size_t> index;
    for (std::size_t s = 0; s < names.size(); ++s) {
      if (!index.emplace(names[s], s).second) throw std::invalid_argument("duplicate state " + names[s]);
    }
    auto lookup = [&](const std::string& name) {
      auto it = index.find(name);
      if (it == index.end()) throw std::invalid_argument("unknown state " + name);
      return it->second;
    };
    std::vector<std::array<Transition, 2>> table(names.size());
    std::vector<std::array<bool, 2>> filled(names.size(), {false, false});
    for (const auto& tr : j.at("transitions")) {
      const std::size_t s = lookup(tr.at("state").get<std::string>());
      const auto& in = tr.at("in");
      const std::string letter = in.is_string() ? in.get<std::string>() : std::to_string(in.get<int>());
      if (letter != "0" && letter != "1") throw std::invalid_argument("input letter must be 0 or 1");
      const int a = letter[0] - '0';
      if (filled[s][a]) throw std::invalid_argument("duplicate transition from " + names[s]);
      filled[s][a] = true;
      table[s][a] = Transition{Word::parse(tr.at("out").get<std::string>()), lookup(tr.at("next").get<std::string>())};
    }
    for (std::size_t s = 0; s < names.size(); ++s) {
      if (!filled[s][0] || !filled[s][1]) throw std::invalid_argument("incomplete transitions at " + names[s]);
    }
    const std::size_t initial = lookup(j.at("initial").get<std::string>());
    return Transducer(std::move(names), initial, std::move(table));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("machine JSON: ") + e.what());
  }
}

std::string Transducer::to_json() const {
  nlohmann::json j;
  j["states"] = names_;
  j["initial"] = names_[initial_];
  auto& trs = j["transitions"] = nlohmann::json::array();
  for (std::size_t s = 0; s < table_.size(); ++s) {
    for (int a = 0; a < 2; ++a) {
      trs.push_back({{"state", names_[s]},
                     {"in", std::to_string(a)},
                     {"out", table_[s][a].output.to_string()},
                     {"next", names_[table_[s][a].next]}});
    }
  }
  return j.dump(2);
}

Transducer Transducer::builtin(std::string_view name) {
  auto tr = [](const char* out, std::size_t next) { return Transition{Word::parse(out), next}; };
  if (name == "paper-h") {
    return Transducer({"q0", "q1", "q2"}, 0,
                      {{{tr("10", 0), tr("", 1)}, {tr("0", 0), tr("11", 2)}, {tr("0", 0), tr("1", 2)}}});
  }
  if (name == "identity") return Transducer({"s"}, 0, {{{tr("0", 0), tr("1", 0)}}});
  if (name == "letter-swap") return Transducer({"s"}, 0, {{{tr("1", 0), tr("0", 0)}}});
  if (name == "parity") {
    return Transducer({"even", "odd"}, 0, {{{tr("0", 1), tr("1", 1)}, {tr("0", 0), tr("1", 0)}}});
  }
  throw std::invalid_argument("unknown built-in machine: " + std::string(name));
}

std::vector<std::string> Transducer::builtin_names() { return {"paper-h", "identity", "letter-swap", "parity"}; }

// ---------------------------------------------------------------- running

Run apply_word(const Transducer& t, const Word& w, std::optional<std::size_t> start) {
  Run run{Word{}, start.value_or(t.initial())};
  if (run.final_state >= t.size()) throw std::invalid_argument("start state out of range");
  for (std::size_t i = 0; i < w.size(); ++i) {
    const auto& tr = t.transition(run.final_state, w[i]);
    run.output.append(tr.output);
    run.final_state = tr.next;
  }
  return run;
}

RationalPoint apply_point(const Transducer& t, const RationalPoint& p, std::optional<std::size_t> start) {
  Run run = apply_word(t, p.preperiod(), start);
  // State at each period boundary, with the output length reached there.
  std::unordered_map<std::size_t, std::size_t> boundary;
  while (true) {
    auto [it, fresh] = boundary.emplace(run.final_state, run.output.size());
    if (!fresh) {
      const std::size_t mark = it->second;
      if (mark == run.output.size()) throw DegenerateOutput("output stops: the image is not a point");
      return RationalPoint::canonical(run.output.prefix(mark), run.output.suffix_from(mark));
    }
    Run step = apply_word(t, p.period(), run.final_state);
    run.output.append(step.output);
    run.final_state = step.final_state;
  }
}

RationalPoint inverse_point(const Transducer& t, const RationalPoint& p) {
  // Configurations (state, tail of p still to be produced); tails are
  // indexed by how many letters of p have been emitted, folded into one
  // period.
  const std::size_t pre = p.preperiod().size();
  const std::size_t per = p.period().size();
  const std::size_t tails = pre + per;
  auto fold = [&](std::size_t i) { return i < tails ? i : pre + (i - pre) % per; };
  const std::size_t n = t.size() * tails;
  auto id = [&](std::size_t s, std::size_t i) { return s * tails + i; };

  struct Arc {
    std::size_t to;
    bool productive;
  };
  std::vector<std::array<std::optional<Arc>, 2>> arcs(n);
  for (std::size_t s = 0; s < t.size(); ++s) {
    for (std::size_t i = 0; i < tails; ++i) {
      for (int a = 0; a < 2; ++a) {
        const auto& tr = t.transition(s, a);
        bool match = true;
        for (std::size_t k = 0; k < tr.output.size() && match; ++k) match = p.letter(i + k) == tr.output[k];
        if (match) arcs[id(s, i)][a] = Arc{id(tr.next, fold(i + tr.output.size())), !tr.output.empty()};
      }
    }
  }
  // reach[u] = set of configurations reachable from u (including u).
  std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
  for (std::size_t u = 0; u < n; ++u) {
    std::vector<std::size_t> stack{u};
    reach[u][u] = 1;
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      for (const auto& arc : arcs[v]) {
        if (arc && !reach[u][arc->to]) {
          reach[u][arc->to] = 1;
          stack.push_back(arc->to);
        }
      }
    }
  }
  // A configuration is live when it reaches a productive arc lying on a
  // cycle: only then can the remaining input produce all of the tail.
  std::vector<char> on_cycle_source(n, 0);
  for (std::size_t u = 0; u < n; ++u) {
    for (const auto& arc : arcs[u]) {
      if (arc && arc->productive && reach[arc->to][u]) on_cycle_source[u] = 1;
    }
  }
  std::vector<char> live(n, 0);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n && !live[u]; ++v) live[u] = reach[u][v] && on_cycle_source[v];
  }

  std::size_t here = id(t.initial(), 0);
  if (!live[here]) throw std::domain_error("point has no preimage");
  std::unordered_map<std::size_t, std::size_t> visited;
  Word input;
  while (true) {
    auto [it, fresh] = visited.emplace(here, input.size());
    if (!fresh) return RationalPoint::canonical(input.prefix(it->second), input.suffix_from(it->second));
    std::optional<int> choice;
    for (int a = 0; a < 2; ++a) {
      const auto& arc = arcs[here][a];
      if (!arc || !live[arc->to]) continue;
      if (choice) throw std::domain_error("point has several preimages");
      choice = a;
    }
    input.push_back(*choice);
    here = arcs[here][*choice]->to;
  }
}

// ---------------------------------------------------------------- structure

std::optional<int> synchronizing_level(const Transducer& t, int max_n) {
  if (max_n < 0) throw std::invalid_argument("max_n must be non-negative");
  std::vector<std::size_t> all(t.size());
  for (std::size_t s = 0; s < t.size(); ++s) all[s] = s;
  std::set<std::vector<std::size_t>> layer{all};
  for (int n = 0; n <= max_n; ++n) {
    if (std::all_of(layer.begin(), layer.end(), [](const auto& s) { return s.size() == 1; })) return n;
    std::set<std::vector<std::size_t>> next;
    for (const auto& subset : layer) {
      for (int a = 0; a < 2; ++a) {
        std::vector<std::size_t> image;
        for (std::size_t s : subset) image.push_back(t.transition(s, a).next);
        std::sort(image.begin(), image.end());
        image.erase(std::unique(image.begin(), image.end()), image.end());
        next.insert(std::move(image));
      }
    }
    layer = std::move(next);
  }
  return std::nullopt;
}

Transducer compose(const Transducer& t1, const Transducer& t2, std::size_t max_states) {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
  std::vector<std::pair<std::size_t, std::size_t>> order;
  auto intern = [&](std::pair<std::size_t, std::size_t> key) {
    auto [it, fresh] = index.emplace(key, order.size());
    if (fresh) {
      if (order.size() >= max_states) throw BufferOverflow("composition exceeds the state bound");
      order.push_back(key);
    }
    return it->second;
  };
  intern({t1.initial(), t2.initial()});
  std::vector<std::array<Transition, 2>> table;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto [p, q] = order[i];
    std::array<Transition, 2> row;
    for (int a = 0; a < 2; ++a) {
      const auto& first = t1.transition(p, a);
      const Run second = apply_word(t2, first.output, q);
      row[a] = Transition{second.output, intern({first.next, second.final_state})};
    }
    table.push_back(std::move(row));
  }
  std::vector<std::string> names;
  for (const auto& [p, q] : order) names.push_back(t1.state_name(p) + "|" + t2.state_name(q));
  return Transducer(std::move(names), 0, std::move(table));
}

Transducer minimize(const Transducer& t) {
  // Reachable states in BFS order.
  std::vector<std::size_t> order{t.initial()};
  std::vector<long> pos(t.size(), -1);
  pos[t.initial()] = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (int a = 0; a < 2; ++a) {
      const std::size_t nx = t.transition(order[i], a).next;
      if (pos[nx] < 0) {
        pos[nx] = static_cast<long>(order.size());
        order.push_back(nx);
      }
    }
  }
  // Moore refinement on exact output labels.
  const std::size_t n = order.size();
  std::vector<std::size_t> block(n, 0);
  std::size_t blocks = 0;
  while (true) {
    std::map<std::tuple<std::size_t, std::string, std::string, std::size_t, std::size_t>, std::size_t> keys;
    std::vector<std::size_t> next_block(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& t0 = t.transition(order[i], 0);
      const auto& t1 = t.transition(order[i], 1);
      auto key = std::make_tuple(block[i], t0.output.to_string(), t1.output.to_string(),
                                 block[static_cast<std::size_t>(pos[t0.next])],
                                 block[static_cast<std::size_t>(pos[t1.next])]);
      next_block[i] = keys.emplace(std::move(key), keys.size()).first->second;
    }
    const bool stable = keys.size() == blocks;
    blocks = keys.size();
    block = std::move(next_block);
    if (stable) break;
  }
  std::vector<std::string> names(blocks);
  std::vector<std::array<Transition, 2>> table(blocks);
  std::vector<char> done(blocks, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t b = block[i];
    if (done[b]) continue;
    done[b] = 1;
    names[b] = t.state_name(order[i]);
    for (int a = 0; a < 2; ++a) {
      const auto& tr = t.transition(order[i], a);
      table[b][a] = Transition{tr.output, block[static_cast<std::size_t>(pos[tr.next])]};
    }
  }
  return Transducer(std::move(names), block[0], std::move(table));
}

bool is_identity(const Transducer& t, int depth) {
  const Transducer m = minimize(t);
  std::vector<std::optional<Word>> pending(m.size());
  bool ok = true;
  std::function<void(const Word&, const Word&, std::size_t)> visit = [&](const Word& w, const Word& out,
                                                                         std::size_t state) {
    if (!ok) return;
    if (!w.starts_with(out)) {
      ok = false;
      return;
    }
    Word rest = w.suffix_from(out.size());
    if (pending[state] && *pending[state] != rest) {
      ok = false;
      return;
    }
    pending[state] = std::move(rest);
    if (static_cast<int>(w.size()) >= depth) return;
    for (int a = 0; a < 2; ++a) {
      Word w2 = w;
      w2.push_back(a);
      const auto& tr = m.transition(state, a);
      visit(w2, out + tr.output, tr.next);
    }
  };
  visit(Word{}, Word{}, m.initial());
  return ok;
}

bool is_identity_exact(const Transducer& t) {
  std::vector<std::optional<Word>> pending(t.size());
  pending[t.initial()] = Word{};
  std::deque<std::size_t> queue{t.initial()};
  while (!queue.empty()) {
    const std::size_t s = queue.front();
    queue.pop_front();
    for (int a = 0; a < 2; ++a) {
      Word held = *pending[s];
      held.push_back(a);
      const auto& tr = t.transition(s, a);
      if (!held.starts_with(tr.output)) return false;
      Word rest = held.suffix_from(tr.output.size());
      if (pending[tr.next]) {
        if (*pending[tr.next] != rest) return false;
      } else {
        pending[tr.next] = std::move(rest);
        queue.push_back(tr.next);
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------- conjugation

namespace {

struct Piece {
  Word input;
  Word output;
  std::size_t state;
};

Piece extend(const Transducer& t, const Piece& p, int letter) {
  Piece q = p;
  q.input.push_back(letter);
  const auto& tr = t.transition(p.state, letter);
  q.output.append(tr.output);
  q.state = tr.next;
  return q;
}

class Conjugator {
 public:
  Conjugator(const Transducer& t, const PrefixMap& g, int depth_bound, int sync)
      : t_(t), g_(g), depth_bound_(depth_bound), sync_(static_cast<std::size_t>(sync)) {
    input_bound_ = 4 * static_cast<std::size_t>(depth_bound) + g.max_word_length() + sync_ + 16;
  }

  std::vector<PrefixPair> solve() {
    std::vector<PrefixPair> leaves;
    split(Word{}, leaves);
    return leaves;
  }

 private:
  // Input cones whose images lie in c·𝔠 and together cover its preimage.
  std::vector<Piece> preimage(const Word& c) const {
    std::vector<Piece> out;
    std::vector<Piece> stack{Piece{Word{}, Word{}, t_.initial()}};
    while (!stack.empty()) {
      Piece p = std::move(stack.back());
      stack.pop_back();
      if (p.output.starts_with(c)) {
        out.push_back(std::move(p));
      } else if (c.starts_with(p.output)) {
        if (p.input.size() >= input_bound_) throw DepthExceeded("preimage search exceeded its depth");
        stack.push_back(extend(t_, p, 1));
        stack.push_back(extend(t_, p, 0));
      }
    }
    return out;
  }

  // Splits a piece until it lies inside one domain cone d of g with at
  // least `sync_` letters after d.
  void refine(const Piece& p, std::vector<std::pair<Piece, std::size_t>>& out) const {
    for (std::size_t k = 0; k < g_.size(); ++k) {
      const Word& d = g_.pairs()[k].domain;
      if (p.input.starts_with(d) && p.input.size() >= d.size() + sync_) {
        out.push_back({p, k});
        return;
      }
    }
    if (p.input.size() >= input_bound_) throw DepthExceeded("piece refinement exceeded its depth");
    refine(extend(t_, p, 0), out);
    refine(extend(t_, p, 1), out);
  }

  // The replacement c ↦ c' if one works on every piece.
  std::optional<Word> replacement(const Word& c) const {
    std::vector<std::pair<Piece, std::size_t>> pieces;
    for (const auto& p : preimage(c)) refine(p, pieces);
    std::optional<Word> common;
    for (const auto& [p, k] : pieces) {
      const auto& pair = g_.pairs()[k];
      const Word tail = p.input.suffix_from(pair.domain.size());
      const Run image = apply_word(t_, pair.range + tail);
      if (image.final_state != p.state) return std::nullopt;
      const Word e = p.output.suffix_from(c.size());
      if (image.output.size() < e.size() || image.output.suffix_from(image.output.size() - e.size()) != e) {
        return std::nullopt;
      }
      Word candidate = image.output.prefix(image.output.size() - e.size());
      if (common && *common != candidate) return std::nullopt;
      common = std::move(candidate);
    }
    return common;
  }

  void split(const Word& c, std::vector<PrefixPair>& leaves) const {
    if (static_cast<int>(c.size()) > depth_bound_) throw DepthExceeded("conjugate needs deeper cones");
    if (auto r = replacement(c)) {
      leaves.push_back(PrefixPair{c, *r});
      return;
    }
    Word c0 = c, c1 = c;
    c0.push_back(0);
    c1.push_back(1);
    split(c0, leaves);
    split(c1, leaves);
  }

  const Transducer& t_;
  const PrefixMap& g_;
  int depth_bound_;
  std::size_t sync_;
  std::size_t input_bound_;
};

}  // namespace

PrefixMap conjugate_v_element(const Transducer& t, const PrefixMap& g, int depth_bound, std::size_t samples,
                              std::uint64_t seed) {
  const auto sync = synchronizing_level(t, std::max(depth_bound, 0));
  if (!sync) throw DepthExceeded("machine does not synchronize within the depth bound");
  std::vector<PrefixPair> leaves = Conjugator(t, g, depth_bound, *sync).solve();
  PrefixMap result;
  try {
    result = PrefixMap::from_pairs(std::move(leaves));
  } catch (const std::invalid_argument& e) {
    throw std::logic_error(std::string("conjugate is not a prefix replacement: ") + e.what());
  }
  Rng rng(seed);
  for (std::size_t i = 0; i < samples; ++i) {
    const RationalPoint p = random_point(rng, 8, 4);
    if (apply_point(t, apply_point(g, p)) != apply_point(result, apply_point(t, p))) {
      throw std::logic_error("conjugate failed verification at " + p.to_string());
    }
  }
  return result;
}

}  // namespace thompson
