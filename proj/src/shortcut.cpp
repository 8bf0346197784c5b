#include "thompson/actiongraph.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace thompson {

namespace {

struct Step {
  const PrefixMap* element;
  PrefixMap inverse;
  bool use_inverse;
  std::string label;

  const PrefixMap& map() const { return use_inverse ? inverse : *element; }
};

// The generator (or inverse) carrying a to b along an edge of the graph.
Step step_between(const OrbitGraph& graph, std::size_t a, std::size_t b,
                  const std::map<std::string, const PrefixMap*>& by_name) {
  if (const Edge* e = graph.edge_between(a, b)) {
    auto it = by_name.find(e->label);
    if (it == by_name.end()) throw std::invalid_argument("edge label is not a generator: " + e->label);
    return Step{it->second, PrefixMap{}, false, e->label};
  }
  if (const Edge* e = graph.edge_between(b, a)) {
    auto it = by_name.find(e->label);
    if (it == by_name.end()) throw std::invalid_argument("edge label is not a generator: " + e->label);
    return Step{it->second, invert(*it->second), true, e->label + "^-1"};
  }
  throw std::invalid_argument("cycle vertices are not adjacent");
}

bool adjacent(const OrbitGraph& graph, std::size_t a, std::size_t b) {
  return graph.edge_between(a, b) || graph.edge_between(b, a);
}

void validate_cycle(const OrbitGraph& graph, const std::vector<std::size_t>& cycle) {
  if (cycle.empty()) throw std::invalid_argument("empty cycle");
  std::vector<std::size_t> sorted = cycle;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("cycle is not simple");
  }
  for (std::size_t v : cycle) {
    if (v >= graph.size()) throw std::invalid_argument("cycle vertex out of range");
  }
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    if (!adjacent(graph, cycle[i], cycle[(i + 1) % cycle.size()])) {
      throw std::invalid_argument("cycle is not closed");
    }
  }
}

struct Level {
  std::size_t left_pos;   // index into the left path
  std::size_t right_pos;  // index into the right path
  Word w;
  Word u;
};

}  // namespace

std::optional<Shortcut> find_shortcut(const OrbitGraph& graph, const std::vector<std::size_t>& cycle,
                                      const std::vector<NamedElement>& gens, const ShortcutOptions& options) {
  validate_cycle(graph, cycle);
  const std::size_t L = cycle.size();
  if (L <= options.min_cycle_length || L < 3) return std::nullopt;

  std::map<std::string, const PrefixMap*> by_name;
  for (const auto& g : gens) by_name.emplace(g.name, &g.element);

  std::vector<long> f(L);
  for (std::size_t i = 0; i < L; ++i) {
    f[i] = discrepancy(graph.base(), graph.base(), graph.vertices()[cycle[i]]);
  }
  const std::size_t ip = static_cast<std::size_t>(std::min_element(f.begin(), f.end()) - f.begin());
  const long low = f[ip];
  for (auto& v : f) v -= low;
  const std::size_t iq = static_cast<std::size_t>(std::max_element(f.begin(), f.end()) - f.begin());
  const long top = f[iq];
  if (top < 2) return std::nullopt;

  // Positions on the cycle along the left (increasing) and right
  // (decreasing) paths from p to q.
  const std::size_t left_len = (iq + L - ip) % L;
  const std::size_t right_len = L - left_len;
  auto left_at = [&](std::size_t t) { return (ip + t) % L; };
  auto right_at = [&](std::size_t t) { return (ip + L - t) % L; };

  auto removed_prefix = [&](std::size_t from_pos, std::size_t to_pos) {
    const Step s = step_between(graph, cycle[from_pos], cycle[to_pos], by_name);
    const auto& map = s.map();
    return map.pairs()[map.locate(graph.vertices()[cycle[from_pos]])].domain;
  };

  const int N = max_prefix_depth(gens);
  long lo_m = 1;
  if (options.use_theorem_window && 2 * N < 62) {
    lo_m = std::max(lo_m, top - (long{1} << (2 * N)) - 1);
  }

  std::map<std::pair<Word, Word>, std::vector<long>> collisions;
  std::map<long, Level> levels;
  for (long m = lo_m; m <= top - 1; ++m) {
    std::optional<std::size_t> lt, rt;
    for (std::size_t t = 0; t <= left_len; ++t) {
      const long v = f[left_at(t)];
      if (v >= 1 && v <= m) lt = t;
    }
    for (std::size_t t = 0; t <= right_len; ++t) {
      const long v = f[right_at(t)];
      if (v >= 1 && v <= m) rt = t;
    }
    if (!lt || !rt || *lt >= left_len || *rt >= right_len) continue;
    Level lv{*lt, *rt, removed_prefix(left_at(*lt), left_at(*lt + 1)),
             removed_prefix(right_at(*rt), right_at(*rt + 1))};
    collisions[{lv.w, lv.u}].push_back(m);
    levels.emplace(m, std::move(lv));
  }

  std::optional<Shortcut> best;
  for (const auto& [theta, ms] : collisions) {
    for (std::size_t a = 0; a < ms.size(); ++a) {
      for (std::size_t b = a + 1; b < ms.size(); ++b) {
        const Level& l1 = levels.at(ms[a]);
        const Level& l2 = levels.at(ms[b]);
        // Segment λ_{m2} → q along the left path, then q → ρ_{m2} back
        // along the right path.
        std::vector<std::size_t> segment;
        for (std::size_t t = l2.left_pos; t <= left_len; ++t) segment.push_back(left_at(t));
        for (std::size_t t = right_len; t-- > l2.right_pos;) segment.push_back(right_at(t));

        const std::size_t x = cycle[left_at(l1.left_pos)];
        const std::size_t y = cycle[right_at(l1.right_pos)];
        Shortcut sc;
        sc.x = x;
        sc.y = y;
        sc.path.push_back(x);
        RationalPoint here = graph.vertices()[x];
        bool ok = true;
        for (std::size_t i = 0; i + 1 < segment.size() && ok; ++i) {
          const Step s = step_between(graph, cycle[segment[i]], cycle[segment[i + 1]], by_name);
          here = apply_point(s.map(), here);
          const auto idx = graph.find(here);
          if (!idx || !adjacent(graph, sc.path.back(), *idx)) {
            ok = false;
            break;
          }
          sc.path.push_back(*idx);
          sc.labels.push_back(s.label);
        }
        if (!ok || sc.path.back() != y) continue;

        const std::size_t px = left_at(l1.left_pos);
        const std::size_t py = right_at(l1.right_pos);
        const std::size_t arc1 = (py + L - px) % L;
        const std::size_t arc2 = L - arc1;
        sc.arc_short = std::min(arc1, arc2);
        sc.arc_long = std::max(arc1, arc2);
        const std::size_t length = sc.path.size() - 1;
        if (length >= sc.arc_short) continue;

        sc.m1 = ms[a];
        sc.m2 = ms[b];
        sc.removed_prefix = theta.first;
        sc.added_prefix = theta.second;
        sc.potential_x = f[px];
        sc.potential_y = f[py];
        sc.max_potential = top;
        if (!best || sc.path.size() < best->path.size()) best = std::move(sc);
      }
    }
  }
  return best;
}

std::vector<std::vector<std::size_t>> simple_cycles(const OrbitGraph& graph, std::size_t max_length) {
  const std::size_t n = graph.size();
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t w : graph.neighbours()[v]) {
      if (w != v) adj[v].push_back(w);
    }
    std::sort(adj[v].begin(), adj[v].end());
    adj[v].erase(std::unique(adj[v].begin(), adj[v].end()), adj[v].end());
  }
  std::vector<std::vector<std::size_t>> out;
  std::vector<char> on_path(n, 0);
  std::vector<std::size_t> path;
  // Depth-first search from each start s through vertices above s; each
  // cycle is met in both directions and kept once.
  auto dfs = [&](auto&& self, std::size_t s, std::size_t v) -> void {
    for (std::size_t w : adj[v]) {
      if (w == s && path.size() >= 3 && path[1] < path.back()) out.push_back(path);
      if (w <= s || on_path[w] || path.size() >= max_length) continue;
      on_path[w] = 1;
      path.push_back(w);
      self(self, s, w);
      path.pop_back();
      on_path[w] = 0;
    }
  };
  for (std::size_t s = 0; s < n; ++s) {
    path = {s};
    on_path[s] = 1;
    dfs(dfs, s, s);
    on_path[s] = 0;
  }
  return out;
}

}  // namespace thompson
