#include "thompson/actiongraph.hpp"

#include "json.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace thompson {

namespace {

std::uint64_t edge_key(std::size_t a, std::size_t b) {
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
}

// One move out of a point during ball growth. Only forward moves become
// edges; backward moves (QT strips) are followed for discovery alone.
struct Move {
  RationalPoint target;
  std::size_t label;
  bool forward;
};

using MoveFn = std::vector<Move> (*)(const RationalPoint&, const void*);

struct ActionContext {
  const std::vector<NamedElement>* gens;
};

std::vector<Move> action_moves(const RationalPoint& p, const void* ctx) {
  const auto& gens = *static_cast<const ActionContext*>(ctx)->gens;
  std::vector<Move> out;
  out.reserve(gens.size());
  for (std::size_t i = 0; i < gens.size(); ++i) {
    out.push_back(Move{apply_point(gens[i].element, p), i, true});
  }
  return out;
}

std::vector<Move> qt_moves(const RationalPoint& p, const void*) {
  std::vector<Move> out;
  out.push_back(Move{p.prepend(Word::parse("0")), 0, true});
  out.push_back(Move{p.prepend(Word::parse("1")), 1, true});
  out.push_back(Move{*p.strip_prefix(p.first_letters(1)), 0, false});
  return out;
}

}  // namespace

class GraphBuilder {
 public:
  GraphBuilder(std::vector<std::string> labels, int radius, std::size_t max_vertices)
      : labels_(std::move(labels)), max_vertices_(max_vertices) {
    graph_.radius_ = radius;
  }

  // Classic queue BFS; the reference implementation.
  OrbitGraph grow_serial(const RationalPoint& base, MoveFn moves, const void* ctx) {
    add_vertex(base, 0);
    for (std::size_t head = 0; head < graph_.vertices_.size(); ++head) {
      const RationalPoint here = graph_.vertices_[head];
      const int d = graph_.depth_[head];
      auto out = moves(here, ctx);
      pending_.push_back(out);
      if (d >= graph_.radius_) continue;
      for (auto& mv : out) {
        if (!graph_.index_.count(mv.target)) add_vertex(mv.target, d + 1);
      }
    }
    return finish();
  }

  // Layer-synchronous BFS: moves of a whole frontier are computed in
  // parallel, then merged in frontier order so the result matches the
  // serial builder vertex for vertex.
  OrbitGraph grow_parallel(const RationalPoint& base, MoveFn moves, const void* ctx) {
    add_vertex(base, 0);
    std::size_t begin = 0;
    while (begin < graph_.vertices_.size()) {
      const std::size_t end = graph_.vertices_.size();
      std::vector<std::vector<Move>> layer(end - begin);
      const auto n = static_cast<std::ptrdiff_t>(end - begin);
#pragma omp parallel for schedule(dynamic, 8)
      for (std::ptrdiff_t i = 0; i < n; ++i) {
        layer[static_cast<std::size_t>(i)] =
            moves(graph_.vertices_[begin + static_cast<std::size_t>(i)], ctx);
      }
      for (std::size_t i = 0; i < layer.size(); ++i) {
        const int d = graph_.depth_[begin + i];
        if (d < graph_.radius_) {
          for (auto& mv : layer[i]) {
            if (!graph_.index_.count(mv.target)) add_vertex(mv.target, d + 1);
          }
        }
        pending_.push_back(std::move(layer[i]));
      }
      begin = end;
    }
    return finish();
  }

 private:
  void add_vertex(const RationalPoint& p, int d) {
    if (graph_.vertices_.size() >= max_vertices_) {
      graph_.truncated_ = true;
      return;
    }
    graph_.index_.emplace(p, graph_.vertices_.size());
    graph_.vertices_.push_back(p);
    graph_.depth_.push_back(d);
  }

  OrbitGraph finish() {
    for (std::size_t v = 0; v < pending_.size(); ++v) {
      for (const auto& mv : pending_[v]) {
        if (!mv.forward) continue;
        auto it = graph_.index_.find(mv.target);
        if (it == graph_.index_.end()) continue;
        graph_.edges_.push_back(Edge{v, it->second, labels_[mv.label]});
      }
    }
    graph_.finalize();
    return std::move(graph_);
  }

  OrbitGraph graph_;
  std::vector<std::string> labels_;
  std::size_t max_vertices_;
  std::vector<std::vector<Move>> pending_;
};

// ---------------------------------------------------------------- OrbitGraph

void OrbitGraph::finalize() {
  neighbours_.assign(vertices_.size(), {});
  edge_lookup_.clear();
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const auto& ed = edges_[e];
    neighbours_[ed.source].push_back(ed.target);
    if (ed.source != ed.target) neighbours_[ed.target].push_back(ed.source);
    edge_lookup_.emplace(edge_key(ed.source, ed.target), e);
  }
}

OrbitGraph OrbitGraph::synthetic(std::size_t vertex_count,
                                 const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  if (vertex_count == 0) throw std::invalid_argument("synthetic graph needs a vertex");
  OrbitGraph g;
  for (std::size_t i = 0; i < vertex_count; ++i) {
    g.vertices_.push_back(RationalPoint::canonical(Word::repeat(1, i), Word::parse("0")));
    g.index_.emplace(g.vertices_.back(), i);
  }
  for (const auto& [a, b] : edges) {
    if (a >= vertex_count || b >= vertex_count) throw std::invalid_argument("edge out of range");
    g.edges_.push_back(Edge{a, b, "e"});
  }
  g.finalize();
  g.depth_ = g.distances_from(0);
  int radius = 0;
  for (int d : g.depth_) radius = std::max(radius, d);
  g.radius_ = radius;
  g.closed_ = true;
  return g;
}

std::optional<std::size_t> OrbitGraph::find(const RationalPoint& p) const {
  auto it = index_.find(p);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t OrbitGraph::degree(std::size_t v) const {
  std::size_t d = 0;
  for (const auto& e : edges_) {
    if (e.source == v) ++d;
    if (e.target == v) ++d;
  }
  return d;
}

std::vector<int> OrbitGraph::distances_from(std::size_t source, const std::vector<char>* removed) const {
  std::vector<int> dist(vertices_.size(), -1);
  if (removed && (*removed)[source]) return dist;
  std::deque<std::size_t> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop_front();
    for (std::size_t w : neighbours_[v]) {
      if (dist[w] >= 0 || (removed && (*removed)[w])) continue;
      dist[w] = dist[v] + 1;
      queue.push_back(w);
    }
  }
  return dist;
}

std::vector<std::size_t> OrbitGraph::shortest_path(std::size_t a, std::size_t b) const {
  constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> parent(vertices_.size(), none);
  std::deque<std::size_t> queue{a};
  parent[a] = a;
  while (!queue.empty() && parent[b] == none) {
    const std::size_t v = queue.front();
    queue.pop_front();
    for (std::size_t w : neighbours_[v]) {
      if (parent[w] != none) continue;
      parent[w] = v;
      queue.push_back(w);
    }
  }
  if (parent[b] == none) return {};
  std::vector<std::size_t> path{b};
  while (path.back() != a) path.push_back(parent[path.back()]);
  std::reverse(path.begin(), path.end());
  return path;
}

const Edge* OrbitGraph::edge_between(std::size_t a, std::size_t b) const {
  auto it = edge_lookup_.find(edge_key(a, b));
  if (it == edge_lookup_.end()) return nullptr;
  return &edges_[it->second];
}

// ---------------------------------------------------------------- generators

std::vector<NamedElement> symmetrize(std::vector<NamedElement> gens) {
  const std::size_t n = gens.size();
  for (std::size_t i = 0; i < n; ++i) {
    PrefixMap inv = invert(gens[i].element);
    const bool present = std::any_of(gens.begin(), gens.end(),
                                     [&](const NamedElement& g) { return g.element == inv; });
    if (!present) gens.push_back(NamedElement{gens[i].name + "^-1", std::move(inv)});
  }
  return gens;
}

int max_prefix_depth(const std::vector<NamedElement>& gens) {
  std::size_t longest = 0;
  for (const auto& g : gens) longest = std::max(longest, g.element.max_word_length());
  return static_cast<int>(longest) + 1;
}

OrbitGraph build_action_graph(const std::vector<NamedElement>& gens, const RationalPoint& base,
                              int radius, std::size_t max_vertices, Execution exec) {
  if (radius < 0) throw std::invalid_argument("radius must be non-negative");
  std::vector<std::string> labels;
  for (const auto& g : gens) labels.push_back(g.name);
  ActionContext ctx{&gens};
  GraphBuilder builder(std::move(labels), radius, std::max<std::size_t>(max_vertices, 1));
  return exec == Execution::Serial ? builder.grow_serial(base, action_moves, &ctx)
                                   : builder.grow_parallel(base, action_moves, &ctx);
}

// ---------------------------------------------------------------- QT

OrbitGraph build_qt_ball(const RationalPoint& base, int radius, Execution exec) {
  if (radius < 0) throw std::invalid_argument("radius must be non-negative");
  GraphBuilder builder({"0", "1"}, radius, std::numeric_limits<std::size_t>::max());
  return exec == Execution::Serial ? builder.grow_serial(base, qt_moves, nullptr)
                                   : builder.grow_parallel(base, qt_moves, nullptr);
}

QTCycle detect_cycle(const RationalPoint& base) {
  const Word& u = base.period();
  QTCycle cycle;
  // Start at u^∞ and prepend the last letter of the current period each step.
  RationalPoint v = RationalPoint::canonical(Word{}, u);
  for (std::size_t i = 0; i < u.size(); ++i) {
    cycle.vertices.push_back(v);
    Word letter;
    letter.push_back(v.period().back());
    v = v.prepend(letter);
  }
  return cycle;
}

bool same_qt_component(const RationalPoint& a, const RationalPoint& b) {
  const Word& u = a.period();
  const Word& v = b.period();
  if (u.size() != v.size()) return false;
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (u.rotate_left(k) == v) return true;
  }
  return false;
}

namespace {

// The strip-ancestors of both ends together with the cycle. Every QT
// geodesic between the ends stays inside this set, so BFS on it is exact.
struct LocalQT {
  std::vector<RationalPoint> vertices;
  std::unordered_map<RationalPoint, std::size_t> index;

  void add(const RationalPoint& p) {
    if (index.emplace(p, vertices.size()).second) vertices.push_back(p);
  }
  void add_ancestors(RationalPoint p) {
    while (!p.preperiod().empty()) {
      add(p);
      p = *p.strip_prefix(p.first_letters(1));
    }
  }
};

std::vector<std::size_t> local_bfs_path(const LocalQT& local, std::size_t from, std::size_t to) {
  constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
  const std::size_t n = local.vertices.size();
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t v = 0; v < n; ++v) {
    for (const char* letter : {"0", "1"}) {
      auto it = local.index.find(local.vertices[v].prepend(Word::parse(letter)));
      if (it == local.index.end()) continue;
      adj[v].push_back(it->second);
      adj[it->second].push_back(v);
    }
  }
  std::vector<std::size_t> parent(n, none);
  parent[from] = from;
  std::deque<std::size_t> queue{from};
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop_front();
    for (std::size_t w : adj[v]) {
      if (parent[w] != none) continue;
      parent[w] = v;
      queue.push_back(w);
    }
  }
  std::vector<std::size_t> path{to};
  while (path.back() != from) path.push_back(parent[path.back()]);
  std::reverse(path.begin(), path.end());
  return path;
}

// Increment of one QT edge traversed from a to b.
long step_increment(const RationalPoint& a, const RationalPoint& b) {
  if (a.preperiod().empty() && b.preperiod().empty()) return 0;
  if (b.strip_prefix(b.first_letters(1)) == a) return 1;
  return -1;
}

}  // namespace

std::vector<RationalPoint> qt_geodesic(const RationalPoint& a, const RationalPoint& b) {
  if (!same_qt_component(a, b)) throw std::invalid_argument("points lie in different QT components");
  LocalQT local;
  local.add(a);
  local.add(b);
  local.add_ancestors(a);
  local.add_ancestors(b);
  for (const auto& c : detect_cycle(a).vertices) local.add(c);
  const auto path = local_bfs_path(local, local.index.at(a), local.index.at(b));
  std::vector<RationalPoint> out;
  out.reserve(path.size());
  for (std::size_t v : path) out.push_back(local.vertices[v]);
  return out;
}

int qt_distance(const RationalPoint& a, const RationalPoint& b) {
  return static_cast<int>(qt_geodesic(a, b).size()) - 1;
}

long discrepancy(const RationalPoint& base, const RationalPoint& a, const RationalPoint& b) {
  if (!same_qt_component(base, a) || !same_qt_component(base, b)) {
    throw std::invalid_argument("points lie outside the base's QT component");
  }
  const auto path = qt_geodesic(a, b);
  long sum = 0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) sum += step_increment(path[i], path[i + 1]);
  return sum;
}

long discrepancy_by_search(const RationalPoint& base, const RationalPoint& a, const RationalPoint& b) {
  if (!same_qt_component(base, a) || !same_qt_component(base, b)) {
    throw std::invalid_argument("points lie outside the base's QT component");
  }
  constexpr int max_radius = 20;
  for (int r = 0; r <= max_radius; ++r) {
    const OrbitGraph ball = build_qt_ball(a, r, Execution::Serial);
    const auto target = ball.find(b);
    if (!target) continue;
    const auto path = ball.shortest_path(0, *target);
    long sum = 0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      sum += step_increment(ball.vertices()[path[i]], ball.vertices()[path[i + 1]]);
    }
    return sum;
  }
  throw std::invalid_argument("points too far apart for ball search");
}

std::vector<long> discrepancy_potential(const OrbitGraph& graph, const RationalPoint& base) {
  std::vector<long> f(graph.size());
  const auto n = static_cast<std::ptrdiff_t>(graph.size());
  // Exceptions may not cross the parallel region; check membership first.
  for (const auto& v : graph.vertices()) {
    if (!same_qt_component(base, v)) throw std::invalid_argument("vertex outside the base's QT component");
  }
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    f[static_cast<std::size_t>(i)] = discrepancy(base, base, graph.vertices()[static_cast<std::size_t>(i)]);
  }
  return f;
}

LipschitzProfile measure_lipschitz(const OrbitGraph& graph, const RationalPoint& base) {
  const auto f = discrepancy_potential(graph, base);
  LipschitzProfile out;
  for (const auto& e : graph.edges()) {
    out.max_qt_distance =
        std::max(out.max_qt_distance, qt_distance(graph.vertices()[e.source], graph.vertices()[e.target]));
    out.max_potential_jump = std::max(out.max_potential_jump, std::labs(f[e.source] - f[e.target]));
  }
  return out;
}

// ---------------------------------------------------------------- bands

std::vector<BandComponent> band_components(const OrbitGraph& graph, const std::vector<long>& potential,
                                           long m, long d) {
  const std::size_t n = graph.size();
  std::vector<char> seen(n, 0);
  std::vector<BandComponent> out;
  auto inside = [&](std::size_t v) { return potential[v] >= m && potential[v] <= m + d; };
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s] || !inside(s)) continue;
    BandComponent comp;
    std::vector<std::size_t> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      comp.vertices.push_back(v);
      if (graph.vertices()[v].preperiod().empty()) comp.meets_cycle = true;
      if (!graph.closed() && graph.depth()[v] >= graph.radius()) comp.meets_boundary = true;
      for (std::size_t w : graph.neighbours()[v]) {
        if (seen[w] || !inside(w)) continue;
        seen[w] = 1;
        stack.push_back(w);
      }
    }
    std::sort(comp.vertices.begin(), comp.vertices.end());
    out.push_back(std::move(comp));
  }
  return out;
}

std::vector<BandComponent> band_components(const OrbitGraph& graph, const RationalPoint& base,
                                           long m, long d) {
  return band_components(graph, discrepancy_potential(graph, base), m, d);
}

std::vector<BandRow> band_statistics(const OrbitGraph& graph, const RationalPoint& base, long max_d) {
  const auto f = discrepancy_potential(graph, base);
  const std::size_t cycle_length = detect_cycle(base).length();
  const auto [lo, hi] = std::minmax_element(f.begin(), f.end());
  std::vector<BandRow> rows;
  for (long d = 0; d <= max_d; ++d) {
    const std::size_t tree_bound = (std::size_t{1} << (d + 1)) - 1;
    const std::size_t cycle_bound = (std::size_t{1} << (d + 1)) * cycle_length;
    for (long m = *lo; m <= *hi; ++m) {
      BandRow row{m, d, 0, 0, 0, 0};
      for (const auto& c : band_components(graph, f, m, d)) {
        ++row.components;
        row.max_size = std::max(row.max_size, c.vertices.size());
        if (c.meets_cycle) row.max_size_with_cycle = std::max(row.max_size_with_cycle, c.vertices.size());
        if (c.vertices.size() > (c.meets_cycle ? cycle_bound : tree_bound)) ++row.violations;
      }
      rows.push_back(row);
    }
  }
  return rows;
}

std::size_t empirical_band_constant(const OrbitGraph& graph, const std::vector<long>& potential, long d) {
  if (potential.empty()) return 0;
  const auto [lo, hi] = std::minmax_element(potential.begin(), potential.end());
  std::size_t best = 0;
  for (long m = *lo; m <= *hi; ++m) {
    for (const auto& c : band_components(graph, potential, m, d)) best = std::max(best, c.vertices.size());
  }
  return best;
}

// ---------------------------------------------------------------- export

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::string to_dot(const OrbitGraph& graph) {
  std::ostringstream os;
  os << "digraph orbit {\n";
  for (std::size_t v = 0; v < graph.size(); ++v) {
    os << "  v" << v << " [label=\"" << dot_escape(graph.vertices()[v].to_string()) << "\"];\n";
  }
  for (const auto& e : graph.edges()) {
    os << "  v" << e.source << " -> v" << e.target << " [label=\"" << dot_escape(e.label) << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

std::string to_json(const OrbitGraph& graph) {
  nlohmann::json j;
  j["base"] = graph.base().to_string();
  j["radius"] = graph.radius();
  j["truncated"] = graph.truncated();
  j["closed"] = graph.closed();
  auto& verts = j["vertices"] = nlohmann::json::array();
  for (std::size_t v = 0; v < graph.size(); ++v) {
    verts.push_back({{"id", v}, {"point", graph.vertices()[v].to_string()}, {"depth", graph.depth()[v]}});
  }
  auto& edges = j["edges"] = nlohmann::json::array();
  for (const auto& e : graph.edges()) {
    edges.push_back({{"source", e.source}, {"target", e.target}, {"label", e.label}});
  }
  return j.dump(2);
}

std::string band_csv(const std::vector<BandRow>& rows) {
  std::ostringstream os;
  os << "m,d,components,max_size,max_size_with_cycle,violations\n";
  for (const auto& r : rows) {
    os << r.m << ',' << r.d << ',' << r.components << ',' << r.max_size << ',' << r.max_size_with_cycle
       << ',' << r.violations << '\n';
  }
  return os.str();
}

std::string bottleneck_csv(const BottleneckReport& report) {
  std::ostringstream os;
  os << "delta,pairs_tested,passed,failed,minimal_passing_delta\n";
  os << report.delta << ',' << report.pairs_tested << ',' << report.passed << ',' << report.failed << ',';
  if (report.minimal_passing_delta) os << *report.minimal_passing_delta;
  os << '\n';
  if (!report.failures.empty()) {
    os << "x,y,distance\n";
    for (const auto& f : report.failures) os << f.x << ',' << f.y << ',' << f.distance << '\n';
  }
  return os.str();
}

}  // namespace thompson
