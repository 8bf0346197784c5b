#include "thompson/actiongraph.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace thompson {

namespace {

constexpr std::size_t kMaxReportedFailures = 16;

struct Pair {
  std::size_t x;
  std::size_t y;
  int distance;
  std::size_t centre_a;
  std::size_t centre_b;
};

// BFS distances and parents from one source.
void bfs_tree(const OrbitGraph& g, std::size_t source, std::vector<int>& dist, std::vector<std::size_t>& parent) {
  dist.assign(g.size(), -1);
  parent.assign(g.size(), source);
  std::deque<std::size_t> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop_front();
    for (std::size_t w : g.neighbours()[v]) {
      if (dist[w] >= 0) continue;
      dist[w] = dist[v] + 1;
      parent[w] = v;
      queue.push_back(w);
    }
  }
}

std::size_t walk_back(const std::vector<std::size_t>& parent, std::size_t v, int steps) {
  for (int i = 0; i < steps; ++i) v = parent[v];
  return v;
}

std::vector<char> ball_mask(const OrbitGraph& g, std::size_t centre, int delta) {
  std::vector<char> mask(g.size(), 0);
  const auto dist = g.distances_from(centre);
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (dist[v] >= 0 && dist[v] <= delta) mask[v] = 1;
  }
  return mask;
}

int distance_limit(const OrbitGraph& g, int delta) {
  return g.closed() ? std::numeric_limits<int>::max() : g.radius() - 2 * delta;
}

// Safe pairs with their geodesic centres. Distances and parents come from
// one BFS per source; sources are processed in parallel.
std::vector<Pair> collect_pairs(const OrbitGraph& g, int delta, const PairSampling& sampling, bool parallel) {
  const int limit = distance_limit(g, delta);
  const std::size_t n = g.size();
  std::vector<std::vector<std::size_t>> targets(n);
  if (sampling.exhaustive) {
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = x + 1; y < n; ++y) targets[x].push_back(y);
    }
  } else if (n >= 2) {
    Rng rng(sampling.seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::size_t i = 0; i < sampling.count; ++i) {
      std::size_t x = pick(rng), y = pick(rng);
      while (y == x) y = pick(rng);
      targets[std::min(x, y)].push_back(std::max(x, y));
    }
  }
  std::vector<std::vector<Pair>> per_source(n);
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 4) if (parallel)
  for (std::ptrdiff_t xi = 0; xi < count; ++xi) {
    const auto x = static_cast<std::size_t>(xi);
    if (targets[x].empty()) continue;
    std::vector<int> dist;
    std::vector<std::size_t> parent;
    bfs_tree(g, x, dist, parent);
    for (std::size_t y : targets[x]) {
      const int d = dist[y];
      if (d < 0 || d > limit) continue;
      per_source[x].push_back(Pair{x, y, d, walk_back(parent, y, d / 2), walk_back(parent, y, (d + 1) / 2)});
    }
  }
  std::vector<Pair> pairs;
  for (auto& v : per_source) pairs.insert(pairs.end(), v.begin(), v.end());
  return pairs;
}

// Pass flags of all pairs: deleting the Δ-ball at either centre must cut x
// from y. Components of the graph minus each ball are computed once per
// centre, centres in parallel.
std::vector<char> judge_parallel(const OrbitGraph& g, const std::vector<Pair>& pairs, int delta) {
  std::unordered_map<std::size_t, std::vector<std::pair<std::size_t, int>>> by_centre;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    by_centre[pairs[i].centre_a].push_back({i, 0});
    if (pairs[i].centre_b != pairs[i].centre_a) by_centre[pairs[i].centre_b].push_back({i, 1});
  }
  std::vector<std::size_t> centres;
  for (const auto& [c, _] : by_centre) centres.push_back(c);
  std::sort(centres.begin(), centres.end());

  // One slot per (pair, centre) so no two threads write the same byte.
  std::vector<char> verdict_a(pairs.size(), 0), verdict_b(pairs.size(), 0);
  const auto count = static_cast<std::ptrdiff_t>(centres.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t ci = 0; ci < count; ++ci) {
    const std::size_t c = centres[static_cast<std::size_t>(ci)];
    const auto removed = ball_mask(g, c, delta);
    std::vector<long> comp(g.size(), -1);
    long label = 0;
    for (std::size_t s = 0; s < g.size(); ++s) {
      if (removed[s] || comp[s] >= 0) continue;
      std::vector<std::size_t> stack{s};
      comp[s] = label;
      while (!stack.empty()) {
        const std::size_t v = stack.back();
        stack.pop_back();
        for (std::size_t w : g.neighbours()[v]) {
          if (removed[w] || comp[w] >= 0) continue;
          comp[w] = label;
          stack.push_back(w);
        }
      }
      ++label;
    }
    for (const auto& [i, slot] : by_centre.at(c)) {
      const auto& p = pairs[i];
      const bool cut = removed[p.x] || removed[p.y] || comp[p.x] != comp[p.y];
      (slot == 0 ? verdict_a : verdict_b)[i] = cut ? 1 : 0;
    }
  }
  std::vector<char> pass(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) pass[i] = verdict_a[i] || verdict_b[i];
  return pass;
}

// Reference: one masked BFS per pair and centre.
std::vector<char> judge_serial(const OrbitGraph& g, const std::vector<Pair>& pairs, int delta) {
  std::vector<char> pass(pairs.size(), 0);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& p = pairs[i];
    for (std::size_t c : {p.centre_a, p.centre_b}) {
      const auto removed = ball_mask(g, c, delta);
      if (removed[p.x] || removed[p.y] || g.distances_from(p.x, &removed)[p.y] < 0) {
        pass[i] = 1;
        break;
      }
    }
  }
  return pass;
}

struct Tally {
  std::size_t tested = 0, passed = 0, failed = 0;
  std::vector<BottleneckFailure> failures;
};

Tally run(const OrbitGraph& g, int delta, const PairSampling& sampling, Execution exec) {
  const bool parallel = exec == Execution::Parallel;
  const auto pairs = collect_pairs(g, delta, sampling, parallel);
  const auto pass = parallel ? judge_parallel(g, pairs, delta) : judge_serial(g, pairs, delta);
  Tally t;
  t.tested = pairs.size();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (pass[i]) {
      ++t.passed;
    } else {
      ++t.failed;
      if (t.failures.size() < kMaxReportedFailures) {
        t.failures.push_back(BottleneckFailure{pairs[i].x, pairs[i].y, pairs[i].distance});
      }
    }
  }
  return t;
}

}  // namespace

BottleneckReport bottleneck_check(const OrbitGraph& graph, int delta, const PairSampling& pairs, Execution exec) {
  if (delta < 0) throw std::invalid_argument("delta must be non-negative");
  BottleneckReport report;
  report.delta = delta;
  for (int d = 0; d <= delta; ++d) {
    Tally t = run(graph, d, pairs, exec);
    if (t.failed == 0 && !report.minimal_passing_delta) report.minimal_passing_delta = d;
    if (d == delta) {
      report.pairs_tested = t.tested;
      report.passed = t.passed;
      report.failed = t.failed;
      report.failures = std::move(t.failures);
    }
  }
  return report;
}

// ---------------------------------------------------------------- planes

std::optional<Z2Witness> z2_stabilizer_witness(const PrefixMap& g, const PrefixMap& h, const RationalPoint& point,
                                               long bound) {
  if (compose(g, h) != compose(h, g)) throw std::invalid_argument("g and h do not commute");
  if (bound < 0) throw std::invalid_argument("bound must be non-negative");
  // Rows of the lattice: row_start[n] = κ.g^n, extended by h along each row.
  std::vector<std::vector<RationalPoint>> grid(static_cast<std::size_t>(bound) + 1);
  std::unordered_map<RationalPoint, std::pair<long, long>> seen;
  for (long s = 0; s <= 2 * bound; ++s) {
    for (long n = std::min(s, bound); n >= 0 && s - n <= bound; --n) {
      const long m = s - n;
      auto& row = grid[static_cast<std::size_t>(n)];
      if (row.empty()) {
        row.push_back(n == 0 ? point : apply_point(g, grid[static_cast<std::size_t>(n - 1)].front()));
      }
      while (static_cast<long>(row.size()) <= m) row.push_back(apply_point(h, row.back()));
      const RationalPoint& here = row[static_cast<std::size_t>(m)];
      auto [it, fresh] = seen.emplace(here, std::make_pair(n, m));
      if (fresh) continue;
      Z2Witness w;
      w.n = n;
      w.m = m;
      w.n_prime = it->second.first;
      w.m_prime = it->second.second;
      w.element = compose(power(g, w.n - w.n_prime), power(h, w.m - w.m_prime));
      if (apply_point(w.element, point) != point) continue;
      w.nontrivial = !w.element.is_identity();
      return w;
    }
  }
  return std::nullopt;
}

}  // namespace thompson
