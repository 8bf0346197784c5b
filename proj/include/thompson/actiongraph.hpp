#pragma once

#include "thompson/cantor.hpp"
#include "thompson/execution.hpp"
#include "thompson/sampling.hpp"
#include "thompson/velement.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace thompson {

struct NamedElement {
  std::string name;
  PrefixMap element;
};

/// Adds `name^-1` for every generator whose inverse is not already present.
std::vector<NamedElement> symmetrize(std::vector<NamedElement> gens);

struct Edge {
  std::size_t source;
  std::size_t target;
  std::string label;
};

/// A finite ball of an orbit graph (a QT component or an action graph).
/// Vertex 0 is the base; `depth` holds BFS distances from it. Balls whose
/// growth stopped at `max_vertices` are flagged `truncated`. A graph is
/// `closed` when no vertex has edges leaving it (synthetic finite graphs).
class OrbitGraph {
 public:
  OrbitGraph() = default;

  /// A finite graph given explicitly; vertex i is labelled by the point
  /// 1^i·0^∞. The result is closed with radius equal to the eccentricity
  /// of vertex 0.
  static OrbitGraph synthetic(std::size_t vertex_count,
                              const std::vector<std::pair<std::size_t, std::size_t>>& edges);

  const RationalPoint& base() const { return vertices_.front(); }
  const std::vector<RationalPoint>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& depth() const { return depth_; }
  int radius() const { return radius_; }
  bool truncated() const { return truncated_; }
  bool closed() const { return closed_; }
  std::size_t size() const { return vertices_.size(); }

  std::optional<std::size_t> find(const RationalPoint& p) const;

  /// Undirected neighbours (with multiplicity, loops included once).
  const std::vector<std::vector<std::size_t>>& neighbours() const { return neighbours_; }
  /// Number of edge endpoints at v (a loop counts twice).
  std::size_t degree(std::size_t v) const;

  /// Unweighted distances from `source`, -1 where unreachable. Vertices with
  /// `removed[v] != 0` are skipped.
  std::vector<int> distances_from(std::size_t source, const std::vector<char>* removed = nullptr) const;
  /// A shortest path from a to b (vertex list including both ends), empty if
  /// unreachable.
  std::vector<std::size_t> shortest_path(std::size_t a, std::size_t b) const;

  /// Directed edge from a to b if present.
  const Edge* edge_between(std::size_t a, std::size_t b) const;

 private:
  friend class GraphBuilder;

  void finalize();

  std::vector<RationalPoint> vertices_;
  std::unordered_map<RationalPoint, std::size_t> index_;
  std::vector<Edge> edges_;
  std::vector<int> depth_;
  std::vector<std::vector<std::size_t>> neighbours_;
  std::unordered_map<std::uint64_t, std::size_t> edge_lookup_;
  int radius_ = 0;
  bool truncated_ = false;
  bool closed_ = false;
};

// ---------------------------------------------------------------- QT graphs

/// The ball of the given radius around κ₀ in QT_{κ₀}: edges κ → 0κ and
/// κ → 1κ (labels "0", "1").
OrbitGraph build_qt_ball(const RationalPoint& base, int radius,
                         Execution exec = Execution::Parallel);

/// The cycle of QT_κ: the rotations v·u^∞ (v a suffix of the period u),
/// ordered so each vertex is the previous one with one letter prepended.
struct QTCycle {
  std::vector<RationalPoint> vertices;
  std::size_t length() const { return vertices.size(); }
};

QTCycle detect_cycle(const RationalPoint& base);

/// True when a and b lie in the same QT component (tail-equivalent).
bool same_qt_component(const RationalPoint& a, const RationalPoint& b);

/// Vertex path of a geodesic from a to b in QT, both ends included.
/// Throws std::invalid_argument for different components.
std::vector<RationalPoint> qt_geodesic(const RationalPoint& a, const RationalPoint& b);
int qt_distance(const RationalPoint& a, const RationalPoint& b);

/// Discrepancy from a to b in QT_{base}: +1 per prepended letter, −1 per
/// stripped letter, 0 along the cycle of `base`, summed along a geodesic.
long discrepancy(const RationalPoint& base, const RationalPoint& a, const RationalPoint& b);

/// Same quantity obtained by breadth-first search in explicitly built QT
/// balls around a. Slow; used to cross-check the geodesic construction.
long discrepancy_by_search(const RationalPoint& base, const RationalPoint& a,
                           const RationalPoint& b);

/// f_{base} on every vertex of a graph whose vertices lie in QT_{base}.
std::vector<long> discrepancy_potential(const OrbitGraph& graph, const RationalPoint& base);

// ---------------------------------------------------------------- action graphs

/// BFS ball of the action graph of ⟨gens⟩ on the orbit of `base`, with an
/// edge (x, x.s) labelled by s's name. Growth stops once `max_vertices`
/// vertices exist (the ball is then flagged truncated).
OrbitGraph build_action_graph(const std::vector<NamedElement>& gens, const RationalPoint& base,
                              int radius, std::size_t max_vertices,
                              Execution exec = Execution::Parallel);

/// 1 + the longest domain or range word over all generator tables.
int max_prefix_depth(const std::vector<NamedElement>& gens);

/// Largest QT distance between the ends of an edge, and largest change of
/// f_{base} across an edge.
struct LipschitzProfile {
  int max_qt_distance = 0;
  long max_potential_jump = 0;
};
LipschitzProfile measure_lipschitz(const OrbitGraph& graph, const RationalPoint& base);

// ---------------------------------------------------------------- bands

struct BandComponent {
  std::vector<std::size_t> vertices;
  bool meets_cycle = false;     ///< contains a vertex of the base's QT cycle
  bool meets_boundary = false;  ///< contains a vertex on the ball's outer sphere
};

/// Connected components of the subgraph induced on vertices with potential
/// in [m, m + d].
std::vector<BandComponent> band_components(const OrbitGraph& graph, const std::vector<long>& potential,
                                           long m, long d);
std::vector<BandComponent> band_components(const OrbitGraph& graph, const RationalPoint& base,
                                           long m, long d);

struct BandRow {
  long m = 0;
  long d = 0;
  std::size_t components = 0;
  std::size_t max_size = 0;
  std::size_t max_size_with_cycle = 0;
  std::size_t violations = 0;  ///< components above the QT bound
};

/// One row per (m, d) with d in [0, max_d] and m ranging over the potential
/// values present. Violations count components exceeding 2^{d+1}−1
/// (no cycle) or 2^{d+1}·|cycle| (cycle), the exact bounds for QT balls.
std::vector<BandRow> band_statistics(const OrbitGraph& graph, const RationalPoint& base, long max_d);

/// Largest band component over all m for the given width: the measured
/// value of the constant A_d on this ball.
std::size_t empirical_band_constant(const OrbitGraph& graph, const std::vector<long>& potential, long d);

// ---------------------------------------------------------------- shortcuts

struct Shortcut {
  std::size_t x = 0;                ///< λ_{m1}
  std::size_t y = 0;                ///< ρ_{m1}
  std::vector<std::size_t> path;    ///< x … y in the graph
  std::vector<std::string> labels;  ///< generator names, `^-1` for inverses
  long m1 = 0;
  long m2 = 0;
  Word removed_prefix;              ///< w_{m}
  Word added_prefix;                ///< u_{m}
  std::size_t arc_short = 0;        ///< shorter cycle arc between x and y
  std::size_t arc_long = 0;
  long potential_x = 0;             ///< translated f-values, minimum 0
  long potential_y = 0;
  long max_potential = 0;           ///< M_C
};

struct ShortcutOptions {
  /// Cycles with at most this many vertices yield no shortcut attempt.
  std::size_t min_cycle_length = 0;
  /// Restrict collisions to m in [M_C − 2^{2N} − 1, M_C − 1].
  bool use_theorem_window = true;
};

/// Shortcut construction for a simple closed path in an action graph:
/// translate f_{base} so the minimum on the cycle is 0, split the cycle
/// at a minimum p and a maximum q into a left and a right path, record for
/// each level m the last vertices λ_m, ρ_m at height in [1, m] and the
/// prefix pair (w_m, u_m) relating them, and replay the generator word of
/// the segment λ_{m2} → q → ρ_{m2} from λ_{m1} for a collision
/// θ(m1) = θ(m2). Every returned path is checked edge by edge and is
/// strictly shorter than both cycle arcs between its ends; nullopt when no
/// collision produces such a path. Throws std::invalid_argument when the
/// cycle is not a simple closed path of the graph.
std::optional<Shortcut> find_shortcut(const OrbitGraph& graph, const std::vector<std::size_t>& cycle,
                                      const std::vector<NamedElement>& gens,
                                      const ShortcutOptions& options = {});

/// All simple cycles with 3..max_length vertices, each reported once,
/// starting at its smallest vertex.
std::vector<std::vector<std::size_t>> simple_cycles(const OrbitGraph& graph, std::size_t max_length);

// ---------------------------------------------------------------- bottleneck

struct PairSampling {
  bool exhaustive = true;
  std::size_t count = 0;  ///< random pairs when not exhaustive
  std::uint64_t seed = 0;
};

struct BottleneckFailure {
  std::size_t x;
  std::size_t y;
  int distance;
};

struct BottleneckReport {
  int delta = 0;
  std::size_t pairs_tested = 0;
  std::size_t passed = 0;
  std::size_t failed = 0;
  /// Least Δ' ≤ delta with zero failures over its own safe pairs.
  std::optional<int> minimal_passing_delta;
  std::vector<BottleneckFailure> failures;  ///< first few failing pairs
};

/// Midpoint bottleneck test: a pair (x, y) passes when removing the ball of
/// radius Δ around a midpoint of a geodesic from x to y (either centre for
/// odd lengths) separates x from y. On balls that are not closed only pairs
/// with d(x, y) ≤ radius − 2Δ are tested.
BottleneckReport bottleneck_check(const OrbitGraph& graph, int delta, const PairSampling& pairs,
                                  Execution exec = Execution::Parallel);

// ---------------------------------------------------------------- planes

struct Z2Witness {
  long n = 0, m = 0, n_prime = 0, m_prime = 0;
  PrefixMap element;  ///< g^{n−n'} h^{m−m'}, verified to fix the point
  bool nontrivial = false;
};

/// Searches the lattice [0, bound]^2 for κ.g^n h^m = κ.g^{n'} h^{m'}.
/// Throws std::invalid_argument when g and h do not commute; nullopt when
/// no collision exists within the bound (inconclusive).
std::optional<Z2Witness> z2_stabilizer_witness(const PrefixMap& g, const PrefixMap& h,
                                               const RationalPoint& point, long bound);

// ---------------------------------------------------------------- export

std::string to_dot(const OrbitGraph& graph);
std::string to_json(const OrbitGraph& graph);
std::string band_csv(const std::vector<BandRow>& rows);
std::string bottleneck_csv(const BottleneckReport& report);

}  // namespace thompson
