#pragma once

#include "thompson/cantor.hpp"
#include "thompson/rational.hpp"
#include "thompson/velement.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace thompson {

/// Requested map does not exist in the group, or the parameters are not
/// supported by the construction.
struct Infeasible : std::domain_error {
  using std::domain_error::domain_error;
};

/// Orientation-preserving piecewise-linear homeomorphism of [0,1] with exact
/// rational breakpoints and slopes. Always normalized: adjacent slopes differ.
class PLMap {
 public:
  /// The identity.
  PLMap();

  /// Throws std::invalid_argument unless breakpoints are strictly increasing
  /// in (0,1), slopes are positive, there is one more slope than breakpoints
  /// and the pieces carry 1 to 1. Redundant breakpoints are dropped.
  static PLMap from_breakpoints(std::vector<Rational> breakpoints, std::vector<Rational> slopes);

  /// Through the graph points (x, y), which must include (0,0) and (1,1) and
  /// increase strictly in both coordinates.
  static PLMap from_nodes(const std::vector<std::pair<Rational, Rational>>& nodes);

  /// Text format `bp: 1/2,3/4; sl: 1/2,1,2`; the identity is `bp: ; sl: 1`.
  static PLMap parse(std::string_view text);
  std::string to_string() const;

  const std::vector<Rational>& breakpoints() const { return breakpoints_; }
  const std::vector<Rational>& slopes() const { return slopes_; }
  /// Graph points at 0, every breakpoint and 1.
  std::vector<std::pair<Rational, Rational>> nodes() const;
  bool is_identity() const { return breakpoints_.empty(); }

  friend bool operator==(const PLMap&, const PLMap&) = default;

 private:
  PLMap(std::vector<Rational> bp, std::vector<Rational> sl, std::vector<Rational> images)
      : breakpoints_(std::move(bp)), slopes_(std::move(sl)), images_(std::move(images)) {}

  friend Rational evaluate(const PLMap& f, const Rational& x);

  std::vector<Rational> breakpoints_;
  std::vector<Rational> slopes_;
  std::vector<Rational> images_;  // f at each breakpoint
};

/// Throws std::invalid_argument outside [0,1].
Rational evaluate(const PLMap& f, const Rational& x);
/// x ↦ g(f(x)).
PLMap compose(const PLMap& f, const PLMap& g);
PLMap invert(const PLMap& f);
/// f⁻¹g⁻¹fg.
PLMap commutator(const PLMap& f, const PLMap& g);

/// Bieri–Strebel parameters: slopes in the multiplicative group generated by
/// `slope_generators`, breakpoints in ℤ[1/breakpoint_denominator].
struct BSParams {
  std::vector<Rational> slope_generators;
  Integer breakpoint_denominator;

  /// Throws std::invalid_argument for a generator ≤ 1 or a denominator < 2.
  void validate() const;
};

/// F: slopes ⟨2⟩, breakpoints ℤ[1/2].
BSParams thompson_params();
/// F_n: slopes ⟨n⟩, breakpoints ℤ[1/n].
BSParams f_n_params(long n);
/// F_{2,3}: slopes ⟨2,3⟩, breakpoints ℤ[1/6].
BSParams stein_params();

/// True when every breakpoint, every breakpoint image and every slope obey
/// the parameters.
bool membership(const PLMap& f, const BSParams& p);
/// q ∈ ℤ[1/m].
bool in_ring(const Rational& q, const Integer& m);
/// q lies in the subgroup of ℚ₊^× generated by `generators`.
bool in_slope_group(const Rational& q, const std::vector<Rational>& generators);

struct GermPair {
  Rational initial_slope;
  Rational final_slope;

  friend bool operator==(const GermPair&, const GermPair&) = default;
};

GermPair germs(const PLMap& f);

/// Maximal open intervals on which f(x) ≠ x.
std::vector<std::pair<Rational, Rational>> support_intervals(const PLMap& f);

/// True iff the generated subgroup of ℚ₊^× has rank ≤ 1.
bool is_cyclic_slope_group(const BSParams& p);
/// The generator > 1 of the slope group when it is cyclic and non-trivial.
std::optional<Rational> cyclic_generator(const BSParams& p);

/// A member of F([0,1]; ℤ[1/n], ⟨n⟩) sending each x_i to y_i, built from
/// n-adic subdivisions of the gaps. Supported only for these parameter
/// families; throws Infeasible otherwise, for points outside the ring, or
/// when a gap admits no such map.
PLMap interpolate(const std::vector<std::pair<Rational, Rational>>& pairs, const BSParams& p);

/// Element of V acting like f on binary expansions. Throws
/// std::invalid_argument unless f ∈ F.
PrefixMap pl_to_v(const PLMap& f);
/// Throws std::invalid_argument unless g is order-preserving.
PLMap v_to_pl(const PrefixMap& g);

/// The binary-expansion value of a point.
inline Rational standard_phi(const RationalPoint& p) { return p.to_dyadic(); }

/// The standard x₀ and x₁ as PL maps.
PLMap standard_x0();
PLMap standard_x1();

/// A PL homeomorphism [0,1] → [a,b] with dyadic breakpoints and slopes
/// powers of 2, given by its graph nodes. Throws std::invalid_argument
/// unless a < b are dyadic in [0,1].
std::vector<std::pair<Rational, Rational>> dyadic_chart(const Rational& a, const Rational& b);

/// ψ⁻¹ f ψ for the chart ψ onto [a,b], extended by the identity: a copy of
/// f supported in [a,b].
PLMap transplant(const PLMap& f, const Rational& a, const Rational& b);

/// Generators of F[a,b]: transplants of x₀ and x₁.
std::pair<PLMap, PLMap> interval_generators(const Rational& a, const Rational& b);

}  // namespace thompson
