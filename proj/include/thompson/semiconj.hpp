#pragma once

#include "thompson/cantor.hpp"
#include "thompson/execution.hpp"
#include "thompson/plhomeo.hpp"
#include "thompson/velement.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace thompson {

/// x0^{±1} or x1^{±1}.
struct FLetter {
  int generator = 0;
  int exponent = 1;

  friend bool operator==(const FLetter&, const FLetter&) = default;
};

/// Freely reduced word in x0, x1, read left to right (leftmost acts first).
using FWord = std::vector<FLetter>;

/// A word for an order-preserving element, obtained by rotating its domain
/// and range trees onto the right vine. Throws std::invalid_argument for an
/// element outside F.
FWord f_word(const PrefixMap& g);
/// Text such as `x0 x1^-1 x0^-1`; the empty word is `1`.
std::string format_word(const FWord& w);

/// An embedding of F into V given by the images of x0 and x1, with the
/// budgets used by the estimator.
struct Embedding {
  PrefixMap x0_image;
  PrefixMap x1_image;
  int word_length_budget = 2;
  int depth_budget = 8;

  /// x0 ↦ x0, x1 ↦ x1.
  static Embedding standard();
  /// `{"x0": "<element>", "x1": "<element>"}` with optional integer keys
  /// "word_length_budget" and "depth_budget". Throws std::invalid_argument.
  static Embedding from_json(std::string_view text);
  std::string to_json() const;

  /// Image of a word.
  PrefixMap image(const FWord& w) const;
  /// Image of a PL element of F, through its word.
  PrefixMap image(const PLMap& f) const;
};

/// Images of generators of F[a,b] and commutators [u,v] of words u, v in
/// them with |u| + |v| ≤ budget, deduplicated and without the identity.
struct SubgroupSample {
  std::vector<PrefixMap> generators;
  std::vector<PrefixMap> commutators;
  /// Union of the support cones of the commutators, for the fast path.
  std::vector<Word> support_cones;
};

/// Throws std::invalid_argument unless 0 ≤ a < b ≤ 1 are dyadic.
SubgroupSample subgroup_words(const Embedding& e, const Rational& a, const Rational& b, int budget);

/// Semidecision for κ ∈ Supp(G[a,b]′): a witness commutator that moves κ, or
/// none found within the budget.
struct SupportEvidence {
  std::optional<PrefixMap> witness;
  bool yes() const { return witness.has_value(); }
};

SupportEvidence in_support_of_commutators(const Embedding& e, const Rational& a, const Rational& b,
                                          const RationalPoint& k);
SupportEvidence in_support_of_commutators(const SubgroupSample& sample, const RationalPoint& k);

enum class BracketStatus { Interval, Infinity, Unknown };

struct PhiBracket {
  BracketStatus status = BracketStatus::Unknown;
  Rational lo;
  Rational hi;
  int depth = 0;
  /// Unknown because verified witnesses lie in disjoint windows. Data from a
  /// genuine embedding never produces this.
  bool contradictory = false;

  /// Closed containment; false unless status is Interval.
  bool contains(const Rational& x) const;
  std::string to_string() const;
  std::string to_json() const;
};

/// Brackets for the semiconjugacy of an embedding. Windows at level k are
/// (j/2^k, (j+2)/2^k); the bracket at depth d is the intersection of every
/// window of level 1..d whose sampled commutators move κ, which makes
/// brackets nested in d. Window samples are cached and shared between
/// threads.
class PhiEstimator {
 public:
  explicit PhiEstimator(Embedding e);

  const Embedding& embedding() const { return embedding_; }

  PhiBracket bracket(const RationalPoint& k, int depth, Execution exec = Execution::Parallel);
  /// Window (j/2^level, (j+2)/2^level).
  std::shared_ptr<const SubgroupSample> window(int level, long j);

 private:
  Embedding embedding_;
  std::mutex mutex_;
  std::map<std::pair<int, long>, std::shared_ptr<const SubgroupSample>> cache_;
};

PhiBracket phi_bracket(const Embedding& e, const RationalPoint& k, int depth);

struct EquivarianceViolation {
  RationalPoint point;
  PhiBracket source;  ///< bracket of κ
  PhiBracket image;   ///< bracket of κ.ι(f)
};

struct EquivarianceReport {
  std::size_t checked = 0;
  std::size_t inconclusive = 0;  ///< a non-contradictory Unknown on either side
  std::vector<EquivarianceViolation> violations;

  bool ok() const { return violations.empty(); }
  std::string to_json() const;
};

/// For each κ, the bracket of κ.ι(f) must meet f applied to the bracket of
/// κ, and Infinity must go to Infinity. A contradictory bracket on either
/// side is a violation.
EquivarianceReport verify_equivariance(PhiEstimator& estimator, const PLMap& f,
                                       std::span<const RationalPoint> samples, int depth);
EquivarianceReport verify_equivariance(const Embedding& e, const PLMap& f, std::span<const RationalPoint> samples,
                                       int depth);

}  // namespace thompson
