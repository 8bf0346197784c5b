#pragma once

#include "thompson/cantor.hpp"
#include "thompson/velement.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace thompson {

/// The run of a machine stops emitting letters forever.
struct DegenerateOutput : std::domain_error {
  using std::domain_error::domain_error;
};

/// A product construction grew beyond its configured state bound.
struct BufferOverflow : std::domain_error {
  using std::domain_error::domain_error;
};

/// A bounded search ran out of depth; the result is inconclusive.
struct DepthExceeded : std::domain_error {
  using std::domain_error::domain_error;
};

struct Transition {
  Word output;  ///< possibly empty
  std::size_t next = 0;

  friend bool operator==(const Transition&, const Transition&) = default;
};

/// Deterministic, complete, asynchronous transducer over {0,1}.
class Transducer {
 public:
  /// Throws std::invalid_argument on an empty machine, a bad initial state
  /// or a transition to a missing state.
  Transducer(std::vector<std::string> state_names, std::size_t initial,
             std::vector<std::array<Transition, 2>> table);

  /// JSON machine format: {"states": [...], "initial": name,
  /// "transitions": [{"state", "in", "out", "next"}, ...]}.
  static Transducer from_json(std::string_view text);
  std::string to_json() const;

  /// Built-in machines: "paper-h", "identity", "letter-swap", "parity".
  static Transducer builtin(std::string_view name);
  static std::vector<std::string> builtin_names();

  std::size_t size() const { return table_.size(); }
  std::size_t initial() const { return initial_; }
  const std::string& state_name(std::size_t s) const { return names_[s]; }
  std::optional<std::size_t> find_state(std::string_view name) const;
  const Transition& transition(std::size_t state, int letter) const { return table_[state][letter]; }

  /// Same states, transitions and initial state up to state names.
  friend bool operator==(const Transducer& a, const Transducer& b) {
    return a.initial_ == b.initial_ && a.table_ == b.table_;
  }

 private:
  std::vector<std::string> names_;
  std::size_t initial_;
  std::vector<std::array<Transition, 2>> table_;
};

struct Run {
  Word output;
  std::size_t final_state = 0;
};

Run apply_word(const Transducer& t, const Word& w, std::optional<std::size_t> start = std::nullopt);

/// Image of a rational point. Throws DegenerateOutput when the output is
/// finite.
RationalPoint apply_point(const Transducer& t, const RationalPoint& p,
                          std::optional<std::size_t> start = std::nullopt);

/// The unique point whose image is p. Throws std::domain_error when p has
/// no preimage or several.
RationalPoint inverse_point(const Transducer& t, const RationalPoint& p);

/// Least n ≤ max_n such that every word of length n drives all states to a
/// common state.
std::optional<int> synchronizing_level(const Transducer& t, int max_n);

/// t1 first, then t2. States are reachable pairs; BufferOverflow when their
/// number exceeds max_states.
Transducer compose(const Transducer& t1, const Transducer& t2, std::size_t max_states = 1u << 16);

/// Reachable part with states merged when their transitions agree letter
/// for letter (outputs compared exactly).
Transducer minimize(const Transducer& t);

/// Checks on all words of length ≤ depth (after minimization) that the
/// output is a prefix of the input and that the unread remainder depends
/// only on the state reached.
bool is_identity(const Transducer& t, int depth);

/// Exact test: assigns each reachable state the remainder it must hold and
/// checks every transition against it.
bool is_identity_exact(const Transducer& t);

/// g^T = T⁻¹ g T as a prefix map, found by splitting output cones until the
/// conjugated action is one prefix replacement on each. Throws
/// DepthExceeded when output cones longer than depth_bound would be
/// needed. The result is checked against the equivariance identity on
/// `samples` random points drawn from `seed`; a mismatch throws
/// std::logic_error.
PrefixMap conjugate_v_element(const Transducer& t, const PrefixMap& g, int depth_bound,
                              std::size_t samples = 64, std::uint64_t seed = 0);

}  // namespace thompson
