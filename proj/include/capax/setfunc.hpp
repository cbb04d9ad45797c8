#ifndef CAPAX_SETFUNC_HPP
#define CAPAX_SETFUNC_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "capax/event.hpp"

namespace capax {

/// Entries with |value| at or below this are dropped from sparse storage.
inline constexpr double kZeroTol = 1e-12;
/// Tolerance for all numeric comparisons, statuses and report thresholds.
inline constexpr double kCompareTol = 1e-9;
/// Dense event-lattice transforms refuse scopes with more configurations
/// than this (the lattice has 2^n events).
inline constexpr std::uint64_t kDenseConfigLimit = 20;

/// What a set function's values mean.  lower/upper are set probabilities,
/// mobius is a (possibly signed) mass assignment, commonality is the
/// alternating transform of an upper probability, potential is a junction
/// tree factor (mass-flavored or commonality-flavored depending on the tree
/// it lives in).
enum class Role { lower, upper, mobius, commonality, potential };

std::string role_name(Role r);

/// A sparse real-valued function on the event lattice of one scope.
/// Absent events read as 0, except that a commonality-role function reads 1
/// at the empty event unless an explicit entry overrides it.
class SetFunction {
public:
  SetFunction(Scope scope, Role role, std::uint64_t configs);
  static SetFunction constant_one(Scope scope, Role role, std::uint64_t configs);

  const Scope& scope() const { return scope_; }
  Role role() const { return role_; }
  /// Number of configurations of the scope (universe of event ConfigSets).
  std::uint64_t configs() const { return n_; }

  double value_at(const ConfigSet& event) const;
  /// Inserts or overwrites; near-zero values are erased from storage except
  /// for an explicit empty-event entry on a commonality-role function (a
  /// stored 0 there must not fall back to the implicit 1).
  void set(const ConfigSet& event, double value);

  const std::map<ConfigSet, double>& entries() const { return entries_; }
  std::size_t entry_count() const { return entries_.size(); }
  /// Sum of all stored values (total mass for mobius-role functions).
  double total() const;

  SetFunction with_role(Role role) const;

  bool operator==(const SetFunction& other) const;

private:
  Scope scope_;
  Role role_;
  std::uint64_t n_ = 1;
  std::map<ConfigSet, double> entries_;
};

// ---------------------------------------------------------------------------
// Transforms on the full event lattice (dense under the hood, guarded by
// kDenseConfigLimit; outputs are zero-dropped sparse functions).

/// m(A) = Σ_{B ⊆ A} (-1)^{|A\B|} P(B).
SetFunction mobius_transform(const SetFunction& lower);
/// P(A) = Σ_{B ⊆ A} m(B).
SetFunction inverse_mobius(const SetFunction& mass);
/// P̄(A) = 1 - P(Ā) (and back; lower <-> upper).
SetFunction dual_function(const SetFunction& p);
/// Q(A) = -Σ_{B ⊆ A} (-1)^{|B|} P̄(B) for A ≠ ∅, Q(∅) = 1.
SetFunction commonality_transform(const SetFunction& upper);
/// P̄(A) = 1 - Σ_{B ⊆ A} (-1)^{|B|} Q(B).
SetFunction inverse_commonality(const SetFunction& commonality);

// ---------------------------------------------------------------------------
// Sparse point evaluation (no size guard; cost is linear in stored entries).

/// Σ_{B ⊆ A} m(B): the lower probability of A under mass function m.
double lower_value(const SetFunction& mass, const ConfigSet& a);
/// 1 - Σ_{B ⊆ A} (-1)^{|B|} Q(B): the upper probability of A under Q.
double upper_value(const SetFunction& commonality, const ConfigSet& a);

// ---------------------------------------------------------------------------
// Localization (marginalization) onto a subscope.

/// Mass localization: result(A) = Σ_{B : B_sub = A} m(B).
SetFunction localize_mass(const Space& space, const SetFunction& mass, const Scope& sub);
/// Commonality localization:
/// result(A) = (-1)^{|A|} Σ_{B : B_sub = A} (-1)^{|B|} Q(B).
/// Only stored entries contribute (absent events are 0); result(∅) = Q(∅).
SetFunction localize_commonality(const Space& space, const SetFunction& commonality,
                                 const Scope& sub);

/// Zeroes every entry whose event is not contained in the evidence cylinder
/// extend(evidence, f.scope).  Requires evidence.scope ⊆ f.scope.
SetFunction restrict_to_evidence(const Space& space, const SetFunction& f,
                                 const Event& evidence);

// ---------------------------------------------------------------------------
// Conditioning

enum class IntervalStatus { normal, vacuous, contradiction };

std::string status_name(IntervalStatus s);

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
  IntervalStatus status = IntervalStatus::normal;
};

/// Inputs for the conditional envelope of a target A given evidence E,
/// all measured on the joint space: lower/upper of A∩E, of Ā∩E and of E,
/// plus the two containment flags (typically derived from plausibility:
/// E ⊆ A iff upper(Ā∩E) = 0).
struct ConditionalInputs {
  double lower_target_and_evidence = 0.0;   // P(A∩E)
  double upper_complement_and_evidence = 0.0;  // P̄(Ā∩E)
  double upper_target_and_evidence = 0.0;   // P̄(A∩E)
  double lower_complement_and_evidence = 0.0;  // P(Ā∩E)
  double lower_evidence = 0.0;              // P(E)
  double upper_evidence = 0.0;              // P̄(E)
  bool evidence_implies_target = false;     // E ⊆ A
  bool evidence_excludes_target = false;    // E ⊆ Ā
};

/// Conditional probability interval:
///   normal (P(E) > 0):  [ P(A∩E) / (P(A∩E) + P̄(Ā∩E)),
///                          P̄(A∩E) / (P̄(A∩E) + P(Ā∩E)) ]
///   vacuous (P(E) = 0 < P̄(E)): [1,1] if E ⊆ A, [0,0] if E ⊆ Ā, else [0,1]
///   contradiction (P̄(E) = 0): no numeric guarantee.
/// The lower-bound 0/0 reads as 0; an upper-bound 0/0 with P(E) > 0 cannot
/// occur for a consistent 2-monotone model and raises NumericDomainError.
Interval conditional_interval(const ConditionalInputs& in);

// ---------------------------------------------------------------------------
// 2-monotonicity

struct TwoMonotoneReport {
  bool pass = true;
  std::vector<std::string> violations;  // capped; human-readable
};

/// Verifies P(∅)=0, P(Ω)=1, values in [0,1], and
/// P(A) + P(B) <= P(A∪B) + P(A∩B) for all event pairs.  O(4^n) in the
/// configuration count n, guarded by max_configs.
TwoMonotoneReport check_two_monotone(const SetFunction& lower,
                                     std::uint64_t max_configs = 12);

}  // namespace capax

#endif  // CAPAX_SETFUNC_HPP
