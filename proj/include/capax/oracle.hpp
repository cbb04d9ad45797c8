#ifndef CAPAX_ORACLE_HPP
#define CAPAX_ORACLE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "capax/engine.hpp"

namespace capax {

/// Default cap on the joint configuration count for the flat (non-graphical)
/// code paths; they enumerate all 2^|Ω| events of the joint space.
inline constexpr std::uint64_t kDefaultJointGuard = 16;

/// The model's prior flattened onto the full variable scope: a mass function
/// and a commonality function that should describe the same lower/upper pair.
struct FlatJoint {
  SetFunction m_joint;
  SetFunction q_joint;
  /// Worst |q_joint - commonality(dual(inv_mobius(m_joint)))| observed.
  double max_dual_gap = 0.0;
};

/// One tree's product over the full scope: for the mass side,
/// Π_C φ_C(A_C) / Π_S φ_S(A_S) on tree rectangles and 0 elsewhere; for the
/// commonality side the same ratio at the projections of any event A (with
/// 1 at ∅).  A vanished denominator with a nonzero numerator is a malformed
/// model.
SetFunction product_joint(const Space& space, const JunctionTree& tree, TreeSide side,
                          std::uint64_t guard = kDefaultJointGuard);

/// Flattens both trees.  With verify=true (the default) also enforces
/// Σ m_joint = 1, q_joint(∅) = 1, and dual-consistency of the pair within
/// tolerance; disable it to flatten evidence-restricted states, whose pairs
/// are legitimately non-dual.
FlatJoint assemble_joint(const Model& model, std::uint64_t guard = kDefaultJointGuard,
                         bool verify = true);

/// Conditional interval computed with no junction-tree machinery: restricts
/// both flattened functions to the evidence cylinder and evaluates the
/// conditioning formula pointwise.  Target and evidence must be full-scope
/// events.
Interval flat_posterior(const Space& space, const FlatJoint& flat, const Event& target,
                        const Event& evidence);

/// Extreme points of the set of probability distributions dominating a
/// 2-monotone lower probability: one weight vector per permutation of the
/// configurations, by chained prefix differences.  Every emitted vector is
/// validated (nonnegative, sums to 1, dominates the input on every event).
/// Guarded at 6 configurations; rejects non-2-monotone inputs.
std::vector<std::vector<double>> credal_vertices(const SetFunction& lower);

/// Reference conditioning by brute force over credal vertices: min/max of
/// P(A∩E)/P(E) across vertices with P(E) > 0, with the same degenerate
/// statuses as conditional_interval.
Interval oracle_conditional(const SetFunction& lower, const Event& target,
                            const Event& evidence);

/// One edge-induced decomposition of a junction tree: the union of clique
/// scopes on each side of the edge, meeting in the separator.
struct DecompositionCheck {
  Scope left;
  Scope right;
  Scope separator;
  bool ok = true;
  double max_gap = 0.0;
};

struct SeparatorCheck {
  Scope separator;
  bool partitions = true;  // nonzero-mass projections partition the separator space
};

struct MarkovReport {
  /// Every event with nonzero joint mass is a rectangle of both trees.
  bool rectangular_core_ok = true;
  /// Mass factorization across each mass-tree edge, on rectangles.
  std::vector<DecompositionCheck> m_factorizations;
  /// Commonality factorization across each commonality-tree edge, at the
  /// rectangularized projections.
  std::vector<DecompositionCheck> q_factorizations;
  /// Sufficient condition, per mass-tree separator: the projections of the
  /// support of the joint mass partition the separator's configurations.
  std::vector<SeparatorCheck> separator_partitions;
  std::vector<std::string> notes;

  bool all_ok() const;
};

/// Checks whether the model's prior is Markov with respect to its two trees:
/// flattens the mass side, derives the true commonality by duality, and
/// verifies the rectangular core plus both factorizations against the
/// declared structures.  The partition reports are informational (sufficient,
/// not necessary).
MarkovReport check_markov(const Model& model, std::uint64_t guard = kDefaultJointGuard);

/// Same checks against an explicitly supplied joint mass function; lets
/// callers probe joints that no tree product can produce.
MarkovReport check_markov(const Space& space, const SetFunction& m_joint,
                          const JunctionTree& m_tree, const JunctionTree& q_tree);

}  // namespace capax

#endif  // CAPAX_ORACLE_HPP
