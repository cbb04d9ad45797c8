#ifndef CAPAX_ENGINE_HPP
#define CAPAX_ENGINE_HPP

#include <vector>

#include "capax/graph.hpp"

namespace capax {

/// Which flavor of potential a junction tree carries: mass potentials are
/// combined with mass localization, commonality potentials with commonality
/// localization.
enum class TreeSide { mass, commonality };

enum class ModelStatus { normal, vacuous_conditioning, contradiction };

std::string model_status_name(ModelStatus s);

/// A lower/upper probability model: one junction tree of mass potentials and
/// one of commonality potentials over the same variables.  Mutating entry
/// points (enter_evidence, propagate, and the auto-propagating queries) are
/// single-writer; everything else is read-only.
class Model {
public:
  Model(Space space, Graph m_declared, Graph q_declared,
        JunctionTree m_tree, JunctionTree q_tree);

  const Space& space() const { return space_; }
  const Graph& m_graph() const { return m_declared_; }
  const Graph& q_graph() const { return q_declared_; }
  const JunctionTree& m_tree() const { return m_tree_; }
  const JunctionTree& q_tree() const { return q_tree_; }
  const std::vector<Event>& evidence_log() const { return log_; }
  bool propagated() const { return propagated_; }
  /// Meaningful after propagation; fresh models report normal.
  ModelStatus status() const { return status_; }

  /// Restricts the first containing clique potential in each tree to the
  /// finding's cylinder.  The finding must be a nonempty event whose scope
  /// is contained in at least one clique of each tree.
  void enter_evidence(const Event& finding);

  /// Two-pass (collect toward the first clique, then distribute) message
  /// schedule on both trees; afterwards all clique marginals are pairwise
  /// consistent and the evidence totals are available.  Detects the two
  /// singular regimes: upper(E) = 0 -> contradiction, lower(E) = 0 ->
  /// vacuous conditioning (the commonality tree is still completed).
  void propagate();

  /// Conditional interval for a clique-local target event; propagates first
  /// when needed.  In the vacuous regime the containment flags are read from
  /// the commonality tree (E implies the target iff upper(complement ∩ E)
  /// vanishes).
  Interval query_posterior(const Event& target);

  /// [lower(E), upper(E)] read from the artificial empty-scope node when
  /// present, otherwise from the first clique.
  Interval total_evidence_bounds();

  bool operator==(const Model& other) const;

private:
  void validate_tree(const JunctionTree& tree, TreeSide side) const;
  void propagate_tree(JunctionTree& tree, TreeSide side, bool& singular);
  std::size_t containing_node(const JunctionTree& tree, const Scope& scope) const;

  Space space_;
  Graph m_declared_;
  Graph q_declared_;
  JunctionTree m_tree_;
  JunctionTree q_tree_;
  std::vector<Event> log_;
  bool propagated_ = false;
  ModelStatus status_ = ModelStatus::normal;
  double lower_evidence_ = 1.0;
  double upper_evidence_ = 1.0;
  bool m_singular_ = false;
  bool q_singular_ = false;
};

}  // namespace capax

#endif  // CAPAX_ENGINE_HPP
