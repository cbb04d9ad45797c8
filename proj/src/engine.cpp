#include "capax/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <string>

namespace capax {

std::string model_status_name(ModelStatus s) {
  switch (s) {
    case ModelStatus::normal: return "normal";
    case ModelStatus::vacuous_conditioning: return "vacuous_conditioning";
    case ModelStatus::contradiction: return "contradiction";
  }
  return "?";
}

namespace {

bool same_space(const Space& a, const Space& b) {
  if (a.size() != b.size()) return false;
  for (VarId i = 0; i < a.size(); ++i) {
    if (a.var(i).name != b.var(i).name || a.var(i).domain != b.var(i).domain)
      return false;
  }
  return true;
}

bool same_tree(const JunctionTree& a, const JunctionTree& b) {
  if (a.cliques != b.cliques || a.empty_node != b.empty_node) return false;
  if (a.potentials.size() != b.potentials.size() || a.edges.size() != b.edges.size())
    return false;
  for (std::size_t i = 0; i < a.potentials.size(); ++i)
    if (!(a.potentials[i] == b.potentials[i])) return false;
  for (std::size_t i = 0; i < a.edges.size(); ++i) {
    const auto& ea = a.edges[i];
    const auto& eb = b.edges[i];
    if (ea.a != eb.a || ea.b != eb.b || !(ea.separator == eb.separator) ||
        !(ea.potential == eb.potential))
      return false;
  }
  return true;
}

const char* side_name(TreeSide side) {
  return side == TreeSide::mass ? "mass" : "commonality";
}

/// Puts a tree's potentials into the engine's side conventions: mass-side
/// factors carry role potential and vanish at the empty event; commonality-
/// side factors carry role commonality and hold an explicit 1 there.
void normalize_side(JunctionTree& tree, TreeSide side) {
  auto fix = [&](SetFunction& f, const char* what) {
    if (side == TreeSide::mass) {
      f = f.with_role(Role::potential);
      if (std::abs(f.value_at(ConfigSet::none(f.configs()))) > kZeroTol)
        throw ModelError(std::string("model: mass-side ") + what +
                         " assigns a nonzero value to the empty event");
    } else {
      f = f.with_role(Role::commonality);
      const ConfigSet empty = ConfigSet::none(f.configs());
      if (std::abs(f.value_at(empty) - 1.0) > kCompareTol)
        throw ModelError(std::string("model: commonality-side ") + what +
                         " must equal 1 at the empty event");
      f.set(empty, 1.0);
    }
  };
  for (auto& p : tree.potentials) fix(p, "clique potential");
  for (auto& e : tree.edges) fix(e.potential, "separator potential");
}

}  // namespace

Model::Model(Space space, Graph m_declared, Graph q_declared,
             JunctionTree m_tree, JunctionTree q_tree)
    : space_(std::move(space)),
      m_declared_(std::move(m_declared)),
      q_declared_(std::move(q_declared)),
      m_tree_(std::move(m_tree)),
      q_tree_(std::move(q_tree)) {
  if (space_.size() == 0) throw ModelError("model: no variables");
  normalize_side(m_tree_, TreeSide::mass);
  normalize_side(q_tree_, TreeSide::commonality);
  validate_tree(m_tree_, TreeSide::mass);
  validate_tree(q_tree_, TreeSide::commonality);
}

void Model::validate_tree(const JunctionTree& tree, TreeSide side) const {
  const std::string where = std::string("model (") + side_name(side) + " tree): ";
  if (tree.node_count() == 0) throw ModelError(where + "no cliques");
  if (tree.potentials.size() != tree.node_count())
    throw ModelError(where + "potential count does not match clique count");

  std::vector<bool> covered(space_.size(), false);
  for (std::size_t i = 0; i < tree.node_count(); ++i) {
    const Scope& c = tree.cliques[i];
    for (VarId v : c.ids()) {
      if (v >= space_.size())
        throw ModelError(where + "clique references an unknown variable id");
      covered[v] = true;
    }
    const SetFunction& p = tree.potentials[i];
    if (!(p.scope() == c))
      throw ModelError(where + "potential scope does not match its clique");
    if (p.configs() != config_count(space_, c))
      throw ModelError(where + "potential universe does not match the clique");
  }
  const bool empty_ok = !tree.empty_node ||
                        (*tree.empty_node < tree.node_count() &&
                         tree.cliques[*tree.empty_node].empty());
  if (!empty_ok) throw ModelError(where + "artificial node index is invalid");
  for (std::size_t v = 0; v < covered.size(); ++v)
    if (!covered[v])
      throw ModelError(where + "variable '" + space_.var(static_cast<VarId>(v)).name +
                       "' appears in no clique");

  for (const auto& e : tree.edges) {
    if (e.a >= tree.node_count() || e.b >= tree.node_count() || e.a == e.b)
      throw ModelError(where + "edge references an invalid node");
    if (!(e.separator == tree.cliques[e.a].intersect(tree.cliques[e.b])))
      throw ModelError(where + "separator is not the clique intersection");
    if (!(e.potential.scope() == e.separator) ||
        e.potential.configs() != config_count(space_, e.separator))
      throw ModelError(where + "separator potential does not match the separator");
  }
  if (!check_junction_property(tree))
    throw ModelError(where + "running intersection property fails");

  const Graph& declared = side == TreeSide::mass ? m_declared_ : q_declared_;
  for (const auto& [a, b] : declared.edges()) {
    const bool found = std::any_of(
        tree.cliques.begin(), tree.cliques.end(),
        [&](const Scope& c) { return c.contains(a) && c.contains(b); });
    if (!found)
      throw ModelError(where + "declared edge is covered by no clique");
  }
}

std::size_t Model::containing_node(const JunctionTree& tree, const Scope& scope) const {
  for (std::size_t i = 0; i < tree.node_count(); ++i)
    if (scope.subset_of(tree.cliques[i])) return i;
  return tree.node_count();
}

void Model::enter_evidence(const Event& finding) {
  if (finding.scope.empty())
    throw EvidenceError("enter_evidence: finding has an empty scope");
  if (finding.configs.empty())
    throw EvidenceError("enter_evidence: finding denotes the empty event");
  const std::size_t mi = containing_node(m_tree_, finding.scope);
  const std::size_t qi = containing_node(q_tree_, finding.scope);
  if (mi == m_tree_.node_count() || qi == q_tree_.node_count())
    throw EvidenceError("enter_evidence: finding scope is not contained in any clique");
  m_tree_.potentials[mi] = restrict_to_evidence(space_, m_tree_.potentials[mi], finding);
  q_tree_.potentials[qi] = restrict_to_evidence(space_, q_tree_.potentials[qi], finding);
  log_.push_back(finding);
  propagated_ = false;
  status_ = ModelStatus::normal;
}

void Model::propagate_tree(JunctionTree& tree, TreeSide side, bool& singular) {
  const auto localize = [&](const SetFunction& f, const Scope& sep) {
    return side == TreeSide::mass ? localize_mass(space_, f, sep)
                                  : localize_commonality(space_, f, sep);
  };

  const auto step = [&](std::size_t from, std::size_t to, JunctionTree::Edge& edge) {
    SetFunction msg = localize(tree.potentials[from], edge.separator);
    const SetFunction& prev = edge.potential;
    const SetFunction& target = tree.potentials[to];
    Projector proj(space_, tree.cliques[to], edge.separator);
    const std::uint64_t sep_n = msg.configs();
    SetFunction updated(target.scope(), target.role(), target.configs());
    for (const auto& [ev, val] : target.entries()) {
      ConfigSet key = ConfigSet::none(sep_n);
      ev.for_each([&](std::uint64_t i) { key.insert(proj(i)); });
      const double num = msg.value_at(key);
      const double den = prev.value_at(key);
      double out = 0.0;
      if (std::abs(den) > kZeroTol) {
        out = val * num / den;
      } else if (std::abs(num) > kZeroTol) {
        singular = true;  // nonzero message over a vanished separator entry
      }
      updated.set(ev, out);
    }
    tree.potentials[to] = updated;
    edge.potential = std::move(msg);
  };

  if (tree.edges.empty()) return;

  const auto adj = tree.adjacency();
  const std::size_t n = tree.node_count();
  std::vector<std::size_t> order;
  std::vector<std::size_t> parent(n, n);
  std::vector<std::size_t> parent_edge(n, tree.edges.size());
  std::vector<bool> seen(n, false);
  std::deque<std::size_t> frontier{0};
  seen[0] = true;
  while (!frontier.empty()) {
    const std::size_t u = frontier.front();
    frontier.pop_front();
    order.push_back(u);
    for (const auto& [v, ei] : adj[u]) {
      if (seen[v]) continue;
      seen[v] = true;
      parent[v] = u;
      parent_edge[v] = ei;
      frontier.push_back(v);
    }
  }
  if (order.size() != n)
    throw ModelError("propagate: junction tree is not connected");

  for (std::size_t i = order.size(); i-- > 1;) {
    const std::size_t u = order[i];
    step(u, parent[u], tree.edges[parent_edge[u]]);
  }
  for (std::size_t i = 1; i < order.size(); ++i) {
    const std::size_t u = order[i];
    step(parent[u], u, tree.edges[parent_edge[u]]);
  }
}

void Model::propagate() {
  if (propagated_) return;
  m_singular_ = false;
  q_singular_ = false;
  propagate_tree(m_tree_, TreeSide::mass, m_singular_);
  propagate_tree(q_tree_, TreeSide::commonality, q_singular_);

  const std::size_t m_read = m_tree_.empty_node.value_or(0);
  const std::size_t q_read = q_tree_.empty_node.value_or(0);
  lower_evidence_ = m_tree_.potentials[m_read].total();
  upper_evidence_ = upper_value(
      q_tree_.potentials[q_read],
      full_event(space_, q_tree_.cliques[q_read]).configs);
  for (const auto& p : q_tree_.potentials)
    if (std::abs(p.value_at(ConfigSet::none(p.configs()))) <= kCompareTol)
      q_singular_ = true;  // a commonality potential collapsed at the empty event

  if (upper_evidence_ <= kCompareTol || q_singular_) {
    status_ = ModelStatus::contradiction;
  } else if (lower_evidence_ <= kCompareTol || m_singular_) {
    status_ = ModelStatus::vacuous_conditioning;
  } else {
    status_ = ModelStatus::normal;
  }
  propagated_ = true;
}

Interval Model::query_posterior(const Event& target) {
  if (target.scope.empty())
    throw EvidenceError("query_posterior: target has an empty scope");
  const std::size_t mi = containing_node(m_tree_, target.scope);
  const std::size_t qi = containing_node(q_tree_, target.scope);
  if (mi == m_tree_.node_count() || qi == q_tree_.node_count())
    throw EvidenceError("query_posterior: target scope is not contained in any clique");
  if (!propagated_) propagate();
  if (status_ == ModelStatus::contradiction)
    return Interval{0.0, 0.0, IntervalStatus::contradiction};

  const SetFunction& fm = m_tree_.potentials[mi];
  const SetFunction& fq = q_tree_.potentials[qi];
  const Event a_m = extend(space_, target, m_tree_.cliques[mi]);
  const Event a_q = extend(space_, target, q_tree_.cliques[qi]);
  const Event ac_m = complement(a_m);
  const Event ac_q = complement(a_q);

  ConditionalInputs in;
  in.lower_target_and_evidence = lower_value(fm, a_m.configs);
  in.lower_complement_and_evidence = lower_value(fm, ac_m.configs);
  in.upper_target_and_evidence = upper_value(fq, a_q.configs);
  in.upper_complement_and_evidence = upper_value(fq, ac_q.configs);
  in.lower_evidence = m_singular_ ? 0.0 : lower_evidence_;
  in.upper_evidence = upper_evidence_;
  in.evidence_implies_target = in.upper_complement_and_evidence <= kCompareTol;
  in.evidence_excludes_target = in.upper_target_and_evidence <= kCompareTol;
  return conditional_interval(in);
}

Interval Model::total_evidence_bounds() {
  if (!propagated_) propagate();
  IntervalStatus s = IntervalStatus::normal;
  if (status_ == ModelStatus::contradiction) s = IntervalStatus::contradiction;
  else if (status_ == ModelStatus::vacuous_conditioning) s = IntervalStatus::vacuous;
  return Interval{m_singular_ ? 0.0 : lower_evidence_, upper_evidence_, s};
}

bool Model::operator==(const Model& other) const {
  return same_space(space_, other.space_) && m_declared_ == other.m_declared_ &&
         q_declared_ == other.q_declared_ && same_tree(m_tree_, other.m_tree_) &&
         same_tree(q_tree_, other.q_tree_) && log_ == other.log_ &&
         propagated_ == other.propagated_;
}

}  // namespace capax
