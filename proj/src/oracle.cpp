#include "capax/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

namespace capax {

namespace {

Scope full_scope(const Space& space) {
  std::vector<VarId> ids(space.size());
  std::iota(ids.begin(), ids.end(), 0);
  return Scope(std::move(ids));
}

ConfigSet set_of_mask(std::uint64_t n, std::uint64_t mask) {
  ConfigSet s = ConfigSet::none(n);
  while (mask != 0) {
    s.insert(static_cast<std::uint64_t>(__builtin_ctzll(mask)));
    mask &= mask - 1;
  }
  return s;
}

ConfigSet project_set(const Projector& proj, const ConfigSet& s, std::uint64_t out_n) {
  ConfigSet out = ConfigSet::none(out_n);
  s.for_each([&](std::uint64_t i) { out.insert(proj(i)); });
  return out;
}

void require_joint_size(std::uint64_t n, std::uint64_t guard, const char* who) {
  const std::uint64_t cap = std::min<std::uint64_t>(guard, kDenseConfigLimit);
  if (n > cap)
    throw SizeGuardError(std::string(who) + ": joint space has " + std::to_string(n) +
                         " configurations, guard is " + std::to_string(cap));
}

}  // namespace

SetFunction product_joint(const Space& space, const JunctionTree& tree, TreeSide side,
                          std::uint64_t guard) {
  const Scope full = full_scope(space);
  const std::uint64_t n = config_count(space, full);
  require_joint_size(n, guard, "product_joint");

  struct Factor {
    Projector proj;
    std::uint64_t configs;
    const SetFunction* f;
  };
  std::vector<Factor> cliques;
  std::vector<Factor> seps;
  for (std::size_t i = 0; i < tree.node_count(); ++i)
    cliques.push_back({Projector(space, full, tree.cliques[i]),
                       config_count(space, tree.cliques[i]), &tree.potentials[i]});
  for (const auto& e : tree.edges)
    seps.push_back({Projector(space, full, e.separator),
                    config_count(space, e.separator), &e.potential});

  const Role role = side == TreeSide::mass ? Role::mobius : Role::commonality;
  SetFunction out(full, role, n);

  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    const ConfigSet x = set_of_mask(n, mask);
    if (x.empty()) {
      if (side == TreeSide::commonality) out.set(x, 1.0);
      continue;
    }
    if (side == TreeSide::mass) {
      const Event rect = rectangularize(space, Event{full, x}, tree.cliques);
      if (!(rect.configs == x)) continue;  // off-rectangle mass is 0
    }
    double num = 1.0;
    for (const auto& c : cliques) num *= c.f->value_at(project_set(c.proj, x, c.configs));
    double den = 1.0;
    for (const auto& s : seps) den *= s.f->value_at(project_set(s.proj, x, s.configs));
    if (std::abs(den) <= kZeroTol) {
      if (std::abs(num) <= kZeroTol) continue;
      throw ModelError("product_joint: vanished separator entry under a nonzero "
                       "clique product; the potentials are malformed");
    }
    out.set(x, num / den);
  }
  return out;
}

FlatJoint assemble_joint(const Model& model, std::uint64_t guard, bool verify) {
  SetFunction m = product_joint(model.space(), model.m_tree(), TreeSide::mass, guard);
  SetFunction q =
      product_joint(model.space(), model.q_tree(), TreeSide::commonality, guard);
  double gap = 0.0;
  if (verify) {
    const double total = m.total();
    if (std::abs(total - 1.0) > kCompareTol)
      throw ModelError("assemble_joint: joint mass sums to " + std::to_string(total) +
                       ", expected 1");
    const SetFunction derived =
        commonality_transform(dual_function(inverse_mobius(m)));
    const std::uint64_t n = m.configs();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      const ConfigSet x = set_of_mask(n, mask);
      gap = std::max(gap, std::abs(q.value_at(x) - derived.value_at(x)));
    }
    if (gap > kCompareTol)
      throw ModelError(
          "assemble_joint: the mass and commonality trees describe different "
          "priors (largest commonality gap " + std::to_string(gap) + ")");
  }
  return FlatJoint{std::move(m), std::move(q), gap};
}

Interval flat_posterior(const Space& space, const FlatJoint& flat, const Event& target,
                        const Event& evidence) {
  const Scope& full = flat.m_joint.scope();
  if (!(target.scope == full) || !(evidence.scope == full))
    throw ScopeError("flat_posterior: target and evidence must be full-scope events");

  const SetFunction m = restrict_to_evidence(space, flat.m_joint, evidence);
  const SetFunction q = restrict_to_evidence(space, flat.q_joint, evidence);
  const ConfigSet& a = target.configs;
  const ConfigSet ac = a.complement();
  const ConfigSet whole = ConfigSet::all(flat.m_joint.configs());

  ConditionalInputs in;
  in.lower_target_and_evidence = lower_value(m, a);
  in.lower_complement_and_evidence = lower_value(m, ac);
  in.upper_target_and_evidence = upper_value(q, a);
  in.upper_complement_and_evidence = upper_value(q, ac);
  in.lower_evidence = lower_value(m, whole);
  in.upper_evidence = upper_value(q, whole);
  in.evidence_implies_target = in.upper_complement_and_evidence <= kCompareTol;
  in.evidence_excludes_target = in.upper_target_and_evidence <= kCompareTol;
  return conditional_interval(in);
}

std::vector<std::vector<double>> credal_vertices(const SetFunction& lower) {
  if (lower.role() != Role::lower)
    throw ConfigError("credal_vertices: expects a lower-probability function, got role " +
                      role_name(lower.role()));
  const std::uint64_t n = lower.configs();
  if (n > 6)
    throw SizeGuardError("credal_vertices: " + std::to_string(n) +
                         " configurations exceed the guard of 6");
  const TwoMonotoneReport rep = check_two_monotone(lower, 6);
  if (!rep.pass)
    throw NumericDomainError("credal_vertices: input is not 2-monotone (" +
                             (rep.violations.empty() ? std::string("no detail")
                                                     : rep.violations.front()) +
                             ")");

  std::vector<std::uint64_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::vector<double>> vertices;
  do {
    std::vector<double> v(n, 0.0);
    ConfigSet prefix = ConfigSet::none(n);
    double prev = 0.0;
    for (std::uint64_t i : order) {
      prefix.insert(i);
      const double cur = lower.value_at(prefix);
      v[i] = cur - prev;
      prev = cur;
    }
    double total = 0.0;
    for (double& w : v) {
      if (w < -kCompareTol)
        throw NumericDomainError("credal_vertices: negative chain weight " +
                                 std::to_string(w));
      w = std::max(0.0, w);
      total += w;
    }
    if (std::abs(total - 1.0) > kCompareTol)
      throw NumericDomainError("credal_vertices: chain weights sum to " +
                               std::to_string(total));
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      double p = 0.0;
      for (std::uint64_t b = mask; b != 0; b &= b - 1)
        p += v[static_cast<std::uint64_t>(__builtin_ctzll(b))];
      if (p < lower.value_at(set_of_mask(n, mask)) - kCompareTol)
        throw NumericDomainError(
            "credal_vertices: a chain vector fails to dominate the input");
    }
    vertices.push_back(std::move(v));
  } while (std::next_permutation(order.begin(), order.end()));
  return vertices;
}

Interval oracle_conditional(const SetFunction& lower, const Event& target,
                            const Event& evidence) {
  if (!(target.scope == lower.scope()) || !(evidence.scope == lower.scope()))
    throw ScopeError("oracle_conditional: target and evidence must share the "
                     "function's scope");
  const auto vertices = credal_vertices(lower);
  const auto prob = [](const std::vector<double>& v, const ConfigSet& s) {
    double p = 0.0;
    s.for_each([&](std::uint64_t i) { p += v[i]; });
    return p;
  };

  const ConfigSet& e = evidence.configs;
  const ConfigSet ae = target.configs.intersect(e);
  double low_e = 1.0;
  double up_e = 0.0;
  for (const auto& v : vertices) {
    const double pe = prob(v, e);
    low_e = std::min(low_e, pe);
    up_e = std::max(up_e, pe);
  }
  if (up_e <= kCompareTol) return Interval{0.0, 0.0, IntervalStatus::contradiction};

  double lo = 1.0;
  double hi = 0.0;
  for (const auto& v : vertices) {
    const double pe = prob(v, e);
    if (pe <= kCompareTol) continue;
    const double r = prob(v, ae) / pe;
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  const IntervalStatus s =
      low_e <= kCompareTol ? IntervalStatus::vacuous : IntervalStatus::normal;
  return Interval{lo, hi, s};
}

// ---------------------------------------------------------------------------
// Markov structure checks

namespace {

/// Unions of clique scopes on each side of one tree edge.
std::pair<Scope, Scope> edge_split(const JunctionTree& tree, std::size_t edge_index) {
  const auto adj = tree.adjacency();
  std::vector<char> side_a(tree.node_count(), 0);
  std::deque<std::size_t> frontier{tree.edges[edge_index].a};
  side_a[tree.edges[edge_index].a] = 1;
  while (!frontier.empty()) {
    const std::size_t u = frontier.front();
    frontier.pop_front();
    for (const auto& [v, ei] : adj[u]) {
      if (ei == edge_index || side_a[v]) continue;
      side_a[v] = 1;
      frontier.push_back(v);
    }
  }
  Scope left, right;
  for (std::size_t i = 0; i < tree.node_count(); ++i) {
    if (side_a[i]) left = left.unite(tree.cliques[i]);
    else right = right.unite(tree.cliques[i]);
  }
  return {left, right};
}

bool is_tree_rectangle(const Space& space, const Scope& full, const ConfigSet& x,
                       const std::vector<Scope>& cliques) {
  if (x.empty()) return true;
  return rectangularize(space, Event{full, x}, cliques).configs == x;
}

}  // namespace

bool MarkovReport::all_ok() const {
  if (!rectangular_core_ok) return false;
  for (const auto& d : m_factorizations)
    if (!d.ok) return false;
  for (const auto& d : q_factorizations)
    if (!d.ok) return false;
  return true;
}

MarkovReport check_markov(const Space& space, const SetFunction& m_joint,
                          const JunctionTree& m_tree, const JunctionTree& q_tree) {
  const Scope full = m_joint.scope();
  const std::uint64_t n = m_joint.configs();
  require_joint_size(n, kDenseConfigLimit, "check_markov");

  const SetFunction q_true =
      commonality_transform(dual_function(inverse_mobius(m_joint)));

  MarkovReport report;
  auto note = [&](std::string msg) {
    if (report.notes.size() < 10) report.notes.push_back(std::move(msg));
  };

  for (const auto& [ev, val] : m_joint.entries()) {
    if (std::abs(val) <= kCompareTol) continue;
    const bool ok_m = is_tree_rectangle(space, full, ev, m_tree.cliques);
    const bool ok_q = is_tree_rectangle(space, full, ev, q_tree.cliques);
    if (!ok_m || !ok_q) {
      if (report.rectangular_core_ok)
        note(std::string("mass support leaves the rectangles of the ") +
             (!ok_m ? "mass" : "commonality") + " tree");
      report.rectangular_core_ok = false;
    }
  }

  const auto factor_checks = [&](const JunctionTree& tree, const SetFunction& joint,
                                 TreeSide side) {
    std::vector<DecompositionCheck> out;
    for (std::size_t ei = 0; ei < tree.edges.size(); ++ei) {
      const auto [left, right] = edge_split(tree, ei);
      const Scope& sep = tree.edges[ei].separator;
      DecompositionCheck check{left, right, sep, true, 0.0};

      const auto loc = [&](const Scope& sub) {
        return side == TreeSide::mass ? localize_mass(space, joint, sub)
                                      : localize_commonality(space, joint, sub);
      };
      const SetFunction la = loc(left);
      const SetFunction lb = loc(right);
      const SetFunction ls = loc(sep);
      const Projector pa(space, full, left);
      const Projector pb(space, full, right);
      const Projector ps(space, full, sep);
      const std::uint64_t na = config_count(space, left);
      const std::uint64_t nb = config_count(space, right);
      const std::uint64_t ns = config_count(space, sep);

      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        const ConfigSet x = set_of_mask(n, mask);
        if (!is_tree_rectangle(space, full, x, tree.cliques)) continue;
        const double lhs = joint.value_at(x) * ls.value_at(project_set(ps, x, ns));
        const double rhs = la.value_at(project_set(pa, x, na)) *
                           lb.value_at(project_set(pb, x, nb));
        check.max_gap = std::max(check.max_gap, std::abs(lhs - rhs));
      }
      check.ok = check.max_gap <= kCompareTol;
      if (!check.ok)
        note(std::string(side == TreeSide::mass ? "mass" : "commonality") +
             " factorization fails across a separator (gap " +
             std::to_string(check.max_gap) + ")");
      out.push_back(std::move(check));
    }
    return out;
  };

  report.m_factorizations = factor_checks(m_tree, m_joint, TreeSide::mass);
  report.q_factorizations = factor_checks(q_tree, q_true, TreeSide::commonality);

  for (const auto& e : m_tree.edges) {
    SeparatorCheck sc{e.separator, true};
    const Projector ps(space, full, e.separator);
    const std::uint64_t ns = config_count(space, e.separator);
    std::vector<ConfigSet> blocks;
    for (const auto& [ev, val] : m_joint.entries()) {
      if (std::abs(val) <= kCompareTol || ev.empty()) continue;
      const ConfigSet p = project_set(ps, ev, ns);
      if (std::find(blocks.begin(), blocks.end(), p) == blocks.end())
        blocks.push_back(p);
    }
    ConfigSet covered = ConfigSet::none(ns);
    for (std::size_t i = 0; i < blocks.size() && sc.partitions; ++i) {
      for (std::size_t j = i + 1; j < blocks.size(); ++j) {
        if (blocks[i].intersects(blocks[j])) {
          sc.partitions = false;
          break;
        }
      }
      covered = covered.unite(blocks[i]);
    }
    if (!covered.full()) sc.partitions = false;
    report.separator_partitions.push_back(std::move(sc));
  }

  return report;
}

MarkovReport check_markov(const Model& model, std::uint64_t guard) {
  const SetFunction m_joint =
      product_joint(model.space(), model.m_tree(), TreeSide::mass, guard);
  return check_markov(model.space(), m_joint, model.m_tree(), model.q_tree());
}

}  // namespace capax
