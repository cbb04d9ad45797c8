#include "capax/graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <set>

namespace capax {

// ---------------------------------------------------------------------------
// Graph

Graph::Graph(std::vector<VarId> vertices, std::vector<std::pair<VarId, VarId>> edges)
    : vertices_(std::move(vertices)) {
  std::sort(vertices_.begin(), vertices_.end());
  vertices_.erase(std::unique(vertices_.begin(), vertices_.end()), vertices_.end());
  std::set<std::pair<VarId, VarId>> canon;
  for (auto [a, b] : edges) {
    if (a == b) throw SchemaError("graph edge is a self-loop");
    if (a > b) std::swap(a, b);
    if (!has_vertex(a) || !has_vertex(b))
      throw SchemaError("graph edge endpoint is not a declared vertex");
    canon.insert({a, b});
  }
  edges_.assign(canon.begin(), canon.end());
}

bool Graph::has_vertex(VarId v) const {
  return std::binary_search(vertices_.begin(), vertices_.end(), v);
}

bool Graph::has_edge(VarId a, VarId b) const {
  if (a > b) std::swap(a, b);
  return std::binary_search(edges_.begin(), edges_.end(), std::make_pair(a, b));
}

std::vector<VarId> Graph::neighbors(VarId v) const {
  std::vector<VarId> out;
  for (const auto& [a, b] : edges_) {
    if (a == v) out.push_back(b);
    if (b == v) out.push_back(a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Triangulation (min-fill; ties: min degree, then smallest vertex id)

Triangulation triangulate(const Graph& g) {
  std::map<VarId, std::set<VarId>> adj;
  for (VarId v : g.vertices()) adj[v];
  for (const auto& [a, b] : g.edges()) {
    adj[a].insert(b);
    adj[b].insert(a);
  }

  std::set<VarId> remaining(g.vertices().begin(), g.vertices().end());
  std::vector<std::pair<VarId, VarId>> all_edges = g.edges();
  std::vector<VarId> order;
  order.reserve(remaining.size());

  while (!remaining.empty()) {
    VarId best = 0;
    std::size_t best_fill = SIZE_MAX, best_deg = SIZE_MAX;
    for (VarId v : remaining) {
      const auto& nb = adj[v];
      std::vector<VarId> live(nb.begin(), nb.end());
      std::size_t fill = 0;
      for (std::size_t i = 0; i < live.size(); ++i)
        for (std::size_t j = i + 1; j < live.size(); ++j)
          if (!adj[live[i]].count(live[j])) ++fill;
      const std::size_t deg = live.size();
      if (fill < best_fill || (fill == best_fill && deg < best_deg) ||
          (fill == best_fill && deg == best_deg && v < best)) {
        best = v;
        best_fill = fill;
        best_deg = deg;
      }
    }

    std::vector<VarId> nb(adj[best].begin(), adj[best].end());
    for (std::size_t i = 0; i < nb.size(); ++i) {
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        if (!adj[nb[i]].count(nb[j])) {
          adj[nb[i]].insert(nb[j]);
          adj[nb[j]].insert(nb[i]);
          all_edges.emplace_back(std::min(nb[i], nb[j]), std::max(nb[i], nb[j]));
        }
      }
    }
    for (VarId u : nb) adj[u].erase(best);
    adj.erase(best);
    remaining.erase(best);
    order.push_back(best);
  }

  return Triangulation{Graph(g.vertices(), std::move(all_edges)), std::move(order)};
}

namespace {

/// Checks that 'order' enumerates every vertex once and that each vertex's
/// later neighbors form a clique.
bool is_perfect_elimination_order(const Graph& g, const std::vector<VarId>& order) {
  if (order.size() != g.vertices().size()) return false;
  std::map<VarId, std::size_t> pos;
  for (std::size_t i = 0; i < order.size(); ++i)
    if (!g.has_vertex(order[i]) || !pos.emplace(order[i], i).second) return false;
  for (VarId v : order) {
    std::vector<VarId> later;
    for (VarId u : g.neighbors(v))
      if (pos[u] > pos[v]) later.push_back(u);
    for (std::size_t i = 0; i < later.size(); ++i)
      for (std::size_t j = i + 1; j < later.size(); ++j)
        if (!g.has_edge(later[i], later[j])) return false;
  }
  return true;
}

}  // namespace

bool is_chordal(const Graph& g) {
  // Maximum cardinality search; the reverse visit order is a perfect
  // elimination order iff the graph is chordal.
  std::set<VarId> unvisited(g.vertices().begin(), g.vertices().end());
  std::map<VarId, std::size_t> weight;
  for (VarId v : g.vertices()) weight[v] = 0;
  std::vector<VarId> visit;
  visit.reserve(unvisited.size());
  while (!unvisited.empty()) {
    VarId best = *unvisited.begin();
    for (VarId v : unvisited)
      if (weight[v] > weight[best]) best = v;
    visit.push_back(best);
    unvisited.erase(best);
    for (VarId u : g.neighbors(best))
      if (unvisited.count(u)) ++weight[u];
  }
  std::reverse(visit.begin(), visit.end());
  return is_perfect_elimination_order(g, visit);
}

std::vector<Scope> maximal_cliques(const Graph& chordal,
                                   const std::vector<VarId>& elimination_order) {
  if (!is_perfect_elimination_order(chordal, elimination_order))
    throw InvalidOrderError("elimination order is not perfect for the graph");
  std::map<VarId, std::size_t> pos;
  for (std::size_t i = 0; i < elimination_order.size(); ++i)
    pos[elimination_order[i]] = i;

  std::set<Scope> candidates;
  for (VarId v : elimination_order) {
    std::vector<VarId> c{v};
    for (VarId u : chordal.neighbors(v))
      if (pos[u] > pos[v]) c.push_back(u);
    candidates.insert(Scope(std::move(c)));
  }
  std::vector<Scope> out;
  for (const Scope& c : candidates) {
    bool maximal = true;
    for (const Scope& other : candidates)
      if (!(other == c) && c.subset_of(other)) { maximal = false; break; }
    if (maximal) out.push_back(c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Junction tree

std::vector<std::vector<std::pair<std::size_t, std::size_t>>> JunctionTree::adjacency() const {
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(cliques.size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    adj[edges[e].a].emplace_back(edges[e].b, e);
    adj[edges[e].b].emplace_back(edges[e].a, e);
  }
  for (auto& row : adj) std::sort(row.begin(), row.end());
  return adj;
}

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

}  // namespace

JunctionTree build_junction_tree(const Space& space, const std::vector<Scope>& cliques) {
  if (cliques.empty()) throw ConfigError("build_junction_tree: no cliques given");
  JunctionTree tree;
  tree.cliques = cliques;
  std::sort(tree.cliques.begin(), tree.cliques.end());
  for (std::size_t i = 0; i + 1 < tree.cliques.size(); ++i)
    if (tree.cliques[i] == tree.cliques[i + 1])
      throw ConfigError("build_junction_tree: duplicate clique");

  struct Candidate {
    std::size_t sep_vars;
    std::uint64_t sep_configs;
    std::size_t a, b;
    Scope separator;
  };
  std::vector<Candidate> cands;
  for (std::size_t i = 0; i < tree.cliques.size(); ++i) {
    for (std::size_t j = i + 1; j < tree.cliques.size(); ++j) {
      Scope sep = tree.cliques[i].intersect(tree.cliques[j]);
      if (sep.empty()) continue;
      cands.push_back({sep.size(), config_count(space, sep), i, j, std::move(sep)});
    }
  }
  std::sort(cands.begin(), cands.end(), [](const Candidate& x, const Candidate& y) {
    if (x.sep_vars != y.sep_vars) return x.sep_vars > y.sep_vars;
    if (x.sep_configs != y.sep_configs) return x.sep_configs > y.sep_configs;
    return std::tie(x.a, x.b) < std::tie(y.a, y.b);
  });

  UnionFind uf(tree.cliques.size());
  std::vector<std::pair<std::size_t, std::size_t>> chosen;
  std::vector<Scope> chosen_sep;
  for (const Candidate& c : cands) {
    if (uf.unite(c.a, c.b)) {
      chosen.emplace_back(c.a, c.b);
      chosen_sep.push_back(c.separator);
    }
  }

  // Component representatives (lowest node index per component).
  std::map<std::size_t, std::size_t> rep;
  for (std::size_t i = 0; i < tree.cliques.size(); ++i) {
    const std::size_t r = uf.find(i);
    if (!rep.count(r)) rep[r] = i;
  }

  if (rep.size() > 1) {
    const std::size_t empty_idx = tree.cliques.size();
    tree.cliques.push_back(Scope{});
    tree.empty_node = empty_idx;
    for (const auto& [root, node] : rep) {
      chosen.emplace_back(node, empty_idx);
      chosen_sep.push_back(Scope{});
    }
  }

  for (std::size_t n = 0; n < tree.cliques.size(); ++n)
    tree.potentials.push_back(SetFunction::constant_one(
        tree.cliques[n], Role::potential, config_count(space, tree.cliques[n])));

  std::vector<std::size_t> idx(chosen.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
    return chosen[x] < chosen[y];
  });
  for (std::size_t k : idx) {
    tree.edges.push_back(JunctionTree::Edge{
        chosen[k].first, chosen[k].second, chosen_sep[k],
        SetFunction::constant_one(chosen_sep[k], Role::potential,
                                  config_count(space, chosen_sep[k]))});
  }
  return tree;
}

bool check_junction_property(const JunctionTree& tree) {
  const std::size_t n = tree.node_count();
  if (n == 0) return false;
  if (tree.edges.size() + 1 != n) return false;
  const auto adj = tree.adjacency();

  // Connectivity + parents for path recovery from every source.
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<std::size_t> parent(n, SIZE_MAX);
    std::vector<bool> seen(n, false);
    std::queue<std::size_t> q;
    q.push(s);
    seen[s] = true;
    while (!q.empty()) {
      const std::size_t v = q.front();
      q.pop();
      for (const auto& [u, e] : adj[v]) {
        (void)e;
        if (!seen[u]) {
          seen[u] = true;
          parent[u] = v;
          q.push(u);
        }
      }
    }
    for (std::size_t t = 0; t < n; ++t) {
      if (!seen[t]) return false;
      if (t == s) continue;
      const Scope inter = tree.cliques[s].intersect(tree.cliques[t]);
      for (std::size_t v = t; v != s; v = parent[v])
        if (!inter.subset_of(tree.cliques[v])) return false;
    }
  }
  return true;
}

}  // namespace capax
