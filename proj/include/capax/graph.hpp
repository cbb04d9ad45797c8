#ifndef CAPAX_GRAPH_HPP
#define CAPAX_GRAPH_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "capax/setfunc.hpp"

namespace capax {

/// Undirected simple graph over variable ids.  Edges are canonicalized
/// (smaller id first) and deduplicated; self-loops are rejected.
class Graph {
public:
  Graph() = default;
  Graph(std::vector<VarId> vertices, std::vector<std::pair<VarId, VarId>> edges);

  const std::vector<VarId>& vertices() const { return vertices_; }
  const std::vector<std::pair<VarId, VarId>>& edges() const { return edges_; }
  bool has_vertex(VarId v) const;
  bool has_edge(VarId a, VarId b) const;
  std::vector<VarId> neighbors(VarId v) const;

  bool operator==(const Graph&) const = default;

private:
  std::vector<VarId> vertices_;                     // sorted
  std::vector<std::pair<VarId, VarId>> edges_;      // sorted, a < b
};

struct Triangulation {
  Graph chordal;
  std::vector<VarId> elimination_order;
};

/// Min-fill triangulation; ties broken by minimum degree, then by canonical
/// vertex order.  Already-chordal graphs come back with an unchanged edge
/// set, and the elimination order is perfect for the result.
Triangulation triangulate(const Graph& g);

/// Maximum-cardinality-search chordality test (independent of triangulate).
bool is_chordal(const Graph& g);

/// Maximal cliques of a chordal graph from a perfect elimination order,
/// deterministically ordered by scope.  Throws InvalidOrderError when the
/// order is not perfect for g.
std::vector<Scope> maximal_cliques(const Graph& chordal,
                                   const std::vector<VarId>& elimination_order);

/// A junction tree: clique nodes plus separator edges, each carrying a
/// potential.  When the clique graph is disconnected an artificial node with
/// empty scope joins the components (always present for >1 component, never
/// otherwise); it is the last node.
struct JunctionTree {
  struct Edge {
    std::size_t a = 0;
    std::size_t b = 0;
    Scope separator;
    SetFunction potential;
  };

  std::vector<Scope> cliques;
  std::vector<SetFunction> potentials;  // one per clique, role 'potential'
  std::vector<Edge> edges;
  std::optional<std::size_t> empty_node;

  std::size_t node_count() const { return cliques.size(); }
  /// Adjacency as (neighbor node, edge index) lists.
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adjacency() const;
};

/// Builds the tree over the given cliques via a maximum-weight spanning tree
/// on separator variable count; weight ties prefer the larger separator
/// configuration count, then canonical clique order.  All potentials are
/// initialized to the constant-1 function on nonempty events.
JunctionTree build_junction_tree(const Space& space, const std::vector<Scope>& cliques);

/// Running intersection: for every pair of nodes, their scope intersection
/// is contained in every node on the connecting path.
bool check_junction_property(const JunctionTree& tree);

}  // namespace capax

#endif  // CAPAX_GRAPH_HPP
