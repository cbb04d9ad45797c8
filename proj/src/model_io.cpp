#include "capax/model_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "json.hpp"

namespace capax {

namespace {

using njson = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw SchemaError("model document: " + path + ": " + what);
}

const njson& need(const njson& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) fail(path, std::string("missing key '") + key + "'");
  return *it;
}

std::string need_string(const njson& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

double need_number(const njson& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "value is not finite");
  return v;
}

const njson& need_array(const njson& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  return j;
}

Space parse_variables(const njson& doc) {
  const njson& arr = need_array(need(doc, "variables", "$"), "$.variables");
  std::vector<Variable> vars;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string path = "$.variables[" + std::to_string(i) + "]";
    const njson& v = arr[i];
    Variable out;
    out.name = need_string(need(v, "name", path), path + ".name");
    const njson& dom = need_array(need(v, "domain", path), path + ".domain");
    if (dom.empty()) fail(path + ".domain", "domain is empty");
    for (std::size_t k = 0; k < dom.size(); ++k)
      out.domain.push_back(need_string(dom[k], path + ".domain[" + std::to_string(k) + "]"));
    vars.push_back(std::move(out));
  }
  if (vars.empty()) fail("$.variables", "no variables declared");
  return Space(std::move(vars));
}

VarId resolve_var(const Space& space, const std::string& name, const std::string& path) {
  const auto id = space.find(name);
  if (!id) fail(path, "unknown variable '" + name + "'");
  return *id;
}

Graph parse_graph(const Space& space, const njson& edges, const std::string& path) {
  std::vector<VarId> vertices(space.size());
  for (VarId v = 0; v < space.size(); ++v) vertices[v] = v;
  std::vector<std::pair<VarId, VarId>> out;
  need_array(edges, path);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string epath = path + "[" + std::to_string(i) + "]";
    const njson& e = need_array(edges[i], epath);
    if (e.size() != 2) fail(epath, "an edge needs exactly two endpoints");
    const VarId a = resolve_var(space, need_string(e[0], epath + "[0]"), epath + "[0]");
    const VarId b = resolve_var(space, need_string(e[1], epath + "[1]"), epath + "[1]");
    if (a == b) fail(epath, "self-loop");
    out.emplace_back(a, b);
  }
  return Graph(std::move(vertices), std::move(out));
}

Scope parse_scope(const Space& space, const njson& names, const std::string& path) {
  need_array(names, path);
  std::vector<VarId> ids;
  for (std::size_t i = 0; i < names.size(); ++i) {
    const std::string ipath = path + "[" + std::to_string(i) + "]";
    const VarId id = resolve_var(space, need_string(names[i], ipath), ipath);
    if (std::find(ids.begin(), ids.end(), id) != ids.end())
      fail(ipath, "variable listed twice");
    ids.push_back(id);
  }
  return Scope(std::move(ids));
}

ConfigSet parse_entry_event(const Space& space, const Scope& scope, const njson& ev,
                            const std::string& path) {
  need_array(ev, path);
  ConfigSet configs = ConfigSet::none(config_count(space, scope));
  for (std::size_t i = 0; i < ev.size(); ++i) {
    const std::string cpath = path + "[" + std::to_string(i) + "]";
    const njson& config = ev[i];
    if (!config.is_object()) fail(cpath, "expected a {variable: value} object");
    if (config.size() != scope.size())
      fail(cpath, "configuration must name exactly the clique's variables");
    std::vector<std::uint32_t> digits;
    for (VarId id : scope.ids()) {
      const std::string& name = space.var(id).name;
      const auto it = config.find(name);
      if (it == config.end()) fail(cpath, "missing variable '" + name + "'");
      const std::string label = need_string(*it, cpath + "." + name);
      const auto vi = space.value_index(id, label);
      if (!vi) fail(cpath + "." + name, "unknown value '" + label + "'");
      digits.push_back(*vi);
    }
    configs.insert(encode_config(space, scope, digits));
  }
  return configs;
}

/// A document potential before binding: values are read through projection,
/// so the mass side answers 0 and the commonality side 1 off its entries.
SetFunction parse_potential_fn(const Space& space, const Scope& scope, const njson& entries,
                               TreeSide side, const std::string& path) {
  const std::uint64_t n = config_count(space, scope);
  const Role role = side == TreeSide::mass ? Role::potential : Role::commonality;
  SetFunction f(scope, role, n);
  std::set<ConfigSet> seen;
  need_array(entries, path);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const std::string epath = path + "[" + std::to_string(i) + "]";
    const njson& entry = entries[i];
    const ConfigSet ev =
        parse_entry_event(space, scope, need(entry, "event", epath), epath + ".event");
    const double value = need_number(need(entry, "value", epath), epath + ".value");
    if (!seen.insert(ev).second) fail(epath + ".event", "duplicate event");
    if (side == TreeSide::mass && value < -kCompareTol)
      fail(epath + ".value", "mass entries must be nonnegative");
    if (ev.empty()) {
      const double expected = side == TreeSide::mass ? 0.0 : 1.0;
      if (std::abs(value - expected) > kCompareTol)
        fail(epath + ".value", side == TreeSide::mass
                                   ? "the empty event carries no mass"
                                   : "commonality is 1 at the empty event");
      continue;  // implicit either way
    }
    f.set(ev, value);
  }
  return f;
}

/// Composes a bound factor into its containing node pointwise through the
/// projection onto the factor's scope.
void multiply_in(const Space& space, SetFunction& node, const SetFunction& factor) {
  Projector proj(space, node.scope(), factor.scope());
  const std::uint64_t fn = factor.configs();
  SetFunction fresh(node.scope(), node.role(), node.configs());
  for (const auto& [ev, val] : node.entries()) {
    ConfigSet key = ConfigSet::none(fn);
    ev.for_each([&](std::uint64_t i) { key.insert(proj(i)); });
    fresh.set(ev, val * factor.value_at(key));
  }
  node = fresh;
}

void bind_potentials(const Space& space, JunctionTree& tree, TreeSide side,
                     const njson& list, const std::string& path) {
  need_array(list, path);
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string ppath = path + "[" + std::to_string(i) + "]";
    const njson& pot = list[i];
    const Scope scope =
        parse_scope(space, need(pot, "clique", ppath), ppath + ".clique");
    const SetFunction f = parse_potential_fn(
        space, scope, need(pot, "entries", ppath), side, ppath + ".entries");
    std::size_t node = tree.node_count();
    for (std::size_t k = 0; k < tree.node_count(); ++k) {
      if (scope.subset_of(tree.cliques[k])) {
        node = k;
        break;
      }
    }
    if (node == tree.node_count())
      throw ModelError("model document: " + ppath +
                       ": clique is not contained in any junction tree node "
                       "(not a clique of the triangulated graph)");
    multiply_in(space, tree.potentials[node], f);
  }
}

void bind_separators(const Space& space, JunctionTree& tree, TreeSide side,
                     const njson& list, const std::string& path) {
  need_array(list, path);
  std::vector<bool> claimed(tree.edges.size(), false);
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string spath = path + "[" + std::to_string(i) + "]";
    const njson& sep = list[i];
    const Scope scope =
        parse_scope(space, need(sep, "separator", spath), spath + ".separator");
    const SetFunction f = parse_potential_fn(
        space, scope, need(sep, "entries", spath), side, spath + ".entries");
    std::size_t edge = tree.edges.size();
    for (std::size_t k = 0; k < tree.edges.size(); ++k) {
      if (!claimed[k] && tree.edges[k].separator == scope) {
        edge = k;
        break;
      }
    }
    if (edge == tree.edges.size())
      throw ModelError("model document: " + spath +
                       ": no unclaimed junction tree edge has this separator");
    claimed[edge] = true;
    tree.edges[edge].potential = f;
  }
}

/// Fills the commonality tree with the localizations of the commonality
/// derived from the flattened mass side.
void derive_q_side(const Space& space, const JunctionTree& m_tree, JunctionTree& q_tree,
                   std::uint64_t guard) {
  SetFunction m_joint = product_joint(space, m_tree, TreeSide::mass, guard);
  const SetFunction q =
      commonality_transform(dual_function(inverse_mobius(m_joint)));
  for (std::size_t i = 0; i < q_tree.node_count(); ++i)
    q_tree.potentials[i] = localize_commonality(space, q, q_tree.cliques[i]);
  for (auto& e : q_tree.edges)
    e.potential = localize_commonality(space, q, e.separator);
}

JunctionTree tree_for(const Space& space, const Graph& g) {
  const Triangulation tri = triangulate(g);
  return build_junction_tree(space, maximal_cliques(tri.chordal, tri.elimination_order));
}

}  // namespace

Model parse_model(const std::string& text, std::uint64_t derive_guard) {
  njson doc;
  try {
    doc = njson::parse(text);
  } catch (const njson::parse_error& e) {
    throw SchemaError(std::string("model document: not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("$", "expected a top-level object");

  const Space space = parse_variables(doc);
  const Graph m_graph = parse_graph(space, need(doc, "m_graph", "$"), "$.m_graph");
  const Graph q_graph = doc.contains("q_graph")
                            ? parse_graph(space, doc["q_graph"], "$.q_graph")
                            : m_graph;

  JunctionTree m_tree = tree_for(space, m_graph);
  JunctionTree q_tree = tree_for(space, q_graph);

  bind_potentials(space, m_tree, TreeSide::mass,
                  need(doc, "m_potentials", "$"), "$.m_potentials");
  if (doc.contains("m_separators"))
    bind_separators(space, m_tree, TreeSide::mass, doc["m_separators"],
                    "$.m_separators");

  if (doc.contains("q_potentials")) {
    bind_potentials(space, q_tree, TreeSide::commonality, doc["q_potentials"],
                    "$.q_potentials");
    if (doc.contains("q_separators"))
      bind_separators(space, q_tree, TreeSide::commonality, doc["q_separators"],
                      "$.q_separators");
  } else {
    if (doc.contains("q_separators"))
      fail("$.q_separators", "q_separators without q_potentials");
    derive_q_side(space, m_tree, q_tree, derive_guard);
  }

  if (m_tree.node_count() == 1) {
    const double total = m_tree.potentials[0].total();
    if (std::abs(total - 1.0) > kCompareTol)
      throw ModelError("model document: single-clique mass entries sum to " +
                       std::to_string(total) + ", expected 1");
  }

  return Model(space, m_graph, q_graph, std::move(m_tree), std::move(q_tree));
}

namespace {

njson event_to_json(const Space& space, const Scope& scope, const ConfigSet& configs) {
  njson out = njson::array();
  for (std::uint64_t idx : configs.indices()) {
    const std::vector<std::uint32_t> digits = decode_config(space, scope, idx);
    njson config = njson::object();
    for (std::size_t i = 0; i < scope.ids().size(); ++i) {
      const VarId id = scope.ids()[i];
      config[space.var(id).name] = space.var(id).domain[digits[i]];
    }
    out.push_back(std::move(config));
  }
  return out;
}

njson names_of(const Space& space, const Scope& scope) {
  njson out = njson::array();
  for (VarId id : scope.ids()) out.push_back(space.var(id).name);
  return out;
}

njson potential_entries(const Space& space, const SetFunction& f, bool skip_empty) {
  njson out = njson::array();
  for (const auto& [ev, val] : f.entries()) {
    if (skip_empty && ev.empty()) continue;
    njson entry = njson::object();
    entry["event"] = event_to_json(space, f.scope(), ev);
    entry["value"] = val;
    out.push_back(std::move(entry));
  }
  return out;
}

njson graph_to_json(const Space& space, const Graph& g) {
  njson out = njson::array();
  for (const auto& [a, b] : g.edges())
    out.push_back(njson::array({space.var(a).name, space.var(b).name}));
  return out;
}

njson tree_potentials_json(const Space& space, const JunctionTree& tree, bool q_side) {
  njson out = njson::array();
  for (std::size_t i = 0; i < tree.node_count(); ++i) {
    if (tree.empty_node && *tree.empty_node == i) continue;
    njson pot = njson::object();
    pot["clique"] = names_of(space, tree.cliques[i]);
    pot["entries"] = potential_entries(space, tree.potentials[i], q_side);
    out.push_back(std::move(pot));
  }
  return out;
}

njson tree_separators_json(const Space& space, const JunctionTree& tree, bool q_side) {
  njson out = njson::array();
  for (const auto& e : tree.edges) {
    if (e.separator.empty()) continue;
    njson sep = njson::object();
    sep["separator"] = names_of(space, e.separator);
    sep["entries"] = potential_entries(space, e.potential, q_side);
    out.push_back(std::move(sep));
  }
  return out;
}

}  // namespace

std::string serialize_model(const Model& model) {
  const Space& space = model.space();
  njson doc = njson::object();
  njson vars = njson::array();
  for (VarId id = 0; id < space.size(); ++id) {
    njson v = njson::object();
    v["name"] = space.var(id).name;
    v["domain"] = space.var(id).domain;
    vars.push_back(std::move(v));
  }
  doc["variables"] = std::move(vars);
  doc["m_graph"] = graph_to_json(space, model.m_graph());
  doc["q_graph"] = graph_to_json(space, model.q_graph());
  doc["m_potentials"] = tree_potentials_json(space, model.m_tree(), false);
  doc["q_potentials"] = tree_potentials_json(space, model.q_tree(), true);
  njson m_seps = tree_separators_json(space, model.m_tree(), false);
  if (!m_seps.empty()) doc["m_separators"] = std::move(m_seps);
  njson q_seps = tree_separators_json(space, model.q_tree(), true);
  if (!q_seps.empty()) doc["q_separators"] = std::move(q_seps);
  return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Event expressions

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool value_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' ||
         c == '+' || c == '-';
}

struct ExprParser {
  const Space& space;
  std::string_view text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  std::pair<VarId, std::uint32_t> atom() {
    skip_ws();
    const std::size_t name_pos = pos;
    if (pos >= text.size() || !ident_start(text[pos]))
      throw ExpressionError("expected a variable name", pos);
    while (pos < text.size() && ident_char(text[pos])) ++pos;
    const std::string name(text.substr(name_pos, pos - name_pos));
    skip_ws();
    if (pos >= text.size() || text[pos] != '=')
      throw ExpressionError("expected '=' after '" + name + "'", pos);
    ++pos;
    skip_ws();
    const std::size_t value_pos = pos;
    while (pos < text.size() && value_char(text[pos])) ++pos;
    if (pos == value_pos) throw ExpressionError("expected a value", pos);
    const std::string label(text.substr(value_pos, pos - value_pos));
    const auto id = space.find(name);
    if (!id) throw ExpressionError("unknown variable '" + name + "'", name_pos);
    const auto vi = space.value_index(*id, label);
    if (!vi)
      throw ExpressionError("unknown value '" + label + "' for variable '" + name + "'",
                            value_pos);
    return {*id, *vi};
  }

  std::vector<std::pair<VarId, std::uint32_t>> term() {
    std::vector<std::pair<VarId, std::uint32_t>> atoms{atom()};
    for (;;) {
      skip_ws();
      if (pos < text.size() && text[pos] == '&') {
        ++pos;
        atoms.push_back(atom());
      } else {
        return atoms;
      }
    }
  }

  std::vector<std::vector<std::pair<VarId, std::uint32_t>>> expr() {
    std::vector<std::vector<std::pair<VarId, std::uint32_t>>> terms{term()};
    for (;;) {
      skip_ws();
      if (pos < text.size() && text[pos] == '|') {
        ++pos;
        terms.push_back(term());
      } else {
        break;
      }
    }
    skip_ws();
    if (pos != text.size()) throw ExpressionError("unexpected character", pos);
    return terms;
  }
};

}  // namespace

Event parse_event(const Space& space, std::string_view text) {
  ExprParser parser{space, text};
  const auto terms = parser.expr();

  std::set<VarId> mentioned;
  for (const auto& t : terms)
    for (const auto& [id, _] : t) mentioned.insert(id);
  Scope scope(std::vector<VarId>(mentioned.begin(), mentioned.end()));

  const std::uint64_t n = config_count(space, scope);
  ConfigSet configs = ConfigSet::none(n);
  for (std::uint64_t idx = 0; idx < n; ++idx) {
    const std::vector<std::uint32_t> digits = decode_config(space, scope, idx);
    const auto digit_of = [&](VarId id) {
      const auto& ids = scope.ids();
      const std::size_t at = std::lower_bound(ids.begin(), ids.end(), id) - ids.begin();
      return digits[at];
    };
    const bool satisfied = std::any_of(terms.begin(), terms.end(), [&](const auto& t) {
      return std::all_of(t.begin(), t.end(), [&](const auto& a) {
        return digit_of(a.first) == a.second;
      });
    });
    if (satisfied) configs.insert(idx);
  }
  return Event{std::move(scope), std::move(configs)};
}

}  // namespace capax
