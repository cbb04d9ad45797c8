#ifndef CAPAX_MODEL_IO_HPP
#define CAPAX_MODEL_IO_HPP

#include <string>
#include <string_view>

#include "capax/oracle.hpp"

namespace capax {

/// Builds a Model from a JSON document:
///   variables     [{name, domain: [labels...]}, ...]
///   m_graph       [[nameA, nameB], ...]
///   q_graph       optional, defaults to m_graph
///   m_potentials  [{clique: [names], entries: [{event: [{var: label}...],
///                  value}]}, ...]
///   q_potentials  optional; when absent the commonality side is derived
///                 from the mass side through the flattened joint (subject
///                 to derive_guard)
///   m_separators / q_separators  optional [{separator: [names], entries}]
/// Both graphs are triangulated, junction trees are extracted, and declared
/// potentials bind into the first tree clique containing their scope (their
/// values are composed through projection).  Mass entries must be
/// nonnegative.  Single-clique mass sides must sum to 1; everything deeper
/// is left to the oracle checks.
Model parse_model(const std::string& text,
                  std::uint64_t derive_guard = kDefaultJointGuard);

/// Canonical JSON for a model: declared graphs, per-node potentials and all
/// named-scope separator potentials, with extensional events.  Freshly
/// parsed models round-trip bit-identically.
std::string serialize_model(const Model& model);

/// Event expression over the space's variables:
///   expr := term ('|' term)* ; term := atom ('&' atom)* ;
///   atom := IDENT '=' VALUE
/// The event's scope is the union of mentioned variables; its
/// configurations are the ones satisfying the formula.  Errors carry the
/// offending byte position.
Event parse_event(const Space& space, std::string_view text);

}  // namespace capax

#endif  // CAPAX_MODEL_IO_HPP
