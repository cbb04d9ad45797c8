#ifndef CAPAX_EVENT_HPP
#define CAPAX_EVENT_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "capax/errors.hpp"

namespace capax {

using VarId = std::uint32_t;

/// A named discrete variable with an ordered domain of value labels.
struct Variable {
  std::string name;
  std::vector<std::string> domain;
};

/// Immutable table of the model's variables.  Canonical variable order is
/// declaration order; all scopes sort their ids accordingly.
class Space {
public:
  explicit Space(std::vector<Variable> vars);

  std::size_t size() const { return vars_.size(); }
  const Variable& var(VarId id) const;
  std::uint32_t card(VarId id) const;
  std::optional<VarId> find(std::string_view name) const;
  /// Throws SchemaError when the name is unknown.
  VarId id_of(std::string_view name) const;
  std::optional<std::uint32_t> value_index(VarId id, std::string_view label) const;

private:
  std::vector<Variable> vars_;
  std::map<std::string, VarId, std::less<>> index_;
};

/// A strictly increasing list of variable ids.
class Scope {
public:
  Scope() = default;
  explicit Scope(std::vector<VarId> ids);

  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  bool contains(VarId id) const;
  bool subset_of(const Scope& other) const;
  Scope unite(const Scope& other) const;
  Scope intersect(const Scope& other) const;
  Scope minus(const Scope& other) const;
  const std::vector<VarId>& ids() const { return ids_; }

  bool operator==(const Scope&) const = default;
  /// Lexicographic on the id lists; used for canonical orderings.
  bool operator<(const Scope& other) const { return ids_ < other.ids_; }

private:
  std::vector<VarId> ids_;
};

/// A subset of {0, ..., n-1} configuration indices over an n-configuration
/// space.  Stored as a 64-bit mask when n <= 64, otherwise as a sorted vector
/// of indices.  Value-semantic; ordered and hashable-by-comparison so it can
/// key associative containers.
class ConfigSet {
public:
  ConfigSet() = default;
  static ConfigSet none(std::uint64_t universe);
  static ConfigSet all(std::uint64_t universe);
  static ConfigSet of(std::uint64_t universe, std::span<const std::uint64_t> indices);
  static ConfigSet single(std::uint64_t universe, std::uint64_t index);

  std::uint64_t universe() const { return n_; }
  std::uint64_t count() const;
  bool empty() const;
  bool full() const { return count() == n_; }
  bool contains(std::uint64_t index) const;
  void insert(std::uint64_t index);

  bool subset_of(const ConfigSet& other) const;
  bool intersects(const ConfigSet& other) const;
  ConfigSet intersect(const ConfigSet& other) const;
  ConfigSet unite(const ConfigSet& other) const;
  ConfigSet complement() const;
  std::vector<std::uint64_t> indices() const;

  template <class F>
  void for_each(F&& fn) const {
    if (n_ <= 64) {
      std::uint64_t m = mask_;
      while (m != 0) {
        const std::uint64_t i = static_cast<std::uint64_t>(__builtin_ctzll(m));
        fn(i);
        m &= m - 1;
      }
    } else {
      for (std::uint64_t i : idx_) fn(i);
    }
  }

  /// Mask accessor, valid only when universe() <= 64 (dense transforms).
  std::uint64_t mask() const;

  bool operator==(const ConfigSet& other) const;
  bool operator<(const ConfigSet& other) const;

private:
  void check_same_universe(const ConfigSet& other) const;

  std::uint64_t n_ = 0;
  std::uint64_t mask_ = 0;             // used when n_ <= 64
  std::vector<std::uint64_t> idx_;     // sorted, used when n_ > 64
};

/// An extensional event: a set of configurations of its scope.
struct Event {
  Scope scope;
  ConfigSet configs;

  bool operator==(const Event&) const = default;
};

/// Number of configurations of the scope (product of cardinalities; 1 for
/// the empty scope).
std::uint64_t config_count(const Space& space, const Scope& scope);

/// Mixed-radix configuration index; digits are listed in scope order and the
/// last variable varies fastest.
std::uint64_t encode_config(const Space& space, const Scope& scope,
                            std::span<const std::uint32_t> digits);
std::vector<std::uint32_t> decode_config(const Space& space, const Scope& scope,
                                         std::uint64_t index);

Event empty_event(const Space& space, const Scope& scope);
Event full_event(const Space& space, const Scope& scope);
/// Event from explicit digit rows, one row per configuration.
Event event_of(const Space& space, const Scope& scope,
               const std::vector<std::vector<std::uint32_t>>& rows);

/// Maps configuration indices from one scope into a subscope.
class Projector {
public:
  Projector(const Space& space, const Scope& from, const Scope& to);
  std::uint64_t operator()(std::uint64_t index) const;

private:
  struct Digit {
    std::uint64_t in_stride;
    std::uint64_t card;
    std::uint64_t out_stride;
  };
  std::vector<Digit> digits_;
};

/// e_sub = {x_sub : x in e}.  Requires sub ⊆ e.scope.
Event project(const Space& space, const Event& e, const Scope& sub);
/// Cylinder e↑ = {x over super : x_e.scope in e}.  Requires e.scope ⊆ super.
Event extend(const Space& space, const Event& e, const Scope& super);
/// Set complement within the scope's configuration space.
Event complement(const Event& e);
/// □e = ∩_C extend(project(e, C ∩ scope), scope) over the given cliques.
/// With an empty clique list only the full event is representable.
Event rectangularize(const Space& space, const Event& e,
                     const std::vector<Scope>& cliques);

}  // namespace capax

#endif  // CAPAX_EVENT_HPP
