#ifndef CAPAX_ERRORS_HPP
#define CAPAX_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace capax {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Scope/universe mismatches: projecting to a non-subscope, comparing events
/// over different configuration universes, querying outside every clique.
class ScopeError : public Error {
public:
  using Error::Error;
};

/// An operation would exceed its configured size guard.
class SizeGuardError : public Error {
public:
  using Error::Error;
};

/// Structural problems in a model document (missing keys, bad types,
/// unknown names, duplicate entries).  CLI exit code 2.
class SchemaError : public Error {
public:
  using Error::Error;
};

/// Semantically invalid model (unnormalized prior, potential clique not in
/// the triangulated graph, inconsistent dual pair, ...).  CLI exit code 2.
class ModelError : public Error {
public:
  using Error::Error;
};

/// Event-expression syntax or name errors; carries the offending position.
/// CLI exit code 3.
class ExpressionError : public Error {
public:
  ExpressionError(const std::string& what, std::size_t position)
      : Error(what), position_(position) {}
  std::size_t position() const { return position_; }

private:
  std::size_t position_ = 0;
};

/// Evidence that cannot be entered: empty event, or scope not contained in
/// any clique of one of the trees.  CLI exit code 3.
class EvidenceError : public Error {
public:
  using Error::Error;
};

/// Numeric inputs outside their valid domain beyond tolerance.
class NumericDomainError : public Error {
public:
  using Error::Error;
};

/// An elimination order that is not perfect for the given chordal graph.
class InvalidOrderError : public Error {
public:
  using Error::Error;
};

/// Misuse of a structural operation (e.g. rectangularizing a non-full event
/// against an empty clique list).
class ConfigError : public Error {
public:
  using Error::Error;
};

}  // namespace capax

#endif  // CAPAX_ERRORS_HPP
