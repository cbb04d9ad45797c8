"""Lower/upper probability models on junction trees.

Thin wrapper over the compiled ``_capax`` extension: parse a model document,
enter evidence as event expressions, and query conditional probability
intervals, with a flat reference oracle for cross-checking.
"""

try:
    from ._capax import (  # packaged layout: extension inside the package
        DEFAULT_JOINT_GUARD,
        ConfigError,
        Error,
        EvidenceError,
        ExpressionError,
        Interval,
        InvalidOrderError,
        Model,
        ModelError,
        NumericDomainError,
        SchemaError,
        ScopeError,
        SizeGuardError,
        __version__,
        check_markov,
        flat_posterior,
        parse_model,
    )
except ImportError:  # flat layout: extension next to the package on sys.path
    from _capax import (
        DEFAULT_JOINT_GUARD,
        ConfigError,
        Error,
        EvidenceError,
        ExpressionError,
        Interval,
        InvalidOrderError,
        Model,
        ModelError,
        NumericDomainError,
        SchemaError,
        ScopeError,
        SizeGuardError,
        __version__,
        check_markov,
        flat_posterior,
        parse_model,
    )


def load(path, derive_guard=DEFAULT_JOINT_GUARD):
    """Parses a model document from a file path."""
    with open(path, "r", encoding="utf-8") as f:
        return parse_model(f.read(), derive_guard)


__all__ = [
    "DEFAULT_JOINT_GUARD",
    "ConfigError",
    "Error",
    "EvidenceError",
    "ExpressionError",
    "Interval",
    "InvalidOrderError",
    "Model",
    "ModelError",
    "NumericDomainError",
    "SchemaError",
    "ScopeError",
    "SizeGuardError",
    "__version__",
    "check_markov",
    "flat_posterior",
    "load",
    "parse_model",
]
