"""Exception hierarchy shared across the toolkit.

The CLI maps these onto exit codes: load-time data problems -> 1,
configuration problems -> 2, original/sample mismatches -> 3.
"""


class HetSampleError(Exception):
    """Base class for all toolkit errors."""


class GraphFormatError(HetSampleError):
    """Malformed TSV/JSON input (bad field count, self-loop, unparseable line)."""


class SchemaError(HetSampleError):
    """Type label or edge-type signature inconsistent with the schema."""


class EdgeReferenceError(HetSampleError):
    """Edge endpoint references a node that was never declared."""


class DuplicateNodeError(HetSampleError):
    """The same node id is declared more than once."""


class GraphLookupError(HetSampleError):
    """Unknown node id or type id passed to a graph query."""


class ParameterError(HetSampleError):
    """Invalid algorithm or generator parameters."""


class ConfigError(HetSampleError):
    """Invalid or incomplete run configuration (weights, meta-paths, methods)."""


class MetricDomainError(HetSampleError):
    """Metric requested outside its domain (empty sample, edgeless graph)."""


class DataMismatchError(HetSampleError):
    """Sample data inconsistent with the original graph it is evaluated against."""
