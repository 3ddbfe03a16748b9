"""MiniLang: a sandboxed subset of the teaching language.

Parsing produces a whitelisted syntax tree; execution runs it in a
tree-walking interpreter under explicit step, output, and collection-size
limits, reporting stdout, final top-level bindings, and any failure as
data rather than host exceptions.
"""

from .interp import (
    ExecutionError,
    ExecutionResult,
    ResourceLimits,
    execute,
)
from .parse import (
    InvalidSyntax,
    Program,
    SandboxError,
    UnsupportedConstruct,
    parse_program,
)

__all__ = [
    "ExecutionError",
    "ExecutionResult",
    "InvalidSyntax",
    "Program",
    "ResourceLimits",
    "SandboxError",
    "UnsupportedConstruct",
    "execute",
    "parse_program",
]
