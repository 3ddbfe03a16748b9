"""Deterministic tools the agents may call.

Tool failures that a model can act on (bad expression, program error)
are returned as data so they land in the transcript; only a call to a
tool that was never declared raises.
"""

from __future__ import annotations

from codequiz import arith
from codequiz.errors import CodequizError
from codequiz.minilang import (
    InvalidSyntax,
    ResourceLimits,
    UnsupportedConstruct,
    execute,
    parse_program,
)

ARITH_EVAL_TOOL = {
    "name": "arith_eval",
    "description": (
        "Evaluate one arithmetic expression with +, -, *, /, //, %, ** (or ^) "
        "and parentheses. Returns the value as a string and whether it is exact "
        "(integer) rather than a real approximation."
    ),
    "parameters": {
        "type": "object",
        "additionalProperties": False,
        "required": ["expression"],
        "properties": {
            "expression": {"type": "string", "description": "The expression to evaluate."}
        },
    },
}

RUN_CODE_TOOL = {
    "name": "run_code",
    "description": (
        "Run a program written in the supported Python subset inside the "
        "sandbox. Returns status, captured stdout, final top-level variable "
        "bindings, and the error if one occurred."
    ),
    "parameters": {
        "type": "object",
        "additionalProperties": False,
        "required": ["source"],
        "properties": {
            "source": {"type": "string", "description": "Program source code."}
        },
    },
}

TOOL_DECLARATIONS = {
    ARITH_EVAL_TOOL["name"]: ARITH_EVAL_TOOL,
    RUN_CODE_TOOL["name"]: RUN_CODE_TOOL,
}


class UnknownTool(CodequizError):
    """The model called a tool that was not declared."""


def _arith_eval(arguments: dict) -> dict:
    expression = arguments.get("expression")
    if not isinstance(expression, str):
        return {"error": "BadArguments", "message": "expression must be a string"}
    try:
        value = arith.evaluate_expression(expression)
    except arith.ArithError as exc:
        return {"error": type(exc).__name__, "message": str(exc)}
    return {"value": arith.render_value(value), "is_exact": arith.is_exact(value)}


def _run_code(arguments: dict, limits: ResourceLimits | None) -> dict:
    source = arguments.get("source")
    if not isinstance(source, str):
        return {"error": "BadArguments", "message": "source must be a string"}
    try:
        program = parse_program(source)
    except (InvalidSyntax, UnsupportedConstruct) as exc:
        return {"error": type(exc).__name__, "message": str(exc)}
    result = execute(program, limits=limits)
    return result.as_payload()


def run_tool_call(
    name: str,
    arguments: dict,
    limits: ResourceLimits | None = None,
) -> dict:
    """Execute one declared tool and return its JSON-ready result."""
    if name == ARITH_EVAL_TOOL["name"]:
        return _arith_eval(arguments)
    if name == RUN_CODE_TOOL["name"]:
        return _run_code(arguments, limits)
    raise UnknownTool(f"unknown tool {name!r}")
