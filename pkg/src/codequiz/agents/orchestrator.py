"""Runs the generator and validator agents against a chat client.

The loop is the same for both agents: send the prompt, execute any
tool calls the model makes (appending results to the transcript),
and strictly validate the final JSON. A schema rejection is sent back
to the model with the exact field paths; at most two repair rounds
are allowed before SchemaViolation propagates. Tool-call rounds are
capped so a model that never answers cannot spin forever.

Question ids are bound here, not by the model: by default the id is a
hash of the accepted payload, so identical content yields the same id
and reruns are reproducible.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from datetime import datetime, timezone
from importlib import resources
from typing import Callable, Sequence

from codequiz.agents.client import ChatClient, ChatResponse, ToolCall
from codequiz.agents.schemas import (
    QUESTION_SCHEMA,
    REPORT_SCHEMA,
    QuestionDraft,
    ReportDraft,
    SchemaViolation,
    canonical_json,
    parse_agent_output,
)
from codequiz.agents.tools import (
    ARITH_EVAL_TOOL,
    RUN_CODE_TOOL,
    UnknownTool,
    run_tool_call,
)
from codequiz.dimensions import CORRECT_ANSWER_VALIDITY
from codequiz.errors import CodequizError
from codequiz.ingestion import Chunk
from codequiz.minilang import (
    InvalidSyntax,
    ResourceLimits,
    UnsupportedConstruct,
    parse_program,
)

DEFAULT_MAX_TOOL_ROUNDS = 8
DEFAULT_MAX_REPAIRS = 2


class ToolLoopExceeded(CodequizError):
    """The model kept calling tools past the round cap."""


class InvalidCode(CodequizError):
    """A generated question's code does not parse in the sandbox."""


class MissingToolUse(CodequizError):
    """The validator accepted code-bearing content without running it."""


@dataclass(frozen=True)
class Option:
    label: str
    text: str
    feedback: str


@dataclass(frozen=True)
class GeneratedQuestion:
    question_id: str
    topic: str
    stem: str
    code: str | None
    options: tuple[Option, ...]
    correct_label: str
    created_at: str

    def to_payload(self) -> dict:
        return {
            "question_id": self.question_id,
            "topic": self.topic,
            "stem": self.stem,
            "code": self.code,
            "options": [
                {"label": o.label, "text": o.text, "feedback": o.feedback}
                for o in self.options
            ],
            "correct_label": self.correct_label,
            "created_at": self.created_at,
        }

    def correct_option(self) -> Option:
        for option in self.options:
            if option.label == self.correct_label:
                return option
        raise ValueError(f"no option labeled {self.correct_label!r}")


@dataclass(frozen=True)
class DimensionFinding:
    classification: str
    rationale: str


@dataclass(frozen=True)
class ValidationReport:
    question_id: str
    dimensions: dict[str, DimensionFinding]
    tool_trace: tuple[dict, ...]
    inconsistent: bool
    retry_count: int

    def to_payload(self) -> dict:
        return {
            "question_id": self.question_id,
            "dimensions": {
                key: {
                    "classification": finding.classification,
                    "rationale": finding.rationale,
                }
                for key, finding in self.dimensions.items()
            },
            "tool_trace": [dict(entry) for entry in self.tool_trace],
            "inconsistent": self.inconsistent,
        }


@dataclass(frozen=True)
class GenerationResult:
    question: GeneratedQuestion
    retry_count: int
    tool_trace: tuple[dict, ...]


def default_clock() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def question_from_payload(payload: dict) -> GeneratedQuestion:
    """Rebuild a question from its stored JSON form."""
    return GeneratedQuestion(
        question_id=payload["question_id"],
        topic=payload["topic"],
        stem=payload["stem"],
        code=payload["code"],
        options=tuple(
            Option(label=o["label"], text=o["text"], feedback=o["feedback"])
            for o in payload["options"]
        ),
        correct_label=payload["correct_label"],
        created_at=payload["created_at"],
    )


def content_hash_id(draft: QuestionDraft) -> str:
    digest = hashlib.sha256(canonical_json(draft.to_payload()).encode("utf-8"))
    return "q-" + digest.hexdigest()[:12]


def load_prompt(name: str) -> str:
    return (
        resources.files("codequiz.agents.prompts")
        .joinpath(f"{name}.txt")
        .read_text(encoding="utf-8")
    )


def _fill(template: str, values: dict[str, str]) -> str:
    # plain token replacement; prompt text is free to contain braces
    for key, value in values.items():
        template = template.replace("{{" + key + "}}", value)
    return template


def render_context(chunks: Sequence[Chunk]) -> str:
    parts = []
    for chunk in chunks:
        parts.append(f"[{chunk.kind}]\n{chunk.text}")
    return "\n\n".join(parts)


def _repair_message(violation: SchemaViolation) -> str:
    lines = ["Your last reply did not match the required JSON schema:"]
    for path, reason in violation.violations:
        lines.append(f"- {path}: {reason}")
    lines.append("Reply again with a single JSON object that fixes every issue.")
    return "\n".join(lines)


def _run_agent(
    client: ChatClient,
    system_prompt: str,
    user_message: str,
    tools: list[dict],
    schema: str,
    max_tool_rounds: int,
    max_repairs: int,
    limits: ResourceLimits | None,
):
    """Drive one agent to an accepted draft.

    Returns (draft, tool_trace, retry_count) where retry_count is the
    number of repair rounds that were needed.
    """
    declared = {tool["name"] for tool in tools}
    messages: list[dict] = [{"role": "user", "content": user_message}]
    trace: list[dict] = []
    tool_rounds = 0
    repairs = 0

    while True:
        response: ChatResponse = client.complete(system_prompt, messages, tools)

        if response.tool_calls:
            tool_rounds += 1
            if tool_rounds > max_tool_rounds:
                raise ToolLoopExceeded(
                    f"model exceeded {max_tool_rounds} tool-call rounds"
                )
            messages.append(_assistant_tool_message(response.tool_calls))
            for call in response.tool_calls:
                if call.name not in declared:
                    raise UnknownTool(f"unknown tool {call.name!r}")
                arguments = _parse_arguments(call)
                if isinstance(arguments, dict):
                    result = run_tool_call(call.name, arguments, limits=limits)
                else:
                    result = {
                        "error": "BadArguments",
                        "message": "arguments were not valid JSON",
                    }
                trace.append(
                    {"tool": call.name, "arguments": arguments, "result": result}
                )
                messages.append(
                    {
                        "role": "tool",
                        "tool_call_id": call.call_id,
                        "content": json.dumps(result, sort_keys=True),
                    }
                )
            continue

        try:
            draft = parse_agent_output(response.text, schema)
        except SchemaViolation as violation:
            repairs += 1
            if repairs > max_repairs:
                raise
            messages.append({"role": "assistant", "content": response.text})
            messages.append({"role": "user", "content": _repair_message(violation)})
            continue
        return draft, trace, repairs


def _assistant_tool_message(calls: tuple[ToolCall, ...]) -> dict:
    return {
        "role": "assistant",
        "content": "",
        "tool_calls": [
            {"id": c.call_id, "name": c.name, "arguments": c.arguments}
            for c in calls
        ],
    }


def _parse_arguments(call: ToolCall):
    try:
        parsed = json.loads(call.arguments)
    except json.JSONDecodeError:
        return call.arguments
    return parsed if isinstance(parsed, dict) else call.arguments


def generate_question(
    topic: str,
    context: Sequence[Chunk],
    client: ChatClient,
    *,
    id_factory: Callable[[QuestionDraft], str] = content_hash_id,
    clock: Callable[[], str] = default_clock,
    max_tool_rounds: int = DEFAULT_MAX_TOOL_ROUNDS,
    max_repairs: int = DEFAULT_MAX_REPAIRS,
    limits: ResourceLimits | None = None,
    batch_note: str = "",
) -> GenerationResult:
    """Produce one schema-valid question grounded in the given context."""
    if not context:
        raise ValueError("context must contain at least one chunk")

    user_message = _fill(
        load_prompt("generator_v1"),
        {
            "topic": topic,
            "context": render_context(context),
            "schema": _schema_excerpt(QUESTION_SCHEMA),
            "batch_note": batch_note,
        },
    )
    draft, trace, repairs = _run_agent(
        client,
        system_prompt=GENERATOR_SYSTEM_PROMPT,
        user_message=user_message,
        tools=[ARITH_EVAL_TOOL],
        schema=QUESTION_SCHEMA,
        max_tool_rounds=max_tool_rounds,
        max_repairs=max_repairs,
        limits=limits,
    )

    if draft.code is not None:
        try:
            parse_program(draft.code)
        except (InvalidSyntax, UnsupportedConstruct) as exc:
            raise InvalidCode(f"generated code rejected: {exc}") from exc

    question = GeneratedQuestion(
        question_id=id_factory(draft),
        topic=draft.topic,
        stem=draft.stem,
        code=draft.code,
        options=tuple(
            Option(label=o.label, text=o.text, feedback=o.feedback)
            for o in draft.options
        ),
        correct_label=draft.correct_label,
        created_at=clock(),
    )
    return GenerationResult(
        question=question, retry_count=repairs, tool_trace=tuple(trace)
    )


def validate_question(
    question: GeneratedQuestion,
    context: Sequence[Chunk],
    client: ChatClient,
    *,
    max_tool_rounds: int = DEFAULT_MAX_TOOL_ROUNDS,
    max_repairs: int = DEFAULT_MAX_REPAIRS,
    limits: ResourceLimits | None = None,
) -> ValidationReport:
    """Judge one question on all seven dimensions, tools in hand."""
    user_message = _fill(
        load_prompt("validator_v1"),
        {
            "question_json": canonical_json(question.to_payload()).rstrip("\n"),
            "context": render_context(context),
            "schema": _schema_excerpt(REPORT_SCHEMA),
        },
    )
    draft, trace, repairs = _run_agent(
        client,
        system_prompt=VALIDATOR_SYSTEM_PROMPT,
        user_message=user_message,
        tools=[ARITH_EVAL_TOOL, RUN_CODE_TOOL],
        schema=REPORT_SCHEMA,
        max_tool_rounds=max_tool_rounds,
        max_repairs=max_repairs,
        limits=limits,
    )
    assert isinstance(draft, ReportDraft)

    if question.code is not None:
        ran_code = any(entry["tool"] == RUN_CODE_TOOL["name"] for entry in trace)
        if not ran_code:
            raise MissingToolUse(
                "question has code but the validator never called run_code"
            )

    dimensions = {
        key: DimensionFinding(classification=cls, rationale=rationale)
        for key, (cls, rationale) in draft.dimensions.items()
    }
    return ValidationReport(
        question_id=question.question_id,
        dimensions=dimensions,
        tool_trace=tuple(trace),
        inconsistent=_is_inconsistent(question, dimensions, trace),
        retry_count=repairs,
    )


def _is_inconsistent(
    question: GeneratedQuestion,
    dimensions: dict[str, DimensionFinding],
    trace: list[dict],
) -> bool:
    """Flag a 'no' on answer validity that the executed output contradicts.

    If some run_code stdout in the trace matches the correct option's
    text and that very output is cited in the rationale, a 'no' is
    suspect. The flag never changes the classification.
    """
    finding = dimensions.get(CORRECT_ANSWER_VALIDITY)
    if finding is None or finding.classification != "no":
        return False
    correct_text = question.correct_option().text.strip()
    for entry in trace:
        if entry["tool"] != RUN_CODE_TOOL["name"]:
            continue
        stdout = entry["result"].get("stdout")
        if not isinstance(stdout, str):
            continue
        executed = stdout.strip()
        if not executed:
            continue
        if executed == correct_text and executed in finding.rationale:
            return True
    return False


def _schema_excerpt(schema: str) -> str:
    from codequiz.agents.schemas import load_schema_text

    return load_schema_text(schema).rstrip("\n")


GENERATOR_SYSTEM_PROMPT = (
    "You write multiple-choice questions that test code comprehension. "
    "You ground every question in the provided course material, you verify "
    "every numeric claim with the arith_eval tool before asserting it, and "
    "you answer with a single JSON object only."
)

VALIDATOR_SYSTEM_PROMPT = (
    "You review multiple-choice code-comprehension questions. You execute "
    "any code with the run_code tool and check arithmetic with arith_eval "
    "before judging, and you answer with a single JSON object only."
)
