"""Strict parsing of agent JSON output.

Agents return plain JSON text. ``parse_agent_output`` applies the
published schema by hand rather than through a generic validator so
that every rejection carries an exact field path; the orchestrator
echoes those paths back to the model on a repair round.

Unknown fields are rejected everywhere. The question schema demands
exactly four options labeled A through D; the report schema demands
exactly the seven known dimensions, each classified with the
vocabulary for that dimension.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from codequiz.dimensions import DIMENSIONS, VOCABULARY
from codequiz.errors import CodequizError

QUESTION_SCHEMA = "generated_question"
REPORT_SCHEMA = "validation_report"

_SCHEMA_FILES = {
    QUESTION_SCHEMA: "generated_question.schema.json",
    REPORT_SCHEMA: "validation_report.schema.json",
}

OPTION_LABELS = ("A", "B", "C", "D")


class SchemaViolation(CodequizError):
    """Agent output does not satisfy the schema.

    violations: list of (field_path, reason) pairs, e.g.
    ("$.options", "expected exactly 4 options, got 3").
    """

    def __init__(self, violations: list[tuple[str, str]]):
        self.violations = list(violations)
        lines = "; ".join(f"{path}: {reason}" for path, reason in self.violations)
        super().__init__(f"schema violation: {lines}")


@dataclass(frozen=True)
class OptionDraft:
    label: str
    text: str
    feedback: str


@dataclass(frozen=True)
class QuestionDraft:
    """A question as emitted by the generator, before an id is bound."""

    topic: str
    stem: str
    code: str | None
    options: tuple[OptionDraft, ...]
    correct_label: str

    def to_payload(self) -> dict:
        return {
            "topic": self.topic,
            "stem": self.stem,
            "code": self.code,
            "options": [
                {"label": o.label, "text": o.text, "feedback": o.feedback}
                for o in self.options
            ],
            "correct_label": self.correct_label,
        }


@dataclass(frozen=True)
class ReportDraft:
    """A validation verdict as emitted by the validator.

    dimensions maps each of the seven dimension keys to a
    (classification, rationale) pair.
    """

    dimensions: dict[str, tuple[str, str]]

    def to_payload(self) -> dict:
        return {
            "dimensions": {
                key: {"classification": cls, "rationale": rationale}
                for key, (cls, rationale) in self.dimensions.items()
            }
        }


def canonical_json(obj) -> str:
    """The single serialization used for hashing and storage."""
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def load_schema_text(schema: str) -> str:
    """Raw bytes-exact text of the published schema file."""
    try:
        filename = _SCHEMA_FILES[schema]
    except KeyError:
        raise ValueError(f"unknown schema {schema!r}") from None
    return (
        resources.files("codequiz.agents.schemas_data")
        .joinpath(filename)
        .read_text(encoding="utf-8")
    )


def _require_str(value, path: str, violations: list, allow_empty: bool = False) -> str | None:
    if not isinstance(value, str):
        violations.append((path, f"expected a string, got {type(value).__name__}"))
        return None
    if not allow_empty and not value.strip():
        violations.append((path, "must not be empty"))
        return None
    return value


def _check_keys(obj: dict, path: str, required: tuple, violations: list) -> None:
    for key in required:
        if key not in obj:
            violations.append((f"{path}.{key}", "missing required field"))
    for key in obj:
        if key not in required:
            violations.append((f"{path}.{key}", "unknown field"))


def _validate_question(payload, violations: list) -> QuestionDraft | None:
    if not isinstance(payload, dict):
        violations.append(("$", f"expected an object, got {type(payload).__name__}"))
        return None
    _check_keys(payload, "$", ("topic", "stem", "code", "options", "correct_label"), violations)

    topic = _require_str(payload.get("topic"), "$.topic", violations) if "topic" in payload else None
    stem = _require_str(payload.get("stem"), "$.stem", violations) if "stem" in payload else None

    code = None
    if "code" in payload:
        raw_code = payload["code"]
        if raw_code is not None:
            code = _require_str(raw_code, "$.code", violations)

    options: list[OptionDraft] = []
    if "options" in payload:
        raw_options = payload["options"]
        if not isinstance(raw_options, list):
            violations.append(("$.options", f"expected an array, got {type(raw_options).__name__}"))
        elif len(raw_options) != len(OPTION_LABELS):
            violations.append(
                ("$.options", f"expected exactly {len(OPTION_LABELS)} options, got {len(raw_options)}")
            )
        else:
            seen_labels: set[str] = set()
            seen_texts: set[str] = set()
            for i, raw in enumerate(raw_options):
                opt_path = f"$.options[{i}]"
                if not isinstance(raw, dict):
                    violations.append((opt_path, f"expected an object, got {type(raw).__name__}"))
                    continue
                _check_keys(raw, opt_path, ("label", "text", "feedback"), violations)
                label = raw.get("label")
                if "label" in raw:
                    if label not in OPTION_LABELS:
                        violations.append((f"{opt_path}.label", f"label must be one of {', '.join(OPTION_LABELS)}"))
                    elif label in seen_labels:
                        violations.append((f"{opt_path}.label", f"duplicate label {label}"))
                    else:
                        seen_labels.add(label)
                text = _require_str(raw.get("text"), f"{opt_path}.text", violations) if "text" in raw else None
                if text is not None:
                    if text in seen_texts:
                        violations.append((f"{opt_path}.text", "duplicate option text"))
                    seen_texts.add(text)
                feedback = (
                    _require_str(raw.get("feedback"), f"{opt_path}.feedback", violations)
                    if "feedback" in raw
                    else None
                )
                if label in OPTION_LABELS and text is not None and feedback is not None:
                    options.append(OptionDraft(label=label, text=text, feedback=feedback))

    correct_label = None
    if "correct_label" in payload:
        correct_label = payload["correct_label"]
        if correct_label not in OPTION_LABELS:
            violations.append(
                ("$.correct_label", f"must be one of {', '.join(OPTION_LABELS)}")
            )

    if violations:
        return None
    return QuestionDraft(
        topic=topic,
        stem=stem,
        code=code,
        options=tuple(options),
        correct_label=correct_label,
    )


def _validate_report(payload, violations: list) -> ReportDraft | None:
    if not isinstance(payload, dict):
        violations.append(("$", f"expected an object, got {type(payload).__name__}"))
        return None
    _check_keys(payload, "$", ("dimensions",), violations)

    dimensions: dict[str, tuple[str, str]] = {}
    if "dimensions" in payload:
        raw_dims = payload["dimensions"]
        if not isinstance(raw_dims, dict):
            violations.append(("$.dimensions", f"expected an object, got {type(raw_dims).__name__}"))
        else:
            for key in DIMENSIONS:
                if key not in raw_dims:
                    violations.append((f"$.dimensions.{key}", "missing required field"))
            for key in raw_dims:
                if key not in DIMENSIONS:
                    violations.append((f"$.dimensions.{key}", "unknown dimension"))
            for key in DIMENSIONS:
                if key not in raw_dims:
                    continue
                entry = raw_dims[key]
                entry_path = f"$.dimensions.{key}"
                if not isinstance(entry, dict):
                    violations.append((entry_path, f"expected an object, got {type(entry).__name__}"))
                    continue
                _check_keys(entry, entry_path, ("classification", "rationale"), violations)
                classification = entry.get("classification")
                allowed = VOCABULARY[key]
                if "classification" in entry and classification not in allowed:
                    violations.append(
                        (
                            f"{entry_path}.classification",
                            f"must be one of {', '.join(allowed)}",
                        )
                    )
                    classification = None
                rationale = (
                    _require_str(entry.get("rationale"), f"{entry_path}.rationale", violations)
                    if "rationale" in entry
                    else None
                )
                if classification in allowed and rationale is not None:
                    dimensions[key] = (classification, rationale)

    if violations:
        return None
    return ReportDraft(dimensions=dimensions)


def parse_agent_output(raw: str, schema: str):
    """Parse and strictly validate agent JSON text.

    Returns a QuestionDraft or ReportDraft. Raises SchemaViolation with
    the full list of (field_path, reason) pairs on any defect.
    """
    if schema not in _SCHEMA_FILES:
        raise ValueError(f"unknown schema {schema!r}")
    try:
        payload = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise SchemaViolation([("$", f"not valid JSON: {exc.msg}")]) from None

    violations: list[tuple[str, str]] = []
    if schema == QUESTION_SCHEMA:
        result = _validate_question(payload, violations)
    else:
        result = _validate_report(payload, violations)
    if violations:
        raise SchemaViolation(violations)
    return result
