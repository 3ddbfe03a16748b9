"""Durable review state as an append-only JSONL event log.

Every state change is one fsynced line; current state is a pure fold
over the lines, rebuilt on open. A judgment for the same (question,
SME, dimension) replaces the previous one in the fold while the log
keeps the full history, so the log doubles as the audit trail.

Recovery accepts a final line that lost its newline in a crash if it
still parses, and drops it otherwise. A bad line anywhere else means
real corruption and refuses to open: silently skipping events would
un-ack judgments that were already confirmed to a reviewer.

One process owns the log at a time, enforced with an OS file lock.
"""

from __future__ import annotations

import fcntl
import json
import os
from pathlib import Path
from typing import Callable

from codequiz.analytics import JudgmentPair, VocabularyMismatch
from codequiz.dimensions import DIMENSIONS
from codequiz.errors import CodequizError

VERDICTS = ("agree", "disagree")
STATUS_PENDING = "pending"
STATUS_PARTIAL = "partially_judged"
STATUS_FULL = "fully_judged"


class StorageFailure(CodequizError):
    """The event log cannot be opened, read, or appended."""


class DuplicateQuestion(CodequizError):
    """An item with this question_id is already stored."""


class UnknownQuestion(CodequizError):
    """No item with this question_id."""


class UnknownDimension(CodequizError):
    """A judgment named a dimension outside the fixed seven."""


class MissingRationale(CodequizError):
    """A disagree verdict arrived without an explanation."""


class MismatchedIds(CodequizError):
    """Question and report disagree about the question_id."""


def _default_clock() -> str:
    from codequiz.agents.orchestrator import default_clock

    return default_clock()


class _Item:
    __slots__ = ("question", "report", "judgments", "order")

    def __init__(self, question: dict, report: dict, order: int):
        self.question = question
        self.report = report
        # (sme_id, dimension) -> latest judgment dict
        self.judgments: dict[tuple[str, str], dict] = {}
        self.order = order

    def status(self) -> str:
        if not self.judgments:
            return STATUS_PENDING
        by_sme: dict[str, set] = {}
        for (sme_id, dimension) in self.judgments:
            by_sme.setdefault(sme_id, set()).add(dimension)
        if any(len(dims) == len(DIMENSIONS) for dims in by_sme.values()):
            return STATUS_FULL
        return STATUS_PARTIAL


class ReviewStore:
    """Review items, their validation reports, and SME judgments."""

    def __init__(self, path: str | Path, clock: Callable[[], str] | None = None):
        self._path = Path(path)
        self._clock = clock or _default_clock
        self._items: dict[str, _Item] = {}
        self._seq = 0
        self._path.parent.mkdir(parents=True, exist_ok=True)
        self._file = open(self._path, "a+b")
        try:
            fcntl.flock(self._file.fileno(), fcntl.LOCK_EX | fcntl.LOCK_NB)
        except OSError:
            self._file.close()
            raise StorageFailure(
                f"event log {self._path} is locked by another process"
            ) from None
        try:
            self._recover()
        except Exception:
            self.close()
            raise

    # -- lifecycle ----------------------------------------------------

    def close(self) -> None:
        if not self._file.closed:
            fcntl.flock(self._file.fileno(), fcntl.LOCK_UN)
            self._file.close()

    def __enter__(self) -> "ReviewStore":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()

    # -- recovery -----------------------------------------------------

    def _recover(self) -> None:
        self._file.seek(0)
        data = self._file.read()
        if not data:
            return

        body, sep, tail = data.rpartition(b"\n")
        lines = body.split(b"\n") if body else []
        if tail:
            # crash mid-append: keep the event if it is complete,
            # drop the partial bytes otherwise
            try:
                json.loads(tail.decode("utf-8"))
            except (ValueError, UnicodeDecodeError):
                self._truncate_to(len(body) + len(sep))
            else:
                lines.append(tail)
                self._file.write(b"\n")
                self._file.flush()
                os.fsync(self._file.fileno())

        for index, line in enumerate(lines):
            try:
                event = json.loads(line.decode("utf-8"))
            except (ValueError, UnicodeDecodeError):
                raise StorageFailure(
                    f"corrupt event at line {index + 1} of {self._path}"
                ) from None
            if event.get("seq") != index + 1:
                raise StorageFailure(
                    f"event sequence broken at line {index + 1} of {self._path}"
                )
            self._apply(event)
            self._seq = event["seq"]

    def _truncate_to(self, size: int) -> None:
        self._file.truncate(size)
        self._file.flush()
        os.fsync(self._file.fileno())
        self._file.seek(0, os.SEEK_END)

    # -- event plumbing -----------------------------------------------

    def _append(self, event: dict) -> None:
        line = json.dumps(event, sort_keys=True, separators=(",", ":")) + "\n"
        try:
            self._file.seek(0, os.SEEK_END)
            self._file.write(line.encode("utf-8"))
            self._file.flush()
            os.fsync(self._file.fileno())
        except OSError as exc:
            raise StorageFailure(f"append failed: {exc}") from exc
        self._apply(event)
        self._seq = event["seq"]

    def _apply(self, event: dict) -> None:
        kind = event["type"]
        if kind == "item_stored":
            question = event["question"]
            self._items[question["question_id"]] = _Item(
                question=question, report=event["report"], order=event["seq"]
            )
        elif kind == "judgment_submitted":
            judgment = event["judgment"]
            item = self._items[judgment["question_id"]]
            key = (judgment["sme_id"], judgment["dimension"])
            item.judgments[key] = judgment
        else:
            raise StorageFailure(f"unknown event type {kind!r}")

    # -- commands -----------------------------------------------------

    def store_item(self, question: dict, report: dict) -> dict:
        question_id = question.get("question_id")
        if not question_id:
            raise MismatchedIds("question carries no question_id")
        if report.get("question_id") != question_id:
            raise MismatchedIds(
                f"report question_id {report.get('question_id')!r} does not "
                f"match question {question_id!r}"
            )
        if question_id in self._items:
            raise DuplicateQuestion(f"question {question_id!r} already stored")
        self._append(
            {
                "seq": self._seq + 1,
                "type": "item_stored",
                "question": question,
                "report": report,
            }
        )
        return self.get_item(question_id)

    def submit_judgment(
        self,
        question_id: str,
        sme_id: str,
        dimension: str,
        verdict: str,
        rationale: str | None = None,
    ) -> dict:
        if question_id not in self._items:
            raise UnknownQuestion(f"no item {question_id!r}")
        if dimension not in DIMENSIONS:
            raise UnknownDimension(f"unknown dimension {dimension!r}")
        if verdict not in VERDICTS:
            raise VocabularyMismatch(f"unknown verdict {verdict!r}")
        if not sme_id or not sme_id.strip():
            raise VocabularyMismatch("sme_id must not be empty")
        if rationale is not None and not rationale.strip():
            rationale = None
        if verdict == "disagree" and rationale is None:
            raise MissingRationale(
                "a disagree verdict requires a rationale explaining the flaw"
            )
        judgment = {
            "judgment_id": f"j-{self._seq + 1:08d}",
            "question_id": question_id,
            "sme_id": sme_id,
            "dimension": dimension,
            "verdict": verdict,
            "rationale": rationale,
            "created_at": self._clock(),
        }
        self._append(
            {
                "seq": self._seq + 1,
                "type": "judgment_submitted",
                "judgment": judgment,
            }
        )
        return self.get_item(question_id)

    # -- queries ------------------------------------------------------

    def get_item(self, question_id: str) -> dict:
        item = self._items.get(question_id)
        if item is None:
            raise UnknownQuestion(f"no item {question_id!r}")
        return self._item_payload(item)

    def list_items(
        self,
        status: str | None = None,
        topic: str | None = None,
        sme_id: str | None = None,
    ) -> list[dict]:
        if status is not None and status not in (
            STATUS_PENDING,
            STATUS_PARTIAL,
            STATUS_FULL,
        ):
            raise VocabularyMismatch(f"unknown status {status!r}")
        rows = []
        for item in self._items.values():
            if status is not None and item.status() != status:
                continue
            if topic is not None and item.question.get("topic") != topic:
                continue
            if sme_id is not None and not any(
                sme == sme_id for (sme, _) in item.judgments
            ):
                continue
            rows.append(
                {
                    "question_id": item.question["question_id"],
                    "topic": item.question.get("topic"),
                    "stem": item.question.get("stem"),
                    "status": item.status(),
                    "created_at": item.question.get("created_at"),
                }
            )
        rows.sort(key=lambda row: (row["created_at"] or "", row["question_id"]))
        return rows

    def _item_payload(self, item: _Item) -> dict:
        dim_order = {dim: i for i, dim in enumerate(DIMENSIONS)}
        judgments = sorted(
            item.judgments.values(),
            key=lambda j: (j["sme_id"], dim_order[j["dimension"]]),
        )
        return {
            "question": item.question,
            "report": item.report,
            "status": item.status(),
            "judgments": [dict(j) for j in judgments],
        }

    def judgment_pairs(self) -> list[JudgmentPair]:
        """Current-fold pairs for the analytics report."""
        pairs = []
        for item in sorted(self._items.values(), key=lambda i: i.order):
            dims = item.report.get("dimensions", {})
            for (_, dimension), judgment in sorted(
                item.judgments.items(), key=lambda kv: kv[1]["judgment_id"]
            ):
                finding = dims.get(dimension)
                if finding is None:
                    continue
                pairs.append(
                    JudgmentPair(
                        question_id=item.question["question_id"],
                        dimension=dimension,
                        classification=finding["classification"],
                        verdict=judgment["verdict"],
                        sme_id=judgment["sme_id"],
                        rationale=judgment["rationale"],
                    )
                )
        return pairs

    def audit_events(self) -> list[dict]:
        """Every event ever appended, replayed from disk."""
        events = []
        with open(self._path, "rb") as handle:
            for line in handle:
                line = line.strip()
                if line:
                    events.append(json.loads(line.decode("utf-8")))
        return events

    def __len__(self) -> int:
        return len(self._items)
