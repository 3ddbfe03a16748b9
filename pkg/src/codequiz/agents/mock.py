"""A deterministic stand-in for a hosted chat model.

The mock is stateless: every reply is a pure function of the
conversation so far, so repeated runs produce byte-identical output.
It plays both roles. As generator it checks its arithmetic with a tool
call, then emits a loop-counting question whose numbers derive from
the batch ordinal in the prompt. As validator it runs the question's
code, then classifies every dimension from what the run printed.
"""

from __future__ import annotations

import json
import re

from codequiz.agents.client import ChatResponse, ToolCall
from codequiz.dimensions import (
    CODE_VALIDITY,
    CONCEPT_ALIGNMENT,
    CORRECT_ANSWER_VALIDITY,
    CORRECT_FEEDBACK_QUALITY,
    DISTRACTOR_FEEDBACK_QUALITY,
    DISTRACTOR_QUALITY,
    STEM_CLARITY,
)

_TOPIC_RE = re.compile(r'topic "([^"]+)"')
_ORDINAL_RE = re.compile(r"item (\d+) of (\d+)")
_QUESTION_RE = re.compile(r"QUESTION JSON:\n```json\n(.*?)\n```", re.DOTALL)

_LABELS = ("A", "B", "C", "D")


class OfflineMockChatClient:
    """Offline ChatClient for development, tests and demo runs."""

    def complete(self, system_prompt, messages, tools) -> ChatResponse:
        tool_names = {tool["name"] for tool in tools}
        if "run_code" in tool_names:
            return self._validator_turn(messages)
        return self._generator_turn(messages)

    # -- generator ----------------------------------------------------

    def _generator_turn(self, messages) -> ChatResponse:
        prompt = messages[0]["content"]
        topic = self._match(_TOPIC_RE, prompt, "general")
        ordinal = int(self._match(_ORDINAL_RE, prompt, "1"))
        upper = 4 + ordinal

        if not any(m.get("role") == "tool" for m in messages):
            expression = " + ".join(str(i) for i in range(upper))
            return ChatResponse(
                tool_calls=(
                    ToolCall(
                        call_id="call-1",
                        name="arith_eval",
                        arguments=json.dumps({"expression": expression}),
                    ),
                )
            )

        return ChatResponse(text=self._question_json(topic, upper))

    @staticmethod
    def _question_json(topic: str, upper: int) -> str:
        answer = sum(range(upper))
        code = (
            "total = 0\n"
            f"for i in range({upper}):\n"
            "    total = total + i\n"
            "print(total)\n"
        )
        correct_label = _LABELS[(upper - 5) % len(_LABELS)]
        texts = {
            "correct": str(answer),
            "inclusive": str(answer + upper),
            "count": str(upper),
            "reset": "0",
        }
        feedback = {
            "correct": (
                f"Right. The loop adds every value from 0 through {upper - 1}, "
                f"so total ends at {answer}."
            ),
            "inclusive": (
                f"This would be the total if range({upper}) included {upper}, "
                f"but it stops at {upper - 1}."
            ),
            "count": (
                "This is how many times the loop body runs, not the value "
                "accumulated in total."
            ),
            "reset": (
                "total is set to 0 once, before the loop; it is not reset on "
                "each pass."
            ),
        }
        distractor_keys = ["inclusive", "count", "reset"]
        options = []
        for label in _LABELS:
            key = "correct" if label == correct_label else distractor_keys.pop(0)
            options.append(
                {"label": label, "text": texts[key], "feedback": feedback[key]}
            )
        payload = {
            "topic": topic,
            "stem": (
                f"The following program accumulates a total over range({upper}). "
                "What does it print?"
            ),
            "code": code,
            "options": options,
            "correct_label": correct_label,
        }
        return json.dumps(payload, indent=2, sort_keys=True)

    # -- validator ----------------------------------------------------

    def _validator_turn(self, messages) -> ChatResponse:
        prompt = messages[0]["content"]
        match = _QUESTION_RE.search(prompt)
        if match is None:
            raise ValueError("validator prompt carried no question JSON")
        question = json.loads(match.group(1))
        code = question.get("code")

        tool_results = [m for m in messages if m.get("role") == "tool"]
        if code is not None and not tool_results:
            return ChatResponse(
                tool_calls=(
                    ToolCall(
                        call_id="call-1",
                        name="run_code",
                        arguments=json.dumps({"source": code}),
                    ),
                )
            )

        run_result = json.loads(tool_results[-1]["content"]) if tool_results else None
        return ChatResponse(text=self._report_json(question, run_result))

    @staticmethod
    def _report_json(question: dict, run_result: dict | None) -> str:
        topic = question["topic"]
        correct_label = question["correct_label"]
        correct_text = next(
            o["text"] for o in question["options"] if o["label"] == correct_label
        )

        if run_result is None:
            code_rationale = "no code present"
            answer_rationale = (
                f"Option {correct_label} states {correct_text!r}, which follows "
                "directly from the stem."
            )
        else:
            status = run_result.get("status", "unknown")
            printed = (run_result.get("stdout") or "").strip()
            code_rationale = (
                f"run_code finished with status {status!r} and printed "
                f"{printed!r}; the program behaves as the stem describes."
            )
            answer_rationale = (
                f"run_code printed {printed!r}, which matches option "
                f"{correct_label}."
            )

        dimensions = {
            STEM_CLARITY: (
                "yes",
                "The stem asks exactly one thing: what the program prints.",
            ),
            CODE_VALIDITY: ("yes", code_rationale),
            CONCEPT_ALIGNMENT: (
                "yes",
                f"The question exercises the stated topic {topic!r}.",
            ),
            CORRECT_ANSWER_VALIDITY: ("yes", answer_rationale),
            DISTRACTOR_QUALITY: (
                "good",
                "Each wrong option encodes a distinct plausible misreading.",
            ),
            CORRECT_FEEDBACK_QUALITY: (
                "good",
                f"Feedback on option {correct_label} explains the accumulation.",
            ),
            DISTRACTOR_FEEDBACK_QUALITY: (
                "good",
                "Feedback on the wrong options names each mistake without "
                "revealing another option.",
            ),
        }
        payload = {
            "dimensions": {
                key: {"classification": cls, "rationale": rationale}
                for key, (cls, rationale) in dimensions.items()
            }
        }
        return json.dumps(payload, indent=2, sort_keys=True)

    @staticmethod
    def _match(pattern: re.Pattern, text: str, default: str) -> str:
        match = pattern.search(text)
        return match.group(1) if match else default
