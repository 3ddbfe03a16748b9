import copy
import json
import random
from pathlib import Path

import pytest

from codequiz.agents.schemas import (
    QUESTION_SCHEMA,
    REPORT_SCHEMA,
    QuestionDraft,
    ReportDraft,
    SchemaViolation,
    canonical_json,
    load_schema_text,
    parse_agent_output,
)
from codequiz.dimensions import DIMENSIONS

FIXTURES = Path(__file__).parent / "fixtures"


def load_fixture(name: str) -> str:
    return (FIXTURES / name).read_text(encoding="utf-8")


def question_payload() -> dict:
    return json.loads(load_fixture("question_loops.json"))


def report_payload() -> dict:
    return json.loads(load_fixture("report_loops.json"))


def violation_paths(exc: SchemaViolation) -> list[str]:
    return [path for path, _ in exc.violations]


class TestQuestionParsing:
    def test_valid_question_parses_to_draft(self):
        draft = parse_agent_output(load_fixture("question_loops.json"), QUESTION_SCHEMA)
        assert isinstance(draft, QuestionDraft)
        assert draft.topic == "loops"
        assert draft.correct_label == "A"
        assert len(draft.options) == 4
        assert draft.options[1].text == "15"
        assert draft.code.startswith("total = 0")

    def test_round_trip_is_byte_identical(self):
        raw = load_fixture("question_loops.json")
        draft = parse_agent_output(raw, QUESTION_SCHEMA)
        assert canonical_json(draft.to_payload()) == raw

    def test_code_may_be_null(self):
        payload = question_payload()
        payload["code"] = None
        draft = parse_agent_output(json.dumps(payload), QUESTION_SCHEMA)
        assert draft.code is None

    def test_not_json_at_all(self):
        with pytest.raises(SchemaViolation) as info:
            parse_agent_output("the answer is B", QUESTION_SCHEMA)
        assert violation_paths(info.value) == ["$"]

    def test_root_must_be_object(self):
        with pytest.raises(SchemaViolation) as info:
            parse_agent_output("[1, 2]", QUESTION_SCHEMA)
        assert violation_paths(info.value) == ["$"]

    def test_dropped_option_is_rejected(self):
        payload = question_payload()
        del payload["options"][2]
        with pytest.raises(SchemaViolation) as info:
            parse_agent_output(json.dumps(payload), QUESTION_SCHEMA)
        assert "$.options" in violation_paths(info.value)

    def test_unknown_root_field_is_rejected(self):
        payload = question_payload()
        payload["difficulty"] = "hard"
        with pytest.raises(SchemaViolation) as info:
            parse_agent_output(json.dumps(payload), QUESTION_SCHEMA)
        assert ("$.difficulty", "unknown field") in info.value.violations

    def test_unknown_option_field_is_rejected(self):
        payload = question_payload()
        payload["options"][3]["weight"] = 2
        with pytest.raises(SchemaViolation) as info:
            parse_agent_output(json.dumps(payload), QUESTION_SCHEMA)
        assert ("$.options[3].weight", "unknown field") in info.value.violations

    def test_missing_field_names_its_path(self):
        payload = question_payload()
        del payload["stem"]
        with pytest.raises(SchemaViolation) as info:
            parse_agent_output(json.dumps(payload), QUESTION_SCHEMA)
        assert ("$.stem", "missing required field") in info.value.violations

    def test_duplicate_labels_rejected(self):
        payload = question_payload()
        payload["options"][1]["label"] = "A"
        with pytest.raises(SchemaViolation) as info:
            parse_agent_output(json.dumps(payload), QUESTION_SCHEMA)
        assert "$.options[1].label" in violation_paths(info.value)

    def test_duplicate_option_texts_rejected(self):
        payload = question_payload()
        payload["options"][1]["text"] = payload["options"][0]["text"]
        with pytest.raises(SchemaViolation) as info:
            parse_agent_output(json.dumps(payload), QUESTION_SCHEMA)
        assert "$.options[1].text" in violation_paths(info.value)

    def test_label_outside_a_to_d_rejected(self):
        payload = question_payload()
        payload["options"][0]["label"] = "E"
        with pytest.raises(SchemaViolation):
            parse_agent_output(json.dumps(payload), QUESTION_SCHEMA)

    def test_bad_correct_label(self):
        payload = question_payload()
        payload["correct_label"] = "E"
        with pytest.raises(SchemaViolation) as info:
            parse_agent_output(json.dumps(payload), QUESTION_SCHEMA)
        assert "$.correct_label" in violation_paths(info.value)

    def test_empty_stem_rejected(self):
        payload = question_payload()
        payload["stem"] = "   "
        with pytest.raises(SchemaViolation) as info:
            parse_agent_output(json.dumps(payload), QUESTION_SCHEMA)
        assert ("$.stem", "must not be empty") in info.value.violations

    def test_empty_code_string_rejected(self):
        payload = question_payload()
        payload["code"] = ""
        with pytest.raises(SchemaViolation) as info:
            parse_agent_output(json.dumps(payload), QUESTION_SCHEMA)
        assert "$.code" in violation_paths(info.value)

    def test_options_not_a_list(self):
        payload = question_payload()
        payload["options"] = {"A": "10"}
        with pytest.raises(SchemaViolation) as info:
            parse_agent_output(json.dumps(payload), QUESTION_SCHEMA)
        assert "$.options" in violation_paths(info.value)

    def test_all_violations_reported_together(self):
        payload = question_payload()
        del payload["topic"]
        payload["correct_label"] = "Z"
        payload["extra"] = 1
        with pytest.raises(SchemaViolation) as info:
            parse_agent_output(json.dumps(payload), QUESTION_SCHEMA)
        paths = violation_paths(info.value)
        assert "$.topic" in paths
        assert "$.correct_label" in paths
        assert "$.extra" in paths


class TestReportParsing:
    def test_valid_report_parses_to_draft(self):
        draft = parse_agent_output(load_fixture("report_loops.json"), REPORT_SCHEMA)
        assert isinstance(draft, ReportDraft)
        assert set(draft.dimensions) == set(DIMENSIONS)
        assert draft.dimensions["stem_clarity"][0] == "yes"
        assert draft.dimensions["distractor_quality"][0] == "good"

    def test_round_trip_is_byte_identical(self):
        raw = load_fixture("report_loops.json")
        draft = parse_agent_output(raw, REPORT_SCHEMA)
        assert canonical_json(draft.to_payload()) == raw

    def test_missing_dimension_rejected(self):
        payload = report_payload()
        del payload["dimensions"]["distractor_quality"]
        with pytest.raises(SchemaViolation) as info:
            parse_agent_output(json.dumps(payload), REPORT_SCHEMA)
        assert (
            "$.dimensions.distractor_quality",
            "missing required field",
        ) in info.value.violations

    def test_unknown_dimension_rejected(self):
        payload = report_payload()
        payload["dimensions"]["novelty"] = {
            "classification": "yes",
            "rationale": "novel",
        }
        with pytest.raises(SchemaViolation) as info:
            parse_agent_output(json.dumps(payload), REPORT_SCHEMA)
        assert ("$.dimensions.novelty", "unknown dimension") in info.value.violations

    @pytest.mark.parametrize("bad", ["Yes", "No", "true", "maybe", ""])
    def test_yes_no_vocabulary_enforced(self, bad):
        payload = report_payload()
        payload["dimensions"]["stem_clarity"]["classification"] = bad
        with pytest.raises(SchemaViolation) as info:
            parse_agent_output(json.dumps(payload), REPORT_SCHEMA)
        assert "$.dimensions.stem_clarity.classification" in violation_paths(info.value)

    @pytest.mark.parametrize("bad", ["Good", "Poor", "yes", "fine"])
    def test_good_poor_vocabulary_enforced(self, bad):
        payload = report_payload()
        payload["dimensions"]["distractor_quality"]["classification"] = bad
        with pytest.raises(SchemaViolation) as info:
            parse_agent_output(json.dumps(payload), REPORT_SCHEMA)
        assert "$.dimensions.distractor_quality.classification" in violation_paths(
            info.value
        )

    def test_yes_no_vocabulary_does_not_accept_good(self):
        payload = report_payload()
        payload["dimensions"]["code_validity"]["classification"] = "good"
        with pytest.raises(SchemaViolation):
            parse_agent_output(json.dumps(payload), REPORT_SCHEMA)

    def test_empty_rationale_rejected(self):
        payload = report_payload()
        payload["dimensions"]["concept_alignment"]["rationale"] = ""
        with pytest.raises(SchemaViolation) as info:
            parse_agent_output(json.dumps(payload), REPORT_SCHEMA)
        assert "$.dimensions.concept_alignment.rationale" in violation_paths(info.value)

    def test_unknown_field_inside_entry_rejected(self):
        payload = report_payload()
        payload["dimensions"]["stem_clarity"]["confidence"] = 0.9
        with pytest.raises(SchemaViolation) as info:
            parse_agent_output(json.dumps(payload), REPORT_SCHEMA)
        assert (
            "$.dimensions.stem_clarity.confidence",
            "unknown field",
        ) in info.value.violations

    def test_unknown_root_field_rejected(self):
        payload = report_payload()
        payload["summary"] = "fine"
        with pytest.raises(SchemaViolation) as info:
            parse_agent_output(json.dumps(payload), REPORT_SCHEMA)
        assert ("$.summary", "unknown field") in info.value.violations


def _mutate(rng: random.Random, payload: dict, schema: str) -> dict:
    mutated = copy.deepcopy(payload)
    if schema == QUESTION_SCHEMA:
        choice = rng.randrange(5)
        if choice == 0:
            del mutated["options"][rng.randrange(4)]
        elif choice == 1:
            mutated["options"][rng.randrange(4)]["label"] = rng.choice(["E", "a", "1"])
        elif choice == 2:
            del mutated[rng.choice(["topic", "stem", "options", "correct_label"])]
        elif choice == 3:
            mutated[f"extra_{rng.randrange(100)}"] = "x"
        else:
            mutated["correct_label"] = rng.choice(["e", "AB", ""])
    else:
        choice = rng.randrange(4)
        dim = rng.choice(DIMENSIONS)
        if choice == 0:
            del mutated["dimensions"][dim]
        elif choice == 1:
            mutated["dimensions"][dim]["classification"] = rng.choice(
                ["Yes", "No", "Good", "Poor", "ok"]
            )
        elif choice == 2:
            mutated["dimensions"][dim][f"note_{rng.randrange(100)}"] = "x"
        else:
            mutated["dimensions"][f"dim_{rng.randrange(100)}"] = {
                "classification": "yes",
                "rationale": "x",
            }
    return mutated


class TestRandomMutations:
    def test_every_mutation_is_rejected_with_a_field_path(self):
        rng = random.Random(20260822)
        fixtures = [
            (question_payload(), QUESTION_SCHEMA),
            (report_payload(), REPORT_SCHEMA),
        ]
        for _ in range(300):
            payload, schema = fixtures[rng.randrange(2)]
            mutated = _mutate(rng, payload, schema)
            with pytest.raises(SchemaViolation) as info:
                parse_agent_output(json.dumps(mutated), schema)
            assert info.value.violations
            for path, reason in info.value.violations:
                assert path.startswith("$")
                assert reason


class TestSchemaFiles:
    def test_published_schema_files_are_valid_json(self):
        for name in (QUESTION_SCHEMA, REPORT_SCHEMA):
            doc = json.loads(load_schema_text(name))
            assert doc["title"] == name
            assert doc["additionalProperties"] is False

    def test_unknown_schema_name(self):
        with pytest.raises(ValueError):
            load_schema_text("nonsense")
        with pytest.raises(ValueError):
            parse_agent_output("{}", "nonsense")

    def test_question_schema_file_pins_four_options(self):
        doc = json.loads(load_schema_text(QUESTION_SCHEMA))
        assert doc["properties"]["options"]["minItems"] == 4
        assert doc["properties"]["options"]["maxItems"] == 4

    def test_report_schema_file_lists_all_dimensions(self):
        doc = json.loads(load_schema_text(REPORT_SCHEMA))
        required = doc["properties"]["dimensions"]["required"]
        assert sorted(required) == sorted(DIMENSIONS)
