"""The seven quality dimensions and their classification vocabularies.

The first four are judged yes/no, the last three good/poor. A
classification is "positive" when it asserts quality (yes or good).
"""

STEM_CLARITY = "stem_clarity"
CODE_VALIDITY = "code_validity"
CONCEPT_ALIGNMENT = "concept_alignment"
CORRECT_ANSWER_VALIDITY = "correct_answer_validity"
DISTRACTOR_QUALITY = "distractor_quality"
CORRECT_FEEDBACK_QUALITY = "correct_feedback_quality"
DISTRACTOR_FEEDBACK_QUALITY = "distractor_feedback_quality"

YES_NO_DIMENSIONS = (
    STEM_CLARITY,
    CODE_VALIDITY,
    CONCEPT_ALIGNMENT,
    CORRECT_ANSWER_VALIDITY,
)
GOOD_POOR_DIMENSIONS = (
    DISTRACTOR_QUALITY,
    CORRECT_FEEDBACK_QUALITY,
    DISTRACTOR_FEEDBACK_QUALITY,
)
DIMENSIONS = YES_NO_DIMENSIONS + GOOD_POOR_DIMENSIONS

VOCABULARY: dict[str, tuple[str, str]] = {
    **{d: ("yes", "no") for d in YES_NO_DIMENSIONS},
    **{d: ("good", "poor") for d in GOOD_POOR_DIMENSIONS},
}

POSITIVE_CLASSIFICATIONS = frozenset(["yes", "good"])


def is_positive(classification: str) -> bool:
    return classification in POSITIVE_CLASSIFICATIONS
