"""Builders for synthetic judgment fixtures used by analytics tests."""

from codequiz.analytics import (
    FAILURE,
    INEFFICIENCY,
    SAFEGUARDING,
    SUCCESS,
    JudgmentPair,
)
from codequiz.dimensions import VOCABULARY

# per-dimension (success, failure, safeguarding, inefficiency) counts,
# 288 judged questions per dimension
STUDY_COUNTS = {
    "concept_alignment": (284, 1, 0, 3),
    "stem_clarity": (282, 6, 0, 0),
    "code_validity": (275, 9, 0, 4),
    "correct_answer_validity": (265, 4, 8, 11),
    "correct_feedback_quality": (266, 6, 9, 7),
    "distractor_quality": (230, 45, 7, 6),
    "distractor_feedback_quality": (248, 27, 7, 6),
}

EXPECTED_PERCENTS = {
    "concept_alignment": ("98.6", "0.3", "0.0", "1.0"),
    "stem_clarity": ("97.9", "2.1", "0.0", "0.0"),
    "code_validity": ("95.5", "3.1", "0.0", "1.4"),
    "correct_answer_validity": ("92.0", "1.4", "2.8", "3.8"),
    "correct_feedback_quality": ("92.4", "2.1", "3.1", "2.4"),
    "distractor_quality": ("79.9", "15.6", "2.4", "2.1"),
    "distractor_feedback_quality": ("86.1", "9.4", "2.4", "2.1"),
}

QUESTION_COUNT = 288
SME_COUNT = 6


def study_fixture_pairs() -> list[JudgmentPair]:
    """2,016 pairs over 288 questions reproducing the study's counts."""
    pairs = []
    per_sme = QUESTION_COUNT // SME_COUNT
    for dimension, (tp, fp, tn, fn) in STUDY_COUNTS.items():
        positive, negative = VOCABULARY[dimension]
        assert tp + fp + tn + fn == QUESTION_COUNT
        schedule = (
            [(positive, "agree")] * tp
            + [(positive, "disagree")] * fp
            + [(negative, "agree")] * tn
            + [(negative, "disagree")] * fn
        )
        for index, (classification, verdict) in enumerate(schedule):
            rationale = None
            if verdict == "disagree":
                rationale = f"disagrees on {dimension} for question {index}"
            pairs.append(
                JudgmentPair(
                    question_id=f"q-{index:04d}",
                    dimension=dimension,
                    classification=classification,
                    verdict=verdict,
                    sme_id=f"sme{index // per_sme}",
                    rationale=rationale,
                )
            )
    return pairs


def category_of(pair: JudgmentPair) -> str:
    positive = pair.classification in ("yes", "good")
    if positive:
        return SUCCESS if pair.verdict == "agree" else FAILURE
    return SAFEGUARDING if pair.verdict == "agree" else INEFFICIENCY
