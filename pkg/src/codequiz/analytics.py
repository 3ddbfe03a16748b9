"""Agreement analytics over validator classifications and SME verdicts.

Each judged (classification, verdict) pair falls into one of four
categories, a confusion matrix in disguise:

    positive + agree    -> success        (true positive)
    positive + disagree -> failure        (false positive)
    negative + agree    -> safeguarding   (true negative, a caught flaw)
    negative + disagree -> inefficiency   (false negative, a wrong rejection)

Rates are per dimension over all judged pairs of that dimension.
Per-SME agreement is the share of that SME's pairs where the SME
agreed, i.e. success plus safeguarding; the summary reports the
unweighted mean and sample standard deviation across SMEs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

from codequiz.dimensions import DIMENSIONS, VOCABULARY, is_positive
from codequiz.errors import CodequizError

SUCCESS = "success"
FAILURE = "failure"
SAFEGUARDING = "safeguarding"
INEFFICIENCY = "inefficiency"
CATEGORIES = (SUCCESS, FAILURE, SAFEGUARDING, INEFFICIENCY)

VERDICTS = ("agree", "disagree")

_ALL_CLASSIFICATIONS = frozenset(
    value for pair in VOCABULARY.values() for value in pair
)


class VocabularyMismatch(CodequizError):
    """A classification or verdict outside the fixed vocabulary."""


@dataclass(frozen=True)
class JudgmentPair:
    question_id: str
    dimension: str
    classification: str
    verdict: str
    sme_id: str
    rationale: str | None = None


def classify_pair(classification: str, verdict: str) -> str:
    if classification not in _ALL_CLASSIFICATIONS:
        raise VocabularyMismatch(f"unknown classification {classification!r}")
    if verdict not in VERDICTS:
        raise VocabularyMismatch(f"unknown verdict {verdict!r}")
    if is_positive(classification):
        return SUCCESS if verdict == "agree" else FAILURE
    return SAFEGUARDING if verdict == "agree" else INEFFICIENCY


def render_percent(fraction: float) -> str:
    """One-decimal percent, the rendering used in every report surface."""
    return f"{fraction * 100:.1f}"


@dataclass(frozen=True)
class RateSummary:
    n: int
    counts: dict[str, int]
    rates: dict[str, float]

    def percent(self) -> dict[str, str]:
        return {category: render_percent(self.rates[category]) for category in CATEGORIES}


@dataclass(frozen=True)
class AgreementSummary:
    per_sme: dict[str, float]
    mean: float
    sd: float


@dataclass(frozen=True)
class QualityReport:
    generated_at: str
    totals: dict[str, int]
    rates: dict[str, RateSummary]
    agreement: dict[str, AgreementSummary]

    def to_payload(self) -> dict:
        dimensions = {}
        for dim in DIMENSIONS:
            rate = self.rates[dim]
            agreement = self.agreement[dim]
            dimensions[dim] = {
                "n": rate.n,
                "counts": dict(rate.counts),
                "rates": dict(rate.rates),
                "percent": rate.percent(),
                "agreement": {
                    "per_sme": dict(sorted(agreement.per_sme.items())),
                    "mean": agreement.mean,
                    "sd": agreement.sd,
                },
            }
        return {
            "generated_at": self.generated_at,
            "totals": dict(self.totals),
            "dimensions": dimensions,
        }


def _empty_counts() -> dict[str, int]:
    return {category: 0 for category in CATEGORIES}


def dimension_rates(pairs: Iterable[JudgmentPair]) -> dict[str, RateSummary]:
    counts: dict[str, dict[str, int]] = {dim: _empty_counts() for dim in DIMENSIONS}
    for pair in pairs:
        if pair.dimension not in counts:
            raise VocabularyMismatch(f"unknown dimension {pair.dimension!r}")
        category = classify_pair(pair.classification, pair.verdict)
        counts[pair.dimension][category] += 1

    summaries = {}
    for dim in DIMENSIONS:
        n = sum(counts[dim].values())
        rates = {
            category: (counts[dim][category] / n if n else 0.0)
            for category in CATEGORIES
        }
        summaries[dim] = RateSummary(n=n, counts=counts[dim], rates=rates)
    return summaries


def agreement_stats(pairs: Iterable[JudgmentPair]) -> dict[str, AgreementSummary]:
    judged: dict[str, dict[str, list[bool]]] = {dim: {} for dim in DIMENSIONS}
    for pair in pairs:
        if pair.dimension not in judged:
            raise VocabularyMismatch(f"unknown dimension {pair.dimension!r}")
        category = classify_pair(pair.classification, pair.verdict)
        agreed = category in (SUCCESS, SAFEGUARDING)
        judged[pair.dimension].setdefault(pair.sme_id, []).append(agreed)

    summaries = {}
    for dim in DIMENSIONS:
        per_sme = {
            sme: sum(flags) / len(flags) for sme, flags in judged[dim].items()
        }
        values = list(per_sme.values())
        if not values:
            mean = 0.0
            sd = 0.0
        else:
            mean = sum(values) / len(values)
            if len(values) == 1:
                sd = 0.0
            else:
                variance = sum((v - mean) ** 2 for v in values) / (len(values) - 1)
                sd = math.sqrt(variance)
        summaries[dim] = AgreementSummary(per_sme=per_sme, mean=mean, sd=sd)
    return summaries


def build_report(
    pairs: Iterable[JudgmentPair],
    generated_at: str = "",
) -> QualityReport:
    pairs = list(pairs)
    rationales = sum(
        1
        for pair in pairs
        if pair.verdict == "disagree" and pair.rationale and pair.rationale.strip()
    )
    totals = {
        "questions": len({pair.question_id for pair in pairs}),
        "pairs": len(pairs),
        "disagreement_rationales": rationales,
    }
    return QualityReport(
        generated_at=generated_at,
        totals=totals,
        rates=dimension_rates(pairs),
        agreement=agreement_stats(pairs),
    )
