"""
Counting alternative multiplet patterns.

The quartet stage is a plain binomial count. The two sextet stages use the
reported constants 420 and 24; a candidate counting model is provided next
to them and its disagreement is logged rather than reconciled.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from core.exceptions import ConfigurationError

logger = logging.getLogger(__name__)

XZ_SLOTS = 16
QUARTETS_FORMED = 8
REPORTED_SEXTET2_CHOICES = 420
REPORTED_SEXTET3_CHOICES = 24


@dataclass(frozen=True)
class StageCounts:
    quartet_choices: int
    sextet2_choices: int
    sextet3_choices: int

    def __post_init__(self):
        for name in ('quartet_choices', 'sextet2_choices', 'sextet3_choices'):
            value = getattr(self, name)
            if not isinstance(value, int) or value <= 0:
                raise ConfigurationError(f"{name} must be a positive integer, got {value!r}")

    @property
    def total(self):
        return self.quartet_choices * self.sextet2_choices * self.sextet3_choices


def count_quartet_choices(slots=XZ_SLOTS, chosen=QUARTETS_FORMED):
    return math.comb(slots, chosen)


def brute_force_choices(slots, chosen):
    """Same count as ``count_quartet_choices`` by listing every subset."""
    return sum(1 for _ in combinations(range(slots), chosen))


def pattern_probability(counts):
    return Fraction(1, counts.total)


def render_probability(probability):
    """Two significant figures, e.g. ``7.7e-09``."""
    return f"{float(probability):.1e}"


def candidate_sextet_choices(quartets, doublets, sextets):
    """
    Ways to form ``sextets`` sextets from the multiplets left after a stage:
    choose the quartets, choose the doublets, pair them up.
    """
    return math.comb(quartets, sextets) * math.comb(doublets, sextets) * math.factorial(sextets)


def reported_counts():
    return StageCounts(count_quartet_choices(), REPORTED_SEXTET2_CHOICES, REPORTED_SEXTET3_CHOICES)


def candidate_counts():
    """
    Candidate model: two sextets out of 8 quartets and 16 doublets after the
    quartet stage, then one sextet out of the 6 quartets and 14 doublets left.
    """
    return StageCounts(
        count_quartet_choices(),
        candidate_sextet_choices(QUARTETS_FORMED, XZ_SLOTS, 2),
        candidate_sextet_choices(QUARTETS_FORMED - 2, XZ_SLOTS - 2, 1),
    )


def compare_counting_models():
    reported, candidate = reported_counts(), candidate_counts()
    agrees = reported == candidate
    if agrees:
        logger.info("candidate counting model reproduces the reported sextet counts")
    else:
        logger.warning(
            f"candidate counting model gives {candidate.sextet2_choices}/{candidate.sextet3_choices} "
            f"sextet choices, reported {reported.sextet2_choices}/{reported.sextet3_choices}"
        )
    return {'reported': reported, 'candidate': candidate, 'agrees': agrees}


def count_report(include_candidate=False):
    counts = reported_counts()
    probability = pattern_probability(counts)
    report = {
        'quartet_choices': counts.quartet_choices,
        'brute_force_quartet_choices': brute_force_choices(XZ_SLOTS, QUARTETS_FORMED),
        'sextet2_choices': counts.sextet2_choices,
        'sextet3_choices': counts.sextet3_choices,
        'probability': f"{probability.numerator}/{probability.denominator}",
        'probability_decimal': render_probability(probability),
    }
    if include_candidate:
        comparison = compare_counting_models()
        candidate = comparison['candidate']
        report['candidate_model'] = {
            'sextet2_choices': candidate.sextet2_choices,
            'sextet3_choices': candidate.sextet3_choices,
            'probability_decimal': render_probability(pattern_probability(candidate)),
            'agrees': comparison['agrees'],
        }
    return report
