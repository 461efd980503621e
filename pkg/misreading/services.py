# misreading/services.py
import logging
from dataclasses import dataclass, replace
from pathlib import Path

from django.conf import settings

from core.exceptions import ConfigurationError, ExpectationsError
from crystals.codons import GENETIC_CODES

from .catalog import (
    DEFAULT_OPTIONS,
    LEVELS,
    Scheme,
    allowed_set,
    forbidden_set,
    format_pair,
    sort_pairs,
    substitution_rows,
)
from .enumeration import count_report
from .expectations import ExpectationsFile, verify
from .multiplets import SER_TRIGGER_MODES, annotate_singlet_candidates, derive, diff_against

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DerivationConfig:
    scheme: Scheme = Scheme.A
    damping: bool = True
    ser_trigger: str = 'computed'
    level5_merge_families: tuple = ('TVTV',)
    unobserved_merges: tuple = ()

    @classmethod
    def from_settings(cls, **overrides):
        engine = settings.GENETIC_CRYSTAL
        config = cls(
            scheme=Scheme.parse(engine['DEFAULT_SCHEME']),
            damping=engine['DAMPING'],
            ser_trigger=engine['SER_TRIGGER'],
            level5_merge_families=tuple(engine['LEVEL5_MERGE_FAMILIES']),
            unobserved_merges=tuple(tuple(pair) for pair in engine['SCHEME_B_UNOBSERVED_MERGES']),
        )
        overrides = {key: value for key, value in overrides.items() if value is not None}
        if 'scheme' in overrides:
            overrides['scheme'] = Scheme.parse(overrides['scheme'])
        config = replace(config, **overrides)
        if config.ser_trigger not in SER_TRIGGER_MODES:
            raise ConfigurationError(f"ser_trigger must be one of {', '.join(SER_TRIGGER_MODES)}")
        return config

    def derive_kwargs(self):
        return {
            'level5_merge_families': self.level5_merge_families,
            'unobserved_merges': self.unobserved_merges,
        }


def check_level(level):
    try:
        level = int(level)
    except (TypeError, ValueError):
        raise ConfigurationError(f"level must be an integer, got {level!r}") from None
    if level not in LEVELS:
        raise ConfigurationError(f"level must be between 1 and 5, got {level}")
    return level


def get_table(name):
    try:
        return GENETIC_CODES[str(name).lower()]
    except KeyError:
        raise ConfigurationError(f"unknown genetic code {name!r}; expected one of {', '.join(GENETIC_CODES)}") from None


class MisreadingService:
    @staticmethod
    def derivation(config, max_level=5):
        return derive(
            config.scheme,
            max_level=check_level(max_level),
            damping=config.damping,
            ser_trigger=config.ser_trigger,
            **config.derive_kwargs(),
        )

    @staticmethod
    def derive_payload(config, max_level=5, annotate=False):
        derivation = MisreadingService.derivation(config, max_level)
        payload = derivation.as_dict()
        if annotate:
            annotated = annotate_singlet_candidates(derivation.final, derivation)
            payload['annotations'] = {label: list(notes) for label, notes in annotated.annotations.items()}
        return payload

    @staticmethod
    def substitutions(config, level, family=None, which='allowed'):
        level = check_level(level)
        select = allowed_set if which == 'allowed' else forbidden_set
        pairs = select(level, config.scheme, family, DEFAULT_OPTIONS)
        return [format_pair(pair) for pair in sort_pairs(pairs)]

    @staticmethod
    def substitution_rows(config, level, family=None):
        return substitution_rows(check_level(level), config.scheme, family, DEFAULT_OPTIONS)

    @staticmethod
    def diff(config, table_name='vmc', level=5):
        partition = MisreadingService.derivation(config, level).final
        return diff_against(partition, get_table(table_name)).as_dict()

    @staticmethod
    def expectations_path(config, path=None):
        if path:
            return Path(path)
        # B0 statements live next to Scheme B ones, tagged with their own scheme
        stem = Scheme.B.value if config.scheme is Scheme.B0 else config.scheme.value
        return Path(settings.GENETIC_CRYSTAL['EXPECTATIONS_DIR']) / f"scheme_{stem}.json"

    @staticmethod
    def verify(config, path=None):
        path = MisreadingService.expectations_path(config, path)
        if not path.exists():
            raise ExpectationsError(f"no expectations file at {path}")
        expectations = ExpectationsFile.load(path)
        return verify(expectations, config.derive_kwargs())

    @staticmethod
    def count(include_candidate=False):
        return count_report(include_candidate)
