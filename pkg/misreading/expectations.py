"""
Expectations files: the published enumerations as a machine-checked oracle.

Each entry names what to compute (an allowed set, a multiplet shape, the
classes of a given size, ...) and either the expected value or, for
statements the engine does not reproduce, both the published value and the
value the engine computes.
"""
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

from core.exceptions import ConfigurationError, CrystalEngineError, ExpectationsError
from crystals.codons import CODONS, GENETIC_CODES, dinucleotides_where

from .catalog import CatalogOptions, Scheme, classify, format_pair, get_family, parse_pair, sort_pairs
from .enumeration import count_report
from .multiplets import derive

logger = logging.getLogger(__name__)

PAIR_KINDS = ('allowed', 'forbidden', 'includes', 'excludes')
DERIVATION_KINDS = ('quartets', 'shape', 'classes', 'warnings')
KINDS = PAIR_KINDS + DERIVATION_KINDS + ('dinucleotides', 'stop-codons', 'count')
FLAGS = ('b', 'alpha', 'beta')


@dataclass(frozen=True)
class ExpectationEntry:
    id: str
    kind: str
    citation: str
    level: int = None
    family: str = None
    size: int = None
    flag: str = None
    rank: int = None
    reason: str = None
    table: str = 'vmc'
    scheme: str = None
    options: dict = field(default_factory=dict, compare=False)
    damping: bool = True
    ser_trigger: str = 'computed'
    expected: object = None
    discrepancy: bool = False
    published: object = None
    computed: object = None

    @classmethod
    def from_dict(cls, data, position):
        if not isinstance(data, dict):
            raise ExpectationsError(f"entry #{position} is not an object")
        missing = [name for name in ('id', 'kind', 'citation') if not data.get(name)]
        if missing:
            raise ExpectationsError(f"entry #{position} lacks {', '.join(missing)}")
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise ExpectationsError(f"entry {data['id']} has unknown fields {sorted(unknown)}")
        entry = cls(**data)
        entry.validate()
        return entry

    def validate(self):
        if self.kind not in KINDS:
            raise ExpectationsError(f"entry {self.id}: unknown kind {self.kind!r}")
        if self.kind in PAIR_KINDS:
            if not self.family:
                raise ExpectationsError(f"entry {self.id}: kind {self.kind} needs a family")
            try:
                get_family(self.family)
            except ConfigurationError as exc:
                raise ExpectationsError(f"entry {self.id}: {exc}") from exc
        if self.kind in DERIVATION_KINDS and self.level is None:
            raise ExpectationsError(f"entry {self.id}: kind {self.kind} needs a level")
        if self.kind == 'classes' and self.size is None:
            raise ExpectationsError(f"entry {self.id}: kind classes needs a size")
        if self.kind == 'dinucleotides' and (self.flag not in FLAGS or self.rank is None):
            raise ExpectationsError(f"entry {self.id}: kind dinucleotides needs a flag from {FLAGS} and a rank")
        if self.discrepancy:
            if self.published is None or self.computed is None:
                raise ExpectationsError(f"discrepancy entry {self.id} must carry both published and computed values")
        elif self.expected is None:
            raise ExpectationsError(f"entry {self.id} has no expected value")
        try:
            self.catalog_options()
        except ConfigurationError as exc:
            raise ExpectationsError(f"entry {self.id}: {exc}") from exc

    def catalog_options(self):
        try:
            return CatalogOptions(**self.options)
        except TypeError as exc:
            raise ConfigurationError(f"bad catalog options {self.options}") from exc

    @property
    def target(self):
        return self.published if self.discrepancy else self.expected


@dataclass(frozen=True)
class ExpectationsFile:
    path: str
    scheme: Scheme
    entries: tuple

    @classmethod
    def load(cls, path):
        path = Path(path)
        try:
            document = json.loads(path.read_text(encoding='utf-8'))
        except OSError as exc:
            raise ExpectationsError(f"cannot read {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ExpectationsError(f"{path} is not valid JSON: {exc}") from exc
        return cls.from_document(document, str(path))

    @classmethod
    def from_document(cls, document, path='<memory>'):
        if not isinstance(document, dict) or not isinstance(document.get('entries'), list):
            raise ExpectationsError(f"{path}: expected an object with an 'entries' list")
        try:
            scheme = Scheme.parse(document.get('scheme', 'a'))
        except ConfigurationError as exc:
            raise ExpectationsError(f"{path}: {exc}") from exc
        entries = tuple(ExpectationEntry.from_dict(data, i) for i, data in enumerate(document['entries'], 1))
        ids = [entry.id for entry in entries]
        if len(ids) != len(set(ids)):
            raise ExpectationsError(f"{path}: duplicate entry ids")
        return cls(path, scheme, entries)


def _pair_list(pairs):
    return [format_pair(pair) for pair in sort_pairs(pairs)]


def _normalise(kind, value):
    """Order-free form of an expected or computed value, for comparison."""
    if value is None:
        return None
    if kind in PAIR_KINDS:
        return frozenset(parse_pair(text) for text in value)
    if kind == 'warnings':
        return frozenset(frozenset(labels) for labels in value)
    if kind in ('quartets', 'classes', 'dinucleotides', 'stop-codons'):
        return frozenset(value)
    return value


def _render(item):
    if isinstance(item, tuple):
        return format_pair(item)
    if isinstance(item, frozenset):
        return ' + '.join(sorted(item))
    return str(item)


class Evaluator:
    """Computes entry values, caching derivations across entries."""

    def __init__(self, scheme, derive_kwargs=None):
        self.scheme = Scheme.parse(scheme)
        self.derive_kwargs = dict(derive_kwargs or {})
        self._derivations = {}

    def derivation(self, entry):
        scheme = Scheme.parse(entry.scheme or self.scheme)
        options = entry.catalog_options()
        key = (scheme, entry.damping, entry.ser_trigger, options)
        if key not in self._derivations:
            self._derivations[key] = derive(
                scheme,
                damping=entry.damping,
                ser_trigger=entry.ser_trigger,
                options=options,
                **self.derive_kwargs,
            )
        return self._derivations[key]

    def compute(self, entry):
        scheme = Scheme.parse(entry.scheme or self.scheme)
        kind = entry.kind
        if kind in PAIR_KINDS:
            allowed, forbidden = classify(entry.family, scheme, entry.catalog_options())
            if kind == 'allowed':
                return _pair_list(allowed)
            if kind == 'forbidden':
                return _pair_list(forbidden)
            wanted = [parse_pair(text) for text in entry.target]
            if kind == 'includes':
                return _pair_list(pair for pair in wanted if pair in allowed)
            return _pair_list(pair for pair in wanted if pair not in allowed)
        if kind == 'dinucleotides':
            return list(dinucleotides_where(lambda flags: flags.as_dict()[entry.flag] == entry.rank))
        if kind == 'stop-codons':
            table = GENETIC_CODES[entry.table]
            return [codon for codon in CODONS if table.mapping[codon] == 'Ter']
        if kind == 'count':
            return count_report()
        partition = self.derivation(entry).level(entry.level).partition
        if kind == 'quartets':
            return [label[:2] for label in partition.classes_of_size(4)]
        if kind == 'shape':
            return partition.shape()
        if kind == 'classes':
            return partition.classes_of_size(entry.size)
        warnings = [w for w in self.derivation(entry).level(entry.level).warnings
                    if entry.reason is None or w.reason == entry.reason]
        return [list(w.classes) for w in warnings]


@dataclass(frozen=True)
class EntryResult:
    entry: ExpectationEntry
    status: str
    computed: object

    @property
    def differences(self):
        kind = self.entry.kind
        target = _normalise(kind, self.entry.target)
        computed = _normalise(kind, self.computed)
        if kind == 'count':
            return {key: value for key, value in target.items() if computed.get(key) != value}
        if isinstance(target, frozenset):
            return {'missing': sorted(map(_render, target - computed)),
                    'unexpected': sorted(map(_render, computed - target))}
        return {'expected': target, 'computed': computed}

    def as_dict(self):
        result = {
            'id': self.entry.id,
            'kind': self.entry.kind,
            'status': self.status,
            'citation': self.entry.citation,
            'computed': self.computed,
        }
        if self.entry.discrepancy:
            result['published'] = self.entry.published
        else:
            result['expected'] = self.entry.expected
        if self.status == 'fail':
            result['differences'] = self.differences
        return result


def _matches(kind, wanted, computed):
    if kind == 'count':
        return all(computed.get(key) == value for key, value in wanted.items())
    return _normalise(kind, wanted) == _normalise(kind, computed)


def check_entry(entry, evaluator):
    try:
        computed = evaluator.compute(entry)
    except CrystalEngineError as exc:
        raise ExpectationsError(f"entry {entry.id}: {exc}") from exc
    if not entry.discrepancy:
        status = 'pass' if _matches(entry.kind, entry.expected, computed) else 'fail'
    elif _matches(entry.kind, entry.published, computed):
        status = 'resolved'
    elif _matches(entry.kind, entry.computed, computed):
        status = 'discrepancy'
    else:
        status = 'drift'
    return EntryResult(entry, status, computed)


@dataclass(frozen=True)
class VerificationReport:
    path: str
    scheme: Scheme
    results: tuple

    @property
    def failures(self):
        return [result for result in self.results if result.status == 'fail']

    @property
    def ok(self):
        return not self.failures

    def counts(self):
        counts = {}
        for result in self.results:
            counts[result.status] = counts.get(result.status, 0) + 1
        return counts

    def as_dict(self):
        return {
            'path': self.path,
            'scheme': self.scheme.value,
            'ok': self.ok,
            'counts': self.counts(),
            'results': [result.as_dict() for result in self.results],
        }


def verify(expectations, derive_kwargs=None):
    """Check every entry; discrepancies are reported, only plain mismatches fail."""
    evaluator = Evaluator(expectations.scheme, derive_kwargs)
    results = tuple(check_entry(entry, evaluator) for entry in expectations.entries)
    report = VerificationReport(expectations.path, expectations.scheme, results)
    for result in report.results:
        if result.status == 'fail':
            logger.error(f"{result.entry.id}: {result.differences}")
        elif result.status in ('drift', 'resolved'):
            logger.warning(f"{result.entry.id}: discrepancy entry is {result.status}")
    logger.info(f"verified {expectations.path}: {report.counts()}")
    return report
