"""
Hierarchical derivation of the codon multiplets.

Each error level may only merge whole multiplets formed at earlier levels;
a multiplet is never split. Merge decisions are driven by ``MergeRule``
values so that scheme variants, the level-4 damping and the level-5 family
whitelist are data, not branches.
"""
import logging
from dataclasses import dataclass, field, replace

from core.exceptions import ConfigurationError, CrystalEngineError
from crystals.codons import BASES, CODON_INDEX, CODONS, NUCLEOTIDE_CLASSES

from .catalog import (
    DEFAULT_OPTIONS,
    LEVELS,
    Scheme,
    allowed_by_family,
    families_for,
    format_pair,
    sort_pairs,
)

logger = logging.getLogger(__name__)

SIZE_NAMES = {1: 'singlets', 2: 'doublets', 3: 'triplets', 4: 'quartets', 6: 'sextets', 8: 'octets'}
ALLOWED_CLASS_SIZES = frozenset((1, 2, 4, 6, 8))

# Merge proposals the real codes do not show; only the alternative schemes produce them.
DEFAULT_UNOBSERVED_MERGES = (
    ('GAR', 'AAR'),
    ('CAR', 'UAR'),
    ('CAR', 'AAR'),
    ('UGR', 'CGN'),
    ('AGR', 'GGN'),
    ('AUR', 'GUN'),
    ('AUR', 'CUN'),
)
DEFAULT_LEVEL5_MERGE_FAMILIES = ('TVTV',)
# Ser trigger cited by the conclusions rather than computed from the TVTV operators.
ASSERTED_SER_TRIGGER = (('UCA', 'AGA'),)
SER_TRIGGER_MODES = ('computed', 'asserted')


def _third_base_label(bases):
    bases = frozenset(bases)
    for name, members in NUCLEOTIDE_CLASSES.items():
        if bases == members:
            return name
    ordered = ''.join(base for base in BASES if base in bases)
    return ordered if len(ordered) == 1 else f"[{ordered}]"


def class_label(codons):
    """Compact name of a codon set grouped by first two nucleotides, e.g. ``CUN+UUR``."""
    prefixes = {}
    for codon in sorted(codons, key=CODON_INDEX.__getitem__):
        prefixes.setdefault(codon[:2], set()).add(codon[2])
    return '+'.join(prefix + _third_base_label(bases) for prefix, bases in prefixes.items())


def merge_key(*labels):
    return frozenset(labels)


@dataclass(frozen=True)
class MultipletPartition:
    classes: tuple
    level: int = 0
    annotations: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        seen = set()
        for codons in self.classes:
            if len(codons) not in ALLOWED_CLASS_SIZES:
                raise CrystalEngineError(f"class {class_label(codons)} has size {len(codons)}")
            if seen & codons:
                raise CrystalEngineError(f"class {class_label(codons)} overlaps another class")
            seen |= codons
        if seen != set(CODONS):
            raise CrystalEngineError(f"partition covers {len(seen)} of 64 codons")

    @classmethod
    def from_groups(cls, groups, level=0, annotations=None):
        classes = sorted((frozenset(group) for group in groups),
                         key=lambda codons: min(CODON_INDEX[c] for c in codons))
        return cls(tuple(classes), level, annotations or {})

    @classmethod
    def trivial(cls):
        return cls.from_groups([{codon} for codon in CODONS])

    def class_of(self, codon):
        for codons in self.classes:
            if codon in codons:
                return codons
        raise CrystalEngineError(f"{codon} is not a codon")

    def labels(self):
        return [class_label(codons) for codons in self.classes]

    def label_of(self, codon):
        return class_label(self.class_of(codon))

    def size_counts(self):
        counts = {}
        for codons in self.classes:
            counts[len(codons)] = counts.get(len(codons), 0) + 1
        return dict(sorted(counts.items(), reverse=True))

    def shape(self):
        return {SIZE_NAMES[size]: count for size, count in self.size_counts().items()}

    def classes_of_size(self, size):
        return [class_label(codons) for codons in self.classes if len(codons) == size]

    def coarsens(self, finer):
        """Every class of ``finer`` lies inside a class of this partition."""
        return all(any(codons <= mine for mine in self.classes) for codons in finer.classes)

    def merged(self, groups, level):
        """New partition at ``level`` where each group of classes becomes one class."""
        absorbed = set()
        merged = []
        for group in groups:
            union = frozenset().union(*group)
            absorbed.update(group)
            merged.append(union)
        kept = [codons for codons in self.classes if codons not in absorbed]
        return MultipletPartition.from_groups(kept + merged, level)

    def as_dict(self):
        return {
            'level': self.level,
            'shape': self.shape(),
            'classes': [
                {
                    'label': class_label(codons),
                    'size': len(codons),
                    'codons': sorted(codons, key=CODON_INDEX.__getitem__),
                    **({'notes': list(self.annotations[class_label(codons)])}
                       if class_label(codons) in self.annotations else {}),
                }
                for codons in self.classes
            ],
        }


@dataclass(frozen=True)
class MergeRule:
    level: int
    mode: str
    description: str
    mergeable_sizes: tuple = (2, 4)
    weak_bases: frozenset = frozenset('CA')
    merge_families: tuple = None
    corroboration_level: int = None
    unobserved: frozenset = frozenset()
    asserted_pairs: frozenset = frozenset()

    def __post_init__(self):
        if self.mode not in ('connected', 'complete', 'weakest-codon'):
            raise ConfigurationError(f"unknown merge mode {self.mode!r}")

    def required_bases(self, first, second):
        """Weak third-position bases whose substitution must be allowed for the merge."""
        if len(first) == len(second):
            thirds = {codon[2] for codon in first | second}
        else:
            smaller = first if len(first) < len(second) else second
            thirds = {codon[2] for codon in smaller}
        return self.weak_bases & thirds

    def is_satisfied(self, first, second, pairs):
        if self.asserted_pairs & set(pairs):
            return True
        covered = {source[2] for source, _ in pairs}
        required = self.required_bases(first, second)
        return bool(required) and required <= covered


def merge_rules(scheme=Scheme.A, damping=True, ser_trigger='computed',
                level5_merge_families=DEFAULT_LEVEL5_MERGE_FAMILIES,
                unobserved_merges=DEFAULT_UNOBSERVED_MERGES):
    scheme = Scheme.parse(scheme)
    if ser_trigger not in SER_TRIGGER_MODES:
        raise ConfigurationError(f"ser_trigger must be one of {', '.join(SER_TRIGGER_MODES)}")
    unobserved = frozenset(merge_key(*pair) for pair in unobserved_merges) if scheme is not Scheme.A else frozenset()
    return {
        1: MergeRule(1, 'connected', 'codons joined by an allowed transition share a multiplet'),
        2: MergeRule(2, 'complete', 'XZY and XZR merge when every transversion between them is allowed'),
        3: MergeRule(3, 'weakest-codon', 'first-position errors merge multiplets protecting C/A-ending codons',
                     unobserved=unobserved),
        4: MergeRule(4, 'weakest-codon', 'second-position errors merge multiplets protecting C/A-ending codons',
                     corroboration_level=5 if damping else None),
        5: MergeRule(5, 'weakest-codon', 'two-nucleotide errors merge multiplets protecting C/A-ending codons',
                     merge_families=tuple(level5_merge_families),
                     asserted_pairs=frozenset(ASSERTED_SER_TRIGGER) if ser_trigger == 'asserted' else frozenset()),
    }


@dataclass(frozen=True)
class MergeEvent:
    level: int
    rule: str
    families: tuple
    triggers: tuple
    classes: tuple
    result: str

    def as_dict(self):
        return {
            'level': self.level,
            'rule': self.rule,
            'families': list(self.families),
            'triggers': [format_pair(pair) for pair in self.triggers],
            'classes': list(self.classes),
            'result': self.result,
        }


@dataclass(frozen=True)
class MergeWarning:
    level: int
    reason: str
    families: tuple
    triggers: tuple
    classes: tuple

    @property
    def key(self):
        return merge_key(*self.classes)

    def as_dict(self):
        return {
            'level': self.level,
            'reason': self.reason,
            'families': list(self.families),
            'triggers': [format_pair(pair) for pair in self.triggers],
            'classes': list(self.classes),
        }


@dataclass(frozen=True)
class LevelTrace:
    level: int
    partition: MultipletPartition
    allowed: dict
    merges: tuple
    warnings: tuple

    def as_dict(self):
        return {
            'level': self.level,
            'allowed': {name: [format_pair(p) for p in sort_pairs(pairs)] for name, pairs in self.allowed.items()},
            'merges': [event.as_dict() for event in self.merges],
            'warnings': [warning.as_dict() for warning in self.warnings],
            'partition': self.partition.as_dict(),
        }


@dataclass(frozen=True)
class Derivation:
    scheme: Scheme
    damping: bool
    ser_trigger: str
    levels: tuple

    @property
    def partitions(self):
        return [trace.partition for trace in self.levels]

    @property
    def final(self):
        return self.levels[-1].partition

    def level(self, number):
        for trace in self.levels:
            if trace.level == number:
                return trace
        raise ConfigurationError(f"derivation stops before level {number}")

    def warnings(self, reason=None):
        return [w for trace in self.levels for w in trace.warnings if reason is None or w.reason == reason]

    def as_dict(self):
        return {
            'scheme': self.scheme.value,
            'damping': self.damping,
            'ser_trigger': self.ser_trigger,
            'levels': [trace.as_dict() for trace in self.levels],
            'final': self.final.as_dict(),
        }


def _links(partition, pairs_by_family):
    """Allowed pairs between distinct classes, keyed by the class pair."""
    links = {}
    for family, pairs in pairs_by_family.items():
        for source, target in sort_pairs(pairs):
            first, second = partition.class_of(source), partition.class_of(target)
            if first == second:
                continue
            key = tuple(sorted((first, second), key=lambda codons: min(CODON_INDEX[c] for c in codons)))
            links.setdefault(key, {}).setdefault(family, []).append((source, target))
    return dict(sorted(links.items(), key=lambda item: (min(CODON_INDEX[c] for c in item[0][0]),
                                                        min(CODON_INDEX[c] for c in item[0][1]))))


def _flatten(by_family, names=None):
    pairs = []
    for family, family_pairs in by_family.items():
        if names is None or family in names:
            pairs.extend(family_pairs)
    return tuple(sort_pairs(pairs))


def _connected_groups(partition, pairs):
    parent = {codons: codons for codons in partition.classes}

    def find(node):
        while parent[node] != node:
            parent[node] = parent[parent[node]]
            node = parent[node]
        return node

    triggers = {}
    for source, target in sort_pairs(pairs):
        first, second = find(partition.class_of(source)), find(partition.class_of(target))
        if first != second:
            parent[second] = first
    for source, target in sort_pairs(pairs):
        triggers.setdefault(find(partition.class_of(source)), []).append((source, target))
    groups = {}
    for codons in partition.classes:
        groups.setdefault(find(codons), []).append(codons)
    return [(members, tuple(triggers.get(root, ()))) for root, members in groups.items() if len(members) > 1]


def _level_candidates(level):
    return {family.name: family.candidates() for family in families_for(level)}


def _evaluate_complete(rule, partition, allowed):
    proposals = []
    candidates = _level_candidates(rule.level)
    every = _links(partition, {name: set(pairs) for name, pairs in candidates.items()})
    granted = _links(partition, allowed)
    for key, by_family in every.items():
        wanted = set(_flatten(by_family))
        got = set(_flatten(granted.get(key, {})))
        if wanted and wanted <= got:
            proposals.append((key, tuple(by_family), tuple(sort_pairs(got))))
    return proposals, []


def _evaluate_weakest(rule, partition, merge_pairs, corroborating, scheme):
    proposals, warnings = [], []
    corroborated = set(_links(partition, corroborating)) if corroborating is not None else None
    for key, by_family in _links(partition, merge_pairs).items():
        first, second = key
        labels = (class_label(first), class_label(second))
        families = tuple(by_family)
        triggers = _flatten(by_family)
        if not rule.is_satisfied(first, second, triggers):
            continue
        if rule.merge_families is not None:
            whitelisted = [name for name in families if name in rule.merge_families]
            whitelisted_triggers = _flatten(by_family, whitelisted)
            if not whitelisted or not rule.is_satisfied(first, second, whitelisted_triggers):
                warnings.append(MergeWarning(rule.level, 'family-not-merging', families, triggers, labels))
                continue
            families, triggers = tuple(whitelisted), whitelisted_triggers
        if len(first) not in rule.mergeable_sizes or len(second) not in rule.mergeable_sizes:
            warnings.append(MergeWarning(rule.level, 'frozen', families, triggers, labels))
            continue
        if merge_key(*labels) in rule.unobserved:
            warnings.append(MergeWarning(rule.level, 'unobserved', families, triggers, labels))
            continue
        if corroborated is not None and key not in corroborated:
            warnings.append(MergeWarning(rule.level, 'damped', families, triggers, labels))
            continue
        proposals.append((key, families, triggers))
    return proposals, warnings


def _resolve_conflicts(level, proposals):
    usage = {}
    for key, _, _ in proposals:
        for codons in key:
            usage[codons] = usage.get(codons, 0) + 1
    kept, warnings = [], []
    for key, families, triggers in proposals:
        if any(usage[codons] > 1 for codons in key):
            labels = tuple(class_label(codons) for codons in key)
            warnings.append(MergeWarning(level, 'conflict', families, triggers, labels))
        else:
            kept.append((key, families, triggers))
    return kept, warnings


def derive(scheme=Scheme.A, max_level=5, damping=True, ser_trigger='computed',
           level5_merge_families=DEFAULT_LEVEL5_MERGE_FAMILIES,
           unobserved_merges=DEFAULT_UNOBSERVED_MERGES, options=DEFAULT_OPTIONS):
    """Run the error levels 1..max_level in order and trace every merge."""
    scheme = Scheme.parse(scheme)
    if max_level not in LEVELS:
        raise ConfigurationError(f"max_level must be between 1 and 5, got {max_level}")
    rules = merge_rules(scheme, damping, ser_trigger, level5_merge_families, unobserved_merges)
    partition = MultipletPartition.trivial()
    traces = []
    logger.info(f"deriving scheme {scheme.value} up to level {max_level} (damping={'on' if damping else 'off'})")

    for level in range(1, max_level + 1):
        rule = rules[level]
        allowed = allowed_by_family(level, scheme, options)
        merge_pairs = dict(allowed)
        if rule.asserted_pairs and 'TVTV' in merge_pairs:
            merge_pairs['TVTV'] = rule.asserted_pairs

        warnings = []
        if rule.mode == 'connected':
            groups = _connected_groups(partition, _flatten(allowed))
            proposals = [(tuple(members), tuple(allowed), triggers) for members, triggers in groups]
        elif rule.mode == 'complete':
            proposals, warnings = _evaluate_complete(rule, partition, allowed)
        else:
            corroborating = None
            if rule.corroboration_level is not None:
                corroborating = allowed_by_family(rule.corroboration_level, scheme, options)
            proposals, warnings = _evaluate_weakest(rule, partition, merge_pairs, corroborating, scheme)
        if rule.mode != 'connected':
            proposals, conflicts = _resolve_conflicts(level, proposals)
            warnings.extend(conflicts)

        merged = partition.merged([key for key, _, _ in proposals], level)
        events = tuple(
            MergeEvent(level, rule.mode, families, tuple(triggers),
                       tuple(class_label(codons) for codons in key),
                       class_label(frozenset().union(*key)))
            for key, families, triggers in proposals
        )
        for warning in warnings:
            logger.warning(
                f"level {level}: {'+'.join(warning.classes)} not merged ({warning.reason}; "
                f"{', '.join(format_pair(p) for p in warning.triggers)})"
            )
        logger.debug(f"level {level}: {len(events)} merges, shape {merged.shape()}")
        traces.append(LevelTrace(level, merged, allowed, events, tuple(warnings)))
        partition = merged

    logger.info(f"scheme {scheme.value} final shape {partition.shape()}")
    return Derivation(scheme, damping, ser_trigger, tuple(traces))


@dataclass(frozen=True)
class DiffReport:
    table: str
    matches: tuple
    mismatches: dict
    split_groups: dict
    summary: dict

    def as_dict(self):
        return {
            'table': self.table,
            'matches': list(self.matches),
            'mismatches': {label: list(aas) for label, aas in self.mismatches.items()},
            'split_groups': {aa: list(labels) for aa, labels in self.split_groups.items()},
            'summary': self.summary,
        }


def diff_against(partition, table):
    """Compare the classes of ``partition`` with the synonym groups of a genetic code."""
    matches, mismatches = [], {}
    for codons in partition.classes:
        amino_acids = sorted({table.mapping[codon] for codon in codons})
        if len(amino_acids) == 1:
            matches.append(class_label(codons))
        else:
            mismatches[class_label(codons)] = tuple(amino_acids)
    split_groups = {}
    for amino_acid, codons in table.synonym_groups().items():
        labels = []
        for codon in codons:
            label = partition.label_of(codon)
            if label not in labels:
                labels.append(label)
        if len(labels) > 1:
            split_groups[amino_acid] = tuple(labels)
    summary = {
        'classes': partition.shape(),
        'matches': len(matches),
        'mismatches': len(mismatches),
        'split_groups': len(split_groups),
    }
    return DiffReport(table.name, tuple(matches), mismatches, split_groups, summary)


SINGLET_SPLIT_NOTE = 'singlet-split-candidate'
STOP_CODON_NOTE = 'stop-codon-candidate'


def annotate_singlet_candidates(partition, derivation):
    """
    Flag doublets that are only partly protected.

    A doublet is flagged when some, but not all, level-2 transversions from
    its XZ sibling reach it while the two stay apart, or when it holds the
    target of a merge the real codes do not show.

    Flags depend on the partition. Under Scheme A, UGR and AGR are flagged
    on the level-2 partition; AGR later joins the Arg sextet, so the final
    partition keeps only UGR. UAR is flagged only under Scheme B, through
    the unobserved merges of level 3.
    """
    notes = {}
    doublets = {codons for codons in partition.classes if len(codons) == 2}

    if partition.level >= 2:
        level_two = derivation.level(2)
        candidates = _level_candidates(2)
        for key, by_family in _links(level_two.partition, {n: set(p) for n, p in candidates.items()}).items():
            wanted = set(_flatten(by_family))
            got = wanted & set(_flatten(level_two.allowed))
            if not got or got == wanted:
                continue
            for _, target in sort_pairs(got):
                target_class = partition.class_of(target)
                if target_class in doublets:
                    notes.setdefault(class_label(target_class), []).append(SINGLET_SPLIT_NOTE)

    for warning in derivation.warnings('unobserved'):
        if warning.level > partition.level:
            continue
        for _, target in warning.triggers:
            target_class = partition.class_of(target)
            if target_class in doublets:
                notes.setdefault(class_label(target_class), []).append(STOP_CODON_NOTE)

    annotations = {label: tuple(dict.fromkeys(flags)) for label, flags in notes.items()}
    return replace(partition, annotations=annotations)
