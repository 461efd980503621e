"""
The error model: which crystal tensor operator describes each reading
error, and which codon-to-codon substitutions the operators allow.

Errors come in five levels of decreasing frequency: third-position
transitions, third-position transversions, first-position substitutions,
second-position substitutions and simultaneous substitutions of the first
two nucleotides. Only the directions C -> U, G -> A, C -> G, U -> A and
C -> A are modelled; U -> G is out of the model.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

from core.exceptions import ConfigurationError, UnsupportedEventError
from crystals.codons import CODONS, codon_state, dinucleotide_predicates, parse_codon
from crystals.operators import CrystalTensorOp, connects, connects_sequential

logger = logging.getLogger(__name__)


class Scheme(str, Enum):
    A = 'a'
    B = 'b'
    # alternative scheme with the plain tau^1_{H,0} (x) tau^1_{V,-1} third-position transversions
    B0 = 'b0'

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError as exc:
            raise ConfigurationError(f"unknown scheme {value!r}; expected one of a, b, b0") from exc


class SubstitutionKind(str, Enum):
    TRANSITION = 'transition'
    C_TO_G = 'c-to-g'
    U_TO_A = 'u-to-a'
    C_TO_A = 'c-to-a'


KIND_CHANGES = {
    SubstitutionKind.TRANSITION: {'C': 'U', 'G': 'A'},
    SubstitutionKind.C_TO_G: {'C': 'G'},
    SubstitutionKind.U_TO_A: {'U': 'A'},
    SubstitutionKind.C_TO_A: {'C': 'A'},
}

POSITION_NAMES = {1: 'first', 2: 'second', 3: 'third'}


def kind_of_change(source_base, target_base):
    for kind, changes in KIND_CHANGES.items():
        if changes.get(source_base) == target_base:
            return kind
    if (source_base, target_base) == ('U', 'G'):
        raise UnsupportedEventError("the U -> G transversion is not part of the error model")
    raise UnsupportedEventError(f"{source_base} -> {target_base} is not a modelled substitution direction")


@dataclass(frozen=True)
class SubstitutionEvent:
    kind: SubstitutionKind
    position: int
    source: str
    target: str

    def __post_init__(self):
        if self.position not in POSITION_NAMES:
            raise UnsupportedEventError(f"position must be 1, 2 or 3, got {self.position}")
        source, target = parse_codon(self.source), parse_codon(self.target)
        index = self.position - 1
        if source[:index] + source[index + 1:] != target[:index] + target[index + 1:]:
            raise UnsupportedEventError(f"{source} -> {target} changes more than position {self.position}")
        if kind_of_change(source[index], target[index]) is not self.kind:
            raise UnsupportedEventError(f"{source} -> {target} is not a {self.kind.value} substitution")

    @classmethod
    def between(cls, source, target):
        source, target = parse_codon(source), parse_codon(target)
        changed = [i for i in range(3) if source[i] != target[i]]
        if len(changed) != 1:
            raise UnsupportedEventError(f"{source} -> {target} is not a single-nucleotide substitution")
        index = changed[0]
        return cls(kind_of_change(source[index], target[index]), index + 1, source, target)

    @property
    def pair(self):
        return self.source, self.target


@dataclass(frozen=True)
class CatalogOptions:
    """Operator variants used by the robustness checks."""
    third_transition_rank_v: int = 0
    # None keeps rank 1 for C -> G and rank 2 for U -> A in first position
    first_transversion_rank_h: int = None
    second_c_to_g_rank_h: int = 1
    double_transition: str = 'primary'
    # 'dinucleotide' reads b off the first two nucleotides, 'same-irrep' uses the codon form
    b_rule: str = 'dinucleotide'

    def __post_init__(self):
        if self.third_transition_rank_v not in (0, 1):
            raise ConfigurationError("third_transition_rank_v must be 0 or 1")
        if self.first_transversion_rank_h not in (None, 1, 2):
            raise ConfigurationError("first_transversion_rank_h must be 1, 2 or unset")
        if self.second_c_to_g_rank_h not in (1, 2):
            raise ConfigurationError("second_c_to_g_rank_h must be 1 or 2")
        if self.double_transition not in ('primary', 'alternative'):
            raise ConfigurationError("double_transition must be 'primary' or 'alternative'")
        if self.b_rule not in ('dinucleotide', 'same-irrep'):
            raise ConfigurationError("b_rule must be 'dinucleotide' or 'same-irrep'")


DEFAULT_OPTIONS = CatalogOptions()


def same_irrep(first, second):
    """Codons in the same irrep copy: equal (J_H, J_V, multiplicity)."""
    return codon_state(first).irrep == codon_state(second).irrep


def _with_base(codon, position, base):
    index = position - 1
    return codon[:index] + base + codon[index + 1:]


def b_rank(event, options=DEFAULT_OPTIONS):
    """Horizontal rank parameter b of the third-position transversions."""
    if options.b_rule == 'dinucleotide':
        return dinucleotide_predicates(event.source[:2]).b_rank
    if event.kind is SubstitutionKind.C_TO_A:
        return 2 if same_irrep(event.source, _with_base(event.source, 3, 'U')) else 1
    if same_irrep(event.source, event.target) or codon_state(event.source).irrep.j_h.twice_value == 3:
        return 2
    return 1


def c_rank(event):
    """1 when the C- and U- variants at the event position share an irrep copy, else 2."""
    return 1 if same_irrep(event.source, _with_base(event.source, event.position, 'U')) else 2


def operator_for(event, scheme=Scheme.A, options=DEFAULT_OPTIONS):
    scheme = Scheme.parse(scheme)
    kind, position = event.kind, event.position

    if position == 3:
        if kind is SubstitutionKind.TRANSITION:
            # the variant rank only enters the C -> U equation
            rank_v = options.third_transition_rank_v if event.source[2] == 'C' else 0
            return CrystalTensorOp.of(1, -1, rank_v, 0)
        flags = dinucleotide_predicates(event.source[:2])
        if kind is SubstitutionKind.C_TO_A:
            return CrystalTensorOp.of(b_rank(event, options), -1, 1, -1)
        if scheme is Scheme.B0:
            return CrystalTensorOp.of(1, 0, 1, -1)
        if scheme is Scheme.B:
            rank = flags.alpha_rank if kind is SubstitutionKind.C_TO_G else flags.beta_rank
            return CrystalTensorOp.of(rank, 0, 1, -1)
        b = b_rank(event, options)
        return CrystalTensorOp.of(b if kind is SubstitutionKind.C_TO_G else b - 1, 0, 1, -1)

    if position == 1:
        if kind is SubstitutionKind.TRANSITION:
            return CrystalTensorOp.of(1, -1, 1 if scheme is Scheme.A else 0, 0)
        if kind is SubstitutionKind.C_TO_A:
            if scheme is Scheme.A:
                return CrystalTensorOp.of(c_rank(event), -1, 1, -1)
            # read as C -> G -> A
            return CrystalTensorOp.of(1, -1, 1, -1)
        default = 1 if kind is SubstitutionKind.C_TO_G else 2
        return CrystalTensorOp.of(options.first_transversion_rank_h or default, 0, 1, -1)

    if kind is SubstitutionKind.TRANSITION:
        return CrystalTensorOp.of(1, -1, 2, 0)
    if kind is SubstitutionKind.C_TO_G:
        return CrystalTensorOp.of(options.second_c_to_g_rank_h, 0, 2, -1)
    if kind is SubstitutionKind.U_TO_A:
        return CrystalTensorOp.of(2, 0, 2, -1)
    return CrystalTensorOp.of(c_rank(event), -1, 2, -1)


# Rank of a double-substitution operator that depends on the transverted base.
B = 'b'
TRANSVERSION_B = {('C', 'G'): 1, ('U', 'A'): 2}


@dataclass(frozen=True)
class DoubleFamily:
    name: str
    # (source prefix, target prefix) of the first two nucleotides
    pattern: tuple
    first: tuple
    second: tuple
    alternative: tuple = None

    def operators(self, source_prefix, target_prefix, alternative=False):
        first, second = self.alternative if (alternative and self.alternative) else (self.first, self.second)
        return (
            self._resolve(first, source_prefix[0], target_prefix[0]),
            self._resolve(second, source_prefix[1], target_prefix[1]),
        )

    @staticmethod
    def _resolve(template, source_base, target_base):
        rank_h = template[0]
        if rank_h == B:
            rank_h = TRANSVERSION_B[(source_base, target_base)]
        return CrystalTensorOp.of(rank_h, *template[1:])


DOUBLE_FAMILIES = (
    DoubleFamily('TT', (('CC', 'UU'), ('GG', 'AA'), ('CG', 'UA'), ('GC', 'AU')),
                 (1, -1, 1, 0), (1, -1, 2, 0),
                 alternative=((1, -1, 0, 0), (2, -1, 0, 0))),
    DoubleFamily('TTV', (('CC', 'UG'), ('CU', 'UA'), ('GC', 'AG'), ('GU', 'AA')),
                 (1, -1, 1, 0), (B, 0, 2, -1)),
    DoubleFamily('TTVD', (('CC', 'UA'), ('GC', 'AA')),
                 (1, -1, 1, 0), (2, -1, 2, -1)),
    DoubleFamily('TVT', (('CC', 'GU'), ('CG', 'GA'), ('UC', 'AU'), ('UG', 'AA')),
                 (B, 0, 1, -1), (1, -1, 2, 0)),
    DoubleFamily('TVTD', (('CC', 'AU'), ('CG', 'AA')),
                 (1, -1, 1, -1), (1, -1, 2, 0)),
    DoubleFamily('TVTV', (('CC', 'GG'), ('CU', 'GA'), ('UU', 'AA'), ('UC', 'AG')),
                 (B, 0, 1, -1), (B, 0, 2, -1)),
    DoubleFamily('TVTVD1', (('CC', 'AG'), ('CU', 'AA')),
                 (1, -1, 1, -1), (B, 0, 2, -1)),
    DoubleFamily('TVTVD2', (('CC', 'GA'), ('UC', 'AA')),
                 (B, 0, 1, -1), (2, -1, 2, -1)),
    DoubleFamily('TVTVDD', (('CC', 'AA'),),
                 (1, -1, 1, -1), (2, -1, 2, -1)),
)
DOUBLE_FAMILY_INDEX = {family.name: family for family in DOUBLE_FAMILIES}


@dataclass(frozen=True)
class DoubleSubstitution:
    family: str
    source: str
    target: str

    def __post_init__(self):
        if self.family not in DOUBLE_FAMILY_INDEX:
            raise UnsupportedEventError(f"unknown double-substitution family {self.family!r}")
        source, target = parse_codon(self.source), parse_codon(self.target)
        if source[2] != target[2] or (source[:2], target[:2]) not in DOUBLE_FAMILY_INDEX[self.family].pattern:
            raise UnsupportedEventError(f"{source} -> {target} does not follow the {self.family} pattern")


def double_operator_for(substitution, options=DEFAULT_OPTIONS):
    family = DOUBLE_FAMILY_INDEX[substitution.family]
    return family.operators(
        substitution.source[:2],
        substitution.target[:2],
        alternative=options.double_transition == 'alternative',
    )


@dataclass(frozen=True)
class Family:
    """A set of candidate substitutions evaluated with one operator rule."""
    name: str
    level: int
    position: int = None
    kind: SubstitutionKind = None
    double: DoubleFamily = field(default=None, compare=False)

    def candidates(self):
        """(source, target) pairs in table order of the source codon."""
        if self.double is not None:
            targets = dict(self.double.pattern)
            return tuple(
                (codon, targets[codon[:2]] + codon[2])
                for codon in CODONS if codon[:2] in targets
            )
        index = self.position - 1
        changes = KIND_CHANGES[self.kind]
        return tuple(
            (codon, _with_base(codon, self.position, changes[codon[index]]))
            for codon in CODONS if codon[index] in changes
        )

    def is_allowed(self, source, target, scheme=Scheme.A, options=DEFAULT_OPTIONS):
        if self.double is not None:
            first, second = double_operator_for(DoubleSubstitution(self.name, source, target), options)
            return connects_sequential(source, first, second, target)
        op = operator_for(SubstitutionEvent(self.kind, self.position, source, target), scheme, options)
        return connects(source, op, target)


def _single_family(level, position, kind):
    return Family(f"{POSITION_NAMES[position]}-{kind.value}", level, position, kind)


_KINDS = tuple(SubstitutionKind)

FAMILIES = (
    (_single_family(1, 3, SubstitutionKind.TRANSITION),)
    + tuple(_single_family(2, 3, kind) for kind in _KINDS[1:])
    + tuple(_single_family(3, 1, kind) for kind in _KINDS)
    + tuple(_single_family(4, 2, kind) for kind in _KINDS)
    + tuple(Family(double.name, 5, double=double) for double in DOUBLE_FAMILIES)
)
FAMILY_INDEX = {family.name: family for family in FAMILIES}
LEVELS = (1, 2, 3, 4, 5)


def families_for(level):
    if level not in LEVELS:
        raise ConfigurationError(f"error level must be between 1 and 5, got {level}")
    return tuple(family for family in FAMILIES if family.level == level)


def get_family(name):
    try:
        return FAMILY_INDEX[name]
    except KeyError:
        raise ConfigurationError(f"unknown substitution family {name!r}") from None


@lru_cache(maxsize=None)
def classify(family_name, scheme=Scheme.A, options=DEFAULT_OPTIONS):
    """Split a family's candidates into (allowed, forbidden), both in table order."""
    family = get_family(family_name)
    scheme = Scheme.parse(scheme)
    allowed, forbidden = [], []
    for source, target in family.candidates():
        (allowed if family.is_allowed(source, target, scheme, options) else forbidden).append((source, target))
    logger.debug(f"{family_name} [{scheme.value}]: {len(allowed)} allowed, {len(forbidden)} forbidden")
    return tuple(allowed), tuple(forbidden)


def allowed_set(level, scheme=Scheme.A, family=None, options=DEFAULT_OPTIONS):
    names = [family] if family else [f.name for f in families_for(level)]
    pairs = set()
    for name in names:
        if get_family(name).level != level:
            raise ConfigurationError(f"family {name} belongs to level {get_family(name).level}, not {level}")
        pairs.update(classify(name, Scheme.parse(scheme), options)[0])
    return frozenset(pairs)


def forbidden_set(level, scheme=Scheme.A, family=None, options=DEFAULT_OPTIONS):
    names = [family] if family else [f.name for f in families_for(level)]
    pairs = set()
    for name in names:
        if get_family(name).level != level:
            raise ConfigurationError(f"family {name} belongs to level {get_family(name).level}, not {level}")
        pairs.update(classify(name, Scheme.parse(scheme), options)[1])
    return frozenset(pairs)


def allowed_by_family(level, scheme=Scheme.A, options=DEFAULT_OPTIONS):
    return {family.name: frozenset(classify(family.name, Scheme.parse(scheme), options)[0])
            for family in families_for(level)}


def sort_pairs(pairs):
    order = {codon: i for i, codon in enumerate(CODONS)}
    return sorted(pairs, key=lambda pair: (order[pair[0]], order[pair[1]]))


def format_pair(pair):
    return f"{pair[0]}->{pair[1]}"


def parse_pair(text):
    try:
        source, target = str(text).replace('→', '->').split('->')
    except ValueError:
        raise UnsupportedEventError(f"cannot read substitution {text!r}; expected SOURCE->TARGET") from None
    return parse_codon(source), parse_codon(target)


def substitution_rows(level, scheme=Scheme.A, family=None, options=DEFAULT_OPTIONS):
    """Rows {family, source, target, allowed, scheme} for export."""
    scheme = Scheme.parse(scheme)
    names = [family] if family else [f.name for f in families_for(level)]
    rows = []
    for name in names:
        allowed, _ = classify(name, scheme, options)
        allowed = set(allowed)
        for source, target in get_family(name).candidates():
            rows.append({
                'family': name,
                'source': source,
                'target': target,
                'allowed': (source, target) in allowed,
                'scheme': scheme.value,
            })
    return rows
