"""
Exact sl(2) crystal arithmetic.

Every spin and weight is stored doubled, so 3/2 is ``HalfInt(3)``. A state
(j, m) of the crystal B(j) is the reduced signature ``-^a +^p`` with
a = j - m raising steps left and p = j + m lowering steps left. The tensor
product cancels adjacent ``+-`` pairs across the two factors; what survives
is again a reduced signature and names the connected component.
"""
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from itertools import product
from collections import Counter

from core.exceptions import InvalidStateError


@dataclass(frozen=True, order=True)
class HalfInt:
    twice_value: int

    @classmethod
    def of(cls, value):
        """Build from an int, a Fraction, a HalfInt or a string like ``'-3/2'``."""
        if isinstance(value, HalfInt):
            return value
        if isinstance(value, str):
            value = Fraction(value.strip())
        doubled = Fraction(value) * 2
        if doubled.denominator != 1:
            raise InvalidStateError(f"{value} is not a multiple of 1/2")
        return cls(int(doubled))

    @property
    def is_integral(self):
        return self.twice_value % 2 == 0

    def as_fraction(self):
        return Fraction(self.twice_value, 2)

    def __add__(self, other):
        return HalfInt(self.twice_value + HalfInt.of(other).twice_value)

    def __sub__(self, other):
        return HalfInt(self.twice_value - HalfInt.of(other).twice_value)

    def __neg__(self):
        return HalfInt(-self.twice_value)

    def __abs__(self):
        return HalfInt(abs(self.twice_value))

    def __str__(self):
        if self.is_integral:
            return str(self.twice_value // 2)
        return f"{self.twice_value}/2"


ZERO = HalfInt(0)
HALF = HalfInt(1)


@dataclass(frozen=True)
class Sl2State:
    """A vertex (j, m) of the sl(2) crystal B(j)."""
    j: HalfInt
    m: HalfInt

    def __post_init__(self):
        if self.j.twice_value < 0:
            raise InvalidStateError(f"negative spin j={self.j}")
        if abs(self.m.twice_value) > self.j.twice_value:
            raise InvalidStateError(f"|m| > j for (j={self.j}, m={self.m})")
        if (self.j.twice_value - self.m.twice_value) % 2:
            raise InvalidStateError(f"j - m not integral for (j={self.j}, m={self.m})")

    @classmethod
    def of(cls, j, m):
        return cls(HalfInt.of(j), HalfInt.of(m))

    @classmethod
    def from_signature(cls, minus, plus):
        return cls(HalfInt(minus + plus), HalfInt(plus - minus))

    @property
    def minus(self):
        return (self.j.twice_value - self.m.twice_value) // 2

    @property
    def plus(self):
        return (self.j.twice_value + self.m.twice_value) // 2

    @property
    def is_lowest_weight(self):
        return self.lowered() is None

    @property
    def is_highest_weight(self):
        return self.raised() is None

    def lowered(self):
        """Kashiwara f: move one step down the chain, None past the bottom."""
        if self.plus == 0:
            return None
        return Sl2State(self.j, HalfInt(self.m.twice_value - 2))

    def raised(self):
        """Kashiwara e: move one step up the chain, None past the top."""
        if self.minus == 0:
            return None
        return Sl2State(self.j, HalfInt(self.m.twice_value + 2))

    def __str__(self):
        return f"({self.j}, {self.m})"


class TensorConvention(str, Enum):
    # left = -^a1 +^p1, right = -^a2 +^p2; a '+' of the left factor cancels a '-' of the right one
    PLUS_MINUS = 'plus-minus'
    # signatures read +^p -^a; a '-' of the left factor cancels a '+' of the right one
    MINUS_PLUS = 'minus-plus'


# Reproduces every row of the codon and dinucleotide tables; MINUS_PLUS already fails on CU.
TENSOR_CONVENTION = TensorConvention.PLUS_MINUS


def tensor_pair(left, right, convention=TENSOR_CONVENTION):
    """Return the (J, M) label of ``left (x) right`` in B(j1) (x) B(j2)."""
    if convention is TensorConvention.PLUS_MINUS:
        cancelled = min(left.plus, right.minus)
    else:
        cancelled = min(left.minus, right.plus)
    return Sl2State.from_signature(
        left.minus + right.minus - cancelled,
        left.plus + right.plus - cancelled,
    )


@dataclass(frozen=True)
class WeightLabels:
    """The quadruple (J_H, J_V; M_H, M_V) without the copy index."""
    j_h: HalfInt
    j_v: HalfInt
    m_h: HalfInt
    m_v: HalfInt

    def __post_init__(self):
        Sl2State(self.j_h, self.m_h)
        Sl2State(self.j_v, self.m_v)

    @classmethod
    def from_states(cls, h, v):
        return cls(h.j, v.j, h.m, v.m)

    @property
    def h(self):
        return Sl2State(self.j_h, self.m_h)

    @property
    def v(self):
        return Sl2State(self.j_v, self.m_v)

    def as_dict(self):
        return {'jh': str(self.j_h), 'jv': str(self.j_v), 'm3h': str(self.m_h), 'm3v': str(self.m_v)}

    def __str__(self):
        return f"({self.j_h}, {self.j_v}; {self.m_h}, {self.m_v})"


@dataclass(frozen=True, order=True)
class IrrepLabel:
    j_h: HalfInt
    j_v: HalfInt
    mult: int = 1

    def __post_init__(self):
        if self.j_h.twice_value < 0 or self.j_v.twice_value < 0:
            raise InvalidStateError(f"negative spin in irrep ({self.j_h}, {self.j_v})")
        if self.mult < 1:
            raise InvalidStateError(f"multiplicity index must be positive, got {self.mult}")

    @property
    def dimension(self):
        return (self.j_h.twice_value + 1) * (self.j_v.twice_value + 1)

    def __str__(self):
        return f"({self.j_h}, {self.j_v})^{self.mult}"


@dataclass(frozen=True)
class CrystalState:
    irrep: IrrepLabel
    m_h: HalfInt
    m_v: HalfInt

    def __post_init__(self):
        Sl2State(self.irrep.j_h, self.m_h)
        Sl2State(self.irrep.j_v, self.m_v)

    @property
    def labels(self):
        return WeightLabels(self.irrep.j_h, self.irrep.j_v, self.m_h, self.m_v)

    @property
    def h(self):
        return Sl2State(self.irrep.j_h, self.m_h)

    @property
    def v(self):
        return Sl2State(self.irrep.j_v, self.m_v)

    def as_dict(self):
        return {**self.labels.as_dict(), 'mult': self.irrep.mult}

    def __str__(self):
        return f"{self.irrep}; {self.m_h}, {self.m_v}"


def coupling_path(states, convention=TENSOR_CONVENTION):
    """Doubled J after each step of the left-associated fold of ``states``."""
    if not states:
        raise InvalidStateError("empty tensor product")
    current = states[0]
    path = [current.j.twice_value]
    for state in states[1:]:
        current = tensor_pair(current, state, convention)
        path.append(current.j.twice_value)
    return current, tuple(path)


@lru_cache(maxsize=None)
def coupling_paths(factor_spins):
    """
    All fold paths through B(j1) (x) ... (x) B(jn), doubled, highest first.

    A path is the sequence of intermediate doubled spins; each path is one
    irreducible component, so paths ending at the same spin enumerate the
    copies of that irrep.
    """
    paths = [(factor_spins[0],)]
    for spin in factor_spins[1:]:
        paths = [
            path + (total,)
            for path in paths
            for total in range(abs(path[-1] - spin), path[-1] + spin + 1, 2)
        ]
    return tuple(sorted(paths, reverse=True))


def multiplicity_index(path_h, path_v, spins_h, spins_v):
    """
    Copy index of the irrep reached along (path_h, path_v).

    Copies are numbered over the coupling paths sharing the final spins,
    horizontal path major, higher intermediate spins first.
    """
    candidates_h = [p for p in coupling_paths(spins_h) if p[-1] == path_h[-1]]
    candidates_v = [p for p in coupling_paths(spins_v) if p[-1] == path_v[-1]]
    return 1 + list(product(candidates_h, candidates_v)).index((path_h, path_v))


def product_state(factors, convention=TENSOR_CONVENTION):
    """
    Fold ``((f1 (x) f2) (x) f3) ...`` independently on both sl(2) factors.

    ``factors`` is a sequence of (horizontal, vertical) Sl2State pairs.
    """
    if not factors:
        raise InvalidStateError("product_state needs at least one factor")
    h, path_h = coupling_path([f[0] for f in factors], convention)
    v, path_v = coupling_path([f[1] for f in factors], convention)
    spins_h = tuple(f[0].j.twice_value for f in factors)
    spins_v = tuple(f[1].j.twice_value for f in factors)
    mult = multiplicity_index(path_h, path_v, spins_h, spins_v)
    return CrystalState(IrrepLabel(h.j, v.j, mult), h.m, v.m)


def decompose(factor_spins):
    """Multiplicity of each doubled spin in B(j1) (x) ... (x) B(jn)."""
    return Counter(path[-1] for path in coupling_paths(tuple(factor_spins)))


def product_census(factor_count):
    """
    Irreps of the ``factor_count``-fold power of the (1/2, 1/2) crystal.

    Maps (J_H, J_V) to the number of copies.
    """
    spins = decompose((1,) * factor_count)
    return {
        (HalfInt(jh), HalfInt(jv)): count_h * count_v
        for jh, count_h in sorted(spins.items(), reverse=True)
        for jv, count_v in sorted(spins.items(), reverse=True)
    }
