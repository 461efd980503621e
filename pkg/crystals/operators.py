"""
Crystal tensor operators and the q -> 0 Wigner-Eckart selection rule.

An operator component tau^j_m acts on a state by sitting in the second
tensor slot: the result carries the labels of ``state (x) (j, m)`` in each
sl(2) factor. The substitution it models is allowed when those labels are
the labels of the target codon.
"""
from dataclasses import dataclass

from core.exceptions import InvalidStateError

from .algebra import HalfInt, Sl2State, WeightLabels, tensor_pair
from .codons import codon_state


@dataclass(frozen=True)
class CrystalTensorOp:
    rank_h: HalfInt
    comp_h: HalfInt
    rank_v: HalfInt
    comp_v: HalfInt

    @classmethod
    def of(cls, rank_h, comp_h, rank_v, comp_v):
        return cls(HalfInt.of(rank_h), HalfInt.of(comp_h), HalfInt.of(rank_v), HalfInt.of(comp_v))

    @classmethod
    def parse(cls, text):
        """Read ``'rank_h,comp_h;rank_v,comp_v'``, e.g. ``'1,-1;2,0'``."""
        try:
            horizontal, vertical = str(text).strip().strip('()').split(';')
            rank_h, comp_h = horizontal.split(',')
            rank_v, comp_v = vertical.split(',')
        except ValueError as exc:
            raise InvalidStateError(f"cannot read operator {text!r}") from exc
        return cls.of(rank_h, comp_h, rank_v, comp_v)

    @staticmethod
    def _component(rank, comp):
        try:
            return Sl2State(rank, comp)
        except InvalidStateError:
            return None

    @property
    def h(self):
        return self._component(self.rank_h, self.comp_h)

    @property
    def v(self):
        return self._component(self.rank_v, self.comp_v)

    @property
    def is_vanishing(self):
        """tau^j_m with |m| > j is the zero operator."""
        return self.h is None or self.v is None

    def __str__(self):
        return f"({self.rank_h},{self.comp_h};{self.rank_v},{self.comp_v})"


@dataclass(frozen=True)
class ConnectionResult:
    labels: WeightLabels = None

    @property
    def is_vanishing(self):
        return self.labels is None


VANISHING = ConnectionResult()


def _labels(source):
    if isinstance(source, WeightLabels):
        return source
    if isinstance(source, str):
        return codon_state(source).labels
    return source.labels


def apply_op(source, op):
    """Labels reached from ``source`` (a state, labels or codon) under ``op``."""
    if op.is_vanishing:
        return VANISHING
    labels = _labels(source)
    h = tensor_pair(labels.h, op.h)
    v = tensor_pair(labels.v, op.v)
    return ConnectionResult(WeightLabels.from_states(h, v))


def weight_shift_matches(source, op, target):
    """Necessary condition: target weights are source weights plus the operator components."""
    source, target = _labels(source), _labels(target)
    return (target.m_h == source.m_h + op.comp_h) and (target.m_v == source.m_v + op.comp_v)


def connects(source, op, target):
    """True when ``op`` carries codon ``source`` onto the labels of codon ``target``."""
    if not weight_shift_matches(source, op, target):
        return False
    result = apply_op(source, op)
    return not result.is_vanishing and result.labels == _labels(target)


def virtual_state(source, op_first):
    """Bare label quadruple left by the first operator of a two-step substitution."""
    return apply_op(source, op_first)


def connects_sequential(source, op_first, op_second, target):
    """Two-step connection through a virtual state; copy indices are never consulted."""
    intermediate = virtual_state(source, op_first)
    if intermediate.is_vanishing:
        return False
    final = apply_op(intermediate.labels, op_second)
    return not final.is_vanishing and final.labels == _labels(target)
