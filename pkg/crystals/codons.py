"""
The codon space: nucleotides as (1/2, 1/2) crystal states, the computed
irrep assignment of the 64 codons and 16 dinucleotides, and the two
reference genetic codes.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

from core.exceptions import InvalidStateError

from .algebra import HalfInt, IrrepLabel, CrystalState, Sl2State, product_state, tensor_pair

logger = logging.getLogger(__name__)


class Nucleotide(str, Enum):
    C = 'C'
    U = 'U'
    G = 'G'
    A = 'A'

    @property
    def h(self):
        return Sl2State(HalfInt(1), HalfInt(_DOUBLED_LABELS[self][0]))

    @property
    def v(self):
        return Sl2State(HalfInt(1), HalfInt(_DOUBLED_LABELS[self][1]))

    @property
    def state(self):
        return self.h, self.v


_DOUBLED_LABELS = {
    Nucleotide.C: (1, 1),
    Nucleotide.U: (-1, 1),
    Nucleotide.G: (1, -1),
    Nucleotide.A: (-1, -1),
}

BASES = 'CUGA'
PYRIMIDINES = frozenset('CU')
PURINES = frozenset('GA')
NUCLEOTIDE_CLASSES = {
    'Y': PYRIMIDINES,
    'R': PURINES,
    'N': PYRIMIDINES | PURINES,
}


def _table_row_order():
    for left, right in (('C', 'U'), ('G', 'A')):
        for middle in BASES:
            for last in BASES:
                yield left + middle + last
                yield right + middle + last


# Codon order of the reference table, read row by row.
CODONS = tuple(_table_row_order())
CODON_INDEX = {codon: index for index, codon in enumerate(CODONS)}

# Dinucleotide order of the reference table, read row by row.
DINUCLEOTIDES = (
    'CC', 'UC', 'CG', 'UG', 'CU', 'UU', 'CA', 'UA',
    'GC', 'AC', 'GG', 'AG', 'GU', 'AU', 'GA', 'AA',
)


def parse_sequence(text, length):
    sequence = str(text).strip().upper().replace('T', 'U')
    if len(sequence) != length or any(base not in BASES for base in sequence):
        raise InvalidStateError(f"{text!r} is not a sequence of {length} nucleotides from {BASES}")
    return sequence


def parse_codon(text):
    return parse_sequence(text, 3)


def parse_dinucleotide(text):
    return parse_sequence(text, 2)


@lru_cache(maxsize=None)
def sequence_state(sequence):
    return product_state([Nucleotide(base).state for base in sequence])


def codon_state(codon):
    return sequence_state(parse_codon(codon))


def dinucleotide_state(dinucleotide):
    return sequence_state(parse_dinucleotide(dinucleotide))


@dataclass(frozen=True)
class DinucleotideFlags:
    jv_zero: bool
    lowest_weight_v: bool
    lowest_weight_h_nonzero_jh: bool
    unchanged_by_vertical_vector_op: bool

    @property
    def b_rank(self):
        """Horizontal rank of the third-position transversion operators."""
        return 2 if (self.jv_zero or self.lowest_weight_v or self.lowest_weight_h_nonzero_jh) else 1

    @property
    def alpha_rank(self):
        if self.lowest_weight_h_nonzero_jh and not self.jv_zero:
            return 2
        return 1

    @property
    def beta_rank(self):
        return 0 if self.unchanged_by_vertical_vector_op else 1

    def as_dict(self):
        return {
            'jv_zero': self.jv_zero,
            'lowest_weight_v': self.lowest_weight_v,
            'lowest_weight_h_nonzero_jh': self.lowest_weight_h_nonzero_jh,
            'unchanged_by_vertical_vector_op': self.unchanged_by_vertical_vector_op,
            'b': self.b_rank,
            'alpha': self.alpha_rank,
            'beta': self.beta_rank,
        }


# Vertical vector operator component eta^1_{V,0}.
_VERTICAL_VECTOR = Sl2State(HalfInt(2), HalfInt(0))


@lru_cache(maxsize=None)
def dinucleotide_predicates(dinucleotide):
    state = dinucleotide_state(dinucleotide)
    return DinucleotideFlags(
        jv_zero=state.irrep.j_v.twice_value == 0,
        lowest_weight_v=state.v.is_lowest_weight,
        lowest_weight_h_nonzero_jh=state.irrep.j_h.twice_value != 0 and state.h.is_lowest_weight,
        unchanged_by_vertical_vector_op=tensor_pair(state.v, _VERTICAL_VECTOR) == state.v,
    )


def dinucleotides_where(predicate):
    """Dinucleotides, in table order, whose flags satisfy ``predicate``."""
    return tuple(d for d in DINUCLEOTIDES if predicate(dinucleotide_predicates(d)))


def _parse_table(text, width):
    rows = {}
    for line in text.strip().splitlines():
        fields = line.split()
        if len(fields) != width:
            raise ValueError(f"malformed reference row {line!r}")
        rows[fields[0]] = fields[1:]
    return rows


# codon, VMC amino acid, J_H, J_V, copy index, J_3H, J_3V
_TABLE_1 = """
CCC Pro 3/2 3/2 1 3/2 3/2      UCC Ser 3/2 3/2 1 1/2 3/2
CCU Pro 1/2 3/2 1 1/2 3/2      UCU Ser 1/2 3/2 1 -1/2 3/2
CCG Pro 3/2 1/2 1 3/2 1/2      UCG Ser 3/2 1/2 1 1/2 1/2
CCA Pro 1/2 1/2 1 1/2 1/2      UCA Ser 1/2 1/2 1 -1/2 1/2
CUC Leu 1/2 3/2 2 1/2 3/2      UUC Phe 3/2 3/2 1 -1/2 3/2
CUU Leu 1/2 3/2 2 -1/2 3/2     UUU Phe 3/2 3/2 1 -3/2 3/2
CUG Leu 1/2 1/2 3 1/2 1/2      UUG Leu 3/2 1/2 1 -1/2 1/2
CUA Leu 1/2 1/2 3 -1/2 1/2     UUA Leu 3/2 1/2 1 -3/2 1/2
CGC Arg 3/2 1/2 2 3/2 1/2      UGC Cys 3/2 1/2 2 1/2 1/2
CGU Arg 1/2 1/2 2 1/2 1/2      UGU Cys 1/2 1/2 2 -1/2 1/2
CGG Arg 3/2 1/2 2 3/2 -1/2     UGG Trp 3/2 1/2 2 1/2 -1/2
CGA Arg 1/2 1/2 2 1/2 -1/2     UGA Trp 1/2 1/2 2 -1/2 -1/2
CAC His 1/2 1/2 4 1/2 1/2      UAC Tyr 3/2 1/2 2 -1/2 1/2
CAU His 1/2 1/2 4 -1/2 1/2     UAU Tyr 3/2 1/2 2 -3/2 1/2
CAG Gln 1/2 1/2 4 1/2 -1/2     UAG Ter 3/2 1/2 2 -1/2 -1/2
CAA Gln 1/2 1/2 4 -1/2 -1/2    UAA Ter 3/2 1/2 2 -3/2 -1/2
GCC Ala 3/2 3/2 1 3/2 1/2      ACC Thr 3/2 3/2 1 1/2 1/2
GCU Ala 1/2 3/2 1 1/2 1/2      ACU Thr 1/2 3/2 1 -1/2 1/2
GCG Ala 3/2 1/2 1 3/2 -1/2     ACG Thr 3/2 1/2 1 1/2 -1/2
GCA Ala 1/2 1/2 1 1/2 -1/2     ACA Thr 1/2 1/2 1 -1/2 -1/2
GUC Val 1/2 3/2 2 1/2 1/2      AUC Ile 3/2 3/2 1 -1/2 1/2
GUU Val 1/2 3/2 2 -1/2 1/2     AUU Ile 3/2 3/2 1 -3/2 1/2
GUG Val 1/2 1/2 3 1/2 -1/2     AUG Met 3/2 1/2 1 -1/2 -1/2
GUA Val 1/2 1/2 3 -1/2 -1/2    AUA Met 3/2 1/2 1 -3/2 -1/2
GGC Gly 3/2 3/2 1 3/2 -1/2     AGC Ser 3/2 3/2 1 1/2 -1/2
GGU Gly 1/2 3/2 1 1/2 -1/2     AGU Ser 1/2 3/2 1 -1/2 -1/2
GGG Gly 3/2 3/2 1 3/2 -3/2     AGG Ter 3/2 3/2 1 1/2 -3/2
GGA Gly 1/2 3/2 1 1/2 -3/2     AGA Ter 1/2 3/2 1 -1/2 -3/2
GAC Asp 1/2 3/2 2 1/2 -1/2     AAC Asn 3/2 3/2 1 -1/2 -1/2
GAU Asp 1/2 3/2 2 -1/2 -1/2    AAU Asn 3/2 3/2 1 -3/2 -1/2
GAG Glu 1/2 3/2 2 1/2 -3/2     AAG Lys 3/2 3/2 1 -1/2 -3/2
GAA Glu 1/2 3/2 2 -1/2 -3/2    AAA Lys 3/2 3/2 1 -3/2 -3/2
"""

# dinucleotide, J_H, J_V, J_3H, J_3V
_TABLE_2 = """
CC 1 1 1 1     UC 1 1 0 1
CG 1 0 1 0     UG 1 0 0 0
CU 0 1 0 1     UU 1 1 -1 1
CA 0 0 0 0     UA 1 0 -1 0
GC 1 1 1 0     AC 1 1 0 0
GG 1 1 1 -1    AG 1 1 0 -1
GU 0 1 0 0     AU 1 1 -1 0
GA 0 1 0 -1    AA 1 1 -1 -1
"""


def _split_columns(text, width):
    """Both halves of a two-column table, left half first on each line."""
    lines = []
    for line in text.strip().splitlines():
        fields = line.split()
        lines.append(' '.join(fields[:width]))
        lines.append(' '.join(fields[width:]))
    return '\n'.join(lines)


def _reference_state(jh, jv, mult, m3h, m3v):
    return CrystalState(
        IrrepLabel(HalfInt.of(jh), HalfInt.of(jv), int(mult)),
        HalfInt.of(m3h),
        HalfInt.of(m3v),
    )


_table_1_rows = _parse_table(_split_columns(_TABLE_1, 7), 7)
_table_2_rows = _parse_table(_split_columns(_TABLE_2, 5), 5)

# Reference assignment as published; the computed one must agree with it.
REFERENCE_CODON_STATES = {
    codon: _reference_state(*fields[1:]) for codon, fields in _table_1_rows.items()
}
REFERENCE_DINUCLEOTIDE_STATES = {
    dinucleotide: _reference_state(jh, jv, 1, m3h, m3v)
    for dinucleotide, (jh, jv, m3h, m3v) in _table_2_rows.items()
}


@dataclass(frozen=True)
class GeneticCodeTable:
    name: str
    mapping: dict

    def __getitem__(self, codon):
        return self.mapping[parse_codon(codon)]

    def synonym_groups(self):
        """Amino acid (or Ter) to its codons, in table order."""
        groups = {}
        for codon in CODONS:
            groups.setdefault(self.mapping[codon], []).append(codon)
        return {amino_acid: tuple(codons) for amino_acid, codons in groups.items()}

    def synonym_shape(self):
        """Number of synonym groups of each size."""
        shape = {}
        for codons in self.synonym_groups().values():
            shape[len(codons)] = shape.get(len(codons), 0) + 1
        return dict(sorted(shape.items(), reverse=True))

    def differences(self, other):
        return {codon: (self.mapping[codon], other.mapping[codon])
                for codon in CODONS if self.mapping[codon] != other.mapping[codon]}


VMC = GeneticCodeTable('VMC', {codon: fields[0] for codon, fields in _table_1_rows.items()})
SUC = GeneticCodeTable('SUC', {
    **VMC.mapping,
    'UGA': 'Ter',
    'AUA': 'Ile',
    'AGA': 'Arg',
    'AGG': 'Arg',
})
GENETIC_CODES = {'vmc': VMC, 'suc': SUC}


def codon_table():
    """Rows of the computed codon assignment, in table order."""
    return [
        {'codon': codon, **codon_state(codon).as_dict(), 'vmc_aa': VMC[codon], 'suc_aa': SUC[codon]}
        for codon in CODONS
    ]


def dinucleotide_table():
    return [
        {'dinucleotide': d, **dinucleotide_state(d).labels.as_dict(), **dinucleotide_predicates(d).as_dict()}
        for d in DINUCLEOTIDES
    ]


def table_mismatches():
    """(sequence, computed, reference) for every row that disagrees with the references."""
    mismatches = []
    for codon, reference in REFERENCE_CODON_STATES.items():
        computed = codon_state(codon)
        if computed != reference:
            mismatches.append((codon, computed, reference))
    for dinucleotide, reference in REFERENCE_DINUCLEOTIDE_STATES.items():
        computed = dinucleotide_state(dinucleotide)
        if computed != reference:
            mismatches.append((dinucleotide, computed, reference))
    if mismatches:
        logger.error(f"{len(mismatches)} computed states disagree with the reference tables")
    return mismatches
