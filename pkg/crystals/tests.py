import json
from io import StringIO

from django.core.management import call_command
from django.test import SimpleTestCase
from hypothesis import given, strategies as st
from rest_framework import status
from rest_framework.test import APIClient

from core.exceptions import InvalidStateError

from .algebra import (
    HalfInt,
    Sl2State,
    TensorConvention,
    coupling_paths,
    decompose,
    product_census,
    product_state,
    tensor_pair,
)
from .codons import (
    CODONS,
    DINUCLEOTIDES,
    REFERENCE_CODON_STATES,
    REFERENCE_DINUCLEOTIDE_STATES,
    SUC,
    VMC,
    Nucleotide,
    codon_state,
    codon_table,
    dinucleotide_predicates,
    dinucleotide_state,
    dinucleotide_table,
    dinucleotides_where,
    parse_codon,
    table_mismatches,
)
from .operators import CrystalTensorOp, apply_op, connects, connects_sequential


def operators():
    """Operator components with |comp| <= rank in both factors."""
    def component(rank):
        return st.integers(-rank, rank).map(lambda comp: (rank, comp))

    return st.tuples(
        st.integers(0, 2).flatmap(component),
        st.integers(0, 2).flatmap(component),
    ).map(lambda parts: CrystalTensorOp.of(*parts[0], *parts[1]))


class HalfIntTests(SimpleTestCase):
    def test_parses_fractions_and_strings(self):
        self.assertEqual(HalfInt.of('-3/2').twice_value, -3)
        self.assertEqual(HalfInt.of(2), HalfInt(4))
        self.assertEqual(str(HalfInt(3)), '3/2')
        self.assertEqual(str(HalfInt(-2)), '-1')

    def test_rejects_thirds(self):
        with self.assertRaises(InvalidStateError):
            HalfInt.of('1/3')


class Sl2StateTests(SimpleTestCase):
    def test_weight_out_of_range_is_rejected(self):
        with self.assertRaises(InvalidStateError):
            Sl2State.of(1, 2)
        with self.assertRaises(InvalidStateError):
            Sl2State.of('1/2', 0)

    def test_kashiwara_operators_stop_at_the_ends(self):
        top = Sl2State.of(1, 1)
        self.assertIsNone(top.raised())
        self.assertEqual(top.lowered(), Sl2State.of(1, 0))
        self.assertTrue(Sl2State.of(1, -1).is_lowest_weight)
        self.assertFalse(top.is_lowest_weight)

    def test_lowering_walks_the_whole_chain(self):
        for twice_j in range(4):
            state = Sl2State(HalfInt(twice_j), HalfInt(twice_j))
            self.assertTrue(state.is_highest_weight)
            steps = 0
            while not state.is_lowest_weight:
                state = state.lowered()
                steps += 1
            self.assertEqual(steps, twice_j)
            self.assertEqual(state, Sl2State(HalfInt(twice_j), HalfInt(-twice_j)))
            self.assertIsNone(state.lowered())

    def test_bottom_state_raises_back(self):
        bottom = Sl2State.of(1, -1)
        self.assertEqual(bottom.raised(), Sl2State.of(1, 0))
        self.assertFalse(bottom.is_highest_weight)
        self.assertTrue(Sl2State.of(0, 0).is_lowest_weight)
        self.assertTrue(Sl2State.of(0, 0).is_highest_weight)

    def test_signature_round_trip(self):
        state = Sl2State.of('3/2', '-1/2')
        self.assertEqual((state.minus, state.plus), (2, 1))
        self.assertEqual(Sl2State.from_signature(2, 1), state)


class TensorProductTests(SimpleTestCase):
    def test_tensor_product_is_not_commutative(self):
        up, down = Sl2State.of('1/2', '1/2'), Sl2State.of('1/2', '-1/2')
        self.assertEqual(tensor_pair(down, up), Sl2State.of(1, 0))
        self.assertEqual(tensor_pair(up, down), Sl2State.of(0, 0))
        self.assertEqual(dinucleotide_state('UC').irrep.j_h, HalfInt(2))
        self.assertEqual(dinucleotide_state('CU').irrep.j_h, HalfInt(0))

    def test_other_bracketing_convention_fails_on_cu(self):
        factors = [Nucleotide.C.state, Nucleotide.U.state]
        swapped = product_state(factors, TensorConvention.MINUS_PLUS)
        self.assertNotEqual(swapped, REFERENCE_DINUCLEOTIDE_STATES['CU'])
        self.assertEqual(product_state(factors), REFERENCE_DINUCLEOTIDE_STATES['CU'])

    def test_decomposition_of_three_spin_halves(self):
        self.assertEqual(coupling_paths((1, 1, 1)), ((1, 2, 3), (1, 2, 1), (1, 0, 1)))
        self.assertEqual(decompose((1, 1, 1)), {3: 1, 1: 2})

    def test_census_conserves_dimension(self):
        for factor_count in (1, 2, 3):
            census = product_census(factor_count)
            dimension = sum((jh.twice_value + 1) * (jv.twice_value + 1) * count
                            for (jh, jv), count in census.items())
            self.assertEqual(dimension, 4 ** factor_count)
        self.assertEqual(product_census(3)[(HalfInt(1), HalfInt(1))], 4)


class CodonSpaceTests(SimpleTestCase):
    def test_computed_tables_match_the_references(self):
        self.assertEqual(table_mismatches(), [])
        self.assertEqual(len(REFERENCE_CODON_STATES), 64)
        self.assertEqual(len(REFERENCE_DINUCLEOTIDE_STATES), 16)

    def test_known_codons(self):
        self.assertEqual(str(codon_state('CCC')), '(3/2, 3/2)^1; 3/2, 3/2')
        self.assertEqual(codon_state('CAC').irrep.mult, 4)
        self.assertEqual(codon_state('CUG').irrep.mult, 3)
        self.assertEqual(codon_state('AAA').as_dict(),
                         {'jh': '3/2', 'jv': '3/2', 'm3h': '-3/2', 'm3v': '-3/2', 'mult': 1})

    @given(st.sampled_from(CODONS + DINUCLEOTIDES))
    def test_weights_are_sums_of_nucleotide_weights(self, sequence):
        state = codon_state(sequence) if len(sequence) == 3 else dinucleotide_state(sequence)
        self.assertEqual(state.m_h.twice_value, sum(Nucleotide(base).h.m.twice_value for base in sequence))
        self.assertEqual(state.m_v.twice_value, sum(Nucleotide(base).v.m.twice_value for base in sequence))

    def test_state_is_deterministic(self):
        for codon in CODONS:
            factors = [Nucleotide(base).state for base in codon]
            self.assertEqual(product_state(factors), product_state(factors))

    def test_parse_codon_accepts_dna_letters(self):
        self.assertEqual(parse_codon('atg'), 'AUG')
        with self.assertRaises(InvalidStateError):
            parse_codon('AUGC')
        with self.assertRaises(InvalidStateError):
            parse_codon('AXG')

    def test_dinucleotide_ranks(self):
        self.assertEqual(dinucleotide_predicates('CA').b_rank, 2)
        self.assertEqual(dinucleotide_predicates('CC').b_rank, 1)
        self.assertEqual(dinucleotide_predicates('CC').beta_rank, 0)
        self.assertEqual(dinucleotide_predicates('AA').alpha_rank, 2)
        self.assertEqual(dinucleotide_predicates('AA').beta_rank, 1)
        self.assertEqual(len(DINUCLEOTIDES), 16)

    def test_rank_sets(self):
        self.assertEqual(set(dinucleotides_where(lambda flags: flags.b_rank == 2)),
                         {'CA', 'GA', 'CG', 'UG', 'UA', 'UU', 'AU', 'AA', 'GG', 'AG'})
        self.assertEqual(set(dinucleotides_where(lambda flags: flags.alpha_rank == 2)), {'UU', 'AU', 'AA'})

    def test_beta_rank_one_is_the_lowest_vertical_weight(self):
        beta_one = set(dinucleotides_where(lambda flags: flags.beta_rank == 1))
        self.assertEqual(beta_one, {'CG', 'UG', 'CA', 'UA', 'GG', 'AG', 'GA', 'AA'})
        self.assertEqual(beta_one, set(dinucleotides_where(lambda flags: flags.lowest_weight_v)))
        enumerated = {'CU', 'GU', 'CC', 'UC', 'UU', 'GC', 'AC', 'AU'}
        self.assertEqual(beta_one | enumerated, set(DINUCLEOTIDES))
        self.assertFalse(beta_one & enumerated)

    def test_synonym_shapes_of_the_two_codes(self):
        self.assertEqual(VMC.synonym_shape(), {6: 2, 4: 7, 2: 12})
        self.assertEqual(SUC.synonym_shape(), {6: 3, 4: 5, 3: 2, 2: 9, 1: 2})
        self.assertEqual(set(VMC.differences(SUC)), {'UGA', 'AUA', 'AGA', 'AGG'})


class OperatorTests(SimpleTestCase):
    def test_parse_and_render(self):
        op = CrystalTensorOp.parse('1,-1;2,0')
        self.assertEqual(str(op), '(1,-1;2,0)')
        self.assertEqual(CrystalTensorOp.parse('(1/2,1/2;0,0)').rank_h, HalfInt(1))
        with self.assertRaises(InvalidStateError):
            CrystalTensorOp.parse('1,-1')

    def test_component_beyond_rank_vanishes(self):
        op = CrystalTensorOp.of(1, 2, 0, 0)
        self.assertTrue(op.is_vanishing)
        self.assertTrue(apply_op('CCC', op).is_vanishing)
        self.assertFalse(connects('CCC', op, 'CCC'))

    def test_third_position_c_to_g(self):
        self.assertTrue(connects('CCC', CrystalTensorOp.of(1, 0, 1, -1), 'CCG'))
        self.assertFalse(connects('CCC', CrystalTensorOp.of(1, 0, 1, -1), 'CCA'))

    def test_two_step_double_transition(self):
        first, second = CrystalTensorOp.of(1, -1, 1, 0), CrystalTensorOp.of(1, -1, 2, 0)
        self.assertTrue(connects_sequential('CCU', first, second, 'UUU'))
        self.assertFalse(connects_sequential('CCA', first, second, 'UUA'))

    @given(st.sampled_from(CODONS))
    def test_rank_zero_operator_is_the_identity(self, codon):
        identity = CrystalTensorOp.of(0, 0, 0, 0)
        self.assertEqual(apply_op(codon, identity).labels, codon_state(codon).labels)
        self.assertTrue(connects(codon, identity, codon))

    @given(st.sampled_from(CODONS), operators())
    def test_weights_add(self, codon, op):
        result = apply_op(codon, op)
        source = codon_state(codon)
        self.assertEqual(result.labels.m_h, source.m_h + op.comp_h)
        self.assertEqual(result.labels.m_v, source.m_v + op.comp_v)

    @given(st.sampled_from(CODONS), operators(), st.sampled_from(CODONS))
    def test_connection_is_deterministic(self, source, op, target):
        self.assertEqual(connects(source, op, target), connects(source, op, target))
        if connects(source, op, target):
            self.assertEqual(apply_op(source, op).labels, codon_state(target).labels)


class CrystalApiTests(SimpleTestCase):
    def setUp(self):
        self.client = APIClient()

    def test_codon_table(self):
        response = self.client.get('/api/crystals/codons/')
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        data = response.json()['data']
        self.assertEqual(len(data['codons']), 64)
        self.assertEqual(data['reference_mismatches'], 0)
        first = data['codons'][0]
        self.assertEqual(first['codon'], 'CCC')
        self.assertEqual(first['vmc_aa'], 'Pro')

    def test_dinucleotide_table(self):
        response = self.client.get('/api/crystals/dinucleotides/')
        rows = response.json()['data']['dinucleotides']
        self.assertEqual([row['dinucleotide'] for row in rows], list(DINUCLEOTIDES))
        self.assertEqual(rows[0]['b'], 1)

    def test_connect(self):
        response = self.client.get('/api/crystals/connect/', {'source': 'CCC', 'target': 'CCG', 'op': '1,0;1,-1'})
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        data = response.json()['data']
        self.assertTrue(data['allowed'])
        self.assertEqual(data['reached'], {'jh': '3/2', 'jv': '1/2', 'm3h': '3/2', 'm3v': '1/2'})

    def test_connect_two_steps(self):
        response = self.client.get('/api/crystals/connect/', {
            'source': 'CCU', 'target': 'UUU', 'op': '1,-1;1,0', 'then': '1,-1;2,0',
        })
        self.assertTrue(response.json()['data']['allowed'])

    def test_connect_rejects_bad_codons(self):
        response = self.client.get('/api/crystals/connect/', {'source': 'CXC', 'target': 'CCG', 'op': '1,0;1,-1'})
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)
        self.assertIn('source', response.json()['details'])


class TablesCommandTests(SimpleTestCase):
    def test_check_passes(self):
        out = StringIO()
        call_command('tables', '--check', stdout=out)
        self.assertIn('match the reference tables', out.getvalue())

    def test_json_dinucleotides(self):
        out = StringIO()
        call_command('tables', '--which', 'dinucleotides', '--format', 'json', stdout=out)
        self.assertEqual(json.loads(out.getvalue()), dinucleotide_table())

    def test_json_output_round_trips(self):
        for which, rows in (('codons', codon_table()), ('dinucleotides', dinucleotide_table())):
            out = StringIO()
            call_command('tables', '--which', which, '--format', 'json', stdout=out)
            parsed = json.loads(out.getvalue())
            self.assertEqual(parsed, rows)
            self.assertEqual(json.dumps(parsed, indent=2) + '\n', out.getvalue())
