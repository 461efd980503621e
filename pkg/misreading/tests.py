import json
import tempfile
from fractions import Fraction
from io import StringIO
from pathlib import Path

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase
from rest_framework import status
from rest_framework.test import APIClient

from core.exceptions import ConfigurationError, CrystalEngineError, ExpectationsError, UnsupportedEventError
from crystals.codons import SUC, VMC, codon_state
from crystals.operators import CrystalTensorOp, apply_op

from .catalog import (
    FAMILIES,
    CatalogOptions,
    DoubleSubstitution,
    Scheme,
    SubstitutionEvent,
    allowed_set,
    classify,
    double_operator_for,
    kind_of_change,
    operator_for,
    parse_pair,
)
from .enumeration import (
    StageCounts,
    brute_force_choices,
    compare_counting_models,
    count_quartet_choices,
    count_report,
    pattern_probability,
    render_probability,
    reported_counts,
)
from .expectations import ExpectationsFile, verify
from .multiplets import (
    SINGLET_SPLIT_NOTE,
    MultipletPartition,
    annotate_singlet_candidates,
    derive,
    diff_against,
)
from .services import DerivationConfig, MisreadingService

EXPECTATIONS_DIR = Path(__file__).resolve().parent / 'data'


def pairs(*texts):
    return {parse_pair(text) for text in texts}


def allowed(family, scheme=Scheme.A, **options):
    return set(classify(family, scheme, CatalogOptions(**options))[0])


def forbidden(family, scheme=Scheme.A, **options):
    return set(classify(family, scheme, CatalogOptions(**options))[1])


class SubstitutionEventTests(SimpleTestCase):
    def test_between_reads_kind_and_position(self):
        event = SubstitutionEvent.between('CAC', 'CAG')
        self.assertEqual(event.position, 3)
        self.assertEqual(event.kind.value, 'c-to-g')
        self.assertEqual(operator_for(event), CrystalTensorOp.of(2, 0, 1, -1))

    def test_u_to_g_is_not_modelled(self):
        with self.assertRaises(UnsupportedEventError):
            kind_of_change('U', 'G')
        with self.assertRaises(UnsupportedEventError):
            SubstitutionEvent.between('CCU', 'CCG')

    def test_multi_nucleotide_changes_are_rejected(self):
        with self.assertRaises(UnsupportedEventError):
            SubstitutionEvent.between('CCC', 'CGG')
        with self.assertRaises(UnsupportedEventError):
            DoubleSubstitution('TT', 'CCC', 'UUA')

    def test_option_validation(self):
        with self.assertRaises(ConfigurationError):
            CatalogOptions(second_c_to_g_rank_h=3)
        with self.assertRaises(ConfigurationError):
            Scheme.parse('c')


class ThirdPositionTests(SimpleTestCase):
    def test_every_transition_is_allowed(self):
        self.assertEqual(len(allowed_set(1)), 32)
        self.assertEqual(allowed_set(1, options=CatalogOptions(third_transition_rank_v=1)), allowed_set(1))

    def test_forbidden_c_to_g(self):
        self.assertEqual(forbidden('third-c-to-g'), pairs(
            'UUC->UUG', 'AUC->AUG', 'AAC->AAG', 'UAC->UAG', 'GAC->GAG', 'CAC->CAG'))

    def test_forbidden_u_to_a(self):
        self.assertEqual(forbidden('third-u-to-a'), pairs(
            'UUU->UUA', 'AUU->AUA', 'AAU->AAA', 'UAU->UAA', 'AGU->AGA', 'GAU->GAA', 'UGU->UGA', 'CAU->CAA'))

    def test_forbidden_c_to_a(self):
        self.assertEqual(forbidden('third-c-to-a'), pairs(
            'UUC->UUA', 'AUC->AUA', 'AAC->AAA', 'UAC->UAA', 'AGC->AGA', 'GAC->GAA', 'UGC->UGA', 'CAC->CAA'))

    def test_same_irrep_rule_moves_c_to_a(self):
        self.assertEqual(forbidden('third-c-to-g', b_rule='same-irrep'), forbidden('third-c-to-g'))
        self.assertEqual(forbidden('third-u-to-a', b_rule='same-irrep'), forbidden('third-u-to-a'))
        c_to_a = allowed('third-c-to-a', b_rule='same-irrep')
        self.assertIn(parse_pair('UGC->UGA'), c_to_a)
        self.assertNotIn(parse_pair('CUC->CUA'), c_to_a)

    def test_alternative_scheme(self):
        c_to_g = forbidden('third-c-to-g', Scheme.B)
        self.assertEqual({source[:2] for source, _ in c_to_g}, {'UU', 'AU', 'AA'})
        u_to_a = allowed('third-u-to-a', Scheme.B)
        self.assertEqual({source[:2] for source, _ in u_to_a},
                         {'CU', 'GU', 'CC', 'UC', 'UU', 'GC', 'AC', 'AU', 'CG', 'GG'})


class FirstAndSecondPositionTests(SimpleTestCase):
    def test_first_position(self):
        self.assertEqual(allowed('first-transition'), pairs(
            'CCU->UCU', 'CCA->UCA', 'CUU->UUU', 'CUA->UUA', 'CGU->UGU',
            'GGU->AGU', 'GCU->ACU', 'GUU->AUU', 'CAU->UAU', 'GAU->AAU'))
        self.assertEqual(allowed('first-c-to-g'), pairs(
            'CCG->GCG', 'CCA->GCA', 'CGG->GGG', 'CGA->GGA', 'CUG->GUG', 'CAG->GAG'))
        self.assertEqual(allowed('first-u-to-a'), pairs('UCG->ACG', 'UGG->AGG'))
        self.assertEqual(allowed('first-c-to-a'), pairs('CCA->ACA', 'CGA->AGA', 'CUG->AUG', 'CAG->AAG'))

    def test_first_position_alternative_scheme(self):
        self.assertEqual(len(allowed('first-transition', Scheme.B)), 16)
        self.assertEqual(allowed('first-c-to-a', Scheme.B), pairs('CCA->ACA', 'CUA->AUA', 'CGA->AGA', 'CAA->AAA'))

    def test_second_position(self):
        self.assertEqual(allowed('second-transition'), pairs(
            'CCC->CUC', 'CCU->CUU', 'GCC->GUC', 'GCU->GUU', 'UCU->UUU', 'ACU->AUU'))
        self.assertEqual(allowed('second-c-to-g', second_c_to_g_rank_h=2), pairs(
            'CCC->CGC', 'UCC->UGC', 'GCC->GGC', 'ACC->AGC'))
        self.assertEqual(allowed('second-u-to-a'), set())
        self.assertEqual(allowed('second-c-to-a'), pairs('CCC->CAC', 'GCC->GAC'))


class DoubleSubstitutionTests(SimpleTestCase):
    def test_double_families(self):
        self.assertEqual(allowed('TT'), pairs('CCU->UUU', 'GCU->AUU'))
        self.assertEqual(allowed('TVTD'), pairs('CCU->AUU'))
        self.assertEqual(allowed('TVTV'), pairs('CCC->GGC', 'CCU->GGU', 'UCC->AGC'))
        self.assertEqual(allowed('TVTVD1'), set())
        self.assertEqual(allowed('TVTVDD'), pairs('CCC->AAC'))

    def test_every_candidate_is_classified(self):
        for family in FAMILIES:
            for scheme in Scheme:
                allowed_pairs, forbidden_pairs = classify(family.name, scheme)
                self.assertEqual(len(allowed_pairs) + len(forbidden_pairs), len(family.candidates()))

    def test_catalogued_operators_never_vanish(self):
        for family in FAMILIES:
            for source, target in family.candidates():
                if family.double is not None:
                    ops = double_operator_for(DoubleSubstitution(family.name, source, target))
                else:
                    ops = [operator_for(SubstitutionEvent.between(source, target), scheme) for scheme in Scheme]
                for op in ops:
                    self.assertFalse(op.is_vanishing, f"{family.name} {source}->{target} {op}")

    def test_weights_add_over_the_whole_catalog(self):
        for family in FAMILIES:
            for source, target in family.candidates():
                start = codon_state(source)
                if family.double is not None:
                    first, second = double_operator_for(DoubleSubstitution(family.name, source, target))
                    middle = apply_op(source, first)
                    reached = apply_op(middle.labels, second).labels
                    self.assertEqual(middle.labels.m_h, start.m_h + first.comp_h)
                    self.assertEqual(reached.m_h, start.m_h + first.comp_h + second.comp_h)
                    self.assertEqual(reached.m_v, start.m_v + first.comp_v + second.comp_v)
                    continue
                for scheme in Scheme:
                    op = operator_for(SubstitutionEvent.between(source, target), scheme)
                    reached = apply_op(source, op).labels
                    self.assertEqual(reached.m_h, start.m_h + op.comp_h, f"{source}->{target} {op}")
                    self.assertEqual(reached.m_v, start.m_v + op.comp_v, f"{source}->{target} {op}")

    def test_alternative_double_transition_operators(self):
        self.assertIn(parse_pair('CCC->UUC'), allowed('TT', double_transition='alternative'))
        self.assertEqual(len(allowed('TT', double_transition='alternative')), 8)


class PartitionTests(SimpleTestCase):
    def test_partition_must_cover_every_codon_once(self):
        trivial = MultipletPartition.trivial()
        groups = [set(codons) for codons in trivial.classes]
        with self.assertRaises(CrystalEngineError):
            MultipletPartition.from_groups(groups[1:])
        with self.assertRaises(CrystalEngineError):
            MultipletPartition.from_groups([groups[0] | groups[1] | groups[2]] + groups[3:])

    def test_labels(self):
        partition = derive(Scheme.A, max_level=2).final
        self.assertEqual(partition.label_of('CCA'), 'CCN')
        self.assertEqual(partition.label_of('UGA'), 'UGR')
        self.assertEqual(partition.label_of('UGC'), 'UGY')


class DerivationTests(SimpleTestCase):
    def test_levels_of_the_main_scheme(self):
        derivation = derive(Scheme.A, damping=True)
        shapes = [trace.partition.shape() for trace in derivation.levels]
        self.assertEqual(shapes, [
            {'doublets': 32},
            {'quartets': 8, 'doublets': 16},
            {'sextets': 2, 'quartets': 6, 'doublets': 14},
            {'sextets': 2, 'quartets': 6, 'doublets': 14},
            {'sextets': 3, 'quartets': 5, 'doublets': 13},
        ])
        self.assertEqual(derivation.final.classes_of_size(6), ['UCN+AGY', 'CUN+UUR', 'CGN+AGR'])
        self.assertTrue(derivation.final.coarsens(derivation.level(1).partition))

    def test_every_level_coarsens_the_one_before(self):
        for scheme in Scheme:
            for damping in (True, False):
                derivation = derive(scheme, damping=damping)
                partitions = [MultipletPartition.trivial()] + [trace.partition for trace in derivation.levels]
                for finer, coarser in zip(partitions, partitions[1:]):
                    self.assertTrue(coarser.coarsens(finer), f"{scheme.value} level {coarser.level}")

    def test_quartet_prefixes(self):
        quartets = derive(Scheme.A, max_level=2).final.classes_of_size(4)
        self.assertEqual({label[:2] for label in quartets}, {'CC', 'CU', 'CG', 'UC', 'GG', 'GC', 'GU', 'AC'})
        b0 = derive(Scheme.B0, max_level=2).final.classes_of_size(4)
        self.assertEqual({label[:2] for label in b0}, {'CC', 'CG', 'GC', 'GG'})

    def test_damping_holds_back_second_position_merges(self):
        damped = derive(Scheme.A, max_level=4, damping=True).level(4)
        self.assertEqual(damped.merges, ())
        self.assertEqual({frozenset(w.classes) for w in damped.warnings if w.reason == 'damped'}, {
            frozenset({'UCN', 'UGY'}), frozenset({'ACN', 'AGY'}),
            frozenset({'CCN', 'CAY'}), frozenset({'GCN', 'GAY'}),
        })

    def test_without_damping(self):
        final = derive(Scheme.A, damping=False).final
        self.assertEqual(final.shape(), {'sextets': 6, 'quartets': 2, 'doublets': 10})

    def test_asserted_ser_trigger_hits_the_arg_sextet(self):
        derivation = derive(Scheme.A, ser_trigger='asserted')
        self.assertEqual(derivation.final.shape(), {'sextets': 2, 'quartets': 6, 'doublets': 14})
        frozen = [w for w in derivation.level(5).warnings if w.reason == 'frozen']
        self.assertTrue(any('CGN+AGR' in w.classes for w in frozen))

    def test_alternative_scheme_suppresses_unobserved_merges(self):
        derivation = derive(Scheme.B, max_level=3)
        self.assertEqual(derivation.final.classes_of_size(6), ['CUN+UUR', 'CGN+AGR'])
        self.assertEqual(len(derivation.warnings('unobserved')), 7)
        self.assertEqual(derivation.final, derive(Scheme.A, max_level=3).final)

    def test_bad_level_is_a_configuration_error(self):
        with self.assertRaises(ConfigurationError):
            derive(Scheme.A, max_level=6)
        with self.assertRaises(ConfigurationError):
            derive(Scheme.A, ser_trigger='guess')


class DiffTests(SimpleTestCase):
    def test_final_against_vertebral_mitochondrial_code(self):
        report = diff_against(derive(Scheme.A).final, VMC)
        self.assertEqual(report.mismatches, {'CGN+AGR': ('Arg', 'Ter')})
        self.assertIn('Ter', report.split_groups)

    def test_final_against_standard_code(self):
        report = diff_against(derive(Scheme.A).final, SUC)
        self.assertEqual(set(report.mismatches), {'UGR', 'AUR'})
        self.assertEqual(set(report.split_groups) & {'Ile', 'Ter'}, {'Ile', 'Ter'})

    def test_finer_partitions_never_mix_amino_acids(self):
        self.assertEqual(diff_against(derive(Scheme.A, max_level=1).final, VMC).summary['mismatches'], 0)
        trivial = diff_against(MultipletPartition.trivial(), VMC)
        self.assertEqual(trivial.summary['mismatches'], 0)
        self.assertEqual(trivial.summary['split_groups'], 21)


class AnnotationTests(SimpleTestCase):
    def test_partly_protected_doublets(self):
        derivation = derive(Scheme.A, max_level=2)
        annotated = annotate_singlet_candidates(derivation.final, derivation)
        self.assertEqual(set(annotated.annotations), {'UGR', 'AGR'})
        self.assertEqual(annotated.annotations['UGR'], (SINGLET_SPLIT_NOTE,))

    def test_final_partition_keeps_only_trp(self):
        derivation = derive(Scheme.A)
        annotated = annotate_singlet_candidates(derivation.final, derivation)
        self.assertEqual(set(annotated.annotations), {'UGR'})
        self.assertNotIn('CCN', annotated.annotations)

    def test_alternative_scheme_flags_stop_and_start_doublets(self):
        derivation = derive(Scheme.B, max_level=3)
        annotated = annotate_singlet_candidates(derivation.final, derivation)
        self.assertEqual(set(annotated.annotations), {'CAR', 'GAR', 'UAR', 'AUR', 'UGR', 'AAR'})


class EnumerationTests(SimpleTestCase):
    def test_quartet_choices(self):
        self.assertEqual(count_quartet_choices(), 12870)
        self.assertEqual(brute_force_choices(16, 8), 12870)

    def test_probability(self):
        probability = pattern_probability(reported_counts())
        self.assertEqual(probability, Fraction(1, 129729600))
        self.assertEqual(render_probability(probability), '7.7e-09')
        self.assertEqual(count_report()['probability'], '1/129729600')

    def test_candidate_model_disagrees(self):
        comparison = compare_counting_models()
        self.assertFalse(comparison['agrees'])
        self.assertEqual(comparison['candidate'].sextet2_choices, 6720)
        self.assertEqual(comparison['candidate'].sextet3_choices, 84)

    def test_counts_must_be_positive(self):
        with self.assertRaises(ConfigurationError):
            StageCounts(0, 1, 1)


class ExpectationsTests(SimpleTestCase):
    def test_bundled_files_hold(self):
        for name in ('scheme_a.json', 'scheme_b.json'):
            report = verify(ExpectationsFile.load(EXPECTATIONS_DIR / name))
            self.assertTrue(report.ok, [r.as_dict() for r in report.failures])
            self.assertNotIn('drift', report.counts())
            self.assertNotIn('resolved', report.counts())
        report = verify(ExpectationsFile.load(EXPECTATIONS_DIR / 'scheme_a.json'))
        self.assertGreater(report.counts()['discrepancy'], 0)

    def test_dinucleotide_rank_entries(self):
        report = verify(ExpectationsFile.load(EXPECTATIONS_DIR / 'scheme_b.json'))
        statuses = {result.entry.id: result.status for result in report.results}
        self.assertEqual(statuses['dinucleotides-b-rank-two'], 'pass')
        self.assertEqual(statuses['dinucleotides-alpha-rank-two'], 'pass')
        self.assertEqual(statuses['dinucleotides-beta-rank-one'], 'discrepancy')
        beta = next(r for r in report.results if r.entry.id == 'dinucleotides-beta-rank-one').as_dict()
        self.assertEqual(set(beta['published']), {'CU', 'GU', 'CC', 'UC', 'UU', 'GC', 'AC', 'AU'})
        self.assertEqual(set(beta['computed']), {'CG', 'UG', 'CA', 'UA', 'GG', 'AG', 'GA', 'AA'})

    def test_dinucleotide_entry_needs_a_flag(self):
        with self.assertRaises(ExpectationsError):
            ExpectationsFile.from_document({'entries': [{
                'id': 'x', 'kind': 'dinucleotides', 'rank': 1, 'citation': 'c', 'expected': [],
            }]})

    def test_wrong_pair_fails(self):
        expectations = ExpectationsFile.from_document({'scheme': 'a', 'entries': [{
            'id': 'wrong',
            'kind': 'forbidden',
            'family': 'third-c-to-g',
            'citation': 'deliberately wrong',
            'expected': ['CCC->CCG'],
        }]})
        report = verify(expectations)
        self.assertFalse(report.ok)
        self.assertIn('CCC->CCG', ' '.join(report.failures[0].differences['missing']))

    def test_malformed_entries(self):
        with self.assertRaises(ExpectationsError):
            ExpectationsFile.from_document({'entries': [{'id': 'x', 'kind': 'allowed', 'citation': 'c'}]})
        with self.assertRaises(ExpectationsError):
            ExpectationsFile.from_document({'entries': [{
                'id': 'x', 'kind': 'shape', 'level': 2, 'citation': 'c', 'discrepancy': True, 'published': {},
            }]})
        with self.assertRaises(ExpectationsError):
            ExpectationsFile.from_document({'entries': [{
                'id': 'x', 'kind': 'allowed', 'family': 'fourth-c-to-g', 'citation': 'c', 'expected': [],
            }]})


class ServiceConfigTests(SimpleTestCase):
    def test_overrides(self):
        config = DerivationConfig.from_settings(scheme='b', damping=False)
        self.assertIs(config.scheme, Scheme.B)
        self.assertFalse(config.damping)
        self.assertEqual(len(config.unobserved_merges), 7)

    def test_plain_operator_scheme_reads_the_alternative_expectations(self):
        config = DerivationConfig.from_settings(scheme='b0')
        self.assertEqual(MisreadingService.expectations_path(config).name, 'scheme_b.json')
        self.assertEqual(MisreadingService.expectations_path(config, '/tmp/x.json'), Path('/tmp/x.json'))

    def test_bad_ser_trigger(self):
        with self.assertRaises(ConfigurationError):
            DerivationConfig.from_settings(ser_trigger='maybe')


class CommandTests(SimpleTestCase):
    def run_command(self, *args):
        out = StringIO()
        call_command(*args, stdout=out)
        return out.getvalue()

    def test_derive(self):
        output = self.run_command('derive', '--scheme', 'a', '--damping', 'on')
        self.assertIn('level 5: 3 sextets, 5 quartets, 13 doublets', output)
        self.assertIn('UCN+AGY', output)

    def test_derive_json(self):
        payload = json.loads(self.run_command('derive', '--level', '3', '--damping', 'on', '--format', 'json'))
        self.assertEqual(payload['final']['shape'], {'sextets': 2, 'quartets': 6, 'doublets': 14})

    def test_derive_json_round_trips_and_repeats(self):
        first = self.run_command('derive', '--scheme', 'b', '--annotate', '--format', 'json')
        second = self.run_command('derive', '--scheme', 'b', '--annotate', '--format', 'json')
        self.assertEqual(first, second)
        parsed = json.loads(first)
        self.assertEqual(json.dumps(parsed, indent=2) + '\n', first)
        config = DerivationConfig.from_settings(scheme='b')
        self.assertEqual(parsed, json.loads(json.dumps(MisreadingService.derive_payload(config, annotate=True))))

    def test_verify_plain_operator_scheme(self):
        self.assertIn('All expectations hold', self.run_command('verify', '--scheme', 'b0'))

    def test_forbidden(self):
        output = self.run_command('forbidden', '--scheme', 'a', '--level', '2', '--family', 'third-c-to-g')
        self.assertEqual(output.split(), ['UUC->UUG', 'CAC->CAG', 'UAC->UAG', 'AUC->AUG', 'GAC->GAG', 'AAC->AAG'])

    def test_allowed_empty_family(self):
        output = self.run_command('allowed', '--level', '4', '--family', 'second-u-to-a')
        self.assertIn('no allowed substitutions', output)

    def test_diff(self):
        output = self.run_command('diff', '--scheme', 'a', '--damping', 'on', '--table', 'suc')
        self.assertIn('mixed UGR', output)
        self.assertIn('split Ile', output)

    def test_count(self):
        output = self.run_command('count', '--candidate')
        self.assertIn('12870', output)
        self.assertIn('disagrees', output)

    def test_verify(self):
        self.assertIn('All expectations hold', self.run_command('verify', '--scheme', 'a'))

    def test_verify_failure_exits_one(self):
        with tempfile.TemporaryDirectory() as directory:
            path = Path(directory) / 'wrong.json'
            path.write_text(json.dumps({'scheme': 'a', 'entries': [{
                'id': 'wrong', 'kind': 'quartets', 'level': 2, 'citation': 'wrong', 'expected': ['AA'],
            }]}))
            with self.assertRaises(CommandError) as raised:
                self.run_command('verify', '--expectations', str(path))
        self.assertEqual(raised.exception.returncode, 1)

    def test_engine_errors_exit_two(self):
        with self.assertRaises(CommandError) as raised:
            self.run_command('derive', '--level', '7')
        self.assertEqual(raised.exception.returncode, 2)
        with self.assertRaises(CommandError) as raised:
            self.run_command('verify', '--expectations', '/nonexistent/expectations.json')
        self.assertEqual(raised.exception.returncode, 2)


class MisreadingApiTests(SimpleTestCase):
    def setUp(self):
        self.client = APIClient()

    def test_derive(self):
        response = self.client.get('/api/misreading/derive/', {'scheme': 'a', 'level': 3, 'damping': 'on'})
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        data = response.json()['data']
        self.assertEqual(data['final']['shape'], {'sextets': 2, 'quartets': 6, 'doublets': 14})
        self.assertEqual(len(data['levels']), 3)

    def test_derive_with_annotations(self):
        response = self.client.get('/api/misreading/derive/', {'level': 2, 'annotate': 'on'})
        self.assertEqual(set(response.json()['data']['annotations']), {'UGR', 'AGR'})

    def test_allowed_and_forbidden(self):
        response = self.client.get('/api/misreading/allowed/', {
            'level': 2, 'family': 'third-c-to-g', 'which': 'forbidden', 'scheme': 'a'})
        data = response.json()['data']
        self.assertEqual(data['count'], 6)
        self.assertIn('CAC->CAG', data['forbidden'])

    def test_family_from_another_level(self):
        response = self.client.get('/api/misreading/allowed/', {'level': 3, 'family': 'third-c-to-g'})
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)

    def test_bad_flag(self):
        response = self.client.get('/api/misreading/derive/', {'damping': 'sometimes'})
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)
        self.assertIn('damping', response.json()['details'])

    def test_diff(self):
        response = self.client.get('/api/misreading/diff/', {'table': 'vmc', 'scheme': 'a', 'damping': 'on'})
        self.assertEqual(response.json()['data']['mismatches'], {'CGN+AGR': ['Arg', 'Ter']})

    def test_count(self):
        response = self.client.get('/api/misreading/count/')
        self.assertEqual(response.json()['data']['quartet_choices'], 12870)
