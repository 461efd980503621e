import json

from django.core.management.base import BaseCommand, CommandError

from crystals.codons import codon_table, dinucleotide_table, table_mismatches


class Command(BaseCommand):
    help = 'Print the computed codon and dinucleotide crystal labels'

    def add_arguments(self, parser):
        parser.add_argument('--which', choices=['codons', 'dinucleotides'], default='codons')
        parser.add_argument('--format', choices=['text', 'json'], default='text', dest='output_format')
        parser.add_argument('--check', action='store_true', help='Exit 1 if any row disagrees with the reference tables')

    def handle(self, *args, **options):
        rows = codon_table() if options['which'] == 'codons' else dinucleotide_table()
        if options['output_format'] == 'json':
            self.stdout.write(json.dumps(rows, indent=2))
        else:
            columns = list(rows[0])
            self.stdout.write('\t'.join(columns))
            for row in rows:
                self.stdout.write('\t'.join(str(row[column]) for column in columns))
        if options['check']:
            mismatches = table_mismatches()
            if mismatches:
                for sequence, computed, reference in mismatches:
                    self.stderr.write(f"{sequence}: computed {computed}, reference {reference}")
                raise CommandError(f"{len(mismatches)} rows disagree with the reference tables", returncode=1)
            self.stdout.write(self.style.SUCCESS('Computed labels match the reference tables'))
