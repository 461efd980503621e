from core.commands import EngineCommand
from misreading.services import DerivationConfig, MisreadingService


class Command(EngineCommand):
    help = 'List the substitutions the crystal operators allow at an error level'
    which = 'allowed'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--level', type=int, required=True)
        parser.add_argument('--family', help='Restrict to one substitution family, e.g. third-c-to-g or TVTV')
        parser.add_argument('--rows', action='store_true', help='Print every candidate with its verdict')

    def run(self, options):
        config = DerivationConfig.from_settings(**self.config_overrides(options))
        if options['rows']:
            rows = MisreadingService.substitution_rows(config, options['level'], options['family'])
            if self.which == 'forbidden':
                rows = [row for row in rows if not row['allowed']]
            else:
                rows = [row for row in rows if row['allowed']]
            lines = [f"{row['family']}\t{row['source']}->{row['target']}" for row in rows]
            self.emit(options, rows, lines)
            return
        pairs = MisreadingService.substitutions(config, options['level'], options['family'], self.which)
        payload = {'scheme': config.scheme.value, 'level': options['level'], 'family': options['family'],
                   self.which: pairs}
        self.emit(options, payload, pairs or [f"no {self.which} substitutions"])
