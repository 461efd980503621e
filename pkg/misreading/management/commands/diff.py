from core.commands import EngineCommand
from misreading.services import DerivationConfig, MisreadingService


class Command(EngineCommand):
    help = 'Compare the derived multiplets with a genetic code'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--table', default='vmc', help='vmc or suc')
        parser.add_argument('--level', type=int, default=5)

    def run(self, options):
        config = DerivationConfig.from_settings(**self.config_overrides(options))
        report = MisreadingService.diff(config, options['table'], options['level'])
        summary = report['summary']
        lines = [f"{report['table']}: {summary['matches']} classes match, {summary['mismatches']} mismatch, "
                 f"{summary['split_groups']} synonym groups split"]
        lines += [f"  mixed {label}: {', '.join(aas)}" for label, aas in report['mismatches'].items()]
        lines += [f"  split {aa}: {', '.join(labels)}" for aa, labels in report['split_groups'].items()]
        self.emit(options, report, lines)
