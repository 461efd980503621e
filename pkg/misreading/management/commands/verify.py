from django.core.management.base import CommandError

from core.commands import EngineCommand
from misreading.services import DerivationConfig, MisreadingService


class Command(EngineCommand):
    help = 'Check the engine against an expectations file; exits 1 on any mismatch'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--expectations', help='Path to an expectations file (default: bundled file for the scheme)')

    def run(self, options):
        config = DerivationConfig.from_settings(**self.config_overrides(options))
        report = MisreadingService.verify(config, options['expectations'])
        lines = []
        for result in report.results:
            line = f"{result.status:<12} {result.entry.id}"
            if result.status == 'fail':
                line += f"  {result.differences}"
            lines.append(line)
        lines.append(', '.join(f"{count} {status}" for status, count in sorted(report.counts().items())))
        self.emit(options, report.as_dict(), lines)
        if not report.ok:
            raise CommandError(f"{len(report.failures)} expectation(s) failed", returncode=1)
        if options['output_format'] == 'text':
            self.stdout.write(self.style.SUCCESS('All expectations hold'))
