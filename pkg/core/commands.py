import json

from django.core.management.base import BaseCommand, CommandError

from core.exceptions import CrystalEngineError
from core.utils import parse_flag


class EngineCommand(BaseCommand):
    """
    Base for the engine commands: common --scheme/--format/--damping options,
    engine errors reported as usage errors (exit status 2).
    """
    uses_scheme = True

    def add_arguments(self, parser):
        if self.uses_scheme:
            parser.add_argument('--scheme', choices=['a', 'b', 'b0'], help='Transversion scheme (default from settings)')
            parser.add_argument('--damping', help='on/off: require level-5 corroboration for level-4 merges')
            parser.add_argument('--ser-trigger', choices=['computed', 'asserted'], dest='ser_trigger')
        parser.add_argument('--format', choices=['text', 'json'], default='text', dest='output_format')

    def config_overrides(self, options):
        if not self.uses_scheme:
            return {}
        try:
            damping = parse_flag(options.get('damping'))
        except ValueError as exc:
            raise CommandError(str(exc), returncode=2)
        return {'scheme': options.get('scheme'), 'damping': damping, 'ser_trigger': options.get('ser_trigger')}

    def handle(self, *args, **options):
        try:
            return self.run(options)
        except CrystalEngineError as exc:
            raise CommandError(str(exc), returncode=2)

    def run(self, options):
        raise NotImplementedError

    def emit(self, options, payload, text_lines):
        if options['output_format'] == 'json':
            self.stdout.write(json.dumps(payload, indent=2))
        else:
            for line in text_lines:
                self.stdout.write(line)
