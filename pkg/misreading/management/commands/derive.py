from core.commands import EngineCommand
from misreading.services import DerivationConfig, MisreadingService


class Command(EngineCommand):
    help = 'Run the error levels and print the multiplet structure after each one'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--level', type=int, default=5, help='Last error level to run (1-5)')
        parser.add_argument('--annotate', action='store_true', help='Flag doublets that may split or hold stop codons')

    def run(self, options):
        config = DerivationConfig.from_settings(**self.config_overrides(options))
        payload = MisreadingService.derive_payload(config, options['level'], options['annotate'])
        lines = [f"scheme {payload['scheme']} damping {'on' if payload['damping'] else 'off'}"]
        for trace in payload['levels']:
            shape = ', '.join(f"{count} {name}" for name, count in trace['partition']['shape'].items())
            lines.append(f"level {trace['level']}: {shape}")
            for merge in trace['merges']:
                lines.append(f"  merge {' + '.join(merge['classes'])} -> {merge['result']} ({', '.join(merge['triggers'])})")
            for warning in trace['warnings']:
                lines.append(f"  not merged {' + '.join(warning['classes'])}: {warning['reason']}")
        big = [c['label'] for c in payload['final']['classes'] if c['size'] > 2]
        lines.append(f"multiplets: {', '.join(big)}")
        for label, notes in payload.get('annotations', {}).items():
            lines.append(f"  {label}: {', '.join(notes)}")
        self.emit(options, payload, lines)
