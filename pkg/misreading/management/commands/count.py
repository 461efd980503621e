from core.commands import EngineCommand
from misreading.services import MisreadingService


class Command(EngineCommand):
    help = 'Count the ways the observed multiplet pattern could arise'
    uses_scheme = False

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--candidate', action='store_true', help='Also run the candidate sextet counting model')

    def run(self, options):
        report = MisreadingService.count(options['candidate'])
        lines = [
            f"quartet choices: {report['quartet_choices']}",
            f"sextet choices: {report['sextet2_choices']} x {report['sextet3_choices']}",
            f"probability: {report['probability']} ~ {report['probability_decimal']}",
        ]
        if 'candidate_model' in report:
            candidate = report['candidate_model']
            lines.append(f"candidate model: {candidate['sextet2_choices']} x {candidate['sextet3_choices']}"
                         f" ({'agrees' if candidate['agrees'] else 'disagrees'})")
        self.emit(options, report, lines)
