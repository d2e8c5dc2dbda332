from ..base import EngineCommand
from ...suites import SUITES


class Command(EngineCommand):
    help = 'Run identity suites and emit a JSON report (exit 1 when any check fails)'
    command = 'verify'

    def add_arguments(self, parser):
        parser.add_argument('--suite', choices=SUITES, default='all')
        parser.add_argument('--rigid', action='store_true', help='restrict to rigid jets')
        self.add_common_arguments(parser)
