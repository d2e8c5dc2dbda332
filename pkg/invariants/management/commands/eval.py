from ..base import EngineCommand
from ...pipeline import INVARIANTS


class Command(EngineCommand):
    help = 'Evaluate an invariant of phi at a point, exactly and optionally in double precision'
    command = 'eval'

    def add_arguments(self, parser):
        parser.add_argument('--phi', required=True, help="graphing function, or @path")
        parser.add_argument('--invariant', choices=INVARIANTS, default='J')
        parser.add_argument('--point', required=True, help="e.g. z=1/2+1/3*i,u=0")
        parser.add_argument('--numeric', action='store_true',
                            help='also evaluate in double precision and check D_z by finite difference')
        parser.add_argument('--rigid', action='store_true')
        self.add_group_arguments(parser)
