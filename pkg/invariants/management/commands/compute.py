from ..base import EngineCommand
from ...displays import MUTATIONS
from ...pipeline import INVARIANTS


class Command(EngineCommand):
    help = 'Print an invariant, generically or for a given graphing function phi'
    command = 'compute'

    def add_arguments(self, parser):
        parser.add_argument('--phi', help="graphing function, or @path to read it from a file")
        parser.add_argument('--invariant', choices=INVARIANTS, default='J')
        parser.add_argument('--rigid', action='store_true', help='phi independent of u')
        parser.add_argument('--budget', type=int, help='node budget for the rigid monomial count')
        parser.add_argument('--mutate', choices=MUTATIONS)
        self.add_group_arguments(parser)
        self.add_format_argument(parser)
