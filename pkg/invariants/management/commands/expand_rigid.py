from ..base import EngineCommand


class Command(EngineCommand):
    help = 'Expand J on rigid jets at b = 0, c = cb = 1 and report its monomial count'
    command = 'expand_rigid'

    def add_arguments(self, parser):
        self.add_common_arguments(parser)
        self.add_format_argument(parser)
