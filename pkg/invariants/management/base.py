"""
Shared plumbing for the engine's management commands: validation through
RunConfigSerializer, JSON report on stdout, exit status via CommandError.
"""
import json
import logging

from django.core.management.base import BaseCommand, CommandError

from symbolic.exceptions import EngineError, InputError
from symbolic.render import FORMATS

from ..displays import MUTATIONS
from ..serializers import RunConfigSerializer
from ..services import run_command

logger = logging.getLogger('invariants')

INPUT_ERROR = 2
VERIFICATION_FAILED = 1


def phi_source(value):
    """
    '@path' reads the graphing function from a file.
    """
    if value is None:
        return {}
    if value.startswith('@'):
        return {'phi_file': value[1:]}
    return {'phi': value}


class EngineCommand(BaseCommand):
    command = None

    def add_group_arguments(self, parser):
        parser.add_argument('--b', help='value of the group parameter b (default 0)')
        parser.add_argument('--c', help='value of the group parameter c (default 1)')
        parser.add_argument('--s', help='value of the group parameter s (default 0)')

    def add_common_arguments(self, parser):
        parser.add_argument('--seed', type=int, help='seed for every random choice')
        parser.add_argument('--trials', type=int, help='sample points per probabilistic zero test')
        parser.add_argument('--budget', type=int, help='node budget for canonical expansion')
        parser.add_argument('--mutate', choices=MUTATIONS,
                            help='corrupt one rational coefficient to demonstrate failure detection')

    def add_format_argument(self, parser):
        parser.add_argument('--format', choices=FORMATS + ('json',), default='plain')

    def build_data(self, options):
        """
        Map parsed options onto RunConfigSerializer input.
        """
        data = {'command': self.command}
        data.update(phi_source(options.get('phi')))
        group = {name: options[name] for name in ('b', 'c', 's') if options.get(name) is not None}
        if group:
            data['group'] = group
        for key in ('invariant', 'suite', 'point', 'seed', 'trials', 'budget', 'format', 'mutate'):
            if options.get(key) is not None:
                data[key] = options[key]
        for key in ('numeric', 'rigid'):
            if options.get(key):
                data[key] = True
        return data

    def handle(self, *args, **options):
        serializer = RunConfigSerializer(data=self.build_data(options))
        if not serializer.is_valid():
            raise CommandError(json.dumps(serializer.errors, sort_keys=True, default=str),
                               returncode=INPUT_ERROR)
        try:
            report = run_command(serializer.validated_data)
        except InputError as exc:
            raise CommandError(json.dumps(exc.to_dict(), sort_keys=True), returncode=INPUT_ERROR)
        except EngineError as exc:
            raise CommandError(json.dumps(exc.to_dict(), sort_keys=True), returncode=VERIFICATION_FAILED)
        self.stdout.write(report.to_json())
        if not report.passed:
            names = ', '.join(check.name for check in report.failures)
            logger.warning(f"{self.command}: failed checks {names}")
            raise CommandError(f"failed checks: {names}", returncode=VERIFICATION_FAILED)
