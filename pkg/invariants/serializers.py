import re
from pathlib import Path

from rest_framework import serializers

from symbolic import scalars
from symbolic.exceptions import InputError
from symbolic.parser import parse_expression, parse_phi
from symbolic.render import FORMATS
from symbolic.variables import BASE_NAMES, GROUP_NAMES

from .displays import MUTATIONS
from .pipeline import INVARIANTS
from .suites import SUITES

COMMANDS = ('compute', 'verify', 'eval', 'expand_rigid')

GROUP_DEFAULTS = {'b': '0', 'c': '1', 's': '0'}

IMAGINARY_SUFFIX = re.compile(r"(\d)\s*i\b")


def parse_constant(text, label):
    """
    A Gaussian rational written in the expression grammar; "1/3i" is
    read as "1/3*i".
    """
    text = IMAGINARY_SUFFIX.sub(r"\1*i", str(text))
    try:
        e = parse_expression(text)
    except InputError as exc:
        raise serializers.ValidationError(f"{label}: {exc}")
    if not e.is_const:
        raise serializers.ValidationError(f"{label}: expected a constant, got variables")
    return e.payload


def parse_assignment(value, allowed, label):
    """
    'z=1/2, u=0' or {'z': '1/2', 'u': '0'} -> {name: Gaussian rational}
    """
    if isinstance(value, str):
        pairs = {}
        for item in filter(None, (part.strip() for part in value.split(','))):
            if '=' not in item:
                raise serializers.ValidationError(f"{label}: expected name=value, got {item!r}")
            name, text = (piece.strip() for piece in item.split('=', 1))
            pairs[name] = text
        value = pairs
    if not isinstance(value, dict):
        raise serializers.ValidationError(f"{label}: expected a mapping")
    unknown = sorted(set(value) - set(allowed))
    if unknown:
        raise serializers.ValidationError(f"{label}: unknown names {', '.join(unknown)}")
    return {name: parse_constant(text, f"{label}.{name}") for name, text in value.items()}


class RunConfigSerializer(serializers.Serializer):
    """
    One engine run: command, graphing function, selectors and the
    knobs that make it reproducible.
    """
    command = serializers.ChoiceField(choices=COMMANDS)
    phi = serializers.CharField(required=False, allow_blank=False)
    phi_file = serializers.CharField(required=False)
    invariant = serializers.ChoiceField(choices=INVARIANTS, default='J')
    suite = serializers.ChoiceField(choices=SUITES, default='all')
    group = serializers.JSONField(required=False)
    point = serializers.JSONField(required=False)
    seed = serializers.IntegerField(required=False, min_value=0)
    trials = serializers.IntegerField(required=False, min_value=1)
    budget = serializers.IntegerField(required=False, min_value=1)
    format = serializers.ChoiceField(choices=FORMATS + ('json',), default='plain')
    numeric = serializers.BooleanField(default=False)
    rigid = serializers.BooleanField(default=False)
    mutate = serializers.ChoiceField(choices=MUTATIONS, required=False, allow_null=True)

    def validate_phi_file(self, value):
        path = Path(value)
        if not path.is_file():
            raise serializers.ValidationError(f"no such file: {value}")
        return path.read_text().strip()

    def validate_format(self, value):
        return 'json-tree' if value == 'json' else value

    def validate_group(self, value):
        allowed = ('b', 'c', 's')
        return parse_assignment(value, allowed, 'group')

    def validate_point(self, value):
        point = parse_assignment(value, BASE_NAMES + GROUP_NAMES, 'point')
        if 'u' in point and scalars.parts(point['u'])[2]:
            raise serializers.ValidationError('point: u must be real')
        return point

    def validate(self, attrs):
        if 'phi' in attrs and 'phi_file' in attrs:
            raise serializers.ValidationError({'phi': "give either phi or phi_file, not both"})
        source = attrs.pop('phi_file', None) or attrs.get('phi')
        if source is not None:
            try:
                attrs['phi_expr'] = parse_phi(source)
            except InputError as exc:
                raise serializers.ValidationError({'phi': exc.to_dict()})
            attrs['phi'] = source
        if attrs['command'] == 'eval':
            if source is None:
                raise serializers.ValidationError({'phi': "eval needs a graphing function"})
            if 'point' not in attrs:
                raise serializers.ValidationError({'point': "eval needs a point"})
        if attrs['command'] in ('compute', 'eval') and 'group' not in attrs:
            attrs['group'] = {name: parse_constant(text, f"group.{name}")
                              for name, text in GROUP_DEFAULTS.items()}
        return attrs


class CheckSerializer(serializers.Serializer):
    name = serializers.CharField()
    status = serializers.ChoiceField(choices=('pass', 'fail', 'flagged'))
    kind = serializers.CharField()
    mode = serializers.CharField()
    trials = serializers.IntegerField()
    work = serializers.IntegerField()
    witness = serializers.DictField(required=False)
    residual = serializers.CharField(required=False)
    position = serializers.CharField(required=False)


class ReportSerializer(serializers.Serializer):
    command = serializers.CharField()
    config = serializers.DictField()
    seed = serializers.IntegerField(allow_null=True)
    version = serializers.CharField()
    passed = serializers.BooleanField()
    checks = CheckSerializer(many=True)
    results = serializers.DictField()
    timings = serializers.DictField()
