"""
Variable identifiers: base coordinates, jets of phi and group parameters
"""
from dataclasses import dataclass
from typing import Optional

BASE_NAMES = ('z', 'zb', 'u')
GROUP_NAMES = ('b', 'bb', 'c', 'cb', 's', 'sb', 'r', 'rb')

BASE_CONJUGATES = {'z': 'zb', 'zb': 'z', 'u': 'u'}
GROUP_CONJUGATES = {
    'b': 'bb', 'bb': 'b',
    'c': 'cb', 'cb': 'c',
    's': 'sb', 'sb': 's',
    'r': 'rb', 'rb': 'r',
}


@dataclass(frozen=True, order=True)
class JetVar:
    """
    phi_{a,b,c} = d_z^a d_zb^b d_u^c phi
    """
    a: int
    b: int
    c: int

    @property
    def order(self):
        return self.a + self.b + self.c

    def conjugate(self):
        return JetVar(self.b, self.a, self.c)

    def bump(self, direction):
        if direction == 'z':
            return JetVar(self.a + 1, self.b, self.c)
        if direction == 'zb':
            return JetVar(self.a, self.b + 1, self.c)
        return JetVar(self.a, self.b, self.c + 1)

    @property
    def is_diagonal(self):
        return self.a == self.b


@dataclass(frozen=True)
class VarId:
    kind: str
    name: str
    jet: Optional[JetVar] = None

    def __str__(self):
        if self.kind == 'jet':
            return f"phi[{self.jet.a},{self.jet.b},{self.jet.c}]"
        return self.name

    @property
    def sort_key(self):
        if self.kind == 'base':
            return (0, BASE_NAMES.index(self.name), 0, 0, 0)
        if self.kind == 'jet':
            j = self.jet
            return (1, j.order, j.a, j.b, j.c)
        return (2, GROUP_NAMES.index(self.name), 0, 0, 0)

    def conjugate(self):
        if self.kind == 'jet':
            return jet_var(*astuple_jet(self.jet.conjugate()))
        if self.kind == 'base':
            return base_var(BASE_CONJUGATES[self.name])
        return group_var(GROUP_CONJUGATES[self.name])

    @property
    def is_self_conjugate(self):
        return self.conjugate() == self


def astuple_jet(jet):
    return (jet.a, jet.b, jet.c)


def base_var(name):
    if name not in BASE_NAMES:
        raise ValueError(f"unknown base coordinate {name!r}")
    return VarId('base', name)


def group_var(name):
    if name not in GROUP_NAMES:
        raise ValueError(f"unknown group parameter {name!r}")
    return VarId('group', name)


def jet_var(a, b, c):
    if min(a, b, c) < 0:
        raise ValueError("jet indices must be non-negative")
    return VarId('jet', 'phi', JetVar(a, b, c))


def var_from_name(name):
    """
    Inverse of str(VarId) for base and group names
    """
    if name in BASE_NAMES:
        return base_var(name)
    if name in GROUP_NAMES:
        return group_var(name)
    raise KeyError(name)
