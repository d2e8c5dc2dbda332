"""
Structure-group parameters of the lifted coframe and their normalizations
"""
from dataclasses import dataclass

from symbolic.exceptions import AlreadyBound
from symbolic.expr import mul, substitute, var
from symbolic.variables import group_var

BINDABLE = ('sb', 'r', 'rb')


def group_symbol(name):
    return var(group_var(name))


@dataclass(frozen=True)
class GroupParams:
    """
    b, c, s and their conjugates as free symbols; a is always c*cb.

    bindings is a tuple of (name, rhs) pairs recording which parameters
    were eliminated and by what. Frozen and hashable so pipeline results
    can be cached per parameter state.
    """
    bindings: tuple = ()

    @property
    def binding_map(self):
        return dict(self.bindings)

    def is_bound(self, name):
        return name in self.binding_map

    def symbol(self, name):
        return group_symbol(name)

    def value(self, name):
        """
        The bound right-hand side when eliminated, else the free symbol.
        """
        return self.binding_map.get(name, group_symbol(name))

    @property
    def b(self):
        return group_symbol('b')

    @property
    def bb(self):
        return group_symbol('bb')

    @property
    def c(self):
        return group_symbol('c')

    @property
    def cb(self):
        return group_symbol('cb')

    @property
    def a(self):
        return mul(self.c, self.cb)

    @property
    def s(self):
        return group_symbol('s')

    @property
    def sb(self):
        return self.value('sb')

    @property
    def r(self):
        return self.value('r')

    @property
    def rb(self):
        return self.value('rb')

    def bind(self, **rhs):
        current = self.binding_map
        for name, value in rhs.items():
            if name not in BINDABLE:
                raise ValueError(f"{name} cannot be normalized")
            if name in current:
                raise AlreadyBound(f"{name} is already bound")
            current[name] = value
        return GroupParams(tuple(sorted(current.items())))

    def variable_bindings(self):
        """
        The bindings keyed by VarId, ready for substitute().
        """
        return {group_var(name): value for name, value in self.bindings}

    def apply(self, e):
        if not self.bindings:
            return e
        return substitute(e, self.variable_bindings())
