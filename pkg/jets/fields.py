"""
Vector fields on the base (z, zb, u) acting through total derivatives
"""
from dataclasses import dataclass

from symbolic.expr import ONE, ZERO, add, as_expr, conjugate, mul

from .calculus import DIRECTIONS, restrict_rigid, total_derivative
from .context import JetContext


@dataclass(frozen=True)
class VectorField:
    coef_z: object = ZERO
    coef_zb: object = ZERO
    coef_u: object = ZERO

    @property
    def components(self):
        return (self.coef_z, self.coef_zb, self.coef_u)

    def conjugate(self):
        # conjugation swaps the roles of D_z and D_zb
        return VectorField(conjugate(self.coef_zb), conjugate(self.coef_z), conjugate(self.coef_u))

    def __add__(self, other):
        return VectorField(*(add(a, b) for a, b in zip(self.components, other.components)))

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, factor):
        factor = as_expr(factor)
        return VectorField(*(mul(factor, c) for c in self.components))


@dataclass(frozen=True)
class Frame:
    """
    The intrinsic frame L = D_z + A D_u, Lbar its conjugate, T = ell D_u
    """
    L: VectorField
    Lbar: VectorField
    T: VectorField
    ctx: JetContext

    def apply_L(self, e):
        return apply_field(self.L, e, self.ctx)

    def apply_Lbar(self, e):
        return apply_field(self.Lbar, e, self.ctx)

    def apply_T(self, e):
        return apply_field(self.T, e, self.ctx)


def apply_field(X, e, ctx=None):
    """
    X(e) = coef_z D_z e + coef_zb D_zb e + coef_u D_u e
    """
    e = as_expr(e)
    terms = []
    for coefficient, direction in zip(X.components, DIRECTIONS):
        coefficient = as_expr(coefficient)
        if coefficient.is_zero_const:
            continue
        derivative = total_derivative(e, direction, ctx)
        if derivative.is_zero_const:
            continue
        terms.append(derivative if coefficient is ONE else mul(coefficient, derivative))
    return add(*terms)


def lie_bracket(X, Y, ctx=None):
    """
    [X, Y] componentwise: X(Y^k) - Y(X^k)
    """
    return VectorField(*(
        add(apply_field(X, y, ctx), mul(-1, apply_field(Y, x, ctx)))
        for x, y in zip(X.components, Y.components)
    ))


def make_frame(ctx=None):
    from invariants.pipeline import compute_A, compute_ell

    if ctx is None:
        ctx = JetContext.from_settings()
    A = compute_A(ctx)
    ell = compute_ell(ctx)
    if ctx.rigid:
        A, ell = restrict_rigid(A), restrict_rigid(ell)
    return Frame(
        L=VectorField(ONE, ZERO, A),
        Lbar=VectorField(ZERO, ONE, conjugate(A)),
        T=VectorField(ZERO, ZERO, ell),
        ctx=ctx,
    )
