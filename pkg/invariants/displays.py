"""
Long formulas transcribed term by term.

Each function takes a FormulaScope (see invariants.pipeline) carrying P,
Pb, the group parameters and the frame operators L, Lb, T, and returns
an Expr. Formulas that the engine also derives mechanically are audited
against the derived value by the suites.
"""
from fractions import Fraction as F

from symbolic.expr import I

MUTATIONS = ('J-7/6', 'w1v2')


def J_formula(x, mutation=None):
    L, Lb = x.L, x.Lb
    Pb, c, cb = x.Pb, x.c, x.cb
    seven_sixths = 1 if mutation == 'J-7/6' else F(7, 6)
    return (
        -F(1, 3) * Lb(L(Lb(Pb)))
        + F(2, 3) * L(Lb(Pb)) * Pb
        + F(1, 2) * Lb(Lb(L(Pb)))
        - seven_sixths * Lb(L(Pb)) * Pb
        - F(1, 6) * L(Pb) * Lb(Pb)
        + F(1, 3) * L(Pb) * Pb**2
    ) / (c * cb**3)


def V3_display(x):
    L, Lb = x.L, x.Lb
    Pb, c, cb = x.Pb, x.c, x.cb
    return (
        F(1, 2) * Lb(Lb(L(Pb)))
        - F(1, 3) * Lb(L(Lb(Pb)))
        + F(2, 3) * L(Lb(Pb)) * Pb
        - F(7, 6) * Lb(L(Pb)) * Pb
        - F(1, 6) * L(Pb) * Lb(Pb)
        + F(1, 3) * L(Pb) * Pb**2
    ) / (c * cb**3)


def V2_display(x, corrected=True):
    """
    The printed V2 multiplies the (2i/3) L(Lb(Pb)) bb term by s^2; the
    consistent reading adds s^2 as a separate term. corrected selects it.
    """
    L, Lb = x.L, x.Lb
    P, Pb, b, bb, c, cb, s = x.P, x.Pb, x.b, x.bb, x.c, x.cb, x.s
    c2cb2 = c**2 * cb**2
    if corrected:
        s_terms = F(2, 3) * I * L(Lb(Pb)) * bb / (c**2 * cb**3) + s**2
    else:
        s_terms = F(2, 3) * I * L(Lb(Pb)) * bb * s**2 / (c**2 * cb**3)
    return (
        F(1, 2) * L(Lb(L(Pb))) / c2cb2
        - F(1, 3) * L(L(Lb(Pb))) / c2cb2
        - P * Lb(L(Pb)) / c2cb2
        + F(2, 3) * P * L(Lb(Pb)) / c2cb2
        - F(2, 3) * I * Lb(L(P)) * b / (c**3 * cb**2)
        - F(1, 6) * L(L(Pb)) * Pb / c2cb2
        - I * Lb(L(Pb)) * bb / (c**2 * cb**3)
        + s_terms
        - L(P) * b**2 / (c**4 * cb**2)
        + F(1, 3) * P * L(Pb) * Pb / c2cb2
        + F(1, 3) * I * L(Pb) * Pb * bb / (c**2 * cb**3)
        + F(2, 3) * I * L(Pb) * P * b / (c**3 * cb**2)
        - F(1, 6) * L(Pb) * L(Pb) / c2cb2
        - 2 * I * P * b**2 * bb / (c**4 * cb**3)
        + 2 * b**2 * bb**2 / (c**4 * cb**4)
    )


def V1_display(x):
    L, Lb, T = x.L, x.Lb, x.T
    P, Pb, b, bb, c, cb, s = x.P, x.Pb, x.b, x.bb, x.c, x.cb, x.s
    return (
        -F(1, 3) * T(L(Lb(Pb))) / (c**2 * cb**3)
        + T(Lb(Lb(P))) / (c**2 * cb**3)
        + F(1, 3) * L(L(Lb(Pb))) * b / (c**3 * cb**3)
        + F(1, 3) * Lb(L(Lb(Pb))) * bb / (c**2 * cb**4)
        - F(1, 2) * bb * Lb(Lb(L(Pb))) / (c**2 * cb**4)
        - F(1, 2) * Lb(L(L(Pb))) * b / (c**3 * cb**3)
        + F(1, 6) * I * Pb * Lb(L(L(Pb))) / (c**2 * cb**3)
        - F(1, 6) * I * Pb * L(Lb(L(Pb))) / (c**2 * cb**3)
        - 3 * I * b**2 * bb * s / (c**3 * cb**3)
        - F(1, 3) * I * Lb(L(P)) * b**2 / (c**4 * cb**3)
        - F(5, 2) * I * Lb(L(Pb)) * b * bb / (c**3 * cb**4)
        - L(Lb(Pb)) * s / (c * cb**2)
        + F(2, 3) * L(Lb(Pb)) * P * b / (c**3 * cb**3)
        - F(1, 3) * L(Lb(Pb)) * Pb * bb / (c**2 * cb**4)
        + F(3, 2) * Lb(L(Pb)) * s / (c * cb**2)
        - Lb(L(Pb)) * P * b / (c**3 * cb**3)
        + F(2, 3) * Lb(L(Pb)) * Pb * bb / (c**2 * cb**4)
        - F(1, 3) * L(L(Pb)) * Pb * b / (c**3 * cb**3)
        + F(1, 3) * Lb(L(P)) * Pb * b / (c**3 * cb**3)
        + I * L(L(Pb)) * b**2 / (c**4 * cb**3)
        + F(7, 3) * I * L(Lb(Pb)) * b * bb / (c**3 * cb**4)
        - F(1, 12) * I * Lb(L(Pb)) * L(Pb) / (c**2 * cb**3)
        - F(3, 2) * I * L(Pb) * b * s / (c**2 * cb**2)
        - 5 * b**3 * bb**2 / (c**5 * cb**5)
        - L(Pb) * Pb * s / (c * cb**2)
        - F(1, 6) * L(Pb) * Lb(Pb) * bb / (c**2 * cb**4)
        + F(1, 2) * L(Pb) * P * Pb * b / (c**3 * cb**3)
        - F(1, 6) * L(Pb) * Pb**2 * bb / (c**2 * cb**4)
        - Lb(Pb) * b * b**2 / (c**3 * cb**5)
        - 4 * L(Pb) * b**2 * bb / (c**4 * cb**4)
        + 3 * Pb * b * bb * s / (c**2 * cb**3)
        + Pb**2 * b * bb**2 / (c**3 * cb**5)
        - F(1, 12) * L(Pb) * L(Pb) * b / (c**3 * cb**3)
        - 3 * P * Pb * b**2 * bb / (c**4 * cb**4)
        + 3 * I * P * b**3 * bb / (c**5 * cb**4)
        + F(5, 6) * I * P * L(Pb) * b**2 / (c**4 * cb**3)
        - 6 * I * Pb * b**2 * bb**2 / (c**4 * cb**5)
        + F(1, 12) * I * L(Pb) * L(Pb) * Pb / (c**2 * cb**3)
        - F(5, 6) * I * L(Pb) * Pb * b * bb / (c**3 * cb**4)
    )


def W1_display(x):
    """
    W1 after both normalizations, as printed.
    """
    L, Lb, T = x.L, x.Lb, x.T
    P, Pb, b, bb, c, cb, s = x.P, x.Pb, x.b, x.bb, x.c, x.cb, x.s
    c2cb2 = c**2 * cb**2
    return (
        -F(1, 2) * T(Lb(P)) / c2cb2
        + Lb(L(P)) * bb / (c**2 * cb**3)
        - F(1, 2) * L(L(Pb)) * b / (c**3 * cb**2)
        + F(1, 3) * I * P * L(Lb(Pb)) / c2cb2
        - F(1, 3) * I * Pb * Lb(L(P)) / c2cb2
        + F(1, 2) * I * Pb * L(Lb(P)) / c2cb2
        - F(1, 2) * I * P * Lb(L(Pb)) / c2cb2
        + F(3, 2) * L(Lb(P)) * b / (c**3 * cb**2)
        + 3 * I * Lb(P) * b * bb / (c**3 * cb**3)
        + F(1, 6) * I * P * Pb * L(Pb) / c2cb2
        - F(1, 6) * I * P * Pb * Lb(P) / c2cb2
        + F(1, 4) * I * L(Pb) * Lb(P) / c2cb2
        + I * Lb(Pb) * bb**2 / (c**2 * cb**4)
        - I * L(P) * b**2 / (c**4 * cb**2)
        - Pb * Lb(P) * bb / (c**2 * cb**3)
        - Pb * L(Pb) * bb / (c**2 * cb**3)
        + 2 * I * P * Pb * b * bb / (c**3 * cb**3)
        - I * Pb**2 * bb**2 / (c**2 * cb**4)
        - 4 * Pb * b * bb**2 / (c**3 * cb**4)
        - I * P**2 * b**2 / (c**4 * cb**2)
        + 8 * P * b**2 * bb / (c**4 * cb**3)
        + 9 * I * b**2 * bb**2 / (c**4 * cb**4)
        + (
            -L(Pb) / (c * cb)
            + 2 * I * P * b / (c**2 * cb)
            - 2 * I * Pb * bb / (c * cb**2)
            - 6 * b * bb / c2cb2
        ) * s
    )


def W1_V2_compact(x, mutation=None):
    """
    The simplified form of conj(V2) - i W1 - V2.
    """
    L, Lb = x.L, x.Lb
    P, Pb, c, cb = x.P, x.Pb, x.c, x.cb
    lead = -2 if mutation == 'w1v2' else -3
    return (
        lead * L(Lb(L(Pb)))
        + 3 * Lb(L(L(Pb)))
        + L(L(Lb(Pb)))
        - Lb(Lb(L(P)))
        + P * Lb(L(Pb))
        - P * L(Lb(Pb))
        - Pb * L(L(Pb))
        + Pb * Lb(L(P))
    ) / (3 * c**2 * cb**2)


def delta_rho_display(x):
    """
    rho coefficient of the final delta.
    """
    L, Lb = x.L, x.Lb
    P, Pb, b, bb, c, cb, s = x.P, x.Pb, x.b, x.bb, x.c, x.cb, x.s
    c2cb2 = c**2 * cb**2
    return (
        -s**2
        + F(1, 3) * L(L(Lb(Pb))) / c2cb2
        - F(1, 2) * L(Lb(L(Pb))) / c2cb2
        - F(2, 3) * P * L(Lb(Pb)) / c2cb2
        + F(2, 3) * I * Lb(L(P)) * b / (c**3 * cb**2)
        + Lb(L(Pb)) * P / c2cb2
        + I * Lb(L(Pb)) * bb / (c**2 * cb**3)
        + F(1, 6) * L(L(Pb)) * Pb / c2cb2
        - F(2, 3) * I * L(Lb(Pb)) * bb / (c**2 * cb**3)
        - F(2, 3) * I * L(Pb) * P * b / (c**3 * cb**2)
        + L(P) * b**2 / (c**4 * cb**2)
        - F(1, 3) * L(Pb) * P * Pb / c2cb2
        - F(1, 3) * I * L(Pb) * Pb * bb / (c**2 * cb**3)
        + F(1, 6) * L(Pb) * L(Pb) / c2cb2
        - 2 * b**2 * bb**2 / (c**4 * cb**4)
        + 2 * I * P * b**2 * bb / (c**4 * cb**3)
    )


def delta_zeta_display(x):
    L, Lb = x.L, x.Lb
    P, Pb, b, bb, c, cb, s = x.P, x.Pb, x.b, x.bb, x.c, x.cb, x.s
    return (
        P * s / c
        + 2 * I * s * bb / (c * cb)
        - F(1, 3) * I * Lb(L(P)) / (c**2 * cb)
        + F(1, 3) * I * L(Pb) * P / (c**2 * cb)
        - L(P) * b / (c**3 * cb)
        + 2 * b * bb**2 / (c**3 * cb**3)
        - 2 * I * P * b * bb / (c**3 * cb**2)
    )


def delta_zetabar_display(x):
    L, Lb = x.L, x.Lb
    P, Pb, b, c, cb, s = x.P, x.Pb, x.b, x.c, x.cb, x.s
    bb = x.bb
    return (
        I * b * s / (c * cb)
        - F(1, 2) * I * Lb(L(Pb)) / (c * cb**2)
        + F(1, 3) * I * L(Lb(Pb)) / (c * cb**2)
        + F(1, 6) * I * L(Pb) * Pb / (c * cb**2)
        + 2 * b**2 * bb / (c**3 * cb**3)
        - I * P * b**2 / (c**3 * cb**2)
    )


def delta0_coefficients(x):
    """
    Coefficients of zeta, zetabar, alpha, beta, alphabar, betabar in the
    modified delta of the prolonged stage (plus ds with coefficient 1).
    """
    L, Lb, T = x.L, x.Lb, x.T
    P, b, bb, c, cb, s, sb, r, rb = x.P, x.b, x.bb, x.c, x.cb, x.s, x.sb, x.r, x.rb
    return {
        'zeta': (
            T(P) / (c**2 * cb)
            - b * L(P) / (c**3 * cb)
            - bb * Lb(P) / (c**2 * cb**2)
            + s * P / c
            + 2 * I * bb * s / (c * cb)
            - 2 * I * rb
        ),
        'zetabar': I * b * sb / (c * cb) - I * r,
        'alpha': s,
        'beta': -(P / c + 2 * I * bb / (c * cb)),
        'alphabar': s,
        'betabar': -I * b / (c * cb),
    }


def gamma0_coefficients(x):
    """
    Coefficients of the modified gamma (plus dr with coefficient 1).
    """
    L, Lb, T = x.L, x.Lb, x.T
    P, Pb, b, bb, c, cb, s, sb, r, rb = (x.P, x.Pb, x.b, x.bb, x.c, x.cb,
                                         x.s, x.sb, x.r, x.rb)
    return {
        'zeta': (
            b * T(P) / (c**3 * cb**2)
            - b**2 * L(P) / (c**4 * cb**2)
            - b * bb * Lb(P) / (c**3 * cb**3)
            + b * s * P / (c**2 * cb)
            - r * P / c
            + I * b * bb * s / (c**2 * cb**2)
            - 2 * I * bb * r / (c * cb)
            - I * b * rb / (c * cb)
            + s * sb
        ),
        'zetabar': (
            b * T(Pb) / (c**2 * cb**3)
            - b**2 * L(Pb) / (c**3 * cb**3)
            - b * bb * Lb(Pb) / (c**2 * cb**4)
            + b * sb * Pb / (c * cb**2)
            - I * b**2 * sb / (c**2 * cb**2)
        ),
        'alpha': r,
        'beta': -(b * P / (c**2 * cb) + I * b * bb / (c**2 * cb**2) - s + sb),
        'alphabar': 2 * r,
        'betabar': -b * Pb / (c * cb**2) + I * b**2 / (c**2 * cb**2),
    }


# iterated-bracket identities for two fields H1, H2 and functions
# Phi1, Phi2 with [H1, [H1, H2]] = Phi1 [H1, H2], [H2, [H1, H2]] = Phi2 [H1, H2]

def iterated_identities(x):
    H1, H2, Phi1, Phi2 = x.H1, x.H2, x.Phi1, x.Phi2
    return {
        'I': (
            -H1(H2(H1(Phi2))) + 2 * H2(H1(H1(Phi2))) - H2(H2(H1(Phi1)))
            - Phi2 * H1(H2(Phi1)) + Phi2 * H2(H1(Phi1))
        ),
        'II': (
            -H2(H1(H1(Phi2))) + 2 * H1(H2(H1(Phi2))) - H1(H1(H2(Phi2)))
            - Phi1 * H2(H1(Phi2)) + Phi1 * H1(H2(Phi2))
        ),
        'III': (
            -H1(H1(H1(Phi2))) + 2 * H1(H2(H1(Phi1))) - H2(H1(H1(Phi1)))
            + Phi1 * H1(H1(Phi2)) - Phi1 * H2(H1(Phi1))
        ),
        'IV': (
            H2(H2(H1(Phi2))) - 2 * H2(H1(H2(Phi2))) + H1(H2(H2(Phi2)))
            - Phi2 * H2(H1(Phi2)) + Phi2 * H1(H2(Phi2))
        ),
    }


def Delta1_formula(x):
    H1, H2, Phi1, Phi2 = x.H1, x.H2, x.Phi1, x.Phi2
    return F(1, 384) * (
        H1(H1(H1(Phi1)))
        - H2(H2(H2(Phi2)))
        + 11 * H1(H2(H1(Phi2)))
        - 11 * H2(H1(H2(Phi1)))
        + 6 * Phi2 * H2(H1(Phi1))
        - 6 * Phi1 * H1(H2(Phi2))
        - 3 * Phi2 * H1(H1(Phi2))
        + 3 * Phi1 * H2(H2(Phi1))
        - 3 * Phi1 * H1(H1(Phi1))
        + 3 * Phi2 * H2(H2(Phi2))
        - H1(Phi1) * H1(Phi1)
        + H2(Phi2) * H2(Phi2)
        - 2 * Phi2**2 * H1(Phi1)
        + 2 * Phi1**2 * H2(Phi2)
        - 2 * Phi2**2 * H2(Phi2)
        + 2 * Phi1**2 * H1(Phi1)
    )


def Delta4_formula(x):
    H1, H2, Phi1, Phi2 = x.H1, x.H2, x.Phi1, x.Phi2
    return F(1, 384) * (
        -3 * H2(H1(H2(Phi2)))
        - 3 * H1(H2(H1(Phi1)))
        + 5 * H1(H2(H2(Phi2)))
        + 5 * H2(H1(H1(Phi1)))
        + 4 * Phi1 * H1(H1(Phi2))
        + 4 * Phi2 * H2(H1(Phi2))
        - 3 * Phi2 * H1(H1(Phi1))
        - 3 * Phi1 * H2(H2(Phi2))
        - 7 * Phi2 * H1(H2(Phi2))
        - 7 * Phi1 * H2(H1(Phi1))
        - 2 * H1(Phi1) * H1(Phi2)
        - 2 * H2(Phi2) * H2(Phi1)
        + 4 * Phi1 * Phi2 * H1(Phi1)
        + 4 * Phi1 * Phi2 * H2(Phi2)
    )
