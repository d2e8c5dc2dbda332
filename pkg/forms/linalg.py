"""
Gauss-Jordan inversion: exact over Gaussian rationals (numpy object
arrays) and symbolic over expressions with sentinel-tested pivots.
"""
import numpy as np

from symbolic import scalars
from symbolic.exceptions import SingularBasis
from symbolic.expr import ONE, ZERO, div, mul, sentinel_value, sub


def identity_matrix(n):
    return np.array([[scalars.ONE if i == j else scalars.ZERO for i in range(n)]
                     for j in range(n)], dtype=object)


def as_object_matrix(rows):
    return np.array([list(row) for row in rows], dtype=object)


def inverse_matrix(X):
    """
    Inverse of a square object matrix of QQ_I elements.
    """
    n = X.shape[0]
    if X.shape != (n, n):
        raise ValueError("matrix is not square")
    X = X.copy()
    Y = identity_matrix(n)

    # downward elimination: lower triangle to zero, diagonal to one
    for i in range(n):
        for j in range(i, n):
            if X[j, i] != scalars.ZERO:
                if i != j:
                    X[[i, j]] = X[[j, i]]
                    Y[[i, j]] = Y[[j, i]]
                break
        else:
            raise SingularBasis("stage matrix is singular at this point")
        pivot = X[i, i]
        Y[i, :] = Y[i, :] / pivot
        X[i, :] = X[i, :] / pivot
        for j in range(i + 1, n):
            factor = X[j, i]
            if factor != scalars.ZERO:
                Y[j, :] = Y[j, :] - Y[i, :] * factor
                X[j, :] = X[j, :] - X[i, :] * factor

    # upward elimination
    for j in range(n - 2, -1, -1):
        for i in range(j + 1, n):
            factor = X[j, i]
            if factor != scalars.ZERO:
                Y[j, :] = Y[j, :] - Y[i, :] * factor
                X[j, :] = X[j, :] - X[i, :] * factor
    return Y


def determinant(X):
    """
    Exact determinant by elimination; zero for singular matrices.
    """
    X = X.copy()
    n = X.shape[0]
    det = scalars.ONE
    for i in range(n):
        for j in range(i, n):
            if X[j, i] != scalars.ZERO:
                if i != j:
                    X[[i, j]] = X[[j, i]]
                    det = -det
                break
        else:
            return scalars.ZERO
        pivot = X[i, i]
        det = det * pivot
        for j in range(i + 1, n):
            factor = X[j, i] / pivot
            if factor != scalars.ZERO:
                X[j, :] = X[j, :] - X[i, :] * factor
    return det


def _probably_nonzero(e):
    if e.is_const:
        return not e.is_zero_const
    value = sentinel_value(e)
    if value is None:
        value = sentinel_value(e, salt=1)
    return bool(value)


def inverse_expr_matrix(rows):
    """
    Inverse of a square matrix of expressions. A pivot is accepted when
    its sentinel value is nonzero, so it is nonzero as a rational function.
    """
    n = len(rows)
    X = [list(row) for row in rows]
    Y = [[ONE if i == j else ZERO for i in range(n)] for j in range(n)]
    for i in range(n):
        for j in range(i, n):
            if _probably_nonzero(X[j][i]):
                X[i], X[j] = X[j], X[i]
                Y[i], Y[j] = Y[j], Y[i]
                break
        else:
            raise SingularBasis("stage matrix is singular as a rational matrix")
        pivot = X[i][i]
        X[i] = [div(entry, pivot, trusted=True) for entry in X[i]]
        Y[i] = [div(entry, pivot, trusted=True) for entry in Y[i]]
        for j in range(n):
            if j == i or X[j][i].is_zero_const:
                continue
            factor = X[j][i]
            X[j] = [sub(a, mul(factor, b)) for a, b in zip(X[j], X[i])]
            Y[j] = [sub(a, mul(factor, b)) for a, b in zip(Y[j], Y[i])]
    return Y
