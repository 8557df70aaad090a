"""Dense-matrix primitives.

Row centering, the leading singular triple of the centered matrix via power
iteration on the small (n x n) Gram matrix, ranking/permutation machinery,
and a residual-spectrum diagnostic for the approximate rank-one condition.

All functions here are pure; nothing mutates its arguments.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import NonFiniteInput, ZeroMatrixError

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 1000


class SignConvention(Enum):
    """How the joint sign of the leading pair (u, v) is fixed.

    ROW_MAJORITY flips (u, v) so that sum_i (Xv)_i >= 0; on an exact tie it
    falls back to FIRST_NONZERO_NEGATIVE, which flips so that the first
    nonzero component of v is negative.
    """

    ROW_MAJORITY = "row-majority"
    FIRST_NONZERO_NEGATIVE = "first-negative"


@dataclass(frozen=True)
class CenteredMatrix:
    """A row-centered matrix together with the removed row means."""

    values: np.ndarray
    row_means: np.ndarray


@dataclass(frozen=True)
class SingularTriple:
    """Leading singular value/vectors of a centered matrix.

    ``u`` has length n, ``v`` has length p, both unit norm.  ``converged``
    reports whether ||Xv - lam*u|| <= tol*(lam + 1) was reached within the
    iteration budget.  ``multiplicity_warning`` is set when the second
    singular value is within tol*lam of the first, in which case the
    returned direction is numerically ambiguous.
    """

    lam: float
    u: np.ndarray
    v: np.ndarray
    convention: SignConvention
    iterations: int
    converged: bool
    multiplicity_warning: bool = False


@dataclass(frozen=True)
class Ranking:
    """Ascending ranks of a vector and the inverse permutation.

    Both arrays are 1-based, matching the ranking-operator convention:
    ``ranks`` assigns 1 to the smallest entry with ties broken left to
    right, and ``inverse_permutation[k-1]`` is the (1-based) index holding
    rank k, so that ``ranks[inverse_permutation[k-1] - 1] == k``.
    """

    ranks: np.ndarray
    inverse_permutation: np.ndarray

    @property
    def order(self) -> np.ndarray:
        """0-based column order, ascending by value (ties left to right)."""
        return self.inverse_permutation - 1


def _as_matrix(values, name: str = "matrix", min_rows: int = 2) -> np.ndarray:
    a = np.asarray(values, dtype=float)
    if a.ndim != 2 or a.shape[0] < min_rows or a.shape[1] < 2:
        raise ValueError(
            f"{name} must be 2-d with at least {min_rows} row(s) and 2 columns, "
            f"got shape {a.shape}"
        )
    if not np.isfinite(a).all():
        raise NonFiniteInput(f"{name} contains NaN or infinite entries")
    return a


def center_rows(values) -> CenteredMatrix:
    """Subtract each row's mean; returns the centered matrix and the means."""
    y = _as_matrix(values, "observation matrix")
    row_means = y.mean(axis=1)
    return CenteredMatrix(values=y - row_means[:, None], row_means=row_means)


def _unwrap(x, name: str = "centered matrix") -> np.ndarray:
    if isinstance(x, CenteredMatrix):
        return x.values
    return _as_matrix(x, name)


def _initial_left_vector(values: np.ndarray) -> np.ndarray:
    # Project the largest-norm row into the left space: u0 = X x0 / ||X x0||
    # with x0 the normalized largest row.  Row norms and X x0 are both exactly
    # invariant under column permutation, so downstream results are too.
    row_norms = np.linalg.norm(values, axis=1)
    k = int(np.argmax(row_norms))
    x0 = values[k] / row_norms[k]
    u0 = values @ x0
    return u0 / np.linalg.norm(u0)


def _power_iterate(gram: np.ndarray, u0: np.ndarray, tol: float, max_iter: int):
    """Power iteration for the top eigenpair of a PSD matrix.

    Stops when successive Rayleigh quotients differ by < tol*(mu + 1) and
    the eigen-residual satisfies ||Gu - mu*u|| <= tol*(mu + sqrt(mu)), which
    translates to ||Xv - lam*u|| <= tol*(lam + 1) in singular-value units.
    """
    u = u0
    mu = 0.0
    mu_prev = np.inf
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        w = gram @ u
        mu = float(u @ w)
        wnorm = float(np.linalg.norm(w))
        if wnorm == 0.0:
            # u landed in the nullspace; restart from a basis vector
            u = np.zeros_like(u)
            u[(iterations - 1) % u.size] = 1.0
            mu_prev = np.inf
            continue
        resid = float(np.linalg.norm(w - mu * u))
        u = w / wnorm
        lam = np.sqrt(mu) if mu > 0.0 else 0.0
        if abs(mu - mu_prev) < tol * (mu + 1.0) and resid <= tol * (mu + lam):
            converged = True
            break
        mu_prev = mu
    return mu, u, iterations, converged


def _first_nonzero_is_positive(v: np.ndarray) -> bool:
    for value in v:
        if value != 0.0:
            return value > 0.0
    return False


def _second_singular_value(
    gram: np.ndarray, mu1: float, u1: np.ndarray, tol: float, max_iter: int
) -> float:
    deflated = gram - mu1 * np.outer(u1, u1)
    k = int(np.argmax(np.diag(deflated)))
    u0 = np.zeros(gram.shape[0])
    u0[k] = 1.0
    u0 -= (u0 @ u1) * u1
    norm = np.linalg.norm(u0)
    if norm == 0.0:
        return 0.0
    mu2, _, _, _ = _power_iterate(deflated, u0 / norm, tol, max_iter)
    return float(np.sqrt(max(mu2, 0.0)))


def leading_singular_triple(
    x,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    convention: SignConvention = SignConvention.ROW_MAJORITY,
    check_multiplicity: bool = True,
) -> SingularTriple:
    """Top singular triple of a (row-centered) matrix.

    Computed by power iteration on the n x n Gram matrix XX^T, which is the
    cheap side under p >> n.  Raises ZeroMatrixError when the matrix is
    identically zero.  Non-convergence within ``max_iter`` is reported via
    the ``converged`` flag, not an exception.
    """
    values = _unwrap(x)
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    if not np.any(values):
        raise ZeroMatrixError("matrix has zero Frobenius norm; no direction defined")

    gram = values @ values.T
    u0 = _initial_left_vector(values)
    mu, u, iterations, converged = _power_iterate(gram, u0, tol, max_iter)

    xv = values.T @ u
    lam = float(np.linalg.norm(xv))
    if lam == 0.0:
        raise ZeroMatrixError("iterate collapsed onto the null space")
    v = xv / lam
    xw = values @ v

    if convention is SignConvention.ROW_MAJORITY:
        s = float(xw.sum())
        if s != 0.0:
            flip = s < 0.0
        else:
            flip = _first_nonzero_is_positive(v)
    else:
        flip = _first_nonzero_is_positive(v)
    if flip:
        u, v, xw = -u, -v, -xw

    residual = float(np.linalg.norm(xw - lam * u))
    converged = converged and residual <= tol * (lam + 1.0)

    warning = False
    if check_multiplicity:
        lam2 = _second_singular_value(gram, mu, u, tol, max_iter)
        warning = (lam - lam2) <= tol * lam

    return SingularTriple(
        lam=lam,
        u=u,
        v=v,
        convention=convention,
        iterations=iterations,
        converged=converged,
        multiplicity_warning=warning,
    )


def rank_vector(x) -> Ranking:
    """Ascending ranks, ties broken left to right."""
    v = np.asarray(x, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise ValueError("rank_vector expects a nonempty 1-d vector")
    if not np.isfinite(v).all():
        raise NonFiniteInput("vector contains NaN or infinite entries")
    order = np.argsort(v, kind="stable")
    ranks = np.empty(v.size, dtype=np.int64)
    ranks[order] = np.arange(1, v.size + 1)
    return Ranking(ranks=ranks, inverse_permutation=order.astype(np.int64) + 1)


def residual_spectrum(
    x,
    k: int,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> tuple[float, float]:
    """Top singular value and the sum of singular values 2..k.

    Computed by iterated deflation of the Gram matrix.  The residual sum
    feeds the approximate rank-one diagnostic sum_{i>=2} lam_i <= sigma
    sqrt(log p).  Eigenvalue estimates driven negative by roundoff are
    clamped to zero.
    """
    values = _unwrap(x)
    n, p = values.shape
    if not 1 <= k <= min(n, p):
        raise ValueError(f"k must be in [1, min(n, p)] = [1, {min(n, p)}], got {k}")
    if not np.any(values):
        raise ZeroMatrixError("matrix has zero Frobenius norm")

    gram = values @ values.T
    lams = []
    for i in range(k):
        if i == 0:
            u0 = _initial_left_vector(values)
        else:
            j = int(np.argmax(np.diag(gram)))
            u0 = np.zeros(n)
            u0[j] = 1.0
        mu, u, _, _ = _power_iterate(gram, u0, tol, max_iter)
        lams.append(float(np.sqrt(max(mu, 0.0))))
        gram = gram - mu * np.outer(u, u)
    return lams[0], float(sum(lams[1:]))
