"""Dense linear algebra helpers: validated containers, LU with partial
pivoting, Schur complements, and a finite-difference Jacobian used as the
test-time ground truth for every analytic derivative in the package.

Everything here works on plain float64 numpy arrays.  The wrappers add the
two guarantees the rest of the package relies on: inputs are finite, and
nonsingularity is an explicit verdict (SingularMatrix) instead of a warning
or a silently garbage solve.
"""

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DimensionMismatch, SingularMatrix

# A pivot is declared zero when it is at most this fraction of the largest
# input entry.  The reformulation assumes nonsingular T, A, D but gives no
# tolerance, so one fixed relative threshold is used everywhere.
PIVOT_RTOL = 1e-12

# Default central-difference step; balances truncation against rounding for
# float64 at the O(1)..O(100) scales used here.
FD_STEP = 1e-6


def as_vector(v, name="vector"):
    """Coerce to a finite 1-d float64 array."""
    arr = np.asarray(v, dtype=float)
    if arr.ndim != 1:
        raise DimensionMismatch(f"{name}: expected 1-d, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name}: entries must be finite")
    return arr


def as_matrix(m, name="matrix"):
    """Coerce to a finite 2-d float64 array."""
    arr = np.asarray(m, dtype=float)
    if arr.ndim != 2:
        raise DimensionMismatch(f"{name}: expected 2-d, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name}: entries must be finite")
    return arr


@dataclass(frozen=True)
class LuFactors:
    """Packed LU factorization P M = L U of a square matrix M.

    `lu` stores L below the diagonal (unit diagonal implied) and U on and
    above it; `piv` is the sequential row-swap vector from partial pivoting.
    """

    lu: np.ndarray
    piv: np.ndarray
    n: int


def lu_factor(m, name: str = "matrix") -> LuFactors:
    """LU-factor a square matrix with partial pivoting.

    Raises SingularMatrix when any pivot magnitude is at most
    PIVOT_RTOL times the largest entry of the input; `name` labels the
    matrix in that message.
    """
    a = as_matrix(m, name)
    n, ncols = a.shape
    if n != ncols:
        raise DimensionMismatch(f"{name} must be square, got {a.shape}")
    # scipy warns on zero pivots; singularity is an explicit verdict here.
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(a, check_finite=False)
    pivots = np.abs(np.diag(lu))
    threshold = PIVOT_RTOL * np.abs(a).max() if a.size else 0.0
    if n and pivots.min() <= threshold:
        raise SingularMatrix(
            f"{name} is singular to working precision "
            f"(pivot {pivots.min():.3e} <= {threshold:.3e})"
        )
    lu.setflags(write=False)
    piv.setflags(write=False)
    return LuFactors(lu=lu, piv=piv, n=n)


def lu_solve(f: LuFactors, b):
    """Solve M s = b given the factorization of M."""
    rhs = np.asarray(b, dtype=float)
    if rhs.shape[0] != f.n:
        raise DimensionMismatch(f"lu_solve: rhs has length {rhs.shape[0]}, expected {f.n}")
    return scipy.linalg.lu_solve((f.lu, f.piv), rhs, check_finite=False)


def solve(m, b):
    """One-shot factor-and-solve convenience."""
    return lu_solve(lu_factor(m), b)


def schur_complement(pi, top_left_dim: int, name: str = "leading block"):
    """Schur complement S - R P^-1 Q of the leading block of pi = [[P,Q],[R,S]].

    Raises SingularMatrix if the leading top_left_dim block P is singular;
    `name` labels that block in the error message.
    """
    a = as_matrix(pi, "schur_complement input")
    n, ncols = a.shape
    if n != ncols:
        raise DimensionMismatch(f"schur_complement: matrix must be square, got {a.shape}")
    d = int(top_left_dim)
    if not 0 < d < n:
        raise DimensionMismatch(f"schur_complement: top_left_dim {d} out of range for n={n}")
    P, Q = a[:d, :d], a[:d, d:]
    R, S = a[d:, :d], a[d:, d:]
    return S - R @ lu_solve(lu_factor(P, name=name), Q)


def fd_jacobian(f, at, h: float = FD_STEP):
    """Central-difference Jacobian of a vector-valued f at a point.

    Column j is (f(at + h e_j) - f(at - h e_j)) / (2h).  Used as the oracle
    that analytic Jacobians are tested against.
    """
    x0 = as_vector(at, "fd_jacobian point")
    if h <= 0:
        raise ValueError(f"fd_jacobian: step must be positive, got {h}")
    n = x0.size
    cols = []
    for j in range(n):
        step = np.zeros(n)
        step[j] = h
        fp = np.asarray(f(x0 + step), dtype=float)
        fm = np.asarray(f(x0 - step), dtype=float)
        cols.append((fp - fm) / (2.0 * h))
    return np.column_stack(cols)
