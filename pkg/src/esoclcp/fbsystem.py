"""Fischer-Burmeister equation system for the augmented problem.

The complementarity conditions between xhat and the orthant residual are
folded into the smooth-away-from-zero function psi(a, b) = sqrt(a^2 + b^2)
- (a + b), which vanishes exactly on the complementary pairs.  Stacking
psi over the k orthant pairs followed by the equality residual gives a
square system of size m + 1 whose zeros are the augmented solutions; the
solvers drive its residual, and the certification helpers inspect its
Jacobian structure at candidate points.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.optimize import linprog

from .errors import DimensionMismatch, SingularMatrix, TooLarge
from .linalg import as_matrix, as_vector, lu_factor, schur_complement
from .reformulation import AugmentedPoint, LcpProblem, f_comp, f_eq, jacobian_blocks

# Subgradient element selected at exactly degenerate pairs (a, b) = (0, 0).
DEGENERATE_SLOPE = 1.0 / np.sqrt(2.0) - 1.0


def _check_dims(prob: LcpProblem, w: AugmentedPoint):
    if w.dims != prob.dims:
        raise DimensionMismatch(f"point dims {w.dims} do not match problem dims {prob.dims}")


def psi_fb(a, b):
    """sqrt(a^2 + b^2) - (a + b), elementwise; zero iff a, b >= 0 and ab = 0."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    out = np.hypot(a, b) - (a + b)
    return float(out) if out.ndim == 0 else out


def fb_residual(prob: LcpProblem, w: AugmentedPoint) -> np.ndarray:
    """Stacked residual: psi over the (xhat_i, f_comp_i) pairs, then f_eq."""
    _check_dims(prob, w)
    return np.concatenate([psi_fb(w.xhat, f_comp(prob, w)), f_eq(prob, w)])


def fb_jacobian(prob: LcpProblem, w: AugmentedPoint) -> np.ndarray:
    """Jacobian of fb_residual, row i holding the differential of entry i.

    The psi rows carry the diagonal scalings d_a = a/rad - 1 and
    d_b = b/rad - 1 with rad = sqrt(a^2 + b^2); at an exactly degenerate
    pair both scalings are fixed to 1/sqrt(2) - 1 so runs stay
    reproducible.
    """
    _check_dims(prob, w)
    y = f_comp(prob, w)
    rad = np.hypot(w.xhat, y)
    degenerate = rad == 0.0
    safe = np.where(degenerate, 1.0, rad)
    d_a = np.where(degenerate, DEGENERATE_SLOPE, w.xhat / safe - 1.0)
    d_b = np.where(degenerate, DEGENERATE_SLOPE, y / safe - 1.0)

    blocks = jacobian_blocks(prob, w)
    top_left = np.diag(d_a) + d_b[:, None] * blocks.comp_x
    top_right = d_b[:, None] * blocks.comp_ut
    return np.block([[top_left, top_right], [blocks.eq_x, blocks.eq_ut]])


def merit(prob: LcpProblem, w: AugmentedPoint) -> float:
    """Half the squared residual norm."""
    res = fb_residual(prob, w)
    return 0.5 * float(res @ res)


def grad_merit(prob: LcpProblem, w: AugmentedPoint) -> np.ndarray:
    """Gradient of merit: jacobian transposed times residual."""
    return fb_jacobian(prob, w).T @ fb_residual(prob, w)


@dataclass(frozen=True, eq=False)
class FbSystemEval:
    """Residual, Jacobian and merit data at one point, evaluated together."""

    residual: np.ndarray
    jacobian: np.ndarray
    merit: float
    grad_merit: np.ndarray


def fb_eval(prob: LcpProblem, w: AugmentedPoint) -> FbSystemEval:
    res = fb_residual(prob, w)
    jac = fb_jacobian(prob, w)
    return FbSystemEval(res, jac, 0.5 * float(res @ res), jac.T @ res)


@dataclass(frozen=True)
class IndexSets:
    """Partition of the orthant indices by how the pair (xhat_i, f1_i) sits.

    comp holds the indices complementary within eps; res is its complement,
    split into pos (both entries above eps) and neg (the rest).  Indices
    are 0-based.
    """

    comp: frozenset
    res: frozenset
    pos: frozenset
    neg: frozenset


def index_sets(xhat, f1, eps: float = 1e-6) -> IndexSets:
    """Classify each orthant pair; see IndexSets for the rules."""
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")
    xhat = as_vector(xhat, "xhat")
    f1 = as_vector(f1, "f1")
    if xhat.shape != f1.shape:
        raise DimensionMismatch(f"xhat has length {xhat.shape[0]}, f1 has {f1.shape[0]}")
    is_comp = (xhat >= -eps) & (f1 >= -eps) & (np.abs(xhat * f1) <= eps)
    is_pos = ~is_comp & (xhat > eps) & (f1 > eps)
    idx = np.arange(xhat.shape[0])
    comp = frozenset(idx[is_comp].tolist())
    res = frozenset(idx[~is_comp].tolist())
    pos = frozenset(idx[is_pos].tolist())
    return IndexSets(comp, res, pos, res - pos)


def s0_check(m) -> bool:
    """Is there x >= 0, x != 0 with m x >= 0?  Decided by linear feasibility.

    The homogeneous cone is normalized by e^T x = 1, so the test is a small
    linear program with no objective.  Matrices above order 20 are refused.
    """
    m = as_matrix(m, "m")
    n = m.shape[0]
    if m.shape[1] != n:
        raise ValueError(f"m must be square, got {m.shape}")
    if n > 20:
        raise TooLarge(f"s0_check handles order <= 20, got {n}")
    result = linprog(
        c=np.zeros(n),
        A_ub=-m,
        b_ub=np.zeros(n),
        A_eq=np.ones((1, n)),
        b_eq=np.array([1.0]),
        bounds=[(0.0, None)] * n,
        method="highs",
    )
    return bool(result.status == 0)


def stationarity_check(prob: LcpProblem, w: AugmentedPoint, tol: float = 1e-3) -> bool:
    """Is grad_merit zero up to tol, relative to 1 + the residual norm?"""
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    ev = fb_eval(prob, w)
    return float(np.abs(ev.grad_merit).max()) <= tol * (1.0 + float(np.linalg.norm(ev.residual)))


class RegularityKind(str, Enum):
    REGULAR = "Regular"
    INDETERMINATE = "Indeterminate"
    IRREGULAR_WITNESS = "IrregularWitness"


@dataclass(frozen=True, eq=False)
class RegularityVerdict:
    """Outcome of the FB-regularity test at a point.

    Regular is only issued in the decidable case: A nonsingular and no
    residual indices, where the sign-pattern condition quantifies over an
    empty set.  IrregularWitness carries a null vector of A.  Indeterminate
    carries the free-block Schur complement restricted to the residual
    indices plus an advisory S0 flag for it, leaving judgement to the
    caller.
    """

    kind: RegularityKind
    reason: str
    index_sets: IndexSets | None = None
    witness: np.ndarray | None = None
    schur_free: np.ndarray | None = None
    s0_advisory: bool | None = None


def fb_regularity_check(
    prob: LcpProblem, w: AugmentedPoint, eps: float = 1e-6, tol: float = 1e-3
) -> RegularityVerdict:
    """Certify regularity of the merit function at w where that is decidable.

    eps drives the index-set classification.  tol is accepted so callers
    can thread one (eps, tol) pair through certification; the implemented
    branches consult only eps.  Raises SingularMatrix if the equality-block
    Jacobian cannot be eliminated in the Indeterminate branch.
    """
    _check_dims(prob, w)
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")
    try:
        prob.lu_A
    except SingularMatrix:
        # Unit null vector of A witnesses the failure.
        witness = np.linalg.svd(prob.A)[2][-1]
        return RegularityVerdict(
            RegularityKind.IRREGULAR_WITNESS,
            "orthant block A is singular",
            witness=witness,
        )

    sets = index_sets(w.xhat, f_comp(prob, w), eps)
    if not sets.res:
        return RegularityVerdict(
            RegularityKind.REGULAR,
            "no residual indices: the sign-pattern condition is vacuous",
            index_sets=sets,
        )

    blocks = jacobian_blocks(prob, w)
    stacked = np.block(
        [[blocks.eq_ut, blocks.eq_x], [blocks.comp_ut, blocks.comp_x]]
    )
    free = schur_complement(stacked, prob.dims.l + 1, name="eq_ut")
    idx = sorted(sets.res)
    restricted = free[np.ix_(idx, idx)]
    try:
        advisory = s0_check(restricted)
    except TooLarge:
        advisory = None
    return RegularityVerdict(
        RegularityKind.INDETERMINATE,
        "residual indices present: certificate undecided, see schur_free",
        index_sets=sets,
        schur_free=restricted,
        s0_advisory=advisory,
    )


def certify_solution(
    prob: LcpProblem, w: AugmentedPoint, eps: float = 1e-6, tol: float = 1e-3
) -> bool:
    """True iff w is stationary for the merit and certified Regular.

    Never raises: a point where the regularity test itself breaks down
    (singular equality block in the Indeterminate branch) is simply not
    certified.
    """
    if not stationarity_check(prob, w, tol):
        return False
    try:
        verdict = fb_regularity_check(prob, w, eps, tol)
    except SingularMatrix:
        return False
    return verdict.kind is RegularityKind.REGULAR
