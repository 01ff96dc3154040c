"""Newton and Levenberg-Marquardt iterations on the FB system, plus the
case-dispatch pipeline for the full cone problem.

All iterations share one engine: evaluate the residual, stop when its
sup-norm is at or below the tolerance, otherwise take a full step from
either the Newton system J d = -F or the damped normal equations
(J^T J + mu I) d = -J^T F.  No line search; a divergence guard aborts runs
whose residual grows a million-fold over the best seen.

The pipeline tries the augmented smooth system first (multi-start), then
the two degenerate branches: u = 0, which reduces to a k-variable orthant
problem in (A, p), and v = 0, an m-variable mixed system.  Every candidate
is accepted only after the independent complementarity checks pass.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .cones import PointZ, comp_pair_check
from .errors import EsoclcpError, SingularMatrix
from .fbsystem import certify_solution, fb_jacobian, fb_residual, psi_fb
from .linalg import as_matrix, as_vector, lu_factor, lu_solve
from .reformulation import (
    AugmentedPoint,
    LcpProblem,
    affine_map,
    case_i_check,
    case_ii_check,
    recover_solution,
)

# Residual growth factor over the running minimum that aborts a run.
DIVERGENCE_FACTOR = 1e6

# Acceptance tolerance for recovered solutions and case checks, and the
# smallest t treated as a genuine nonzero norm in the pipeline.
ACCEPT_TOL = 1e-6
T_MIN = 1e-6


class SolveStatus(str, Enum):
    CONVERGED = "Converged"
    MAX_ITER = "MaxIter"
    SINGULAR_JACOBIAN = "SingularJacobian"
    DIVERGED = "Diverged"


class CaseLabel(str, Enum):
    CASE_I = "CASE_I"
    CASE_II = "CASE_II"
    CASE_VI = "CASE_VI"


@dataclass(frozen=True)
class SolverOptions:
    """Knobs shared by every iteration in the package.

    start may be an AugmentedPoint, the string "default", or None (same as
    "default"): ones for xhat, u = e/sqrt(l) and t = 1, which keeps the
    first iterate away from the t = 0 surface where the equality block
    degenerates.  Random starts are drawn from [0,1]^k x [-1,1]^l x
    [0.5, 1.5] with numpy's seeded generator.
    """

    method: str = "lm"
    residual_tol: float = 1e-7
    mu: float = 0.005
    max_iter: int = 200
    start: AugmentedPoint | str | None = None
    num_random_starts: int = 8
    rng_seed: int = 0

    def __post_init__(self):
        if self.method not in ("newton", "lm"):
            raise ValueError(f"method must be 'newton' or 'lm', got {self.method!r}")
        if not self.residual_tol > 0:
            raise ValueError(f"residual_tol must be positive, got {self.residual_tol}")
        if self.mu < 0:
            raise ValueError(f"mu must be nonnegative, got {self.mu}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be at least 1, got {self.max_iter}")
        if self.num_random_starts < 0:
            raise ValueError(f"num_random_starts must be nonnegative, got {self.num_random_starts}")


@dataclass(frozen=True, eq=False)
class SolveReport:
    """Outcome of one solve.

    point is the final iterate on success and the best-residual iterate
    otherwise.  residual_history holds the sup-norm after each accepted
    step, starting with the initial point, so its length is always
    iterations + 1.  recovered carries z = (x, u) in the original
    variables when the point maps back to a valid solution.
    """

    status: SolveStatus
    point: AugmentedPoint
    residual_norm: float
    iterations: int
    residual_history: list[float] = field(repr=False)
    case_label: CaseLabel = CaseLabel.CASE_VI
    certified: bool = False
    recovered: PointZ | None = None


@dataclass
class _RawSolve:
    status: SolveStatus
    x: np.ndarray
    norm: float
    iterations: int
    history: list[float]


def _iterate(res_fn, jac_fn, x0, opts: SolverOptions) -> _RawSolve:
    """Shared Newton/LM engine over a plain vector of unknowns."""
    x = np.array(x0, dtype=float)
    res = res_fn(x)
    norm = float(np.abs(res).max())
    history = [norm]
    best_x, best_norm, min_norm = x.copy(), norm, norm
    k = 0
    newton = opts.method == "newton"
    while True:
        if norm <= opts.residual_tol:
            return _RawSolve(SolveStatus.CONVERGED, x, norm, k, history)
        if k >= opts.max_iter:
            return _RawSolve(SolveStatus.MAX_ITER, best_x, best_norm, k, history)
        jac = jac_fn(x)
        if newton:
            try:
                d = lu_solve(lu_factor(jac, name="jacobian"), -res)
            except SingularMatrix:
                return _RawSolve(SolveStatus.SINGULAR_JACOBIAN, best_x, best_norm, k, history)
        else:
            normal = jac.T @ jac + opts.mu * np.eye(jac.shape[1])
            d = lu_solve(lu_factor(normal, name="normal matrix"), -(jac.T @ res))
        x = x + d
        res = res_fn(x)
        norm = float(np.abs(res).max()) if np.all(np.isfinite(res)) else np.inf
        if not np.isfinite(norm):
            return _RawSolve(SolveStatus.DIVERGED, best_x, best_norm, k, history)
        k += 1
        history.append(norm)
        if norm < best_norm:
            best_x, best_norm = x.copy(), norm
        min_norm = min(min_norm, norm)
        if norm > DIVERGENCE_FACTOR * min_norm:
            return _RawSolve(SolveStatus.DIVERGED, best_x, best_norm, k, history)


def _resolve_start(opts: SolverOptions, prob: LcpProblem) -> AugmentedPoint:
    if opts.start is None or opts.start == "default":
        k, l = prob.dims.k, prob.dims.l
        return AugmentedPoint(np.ones(k), np.ones(l) / np.sqrt(l), 1.0)
    if isinstance(opts.start, AugmentedPoint):
        if opts.start.dims != prob.dims:
            raise ValueError(f"start dims {opts.start.dims} do not match problem {prob.dims}")
        return opts.start
    raise ValueError(f"unrecognized start preset {opts.start!r}")


def _fb_raw(prob: LcpProblem, start: AugmentedPoint, opts: SolverOptions) -> _RawSolve:
    dims = prob.dims

    def res_fn(arr):
        return fb_residual(prob, AugmentedPoint.from_array(dims, arr))

    def jac_fn(arr):
        return fb_jacobian(prob, AugmentedPoint.from_array(dims, arr))

    return _iterate(res_fn, jac_fn, start.to_array(), opts)


def _fb_report(prob: LcpProblem, opts: SolverOptions) -> SolveReport:
    raw = _fb_raw(prob, _resolve_start(opts, prob), opts)
    point = AugmentedPoint.from_array(prob.dims, raw.x)
    recovered = None
    certified = False
    if raw.status is SolveStatus.CONVERGED:
        try:
            recovered = recover_solution(point, T_MIN)
        except (EsoclcpError, ValueError):
            recovered = None
        certified = certify_solution(prob, point)
    return SolveReport(
        status=raw.status,
        point=point,
        residual_norm=raw.norm,
        iterations=raw.iterations,
        residual_history=raw.history,
        case_label=CaseLabel.CASE_VI,
        certified=certified,
        recovered=recovered,
    )


def newton_solve(prob: LcpProblem, opts: SolverOptions) -> SolveReport:
    """Pure Newton steps on the augmented FB system from opts.start."""
    if opts.method != "newton":
        raise ValueError(f"newton_solve needs method='newton', got {opts.method!r}")
    return _fb_report(prob, opts)


def lm_solve(prob: LcpProblem, opts: SolverOptions) -> SolveReport:
    """Levenberg-Marquardt steps with fixed damping mu on the FB system."""
    if opts.method != "lm":
        raise ValueError(f"lm_solve needs method='lm', got {opts.method!r}")
    if not opts.mu > 0:
        raise ValueError(f"lm_solve needs mu > 0, got {opts.mu}")
    return _fb_report(prob, opts)


def _fb_scalings(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal FB derivative entries for the pairs (a_i, b_i)."""
    rad = np.hypot(a, b)
    degenerate = rad == 0.0
    safe = np.where(degenerate, 1.0, rad)
    slope = 1.0 / np.sqrt(2.0) - 1.0
    d_a = np.where(degenerate, slope, a / safe - 1.0)
    d_b = np.where(degenerate, slope, b / safe - 1.0)
    return d_a, d_b


def _orthant_system(A: np.ndarray, p: np.ndarray):
    def res_fn(x):
        return psi_fb(x, A @ x + p)

    def jac_fn(x):
        d_a, d_b = _fb_scalings(x, A @ x + p)
        return np.diag(d_a) + d_b[:, None] * A

    return res_fn, jac_fn


def _orthant_raw(A: np.ndarray, p: np.ndarray, opts: SolverOptions) -> _RawSolve:
    res_fn, jac_fn = _orthant_system(A, p)
    return _iterate(res_fn, jac_fn, np.ones(A.shape[0]), opts)


def orthant_lcp_solve(A, p, opts: SolverOptions) -> tuple[np.ndarray, SolveStatus]:
    """Solve the plain orthant problem: x >= 0, Ax + p >= 0, x^T(Ax+p) = 0.

    Runs the FB iteration on psi(x_i, (Ax+p)_i) from the all-ones start.
    A must be nonsingular.
    """
    A = as_matrix(A, "A")
    p = as_vector(p, "p")
    if A.shape[0] != A.shape[1] or A.shape[0] != p.shape[0]:
        raise ValueError(f"incompatible shapes A {A.shape}, p {p.shape}")
    lu_factor(A, name="A")
    raw = _orthant_raw(A, p, opts)
    return raw.x, raw.status


def _case_ii_system(prob: LcpProblem):
    """Residual and Jacobian for the v = 0 branch, in the m variables (x, u)."""
    k = prob.dims.k
    A, B, C, D, p, q = prob.A, prob.B, prob.C, prob.D, prob.p, prob.q

    def res_fn(z):
        x, u = z[:k], z[k:]
        return np.concatenate([psi_fb(x, A @ x + B @ u + p), C @ x + D @ u + q])

    def jac_fn(z):
        x, u = z[:k], z[k:]
        d_a, d_b = _fb_scalings(x, A @ x + B @ u + p)
        top = np.hstack([np.diag(d_a) + d_b[:, None] * A, d_b[:, None] * B])
        return np.vstack([top, np.hstack([C, D])])

    return res_fn, jac_fn


def _collect_roots(res_fn, jac_fn, starts, opts: SolverOptions) -> list[_RawSolve]:
    """Run the iteration from each start, keeping distinct converged roots.

    The degenerate branches can have several roots of which only some
    extend to cone solutions, so every distinct one is worth case-checking.
    """
    roots: list[_RawSolve] = []
    for start in starts:
        raw = _iterate(res_fn, jac_fn, start, opts)
        if raw.status is not SolveStatus.CONVERGED:
            continue
        if any(np.abs(raw.x - r.x).max() <= 1e-8 * (1.0 + np.abs(r.x).max()) for r in roots):
            continue
        roots.append(raw)
    return roots


def _verified(prob: LcpProblem, z: PointZ) -> bool:
    return comp_pair_check(z, affine_map(prob, z), ACCEPT_TOL)


def _accept(prob, raw, point, label, recovered) -> SolveReport:
    return SolveReport(
        status=SolveStatus.CONVERGED,
        point=point,
        residual_norm=float(np.abs(fb_residual(prob, point)).max()),
        iterations=raw.iterations,
        residual_history=raw.history,
        case_label=label,
        certified=certify_solution(prob, point),
        recovered=recovered,
    )


def solve_esoclcp(prob: LcpProblem, opts: SolverOptions | None = None) -> SolveReport:
    """Full pipeline over the solution cases, first verified answer wins.

    Order: the augmented smooth system from the default start and
    num_random_starts seeded extra starts (accepted when t is genuinely
    positive and the recovered pair passes the complementarity check), then
    the u = 0 orthant branch, then the v = 0 mixed branch.  When nothing is
    accepted, the report describes the best augmented-system attempt; a run
    that converged to an invalid point (t <= 0 or failed verification) is
    reported as Diverged.
    """
    if opts is None:
        opts = SolverOptions()
    dims = prob.dims
    k, l = dims.k, dims.l

    starts = [_resolve_start(opts, prob)]
    rng = np.random.default_rng(opts.rng_seed)
    for _ in range(opts.num_random_starts):
        xhat = rng.uniform(0.0, 1.0, k)
        u = rng.uniform(-1.0, 1.0, l)
        t = rng.uniform(0.5, 1.5)
        starts.append(AugmentedPoint(xhat, u, t))

    best: _RawSolve | None = None
    for start in starts:
        raw = _fb_raw(prob, start, opts)
        if best is None or raw.norm < best.norm:
            best = raw
        if raw.status is not SolveStatus.CONVERGED:
            continue
        point = AugmentedPoint.from_array(dims, raw.x)
        if not point.t > T_MIN:
            continue
        try:
            z = recover_solution(point, ACCEPT_TOL)
        except (EsoclcpError, ValueError):
            continue
        if _verified(prob, z):
            return _accept(prob, raw, point, CaseLabel.CASE_VI, z)

    res_fn, jac_fn = _orthant_system(prob.A, prob.p)
    rng = np.random.default_rng(opts.rng_seed)
    ostarts = [np.ones(k)] + [rng.uniform(0.0, 1.0, k) for _ in range(opts.num_random_starts)]
    for raw in _collect_roots(res_fn, jac_fn, ostarts, opts):
        x = raw.x
        z = PointZ(x, np.zeros(l))
        if case_i_check(prob, x, ACCEPT_TOL) and _verified(prob, z):
            point = AugmentedPoint(x, np.zeros(l), 0.0)
            report = _accept(prob, raw, point, CaseLabel.CASE_I, z)
            if report.residual_norm <= opts.residual_tol:
                return report

    res_fn, jac_fn = _case_ii_system(prob)
    rng = np.random.default_rng(opts.rng_seed)
    iistarts = [np.concatenate([np.ones(k), np.ones(l) / np.sqrt(l)])]
    for _ in range(opts.num_random_starts):
        iistarts.append(np.concatenate([rng.uniform(0.0, 1.0, k), rng.uniform(-1.0, 1.0, l)]))
    for raw in _collect_roots(res_fn, jac_fn, iistarts, opts):
        x, u = raw.x[:k], raw.x[k:]
        z = PointZ(x, u)
        if case_ii_check(prob, z, ACCEPT_TOL) and _verified(prob, z):
            t = float(np.linalg.norm(u))
            point = AugmentedPoint(x - t, u, t)
            report = _accept(prob, raw, point, CaseLabel.CASE_II, z)
            if report.residual_norm <= opts.residual_tol:
                return report

    status = best.status
    if status is SolveStatus.CONVERGED:
        status = SolveStatus.DIVERGED
    return SolveReport(
        status=status,
        point=AugmentedPoint.from_array(dims, best.x),
        residual_norm=best.norm,
        iterations=best.iterations,
        residual_history=best.history,
        case_label=CaseLabel.CASE_VI,
        certified=False,
        recovered=None,
    )
