"""Small dense standard-form SDP solver plus duality checks.

Primal:  min C . X   s.t.  A_i . X = b_i,  X PSD
Dual:    max b^T y   s.t.  S = C - sum_i y_i A_i,  S PSD

The solver is an infeasible-start primal-dual path-following method with the
symmetrized XS linearization and a Mehrotra predictor-corrector step, solving
the dense m x m Schur complement each iteration. It is deterministic and
degrades gracefully (best-iterate return) on problems whose feasible set has
an empty interior.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .linalg import (
    DEFAULT_RANK_TAU,
    min_eigenvalue,
    numerical_rank,
    require_symmetric,
    symmetrize,
)

OPTIMAL = "optimal"
MAX_ITERATIONS = "max-iterations"
NUMERICAL_FAILURE = "numerical-failure"

DEFAULT_TOL = 1e-8
DEFAULT_MAX_ITER = 200
_GAMMA_FLOOR = 0.9  # fraction to the cone boundary; adapts up to 0.99


@dataclass(frozen=True)
class SdpProblem:
    """Standard-form instance: dim, objective C, constraints (A_i, b_i)."""

    dim: int
    objective: np.ndarray
    constraints: tuple

    def __post_init__(self):
        require_symmetric(self.objective)
        if self.objective.shape != (self.dim, self.dim):
            raise ValueError("objective dimension mismatch")
        if not self.constraints:
            raise ValueError("at least one constraint required")
        for a, _ in self.constraints:
            require_symmetric(a)
            if a.shape != (self.dim, self.dim):
                raise ValueError("constraint dimension mismatch")

    @classmethod
    def build(cls, dim, objective, constraints) -> "SdpProblem":
        cons = tuple((np.asarray(a, dtype=float), float(bi)) for a, bi in constraints)
        return cls(dim, np.asarray(objective, dtype=float), cons)

    @property
    def m(self) -> int:
        return len(self.constraints)

    def stacked(self):
        """(A, b) with A of shape (m, dim, dim)."""
        a = np.stack([ai for ai, _ in self.constraints])
        b = np.array([bi for _, bi in self.constraints])
        return a, b


@dataclass(frozen=True)
class SdpResiduals:
    primal_inf: float  # ||A(X) - b||_inf
    dual_inf: float  # ||S - C + sum y_i A_i||_max
    duality_gap: float  # |C.X - b^T y|
    xs_inner: float  # X . S
    min_eig_x: float
    min_eig_s: float


@dataclass(frozen=True)
class SdpSolution:
    X: np.ndarray
    y: np.ndarray
    S: np.ndarray
    primal_obj: float
    dual_obj: float
    residuals: SdpResiduals
    status: str
    iterations: int

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


def _inner(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.sum(a * b))


def _max_step(p: np.ndarray, dp: np.ndarray) -> float:
    """Largest alpha with p + alpha*dp still PSD (p assumed PD)."""
    w, q = np.linalg.eigh(p)
    w = np.clip(w, w[-1] * 1e-14 if w[-1] > 0 else 1e-300, None)
    inv_half = q / np.sqrt(w)
    z = inv_half.T @ dp @ inv_half
    lam = float(np.linalg.eigvalsh(symmetrize(z))[0])
    if lam >= -1e-13:
        return np.inf
    return -1.0 / lam


def _inv_psd(s: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.inv(s)
    except np.linalg.LinAlgError:
        jitter = 1e-14 * (1.0 + float(np.trace(s)) / s.shape[0])
        return np.linalg.inv(s + jitter * np.eye(s.shape[0]))


class _Factor:
    """Factor a symmetric positive definite system once; solve with refinement.

    Two steps of iterative refinement recover most of the accuracy lost to the
    Schur complement's growing condition number near convergence.
    """

    def __init__(self, mat: np.ndarray):
        self.mat = mat
        self._cho = None
        self._lu = None
        try:
            self._cho = sla.cho_factor(mat, lower=True, check_finite=False)
        except np.linalg.LinAlgError:
            jitter = 1e-12 * (1.0 + float(np.trace(mat)) / mat.shape[0])
            self._lu = sla.lu_factor(mat + jitter * np.eye(mat.shape[0]),
                                     check_finite=False)

    def _apply(self, h: np.ndarray) -> np.ndarray:
        if self._cho is not None:
            return sla.cho_solve(self._cho, h, check_finite=False)
        return sla.lu_solve(self._lu, h, check_finite=False)

    def solve(self, h: np.ndarray, refine: int = 2) -> np.ndarray:
        x = self._apply(h)
        for _ in range(refine):
            if not np.all(np.isfinite(x)):
                break
            x = x + self._apply(h - self.mat @ x)
        return x


def solve(problem: SdpProblem, tol: float = DEFAULT_TOL,
          max_iter: int = DEFAULT_MAX_ITER) -> SdpSolution:
    """Solve the SDP; status is optimal, max-iterations, or numerical-failure.

    Optimal means relative primal/dual residuals and duality gap are all below
    tol. Non-optimal statuses return the best iterate seen, with residuals.
    """
    ell = problem.dim
    a_stack, b = problem.stacked()
    m = problem.m
    a_flat = a_stack.reshape(m, ell * ell)
    c = problem.objective
    c_norm = float(np.max(np.abs(c))) if c.size else 0.0
    b_norm = float(np.max(np.abs(b))) if m else 0.0
    res_scale = 1.0 + b_norm + c_norm

    eye = np.eye(ell)
    eta = res_scale
    x = eta * eye.copy()
    s = eta * eye.copy()
    y = np.zeros(m)

    # Constant Gram matrix of the constraints, used to lift each dX back onto
    # A(dX) = rp exactly; this is what keeps primal feasibility from eroding
    # once the Schur complement turns ill-conditioned near the optimum.
    gram = _Factor(a_flat @ a_flat.T)

    best = None
    best_merit = np.inf
    status = MAX_ITERATIONS
    iterations = 0
    small_steps = 0
    diverging = 0
    gamma = _GAMMA_FLOOR
    # Once the optimality criteria hold, run a few bonus iterations and keep
    # the passing iterate with the smallest X.S: stopping at first contact
    # leaves complementary pairs only half-resolved, which blurs rank counts.
    candidate = None
    candidate_xs = np.inf
    extras = 0

    def measure(x, y, s):
        rp = b - a_flat @ x.ravel()
        rd = c - s - np.tensordot(y, a_stack, axes=(0, 0))
        pobj = _inner(c, x)
        dobj = float(b @ y)
        rel_p = float(np.max(np.abs(rp))) / res_scale if m else 0.0
        rel_d = float(np.max(np.abs(rd))) / res_scale
        rel_gap = abs(pobj - dobj) / (1.0 + abs(pobj))
        return rp, rd, pobj, dobj, rel_p, rel_d, rel_gap

    center_next = False

    for it in range(1, max_iter + 1):
        rp, rd, pobj, dobj, rel_p, rel_d, rel_gap = measure(x, y, s)
        merit = max(rel_p, rel_d, rel_gap)
        if merit < best_merit:
            best_merit = merit
            best = (x.copy(), y.copy(), s.copy())
        if rel_p <= tol and rel_d <= tol and rel_gap <= tol:
            xs_now = _inner(x, s)
            if xs_now < candidate_xs:
                candidate = (x.copy(), y.copy(), s.copy())
                candidate_xs = xs_now
        if candidate is not None:
            extras += 1
            if extras >= 5:
                break
        drifting = best_merit < 1e-4 and merit > 100.0 * best_merit
        diverging = diverging + 1 if drifting else 0
        if diverging >= 8:
            break  # drifting on roundoff noise; keep the best iterate
        iterations = it

        s_inv = _inv_psd(s)
        if not np.all(np.isfinite(s_inv)):
            status = NUMERICAL_FAILURE
            break
        t_stack = x @ a_stack @ s_inv  # broadcast over constraints
        m_mat = a_flat @ t_stack.reshape(m, ell * ell).T
        schur = _Factor((m_mat + m_mat.T) / 2.0)

        xs = x @ s
        mu = _inner(x, s) / ell

        def direction(rc):
            g = (rc - x @ rd) @ s_inv
            dy = schur.solve(rp - a_flat @ g.ravel())
            ds = symmetrize(rd - np.tensordot(dy, a_stack, axes=(0, 0)))
            dx = symmetrize((rc - x @ ds) @ s_inv)
            lam = gram.solve(rp - a_flat @ dx.ravel())
            dx = symmetrize(dx + np.tensordot(lam, a_stack, axes=(0, 0)))
            return dx, dy, ds

        if center_next:
            # pure centering step to recover step length after a near-stall
            dx, dy, ds = direction(mu * eye - xs)
            center_next = False
        else:
            dx_a, dy_a, ds_a = direction(-xs)
            if not (np.all(np.isfinite(dx_a)) and np.all(np.isfinite(ds_a))):
                status = NUMERICAL_FAILURE
                break
            ap_a = min(1.0, gamma * _max_step(x, dx_a))
            ad_a = min(1.0, gamma * _max_step(s, ds_a))
            mu_aff = _inner(x + ap_a * dx_a, s + ad_a * ds_a) / ell
            sigma = min(1.0, max(mu_aff / mu, 0.0) ** 3) if mu > 0 else 0.1
            rc = sigma * mu * eye - xs - dx_a @ ds_a
            dx, dy, ds = direction(rc)
        if not (np.all(np.isfinite(dx)) and np.all(np.isfinite(ds))):
            status = NUMERICAL_FAILURE
            break
        alpha_p = min(1.0, gamma * _max_step(x, dx))
        alpha_d = min(1.0, gamma * _max_step(s, ds))

        x = symmetrize(x + alpha_p * dx)
        s = symmetrize(s + alpha_d * ds)
        y = y + alpha_d * dy
        gamma = _GAMMA_FLOOR + 0.09 * min(alpha_p, alpha_d)
        center_next = min(alpha_p, alpha_d) < 0.05

        if max(alpha_p, alpha_d) < 1e-8:
            small_steps += 1
            if small_steps >= 5:  # stalled; stop rather than diverge
                break
        else:
            small_steps = 0

    if candidate is not None:
        x, y, s = candidate
        status = OPTIMAL
    elif status != OPTIMAL and best is not None:
        x, y, s = best

    rp, rd, pobj, dobj, *_ = measure(x, y, s)
    residuals = SdpResiduals(
        primal_inf=float(np.max(np.abs(rp))) if m else 0.0,
        dual_inf=float(np.max(np.abs(rd))),
        duality_gap=abs(pobj - dobj),
        xs_inner=_inner(x, s),
        min_eig_x=min_eigenvalue(x),
        min_eig_s=min_eigenvalue(s),
    )
    return SdpSolution(x, y, s, pobj, dobj, residuals, status, iterations)


@dataclass(frozen=True)
class ComplementarityReport:
    product_norm: float  # ||X S||_max
    rank_x: int
    rank_s: int
    dim: int
    verdict: bool

    @property
    def rank_sum(self) -> int:
        return self.rank_x + self.rank_s


def check_complementarity(x: np.ndarray, s: np.ndarray, tol: float,
                          tau: float = DEFAULT_RANK_TAU) -> ComplementarityReport:
    """Verify XS ~ 0 and rank(X) + rank(S) <= dim at the given thresholds."""
    x = require_symmetric(x)
    s = require_symmetric(s)
    if x.shape != s.shape:
        raise ValueError("dimension mismatch between X and S")
    product_norm = float(np.max(np.abs(x @ s)))
    rank_x = numerical_rank(x, tau)
    rank_s = numerical_rank(s, tau)
    verdict = (rank_x + rank_s <= x.shape[0]) and (product_norm <= tol)
    return ComplementarityReport(product_norm, rank_x, rank_s, x.shape[0], verdict)


@dataclass(frozen=True)
class DualFeasibility:
    S: np.ndarray
    psd: bool
    dual_obj: float
    min_eig: float


def verify_feasible_dual(problem: SdpProblem, y, psd_eps: float = 1e-9) -> DualFeasibility:
    """Reconstruct S = C - sum y_i A_i, test PSD, and report b^T y."""
    y = np.asarray(y, dtype=float)
    if y.shape != (problem.m,):
        raise ValueError(f"expected {problem.m} dual values, got {y.shape}")
    a_stack, b = problem.stacked()
    s = symmetrize(problem.objective - np.tensordot(y, a_stack, axes=(0, 0)))
    lam = min_eigenvalue(s)
    slack = psd_eps * (1.0 + abs(lam) + float(np.max(np.abs(s))))
    return DualFeasibility(s, lam >= -slack, float(b @ y), lam)


# Debug dump format: "dim m", objective matrix rows, then b_i followed by A_i
# rows for each constraint.

def format_problem(p: SdpProblem) -> str:
    def rows(mat):
        return [" ".join(repr(float(v)) for v in row) for row in mat]

    lines = [f"{p.dim} {p.m}"]
    lines += rows(p.objective)
    for a, bi in p.constraints:
        lines.append(repr(float(bi)))
        lines += rows(a)
    return "\n".join(lines) + "\n"


def parse_problem(text: str) -> SdpProblem:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty problem text")
    dim, m = (int(v) for v in lines[0].split())
    take = iter(lines[1:])

    def matrix():
        return np.array([[float(v) for v in next(take).split()] for _ in range(dim)])

    objective = matrix()
    constraints = []
    for _ in range(m):
        bi = float(next(take))
        constraints.append((matrix(), bi))
    return SdpProblem.build(dim, objective, constraints)
