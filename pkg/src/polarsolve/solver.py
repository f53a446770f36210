"""Equilibrium computation.

Two entry points:

* :func:`solve_symmetric` — the 1-D problem on the symmetry locus
  mu_v = w(1-2*mu_i).  The symmetric first-order condition is strictly
  decreasing on [0, 1/2] with a guaranteed sign change (positive at 0,
  exactly -1/2 at 1/2), so plain bisection cannot fail; two Newton
  polish steps push the residual to machine level.

* :func:`solve_asymmetric` — damped alternating best responses for
  general parameters, finished with a short 2-D Newton polish on the
  analytic first-order conditions.  Convergence of the iteration is an
  empirical matter and non-convergence is a first-class reported
  outcome (:class:`~polarsolve.errors.ConvergenceError` with the full
  iterate trace), never a silent truncation.

Every result carries its own certificate: FOC residuals, second-order
condition values, and — when sigma_v sits below the unimodality bound —
agreement with the brute-force grid oracle.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Literal

from .calculus import (
    d2_euL_d_pL2,
    d2_euR_d_pR2,
    d_euL_d_pL,
    d_euR_d_pR,
    foc_symmetric,
    foc_symmetric_derivative,
)
from .errors import (
    ConvergenceError,
    InvalidParamsError,
    SinglePeakednessWarning,
    SpanTooSmallError,
    SymmetryLocusError,
    UnboundedResponseError,
)
from .model import (
    ModelParams,
    PlatformPair,
    expected_utility_L,
    expected_utility_R,
    win_probability_L,
)
from .oracle import grid_best_response

__all__ = [
    "SolverConfig",
    "EquilibriumResult",
    "symmetric_foc_root",
    "solve_symmetric",
    "best_response",
    "solve_asymmetric",
    "find_equilibria",
    "LOCUS_TOL",
]

#: How exactly mu_v must equal w(1-2*mu_i) for the symmetric solver.
LOCUS_TOL = 1e-12

# Maximal extent of the adaptively doubled best-response bracket.
_BRACKET_CAP_LO = -8.0
_BRACKET_CAP_HI = 9.0

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0  # golden ratio conjugate


@dataclass(frozen=True, slots=True)
class SolverConfig:
    """Tunables for both solvers; the defaults satisfy every tolerance
    used by the verification suite."""

    tol_root: float = 1e-12       # bisection interval / FOC target
    tol_fp: float = 1e-10         # fixed-point platform-change tolerance
    max_iter: int = 500           # best-response iteration budget
    damping: float = 0.5          # step fraction toward the best response
    bracket_lo: float = -0.5      # initial best-response search interval
    bracket_hi: float = 1.5

    def __post_init__(self) -> None:
        if not (self.tol_root > 0.0 and self.tol_fp > 0.0):
            raise InvalidParamsError("solver tolerances must be positive")
        if not 0.0 < self.damping <= 1.0:
            raise InvalidParamsError(f"damping must be in (0, 1], got {self.damping}")
        if not self.bracket_lo < self.bracket_hi:
            raise InvalidParamsError(
                f"bracket_lo must be below bracket_hi, got "
                f"[{self.bracket_lo}, {self.bracket_hi}]"
            )
        if self.max_iter < 1:
            raise InvalidParamsError(f"max_iter must be >= 1, got {self.max_iter}")


@dataclass(frozen=True, slots=True)
class EquilibriumResult:
    """A solved profile plus its certificate."""

    platforms: PlatformPair
    pr_L: float
    foc_residual_L: float
    foc_residual_R: float
    soc_L: float
    soc_R: float
    iterations: int
    certified: bool
    kind: Literal["symmetric", "asymmetric"]

    @property
    def delta(self) -> float:
        """Platform polarization |p_R - p_L|."""
        return self.platforms.delta


def _warn_single_peakedness(params: ModelParams) -> None:
    warnings.warn(
        f"sigma_v={params.sigma_v:g} is below the unimodality bound "
        f"sqrt(32/3125)~0.10119; single-peakedness is not guaranteed, "
        f"best-response search uses a global grid pre-scan and results are "
        f"certified against the grid oracle",
        SinglePeakednessWarning,
        stacklevel=3,
    )


def _grid_certified(pp: PlatformPair, params: ModelParams) -> bool:
    """Below the unimodality bound: confirm each platform is the global
    argmax on the 1e-4 oracle grid (to one grid-cell slack each side)."""
    try:
        g_l = grid_best_response(pp.p_R, "L", params, grid_step=1e-4)
        g_r = grid_best_response(pp.p_L, "R", params, grid_step=1e-4)
    except SpanTooSmallError:
        return False
    return abs(g_l - pp.p_L) <= 1e-3 and abs(g_r - pp.p_R) <= 1e-3


def _certificate(
    pp: PlatformPair, params: ModelParams, cfg: SolverConfig, iterations: int,
    kind: Literal["symmetric", "asymmetric"],
) -> EquilibriumResult:
    f_l = d_euL_d_pL(pp, params)
    f_r = d_euR_d_pR(pp, params)
    s_l = d2_euL_d_pL2(pp, params)
    s_r = d2_euR_d_pR2(pp, params)
    certified = max(abs(f_l), abs(f_r)) < cfg.tol_fp and s_l < 0.0 and s_r < 0.0
    if certified and not params.single_peaked_guaranteed:
        certified = _grid_certified(pp, params)
    return EquilibriumResult(
        platforms=pp,
        pr_L=win_probability_L(pp, params),
        foc_residual_L=f_l,
        foc_residual_R=f_r,
        soc_L=s_l,
        soc_R=s_r,
        iterations=iterations,
        certified=certified,
        kind=kind,
    )


def symmetric_foc_root(
    params: ModelParams, cfg: SolverConfig | None = None
) -> tuple[float, int]:
    """Unique root of the symmetric FOC on [0, 1/2] and the iteration count.

    Bisection cannot fail here: the FOC is strictly decreasing with
    foc(0) > 0 > foc(1/2) = -1/2, so the bracket never degenerates.
    Meaningful for any valid params (the FOC does not involve mu_i or
    mu_v); whether the profile is an equilibrium is a separate question
    answered by :func:`solve_symmetric`.
    """
    cfg = cfg or SolverConfig()
    lo, hi = 0.0, 0.5
    iterations = 0
    while hi - lo > cfg.tol_root:
        mid = 0.5 * (lo + hi)
        iterations += 1
        if foc_symmetric(mid, params) > 0.0:
            lo = mid
        else:
            hi = mid
    p = 0.5 * (lo + hi)
    for _ in range(2):  # Newton polish to machine-level residual
        p -= foc_symmetric(p, params) / foc_symmetric_derivative(p, params)
        p = min(max(p, 0.0), 0.5)
        iterations += 1
    return p, iterations


def solve_symmetric(params: ModelParams, cfg: SolverConfig | None = None) -> EquilibriumResult:
    """Unique symmetric equilibrium p_R* = 1 - p_L* on the symmetry locus.

    Raises :class:`SymmetryLocusError` when mu_v != w(1-2*mu_i) (within
    ``LOCUS_TOL``); off the locus no symmetric equilibrium exists and
    :func:`solve_asymmetric` is the right call.
    """
    cfg = cfg or SolverConfig()
    locus_gap = params.mu_v - params.w * (1.0 - 2.0 * params.mu_i)
    if abs(locus_gap) > LOCUS_TOL:
        raise SymmetryLocusError(
            f"mu_v={params.mu_v:g} is off the symmetry locus "
            f"w(1-2*mu_i)={params.w * (1.0 - 2.0 * params.mu_i):g} "
            f"(gap {locus_gap:.3e}); use solve_asymmetric"
        )
    if not params.single_peaked_guaranteed:
        _warn_single_peakedness(params)
    p, iterations = symmetric_foc_root(params, cfg)
    return _certificate(PlatformPair(p, 1.0 - p), params, cfg, iterations, "symmetric")


def _golden_max(f: Callable[[float], float], lo: float, hi: float, xtol: float) -> float:
    """Golden-section maximization of a unimodal f on [lo, hi]."""
    c = hi - _INVPHI * (hi - lo)
    d = lo + _INVPHI * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > xtol:
        if fc > fd:
            hi, d, fd = d, c, fc
            c = hi - _INVPHI * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _INVPHI * (hi - lo)
            fd = f(d)
    return 0.5 * (lo + hi)


def best_response(
    opponent_policy: float,
    party: Literal["L", "R"],
    params: ModelParams,
    cfg: SolverConfig | None = None,
) -> float:
    """Maximizer of the party's expected utility against a fixed opponent.

    Golden-section search over the configured bracket (the objective is
    unimodal for sigma_v above the bound; below it a global 1e-4-grid
    pre-scan locates the basin first), then Newton steps on the analytic
    FOC.  If the maximizer presses against the bracket edge the bracket
    doubles, up to [-8, 9]; hitting that cap raises
    :class:`UnboundedResponseError`.
    """
    cfg = cfg or SolverConfig()
    if party == "L":
        objective = lambda x: expected_utility_L(PlatformPair(x, opponent_policy), params)
        foc = lambda x: d_euL_d_pL(PlatformPair(x, opponent_policy), params)
        soc = lambda x: d2_euL_d_pL2(PlatformPair(x, opponent_policy), params)
    elif party == "R":
        objective = lambda x: expected_utility_R(PlatformPair(opponent_policy, x), params)
        foc = lambda x: d_euR_d_pR(PlatformPair(opponent_policy, x), params)
        soc = lambda x: d2_euR_d_pR2(PlatformPair(opponent_policy, x), params)
    else:
        raise ValueError(f"party must be 'L' or 'R', got {party!r}")

    lo, hi = cfg.bracket_lo, cfg.bracket_hi
    xtol = 1e-9
    while True:
        if params.single_peaked_guaranteed:
            x = _golden_max(objective, lo, hi, xtol)
            at_edge = (x - lo) < 2.0 * xtol or (hi - x) < 2.0 * xtol
        else:
            try:
                seed = grid_best_response(
                    opponent_policy, party, params, grid_step=1e-4, span=(lo, hi)
                )
            except SpanTooSmallError:
                at_edge = True
            else:
                x = _golden_max(objective, seed - 1e-4, seed + 1e-4, xtol)
                at_edge = False
        if not at_edge:
            break
        width = hi - lo
        new_lo = max(lo - 0.5 * width, _BRACKET_CAP_LO)
        new_hi = min(hi + 0.5 * width, _BRACKET_CAP_HI)
        if (new_lo, new_hi) == (lo, hi):
            raise UnboundedResponseError(
                f"best response of party {party} to {opponent_policy:g} sits on "
                f"the maximally expanded bracket [{lo}, {hi}]"
            )
        lo, hi = new_lo, new_hi

    for _ in range(4):
        g = foc(x)
        if abs(g) <= cfg.tol_root:
            break
        h = soc(x)
        if not h < 0.0:
            break
        x = min(max(x - g / h, lo), hi)
    return x


def solve_asymmetric(
    params: ModelParams,
    cfg: SolverConfig | None = None,
    start: tuple[float, float] = (0.25, 0.75),
) -> EquilibriumResult:
    """Fixed point of damped alternating best responses, Newton-polished.

    Updates are Gauss-Seidel with step ``cfg.damping`` toward the
    current best response.  A persistent period-2 cycle raises
    :class:`ConvergenceError` suggesting a lower damping; so does an
    exhausted iteration budget.  The raised error carries the iterate
    trace.
    """
    cfg = cfg or SolverConfig()
    if not params.single_peaked_guaranteed:
        _warn_single_peakedness(params)
    with warnings.catch_warnings():
        # best_response would re-warn on every inner call
        warnings.simplefilter("ignore", SinglePeakednessWarning)
        p_l, p_r = start
        trace: list[tuple[float, float]] = [(p_l, p_r)]
        lam = cfg.damping
        converged = 0
        for iteration in range(1, cfg.max_iter + 1):
            p_l_new = (1.0 - lam) * p_l + lam * best_response(p_r, "L", params, cfg)
            p_r_new = (1.0 - lam) * p_r + lam * best_response(p_l_new, "R", params, cfg)
            change = max(abs(p_l_new - p_l), abs(p_r_new - p_r))
            p_l, p_r = p_l_new, p_r_new
            trace.append((p_l, p_r))
            if change < cfg.tol_fp:
                converged = iteration
                break
            if len(trace) >= 3 and change > 10.0 * cfg.tol_fp:
                back = trace[-3]
                if max(abs(p_l - back[0]), abs(p_r - back[1])) < cfg.tol_fp:
                    raise ConvergenceError(
                        f"period-2 oscillation after {iteration} iterations "
                        f"(amplitude {change:.3e}); lower cfg.damping",
                        trace,
                    )
        if not converged:
            raise ConvergenceError(
                f"no best-response fixed point within {cfg.max_iter} iterations "
                f"(last change {change:.3e})",
                trace,
            )
        p_l, p_r = _newton_polish(p_l, p_r, params)
    return _certificate(PlatformPair(p_l, p_r), params, cfg, converged, "asymmetric")


def _newton_polish(p_l: float, p_r: float, params: ModelParams) -> tuple[float, float]:
    """A few 2-D Newton steps on the pair of FOCs (cross-partials by
    central differences); drives residuals from ~1e-10 to machine level."""
    h = 1e-6
    for _ in range(3):
        pp = PlatformPair(p_l, p_r)
        g_l = d_euL_d_pL(pp, params)
        g_r = d_euR_d_pR(pp, params)
        j_ll = d2_euL_d_pL2(pp, params)
        j_rr = d2_euR_d_pR2(pp, params)
        j_lr = (
            d_euL_d_pL(PlatformPair(p_l, p_r + h), params)
            - d_euL_d_pL(PlatformPair(p_l, p_r - h), params)
        ) / (2.0 * h)
        j_rl = (
            d_euR_d_pR(PlatformPair(p_l + h, p_r), params)
            - d_euR_d_pR(PlatformPair(p_l - h, p_r), params)
        ) / (2.0 * h)
        det = j_ll * j_rr - j_lr * j_rl
        if det == 0.0 or not math.isfinite(det):
            break
        step_l = (j_rr * g_l - j_lr * g_r) / det
        step_r = (j_ll * g_r - j_rl * g_l) / det
        cand_l, cand_r = p_l - step_l, p_r - step_r
        cand = PlatformPair(cand_l, cand_r)
        worse = max(
            abs(d_euL_d_pL(cand, params)), abs(d_euR_d_pR(cand, params))
        ) > max(abs(g_l), abs(g_r))
        if worse:
            break
        p_l, p_r = cand_l, cand_r
        if max(abs(step_l), abs(step_r)) < 1e-15:
            break
    return p_l, p_r


def find_equilibria(
    params: ModelParams, cfg: SolverConfig | None = None
) -> list[EquilibriumResult]:
    """Run solve_asymmetric from a 3x3 lattice of starting profiles and
    report the distinct fixed points found (sorted by p_L).

    Uniqueness of the asymmetric equilibrium is not established theory;
    this is the empirical multiplicity probe.  Starts that fail to
    converge are skipped — the survivors are what was found, not a
    completeness claim.
    """
    results: list[EquilibriumResult] = []
    for a in (0.1, 0.25, 0.4):
        for b in (0.6, 0.75, 0.9):
            try:
                res = solve_asymmetric(params, cfg, start=(a, b))
            except ConvergenceError:
                continue
            if not any(
                max(
                    abs(res.platforms.p_L - seen.platforms.p_L),
                    abs(res.platforms.p_R - seen.platforms.p_R),
                )
                < 1e-6
                for seen in results
            ):
                results.append(res)
    return sorted(results, key=lambda r: r.platforms.p_L)
