"""
Classical solvers used to cross-check the quadratic correction: Newton and
Halley on ``f(w) = w e^w - x`` and a bisection oracle.
"""
import logging
import math
import sys
from dataclasses import dataclass, replace
from itertools import combinations
from typing import Callable, Iterable, List, Optional

from .core_iteration import EPS, SolveConfig, Status, observed_orders, run_corrections
from .exceptions import ConvergenceError, DomainError
from .lambertw import (
    BRANCH_POINT,
    BRANCH_POINT_SNAP,
    Branch,
    BranchResult,
    Method,
    branch_point_distance,
    lambert_w,
)

logger = logging.getLogger(__name__)

BISECTION_MAX_STEPS = 2200
LN_MAX_DOUBLE = math.log(sys.float_info.max)
ACCEPTED = (Status.CONVERGED, Status.STALLED)


def scaled_residual(w: float, x: float) -> float:
    """``(w e^w - x) e^-w``, same sign as f and free of overflow."""
    if x == 0:
        return w
    return w - math.copysign(math.exp(math.log(abs(x)) - w), x)


def default_seed(x: float, branch: Branch) -> float:
    if branch is Branch.SECONDARY:
        return -2.0 - branch_point_distance(-x)
    return max(0.0, math.log(max(x, 1.0)))


def _check_domain(x: float, branch: Branch):
    if not math.isfinite(x) or x < BRANCH_POINT - BRANCH_POINT_SNAP:
        raise DomainError("No solution in real domain.")
    if branch is Branch.SECONDARY and x >= 0:
        raise DomainError(
            f"No solution in real domain: the secondary branch needs -1/e <= x < 0, got {x!r}"
        )


def _check_seed(seed: float, branch: Branch):
    if branch is Branch.PRINCIPAL and not seed > -1:
        raise DomainError(f"Principal-branch seed must be > -1, got {seed!r}")
    if branch is Branch.SECONDARY and not seed < -1:
        raise DomainError(f"Secondary-branch seed must be < -1, got {seed!r}")


def _baseline(
    x: float,
    seed: float,
    branch: Branch,
    cfg: Optional[SolveConfig],
    method: Method,
    step: Callable[[float], object],
) -> BranchResult:
    _check_domain(x, branch)
    _check_seed(seed, branch)
    cfg = cfg or SolveConfig()

    trace = run_corrections(
        step,
        seed,
        cfg,
        residual_fn=lambda w: w * math.exp(w) - x,
        positive=False,
        label=method.value,
    )
    value = trace.final
    residual = abs(value * math.exp(value) - x)
    step_ = trace.last_step
    estimate = 0.0
    if step_ is not None and step_.correction != 0:
        estimate = math.inf if value == 0 else 100.0 * abs(step_.correction) / abs(value)
    if trace.status not in ACCEPTED:
        logger.debug("[%s] x=%.12g seed=%.12g ended with %s", method.value, x, seed, trace.status.value)
    return BranchResult(x, value, branch, method, trace, residual, estimate)


def newton_w(
    x: float, seed: float, branch: Branch = Branch.PRINCIPAL, cfg: Optional[SolveConfig] = None
) -> BranchResult:
    """
    Newton iteration ``w - f/f'`` with ``f' = e^w (1 + w)``.

    Oscillation or divergence is reported through the trace status
    (MaxIterReached), never raised.
    """

    def step(w: float):
        d1 = 1.0 + w
        if d1 == 0:
            return Status.DEGENERATE_STEP
        return None, -scaled_residual(w, x) / d1

    return _baseline(x, seed, branch, cfg, Method.NEWTON, step)


def halley_w(
    x: float, seed: float, branch: Branch = Branch.PRINCIPAL, cfg: Optional[SolveConfig] = None
) -> BranchResult:
    """Halley iteration ``w - 2 f f' / (2 f'^2 - f f'')`` with ``f'' = e^w (2 + w)``."""

    def step(w: float):
        g = scaled_residual(w, x)
        d1 = 1.0 + w
        curvature = g * (2.0 + w)
        denominator = 2.0 * d1 * d1 - curvature
        if abs(denominator) <= 8 * EPS * (2.0 * d1 * d1 + abs(curvature)):
            return Status.DEGENERATE_STEP
        return None, -2.0 * g * d1 / denominator

    return _baseline(x, seed, branch, cfg, Method.HALLEY, step)


def bisect_root(g: Callable[[float], float], lo: float, hi: float, tol: float) -> float:
    """
    Bisect a sign change of ``g`` on ``[lo, hi]`` down to width ``tol``.

    Args:
        g: Continuous function
        lo: Lower end of the bracket
        hi: Upper end of the bracket
        tol: Final bracket width

    Returns:
        Midpoint of the final bracket (or an end point where g is exactly 0)

    Raises:
        ValueError: If tol is not positive or the bracket has no sign change
    """
    if not tol > 0:
        raise ValueError(f"Invalid tolerance: {tol!r}. Must be > 0")
    if lo > hi:
        lo, hi = hi, lo
    g_lo, g_hi = g(lo), g(hi)
    if g_lo == 0:
        return lo
    if g_hi == 0:
        return hi
    if (g_lo < 0) == (g_hi < 0):
        raise ValueError(f"Expected [{lo!r}, {hi!r}] to bracket a root of g")

    for _ in range(BISECTION_MAX_STEPS):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        g_mid = g(mid)
        if g_mid == 0:
            return mid
        if (g_mid < 0) == (g_lo < 0):
            lo, g_lo = mid, g_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def bisection_oracle(x: float, branch: Branch = Branch.PRINCIPAL, tol: float = 1e-12) -> float:
    """W(x) by bisection of ``w e^w - x``; makes no use of the quadratic method."""
    _check_domain(x, branch)
    if x == 0 and branch is Branch.PRINCIPAL:
        return 0.0
    # Both branches meet in a double root here, which no bracket can isolate.
    if abs(x - BRANCH_POINT) <= BRANCH_POINT_SNAP:
        return -1.0

    def g(w: float) -> float:
        return scaled_residual(w, x)

    if branch is Branch.PRINCIPAL:
        if x > 0:
            lo, hi = 0.0, max(1.0, math.log(max(x, 1.0)) + 1.0)
        else:
            lo, hi = -1.0, 0.0
    else:
        big_l = -math.log(-x)
        hi = -1.0
        lo = -(big_l + math.log(big_l + 2.0) + 2.0)
        while g(lo) != 0 and (g(lo) < 0) == (g(hi) < 0):
            # e^-w in g stops being representable past this.
            if math.log(-x) - 2.0 * lo > LN_MAX_DOUBLE:
                raise ValueError(f"No sign change of g on [{lo!r}, {hi!r}] for x={x!r}")
            lo *= 2.0
    return bisect_root(g, lo, hi, tol)


@dataclass(frozen=True)
class ComparisonRow:
    x: float
    branch: Branch
    quad_iters: int
    newton_iters: int
    halley_iters: int
    quad_value: float
    newton_value: float
    halley_value: float
    agreement: float
    quad_status: Status
    newton_status: Status
    halley_status: Status
    # Last empirical order of the quadratic run; None with fewer than three nonzero corrections
    quad_order: Optional[float] = None


def compare(
    xs: Iterable[float], branch: Branch = Branch.PRINCIPAL, cfg: Optional[SolveConfig] = None
) -> List[ComparisonRow]:
    """Run Method 1, Newton and Halley from their default seeds on every x."""
    cfg = cfg or SolveConfig()
    return [compare_one(x, branch, cfg) for x in xs]


def compare_one(x: float, branch: Branch, cfg: SolveConfig) -> ComparisonRow:
    _check_domain(x, branch)
    try:
        quad = lambert_w(x, branch, replace(cfg, record_trace=True), Method.M1)
    except ConvergenceError as exc:
        quad = exc.result
    # seed_override only steers the quadratic run; it is a z/y seed, not a w seed
    seed = default_seed(x, branch)
    newton = newton_w(x, seed, branch, cfg)
    halley = halley_w(x, seed, branch, cfg)

    accepted = [r.value for r in (quad, newton, halley) if r.status in ACCEPTED]
    if len(accepted) >= 2:
        agreement = max(abs(a - b) for a, b in combinations(accepted, 2))
    else:
        agreement = math.nan
    orders = observed_orders(quad.trace)

    return ComparisonRow(
        x=x,
        branch=branch,
        quad_iters=quad.iterations,
        newton_iters=newton.iterations,
        halley_iters=halley.iterations,
        quad_value=quad.value,
        newton_value=newton.value,
        halley_value=halley.value,
        agreement=agreement,
        quad_status=quad.status,
        newton_status=newton.status,
        halley_status=halley.status,
        quad_order=orders[-1] if orders else None,
    )
