"""
Real branches of the Lambert W function.

Two transforms of ``y * e^y = x`` are iterated with the quadratic correction
from ``core_iteration``:

- Method 1 iterates ``z = e^y`` on ``z ln z = x`` (``ln z = z X`` for
  negative arguments, ``X = -x``).
- Method 2 iterates ``y`` on ``y + ln y = ln x`` (``ln y - y = ln X``) and only
  ever needs ``ln x``, so it also serves arguments beyond double range.

On negative arguments the plus root of each quadratic follows the secondary
branch and the minus root the principal one.
"""
import logging
import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable, Iterable, List, Optional, Tuple

from .core_iteration import (
    EPS,
    IterationTrace,
    RootSign,
    SolveConfig,
    Status,
    error_estimate,
    iterate,
)
from .exceptions import ConvergenceError, DegenerateCoefficients, DomainError

logger = logging.getLogger(__name__)

E = math.e
INV_E = math.exp(-1.0)
BRANCH_POINT = -INV_E
BRANCH_POINT_SNAP = 4 * math.ulp(INV_E)

# Method 1 forms 2 z^2 ln z with z up to x/2, which overflows past about 1e154.
M1_OVERFLOW_LIMIT = 1e150
# Residuals are taken as |y e^y - x| up to here, in the log domain beyond.
DIRECT_RESIDUAL_LIMIT = 1e300
NEGATIVE_M1_FLOOR = 1e-150
# W(x) == x in double precision below e^-700.
LN_UNDERFLOW = -700.0

RESIDUAL_BOUND = 1e-9
BRANCH_SLACK = 1e-6

# p = sqrt(2(1 + e x)); below these the series is used as a seed / as the value.
SERIES_SEED_LIMIT = 1e-2
SERIES_DIRECT_LIMIT = 1e-4


class Branch(str, Enum):
    PRINCIPAL = "w0"
    SECONDARY = "wm1"

    @property
    def label(self) -> str:
        return "Principal" if self is Branch.PRINCIPAL else "Secondary"


class Method(str, Enum):
    M1 = "m1"
    M2 = "m2"
    NEWTON = "newton"
    HALLEY = "halley"


@dataclass(frozen=True)
class SeedSchedule:
    """Seeds tried in order until one run is accepted."""
    candidates: Tuple[float, ...]

    def __post_init__(self):
        if not self.candidates:
            raise ValueError("SeedSchedule needs at least one candidate")
        unique = []
        for seed in self.candidates:
            if not (math.isfinite(seed) and seed > 0):
                raise ValueError(f"Invalid seed: {seed!r}. Must be finite and > 0")
            if seed not in unique:
                unique.append(float(seed))
        object.__setattr__(self, "candidates", tuple(unique))

    def with_override(self, seed: Optional[float]) -> "SeedSchedule":
        if seed is None:
            return self
        return SeedSchedule((seed,) + self.candidates)

    def __iter__(self):
        return iter(self.candidates)


@dataclass(frozen=True)
class BranchResult:
    x: float
    value: float
    branch: Branch
    method: Method
    trace: IterationTrace
    residual: float
    error_estimate_pct: float
    attempts: int = 1
    # Set when the argument was given through its logarithm.
    log_x: Optional[float] = None

    @property
    def status(self) -> Status:
        return self.trace.status

    @property
    def iterations(self) -> int:
        return self.trace.iterations

    @property
    def seed(self) -> float:
        return self.trace.seed

    @property
    def converged(self) -> bool:
        return self.trace.status is Status.CONVERGED


# Coefficients of a^2 - l a - m = 0 for each transform


def coeffs_m1_pos(z: float, x: float) -> Tuple[float, float]:
    """Method 1 on ``z ln z = x``."""
    log_z = math.log(z)
    denominator = log_z + 2.0
    if abs(denominator) <= 8 * EPS:
        raise DegenerateCoefficients(f"ln z + 2 vanishes at z={z!r}")
    l = -(3.0 * z * log_z + 2.0 * z - x) / denominator
    m = 2.0 * z * (x - z * log_z) / denominator
    return l, m


def coeffs_m2_pos(y: float, ln_x: float) -> Tuple[float, float]:
    """Method 2 on ``y + ln y = ln x``; ``ln(x/y)`` is formed as ``ln_x - ln y``."""
    c = ln_x - math.log(y)
    return -(3.0 * y + 2.0 - c), -2.0 * y * (y - c)


def coeffs_m1_neg(z: float, X: float) -> Tuple[float, float]:
    """Method 1 on ``ln z = z X`` for ``X = -x`` in (0, 1/e]."""
    if X == 0:
        raise DegenerateCoefficients("X = 0 has no negative-branch coefficients")
    log_z = math.log(z)
    l = -(3.0 * z * X - log_z - 2.0) / X
    m = 2.0 * z * (log_z - z * X) / X
    return l, m


def coeffs_m2_neg(y: float, ln_X: float) -> Tuple[float, float]:
    """Method 2 on ``ln y - y = ln X``."""
    c = ln_X - math.log(y)
    return -(3.0 * y - 2.0 + c), -2.0 * y * (y + c)


# Small-root limits of the quadratic once the iterate is close


def asymptotic_correction_m1(z: float, x: float) -> float:
    return (x - z * math.log(z)) / (math.log(z) + 1.0)


def asymptotic_correction_m2(y: float, ln_x: float) -> float:
    return (ln_x - math.log(y) - y) / (1.0 + 1.0 / y)


def asymptotic_correction_m1_neg(z: float, X: float) -> float:
    return z * (math.log(z) - z * X) / (z * X - 1.0)


def asymptotic_correction_m2_neg(y: float, ln_X: float) -> float:
    return y * (ln_X - math.log(y) + y) / (1.0 - y)


# Seed policies


def positive_m1_schedule(x: float) -> SeedSchedule:
    top = max(1.0, x)
    return SeedSchedule((1.0, top, math.sqrt(top)))


def positive_m2_schedule(x: float) -> SeedSchedule:
    return SeedSchedule((1.0 if x >= 1 else x, 0.5, 2.0))


def log_domain_schedule(ln_x: float) -> SeedSchedule:
    return SeedSchedule((1.0 if ln_x >= 0 else math.exp(ln_x), 0.5, 2.0))


def branch_point_distance(X: float) -> float:
    """``p = sqrt(2(1 - e X))``, the square-root distance to the branch point."""
    return math.sqrt(max(0.0, 2.0 * (1.0 - E * X)))


def branch_point_series(p: float, branch: Branch) -> float:
    """W near -1/e: ``-1 + p - p^2/3 + 11 p^3/72`` with p negated on the secondary branch."""
    if branch is Branch.SECONDARY:
        p = -p
    return -1.0 + p - p * p / 3.0 + 11.0 * p ** 3 / 72.0


def _series_on_branch(series_y: float, branch: Branch) -> bool:
    if branch is Branch.SECONDARY:
        return series_y >= 1.0
    return 0.0 < series_y <= 1.0


def negative_schedule(X: float, branch: Branch, method: Method) -> SeedSchedule:
    """Seeds for ``y e^-y = X``; the branch-point series leads when X is close to 1/e."""
    p = branch_point_distance(X)
    series_y = -branch_point_series(p, branch)
    if method is Method.M1:
        series = math.exp(series_y)
        if branch is Branch.SECONDARY:
            seeds = (2.0, E, 10.0, 1e3)
        else:
            seeds = (2.0, 0.3, 5.0, 1.0 + X, E)
    else:
        series = series_y
        if branch is Branch.SECONDARY:
            seeds = (1.0, 2.0, 10.0)
        else:
            seeds = (X, 1.0)
    # Far from -1/e the truncated series leaves the branch (and turns negative on W0).
    if not _series_on_branch(series_y, branch):
        return SeedSchedule(seeds)
    if p < SERIES_SEED_LIMIT:
        return SeedSchedule((series,) + seeds)
    return SeedSchedule(seeds + (series,))


# Solvers


def _exact(x: float, value: float, branch: Branch, method: Method, residual: float = 0.0, log_x=None):
    return BranchResult(
        x=x,
        value=value,
        branch=branch,
        method=method,
        trace=IterationTrace.exact(value),
        residual=residual,
        error_estimate_pct=0.0,
        log_x=log_x,
    )


def _accepts(trace: IterationTrace, residual: float, bound: float, cfg: SolveConfig) -> bool:
    if trace.status is Status.CONVERGED:
        return True
    if trace.status is Status.STALLED:
        return residual <= bound
    return trace.status is Status.MAX_ITER and cfg.fixed_iters is not None


def _run_schedule(
    schedule: SeedSchedule,
    attempt: Callable[[float], Tuple[BranchResult, bool]],
    label: str,
) -> BranchResult:
    last = None
    for count, seed in enumerate(schedule, start=1):
        result, accepted = attempt(seed)
        result = replace(result, attempts=count)
        if accepted:
            return result
        logger.warning(
            "[%s] seed %.12g gave %s, reseeding", label, seed, result.status.value
        )
        last = result
    raise ConvergenceError(
        f"{label} did not converge from any of the seeds {list(schedule.candidates)}",
        result=last,
    )


def _estimate(trace: IterationTrace) -> float:
    return error_estimate(trace) if trace.steps else 0.0


def _solve_m1_positive(x: float, cfg: SolveConfig) -> BranchResult:
    schedule = positive_m1_schedule(x).with_override(cfg.seed_override)
    bound = RESIDUAL_BOUND * max(1.0, x)

    def residual(y: float) -> float:
        return abs(y * math.exp(y) - x)

    def attempt(seed: float):
        trace = iterate(
            lambda z: coeffs_m1_pos(z, x),
            RootSign.PLUS,
            seed,
            cfg,
            residual_fn=lambda z: z * math.log(z) - x,
        )
        z = trace.final
        value = x / z if z < E else math.log(z)
        res = residual(value)
        result = BranchResult(x, value, Branch.PRINCIPAL, Method.M1, trace, res, _estimate(trace))
        return result, _accepts(trace, res, bound, cfg) and value >= 0

    return _run_schedule(schedule, attempt, "w0")


def _solve_m2_positive(x: Optional[float], ln_x: float, cfg: SolveConfig, label: str) -> BranchResult:
    """Method 2 on the log-domain equation; ``x`` is None when it is not representable."""
    if x is None:
        schedule = log_domain_schedule(ln_x)
    else:
        schedule = positive_m2_schedule(x)
    schedule = schedule.with_override(cfg.seed_override)

    finite_domain = x is not None and x <= DIRECT_RESIDUAL_LIMIT
    if finite_domain:
        bound = RESIDUAL_BOUND * max(1.0, x)

        def residual(y: float) -> float:
            return abs(y * math.exp(y) - x)
    else:
        bound = RESIDUAL_BOUND * max(1.0, abs(ln_x))

        def residual(y: float) -> float:
            return abs(y + math.log(y) - ln_x)

    def attempt(seed: float):
        trace = iterate(
            lambda y: coeffs_m2_pos(y, ln_x),
            RootSign.PLUS,
            seed,
            cfg,
            residual_fn=lambda y: y + math.log(y) - ln_x,
        )
        value = trace.final
        res = residual(value)
        result = BranchResult(
            math.inf if x is None else x,
            value,
            Branch.PRINCIPAL,
            Method.M2,
            trace,
            res,
            _estimate(trace),
            log_x=ln_x if x is None else None,
        )
        return result, _accepts(trace, res, bound, cfg)

    return _run_schedule(schedule, attempt, label)


def w0(x: float, method: Method = Method.M1, cfg: Optional[SolveConfig] = None) -> BranchResult:
    """
    Principal branch for ``x >= 0``.

    Args:
        x: Finite nonnegative argument
        method: Method.M1 (seed 1) or Method.M2 (seed 1 for x >= 1, else x)
        cfg: Stopping rule and optional seed override

    Returns:
        BranchResult with ``value * e^value == x``

    Raises:
        DomainError: If x is negative or not finite
        ConvergenceError: If no seed in the schedule is accepted
    """
    if not math.isfinite(x) or x < 0:
        raise DomainError(f"w0 needs a finite x >= 0, got {x!r}")
    if method not in (Method.M1, Method.M2):
        raise ValueError(f"Invalid method: {method}. Must be 'm1' or 'm2'")
    cfg = cfg or SolveConfig()
    if x == 0:
        return _exact(0.0, 0.0, Branch.PRINCIPAL, method)
    if method is Method.M1 and x > M1_OVERFLOW_LIMIT:
        logger.info("[w0] x=%.6g is past the Method 1 range, switching to Method 2", x)
        method = Method.M2
    if method is Method.M1:
        return _solve_m1_positive(x, cfg)
    return _solve_m2_positive(x, math.log(x), cfg, "w0")


def w0_from_ln(ln_x: float, cfg: Optional[SolveConfig] = None) -> BranchResult:
    """Principal branch of ``x = e^ln_x`` without forming x."""
    if not math.isfinite(ln_x):
        raise DomainError(f"w0_from_ln needs a finite ln_x, got {ln_x!r}")
    cfg = cfg or SolveConfig()
    if ln_x < LN_UNDERFLOW:
        x = math.exp(ln_x)
        return _exact(x, x, Branch.PRINCIPAL, Method.M2, log_x=ln_x)
    return _solve_m2_positive(None, ln_x, cfg, "w0_from_ln")


def w_negative(
    x_neg: float,
    branch: Branch,
    method: Method = Method.M1,
    cfg: Optional[SolveConfig] = None,
) -> BranchResult:
    """
    Either branch on ``[-1/e, 0)``.

    Solves ``y e^-y = X`` with ``X = -x_neg`` and returns ``-y``. Arguments
    within a few ulps of -1/e are taken as the branch point itself.

    Raises:
        DomainError: If x_neg < -1/e or x_neg >= 0
        ConvergenceError: If no seed in the schedule is accepted
    """
    if not math.isfinite(x_neg) or x_neg >= 0:
        raise DomainError(f"w_negative needs -1/e <= x < 0, got {x_neg!r}")
    if method not in (Method.M1, Method.M2):
        raise ValueError(f"Invalid method: {method}. Must be 'm1' or 'm2'")
    if abs(x_neg - BRANCH_POINT) <= BRANCH_POINT_SNAP:
        return _exact(x_neg, -1.0, branch, method, residual=abs(-x_neg - INV_E))
    if x_neg < BRANCH_POINT:
        raise DomainError("No solution in real domain.")

    cfg = cfg or SolveConfig()
    X = -x_neg
    label = f"w_negative/{branch.value}"

    p = branch_point_distance(X)
    if p < SERIES_DIRECT_LIMIT and cfg.seed_override is None:
        value = branch_point_series(p, branch)
        return _exact(x_neg, value, branch, method, residual=abs(value * math.exp(value) - x_neg))

    if method is Method.M1 and X < NEGATIVE_M1_FLOOR:
        logger.info("[%s] X=%.6g is below the Method 1 range, switching to Method 2", label, X)
        method = Method.M2

    sign = RootSign.PLUS if branch is Branch.SECONDARY else RootSign.MINUS
    schedule = negative_schedule(X, branch, method).with_override(cfg.seed_override)
    ln_X = math.log(X)

    def residual(y: float) -> float:
        return abs(X - y * math.exp(-y))

    def on_branch(y: float) -> bool:
        if branch is Branch.SECONDARY:
            return y >= 1.0 - BRANCH_SLACK
        return y <= 1.0 + BRANCH_SLACK

    def attempt(seed: float):
        if method is Method.M1:
            trace = iterate(
                lambda z: coeffs_m1_neg(z, X),
                sign,
                seed,
                cfg,
                residual_fn=lambda z: math.log(z) - z * X,
            )
            z = trace.final
            y = X * z if z < E else math.log(z)
        else:
            trace = iterate(
                lambda y: coeffs_m2_neg(y, ln_X),
                sign,
                seed,
                cfg,
                residual_fn=lambda y: math.log(y) - y - ln_X,
            )
            y = trace.final
        res = residual(y)
        accepted = _accepts(trace, res, RESIDUAL_BOUND, cfg) and on_branch(y)
        value = min(-y, -1.0) if branch is Branch.SECONDARY else max(-y, -1.0)
        result = BranchResult(x_neg, value, branch, method, trace, res, _estimate(trace))
        return result, accepted

    return _run_schedule(schedule, attempt, label)


def lambert_w(
    x: float,
    branch: Branch = Branch.PRINCIPAL,
    cfg: Optional[SolveConfig] = None,
    method: Method = Method.M1,
) -> BranchResult:
    """
    Evaluate W on the requested real branch.

    Args:
        x: Finite argument, at least -1/e
        branch: Branch.PRINCIPAL or Branch.SECONDARY (needs x < 0)
        cfg: Stopping rule and seed override
        method: Quadratic Method.M1 / Method.M2, or a Newton/Halley baseline

    Returns:
        BranchResult

    Raises:
        DomainError: If x is outside the branch's real domain
        ConvergenceError: If no seed in the schedule is accepted
    """
    if not math.isfinite(x):
        raise DomainError(f"No solution in real domain: x must be finite, got {x!r}")
    if branch is Branch.SECONDARY and x >= 0:
        raise DomainError(
            f"No solution in real domain: the secondary branch needs -1/e <= x < 0, got {x!r}"
        )
    if x < BRANCH_POINT - BRANCH_POINT_SNAP:
        raise DomainError("No solution in real domain.")

    if method in (Method.NEWTON, Method.HALLEY):
        from .baselines import default_seed, halley_w, newton_w

        solver = newton_w if method is Method.NEWTON else halley_w
        return solver(x, default_seed(x, branch), branch, cfg)

    if x >= 0:
        return w0(x, method, cfg)
    return w_negative(x, branch, method, cfg)


def seed_sweep(
    x: float,
    seeds: Iterable[float],
    method: Method = Method.M1,
    branch: Branch = Branch.PRINCIPAL,
    cfg: Optional[SolveConfig] = None,
) -> List[BranchResult]:
    """
    Solve once per seed with tracing on.

    A seed that fails falls through to the regular schedule; a run that
    exhausts it is kept as its last attempt instead of aborting the sweep.
    """
    cfg = cfg or SolveConfig()
    results = []
    for seed in seeds:
        run_cfg = replace(cfg, seed_override=seed, record_trace=True)
        try:
            results.append(lambert_w(x, branch, run_cfg, method))
        except ConvergenceError as exc:
            logger.warning("[seed_sweep] x=%.12g seed=%.12g did not converge", x, seed)
            results.append(exc.result)
    return results
