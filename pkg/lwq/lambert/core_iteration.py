"""
Quadratic correction iteration.

Substituting ``z + a`` into a logarithmic equation and replacing
``ln(z + a)`` by ``ln z + 2a/(a + 2z)`` turns every step into a quadratic
``a^2 - l*a - m = 0``. This module holds the pieces shared by all solvers:
the increment approximation, the root computation, the generic
"apply corrections until they are small" loop and its diagnostics.
"""
import logging
import math
import sys
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, List, Optional, Sequence, Tuple, Union

from .exceptions import DegenerateCoefficients, DomainError

logger = logging.getLogger(__name__)

EPS = sys.float_info.epsilon

# Corrections that stop contracting below this relative size are rounding noise.
STALL_THRESHOLD = 1e-6

LOG_INVERSE_WINDOW = 2.0
# The ratio recurrence has a repelling 2-cycle at |gap| = 2 tanh|gap| (about 1.915);
# gaps past this are halved for one step so the run starts inside it.
LOG_INVERSE_DAMPING = 1.9


class Status(str, Enum):
    CONVERGED = "Converged"
    MAX_ITER = "MaxIterReached"
    NEGATIVE_DISCRIMINANT = "NegativeDiscriminant"
    NON_POSITIVE_ITERATE = "NonPositiveIterate"
    DEGENERATE_STEP = "DegenerateStep"
    STALLED = "Stalled"


class RootSign(str, Enum):
    PLUS = "plus"
    MINUS = "minus"


@dataclass(frozen=True)
class SolveConfig:
    """
    Stopping rule and seed policy for one solve.

    ``fixed_iters`` applies exactly that many corrections with no early
    stop, which is how published fixed-count traces are reproduced.
    """
    tol_rel: float = 1e-14
    tol_abs: float = 0.0
    max_iter: int = 16
    seed_override: Optional[float] = None
    record_trace: bool = False
    fixed_iters: Optional[int] = None

    def __post_init__(self):
        if not self.tol_rel > 0:
            raise ValueError(f"tol_rel must be > 0, got {self.tol_rel!r}")
        if not self.tol_abs >= 0:
            raise ValueError(f"tol_abs must be >= 0, got {self.tol_abs!r}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be >= 1, got {self.max_iter!r}")
        if self.seed_override is not None and not (
            math.isfinite(self.seed_override) and self.seed_override > 0
        ):
            raise ValueError(f"seed_override must be finite and > 0, got {self.seed_override!r}")
        if self.fixed_iters is not None and self.fixed_iters < 1:
            raise ValueError(f"fixed_iters must be >= 1, got {self.fixed_iters!r}")

    @classmethod
    def from_settings(cls, **overrides) -> "SolveConfig":
        """Build a config from the Django settings, letting non-None overrides win."""
        from django.conf import settings

        values = {
            "tol_rel": settings.LWQ_TOL_REL,
            "tol_abs": settings.LWQ_TOL_ABS,
            "max_iter": settings.LWQ_MAX_ITER,
        }
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**values)

    @property
    def iteration_limit(self) -> int:
        return self.fixed_iters if self.fixed_iters is not None else self.max_iter

    def step_tolerance(self, scale: float) -> float:
        return self.tol_abs + self.tol_rel * abs(scale)


@dataclass(frozen=True)
class QuadraticCoefficients:
    """The pair (l, m) of ``a^2 - l*a - m = 0`` with its discriminant and roots.

    Roots are NaN when the discriminant is negative.
    """
    l: float
    m: float
    discriminant: float
    root_plus: float = math.nan
    root_minus: float = math.nan

    @property
    def is_real(self) -> bool:
        return not math.isnan(self.root_plus)

    def root(self, sign: RootSign) -> float:
        return self.root_plus if sign is RootSign.PLUS else self.root_minus


@dataclass(frozen=True)
class IterationStep:
    n: int
    iterate: float
    # None for the linear recurrences (log-inverse, Newton, Halley)
    coeffs: Optional[QuadraticCoefficients]
    correction: float
    next_iterate: float
    residual: float = math.nan


@dataclass(frozen=True)
class IterationTrace:
    """
    Outcome of one run from one seed.

    ``steps`` holds every step when tracing was requested, otherwise only the
    last one. ``final`` is the last accepted iterate (the seed if no step was
    accepted).
    """
    seed: float
    status: Status
    final: float
    steps: Tuple[IterationStep, ...] = ()
    iterations: int = 0

    @property
    def last_step(self) -> Optional[IterationStep]:
        return self.steps[-1] if self.steps else None

    @classmethod
    def exact(cls, value: float) -> "IterationTrace":
        """Trace of a value known without iterating."""
        return cls(seed=value, status=Status.CONVERGED, final=value)


Proposal = Union[Status, Tuple[Optional[QuadraticCoefficients], float]]


def ln_increment_approx(z: float, a: float) -> float:
    """Approximate ``ln(z + a)`` as ``ln z + 2a/(a + 2z)``."""
    if not z > 0:
        raise DomainError(f"ln_increment_approx needs z > 0, got {z!r}")
    denominator = a + 2.0 * z
    if denominator == 0:
        raise ValueError(f"ln_increment_approx is undefined for a = -2z (z={z!r})")
    return math.log(z) + 2.0 * a / denominator


def quad_solve(l: float, m: float) -> QuadraticCoefficients:
    """
    Solve ``a^2 - l*a - m = 0``.

    The larger-magnitude root comes from the quadratic formula and the
    other from the product ``root_plus * root_minus = -m``. A discriminant
    that is negative only by rounding (``|disc| <= 4*eps*l^2``) is clamped
    to zero.

    Args:
        l: Linear coefficient
        m: Constant coefficient

    Returns:
        QuadraticCoefficients; roots are NaN when the discriminant is negative

    Raises:
        ValueError: If l or m is not finite
    """
    if not (math.isfinite(l) and math.isfinite(m)):
        raise ValueError(f"quadratic coefficients must be finite, got l={l!r}, m={m!r}")

    discriminant = l * l + 4.0 * m
    if math.isfinite(discriminant):
        if discriminant < 0:
            if -discriminant > 4.0 * EPS * l * l:
                return QuadraticCoefficients(l, m, discriminant)
            root_disc = 0.0
        else:
            root_disc = math.sqrt(discriminant)
    elif abs(l) > 1e150:
        # l^2 overflowed; factor it out
        ratio = 1.0 + 4.0 * (m / l) / l
        if ratio < 0:
            if -ratio > 4.0 * EPS:
                return QuadraticCoefficients(l, m, discriminant)
            ratio = 0.0
        root_disc = abs(l) * math.sqrt(ratio)
    elif m > 0:
        root_disc = 2.0 * math.sqrt(m) * math.sqrt(1.0 + (l / (2.0 * math.sqrt(m))) ** 2)
    else:
        return QuadraticCoefficients(l, m, discriminant)

    big = 0.5 * (l + root_disc) if l >= 0 else 0.5 * (l - root_disc)
    small = -m / big if big != 0 else 0.0
    if l >= 0:
        return QuadraticCoefficients(l, m, discriminant, root_plus=big, root_minus=small)
    return QuadraticCoefficients(l, m, discriminant, root_plus=small, root_minus=big)


def run_corrections(
    propose: Callable[[float], Proposal],
    seed: float,
    cfg: SolveConfig,
    residual_fn: Optional[Callable[[float], float]] = None,
    positive: bool = True,
    label: str = "iterate",
) -> IterationTrace:
    """
    Apply corrections from ``seed`` until they are small.

    ``propose(z)`` returns ``(coeffs, a)`` for the next step or a failure
    Status. When ``positive`` is set, a non-positive next iterate ends the
    run with NonPositiveIterate.
    """
    z = seed
    steps: List[IterationStep] = []
    last: Optional[IterationStep] = None
    previous_size: Optional[float] = None
    status = Status.MAX_ITER
    count = 0

    for n in range(1, cfg.iteration_limit + 1):
        outcome = propose(z)
        if isinstance(outcome, Status):
            status = outcome
            logger.debug("[%s] n=%d stopped at z=%r: %s", label, n, z, status.value)
            break
        coeffs, a = outcome
        z_next = z + a
        if math.isnan(z_next) or math.isinf(z_next):
            status = Status.DEGENERATE_STEP
            break
        if positive and z_next <= 0:
            status = Status.NON_POSITIVE_ITERATE
            logger.debug("[%s] n=%d non-positive iterate %r from z=%r", label, n, z_next, z)
            break

        residual = residual_fn(z_next) if (cfg.record_trace and residual_fn) else math.nan
        last = IterationStep(n, z, coeffs, a, z_next, residual)
        if cfg.record_trace:
            steps.append(last)
        logger.debug("[%s] n=%d z=%r a=%r", label, n, z, a)
        count = n
        z = z_next

        size = abs(a)
        if size <= cfg.step_tolerance(z_next):
            status = Status.CONVERGED
        elif (
            n >= 3
            and previous_size is not None
            and size >= 0.5 * previous_size
            and size <= STALL_THRESHOLD * abs(z_next)
        ):
            status = Status.STALLED
        else:
            status = Status.MAX_ITER
        if status is not Status.MAX_ITER and cfg.fixed_iters is None:
            break
        previous_size = size

    # Cap reached while the corrections are already rounding noise.
    if (
        status is Status.MAX_ITER
        and cfg.fixed_iters is None
        and count == cfg.iteration_limit
        and previous_size is not None
        and previous_size <= STALL_THRESHOLD * abs(z)
    ):
        status = Status.STALLED

    if not cfg.record_trace:
        steps = [last] if last is not None else []
    return IterationTrace(seed=seed, status=status, final=z, steps=tuple(steps), iterations=count)


def iterate(
    coeff_fn: Callable[[float], Tuple[float, float]],
    root_sign: RootSign,
    seed: float,
    cfg: Optional[SolveConfig] = None,
    residual_fn: Optional[Callable[[float], float]] = None,
) -> IterationTrace:
    """
    Run the quadratic correction ``z_{n+1} = z_n + a_n`` from ``seed``.

    Args:
        coeff_fn: Maps an iterate to its (l, m); may raise DegenerateCoefficients
        root_sign: Which root of each quadratic is applied
        seed: Positive initial iterate
        cfg: Stopping rule; defaults to SolveConfig()
        residual_fn: Left-minus-right of the defining equation, recorded per step

    Returns:
        IterationTrace whose status tells the caller whether to reseed
    """
    if not (math.isfinite(seed) and seed > 0):
        raise DomainError(f"iterate needs a finite seed > 0, got {seed!r}")
    cfg = cfg or SolveConfig()

    def propose(z: float) -> Proposal:
        try:
            l, m = coeff_fn(z)
        except DegenerateCoefficients as exc:
            logger.debug("[iterate] degenerate coefficients: %s", exc)
            return Status.DEGENERATE_STEP
        if not (math.isfinite(l) and math.isfinite(m)):
            return Status.DEGENERATE_STEP
        coeffs = quad_solve(l, m)
        if not coeffs.is_real:
            return Status.NEGATIVE_DISCRIMINANT
        return coeffs, coeffs.root(root_sign)

    return run_corrections(propose, seed, cfg, residual_fn=residual_fn)


def log_inverse_solve(
    y_target: float, seed: float, cfg: Optional[SolveConfig] = None
) -> IterationTrace:
    """
    Find z with ``ln z = y_target`` using ``z_{n+1}/z_n = -1 + 4/(2 - y + ln z_n)``.

    The seed must satisfy ``|ln(seed) - y_target| < 2``. A first gap of 1.9 or
    more is halved for that step, since the plain ratio would oscillate outwards.
    """
    if not (math.isfinite(seed) and seed > 0):
        raise DomainError(f"log_inverse_solve needs a finite seed > 0, got {seed!r}")
    if not math.isfinite(y_target):
        raise DomainError(f"log_inverse_solve needs a finite target, got {y_target!r}")
    gap = math.log(seed) - y_target
    if not abs(gap) < LOG_INVERSE_WINDOW:
        raise DomainError(
            f"log_inverse_solve needs |ln(seed) - y| < {LOG_INVERSE_WINDOW:g}, got {gap:.6g}"
        )
    cfg = cfg or SolveConfig()

    def propose(z: float) -> Proposal:
        step_gap = math.log(z) - y_target
        if abs(step_gap) >= LOG_INVERSE_DAMPING:
            logger.debug("[log_inverse_solve] gap %.6g, aiming at the midpoint", step_gap)
            step_gap *= 0.5
        denominator = 2.0 + step_gap
        if denominator <= 0:
            return Status.DEGENERATE_STEP
        return None, -2.0 * z * step_gap / denominator

    return run_corrections(
        propose,
        seed,
        cfg,
        residual_fn=lambda z: math.log(z) - y_target,
        label="log_inverse_solve",
    )


def error_estimate(trace: IterationTrace) -> float:
    """Percentage error ``100*|a_last|/|z_last|`` of the final step."""
    step = trace.last_step
    if step is None:
        raise ValueError("error_estimate needs a trace with at least one step")
    if step.correction == 0:
        return 0.0
    if step.next_iterate == 0:
        return math.inf
    return 100.0 * abs(step.correction) / abs(step.next_iterate)


def residual_decreasing(trace: IterationTrace, floor: float = 0.0) -> bool:
    """True when recorded residuals never grow from one step to the next above ``floor``."""
    residuals = [abs(step.residual) for step in trace.steps]
    return all(
        later <= max(earlier, floor) for earlier, later in zip(residuals, residuals[1:])
    )


def observed_orders(trace: IterationTrace) -> List[float]:
    """Empirical convergence orders ``ln|a_{k+1}/a_k| / ln|a_k/a_{k-1}|``."""
    sizes = [abs(step.correction) for step in trace.steps]
    orders = []
    for previous, current, following in _triples(sizes):
        if 0 in (previous, current, following) or previous == current:
            continue
        orders.append(math.log(following / current) / math.log(current / previous))
    return orders


def _triples(values: Sequence[float]) -> Iterable[Tuple[float, float, float]]:
    return zip(values, values[1:], values[2:])
