"""
Transcendental equations that reduce to a Lambert W evaluation.

Each solver maps its equation onto ``w e^w = argument``, evaluates every real
branch the argument admits and maps the W values back. When two real roots
exist both are returned, ascending, with a Reduction naming the branch each
came from.
"""
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Mapping, Optional, Tuple

from .core_iteration import SolveConfig
from .exceptions import DomainError
from .lambertw import BRANCH_POINT, Branch, lambert_w, w0_from_ln

logger = logging.getLogger(__name__)

EQUATION_SNAP = 16 * math.ulp(-BRANCH_POINT)
TOWER_LIMIT = math.exp(math.exp(-1.0))
EXP_LIMIT = 700.0


class FormTag(str, Enum):
    YPOWY = "ypowy"
    YPOWINVY = "ypowinvy"
    PLNX_Q_OVER_X = "plnxqoverx"
    PLNX_QX = "plnxqx"
    PX_Q_EXP_RX = "pxqexprx"
    TOWER = "tower"


PARAMETERS: Dict[FormTag, Tuple[str, ...]] = {
    FormTag.YPOWY: ("m",),
    FormTag.YPOWINVY: ("m",),
    FormTag.PLNX_Q_OVER_X: ("p", "q", "r"),
    FormTag.PLNX_QX: ("p", "q", "r"),
    FormTag.PX_Q_EXP_RX: ("p", "q", "r", "s"),
    FormTag.TOWER: ("x",),
}

# Parameters that appear as divisors in the reduction.
NONZERO: Dict[FormTag, Tuple[str, ...]] = {
    FormTag.PLNX_Q_OVER_X: ("p",),
    FormTag.PLNX_QX: ("p", "q"),
    FormTag.PX_Q_EXP_RX: ("p", "q", "r"),
}

DESCRIPTIONS: Dict[FormTag, str] = {
    FormTag.YPOWY: "y^y = m",
    FormTag.YPOWINVY: "y^(1/y) = m",
    FormTag.PLNX_Q_OVER_X: "p ln x + q/x = r",
    FormTag.PLNX_QX: "p ln x + q x = r",
    FormTag.PX_Q_EXP_RX: "p x + q e^(r x) = s",
    FormTag.TOWER: "x^x^x^... = y",
}


@dataclass(frozen=True)
class EquationForm:
    tag: FormTag
    params: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        expected = PARAMETERS[self.tag]
        if set(self.params) != set(expected):
            raise ValueError(
                f"Invalid parameters for {self.tag.value}: {sorted(self.params)}. "
                f"Must be {list(expected)}"
            )
        for name, value in self.params.items():
            if not math.isfinite(value):
                raise ValueError(f"Parameter {name} must be finite, got {value!r}")
        for name in NONZERO.get(self.tag, ()):
            if self.params[name] == 0:
                raise ValueError(f"Parameter {name} must be nonzero for {self.tag.value}")

    def __getitem__(self, name: str) -> float:
        return self.params[name]

    @property
    def rhs(self) -> float:
        """Right-hand side used to scale the residual bound."""
        if self.tag in (FormTag.YPOWY, FormTag.YPOWINVY):
            return self["m"]
        if self.tag is FormTag.PX_Q_EXP_RX:
            return self["s"]
        if self.tag is FormTag.TOWER:
            return 1.0
        return self["r"]

    def lhs_minus_rhs(self, root: float) -> float:
        tag = self.tag
        if tag is FormTag.YPOWY:
            return root ** root - self["m"]
        if tag is FormTag.YPOWINVY:
            return root ** (1.0 / root) - self["m"]
        if tag is FormTag.PLNX_Q_OVER_X:
            return self["p"] * math.log(root) + self["q"] / root - self["r"]
        if tag is FormTag.PLNX_QX:
            return self["p"] * math.log(root) + self["q"] * root - self["r"]
        if tag is FormTag.PX_Q_EXP_RX:
            return self["p"] * root + self["q"] * math.exp(self["r"] * root) - self["s"]
        # the tower limit y satisfies x^y = y
        return self["x"] ** root - root


@dataclass(frozen=True)
class Reduction:
    argument: float
    branch: Branch
    w_value: float
    # ln of the argument when it was too large to form
    log_argument: Optional[float] = None


@dataclass(frozen=True)
class EquationSolution:
    form: EquationForm
    roots: Tuple[float, ...]
    reductions: Tuple[Reduction, ...]
    residual: float


def _w_branches(argument: float, step: str, cfg: Optional[SolveConfig]) -> List[Reduction]:
    """Every real W value of ``argument``, principal first."""
    if argument >= 0:
        return [Reduction(argument, Branch.PRINCIPAL, lambert_w(argument, Branch.PRINCIPAL, cfg).value)]
    if abs(argument - BRANCH_POINT) <= EQUATION_SNAP:
        return [Reduction(argument, Branch.PRINCIPAL, -1.0)]
    if argument < BRANCH_POINT:
        raise DomainError(
            f"{step}: W argument {argument:.12g} is below -1/e, no real solution"
        )
    return [
        Reduction(argument, branch, lambert_w(argument, branch, cfg).value)
        for branch in (Branch.PRINCIPAL, Branch.SECONDARY)
    ]


def _solution(form: EquationForm, pairs: List[Tuple[float, Reduction]]) -> EquationSolution:
    pairs = sorted(pairs, key=lambda pair: pair[0])
    roots = tuple(root for root, _ in pairs)
    residual = max(abs(form.lhs_minus_rhs(root)) for root in roots)
    logger.debug("[%s] roots=%s residual=%.3g", form.tag.value, roots, residual)
    return EquationSolution(form, roots, tuple(r for _, r in pairs), residual)


def solve_y_pow_y(m: float, cfg: Optional[SolveConfig] = None) -> EquationSolution:
    """``y^y = m`` as ``ln y e^(ln y) = ln m``; two roots when -1/e < ln m < 0."""
    form = EquationForm(FormTag.YPOWY, {"m": m})
    if not m > 0:
        raise DomainError(f"y^y = m needs m > 0, got {m!r}")
    reductions = _w_branches(math.log(m), "y^y = m: ln m", cfg)
    return _solution(form, [(math.exp(r.w_value), r) for r in reductions])


def solve_y_pow_inv_y(m: float, cfg: Optional[SolveConfig] = None) -> EquationSolution:
    """``y^(1/y) = m`` for ``1 < m <= e^(1/e)``: ``y = exp(-W(-ln m))``."""
    form = EquationForm(FormTag.YPOWINVY, {"m": m})
    if not m > 1:
        raise DomainError(f"y^(1/y) = m is treated for m > 1 only, got {m!r}")
    reductions = _w_branches(-math.log(m), "y^(1/y) = m: -ln m", cfg)
    return _solution(form, [(math.exp(-r.w_value), r) for r in reductions])


def solve_plnx_q_over_x(p: float, q: float, r: float, cfg: Optional[SolveConfig] = None) -> EquationSolution:
    """
    ``p ln x + q/x = r`` through ``x = y q/p`` and ``W(-X) = -1/y``.

    Args:
        p: Nonzero coefficient of ln x
        q: Coefficient of 1/x, with q/p > 0
        r: Right-hand side

    Returns:
        EquationSolution with one or two positive roots

    Raises:
        DomainError: If q/p <= 0 or X = (q/p) e^(-r/p) exceeds 1/e
    """
    form = EquationForm(FormTag.PLNX_Q_OVER_X, {"p": p, "q": q, "r": r})
    ratio = q / p
    if not ratio > 0:
        raise DomainError(f"p ln x + q/x = r: substitution x = y q/p needs q/p > 0, got {ratio:.12g}")
    log_x = math.log(ratio) - r / p
    if log_x > 0:
        raise DomainError(
            f"p ln x + q/x = r: X = (q/p) e^(-r/p) = e^{log_x:.6g} exceeds 1/e, no real solution"
        )
    reductions = _w_branches(-math.exp(log_x), "p ln x + q/x = r: -(q/p) e^(-r/p)", cfg)
    return _solution(form, [(-ratio / r_.w_value, r_) for r_ in reductions])


def _plnx_qx_reductions(p: float, q: float, r: float, cfg: Optional[SolveConfig]) -> List[Reduction]:
    ratio = q / p
    step = "p ln x + q x = r: (q/p) e^(r/p)"
    log_magnitude = math.log(abs(ratio)) + r / p
    if ratio > 0:
        if -EXP_LIMIT <= log_magnitude <= EXP_LIMIT:
            return _w_branches(math.exp(log_magnitude), step, cfg)
        result = w0_from_ln(log_magnitude, cfg)
        argument = math.inf if log_magnitude > 0 else math.exp(log_magnitude)
        return [Reduction(argument, Branch.PRINCIPAL, result.value, log_argument=log_magnitude)]
    if log_magnitude > 0:
        raise DomainError(f"{step} = -e^{log_magnitude:.6g} is below -1/e, no real solution")
    return _w_branches(-math.exp(log_magnitude), step, cfg)


def _checked_positive(roots: List[float], step: str) -> None:
    for root in roots:
        if not root > 0:
            raise DomainError(f"{step}: root {root!r} is not a positive x")


def solve_plnx_qx(p: float, q: float, r: float, cfg: Optional[SolveConfig] = None) -> EquationSolution:
    """``p ln x + q x = r`` through ``x = y p/q`` and ``y e^y = (q/p) e^(r/p)``."""
    form = EquationForm(FormTag.PLNX_QX, {"p": p, "q": q, "r": r})
    reductions = _plnx_qx_reductions(p, q, r, cfg)
    pairs = [(red.w_value * p / q, red) for red in reductions]
    _checked_positive([root for root, _ in pairs], "p ln x + q x = r")
    return _solution(form, pairs)


def solve_px_q_exp_rx(
    p: float, q: float, r: float, s: float, cfg: Optional[SolveConfig] = None
) -> EquationSolution:
    """``p x + q e^(r x) = s`` through ``z = e^(r x)``, i.e. ``(p/r) ln z + q z = s``."""
    form = EquationForm(FormTag.PX_Q_EXP_RX, {"p": p, "q": q, "r": r, "s": s})
    reductions = _plnx_qx_reductions(p / r, q, s, cfg)
    pairs = []
    for red in reductions:
        z = red.w_value * (p / r) / q
        if not z > 0:
            raise DomainError(f"p x + q e^(r x) = s: e^(r x) = {z!r} is not positive")
        pairs.append((math.log(z) / r, red))
    return _solution(form, pairs)


def solve_power_tower(x: float, cfg: Optional[SolveConfig] = None) -> EquationSolution:
    """Limit of ``x^x^x^...`` for ``1 <= x <= e^(1/e)``."""
    form = EquationForm(FormTag.TOWER, {"x": x})
    if x == 1:
        return EquationSolution(form, (1.0,), (Reduction(0.0, Branch.PRINCIPAL, 0.0),), 0.0)
    if not 1 < x <= TOWER_LIMIT * (1 + 4 * math.ulp(1.0)):
        raise DomainError(f"power tower is treated for 1 <= x <= e^(1/e), got {x!r}")
    inner = solve_y_pow_inv_y(min(x, TOWER_LIMIT), cfg)
    limit = inner.roots[0]
    return EquationSolution(form, (limit,), inner.reductions[:1], abs(form.lhs_minus_rhs(limit)))


def power_tower(x: float, cfg: Optional[SolveConfig] = None) -> float:
    return solve_power_tower(x, cfg).roots[0]


def solve(form: EquationForm, cfg: Optional[SolveConfig] = None) -> EquationSolution:
    """Dispatch an EquationForm to its solver."""
    solvers = {
        FormTag.YPOWY: solve_y_pow_y,
        FormTag.YPOWINVY: solve_y_pow_inv_y,
        FormTag.PLNX_Q_OVER_X: solve_plnx_q_over_x,
        FormTag.PLNX_QX: solve_plnx_qx,
        FormTag.PX_Q_EXP_RX: solve_px_q_exp_rx,
        FormTag.TOWER: solve_power_tower,
    }
    params = [form[name] for name in PARAMETERS[form.tag]]
    return solvers[form.tag](*params, cfg=cfg)
