"""
Lambert W by quadratic correction.

The numeric modules (core_iteration, lambertw, baselines, equations) do not
need Django; serializers, writers, tasks and the management commands do.
"""
from .exceptions import ConvergenceError, DomainError, LambertError
from .lambertw import Branch, Method, lambert_w, w0, w0_from_ln, w_negative

__all__ = [
    "Branch",
    "ConvergenceError",
    "DomainError",
    "LambertError",
    "Method",
    "lambert_w",
    "w0",
    "w0_from_ln",
    "w_negative",
]
