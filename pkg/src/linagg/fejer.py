"""Fejer kernel: the localized trigonometric direction that caps small-ball constants.

Two standard indexings of this kernel family float around.  This module pins
the coefficient form

    F_l(t) = sum_{|k| <= l-1} (1 - |k|/l) e^{ikt},

which is the convention under which the invariants we enforce hold exactly:
F_l >= 0, unit mean (||F_l||_1 = 1 under the uniform design on a period) and

    ||F_l||_2^2 = 1 + (2/l^2) * sum_{j=1}^{l-1} j^2.

Its closed form is sin^2(l t/2) / (l sin^2(t/2)) with peak F_l(0) = l.  The
shifted convention sin^2((l+1)t/2) / ((l+1) sin^2(t/2)) (peak l+1) indexes the
same family one step up: shifted_l = coefficient_(l+1).  The classical tail
estimate sup_{eps <= |t| <= pi} F <= (1/(l+1)) (pi/eps)^2 is stated for the
shifted convention, and :func:`fejer_tail_bound` keeps that normalization; its
companion check therefore targets the order-(l+1) coefficient kernel.
"""

from __future__ import annotations

import math

import numpy as np

from .dictionaries import SYMMETRIC_CIRCLE, Domain, make_dictionary
from .errors import ParameterError
from .model import ModelFunction


def fejer_eval(order: int, t: np.ndarray) -> np.ndarray:
    """Closed form sin^2(order*t/2) / (order*sin^2(t/2)), with value `order` at t = 0 (mod 2*pi)."""
    t = np.asarray(t, dtype=float)
    s = np.sin(0.5 * t)
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = np.sin(0.5 * order * t) ** 2 / (order * s**2)
    return np.where(np.abs(s) < 1e-150, float(order), vals)


def fejer_coefficients(l: int) -> np.ndarray:
    """Coefficients of F_l in an interleaved trigonometric dictionary of dim 2l+1.

    Constant coefficient 1, cosine-k coefficient sqrt(2)(1 - k/l) for
    k = 1..l-1, all sine coefficients 0.  For l = 1 the sum is empty and
    F_1 is the constant function 1.
    """
    if l < 1:
        raise ParameterError(f"Fejer order must be >= 1, got {l}")
    coeffs = np.zeros(2 * l + 1)
    coeffs[0] = 1.0
    for k in range(1, l):
        coeffs[2 * k - 1] = math.sqrt(2.0) * (1.0 - k / l)
    return coeffs


def fejer_as_model_function(l: int, domain: Domain = SYMMETRIC_CIRCLE) -> ModelFunction:
    """F_l as a member of the dim-(2l+1) trigonometric dictionary."""
    dico = make_dictionary("fourier", dim=2 * l + 1, domain=domain)
    return ModelFunction(dico, fejer_coefficients(l))


def fejer_l2_sq(l: int) -> float:
    """Exact squared L2 norm: 1 + (2/l^2) sum_{j=1}^{l-1} j^2  (~ 2l/3)."""
    if l < 1:
        raise ParameterError(f"Fejer order must be >= 1, got {l}")
    j = np.arange(1, l)
    return 1.0 + 2.0 / l**2 * float((j**2).sum())


def fejer_tail_bound(l: int, epsilon: float) -> float:
    """Tail envelope (1/(l+1)) (pi/epsilon)^2 for the kernel away from its peak.

    Valid for the order-(l+1) coefficient kernel (see module docstring); with
    the pinned coefficient convention the same bound holds with l in place of
    l+1.  Requires 0 < epsilon <= pi.
    """
    if l < 1:
        raise ParameterError(f"Fejer order must be >= 1, got {l}")
    if not 0.0 < epsilon <= math.pi + 1e-15:
        raise ParameterError(f"epsilon must lie in (0, pi], got {epsilon}")
    return (math.pi / epsilon) ** 2 / (l + 1)


def fejer_tail_check(l: int, epsilon: float, n_grid: int = 20000) -> tuple[float, float, bool]:
    """Numerical companion of :func:`fejer_tail_bound`.

    Returns (tail_sup, bound, ok) where tail_sup is the grid supremum of the
    order-(l+1) kernel over epsilon <= |t| <= pi.
    """
    bound = fejer_tail_bound(l, epsilon)
    t = np.linspace(epsilon, math.pi, n_grid)
    tail_sup = float(fejer_eval(l + 1, t).max())
    return tail_sup, bound, tail_sup <= bound * (1.0 + 1e-12)
