"""Quadrature and root-bracketing helpers for means under a uniform design.

Policy: composite Gauss-Legendre with 64 nodes per panel, starting from a
caller-chosen panel count and doubling until two successive values agree to
1e-10 relative, with a hard cap of 2**20 total nodes.  Integrands with known
kinks (absolute values, cell boundaries) pass the kink locations as seed
breakpoints so every refinement keeps panels aligned with them.
"""

from __future__ import annotations

from typing import Callable, NamedTuple, Sequence

import numpy as np

from .errors import NumericError

NODES_PER_PANEL = 64
MAX_TOTAL_NODES = 2**20
REL_TOL = 1e-10

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(NODES_PER_PANEL)


class QuadResult(NamedTuple):
    value: float
    converged: bool
    nodes: int


def panel_rule(breaks: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights for the panels delimited by `breaks`."""
    lo = breaks[:-1, None]
    hi = breaks[1:, None]
    half = 0.5 * (hi - lo)
    x = (0.5 * (hi + lo) + half * _GL_NODES).ravel()
    w = np.broadcast_to(half * _GL_WEIGHTS, (len(breaks) - 1, NODES_PER_PANEL)).ravel()
    return x, w


def _breaks(lower: float, upper: float, n_panels: int, seeds: Sequence[float]) -> np.ndarray:
    pts = np.linspace(lower, upper, n_panels + 1)
    if len(seeds):
        pts = np.union1d(pts, np.asarray(seeds, dtype=float))
        pts = pts[(pts >= lower) & (pts <= upper)]
    return pts


def uniform_mean(
    fun: Callable[[np.ndarray], np.ndarray],
    lower: float,
    upper: float,
    initial_panels: int,
    seeds: Sequence[float] = (),
    strict: bool = False,
) -> QuadResult:
    """Mean of `fun` against Uniform(lower, upper) under the doubling policy.

    `fun` must accept a 1-d array of points and return values of the same
    shape.  With strict=True a non-converged result raises NumericError
    instead of being returned with converged=False.
    """
    length = upper - lower
    n_panels = max(1, int(initial_panels))
    prev = None
    nodes_used = 0
    while True:
        breaks = _breaks(lower, upper, n_panels, seeds)
        x, w = panel_rule(breaks)
        nodes_used = len(x)
        value = float(np.dot(w, fun(x)) / length)
        if prev is not None:
            scale = max(1.0, abs(value))
            if abs(value - prev) <= REL_TOL * scale:
                return QuadResult(value, True, nodes_used)
        if 2 * nodes_used > MAX_TOTAL_NODES:
            if strict:
                raise NumericError(
                    "quadrature did not stabilize within the node cap",
                    {"last_value": value, "previous": prev, "nodes": nodes_used},
                )
            return QuadResult(value, prev is None, nodes_used)
        prev = value
        n_panels *= 2


def bracket_roots(
    fun: Callable[[float], float],
    grid: np.ndarray,
    values: np.ndarray,
    xtol: float = 1e-10,
) -> list[float]:
    """Roots of `fun` located by sign changes of `values` on `grid`, bisected.

    Grid points where the value is exactly zero are returned as-is.  Each
    sign-change cell is bisected to absolute tolerance `xtol` in x.
    """
    roots = [float(g) for g, v in zip(grid, values) if v == 0.0]
    sign = np.sign(values)
    for i in np.nonzero(sign[:-1] * sign[1:] < 0)[0]:
        lo, hi = float(grid[i]), float(grid[i + 1])
        flo = float(values[i])
        while hi - lo > xtol:
            mid = 0.5 * (lo + hi)
            fmid = fun(mid)
            if fmid == 0.0:
                lo = hi = mid
                break
            if (flo < 0) != (fmid < 0):
                hi = mid
            else:
                lo, flo = mid, fmid
        roots.append(0.5 * (lo + hi))
    return sorted(roots)


def superlevel_measure(
    fun: Callable[[float], float],
    lower: float,
    upper: float,
    grid: np.ndarray,
    values: np.ndarray,
    xtol: float = 1e-10,
) -> float:
    """Probability (uniform on [lower, upper]) of the set where fun >= 0.

    `values` are fun evaluated on `grid`, which must span [lower, upper]
    inclusively and be fine enough to expose every crossing.
    """
    crossings = bracket_roots(fun, grid, values, xtol=xtol)
    edges = np.concatenate(([lower], np.asarray(crossings), [upper]))
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        if b <= a:
            continue
        mid = 0.5 * (a + b)
        inside = fun(mid) >= 0
        if not inside:
            # Point values on the grid win over the midpoint for segments
            # that contain grid points (guards against flat near-zero lobes).
            sel = (grid > a) & (grid < b)
            if sel.any() and values[sel].max() > 0:
                inside = True
        if inside:
            total += b - a
    return total / (upper - lower)
