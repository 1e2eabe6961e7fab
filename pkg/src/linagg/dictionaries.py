"""Orthonormal dictionary families on an interval under the uniform design.

Four families are provided: the interleaved trigonometric (Fourier) basis,
regular histograms, piecewise shifted-Legendre polynomials on a regular
partition, and periodized Haar wavelets.  Each family is an orthonormal
basis of its span in L2 of the uniform probability measure on the domain,
so Euclidean geometry on coefficient vectors is exact L2 geometry.

Basis ordering conventions (they matter downstream, e.g. for the weighted
coefficient norms that assign weight k^nu to basis index k):

* fourier: phi_1 = 1, phi_{2k} = sqrt(2) cos(k x), phi_{2k+1} = sqrt(2) sin(k x).
* histogram: phi_i = sqrt(D) 1_{[(i-1)/D, i/D)}.
* piecewise_poly: cell-major, degrees 0..r inside each cell.
* haar: father function first, then levels j = 0..level left to right.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError

FOURIER = "fourier"
HISTOGRAM = "histogram"
PIECEWISE_POLY = "piecewise_poly"
HAAR = "haar"

KINDS = (FOURIER, HISTOGRAM, PIECEWISE_POLY, HAAR)

_PIECEWISE_KINDS = (HISTOGRAM, PIECEWISE_POLY, HAAR)
_CONSTANT_PIECE_KINDS = (HISTOGRAM, HAAR)


@dataclass(frozen=True)
class Domain:
    """A bounded interval carrying the uniform design distribution."""

    lower: float
    upper: float

    _CANONICAL = ((0.0, 1.0), (0.0, 2.0 * math.pi), (-math.pi, math.pi))

    def __post_init__(self):
        if not self.lower < self.upper:
            raise ParameterError(f"domain requires lower < upper, got [{self.lower}, {self.upper}]")
        if not any(
            abs(self.lower - a) < 1e-12 and abs(self.upper - b) < 1e-12 for a, b in self._CANONICAL
        ):
            raise ParameterError(
                "supported domains are [0, 1], [0, 2*pi] and [-pi, pi]; "
                f"got [{self.lower}, {self.upper}]"
            )

    @property
    def length(self) -> float:
        return self.upper - self.lower

    def contains(self, x: float) -> bool:
        return self.lower <= x <= self.upper

    def to_dict(self) -> dict:
        return {"lower": self.lower, "upper": self.upper}


UNIT_INTERVAL = Domain(0.0, 1.0)
FULL_CIRCLE = Domain(0.0, 2.0 * math.pi)
SYMMETRIC_CIRCLE = Domain(-math.pi, math.pi)


@dataclass(frozen=True)
class Dictionary:
    """Descriptor of one orthonormal family; immutable, evaluation is pure.

    `degree` is only meaningful for piecewise_poly (max polynomial degree r,
    so D = pieces * (r + 1)); `level` only for haar (resolution l, so
    D = 2**(l+1)).  Build instances through :func:`make_dictionary`, which
    validates the kind-specific invariants.
    """

    kind: str
    dim: int
    domain: Domain
    degree: int | None = None
    level: int | None = None

    # ----- structure helpers -------------------------------------------------

    @property
    def pieces(self) -> int:
        """Number of cells of the underlying regular partition (1 for fourier)."""
        if self.kind == HISTOGRAM:
            return self.dim
        if self.kind == PIECEWISE_POLY:
            return self.dim // (self.degree + 1)
        if self.kind == HAAR:
            return self.dim  # finest dyadic partition, 2**(level+1) cells
        return 1

    def breakpoints(self) -> np.ndarray:
        """Cell boundaries of the partition, including both domain endpoints."""
        return np.linspace(self.domain.lower, self.domain.upper, self.pieces + 1)

    def basis_sup_bound(self) -> float:
        """Exact value of max_k ||phi_k||_inf."""
        if self.kind == FOURIER:
            return 1.0 if self.dim == 1 else math.sqrt(2.0)
        if self.kind == HISTOGRAM:
            return math.sqrt(self.dim)
        if self.kind == PIECEWISE_POLY:
            return math.sqrt(self.pieces * (2 * self.degree + 1))
        return 2.0 ** (self.level / 2.0) if self.level > 0 or self.dim > 1 else 1.0

    # ----- evaluation ---------------------------------------------------------

    def design_matrix(self, x: np.ndarray) -> np.ndarray:
        """Evaluate all D basis functions at the points `x`; shape (len(x), D)."""
        x = np.asarray(x, dtype=float)
        if self.kind == FOURIER:
            return _fourier_design(x, self.dim, self.domain)
        if self.kind == HISTOGRAM:
            return _histogram_design(x, self.dim, self.domain)
        if self.kind == PIECEWISE_POLY:
            return _ppoly_design(x, self.dim, self.degree, self.domain)
        return _haar_design(x, self.level, self.domain)

    def basis_row(self, x: float) -> np.ndarray:
        """Basis values at a single point; shape (D,)."""
        return self.design_matrix(np.array([x]))[0]

    def cell_midpoints(self) -> np.ndarray:
        """Midpoints of the finest cells (piecewise kinds only)."""
        if self.kind not in _PIECEWISE_KINDS:
            raise ParameterError("cell midpoints only exist for piecewise kinds")
        n = self.pieces
        lo, length = self.domain.lower, self.domain.length
        return lo + (np.arange(n) + 0.5) * length / n

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "dim": self.dim, "domain": self.domain.to_dict()}
        if self.degree is not None:
            out["degree"] = self.degree
        if self.level is not None:
            out["level"] = self.level
        return out


# ----- constructors ------------------------------------------------------------


def make_dictionary(
    kind: str,
    dim: int | None = None,
    domain: Domain | None = None,
    degree: int | None = None,
    level: int | None = None,
) -> Dictionary:
    """Build a validated dictionary descriptor.

    fourier requires an odd `dim` and a 2*pi-length domain; histogram,
    piecewise_poly and haar live on [0, 1].  haar accepts either `level`
    (dim = 2**(level+1)) or a power-of-two `dim`; piecewise_poly requires
    `degree` and dim divisible by degree + 1.
    """
    if kind not in KINDS:
        raise ParameterError(f"unknown dictionary kind {kind!r}; expected one of {KINDS}")

    if kind == FOURIER:
        domain = domain or FULL_CIRCLE
        if abs(domain.length - 2.0 * math.pi) > 1e-12:
            raise ParameterError("fourier dictionaries require domain [0, 2*pi] or [-pi, pi]")
        if dim is None or dim < 1 or dim % 2 == 0:
            raise ParameterError(f"Fourier dimension must be odd and >= 1, got {dim}")
        return Dictionary(FOURIER, int(dim), domain)

    domain = domain or UNIT_INTERVAL
    if abs(domain.lower) > 1e-12 or abs(domain.upper - 1.0) > 1e-12:
        raise ParameterError(f"{kind} dictionaries live on [0, 1]")

    if kind == HISTOGRAM:
        if dim is None or dim < 1:
            raise ParameterError(f"histogram dimension must be >= 1, got {dim}")
        return Dictionary(HISTOGRAM, int(dim), domain)

    if kind == PIECEWISE_POLY:
        if degree is None or degree < 0:
            raise ParameterError("piecewise_poly requires a max degree >= 0")
        if dim is None or dim < degree + 1 or dim % (degree + 1) != 0:
            raise ParameterError(
                f"piecewise_poly dimension must be a positive multiple of degree+1={degree + 1}, got {dim}"
            )
        return Dictionary(PIECEWISE_POLY, int(dim), domain, degree=int(degree))

    # haar
    if level is None:
        if dim is None:
            raise ParameterError("haar requires either level or dim")
        if dim < 2 or dim & (dim - 1):
            raise ParameterError(f"haar dimension must be a power of two >= 2, got {dim}")
        level = int(math.log2(dim)) - 1
    elif level < 0:
        raise ParameterError(f"haar level must be >= 0, got {level}")
    return Dictionary(HAAR, 2 ** (int(level) + 1), domain, level=int(level))


def from_dict(spec: dict) -> Dictionary:
    """Inverse of Dictionary.to_dict (used by config parsing)."""
    dom = spec.get("domain")
    domain = Domain(dom["lower"], dom["upper"]) if dom else None
    return make_dictionary(
        spec["kind"],
        dim=spec.get("dim"),
        domain=domain,
        degree=spec.get("degree"),
        level=spec.get("level"),
    )


# ----- family evaluators ---------------------------------------------------------


def _fourier_design(x: np.ndarray, dim: int, domain: Domain) -> np.ndarray:
    out = np.empty((len(x), dim))
    out[:, 0] = 1.0
    n_freq = (dim - 1) // 2
    if n_freq:
        ang = np.outer(x, np.arange(1, n_freq + 1))
        rt2 = math.sqrt(2.0)
        out[:, 1::2] = rt2 * np.cos(ang)
        out[:, 2::2] = rt2 * np.sin(ang)
    return out


def _histogram_design(x: np.ndarray, dim: int, domain: Domain) -> np.ndarray:
    t = (x - domain.lower) / domain.length
    idx = np.clip(np.floor(t * dim).astype(int), 0, dim - 1)
    out = np.zeros((len(x), dim))
    out[np.arange(len(x)), idx] = math.sqrt(dim)
    return out


def _legendre_values(u: np.ndarray, max_degree: int) -> np.ndarray:
    """P_0..P_r at points u in [-1, 1] by the three-term recurrence; (len(u), r+1)."""
    vals = np.empty((len(u), max_degree + 1))
    vals[:, 0] = 1.0
    if max_degree >= 1:
        vals[:, 1] = u
    for j in range(1, max_degree):
        vals[:, j + 1] = ((2 * j + 1) * u * vals[:, j] - j * vals[:, j - 1]) / (j + 1)
    return vals


def _ppoly_design(x: np.ndarray, dim: int, degree: int, domain: Domain) -> np.ndarray:
    p = dim // (degree + 1)
    t = (x - domain.lower) / domain.length
    cell = np.clip(np.floor(t * p).astype(int), 0, p - 1)
    u = 2.0 * (t * p - cell) - 1.0
    leg = _legendre_values(u, degree)
    scale = np.sqrt(p * (2.0 * np.arange(degree + 1) + 1.0))
    out = np.zeros((len(x), dim))
    rows = np.arange(len(x))
    for j in range(degree + 1):
        out[rows, cell * (degree + 1) + j] = scale[j] * leg[:, j]
    return out


def _haar_design(x: np.ndarray, level: int, domain: Domain) -> np.ndarray:
    dim = 2 ** (level + 1)
    t = np.mod((x - domain.lower) / domain.length, 1.0)  # periodized family
    out = np.zeros((len(x), dim))
    out[:, 0] = 1.0
    rows = np.arange(len(x))
    for j in range(level + 1):
        scaled = t * 2**j
        k = np.clip(np.floor(scaled).astype(int), 0, 2**j - 1)
        sign = np.where(scaled - k < 0.5, 1.0, -1.0)
        out[rows, 2**j + k] = 2.0 ** (j / 2.0) * sign
    return out


# ----- orthonormality self-test ---------------------------------------------------


def gram_matrix(dico: Dictionary) -> np.ndarray:
    """Gram matrix of the basis under the uniform design.

    Exact for every kind: piecewise-constant kinds integrate over their finest
    cells, piecewise polynomials use per-cell Gauss rules of sufficient order,
    and the trigonometric family uses the equispaced midpoint rule, which is
    exact for trigonometric polynomials of degree below the point count.
    """
    if dico.kind in _CONSTANT_PIECE_KINDS:
        mids = dico.cell_midpoints()
        phi = dico.design_matrix(mids)
        return phi.T @ phi / len(mids)
    if dico.kind == PIECEWISE_POLY:
        nodes, weights = np.polynomial.legendre.leggauss(dico.degree + 1)
        p = dico.pieces
        edges = dico.breakpoints()
        half = 0.5 * (edges[1:] - edges[:-1])[:, None]
        x = (0.5 * (edges[1:] + edges[:-1])[:, None] + half * nodes).ravel()
        w = np.broadcast_to(half * weights, (p, len(nodes))).ravel()
        phi = dico.design_matrix(x)
        return (phi * w[:, None]).T @ phi / dico.domain.length
    # fourier: products have trigonometric degree <= dim - 1 < m
    m = max(2 * dico.dim, 8)
    x = dico.domain.lower + (np.arange(m) + 0.5) * dico.domain.length / m
    phi = dico.design_matrix(x)
    return phi.T @ phi / m


def gram_identity_error(dico: Dictionary) -> float:
    """Largest absolute deviation of the Gram matrix from the identity."""
    g = gram_matrix(dico)
    return float(np.abs(g - np.eye(dico.dim)).max())
