"""Small-ball probabilities and certified brackets for the constants (kappa0, beta0).

beta0 is an infimum over an infinite sphere, so no point estimate is ever
reported: `estimate_beta0` returns a certified upper bound (the minimum over
an explicit probe family: basis directions, a kind-specific adversarial
direction, seeded random directions) together with the Paley-Zygmund lower
bound (1 - kappa0^2) / R_m^2.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy import special

from . import dictionaries as dic
from .dictionaries import Dictionary
from .errors import ParameterError, UnsupportedDictionaryError
from .fejer import fejer_coefficients
from .model import GRID_PER_DIM, ModelFunction, norms, support_probability, sup_ratio

_BISECT_STEPS = 48


# ----- superlevel-set measures -------------------------------------------------------


def _grid_for(dico: Dictionary) -> np.ndarray:
    grid = np.linspace(dico.domain.lower, dico.domain.upper, GRID_PER_DIM * dico.dim + 1)
    if dico.kind == dic.PIECEWISE_POLY:
        grid = np.union1d(grid, dico.breakpoints())
    return grid


def _pair_h(
    dico: Dictionary,
    coeffs: np.ndarray,
    thresholds: np.ndarray,
    x: np.ndarray,
    cols: np.ndarray,
) -> np.ndarray:
    """|f_col(x)| - threshold_col for paired arrays of points and column indices."""
    phi = dico.design_matrix(x)
    vals = np.einsum("ij,ji->i", phi, coeffs[:, cols])
    return np.abs(vals) - thresholds[cols]


def superlevel_probabilities(
    dico: Dictionary, coeff_matrix: np.ndarray, kappa: float
) -> np.ndarray:
    """P(|f_j(X)| >= kappa ||f_j||_2) for every coefficient column f_j, batched.

    Exact cell counting for the piecewise-constant kinds.  For the smooth
    kinds each superlevel set is delimited by sign-change bracketing of
    |f| - threshold on a 64*D grid (plus partition breakpoints); all brackets
    of all columns are bisected simultaneously and segment membership is
    decided at segment midpoints.  Deterministic: no sampling anywhere.
    """
    if kappa <= 0:
        raise ParameterError(f"kappa must be positive, got {kappa}")
    coeff_matrix = np.asarray(coeff_matrix, dtype=float)
    if coeff_matrix.ndim == 1:
        coeff_matrix = coeff_matrix[:, None]
    if coeff_matrix.shape[0] != dico.dim:
        raise ParameterError(
            f"coefficient matrix must have {dico.dim} rows, got {coeff_matrix.shape[0]}"
        )
    l2 = np.linalg.norm(coeff_matrix, axis=0)
    if np.any(l2 == 0.0):
        raise ParameterError("small-ball probability of the zero function is undefined")
    thresholds = kappa * l2

    if dico.kind in (dic.HISTOGRAM, dic.HAAR):
        cells = dico.design_matrix(dico.cell_midpoints()) @ coeff_matrix
        return (np.abs(cells) >= thresholds).mean(axis=0)

    lower, upper = dico.domain.lower, dico.domain.upper
    grid = _grid_for(dico)
    h = np.abs(dico.design_matrix(grid) @ coeff_matrix) - thresholds  # (n_grid, n_cols)
    n_cols = h.shape[1]

    # Brackets: strict sign changes, bisected in lockstep across all columns.
    sign = np.sign(h)
    change = sign[:-1] * sign[1:] < 0
    rows_list, cols_list = np.nonzero(change)
    lo = grid[rows_list].astype(float)
    hi = grid[rows_list + 1].astype(float)
    hlo = h[rows_list, cols_list].copy()
    for _ in range(_BISECT_STEPS):
        if len(lo) == 0:
            break
        mid = 0.5 * (lo + hi)
        hmid = _pair_h(dico, coeff_matrix, thresholds, mid, cols_list)
        go_left = (hlo < 0) != (hmid < 0)
        hi = np.where(go_left, mid, hi)
        lo = np.where(go_left, lo, mid)
        hlo = np.where(go_left, hlo, hmid)
    crossings = 0.5 * (lo + hi) if len(lo) else np.array([])

    # Exact zeros on the grid are crossings in their own right.
    zero_rows, zero_cols = np.nonzero(h == 0.0)

    # Assemble per-column segment edges and midpoints; one batched state query.
    edges_per_col: list[np.ndarray] = []
    mid_points: list[np.ndarray] = []
    mid_cols: list[np.ndarray] = []
    for j in range(n_cols):
        from_brackets = crossings[cols_list == j] if len(crossings) else np.array([])
        from_zeros = grid[zero_rows[zero_cols == j]]
        edges = np.concatenate(([lower], np.sort(np.concatenate((from_brackets, from_zeros))), [upper]))
        edges_per_col.append(edges)
        mids = 0.5 * (edges[:-1] + edges[1:])
        mid_points.append(mids)
        mid_cols.append(np.full(len(mids), j))
    all_mids = np.concatenate(mid_points)
    all_cols = np.concatenate(mid_cols)
    inside = _pair_h(dico, coeff_matrix, thresholds, all_mids, all_cols) >= 0

    measures = np.empty(n_cols)
    offset = 0
    length = upper - lower
    for j in range(n_cols):
        edges = edges_per_col[j]
        seg = edges[1:] - edges[:-1]
        state = inside[offset : offset + len(seg)]
        offset += len(seg)
        measures[j] = float(seg[state].sum()) / length
    return measures


def smallball_probability(f: ModelFunction, kappa: float) -> float:
    """P(|f(X)| >= kappa ||f||_2) under the uniform design on the domain."""
    return float(superlevel_probabilities(f.dictionary, f.coeffs, kappa)[0])


# ----- beta0 bracket -----------------------------------------------------------------


@dataclass(frozen=True)
class SmallBallEstimate:
    """Certified bracket for beta0 at a fixed kappa0 over one dictionary."""

    kappa0: float
    beta0_upper: float
    beta0_lower: float
    probed_directions: int
    worst_direction: ModelFunction
    worst_direction_tag: str

    def v0_bracket(self) -> tuple[float, float]:
        """Bracket for the rate constant V0 = beta0^-2 kappa0^-4."""
        return (
            self.beta0_upper**-2 * self.kappa0**-4,
            self.beta0_lower**-2 * self.kappa0**-4,
        )

    def csv_row(self) -> dict:
        return {
            "kappa0": self.kappa0,
            "beta0_upper": self.beta0_upper,
            "beta0_lower": self.beta0_lower,
            "D": self.worst_direction.dictionary.dim,
            "kind": self.worst_direction.dictionary.kind,
            "worst_direction_tag": self.worst_direction_tag,
        }


def _adversarial_probes(dico: Dictionary) -> list[tuple[str, np.ndarray]]:
    if dico.kind == dic.FOURIER and dico.dim >= 3:
        l = (dico.dim - 1) // 2
        return [("fejer", fejer_coefficients(l))]
    if dico.kind == dic.HISTOGRAM:
        e = np.zeros(dico.dim)
        e[0] = 1.0
        return [("indicator", e)]
    if dico.kind == dic.HAAR:
        # Normalized indicator of the first finest cell (it lies in the span).
        row = dico.design_matrix(dico.cell_midpoints()[:1])[0]
        return [("indicator", row / np.sqrt(dico.dim))]
    if dico.kind == dic.PIECEWISE_POLY:
        e = np.zeros(dico.dim)
        e[dico.degree] = 1.0
        return [("top_degree_cell", e)]
    return []


def estimate_beta0(
    dico: Dictionary,
    kappa0: float,
    n_random_directions: int = 512,
    seed: int = 0,
) -> SmallBallEstimate:
    """Bracket beta0 at kappa0: probe minimum above, Paley-Zygmund below.

    Probes: every basis direction, the kind-specific adversarial direction
    (Fejer kernel / single-cell indicator / top-degree cell polynomial), and
    `n_random_directions` seeded uniform directions on the coefficient sphere.
    """
    if not 0.0 < kappa0 < 1.0:
        raise ParameterError(f"kappa0 must lie in (0, 1), got {kappa0}")
    if n_random_directions < 0:
        raise ParameterError("n_random_directions must be >= 0")

    tags = [f"basis:{k + 1}" for k in range(dico.dim)]
    columns = [np.eye(dico.dim)]
    for tag, coeffs in _adversarial_probes(dico):
        tags.append(tag)
        columns.append(coeffs[:, None])
    if n_random_directions:
        rng = np.random.default_rng(seed)
        raw = rng.standard_normal((dico.dim, n_random_directions))
        raw /= np.linalg.norm(raw, axis=0)
        tags.extend(f"random:{i}" for i in range(n_random_directions))
        columns.append(raw)

    matrix = np.hstack(columns)
    probs = superlevel_probabilities(dico, matrix, kappa0)
    worst = int(np.argmin(probs))

    r_m = sup_ratio(dico)
    return SmallBallEstimate(
        kappa0=kappa0,
        beta0_upper=float(probs[worst]),
        beta0_lower=(1.0 - kappa0**2) / r_m**2,
        probed_directions=len(tags),
        worst_direction=ModelFunction(dico, matrix[:, worst]),
        worst_direction_tag=tags[worst],
    )


def paley_zygmund_lower(f: ModelFunction, kappa: float, sup: float | None = None) -> float:
    """(1 - kappa^2) ||f||_2^2 / ||f||_inf^2, the anti-concentration floor for f."""
    if not 0.0 < kappa < 1.0:
        raise ParameterError(f"kappa must lie in (0, 1), got {kappa}")
    if sup is None:
        sup = norms(f).sup
    return (1.0 - kappa**2) * f.l2**2 / sup**2


# ----- norm-ratio caps on (kappa0, beta0) ---------------------------------------------


def norm_ratio_caps(
    dico: Dictionary, probes: Sequence[ModelFunction], q_list: Iterable[float] = ()
) -> dict:
    """Upper caps on the small-ball constants implied by a probe family.

    For every probe f: beta0 <= P(f != 0), kappa0 <= ||f||_inf/||f||_2 and
    beta0 * kappa0^q <= (||f||_q/||f||_2)^q.  Zero probes are skipped with a
    warning.  Models containing the constants additionally cap kappa0 at 1.
    """
    q_list = [float(q) for q in q_list]
    support_cap = np.inf
    kappa_cap = np.inf
    q_caps = {q: np.inf for q in q_list}
    used = 0
    for f in probes:
        if np.abs(f.coeffs).max() == 0.0:
            warnings.warn("skipping zero probe in norm_ratio_caps", stacklevel=2)
            continue
        used += 1
        report = norms(f, q_list)
        support_cap = min(support_cap, support_probability(f))
        kappa_cap = min(kappa_cap, report.sup / report.l2)
        for q in q_list:
            q_caps[q] = min(q_caps[q], (report.lq[q] / report.l2) ** q)
    # Every family here contains the constants (father/degree-0/constant term).
    kappa_cap = min(kappa_cap, 1.0)
    return {
        "probes_used": used,
        "beta0_cap": float(support_cap),
        "kappa0_cap": float(kappa_cap),
        "q_caps": {q: float(v) for q, v in q_caps.items()},
        "beta0_kappa0_sq_cap": 1.0,
    }


# ----- weighted-coefficient smoothness classes ----------------------------------------


@dataclass(frozen=True)
class LambdaClass:
    """Functions with sum_k k^nu |coeff_k| <= l1 and sup norm >= l2."""

    nu: float
    l1: float
    l2: float

    def __post_init__(self):
        if self.nu <= 0 or self.l1 <= 0 or self.l2 <= 0:
            raise ParameterError("LambdaClass requires nu, l1, l2 all positive")


def lambda_norm(f, nu: float) -> float:
    """Weighted coefficient norm sum_{k=1}^D k^nu |coeff_k| (trigonometric models).

    Accepts a ModelFunction over a fourier dictionary or a raw coefficient
    sequence already in the interleaved index order.
    """
    if isinstance(f, ModelFunction):
        if f.dictionary.kind != dic.FOURIER:
            raise UnsupportedDictionaryError(
                f"lambda_norm requires a fourier dictionary, got {f.dictionary.kind}"
            )
        coeffs = f.coeffs
    else:
        coeffs = np.asarray(f, dtype=float)
    k = np.arange(1, len(coeffs) + 1, dtype=float)
    return float(np.sum(k**nu * np.abs(coeffs)))


@dataclass(frozen=True)
class MembershipReport:
    member: bool
    norm_margin: float  # l1 - lambda_norm(f); >= 0 when the budget holds
    sup_margin: float  # ||f||_inf - l2; >= 0 when the floor holds
    lambda_norm: float
    sup: float


def lambda_membership(f: ModelFunction, cls: LambdaClass) -> MembershipReport:
    """Membership of f in the class, with both constraint margins."""
    lam = lambda_norm(f, cls.nu)
    sup = norms(f).sup
    return MembershipReport(
        member=bool(lam <= cls.l1 and sup >= cls.l2),
        norm_margin=cls.l1 - lam,
        sup_margin=sup - cls.l2,
        lambda_norm=lam,
        sup=sup,
    )


def zeta_even(nu: float) -> float:
    """C_nu = sum_{k >= 1} k^(-2 nu); finite iff nu > 1/2."""
    if nu <= 0.5:
        raise ParameterError(f"sum k^(-2 nu) diverges for nu <= 1/2, got nu={nu}")
    return float(special.zeta(2.0 * nu))


def uniform_smallball_lower(cls: LambdaClass, kappa0: float) -> float:
    """Uniform small-ball floor over the class: C_nu^-2 l2^2 l1^-4 (1-kappa0^2)/4."""
    if not 0.0 < kappa0 < 1.0:
        raise ParameterError(f"kappa0 must lie in (0, 1), got {kappa0}")
    c_nu = zeta_even(cls.nu)
    return (1.0 - kappa0**2) * cls.l2**2 / (4.0 * c_nu**2 * cls.l1**4)


def sobolev_q_threshold(gamma: float, nu: float, l1: float) -> float:
    """Largest Q whose gamma-smooth coefficient ball fits inside the class budget."""
    if gamma <= nu + 0.5:
        raise ParameterError(f"inclusion requires gamma > nu + 1/2, got gamma={gamma}, nu={nu}")
    return l1**2 / float(special.zeta(2.0 * (gamma - nu)))


def sobolev_inclusion_check(gamma: float, Q: float, nu: float, l1: float) -> bool:
    """True when every f with sum k^(2 gamma) coeff_k^2 <= Q has lambda_norm <= l1."""
    if Q < 0:
        raise ParameterError("Q must be nonnegative")
    return Q <= sobolev_q_threshold(gamma, nu, l1)


def sample_lambda_members(
    cls: LambdaClass, dico: Dictionary, count: int, seed: int = 0, max_tries: int = 200
) -> list[ModelFunction]:
    """Random members of the class inside span(dico), by rejection.

    Gaussian coefficients with decaying scale are rescaled to (nearly) exhaust
    the weighted budget, then rejected unless the sup-norm floor holds.
    """
    if dico.kind != dic.FOURIER:
        raise UnsupportedDictionaryError("lambda classes are defined over fourier dictionaries")
    rng = np.random.default_rng(seed)
    k = np.arange(1, dico.dim + 1, dtype=float)
    members: list[ModelFunction] = []
    for _ in range(count * max_tries):
        if len(members) >= count:
            break
        c = rng.standard_normal(dico.dim) / k ** (cls.nu + 0.5)
        lam = np.sum(k**cls.nu * np.abs(c))
        if lam == 0.0:
            continue
        f = ModelFunction(dico, c * (cls.l1 / lam) * rng.uniform(0.8, 1.0))
        if lambda_norm(f, cls.nu) <= cls.l1 and norms(f).sup >= cls.l2:
            members.append(f)
    if len(members) < count:
        raise ParameterError(
            f"rejection sampling produced only {len(members)}/{count} members; "
            "loosen l2 or enlarge the dictionary"
        )
    return members
