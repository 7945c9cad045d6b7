"""Coulomb-plus-linear radial spectra.

Solves ``(-hbar^2/2m0 laplacian - alpha/r + k r) phi = eps phi`` in the
partial wave ``l`` through the reduced radial function ``u = r R(r)`` on
``(0, R)`` with Dirichlet ends. Second-order central differences give a
symmetric tridiagonal matrix whose lowest eigenvalues are found by Sturm
bisection; one grid halving feeds a Richardson extrapolation.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import mpmath
import numpy as np

from . import kernels
from .opkernel import NATURAL, DomainError

MIN_POINTS = 100
MAX_LEVELS = 20
TAIL_FRACTION = 0.1
BOX_WEIGHT_LIMIT = 1e-8


class NoBoundStateError(DomainError):
    """The potential has no bound states (k = 0 and alpha <= 0)."""


class BoxSizeWarning(UserWarning):
    pass


@dataclass(frozen=True)
class RadialProblem:
    alpha: float
    k: float
    l: int = 0
    sigma3: int = 1
    units: object = NATURAL
    R: float | None = None
    n: int = 4000

    def __post_init__(self):
        if self.k < 0:
            raise DomainError(f"linear slope k must be nonnegative, got {self.k}")
        if int(self.l) != self.l or self.l < 0:
            raise DomainError(f"l must be a nonnegative integer, got {self.l}")
        if self.sigma3 not in (1, -1):
            raise DomainError(f"sigma3 must be +1 or -1, got {self.sigma3}")
        if int(self.n) != self.n or self.n < MIN_POINTS:
            raise DomainError(f"need at least {MIN_POINTS} interior points, got {self.n}")
        if self.R is not None and not self.R > 0:
            raise DomainError(f"box radius must be positive, got {self.R}")
        if self.k == 0 and self.alpha <= 0:
            raise NoBoundStateError("no bound states: k = 0 requires alpha > 0")

    @classmethod
    def from_mapping(cls, mapping, l=0, sigma3=1, **kw):
        """Branch of a :class:`oscal.gauge.CornellMapping` selected by ``sigma3``."""
        alpha = mapping.alpha[0 if sigma3 == 1 else 1]
        return cls(alpha, mapping.k, l, sigma3, **kw)

    @property
    def box_radius(self):
        """``R`` if given, else 100 Bohr radii or 20 linear lengths, whichever is smaller."""
        if self.R is not None:
            return float(self.R)
        u = self.units
        choices = []
        if self.alpha > 0:
            choices.append(100.0 * u.hbar**2 / (u.m0 * self.alpha))
        if self.k > 0:
            choices.append(20.0 * (u.hbar**2 / (u.m0 * self.k)) ** (1 / 3))
        return min(choices)

    def with_grid(self, n=None, R=None):
        return RadialProblem(self.alpha, self.k, self.l, self.sigma3, self.units, R or self.box_radius, n or self.n)


@dataclass
class Grid:
    R: float
    n: int
    h: float


def discretize(problem, n=None):
    """Diagonal, off-diagonal (length ``n``, last entry unused) and grid."""
    n = int(n or problem.n)
    R = problem.box_radius
    h = R / (n + 1)
    u = problem.units
    r = h * np.arange(1, n + 1)
    kin = u.hbar**2 / (2 * u.m0 * h * h)
    veff = -problem.alpha / r + problem.k * r + u.hbar**2 * problem.l * (problem.l + 1) / (2 * u.m0 * r * r)
    d = 2 * kin + veff
    e = np.full(n, -kin)
    e[-1] = 0.0
    return np.ascontiguousarray(d), np.ascontiguousarray(e), Grid(R, n, h)


def _eigenvector(d, e, value, iterations=3):
    """Inverse iteration for the eigenvector of ``value``."""
    n = d.shape[0]
    shift = np.ascontiguousarray(d - value)
    x = np.ones(n) / math.sqrt(n)
    off = np.ascontiguousarray(e)
    for _ in range(iterations):
        x = np.asarray(kernels.tridiag_solve(shift, off, np.ascontiguousarray(x)))
        x /= np.linalg.norm(x)
    return x


def tail_weight(vec, fraction=TAIL_FRACTION):
    n = vec.shape[0]
    cut = int(n * (1 - fraction))
    return float(np.sum(vec[cut:] ** 2) / np.sum(vec**2))


@dataclass
class SpectrumResult:
    eigenvalues: np.ndarray
    coarse: np.ndarray
    fine: np.ndarray
    richardson_estimate: np.ndarray
    estimated_error: np.ndarray
    grid: dict
    tail_weights: list
    box_warning: bool
    problem: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "eigenvalues": self.eigenvalues.tolist(),
            "coarse": self.coarse.tolist(),
            "fine": self.fine.tolist(),
            "richardson_estimate": self.richardson_estimate.tolist(),
            "estimated_error": self.estimated_error.tolist(),
            "grid": self.grid,
            "tail_weights": self.tail_weights,
            "box_warning": self.box_warning,
            "problem": self.problem,
        }


def lowest_levels(problem, n_levels, n=None):
    d, e, grid = discretize(problem, n)
    return np.asarray(kernels.bisect_lowest(d, e, n_levels)), d, e, grid


def solve_radial(problem, n_levels=3):
    """Lowest ``n_levels`` eigenvalues, extrapolated from grids ``h`` and ``h/2``.

    ``eigenvalues`` holds the extrapolated values; ``estimated_error`` is the
    size of the extrapolation correction.
    """
    if int(n_levels) != n_levels or not 1 <= n_levels <= MAX_LEVELS:
        raise DomainError(f"n_levels must be between 1 and {MAX_LEVELS}, got {n_levels}")
    coarse, _, _, g1 = lowest_levels(problem, n_levels)
    fine, d, e, g2 = lowest_levels(problem, n_levels, 2 * problem.n + 1)
    rich = (4 * fine - coarse) / 3
    err = np.abs(fine - coarse) / 3
    weights = [tail_weight(_eigenvector(d, e, v)) for v in fine]
    box_warning = weights[0] > BOX_WEIGHT_LIMIT
    if box_warning:
        warnings.warn(
            f"ground state carries weight {weights[0]:.2e} in the outer {TAIL_FRACTION:.0%} of the box; "
            "increase R",
            BoxSizeWarning,
            stacklevel=2,
        )
    meta = {"R": g1.R, "n": g1.n, "h": g1.h, "n_fine": g2.n, "h_fine": g2.h, "scheme": "central-2"}
    prob = {"alpha": problem.alpha, "k": problem.k, "l": problem.l, "sigma3": problem.sigma3}
    return SpectrumResult(rich, coarse, fine, rich, err, meta, weights, box_warning, prob)


# --- energy map -----------------------------------------------------------


@dataclass
class EnergyMap:
    a3: float
    branch: str
    E_plus: list
    E_minus: list
    mappable: list

    def values(self):
        if self.branch == "+":
            return self.E_plus
        if self.branch == "-":
            return self.E_minus
        return list(zip(self.E_plus, self.E_minus))


def energy_from_epsilon(eps, a3, units=NATURAL):
    """``E^2 = m0^2 c^4 + c^2 a3^2 + 2 m0 c^2 eps``; ``None`` if negative."""
    m0, c = units.m0, units.c
    rad = m0**2 * c**4 + c**2 * a3**2 + 2 * m0 * c**2 * eps
    if rad < 0:
        return None
    return math.sqrt(rad)


def epsilon_from_energy(E, a3, units=NATURAL):
    m0, c = units.m0, units.c
    return (E**2 - m0**2 * c**4 - c**2 * a3**2) / (2 * m0 * c**2)


def map_energy(spectrum, a3, branch="both", units=NATURAL):
    if branch not in ("+", "-", "both"):
        raise DomainError(f"branch must be '+', '-' or 'both', got {branch!r}")
    levels = spectrum.eigenvalues if isinstance(spectrum, SpectrumResult) else np.atleast_1d(spectrum)
    plus, minus, ok = [], [], []
    for eps in levels:
        E = energy_from_epsilon(float(eps), a3, units)
        ok.append(E is not None)
        plus.append(E)
        minus.append(None if E is None else -E)
    return EnergyMap(a3, branch, plus, minus, ok)


# --- analytic references --------------------------------------------------


def _airy_series(x, terms):
    """Ai(x) from its Maclaurin series, in the current mpmath precision."""
    x = mpmath.mpf(x)
    c1 = 1 / (mpmath.power(3, mpmath.mpf(2) / 3) * mpmath.gamma(mpmath.mpf(2) / 3))
    c2 = 1 / (mpmath.power(3, mpmath.mpf(1) / 3) * mpmath.gamma(mpmath.mpf(1) / 3))
    x3 = x**3
    f = g = mpmath.mpf(0)
    tf, tg = mpmath.mpf(1), x
    for j in range(terms):
        f += tf
        g += tg
        # ratios of consecutive series terms
        tf *= x3 / ((3 * j + 2) * (3 * j + 3))
        tg *= x3 / ((3 * j + 3) * (3 * j + 4))
    return c1 * f - c2 * g


def airy_ai(x, digits=50):
    """Ai(x) for moderate ``|x|`` by the power series at 50+ significant digits."""
    ax = abs(float(x))
    # enough terms for the factorials to overtake |x|^3j, and digits for the cancellation
    terms = int(30 + 2 * ax**1.5 + 4 * ax)
    with mpmath.workdps(digits + int(ax**1.5)):
        return float(_airy_series(x, terms))


def airy_zeros(count, step=0.05, tol=1e-13):
    """Magnitudes of the first ``count`` zeros of Ai on the negative axis."""
    zeros = []
    x, fx = 0.0, airy_ai(0.0)
    while len(zeros) < count:
        y = x - step
        fy = airy_ai(y)
        if fx * fy < 0:
            lo, hi, flo = y, x, fy
            while hi - lo > tol:
                mid = 0.5 * (lo + hi)
                fm = airy_ai(mid)
                if fm * flo < 0:
                    hi = mid
                else:
                    lo, flo = mid, fm
            zeros.append(-0.5 * (lo + hi))
        x, fx = y, fy
    return zeros


def reference_oracles(kind, alpha=1.0, k=1.0, l=0, count=3, units=NATURAL):
    """Closed-form levels: ``"coulomb"`` (k = 0) or ``"airy"`` (alpha = 0, l = 0)."""
    u = units
    if kind == "coulomb":
        if alpha <= 0:
            raise NoBoundStateError("coulomb levels need alpha > 0")
        return [-u.m0 * alpha**2 / (2 * u.hbar**2 * (nr + l + 1) ** 2) for nr in range(count)]
    if kind == "airy":
        if l != 0:
            raise DomainError("the Airy oracle only covers l = 0")
        if k <= 0:
            raise NoBoundStateError("airy levels need k > 0")
        scale = (u.hbar**2 * k**2 / (2 * u.m0)) ** (1 / 3)
        return [scale * a for a in airy_zeros(count)]
    raise DomainError(f"unknown oracle kind {kind!r}")


# --- convergence ----------------------------------------------------------


@dataclass
class ConvergenceStudy:
    h: list
    values: list
    differences: list
    order: float
    monotone: bool
    reference: float | None = None

    def to_dict(self):
        return vars(self).copy()


def halving_grids(n0, count):
    """Interior point counts whose spacings halve: ``(n0 + 1) 2^i - 1``."""
    return [(n0 + 1) * 2**i - 1 for i in range(count)]


def convergence_study(problem, grid_list, level=0, reference=None):
    """Fitted order of the level-``level`` eigenvalue over successively halved grids.

    Errors are measured against ``reference`` when given, else as the
    differences between consecutive grids.
    """
    if len(grid_list) < 3:
        raise DomainError("a convergence study needs at least three grids")
    R = problem.box_radius
    hs = [R / (n + 1) for n in grid_list]
    for a, b in zip(hs, hs[1:]):
        if not math.isclose(a / b, 2.0, rel_tol=1e-9):
            raise DomainError("grids must halve the spacing at each step")
    vals = [float(lowest_levels(problem, level + 1, n)[0][level]) for n in grid_list]
    if reference is None:
        errs = [abs(a - b) for a, b in zip(vals, vals[1:])]
        hfit = hs[:-1]
    else:
        errs = [abs(v - reference) for v in vals]
        hfit = hs
    monotone = all(b < a for a, b in zip(errs, errs[1:]))
    if not monotone:
        warnings.warn("errors do not decrease monotonically over the grid list", RuntimeWarning, stacklevel=2)
    order = float(np.polyfit(np.log(hfit), np.log(errs), 1)[0])
    return ConvergenceStudy(hs, vals, errs, order, monotone, reference)
