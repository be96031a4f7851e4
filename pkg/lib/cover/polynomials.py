"""Homogeneous trivariate forms, their restrictions to lines, and root clusters.

A form of degree d is stored densely as a (d+1) x (d+1) complex array C
with C[a, b] the coefficient of x^a y^b z^(d-a-b); entries with a + b > d
are zero. Restrictions to a line chart are ascending univariate
polynomials in the chart parameter.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
from numpy.polynomial import Polynomial
from numpy.polynomial import polynomial as poly
from scipy.signal import convolve2d

from covercount import settings
from lib.cover.disjoint_set import DisjointSet
from lib.cover.errors import RootFindingDiverged

if TYPE_CHECKING:
    from collections.abc import Mapping

    from lib.cover.geometry import HomogeneousPoint, LineChart

logger = logging.getLogger(__name__)

# Trailing coefficients below this fraction of the largest one are dropped.
TRIM_RELATIVE = 1e-12
_EPS = float(np.finfo(float).eps)
# Newton steps used to polish a cluster center.
REFINE_STEPS = 12


class TrivariateForm:
    """A homogeneous polynomial in x, y, z."""

    __slots__ = ("_coefficients", "_degree")

    def __init__(self, degree: int, coefficients: np.ndarray) -> None:
        """Wrap a dense coefficient array; entries with a + b > degree must be zero."""
        if degree < 0:
            msg = f"Form degree must be nonnegative, got {degree}"
            raise ValueError(msg)
        array = np.array(coefficients, dtype=complex)
        if array.shape != (degree + 1, degree + 1):
            msg = f"Expected a {(degree + 1, degree + 1)} coefficient array, got {array.shape}"
            raise ValueError(msg)
        a, b = np.indices(array.shape)
        if np.any(array[a + b > degree] != 0):
            msg = "Coefficients outside the degree simplex must be zero"
            raise ValueError(msg)
        array.setflags(write=False)
        self._degree = degree
        self._coefficients = array

    @classmethod
    def from_monomials(cls, degree: int, monomials: Mapping[tuple[int, int, int], complex]) -> TrivariateForm:
        """Build a form from ``{(a, b, c): coefficient}`` with a + b + c = degree."""
        array = np.zeros((degree + 1, degree + 1), dtype=complex)
        for (a, b, c), value in monomials.items():
            if min(a, b, c) < 0 or a + b + c != degree:
                msg = f"Monomial exponent {(a, b, c)} does not have degree {degree}"
                raise ValueError(msg)
            array[a, b] += complex(value)
        return cls(degree, array)

    @classmethod
    def constant(cls, value: complex = 1.0) -> TrivariateForm:
        """The degree-0 form ``value``."""
        return cls(0, np.array([[value]], dtype=complex))

    @classmethod
    def linear(cls, a: complex, b: complex, c: complex) -> TrivariateForm:
        """The linear form ax + by + cz."""
        return cls.from_monomials(1, {(1, 0, 0): a, (0, 1, 0): b, (0, 0, 1): c})

    @property
    def degree(self) -> int:
        """Total degree."""
        return self._degree

    @property
    def coefficients(self) -> np.ndarray:
        """Read-only dense coefficient array."""
        return self._coefficients

    @property
    def is_zero(self) -> bool:
        """True for the explicitly zero form."""
        return not np.any(self._coefficients)

    def monomials(self) -> dict[tuple[int, int, int], complex]:
        """Nonzero coefficients keyed by exponent triple, in lexicographic order."""
        result: dict[tuple[int, int, int], complex] = {}
        for a in range(self._degree, -1, -1):
            for b in range(self._degree - a, -1, -1):
                value = self._coefficients[a, b]
                if value != 0:
                    result[(a, b, self._degree - a - b)] = complex(value)
        return result

    def norm(self) -> float:
        """Sum of coefficient moduli."""
        return float(np.abs(self._coefficients).sum())

    def evaluate_vector(self, vector: np.ndarray) -> complex:
        """Value at an arbitrary (not necessarily normalized) coordinate vector."""
        x, y, z = (complex(v) for v in vector)
        a, b = np.indices(self._coefficients.shape)
        c = self._degree - a - b
        mask = c >= 0
        terms = self._coefficients[mask] * np.power(x, a[mask]) * np.power(y, b[mask]) * np.power(z, c[mask])
        return complex(terms.sum())

    def partial(self, axis: int) -> TrivariateForm:
        """Partial derivative along x (0), y (1) or z (2)."""
        d = self._degree
        if d == 0:
            return TrivariateForm.constant(0.0)
        out = np.zeros((d, d), dtype=complex)
        for a in range(d + 1):
            for b in range(d + 1 - a):
                value = self._coefficients[a, b]
                if value == 0:
                    continue
                c = d - a - b
                if axis == 0 and a > 0:
                    out[a - 1, b] += a * value
                elif axis == 1 and b > 0:
                    out[a, b - 1] += b * value
                elif axis == 2 and c > 0:  # noqa: PLR2004
                    out[a, b] += c * value
        return TrivariateForm(d - 1, out)

    def scale(self, factor: complex) -> TrivariateForm:
        """The form multiplied by a scalar."""
        return TrivariateForm(self._degree, self._coefficients * factor)

    def add(self, other: TrivariateForm) -> TrivariateForm:
        """Sum of two forms of equal degree."""
        if other.degree != self._degree:
            msg = f"Cannot add forms of degrees {self._degree} and {other.degree}"
            raise ValueError(msg)
        return TrivariateForm(self._degree, self._coefficients + other.coefficients)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TrivariateForm):
            return NotImplemented
        return self._degree == other.degree and np.array_equal(self._coefficients, other.coefficients)

    def __hash__(self) -> int:
        return hash((self._degree, self._coefficients.tobytes()))

    def __repr__(self) -> str:
        return f"TrivariateForm(degree={self._degree}, terms={len(self.monomials())})"


class UnivariatePoly:
    """A polynomial in one chart parameter, ascending coefficients.

    ``nominal_degree`` is the degree the polynomial would have without
    vanishing leading terms; the difference to ``degree`` counts roots at
    the chart's point at infinity.
    """

    __slots__ = ("_coefficients", "_nominal_degree")

    def __init__(self, coefficients: np.ndarray | list[complex], nominal_degree: int | None = None) -> None:
        """Trim negligible leading coefficients and record the nominal degree."""
        array = np.atleast_1d(np.array(coefficients, dtype=complex))
        top = float(np.abs(array).max()) if array.size else 0.0
        keep = array.size
        while keep > 1 and abs(array[keep - 1]) <= TRIM_RELATIVE * top:
            keep -= 1
        array = array[:keep].copy()
        if top == 0.0:
            array = np.zeros(1, dtype=complex)
        array.setflags(write=False)
        self._coefficients = array
        self._nominal_degree = max(nominal_degree if nominal_degree is not None else array.size - 1, array.size - 1)

    @property
    def coefficients(self) -> np.ndarray:
        """Ascending coefficients after trimming."""
        return self._coefficients

    @property
    def degree(self) -> int:
        """Actual degree (0 for constants and the zero polynomial)."""
        return self._coefficients.size - 1

    @property
    def nominal_degree(self) -> int:
        """Degree including roots at infinity."""
        return self._nominal_degree

    @property
    def deficiency(self) -> int:
        """Number of roots at the chart's infinity."""
        return self._nominal_degree - self.degree

    @property
    def is_zero(self) -> bool:
        """True when every coefficient vanishes."""
        return not np.any(self._coefficients)

    def __call__(self, t: complex | np.ndarray) -> complex | np.ndarray:
        """Evaluate at a parameter or an array of parameters."""
        return poly.polyval(t, self._coefficients)

    def derivative(self) -> UnivariatePoly:
        """The derivative polynomial."""
        if self.degree == 0:
            return UnivariatePoly([0.0], max(self._nominal_degree - 1, 0))
        return UnivariatePoly(poly.polyder(self._coefficients), self._nominal_degree - 1)

    def __mul__(self, other: UnivariatePoly) -> UnivariatePoly:
        return UnivariatePoly(poly.polymul(self._coefficients, other.coefficients), self._nominal_degree + other.nominal_degree)

    def __repr__(self) -> str:
        return f"UnivariatePoly(degree={self.degree}, nominal_degree={self._nominal_degree})"


@dataclass(frozen=True)
class RootCluster:
    """A root of a univariate polynomial with its multiplicity."""

    center: complex
    multiplicity: int


def evaluate(f: TrivariateForm, p: HomogeneousPoint) -> complex:
    """Value of ``f`` at the normalized representative of ``p``.

    This fixes the trivialization: "the value of F at p" always means this
    number.
    """
    return f.evaluate_vector(p.vector)


def multiply(f: TrivariateForm, g: TrivariateForm) -> TrivariateForm:
    """Product of two forms (2-D convolution of the coefficient arrays)."""
    return TrivariateForm(f.degree + g.degree, convolve2d(f.coefficients, g.coefficients))


def power(f: TrivariateForm, k: int) -> TrivariateForm:
    """``f`` raised to a nonnegative integer power by repeated squaring."""
    if k < 0:
        msg = f"Power must be nonnegative, got {k}"
        raise ValueError(msg)
    result = TrivariateForm.constant(1.0)
    base = f
    while k:
        if k & 1:
            result = multiply(result, base)
        k >>= 1
        if k:
            base = multiply(base, base)
    return result


def gradient(f: TrivariateForm, p: HomogeneousPoint) -> tuple[complex, complex, complex]:
    """Partial derivatives of ``f`` at the normalized representative of ``p``."""
    vector = p.vector
    dx, dy, dz = (f.partial(axis).evaluate_vector(vector) for axis in range(3))
    return (dx, dy, dz)


def restrict_to_line(f: TrivariateForm, chart: LineChart) -> UnivariatePoly:
    """The polynomial q(t) = f(base + t * direction).

    The zero polynomial is returned when the line lies inside the zero set
    of ``f`` (up to rounding relative to the size of ``f``).
    """
    d = f.degree
    base, direction = chart.base.vector, chart.direction.vector
    linear = [np.array([base[i], direction[i]], dtype=complex) for i in range(3)]
    powers = [[poly.polypow(linear[i], e) for e in range(d + 1)] for i in range(3)]
    q = np.zeros(d + 1, dtype=complex)
    scale = 0.0
    for (a, b, c), value in f.monomials().items():
        term = poly.polymul(poly.polymul(powers[0][a], powers[1][b]), powers[2][c])
        q[: term.size] += value * term
        scale += abs(value) * float(np.abs(term).sum())
    if scale == 0.0 or float(np.abs(q).max()) <= TRIM_RELATIVE * scale:
        return UnivariatePoly(np.zeros(1, dtype=complex), d)
    return UnivariatePoly(q, d)


def aberth_roots(q: UnivariatePoly, max_iter: int = settings.ROOT_MAX_ITER, tol: float = settings.ROOT_TOL) -> np.ndarray:
    """All finite roots of ``q`` by Aberth-Ehrlich simultaneous iteration.

    Exact zero roots are deflated first. A root freezes once its correction
    drops below ``tol * (1 + |root|)`` or its residual reaches the rounding
    level of Horner evaluation; the latter is what stops the iteration on
    clustered roots, whose corrections stagnate.

    Raises:
        RootFindingDiverged: If some root is still moving after ``max_iter`` sweeps.
    """
    coeffs = q.coefficients
    if q.is_zero:
        msg = "Cannot find roots of the zero polynomial"
        raise ValueError(msg)
    zeros = 0
    while coeffs[zeros] == 0:
        zeros += 1
    a = coeffs[zeros:]
    n = a.size - 1
    at_origin = np.zeros(zeros, dtype=complex)
    if n == 0:
        return at_origin
    if n == 1:
        return np.concatenate([at_origin, [-a[0] / a[1]]])

    derivative = poly.polyder(a)
    moduli = np.abs(a)
    radius = float((moduli[0] / moduli[-1]) ** (1.0 / n))
    angles = 2 * np.pi * np.arange(n) / n + 0.4
    z = radius * (1.0 + 0.01 * np.arange(n) / n) * np.exp(1j * angles)
    active = np.ones(n, dtype=bool)

    for iteration in range(max_iter):
        values = poly.polyval(z, a)
        slopes = poly.polyval(z, derivative)
        diffs = z[:, np.newaxis] - z[np.newaxis, :]
        np.fill_diagonal(diffs, np.inf)
        with np.errstate(divide="ignore", invalid="ignore"):
            repulsion = (1.0 / diffs).sum(axis=1)
            ratio = values / slopes
            correction = ratio / (1.0 - ratio * repulsion)
        stuck = ~np.isfinite(correction)
        if np.any(stuck):
            correction[stuck] = 1e-3 * (1.0 + np.abs(z[stuck])) * np.exp(1j * (iteration + 1.0))
        noise = 8.0 * n * _EPS * poly.polyval(np.abs(z), moduli)
        done = (np.abs(correction) <= tol * (1.0 + np.abs(z))) | (np.abs(values) <= noise)
        step = active & ~done
        z[step] -= correction[step]
        active &= ~done
        if not active.any():
            logger.debug("[RootFinder] Converged after %s sweeps (degree %s)", iteration + 1, n)
            return np.concatenate([at_origin, z])
    msg = f"Aberth iteration did not converge within {max_iter} sweeps for degree {n}"
    raise RootFindingDiverged(msg)


def taylor_coefficients(coefficients: np.ndarray, center: complex) -> np.ndarray:
    """Coefficients of the polynomial expanded around ``center`` (ascending)."""
    shifted = Polynomial(coefficients)(Polynomial([center, 1.0])).coef
    out = np.zeros(coefficients.size, dtype=np.result_type(shifted, complex))
    out[: shifted.size] = shifted[: coefficients.size]
    return out


def _refine_center(coefficients: np.ndarray, roots: np.ndarray) -> complex:
    """Newton-polish the centroid of ``roots`` on the (k-1)-th derivative, k = len(roots).

    A k-fold zero of the polynomial is a simple zero of that derivative, so
    the polished point is accurate to rounding even when the frozen Aberth
    ring around it is not. Falls back to the centroid if Newton leaves the
    neighbourhood of the group.
    """
    k = roots.size
    centroid = complex(roots.mean())
    spread = float(np.abs(roots - centroid).max())
    target = poly.polyder(coefficients, k - 1) if k > 1 else coefficients
    slope = poly.polyder(target)
    z = centroid
    for _ in range(REFINE_STEPS):
        derivative = complex(poly.polyval(z, slope))
        if derivative == 0:
            break
        step = complex(poly.polyval(z, target)) / derivative
        z -= step
        if not np.isfinite(z) or abs(step) <= _EPS * (1.0 + abs(z)):
            break
    if not np.isfinite(z) or abs(z - centroid) > 2.0 * spread + _EPS * (1.0 + abs(centroid)):
        return centroid
    return z


def _is_multiple_root(q: UnivariatePoly, center: complex, k: int, noise: float) -> bool:
    """Backward-error test: does a nearby polynomial have a k-fold zero at ``center``?

    Perturbations are measured normwise against the largest coefficient.
    """
    coeffs = q.coefficients
    shifted = taylor_coefficients(coeffs, center)
    budget = noise * float(np.abs(coeffs).max()) * np.abs(taylor_coefficients(np.ones(coeffs.size), abs(center)))
    return bool(np.all(np.abs(shifted[:k]) <= budget[:k]))


def roots_with_multiplicity(
    q: UnivariatePoly,
    cluster_eps: float = settings.CLUSTER_EPS,
    taylor_noise: float = settings.TAYLOR_NOISE,
    max_iter: int = settings.ROOT_MAX_ITER,
    tol: float = settings.ROOT_TOL,
) -> list[RootCluster]:
    """Finite roots of ``q`` grouped into clusters with multiplicities.

    Roots are merged in single-linkage order. Each merged group gets a
    polished center; the group becomes a cluster when every link is within
    ``cluster_eps`` or when the backward-error test passes at that center.
    The maximal such groups are returned, sorted by center. Multiplicities
    plus ``q.deficiency`` equal ``q.nominal_degree``.
    """
    roots = aberth_roots(q, max_iter=max_iter, tol=tol)
    n = roots.size
    if n == 0:
        return []
    coeffs = q.coefficients
    links = sorted((abs(roots[i] - roots[j]), i, j) for i in range(n) for j in range(i + 1, n))
    forest: DisjointSet[int] = DisjointSet(range(n))
    members: dict[int, list[int]] = {i: [i] for i in range(n)}
    tight: dict[int, bool] = dict.fromkeys(range(n), True)
    accepted: dict[frozenset[int], complex] = {}
    for distance, i, j in links:
        root_i, root_j = forest.find(i), forest.find(j)
        if root_i == root_j:
            continue
        forest.merge(i, j)
        root = forest.find(i)
        group = members.pop(root_i) + members.pop(root_j)
        members[root] = group
        both_tight = tight.pop(root_i) & tight.pop(root_j)
        tight[root] = both_tight and distance <= cluster_eps
        center = _refine_center(coeffs, roots[group])
        if _is_multiple_root(q, center, len(group), taylor_noise):
            accepted[frozenset(group)] = center
        elif tight[root]:
            accepted[frozenset(group)] = complex(roots[group].mean())

    owner: dict[int, frozenset[int]] = {}
    for group in accepted:
        for index in group:
            if index not in owner or len(owner[index]) < len(group):
                owner[index] = group
    clusters: list[RootCluster] = []
    seen: set[frozenset[int]] = set()
    for index in range(n):
        group = owner.get(index, frozenset({index}))
        if group in seen:
            continue
        seen.add(group)
        center = accepted.get(group, complex(roots[index]))
        clusters.append(RootCluster(center=center, multiplicity=len(group)))
    clusters.sort(key=lambda cluster: (cluster.center.real, cluster.center.imag))
    logger.debug("[RootFinder] %s roots -> %s clusters %s", n, len(clusters), [c.multiplicity for c in clusters])
    return clusters
