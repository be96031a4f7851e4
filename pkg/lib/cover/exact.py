"""Exact predictions for Fermat tangent triples.

Three tangents L_{1,j1}, L_{2,j2}, L_{3,j3} of the Fermat curve of degree mu
admit a curve D of degree d with D|_{L_i} = d P_i exactly when
2d(2j1 + 2j2 + 2j3 - 3) = 0 mod 2mu. The connected number of the triple in
the b-fold cover branched along an Artal curve is the largest divisor
lambda of b for which such a D of degree b / lambda exists.
"""

from __future__ import annotations

import logging
import math
from itertools import product
from typing import TYPE_CHECKING

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from scipy.linalg import svd
from sympy import divisors

from covercount import settings
from lib.cover.errors import NotADivisor, NumericalRankAmbiguous
from lib.cover.fermat import FAMILIES, FermatTangentIndex, inflection_point, tangent_line
from lib.cover.geometry import HomogeneousPoint, LineChart, chart_of, derive_seed
from lib.cover.polynomials import TrivariateForm, restrict_to_line
from schemas.reports import CarnotWitness, PredictionReport, ReportMetadata, ZariskiCertificate, ZariskiEntry

if TYPE_CHECKING:
    from collections.abc import Sequence

logger = logging.getLogger(__name__)

ORACLE_COMBINATIONS = 4
_AMBIGUITY_BAND = 10.0


class CarnotQuery(BaseModel):
    """Does a degree-d curve cut each of the three tangents only at its inflection point?"""

    model_config = ConfigDict(frozen=True)

    mu: int = Field(..., ge=2)
    j: tuple[int, int, int]
    d: int = Field(..., ge=1)

    @field_validator("j")
    @classmethod
    def _positive(cls, value: tuple[int, int, int]) -> tuple[int, int, int]:
        if min(value) < 1:
            msg = f"j values start at 1, got {value}"
            raise ValueError(msg)
        return value

    @model_validator(mode="after")
    def _within_mu(self) -> CarnotQuery:
        if max(self.j) > self.mu:
            msg = f"j values must not exceed mu={self.mu}, got {self.j}"
            raise ValueError(msg)
        return self


def standard_triple(mu: int) -> tuple[int, int, int]:
    """j-values of the standard triple L_{1,1}, L_{2,1}, L_{3,mu}."""
    return (1, 1, mu)


def carnot_exponent(j_triple: Sequence[int]) -> int:
    return 2 * sum(j_triple) - 3


def carnot_exists(query: CarnotQuery) -> bool:
    """2d * e = 0 (mod 2mu) with e = 2(j1 + j2 + j3) - 3."""
    return (2 * query.d * carnot_exponent(query.j)) % (2 * query.mu) == 0


def minimal_contact_degree(mu: int, j_triple: Sequence[int]) -> int:
    """Least d passing the Carnot test; every passing d is a multiple of it."""
    return mu // math.gcd(mu, carnot_exponent(j_triple))


def predicted_connected_number(
    b: int, mu: int, j_triple: Sequence[int] | None = None, metadata: ReportMetadata | None = None
) -> PredictionReport:
    """Largest divisor lambda of b whose contact degree b / lambda passes the Carnot test.

    Raises:
        NotADivisor: If mu does not divide b.
    """
    if mu < 2 or b % mu:  # noqa: PLR2004
        msg = f"mu={mu} must be at least 2 and divide b={b}"
        raise NotADivisor(msg)
    j = tuple(j_triple) if j_triple is not None else standard_triple(mu)
    witnesses = []
    for divisor in map(int, divisors(b)):
        query = CarnotQuery(mu=mu, j=j, d=b // divisor)
        witnesses.append(CarnotWitness(divisor=divisor, d=query.d, exists=carnot_exists(query)))
    lam = max(witness.divisor for witness in witnesses if witness.exists)
    return PredictionReport(
        b=b,
        mu=mu,
        nu=b // mu,
        j_triple=j,
        carnot_exponent=carnot_exponent(j),
        lambda_=lam,
        witnesses=witnesses,
        metadata=metadata or ReportMetadata(config={"b": b, "mu": mu, "j": list(j)}),
    )


def zariski_certificate(b: int, metadata: ReportMetadata | None = None) -> ZariskiCertificate:
    """Predicted connected numbers of B_{b,mu} with the standard triple, for every divisor mu >= 2 of b."""
    entries = []
    for mu in divisors(b):
        if mu < 2:  # noqa: PLR2004
            continue
        j = standard_triple(int(mu))
        entries.append(
            ZariskiEntry(
                mu=int(mu),
                j_triple=j,
                c=predicted_connected_number(b, int(mu), j).c,
                minimal_contact_degree=minimal_contact_degree(int(mu), j),
            )
        )
    certificate = ZariskiCertificate(b=b, entries=entries, metadata=metadata or ReportMetadata(config={"b": b}))
    logger.info("[Exact] %s", certificate)
    return certificate


def realized_connected_numbers(b: int) -> list[int]:
    """Every connected number predicted for degree b over all mu | b and all tangent triples."""
    values = set()
    for mu in divisors(b):
        if mu < 2:  # noqa: PLR2004
            continue
        for j in product(range(1, int(mu) + 1), repeat=3):
            values.add(predicted_connected_number(b, int(mu), j).c)
    return sorted(values)


def _anchored_chart(index: FermatTangentIndex, seed: int) -> LineChart:
    """A chart on the tangent with its inflection point at t = 0."""
    line = tangent_line(index)
    point = inflection_point(index)
    random_chart = chart_of(line, seed)
    candidates = (random_chart.direction, random_chart.base)
    direction = max(candidates, key=lambda other: float(np.abs(np.cross(point.vector, other.vector)).max()))
    return LineChart(line=line, base=point, direction=direction)


def _monomial_rows(d: int, charts: Sequence[LineChart]) -> tuple[np.ndarray, np.ndarray]:
    """Low-order restriction coefficients (constraints) and top coefficients, one column per monomial."""
    exponents = [(a, b, d - a - b) for a in range(d, -1, -1) for b in range(d - a, -1, -1)]
    constraints = np.zeros((len(charts) * d, len(exponents)), dtype=complex)
    tops = np.zeros((len(charts), len(exponents)), dtype=complex)
    for column, exponent in enumerate(exponents):
        monomial = TrivariateForm.from_monomials(d, {exponent: 1.0})
        for row, chart in enumerate(charts):
            coefficients = np.zeros(d + 1, dtype=complex)
            restricted = restrict_to_line(monomial, chart).coefficients
            coefficients[: restricted.size] = restricted
            constraints[row * d : (row + 1) * d, column] = coefficients[:d]
            tops[row, column] = coefficients[d]
    return constraints, tops


def contact_divisor_oracle(
    mu: int, j_triple: Sequence[int], d: int, rank_tol: float = settings.RANK_TOL, seed: int = 0
) -> bool:
    """Decide the Carnot question by linear algebra instead of the congruence.

    Degree-d forms whose restriction to each tangent, in a chart centered at
    its inflection point, has no terms below t^d form the kernel of a
    3d x N matrix. A random kernel element must also keep its t^d
    coefficient on every line; a few combinations are tried.

    Raises:
        NumericalRankAmbiguous: If a singular value is within a factor 10 of the rank threshold.
    """
    query = CarnotQuery(mu=mu, j=tuple(j_triple), d=d)
    indices = [FermatTangentIndex(mu=mu, family=family, j=j) for family, j in zip(FAMILIES, query.j, strict=True)]
    charts = [_anchored_chart(index, derive_seed(seed, position)) for position, index in enumerate(indices)]
    constraints, tops = _monomial_rows(d, charts)

    _, singular, vh = svd(constraints, full_matrices=True)
    top = float(singular.max()) if singular.size else 0.0
    ratios = singular / top if top else singular
    if np.any((ratios >= rank_tol / _AMBIGUITY_BAND) & (ratios <= rank_tol * _AMBIGUITY_BAND)):
        msg = f"Singular values {ratios} straddle the rank threshold {rank_tol} (mu={mu}, j={query.j}, d={d})"
        raise NumericalRankAmbiguous(msg)
    rank = int(np.count_nonzero(ratios > rank_tol))
    kernel = vh[rank:].conj().T
    if kernel.shape[1] == 0:
        logger.debug("[Oracle] mu=%s j=%s d=%s: trivial kernel", mu, query.j, d)
        return False

    rng = np.random.default_rng(seed)
    for _ in range(ORACLE_COMBINATIONS):
        weights = rng.standard_normal(kernel.shape[1]) + 1j * rng.standard_normal(kernel.shape[1])
        candidate = kernel @ weights
        leading = np.abs(tops @ candidate)
        bound = rank_tol * np.linalg.norm(tops, axis=1) * np.linalg.norm(candidate)
        if np.all(leading > bound):
            logger.debug("[Oracle] mu=%s j=%s d=%s: kernel dimension %s, contact curve found", mu, query.j, d, kernel.shape[1])
            return True
    logger.debug("[Oracle] mu=%s j=%s d=%s: every kernel element vanishes on a tangent", mu, query.j, d)
    return False


def anchor_points(mu: int, j_triple: Sequence[int]) -> list[HomogeneousPoint]:
    """The three inflection points of a triple, in family order."""
    return [inflection_point(FermatTangentIndex(mu=mu, family=family, j=j)) for family, j in zip(FAMILIES, j_triple, strict=True)]
