"""Connected numbers of line arrangements.

The preimage of C minus B under the cover is glued from m sheets over each
line: sheets of one line are joined by the local monodromies, sheets of two
lines are joined over their intersection points. The connected number is
counted twice, once by union-find on that gluing graph and once as
gcd(m, offset cycle sums, branch weights), and the two counts are compared.
"""

from __future__ import annotations

import logging
import math
from collections import defaultdict, deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import TYPE_CHECKING, Any

from covercount import settings
from lib.cover.disjoint_set import DisjointSet
from lib.cover.errors import (
    ComponentInsideBranch,
    ConfigInvalid,
    CurveMinusBranchDisconnected,
    MethodDisagreement,
    NotCompletelySplit,
)
from lib.cover.geometry import ProjectiveLine, chart_of, derive_seed, intersect
from lib.cover.monodromy import (
    ComponentCoverData,
    Offset,
    WeightedBranchDivisor,
    component_data,
    local_monodromy,
    monodromy_at_infinity,
    offset_at,
    splitting_count,
)
from lib.cover.polynomials import TrivariateForm, restrict_to_line
from schemas.arrangement_file import ArrangementFile, BranchPartEntry, ComponentEntry, CoverEntry
from schemas.reports import ComponentSummary, ConnectedNumberReport, OffsetEntry, ReportMetadata
from schemas.tolerances import DEFAULT_TOLERANCES, Tolerances

if TYPE_CHECKING:
    from collections.abc import Callable, Iterable

    from lib.cover.geometry import HomogeneousPoint

logger = logging.getLogger(__name__)

Node = tuple[int, int]


@dataclass(frozen=True)
class Arrangement:
    """Lines C_1, ..., C_k together with the cover they live in."""

    cover: WeightedBranchDivisor
    components: tuple[ProjectiveLine, ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        if not self.components:
            raise ConfigInvalid(ConfigInvalid.NO_COMPONENTS)
        for i, j in combinations(range(len(self.components)), 2):
            if self.components[i].same_as(self.components[j]):
                raise ConfigInvalid(ConfigInvalid.DUPLICATE_COMPONENT, f"components {i} and {j}")

    @property
    def m(self) -> int:
        return self.cover.m

    def intersections(self, eps: float = settings.PROJECTIVE_EPS) -> list[tuple[int, int, HomogeneousPoint]]:
        """Pairwise intersection points, in index order."""
        return [
            (i, j, intersect(self.components[i], self.components[j], eps))
            for i, j in combinations(range(len(self.components)), 2)
        ]


@dataclass(frozen=True)
class IntraEdge:
    component: int
    sheets: tuple[int, int]
    branch_param: complex | None = None


@dataclass(frozen=True)
class InterEdge:
    components: tuple[int, int]
    sheets: tuple[int, int]
    point: HomogeneousPoint


@dataclass(frozen=True)
class GluingGraph:
    """Sheets (component, label) and the relations that glue them."""

    m: int
    data: tuple[ComponentCoverData, ...] = field(repr=False)
    monodromies: tuple[tuple[tuple[int, ...], ...], ...] = field(repr=False)
    splitting: tuple[int, ...]
    intra_edges: tuple[IntraEdge, ...]
    inter_edges: tuple[InterEdge, ...]
    offsets: tuple[tuple[int, int, Offset], ...]
    warnings: tuple[str, ...] = ()

    @property
    def component_count(self) -> int:
        return len(self.data)

    @property
    def node_count(self) -> int:
        return self.component_count * self.m

    def nodes(self) -> list[Node]:
        return [(i, r) for i in range(self.component_count) for r in range(self.m)]

    def classes(self) -> list[list[Node]]:
        """Connected components of the graph."""
        forest: DisjointSet[Node] = DisjointSet(self.nodes())
        for edge in self.intra_edges:
            forest.merge((edge.component, edge.sheets[0]), (edge.component, edge.sheets[1]))
        for edge in self.inter_edges:
            forest.merge((edge.components[0], edge.sheets[0]), (edge.components[1], edge.sheets[1]))
        return forest.classes()

    @property
    def max_residual(self) -> float:
        return max((offset.max_residual for _, _, offset in self.offsets), default=0.0)


def _parallel[T, R](function: Callable[[T], R], items: Iterable[T]) -> list[R]:
    """Map in a thread pool; results keep the input order."""
    with ThreadPoolExecutor(max_workers=settings.THREADS) as pool:
        return list(pool.map(function, items))


def check_preconditions(arr: Arrangement, tolerances: Tolerances = DEFAULT_TOLERANCES) -> list[str]:
    """Check that no line lies in B and that C minus B is connected.

    Intersections on B are dropped with a warning; the warnings are returned.

    Raises:
        ComponentInsideBranch: If a line is a component of the branch curve.
        CurveMinusBranchDisconnected: If the off-B intersections do not connect the lines.
    """
    for index, line in enumerate(arr.components):
        chart = chart_of(line, 0)
        for form, _ in arr.cover.parts:
            if restrict_to_line(form, chart).is_zero:
                msg = f"Component {index} ({line.coeffs}) lies inside the branch curve"
                raise ComponentInsideBranch(msg)
    warnings: list[str] = []
    forest: DisjointSet[int] = DisjointSet(range(len(arr.components)))
    for i, j, point in arr.intersections(tolerances.projective_eps):
        if arr.cover.on_branch_locus(point, tolerances.branch_tol):
            warning = f"Intersection of components {i} and {j} at {point.coords} lies on the branch curve; no gluing there"
            logger.warning("[Connectivity] %s", warning)
            warnings.append(warning)
            continue
        forest.merge(i, j)
    if forest.class_count > 1:
        msg = f"C minus B falls into {forest.class_count} pieces"
        raise CurveMinusBranchDisconnected(msg)
    return warnings


def gluing_graph(arr: Arrangement, seed: int, tolerances: Tolerances = DEFAULT_TOLERANCES) -> GluingGraph:
    """Build per-line cover data, local monodromies and intersection offsets.

    Per-line work and per-intersection matchings run in a thread pool;
    everything is assembled in index order.
    """
    warnings = check_preconditions(arr, tolerances)
    cover = arr.cover
    m = cover.m
    gluing_points = [
        (i, j, point) for i, j, point in arr.intersections(tolerances.projective_eps) if not cover.on_branch_locus(point, tolerances.branch_tol)
    ]
    avoid: dict[int, list[HomogeneousPoint]] = defaultdict(list)
    for i, j, point in gluing_points:
        avoid[i].append(point)
        avoid[j].append(point)

    data = _parallel(
        lambda index: component_data(cover, arr.components[index], derive_seed(seed, index), tolerances, avoid=avoid.get(index, [])),
        range(len(arr.components)),
    )

    def monodromies_of(item: ComponentCoverData) -> tuple[tuple[int, ...], ...]:
        local = [local_monodromy(item, index, tolerances) for index in range(len(item.branch_points))]
        return (*local, monodromy_at_infinity(item, tolerances))

    monodromies = _parallel(monodromies_of, data)
    offsets = _parallel(lambda entry: offset_at(data[entry[0]], data[entry[1]], cover, entry[2], tolerances), gluing_points)

    splitting = tuple(splitting_count(item, perms) for item, perms in zip(data, monodromies, strict=True))
    intra: list[IntraEdge] = []
    for index, (item, perms) in enumerate(zip(data, monodromies, strict=True)):
        params = [point.param for point in item.branch_points] + [None]
        for param, permutation in zip(params, perms, strict=True):
            intra.extend(
                IntraEdge(component=index, sheets=(r, image), branch_param=param)
                for r, image in enumerate(permutation)
                if image != r
            )
    inter: list[InterEdge] = []
    for (i, j, point), offset in zip(gluing_points, offsets, strict=True):
        inter.extend(
            InterEdge(components=(i, j), sheets=(r, (r + offset.offset) % m), point=point) for r in range(m)
        )
    logger.debug("[Connectivity] %s nodes, %s intra-edges, %s inter-edges", len(data) * m, len(intra), len(inter))
    return GluingGraph(
        m=m,
        data=tuple(data),
        monodromies=tuple(monodromies),
        splitting=splitting,
        intra_edges=tuple(intra),
        inter_edges=tuple(inter),
        offsets=tuple((i, j, offset) for (i, j, _), offset in zip(gluing_points, offsets, strict=True)),
        warnings=tuple(warnings),
    )


def offset_subgroup_count(graph: GluingGraph, *, strict: bool = False) -> tuple[int, list[int]]:
    """Connected number as the orbit count of the offset subgroup H of Z/m.

    A canonical spanning tree of the line intersection graph gauges its
    offsets to zero; every other intersection contributes its cycle sum to
    H, and every line contributes its branch weights. Returns the count
    gcd(m, generators) and the cycle sums.

    Raises:
        NotCompletelySplit: If ``strict`` and some line does not split completely.
    """
    m = graph.m
    weights = [w % m for item in graph.data for w in (*item.weights, item.infinity_weight)]
    if strict and any(weights):
        msg = "Every line must split completely for the offset formula"
        raise NotCompletelySplit(msg)

    edges = sorted(graph.offsets, key=lambda entry: (entry[0], entry[1], entry[2].point.sort_key()))
    forest: DisjointSet[int] = DisjointSet(range(graph.component_count))
    tree: dict[int, list[tuple[int, int]]] = defaultdict(list)
    chords: list[tuple[int, int, int]] = []
    for i, j, offset in edges:
        if forest.merge(i, j):
            tree[i].append((j, offset.offset))
            tree[j].append((i, -offset.offset))
        else:
            chords.append((i, j, offset.offset))

    potential = {0: 0}
    queue = deque([0])
    while queue:
        here = queue.popleft()
        for there, step in tree[here]:
            if there not in potential:
                potential[there] = (potential[here] + step) % m
                queue.append(there)

    cycle_sums = [(potential[i] + a - potential[j]) % m for i, j, a in chords]
    return math.gcd(m, *cycle_sums, *weights), cycle_sums


def _report(
    arr: Arrangement, graph: GluingGraph, seed: int, tolerances: Tolerances, config: dict[str, Any] | None
) -> ConnectedNumberReport:
    c = len(graph.classes())
    offsets_c, cycle_sums = offset_subgroup_count(graph)
    components = [
        ComponentSummary(
            index=index,
            label=arr.labels[index] if arr.labels else None,
            splitting=graph.splitting[index],
            weights=list(item.weights),
            branch_params=[point.param for point in item.branch_points],
            infinity_weight=item.infinity_weight,
            base_param=item.base_param,
            seed=item.seed,
        )
        for index, item in enumerate(graph.data)
    ]
    offsets = [
        OffsetEntry(components=(i, j), point=offset.point.coords, params=offset.params, offset=offset.offset)
        for i, j, offset in graph.offsets
    ]
    return ConnectedNumberReport(
        c=c,
        m=graph.m,
        n=arr.cover.n,
        offsets_c=offsets_c,
        method_agreement=c == offsets_c,
        components=components,
        offsets=offsets,
        cycle_sums=cycle_sums,
        node_count=graph.node_count,
        intra_edge_count=len(graph.intra_edges),
        inter_edge_count=len(graph.inter_edges),
        max_residual=graph.max_residual,
        warnings=list(graph.warnings),
        metadata=ReportMetadata(seed=seed, tolerances=tolerances, config=config or {}),
    )


def connected_number(
    arr: Arrangement,
    seed: int,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
    config: dict[str, Any] | None = None,
) -> ConnectedNumberReport:
    """Count the connected components of the preimage of C minus B.

    ``c`` comes from union-find; the offset count and the agreement flag
    are filled in as well.
    """
    graph = gluing_graph(arr, seed, tolerances)
    report = _report(arr, graph, seed, tolerances, config)
    logger.info(
        "[Connectivity] c=%s (offsets %s) over %s lines, splitting %s",
        report.c,
        report.offsets_c,
        graph.component_count,
        list(graph.splitting),
    )
    return report


def connected_number_via_offsets(
    arr: Arrangement, seed: int, tolerances: Tolerances = DEFAULT_TOLERANCES, *, strict: bool = True
) -> int:
    """Connected number from offsets and branch weights alone.

    Raises:
        NotCompletelySplit: If ``strict`` and some line does not split completely.
    """
    graph = gluing_graph(arr, seed, tolerances)
    count, _ = offset_subgroup_count(graph, strict=strict)
    return count


def cross_check(
    arr: Arrangement,
    seed: int,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
    config: dict[str, Any] | None = None,
) -> ConnectedNumberReport:
    """Run both counts and insist that they agree.

    Raises:
        MethodDisagreement: With the full report as diagnostics.
    """
    report = connected_number(arr, seed, tolerances, config)
    if report.method_agreement is False:
        msg = f"Union-find gives c={report.c} but the offset subgroup gives {report.offsets_c}"
        raise MethodDisagreement(msg, diagnostics=report.model_dump(mode="json"))
    return report


def arrangement_from_file(file: ArrangementFile) -> Arrangement:
    """Build an arrangement from its file representation.

    Raises:
        ConfigInvalid: If the cover or the lines are inconsistent.
    """
    parts = []
    for entry in file.cover.parts:
        monomials = {exponents: complex(re, im) for exponents, re, im in entry.coefficients}
        parts.append((TrivariateForm.from_monomials(entry.degree, monomials), entry.weight))
    cover = WeightedBranchDivisor(m=file.cover.m, parts=tuple(parts))
    lines = tuple(ProjectiveLine(coeffs=component.coefficients) for component in file.components)
    labels = tuple(file.labels) if file.labels else None
    return Arrangement(cover=cover, components=lines, labels=labels)


def arrangement_to_file(arr: Arrangement, metadata: dict[str, Any] | None = None) -> ArrangementFile:
    """The file representation of an arrangement; loading it back gives the same arrangement."""
    parts = [
        BranchPartEntry(
            degree=form.degree,
            coefficients=[(exponents, value.real, value.imag) for exponents, value in form.monomials().items()],
            weight=weight,
        )
        for form, weight in arr.cover.parts
    ]
    return ArrangementFile(
        cover=CoverEntry(m=arr.cover.m, parts=parts),
        components=[ComponentEntry(coefficients=line.coeffs) for line in arr.components],
        labels=list(arr.labels) if arr.labels else None,
        metadata=metadata or {},
    )
