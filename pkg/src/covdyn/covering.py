"""Graph homomorphisms, covers, and coverings (cover sequences with a
singleton head graph).

A covering is the finite prefix G_0 <- G_1 <- ... <- G_N of an inverse
system; the depth-N truncation is the official finite surrogate for the
inverse limit throughout this package.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .digraph import (
    DEFAULT_WALK_BUDGET,
    DiGraph,
    enumerate_circuits,
    walks_of_length,
)
from .errors import (
    IndexOutOfRange,
    InvalidTower,
    NotACover,
    NotAHomomorphism,
    NotStartingAtZero,
    TypeMismatch,
)


@dataclass(frozen=True)
class HomClassification:
    """Quantifier-evaluated facts about a graph homomorphism."""

    edge_surjective: bool
    plus_directional: bool
    bidirectional: bool

    @property
    def is_cover(self) -> bool:
        return self.plus_directional and self.edge_surjective


class GraphHom:
    """A vertex map between graphs that sends edges to edges."""

    __slots__ = ("source", "target", "mapping", "_classification")

    def __init__(self, source: DiGraph, target: DiGraph, mapping: Mapping[str, str]):
        for v in source.vertices:
            if v not in mapping:
                raise NotAHomomorphism(f"no image declared for vertex {v!r}", vertex=v)
            if mapping[v] not in target.index:
                raise NotAHomomorphism(
                    f"image {mapping[v]!r} of {v!r} is not a target vertex", vertex=v
                )
        for u, v in source.edges:
            if not target.has_edge(mapping[u], mapping[v]):
                raise NotAHomomorphism(
                    f"edge ({u!r}, {v!r}) maps to the non-edge "
                    f"({mapping[u]!r}, {mapping[v]!r})",
                    edge=(u, v),
                )
        self.source = source
        self.target = target
        self.mapping = {v: mapping[v] for v in source.vertices}
        self._classification: HomClassification | None = None

    def __call__(self, v: str) -> str:
        return self.mapping[v]

    def map_walk(self, vertices: Sequence[str]) -> tuple[str, ...]:
        return tuple(self.mapping[v] for v in vertices)

    def classification(self) -> HomClassification:
        if self._classification is None:
            self._classification = classify_hom(self)
        return self._classification

    def __eq__(self, other) -> bool:
        if not isinstance(other, GraphHom):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self.mapping == other.mapping
        )

    def __repr__(self) -> str:
        return f"GraphHom({self.source!r} -> {self.target!r})"


def classify_hom(h: GraphHom) -> HomClassification:
    """Evaluate edge-surjectivity, +directionality, and bidirectionality."""
    g = h.source
    plus = all(len({h(w) for w in g.out(v)}) <= 1 for v in g.vertices)
    bidi = plus and all(len({h(u) for u in g.in_(v)}) <= 1 for v in g.vertices)
    image = {(h(u), h(v)) for u, v in g.edges}
    return HomClassification(
        edge_surjective=image == h.target.edges,
        plus_directional=plus,
        bidirectional=bidi,
    )


def identity_hom(g: DiGraph) -> GraphHom:
    return GraphHom(g, g, {v: v for v in g.vertices})


def compose(h2: GraphHom, h1: GraphHom) -> GraphHom:
    """The composite h1 o h2 of maps G2 -> G1 -> G0."""
    if h2.target != h1.source:
        raise TypeMismatch(
            "cannot compose: middle graphs disagree",
            left=repr(h2.target),
            right=repr(h1.source),
        )
    return GraphHom(h2.source, h1.target, {v: h1(h2(v)) for v in h2.source.vertices})


class Covering:
    """A validated finite prefix G_0 <- G_1 <- ... <- G_N of covers.

    G_0 must be the singleton loop graph and every connecting map must be a
    cover (+directional and edge-surjective).
    """

    __slots__ = ("graphs", "homs", "_composites")

    def __init__(self, graphs: Sequence[DiGraph], homs: Sequence[GraphHom]):
        graphs = tuple(graphs)
        homs = tuple(homs)
        if not graphs:
            raise NotACover("a covering needs at least the head graph")
        head = graphs[0]
        if len(head.vertices) != 1 or len(head.edges) != 1:
            raise NotACover("the head graph must be the singleton loop graph")
        if len(homs) != len(graphs) - 1:
            raise NotACover(
                f"expected {len(graphs) - 1} connecting maps, got {len(homs)}"
            )
        for n, hom in enumerate(homs, start=1):
            if hom.source != graphs[n] or hom.target != graphs[n - 1]:
                raise NotACover(f"map at level {n} does not connect G_{n} to G_{n-1}", level=n)
            if not hom.classification().is_cover:
                raise NotACover(f"map at level {n} is not a cover", level=n)
        self.graphs = graphs
        self.homs = homs
        self._composites: dict[tuple[int, int], GraphHom] = {}

    @property
    def depth(self) -> int:
        return len(self.graphs) - 1

    def graph(self, n: int) -> DiGraph:
        return self.graphs[n]

    def hom(self, n: int) -> GraphHom:
        """The connecting cover from G_n down to G_{n-1} (n >= 1)."""
        if not 1 <= n <= self.depth:
            raise IndexOutOfRange(f"no connecting map at level {n}", level=n)
        return self.homs[n - 1]

    def composite(self, m: int, n: int) -> GraphHom:
        """The composite cover from G_m down to G_n (m >= n)."""
        if not 0 <= n <= m <= self.depth:
            raise IndexOutOfRange(f"levels ({m}, {n}) out of range", m=m, n=n)
        if m == n:
            return identity_hom(self.graphs[m])
        key = (m, n)
        got = self._composites.get(key)
        if got is None:
            got = self.hom(n + 1)
            for k in range(n + 2, m + 1):
                got = compose(self.hom(k), got)
            self._composites[key] = got
        return got

    def project_vertex(self, m: int, n: int, v: str) -> str:
        return self.composite(m, n)(v)


@dataclass(frozen=True)
class VertexTower:
    """A compatible vertex choice (x_0, ..., x_N), one per level."""

    vertices: tuple[str, ...]

    @property
    def depth(self) -> int:
        return len(self.vertices) - 1

    def level(self, n: int) -> str:
        return self.vertices[n]

    def truncate(self, n: int) -> "VertexTower":
        return VertexTower(self.vertices[: n + 1])


def make_tower(c: Covering, vertices: Sequence[str]) -> VertexTower:
    """Validate x_n = phi_{n+1}(x_{n+1}) at every level and build the tower."""
    vs = tuple(vertices)
    if len(vs) > c.depth + 1:
        raise InvalidTower("tower deeper than the covering", depth=len(vs) - 1)
    for n, v in enumerate(vs):
        if v not in c.graphs[n].index:
            raise InvalidTower(f"{v!r} is not a vertex of G_{n}", level=n)
    for n in range(len(vs) - 1):
        if c.hom(n + 1)(vs[n + 1]) != vs[n]:
            raise InvalidTower(
                f"level {n}: {vs[n]!r} != image of {vs[n + 1]!r}", level=n
            )
    return VertexTower(vs)


def tower_from_top(c: Covering, n: int, v: str) -> VertexTower:
    """The unique depth-n tower with top vertex v (projections downward)."""
    if v not in c.graphs[n].index:
        raise InvalidTower(f"{v!r} is not a vertex of G_{n}", level=n)
    vs = [v]
    for k in range(n, 0, -1):
        vs.append(c.hom(k)(vs[-1]))
    return VertexTower(tuple(reversed(vs)))


def telescope(c: Covering, indices: Sequence[int]) -> Covering:
    """Collapse the covering along a subsequence of levels.

    The subsequence must be strictly increasing and start at level 0; every
    composite map is re-validated as a cover by the Covering constructor.
    """
    idx = tuple(indices)
    if not idx or idx[0] != 0:
        raise NotStartingAtZero("telescoping indices must start at 0", indices=idx)
    for a, b in zip(idx, idx[1:]):
        if b <= a:
            raise IndexOutOfRange("telescoping indices must strictly increase", indices=idx)
    if idx[-1] > c.depth:
        raise IndexOutOfRange(
            f"index {idx[-1]} exceeds declared depth {c.depth}", indices=idx
        )
    graphs = [c.graph(k) for k in idx]
    homs = [c.composite(b, a) for a, b in zip(idx, idx[1:])]
    return Covering(graphs, homs)


def minimality_witness(c: Covering, n: int, horizon: int) -> int | None:
    """Least m in (n, horizon] whose circuits all project onto V(G_n).

    Returns None when no witness exists within the horizon; that outcome is
    inconclusive, not a refutation of minimality.
    """
    if not 0 <= n <= c.depth:
        raise IndexOutOfRange(f"level {n} out of range", level=n)
    if horizon > c.depth:
        raise IndexOutOfRange(
            f"horizon {horizon} exceeds declared depth {c.depth}", horizon=horizon
        )
    full = frozenset(c.graph(n).vertices)
    for m in range(n + 1, horizon + 1):
        proj = c.composite(m, n)
        if all(
            frozenset(proj.map_walk(circ.vertices)) == full
            for circ in enumerate_circuits(c.graph(m))
        ):
            return m
    return None


def depth_windows(
    c: Covering, n: int, width: int, budget: int = DEFAULT_WALK_BUDGET
) -> tuple[tuple[VertexTower, ...], ...]:
    """All admissible width-W blocks of the depth-n approximation.

    Each window is a walk of length W-1 in G_n lifted to a sequence of
    vertex towers, enumerated in deterministic lexicographic order.
    """
    if width < 1:
        raise IndexOutOfRange("window width must be positive", width=width)
    if not 0 <= n <= c.depth:
        raise IndexOutOfRange(f"level {n} out of range", level=n)
    windows = []
    for walk in walks_of_length(c.graph(n), width - 1, budget=budget):
        windows.append(tuple(tower_from_top(c, n, v) for v in walk.vertices))
    return tuple(windows)
