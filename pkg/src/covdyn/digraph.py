"""Finite surjective directed graphs with walk and circuit machinery.

Vertices are opaque strings.  The declaration order of the vertex list is
the canonical order used by every enumeration in this package, which keeps
all derived output reproducible byte for byte.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence

from .errors import (
    BudgetExceeded,
    DanglingEdge,
    DuplicateEdge,
    DuplicateVertex,
    InvalidWalk,
    NotSurjective,
)

DEFAULT_WALK_BUDGET = 10**6


class DiGraph:
    """A finite directed graph whose edge relation is surjective.

    Every vertex must have at least one in-edge and one out-edge; edges are
    plain ordered pairs without multiplicity.  Instances are immutable after
    construction and safe to share across threads.
    """

    __slots__ = ("vertices", "edges", "index", "_out", "_in")

    def __init__(self, vertices: Iterable[str], edges: Iterable[tuple[str, str]]):
        verts = tuple(vertices)
        index: dict[str, int] = {}
        for v in verts:
            if v in index:
                raise DuplicateVertex(f"vertex {v!r} declared twice", vertex=v)
            index[v] = len(index)

        out: dict[str, list[str]] = {v: [] for v in verts}
        incoming: dict[str, list[str]] = {v: [] for v in verts}
        seen: set[tuple[str, str]] = set()
        for u, w in edges:
            if u not in index or w not in index:
                raise DanglingEdge(
                    f"edge ({u!r}, {w!r}) mentions an undeclared vertex", edge=(u, w)
                )
            if (u, w) in seen:
                raise DuplicateEdge(f"edge ({u!r}, {w!r}) declared twice", edge=(u, w))
            seen.add((u, w))
            out[u].append(w)
            incoming[w].append(u)

        for v in verts:
            if not out[v]:
                raise NotSurjective(f"vertex {v!r} has no out-edge", vertex=v, missing="out")
            if not incoming[v]:
                raise NotSurjective(f"vertex {v!r} has no in-edge", vertex=v, missing="in")

        key = index.__getitem__
        self.vertices = verts
        self.index = index
        self.edges = frozenset(seen)
        self._out = {v: tuple(sorted(out[v], key=key)) for v in verts}
        self._in = {v: tuple(sorted(incoming[v], key=key)) for v in verts}

    def out(self, v: str) -> tuple[str, ...]:
        return self._out[v]

    def in_(self, v: str) -> tuple[str, ...]:
        return self._in[v]

    def has_edge(self, u: str, v: str) -> bool:
        return (u, v) in self.edges

    def sorted_edges(self) -> list[tuple[str, str]]:
        key = self.index.__getitem__
        return sorted(self.edges, key=lambda e: (key(e[0]), key(e[1])))

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiGraph):
            return NotImplemented
        return self.vertices == other.vertices and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.vertices, self.edges))

    def __repr__(self) -> str:
        return f"DiGraph({len(self.vertices)} vertices, {len(self.edges)} edges)"


def build_graph(
    vertices: Iterable[str], edges: Iterable[tuple[str, str]]
) -> DiGraph:
    """Validate and build a surjective directed graph."""
    return DiGraph(vertices, edges)


def singleton_graph(vertex: str = "v0") -> DiGraph:
    """The one-vertex, one-loop graph that heads every covering."""
    return DiGraph((vertex,), ((vertex, vertex),))


class Walk:
    """A vertex sequence (v_0, ..., v_l) whose consecutive pairs are edges."""

    __slots__ = ("graph", "vertices")

    def __init__(self, graph: DiGraph, vertices: Sequence[str]):
        vs = tuple(vertices)
        if not vs:
            raise InvalidWalk("a walk needs at least one vertex")
        for v in vs:
            if v not in graph.index:
                raise InvalidWalk(f"vertex {v!r} is not in the host graph", vertex=v)
        for u, w in zip(vs, vs[1:]):
            if not graph.has_edge(u, w):
                raise InvalidWalk(f"({u!r}, {w!r}) is not an edge", edge=(u, w))
        self.graph = graph
        self.vertices = vs

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    def vertex_set(self) -> frozenset[str]:
        return frozenset(self.vertices)

    def edge_set(self) -> frozenset[tuple[str, str]]:
        return frozenset(zip(self.vertices, self.vertices[1:]))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Walk):
            return NotImplemented
        return self.graph == other.graph and self.vertices == other.vertices

    def __hash__(self) -> int:
        return hash(self.vertices)

    def __repr__(self) -> str:
        return f"{type(self).__name__}{self.vertices!r}"


class Circuit(Walk):
    """A closed walk v_0 = v_l whose first l vertices are mutually distinct."""

    __slots__ = ()

    def __init__(self, graph: DiGraph, vertices: Sequence[str]):
        super().__init__(graph, vertices)
        vs = self.vertices
        if len(vs) < 2 or vs[0] != vs[-1]:
            raise InvalidWalk("a circuit must close up with period >= 1", walk=vs)
        body = vs[:-1]
        if len(set(body)) != len(body):
            raise InvalidWalk("circuit vertices must be mutually distinct", walk=vs)

    @property
    def period(self) -> int:
        return self.length

    def canonical(self) -> "Circuit":
        """The lexicographically least rotation (by declaration order)."""
        body = self.vertices[:-1]
        key = self.graph.index.__getitem__
        best = min(range(len(body)), key=lambda i: [key(v) for v in body[i:] + body[:i]])
        rotated = body[best:] + body[:best]
        return Circuit(self.graph, rotated + (rotated[0],))


def _circuits_rooted_at(g: DiGraph, start: str) -> Iterator[tuple[str, ...]]:
    # Emits every circuit whose least-declared vertex is `start`, already in
    # canonical rotation.  DFS is restricted to vertices declared after
    # `start`, so each circuit is produced exactly once.
    sidx = g.index[start]
    index = g.index
    path = [start]
    on_path = {start}
    stack = [iter(g.out(start))]
    while stack:
        w = next(stack[-1], None)
        if w is None:
            stack.pop()
            on_path.discard(path.pop())
            continue
        if w == start:
            yield tuple(path) + (start,)
        elif index[w] > sidx and w not in on_path:
            path.append(w)
            on_path.add(w)
            stack.append(iter(g.out(w)))


def enumerate_circuits(g: DiGraph) -> tuple[Circuit, ...]:
    """All circuits of ``g``, each reported once in canonical rotation.

    The result is sorted by (period, vertex indices) so repeated runs agree.
    """
    key = g.index.__getitem__
    found = []
    for start in g.vertices:
        for cyc in _circuits_rooted_at(g, start):
            found.append(cyc)
    found.sort(key=lambda c: (len(c) - 1, [key(v) for v in c]))
    return tuple(Circuit(g, c) for c in found)


def walks_of_length(
    g: DiGraph, length: int, budget: int = DEFAULT_WALK_BUDGET
) -> tuple[Walk, ...]:
    """All walks of the given length, in lexicographic declaration order."""
    if length < 0:
        raise InvalidWalk("walk length must be non-negative", length=length)
    frontier: list[tuple[str, ...]] = [(v,) for v in g.vertices]
    for _ in range(length):
        grown: list[tuple[str, ...]] = []
        for walk in frontier:
            for w in g.out(walk[-1]):
                grown.append(walk + (w,))
                if len(grown) > budget:
                    raise BudgetExceeded(
                        f"walk enumeration exceeds budget of {budget}", budget=budget
                    )
        frontier = grown
    return tuple(Walk(g, vs) for vs in frontier)


def to_dot(g: DiGraph, name: str = "G") -> str:
    """Render the graph in DOT, one node per vertex, deterministic order."""
    lines = [f"digraph {name} {{"]
    for v in g.vertices:
        lines.append(f'  "{v}";')
    for u, v in g.sorted_edges():
        lines.append(f'  "{u}" -> "{v}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
