"""Ordered Bratteli diagrams, telescoping, adic successor, and array rows.

Diagrams are finite truncations: levels 0..N with the one-point level 0.
In-edge fibers carry an explicit linear order stored as the rank-ordered
tuple of source vertices, so the edge of rank k into v is simply position
k-1 of the fiber of v.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import (
    BadDiagram,
    BudgetExceeded,
    IndexOutOfRange,
    MaxPathAtDepth,
    MinPathAtDepth,
    NotAPath,
)
from .gm import RankEstimate

DEFAULT_PATH_BUDGET = 10**6


class OrderedBratteli:
    """A leveled multigraph with a linear order on each in-edge fiber.

    ``fibers[n][v]`` lists the source vertices of the in-edges of v at level
    n in rank order (rank 1 first); multiple edges appear as repeated
    sources.  The unordered diagram is recovered by forgetting the order.
    """

    __slots__ = ("levels", "fibers")

    def __init__(
        self,
        levels: Sequence[Sequence[str]],
        fibers: Sequence[Mapping[str, Sequence[str]]],
    ):
        lv = tuple(tuple(level) for level in levels)
        if not lv or len(lv[0]) != 1:
            raise BadDiagram("level 0 must hold exactly one vertex")
        for n, level in enumerate(lv):
            if len(set(level)) != len(level):
                raise BadDiagram(f"duplicate vertex at level {n}", level=n)
        fb = tuple(
            {v: tuple(srcs) for v, srcs in fiber.items()} for fiber in fibers
        )
        if len(fb) != len(lv) - 1:
            raise BadDiagram(
                f"expected fibers for {len(lv) - 1} levels, got {len(fb)}"
            )
        for n in range(1, len(lv)):
            fiber = fb[n - 1]
            prev = set(lv[n - 1])
            used: set[str] = set()
            for v in lv[n]:
                srcs = fiber.get(v, ())
                if not srcs:
                    raise BadDiagram(
                        f"vertex {v!r} at level {n} has an empty in-edge fiber",
                        level=n, vertex=v,
                    )
                for u in srcs:
                    if u not in prev:
                        raise BadDiagram(
                            f"edge into {v!r} at level {n} from unknown {u!r}",
                            level=n, vertex=v,
                        )
                used.update(srcs)
            if used != prev:
                missing = sorted(prev - used)
                raise BadDiagram(
                    f"vertices {missing} at level {n - 1} have no out-edge",
                    level=n - 1,
                )
            extra = set(fiber) - set(lv[n])
            if extra:
                raise BadDiagram(
                    f"fiber declared for unknown vertices {sorted(extra)}", level=n
                )
        self.levels = lv
        self.fibers = fb

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    @property
    def root(self) -> str:
        return self.levels[0][0]

    def level(self, n: int) -> tuple[str, ...]:
        return self.levels[n]

    def fiber(self, n: int, v: str) -> tuple[str, ...]:
        """Rank-ordered sources of the in-edges of v at level n (n >= 1)."""
        return self.fibers[n - 1][v]

    def fiber_size(self, n: int, v: str) -> int:
        return len(self.fibers[n - 1][v])

    def source(self, n: int, v: str, rank: int) -> str:
        return self.fibers[n - 1][v][rank - 1]

    def edge_count(self, n: int) -> int:
        return sum(len(srcs) for srcs in self.fibers[n - 1].values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, OrderedBratteli):
            return NotImplemented
        return self.levels == other.levels and self.fibers == other.fibers

    def __repr__(self) -> str:
        sizes = ",".join(str(len(level)) for level in self.levels)
        return f"OrderedBratteli(levels=[{sizes}])"


@dataclass(frozen=True)
class PathPrefix:
    """Edges e_1..e_n from the root, stored as vertices plus fiber ranks."""

    vertices: tuple[str, ...]
    ranks: tuple[int, ...]
    diagram: OrderedBratteli = field(compare=False, repr=False)

    @property
    def depth(self) -> int:
        return len(self.ranks)

    def __hash__(self) -> int:
        return hash((self.vertices, self.ranks))

    def truncate(self, n: int) -> "PathPrefix":
        return PathPrefix(self.vertices[: n + 1], self.ranks[:n], self.diagram)


def make_path(d: OrderedBratteli, vertices: Sequence[str], ranks: Sequence[int]) -> PathPrefix:
    """Validate vertex/rank consistency and build a path prefix."""
    vs, ks = tuple(vertices), tuple(ranks)
    if len(vs) != len(ks) + 1 or not vs or vs[0] != d.root:
        raise NotAPath("path must start at the root with one rank per level")
    if len(ks) > d.depth:
        raise NotAPath(f"path deeper than the diagram ({len(ks)} > {d.depth})")
    for n, (v, k) in enumerate(zip(vs[1:], ks), start=1):
        if v not in d.fibers[n - 1]:
            raise NotAPath(f"{v!r} is not a vertex at level {n}", level=n)
        if not 1 <= k <= d.fiber_size(n, v):
            raise NotAPath(f"rank {k} out of range at level {n}", level=n)
        if d.source(n, v, k) != vs[n - 1]:
            raise NotAPath(
                f"edge of rank {k} into {v!r} does not continue the path", level=n
            )
    return PathPrefix(vs, ks, d)


def path_from_ranks(d: OrderedBratteli, end: str, ranks: Sequence[int]) -> PathPrefix:
    """Reconstruct the path into ``end`` from its rank sequence, top down."""
    ks = tuple(ranks)
    vs = [end]
    for n in range(len(ks), 0, -1):
        vs.append(d.source(n, vs[-1], ks[n - 1]))
    vs.reverse()
    return make_path(d, vs, ks)


def min_path_to(d: OrderedBratteli, n: int, v: str) -> PathPrefix:
    """The unique least path from the root to v at level n."""
    return _extreme_path_to(d, n, v, lambda size: 1)


def max_path_to(d: OrderedBratteli, n: int, v: str) -> PathPrefix:
    return _extreme_path_to(d, n, v, lambda size: size)


def _extreme_path_to(d, n, v, pick):
    vs = [v]
    ks: list[int] = []
    for m in range(n, 0, -1):
        k = pick(d.fiber_size(m, vs[-1]))
        ks.append(k)
        vs.append(d.source(m, vs[-1], k))
    vs.reverse()
    ks.reverse()
    return PathPrefix(tuple(vs), tuple(ks), d)


def lex_key(p: PathPrefix) -> tuple[int, ...]:
    """Sort key realizing the order that compares at the largest differing
    level first (most-significant edge last)."""
    return tuple(reversed(p.ranks))


def vershik_successor(d: OrderedBratteli, p: PathPrefix, wrap: bool = False) -> PathPrefix:
    """Replace the first non-maximal edge by its successor, refill minimally.

    A prefix that is maximal to the full declared depth has no successor in
    the truncation; with ``wrap`` it maps to the minimal path into the same
    top vertex, mirroring the boundary rule of the adic map.
    """
    if p.depth != d.depth:
        raise NotAPath(f"prefix must reach the declared depth {d.depth}")
    for n in range(1, p.depth + 1):
        v = p.vertices[n]
        if p.ranks[n - 1] < d.fiber_size(n, v):
            bumped = p.ranks[n - 1] + 1
            below = min_path_to(d, n - 1, d.source(n, v, bumped))
            return PathPrefix(
                below.vertices + p.vertices[n:],
                below.ranks + (bumped,) + p.ranks[n:],
                d,
            )
    if wrap:
        return min_path_to(d, p.depth, p.vertices[-1])
    raise MaxPathAtDepth(
        "prefix is maximal up to the declared depth; successor needs deeper levels",
        depth=p.depth,
    )


def vershik_predecessor(d: OrderedBratteli, p: PathPrefix, wrap: bool = False) -> PathPrefix:
    """Inverse step: decrement the first non-minimal edge, refill maximally."""
    if p.depth != d.depth:
        raise NotAPath(f"prefix must reach the declared depth {d.depth}")
    for n in range(1, p.depth + 1):
        v = p.vertices[n]
        if p.ranks[n - 1] > 1:
            bumped = p.ranks[n - 1] - 1
            below = max_path_to(d, n - 1, d.source(n, v, bumped))
            return PathPrefix(
                below.vertices + p.vertices[n:],
                below.ranks + (bumped,) + p.ranks[n:],
                d,
            )
    if wrap:
        return max_path_to(d, p.depth, p.vertices[-1])
    raise MinPathAtDepth(
        "prefix is minimal up to the declared depth; predecessor needs deeper levels",
        depth=p.depth,
    )


# -- path enumeration --------------------------------------------------------


def paths_into(
    d: OrderedBratteli, n: int, v: str, budget: int = DEFAULT_PATH_BUDGET
) -> tuple[PathPrefix, ...]:
    """All paths from the root to v at level n, in lexicographic order.

    The order iterates the top rank outermost, which realizes the
    largest-differing-edge comparison; position j in this tuple is column j
    of the tower of v.
    """
    memo: dict[tuple[int, str], list[tuple[tuple[str, ...], tuple[int, ...]]]] = {}

    def rec(m: int, u: str):
        if m == 0:
            return [((u,), ())]
        key = (m, u)
        got = memo.get(key)
        if got is None:
            got = []
            for k, src in enumerate(d.fiber(m, u), start=1):
                for vs, ks in rec(m - 1, src):
                    got.append((vs + (u,), ks + (k,)))
                    if len(got) > budget:
                        raise BudgetExceeded(
                            f"path enumeration exceeds budget of {budget}",
                            budget=budget,
                        )
            memo[key] = got
        return got

    return tuple(PathPrefix(vs, ks, d) for vs, ks in rec(n, v))


def tower_height(d: OrderedBratteli, n: int, v: str) -> int:
    """Number of paths from the root to v (the height of v's tower)."""
    heights = {d.root: 1}
    for m in range(1, n + 1):
        heights = {
            u: sum(heights[s] for s in d.fiber(m, u)) for u in d.level(m)
        }
    return heights[v]


# -- telescoping and simplicity ------------------------------------------------


def telescope_bratteli(d: OrderedBratteli, m: int, n: int) -> OrderedBratteli:
    """Collapse levels strictly between m and n into composite path edges.

    Composite in-edge fibers are ordered by comparing constituent paths at
    their largest differing level, matching the adic comparison rule.
    """
    if not 0 <= m < n <= d.depth:
        raise IndexOutOfRange(f"bad telescope interval ({m}, {n})", m=m, n=n)
    levels = d.levels[: m + 1] + d.levels[n:]
    fibers = list(d.fibers[:m])

    memo: dict[tuple[int, str], list[str]] = {}

    def bottoms(level: int, u: str) -> list[str]:
        # Sources at level m of all paths into u, in lexicographic order.
        if level == m:
            return [u]
        key = (level, u)
        got = memo.get(key)
        if got is None:
            got = []
            for src in d.fiber(level, u):
                got.extend(bottoms(level - 1, src))
            memo[key] = got
        return got

    fibers.append({v: tuple(bottoms(n, v)) for v in d.level(n)})
    fibers.extend(d.fibers[n:])
    return OrderedBratteli(levels, fibers)


def check_simple_bratteli(
    d: OrderedBratteli, schedule: Sequence[int] | None = None
) -> bool:
    """Full connectivity between consecutive schedule levels.

    ``schedule`` is the strictly increasing list of surviving levels
    (default: every level, i.e. no telescoping).  Returns False when some
    vertex pair stays unjoined, which is inconclusive for simplicity of any
    deeper extension.
    """
    levels = tuple(schedule) if schedule else tuple(range(d.depth + 1))
    if levels[0] != 0:
        raise IndexOutOfRange("schedule must start at level 0", schedule=levels)
    for a, b in zip(levels, levels[1:]):
        if b <= a or b > d.depth:
            raise IndexOutOfRange("schedule must strictly increase within depth")
        ancestors = {v: {v} for v in d.level(a)}
        for k in range(a + 1, b + 1):
            ancestors = {
                v: set().union(*(ancestors[u] for u in set(d.fiber(k, v))))
                for v in d.level(k)
            }
        want = set(d.level(a))
        if any(ancestors[v] != want for v in d.level(b)):
            return False
    return True


# -- extreme paths and proper ordering --------------------------------------------


def extreme_paths(d: OrderedBratteli, kind: str, n: int) -> tuple[PathPrefix, ...]:
    """Co-extendable maximal or minimal path prefixes down to level n.

    A prefix counts only when its endpoint still admits a continuation by
    kind-edges up to the full declared depth; this prunes finite-depth
    artifacts and is a certificate at depth n, not a proof about infinite
    paths.
    """
    if kind not in ("max", "min"):
        raise IndexOutOfRange(f"kind must be 'max' or 'min', got {kind!r}")
    if not 0 <= n <= d.depth:
        raise IndexOutOfRange(f"level {n} out of range", level=n)
    pos = (lambda size: size) if kind == "max" else (lambda size: 1)

    viable: list[set[str]] = [set() for _ in range(d.depth + 1)]
    viable[d.depth] = set(d.level(d.depth))
    for m in range(d.depth, 0, -1):
        viable[m - 1] = {
            d.source(m, v, pos(d.fiber_size(m, v))) for v in viable[m]
        }

    if d.root not in viable[0]:
        return ()
    partial: list[tuple[tuple[str, ...], tuple[int, ...]]] = [((d.root,), ())]
    for m in range(1, n + 1):
        grown = []
        for vs, ks in partial:
            for v in d.level(m):
                if v not in viable[m]:
                    continue
                k = pos(d.fiber_size(m, v))
                if d.source(m, v, k) == vs[-1]:
                    grown.append((vs + (v,), ks + (k,)))
        partial = grown
    return tuple(PathPrefix(vs, ks, d) for vs, ks in partial)


@dataclass(frozen=True)
class ProperOrderReport:
    simple: bool
    max_count: int
    min_count: int
    depth: int

    @property
    def passed(self) -> bool:
        return self.simple and self.max_count == 1 and self.min_count == 1


def check_properly_ordered(
    d: OrderedBratteli, n: int, schedule: Sequence[int] | None = None
) -> ProperOrderReport:
    """Finite-depth certificate: simple plus unique extreme prefixes at n."""
    return ProperOrderReport(
        simple=check_simple_bratteli(d, schedule),
        max_count=len(extreme_paths(d, "max", n)),
        min_count=len(extreme_paths(d, "min", n)),
        depth=n,
    )


# -- array rows ------------------------------------------------------------------


@dataclass(frozen=True)
class SymbolRow:
    """One level of a BV array over an integer window, with its cuts."""

    level: int
    start: int
    values: tuple[str, ...]
    cuts: tuple[int, ...]

    @property
    def stop(self) -> int:
        return self.start + len(self.values)


def bv_array_rows(
    d: OrderedBratteli,
    p: PathPrefix,
    n: int,
    window: tuple[int, int],
    wrap: bool = False,
) -> SymbolRow:
    """Row n of the array of the orbit through p over the given window.

    Position 0 is p itself; the value at position i is the level-n vertex of
    the i-th adic iterate, and a cut marks positions whose first n edges are
    all minimal.  Without ``wrap`` the window must avoid the boundary path.
    """
    if not 0 <= n < d.depth:
        raise IndexOutOfRange(
            f"row {n} needs source data at level {n + 1} within depth {d.depth}"
        )
    a, b = window
    if b <= a:
        raise IndexOutOfRange(f"empty window {window!r}")
    current = p
    for _ in range(-a if a < 0 else 0):
        current = vershik_predecessor(d, current, wrap=wrap)
    for _ in range(a if a > 0 else 0):
        current = vershik_successor(d, current, wrap=wrap)
    values = []
    cuts = []
    for i in range(a, b):
        values.append(current.vertices[n])
        if all(k == 1 for k in current.ranks[:n]):
            cuts.append(i)
        if i + 1 < b:
            current = vershik_successor(d, current, wrap=wrap)
    return SymbolRow(n, a, tuple(values), tuple(cuts))


def bratteli_rank(d: OrderedBratteli, tail_window: int) -> RankEstimate:
    """Desk-scale liminf surrogate for the vertex-count sequence."""
    seq = tuple(len(level) for level in d.levels[1:])
    if not 1 <= tail_window <= len(seq):
        raise IndexOutOfRange(
            f"tail window {tail_window} out of range for {len(seq)} levels"
        )
    return RankEstimate(seq, min(seq[-tail_window:]), tail_window)


def to_dot(d: OrderedBratteli, name: str = "B") -> str:
    """DOT rendering with rank labels on edges, deterministic order."""
    lines = [f"digraph {name} {{", "  rankdir=TB;"]
    for n, level in enumerate(d.levels):
        for v in level:
            lines.append(f'  "L{n}.{v}" [label="{v}"];')
    for n in range(1, d.depth + 1):
        for v in d.level(n):
            for k, src in enumerate(d.fiber(n, v), start=1):
                lines.append(
                    f'  "L{n - 1}.{src}" -> "L{n}.{v}" [label="{k}"];'
                )
    lines.append("}")
    return "\n".join(lines) + "\n"
