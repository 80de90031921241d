"""Gambaudo-Martens structure on coverings.

A GM level is a graph together with a distinguished base vertex and an
ordered family of circuits through the base whose edges tile the graph.
Connecting covers then decompose each circuit into a word over the circuits
one level down; those words drive every construction in :mod:`covdyn.arrays`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .covering import Covering, GraphHom
from .digraph import Circuit, DiGraph, singleton_graph
from .errors import (
    BaseNotPreserved,
    CircuitNotRooted,
    DuplicateCircuit,
    EdgeNotOnAnyCircuit,
    EmptyWord,
    FirstStepMismatch,
    IndexOutOfRange,
    MergeViolation,
    UnknownLetter,
    WordNotStartingWithOne,
    WordTraceMismatch,
)

PASS = "pass"
REFUTED = "refuted"
INCONCLUSIVE = "inconclusive"


class GmLevel:
    """One level of a GM covering: base vertex plus base-rooted circuits.

    Circuits are stored exactly as declared (rooted at the base), so the
    distinguished starting point is never lost to rotation canonicalization.
    """

    __slots__ = ("level", "graph", "base", "circuits")

    def __init__(
        self,
        level: int,
        graph: DiGraph,
        base: str,
        circuits: Sequence[Sequence[str]],
    ):
        circs = tuple(tuple(c) for c in circuits)
        if base not in graph.index:
            raise CircuitNotRooted(f"base {base!r} is not a vertex", base=base)
        seen: set[tuple[str, ...]] = set()
        for i, c in enumerate(circs, start=1):
            Circuit(graph, c)  # validates closure and distinctness
            if c[0] != base or c[-1] != base:
                raise CircuitNotRooted(
                    f"circuit {i} at level {level} is not rooted at the base",
                    level=level,
                    index=i,
                )
            if c in seen:
                raise DuplicateCircuit(
                    f"circuit {i} at level {level} duplicates an earlier one",
                    level=level,
                    index=i,
                )
            seen.add(c)

        covered = set()
        for c in circs:
            covered.update(zip(c, c[1:]))
        for edge in graph.sorted_edges():
            if edge not in covered:
                raise EdgeNotOnAnyCircuit(
                    f"edge {edge!r} at level {level} lies on no declared circuit",
                    level=level,
                    edge=edge,
                )

        _check_merge_property(level, circs)

        self.level = level
        self.graph = graph
        self.base = base
        self.circuits = circs

    @property
    def r(self) -> int:
        return len(self.circuits)

    def length(self, i: int) -> int:
        return len(self.circuits[i - 1]) - 1

    @property
    def lengths(self) -> tuple[int, ...]:
        return tuple(len(c) - 1 for c in self.circuits)

    def circuit(self, i: int) -> tuple[str, ...]:
        return self.circuits[i - 1]

    def __repr__(self) -> str:
        return f"GmLevel(level={self.level}, r={self.r}, lengths={self.lengths})"


def _check_merge_property(level: int, circs: Sequence[tuple[str, ...]]) -> None:
    # Whenever two circuits meet at an interior position, they must run
    # together and reach their common endpoint at the same time.
    positions: dict[str, list[tuple[int, int]]] = {}
    for i, c in enumerate(circs, start=1):
        for j in range(1, len(c)):
            positions.setdefault(c[j], []).append((i, j))
    for shared in positions.values():
        for (i, j), (i2, j2) in itertools.combinations(shared, 2):
            if i == i2:
                continue
            a, b = circs[i - 1], circs[i2 - 1]
            la, lb = len(a) - 1, len(b) - 1
            k = 0
            while True:
                done_a = j + k == la
                done_b = j2 + k == lb
                if done_a != done_b:
                    raise MergeViolation(
                        f"circuits {i} and {i2} at level {level} merge at "
                        f"positions {j}/{j2} but end at different times",
                        level=level, i=i, j=j, i2=i2, j2=j2,
                    )
                if done_a and done_b:
                    break
                if a[j + k] != b[j2 + k]:
                    raise MergeViolation(
                        f"circuits {i} and {i2} at level {level} split after "
                        f"merging at positions {j}/{j2}",
                        level=level, i=i, j=j, i2=i2, j2=j2,
                    )
                k += 1


def level0_gm(vertex: str = "v0") -> GmLevel:
    """Level 0: the singleton loop as a one-circuit GM level."""
    g = singleton_graph(vertex)
    return GmLevel(0, g, vertex, ((vertex, vertex),))


@dataclass(frozen=True)
class CircuitWord:
    """The decomposition of one circuit into circuits one level down."""

    level: int
    index: int
    letters: tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.letters)


class GmCovering:
    """A covering whose every level carries validated GM structure."""

    __slots__ = ("covering", "levels", "words")

    def __init__(
        self,
        covering: Covering,
        levels: Sequence[GmLevel],
        words: Sequence[Sequence[CircuitWord]],
    ):
        self.covering = covering
        self.levels = tuple(levels)  # index n -> GmLevel, n = 0..depth
        self.words = tuple(tuple(ws) for ws in words)  # index n-1 -> level-n words

    @property
    def depth(self) -> int:
        return self.covering.depth

    def level(self, n: int) -> GmLevel:
        return self.levels[n]

    def r(self, n: int) -> int:
        return self.levels[n].r

    def length(self, n: int, i: int) -> int:
        return self.levels[n].length(i)

    def base(self, n: int) -> str:
        return self.levels[n].base

    def word(self, n: int, i: int) -> CircuitWord:
        if not 1 <= n <= self.depth or not 1 <= i <= self.r(n):
            raise IndexOutOfRange(f"no word at level {n}, index {i}", level=n, index=i)
        return self.words[n - 1][i - 1]

    @property
    def rank_sequence(self) -> tuple[int, ...]:
        return tuple(lv.r for lv in self.levels[1:])

    def __repr__(self) -> str:
        return f"GmCovering(depth={self.depth}, r={self.rank_sequence})"


def trace_word(hom: GraphHom, prev: GmLevel, circuit: Sequence[str]) -> tuple[int, ...]:
    """Factor the image of a circuit at visits to the lower base vertex.

    Each segment between consecutive base visits must reproduce one declared
    circuit of the lower level exactly.
    """
    image = hom.map_walk(circuit)
    base = prev.base
    cuts = [p for p, v in enumerate(image) if v == base]
    if not cuts or cuts[0] != 0 or cuts[-1] != len(image) - 1:
        raise WordTraceMismatch(
            "circuit image does not start and end at the lower base",
            level=prev.level + 1,
        )
    by_vertices = {c: i for i, c in enumerate(prev.circuits, start=1)}
    letters = []
    for a, b in zip(cuts, cuts[1:]):
        segment = image[a : b + 1]
        t = by_vertices.get(segment)
        if t is None:
            raise WordTraceMismatch(
                f"image segment {segment!r} matches no declared circuit",
                level=prev.level + 1,
            )
        letters.append(t)
    return tuple(letters)


def validate_gm(covering: Covering, levels: Sequence[GmLevel]) -> GmCovering:
    """Check the five GM conditions exhaustively and derive all words.

    ``levels`` holds the declared structure for levels 1..depth; level 0 is
    implicit.  Word tables come from tracing each circuit through its
    connecting cover.
    """
    declared = tuple(levels)
    if len(declared) != covering.depth:
        raise IndexOutOfRange(
            f"expected GM data for {covering.depth} levels, got {len(declared)}"
        )
    head = covering.graph(0)
    full = [level0_gm(head.vertices[0])] + list(declared)
    for n in range(1, covering.depth + 1):
        if full[n].graph != covering.graph(n):
            raise WordTraceMismatch(
                f"GM level {n} describes a different graph", level=n
            )

    words: list[tuple[CircuitWord, ...]] = []
    for n in range(1, covering.depth + 1):
        prev, here = full[n - 1], full[n]
        hom = covering.hom(n)
        if hom(here.base) != prev.base:
            raise BaseNotPreserved(
                f"level {n}: base maps to {hom(here.base)!r}, not the lower base",
                level=n,
            )
        # Item (5): the first step of every circuit lands on the first step
        # of the lower level's first circuit.
        target = prev.circuit(1)[1]
        level_words = []
        for i in range(1, here.r + 1):
            c = here.circuit(i)
            if hom(c[1]) != target:
                raise FirstStepMismatch(
                    f"level {n}, circuit {i}: first step maps to {hom(c[1])!r}",
                    level=n,
                    index=i,
                )
            letters = trace_word(hom, prev, c)
            if letters[0] != 1:
                raise FirstStepMismatch(
                    f"level {n}, circuit {i}: traced word starts with {letters[0]}",
                    level=n,
                    index=i,
                )
            if sum(prev.length(t) for t in letters) != here.length(i):
                raise WordTraceMismatch(
                    f"level {n}, circuit {i}: word lengths do not add up",
                    level=n,
                    index=i,
                )
            level_words.append(CircuitWord(n, i, letters))
        words.append(tuple(level_words))
    return GmCovering(covering, full, words)


def build_gm_level_from_words(
    prev: GmLevel, words: Sequence[Sequence[int]]
) -> tuple[GmLevel, GraphHom]:
    """Construct the next level from words over the previous level's circuits.

    Circuit interiors are pairwise disjoint fresh vertices, which satisfies
    the merge condition vacuously; the connecting map places position p of
    circuit i onto position p of the concatenated lower walk.
    """
    n = prev.level + 1
    ws = [tuple(w) for w in words]
    for i, w in enumerate(ws, start=1):
        if not w:
            raise EmptyWord(f"word {i} at level {n} is empty", level=n, index=i)
        if w[0] != 1:
            raise WordNotStartingWithOne(
                f"word {i} at level {n} starts with {w[0]}", level=n, index=i
            )
        for j, letter in enumerate(w, start=1):
            if not 1 <= letter <= prev.r:
                raise UnknownLetter(
                    f"word {i} at level {n} uses unknown letter {letter}",
                    level=n, index=i, position=j,
                )
    if sum(1 for w in ws if sum(prev.length(t) for t in w) == 1) > 1:
        raise DuplicateCircuit(
            f"two words at level {n} would both build the bare loop", level=n
        )

    base = f"v{n}.0"
    vertices = [base]
    edges: list[tuple[str, str]] = []
    circuits: list[tuple[str, ...]] = []
    mapping: dict[str, str] = {base: prev.base}
    for i, w in enumerate(ws, start=1):
        lower_walk: list[str] = [prev.base]
        for t in w:
            lower_walk.extend(prev.circuit(t)[1:])
        total = len(lower_walk) - 1
        interior = [f"v{n}.{i}.{p}" for p in range(1, total)]
        vertices.extend(interior)
        circ = [base] + interior + [base]
        circuits.append(tuple(circ))
        edges.extend(zip(circ, circ[1:]))
        for p, v in enumerate(interior, start=1):
            mapping[v] = lower_walk[p]

    graph = DiGraph(vertices, edges)
    level = GmLevel(n, graph, base, circuits)
    hom = GraphHom(graph, prev.graph, mapping)
    return level, hom


def build_gm_covering(
    lengths: Sequence[int], words_by_level: Sequence[Sequence[Sequence[int]]]
) -> GmCovering:
    """Assemble a full GM covering from level-1 lengths and per-level words.

    Level 1 is specified by circuit lengths (words over the single level-0
    loop); ``words_by_level[k]`` holds the words of level k+2.
    """
    level0 = level0_gm()
    levels = [level0]
    homs = []
    level1_words = [(1,) * length for length in lengths]
    lv, hom = build_gm_level_from_words(level0, level1_words)
    levels.append(lv)
    homs.append(hom)
    for ws in words_by_level:
        lv, hom = build_gm_level_from_words(levels[-1], ws)
        levels.append(lv)
        homs.append(hom)
    covering = Covering([lv.graph for lv in levels], homs)
    return validate_gm(covering, levels[1:])


# -- simplicity, isolated points, rank -----------------------------------------


def word_image_edges(prev: GmLevel, word: Sequence[int]) -> frozenset[tuple[str, str]]:
    """Edges of the lower level covered by one word's circuits."""
    covered: set[tuple[str, str]] = set()
    for t in word:
        c = prev.circuit(t)
        covered.update(zip(c, c[1:]))
    return frozenset(covered)


def strengthened_level_words(
    prev: GmLevel, words: Sequence[Sequence[int]]
) -> tuple[bool, ...]:
    """Per word: does its traced image cover every edge one level down?"""
    full = prev.graph.edges
    return tuple(word_image_edges(prev, w) == full for w in words)


@dataclass(frozen=True)
class LevelSimplicity:
    level: int
    status: str
    witness: int | None = None
    failing: tuple[int, ...] = ()


@dataclass(frozen=True)
class SimplicityReport:
    strengthened: bool
    levels: tuple[LevelSimplicity, ...]

    @property
    def status(self) -> str:
        if any(e.status == REFUTED for e in self.levels):
            return REFUTED
        if any(e.status == INCONCLUSIVE for e in self.levels):
            return INCONCLUSIVE
        return PASS


def check_simplicity(
    g: GmCovering, strengthened: bool = True, horizon: int | None = None
) -> SimplicityReport:
    """Check the edge-covering form of simplicity level by level.

    Strengthened mode asks every level-n word to cover all edges of
    G_{n-1}; otherwise each level n searches for a witness m <= horizon.
    Failures of the horizon search are reported as inconclusive.
    """
    entries = []
    if strengthened:
        for n in range(1, g.depth + 1):
            prev = g.level(n - 1)
            oks = strengthened_level_words(
                prev, [g.word(n, i).letters for i in range(1, g.r(n) + 1)]
            )
            bad = tuple(i for i, ok in enumerate(oks, start=1) if not ok)
            entries.append(
                LevelSimplicity(n, REFUTED if bad else PASS, failing=bad)
            )
        return SimplicityReport(True, tuple(entries))

    horizon = g.depth if horizon is None else horizon
    if horizon > g.depth:
        raise IndexOutOfRange(f"horizon {horizon} exceeds depth {g.depth}")
    for n in range(1, g.depth + 1):
        witness = None
        full = g.level(n).graph.edges
        for m in range(n + 1, horizon + 1):
            proj = g.covering.composite(m, n)
            images = [proj.map_walk(c) for c in g.level(m).circuits]
            if all(frozenset(zip(w, w[1:])) == full for w in images):
                witness = m
                break
        entries.append(
            LevelSimplicity(n, PASS if witness else INCONCLUSIVE, witness=witness)
        )
    return SimplicityReport(False, tuple(entries))


@dataclass(frozen=True)
class VertexSplitting:
    level: int
    vertex: str
    witness: int | None
    preimages: tuple[str, str] | None


@dataclass(frozen=True)
class IsolatedPointReport:
    rows: tuple[VertexSplitting, ...]

    @property
    def status(self) -> str:
        return PASS if all(r.witness is not None for r in self.rows) else INCONCLUSIVE

    def unresolved(self) -> tuple[VertexSplitting, ...]:
        return tuple(r for r in self.rows if r.witness is None)


def check_no_isolated_points(g: GmCovering, horizon: int) -> IsolatedPointReport:
    """Look for two distinct preimages of every vertex within the horizon.

    A witness for vertex v at level n is the least m <= horizon such that
    some two vertices of G_m both project onto v.  Only levels n < horizon
    are scanned; deeper levels cannot be resolved by any search below the
    declared depth.
    """
    if horizon > g.depth:
        raise IndexOutOfRange(f"horizon {horizon} exceeds depth {g.depth}")
    rows = []
    for n in range(1, horizon):
        remaining = {v: None for v in g.level(n).graph.vertices}
        found: dict[str, tuple[int, tuple[str, str]]] = {}
        for m in range(n + 1, horizon + 1):
            proj = g.covering.composite(m, n)
            buckets: dict[str, list[str]] = {}
            for u in g.level(m).graph.vertices:
                buckets.setdefault(proj(u), []).append(u)
            for v in list(remaining):
                pre = buckets.get(v, ())
                if len(pre) >= 2:
                    found[v] = (m, (pre[0], pre[1]))
                    del remaining[v]
            if not remaining:
                break
        for v in g.level(n).graph.vertices:
            if v in found:
                m, pair = found[v]
                rows.append(VertexSplitting(n, v, m, pair))
            else:
                rows.append(VertexSplitting(n, v, None, None))
    return IsolatedPointReport(tuple(rows))


@dataclass(frozen=True)
class RankEstimate:
    sequence: tuple[int, ...]
    estimate: int
    tail_window: int


def rank_estimate(g: GmCovering, tail_window: int) -> RankEstimate:
    """The circuit-count sequence and the min over its last tail levels.

    The estimate is a desk-scale surrogate for the liminf and an upper-bound
    witness for the rank of this covering, never a certified topological rank.
    """
    seq = g.rank_sequence
    if not 1 <= tail_window <= len(seq):
        raise IndexOutOfRange(
            f"tail window {tail_window} out of range for {len(seq)} levels"
        )
    return RankEstimate(seq, min(seq[-tail_window:]), tail_window)


# -- word expansion --------------------------------------------------------------


def expand_word(g: GmCovering, n: int, i: int, m: int) -> tuple[int, ...]:
    """Letters of circuit (n, i) read at level m <= n.

    Expansion replaces each level-k letter by its own word until level m is
    reached; at m == n the answer is just (i,).
    """
    if not 0 <= m <= n <= g.depth:
        raise IndexOutOfRange(f"bad expansion levels m={m}, n={n}", m=m, n=n)
    letters = (i,)
    for k in range(n, m, -1):
        letters = tuple(
            t for letter in letters for t in g.word(k, letter).letters
        )
    return letters
