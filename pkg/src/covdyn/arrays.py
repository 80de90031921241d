"""Array and linked-array windows, slides, rotated words, Bratteli synthesis,
and the desk-scale window-language conjugacy verifier.

The operational meaning of conjugacy here is exact equality of finite
window languages: width-W frames of the slid linked-array system on one
side and of the synthesized adic array system on the other.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .bratteli import OrderedBratteli, paths_into
from .covering import telescope
from .errors import (
    BudgetExceeded,
    IndexOutOfRange,
    InsufficientMargin,
    InvalidWalk,
    NormalizationNotFoundWithinBound,
    NotNormalized,
    NotSimple,
)
from .gm import (
    PASS,
    GmCovering,
    GmLevel,
    check_simplicity,
    validate_gm,
)

DEFAULT_FRAME_BUDGET = 10**6


# -- windows ---------------------------------------------------------------------


@dataclass(frozen=True)
class ArrayWindow:
    """Vertex rows 0..N over an integer window; column i is a vertex tower."""

    start: int
    rows: tuple[tuple[str, ...], ...]

    @property
    def depth(self) -> int:
        return len(self.rows) - 1

    @property
    def width(self) -> int:
        return len(self.rows[0])


@dataclass(frozen=True)
class LinkedRow:
    """One level of a linked window: per-column circuit candidates plus cuts.

    A column's label is determined when its candidate tuple has length one;
    wider candidate sets can only occur on partial blocks at window edges.
    """

    level: int
    start: int
    labels: tuple[tuple[int, ...], ...]
    cuts: tuple[int, ...]

    @property
    def width(self) -> int:
        return len(self.labels)

    def label_at(self, position: int) -> tuple[int, ...]:
        return self.labels[position - self.start]

    def determined(self) -> bool:
        return all(len(c) == 1 for c in self.labels)


@dataclass(frozen=True)
class LinkedArrayWindow:
    """Circuit rows 0..N over an integer window with nested cuts."""

    start: int
    rows: tuple[LinkedRow, ...]

    @property
    def depth(self) -> int:
        return len(self.rows) - 1

    @property
    def width(self) -> int:
        return self.rows[0].width

    def row(self, n: int) -> LinkedRow:
        return self.rows[n]


def cuts_nested(window: LinkedArrayWindow) -> bool:
    """Every (n+1)-cut position must also be an n-cut position."""
    for lower, upper in zip(window.rows, window.rows[1:]):
        if not set(upper.cuts) <= set(lower.cuts):
            return False
    return True


def _segment_candidates(
    level: GmLevel,
    seg: Sequence[str],
    left_closed: bool,
    right_closed: bool,
) -> tuple[int, ...]:
    # Which circuits can produce this maximal run between cuts?  A block
    # whose left cut is visible starts at circuit position 0; otherwise the
    # run continues a block begun left of the window.
    width = len(seg)
    found = []
    for t in range(1, level.r + 1):
        c = level.circuit(t)
        length = len(c) - 1
        offsets = (0,) if left_closed else range(1, length)
        for o in offsets:
            if right_closed and o + width != length:
                continue
            if o + width > length:
                continue
            if all(c[o + p] == seg[p] for p in range(width)):
                found.append(t)
                break
    return tuple(found)


def linked_window(
    g: GmCovering, n: int, walk: Sequence[str], start: int = 0
) -> tuple[ArrayWindow, LinkedArrayWindow]:
    """Project a walk in G_n into vertex rows and labeled circuit rows.

    Cuts sit on the columns whose row vertex is the level base; each block
    between cuts is labeled with the circuits consistent with its visible
    segment (a singleton except possibly at the window edges).
    """
    if not 0 <= n <= g.depth:
        raise IndexOutOfRange(f"level {n} out of range", level=n)
    vs = tuple(walk)
    graph = g.level(n).graph
    for v in vs:
        if v not in graph.index:
            raise InvalidWalk(f"{v!r} is not a vertex of G_{n}", vertex=v)
    for u, w in zip(vs, vs[1:]):
        if not graph.has_edge(u, w):
            raise InvalidWalk(f"({u!r}, {w!r}) is not an edge of G_{n}", edge=(u, w))

    vertex_rows = []
    for m in range(0, n + 1):
        proj = g.covering.composite(n, m)
        vertex_rows.append(proj.map_walk(vs))

    linked_rows = []
    width = len(vs)
    for m in range(0, n + 1):
        level = g.level(m)
        row = vertex_rows[m]
        cut_offsets = [p for p, v in enumerate(row) if v == level.base]
        labels: list[tuple[int, ...]] = [()] * width
        bounds = []
        if not cut_offsets:
            bounds.append((0, width, False, False))
        else:
            if cut_offsets[0] > 0:
                bounds.append((0, cut_offsets[0], False, True))
            for a, b in zip(cut_offsets, cut_offsets[1:]):
                bounds.append((a, b, True, True))
            bounds.append((cut_offsets[-1], width, True, False))
        for a, b, left, right in bounds:
            if a == b:
                continue
            cand = _segment_candidates(level, row[a:b], left, right)
            for p in range(a, b):
                labels[p] = cand
        linked_rows.append(
            LinkedRow(
                m,
                start,
                tuple(labels),
                tuple(start + p for p in cut_offsets),
            )
        )
    return (
        ArrayWindow(start, tuple(vertex_rows)),
        LinkedArrayWindow(start, tuple(linked_rows)),
    )


# -- n-symbols -------------------------------------------------------------------


@dataclass(frozen=True)
class BlockRow:
    """A row of labeled blocks: circuit index plus width per block."""

    level: int
    labels: tuple[int, ...]
    widths: tuple[int, ...]

    @property
    def width(self) -> int:
        return sum(self.widths)

    def cut_positions(self) -> tuple[int, ...]:
        cuts = []
        pos = 0
        for w in self.widths:
            cuts.append(pos)
            pos += w
        return tuple(cuts)

    def to_columns(self) -> tuple[tuple[int, ...], frozenset[int]]:
        cols: list[int] = []
        for label, w in zip(self.labels, self.widths):
            cols.extend([label] * w)
        return tuple(cols), frozenset(self.cut_positions())


@dataclass(frozen=True)
class NSymbol:
    """The square form of one circuit: its projections to all lower rows."""

    level: int
    index: int
    rows: tuple[BlockRow, ...]  # rows[m] is the level-m projection

    @property
    def width(self) -> int:
        return self.rows[self.level].width

    def row(self, m: int) -> BlockRow:
        return self.rows[m]


def n_symbol(g: GmCovering, n: int, i: int) -> NSymbol:
    """Expand circuit (n, i) into its full square symbol, rows n down to 0."""
    if not 1 <= n <= g.depth or not 1 <= i <= g.r(n):
        raise IndexOutOfRange(f"no circuit ({n}, {i})", level=n, index=i)
    rows: list[BlockRow] = [BlockRow(n, (i,), (g.length(n, i),))]
    for m in range(n - 1, -1, -1):
        labels: list[int] = []
        for t in rows[-1].labels:
            labels.extend(g.word(m + 1, t).letters)
        widths = tuple(g.length(m, t) for t in labels)
        rows.append(BlockRow(m, tuple(labels), widths))
    rows.reverse()
    return NSymbol(n, i, tuple(rows))


# -- normalization ---------------------------------------------------------------


def is_normalized(g: GmCovering) -> bool:
    """Every level n >= 2 has words longer than two letters sharing their
    second letter."""
    for n in range(2, g.depth + 1):
        words = [g.word(n, i).letters for i in range(1, g.r(n) + 1)]
        if any(len(w) <= 2 for w in words):
            return False
        if len({w[1] for w in words}) != 1:
            return False
    return True


def second_letter(g: GmCovering, n: int) -> int:
    """The common second letter a(n) of the level-n words."""
    if not is_normalized(g):
        raise NotNormalized(f"level {n} words lack a common second letter", level=n)
    return g.word(n, 1).letters[1]


def telescope_gm(g: GmCovering, indices: Sequence[int]) -> GmCovering:
    """Telescope the underlying covering and re-validate the GM structure.

    Surviving levels keep their graphs, bases, and circuit lists; the word
    tables are re-derived by tracing through the composite covers.
    """
    tele = telescope(g.covering, indices)
    levels = [
        GmLevel(k, g.level(idx).graph, g.level(idx).base, g.level(idx).circuits)
        for k, idx in enumerate(tuple(indices)[1:], start=1)
    ]
    return validate_gm(tele, levels)


def normalize_for_construction(g: GmCovering, max_step: int = 8) -> GmCovering:
    """Search uniform telescopings until the construction conditions hold.

    Tries step sizes 1..max_step; step s keeps levels 0, s, 2s, ....  The
    input must pass the strengthened per-level simplicity check, which is
    preserved by telescoping.
    """
    report = check_simplicity(g, strengthened=True)
    if report.status != PASS:
        bad = [e.level for e in report.levels if e.status != PASS]
        raise NotSimple(
            f"strengthened simplicity fails at levels {bad}", levels=tuple(bad)
        )
    if g.depth < 2:
        return g
    for step in range(1, max_step + 1):
        indices = tuple(range(0, g.depth + 1, step))
        if len(indices) < 3:
            break
        candidate = g if step == 1 else telescope_gm(g, indices)
        if is_normalized(candidate):
            return candidate
    raise NormalizationNotFoundWithinBound(
        f"no uniform telescoping with step <= {max_step} normalizes the covering",
        max_step=max_step,
    )


# -- slides ----------------------------------------------------------------------


@dataclass(frozen=True)
class SlideSpec:
    """Cumulative per-level slide amounts S(n), with S(0) = S(1) = 0."""

    amounts: tuple[int, ...]

    @classmethod
    def from_gm(cls, g: GmCovering) -> "SlideSpec":
        acc = [0, 0][: g.depth + 1]
        for n in range(2, g.depth + 1):
            acc.append(acc[-1] + g.length(n - 1, 1))
        return cls(tuple(acc))

    def S(self, n: int) -> int:
        return self.amounts[n]

    def s(self, n: int) -> int:
        return self.amounts[n] - self.amounts[n - 1]


def slide(window: LinkedArrayWindow, spec: SlideSpec) -> LinkedArrayWindow:
    """Realign rows so each level-n block sits over its rotated word.

    Row n's content moves S(n) columns to the right relative to absolute
    positions (each block start travels from its first letter to its second);
    the output is trimmed to the window on which every row is defined.
    """
    top = window.depth
    shift_top = spec.S(top)
    if window.width <= shift_top:
        raise InsufficientMargin(
            f"window of width {window.width} cannot absorb a slide of {shift_top}",
            needed=shift_top + 1,
            available=window.width,
        )
    new_start = window.start + shift_top
    new_width = window.width - shift_top
    rows = []
    for n, row in enumerate(window.rows):
        shift = spec.S(n)
        lo = new_start - window.start - shift
        labels = row.labels[lo : lo + new_width]
        cuts = tuple(
            c + shift
            for c in row.cuts
            if new_start <= c + shift < new_start + new_width
        )
        rows.append(LinkedRow(n, new_start, labels, cuts))
    return LinkedArrayWindow(new_start, tuple(rows))


# -- rotated words and Bratteli synthesis ------------------------------------------


@dataclass(frozen=True)
class RotatedWord:
    """One-step leftward rotation of a circuit word: (a(n), ..., 1)."""

    level: int
    index: int
    letters: tuple[int, ...]


def rotated_words(g: GmCovering) -> tuple[tuple[RotatedWord, ...], ...]:
    """The rotated decomposition table for all levels 1..depth.

    Level-n entries read (a(n), a(n,i,3), ..., a(n,i,k), 1); level 1 rotates
    the all-ones expansion onto itself.
    """
    if not is_normalized(g):
        raise NotNormalized("rotated words need a normalized covering")
    table = []
    for n in range(1, g.depth + 1):
        row = []
        for i in range(1, g.r(n) + 1):
            w = g.word(n, i).letters
            row.append(RotatedWord(n, i, w[1:] + (1,)))
        table.append(tuple(row))
    return tuple(table)


def bratteli_vertex(n: int, i: int) -> str:
    """Vertex name for circuit i at level n in the synthesized diagram."""
    return f"c{n}.{i}" if n > 0 else "v0"


def build_ordered_bratteli(g: GmCovering) -> OrderedBratteli:
    """Synthesize the ordered diagram whose towers read out the slid system.

    Level-n vertices are the level-n circuits; the in-edge fiber of circuit
    (n, i) has one edge per rotated-word letter in word order, so the
    minimal edge comes from circuit a(n) and the maximal edge from circuit 1
    regardless of i.  Level-1 fibers take l(1, i) edges from the root.
    """
    table = rotated_words(g)
    levels: list[tuple[str, ...]] = [("v0",)]
    fibers: list[dict[str, tuple[str, ...]]] = []
    for n in range(1, g.depth + 1):
        levels.append(tuple(bratteli_vertex(n, i) for i in range(1, g.r(n) + 1)))
        fibers.append(
            {
                bratteli_vertex(n, i): tuple(
                    bratteli_vertex(n - 1, t) for t in table[n - 1][i - 1].letters
                )
                for i in range(1, g.r(n) + 1)
            }
        )
    return OrderedBratteli(levels, fibers)


# -- conjugacy verification ---------------------------------------------------------

Frame = tuple  # rows 0..N of ((label, cut), ...) cells


@dataclass(frozen=True)
class ConjugacyReport:
    equal: bool
    depth: int
    width: int
    frame_level: int
    covering_count: int
    diagram_count: int
    only_covering: tuple[Frame, ...]
    only_diagram: tuple[Frame, ...]

    @property
    def status(self) -> str:
        return "equal" if self.equal else "mismatch"


def _grid_rows(
    g: GmCovering, top: int, i: int, depth_n: int
) -> list[tuple[tuple[int, ...], frozenset[int]]]:
    sym = n_symbol(g, top, i)
    return [sym.row(m).to_columns() for m in range(depth_n + 1)]


def choose_frame_level(g: GmCovering, depth_n: int, width: int, spec: SlideSpec) -> int:
    """Least M whose shortest circuit is at least width + S(depth_n) long."""
    need = width + spec.S(depth_n)
    for m in range(1, g.depth):
        if min(g.level(m).lengths) >= need:
            return m
    raise BudgetExceeded(
        f"covering of depth {g.depth} has no level with min circuit length "
        f">= {need}; deepen the covering or shrink the window",
        needed=need,
    )


def _covering_frames(
    g: GmCovering, depth_n: int, width: int, spec: SlideSpec, top: int, budget: int
) -> set[Frame]:
    # Reads the slid rows under each (top)-symbol block.  Row n under the
    # block spills S(top) - S(n) columns into the following block; that spill
    # is independent of which symbol follows (the words share first and
    # second letters), which we verify rather than assume.
    delta = [spec.S(top) - spec.S(n) for n in range(depth_n + 1)]
    grids = {i: _grid_rows(g, top, i, depth_n) for i in range(1, g.r(top) + 1)}

    prefix: list[tuple[tuple[int, ...], frozenset[int]]] = []
    for n in range(depth_n + 1):
        labels, cuts = grids[1][n]
        head = labels[: delta[n]], frozenset(c for c in cuts if c < delta[n])
        for i in range(2, g.r(top) + 1):
            other_labels, other_cuts = grids[i][n]
            other = (
                other_labels[: delta[n]],
                frozenset(c for c in other_cuts if c < delta[n]),
            )
            if other != head:
                raise NotNormalized(
                    f"level-{n} readout is not determined across level-{top} blocks"
                )
        prefix.append(head)

    frames: set[Frame] = set()
    total = 0
    for i in range(1, g.r(top) + 1):
        length = g.length(top, i)
        rows: list[tuple[tuple[int, ...], set[int]]] = []
        for n in range(depth_n + 1):
            labels, cuts = grids[i][n]
            dn = delta[n]
            spill_labels, spill_cuts = prefix[n]
            out_labels = labels[dn:] + spill_labels
            out_cuts = {c - dn for c in cuts if c >= dn}
            out_cuts.update(c + (length - dn) for c in spill_cuts)
            rows.append((out_labels, out_cuts))
        total += max(0, length - width + 1)
        if total > budget:
            raise BudgetExceeded(
                f"frame enumeration exceeds budget of {budget}", budget=budget
            )
        for p in range(0, length - width + 1):
            frames.add(
                tuple(
                    tuple(
                        (labels[c], c in cuts) for c in range(p, p + width)
                    )
                    for labels, cuts in rows
                )
            )
    return frames


def _diagram_frames(
    d: OrderedBratteli, depth_n: int, width: int, top: int, budget: int
) -> set[Frame]:
    # Columns of the tower of each top-level vertex, rows read from path
    # vertices and cuts from all-minimal prefixes.
    label_of = [
        {v: i for i, v in enumerate(d.level(n), start=1)} for n in range(top + 1)
    ]
    frames: set[Frame] = set()
    total = 0
    for v in d.level(top):
        paths = paths_into(d, top, v, budget=budget)
        rows: list[tuple[list[int], set[int]]] = []
        for n in range(depth_n + 1):
            labels = [label_of[n][p.vertices[n]] for p in paths]
            cuts = {
                j
                for j, p in enumerate(paths)
                if all(k == 1 for k in p.ranks[:n])
            }
            rows.append((labels, cuts))
        total += max(0, len(paths) - width + 1)
        if total > budget:
            raise BudgetExceeded(
                f"frame enumeration exceeds budget of {budget}", budget=budget
            )
        for p in range(0, len(paths) - width + 1):
            frames.add(
                tuple(
                    tuple(
                        (labels[c], c in cuts) for c in range(p, p + width)
                    )
                    for labels, cuts in rows
                )
            )
    return frames


def verify_conjugacy(
    g: GmCovering,
    depth_n: int,
    width: int,
    diagram: OrderedBratteli | None = None,
    budget: int = DEFAULT_FRAME_BUDGET,
) -> ConjugacyReport:
    """Compare window languages of the slid system and the adic system.

    Both sides enumerate all width-W frames of rows 0..N inside the towers
    of the frame level's blocks: the covering side from slid symbol
    expansions, the diagram side from lexicographically ordered path
    stacks.  Exact set equality is the pass criterion.
    """
    if not is_normalized(g):
        raise NotNormalized("verification needs a normalized covering")
    if width < 1 or not 0 <= depth_n <= g.depth:
        raise IndexOutOfRange(f"bad window parameters N={depth_n}, W={width}")
    spec = SlideSpec.from_gm(g)
    level_m = choose_frame_level(g, depth_n, width, spec)
    top = level_m + 1
    side_a = _covering_frames(g, depth_n, width, spec, top, budget)
    d = diagram if diagram is not None else build_ordered_bratteli(g)
    if d.depth < top:
        raise IndexOutOfRange(
            f"diagram depth {d.depth} is shallower than frame level {top}"
        )
    side_b = _diagram_frames(d, depth_n, width, top, budget)
    only_a = tuple(sorted(side_a - side_b))[:3]
    only_b = tuple(sorted(side_b - side_a))[:3]
    return ConjugacyReport(
        equal=side_a == side_b,
        depth=depth_n,
        width=width,
        frame_level=level_m,
        covering_count=len(side_a),
        diagram_count=len(side_b),
        only_covering=only_a,
        only_diagram=only_b,
    )
