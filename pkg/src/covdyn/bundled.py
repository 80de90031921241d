"""Canonical bundled inputs used by the CLI, the tests, and the docs.

``e-odo``  doubling odometer: one circuit per level, each wrapping twice.
``e-r2``   rank-2 covering: two circuits, words (1,2,1) and (1,2,2) repeated.
``2-odometer``  the binary odometer as an ordered Bratteli diagram.

Each input ships both as a builder function and as a data file in the
package; the CLI resolves bundled names through the files.
"""

from __future__ import annotations

from importlib import resources

from .bratteli import OrderedBratteli
from .errors import IndexOutOfRange
from .gm import GmCovering, build_gm_covering


def e_odo(depth: int = 8) -> GmCovering:
    """Doubling odometer covering: lengths (2,), word (1, 1) at every level."""
    if depth < 1:
        raise IndexOutOfRange("depth must be at least 1", depth=depth)
    return build_gm_covering((2,), [((1, 1),)] * (depth - 1))


def e_r2(depth: int = 8) -> GmCovering:
    """Rank-2 covering: lengths (2, 3), words (1,2,1) and (1,2,2) repeated."""
    if depth < 1:
        raise IndexOutOfRange("depth must be at least 1", depth=depth)
    return build_gm_covering((2, 3), [((1, 2, 1), (1, 2, 2))] * (depth - 1))


def two_odometer(depth: int = 6) -> OrderedBratteli:
    """Binary odometer diagram: one vertex and two ordered edges per level."""
    if depth < 1:
        raise IndexOutOfRange("depth must be at least 1", depth=depth)
    levels = [("v0",)] + [("u",)] * depth
    fibers = [{"u": ("v0", "v0")}] + [{"u": ("u", "u")}] * (depth - 1)
    return OrderedBratteli(levels, fibers)


BUNDLED_COVERINGS = {
    "e-odo": lambda: e_odo(8),
    "e-r2": lambda: e_r2(9),
}

BUNDLED_DIAGRAMS = {
    "2-odometer": lambda: two_odometer(8),
}

BUNDLED_FILES = {
    "e-odo": "e-odo.gmcov",
    "e-r2": "e-r2.gmcov",
    "2-odometer": "2-odometer.brat",
}


def bundled_text(name: str) -> str:
    """The raw text of a bundled input file."""
    if name not in BUNDLED_FILES:
        raise IndexOutOfRange(f"no bundled input named {name!r}", name=name)
    return (
        resources.files("covdyn").joinpath("data", BUNDLED_FILES[name]).read_text()
    )
