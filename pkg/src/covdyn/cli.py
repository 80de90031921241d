"""Command-line front end.

Exit codes triage bounded-search semantics: 0 pass/equal, 1 refuted or
mismatch, 2 inconclusive (no witness within a horizon, budget or depth
exhausted), 3 input error.  Reports are deterministic byte for byte for a
fixed input and flag set.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

from . import arrays as ar
from . import bratteli as bd
from . import covering as cv
from . import digraph as dg
from . import files, gm, render
from .bundled import BUNDLED_FILES, bundled_text
from .errors import (
    BudgetExceeded,
    CovdynError,
    MaxPathAtDepth,
    MinPathAtDepth,
    NormalizationNotFoundWithinBound,
    NotSimple,
    ParseError,
)

EXIT_PASS = 0
EXIT_REFUTED = 1
EXIT_INCONCLUSIVE = 2
EXIT_INPUT = 3

_INCONCLUSIVE_ERRORS = (
    BudgetExceeded,
    NormalizationNotFoundWithinBound,
    MaxPathAtDepth,
    MinPathAtDepth,
)


@dataclass
class RunConfig:
    command: str
    input: str
    format: str = "text"
    output: str | None = None
    figure: str | None = None
    depth: int | None = None
    width: int | None = None
    level: int | None = None
    n: int | None = None
    circuit: int = 1
    steps: int = 16
    horizon: int | None = None
    tail_window: int | None = None
    indices: tuple[int, ...] = ()
    schedule: tuple[int, ...] = ()
    budget: int = ar.DEFAULT_FRAME_BUDGET
    max_step: int = 8
    wrap: bool = False
    slide: bool = False
    start: str = "min"


class Reporter:
    """Collects key-value records and human lines; prints one dialect."""

    def __init__(self, fmt: str):
        self.fmt = fmt
        self.records: list[tuple[str, str]] = []
        self.lines: list[str] = []

    def kv(self, key: str, value) -> None:
        self.records.append((key, str(value)))
        self.lines.append(f"{key} = {value}")

    def text(self, line: str = "") -> None:
        self.lines.append(line)

    def block(self, rows: list[render.RowView], prefix: str = "row") -> None:
        if self.fmt == "structured":
            self.records.extend(render.render_kv(rows, prefix))
        else:
            self.lines.append(render.render_text(rows).rstrip("\n"))

    def flush(self) -> None:
        if self.fmt == "structured":
            out = "".join(f"{k} = {v}\n" for k, v in self.records)
        else:
            out = "".join(line + "\n" for line in self.lines)
        sys.stdout.write(out)


def load_input(name: str):
    if name in BUNDLED_FILES:
        return files.parse_text(bundled_text(name))
    path = Path(name)
    if not path.exists():
        raise ParseError(f"no such input file or bundled name {name!r}", 0, 0)
    return files.parse_file(path)


def _need_gm(obj) -> gm.GmCovering:
    if not isinstance(obj, gm.GmCovering):
        raise ParseError("this command needs a gm-covering input", 0, 0)
    return obj


def _need_covering(obj) -> cv.Covering:
    if isinstance(obj, gm.GmCovering):
        return obj.covering
    if isinstance(obj, cv.Covering):
        return obj
    raise ParseError("this command needs a covering input", 0, 0)


def _as_diagram(obj, cfg: RunConfig) -> bd.OrderedBratteli:
    if isinstance(obj, bd.OrderedBratteli):
        return obj
    g = _need_gm(obj)
    return ar.build_ordered_bratteli(
        ar.normalize_for_construction(g, max_step=cfg.max_step)
    )


def _write_or_print(rep: Reporter, cfg: RunConfig, payload: str) -> None:
    if cfg.output:
        Path(cfg.output).write_text(payload)
        rep.kv("written", cfg.output)
    else:
        rep.text(payload.rstrip("\n"))
        rep.records.append(("payload", payload))


def _maybe_figure(rep: Reporter, cfg: RunConfig, rows, title: str) -> None:
    if cfg.figure:
        from .figures import render_rows_figure

        out = render_rows_figure(rows, cfg.figure, title=title)
        rep.kv("figure", out)


# -- handlers -------------------------------------------------------------------


def cmd_validate(obj, cfg: RunConfig, rep: Reporter) -> int:
    if isinstance(obj, bd.OrderedBratteli):
        rep.kv("input.kind", "bratteli")
        rep.kv("depth", obj.depth)
        rep.kv("vertices", " ".join(str(len(lv)) for lv in obj.levels))
        return EXIT_PASS
    if isinstance(obj, gm.GmCovering):
        rep.kv("input.kind", "gm-covering")
        rep.kv("depth", obj.depth)
        rep.kv("ranks", " ".join(str(r) for r in obj.rank_sequence))
        rep.kv("lengths", " ".join(str(length) for length in obj.level(obj.depth).lengths))
        return EXIT_PASS
    rep.kv("input.kind", "covering")
    rep.kv("depth", obj.depth)
    rep.kv("vertices", " ".join(str(len(obj.graph(n).vertices)) for n in range(obj.depth + 1)))
    return EXIT_PASS


def cmd_classify(obj, cfg: RunConfig, rep: Reporter) -> int:
    c = _need_covering(obj)
    for n in range(1, c.depth + 1):
        flags = c.hom(n).classification()
        rep.kv(
            f"level.{n}",
            f"edge_surjective={flags.edge_surjective} "
            f"plus_directional={flags.plus_directional} "
            f"bidirectional={flags.bidirectional} "
            f"is_cover={flags.is_cover}",
        )
    return EXIT_PASS


def cmd_telescope(obj, cfg: RunConfig, rep: Reporter) -> int:
    if not cfg.indices:
        raise ParseError("telescope needs --indices, e.g. 0,2,4", 0, 0)
    if isinstance(obj, gm.GmCovering):
        out = files.gm_to_text(ar.telescope_gm(obj, cfg.indices))
    else:
        out = files.covering_to_text(cv.telescope(_need_covering(obj), cfg.indices))
    _write_or_print(rep, cfg, out)
    return EXIT_PASS


def cmd_minimality(obj, cfg: RunConfig, rep: Reporter) -> int:
    c = _need_covering(obj)
    if cfg.n is None:
        raise ParseError("minimality needs --n", 0, 0)
    horizon = cfg.horizon if cfg.horizon is not None else c.depth
    witness = cv.minimality_witness(c, cfg.n, horizon)
    rep.kv("level", cfg.n)
    rep.kv("horizon", horizon)
    if witness is None:
        rep.kv("witness", "none")
        rep.text("no witness within horizon")
        return EXIT_INCONCLUSIVE
    rep.kv("witness", witness)
    return EXIT_PASS


def cmd_gm_check(obj, cfg: RunConfig, rep: Reporter) -> int:
    g = _need_gm(obj)
    horizon = cfg.horizon if cfg.horizon is not None else g.depth
    simplicity = gm.check_simplicity(g, strengthened=True)
    for entry in simplicity.levels:
        detail = f"status={entry.status}"
        if entry.failing:
            detail += " failing=" + ",".join(str(i) for i in entry.failing)
        rep.kv(f"simplicity.level.{entry.level}", detail)
    isolated = gm.check_no_isolated_points(g, horizon)
    unresolved = isolated.unresolved()
    rep.kv("isolated.status", isolated.status)
    for row in unresolved:
        rep.kv(f"isolated.open.{row.level}.{row.vertex}", "no witness")
    if simplicity.status == gm.REFUTED:
        return EXIT_REFUTED
    if simplicity.status == gm.INCONCLUSIVE or isolated.status != gm.PASS:
        return EXIT_INCONCLUSIVE
    return EXIT_PASS


def cmd_rank(obj, cfg: RunConfig, rep: Reporter) -> int:
    if isinstance(obj, bd.OrderedBratteli):
        tail = cfg.tail_window or min(3, obj.depth)
        est = bd.bratteli_rank(obj, tail)
    else:
        g = _need_gm(obj)
        tail = cfg.tail_window or min(3, g.depth)
        est = gm.rank_estimate(g, tail)
    rep.kv("sequence", " ".join(str(r) for r in est.sequence))
    rep.kv("tail_window", est.tail_window)
    rep.kv("estimate", est.estimate)
    return EXIT_PASS


def cmd_normalize(obj, cfg: RunConfig, rep: Reporter) -> int:
    g = _need_gm(obj)
    normalized = ar.normalize_for_construction(g, max_step=cfg.max_step)
    rep.kv("depth", normalized.depth)
    rep.kv("normalized", "yes")
    _write_or_print(rep, cfg, files.gm_to_text(normalized))
    return EXIT_PASS


def cmd_build_bv(obj, cfg: RunConfig, rep: Reporter) -> int:
    g = _need_gm(obj)
    diagram = ar.build_ordered_bratteli(
        ar.normalize_for_construction(g, max_step=cfg.max_step)
    )
    if cfg.format == "dot":
        _write_or_print(rep, cfg, bd.to_dot(diagram))
    else:
        _write_or_print(rep, cfg, files.bratteli_to_text(diagram))
    return EXIT_PASS


def cmd_bv_check(obj, cfg: RunConfig, rep: Reporter) -> int:
    d = _as_diagram(obj, cfg)
    depth = cfg.depth if cfg.depth is not None else max(d.depth - 1, 1)
    report = bd.check_properly_ordered(d, depth, cfg.schedule or None)
    rep.kv("depth", depth)
    rep.kv("simple", report.simple)
    rep.kv("max_paths", report.max_count)
    rep.kv("min_paths", report.min_count)
    rep.kv("properly_ordered", report.passed)
    if report.passed:
        return EXIT_PASS
    if report.max_count != 1 or report.min_count != 1:
        return EXIT_REFUTED
    return EXIT_INCONCLUSIVE


def cmd_vershik(obj, cfg: RunConfig, rep: Reporter) -> int:
    d = _as_diagram(obj, cfg)
    level = cfg.level if cfg.level is not None else min(2, d.depth - 1)
    top = d.level(d.depth)[0]
    if cfg.start == "max":
        p = bd.max_path_to(d, d.depth, top)
    else:
        p = bd.min_path_to(d, d.depth, top)
    rows = [
        bd.bv_array_rows(d, p, m, (0, cfg.steps), wrap=cfg.wrap)
        for m in range(0, level + 1)
    ]
    views = render.rows_from_bv(rows)
    rep.kv("level", level)
    rep.kv("steps", cfg.steps)
    rep.block(views)
    _maybe_figure(rep, cfg, views, f"adic orbit rows 0..{level}")
    return EXIT_PASS


def cmd_arrays(obj, cfg: RunConfig, rep: Reporter) -> int:
    g = _need_gm(obj)
    level = cfg.level if cfg.level is not None else g.depth
    walk = g.level(level).circuit(cfg.circuit)
    _, linked = ar.linked_window(g, level, walk)
    if cfg.slide:
        linked = ar.slide(linked, ar.SlideSpec.from_gm(g))
    views = render.rows_from_linked(linked)
    rep.kv("level", level)
    rep.kv("circuit", cfg.circuit)
    rep.kv("slide", "yes" if cfg.slide else "no")
    rep.block(views)
    _maybe_figure(rep, cfg, views, f"linked window, level {level}")
    return EXIT_PASS


def cmd_verify(obj, cfg: RunConfig, rep: Reporter) -> int:
    g = _need_gm(obj)
    if cfg.depth is None or cfg.width is None:
        raise ParseError("verify needs --depth and --width", 0, 0)
    normalized = ar.normalize_for_construction(g, max_step=cfg.max_step)
    report = ar.verify_conjugacy(
        normalized, cfg.depth, cfg.width, budget=cfg.budget
    )
    rep.kv("depth", report.depth)
    rep.kv("width", report.width)
    rep.kv("frame_level", report.frame_level)
    rep.kv("frames.covering", report.covering_count)
    rep.kv("frames.diagram", report.diagram_count)
    rep.kv("status", report.status)
    if report.equal:
        rep.text("languages equal")
        return EXIT_PASS
    for side, frames in (
        ("covering", report.only_covering),
        ("diagram", report.only_diagram),
    ):
        for frame in frames[:1]:
            rep.kv(f"mismatch.{side}", _frame_text(frame))
    return EXIT_REFUTED


def _frame_text(frame) -> str:
    rows = []
    for row in frame:
        cells = " ".join(f"{'|' if cut else ''}{label}" for label, cut in row)
        rows.append(cells)
    return " / ".join(rows)


def cmd_export_dot(obj, cfg: RunConfig, rep: Reporter) -> int:
    if isinstance(obj, bd.OrderedBratteli):
        _write_or_print(rep, cfg, bd.to_dot(obj))
        return EXIT_PASS
    c = _need_covering(obj)
    level = cfg.level if cfg.level is not None else c.depth
    _write_or_print(rep, cfg, dg.to_dot(c.graph(level), name=f"G{level}"))
    return EXIT_PASS


_HANDLERS = {
    "validate": cmd_validate,
    "classify": cmd_classify,
    "telescope": cmd_telescope,
    "minimality": cmd_minimality,
    "gm-check": cmd_gm_check,
    "rank": cmd_rank,
    "normalize": cmd_normalize,
    "build-bv": cmd_build_bv,
    "bv-check": cmd_bv_check,
    "vershik": cmd_vershik,
    "arrays": cmd_arrays,
    "verify": cmd_verify,
    "export-dot": cmd_export_dot,
}


def _int_list(text: str) -> tuple[int, ...]:
    if not text:
        return ()
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated int list: {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="covdyn",
        description="Graph coverings, GM validation, and Bratteli-Vershik synthesis",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--input", "-i", required=True, help="input file or bundled name")
        p.add_argument(
            "--format", choices=("text", "structured", "dot"), default="text"
        )
        p.add_argument("--output", help="write the payload to this file")

    p = sub.add_parser("validate", help="parse and validate an input")
    common(p)

    p = sub.add_parser("classify", help="classify every connecting map")
    common(p)

    p = sub.add_parser("telescope", help="telescope a covering along indices")
    common(p)
    p.add_argument("--indices", type=_int_list, default=(), help="e.g. 0,2,4")

    p = sub.add_parser("minimality", help="search a minimality witness")
    common(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--horizon", type=int)

    p = sub.add_parser("gm-check", help="strengthened simplicity and splitting checks")
    common(p)
    p.add_argument("--horizon", type=int)

    p = sub.add_parser("rank", help="rank sequence and tail estimate")
    common(p)
    p.add_argument("--tail-window", type=int, dest="tail_window")

    p = sub.add_parser("normalize", help="telescope until construction-ready")
    common(p)
    p.add_argument("--max-step", type=int, default=8, dest="max_step")

    p = sub.add_parser("build-bv", help="synthesize the ordered Bratteli diagram")
    common(p)
    p.add_argument("--max-step", type=int, default=8, dest="max_step")

    p = sub.add_parser("bv-check", help="proper-ordering certificate")
    common(p)
    p.add_argument("--depth", type=int)
    p.add_argument("--schedule", type=_int_list, default=())
    p.add_argument("--max-step", type=int, default=8, dest="max_step")

    p = sub.add_parser("vershik", help="adic orbit row dump")
    common(p)
    p.add_argument("--steps", type=int, default=16)
    p.add_argument("--level", type=int)
    p.add_argument("--wrap", action="store_true")
    p.add_argument("--start", choices=("min", "max"), default="min")
    p.add_argument("--figure", help="also render the rows to this image file")
    p.add_argument("--max-step", type=int, default=8, dest="max_step")

    p = sub.add_parser("arrays", help="linked-array window of one circuit")
    common(p)
    p.add_argument("--level", type=int)
    p.add_argument("--circuit", type=int, default=1)
    p.add_argument("--slide", action="store_true")
    p.add_argument("--figure", help="also render the rows to this image file")

    p = sub.add_parser("verify", help="window-language conjugacy check")
    common(p)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--width", type=int, required=True)
    p.add_argument("--budget", type=int, default=ar.DEFAULT_FRAME_BUDGET)
    p.add_argument("--max-step", type=int, default=8, dest="max_step")

    p = sub.add_parser("export-dot", help="DOT of a level graph or diagram")
    common(p)
    p.add_argument("--level", type=int)

    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=args.command, input=args.input)
    for name in (
        "format", "output", "figure", "depth", "width", "level", "n",
        "circuit", "steps", "horizon", "tail_window", "indices", "schedule",
        "budget", "max_step", "wrap", "slide", "start",
    ):
        if hasattr(args, name) and getattr(args, name) is not None:
            setattr(cfg, name, getattr(args, name))
    return cfg


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = config_from_args(args)
    rep = Reporter(cfg.format)
    rep.kv("command", cfg.command)
    try:
        obj = load_input(cfg.input)
    except ParseError as err:
        print(str(err), file=sys.stderr)
        return EXIT_INPUT
    except CovdynError as err:
        if cfg.command == "validate":
            rep.kv("status", "invalid")
            rep.kv("error", str(err))
            rep.flush()
            return EXIT_REFUTED
        print(str(err), file=sys.stderr)
        return EXIT_INPUT

    try:
        status = _HANDLERS[cfg.command](obj, cfg, rep)
    except ParseError as err:
        print(str(err), file=sys.stderr)
        return EXIT_INPUT
    except NotSimple as err:
        print(str(err), file=sys.stderr)
        return EXIT_REFUTED
    except _INCONCLUSIVE_ERRORS as err:
        print(str(err), file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except CovdynError as err:
        print(str(err), file=sys.stderr)
        return EXIT_INPUT
    rep.kv("exit", status)
    rep.flush()
    return status


if __name__ == "__main__":
    sys.exit(main())
