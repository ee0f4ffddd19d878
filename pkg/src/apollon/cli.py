"""Command line front end: enumeration, classification, and rendering.

Subcommands:

    apollon packing enumerate --root -1,2,2,3 --n 100
    apollon packing classify  --root -3,5,8,8
    apollon packing missing   --root -3,5,8,8 --n 10000
    apollon packing render    --seed bowl --n 50 --svg out.svg
    apollon schmidt render    --window -2,-2,2,2 --max-curv 20 --svg out.svg
    apollon cf expand 17/5
    apollon cf zaremba --z 5 --n 100
    apollon forms reduce --form 12,17,7
    apollon forms class-number --disc -23
    apollon forms pell --disc 12
    apollon graph modn --root -1,2,2,3 --mod 5
    apollon starscape render --height 20 --window -1,0,1,1 --svg out.svg
    apollon hyperbolic dist 0,2 1,3

Exit codes: 0 success, 2 usage error, 3 computational cap exceeded,
4 internal invariant violation.

Output is deterministic: identical invocations produce byte-identical CSV,
JSON, and SVG.  Exact rationals are serialized as "num/den" strings in
JSON; floating point appears only in SVG geometry.  Window flags are
x0,y0,x1,y1 (lower-left then upper-right corner).  Schmidt curvature
bounds are in reduced units: half the integer curvature, so --max-curv 20
reaches circles of radius down to 1/40.

A config file of key=value lines (--config PATH) can hold defaults for
any long flag (window=-2,-2,2,2, width=800, ...); explicit flags win.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, log2, sqrt

from apollon import contfrac, hyperbolic, obstructions, packing, quadforms, schmidt
from apollon.circlespace import Circle, DescartesQuadruple
from apollon.errors import (
    ApollonError,
    CapExceededError,
    InvariantViolationError,
    UsageError,
)

# ---------------------------------------------------------------------------
# parsing helpers


def _parse_ints(text: str, count: int, what: str) -> tuple[int, ...]:
    try:
        vals = tuple(int(v.strip()) for v in str(text).split(","))
    except ValueError as exc:
        raise UsageError(f"{what} must be {count} comma-separated integers") from exc
    if len(vals) != count:
        raise UsageError(f"{what} must be {count} comma-separated integers")
    return vals


def _parse_window(text: str) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    try:
        vals = tuple(Fraction(v.strip()) for v in str(text).split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError("window must be x0,y0,x1,y1 (rationals)") from exc
    if len(vals) != 4:
        raise UsageError("window must be x0,y0,x1,y1 (rationals)")
    return vals


def _parse_int(value, what: str) -> int:
    try:
        return int(str(value).strip())
    except ValueError as exc:
        raise UsageError(f"{what} must be an integer") from exc


def _parse_point(text: str, what: str) -> complex:
    try:
        x, y = (float(Fraction(v.strip())) for v in str(text).split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"{what} must be x,y") from exc
    return complex(x, y)


def _require(args, name: str):
    value = getattr(args, name.replace("-", "_"), None)
    if value is None:
        raise UsageError(f"--{name} is required")
    return value


def _load_config(path: str) -> dict[str, str]:
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    out = {}
    for i, line in enumerate(lines, 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{i}: expected key=value")
        key, _, value = line.partition("=")
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def _fill_from_config(args, config: dict[str, str]) -> None:
    for key, value in config.items():
        if getattr(args, key, True) is None:
            setattr(args, key, value)


# ---------------------------------------------------------------------------
# SVG emission


@dataclass(frozen=True)
class RenderSpec:
    """Window, viewport, and styling for SVG output."""

    window: tuple[Fraction, Fraction, Fraction, Fraction]
    width: int = 800
    stroke: float = 1.0
    scheme: str = "mono"  # mono | curvature | residue:<m>

    def __post_init__(self):
        x0, y0, x1, y1 = self.window
        if x0 >= x1 or y0 >= y1:
            raise UsageError("window must have positive width and height")
        if self.width <= 0:
            raise UsageError("pixel width must be positive")
        if self.stroke <= 0:
            raise UsageError("stroke width must be positive")
        if self.scheme != "mono" and self.scheme != "curvature":
            if not self.scheme.startswith("residue:"):
                raise UsageError("scheme is mono, curvature, or residue:<m>")
            _parse_int(self.scheme.split(":", 1)[1], "residue modulus")

    @property
    def scale(self) -> float:
        x0, _, x1, _ = self.window
        return self.width / float(x1 - x0)

    @property
    def height(self) -> int:
        _, y0, _, y1 = self.window
        return max(1, ceil(float(y1 - y0) * self.scale))


_PALETTE = (
    "#1f77b4",
    "#d62728",
    "#2ca02c",
    "#9467bd",
    "#ff7f0e",
    "#17becf",
    "#8c564b",
    "#7f7f7f",
)


def _color(spec: RenderSpec, curvature: Fraction) -> str:
    if spec.scheme == "mono":
        return "#000000"
    reduced = abs(int(curvature)) // 2
    if spec.scheme == "curvature":
        return _PALETTE[int(log2(reduced + 2)) % len(_PALETTE)]
    modulus = int(spec.scheme.split(":", 1)[1])
    return _PALETTE[reduced % modulus % len(_PALETTE)]


def _clip_line(c: Circle, window):
    """The segment of the line r x + s y = q/2 inside the window, or None."""
    x0, y0, x1, y1 = window
    r, s, h = c.r, c.s, c.q / 2
    pts = []
    if s != 0:
        for x in (x0, x1):
            y = (h - r * x) / s
            if y0 <= y <= y1:
                pts.append((x, y))
    if r != 0:
        for y in (y0, y1):
            x = (h - s * y) / r
            if x0 <= x <= x1:
                pts.append((x, y))
    pts = sorted(set(pts))
    if len(pts) < 2:
        return None
    return pts[0], pts[-1]


def _svg_document(spec: RenderSpec, circles, fill=False) -> str:
    x0, y0, _, y1 = spec.window
    s = spec.scale
    h = spec.height

    def px(x: float) -> float:
        return (x - float(x0)) * s

    def py(y: float) -> float:
        return h - (y - float(y0)) * s

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f"<!-- y-up window ({x0},{y0})..({spec.window[2]},{y1}); "
        f"x_px = (x - {x0}) * {s:.6f}; y_px = {h} - (y - {y0}) * {s:.6f} -->",
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{spec.width}" height="{h}" '
        f'viewBox="0 0 {spec.width} {h}">',
    ]
    for c in circles:
        color = _color(spec, c.p)
        style = (
            f'fill="{color}" stroke="none"'
            if fill
            else f'fill="none" stroke="{color}" stroke-width="{spec.stroke:.3f}"'
        )
        if c.is_line():
            seg = _clip_line(c, spec.window)
            if seg is None:
                continue
            (xa, ya), (xb, yb) = seg
            out.append(
                f'<line x1="{px(float(xa)):.3f}" y1="{py(float(ya)):.3f}" '
                f'x2="{px(float(xb)):.3f}" y2="{py(float(yb)):.3f}" '
                f'stroke="{color}" stroke-width="{spec.stroke:.3f}"/>'
            )
        else:
            center = c.center()
            out.append(
                f'<circle cx="{px(float(center.re)):.3f}" '
                f'cy="{py(float(center.im)):.3f}" '
                f'r="{float(c.radius()) * s:.3f}" {style}/>'
            )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _render_spec(args) -> RenderSpec:
    return RenderSpec(
        window=_parse_window(_require(args, "window")),
        width=_parse_int(args.width or 800, "width"),
        stroke=float(args.stroke or 1.0),
        scheme=args.scheme or "mono",
    )


def _circles_json(circles, **meta) -> str:
    doc = dict(meta)
    doc["circles"] = [c.to_json_dict() for c in circles]
    return json.dumps(doc, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# packing commands


def _cmd_packing_enumerate(args) -> int:
    root = _parse_ints(_require(args, "root"), 4, "--root")
    n = _parse_int(_require(args, "n"), "--n")
    orbit = packing.enumerate_curvatures(root, n)
    lines = ["curvature,count"]
    for k in sorted(orbit.counts):
        lines.append(f"{k},{orbit.counts[k]}")
    _write(args.out, "\n".join(lines) + "\n")
    return 0


def _cmd_packing_classify(args) -> int:
    root = _parse_ints(_require(args, "root"), 4, "--root")
    horizon = _parse_int(args.horizon or 10**5, "--horizon")
    ptype = obstructions.resolve_type(root, horizon)
    lines = [f"type ({ptype.residues}, {ptype.least})", f"chi2 = {ptype.chi2}"]
    if ptype.chi4 is not None:
        lines.append(f"chi4 = {ptype.chi4}")
    families = obstructions.obstruction_families(ptype)
    lines.append(
        "families: " + (", ".join(str(f) for f in families) if families else "none")
    )
    _write(args.out, "\n".join(lines) + "\n")
    return 0


def _cmd_packing_missing(args) -> int:
    root = _parse_ints(_require(args, "root"), 4, "--root")
    n = _parse_int(_require(args, "n"), "--n")
    horizon = _parse_int(args.horizon or 10**5, "--horizon")
    missing, sporadic = obstructions.missing_curvatures(root, n, horizon)
    lines = ["curvature,kind"]
    for k in sorted(missing):
        lines.append(f"{k},{'sporadic' if k in sporadic else 'family'}")
    _write(args.out, "\n".join(lines) + "\n")
    return 0


_BOWL_SEED = (
    Circle(-1, 1, 0, 0),
    Circle(2, 0, 1, 0),
    Circle(2, 0, -1, 0),
    Circle(3, 1, 0, 2),
)


def _cmd_packing_render(args) -> int:
    name = args.seed or "bowl"
    if name == "bowl":
        seed = DescartesQuadruple(_BOWL_SEED)
        default_window = "-1,-1,1,1"
    elif name == "strip":
        seed = packing.strip_base_quadruple()
        default_window = "-1,0,2,1"
    else:
        raise UsageError("seed must be bowl or strip")
    if getattr(args, "window", None) is None:
        args.window = default_window
    n = _parse_int(_require(args, "n"), "--n")
    spec = _render_spec(args)
    circles = packing.enumerate_geometry(seed, n, spec.window)
    if args.svg is None and args.json is None:
        raise UsageError("need --svg and/or --json output")
    if args.svg is not None:
        _write(args.svg, _svg_document(spec, circles))
    if args.json is not None:
        _write(
            args.json,
            _circles_json(circles, seed=name, n=n, window=[str(w) for w in spec.window]),
        )
    return 0


# ---------------------------------------------------------------------------
# schmidt command


def _cmd_schmidt_render(args) -> int:
    bound = _parse_int(_require(args, "max_curv"), "--max-curv")
    spec = _render_spec(args)
    circles = schmidt.schmidt_circles(spec.window, bound)
    if args.svg is None and args.json is None:
        raise UsageError("need --svg and/or --json output")
    if args.svg is not None:
        _write(args.svg, _svg_document(spec, circles))
    if args.json is not None:
        _write(
            args.json,
            _circles_json(
                circles, max_reduced_curvature=bound, window=[str(w) for w in spec.window]
            ),
        )
    return 0


# ---------------------------------------------------------------------------
# continued fraction commands


def _format_cf(cf) -> str:
    entries = [str(e) for e in cf.entries]
    if cf.period:
        head, tail = entries[: -cf.period], entries[-cf.period :]
        body = ", ".join(head[1:]) if len(head) > 1 else ""
        rep = "(" + ", ".join(tail) + ")"
        inner = f"{body}, {rep}" if body else rep
        return f"[{entries[0] if head else ''}; {inner}]" if head else f"[{rep}]"
    if len(entries) == 1:
        return f"[{entries[0]}]"
    return f"[{entries[0]}; {', '.join(entries[1:])}]"


def _cmd_cf_expand(args) -> int:
    text = args.value.strip()
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse {text!r} as a rational") from exc
    depth = _parse_int(args.depth, "--depth") if args.depth is not None else None
    cf = contfrac.cf_expand(value, depth)
    lines = [_format_cf(cf)]
    if cf.exact and not cf.period:
        lines.append(_format_cf(cf.variant()))
    _write(args.out, "\n".join(lines) + "\n")
    return 0


def _cmd_cf_zaremba(args) -> int:
    z = _parse_int(_require(args, "z"), "--z")
    n = _parse_int(_require(args, "n"), "--n")
    missing = contfrac.zaremba_missing(z, n, last_ge_2=bool(args.last_ge_2))
    lines = ["denominator"] + [str(q) for q in missing]
    _write(args.out, "\n".join(lines) + "\n")
    return 0


# ---------------------------------------------------------------------------
# quadratic form commands


def _cmd_forms_reduce(args) -> int:
    a, b, c = _parse_ints(_require(args, "form"), 3, "--form")
    f = quadforms.BinaryQF(a, b, c)
    if f.discriminant < 0:
        g, _ = quadforms.reduce_definite(f)
        lines = ["a,b,c", f"{g.a},{g.b},{g.c}"]
    else:
        lines = ["a,b,c"] + [
            f"{g.a},{g.b},{g.c}" for g in quadforms.indefinite_cycle(f)
        ]
    _write(args.out, "\n".join(lines) + "\n")
    return 0


def _cmd_forms_class_number(args) -> int:
    disc = _parse_int(_require(args, "disc"), "--disc")
    if args.list:
        _write(args.out, quadforms.class_list_csv(disc))
    else:
        _write(args.out, f"{quadforms.class_number(disc)}\n")
    return 0


def _cmd_forms_pell(args) -> int:
    disc = _parse_int(_require(args, "disc"), "--disc")
    x, y = quadforms.pell(disc)
    _write(args.out, f"x,y\n{x},{y}\n")
    return 0


# ---------------------------------------------------------------------------
# residue graph command


def _cmd_graph_modn(args) -> int:
    root = _parse_ints(_require(args, "root"), 4, "--root")
    modulus = _parse_int(_require(args, "mod"), "--mod")
    top = _parse_int(args.top or 8, "--top")
    g = obstructions.residue_orbit(root, modulus)
    spectrum = obstructions.graph_spectrum(g, top=top)
    lines = [
        f"vertices: {g.order()}",
        f"components: {g.component_count()}",
        f"residues: {','.join(str(r) for r in sorted(g.residue_set()))}",
        "top eigenvalues: "
        + " ".join(f"{v:.6f}" for v in spectrum[-min(top, len(spectrum)) :][::-1]),
    ]
    _write(args.out, "\n".join(lines) + "\n")
    return 0


# ---------------------------------------------------------------------------
# starscape command


def _cmd_starscape_render(args) -> int:
    height = _parse_int(_require(args, "height"), "--height")
    spec = _render_spec(args)
    x0, y0, x1, y1 = spec.window
    points = hyperbolic.starscape_points(height, (x0, x1, max(y0, Fraction(0)), y1))
    if args.svg is None:
        raise UsageError("need --svg output")
    s = spec.scale
    h = spec.height
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f"<!-- y-up window ({x0},{y0})..({x1},{y1}); "
        f"x_px = (x - {x0}) * {s:.6f}; y_px = {h} - (y - {y0}) * {s:.6f} -->",
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{spec.width}" height="{h}" viewBox="0 0 {spec.width} {h}">',
    ]
    for point, disc in points:
        cx = (float(point.re) - float(x0)) * s
        cy = h - (point.im - float(y0)) * s
        radius = max(0.5, 4.0 / sqrt(abs(disc)))
        color = _PALETTE[abs(disc) % len(_PALETTE)]
        out.append(f'<circle cx="{cx:.3f}" cy="{cy:.3f}" r="{radius:.3f}" fill="{color}"/>')
    out.append("</svg>")
    _write(args.svg, "\n".join(out) + "\n")
    return 0


# ---------------------------------------------------------------------------
# hyperbolic command


def _cmd_hyperbolic_dist(args) -> int:
    z = _parse_point(args.z, "first point")
    w = _parse_point(args.w, "second point")
    _write(args.out, f"{hyperbolic.dist_uhp(z, w):.12f}\n")
    return 0


# ---------------------------------------------------------------------------
# parser assembly


def _add_common(sub, *names):
    if "out" in names:
        sub.add_argument("--out", default=None, help="output path (default stdout)")
    if "root" in names:
        sub.add_argument("--root", default=None, help="root quadruple a,b,c,d")
    if "render" in names:
        sub.add_argument("--window", default=None, help="window x0,y0,x1,y1")
        sub.add_argument("--width", default=None, help="viewport width in px")
        sub.add_argument("--stroke", default=None, help="stroke width in px")
        sub.add_argument(
            "--scheme", default=None, help="mono | curvature | residue:<m>"
        )
        sub.add_argument("--svg", default=None, help="SVG output path")
        sub.add_argument("--json", default=None, help="JSON output path")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="apollon",
        description="Integral Apollonian packings, obstructions, and arrangements.",
    )
    parser.add_argument("--config", default=None, help="key=value defaults file")
    groups = parser.add_subparsers(dest="group", required=True)

    pk = groups.add_parser("packing", help="curvature orbits of integral packings")
    pk_sub = pk.add_subparsers(dest="command", required=True)
    p = pk_sub.add_parser("enumerate", help="curvature,count CSV up to a bound")
    _add_common(p, "root", "out")
    p.add_argument("--n", default=None, help="curvature bound")
    p.set_defaults(handler=_cmd_packing_enumerate)
    p = pk_sub.add_parser("classify", help="admissibility type and characters")
    _add_common(p, "root", "out")
    p.add_argument("--horizon", default=None, help="sampling bound for characters")
    p.set_defaults(handler=_cmd_packing_classify)
    p = pk_sub.add_parser("missing", help="admissible absent curvatures CSV")
    _add_common(p, "root", "out")
    p.add_argument("--n", default=None, help="curvature bound")
    p.add_argument("--horizon", default=None, help="sampling bound for characters")
    p.set_defaults(handler=_cmd_packing_missing)
    p = pk_sub.add_parser("render", help="windowed circle geometry to SVG/JSON")
    _add_common(p, "render")
    p.add_argument("--seed", default=None, help="bowl (default) or strip")
    p.add_argument("--n", default=None, help="curvature bound")
    p.set_defaults(handler=_cmd_packing_render)

    sc = groups.add_parser("schmidt", help="the Gaussian Schmidt arrangement")
    sc_sub = sc.add_subparsers(dest="command", required=True)
    p = sc_sub.add_parser("render", help="arrangement members in a window")
    _add_common(p, "render")
    p.add_argument(
        "--max-curv", dest="max_curv", default=None, help="reduced curvature bound"
    )
    p.set_defaults(handler=_cmd_schmidt_render)

    cf = groups.add_parser("cf", help="continued fractions")
    cf_sub = cf.add_subparsers(dest="command", required=True)
    p = cf_sub.add_parser("expand", help="both expansions of a rational")
    p.add_argument("value", help="rational like 17/5")
    p.add_argument("--depth", default=None, help="truncate after this many terms")
    _add_common(p, "out")
    p.set_defaults(handler=_cmd_cf_expand)
    p = cf_sub.add_parser("zaremba", help="denominators missing bounded quotients")
    p.add_argument("--z", default=None, help="partial quotient bound")
    p.add_argument("--n", default=None, help="denominator bound")
    p.add_argument("--last-ge-2", dest="last_ge_2", action="store_true")
    _add_common(p, "out")
    p.set_defaults(handler=_cmd_cf_zaremba)

    fo = groups.add_parser("forms", help="binary quadratic forms")
    fo_sub = fo.add_subparsers(dest="command", required=True)
    p = fo_sub.add_parser("reduce", help="reduced form (or cycle if indefinite)")
    p.add_argument("--form", default=None, help="coefficients a,b,c")
    _add_common(p, "out")
    p.set_defaults(handler=_cmd_forms_reduce)
    p = fo_sub.add_parser("class-number", help="h(disc), or the full class list")
    p.add_argument("--disc", default=None, help="discriminant")
    p.add_argument("--list", action="store_true", help="CSV of reduced forms")
    _add_common(p, "out")
    p.set_defaults(handler=_cmd_forms_class_number)
    p = fo_sub.add_parser("pell", help="fundamental solution of X^2 - D Y^2 = 4")
    p.add_argument("--disc", default=None, help="positive nonsquare discriminant")
    _add_common(p, "out")
    p.set_defaults(handler=_cmd_forms_pell)

    gr = groups.add_parser("graph", help="residue graphs of the swap action")
    gr_sub = gr.add_subparsers(dest="command", required=True)
    p = gr_sub.add_parser("modn", help="order, components, spectrum mod n")
    _add_common(p, "root", "out")
    p.add_argument("--mod", default=None, help="modulus")
    p.add_argument("--top", default=None, help="how many top eigenvalues")
    p.set_defaults(handler=_cmd_graph_modn)

    st = groups.add_parser("starscape", help="roots of integer quadratics")
    st_sub = st.add_subparsers(dest="command", required=True)
    p = st_sub.add_parser("render", help="root points sized by discriminant")
    _add_common(p, "render")
    p.add_argument("--height", default=None, help="coefficient bound")
    p.set_defaults(handler=_cmd_starscape_render)

    hy = groups.add_parser("hyperbolic", help="hyperbolic distance")
    hy_sub = hy.add_subparsers(dest="command", required=True)
    p = hy_sub.add_parser("dist", help="distance between two half-plane points")
    p.add_argument("z", help="first point x,y")
    p.add_argument("w", help="second point x,y")
    _add_common(p, "out")
    p.set_defaults(handler=_cmd_hyperbolic_dist)

    return parser


_NEGATIVE_VALUE = re.compile(r"^-\d[\d,./-]*$")


def _absorb_negative_values(argv: list[str]) -> list[str]:
    """Join `--flag -3,5,8,8` into `--flag=-3,5,8,8` so argparse accepts it."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if (
            tok.startswith("--")
            and "=" not in tok
            and i + 1 < len(argv)
            and _NEGATIVE_VALUE.match(argv[i + 1])
        ):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def run(argv=None) -> int:
    """Parse argv, dispatch, and map package errors to exit codes."""
    parser = _build_parser()
    if argv is None:
        argv = sys.argv[1:]
    try:
        args = parser.parse_args(_absorb_negative_values(list(argv)))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.config is not None:
            _fill_from_config(args, _load_config(args.config))
        return args.handler(args)
    except UsageError as exc:
        print(f"apollon: {exc}", file=sys.stderr)
        return 2
    except CapExceededError as exc:
        print(f"apollon: cap exceeded: {exc}", file=sys.stderr)
        return 3
    except (InvariantViolationError, ApollonError) as exc:
        print(f"apollon: internal invariant violated: {exc}", file=sys.stderr)
        return 4


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
