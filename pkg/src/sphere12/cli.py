"""Command-line interface.

Exit codes: 0 success or positive verdict, 1 negative verdict, 2 usage
error or infeasible request.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from pathlib import Path

import numpy as np

from .config import Configuration, InvalidConfiguration, OverlapError, min_separation, named
from .criticality import is_balanced
from .geometry import DomainError, angle_from_radius
from .moves import InfeasibleMove, m5_path, m6_path, modified_m5_path, verify_path
from .perm import induced_permutation, parity
from .render import RenderError, RenderSpec, render_svg
from .tammes import solve

_ANGLE = re.compile(r"^[0-9.eE+\-*/ ()]*(pi)?[0-9.eE+\-*/ ()]*$")


class UsageError(Exception):
    pass


def parse_angle(text: str) -> float:
    """Radians, written as a number or a simple expression in ``pi``."""
    t = text.strip().lower()
    if not t or not _ANGLE.match(t):
        raise UsageError(f"cannot parse angle {text!r}")
    try:
        v = float(eval(t, {"__builtins__": {}}, {"pi": math.pi}))  # noqa: S307
    except Exception as e:  # noqa: BLE001
        raise UsageError(f"cannot parse angle {text!r}") from e
    if not math.isfinite(v):
        raise UsageError(f"angle {text!r} is not finite")
    return v


def parse_axis(text: str) -> tuple[float, float, float]:
    try:
        vals = tuple(float(x) for x in text.split(","))
    except ValueError as e:
        raise UsageError(f"axis must be three comma-separated numbers, got {text!r}") from e
    if len(vals) != 3:
        raise UsageError(f"axis must be three comma-separated numbers, got {text!r}")
    return vals  # type: ignore[return-value]


def load_config(path: str) -> Configuration:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e}") from e
    try:
        return Configuration.from_json(text)
    except InvalidConfiguration as e:
        raise UsageError(str(e)) from e


def _write(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        Path(path).write_text(text)


# ------------------------------------------------------------------ commands


def cmd_tammes(a) -> int:
    if a.n < 3:
        raise UsageError("N must be at least 3")
    if a.restarts is not None and a.restarts < 1:
        raise UsageError("--restarts must be positive")
    res = solve(a.n, restarts=a.restarts, seed=a.seed)
    print(f"N={a.n} theta_deg={math.degrees(res.theta):.6f} r={res.radius:.6f} "
          f"balanced={str(res.certificate.balanced).lower()}")
    text = json.dumps(res.to_dict(), indent=2, sort_keys=True) + "\n"
    _write(a.out, text)
    return 0


def cmd_named(a) -> int:
    args = [parse_angle(x) if a.name.upper() == "THETA5" else int(x) for x in a.args]
    try:
        cfg = named(a.name, *args)
    except (ValueError, TypeError) as e:
        raise UsageError(str(e)) from e
    _write(a.out, cfg.to_json(indent=2) + "\n")
    return 0


def cmd_check_critical(a) -> int:
    cfg = load_config(a.config)
    theta = parse_angle(a.theta) if a.theta else min_separation(cfg)
    try:
        cert = is_balanced(cfg, theta)
    except OverlapError as e:
        raise UsageError(str(e)) from e
    print(json.dumps(cert.to_dict(), indent=2, sort_keys=True))
    print(f"theta={theta:.6f} balanced={str(cert.balanced).lower()} residual={cert.residual:.6f}")
    return 0 if cert.balanced else 1


def _build_path(a):
    if a.move == "m6":
        return m6_path(a.variant.upper(), a.r, a.eps)
    if a.move == "m5":
        return m5_path(a.pole, a.direction, a.r)
    return modified_m5_path(a.pole, a.direction, a.r)


def cmd_deform(a) -> int:
    if a.samples < 2:
        raise UsageError("--samples must be at least 2")
    try:
        path = _build_path(a)
    except InfeasibleMove as e:
        print(f"infeasible: {e}", file=sys.stderr)
        return 2
    rep = verify_path(path, a.samples)
    theta = angle_from_radius(a.r)
    print(f"move={path.name} r={a.r:.6f} theta={theta:.6f}")
    print(f"min_separation={rep.min_separation:.6f} interior_min={rep.interior_min_separation:.6f}")
    print(f"violations={len(rep.violation_times)} samples={rep.samples}")
    if not math.isnan(rep.endpoint_match_rms):
        print(f"endpoint_rms={rep.endpoint_match_rms:.6f}")
    out = {
        "move": path.name,
        "radius": a.r,
        "min_separation": rep.min_separation,
        "interior_min_separation": rep.interior_min_separation,
        "violations": len(rep.violation_times),
        "first_violations": rep.violation_times[:20],
        "samples": rep.samples,
        "endpoint_match_rms": None if math.isnan(rep.endpoint_match_rms) else rep.endpoint_match_rms,
    }
    if a.move != "m6":
        try:
            p = induced_permutation(path.end, named("DOD"))
        except (ValueError, DomainError) as e:
            print(f"permutation unavailable: {e}", file=sys.stderr)
        else:
            print(f"permutation={list(p.images)} cycles={p.cycles()} parity={parity(p)}")
            out["permutation"] = list(p.images)
    if a.out_dir:
        d = Path(a.out_dir)
        d.mkdir(parents=True, exist_ok=True)
        (d / "report.json").write_text(json.dumps(out, indent=2, sort_keys=True) + "\n")
        if a.frames > 0:
            F = path.frames(np.linspace(0.0, 1.0, a.frames))
            frames = [Configuration(X, a.r).to_dict() for X in F]
            (d / "frames.json").write_text(json.dumps(frames) + "\n")
            if a.svg:
                spec = RenderSpec(theta=theta)
                for k, X in enumerate(F):
                    (d / f"frame_{k:04d}.svg").write_text(render_svg(X, spec))
    return 0 if rep.ok else 1


def cmd_render(a) -> int:
    cfg = load_config(a.config)
    theta = parse_angle(a.theta) if a.theta else None
    try:
        spec = RenderSpec(a.projection, parse_axis(a.axis), a.size, not a.no_labels, a.weights, theta)
        svg = render_svg(cfg, spec)
    except (RenderError, OverlapError) as e:
        raise UsageError(str(e)) from e
    _write(a.out, svg)
    if a.out:
        arcs = svg.count('class="arc')
        print(f"wrote {a.out} arcs={arcs}")
    return 0


# -------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sphere12", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("tammes", help="maximise the minimum separation of N points")
    t.add_argument("n", type=int)
    t.add_argument("--restarts", type=int, help="default 200, or 2000 for N = 13, 14")
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--out", help="write the result JSON here")
    t.set_defaults(func=cmd_tammes)

    n = sub.add_parser("named", help="write a named configuration as JSON")
    n.add_argument("name", help="DOD, FCC, HCP, TET, OCT, RING, THETA5 or M5_HALFWAY")
    n.add_argument("args", nargs="*", help="ring size, or three THETA5 gaps in radians")
    n.add_argument("--out")
    n.set_defaults(func=cmd_named)

    c = sub.add_parser("check-critical", help="test a configuration for a balanced stress graph")
    c.add_argument("config")
    c.add_argument("--theta", help="contact angle in radians, e.g. pi/3 (default: min separation)")
    c.set_defaults(func=cmd_check_critical)

    d = sub.add_parser("deform", help="build and verify a deformation path")
    d.add_argument("move", choices=["m6", "m5", "m5mod"])
    d.add_argument("--variant", default="fcc", choices=["fcc", "hcp", "FCC", "HCP"])
    d.add_argument("--pole", type=int, default=0)
    d.add_argument("--direction", type=int, default=1, choices=[1, -1])
    d.add_argument("--r", type=float, default=1.0)
    d.add_argument("--eps", type=float, default=0.0)
    d.add_argument("--samples", type=int, default=10_000)
    d.add_argument("--out-dir")
    d.add_argument("--frames", type=int, default=0, help="number of frames to export")
    d.add_argument("--svg", action="store_true", help="also render exported frames")
    d.set_defaults(func=cmd_deform)

    r = sub.add_parser("render", help="draw a configuration and its contact graph as SVG")
    r.add_argument("config")
    r.add_argument("--projection", default="orthographic", choices=["orthographic", "stereographic"])
    r.add_argument("--axis", default="0,0,1", help="view axis or projection pole, x,y,z")
    r.add_argument("--size", type=int, default=400)
    r.add_argument("--theta", help="contact angle in radians (default: min separation)")
    r.add_argument("--weights", action="store_true")
    r.add_argument("--no-labels", action="store_true")
    r.add_argument("--out")
    r.set_defaults(func=cmd_render)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    a = parser.parse_args(argv)
    try:
        return a.func(a)
    except (UsageError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
