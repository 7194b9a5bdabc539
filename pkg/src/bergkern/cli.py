"""Command-line front end: validated JSON configs in, CSV/JSON/LaTeX/SVG files out.

One subcommand per capability: kernel evaluation, formula rendering, the
reproducing-property check, oracle comparison, slice zero scans, boundary
ratio traces, near-boundary zero tracking, and Hartogs certificates.  Exit
codes: 0 success, 2 config/validation problems, 3 computation failures, with
the error class name on stderr.  All outputs are deterministic for a given
config; sampled checks draw from a seeded generator (--seed, default 42).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import jsonschema
import numpy as np

from .errors import BergkernError, TrackingFailed, ValidationError
from .hartogs import certify_non_lu_qikeng, lift, slice_kernel
from .model import DomainSpec, Polynomial, WeightSpec
from .oracle import QuadratureSpec, gram_kernel_eval, monomial_moments, verify_reproducing
from .transforms import ITERATED, eval_with_limits, to_formula, weighted_kernel
from .zerolab import GridSpec, boundary_ratio, scan_slice_zeros, track_zero_near_boundary

COMMANDS = ("eval", "formula", "verify", "oracle-compare", "zeros", "ratio", "track", "hartogs")

_POINT = {
    "type": "object",
    "properties": {"re": {"type": "number"}, "im": {"type": "number"}},
    "required": ["re"],
    "additionalProperties": False,
}
_FACTOR = {
    "type": "object",
    "properties": {
        "re": {"type": "number"},
        "im": {"type": "number"},
        "mult": {"type": "integer", "minimum": 1},
    },
    "required": ["re"],
    "additionalProperties": False,
}
_BASE = {
    "type": "object",
    "oneOf": [
        {
            "properties": {"kind": {"const": "constant"}, "value": {"type": "number"}},
            "required": ["kind"],
            "additionalProperties": False,
        },
        {
            "properties": {"kind": {"const": "radial"}, "alpha": {"type": "number"}},
            "required": ["kind", "alpha"],
            "additionalProperties": False,
        },
    ],
}
_WEIGHT = {
    "type": "object",
    "properties": {
        "base": _BASE,
        "zeros": {"type": "array", "items": _FACTOR},
        "poles": {"type": "array", "items": _FACTOR},
    },
    "additionalProperties": False,
}
_DOMAIN = {
    "type": "object",
    "properties": {
        "kind": {"enum": ["disk", "annulus"]},
        "inner_radius": {"type": "number"},
        "punctures": {"type": "array", "items": _POINT},
    },
    "required": ["kind"],
    "additionalProperties": False,
}
_GRID = {
    "type": "object",
    "properties": {
        "xmin": {"type": "number"},
        "xmax": {"type": "number"},
        "ymin": {"type": "number"},
        "ymax": {"type": "number"},
        "resolution": {"type": "integer", "minimum": 1},
        "samples_per_edge": {"type": "integer", "minimum": 64},
        "boundary_margin": {"type": "number", "exclusiveMinimum": 0},
    },
    "additionalProperties": False,
}
_PAIR = {
    "type": "object",
    "properties": {
        "re_z": {"type": "number"},
        "im_z": {"type": "number"},
        "re_w": {"type": "number"},
        "im_w": {"type": "number"},
    },
    "required": ["re_z", "re_w"],
    "additionalProperties": False,
}
_SCHEDULE = {
    "type": "object",
    "properties": {
        "j_start": {"type": "integer", "minimum": 1},
        "j_end": {"type": "integer", "minimum": 1},
        "direction": _POINT,
    },
    "additionalProperties": False,
}

CONFIG_SCHEMA = {
    "type": "object",
    "properties": {
        "command": {"enum": list(COMMANDS)},
        "domain": _DOMAIN,
        "weight": _WEIGHT,
        "mode": {"enum": ["iterated", "direct_sum"]},
        "points": {"type": "array", "items": _PAIR, "minItems": 1},
        "eval_points": {"type": "array", "items": _POINT, "minItems": 1},
        "format": {"enum": ["latex", "plain"]},
        "functions": {"type": "array", "items": {"enum": ["1", "z", "z^2"]}, "minItems": 1},
        "quadrature": {
            "type": "object",
            "properties": {
                "radial_nodes": {"type": "integer", "minimum": 2},
                "angular_nodes": {"type": "integer", "minimum": 2},
            },
            "additionalProperties": False,
        },
        "degree": {"type": "integer", "minimum": 0},
        "pairs": {"type": "integer", "minimum": 1},
        "radius": {"type": "number", "exclusiveMinimum": 0},
        "w0": _POINT,
        "z": _POINT,
        "grid": _GRID,
        "w_grid": _GRID,
        "centers": {"type": "array", "items": _POINT, "minItems": 1},
        "schedule": _SCHEDULE,
    },
    "required": ["domain", "weight"],
    "additionalProperties": False,
}

_FUNCTIONS = {
    "1": Polynomial.one(),
    "z": Polynomial((0.0, 1.0)),
    "z^2": Polynomial((0.0, 0.0, 1.0)),
}


def _fmt_human(v: complex) -> str:
    return f"{v.real:.10g} ({v.imag:+.10g}i)"


def _g17(x: float) -> str:
    return "%.17g" % float(x)


def _cpx(d: dict) -> complex:
    return complex(d.get("re", 0.0), d.get("im", 0.0))


def load_config(path: str) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot read config file {path}: {exc}") from exc
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"config file {path} is not valid JSON: {exc}") from exc
    try:
        jsonschema.validate(cfg, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise ValidationError(f"config does not match the schema: {exc.message}") from exc
    return cfg


def canonical_config(command: str, cfg: dict) -> str:
    """Normalized, sorted JSON echo; feeding it back reproduces the outputs."""
    domain = DomainSpec.from_dict(cfg["domain"])
    weight = WeightSpec.from_dict(cfg["weight"])
    out: dict = {"command": command, "domain": domain.to_dict(), "weight": weight.to_dict()}
    for key, val in cfg.items():
        if key not in ("command", "domain", "weight"):
            out[key] = val
    return json.dumps(out, indent=2, sort_keys=True)


def _write_csv(path: Path, header: list[str], rows: list[list[str]]) -> None:
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _kernel(cfg: dict) -> tuple[DomainSpec, WeightSpec, object]:
    domain = DomainSpec.from_dict(cfg["domain"])
    weight = WeightSpec.from_dict(cfg["weight"])
    mode = cfg.get("mode", ITERATED)
    return domain, weight, weighted_kernel(domain, weight, mode)


def _grid_from(d: dict | None, default_resolution: int = 64) -> GridSpec:
    params = dict(d or {})
    params.setdefault("resolution", default_resolution)
    return GridSpec(**params)


def _schedule_centers(sched: dict, default_direction: complex, j_start: int, j_end: int) -> list[complex]:
    j0 = sched.get("j_start", j_start)
    j1 = sched.get("j_end", j_end)
    if j1 < j0:
        raise ValidationError(f"schedule j_end {j1} is below j_start {j0}")
    d = _cpx(sched["direction"]) if "direction" in sched else default_direction
    if d == 0:
        raise ValidationError("schedule direction must be nonzero")
    d = d / abs(d)
    return [(1.0 - 2.0 ** (-j)) * d for j in range(j0, j1 + 1)]


def cmd_eval(cfg: dict, args, outdir: Path | None) -> int:
    _, _, K = _kernel(cfg)
    pts = cfg.get("points")
    if not pts:
        raise ValidationError("eval needs a nonempty points list")
    rows = []
    for p in pts:
        z = complex(p.get("re_z", 0.0), p.get("im_z", 0.0))
        w = complex(p.get("re_w", 0.0), p.get("im_w", 0.0))
        v = eval_with_limits(K, z, w)
        print(_fmt_human(v))
        rows.append([_g17(z.real), _g17(z.imag), _g17(w.real), _g17(w.imag), _g17(v.real), _g17(v.imag)])
    if outdir:
        _write_csv(outdir / "eval.csv", ["re_z", "im_z", "re_w", "im_w", "re_value", "im_value"], rows)
    return 0


def cmd_formula(cfg: dict, args, outdir: Path | None) -> int:
    _, _, K = _kernel(cfg)
    fmt = cfg.get("format", "latex")
    text = to_formula(K, fmt)
    print(text)
    if outdir:
        name = "formula.tex" if fmt == "latex" else "formula.txt"
        (outdir / name).write_text(text + "\n", encoding="utf-8")
    return 0


def _default_eval_points(domain: DomainSpec) -> list[complex]:
    if domain.kind == "disk":
        return [0.3 + 0j, -0.25 + 0.2j, 0.1 - 0.4j]
    mid = 0.5 * (1.0 + domain.inner_radius)
    return [mid + 0j, complex(0.0, -mid), complex(-mid, 0.0)]


def cmd_verify(cfg: dict, args, outdir: Path | None) -> int:
    domain, weight, K = _kernel(cfg)
    names = cfg.get("functions", ["1", "z", "z^2"])
    quad = QuadratureSpec(**cfg.get("quadrature", {}))
    if "eval_points" in cfg:
        pts = [_cpx(p) for p in cfg["eval_points"]]
    else:
        pts = _default_eval_points(domain)
    rows = []
    for name in names:
        f = _FUNCTIONS[name]
        worst = 0.0
        for z in pts:
            res = verify_reproducing(K, weight, f, quad, z)
            worst = max(worst, res)
            rows.append([name, _g17(z.real), _g17(z.imag), _g17(res)])
        print(f"f = {name}: max residual {worst:.6g} over {len(pts)} point(s)")
    if outdir:
        _write_csv(outdir / "verify.csv", ["function", "re_z", "im_z", "residual"], rows)
    return 0


def _sample_moduli(domain: DomainSpec, radius: float, n: int, rng) -> np.ndarray:
    if domain.kind == "disk":
        return radius * np.sqrt(rng.random(n))
    lo = domain.inner_radius + 0.02 * (1.0 - domain.inner_radius)
    hi = max(min(0.95, radius), lo + 0.01)
    return lo + (hi - lo) * rng.random(n)


def cmd_oracle_compare(cfg: dict, args, outdir: Path | None) -> int:
    domain, weight, K = _kernel(cfg)
    degree = cfg.get("degree", 60)
    npairs = cfg.get("pairs", 200)
    radius = cfg.get("radius", 0.7)
    rng = np.random.default_rng(args.seed)
    gram = monomial_moments(domain, weight, degree)
    zs = _sample_moduli(domain, radius, npairs, rng) * np.exp(2j * np.pi * rng.random(npairs))
    ws = _sample_moduli(domain, radius, npairs, rng) * np.exp(2j * np.pi * rng.random(npairs))
    worst = 0.0
    rows = []
    for z, w in zip(zs, ws):
        closed = K.value(complex(z), complex(w))
        oracle = gram_kernel_eval(gram, complex(z), complex(w))
        rel = abs(closed - oracle) / max(abs(closed), 1e-300)
        worst = max(worst, rel)
        rows.append([_g17(z.real), _g17(z.imag), _g17(w.real), _g17(w.imag), _g17(rel)])
    note = " (moments by quadrature)" if gram.used_quadrature else ""
    print(f"max relative error {worst:.6g} over {npairs} pairs at degree {degree}{note}")
    if outdir:
        _write_csv(outdir / "oracle.csv", ["re_z", "im_z", "re_w", "im_w", "rel_err"], rows)
    return 0


def cmd_zeros(cfg: dict, args, outdir: Path | None) -> int:
    _, _, K = _kernel(cfg)
    if "w0" not in cfg:
        raise ValidationError("zeros needs a w0 slice point")
    w0 = _cpx(cfg["w0"])
    grid = _grid_from(cfg.get("grid"))
    wits = scan_slice_zeros(K, w0, grid)
    print(f"{len(wits)} zero(s) on the slice w0 = {_fmt_human(w0)}")
    for wit in wits:
        print(f"  z = {_fmt_human(wit.z)}  residual {wit.residual:.6g}  winding {wit.winding}  order {wit.order}")
    rows = [
        [_g17(w.z.real), _g17(w.z.imag), _g17(w.w.real), _g17(w.w.imag), _g17(w.residual), str(w.winding), str(w.order)]
        for w in wits
    ]
    if outdir:
        _write_csv(outdir / "zeros.csv", ["re_z", "im_z", "re_w", "im_w", "residual", "winding", "order"], rows)
        if args.svg:
            from .figures import slice_heatmap

            slice_heatmap(K, w0, grid, wits, str(outdir / "zeros.svg"))
    return 0


def cmd_ratio(cfg: dict, args, outdir: Path | None) -> int:
    _, _, K = _kernel(cfg)
    if "z" not in cfg:
        raise ValidationError("ratio needs a fixed z point")
    z = _cpx(cfg["z"])
    if "centers" in cfg:
        centers = [_cpx(p) for p in cfg["centers"]]
    else:
        centers = _schedule_centers(cfg.get("schedule", {}), 1.0 + 0j, 3, 12)
    trace = boundary_ratio(K, z, centers)
    print(f"ratio trace over {len(centers)} centers: first {trace.values[0]:.6g}, final {trace.values[-1]:.6g}")
    rows = [
        [str(i), _g17(c.real), _g17(c.imag), _g17(v), _g17(d)]
        for i, (c, v, d) in enumerate(zip(trace.centers, trace.values, trace.diagonals))
    ]
    if outdir:
        _write_csv(outdir / "ratio.csv", ["index", "re_c", "im_c", "ratio", "diagonal"], rows)
        if args.svg:
            from .figures import ratio_plot

            ratio_plot(trace, str(outdir / "ratio.svg"))
    return 0


def cmd_track(cfg: dict, args, outdir: Path | None) -> int:
    domain, _, K = _kernel(cfg)
    if "w0" not in cfg:
        raise ValidationError("track needs a w0 slice point for the initial scan")
    w0 = _cpx(cfg["w0"])
    grid = _grid_from(cfg.get("grid"))
    wits = scan_slice_zeros(K, w0, grid)
    if not wits:
        raise TrackingFailed(-1, f"no zero found on the slice w0 = {w0} at resolution {grid.resolution}")
    wit = wits[0]
    centers = _schedule_centers(cfg.get("schedule", {}), wit.z / abs(wit.z), 3, 10)
    steps = track_zero_near_boundary(K, wit, centers)
    accepted = [s for s in steps if s.accepted]
    print(f"witness z0 = {_fmt_human(wit.z)} on slice w0 = {_fmt_human(w0)}")
    print(f"{len(accepted)} accepted of {len(steps)} steps; final |z1 - z0| = {accepted[-1].distance:.6g}")
    rows = []
    for s in steps:
        rows.append(
            [
                str(s.index),
                _g17(s.center.real),
                _g17(s.center.imag),
                _g17(s.radius),
                "true" if s.accepted else "false",
                _g17(s.z1.real) if s.accepted else "",
                _g17(s.z1.imag) if s.accepted else "",
                _g17(s.distance) if s.accepted else "",
                s.reason,
            ]
        )
    if outdir:
        header = ["index", "re_c", "im_c", "radius", "accepted", "re_z1", "im_z1", "distance", "reason"]
        _write_csv(outdir / "track.csv", header, rows)
        if args.svg:
            from .figures import track_plot

            track_plot(steps, wit, domain, str(outdir / "track.svg"))
    return 0


def cmd_hartogs(cfg: dict, args, outdir: Path | None) -> int:
    base = DomainSpec.from_dict(cfg["domain"])
    profile = WeightSpec.from_dict(cfg["weight"])
    h = lift(base, profile)
    z_grid = _grid_from(cfg.get("grid"))
    w_grid = _grid_from(cfg.get("w_grid"), default_resolution=8)
    cert = certify_non_lu_qikeng(h, z_grid, w_grid)
    kind = "bounded" if h.bounded else "unbounded"
    print(f"hartogs domain over the {base.kind} ({kind}): {cert.status}")
    if cert.witness is not None:
        print(f"  slice witness z = {_fmt_human(cert.witness.z)}, w = {_fmt_human(cert.witness.w)}")
    text = json.dumps(cert.to_dict(), indent=2, sort_keys=True)
    if outdir:
        (outdir / "certificate.json").write_text(text + "\n", encoding="utf-8")
        if args.svg and cert.witness is not None:
            from .figures import slice_heatmap

            slice_heatmap(slice_kernel(h), cert.witness.w, z_grid, [cert.witness], str(outdir / "hartogs.svg"))
    else:
        print(text)
    return 0


HANDLERS = {
    "eval": cmd_eval,
    "formula": cmd_formula,
    "verify": cmd_verify,
    "oracle-compare": cmd_oracle_compare,
    "zeros": cmd_zeros,
    "ratio": cmd_ratio,
    "track": cmd_track,
    "hartogs": cmd_hartogs,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bergkern",
        description="Weighted Bergman kernels on planar domains: evaluation, zero certification, Hartogs lifts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "eval": "evaluate the weighted kernel at configured (z, w) points",
        "formula": "render the kernel's closed form (LaTeX or plain text)",
        "verify": "check the reproducing property by quadrature",
        "oracle-compare": "compare closed forms against the Gram-matrix oracle",
        "zeros": "scan a w0 slice for certified kernel zeros",
        "ratio": "boundary ratio trace along a center sequence",
        "track": "track a slice zero under augmentation centers pushed to the boundary",
        "hartogs": "lift a radius profile to a Hartogs domain and certify its status",
    }
    for name in COMMANDS:
        p = sub.add_parser(name, help=helps[name])
        p.add_argument("--config", required=True, help="JSON config file")
        p.add_argument("--out", default=None, help="directory for CSV/JSON/SVG outputs")
        p.add_argument("--seed", type=int, default=42, help="seed for sampled checks (default 42)")
        p.add_argument("--svg", action="store_true", help="also render SVG figures (requires --out)")
        p.add_argument("--dump-config", action="store_true", help="print the canonical config and exit")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        declared = cfg.get("command")
        if declared is not None and declared != args.command:
            raise ValidationError(f"config declares command {declared!r} but {args.command!r} was invoked")
        if args.dump_config:
            print(canonical_config(args.command, cfg))
            return 0
        if args.svg and not args.out:
            raise ValidationError("--svg requires --out for the figure files")
        outdir: Path | None = None
        if args.out:
            outdir = Path(args.out)
            outdir.mkdir(parents=True, exist_ok=True)
        return HANDLERS[args.command](cfg, args, outdir)
    except ValidationError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except BergkernError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
