"""Command-line entry point ``jointspec``.

Subcommands emit CSV (complex values split into ``_re``/``_im`` columns) or
JSON (complex values as ``[re, im]`` pairs). Exit status is 0 on success,
1 when a computation or verification fails and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import cmath
import csv
import io
import json
import math
import os
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from importlib import resources
from typing import Sequence

import numpy as np

from . import analysis, dynamics, numerics, spectrum, verify
from .errors import JointSpectrumError, PathHitsZero
from .pencil import ClosedPath, gamma_half_circle

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


SCHEMA_NAMES = ("spectrum", "det_grid", "dynamics", "winding", "verify", "path")


class UsageError(Exception):
    pass


def load_schema(name: str) -> dict:
    """JSON schema shipped for a command's ``--format json`` output (or ``path`` input)."""
    if name not in SCHEMA_NAMES:
        raise ValueError(f"unknown schema {name!r}")
    text = resources.files(__package__).joinpath("schemas", f"{name}.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


# ---------------------------------------------------------------------------
# parsing helpers


def parse_complex(text: str) -> complex:
    try:
        value = complex(text.strip().replace(" ", "").replace("i", "j"))
    except ValueError:
        raise UsageError(f"not a complex number: {text!r}") from None
    if not cmath.isfinite(value):
        raise UsageError(f"value must be finite: {text!r}")
    return value


def parse_complex_list(text: str, count: int | None = None) -> list[complex]:
    parts = [p for p in text.split(",")]
    if count is not None and len(parts) != count:
        raise UsageError(f"expected {count} comma-separated values, got {text!r}")
    return [parse_complex(p) for p in parts]


def parse_range(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"range must be 'min,max', got {text!r}")
    try:
        lo, hi = float(parts[0]), float(parts[1])
    except ValueError:
        raise UsageError(f"range bounds must be real numbers: {text!r}") from None
    if not (math.isfinite(lo) and math.isfinite(hi)) or lo > hi:
        raise UsageError(f"range must be finite with min <= max: {text!r}")
    return lo, hi


# ---------------------------------------------------------------------------
# output


class Table:
    """Rows of named fields; complex fields expand to ``_re``/``_im`` in CSV."""

    def __init__(self, fields: Sequence[tuple[str, str]], meta: dict | None = None):
        # field kinds: "c" complex, "f" float, "i" int, "s" string, "b" bool
        self.fields = list(fields)
        self.meta = meta or {}
        self.rows: list[dict] = []

    def add(self, **values):
        self.rows.append(values)

    def csv_header(self) -> list[str]:
        header = []
        for name, kind in self.fields:
            header.extend([f"{name}_re", f"{name}_im"] if kind == "c" else [name])
        return header

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.csv_header())
        for row in self.rows:
            out = []
            for name, kind in self.fields:
                v = row.get(name)
                if kind == "c":
                    out.extend(["", ""] if v is None else [_num(v.real), _num(v.imag)])
                elif kind == "b":
                    out.append("" if v is None else str(bool(v)).lower())
                elif kind == "f":
                    out.append("" if v is None else _num(v))
                elif kind == "i":
                    out.append("" if v is None else str(int(v)))
                else:
                    out.append("" if v is None else v)
            w.writerow(out)
        return buf.getvalue()

    def to_json(self) -> str:
        rows = []
        for row in self.rows:
            obj = {}
            for name, kind in self.fields:
                v = row.get(name)
                if v is None:
                    obj[name] = None
                elif kind == "c":
                    obj[name] = [_jnum(v.real), _jnum(v.imag)]
                elif kind == "f":
                    obj[name] = _jnum(v)
                elif kind == "b":
                    obj[name] = bool(v)
                elif kind == "i":
                    obj[name] = int(v)
                else:
                    obj[name] = v
            rows.append(obj)
        doc = dict(self.meta)
        doc["columns"] = [name for name, _ in self.fields]
        doc["rows"] = rows
        return json.dumps(doc, indent=2) + "\n"


def _num(x: float) -> str:
    return repr(float(x))


def _jnum(x: float):
    x = float(x)
    return x if math.isfinite(x) else None


def emit(text: str, out: str | None):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def render(table: Table, fmt: str) -> str:
    return table.to_json() if fmt == "json" else table.to_csv()


# ---------------------------------------------------------------------------
# spectrum


POINT_FIELDS = [
    ("family", "s"),
    ("component", "s"),
    ("branch", "s"),
    ("param", "f"),
    ("z0", "c"),
    ("z1", "c"),
    ("z2", "c"),
    ("member", "b"),
]

GRIG_FIELDS = [
    ("family", "s"),
    ("component", "s"),
    ("branch", "s"),
    ("param", "f"),
    ("lambda", "c"),
    ("mu", "c"),
    ("residual", "f"),
]


def spectrum_table(family: str, n: int | None, slice_: tuple[complex, complex], steps: int) -> Table:
    l1, l2 = slice_
    meta = {"command": "spectrum", "family": family}
    if family == "dinf":
        # homogeneous points (+-sqrt(radicand), l1, l2) = w (l1, l2) with z0 = 1/w
        meta["slice"] = [[l1.real, l1.imag], [l2.real, l2.imag]]
        t = Table(POINT_FIELDS, meta)
        for x in np.linspace(-1.0, 1.0, steps):
            root = cmath.sqrt(l1 * l1 + l2 * l2 + 2 * l1 * l2 * x)
            for branch, z0 in (("+", root), ("-", -root)):
                z = (z0, l1, l2)
                t.add(family=family, component="x", branch=branch, param=float(x), z0=z0, z1=l1, z2=l2,
                      member=spectrum.in_spectrum_dinf(z))
        return t
    if family == "projections":
        meta["slice"] = [[l1.real, l1.imag], [l2.real, l2.imag]]
        t = Table(POINT_FIELDS, meta)
        s = l1 + l2
        for x in np.linspace(0.0, 1.0, steps):
            root = cmath.sqrt(s * s - 4 * l1 * l2 * x)
            for branch, z0 in (("+", (-s + root) / 2), ("-", (-s - root) / 2)):
                z = (z0, l1, l2)
                t.add(family=family, component="x", branch=branch, param=float(x), z0=z0, z1=l1, z2=l2,
                      member=spectrum.in_spectrum_projections(z))
        return t
    if family == "dn":
        meta["n"] = n
        t = Table(POINT_FIELDS, meta)
        # each factor is a conic 1 - z1^2 - z2^2 - 2 z1 z2 cos(theta_k) = 0;
        # sweep real z1 and take both roots z2
        for k, theta in enumerate(spectrum.dn_angles(n)):
            c = math.cos(theta)
            for z1 in np.linspace(-2.0, 2.0, steps):
                root = cmath.sqrt(z1 * z1 * c * c - z1 * z1 + 1)
                for branch, z2 in (("+", -z1 * c + root), ("-", -z1 * c - root)):
                    z = (1.0 + 0j, complex(z1), z2)
                    t.add(family=family, component=f"k={k}", branch=branch, param=float(z1), z0=z[0], z1=z[1],
                          z2=z2, member=spectrum.in_spectrum_dn(z, n))
        return t
    if family == "grig":
        meta["n"] = n
        t = Table(GRIG_FIELDS, meta)
        lams = np.linspace(-3.0, 3.0, steps)
        for label, lam, mu in spectrum.qn_spectrum_curves(n, lams):
            parts = label.split(":")
            branch = parts[2] if len(parts) == 3 else "line"
            for lv, mv in zip(lam, mu):
                lv, mv = complex(lv), complex(mv)
                if parts[0] == "phi0":
                    res = abs(spectrum.phi_eval(lv, mv, 0))
                elif parts[0] == "phi1":
                    res = abs(spectrum.phi_eval(lv, mv, 1))
                else:
                    theta = float(parts[1])
                    res = abs(mv * mv - 4 - lv * lv - 4 * lv * math.cos(theta))
                t.add(family=family, component=":".join(parts[:2]), branch=branch, param=lv.real,
                      **{"lambda": lv, "mu": mv}, residual=res)
        return t
    raise UsageError(f"unknown family {family!r}")


def cmd_spectrum(args) -> int:
    if args.family in ("dn", "grig") and args.n is None:
        raise UsageError(f"--n is required for family {args.family}")
    if args.n is not None and args.n < (1 if args.family == "dn" else 0):
        raise UsageError("--n is out of range")
    if args.family == "grig" and args.n > 12:
        raise UsageError("--n for grig must be at most 12")
    if args.x_steps < 2:
        raise UsageError("--x-steps must be at least 2")
    slice_ = tuple(parse_complex_list(args.slice, 2))
    table = spectrum_table(args.family, args.n, slice_, args.x_steps)
    emit(render(table, args.format), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# det-grid


def _axis(lo: float, hi: float, steps: int) -> np.ndarray:
    return np.array([lo]) if lo == hi else np.linspace(lo, hi, steps)


def grid_values(re_range, im_range, steps: int) -> list[complex]:
    re = _axis(*re_range, steps)
    im = _axis(*im_range, steps)
    return [complex(a, b) for a in re for b in im]


def _det_cell(args_tuple):
    method, z1, z2 = args_tuple
    closed = analysis.fk_det_closed(z1, z2) if method in ("closed", "both") else None
    quad = converged = None
    if method in ("quadrature", "both"):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", numerics.NoConvergenceWarning)
            quad, res = analysis.fk_det_quadrature(z1, z2, full_output=True)
        converged = res.converged
    return closed, quad, converged


def det_grid_table(re_range, im_range, steps: int, method: str, workers: int) -> Table:
    values = grid_values(re_range, im_range, steps)
    cells = [(method, z1, z2) for z1 in values for z2 in values]
    fields = [("z1", "c"), ("z2", "c"), ("det", "f")]
    if method == "quadrature":
        fields.append(("converged", "b"))
    elif method == "both":
        fields += [("det_quadrature", "f"), ("diff", "f"), ("converged", "b")]
    meta = {"command": "det-grid", "method": method}
    table = Table(fields, meta)
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        # map preserves input order whatever the completion order
        results = list(pool.map(_det_cell, cells))
    for (_, z1, z2), (closed, quad, converged) in zip(cells, results):
        if method == "closed":
            table.add(z1=z1, z2=z2, det=closed)
        elif method == "quadrature":
            table.add(z1=z1, z2=z2, det=quad, converged=converged)
        else:
            table.add(z1=z1, z2=z2, det=closed, det_quadrature=quad, diff=abs(closed - quad), converged=converged)
    return table


def cmd_det_grid(args) -> int:
    re_range = parse_range(args.re_range)
    im_range = parse_range(args.im_range)
    if args.steps < 1:
        raise UsageError("--steps must be positive")
    workers = args.workers if args.workers is not None else (os.cpu_count() or 1)
    table = det_grid_table(re_range, im_range, args.steps, args.method, workers)
    emit(render(table, args.format), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# dynamics


MAP_COORDS = {"F": ("lambda", "mu"), "F1": ("z0", "z1", "z2"), "F2": ("z0", "z1", "z2"), "alpha": ("x",)}


def dynamics_table(map_id: str, start, steps: int) -> Table:
    coords = MAP_COORDS[map_id]
    fields = [("step", "i")] + [(c, "c") for c in coords] + [("status", "s")]
    table = Table(fields, {"command": "dynamics", "map": map_id})
    orb = dynamics.orbit(map_id, start, steps)
    for i, p in enumerate(orb.points):
        table.add(step=i, status="ok", **dict(zip(coords, dynamics.coordinates(p))))
    if orb.halted:
        table.add(step=len(orb.points), status=orb.halted)
    return table


def cmd_dynamics(args) -> int:
    width = len(MAP_COORDS[args.map])
    start = parse_complex_list(args.start, width)
    start = start[0] if width == 1 else tuple(start)
    if args.steps < 0:
        raise UsageError("--steps must be nonnegative")
    emit(render(dynamics_table(args.map, start, args.steps), args.format), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# winding


def load_path(args) -> ClosedPath:
    if args.path_file:
        try:
            with open(args.path_file, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read path file: {exc}") from None
        if not isinstance(data, dict) or "samples" not in data or "closed" not in data:
            raise UsageError("path file must be an object with 'closed' and 'samples'")
        try:
            path = ClosedPath.from_json(data)
        except (ValueError, TypeError) as exc:
            raise UsageError(f"invalid path file: {exc}") from None
    else:
        path = gamma_half_circle(args.samples)
    if args.reverse:
        path = path.reversed()
    if args.repeat != 1:
        if args.repeat < 1:
            raise UsageError("--repeat must be positive")
        path = path.repeated(args.repeat)
    if not path.closed:
        raise UsageError("winding numbers need a closed path")
    return path


def cmd_winding(args) -> int:
    path = load_path(args)
    w = analysis.winding_number(path)
    coupling = analysis.homology_coupling(path)
    table = Table(
        [("winding", "i"), ("coupling", "f"), ("samples", "i")],
        {"command": "winding", "source": args.path_file or args.builtin},
    )
    table.add(winding=w, coupling=coupling, samples=len(path))
    emit(render(table, args.format), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify


def cmd_verify(args) -> int:
    results = verify.run_suite(args.suite, args.seed)
    failed = [r for r in results if not r.passed]
    if args.format == "json":
        doc = {
            "command": "verify",
            "suite": args.suite,
            "seed": args.seed,
            "passed": not failed,
            "checks": [
                {"key": r.key, "title": r.title, "passed": r.passed, "metrics": {k: _json_metric(v) for k, v in r.metrics.items()}}
                | ({"seconds": r.seconds} if args.timings else {})
                for r in results
            ],
        }
        text = json.dumps(doc, indent=2) + "\n"
    else:
        lines = [f"suite={args.suite} seed={args.seed}"]
        lines += [r.line(args.timings) for r in results]
        lines.append(f"{len(results) - len(failed)}/{len(results)} passed")
        text = "\n".join(lines) + "\n"
    emit(text, args.out)
    return EXIT_FAILURE if failed else EXIT_OK


def _json_metric(v):
    if isinstance(v, (bool, int, str)) or v is None:
        return v
    if isinstance(v, float):
        return _jnum(v)
    if isinstance(v, (list, tuple)):
        return [_json_metric(x) for x in v]
    return str(v)


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="jointspec", description="Joint spectra, determinants and spectral dynamics.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, formats=("csv", "json")):
        p.add_argument("--out", help="output file (default: standard output)")
        p.add_argument("--format", choices=formats, default=formats[0])

    p = sub.add_parser("spectrum", help="sample spectrum curves")
    p.add_argument("--family", choices=("dinf", "dn", "projections", "grig"), required=True)
    p.add_argument("--n", type=int, help="group order or tree level (dn, grig)")
    p.add_argument("--slice", default="1,1", help="direction 'l1,l2' for dinf and projections")
    p.add_argument("--x-steps", type=int, default=101)
    common(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("det-grid", help="Fuglede-Kadison determinant on a grid of (z1, z2)")
    p.add_argument("--re-range", default="-2,2", help="real parts 'min,max' of z1 and z2")
    p.add_argument("--im-range", default="0,0", help="imaginary parts 'min,max' of z1 and z2")
    p.add_argument("--steps", type=int, default=41, help="samples per nondegenerate range")
    p.add_argument("--method", choices=("closed", "quadrature", "both"), default="closed")
    p.add_argument("--workers", type=int, help="worker threads (default: CPU count)")
    common(p)
    p.set_defaults(func=cmd_det_grid)

    p = sub.add_parser("dynamics", help="iterate F, F1, F2 or alpha")
    p.add_argument("--map", choices=tuple(MAP_COORDS), required=True)
    p.add_argument("--start", required=True, help="comma-separated complex coordinates")
    p.add_argument("--steps", type=int, default=10)
    common(p)
    p.set_defaults(func=cmd_dynamics)

    p = sub.add_parser("winding", help="winding number and homology coupling of a closed path")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--path-file", help="JSON {closed, samples: [[z1_re, z1_im, z2_re, z2_im], ...]}")
    src.add_argument("--builtin", choices=("gamma-half-circle",))
    p.add_argument("--samples", type=int, default=512, help="samples of the built-in path")
    p.add_argument("--reverse", action="store_true")
    p.add_argument("--repeat", type=int, default=1)
    common(p)
    p.set_defaults(func=cmd_winding)

    p = sub.add_parser("verify", help="run the seeded oracle checks")
    p.add_argument("--suite", choices=tuple(verify.SUITES), default="all")
    p.add_argument("--seed", type=int, default=verify.DEFAULT_SEED)
    p.add_argument("--timings", action="store_true", help="append wall-clock times (breaks byte-identical output)")
    common(p, ("text", "json"))
    p.set_defaults(func=cmd_verify)
    return parser


#: Options whose values may start with a minus sign, e.g. ``--re-range -2,2``.
SIGNED_OPTIONS = ("--re-range", "--im-range", "--start", "--slice")


def join_signed_values(argv: Sequence[str]) -> list[str]:
    """Rewrite ``--opt -1,2`` as ``--opt=-1,2`` so argparse does not read the value as a flag."""
    out: list[str] = []
    it = iter(argv)
    for token in it:
        if token in SIGNED_OPTIONS:
            value = next(it, None)
            if value is None:
                out.append(token)
            elif value.startswith("-") and not value.startswith("--"):
                out.append(f"{token}={value}")
            else:
                out.extend([token, value])
        else:
            out.append(token)
    return out


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(join_signed_values(sys.argv[1:] if argv is None else argv))
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"jointspec: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PathHitsZero as exc:
        print(f"jointspec: path meets the spectrum at sample {exc.index} (L_x = {exc.value}): {exc}", file=sys.stderr)
        return EXIT_FAILURE
    except JointSpectrumError as exc:
        print(f"jointspec: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
