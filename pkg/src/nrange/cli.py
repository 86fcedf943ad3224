"""``nrange`` command line: numerical ranges, dilations, intersection sweeps and model operators.

Exit codes: 0 success, 1 verification failed, 2 not a contraction, 3 malformed
input, 4 target eigenvalue in the spectrum, 5 bad multiplicities, 6 zero tail
without declared verdicts, 7 other numerical failure.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

import numpy as np

from . import errors
from .dilation import RANK_TOL, build_tilde, defect_data, dilation_with_eigenvalues
from .formats import dilation_to_json, dumps, matrix_from_json, matrix_to_json, region_svg
from .inner import (
    InnerFunction,
    classify_endpoint,
    component_arcs,
    envelope_region,
    envelope_samples,
    full_chord_check,
    model_region,
)
from .model_matrix import build_model_matrix, intersection_formula_check, poncelet_check
from .numrange import hausdorff, range_region
from .sweep import dilation_sweep

MIN_PHI, MIN_LAM, MIN_T = 64, 36, 64

EXIT_CODES = [
    (errors.NotAContraction, 2),
    (errors.MalformedInput, 3),
    (errors.UnequalDefects, 3),
    (errors.TargetInSpectrum, 4),
    (errors.BadMultiplicities, 5),
    (errors.UndeclaredTailVerdict, 6),
    (errors.NRangeError, 7),
]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(3)


def _read_json(path: str) -> dict:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
        data = json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise errors.MalformedInput(f"cannot read {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise errors.MalformedInput("top-level JSON must be an object")
    return data


def _emit(obj, out: str | None):
    text = dumps(obj)
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _parse_eig(spec: str) -> tuple[complex, int]:
    """``lam:mult`` with ``lam`` like ``1``, ``-1``, ``i``, ``0.6+0.8i``, or ``@1.57`` for ``exp(1.57 i)``."""
    try:
        lam_s, mult_s = spec.rsplit(":", 1)
        lam_s = lam_s.strip()
        if lam_s.startswith("@"):
            lam = complex(np.exp(1j * float(lam_s[1:])))
        else:
            lam = complex(re.sub(r"(^|[+-])j", r"\g<1>1j", lam_s.replace("i", "j")))
        mult = int(mult_s)
    except ValueError as exc:
        raise errors.MalformedInput(f"bad --eig value {spec!r}; expected lam:mult") from exc
    if abs(abs(lam) - 1) > 1e-10:
        raise errors.MalformedInput(f"--eig {spec!r}: eigenvalue must be unimodular")
    return lam / abs(lam), mult


def _parse_level(text: str) -> complex:
    try:
        return _parse_eig(text + ":1")[0]
    except errors.MalformedInput as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _check_grid(name: str, value: int, minimum: int):
    if value < minimum:
        raise errors.MalformedInput(f"--{name} must be at least {minimum}")


def cmd_range(args) -> int:
    T = matrix_from_json(_read_json(args.input))
    defect_data(T, args.rank_tol)
    region = range_region(T, args.phi_samples)
    _emit(region.to_json(), args.out)
    if args.svg:
        Path(args.svg).write_text(region_svg(region, points=np.linalg.eigvals(T)))
    return 0


def cmd_dilate(args) -> int:
    T = matrix_from_json(_read_json(args.input))
    targets = [_parse_eig(e) for e in args.eig]
    dil = dilation_with_eigenvalues(T, targets, args.rank_tol)
    print(f"unitarity residual {dil.unitarity_residual():.3e}", file=sys.stderr)
    print(f"compression residual {dil.compression_residual(T):.3e}", file=sys.stderr)
    _emit(dilation_to_json(dil), args.out)
    return 0


def cmd_verify(args) -> int:
    data = _read_json(args.input)
    lam_grid = np.exp(2j * np.pi * np.arange(args.lam_samples) / args.lam_samples)
    if "entries" in data:
        T = matrix_from_json(data)
        res = dilation_sweep(T, args.lam_samples, args.phi_samples, args.rank_tol)
        report = res.to_json(args.tol)
        report["kind"] = "matrix"
        report["defect_index"] = build_tilde(T, rank_tol=args.rank_tol).d
        region = res.region
    else:
        spec = InnerFunction.from_json(data)
        if not spec.is_finite_blaschke or spec.degree == 0:
            raise errors.MalformedInput("verify needs a matrix or a finite Blaschke product")
        mm = build_model_matrix(spec.zeros)
        gap, region = intersection_formula_check(mm, lam_grid, args.phi_samples, return_region=True)
        report = {"kind": "theta", "hausdorff_gap": gap, "grid_size": args.lam_samples,
                  "tol": args.tol, "pass": bool(gap <= args.tol)}
    _emit(report, args.out)
    if args.svg:
        Path(args.svg).write_text(region_svg(region))
    return 0 if report["pass"] else 1


def _arc_report(arc, spec, t_samples: int) -> dict:
    left = classify_endpoint(arc, spec, "left")
    right = classify_endpoint(arc, spec, "right")
    fc = full_chord_check(arc, spec)
    span = arc.t2 - arc.t1
    _, env = envelope_samples(arc, spec, t_samples)
    return {
        "t1": arc.t1 % (2 * np.pi),
        "t2": arc.t1 % (2 * np.pi) + span,
        "left": left.to_json(),
        "right": right.to_json(),
        "full_chord": {"one_to_one": fc.one_to_one, "psi_increase": fc.increase,
                       "single_point": fc.single_point},
        "envelope": [[float(z.real), float(z.imag)] for z in env],
    }


def cmd_model(args) -> int:
    spec = InnerFunction.from_json(_read_json(args.input))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    summary: dict = {"finite_blaschke": spec.is_finite_blaschke}
    written = ["region.json", "classification.json"]
    if spec.is_finite_blaschke:
        if spec.degree == 0:
            raise errors.MalformedInput("theta = 1 has a zero-dimensional model space")
        mm = build_model_matrix(spec.zeros)
        region = envelope_region(spec, args.phi_samples)
        summary["hausdorff_to_matrix_range"] = hausdorff(region, range_region(mm.matrix, args.phi_samples))
        (out / "matrix.json").write_text(dumps(matrix_to_json(mm.matrix)))
        written.insert(0, "matrix.json")
        rep = poncelet_check(mm, args.lam)
        summary["poncelet"] = rep.to_json()
        classification = {"arcs": [], "full_circle": True}
        if args.svg:
            Path(args.svg).write_text(region_svg(region, rep.sides, rep.roots))
    else:
        # classify first: undeclared tail verdicts should fail before the expensive sweep
        classification = {"arcs": [_arc_report(a, spec, args.t_samples) for a in component_arcs(spec)],
                          "full_circle": False}
        region = model_region(spec, args.phi_samples, args.lam_samples)
        if args.svg:
            pts = [complex(*p) for arc in classification["arcs"] for p in arc["envelope"]]
            Path(args.svg).write_text(region_svg(region, points=pts))
    (out / "region.json").write_text(dumps(region.to_json()))
    (out / "classification.json").write_text(dumps(classification))
    summary["outputs"] = written
    sys.stdout.write(dumps(summary))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="nrange", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, lam=False, t=False):
        sp.add_argument("input", help="input JSON file ('-' for stdin)")
        sp.add_argument("--phi-samples", type=int, default=2048)
        sp.add_argument("--rank-tol", type=float, default=RANK_TOL)
        sp.add_argument("--svg", metavar="PATH")
        if lam:
            sp.add_argument("--lam-samples", "--grid", dest="lam_samples", type=int, default=720)
        if t:
            sp.add_argument("--t-samples", type=int, default=256)

    sp = sub.add_parser("range", help="numerical range of a matrix")
    common(sp)
    sp.add_argument("--out", metavar="PATH")
    sp.set_defaults(func=cmd_range)

    sp = sub.add_parser("dilate", help="unitary dilation with prescribed eigenvalues")
    common(sp)
    sp.add_argument("--eig", action="append", default=[], metavar="LAM:MULT", required=True)
    sp.add_argument("--out", metavar="PATH")
    sp.set_defaults(func=cmd_dilate)

    sp = sub.add_parser("verify", help="intersection of dilation ranges versus W(T)")
    common(sp, lam=True)
    sp.add_argument("--tol", type=float, default=1e-3, help="Hausdorff tolerance")
    sp.add_argument("--out", metavar="PATH")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("model", help="model operator of an inner function")
    common(sp, lam=True, t=True)
    sp.add_argument("--lam", type=_parse_level, default=1.0, help="level for the Poncelet polygon")
    sp.add_argument("--out", metavar="DIR", default=".")
    sp.set_defaults(func=cmd_model)
    return p


def _join_negative(argv: list[str]) -> list[str]:
    # let "--eig -1:1" through; argparse would read "-1:1" as an option
    out, i = [], 0
    while i < len(argv):
        if argv[i] in ("--eig", "--lam") and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_join_negative(argv))
    try:
        _check_grid("phi-samples", args.phi_samples, MIN_PHI)
        if hasattr(args, "lam_samples"):
            _check_grid("lam-samples", args.lam_samples, MIN_LAM)
        if hasattr(args, "t_samples"):
            _check_grid("t-samples", args.t_samples, MIN_T)
        return args.func(args)
    except errors.NRangeError as exc:
        print(f"nrange: {type(exc).__name__}: {exc}", file=sys.stderr)
        for cls, code in EXIT_CODES:
            if isinstance(exc, cls):
                return code
        return 7


if __name__ == "__main__":
    sys.exit(main())
