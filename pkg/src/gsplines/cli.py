"""Command line interface: ``gsplines <command> <domain.json> [options]``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .chain import SplineComplex
from .domain import DomainError, GrDomain, check_compatibility
from .io import DomainFileError, load_domain
from .poly import GREVLEX, LEX, Grading, PolynomialError, parse_rational
from .splines import Spline, dimension, spline_basis, spline_problems
from .surface import InconsistentTargets, SplineSurface, Target, export_surface, fit_interpolate


class UsageError(ValueError):
    pass


def parse_degrees(text: str) -> list[int]:
    """``"d"`` or an inclusive range ``"a..b"``."""
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
        else:
            lo = hi = int(text)
    except ValueError as exc:
        raise UsageError(f"bad degree range {text!r}; use d or a..b") from exc
    if lo < 0 or hi < lo:
        raise UsageError(f"bad degree range {text!r}")
    return list(range(lo, hi + 1))


def _order(name: str):
    return {"grevlex": GREVLEX, "elim": LEX}[name]


def _grading_kind(args, desc_kind: str | None) -> str:
    return args.grading or desc_kind or "total"


def _load(args) -> tuple[GrDomain, str]:
    domain = load_domain(args.domain, args.r)
    desc = json.loads(Path(args.domain).read_text())
    if not args.no_check:
        check_compatibility(domain)
    return domain, _grading_kind(args, desc.get("grading"))


def _emit(args, header: list[str], rows: list[list], report: dict) -> None:
    print("\t".join(header))
    for row in rows:
        print("\t".join(str(x) for x in row))
    if args.out:
        Path(args.out).write_text(json.dumps(report, indent=2) + "\n")


def _report_base(args, domain: GrDomain, kind: str) -> dict:
    return {"domain": domain.name or str(args.domain), "r": domain.r, "grading": kind, "order": args.order}


def cmd_dim(args) -> int:
    domain, kind = _load(args)
    rows = [[d, dimension(domain, Grading(kind, d), _order(args.order), check=False)] for d in parse_degrees(args.degree)]
    report = _report_base(args, domain, kind)
    report["rows"] = [{"degree": d, "dim": v} for d, v in rows]
    _emit(args, ["degree", "dim"], rows, report)
    return 0


def cmd_euler(args) -> int:
    domain, kind = _load(args)
    rows = []
    for d in parse_degrees(args.degree):
        rows.append([d, SplineComplex(domain, Grading(kind, d), _order(args.order)).euler_characteristic()])
    report = _report_base(args, domain, kind)
    report["rows"] = [{"degree": d, "euler": v} for d, v in rows]
    _emit(args, ["degree", "euler"], rows, report)
    return 0


def cmd_homology(args) -> int:
    domain, kind = _load(args)
    rows = []
    for d in parse_degrees(args.degree):
        c = SplineComplex(domain, Grading(kind, d), _order(args.order))
        rows.append([d, *c.homology(), c.euler_characteristic()])
    n = domain.n
    report = _report_base(args, domain, kind)
    report["rows"] = [{"degree": row[0], "homology": row[1:n + 2], "euler": row[-1]} for row in rows]
    _emit(args, ["degree", *[f"H{k}" for k in range(n + 1)], "euler"], rows, report)
    return 0


def _single_degree(args) -> int:
    degrees = parse_degrees(args.degree)
    if len(degrees) != 1:
        raise UsageError(f"{args.command} needs a single degree, not a range")
    return degrees[0]


def basis_to_dict(domain: GrDomain, kind: str, d: int, splines: list[Spline]) -> dict:
    return {
        "domain": domain.name,
        "r": domain.r,
        "grading": kind,
        "degree": d,
        "splines": [{str(s): str(p) for s, p in sorted(sp.pieces.items())} for sp in splines],
    }


def splines_from_dict(domain: GrDomain, data: dict) -> list[Spline]:
    out = []
    for record in data["splines"]:
        pieces = {int(s): domain.patch_ring(int(s)).parse(text) for s, text in record.items()}
        out.append(Spline(pieces))
    return out


def cmd_basis(args) -> int:
    domain, kind = _load(args)
    d = _single_degree(args)
    basis = spline_basis(domain, Grading(kind, d), _order(args.order), check=False)
    data = basis_to_dict(domain, kind, d, basis.splines)
    text = json.dumps(data, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
        print(f"{basis.dim} splines written to {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def cmd_verify(args) -> int:
    domain, desc_kind = _load(args)
    data = json.loads(Path(args.basis).read_text())
    kind = args.grading or data.get("grading", desc_kind)
    d = data.get("degree")
    grading = Grading(kind, int(d)) if d is not None else None
    splines = splines_from_dict(domain, data)
    failures = 0
    print("index\tstatus\tdetail")
    for i, sp in enumerate(splines):
        problems = spline_problems(domain, sp, grading)
        failures += bool(problems)
        print(f"{i}\t{'fail' if problems else 'ok'}\t{'; '.join(problems)}")
    if args.out:
        Path(args.out).write_text(json.dumps({"checked": len(splines), "failures": failures}, indent=2) + "\n")
    return 1 if failures else 0


def load_targets(path: str) -> list[Target]:
    raw = json.loads(Path(path).read_text())
    out = []
    for t in raw:
        out.append(Target(int(t["face"]), tuple(parse_rational(x) for x in t["point"]),
                          tuple(parse_rational(x) for x in t["value"])))
    return out


def surface_to_dict(domain: GrDomain, kind: str, d: int, surface: SplineSurface) -> dict:
    return {
        "domain": domain.name,
        "grading": kind,
        "degree": d,
        "pieces": {str(s): [str(p) for p in surface.pieces(s)] for s in domain.complex.faces(domain.n)},
    }


def surface_from_dict(domain: GrDomain, data: dict) -> SplineSurface:
    pieces = {int(s): [domain.patch_ring(int(s)).parse(t) for t in texts] for s, texts in data["pieces"].items()}
    width = len(next(iter(pieces.values())))
    return SplineSurface([Spline({s: ps[k] for s, ps in pieces.items()}) for k in range(width)])


def cmd_fit(args) -> int:
    domain, kind = _load(args)
    if not args.targets:
        raise UsageError("fit needs --targets")
    d = _single_degree(args)
    surface = fit_interpolate(domain, Grading(kind, d), load_targets(args.targets), check=False)
    data = surface_to_dict(domain, kind, d, surface)
    text = json.dumps(data, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
        print(f"surface written to {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def cmd_export(args) -> int:
    domain, _ = _load(args)
    if not args.surface:
        raise UsageError("export needs --surface")
    surface = surface_from_dict(domain, json.loads(Path(args.surface).read_text()))
    text = export_surface(domain, surface, args.resolution).to_text()
    if args.out:
        Path(args.out).write_text(text)
        print(f"mesh written to {args.out}")
    else:
        sys.stdout.write(text)
    return 0


COMMANDS = {
    "dim": cmd_dim,
    "euler": cmd_euler,
    "homology": cmd_homology,
    "basis": cmd_basis,
    "verify": cmd_verify,
    "fit": cmd_fit,
    "export": cmd_export,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gsplines", description="Exact dimensions and bases of G^r spline spaces.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        if name == "verify":
            p.add_argument("basis", help="basis file written by 'gsplines basis'")
        p.add_argument("domain", help="JSON domain file")
        p.add_argument("--r", type=int, default=None, help="smoothness order (default: from the domain file)")
        p.add_argument("--degree", default="1" if name not in ("dim", "euler", "homology") else "1..4",
                       help="degree d or inclusive range a..b")
        p.add_argument("--grading", choices=["total", "bidegree"], default=None)
        p.add_argument("--order", choices=["grevlex", "elim"], default="grevlex")
        p.add_argument("--out", default=None, help="write a JSON report (or the output file) here")
        p.add_argument("--no-check", action="store_true", help="skip the compatibility check")
        if name == "fit":
            p.add_argument("--targets", required=False, help="JSON list of {face, point, value}")
        if name == "export":
            p.add_argument("--surface", required=False, help="surface file written by 'gsplines fit'")
            p.add_argument("--resolution", type=int, default=2)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, DomainFileError, DomainError, PolynomialError, InconsistentTargets, OSError) as exc:
        print(f"gsplines {args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
