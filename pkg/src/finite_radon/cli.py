"""Command-line entry point: ``finite-radon <command> ...``.

Exit codes: 0 success, 1 negative verdict (inadmissible complex, data
outside the range, failed cross-check), 2 usage or input error.
Rationals are printed as reduced ``p/q`` strings, never floats.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import random
import sys

from . import complexes, enumeration, hyperplanes, radon
from .formats import FormatError, read_complex, read_values, render
from .geometry import GeometrySpace

log = logging.getLogger("finite_radon")

ERRATA = [
    {
        "item": "C(21,8), complexes avoiding a given point",
        "stated": 203440,
        "computed": enumeration.binomial(21, 8),
        "check": "8 * C(21,8) = %d" % (8 * enumeration.binomial(21, 8)),
    },
    {
        "item": "admissible complexes of Z_2^3 (before correction)",
        "stated": 937438,
        "computed": 937440,
        "check": "exhaustive census",
    },
    {
        "item": "inadmissible complexes of Z_2^3 (before correction)",
        "stated": 2170667,
        "computed": 2170665,
        "check": "exhaustive census",
    },
    {
        "item": "28 x 8 line matrix of Z_2^3",
        "stated": "29 rows, one of weight 1",
        "computed": "28 rows, all of weight 2",
        "check": "generated from the line enumeration",
    },
]


class UsageError(Exception):
    pass


def _geometry(args) -> radon.IncidenceGeometry:
    if args.geometry == "polygon":
        return radon.polygon_geometry(args.m)
    space = GeometrySpace(args.q, args.n)
    if args.geometry == "lines":
        return radon.line_geometry(space)
    return radon.hyperplane_geometry(space)


def _cell(v) -> str:
    if isinstance(v, list):
        return " ".join("-".join(str(y) for y in x) if isinstance(x, list) else str(x) for x in v)
    return "" if v is None else str(v)


def _flatten(payload, prefix=""):
    if isinstance(payload, dict):
        for k, v in payload.items():
            yield from _flatten(v, f"{prefix}{k}.")
    elif isinstance(payload, list) and payload and isinstance(payload[0], dict):
        for i, v in enumerate(payload):
            yield from _flatten(v, f"{prefix}{i}.")
    else:
        yield prefix.rstrip("."), _cell(payload)


def _emit(payload, fmt: str, out):
    if fmt == "json":
        out.write(json.dumps(payload, indent=2) + "\n")
        return
    rows = list(_flatten(payload))
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value"])
        w.writerows(rows)
        out.write(buf.getvalue())
    else:
        for k, v in rows:
            out.write(f"{k}: {v}\n")


def _vec(values) -> list[str]:
    return [render(v) for v in values]


# -- commands ------------------------------------------------------------------------


def cmd_matrix(args, out):
    g = _geometry(args)
    m = radon.radon_matrix(g)
    if args.format == "plain":
        out.write(radon.format_matrix(m))
    elif args.format == "csv":
        out.write("".join(",".join(str(v) for v in row) + "\n" for row in m))
    else:
        _emit({"geometry": g.name, "rows": g.y_count, "cols": g.x_count, "matrix": m}, "json", out)
    return 0


def cmd_bolker(args, out):
    g = _geometry(args)
    report = radon.bolker_check(g)
    payload = {
        "geometry": g.name,
        "alpha": report.alpha,
        "beta": report.beta,
        "holds": report.holds,
        "injective": radon.is_injective(g),
        "inverse": None,
        "round_trip": None,
    }
    if report.holds:
        c, d = radon.normal_inverse_coefficients(report.alpha, report.beta, g.x_count)
        rng = random.Random(args.seed)
        ok = 0
        for _ in range(args.trials):
            f = radon.DataVector(tuple(rng.randint(-10, 10) for _ in range(g.x_count)))
            ok += radon.bolker_invert(g, radon.radon_apply(g, f)) == f
        payload["inverse"] = {"identity_coefficient": render(c), "ones_coefficient": render(d)}
        payload["round_trip"] = {"trials": args.trials, "exact": ok, "seed": args.seed}
    _emit(payload, args.format, out)
    return 0


def cmd_cavalieri(args, out):
    space = GeometrySpace(args.q, args.n)
    values = read_values(args.data)
    res = hyperplanes.cavalieri_check(space, values)
    solvable = hyperplanes.in_range_by_solve(space, values)
    payload = {
        "holds": res.holds,
        "spread_sums": _vec(res.spread_sums),
        "in_range_by_solve": solvable,
    }
    _emit(payload, args.format, out)
    if res.holds != solvable:
        log.error("Cavalieri verdict and linear-solve oracle disagree")
        return 1
    return 0 if res.holds else 1


def cmd_hyperplane_admissible(args, out):
    space = GeometrySpace(args.q, args.n)
    try:
        ids = [int(t) for t in args.planes.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"--planes must be comma-separated integers, got {args.planes!r}") from None
    pattern = hyperplanes.hyperplane_pattern(space, ids)
    by_rank = hyperplanes.hyperplane_admissible_rank(space, ids)
    payload = {
        "planes": sorted(set(ids)),
        "pattern": pattern.admissible,
        "pattern_experimental": pattern.experimental,
        "rank": by_rank,
        "full_spreads": list(pattern.full_spreads),
        "omitted_per_spread": list(pattern.omitted_per_spread),
    }
    _emit(payload, args.format, out)
    return 0 if by_rank else 1


def report_payload(c: complexes.LineComplex, report: complexes.AdmissibilityReport) -> dict:
    return {
        "q": c.space.q,
        "n": c.space.n,
        "lines": [list(e) for e in c.edges],
        "admissible": report.admissible,
        "omitted_points": list(report.omitted_points),
        "isolated_tree_components": [list(t) for t in report.isolated_tree_components],
        "even_cycle": list(report.even_cycle) if report.even_cycle else None,
        "witness": _vec(report.witness) if report.witness is not None else None,
    }


def cmd_check(args, out):
    c = read_complex(args.complex)
    report = complexes.obstruction_scan(c)
    payload = report_payload(c, report)
    if args.verify_rank:
        payload["rank_admissible"] = complexes.rank_oracle_admissible(c)
    _emit(payload, args.format, out)
    return 0 if report.admissible else 1


def cmd_reconstruct(args, out):
    c = read_complex(args.complex)
    values = read_values(args.data)
    if len(values) != len(c.line_ids):
        raise UsageError(f"data file has {len(values)} values; the complex has {len(c.line_ids)} lines")
    if not complexes.is_admissible(c):
        raise UsageError("reconstruct needs an admissible complex (run `check` for the obstruction)")
    try:
        f = complexes.reconstruct(c, radon.DataVector(tuple(values), "block"))
    except complexes.InconsistentDataError as exc:
        _emit({"consistent": False, "error": str(exc)}, args.format, out)
        return 1
    _emit({"consistent": True, "values": _vec(f)}, args.format, out)
    return 0


def cmd_witness(args, out):
    c = read_complex(args.complex)
    if complexes.is_admissible(c):
        raise UsageError("complex is admissible, so no kernel witness exists")
    w = complexes.kernel_witness(c, strategy=args.strategy)
    _emit({"strategy": args.strategy, "witness": _vec(w)}, args.format, out)
    return 0


def _census(args) -> enumeration.CensusResult:
    if args.n != enumeration.CENSUS_N:
        raise UsageError(f"exhaustive census is only feasible for n=3 (got n={args.n}); use `sample`")
    return enumeration.enumerate_all_complexes(
        args.n, partitions=args.partitions, verify_rank=args.verify_rank, workers=args.workers
    )


def cmd_census(args, out):
    res = _census(args)
    payload = {"n": args.n, "partitions": args.partitions, **res.as_dict()}
    _emit(payload, args.format, out)
    return 1 if res.disagreements else 0


def cmd_counts(args, out):
    res = _census(args)
    counts = enumeration.closed_form_counts(res)
    payload = {
        "counts": [
            {"name": c.name, "closed_form": c.closed_form, "brute_force": c.brute_force, "agrees": c.agrees}
            for c in counts
        ],
        "errata": ERRATA,
    }
    _emit(payload, args.format, out)
    return 0 if all(c.agrees for c in counts) else 1


def cmd_sample(args, out):
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    rate = complexes.sample_admissibility_rate(args.n, args.trials, args.seed)
    payload = {
        "n": args.n,
        "trials": args.trials,
        "seed": args.seed,
        "admissible": int(rate * args.trials),
        "rate": render(rate),
    }
    _emit(payload, args.format, out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "csv", "plain"], default="json")
    p = argparse.ArgumentParser(prog="finite-radon", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def command(name, func, helptext):
        sp = sub.add_parser(name, parents=[common], help=helptext)
        sp.set_defaults(func=func)
        return sp

    def geometry_args(sp):
        sp.add_argument("--geometry", choices=["lines", "hyperplanes", "polygon"], default="lines")
        sp.add_argument("--q", type=int, default=2)
        sp.add_argument("--n", type=int, default=3)
        sp.add_argument("--m", type=int, default=4, help="polygon sides")

    sp = command("matrix", cmd_matrix, "dump an incidence matrix")
    geometry_args(sp)

    sp = command("bolker", cmd_bolker, "Bolker condition and inversion round trip")
    geometry_args(sp)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)

    sp = command("cavalieri", cmd_cavalieri, "spread-sum range check of hyperplane data")
    sp.add_argument("data", help="value file, one entry per hyperplane in canonical order")
    sp.add_argument("--q", type=int, default=2)
    sp.add_argument("--n", type=int, default=3)

    sp = command("hyperplane-admissible", cmd_hyperplane_admissible, "pattern and rank verdicts for a hyperplane complex")
    sp.add_argument("--planes", required=True, help="comma-separated hyperplane ids")
    sp.add_argument("--q", type=int, default=2)
    sp.add_argument("--n", type=int, default=3)

    sp = command("check", cmd_check, "admissibility report for a line complex file")
    sp.add_argument("complex")
    sp.add_argument("--verify-rank", action="store_true")

    sp = command("reconstruct", cmd_reconstruct, "recover point data over an admissible complex")
    sp.add_argument("complex")
    sp.add_argument("--data", required=True, help="value file, one entry per complex line")

    sp = command("witness", cmd_witness, "kernel witness for an inadmissible complex")
    sp.add_argument("complex")
    sp.add_argument("--strategy", choices=["fast", "nullspace"], default="fast")

    for name, func, helptext in (
        ("census", cmd_census, "classify every complex of Z_2^3"),
        ("counts", cmd_counts, "closed-form counts against brute force"),
    ):
        sp = command(name, func, helptext)
        sp.add_argument("--n", type=int, default=3)
        sp.add_argument("--partitions", type=int, default=1)
        sp.add_argument("--workers", type=int, default=1)
        sp.add_argument("--verify-rank", action="store_true")

    sp = command("sample", cmd_sample, "estimate the admissible fraction by random sampling")
    sp.add_argument("--n", type=int, default=4)
    sp.add_argument("--trials", type=int, default=10000)
    sp.add_argument("--seed", type=int, default=0)
    return p


def main(argv=None, out=None) -> int:
    logging.basicConfig(level=os.environ.get("FINITE_RADON_LOG", "WARNING").upper(), format="%(levelname)s: %(message)s")
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except (UsageError, FormatError, ValueError, OSError) as exc:
        print(f"error: {args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
