"""Command-line surface.

Exit codes are a stable contract: 0 when everything requested verified, 1
when a verification failed (the report is still written), 2 on usage errors.

Construction commands emit point-set documents (exact JSON) to --out or
stdout; `verify`, `density` and `counts` certify properties; `plot` renders
the deterministic SVG; `report` writes a delimited verification report with
matplotlib figures next to it.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import blocks, document, metrics, oracle, recursive, rosette as rosette_mod
from .artifact import PointSetArtifact
from .reporting import VerificationReport, format_value

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_USAGE = 2


def _fraction_arg(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from exc


def _load_artifact(path: str) -> PointSetArtifact:
    return document.parse_document(Path(path).read_text(encoding="utf-8"))


def _write_artifact(artifact: PointSetArtifact, out: str | None) -> None:
    text = document.emit_json(artifact)
    if out:
        Path(out).write_text(text, encoding="utf-8")
        print(f"wrote {out} ({artifact.count} points)", file=sys.stderr)
    else:
        sys.stdout.write(text)


def _print_report(report: VerificationReport) -> None:
    print(report.summary_line())
    for line in report.detail_lines():
        print(line)


# ------------------------------------------------------------------ commands


def cmd_construct1(args) -> int:
    g = recursive.build(args.order, args.index)
    if args.finalize:
        artifact, report = recursive.finalize_lemma1(g)
        _print_report(report)
        if not report.passed:
            _write_artifact(artifact, args.out)
            return EXIT_VERIFICATION_FAILED
    else:
        artifact = recursive.graph_artifact(g)
    _write_artifact(artifact, args.out)
    return EXIT_OK


def cmd_construct2(args) -> int:
    base = _load_artifact(args.base)
    params = blocks.BlockParameters(
        base=base, blocks=args.blocks, quant_exp=args.quant_exp, delta=args.delta
    )
    block_set = blocks.assemble_blocks(params)
    report = blocks.verify_blocks(block_set)
    artifact = block_set.to_artifact()
    if args.pad_to is not None:
        artifact, pad_report = blocks.pad_to_count(artifact, args.pad_to)
        report.merge_child(pad_report)
    _print_report(report)
    _write_artifact(artifact, args.out)
    return EXIT_OK if report.passed else EXIT_VERIFICATION_FAILED


def cmd_rosette(args) -> int:
    base = _load_artifact(args.base)
    epsilon = Fraction(1, 2**args.epsilon_exp) if args.epsilon_exp is not None else None
    artifact, report = rosette_mod.build_rosette(base, epsilon=epsilon, copies=args.copies)
    if args.pad_to is not None:
        artifact, pad_report = rosette_mod.pad_regular_polygon(artifact, args.pad_to)
        report.merge_child(pad_report)
    _print_report(report)
    _write_artifact(artifact, args.out)
    return EXIT_OK if report.passed else EXIT_VERIFICATION_FAILED


def cmd_highdim(args) -> int:
    from . import highdim

    order = args.order
    if order is None:
        # important part must have exactly m points; match a recursive depth
        table = metrics.counts(recursive.MAX_DEPTH)
        matches = [i for i, _a, n, _m in table.rows if n == args.m]
        if not matches:
            raise ValueError(f"no recursive level has exactly {args.m} points; pass --order")
        order = matches[0]
    important, fin_report = recursive.finalize_lemma1(recursive.build(order, order))
    if not fin_report.passed:
        _print_report(fin_report)
        return EXIT_VERIFICATION_FAILED
    epsilon = Fraction(1, 2**args.epsilon_exp)
    directions = highdim.sphere_directions(args.m, args.dim, args.seed, pairs=args.pairs)
    dir_report = highdim.verify_directions(directions)
    assembly = highdim.assemble(args.dim, args.m, epsilon, directions, important, args.seed)
    fixed, fix_report = highdim.parity_fix(assembly)
    asm_report = highdim.verify_assembly(fixed)
    for rep in (dir_report, fix_report, asm_report):
        _print_report(rep)
    _write_artifact(fixed.to_artifact(), args.out)
    ok = dir_report.passed and fix_report.passed and asm_report.passed
    return EXIT_OK if ok else EXIT_VERIFICATION_FAILED


def _verify_artifact(artifact: PointSetArtifact, which: str) -> list[VerificationReport]:
    reports: list[VerificationReport] = []
    points = artifact.points

    if artifact.claimed_halving:
        claim_report = VerificationReport(name="claimed-family")
        for tup in artifact.claimed_halving:
            ok, sides = oracle.is_halving([points[i] for i in tup], points)
            claim_report.checked += 1
            if not ok:
                claim_report.record_violation((tup, sides))
        claim_report.details["family_size"] = len(artifact.claimed_halving)
        reports.append(claim_report)

    if artifact.dimension == 2:
        results = {}
        if which in ("naive", "both"):
            results["naive"] = oracle.count_halving_lines_naive(points)
        if which in ("sweep", "both"):
            results["sweep"] = oracle.count_halving_lines_sweep(points)
        for name, res in results.items():
            rep = VerificationReport(name=f"oracle-{name}")
            rep.checked = len(points) * (len(points) - 1) // 2
            rep.details["halving_count"] = res.halving_count
            rep.details["degeneracies"] = res.degeneracy_count
            reports.append(rep)
        if len(results) == 2:
            agree = VerificationReport(name="oracle-agreement")
            agree.checked = 1
            if results["naive"].halving_pairs != results["sweep"].halving_pairs:
                agree.record_violation("pair sets differ")
            reports.append(agree)
        if artifact.claimed_halving and results:
            res = next(iter(results.values()))
            cover = VerificationReport(name="claimed-subset-of-oracle")
            cover.checked = len(artifact.claimed_halving)
            missing = set(map(tuple, map(sorted, artifact.claimed_halving))) - set(res.halving_pairs)
            if missing:
                cover.record_violation(sorted(missing)[:5])
            reports.append(cover)
    else:
        import math

        n = len(points)
        d = artifact.dimension
        if math.comb(n, d) <= 500_000:
            res = oracle.count_halving_hyperplanes(points, d)
            rep = VerificationReport(name="oracle-hyperplanes")
            rep.checked = math.comb(n, d)
            rep.details["halving_count"] = res.halving_count
            reports.append(rep)
        else:
            note = VerificationReport(name="oracle-hyperplanes-skipped")
            note.details["reason"] = f"C({n},{d}) too large for exhaustive scan"
            reports.append(note)
    return reports


def cmd_verify(args) -> int:
    artifact = _load_artifact(args.input)
    reports = _verify_artifact(artifact, args.oracle)
    for rep in reports:
        _print_report(rep)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VERIFICATION_FAILED


def cmd_density(args) -> int:
    artifact = _load_artifact(args.input)
    report = rosette_mod.density_check(artifact, args.gamma, d=args.dim)
    _print_report(report)
    return EXIT_OK if report.passed else EXIT_VERIFICATION_FAILED


def cmd_plot(args) -> int:
    from .svgplot import emit_svg

    artifact = _load_artifact(args.input)
    data = emit_svg(artifact)
    Path(args.out).write_bytes(data)
    print(f"wrote {args.out} ({len(data)} bytes)", file=sys.stderr)
    return EXIT_OK


def cmd_counts(args) -> int:
    table = metrics.counts(args.max)
    print("i,a_i,n_i,m_i")
    for i, a, n, m in table.rows:
        print(f"{i},{a},{n},{m}")
    report = metrics.check_bounds(table)
    _print_report(report)
    return EXIT_OK if report.passed else EXIT_VERIFICATION_FAILED


def cmd_report(args) -> int:
    import csv

    from .figures import render_point_figure

    artifact = _load_artifact(args.input)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    reports = _verify_artifact(artifact, args.oracle)
    if args.gamma is not None:
        reports.append(rosette_mod.density_check(artifact, args.gamma))

    csv_path = out_dir / "report.csv"
    with csv_path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["check", "status", "checked", "violations", "details"])
        for rep in reports:
            details = "; ".join(f"{k}={format_value(v)}" for k, v in sorted(rep.details.items()))
            writer.writerow(
                [rep.name, "PASS" if rep.passed else "FAIL", rep.checked, rep.violation_count, details]
            )
    points_path = out_dir / "points.csv"
    points_path.write_text(document.emit_csv(artifact, include_decimal=True), encoding="utf-8")
    figure_path = render_point_figure(artifact, out_dir / "points.png")

    for rep in reports:
        print(rep.summary_line())
    print(f"wrote {csv_path}, {points_path}, {figure_path}", file=sys.stderr)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VERIFICATION_FAILED


# -------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="halving-lab",
        description="Construct and certify point sets rich in halving lines/hyperplanes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct1", help="recursive construction level")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--index", type=int, required=True)
    p.add_argument("--finalize", action="store_true", help="apply the final 8/9 x-scaling and gap certification")
    p.add_argument("--out")
    p.set_defaults(func=cmd_construct1)

    p = sub.add_parser("construct2", help="block-union amplification of a base document")
    p.add_argument("--base", required=True)
    p.add_argument("--blocks", type=int, required=True, metavar="N")
    p.add_argument("--quant-exp", type=int, default=9, metavar="Q")
    p.add_argument("--delta", type=_fraction_arg, default=None)
    p.add_argument("--pad-to", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_construct2)

    p = sub.add_parser("rosette", help="rotated-copy rosette of a base document")
    p.add_argument("--base", required=True)
    p.add_argument("--epsilon-exp", type=int, default=None, metavar="E", help="epsilon = 2**-E")
    p.add_argument("--copies", type=int, default=None)
    p.add_argument("--pad-to", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_rosette)

    p = sub.add_parser("highdim", help="spatial block assembly with parity fix")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--pairs", type=int, default=4, help="direction pairs to pack")
    p.add_argument("--order", type=int, default=None, help="recursive depth for the important part (default: inferred from --m)")
    p.add_argument("--epsilon-exp", type=int, default=16)
    p.add_argument("--out")
    p.set_defaults(func=cmd_highdim)

    p = sub.add_parser("verify", help="certify a document with the oracles")
    p.add_argument("--input", required=True)
    p.add_argument("--oracle", choices=["naive", "sweep", "both"], default="both")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("density", help="exact density verdict")
    p.add_argument("--input", required=True)
    p.add_argument("--gamma", type=_fraction_arg, required=True)
    p.add_argument("--dim", type=int, default=None)
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("plot", help="deterministic SVG rendering")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("counts", help="recurrence table with certified bounds")
    p.add_argument("--max", type=int, required=True)
    p.set_defaults(func=cmd_counts)

    p = sub.add_parser("report", help="verification report: CSV + figures")
    p.add_argument("--input", required=True)
    p.add_argument("--oracle", choices=["naive", "sweep", "both"], default="sweep")
    p.add_argument("--gamma", type=_fraction_arg, default=None)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
