"""Command-line interface.

Subcommands: bound, search, verify, czero, stats, plot. Exit codes are 0 on
success (search: complete), 1 on usage or I/O problems, 2 on an incomplete
search.
"""

from __future__ import annotations

import argparse
import sys

from .analysis import annotate_membership, c0_scan_detailed, stats
from .dynamics import (
    multiplier_critical_bound,
    periodic_point_count,
    projection_critical_count,
)
from .errors import DocumentFormatError, DomainError, MultcritError
from .io import (
    ResultDocument,
    read_document,
    to_csv,
    verify_document,
    write_document,
)
from .solver import SearchConfig, search
from .svgplot import write_svg

EXIT_OK = 0
EXIT_USAGE_IO = 1
EXIT_INCOMPLETE = 2


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; the contract reserves 2 for an
    # incomplete search, so remap.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE_IO, f"{self.prog}: error: {message}\n")


def _stats_line(row, period: int) -> str:
    return (
        f"period {period}: {row.count} critical points, "
        f"{row.inside_count} inside / {row.outside_count} outside the Mandelbrot set "
        f"({row.inside_pct:.1f}% / {row.outside_pct:.1f}%), "
        f"min |lambda| = {row.min_lambda_abs:.6f}"
    )


def cmd_bound(args) -> int:
    if not 1 <= args.n_min <= args.n_max <= 30:
        raise DomainError(f"need 1 <= n_min <= n_max <= 30, got {args.n_min}..{args.n_max}")
    header = ("n", "nu(n)", "deg pi_n", "deg lambda_n", "N_pi_n", "bound")
    rows = []
    for n in range(args.n_min, args.n_max + 1):
        nu = periodic_point_count(n)
        rows.append(
            (
                n,
                nu,
                nu // n,
                nu // 2,
                projection_critical_count(n),
                multiplier_critical_bound(n),
            )
        )
    widths = [
        max(len(str(header[i])), max(len(str(r[i])) for r in rows))
        for i in range(len(header))
    ]
    print("  ".join(str(h).rjust(w) for h, w in zip(header, widths)))
    for r in rows:
        print("  ".join(str(v).rjust(w) for v, w in zip(r, widths)))
    return EXIT_OK


def cmd_search(args) -> int:
    cfg = SearchConfig(
        tol=args.tol,
        max_newton_iters=args.max_iter,
        budget=args.budget,
        seed=args.seed,
        sample_radius=args.radius,
    )
    resume = None
    if args.merge:
        if not args.out:
            raise DomainError("--merge needs --out pointing at the existing document")
        try:
            prior = read_document(args.out)
        except FileNotFoundError:
            prior = None
        if prior is not None:
            if prior.period != args.n:
                raise DomainError(
                    f"--merge document has period {prior.period}, search asked for {args.n}"
                )
            resume = prior.records
    rs = search(args.n, cfg, resume=resume)
    annotate_membership(rs)
    doc = ResultDocument.from_result_set(rs, cfg)
    if args.out:
        try:
            if args.format == "csv":
                with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
                    fh.write(to_csv(doc))
            else:
                write_document(doc, args.out)
        except OSError as exc:
            print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_USAGE_IO
    print(_stats_line(stats(rs), rs.period))
    print(
        f"found {len(rs.records)} of bound {rs.bound} "
        f"({'complete' if rs.complete else 'incomplete'}), "
        f"{rs.samples_used} parameter samples, {rs.guesses_used} Newton starts"
    )
    return EXIT_OK if rs.complete else EXIT_INCOMPLETE


def cmd_verify(args) -> int:
    try:
        doc = read_document(args.path)
    except FileNotFoundError:
        print(f"error: no such file: {args.path}", file=sys.stderr)
        return EXIT_USAGE_IO
    except DocumentFormatError as exc:
        print(f"error: malformed document: {exc}", file=sys.stderr)
        return EXIT_USAGE_IO
    report = verify_document(doc)
    if report.ok:
        print(
            f"ok: {report.checked} records re-verified, invariants hold "
            f"(period {doc.period}, complete={str(doc.complete).lower()})"
        )
        return EXIT_OK
    for f in report.failures:
        print(f"FAIL: {f}")
    print(f"{len(report.failures)} failures in {report.checked} records")
    return EXIT_USAGE_IO


def cmd_czero(args) -> int:
    hits, marginal = c0_scan_detailed(args.max_n, args.tol)
    for n in sorted(hits):
        print(f"{n}: " + " ".join(str(a) for a in hits[n]))
    if marginal:
        print("marginal (above tolerance, within three decades):")
        for n in sorted(marginal):
            for a, mag in marginal[n]:
                print(f"  {n}: {a} |derivative| = {mag:.3e}")
    return EXIT_OK


def cmd_stats(args) -> int:
    try:
        doc = read_document(args.path)
    except FileNotFoundError:
        print(f"error: no such file: {args.path}", file=sys.stderr)
        return EXIT_USAGE_IO
    except DocumentFormatError as exc:
        print(f"error: malformed document: {exc}", file=sys.stderr)
        return EXIT_USAGE_IO
    if not doc.records:
        print(f"period {doc.period}: empty record set")
        return EXIT_OK
    print(_stats_line(stats(doc.to_result_set()), doc.period))
    return EXIT_OK


def cmd_plot(args) -> int:
    try:
        doc = read_document(args.path)
    except FileNotFoundError:
        print(f"error: no such file: {args.path}", file=sys.stderr)
        return EXIT_USAGE_IO
    except DocumentFormatError as exc:
        print(f"error: malformed document: {exc}", file=sys.stderr)
        return EXIT_USAGE_IO
    try:
        write_svg(doc, args.out)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_USAGE_IO
    print(f"wrote {args.out}: {len(doc.records)} markers")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="multcrit",
        description="Critical points of periodic-orbit multiplier maps for z^2 + c.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", help="counting table: nu, degrees, critical bounds")
    p.add_argument("n_min", type=int)
    p.add_argument("n_max", type=int)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("search", help="find all critical points for one period")
    p.add_argument("n", type=int)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--max-iter", type=int, default=50)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--radius", type=float, default=2.0)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument(
        "--merge",
        action="store_true",
        help="seed the search from the existing --out document, then re-deduplicate",
    )
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("verify", help="re-verify a result document")
    p.add_argument("path")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("czero", help="exact scan for critical points with c = 0")
    p.add_argument("max_n", type=int)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_czero)

    p = sub.add_parser("stats", help="summary row for a result document")
    p.add_argument("path")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("plot", help="SVG scatter over the Mandelbrot raster")
    p.add_argument("path")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_plot)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DomainError, DocumentFormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE_IO
    except MultcritError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE_IO


if __name__ == "__main__":
    sys.exit(main())
