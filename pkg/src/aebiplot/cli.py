"""Batch front end: records (or a published frequency table) in, biplot out.

    aebiplot analyze events.csv --id patient_id --group arm --grade grade \
        --level grade --svg plot.svg --json view.json --freq-table freq.txt
    aebiplot analyze table3.csv --pi-table --level grade --svg plot.svg
    aebiplot validate events.csv --id patient_id --group arm --grade grade
    aebiplot serve --port 8080 --data-dir ./data

Threshold flags accept either fractions ("0.0476") or percentages with a
suffix ("4.76%"), so published figure configurations can be replayed as
written.  Exit codes: 0 success, 2 usage, 3 I/O, and one code per module
error class (see EXIT_CODES).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import ae_data, biplot, ca, contingency
from .ae_data import ClassLevel, ColumnMap
from .errors import (
    AEAnalysisError,
    BadGrade,
    DegenerateTable,
    DimensionMismatch,
    EmptyDataset,
    MissingColumn,
    MissingField,
    OutOfRange,
    RankTooLow,
    RosterMismatch,
    SingleGroup,
    SvdFailure,
    ZeroWeight,
)

EXIT_CODES = {
    MissingColumn: 10,
    BadGrade: 11,
    EmptyDataset: 12,
    SingleGroup: 13,
    MissingField: 14,
    RosterMismatch: 15,
    OutOfRange: 16,
    DimensionMismatch: 17,
    DegenerateTable: 18,
    ZeroWeight: 19,
    SvdFailure: 20,
    RankTooLow: 21,
}

LEVELS = [l.value for l in ae_data.REPORTING_ORDER]


def parse_threshold(text: str) -> float:
    """"4.76%" -> 0.0476; "0.05" -> 0.05.  Bare values must be fractions."""
    s = text.strip()
    if s.endswith("%"):
        value = float(s[:-1]) / 100.0
    else:
        value = float(s)
        if value > 1.0:
            raise argparse.ArgumentTypeError(
                f"{text!r}: bare thresholds are fractions in [0, 1]; "
                f"append '%' for percentages"
            )
    if not (0.0 <= value <= 1.0):
        raise argparse.ArgumentTypeError(f"{text!r} is outside [0, 100%]")
    return value


def parse_dims(text: str) -> tuple[int, int]:
    try:
        a, b = (int(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"--dims expects 'a,b', got {text!r}") from None
    return a, b


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aebiplot",
        description="Stacked correspondence analysis and contribution biplots for AE data.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_bindings(p):
        p.add_argument("--id", dest="patient_col", help="patient id column")
        p.add_argument("--group", dest="group_col", help="treatment/arm column")
        p.add_argument("--grade", dest="grade_col", help="AE grade column (1..5)")
        p.add_argument("--domain", dest="domain_col", help="AE domain column")
        p.add_argument("--term", dest="term_col", help="AE term column")
        p.add_argument("--cycle", dest="cycle_col", help="treatment cycle column")
        p.add_argument("--roster", help="roster file (patient_id, group) fixing N_j")

    an = sub.add_parser("analyze", help="run one analysis end to end")
    an.add_argument("input", help="delimited AE records, or a frequency matrix with --pi-table")
    add_bindings(an)
    an.add_argument("--pi-table", action="store_true",
                    help="input is a class-by-group frequency matrix, not records")
    an.add_argument("--level", required=True, type=ClassLevel.from_token,
                    metavar="{" + ",".join(LEVELS) + "}")
    an.add_argument("--cycle-filter", type=int, help="keep only records at this cycle")
    an.add_argument("--min-grade", type=int, help="keep only records with grade >= this")
    an.add_argument("--contrib-min", type=parse_threshold, default=0.0,
                    help="minimum contribution in a displayed dimension (e.g. '4.76%%')")
    an.add_argument("--freq-min", type=parse_threshold, default=0.0,
                    help="minimum average relative frequency (e.g. '0.96%%')")
    an.add_argument("--dims", type=parse_dims, default=(1, 2), help="displayed dimensions, e.g. 1,2")
    an.add_argument("--show-complements", action="store_true")
    an.add_argument("--svg", help="write the biplot SVG here")
    an.add_argument("--json", dest="json_out", help="write the view JSON here")
    an.add_argument("--freq-table", dest="freq_out", help="write the frequency table here")

    va = sub.add_parser("validate", help="parse and report rejects without analyzing")
    va.add_argument("input")
    add_bindings(va)

    se = sub.add_parser("serve", help="run the HTTP service")
    se.add_argument("--host", default="127.0.0.1")
    se.add_argument("--port", type=int, default=8080)
    se.add_argument("--data-dir", default=None,
                    help="dataset store (default: $AEBIPLOT_DATA_DIR or ./aebiplot-data)")
    se.add_argument("--max-upload-bytes", type=int, default=None)
    se.add_argument("--frontend-dir", default=None,
                    help="directory of built web-UI assets to serve at /")
    return parser


def _bindings_from(args, parser) -> ColumnMap:
    missing = [f for f, v in (("--id", args.patient_col), ("--group", args.group_col),
                              ("--grade", args.grade_col)) if not v]
    if missing:
        parser.error(f"missing required column bindings: {' '.join(missing)}")
    return ColumnMap(
        patient=args.patient_col, group=args.group_col, grade=args.grade_col,
        domain=args.domain_col, term=args.term_col, cycle=args.cycle_col,
    )


def _load_dataset(args, parser) -> ae_data.Dataset:
    bindings = _bindings_from(args, parser)
    roster = None
    if args.roster:
        roster = ae_data.parse_roster(_read(args.roster))
    return ae_data.parse_dataset(_read(args.input), bindings, roster=roster)


def _read(path: str) -> bytes:
    return Path(path).read_bytes()


def _print_rejects(rejects) -> None:
    print(f"rejected rows: {len(rejects)}")
    for r in rejects:
        print(f"  line {r.line}: {r.reason}")


def _print_shares(result: ca.CAResult) -> None:
    print(f"total inertia: {result.total_inertia:.6f}")
    print("decomposition of total inertia:")
    cumulative = 0.0
    for k, share in enumerate(result.inertia_shares_pct, start=1):
        cumulative += share
        print(f"  Dim {k}  {share:6.2f}%  (cumulative {cumulative:6.2f}%)")
    if result.dropped_classes:
        print("dropped degenerate classes: " + ", ".join(result.dropped_classes))


def cmd_analyze(args, parser) -> int:
    if args.pi_table:
        for flag in ("patient_col", "group_col", "grade_col", "roster", "cycle_filter", "min_grade"):
            if getattr(args, flag):
                parser.error("--pi-table input takes no column bindings, roster, or record filters")
        pi, labels, groups = contingency.read_pi_delimited(_read(args.input))
        table = contingency.from_pi_matrix(pi, labels, groups, level=args.level)
        rejects = ()
    else:
        dataset = _load_dataset(args, parser)
        if args.cycle_filter is not None:
            dataset = ae_data.filter_cycle(dataset, args.cycle_filter)
        if args.min_grade is not None:
            dataset = ae_data.filter_min_grade(dataset, args.min_grade)
        rejects = dataset.rejects
        table = contingency.build_stacked(dataset, args.level)

    result = ca.decompose(table)
    cfg = biplot.BiplotConfig(
        dims=args.dims,
        contrib_min=args.contrib_min,
        freq_min=args.freq_min,
        show_complements=args.show_complements,
    )
    view = biplot.make_view(result, table, cfg)

    print(f"level: {args.level.display_name}   classes: {table.n_classes}   groups: {len(table.groups)}")
    _print_shares(result)
    print(f"loss of information in dims {view.dims[0]},{view.dims[1]}: "
          f"{view.loss_of_information:.2f}%")
    if view.dropped_by_filter:
        print(f"classes hidden by thresholds: {len(view.dropped_by_filter)} "
              f"({', '.join(view.dropped_by_filter)})")
    _print_rejects(rejects)

    if args.svg:
        Path(args.svg).write_text(biplot.render_svg(view), encoding="utf-8")
        print(f"wrote {args.svg}")
    if args.json_out:
        Path(args.json_out).write_bytes(biplot.export_json(view))
        print(f"wrote {args.json_out}")
    if args.freq_out:
        text = contingency.frequency_table(table).render_text() + "\n"
        Path(args.freq_out).write_text(text, encoding="utf-8")
        print(f"wrote {args.freq_out}")
    return 0


def cmd_validate(args, parser) -> int:
    dataset = _load_dataset(args, parser)
    print(f"records: {len(dataset.records)}")
    print(f"groups ({len(dataset.groups)}):")
    for g in dataset.groups:
        print(f"  {g}: {dataset.patients_per_group[g]} patients")
    cycles = sorted({r.cycle for r in dataset.records if r.cycle is not None})
    if cycles:
        print(f"cycles: {', '.join(map(str, cycles))}")
    _print_rejects(dataset.rejects)
    return 0


def cmd_serve(args, _parser) -> int:
    import os

    import uvicorn

    from .service import DEFAULT_MAX_UPLOAD, create_app

    data_dir = args.data_dir or os.environ.get("AEBIPLOT_DATA_DIR", "aebiplot-data")
    max_upload = args.max_upload_bytes or int(
        os.environ.get("AEBIPLOT_MAX_UPLOAD_BYTES", DEFAULT_MAX_UPLOAD)
    )
    frontend = args.frontend_dir or os.environ.get("AEBIPLOT_FRONTEND_DIR")
    app = create_app(data_dir=data_dir, max_upload_bytes=max_upload, frontend_dir=frontend)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"analyze": cmd_analyze, "validate": cmd_validate, "serve": cmd_serve}
    try:
        return handlers[args.command](args, parser)
    except OSError as exc:
        print(f"error: IOError: {exc}", file=sys.stderr)
        return 3
    except AEAnalysisError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CODES.get(type(exc), 1)


if __name__ == "__main__":
    sys.exit(main())
