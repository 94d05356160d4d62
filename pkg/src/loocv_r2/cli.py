"""Command-line interface.

Subcommands::

    score        score a column of predictions against a column of targets
    loocv        run leave-one-out CV with a built-in predictor, then score it
    naive-curve  tabulate the naive LOO score 1 - n^2/(n-1)^2 over a range of n
    verify       run the randomized identity checks

Exit codes: 0 ok, 2 I/O or parse error, 3 zero-variance targets, 4 too few
points or bad range, 5 predictor failure, 6 verification failure.
"""

import argparse
import csv
import io
import json
import re
import sys
from dataclasses import dataclass

import numpy as np

from . import core, harness, validation
from .errors import (
    CsvError,
    InvalidSpec,
    LengthMismatch,
    MissingColumn,
    NonFiniteInput,
    SeriesTooShort,
    SingularFit,
    ZeroVarianceTargets,
)

EXIT_OK = 0
EXIT_IO = 2
EXIT_ZERO_VARIANCE = 3
EXIT_TOO_SHORT = 4
EXIT_PREDICTOR = 5
EXIT_VERIFY = 6

_EXIT_FOR = (
    (ZeroVarianceTargets, EXIT_ZERO_VARIANCE),
    (SeriesTooShort, EXIT_TOO_SHORT),
    ((SingularFit, InvalidSpec), EXIT_PREDICTOR),
    ((CsvError, NonFiniteInput, LengthMismatch, OSError), EXIT_IO),
)

SCORE_FIELDS = (
    "r2_standard",
    "r2_cv_direct",
    "r2_cv_adjusted",
    "r2_naive_closed",
    "r2_naive_empirical",
    "n",
)

_DECIMAL = re.compile(r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?")


class RangeError(SeriesTooShort):
    pass


# ---------------------------------------------------------------------------
# CSV input
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CsvTable:
    """Referenced columns of a CSV file, in the order they were requested."""

    header: list | None
    rows: np.ndarray
    columns: list

    @property
    def n(self):
        return self.rows.shape[0]

    def column(self, i):
        return self.rows[:, i]


def _is_index(ref):
    return isinstance(ref, int) or (isinstance(ref, str) and ref.isdigit())


def _is_number(cell):
    return _DECIMAL.fullmatch(cell.strip()) is not None


def _read_records(path):
    records = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh, strict=True)
        start = 1
        try:
            for row in reader:
                if row and any(cell.strip() for cell in row):
                    records.append((start, row))
                start = reader.line_num + 1
        except csv.Error as exc:
            raise CsvError(str(exc), line=reader.line_num) from None
    return records


def load_csv(path, expected_cols):
    """Parse ``path`` and pull out the columns named in ``expected_cols``.

    A column is referenced by header name or by zero-based index. The first
    row is a header when any reference is a name, or when every referenced
    cell of the first row is non-numeric. Numbers use a decimal point, no
    thousands separators; NaN and infinity are rejected.

    Raises
    ------
    CsvError
        Unreadable structure or non-numeric data; carries the 1-based line.
    MissingColumn
        A reference names no column.
    """
    records = _read_records(path)
    if not records:
        raise CsvError(f"{path}: no data")
    refs = [str(c).strip() for c in expected_cols]
    width = len(records[0][1])
    for line, row in records:
        if len(row) != width:
            raise CsvError(f"expected {width} fields, found {len(row)}", line=line)

    first = records[0][1]
    named = [r for r in refs if not _is_index(r)]
    if named:
        has_header = True
    else:
        cells = [first[int(r)] for r in refs if int(r) < width]
        has_header = bool(cells) and not any(_is_number(c) for c in cells)
    header = [c.strip() for c in first] if has_header else None

    columns = []
    for ref in refs:
        if header is not None and ref in header:
            columns.append(header.index(ref))
        elif _is_index(ref) and int(ref) < width:
            columns.append(int(ref))
        else:
            raise MissingColumn(f"no column {ref!r} in {path}")

    body = records[1:] if has_header else records
    values = np.empty((len(body), len(columns)))
    for r, (line, row) in enumerate(body):
        for c, col in enumerate(columns):
            cell = row[col].strip()
            if not _is_number(cell):
                label = header[col] if header else col
                raise CsvError(f"column {label!r}: {cell!r} is not a decimal number", line=line)
            values[r, c] = float(cell)
    return CsvTable(header=header, rows=values, columns=columns)


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def _fmt(value, fmt):
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if fmt == "text":
        return f"{value:.6f}"
    return repr(float(value))


def render_record(record, fmt):
    """One flat mapping as text lines, a JSON object, or a two-row CSV."""
    if fmt == "json":
        return json.dumps(record)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(record.keys())
        writer.writerow(_fmt(v, fmt) for v in record.values())
        return buf.getvalue().rstrip("\n")
    width = max(len(k) for k in record)
    return "\n".join(f"{k:<{width}}  {_fmt(v, fmt)}" for k, v in record.items())


def render_table(rows, columns, fmt):
    if fmt == "json":
        return json.dumps({"rows": [dict(zip(columns, r)) for r in rows]})
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        writer.writerows([_fmt(v, fmt) for v in r] for r in rows)
        return buf.getvalue().rstrip("\n")
    lines = ["  ".join(f"{c:>10}" for c in columns)]
    lines += ["  ".join(f"{_fmt(v, fmt):>10}" for v in r) for r in rows]
    return "\n".join(lines)


def _report_record(report):
    return {name: getattr(report, name) for name in SCORE_FIELDS}


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_score(args):
    table = load_csv(args.input, [args.target_col, args.pred_col])
    report = core.score_report(table.column(0), table.column(1))
    print(render_record(_report_record(report), args.format))
    return EXIT_OK


def _split_cols(value):
    if not value:
        return []
    return [c.strip() for c in value.split(",") if c.strip()]


def cmd_loocv(args):
    features = _split_cols(args.feature_cols)
    table = load_csv(args.input, [args.target_col, *features])
    data = harness.SupervisedDataset(table.rows[:, 1:], table.column(0))
    spec = harness.PredictorSpec(kind=args.predictor, k=args.k, ridge=args.ridge)
    folds = harness.loocv_folds(data, spec)
    predictions = np.array([f.prediction for f in folds])
    report = core.score_report(data.targets, predictions)

    if args.emit_predictions:
        with open(args.emit_predictions, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["held_out_index", "y", "yhat", "loo_mean"])
            for f in folds:
                y = data.targets[f.held_out_index]
                writer.writerow(
                    [f.held_out_index, repr(float(y)), repr(f.prediction), repr(f.training_mean)]
                )
    print(render_record(_report_record(report), args.format))
    return EXIT_OK


def cmd_naive_curve(args):
    if args.n_min < 2:
        raise RangeError(f"--n-min must be at least 2, got {args.n_min}")
    if args.n_max < args.n_min:
        raise RangeError(f"--n-max ({args.n_max}) is below --n-min ({args.n_min})")
    rows = [(n, core.r2_naive_closed_form(n)) for n in range(args.n_min, args.n_max + 1)]
    print(render_table(rows, ("n", "r2_naive"), args.format))
    return EXIT_OK


def cmd_verify(args):
    if args.trials < 1:
        raise RangeError(f"--trials must be at least 1, got {args.trials}")
    report = validation.verify_all(trials=args.trials, seed=args.seed)
    failures = report.failures()
    record = report.to_dict()
    record["passed"] = not failures
    print(render_record(record, args.format))
    if failures:
        for name in failures:
            print(
                f"loocv-r2: verification failed: {name} = {getattr(report, name)!r} "
                f"exceeds {validation.TOLERANCES[name]!r}",
                file=sys.stderr,
            )
        return EXIT_VERIFY
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _uint64(text):
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"{text} is not an unsigned 64-bit integer")
    return value


def build_parser():
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("text", "json", "csv"), default="text")

    parser = argparse.ArgumentParser(
        prog="loocv-r2",
        description="R² scores corrected for leave-one-out cross-validation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("score", parents=[fmt], help="score existing predictions")
    p.add_argument("--input", required=True, metavar="PATH")
    p.add_argument("--target-col", required=True, metavar="NAME|IDX")
    p.add_argument("--pred-col", required=True, metavar="NAME|IDX")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("loocv", parents=[fmt], help="run LOOCV with a built-in predictor")
    p.add_argument("--input", required=True, metavar="PATH")
    p.add_argument("--target-col", required=True, metavar="NAME|IDX")
    p.add_argument("--feature-cols", default="", metavar="LIST",
                   help="comma-separated names or indices")
    p.add_argument("--predictor", choices=harness.PREDICTOR_KINDS, default="mean")
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--ridge", type=float, default=0.0)
    p.add_argument("--emit-predictions", metavar="PATH")
    p.set_defaults(func=cmd_loocv)

    p = sub.add_parser("naive-curve", parents=[fmt], help="naive LOO R² for a range of n")
    p.add_argument("--n-min", type=int, default=2)
    p.add_argument("--n-max", type=int, default=30)
    p.set_defaults(func=cmd_naive_curve)

    p = sub.add_parser("verify", parents=[fmt], help="run the randomized identity checks")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=_uint64, default=42)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:
        for kinds, code in _EXIT_FOR:
            if isinstance(exc, kinds):
                print(f"loocv-r2: error: {exc}", file=sys.stderr)
                return code
        raise
