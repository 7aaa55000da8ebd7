"""Command-line front end: ``detect``, ``simulate``, ``evaluate``, ``profile``.

Exit status is 0 on success and 2 on any input or configuration error, in
which case a JSON error document is printed to stdout.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from .ballstat import Segment, scan_profile, write_profile_csv
from .evaluation import evaluate
from .exceptions import DistanceMatrixError, InvalidInputError, SegmentTooShortError
from .hierarchy import METRIC_CHOICES, DetectionConfig, detect
from .metric import pairwise_distance_matrix, validate_distance_matrix
from .simulate import ExampleSpec, gen_example, get_template

EXIT_OK = 0
EXIT_INPUT = 2


class CLIError(Exception):
    pass


def _read_rows(path):
    try:
        with open(path, newline="") as fh:
            rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    except OSError as exc:
        raise CLIError("cannot read %s: %s" % (path, exc.strerror)) from None
    except (csv.Error, UnicodeDecodeError) as exc:
        raise CLIError("malformed CSV %s: %s" % (path, exc)) from None
    if len(rows) < 2:
        raise CLIError("%s: expected a header row followed by data rows" % path)
    header = [h.strip() for h in rows[0]]
    body = rows[1:]
    width = len(header)
    try:
        data = np.array([[float(c) for c in r] for r in body], dtype=np.float64)
    except ValueError as exc:
        raise CLIError("%s: non-numeric value (%s)" % (path, exc)) from None
    if any(len(r) != width for r in body):
        raise CLIError("%s: rows have inconsistent column counts" % path)
    return header, data


def load_distance_matrix(path, metric):
    """Read a series CSV (or a precomputed matrix) and return its DistanceMatrix."""
    header, data = _read_rows(path)
    if metric == "precomputed":
        return validate_distance_matrix(data)
    if metric == "circular":
        if "angle" in header:
            data = data[:, header.index("angle")]
        elif data.shape[1] == 1:
            data = data[:, 0]
        else:
            raise CLIError("%s: circular metric needs an 'angle' column" % path)
    return pairwise_distance_matrix(data, metric)


def _config_from_args(args) -> DetectionConfig:
    return DetectionConfig(
        metric=args.metric,
        min_seg=args.min_seg,
        replicates=args.replicates,
        p_threshold=args.p_threshold,
        block_size=args.block_size,
        stride=args.stride,
        seed=args.seed,
        threads=args.threads,
        decreasing_threshold=args.decreasing_threshold,
    )


def _emit(text, output):
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_detect(args):
    config = _config_from_args(args)
    D = load_distance_matrix(args.input, config.metric)
    report = detect(D, config)
    _emit(report.to_json(), args.output)


def cmd_profile(args):
    config = _config_from_args(args)
    D = load_distance_matrix(args.input, config.metric)
    end = D.n if args.end is None else args.end
    segment = Segment(args.start, end)
    segment.check_within(D.n)
    rows = scan_profile(D, segment, config.min_seg, config.stride)
    if args.output:
        write_profile_csv(rows, args.output)
    else:
        buf = io.StringIO()
        write_profile_csv(rows, buf)
        sys.stdout.write(buf.getvalue())


def cmd_simulate(args):
    template = get_template(args.example)
    spec = ExampleSpec(args.example, n=args.n, m=args.m, param=args.param, seed=args.seed)
    series, truth = gen_example(spec)
    if series.ndim == 1:
        header = ["angle"]
        rows = series[:, None]
    else:
        header = ["x%d" % (k + 1) for k in range(series.shape[1])]
        rows = series
    out = Path(args.output)
    with open(out, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([repr(float(v)) for v in r])
    truth_doc = {
        "example": spec.id,
        "n": spec.n,
        "m": spec.m,
        "param": spec.param if spec.param is not None else (
            template.param_choices[0] if template.param_choices else None),
        "seed": spec.seed,
        "metric": template.metric,
        "T": int(series.shape[0]),
        "changepoints": [int(c) for c in truth],
    }
    truth_path = Path(args.truth) if args.truth else out.with_suffix(".json")
    truth_path.write_text(json.dumps(truth_doc, indent=2, sort_keys=True) + "\n")


def _load_cp_file(path):
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise CLIError("cannot read %s: %s" % (path, exc.strerror)) from None
    except json.JSONDecodeError as exc:
        raise CLIError("%s is not valid JSON: %s" % (path, exc)) from None
    if not isinstance(doc, dict) or "T" not in doc or "changepoints" not in doc:
        raise CLIError("%s: expected an object with 'T' and 'changepoints'" % path)
    return int(doc["T"]), sorted(int(c) for c in doc["changepoints"])


def cmd_evaluate(args):
    T1, truth = _load_cp_file(args.truth)
    T2, est = _load_cp_file(args.estimate)
    if T1 != T2:
        raise CLIError("series lengths differ: truth T=%d, estimate T=%d" % (T1, T2))
    _emit(json.dumps(evaluate(truth, est, T1), indent=2, sort_keys=True) + "\n", args.output)


def _add_detection_flags(p):
    p.add_argument("input", help="CSV series (header row required) or distance matrix")
    p.add_argument("--metric", choices=METRIC_CHOICES, default="euclidean")
    p.add_argument("--min-seg", type=int, default=10, dest="min_seg")
    p.add_argument("--replicates", type=int, default=199)
    p.add_argument("--p-threshold", type=float, default=0.05, dest="p_threshold")
    p.add_argument("--block-size", type=int, default=None, dest="block_size")
    p.add_argument("--stride", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--decreasing-threshold", action="store_true", dest="decreasing_threshold",
                   help="use p_threshold / stage at stage 1, 2, ...")
    p.add_argument("--output", "-o", default=None)


def build_parser():
    parser = argparse.ArgumentParser(prog="balldetect", description="Ball-statistic change-point detection.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("detect", help="detect change points, write a JSON report")
    _add_detection_flags(p)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("profile", help="write the (M, L, V) scan surface as CSV")
    _add_detection_flags(p)
    p.add_argument("--start", type=int, default=0, help="segment start (exclusive, 0 = beginning)")
    p.add_argument("--end", type=int, default=None, help="segment end (inclusive, default T)")
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("simulate", help="generate a benchmark series and its truth file")
    p.add_argument("example", help="design id, e.g. 4.1.8")
    p.add_argument("--n", type=int, default=40)
    p.add_argument("--m", type=int, default=40)
    p.add_argument("--param", type=float, default=None, help="mu / sigma / GARCH case")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", "-o", required=True, help="series CSV path")
    p.add_argument("--truth", default=None, help="truth JSON path (default: OUTPUT with .json)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("evaluate", help="compare two change-point JSON files")
    p.add_argument("truth")
    p.add_argument("estimate")
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=cmd_evaluate)
    return parser


def _fail(kind, message, violations=None):
    doc = {"error": kind, "message": message}
    if violations is not None:
        doc["violations"] = violations
    sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return EXIT_INPUT


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except DistanceMatrixError as exc:
        return _fail("invalid-distance-matrix", str(exc), exc.violations)
    except SegmentTooShortError as exc:
        return _fail("segment-too-short", str(exc))
    except InvalidInputError as exc:
        return _fail("invalid-input", str(exc))
    except CLIError as exc:
        return _fail("invalid-input", str(exc))
    except OSError as exc:
        return _fail("io-error", str(exc))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
