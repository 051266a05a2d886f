"""Command-line front end.

Subcommands: ``score`` (batch-score landmark records), ``evaluate`` (metrics
report against labels), ``edc`` (error-versus-discard curves), ``synth``
(deterministic synthetic fixture) and ``render`` (SVG charts from previously
written files). Exit codes: 0 success, 1 environment/I-O failure,
2 validation/content failure. All file writes are atomic (temp + rename), so
a failing run never leaves a partial output behind.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import tempfile
from pathlib import Path

from .charts import edc_chart, histogram_chart, scatter_chart
from .core import ScoreConfig, ScoreStatus, ValidationError, evaluate_pose
from .dataio import (
    generate_synthetic_fixture,
    join_samples,
    read_labels,
    read_landmark_records,
    records_from_samples,
    write_labels,
    write_landmark_records,
)
from .edc import edc_curve, oracle_curve, read_curve_points, write_curve
from .metrics import (
    ScoreMetric,
    error_histogram,
    evaluate_samples,
    score_labeled_samples,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_IO = 1
EXIT_VALIDATION = 2

SCORE_COLUMNS = (
    "image_id",
    "horizontal_score",
    "tilt_score",
    "combined_score",
    "yaw_deg",
    "roll_deg",
    "status",
)

_METRIC_COLUMN = {
    ScoreMetric.HORIZONTAL: "horizontal_score",
    ScoreMetric.TILT: "tilt_score",
    ScoreMetric.COMBINED: "combined_score",
}


def _write_atomic(path: Path, data: bytes) -> None:
    fd, tmp = tempfile.mkstemp(dir=str(path.parent) or ".", prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "wb") as fp:
            fp.write(data)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _config(args: argparse.Namespace) -> ScoreConfig:
    kwargs = {}
    if getattr(args, "epsilon", None) is not None:
        kwargs["epsilon"] = args.epsilon
    if getattr(args, "min_visibility", None) is not None:
        kwargs["min_visibility"] = args.min_visibility
    if getattr(args, "tau", None) is not None:
        kwargs["tau"] = args.tau
    return ScoreConfig(**kwargs)


def _scored_pairs(args: argparse.Namespace):
    """Shared evaluate/edc front half: read, join, score, select metric."""
    records = read_landmark_records(args.input)
    labels = read_labels(args.labels)
    joined = join_samples(records, labels)
    metric = ScoreMetric(args.metric)
    scored = score_labeled_samples(joined, _config(args), metric)
    return scored, metric


def cmd_score(args: argparse.Namespace) -> int:
    records = read_landmark_records(args.input)
    cfg = _config(args)
    lines = [",".join(SCORE_COLUMNS)]
    for record in records:
        r = evaluate_pose(record.shoulder_observation(), cfg)
        lines.append(
            f"{record.image_id},{r.horizontal_score!r},{r.tilt_score!r},"
            f"{r.combined_score!r},{r.yaw_angle_deg!r},{r.roll_angle_deg!r},"
            f"{r.status.value}"
        )
    _write_atomic(Path(args.output), ("\n".join(lines) + "\n").encode("utf-8"))
    return EXIT_OK


def cmd_evaluate(args: argparse.Namespace) -> int:
    scored, metric = _scored_pairs(args)
    report = evaluate_samples(scored, args.tau, metric)
    _write_atomic(Path(args.output), report.to_json().encode("utf-8"))
    if args.charts_dir is not None:
        charts_dir = Path(args.charts_dir)
        charts_dir.mkdir(parents=True, exist_ok=True)
        pairs = [(s.label, s.score) for s in scored]
        _write_atomic(
            charts_dir / "scatter.svg",
            scatter_chart(pairs, metric_label=f"{metric.value} score"),
        )
        hist = error_histogram(pairs, bin_width=args.bin_width)
        _write_atomic(charts_dir / "error_histogram.svg", histogram_chart(hist))
    return EXIT_OK


def _oracle_path(output: Path) -> Path:
    return output.with_suffix(".oracle" + output.suffix)


def cmd_edc(args: argparse.Namespace) -> int:
    scored, metric = _scored_pairs(args)
    empirical = edc_curve(scored, args.tau, metric)
    oracle = oracle_curve(scored, args.tau, metric)
    output = Path(args.output)
    oracle_output = Path(args.oracle_output) if args.oracle_output else _oracle_path(output)

    def as_bytes(curve) -> bytes:
        import io

        buf = io.StringIO()
        write_curve(curve, buf)
        return buf.getvalue().encode("utf-8")

    _write_atomic(output, as_bytes(empirical))
    _write_atomic(oracle_output, as_bytes(oracle))
    if args.chart is not None:
        _write_atomic(Path(args.chart), edc_chart(empirical.points, oracle.points))
    return EXIT_OK


def cmd_synth(args: argparse.Namespace) -> int:
    samples = generate_synthetic_fixture(args.seed, args.count, args.noise_fraction)
    records = records_from_samples(samples)

    import io

    buf = io.StringIO()
    write_landmark_records(records, buf)
    _write_atomic(Path(args.output), buf.getvalue().encode("utf-8"))

    buf = io.StringIO()
    write_labels({s.image_id: s.manual_label for s in samples}, buf)
    _write_atomic(Path(args.labels), buf.getvalue().encode("utf-8"))
    return EXIT_OK


def _read_scores_csv(path) -> list[dict]:
    import csv

    with open(path, encoding="utf-8", newline="") as fp:
        reader = csv.reader(fp)
        header = next(reader, None)
        if header != list(SCORE_COLUMNS):
            raise ValidationError(
                f"score table must start with header {','.join(SCORE_COLUMNS)!r}"
            )
        statuses = {s.value for s in ScoreStatus}
        rows = []
        for row in reader:
            if not row:
                continue
            if len(row) != len(SCORE_COLUMNS):
                raise ValidationError(
                    f"line {reader.line_num}: expected {len(SCORE_COLUMNS)} fields, got {len(row)}"
                )
            try:
                parsed = {
                    "image_id": row[0],
                    "horizontal_score": float(row[1]),
                    "tilt_score": float(row[2]),
                    "combined_score": float(row[3]),
                    "yaw_deg": float(row[4]),
                    "roll_deg": float(row[5]),
                    "status": row[6],
                }
            except ValueError as exc:
                raise ValidationError(f"line {reader.line_num}: {exc}") from None
            if parsed["status"] not in statuses:
                raise ValidationError(
                    f"line {reader.line_num}: unknown status {row[6]!r}"
                )
            rows.append(parsed)
        return rows


def _render_pairs(args: argparse.Namespace) -> list[tuple[float, float]]:
    if args.labels is None:
        raise ValidationError(f"--labels is required for --kind {args.kind}")
    rows = _read_scores_csv(args.input)
    labels = read_labels(args.labels)
    column = _METRIC_COLUMN[ScoreMetric(args.metric)]
    pairs = [
        (labels[row["image_id"]], row[column])
        for row in sorted(rows, key=lambda r: r["image_id"])
        if row["image_id"] in labels
    ]
    if not pairs:
        raise ValidationError("no scored rows matched the label file")
    return pairs


def cmd_render(args: argparse.Namespace) -> int:
    if args.kind == "scatter":
        metric = ScoreMetric(args.metric)
        svg = scatter_chart(_render_pairs(args), metric_label=f"{metric.value} score")
    elif args.kind == "histogram":
        hist = error_histogram(_render_pairs(args), bin_width=args.bin_width)
        svg = histogram_chart(hist)
    else:
        empirical = read_curve_points(args.input)
        oracle = read_curve_points(args.oracle) if args.oracle else None
        svg = edc_chart(empirical, oracle, width=args.fig_width, height=args.fig_height)
    _write_atomic(Path(args.output), svg)
    return EXIT_OK


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--epsilon", type=float, default=None,
                        help="degenerate-geometry length guard (default 1e-6)")
    parser.add_argument("--min-visibility", type=float, default=None,
                        help="per-landmark confidence floor (default 0.5)")


def _add_eval_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--tau", type=float, default=0.8,
                        help="compliance threshold (default 0.8)")
    parser.add_argument("--metric", choices=[m.value for m in ScoreMetric],
                        default=ScoreMetric.HORIZONTAL.value,
                        help="score column compared against labels (default horizontal)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shoulderscore",
        description="Shoulder-pose compliance scoring and evaluation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("score", help="batch-score a landmark record file")
    p.add_argument("--input", required=True, help="landmark records (JSON Lines)")
    p.add_argument("--output", required=True, help="scored table (CSV)")
    _add_config_flags(p)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("evaluate", help="compare scores against manual labels")
    p.add_argument("--input", required=True, help="landmark records (JSON Lines)")
    p.add_argument("--labels", required=True, help="label file (CSV)")
    p.add_argument("--output", required=True, help="report (JSON)")
    p.add_argument("--charts-dir", default=None,
                   help="also render scatter.svg and error_histogram.svg here")
    p.add_argument("--bin-width", type=float, default=0.05,
                   help="error histogram bin width (default 0.05)")
    _add_config_flags(p)
    _add_eval_flags(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("edc", help="error-versus-discard curves (empirical + oracle)")
    p.add_argument("--input", required=True, help="landmark records (JSON Lines)")
    p.add_argument("--labels", required=True, help="label file (CSV)")
    p.add_argument("--output", required=True, help="empirical curve (CSV)")
    p.add_argument("--oracle-output", default=None,
                   help="oracle curve path (default: <output>.oracle.csv)")
    p.add_argument("--chart", default=None, help="also render the curve chart (SVG)")
    _add_config_flags(p)
    _add_eval_flags(p)
    p.set_defaults(func=cmd_edc)

    p = sub.add_parser("synth", help="write a deterministic synthetic fixture")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--count", type=int, default=121)
    p.add_argument("--noise-fraction", type=float, default=0.25,
                   help="fraction of samples given one grid step of rater noise")
    p.add_argument("--output", required=True, help="landmark records (JSON Lines)")
    p.add_argument("--labels", required=True, help="label file (CSV)")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("render", help="render charts from previously written files")
    p.add_argument("--kind", choices=["scatter", "histogram", "edc"], required=True)
    p.add_argument("--input", required=True,
                   help="scored table (scatter/histogram) or empirical curve (edc)")
    p.add_argument("--labels", default=None, help="label file (scatter/histogram)")
    p.add_argument("--oracle", default=None, help="oracle curve file (edc)")
    p.add_argument("--output", required=True, help="chart file (SVG)")
    p.add_argument("--bin-width", type=float, default=0.05)
    p.add_argument("--metric", choices=[m.value for m in ScoreMetric],
                   default=ScoreMetric.HORIZONTAL.value)
    p.add_argument("--fig-width", type=float, default=7.0, help="figure width, inches")
    p.add_argument("--fig-height", type=float, default=4.6, help="figure height, inches")
    p.set_defaults(func=cmd_render)

    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(
        level=logging.INFO, format="%(levelname)s: %(message)s", stream=sys.stderr
    )
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
