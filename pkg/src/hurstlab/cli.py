"""The hurstlab command-line tool.

Subcommands: analyze (one file to a JSON report), corpus (a directory or
manifest to histograms and baselines), classify (tag a file against
baselines and/or control elements), synth (reference signal generation)
and plot (SVG rendering of reports and histograms).

Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric failure.
HURSTLAB_THREADS caps corpus parallelism; results are aggregated in
sorted-path order so they do not depend on scheduling.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path

import jsonschema

from . import __version__
from .corpus_stats import (
    baseline_from_document,
    baseline_to_document,
    build_baseline,
    histogram,
    histogram_to_csv,
)
from .dfa import DfaConfig, classify_correlation, fit_hurst, fluctuation_curve, fractal_dimension
from .emd import denoise
from .errors import DataError, HurstlabError, NumericError, UsageError
from .plotting import render_curve_svg, render_histogram_svg
from .screening import SeverityConfig, classify_emotion, controls_from_json, severity
from .signal_io import SignalSeries, read_text, read_wav, write_text, write_wav
from .synth import GeneratorKind, GeneratorSpec, generate

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3


class _Parser(argparse.ArgumentParser):
    """argparse variant that reports usage problems with exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"hurstlab: error: usage: {message}\n")


def load_schema(name: str) -> dict:
    ref = resources.files("hurstlab").joinpath("schemas", f"{name}.schema.json")
    return json.loads(ref.read_text(encoding="utf-8"))


def validate_document(doc, schema_name: str) -> None:
    try:
        jsonschema.validate(doc, load_schema(schema_name))
    except jsonschema.ValidationError as exc:
        raise DataError(f"document does not match the {schema_name} schema: {exc.message}") from exc


def _load_series(path: Path, use_emd: bool, drop_count: int) -> SignalSeries:
    if path.suffix.lower() == ".wav":
        series = read_wav(path)
    else:
        series = read_text(path)
    if use_emd:
        series = denoise(series, drop_count)
    return series


def _dfa_config(args) -> DfaConfig:
    try:
        return DfaConfig(
            s_min=args.smin,
            s_max=args.smax,
            poly_order=args.order,
            q=args.q,
            bidirectional=args.bidirectional,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _build_report(input_label: str, series: SignalSeries, config: DfaConfig,
                  use_emd: bool, drop_count: int) -> dict:
    curve = fluctuation_curve(series, config)
    estimate = fit_hurst(curve)
    return {
        "tool": "hurstlab",
        "version": __version__,
        "input": input_label,
        "preprocessing": {"emd": use_emd, "drop_count": drop_count if use_emd else 0},
        "config": {
            "s_min": config.s_min,
            "s_max": config.s_max,
            "poly_order": config.poly_order,
            "q": config.q,
            "bidirectional": config.bidirectional,
        },
        "estimate": {
            "h": estimate.h,
            "intercept": estimate.intercept,
            "r_squared": estimate.r_squared,
            "q": estimate.q,
            "scales_used": list(estimate.scales_used),
            "dropped_points": estimate.dropped_points,
        },
        "fractal_dimension": fractal_dimension(estimate.h),
        "correlation_class": classify_correlation(estimate.h).value,
        "curve": [{"s": s, "F": f} for s, f in curve.points],
        "n_samples": len(series),
        "sample_rate": series.sample_rate,
    }


def _emit(text: str, output: str | None) -> None:
    if output is None or output == "-":
        sys.stdout.write(text)
    else:
        Path(output).write_text(text, encoding="utf-8")


def cmd_analyze(args) -> int:
    config = _dfa_config(args)
    path = Path(args.input)
    series = _load_series(path, args.emd, args.drop)
    report = _build_report(args.input, series, config, args.emd, args.drop)
    _emit(json.dumps(report, indent=2) + "\n", args.output)
    if args.curve_csv:
        with open(args.curve_csv, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["s", "F"])
            for point in report["curve"]:
                writer.writerow([point["s"], repr(point["F"])])
    return EXIT_OK


def _corpus_entries(args) -> list[tuple[Path, str, str]]:
    root = Path(args.input)
    if root.is_dir():
        files = sorted(
            p for p in root.iterdir()
            if p.is_file() and p.suffix.lower() in (".wav", ".txt")
        )
        return [(p, args.emotion, args.language) for p in files]
    if root.is_file():
        entries: list[tuple[Path, str, str]] = []
        with open(root, encoding="utf-8") as fh:
            for lineno, row in enumerate(csv.reader(fh), start=1):
                if not row or all(not cell.strip() for cell in row):
                    continue
                cells = [cell.strip() for cell in row]
                if lineno == 1 and cells[0].lower() == "path":
                    continue
                if len(cells) < 3:
                    raise DataError(
                        f"{root}: manifest line {lineno} needs path,emotion,language"
                    )
                entries.append((root.parent / cells[0], cells[1], cells[2]))
        entries.sort(key=lambda entry: str(entry[0]))
        return entries
    raise FileNotFoundError(f"no such file or directory: {root}")


def _worker_count(n_tasks: int) -> int:
    cap = os.environ.get("HURSTLAB_THREADS")
    workers = min(n_tasks, os.cpu_count() or 1)
    if cap is not None:
        try:
            workers = min(workers, max(1, int(cap)))
        except ValueError as exc:
            raise UsageError(f"HURSTLAB_THREADS must be an integer, got {cap!r}") from exc
    return max(1, workers)


def cmd_corpus(args) -> int:
    config = _dfa_config(args)
    entries = _corpus_entries(args)
    if not entries:
        raise DataError(f"no analyzable files (.wav/.txt) under {args.input}")
    outdir = Path(args.outdir)
    (outdir / "reports").mkdir(parents=True, exist_ok=True)

    def analyze(entry):
        path, emotion, language = entry
        series = _load_series(path, args.emd, args.drop)
        report = _build_report(str(path), series, config, args.emd, args.drop)
        return report, emotion, language

    results: dict[str, tuple[dict, str, str]] = {}
    failures: list[tuple[str, str]] = []
    with ThreadPoolExecutor(max_workers=_worker_count(len(entries))) as pool:
        futures = {pool.submit(analyze, entry): entry for entry in entries}
        for future, entry in futures.items():
            key = str(entry[0])
            try:
                results[key] = future.result()
            except (HurstlabError, OSError) as exc:
                failures.append((key, str(exc)))

    for key, message in sorted(failures):
        print(f"hurstlab: skipping {key}: {message}", file=sys.stderr)
    if len(results) < 2:
        raise DataError(
            f"only {len(results)} of {len(entries)} files analyzable; need at least 2"
        )

    created_at = datetime.now(timezone.utc).isoformat()
    groups: dict[tuple[str, str], list[tuple[str, dict]]] = {}
    for key in sorted(results):
        report, emotion, language = results[key]
        stem = Path(key).stem
        (outdir / "reports" / f"{stem}.json").write_text(
            json.dumps(report, indent=2) + "\n", encoding="utf-8"
        )
        groups.setdefault((emotion, language), []).append((key, report))

    for (emotion, language), members in sorted(groups.items()):
        h_values = [report["estimate"]["h"] for _, report in members]
        if len(h_values) < 2:
            print(
                f"hurstlab: skipping baseline for {emotion}/{language}: "
                f"only {len(h_values)} usable file(s)",
                file=sys.stderr,
            )
            continue
        hist = histogram(h_values, args.bin_width)
        baseline = build_baseline(h_values, emotion, language, args.bin_width)
        suffix = f"{emotion}_{language}"
        histogram_to_csv(hist, outdir / f"histogram_{suffix}.csv")
        (outdir / f"baseline_{suffix}.json").write_text(
            json.dumps(baseline_to_document(baseline, created_at), indent=2) + "\n",
            encoding="utf-8",
        )
        print(
            f"{emotion}/{language}: n={baseline.n} modal_h={baseline.modal_h:.4f} "
            f"range=[{baseline.h_range[0]:.4f}, {baseline.h_range[1]:.4f}]"
        )
    return EXIT_OK


def cmd_classify(args) -> int:
    if not args.baselines and not args.controls:
        raise UsageError("classify needs --baselines and/or --controls")
    config = _dfa_config(args)
    series = _load_series(Path(args.input), args.emd, args.drop)
    estimate = fit_hurst(fluctuation_curve(series, config))

    result = {
        "tool": "hurstlab",
        "version": __version__,
        "input": args.input,
        "h": estimate.h,
        "q": estimate.q,
        "correlation_class": classify_correlation(estimate.h).value,
    }
    if args.baselines:
        baselines = []
        for ref in args.baselines:
            doc = json.loads(Path(ref).read_text(encoding="utf-8"))
            validate_document(doc, "baseline")
            baselines.append(baseline_from_document(doc))
        label = classify_emotion(estimate.h, baselines)
        result["emotion"] = label if label is not None else "Unknown"
    if args.controls:
        doc = json.loads(Path(args.controls).read_text(encoding="utf-8"))
        validate_document(doc, "controls")
        normal, diseased = controls_from_json(json.dumps(doc))
        cfg = SeverityConfig(
            proneness_multiplier=args.proneness_multiplier,
            approach_fraction=args.approach_fraction,
        )
        level = severity(estimate.h, normal, diseased, cfg)
        result["severity"] = level.name.lower()
    _emit(json.dumps(result, indent=2) + "\n", args.output)
    return EXIT_OK


def cmd_synth(args) -> int:
    kind = GeneratorKind(args.kind)
    if args.n < 1:
        raise UsageError(f"--n must be >= 1, got {args.n}")
    if kind is GeneratorKind.FGN:
        if args.hurst is None:
            raise UsageError("synth fgn requires --hurst")
        if not 0.0 < args.hurst < 1.0:
            raise UsageError(f"--hurst must lie in (0, 1), got {args.hurst}")
        if args.n < 16:
            raise UsageError(f"fgn needs --n >= 16, got {args.n}")
    if kind is GeneratorKind.SINE:
        if args.freq is None or args.rate is None:
            raise UsageError("synth sine requires --freq and --rate")
        if args.rate <= 0 or not 0.0 < args.freq < args.rate / 2.0:
            raise UsageError(
                f"--freq must satisfy 0 < freq < rate/2; got freq={args.freq} rate={args.rate}"
            )
    spec = GeneratorSpec(
        kind=kind, n=args.n, seed=args.seed, hurst=args.hurst,
        freq=args.freq, rate=args.rate, amplitude=args.amplitude,
    )
    series = generate(spec)
    if args.format == "wav":
        if args.output is None or args.output == "-":
            raise UsageError("wav output requires --output FILE")
        rate = args.rate if args.rate else 16000
        write_wav(series, args.output, rate)
    elif args.output is None or args.output == "-":
        sys.stdout.write("\n".join(repr(float(v)) for v in series.samples) + "\n")
    else:
        write_text(series, args.output)
    return EXIT_OK


def _plot_report(doc: dict) -> str:
    validate_document(doc, "report")
    points = [(point["s"], point["F"]) for point in doc["curve"]]
    estimate = doc["estimate"]
    title = f"h({estimate['q']:g}) = {estimate['h']:.4f}, R2 = {estimate['r_squared']:.4f}"
    return render_curve_svg(points, estimate["h"], estimate["intercept"], title)


def _plot_histogram_csv(path: Path) -> str:
    centers: list[float] = []
    counts: list[int] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or (lineno == 1 and row[0] == "bin_center"):
                continue
            try:
                centers.append(float(row[0]))
                counts.append(int(row[1]))
            except (IndexError, ValueError) as exc:
                raise DataError(f"{path}: bad histogram row {lineno}: {row}") from exc
    if not centers:
        raise DataError(f"{path}: no histogram rows")
    width = centers[1] - centers[0] if len(centers) > 1 else 0.05
    return render_histogram_svg(centers, counts, width)


def cmd_plot(args) -> int:
    path = Path(args.input)
    if not path.is_file():
        raise FileNotFoundError(f"no such file: {path}")
    if path.suffix.lower() == ".json":
        svg = _plot_report(json.loads(path.read_text(encoding="utf-8")))
    elif path.suffix.lower() == ".csv":
        svg = _plot_histogram_csv(path)
    else:
        raise DataError(f"cannot plot {path}: expected a .json report or .csv histogram")
    output = args.output or str(path.with_suffix(".svg"))
    Path(output).write_text(svg, encoding="utf-8")
    return EXIT_OK


def _add_dfa_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--emd", action="store_true",
                        help="denoise with empirical mode decomposition first")
    parser.add_argument("--drop", type=int, default=1, metavar="N",
                        help="number of leading IMFs to drop with --emd (default 1)")
    parser.add_argument("--q", type=float, default=2.0,
                        help="fluctuation moment order, nonzero (default 2)")
    parser.add_argument("--smin", type=int, default=16, help="smallest scale (default 16)")
    parser.add_argument("--smax", type=int, default=1024, help="largest scale (default 1024)")
    parser.add_argument("--order", type=int, default=1, metavar="M",
                        help="detrending polynomial order (default 1)")
    parser.add_argument("--bidirectional", action="store_true",
                        help="also take segments from the series tail (2*N_s segments)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hurstlab",
                     description="Hurst exponent analysis of audio and time series")
    parser.add_argument("--version", action="version", version=f"hurstlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_analyze = sub.add_parser("analyze", help="estimate h for one .wav or text file")
    p_analyze.add_argument("input", help=".wav file, or text with one amplitude per line")
    p_analyze.add_argument("-o", "--output", help="write the JSON report here (default stdout)")
    p_analyze.add_argument("--curve-csv", metavar="FILE", help="also export the curve as s,F rows")
    _add_dfa_flags(p_analyze)
    p_analyze.set_defaults(func=cmd_analyze)

    p_corpus = sub.add_parser("corpus", help="analyze a directory or manifest of files")
    p_corpus.add_argument("input", help="directory of .wav/.txt files, or a path,emotion,language manifest")
    p_corpus.add_argument("--outdir", default="hurstlab-corpus", help="output directory")
    p_corpus.add_argument("--emotion", default="unknown", help="label for directory input")
    p_corpus.add_argument("--language", default="unknown", help="label for directory input")
    p_corpus.add_argument("--bin-width", type=float, default=None,
                          help="histogram bin width (default: Freedman-Diaconis)")
    _add_dfa_flags(p_corpus)
    p_corpus.set_defaults(func=cmd_corpus)

    p_classify = sub.add_parser("classify", help="tag a file against baselines/controls")
    p_classify.add_argument("input")
    p_classify.add_argument("--baselines", nargs="+", metavar="JSON",
                            help="one or more baseline documents")
    p_classify.add_argument("--controls", metavar="JSON", help="control-elements document")
    p_classify.add_argument("--proneness-multiplier", type=float, default=1.0)
    p_classify.add_argument("--approach-fraction", type=float, default=0.3)
    p_classify.add_argument("-o", "--output", help="write the result here (default stdout)")
    _add_dfa_flags(p_classify)
    p_classify.set_defaults(func=cmd_classify)

    p_synth = sub.add_parser("synth", help="generate a reference signal")
    p_synth.add_argument("kind", choices=[k.value for k in GeneratorKind])
    p_synth.add_argument("--n", type=int, required=True, help="number of samples")
    p_synth.add_argument("--seed", type=int, default=0)
    p_synth.add_argument("--hurst", type=float, help="target Hurst exponent for fgn")
    p_synth.add_argument("--freq", type=float, help="sine frequency in Hz")
    p_synth.add_argument("--rate", type=int, help="sample rate in Hz (sine, wav output)")
    p_synth.add_argument("--amplitude", type=float, default=1.0)
    p_synth.add_argument("--format", choices=["text", "wav"], default="text")
    p_synth.add_argument("-o", "--output", help="output file (default stdout for text)")
    p_synth.set_defaults(func=cmd_synth)

    p_plot = sub.add_parser("plot", help="render a report or histogram as SVG")
    p_plot.add_argument("input", help="analysis report .json or histogram .csv")
    p_plot.add_argument("-o", "--output", help="output .svg (default: input with .svg suffix)")
    p_plot.set_defaults(func=cmd_plot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        _report_error("usage", exc)
        return EXIT_USAGE
    except (DataError, FileNotFoundError, IsADirectoryError, PermissionError,
            json.JSONDecodeError) as exc:
        _report_error("data", exc)
        return EXIT_DATA
    except (NumericError, HurstlabError, ValueError, ArithmeticError) as exc:
        _report_error("numeric", exc)
        return EXIT_NUMERIC


def _report_error(category: str, exc: Exception) -> None:
    message = " ".join(str(exc).split())
    print(f"hurstlab: error: {category}: {message}", file=sys.stderr)


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
