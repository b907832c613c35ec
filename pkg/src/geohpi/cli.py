"""Command-line entry point: ingest, index, compare, synth.

Every run computes fully in memory before any file is written (so a
failed run leaves no partial outputs) and drops one manifest recording
the config, input digests, outputs and stage timings.

Exit codes: 0 success, 1 usage, 2 data error, 3 internal.
"""

from __future__ import annotations

import argparse
import csv
import datetime
import hashlib
import json
import sys
import time
from dataclasses import asdict
from pathlib import Path

from . import __version__
from .index_engine import (
    ChainUndefinedError,
    IndexConfig,
    VotingUndefinedError,
    compute_index,
)
from .ingestion import (
    CsvSchema,
    SchemaError,
    filter_listings,
    parse_listings,
    write_listings_csv,
)
from .metrics import UndefinedMetricError, series_metrics
from .plotting import render_line_chart
from .synthgen import SynthConfig, generate, write_truth_csv


class _UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); we reserve 2 for data
        raise _UsageError(message)


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _write_manifest(
    out_dir: Path,
    command: str,
    config: dict,
    inputs: list[Path],
    outputs: list[str],
    timings: dict[str, float],
    extra: dict | None = None,
) -> None:
    manifest = {
        "tool": f"geohpi {__version__}",
        "command": command,
        "created_utc": datetime.datetime.now(datetime.timezone.utc).isoformat(
            timespec="seconds"
        ),
        "config": config,
        "inputs": [{"path": str(p), "sha256": _sha256(p)} for p in inputs],
        "outputs": outputs,
        "timings_s": {k: round(v, 6) for k, v in timings.items()},
    }
    if extra:
        manifest.update(extra)
    with open(out_dir / f"{command}_manifest.json", "w", encoding="utf-8") as handle:
        json.dump(manifest, handle, indent=2)
        handle.write("\n")


def _out_dir(args) -> Path:
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_ingest(args) -> None:
    schema = CsvSchema.from_spec(args.schema) if args.schema else CsvSchema()
    input_path = Path(args.input)
    start = time.perf_counter()
    records, errors = parse_listings(input_path, schema)
    t_parse = time.perf_counter() - start
    start = time.perf_counter()
    kept, report = filter_listings(records)
    t_filter = time.perf_counter() - start
    if errors:
        print(f"warning: {len(errors)} malformed row(s) skipped", file=sys.stderr)

    out = _out_dir(args)
    write_listings_csv(kept, out / "filtered.csv")
    with open(out / "filtration_report.json", "w", encoding="utf-8") as handle:
        json.dump(report.to_dict(), handle, indent=2)
        handle.write("\n")
    outputs = ["filtered.csv", "filtration_report.json"]
    if errors:
        with open(out / "parse_errors.json", "w", encoding="utf-8") as handle:
            json.dump([{"row": e.row, "message": e.message} for e in errors], handle,
                      indent=2)
            handle.write("\n")
        outputs.append("parse_errors.json")
    _write_manifest(
        out,
        "ingest",
        {"schema": asdict(schema)},
        [input_path],
        outputs,
        {"parse": t_parse, "filter": t_filter},
        extra={"parse_errors": len(errors)},
    )
    print(f"kept {report.surviving}/{report.total} records "
          f"({report.surviving_fraction:.1%})")


_CONFIG_PARSERS = {
    "votes_per_record": int,
    "removal_fraction": float,
    "factor_bedrooms": lambda s: s.lower() in ("1", "true", "yes", "on"),
    "min_ratios_for_chain": int,
    "geohash_precision": int,
    "scb_min_population": int,
    "chain_mode": str,
}


def _read_config_file(path: str) -> dict:
    values: dict = {}
    with open(path, "r", encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise _UsageError(f"{path}:{line_no}: expected key = value")
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in _CONFIG_PARSERS:
                raise _UsageError(f"{path}:{line_no}: unknown config key {key!r}")
            values[key] = _CONFIG_PARSERS[key](value)
    return values


def _index_config(args) -> IndexConfig:
    values = _read_config_file(args.config) if args.config else {}
    overrides = {
        "geohash_precision": args.precision,
        "factor_bedrooms": True if args.factor_bedrooms else None,
        "votes_per_record": args.votes_k,
        "removal_fraction": args.removal_fraction,
        "min_ratios_for_chain": args.min_ratios,
        "scb_min_population": args.scb_min_population,
        "chain_mode": args.chain_mode,
    }
    for key, value in overrides.items():
        if value is not None:
            values[key] = value
    try:
        return IndexConfig(**values)
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc


def cmd_index(args) -> None:
    config = _index_config(args)
    schema = CsvSchema.from_spec(args.schema) if args.schema else CsvSchema()
    input_path = Path(args.input)
    start = time.perf_counter()
    raw, errors = parse_listings(input_path, schema)
    kept, report = filter_listings(raw)
    t_parse = time.perf_counter() - start
    if errors:
        print(f"warning: {len(errors)} malformed row(s) skipped", file=sys.stderr)
    rejected = report.total - report.surviving
    if rejected:
        print(f"warning: input was not pre-filtered; {rejected} record(s) dropped",
              file=sys.stderr)

    result = compute_index(kept, config)
    stats = series_metrics(result.series.values)

    out = _out_dir(args)
    series = result.series
    with open(out / "index_series.csv", "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["month", "value", "diff", "flagged"])
        for i, month in enumerate(series.months):
            diff = repr(series.diffs[i - 1]) if i > 0 else ""
            writer.writerow([month, repr(series.values[i]), diff,
                             str(series.flagged[i]).lower()])
    with open(out / "ratio_matrix.csv", "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["base_month", "prior_month", "median_ratio", "support"])
        for base, prior, ratio, support in result.matrix.rows():
            writer.writerow([base, prior, repr(ratio), support])
    with open(out / "metrics.json", "w", encoding="utf-8") as handle:
        json.dump(stats.to_dict(), handle, indent=2)
        handle.write("\n")

    timings = {"parse": t_parse, **result.timings}
    _write_manifest(
        out,
        "index",
        asdict(config),
        [input_path],
        ["index_series.csv", "ratio_matrix.csv", "metrics.json"],
        timings,
        extra={
            "records": {
                "parsed": report.total,
                "filtered": report.surviving,
                "after_voting": result.voting.survivors,
            }
        },
    )
    print(f"index over {len(series.months)} months, "
          f"msm={stats.msm:.4f} sd_diffs={stats.std_dev_diffs:.4f}")


def _read_series_csv(path: Path) -> tuple[list[str], list[float]]:
    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None or not {"month", "value"} <= set(reader.fieldnames):
            raise DataError(f"{path}: expected columns month,value")
        months: list[str] = []
        values: list[float] = []
        for row in reader:
            months.append(row["month"])
            try:
                values.append(float(row["value"]))
            except ValueError as exc:
                raise DataError(f"{path}: non-numeric value {row['value']!r}") from exc
    if not months:
        raise DataError(f"{path}: series is empty")
    return months, values


def cmd_compare(args) -> None:
    paths = [Path(p) for p in args.series]
    names = args.names.split(",") if args.names else [p.stem for p in paths]
    if len(names) != len(paths):
        raise _UsageError("--names must list one name per series")
    loaded = [_read_series_csv(p) for p in paths]
    common = set(loaded[0][0])
    for months, _ in loaded[1:]:
        common &= set(months)
    if not common:
        raise DataError("series share no months")
    aligned_months = sorted(common)
    if any(len(months) != len(aligned_months) for months, _ in loaded):
        print(f"warning: aligned on {len(aligned_months)} shared month(s)",
              file=sys.stderr)
    aligned: list[tuple[str, list[float]]] = []
    for name, (months, values) in zip(names, loaded):
        lookup = dict(zip(months, values))
        aligned.append((name, [lookup[m] for m in aligned_months]))

    stats = [(name, series_metrics(values)) for name, values in aligned]
    header = f"{'series':<28} {'st_dev':>10} {'st_dev_diffs':>14} {'msm':>10}"
    print(header)
    for name, m in stats:
        print(f"{name:<28} {m.std_dev:>10.3f} {m.std_dev_diffs:>14.3f} {m.msm:>10.3f}")

    out = _out_dir(args)
    with open(out / "comparison_table.csv", "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["series", "std_dev", "std_dev_diffs", "msm", "spike_count"])
        for name, m in stats:
            writer.writerow([name, repr(m.std_dev), repr(m.std_dev_diffs),
                             repr(m.msm), m.spike_count])
    with open(out / "comparison_long.csv", "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["series_name", "month", "value"])
        for name, values in aligned:
            for month, value in zip(aligned_months, values):
                writer.writerow([name, month, repr(value)])
    outputs = ["comparison_table.csv", "comparison_long.csv"]
    if args.svg:
        chart = render_line_chart(aligned_months, aligned)
        with open(out / "chart.svg", "w", encoding="utf-8") as handle:
            handle.write(chart)
        outputs.append("chart.svg")
    _write_manifest(out, "compare", {"names": names}, paths, outputs, {})


def _parse_mix(text: str) -> tuple[tuple[float, ...], ...]:
    rows = []
    for row_text in text.split(";"):
        rows.append(tuple(float(w) for w in row_text.split(",")))
    return tuple(rows)


def cmd_synth(args) -> None:
    kwargs = dict(
        months=args.months,
        records_per_month=args.records_per_month,
        drift=args.drift,
        noise=args.noise,
        cluster_count=args.clusters,
        base_price=args.base_price,
        seed=args.seed,
    )
    if args.mix:
        kwargs["bedroom_mix"] = _parse_mix(args.mix)
    if args.premiums:
        kwargs["bedroom_premium"] = tuple(float(p) for p in args.premiums.split(","))
    try:
        config = SynthConfig(**kwargs)
    except ValueError as exc:
        raise DataError(str(exc)) from exc
    start = time.perf_counter()
    records, truth = generate(config)
    t_generate = time.perf_counter() - start
    out = _out_dir(args)
    write_listings_csv(records, out / "listings.csv")
    write_truth_csv(truth, out / "truth.csv", config.start_month)
    _write_manifest(
        out,
        "synth",
        asdict(config),
        [],
        ["listings.csv", "truth.csv"],
        {"generate": t_generate},
    )
    print(f"wrote {len(records)} listings over {config.months} months")


def build_parser() -> _Parser:
    parser = _Parser(prog="geohpi", description=__doc__)
    parser.add_argument("--version", action="version", version=f"geohpi {__version__}")
    sub = parser.add_subparsers(dest="command")

    p_ingest = sub.add_parser("ingest", help="parse and filter a listings CSV")
    p_ingest.add_argument("--input", required=True)
    p_ingest.add_argument("--output-dir", required=True)
    p_ingest.add_argument("--schema", help="field=column overrides, comma separated")
    p_ingest.set_defaults(func=cmd_ingest)

    p_index = sub.add_parser("index", help="compute the price index from filtered CSV")
    p_index.add_argument("--input", required=True)
    p_index.add_argument("--output-dir", required=True)
    p_index.add_argument("--schema")
    p_index.add_argument("--config", help="flat key = value config file")
    p_index.add_argument("--precision", type=int)
    p_index.add_argument("--factor-bedrooms", action="store_true", default=None)
    p_index.add_argument("--votes-k", type=int)
    p_index.add_argument("--removal-fraction", type=float)
    p_index.add_argument("--min-ratios", type=int)
    p_index.add_argument("--scb-min-population", type=int)
    p_index.add_argument("--chain-mode", choices=["additive", "geometric"])
    p_index.set_defaults(func=cmd_index)

    p_compare = sub.add_parser("compare", help="compare one or more index series")
    p_compare.add_argument("series", nargs="+")
    p_compare.add_argument("--output-dir", required=True)
    p_compare.add_argument("--names", help="comma-separated series names")
    p_compare.add_argument("--svg", action="store_true")
    p_compare.set_defaults(func=cmd_compare)

    p_synth = sub.add_parser("synth", help="generate a synthetic listings dataset")
    p_synth.add_argument("--output-dir", required=True)
    p_synth.add_argument("--months", type=int, default=24)
    p_synth.add_argument("--records-per-month", type=int, default=200)
    p_synth.add_argument("--drift", type=float, default=0.0)
    p_synth.add_argument("--noise", type=float, default=0.0)
    p_synth.add_argument("--clusters", type=int, default=5)
    p_synth.add_argument("--base-price", type=float, default=250_000.0)
    p_synth.add_argument("--mix", help="semicolon-separated rows of six weights")
    p_synth.add_argument("--premiums", help="six comma-separated multipliers")
    p_synth.add_argument("--seed", type=int, default=0)
    p_synth.set_defaults(func=cmd_synth)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    if getattr(args, "func", None) is None:
        parser.print_help(sys.stderr)
        return 1
    try:
        args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (
        DataError,
        SchemaError,
        UndefinedMetricError,
        VotingUndefinedError,
        ChainUndefinedError,
        FileNotFoundError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc}", file=sys.stderr)
        return 3
    return 0


def entrypoint() -> None:
    sys.exit(main(sys.argv[1:]))


if __name__ == "__main__":
    entrypoint()
