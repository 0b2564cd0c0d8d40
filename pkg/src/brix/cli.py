"""Command-line front end: rank, impute, evaluate, sweep, synth.

Every command is a batch run over files: inputs are the schema/data/labels
formats defined in :mod:`brix.ingest`, outputs are CSV/JSON files plus a
terse summary on stdout. Flag defaults reproduce the headline setting
(linear scheme, 10 donor neighbors, gamma 0.7). Exit codes: 0 success,
1 internal error, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .core import (
    ImputationConfig,
    LinearWeighting,
    SigmoidWeighting,
    WeightingScheme,
)
from .evaluate import (
    baseline1_accuracy,
    baseline2_featurize,
    cross_validate,
    featurize,
    granularity_labels,
    sweep,
)
from .ingest import (
    ParseError,
    default_schema,
    normalize,
    parse_data,
    parse_labels,
    parse_schema,
    render_data_csv,
    render_labels_csv,
)
from .synth import SynthConfig, generate
from . import core

USAGE_ERROR = 2
INTERNAL_ERROR = 1


def build_scheme(name: str, gamma: float) -> WeightingScheme:
    if name == "linear":
        return LinearWeighting()
    if name == "sigmoid":
        return SigmoidWeighting(gamma)
    raise ValueError(f"unknown scheme {name!r}")


def _read_bytes(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror or exc}") from exc


def _load_schema(path: str | None):
    if path is None:
        return default_schema()
    return parse_schema(_read_bytes(path))


def _load_dataset(args):
    schema = _load_schema(args.schema)
    raw = parse_data(_read_bytes(args.data), schema)
    if not raw.rows:
        raise ParseError("empty dataset")
    return schema, raw, normalize(raw)


def _float_cell(x: float) -> str:
    return repr(float(x))


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _write_json(path: Path, payload: dict) -> None:
    _write(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _imputed_csv(schema, imputed) -> str:
    lines = ["country," + ",".join(d.id for d in schema)]
    for ic in imputed:
        lines.append(ic.name + "," + ",".join(_float_cell(v) for v in ic.filled))
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------- commands

def cmd_rank(args) -> int:
    schema, _, dataset = _load_dataset(args)
    scheme = build_scheme(args.scheme, args.gamma)
    cfg = ImputationConfig(neighbors=args.neighbors, metric=args.metric)
    ranking = core.rank(dataset, scheme, cfg)

    out = Path(args.out)
    lines = ["rank,country,score,similarity,g,weight,n_missing"]
    for s in ranking:
        lines.append(
            f"{s.rank},{s.name},{_float_cell(s.score)},{_float_cell(s.similarity_f)},"
            f"{_float_cell(s.coverage.g)},{_float_cell(s.weight)},{s.coverage.n_missing}"
        )
    _write(out, "\n".join(lines) + "\n")
    print(f"ranked {len(ranking)} countries -> {out}")
    if args.emit_imputed:
        imputed = core.impute(dataset, cfg)
        imputed_path = out.with_suffix(".imputed.csv")
        _write(imputed_path, _imputed_csv(schema, imputed))
        print(f"imputed matrix -> {imputed_path}")
    top = ranking[: min(3, len(ranking))]
    print("top: " + ", ".join(f"{s.name} ({s.score:.4f})" for s in top))
    return 0


def cmd_impute(args) -> int:
    schema, _, dataset = _load_dataset(args)
    cfg = ImputationConfig(neighbors=args.neighbors, metric=args.metric)
    imputed = core.impute(dataset, cfg)
    n_cells = sum(ic.original.n_missing for ic in imputed)
    out = Path(args.out)
    _write(out, _imputed_csv(schema, imputed))
    print(f"imputed {n_cells} missing cells across {len(imputed)} countries -> {out}")
    return 0


def _evaluate_payload(args, dataset, labels) -> dict:
    cfg = ImputationConfig(neighbors=args.neighbors, metric=args.metric)
    linear_points = featurize(dataset, labels, LinearWeighting(), cfg)
    sigmoid_points = featurize(dataset, labels, SigmoidWeighting(args.gamma), cfg)
    base2_points = baseline2_featurize(dataset, labels, cfg)
    granularities = [3, 2] if args.granularity is None else [args.granularity]

    payload: dict = {
        "config": {
            "classifier": args.classifier,
            "folds": args.folds,
            "seed": args.seed,
            "neighbors": args.neighbors,
            "metric": args.metric,
            "gamma": args.gamma,
            "labeled_countries": len(linear_points),
        },
        "granularities": {},
    }
    for g in granularities:
        section = {
            "baseline1_accuracy": baseline1_accuracy(linear_points, g),
            "baseline2": cross_validate(
                base2_points, args.classifier, args.folds, g, args.seed
            ).to_dict(),
            "proposed_linear": cross_validate(
                linear_points, args.classifier, args.folds, g, args.seed
            ).to_dict(),
            "proposed_sigmoid": cross_validate(
                sigmoid_points, args.classifier, args.folds, g, args.seed
            ).to_dict(),
        }
        payload["granularities"][str(g)] = section
    return payload


def _evaluate_table(payload: dict) -> str:
    rows = []
    header = ("Features", "Linear scheme", "Sigmoid scheme")
    rows.append(header)
    for g in sorted(payload["granularities"], reverse=True):
        section = payload["granularities"][g]
        pct = lambda a: f"{100 * a:.1f}"  # noqa: E731
        rows.append((f"{g}-class", "", ""))
        b1 = pct(section["baseline1_accuracy"])
        b2 = pct(section["baseline2"]["mean_accuracy"])
        rows.append(("  Baseline 1", b1, b1))
        rows.append(("  Baseline 2", b2, b2))
        rows.append(
            (
                "  Proposed features",
                pct(section["proposed_linear"]["mean_accuracy"]),
                pct(section["proposed_sigmoid"]["mean_accuracy"]),
            )
        )
    widths = [max(len(r[i]) for r in rows) for i in range(3)]
    return "\n".join(
        "  ".join(cell.ljust(w) if i == 0 else cell.rjust(w) for i, (cell, w) in enumerate(zip(r, widths)))
        for r in rows
    )


def cmd_evaluate(args) -> int:
    _, _, dataset = _load_dataset(args)
    labels = parse_labels(_read_bytes(args.labels))
    payload = _evaluate_payload(args, dataset, labels)
    out = Path(args.out)
    _write_json(out, payload)
    table = _evaluate_table(payload)
    table_path = out.with_suffix(".txt")
    _write(table_path, table + "\n")
    print(f"evaluation report -> {out}")
    print(f"accuracy table -> {table_path}")
    print(table)
    return 0


def _parse_values(spec: str, axis: str) -> list:
    """Grid values from 'start:stop:step' or a comma-separated list."""
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise ValueError("range values must look like start:stop:step")
        start, stop, step = (float(p) for p in parts)
        if step <= 0 or stop < start:
            raise ValueError("range requires step > 0 and stop >= start")
        count = int(round((stop - start) / step)) + 1
        values = [round(start + i * step, 10) for i in range(count)]
    else:
        values = [float(p) for p in spec.split(",") if p.strip()]
    if not values:
        raise ValueError("no grid values given")
    if axis == "neighbors":
        ints = [int(v) for v in values]
        if any(abs(v - i) > 1e-9 or i < 1 for v, i in zip(values, ints)):
            raise ValueError("neighbors grid must be positive integers")
        return ints
    if any(not 0.0 < v < 1.0 for v in values):
        raise ValueError("gamma grid values must lie strictly inside (0, 1)")
    return values


def cmd_sweep(args) -> int:
    _, _, dataset = _load_dataset(args)
    labels = parse_labels(_read_bytes(args.labels))
    values = _parse_values(args.values, args.axis)

    if args.axis == "gamma":
        def builder(v):
            cfg = ImputationConfig(neighbors=args.neighbors, metric=args.metric)
            return featurize(dataset, labels, SigmoidWeighting(v), cfg)
    else:
        def builder(v):
            cfg = ImputationConfig(neighbors=int(v), metric=args.metric)
            return featurize(dataset, labels, LinearWeighting(), cfg)

    table = sweep(builder, args.axis, values, args.classifier, args.folds, args.seed)
    out = Path(args.out if args.out else f"sweep_{args.axis}.json")
    _write_json(out, table.to_dict())
    text = table.format_text()
    _write(out.with_suffix(".txt"), text + "\n")
    print(f"sweep table -> {out}")
    print(text)
    return 0


def cmd_synth(args) -> int:
    proportions = _parse_proportions(args.proportions)
    cfg = SynthConfig(
        n_countries=args.countries,
        class_proportions=proportions,
        n_indicators=args.indicators,
        missing_rate=args.missing_rate,
        class_separation=args.separation,
        seed=args.seed,
    )
    raw, labels = generate(cfg)
    out = Path(args.out)
    _write(out, render_data_csv(raw))
    labels_path = Path(args.labels) if args.labels else out.with_name(out.stem + "_labels.csv")
    _write(labels_path, render_labels_csv(labels))
    schema_path = out.with_name(out.stem + "_schema.json")
    entries = [
        {
            "id": d.id,
            "display_name": d.display_name,
            "pillar": d.pillar,
            "direction": d.direction,
            "min": d.bounds[0],
            "max": d.bounds[1],
        }
        for d in raw.schema
    ]
    _write(schema_path, json.dumps(entries, indent=2) + "\n")
    print(f"synthetic data -> {out}")
    print(f"labels -> {labels_path}")
    print(f"schema -> {schema_path}")
    return 0


def _parse_proportions(spec: str) -> tuple[float, float, float]:
    parts = [float(p) for p in spec.replace(":", ",").split(",")]
    if len(parts) != 3 or any(p < 0 for p in parts) or sum(parts) == 0:
        raise ValueError("proportions must be three non-negative numbers, e.g. 45:55:90")
    total = sum(parts)
    high, mid = parts[0] / total, parts[1] / total
    return (high, mid, 1.0 - high - mid)


# ------------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="brix",
        description="Blockchain readiness index engine",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_data_opts(p, labels_required=False):
        p.add_argument("--data", required=True, help="data CSV path")
        p.add_argument("--schema", help="schema JSON path (default: built-in catalog)")
        if labels_required:
            p.add_argument("--labels", required=True, help="labels CSV path")

    def add_model_opts(p):
        p.add_argument("--scheme", choices=("linear", "sigmoid"), default="linear")
        p.add_argument("--gamma", type=float, default=0.7, help="sigmoid center (0, 1)")
        add_impute_opts(p)

    def add_impute_opts(p):
        p.add_argument("--neighbors", type=int, default=10, help="donor count")
        p.add_argument("--metric", choices=("cosine", "euclidean"), default="cosine")

    def add_eval_opts(p):
        p.add_argument("--classifier", choices=("nb", "svm"), default="svm")
        p.add_argument("--folds", type=int, default=10)
        p.add_argument("--seed", type=int, default=0)

    p_rank = sub.add_parser("rank", help="rank countries by readiness score")
    add_data_opts(p_rank)
    add_model_opts(p_rank)
    p_rank.add_argument("--out", default="bri_ranking.csv")
    p_rank.add_argument("--emit-imputed", action="store_true")
    p_rank.set_defaults(func=cmd_rank)

    p_imp = sub.add_parser("impute", help="write the imputed normalized matrix")
    add_data_opts(p_imp)
    add_impute_opts(p_imp)
    p_imp.add_argument("--out", default="imputed.csv")
    p_imp.set_defaults(func=cmd_impute)

    p_eval = sub.add_parser("evaluate", help="cross-validated classification report")
    add_data_opts(p_eval, labels_required=True)
    add_model_opts(p_eval)
    add_eval_opts(p_eval)
    p_eval.add_argument("--granularity", type=int, choices=(2, 3), default=None,
                        help="restrict to one granularity (default: both)")
    p_eval.add_argument("--out", default="eval_report.json")
    p_eval.set_defaults(func=cmd_evaluate)

    p_sweep = sub.add_parser("sweep", help="accuracy over a gamma or neighbors grid")
    add_data_opts(p_sweep, labels_required=True)
    add_impute_opts(p_sweep)
    add_eval_opts(p_sweep)
    p_sweep.add_argument("--axis", choices=("gamma", "neighbors"), required=True)
    p_sweep.add_argument("--values", required=True,
                         help="grid: 'start:stop:step' or comma list")
    p_sweep.add_argument("--out", default=None)
    p_sweep.set_defaults(func=cmd_sweep)

    p_synth = sub.add_parser("synth", help="generate a labeled synthetic dataset")
    p_synth.add_argument("--countries", type=int, default=190)
    p_synth.add_argument("--indicators", type=int, default=16)
    p_synth.add_argument("--missing-rate", type=float, default=0.25)
    p_synth.add_argument("--separation", type=float, default=4.0)
    p_synth.add_argument("--proportions", default="45:55:90",
                         help="high:mid:low class mix")
    p_synth.add_argument("--seed", type=int, default=0)
    p_synth.add_argument("--out", default="synth_data.csv")
    p_synth.add_argument("--labels", default=None, help="labels output path")
    p_synth.set_defaults(func=cmd_synth)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc}", file=sys.stderr)
        return INTERNAL_ERROR


if __name__ == "__main__":
    sys.exit(main())
