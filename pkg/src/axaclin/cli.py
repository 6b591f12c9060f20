"""Command-line interface: the full pipeline as deterministic file-based steps.

Exit codes: 0 success, 2 config/contract, 3 data, 4 training, 5 capacity,
6 verification, 1 anything else.
"""

from __future__ import annotations

import argparse
import sys
import traceback
from pathlib import Path

from . import __version__
from .audit import SEMANTICS, audit, relevance_table
from .core import POSITIVE, parse_conjunction
from .errors import AxaclinError, ConfigError
from .explain import (
    axp_containing,
    axp_deletion,
    axp_enumerate_all,
    axp_under_constraint,
    verify_explanation,
)
from .ingest import (
    PRESETS,
    config_hash,
    load_and_binarize,
    load_config,
    load_preset,
    save_dataset_csv,
)
from .mine import MiningConfig, critical_case_rows, mine_critical_properties
from .models import (
    MODEL_KINDS,
    default_config,
    load_model,
    predict,
    save_model,
    train,
)
from .report import (
    audit_report_doc,
    mined_rules_doc,
    pie_svg,
    relevance_bar_svg,
    relevance_csv_text,
    run_manifest,
    write_json,
)


def _dataset_args(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--dataset", choices=PRESETS, help="shipped dataset preset")
    g.add_argument("--config", help="path to a dataset config JSON")
    p.add_argument("--csv", help="override the CSV path from the config")


def _common_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0, help="training seed")
    p.add_argument(
        "--oracle",
        choices=("auto", "linear", "exhaustive"),
        default="auto",
        help="entailment oracle",
    )
    p.add_argument(
        "--semantics",
        choices=SEMANTICS + ("all",),
        default="fast",
        help="audit semantics",
    )
    p.add_argument(
        "--order",
        default="ascending",
        help="deletion scan order: ascending, descending, or comma-separated features",
    )
    p.add_argument("--out-dir", default="out", help="directory for report files")


def _load_dataset(args):
    if args.dataset:
        cfg = load_preset(args.dataset, csv_path=args.csv)
    else:
        cfg = load_config(args.config)
        if args.csv:
            import dataclasses

            cfg = dataclasses.replace(cfg, csv_path=args.csv)
    ds, report = load_and_binarize(cfg)
    return cfg, ds, report


def _parse_order(text: str, space) -> list[int] | None:
    if text == "ascending":
        return None
    if text == "descending":
        return list(range(space.n - 1, -1, -1))
    order = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        if tok.isdigit():
            order.append(int(tok))
        else:
            order.append(space.index_of(tok))
    if sorted(order) != list(range(space.n)):
        raise ConfigError(
            f"--order must be a permutation of all {space.n} features"
        )
    return order


def _out_dir(args) -> Path:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _semantics_list(value: str) -> list[str]:
    return list(SEMANTICS) if value == "all" else [value]


def _train_kinds(ds, kinds, seed):
    models = {}
    for kind in kinds:
        models[kind] = train(ds, kind, default_config(kind, seed=seed))
    return models


def cmd_ingest(args) -> int:
    cfg, ds, report = _load_dataset(args)
    out = _out_dir(args)
    bits_path = out / f"{cfg.name}_bits.csv"
    save_dataset_csv(ds, bits_path)
    report = {
        "manifest": run_manifest(config_hash(cfg), [args.seed], [], []),
        **report,
    }
    report_path = out / f"{cfg.name}_ingest.json"
    write_json(report_path, report)
    pos, neg = ds.label_counts()
    print(f"{cfg.name}: {len(ds)} rows ({pos} positive, {neg} negative)")
    for f in report["features"]:
        print(f"  {f['name']}: {f['semantics']}")
    if report["rows_dropped"]:
        print(f"  dropped {report['rows_dropped']} rows: {report['drop_reasons']}")
    print(f"wrote {bits_path} and {report_path}")
    return 0


def cmd_train(args) -> int:
    cfg, ds, _ = _load_dataset(args)
    kinds = MODEL_KINDS if args.model_kind == "all" else (args.model_kind,)
    out = _out_dir(args)
    for kind, model in _train_kinds(ds, kinds, args.seed).items():
        path = out / f"{cfg.name}_{kind}.model.json"
        save_model(model, path)
        m = model.metrics
        print(
            f"{kind}: accuracy {m['accuracy']:.4f} f1 {m['f1']:.4f} "
            f"({m['evaluated_on']}) -> {path}"
        )
    return 0


def cmd_explain(args) -> int:
    cfg, ds, _ = _load_dataset(args)
    model = load_model(args.model)
    if not 0 <= args.row < len(ds):
        raise ConfigError(f"--row must be in [0, {len(ds) - 1}]")
    x = ds.rows[args.row][0]
    d = predict(model, x)
    print(f"row {args.row}: decision {d!r}")
    space = ds.space

    if args.enumerate:
        for e in axp_enumerate_all(model, x, oracle=args.oracle):
            print(f"  axp: {e.literals.render(space)}")
        return 0

    if args.constraint:
        cr = parse_conjunction(space, args.constraint)
        e = axp_under_constraint(model, x, cr, d, oracle=args.oracle)
        if e is None:
            print(f"  no explanation avoids {cr.render(space)}")
            return 0
    elif args.containing:
        cr = parse_conjunction(space, args.containing)
        e = axp_containing(model, x, cr, oracle=args.oracle)
        if e is None:
            print(f"  no minimal explanation contains {cr.render(space)}")
            return 0
    else:
        order = _parse_order(args.order, space)
        e = axp_deletion(model, x, order=order, oracle=args.oracle)

    print(f"  explanation ({e.method}): {e.literals.render(space)}")
    if args.verify:
        verify_explanation(model, e, oracle=args.oracle)
        print("  verified: sound and subset-minimal")
    return 0


def cmd_mine(args) -> int:
    cfg, ds, report = _load_dataset(args)
    mining = MiningConfig(
        max_literals=args.max_literals, min_positive_coverage=args.min_coverage
    )
    rules = mine_critical_properties(ds, mining)
    out = _out_dir(args)
    manifest = run_manifest(config_hash(cfg), [args.seed], [], [])
    path = out / f"{cfg.name}_rules.json"
    write_json(path, mined_rules_doc(rules, ds.space, manifest, mining))
    if not rules:
        print(f"{cfg.name}: no critical properties under {mining}")
        return 0
    print(f"{cfg.name}: {len(rules)} critical properties")
    for r in rules:
        flag = "  [low coverage]" if r.low_coverage else ""
        print(
            f"  {r.conjunction.render(ds.space)}  "
            f"(positive {r.positive_coverage}, negative {r.negative_coverage}){flag}"
        )
    print(f"wrote {path}")
    return 0


def _resolve_cr(args, ds):
    if args.cr:
        return parse_conjunction(ds.space, args.cr)
    mining = MiningConfig(
        max_literals=min(getattr(args, "max_literals", 5), ds.n),
        min_positive_coverage=getattr(args, "min_coverage", 10),
    )
    rules = mine_critical_properties(ds, mining)
    if not rules:
        raise ConfigError(
            "no critical property could be mined; pass one explicitly via --cr"
        )
    return rules[0].conjunction


def cmd_audit(args) -> int:
    cfg, ds, _ = _load_dataset(args)
    cr = _resolve_cr(args, ds)
    rows = critical_case_rows(ds, cr)
    cases = [ds.rows[i][0] for i in rows]
    print(f"critical property: {cr.render(ds.space)} ({len(cases)} cases)")

    if args.model:
        models = {Path(m).stem: load_model(m) for m in args.model}
    else:
        models = _train_kinds(ds, MODEL_KINDS, args.seed)

    out = _out_dir(args)
    semantics = _semantics_list(args.semantics)
    manifest = run_manifest(config_hash(cfg), [args.seed], semantics, sorted(models))
    tables = []
    for kind, model in models.items():
        for sem in semantics:
            p = audit(
                model, cr, cases, semantics=sem, oracle=args.oracle,
                threads=args.threads, indices=rows,
            )
            write_json(
                out / f"{cfg.name}_{kind}_{sem}_audit.json",
                audit_report_doc(p, ds.space, manifest),
            )
            (out / f"{cfg.name}_{kind}_{sem}_pie.svg").write_text(
                pie_svg(p, f"{cfg.name} / {kind} / {sem}")
            )
            c = p.counts()
            print(
                f"  {kind} [{sem}]: misclassified {c['misclassified']}, "
                f"misaligned {c['misaligned']}, aligned {c['aligned']}"
            )
        table = relevance_table(
            model, ds, POSITIVE, policy=args.relevance_policy, oracle=args.oracle
        )
        tables.append((kind, table))
        (out / f"{cfg.name}_{kind}_relevance.svg").write_text(
            relevance_bar_svg(table, ds.space, f"{cfg.name} / {kind} relevance")
        )
    (out / f"{cfg.name}_relevance.csv").write_text(
        relevance_csv_text(tables, ds.space)
    )
    print(f"wrote reports to {out}")
    return 0


def cmd_report(args) -> int:
    rc = cmd_ingest(args)
    if rc:
        return rc
    args.model_kind = "all"
    rc = cmd_train(args)
    if rc:
        return rc
    rc = cmd_mine(args)
    if rc:
        return rc
    args.model = None
    return cmd_audit(args)


def cmd_verify(args) -> int:
    cfg, ds, _ = _load_dataset(args)
    model = load_model(args.model)
    if args.rows:
        rows = [int(t) for t in args.rows.split(",") if t.strip()]
    else:
        rows = range(len(ds))
    order = _parse_order(args.order, ds.space)
    checked = 0
    for i in rows:
        x = ds.rows[i][0]
        e = axp_deletion(model, x, order=order, oracle=args.oracle)
        verify_explanation(model, e, oracle=args.oracle)
        checked += 1
    print(f"verified {checked} explanations against {model.model_id}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="axaclin",
        description="Formal abductive explanations and alignment audits "
        "for binary classifiers on binarized tabular data.",
    )
    parser.add_argument("--version", action="version", version=f"axaclin {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="binarize a raw CSV dataset")
    _dataset_args(p)
    _common_args(p)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("train", help="train classifiers on a binarized dataset")
    _dataset_args(p)
    _common_args(p)
    p.add_argument(
        "--model-kind", choices=MODEL_KINDS + ("all",), default="all",
        help="which model family to train",
    )
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("explain", help="explain one row's model decision")
    _dataset_args(p)
    _common_args(p)
    p.add_argument("--model", required=True, help="model JSON file")
    p.add_argument("--row", type=int, required=True, help="dataset row index")
    p.add_argument("--constraint", help="compute an explanation avoiding this conjunction")
    p.add_argument("--containing", help="compute an explanation containing this conjunction")
    p.add_argument("--enumerate", action="store_true", help="list every minimal explanation")
    p.add_argument("--verify", action="store_true", help="re-check soundness and minimality")
    p.set_defaults(func=cmd_explain)

    p = sub.add_parser("mine", help="mine critical properties from a dataset")
    _dataset_args(p)
    _common_args(p)
    p.add_argument("--max-literals", type=int, default=5)
    p.add_argument("--min-coverage", type=int, default=10)
    p.set_defaults(func=cmd_mine)

    p = sub.add_parser("audit", help="audit model alignment on critical cases")
    _dataset_args(p)
    _common_args(p)
    p.add_argument("--cr", help="critical property (default: best mined rule)")
    p.add_argument(
        "--model", action="append",
        help="model JSON file (repeatable); default trains all kinds",
    )
    p.add_argument(
        "--all-models", action="store_true",
        help="train and audit lr, sgd, and nn (the default when --model is absent)",
    )
    p.add_argument(
        "--relevance-policy", choices=("single-deletion", "union-of-all"),
        default="single-deletion",
    )
    p.add_argument("--threads", type=int, default=None, help="audit worker threads")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("report", help="full pipeline: ingest, train, mine, audit")
    _dataset_args(p)
    _common_args(p)
    p.add_argument("--cr", help="critical property (default: best mined rule)")
    p.add_argument("--max-literals", type=int, default=5)
    p.add_argument("--min-coverage", type=int, default=10)
    p.add_argument(
        "--relevance-policy", choices=("single-deletion", "union-of-all"),
        default="single-deletion",
    )
    p.add_argument("--threads", type=int, default=None)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("verify", help="re-check explanation invariants over rows")
    _dataset_args(p)
    _common_args(p)
    p.add_argument("--model", required=True, help="model JSON file")
    p.add_argument("--rows", help="comma-separated row indices (default: all)")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except AxaclinError as exc:
        print(f"axaclin: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except Exception:
        traceback.print_exc()
        return 1


if __name__ == "__main__":
    sys.exit(main())
