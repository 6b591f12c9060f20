"""CSV loading, feature binarization, and seeded train/test splits.

Binarization turns each selected raw column into one Boolean feature via a
per-feature rule.  The median convention is bit = 1 iff raw value >= median,
so "below the cut" reads as polarity 0.  Medians are computed over the full
dataset (after dropping unusable rows) before any splitting.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import pandas as pd

from .core import FeatureSpace, Instance, LabeledDataset, NEGATIVE, POSITIVE
from .errors import ConfigError, ContractError, DataError
from .prng import Xoshiro256StarStar

PRESETS = ("wdbc", "cleveland", "osmi")


@dataclass(frozen=True)
class MedianThreshold:
    """bit = 1 iff raw value >= the column median."""

    kind = "median"


@dataclass(frozen=True)
class FixedThreshold:
    threshold: float
    direction: str = ">="

    kind = "threshold"

    def __post_init__(self):
        if not math.isfinite(self.threshold):
            raise ConfigError("fixed threshold must be finite")
        if self.direction not in (">=", "<="):
            raise ConfigError(f"threshold direction must be >= or <=, got {self.direction!r}")


@dataclass(frozen=True)
class CategoryEquals:
    value: object

    kind = "equals"


@dataclass(frozen=True)
class Passthrough:
    """Column already holds 0/1 values."""

    kind = "passthrough"


Rule = MedianThreshold | FixedThreshold | CategoryEquals | Passthrough

# Rules whose column must parse as numbers for every kept row.
_NUMERIC_KINDS = ("median", "threshold", "passthrough")


@dataclass(frozen=True)
class FeatureSpecEntry:
    name: str
    column: str
    rule: Rule


@dataclass(frozen=True)
class BinarizationSpec:
    entries: tuple[FeatureSpecEntry, ...]
    label_column: str
    positive_labels: tuple

    def __post_init__(self):
        if not self.entries:
            raise ConfigError("binarization spec selects no features")
        names = [e.name for e in self.entries]
        if len(set(names)) != len(names):
            raise ConfigError("duplicate feature names in binarization spec")
        if not self.positive_labels:
            raise ConfigError("positive label set is empty")


@dataclass(frozen=True)
class DatasetConfig:
    name: str
    csv_path: str
    spec: BinarizationSpec
    train_fraction: float = 0.8
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.train_fraction <= 1.0:
            raise ConfigError(
                f"train fraction must be in (0, 1], got {self.train_fraction}"
            )


def _rule_from_doc(doc: dict) -> Rule:
    kind = doc.get("kind")
    if kind == "median":
        return MedianThreshold()
    if kind == "threshold":
        if "value" not in doc:
            raise ConfigError("threshold rule needs a value")
        return FixedThreshold(float(doc["value"]), doc.get("direction", ">="))
    if kind == "equals":
        if "value" not in doc:
            raise ConfigError("equals rule needs a value")
        return CategoryEquals(doc["value"])
    if kind == "passthrough":
        return Passthrough()
    raise ConfigError(f"unknown binarization rule kind {kind!r}")


def _rule_to_doc(rule: Rule) -> dict:
    if isinstance(rule, MedianThreshold):
        return {"kind": "median"}
    if isinstance(rule, FixedThreshold):
        return {"kind": "threshold", "value": rule.threshold, "direction": rule.direction}
    if isinstance(rule, CategoryEquals):
        return {"kind": "equals", "value": rule.value}
    return {"kind": "passthrough"}


def config_from_doc(doc: dict) -> DatasetConfig:
    try:
        label = doc["label"]
        features = doc["features"]
        name = doc["name"]
    except KeyError as exc:
        raise ConfigError(f"dataset config is missing the {exc.args[0]!r} key") from None
    if not isinstance(features, list) or not features:
        raise ConfigError("dataset config needs a non-empty feature list")
    entries = []
    for f in features:
        try:
            entries.append(
                FeatureSpecEntry(str(f["name"]), str(f["column"]), _rule_from_doc(f["rule"]))
            )
        except KeyError as exc:
            raise ConfigError(
                f"feature entry is missing the {exc.args[0]!r} key"
            ) from None
    positives = label.get("positive")
    if not isinstance(positives, list):
        raise ConfigError("label.positive must be a list of accepted values")
    spec = BinarizationSpec(tuple(entries), str(label["column"]), tuple(positives))
    split_doc = doc.get("split", {})
    return DatasetConfig(
        name=str(name),
        csv_path=str(doc.get("csv_path", f"data/{name}.csv")),
        spec=spec,
        train_fraction=float(split_doc.get("train_fraction", 0.8)),
        seed=int(split_doc.get("seed", 0)),
    )


def config_to_doc(cfg: DatasetConfig) -> dict:
    return {
        "name": cfg.name,
        "csv_path": cfg.csv_path,
        "label": {
            "column": cfg.spec.label_column,
            "positive": list(cfg.spec.positive_labels),
        },
        "split": {"train_fraction": cfg.train_fraction, "seed": cfg.seed},
        "features": [
            {"name": e.name, "column": e.column, "rule": _rule_to_doc(e.rule)}
            for e in cfg.spec.entries
        ],
    }


def config_hash(cfg: DatasetConfig) -> str:
    canon = json.dumps(config_to_doc(cfg), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


def load_config(path: str | Path) -> DatasetConfig:
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"dataset config not found: {p}")
    try:
        doc = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"dataset config {p} is not valid JSON: {exc}") from None
    return config_from_doc(doc)


def load_preset(name: str, csv_path: str | None = None) -> DatasetConfig:
    """One of the shipped dataset configs: wdbc, cleveland, osmi."""
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    text = resources.files("axaclin").joinpath(f"presets/{name}.json").read_text()
    cfg = config_from_doc(json.loads(text))
    if csv_path is not None:
        cfg = dataclasses.replace(cfg, csv_path=csv_path)
    return cfg


def _value_matches(raw, target) -> bool:
    # Tolerate int/float/string encodings of the same value across CSVs.
    try:
        if not isinstance(raw, str) and not isinstance(target, str):
            return float(raw) == float(target)
    except (TypeError, ValueError):
        pass
    a, b = str(raw).strip(), str(target).strip()
    if a == b:
        return True
    try:
        return float(a) == float(b)
    except ValueError:
        return False


def _semantics(entry: FeatureSpecEntry, threshold: float | None) -> str:
    rule = entry.rule
    if isinstance(rule, (MedianThreshold, FixedThreshold)):
        direction = rule.direction if isinstance(rule, FixedThreshold) else ">="
        return f"{entry.column} {direction} {threshold:.6g}"
    if isinstance(rule, CategoryEquals):
        return f"{entry.column} == {rule.value}"
    return f"{entry.column} == 1"


def load_and_binarize(cfg: DatasetConfig) -> tuple[LabeledDataset, dict]:
    """Read the CSV, apply the binarization spec, report realized cuts.

    Rows with a missing label, a missing value in any selected column, a
    non-numeric value under a numeric rule, or a passthrough value outside
    {0, 1} are dropped and counted in the report.
    """
    path = Path(cfg.csv_path)
    if not path.exists():
        raise DataError(
            f"dataset file not found: {path} (see the README for how to "
            "obtain the raw datasets)"
        )
    try:
        df = pd.read_csv(path)
    except Exception as exc:
        raise DataError(f"could not parse {path} as CSV: {exc}") from None

    needed = [cfg.spec.label_column] + [e.column for e in cfg.spec.entries]
    missing = [c for c in needed if c not in df.columns]
    if missing:
        raise ConfigError(
            f"{path} is missing configured columns: {', '.join(missing)}"
        )

    drop_reasons: dict[str, int] = {}
    bad = df[cfg.spec.label_column].isna()
    if int(bad.sum()):
        drop_reasons["label"] = int(bad.sum())

    numeric: dict[str, pd.Series] = {}
    for e in cfg.spec.entries:
        col = df[e.column]
        if e.rule.kind in _NUMERIC_KINDS:
            vals = pd.to_numeric(col, errors="coerce")
            col_bad = vals.isna()
            if e.rule.kind == "passthrough":
                col_bad = col_bad | ~vals.isin((0, 1))
            numeric[e.column] = vals
        else:
            col_bad = col.isna()
        if int(col_bad.sum()):
            drop_reasons[e.column] = int(col_bad.sum())
        bad = bad | col_bad

    keep = ~bad
    rows_kept = int(keep.sum())
    if rows_kept == 0:
        raise DataError(f"every row of {path} was dropped during binarization")

    thresholds: list[float | None] = []
    bit_columns = []
    for e in cfg.spec.entries:
        rule = e.rule
        if isinstance(rule, MedianThreshold):
            t = float(numeric[e.column][keep].median())
            bits = numeric[e.column][keep] >= t
        elif isinstance(rule, FixedThreshold):
            t = rule.threshold
            vals = numeric[e.column][keep]
            bits = vals >= t if rule.direction == ">=" else vals <= t
        elif isinstance(rule, Passthrough):
            t = None
            bits = numeric[e.column][keep] == 1
        else:
            t = None
            bits = df[e.column][keep].map(lambda v: _value_matches(v, rule.value))
        thresholds.append(t)
        bit_columns.append([bool(b) for b in bits])

    space = FeatureSpace.from_names([e.name for e in cfg.spec.entries])
    labels_raw = df[cfg.spec.label_column][keep]
    rows = []
    for r, raw_label in enumerate(labels_raw):
        packed = 0
        for i, col in enumerate(bit_columns):
            if col[r]:
                packed |= 1 << i
        decision = (
            POSITIVE
            if any(_value_matches(raw_label, t) for t in cfg.spec.positive_labels)
            else NEGATIVE
        )
        rows.append((Instance(space.n, packed), decision))

    digest = config_hash(cfg)
    ds = LabeledDataset(space, tuple(rows), provenance=f"{path}#cfg:{digest[:12]}")
    pos, neg = ds.label_counts()
    report = {
        "dataset": cfg.name,
        "csv_path": str(path),
        "config_hash": digest,
        "rows_read": int(len(df)),
        "rows_kept": rows_kept,
        "rows_dropped": int(len(df)) - rows_kept,
        "drop_reasons": drop_reasons,
        "label": {
            "column": cfg.spec.label_column,
            "positive": list(cfg.spec.positive_labels),
        },
        "positive_rows": pos,
        "negative_rows": neg,
        "features": [
            {
                "name": e.name,
                "column": e.column,
                "kind": e.rule.kind,
                "threshold": thresholds[i],
                "direction": (
                    e.rule.direction
                    if isinstance(e.rule, FixedThreshold)
                    else (">=" if isinstance(e.rule, MedianThreshold) else None)
                ),
                "value": e.rule.value if isinstance(e.rule, CategoryEquals) else None,
                "semantics": _semantics(e, thresholds[i]),
            }
            for i, e in enumerate(cfg.spec.entries)
        ],
    }
    return ds, report


def spec_from_report(cfg: DatasetConfig, report: dict) -> DatasetConfig:
    """Freeze realized median cuts into fixed thresholds.

    Re-binarizing with the frozen config reproduces the identical bit
    matrix, making a run reproducible without the original data statistics.
    """
    entries = []
    for e, f in zip(cfg.spec.entries, report["features"], strict=True):
        if isinstance(e.rule, MedianThreshold):
            rule: Rule = FixedThreshold(float(f["threshold"]), ">=")
        else:
            rule = e.rule
        entries.append(FeatureSpecEntry(e.name, e.column, rule))
    spec = BinarizationSpec(
        tuple(entries), cfg.spec.label_column, cfg.spec.positive_labels
    )
    return dataclasses.replace(cfg, spec=spec)


def save_dataset_csv(ds: LabeledDataset, path: str | Path) -> None:
    """Write the binarized dataset as bits plus a 0/1 label column."""
    header = [f.name for f in ds.space.features] + ["label"]
    lines = [",".join(header)]
    for x, d in ds.rows:
        lines.append(",".join(str(v) for v in x.values()) + (",1" if d.is_positive else ",0"))
    Path(path).write_text("\n".join(lines) + "\n")


def split(
    ds: LabeledDataset, fraction: float, seed: int
) -> tuple[LabeledDataset, LabeledDataset]:
    """Stratified deterministic split; train and test partition the rows."""
    if not 0.0 < fraction <= 1.0:
        raise ContractError(f"split fraction must be in (0, 1], got {fraction}")
    rng = Xoshiro256StarStar(seed)
    train_ids: list[int] = []
    for want_positive in (True, False):
        idx = [i for i, (_, d) in enumerate(ds.rows) if d.is_positive == want_positive]
        rng.shuffle(idx)
        take = round(fraction * len(idx))
        train_ids.extend(idx[:take])
    chosen = set(train_ids)
    train_rows = tuple(ds.rows[i] for i in sorted(chosen))
    test_rows = tuple(ds.rows[i] for i in range(len(ds.rows)) if i not in chosen)
    train = LabeledDataset(ds.space, train_rows, provenance=f"{ds.provenance}#train")
    test = LabeledDataset(ds.space, test_rows, provenance=f"{ds.provenance}#test")
    return train, test
