"""Classifiers over binarized data plus an exact entailment oracle.

Three trainable families: logistic regression (full-batch gradient
descent), a hinge-loss per-sample SGD linear model, and a one-hidden-layer
rectifier network.  All expose a total decision function (positive iff the
decision score is strictly above 0; ties are negative) and an ``entails``
query answering whether every completion of a partial assignment receives
a given decision.

Entailment backends: ``linear`` (exact closed form, linear models only)
and ``exhaustive`` (completion enumeration, the only option for the
network).  Exhaustive queries refuse to run past ``EXHAUSTIVE_FREE_LIMIT``
free features rather than approximate.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import _kernels
from .core import Conjunction, Decision, Instance, LabeledDataset, NEGATIVE, POSITIVE
from .errors import (
    CapacityError,
    ConfigError,
    ContractError,
    DataError,
    TrainingError,
)
from .prng import Xoshiro256StarStar

EXHAUSTIVE_FREE_LIMIT = 20

MODEL_KINDS = ("lr", "sgd", "nn")


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.1
    epochs: int = 300
    seed: int = 0
    loss: str = "logistic"  # "logistic" or "hinge"
    hidden_units: int = 8
    l2: float = 0.0
    holdout_fraction: float = 0.8  # train share of the metrics split

    def __post_init__(self):
        if not self.learning_rate > 0:
            raise ConfigError("learning rate must be positive")
        if self.epochs < 1:
            raise ConfigError("epochs must be >= 1")
        if self.loss not in ("logistic", "hinge"):
            raise ConfigError(f"unknown loss {self.loss!r}")
        if self.hidden_units < 1:
            raise ConfigError("hidden_units must be >= 1")
        if self.l2 < 0:
            raise ConfigError("l2 penalty must be >= 0")
        if not 0 < self.holdout_fraction <= 1:
            raise ConfigError("holdout_fraction must be in (0, 1]")

    def to_doc(self) -> dict:
        return {
            "learning_rate": self.learning_rate,
            "epochs": self.epochs,
            "seed": self.seed,
            "loss": self.loss,
            "hidden_units": self.hidden_units,
            "l2": self.l2,
            "holdout_fraction": self.holdout_fraction,
        }


def default_config(kind: str, seed: int = 0) -> TrainConfig:
    """Per-family defaults; tuned on the binarized reference datasets."""
    if kind == "lr":
        return TrainConfig(learning_rate=0.5, epochs=2000, seed=seed, loss="logistic")
    if kind == "sgd":
        return TrainConfig(
            learning_rate=0.1, epochs=30, seed=seed, loss="hinge", l2=0.01
        )
    if kind == "nn":
        return TrainConfig(
            learning_rate=0.5, epochs=2000, seed=seed, loss="logistic", hidden_units=8
        )
    raise ConfigError(f"unknown model kind {kind!r}; expected one of {MODEL_KINDS}")


def _require_finite(values, what: str) -> None:
    arr = np.asarray(values, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise ContractError(f"{what} must be finite")


@dataclass(frozen=True, eq=False)
class LinearModel:
    """Score = sum of weights over set bits plus bias; positive iff > 0."""

    weights: tuple[float, ...]
    bias: float
    kind: str = "linear"
    model_id: str = ""
    feature_names: tuple[str, ...] | None = None
    train_config: TrainConfig | None = None
    metrics: dict | None = None
    _oracle: object = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        _require_finite(self.weights, "weights")
        _require_finite([self.bias], "bias")
        if not self.model_id:
            object.__setattr__(self, "model_id", f"{self.kind}:{self.param_hash()[:10]}")

    @property
    def n(self) -> int:
        return len(self.weights)

    def param_hash(self) -> str:
        h = hashlib.sha256()
        for v in (*self.weights, self.bias):
            h.update(float(v).hex().encode())
        return h.hexdigest()

    def oracle(self):
        if self._oracle is None:
            object.__setattr__(
                self,
                "_oracle",
                _kernels.make_linear_oracle(
                    np.asarray(self.weights, dtype=np.float64), float(self.bias)
                ),
            )
        return self._oracle


@dataclass(frozen=True, eq=False)
class ShallowNet:
    """One rectifier hidden layer; positive iff the output pre-activation > 0."""

    w_hidden: tuple[tuple[float, ...], ...]  # H x n
    b_hidden: tuple[float, ...]
    w_out: tuple[float, ...]
    b_out: float
    kind: str = "nn"
    model_id: str = ""
    feature_names: tuple[str, ...] | None = None
    train_config: TrainConfig | None = None
    metrics: dict | None = None
    _oracle: object = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if len(self.w_hidden) < 1:
            raise ContractError("network needs at least one hidden unit")
        widths = {len(row) for row in self.w_hidden}
        if len(widths) != 1:
            raise ContractError("ragged hidden weight matrix")
        if len(self.b_hidden) != len(self.w_hidden) or len(self.w_out) != len(
            self.w_hidden
        ):
            raise ContractError("hidden layer shapes disagree")
        for row in self.w_hidden:
            _require_finite(row, "hidden weights")
        _require_finite(self.b_hidden, "hidden biases")
        _require_finite(self.w_out, "output weights")
        _require_finite([self.b_out], "output bias")
        if not self.model_id:
            object.__setattr__(self, "model_id", f"{self.kind}:{self.param_hash()[:10]}")

    @property
    def n(self) -> int:
        return len(self.w_hidden[0])

    @property
    def hidden_units(self) -> int:
        return len(self.w_hidden)

    def param_hash(self) -> str:
        h = hashlib.sha256()
        for row in self.w_hidden:
            for v in row:
                h.update(float(v).hex().encode())
        for v in (*self.b_hidden, *self.w_out, self.b_out):
            h.update(float(v).hex().encode())
        return h.hexdigest()

    def oracle(self):
        if self._oracle is None:
            object.__setattr__(
                self,
                "_oracle",
                _kernels.make_nn_oracle(
                    np.asarray(self.w_hidden, dtype=np.float64),
                    np.asarray(self.b_hidden, dtype=np.float64),
                    np.asarray(self.w_out, dtype=np.float64),
                    float(self.b_out),
                ),
            )
        return self._oracle


Classifier = LinearModel | ShallowNet


def score(model: Classifier, x: Instance) -> float:
    if x.n != model.n:
        raise ContractError(f"instance has {x.n} features, model expects {model.n}")
    return model.oracle().score(x.bits)


def predict(model: Classifier, x: Instance) -> Decision:
    return POSITIVE if score(model, x) > 0.0 else NEGATIVE


def _resolve_oracle(model: Classifier, oracle: str) -> str:
    if oracle not in ("auto", "linear", "exhaustive"):
        raise ConfigError(f"unknown oracle {oracle!r}")
    if oracle == "auto":
        return "linear" if isinstance(model, LinearModel) else "exhaustive"
    if oracle == "linear" and not isinstance(model, LinearModel):
        raise ConfigError("the linear oracle requires a linear model")
    return oracle


def entails(model: Classifier, c: Conjunction, d: Decision, oracle: str = "auto") -> bool:
    """True iff every completion of ``c`` is decided ``d`` by the model."""
    if c.n != model.n:
        raise ContractError(f"conjunction has {c.n} features, model expects {model.n}")
    if model.n > _kernels.MAX_KERNEL_FEATURES:
        raise CapacityError(
            f"entailment kernels support at most {_kernels.MAX_KERNEL_FEATURES} features"
        )
    strategy = _resolve_oracle(model, oracle)
    want_positive = d.is_positive
    if strategy == "linear":
        return model.oracle().entails(c.mask, c.bits, want_positive)
    free = model.n - c.mask.bit_count()
    if free > EXHAUSTIVE_FREE_LIMIT:
        raise CapacityError(
            f"exhaustive entailment over {free} free features exceeds the "
            f"budget of {EXHAUSTIVE_FREE_LIMIT}; refusing to approximate"
        )
    if isinstance(model, LinearModel):
        return model.oracle().entails_exhaustive(c.mask, c.bits, want_positive)
    return model.oracle().entails(c.mask, c.bits, want_positive)


# --------------------------------------------------------------------------
# training


def _unpack(ds: LabeledDataset) -> tuple[np.ndarray, np.ndarray]:
    n = ds.n
    bits = ds.packed_bits
    if bits is None:
        raise CapacityError("training supports at most 64 features")
    cols = np.arange(n, dtype=np.uint64)
    X = ((bits[:, None] >> cols) & np.uint64(1)).astype(np.float64)
    y = (ds.packed_labels == 1).astype(np.float64)
    return X, y


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _check_finite_epoch(loss: float, epoch: int) -> None:
    if not math.isfinite(loss):
        raise TrainingError(f"training diverged: non-finite loss at epoch {epoch}")


def _fit_logistic(X, y, cfg: TrainConfig):
    n = X.shape[1]
    w = np.zeros(n)
    b = 0.0
    for epoch in range(cfg.epochs):
        z = X @ w + b
        p = _sigmoid(z)
        err = p - y
        gw = X.T @ err / len(y) + cfg.l2 * w
        gb = float(err.mean())
        w -= cfg.learning_rate * gw
        b -= cfg.learning_rate * gb
        loss = float(
            np.mean(np.log1p(np.exp(-np.abs(z))) + np.maximum(z, 0) - z * y)
            + 0.5 * cfg.l2 * float(w @ w)
        )
        _check_finite_epoch(loss, epoch)
    return w, b


def _fit_hinge_sgd(X, y, cfg: TrainConfig):
    n = X.shape[1]
    w = np.zeros(n)
    b = 0.0
    ysign = 2.0 * y - 1.0
    rng = Xoshiro256StarStar(cfg.seed)
    order = list(range(len(y)))
    for epoch in range(cfg.epochs):
        rng.shuffle(order)
        for idx in order:
            margin = ysign[idx] * (float(X[idx] @ w) + b)
            if cfg.l2:
                w *= 1.0 - cfg.learning_rate * cfg.l2
            if margin < 1.0:
                w += cfg.learning_rate * ysign[idx] * X[idx]
                b += cfg.learning_rate * ysign[idx]
        loss = float(
            np.mean(np.maximum(0.0, 1.0 - ysign * (X @ w + b)))
            + 0.5 * cfg.l2 * float(w @ w)
        )
        _check_finite_epoch(loss, epoch)
    return w, b


def _fit_relu_net(X, y, cfg: TrainConfig):
    n = X.shape[1]
    H = cfg.hidden_units
    rng = Xoshiro256StarStar(cfg.seed)
    bound = 1.0 / math.sqrt(n)
    W = np.array(
        [[rng.uniform(-bound, bound) for _ in range(n)] for _ in range(H)]
    )
    hb = np.zeros(H)
    v = np.array([rng.uniform(-bound, bound) for _ in range(H)])
    ob = 0.0
    N = len(y)
    for epoch in range(cfg.epochs):
        Z = X @ W.T + hb
        A = np.maximum(Z, 0.0)
        out = A @ v + ob
        p = _sigmoid(out)
        dout = (p - y) / N
        dv = A.T @ dout + cfg.l2 * v
        dob = float(dout.sum())
        dZ = np.outer(dout, v) * (Z > 0)
        dW = dZ.T @ X + cfg.l2 * W
        dhb = dZ.sum(axis=0)
        W -= cfg.learning_rate * dW
        hb -= cfg.learning_rate * dhb
        v -= cfg.learning_rate * dv
        ob -= cfg.learning_rate * dob
        loss = float(
            np.mean(np.log1p(np.exp(-np.abs(out))) + np.maximum(out, 0) - out * y)
        )
        _check_finite_epoch(loss, epoch)
    return W, hb, v, ob


def _metrics(model: Classifier, ds: LabeledDataset) -> dict:
    tp = fp = tn = fn = 0
    for x, d in ds.rows:
        p = predict(model, x)
        if p.is_positive and d.is_positive:
            tp += 1
        elif p.is_positive:
            fp += 1
        elif d.is_positive:
            fn += 1
        else:
            tn += 1
    total = len(ds)
    accuracy = (tp + tn) / total if total else 0.0
    denom = 2 * tp + fp + fn
    f1 = 2 * tp / denom if denom else 0.0
    return {"accuracy": accuracy, "f1": f1, "rows": total}


def train(
    ds: LabeledDataset,
    kind: str,
    cfg: TrainConfig | None = None,
    name: str = "",
) -> Classifier:
    """Deterministically fit a classifier of the given family.

    Metrics (accuracy, F1) are computed on a held-out stratified split of
    ``ds`` controlled by ``cfg.holdout_fraction`` and attached to the model
    record; with fraction 1.0 they are computed on the training rows and
    flagged as such.
    """
    if kind not in MODEL_KINDS:
        raise ConfigError(f"unknown model kind {kind!r}; expected one of {MODEL_KINDS}")
    cfg = cfg or default_config(kind)
    ds.require_nonempty()
    pos, neg = ds.label_counts()
    if pos == 0 or neg == 0:
        raise TrainingError("training requires both labels present in the dataset")

    from .ingest import split  # dataset plumbing lives in ingest

    if cfg.holdout_fraction < 1.0:
        fit_ds, eval_ds = split(ds, cfg.holdout_fraction, cfg.seed)
        if not eval_ds.rows or not fit_ds.rows:
            fit_ds, eval_ds = ds, ds
    else:
        fit_ds, eval_ds = ds, ds
    fit_pos, fit_neg = fit_ds.label_counts()
    if fit_pos == 0 or fit_neg == 0:
        fit_ds, eval_ds = ds, ds

    X, y = _unpack(fit_ds)
    names = fit_ds.space.names
    label = name or ds.provenance.split("#")[0] or "model"
    model_id = f"{kind}:{label}:seed{cfg.seed}"

    if kind == "lr":
        cfg = replace(cfg, loss="logistic")
        w, b = _fit_logistic(X, y, cfg)
        model = LinearModel(
            tuple(w.tolist()), float(b), kind="lr", model_id=model_id,
            feature_names=names, train_config=cfg,
        )
    elif kind == "sgd":
        cfg = replace(cfg, loss="hinge")
        w, b = _fit_hinge_sgd(X, y, cfg)
        model = LinearModel(
            tuple(w.tolist()), float(b), kind="sgd", model_id=model_id,
            feature_names=names, train_config=cfg,
        )
    else:
        W, hb, v, ob = _fit_relu_net(X, y, cfg)
        model = ShallowNet(
            tuple(tuple(row) for row in W.tolist()),
            tuple(hb.tolist()),
            tuple(v.tolist()),
            float(ob),
            kind="nn",
            model_id=model_id,
            feature_names=names,
            train_config=cfg,
        )

    held_out = eval_ds is not ds
    metrics = _metrics(model, eval_ds)
    metrics["evaluated_on"] = "holdout" if held_out else "train"
    metrics["train_accuracy"] = _metrics(model, fit_ds)["accuracy"]
    object.__setattr__(model, "metrics", metrics)
    return model


# --------------------------------------------------------------------------
# serialization: versioned JSON with exact hexadecimal floats


def _hex(v: float) -> str:
    return float(v).hex()


def _unhex(s: str) -> float:
    return float.fromhex(s)


def model_to_doc(model: Classifier) -> dict:
    doc = {
        "format": "axaclin-model",
        "version": 1,
        "kind": model.kind,
        "n": model.n,
        "model_id": model.model_id,
        "feature_names": list(model.feature_names) if model.feature_names else None,
        "train_config": model.train_config.to_doc() if model.train_config else None,
        "metrics": model.metrics,
    }
    if isinstance(model, LinearModel):
        doc["parameters"] = {
            "weights": [_hex(v) for v in model.weights],
            "bias": _hex(model.bias),
        }
    else:
        doc["parameters"] = {
            "w_hidden": [[_hex(v) for v in row] for row in model.w_hidden],
            "b_hidden": [_hex(v) for v in model.b_hidden],
            "w_out": [_hex(v) for v in model.w_out],
            "b_out": _hex(model.b_out),
        }
    return doc


def model_from_doc(doc: dict) -> Classifier:
    if doc.get("format") != "axaclin-model":
        raise ConfigError("not an axaclin model document")
    if doc.get("version") != 1:
        raise ConfigError(f"unsupported model document version {doc.get('version')!r}")
    kind = doc["kind"]
    params = doc["parameters"]
    cfg_doc = doc.get("train_config")
    cfg = TrainConfig(**cfg_doc) if cfg_doc else None
    names = tuple(doc["feature_names"]) if doc.get("feature_names") else None
    common = dict(
        kind=kind,
        model_id=doc.get("model_id", ""),
        feature_names=names,
        train_config=cfg,
        metrics=doc.get("metrics"),
    )
    if kind in ("lr", "sgd", "linear"):
        return LinearModel(
            tuple(_unhex(v) for v in params["weights"]),
            _unhex(params["bias"]),
            **common,
        )
    if kind == "nn":
        return ShallowNet(
            tuple(tuple(_unhex(v) for v in row) for row in params["w_hidden"]),
            tuple(_unhex(v) for v in params["b_hidden"]),
            tuple(_unhex(v) for v in params["w_out"]),
            _unhex(params["b_out"]),
            **common,
        )
    raise ConfigError(f"unknown model kind {kind!r} in document")


def save_model(model: Classifier, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model_to_doc(model), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_model(path) -> Classifier:
    try:
        fh = open(path, encoding="utf-8")
    except FileNotFoundError:
        raise DataError(f"model file not found: {path}") from None
    with fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DataError(f"model file {path} is not valid JSON: {exc}") from None
    return model_from_doc(doc)
