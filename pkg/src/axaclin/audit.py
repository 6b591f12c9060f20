"""Partition critical cases into misclassified / misaligned / aligned.

Three audit semantics, strictly nested (strict-aligned ⊆ fast-aligned ⊆
relaxed-aligned):

* ``fast`` — a positive case is aligned when no explanation avoids every
  feature of the critical property (one constrained-explanation query).
* ``strict`` — aligned when every explanation contains the whole critical
  property (needs exhaustive enumeration).
* ``relaxed`` — aligned when at least one explanation contains the whole
  critical property.

Misclassified cases (negative prediction on a critical case) are the same
under all three.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .core import (
    Conjunction,
    Decision,
    Instance,
    LabeledDataset,
    NEGATIVE,
    POSITIVE,
    contains,
    satisfies,
)
from .errors import ContractError, DataError
from .explain import (
    Explanation,
    axp_containing,
    axp_deletion,
    axp_enumerate_all,
    axp_under_constraint,
)
from .models import Classifier, predict

SEMANTICS = ("fast", "strict", "relaxed")

MISCLASSIFIED = "misclassified"
MISALIGNED = "misaligned"
ALIGNED = "aligned"


@dataclass(frozen=True)
class CaseRecord:
    index: int
    instance: Instance
    decision: Decision
    category: str
    witnesses: tuple[Explanation, ...] = ()


@dataclass(frozen=True)
class AuditPartition:
    misclassified: tuple[CaseRecord, ...]
    misaligned: tuple[CaseRecord, ...]
    aligned: tuple[CaseRecord, ...]
    cr: Conjunction
    model_id: str
    semantics: str

    @property
    def total(self) -> int:
        return len(self.misclassified) + len(self.misaligned) + len(self.aligned)

    def counts(self) -> dict:
        return {
            MISCLASSIFIED: len(self.misclassified),
            MISALIGNED: len(self.misaligned),
            ALIGNED: len(self.aligned),
            "total": self.total,
        }


def _worker_count(threads: int | None) -> int:
    if threads is None:
        env = os.environ.get("AXACLIN_THREADS", "").strip()
        threads = int(env) if env else 1
    return max(1, threads)


def _classify_case(model, cr, semantics, oracle, item):
    idx, x = item
    if predict(model, x) != POSITIVE:
        return CaseRecord(idx, x, NEGATIVE, MISCLASSIFIED)
    if semantics == "fast":
        witness = axp_under_constraint(model, x, cr, POSITIVE, oracle=oracle)
        if witness is not None:
            return CaseRecord(idx, x, POSITIVE, MISALIGNED, (witness,))
        return CaseRecord(idx, x, POSITIVE, ALIGNED)
    if semantics == "strict":
        axps = axp_enumerate_all(model, x, oracle=oracle)
        noncritical = tuple(e for e in axps if not contains(e.literals, cr))
        if noncritical:
            return CaseRecord(idx, x, POSITIVE, MISALIGNED, noncritical)
        return CaseRecord(idx, x, POSITIVE, ALIGNED)
    witness = axp_containing(model, x, cr, oracle=oracle)
    if witness is not None:
        return CaseRecord(idx, x, POSITIVE, ALIGNED, (witness,))
    exhibit = axp_deletion(model, x, oracle=oracle)
    return CaseRecord(idx, x, POSITIVE, MISALIGNED, (exhibit,))


def audit(
    model: Classifier,
    cr: Conjunction,
    cases: list[Instance],
    semantics: str = "fast",
    oracle: str = "auto",
    threads: int | None = None,
    indices: list[int] | None = None,
) -> AuditPartition:
    """Run one audit semantics over the critical cases.

    Every case must satisfy ``cr``.  Output lists are ordered by the
    original case index regardless of worker count.
    """
    if semantics not in SEMANTICS:
        raise ContractError(f"unknown audit semantics {semantics!r}")
    for x in cases:
        if not satisfies(x, cr):
            raise ContractError(
                "audit input contains a case that does not satisfy the "
                "critical property"
            )
    if indices is None:
        indices = list(range(len(cases)))
    elif len(indices) != len(cases):
        raise ContractError("indices and cases must have equal length")
    items = list(zip(indices, cases))

    workers = _worker_count(threads)
    if workers > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(
                pool.map(
                    lambda it: _classify_case(model, cr, semantics, oracle, it), items
                )
            )
    else:
        records = [_classify_case(model, cr, semantics, oracle, it) for it in items]

    by_cat = {MISCLASSIFIED: [], MISALIGNED: [], ALIGNED: []}
    for rec in records:
        by_cat[rec.category].append(rec)
    return AuditPartition(
        tuple(by_cat[MISCLASSIFIED]),
        tuple(by_cat[MISALIGNED]),
        tuple(by_cat[ALIGNED]),
        cr,
        model.model_id,
        semantics,
    )


def audit_fast(model, cr, cases, **kw) -> AuditPartition:
    return audit(model, cr, cases, semantics="fast", **kw)


def audit_strict(model, cr, cases, **kw) -> AuditPartition:
    return audit(model, cr, cases, semantics="strict", **kw)


def audit_relaxed(model, cr, cases, **kw) -> AuditPartition:
    return audit(model, cr, cases, semantics="relaxed", **kw)


def alignment_metrics(p: AuditPartition) -> dict:
    """Misclassification / misalignment / alignment rates over the cases."""
    if p.total == 0:
        raise DataError(
            "no critical cases to audit; rates are undefined (empty critical "
            "knowledge means alignment is not assessable)"
        )
    return {
        "misclassification_rate": len(p.misclassified) / p.total,
        "misalignment_rate": len(p.misaligned) / p.total,
        "alignment_rate": len(p.aligned) / p.total,
    }


@dataclass(frozen=True)
class RelevanceTable:
    """How often each literal appears in reported explanations.

    ``counts`` maps (feature index, bit value) to the number of instances
    whose explanation(s) contain that literal, over all dataset rows the
    model decides as the requested decision.
    """

    counts: dict[tuple[int, int], int]
    total_cases: int
    model_id: str
    policy: str

    def count(self, feature: int, value: int) -> int:
        return self.counts.get((feature, value), 0)

    def argmax(self) -> tuple[int, int]:
        if not self.counts:
            return (-1, -1)
        best = max(self.counts.items(), key=lambda kv: (kv[1], -kv[0][0], -kv[0][1]))
        return best[0]


def relevance_table(
    model: Classifier,
    ds: LabeledDataset,
    d: Decision,
    policy: str = "single-deletion",
    oracle: str = "auto",
) -> RelevanceTable:
    """Literal membership counts across explanations of the model's
    ``d``-decided rows.

    ``single-deletion`` counts the literals of the one deletion-based
    explanation per instance (ascending scan order); ``union-of-all``
    counts a literal when any minimal explanation of the instance uses it.
    """
    if policy not in ("single-deletion", "union-of-all"):
        raise ContractError(f"unknown relevance policy {policy!r}")
    counts: dict[tuple[int, int], int] = {}
    total = 0
    for x, _ in ds.rows:
        if predict(model, x) != d:
            continue
        total += 1
        if policy == "single-deletion":
            literals = set(axp_deletion(model, x, oracle=oracle).literals)
        else:
            literals = set()
            for e in axp_enumerate_all(model, x, oracle=oracle):
                literals.update(e.literals)
        for lit in literals:
            key = (lit.feature, 1 if lit.polarity else 0)
            counts[key] = counts.get(key, 0) + 1
    return RelevanceTable(counts, total, model.model_id, policy)
