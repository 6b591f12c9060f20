"""Mining critical properties from labeled data.

A critical property is a conjunction of literals with zero negative-class
support: every row satisfying it is labeled positive.  The miner returns
the subset-minimal such conjunctions above a positive-coverage floor,
found by a level-wise search (size-k candidates extend size-(k-1)
survivors) with two anti-monotone prunes: positive coverage only shrinks
under extension, and extensions of an already-critical conjunction cannot
be minimal.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from . import _kernels
from .core import Conjunction, LabeledDataset, satisfies, Instance
from .errors import ContractError, DataError

LOW_COVERAGE_WARNING_SHARE = 0.03


@dataclass(frozen=True)
class MiningConfig:
    max_literals: int = 5
    min_positive_coverage: int = 10

    def __post_init__(self):
        if self.max_literals < 1:
            raise ContractError("max_literals must be >= 1")
        if self.min_positive_coverage < 1:
            raise ContractError("min_positive_coverage must be >= 1")


@dataclass(frozen=True)
class MinedRule:
    conjunction: Conjunction
    positive_coverage: int
    negative_coverage: int
    relative_coverage: float
    low_coverage: bool  # below the relative-coverage warning share

    def to_doc(self, space) -> dict:
        return {
            "literals": self.conjunction.render(space, ascii_only=True),
            "pos": self.positive_coverage,
            "neg": self.negative_coverage,
            "relative_coverage": self.relative_coverage,
            "low_coverage_warning": self.low_coverage,
            "minimal": True,
        }


@dataclass(frozen=True)
class CriticalKnowledge:
    rules: tuple[Conjunction, ...]
    origin: str  # "expert" or "mined"
    dataset_hash: str = ""

    def __post_init__(self):
        if self.origin not in ("expert", "mined"):
            raise ContractError("critical knowledge origin must be expert or mined")

    def is_empty(self) -> bool:
        return not self.rules


def coverage(ds: LabeledDataset, c: Conjunction) -> tuple[int, int]:
    """(positive, negative) row counts satisfying ``c``; duplicates count."""
    if c.n != ds.n:
        raise ContractError("conjunction dimension does not match the dataset")
    if ds.packed_bits is not None:
        return _kernels.coverage_counts(ds.packed_bits, ds.packed_labels, c.mask, c.bits)
    pos = neg = 0
    for x, d in ds.rows:
        if (x.bits & c.mask) == c.bits:
            if d.is_positive:
                pos += 1
            else:
                neg += 1
    return pos, neg


def _sort_key(conj: Conjunction):
    feats = tuple(l.feature for l in conj)
    pols = tuple(0 if l.polarity else 1 for l in conj)
    return (len(conj), feats, pols)


def mine_critical_properties(
    ds: LabeledDataset, cfg: MiningConfig | None = None
) -> list[MinedRule]:
    """All minimal critical conjunctions up to the configured size.

    Results are sorted by positive coverage descending, ties broken by
    (size, feature indices, polarities).
    """
    cfg = cfg or MiningConfig()
    ds.require_nonempty()
    if cfg.max_literals > ds.n:
        raise ContractError("max_literals exceeds the number of features")
    pos_total, neg_total = ds.label_counts()
    if pos_total == 0 or neg_total == 0:
        raise DataError(
            "dataset contains a single label, so every conjunction trivially "
            "has zero negative coverage; critical-property mining is "
            "meaningless on degenerate input"
        )

    total = len(ds)
    emitted: list[MinedRule] = []
    # survivors: conjunctions with neg > 0 and pos >= floor, worth extending
    survivors: dict[tuple[int, int], Conjunction] = {}

    def consider(conj: Conjunction) -> None:
        pos, neg = coverage(ds, conj)
        if pos < cfg.min_positive_coverage:
            return
        if neg == 0:
            share = pos / total
            emitted.append(
                MinedRule(conj, pos, 0, share, share < LOW_COVERAGE_WARNING_SHARE)
            )
        else:
            survivors[(conj.mask, conj.bits)] = conj

    for i in range(ds.n):
        for polarity in (True, False):
            consider(Conjunction.empty(ds.n).with_literal(i, polarity))

    for _size in range(2, cfg.max_literals + 1):
        prev = survivors
        survivors = {}
        for (mask, bits), conj in prev.items():
            top = mask.bit_length() - 1
            for i in range(top + 1, ds.n):
                for polarity in (True, False):
                    cand = conj.with_literal(i, polarity)
                    if _all_subsets_survive(cand, prev):
                        consider(cand)
        if not survivors:
            break

    emitted.sort(key=lambda r: (-r.positive_coverage, _sort_key(r.conjunction)))
    return emitted


def _all_subsets_survive(cand: Conjunction, prev: dict) -> bool:
    """Every one-smaller sub-conjunction must be a survivor of the previous
    level; otherwise the candidate is non-minimal or under-covered."""
    for lit in cand:
        sub = cand.without_feature(lit.feature)
        if (sub.mask, sub.bits) not in prev:
            return False
    return True


def mine_critical_properties_bruteforce(
    ds: LabeledDataset, cfg: MiningConfig | None = None
) -> list[MinedRule]:
    """Reference miner: test every conjunction up to the size cap.

    Exponential; kept for cross-checking the level-wise search on small
    spaces.
    """
    cfg = cfg or MiningConfig()
    ds.require_nonempty()
    pos_total, neg_total = ds.label_counts()
    if pos_total == 0 or neg_total == 0:
        raise DataError("degenerate single-label dataset")
    total = len(ds)
    criticals: list[tuple[Conjunction, int]] = []
    for k in range(1, cfg.max_literals + 1):
        for feats in combinations(range(ds.n), k):
            for pol_bits in range(1 << k):
                conj = Conjunction.empty(ds.n)
                for j, f in enumerate(feats):
                    conj = conj.with_literal(f, bool(pol_bits >> j & 1))
                pos, neg = coverage(ds, conj)
                if neg == 0 and pos >= cfg.min_positive_coverage:
                    criticals.append((conj, pos))
    minimal = []
    for conj, pos in criticals:
        if not any(
            other is not conj
            and (conj.mask & other.mask) == other.mask
            and (conj.bits & other.mask) == other.bits
            for other, _ in criticals
        ):
            share = pos / total
            minimal.append(
                MinedRule(conj, pos, 0, share, share < LOW_COVERAGE_WARNING_SHARE)
            )
    minimal.sort(key=lambda r: (-r.positive_coverage, _sort_key(r.conjunction)))
    return minimal


def critical_cases(ds: LabeledDataset, cr: Conjunction) -> list[Instance]:
    """All rows satisfying a validated critical property, in row order."""
    pos, neg = coverage(ds, cr)
    if neg > 0:
        raise DataError(
            f"conjunction has nonzero negative coverage ({neg}); it is not a "
            "critical property on this dataset"
        )
    return [x for x, _ in ds.rows if satisfies(x, cr)]


def critical_case_rows(ds: LabeledDataset, cr: Conjunction) -> list[int]:
    """Row indices of the critical cases (for report bookkeeping)."""
    return [i for i, (x, _) in enumerate(ds.rows) if satisfies(x, cr)]


def validate_knowledge(ds: LabeledDataset, kappa: CriticalKnowledge) -> dict:
    """Per-rule coverage and validity; an empty set of rules means there are
    no critical properties and alignment cannot be assessed."""
    if kappa.is_empty():
        return {
            "rules": [],
            "empty": True,
            "message": "no critical properties; alignment not assessable",
        }
    entries = []
    for rule in kappa.rules:
        pos, neg = coverage(ds, rule)
        entries.append(
            {
                "literals": rule.render(ds.space, ascii_only=True),
                "pos": pos,
                "neg": neg,
                "valid": neg == 0,
            }
        )
    return {"rules": entries, "empty": False, "message": ""}
