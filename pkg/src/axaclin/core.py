"""Boolean feature spaces, literals, conjunctions, instances, datasets.

A conjunction over n Boolean features is stored as two n-bit integers:
``mask`` marks the mentioned features and ``bits`` their polarities
(restricted to ``mask``).  Satisfaction and containment are then single
bitwise comparisons, which is what keeps mining and enumeration cheap.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np

from .errors import ContractError, DataError


@dataclass(frozen=True)
class Feature:
    """One Boolean feature with human-readable semantics per polarity."""

    name: str
    index: int
    when_true: str = ""
    when_false: str = ""


@dataclass(frozen=True)
class FeatureSpace:
    features: tuple[Feature, ...]

    def __post_init__(self):
        if len(self.features) < 1:
            raise ContractError("a feature space needs at least one feature")
        names = [f.name for f in self.features]
        if len(set(names)) != len(names):
            raise ContractError("feature names must be unique")
        for i, f in enumerate(self.features):
            if f.index != i:
                raise ContractError(
                    f"feature indices must be contiguous 0..n-1, got {f.index} at {i}"
                )

    @classmethod
    def from_names(cls, names: Iterable[str]) -> "FeatureSpace":
        return cls(tuple(Feature(name=n, index=i) for i, n in enumerate(names)))

    @property
    def n(self) -> int:
        return len(self.features)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(f.name for f in self.features)

    def index_of(self, name: str) -> int:
        for f in self.features:
            if f.name == name:
                return f.index
        raise KeyError(name)

    def literal_text(self, feature: int, polarity: bool) -> str:
        return f"{self.features[feature].name}={1 if polarity else 0}"


@dataclass(frozen=True)
class Literal:
    """A feature index together with the polarity it asserts."""

    feature: int
    polarity: bool

    def __post_init__(self):
        if self.feature < 0:
            raise ContractError("literal feature index must be non-negative")


@dataclass(frozen=True)
class Conjunction:
    """A consistent set of literals: at most one polarity per feature."""

    n: int
    mask: int = 0
    bits: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ContractError("conjunction dimension must be >= 1")
        full = (1 << self.n) - 1
        if self.mask & ~full:
            raise ContractError("conjunction mentions a feature outside the space")
        if self.bits & ~self.mask:
            raise ContractError("polarity bits set outside the mentioned-feature mask")

    @classmethod
    def empty(cls, n: int) -> "Conjunction":
        return cls(n, 0, 0)

    @classmethod
    def of(cls, n: int, literals: Iterable[Literal]) -> "Conjunction":
        mask = bits = 0
        for lit in literals:
            if lit.feature >= n:
                raise ContractError(
                    f"literal feature {lit.feature} outside space of size {n}"
                )
            sel = 1 << lit.feature
            if mask & sel:
                prev = bool(bits & sel)
                if prev != lit.polarity:
                    raise ContractError(
                        f"contradictory literals on feature {lit.feature}"
                    )
            mask |= sel
            if lit.polarity:
                bits |= sel
        return cls(n, mask, bits)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __iter__(self) -> Iterator[Literal]:
        for i in range(self.n):
            if self.mask >> i & 1:
                yield Literal(i, bool(self.bits >> i & 1))

    @property
    def vars(self) -> frozenset[int]:
        return frozenset(i for i in range(self.n) if self.mask >> i & 1)

    def with_literal(self, feature: int, polarity: bool) -> "Conjunction":
        sel = 1 << feature
        return Conjunction(
            self.n, self.mask | sel, (self.bits & ~sel) | (sel if polarity else 0)
        )

    def without_feature(self, feature: int) -> "Conjunction":
        sel = 1 << feature
        return Conjunction(self.n, self.mask & ~sel, self.bits & ~sel)

    def restrict(self, mask: int) -> "Conjunction":
        """Keep only the literals whose features are in ``mask``."""
        return Conjunction(self.n, self.mask & mask, self.bits & mask)

    def render(self, space: FeatureSpace, ascii_only: bool = False) -> str:
        if space.n != self.n:
            raise ContractError("feature space dimension mismatch")
        if self.mask == 0:
            return "(true)"
        joiner = " & " if ascii_only else " ∧ "
        return joiner.join(space.literal_text(l.feature, l.polarity) for l in self)


@dataclass(frozen=True)
class Instance:
    """A full Boolean assignment: every feature carries a value."""

    n: int
    bits: int

    def __post_init__(self):
        if self.n < 1:
            raise ContractError("instance dimension must be >= 1")
        if self.bits & ~((1 << self.n) - 1):
            raise ContractError("instance has bits outside the feature space")

    @classmethod
    def from_values(cls, values: Iterable[int]) -> "Instance":
        bits = 0
        n = 0
        for v in values:
            if v not in (0, 1, False, True):
                raise ContractError(f"instance values must be Boolean, got {v!r}")
            if v:
                bits |= 1 << n
            n += 1
        return cls(n, bits)

    def __getitem__(self, feature: int) -> int:
        if not 0 <= feature < self.n:
            raise IndexError(feature)
        return self.bits >> feature & 1

    def values(self) -> tuple[int, ...]:
        return tuple(self.bits >> i & 1 for i in range(self.n))

    def as_conjunction(self) -> Conjunction:
        return Conjunction(self.n, (1 << self.n) - 1, self.bits)


class Decision:
    """Binary decision: the positive or the negative class."""

    __slots__ = ("_positive",)

    def __init__(self, positive: bool):
        self._positive = bool(positive)

    @property
    def is_positive(self) -> bool:
        return self._positive

    def __eq__(self, other) -> bool:
        return isinstance(other, Decision) and other._positive == self._positive

    def __hash__(self) -> int:
        return hash(("Decision", self._positive))

    def __repr__(self) -> str:
        return "Positive" if self._positive else "Negative"

    def opposite(self) -> "Decision":
        return Decision(not self._positive)


POSITIVE = Decision(True)
NEGATIVE = Decision(False)


def _check_dims(a_n: int, b_n: int) -> None:
    if a_n != b_n:
        raise ContractError(f"dimension mismatch: {a_n} vs {b_n}")


def satisfies(x: Instance, c: Conjunction) -> bool:
    """True iff every literal of ``c`` agrees with ``x``."""
    _check_dims(x.n, c.n)
    return (x.bits & c.mask) == c.bits


def contains(outer: Conjunction, inner: Conjunction) -> bool:
    """True iff every literal of ``inner`` is a literal of ``outer``."""
    _check_dims(outer.n, inner.n)
    return (outer.mask & inner.mask) == inner.mask and (
        outer.bits & inner.mask
    ) == inner.bits


def remove(c: Conjunction, cr: Conjunction) -> Conjunction:
    """Delete from ``c`` every literal whose feature appears in ``cr``.

    Removal is by feature: a literal of ``c`` with the opposite polarity on
    a shared feature is removed as well, leaving the feature unconstrained.
    """
    _check_dims(c.n, cr.n)
    keep = c.mask & ~cr.mask
    return Conjunction(c.n, keep, c.bits & keep)


def parse_conjunction(space: FeatureSpace, text: str) -> Conjunction:
    """Parse the textual rendering, e.g. ``"x2=0 & x8=0"`` (or with '∧')."""
    text = text.strip()
    if text in ("", "(true)"):
        return Conjunction.empty(space.n)
    literals = []
    for part in text.replace("∧", "&").split("&"):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise ContractError(f"cannot parse literal {part!r}")
        name, _, value = part.partition("=")
        name, value = name.strip(), value.strip()
        if value not in ("0", "1"):
            raise ContractError(f"literal value must be 0 or 1 in {part!r}")
        try:
            idx = space.index_of(name)
        except KeyError:
            raise ContractError(f"unknown feature {name!r}") from None
        literals.append(Literal(idx, value == "1"))
    return Conjunction.of(space.n, literals)


@dataclass(frozen=True, eq=False)
class LabeledDataset:
    """Rows of (instance, decision) over a shared feature space.

    Duplicate rows are kept as-is; label conflicts between identical
    instances are legal but reported by :meth:`validate`.
    """

    space: FeatureSpace
    rows: tuple[tuple[Instance, Decision], ...]
    provenance: str = ""
    packed_bits: np.ndarray | None = field(default=None, repr=False, compare=False)
    packed_labels: np.ndarray | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        n = self.space.n
        for x, _ in self.rows:
            if x.n != n:
                raise ContractError("dataset row does not conform to the feature space")
        if self.packed_bits is None and n <= 64:
            bits = np.fromiter(
                (x.bits for x, _ in self.rows), dtype=np.uint64, count=len(self.rows)
            )
            labels = np.fromiter(
                (1 if d.is_positive else 0 for _, d in self.rows),
                dtype=np.int8,
                count=len(self.rows),
            )
            object.__setattr__(self, "packed_bits", bits)
            object.__setattr__(self, "packed_labels", labels)

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def n(self) -> int:
        return self.space.n

    def instances(self) -> list[Instance]:
        return [x for x, _ in self.rows]

    def label_counts(self) -> tuple[int, int]:
        pos = sum(1 for _, d in self.rows if d.is_positive)
        return pos, len(self.rows) - pos

    def require_nonempty(self) -> None:
        if not self.rows:
            raise DataError("dataset is empty")

    def validate(self) -> dict:
        """Row counts plus any instances that carry conflicting labels."""
        seen: dict[int, set[bool]] = {}
        for x, d in self.rows:
            seen.setdefault(x.bits, set()).add(d.is_positive)
        conflicts = sorted(bits for bits, ls in seen.items() if len(ls) == 2)
        pos, neg = self.label_counts()
        return {
            "rows": len(self.rows),
            "positive": pos,
            "negative": neg,
            "distinct_instances": len(seen),
            "conflicting_instances": [
                Instance(self.space.n, b).values() for b in conflicts
            ],
        }

    def content_hash(self) -> str:
        import hashlib

        h = hashlib.sha256()
        h.update(b"axaclin-dataset")
        h.update(str(self.space.n).encode())
        for x, d in self.rows:
            h.update(x.bits.to_bytes((self.space.n + 7) // 8 or 1, "little"))
            h.update(b"+" if d.is_positive else b"-")
        return h.hexdigest()
