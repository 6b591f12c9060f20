"""Abductive explanations: minimal sufficient reasons for a decision.

An explanation for (model, instance) is a subset of the instance's
literals that entails the model's decision on every completion, and from
which no single literal can be dropped without losing that entailment.
Entailment is monotone under adding literals, so single-literal drop
checks certify subset-minimality exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .core import Conjunction, Decision, Instance, contains, remove, satisfies
from .errors import CapacityError, ContractError, VerificationError
from .models import Classifier, entails, predict

ENUMERATION_FEATURE_LIMIT = 16

METHODS = ("deletion", "constrained", "enumerated", "protected")


@dataclass(frozen=True)
class Explanation:
    literals: Conjunction
    decision: Decision
    source: Instance
    model_id: str
    method: str

    def __post_init__(self):
        if self.method not in METHODS:
            raise ContractError(f"unknown explanation method {self.method!r}")
        if not contains(self.source.as_conjunction(), self.literals):
            raise ContractError("explanation literals must come from the instance")

    def __len__(self) -> int:
        return len(self.literals)

    def render(self, space, ascii_only: bool = False) -> str:
        return self.literals.render(space, ascii_only=ascii_only)


def axp_deletion(
    model: Classifier,
    x: Instance,
    order: Sequence[int] | None = None,
    oracle: str = "auto",
) -> Explanation:
    """Deletion-based explanation: scan features once, drop what stays safe.

    ``order`` is the feature scan order (default ascending); different
    orders may yield different, equally valid explanations.
    """
    d = predict(model, x)
    scan = range(x.n) if order is None else list(order)
    if order is not None and sorted(scan) != list(range(x.n)):
        raise ContractError("order must be a permutation of the feature indices")
    conj = x.as_conjunction()
    for i in scan:
        cand = conj.without_feature(i)
        if entails(model, cand, d, oracle=oracle):
            conj = cand
    return Explanation(conj, d, x, model.model_id, "deletion")


def axp_under_constraint(
    model: Classifier,
    x: Instance,
    cr: Conjunction,
    d: Decision,
    oracle: str = "auto",
) -> Explanation | None:
    """Explanation avoiding every feature of ``cr``, or None if impossible.

    None is a proof: the instance minus the constrained features does not
    entail the decision, so every explanation must touch ``cr``.
    """
    if not satisfies(x, cr):
        raise ContractError("instance does not satisfy the constraint")
    if predict(model, x) != d:
        raise ContractError("instance is not decided as the expected decision")
    conj = remove(x.as_conjunction(), cr)
    if not entails(model, conj, d, oracle=oracle):
        return None
    for i in range(x.n):
        if cr.mask >> i & 1:
            continue
        cand = conj.without_feature(i)
        if cand.mask != conj.mask and entails(model, cand, d, oracle=oracle):
            conj = cand
    return Explanation(conj, d, x, model.model_id, "constrained")


def _sufficient_sets_scan(model, x, d, oracle, require_mask=0):
    """Minimal sufficient subsets of x's literals, ascending cardinality.

    ``require_mask`` restricts the scan to sets containing those features;
    minimality is still judged against all subsets.  Once a minimal set is
    recorded, every superset is skipped without an oracle call, which is
    what makes the scan affordable.  Yields masks in deterministic
    (size, lexicographic) order.
    """
    n = x.n
    full = x.as_conjunction()
    required = [i for i in range(n) if require_mask >> i & 1]
    optional = [i for i in range(n) if not require_mask >> i & 1]
    found: list[int] = []
    for k in range(len(optional) + 1):
        for combo in combinations(optional, k):
            mask = require_mask
            for i in combo:
                mask |= 1 << i
            if any((mask & m) == m for m in found):
                continue
            cand = full.restrict(mask)
            if not entails(model, cand, d, oracle=oracle):
                continue
            if required:
                # a required literal may still be droppable; then the set
                # is sufficient but not subset-minimal
                minimal = True
                for i in required:
                    if entails(model, cand.without_feature(i), d, oracle=oracle):
                        minimal = False
                        break
                if not minimal:
                    continue
            found.append(mask)
            yield mask


def axp_enumerate_all(
    model: Classifier, x: Instance, oracle: str = "auto"
) -> list[Explanation]:
    """Every subset-minimal sufficient subset of the instance's literals."""
    if x.n > ENUMERATION_FEATURE_LIMIT:
        raise CapacityError(
            f"exhaustive explanation enumeration is limited to "
            f"{ENUMERATION_FEATURE_LIMIT} features (got {x.n}); use the "
            "deletion or constrained computations instead"
        )
    d = predict(model, x)
    full = x.as_conjunction()
    return [
        Explanation(full.restrict(mask), d, x, model.model_id, "enumerated")
        for mask in _sufficient_sets_scan(model, x, d, oracle)
    ]


def axp_containing(
    model: Classifier, x: Instance, cr: Conjunction, oracle: str = "auto"
) -> Explanation | None:
    """A subset-minimal explanation containing all of ``cr``, or None.

    Fast path: deletion that never drops the protected literals.  When the
    protected result is not itself minimal (a protected literal turned out
    droppable), greedy protection proves nothing either way, so fall back
    to scanning supersets of ``cr`` in cardinality order.
    """
    if not satisfies(x, cr):
        raise ContractError("instance does not satisfy the protected conjunction")
    d = predict(model, x)
    conj = x.as_conjunction()
    for i in range(x.n):
        if cr.mask >> i & 1:
            continue
        cand = conj.without_feature(i)
        if entails(model, cand, d, oracle=oracle):
            conj = cand
    minimal = True
    for i in range(x.n):
        if cr.mask >> i & 1 and entails(
            model, conj.without_feature(i), d, oracle=oracle
        ):
            minimal = False
            break
    if minimal:
        return Explanation(conj, d, x, model.model_id, "protected")
    if x.n > ENUMERATION_FEATURE_LIMIT:
        raise CapacityError(
            "deciding whether a minimal explanation contains the protected "
            f"conjunction needs enumeration, limited to "
            f"{ENUMERATION_FEATURE_LIMIT} features (got {x.n})"
        )
    for mask in _sufficient_sets_scan(
        model, x, d, oracle, require_mask=cr.mask
    ):
        return Explanation(
            x.as_conjunction().restrict(mask), d, x, model.model_id, "protected"
        )
    return None


def verify_explanation(
    model: Classifier, e: Explanation, oracle: str = "exhaustive"
) -> None:
    """Re-check soundness and minimality; raise VerificationError on failure."""
    if not entails(model, e.literals, e.decision, oracle=oracle):
        raise VerificationError(
            f"unsound explanation for model {e.model_id}: literals do not "
            "entail the decision"
        )
    for lit in e.literals:
        if entails(
            model, e.literals.without_feature(lit.feature), e.decision, oracle=oracle
        ):
            raise VerificationError(
                f"non-minimal explanation for model {e.model_id}: feature "
                f"{lit.feature} is droppable"
            )
