from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Union

from src.config.caps import Caps, DEFAULT_CAPS
from src.lattice.errors import CapExceeded, Disagreement, EmptyResult, UsageError
from src.linking.linking_sets import product
from src.msets.mconvex import MConvexSet, set_to_submodular
from src.quotient import characterizations as ch

logger = logging.getLogger(__name__)

ALL_METHODS = tuple(range(1, 11))
EXISTENTIAL = (5, 7, 8)


@dataclass(frozen=True)
class Skipped:
    reason: str


Verdict = Union[bool, Skipped]


@dataclass
class QuotientReport:
    """
    verdicts: characterization id (1..10) -> True / False / Skipped(reason)
    witnesses: id -> constructed artifact, when one exists
    """
    verdicts: Dict[int, Verdict] = field(default_factory=dict)
    witnesses: Dict[int, Any] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)

    def decided(self) -> Dict[int, bool]:
        return {k: v for k, v in self.verdicts.items() if not isinstance(v, Skipped)}

    def check_agreement(self) -> None:
        if len(set(self.decided().values())) > 1:
            raise Disagreement(f"characterizations disagree: {self.decided()}")

    @property
    def verdict(self) -> Optional[bool]:
        """The common verdict of the decided characterizations (None if all skipped)."""
        self.check_agreement()
        values = set(self.decided().values())
        return values.pop() if values else None


def _decide(p, q, P, Q, caps: Caps, method: int, report: QuotientReport) -> bool:
    if method == 1:
        return ch.check_compliant(p, q)
    if method == 2:
        return ch.check_vertex_containment(p, q, caps)
    if method == 3:
        return ch.check_contraction_containment(p, q)
    if method == 4:
        try:
            R = ch.gpoly_points(p, q)
        except EmptyResult:
            return False
        report.witnesses[4] = R
        return ch.check_top_bottom(p, q, R)
    if method == 5:
        r = ch.extension_table(p, q)
        ok = ch.verify_deletion_contraction(r, p, q)
        if ok:
            report.witnesses[5] = r
        return ok
    if method == 6:
        return ch.check_exchange(P, Q)
    if method == 7:
        try:
            G, W = ch.induction_pair(p, q)
        except EmptyResult:
            return False
        ok = ch.verify_induction(G, W, P, Q)
        if ok:
            report.witnesses[7] = (G, W)
        return ok
    if method == 8:
        try:
            G, X = ch.green_triple(p, q)
            D = product(G, X)
        except EmptyResult:
            return False
        ok = ch.verify_green(G, D, X, P, Q)
        if ok:
            report.witnesses[8] = (G, D, X)
        return ok
    if method == 9:
        M, N, cert = ch.lifted_pair(P, Q, caps)
        report.witnesses[9] = (M, N, cert)
        return ch.check_exchange(M, N)
    if method == 10:
        ok = ch.check_compressed_quotient(P, Q, caps)
        if 9 in report.witnesses:
            report.witnesses[10] = report.witnesses[9]
        return ok
    raise UsageError(f"unknown characterization {method}; expected 1..10")


def quotient_suite(
    P: MConvexSet,
    Q: MConvexSet,
    caps: Optional[Caps] = None,
    methods: Iterable[int] = ALL_METHODS,
) -> QuotientReport:
    """Run the requested characterizations of P ↠ Q and check that they agree."""
    caps = caps or DEFAULT_CAPS
    if P.n != Q.n:
        raise UsageError(f"sets live on {P.n} and {Q.n} elements")
    p = set_to_submodular(P)
    q = set_to_submodular(Q)
    report = QuotientReport()
    for method in sorted(set(methods)):
        try:
            report.verdicts[method] = _decide(p, q, P, Q, caps, method, report)
        except CapExceeded as exc:
            report.verdicts[method] = Skipped(str(exc))
        logger.debug("characterization %d -> %s", method, report.verdicts[method])
    if any(report.verdicts.get(m) is False for m in EXISTENTIAL):
        report.notes.append("false verdicts of (5), (7), (8) mean the canonical witness failed to verify")
    report.check_agreement()
    return report


def verdict_label(v: Verdict) -> Union[bool, Dict[str, str]]:
    if isinstance(v, Skipped):
        return {"skipped": v.reason}
    return v

