"""Classification of the 729 three-slot CSIT patterns.

Two characterizations are computed side by side for every pattern:

* the declarative one: the three requirements on the alternation pattern
  (delayed-then-perfect knowledge per receiver row, never NN, P in slot 3);
* the constructive one: the pattern dominates one of the six minimal
  patterns for which a scheme exists, and that scheme is assigned.

The verdict follows the constructive test only; disagreements are reported.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .csit import CsitPattern, CsitState, all_patterns, dominates
from .schemes import TABLE1, SchemeId, select_scheme

__all__ = [
    "Verdict",
    "Theorem1Check",
    "PatternReport",
    "Atlas",
    "satisfies_theorem1",
    "row_requirement",
    "classify",
    "enumerate_patterns",
    "minimal_elements",
    "minimal_row_sequences",
]

P, D, N = CsitState.PERFECT, CsitState.DELAYED, CsitState.NONE


class Verdict(str, enum.Enum):
    SYNERGISTIC = "Synergistic"
    NOT_COVERED = "NotCovered"


class Theorem1Check(NamedTuple):
    delayed_then_perfect: bool
    never_both_none: bool
    perfect_in_last_slot: bool

    @property
    def overall(self) -> bool:
        return all(self)


def row_requirement(seq: Sequence[CsitState]) -> bool:
    """Some slot with D or P is followed later by a slot with P."""
    return any(
        seq[t1] >= D and seq[t2] is P
        for t1, t2 in itertools.combinations(range(len(seq)), 2)
    )


def satisfies_theorem1(p: CsitPattern) -> Theorem1Check:
    # requirement 1 is taken per receiver row (channels to R_i)
    req1 = all(row_requirement(p.row_sequence(i)) for i in (1, 2))
    req2 = not any(s.s1 is N and s.s2 is N for s in p.slots)
    last = p.slots[-1]
    req3 = last.s1 is P or last.s2 is P
    return Theorem1Check(req1, req2, req3)


@dataclass(frozen=True)
class PatternReport:
    pattern: CsitPattern
    requirements: Theorem1Check
    dominated_minimal: CsitPattern | None
    assigned_scheme: SchemeId | None

    @property
    def verdict(self) -> Verdict:
        return Verdict.SYNERGISTIC if self.dominated_minimal is not None else Verdict.NOT_COVERED

    @property
    def agrees(self) -> bool:
        """Declarative and constructive tests give the same answer."""
        return self.requirements.overall == (self.dominated_minimal is not None)


def classify(p: CsitPattern) -> PatternReport:
    match = select_scheme(p)
    return PatternReport(
        pattern=p,
        requirements=satisfies_theorem1(p),
        dominated_minimal=match.minimal if match else None,
        assigned_scheme=match.scheme if match else None,
    )


@dataclass(frozen=True)
class Atlas:
    reports: tuple[PatternReport, ...]

    @property
    def synergistic(self) -> list[CsitPattern]:
        return [r.pattern for r in self.reports if r.verdict is Verdict.SYNERGISTIC]

    @property
    def theorem1(self) -> list[CsitPattern]:
        return [r.pattern for r in self.reports if r.requirements.overall]

    @property
    def disagreements(self) -> list[PatternReport]:
        return [r for r in self.reports if not r.agrees]

    def summary(self) -> dict:
        n_syn = len(self.synergistic)
        per_scheme = {s.value: 0 for s in SchemeId if s is not SchemeId.TDM}
        for r in self.reports:
            if r.assigned_scheme is not None:
                per_scheme[r.assigned_scheme.value] += 1
        return {
            "counts": {
                "total": len(self.reports),
                "synergistic": n_syn,
                "not_covered": len(self.reports) - n_syn,
                "theorem1": len(self.theorem1),
                "agree": len(self.reports) - len(self.disagreements),
                "disagree": len(self.disagreements),
                "per_scheme": per_scheme,
            },
            "disagreements": [str(r.pattern) for r in self.disagreements],
        }


def enumerate_patterns() -> Atlas:
    return Atlas(tuple(classify(p) for p in all_patterns()))


def minimal_elements(patterns: Iterable[CsitPattern]) -> list[CsitPattern]:
    """Patterns of the set that strictly dominate no other member."""
    pats = list(patterns)
    return [
        p for p in pats
        if not any(q != p and dominates(p, q) for q in pats)
    ]


def minimal_row_sequences() -> list[tuple[CsitState, ...]]:
    """Minimal per-row three-slot sequences satisfying the row requirement."""
    seqs = [s for s in itertools.product((N, D, P), repeat=3) if row_requirement(s)]
    return [
        s for s in seqs
        if not any(o != s and all(a >= b for a, b in zip(s, o)) for o in seqs)
    ]
