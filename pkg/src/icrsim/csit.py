"""CSIT availability states, per-slot states and three-slot patterns.

A pattern is written the way it appears in the literature, e.g.
``"DD,PN,NP"``: three comma separated slot tokens, each token giving the
CSIT state of the channels to receiver 1 followed by the state of the
channels to receiver 2.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterator

__all__ = [
    "CsitState",
    "SlotCsit",
    "CsitPattern",
    "PatternSyntaxError",
    "ALL_SLOT_STATES",
    "all_patterns",
    "dominates",
]

NUM_SLOTS = 3


class PatternSyntaxError(ValueError):
    """Raised for malformed CSIT pattern strings."""


@enum.unique
class CsitState(enum.IntEnum):
    """CSIT availability for the channels to one receiver.

    The integer value carries the dominance order N < D < P.
    """

    NONE = 0
    DELAYED = 1
    PERFECT = 2

    @property
    def letter(self) -> str:
        return "NDP"[self.value]

    @classmethod
    def from_letter(cls, letter: str) -> "CsitState":
        try:
            return cls("NDP".index(letter))
        except ValueError:
            raise PatternSyntaxError(f"unknown CSIT state {letter!r}") from None

    def __str__(self) -> str:
        return self.letter


@dataclass(frozen=True, order=True)
class SlotCsit:
    """CSIT state of one slot: ``s1`` for row 1 (channels to R1), ``s2`` for row 2."""

    s1: CsitState
    s2: CsitState

    def row(self, i: int) -> CsitState:
        """State of receiver-row ``i`` (1-based)."""
        if i == 1:
            return self.s1
        if i == 2:
            return self.s2
        raise IndexError(f"row index must be 1 or 2, got {i}")

    @classmethod
    def parse(cls, token: str) -> "SlotCsit":
        token = token.strip().upper()
        if len(token) != 2 or any(c not in "PDN" for c in token):
            raise PatternSyntaxError(
                f"invalid slot state {token!r}; valid states are "
                + ", ".join(ALL_SLOT_TOKENS)
            )
        return cls(CsitState.from_letter(token[0]), CsitState.from_letter(token[1]))

    def swapped(self) -> "SlotCsit":
        return SlotCsit(self.s2, self.s1)

    def __str__(self) -> str:
        return self.s1.letter + self.s2.letter


# Conventional listing order of the nine per-slot states.
ALL_SLOT_TOKENS = ("PP", "PD", "PN", "DP", "DD", "DN", "NP", "ND", "NN")
ALL_SLOT_STATES = tuple(SlotCsit.parse(t) for t in ALL_SLOT_TOKENS)


@dataclass(frozen=True, order=True)
class CsitPattern:
    """CSIT states over a three-slot channel extension."""

    slots: tuple[SlotCsit, SlotCsit, SlotCsit]

    def __post_init__(self):
        if len(self.slots) != NUM_SLOTS:
            raise ValueError(f"a CSIT pattern has exactly {NUM_SLOTS} slots")
        object.__setattr__(self, "slots", tuple(self.slots))

    @classmethod
    def parse(cls, text: str) -> "CsitPattern":
        """Parse ``"DD,PN,NP"`` (parentheses and whitespace are tolerated)."""
        body = text.strip().strip("()")
        tokens = [t for t in body.split(",")]
        if len(tokens) != NUM_SLOTS:
            raise PatternSyntaxError(
                f"expected {NUM_SLOTS} comma separated slot states, got {text!r}; "
                "valid states are " + ", ".join(ALL_SLOT_TOKENS)
            )
        return cls(tuple(SlotCsit.parse(t) for t in tokens))

    def state(self, row: int, slot: int) -> CsitState:
        """CSIT state of receiver-row ``row`` at ``slot`` (both 1-based)."""
        return self.slots[slot - 1].row(row)

    def row_sequence(self, row: int) -> tuple[CsitState, ...]:
        return tuple(s.row(row) for s in self.slots)

    def swapped(self) -> "CsitPattern":
        """Exchange the roles of the two receivers."""
        return CsitPattern(tuple(s.swapped() for s in self.slots))

    def __iter__(self) -> Iterator[SlotCsit]:
        return iter(self.slots)

    def __str__(self) -> str:
        return ",".join(str(s) for s in self.slots)

    def __repr__(self) -> str:
        return f"CsitPattern({str(self)!r})"


def all_patterns() -> list[CsitPattern]:
    """All 9**3 patterns, slot tokens varying in listing order."""
    return [CsitPattern(combo) for combo in itertools.product(ALL_SLOT_STATES, repeat=NUM_SLOTS)]


def dominates(a: CsitPattern, b: CsitPattern) -> bool:
    """True when ``a`` offers at least the CSIT of ``b`` in every slot and row."""
    return all(
        sa.s1 >= sb.s1 and sa.s2 >= sb.s2 for sa, sb in zip(a.slots, b.slots)
    )
