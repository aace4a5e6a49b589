"""Transmit plans for the interference creation-resurrection (ICR) schemes.

Every scheme sends u1, u2 (to R1) and v1, v2 (to R2) in three slots.  Slots
with delayed CSIT *create* interference; slots with perfect CSIT *resurrect*
an earlier interference term at one receiver (so it can be subtracted) while
giving the other receiver a fresh equation in its own symbols.

All channel coefficients are read through a :class:`CsitView`, which only
hands out what the CSIT pattern makes available at the current slot.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from .channel import ChannelRealization, SymbolVector
from .csit import CsitPattern, CsitState, dominates

__all__ = [
    "SchemeId",
    "ICR_SCHEMES",
    "TABLE1",
    "CsitAccessError",
    "PatternMismatchError",
    "CsitView",
    "TransmitPlan",
    "SchemeMatch",
    "build_plan",
    "build_tdm_plan",
    "select_scheme",
]


class SchemeId(enum.Enum):
    SCHEME1 = "scheme1"
    SCHEME1_MIRROR = "scheme1m"
    SCHEME2 = "scheme2"
    SCHEME2_MIRROR = "scheme2m"
    SCHEME3 = "scheme3"
    SCHEME3_MIRROR = "scheme3m"
    TDM = "tdm"

    @property
    def label(self) -> str:
        return _LABELS[self]

    @property
    def binding(self) -> CsitPattern | None:
        """Minimal CSIT pattern the scheme is designed for (None for TDM)."""
        return _BINDINGS.get(self)

    @property
    def mirror(self) -> "SchemeId":
        return _MIRRORS[self]

    @classmethod
    def parse(cls, text: str) -> "SchemeId":
        key = text.strip().lower().replace(" ", "").replace("_", "").replace("-", "")
        key = key.replace("mirror", "m").replace("(m)", "m")
        if key in ("tdm", "tdmbaseline"):
            return cls.TDM
        for s in cls:
            if key == s.value:
                return s
        valid = ", ".join(s.value for s in cls)
        raise ValueError(f"unknown scheme {text!r}; valid schemes are {valid}")


_LABELS = {
    SchemeId.SCHEME1: "Scheme 1",
    SchemeId.SCHEME1_MIRROR: "Scheme 1 (mirror)",
    SchemeId.SCHEME2: "Scheme 2",
    SchemeId.SCHEME2_MIRROR: "Scheme 2 (mirror)",
    SchemeId.SCHEME3: "Scheme 3",
    SchemeId.SCHEME3_MIRROR: "Scheme 3 (mirror)",
    SchemeId.TDM: "TDM baseline",
}

_BINDINGS = {
    SchemeId.SCHEME1: CsitPattern.parse("DD,PN,NP"),
    SchemeId.SCHEME1_MIRROR: CsitPattern.parse("DD,NP,PN"),
    SchemeId.SCHEME2: CsitPattern.parse("ND,DN,PP"),
    SchemeId.SCHEME2_MIRROR: CsitPattern.parse("DN,ND,PP"),
    SchemeId.SCHEME3: CsitPattern.parse("DN,PD,NP"),
    SchemeId.SCHEME3_MIRROR: CsitPattern.parse("ND,DP,PN"),
}

_MIRRORS = {
    SchemeId.SCHEME1: SchemeId.SCHEME1_MIRROR,
    SchemeId.SCHEME1_MIRROR: SchemeId.SCHEME1,
    SchemeId.SCHEME2: SchemeId.SCHEME2_MIRROR,
    SchemeId.SCHEME2_MIRROR: SchemeId.SCHEME2,
    SchemeId.SCHEME3: SchemeId.SCHEME3_MIRROR,
    SchemeId.SCHEME3_MIRROR: SchemeId.SCHEME3,
    SchemeId.TDM: SchemeId.TDM,
}

ICR_SCHEMES = tuple(s for s in SchemeId if s is not SchemeId.TDM)

# Minimal synergistic patterns in table listing order (left column, then right).
TABLE1: tuple[tuple[CsitPattern, SchemeId], ...] = tuple(
    (CsitPattern.parse(p), s)
    for p, s in (
        ("DD,PN,NP", SchemeId.SCHEME1),
        ("DD,NP,PN", SchemeId.SCHEME1_MIRROR),
        ("ND,DP,PN", SchemeId.SCHEME3_MIRROR),
        ("DN,PD,NP", SchemeId.SCHEME3),
        ("DN,ND,PP", SchemeId.SCHEME2_MIRROR),
        ("ND,DN,PP", SchemeId.SCHEME2),
    )
)


class CsitAccessError(RuntimeError):
    """A transmitter tried to use channel knowledge the pattern does not grant."""

    def __init__(self, i: int, j: int, t: int, now: int, pattern: CsitPattern):
        self.coef = (i, j, t)
        self.slot = now
        self.pattern = pattern
        if t == now:
            need = f"perfect CSIT of row {i} in slot {now}"
        elif t < now:
            need = f"delayed CSIT of row {i} from slot {t}"
        else:
            need = "knowledge of a future slot"
        super().__init__(
            f"slot {now}: reading h{i}{j}({t}) requires {need}, "
            f"but pattern ({pattern}) gives {pattern.state(i, min(t, 3))}"
        )


class PatternMismatchError(ValueError):
    """The view's pattern does not dominate the scheme's minimal pattern."""


class CsitView:
    """Guarded access to a channel realization under a CSIT pattern.

    At slot ``now`` the coefficient h_ij(t) is readable when either ``t == now``
    and row i has P in slot ``now``, or ``t < now`` and row i had P or D in
    slot ``t``.  Delayed knowledge becomes available exactly one slot later.
    """

    def __init__(self, channel: ChannelRealization, pattern: CsitPattern):
        self.channel = channel
        self.pattern = pattern
        self.log: list[tuple[tuple[int, int, int], int]] = []

    def readable(self, i: int, j: int, t: int, now: int) -> bool:
        if t == now:
            return self.pattern.state(i, t) is CsitState.PERFECT
        if t < now:
            return self.pattern.state(i, t) >= CsitState.DELAYED
        return False

    def read(self, i: int, j: int, t: int, now: int) -> complex:
        if not self.readable(i, j, t, now):
            raise CsitAccessError(i, j, t, now, self.pattern)
        self.log.append(((i, j, t), now))
        return self.channel.coef(i, j, t)

    def at(self, now: int) -> Callable[[int, int, int], complex]:
        """Reader bound to slot ``now``: ``h(i, j, t)``."""
        return lambda i, j, t: self.read(i, j, t, now)


@dataclass(frozen=True, eq=False)
class TransmitPlan:
    """Precoding coefficients ``f[t, i, j]`` = f_ij(t+1).

    X_j(t) = f_1j(t) * (symbol from T_j to R1) + f_2j(t) * (symbol from T_j to R2),
    i.e. ``f[t, 0, j]`` multiplies u_{j+1} and ``f[t, 1, j]`` multiplies v_{j+1}.
    """

    f: np.ndarray
    scheme: SchemeId
    # symbolic form of each nonzero coefficient, keyed by (i, j, t)
    formulas: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        f = np.array(self.f, dtype=complex)
        if f.shape != (3, 2, 2):
            raise ValueError(f"precoder array must have shape (3, 2, 2), got {f.shape}")
        f.setflags(write=False)
        object.__setattr__(self, "f", f)

    def coef(self, i: int, j: int, t: int) -> complex:
        return complex(self.f[t - 1, i - 1, j - 1])

    def signals(self, symbols: SymbolVector) -> np.ndarray:
        """Transmit signals ``x[t, j]`` for the given symbols."""
        s = symbols.as_array()
        u, v = s[:2], s[2:]
        return self.f[:, 0, :] * u + self.f[:, 1, :] * v

    def to_dict(self) -> dict:
        return {
            "scheme": self.scheme.value,
            "f": [
                [[float(c.real), float(c.imag)] for c in self.f[t].reshape(-1)]
                for t in range(3)
            ],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "TransmitPlan":
        f = np.array(
            [[complex(re, im) for re, im in slot] for slot in doc["f"]], dtype=complex
        ).reshape(3, 2, 2)
        return cls(f, SchemeId(doc["scheme"]))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "TransmitPlan":
        return cls.from_dict(json.loads(text))


class _Draft:
    def __init__(self):
        self.f = np.zeros((3, 2, 2), dtype=complex)
        self.formulas: dict[tuple[int, int, int], str] = {}


def _zeros() -> _Draft:
    return _Draft()


def _put(d: _Draft, i: int, j: int, t: int, value: complex, formula: str = "1") -> None:
    d.f[t - 1, i - 1, j - 1] = value
    d.formulas[(i, j, t)] = formula


def _resurrect(d, h, *, msg: int, row: int, created: int, now: int) -> None:
    # Both transmitters resend their message-``msg`` symbol so that receiver
    # ``row`` sees exactly what it received in slot ``created``.
    for j in (1, 2):
        value = h(row, j, created) / h(row, j, now)
        _put(d, msg, j, now, value, f"h{row}{j}({now})^-1 h{row}{j}({created})")


def _send(d, *, msg: int, t: int) -> None:
    for j in (1, 2):
        _put(d, msg, j, t, 1.0)


def _scheme1(view: CsitView) -> _Draft:
    f = _zeros()
    # slot 1: everything goes out, I_1(v) at R1 and I_2(u) at R2
    _send(f, msg=1, t=1)
    _send(f, msg=2, t=1)
    _resurrect(f, view.at(2), msg=2, row=1, created=1, now=2)
    _resurrect(f, view.at(3), msg=1, row=2, created=1, now=3)
    return f


def _scheme1_mirror(view: CsitView) -> _Draft:
    f = _zeros()
    _send(f, msg=1, t=1)
    _send(f, msg=2, t=1)
    _resurrect(f, view.at(2), msg=1, row=2, created=1, now=2)
    _resurrect(f, view.at(3), msg=2, row=1, created=1, now=3)
    return f


def _scheme2(view: CsitView) -> _Draft:
    f = _zeros()
    _send(f, msg=1, t=1)
    _send(f, msg=2, t=2)
    h = view.at(3)
    _resurrect(f, h, msg=1, row=2, created=1, now=3)
    _resurrect(f, h, msg=2, row=1, created=2, now=3)
    return f


def _scheme2_mirror(view: CsitView) -> _Draft:
    f = _zeros()
    _send(f, msg=2, t=1)
    _send(f, msg=1, t=2)
    h = view.at(3)
    _resurrect(f, h, msg=1, row=2, created=2, now=3)
    _resurrect(f, h, msg=2, row=1, created=1, now=3)
    return f


def _scheme3(view: CsitView) -> _Draft:
    f = _zeros()
    _send(f, msg=2, t=1)
    # slot 2 overlaps creation of I_2(u) with resurrection of I_1(v)
    _send(f, msg=1, t=2)
    _resurrect(f, view.at(2), msg=2, row=1, created=1, now=2)
    _resurrect(f, view.at(3), msg=1, row=2, created=2, now=3)
    return f


def _scheme3_mirror(view: CsitView) -> _Draft:
    f = _zeros()
    _send(f, msg=1, t=1)
    _send(f, msg=2, t=2)
    _resurrect(f, view.at(2), msg=1, row=2, created=1, now=2)
    _resurrect(f, view.at(3), msg=2, row=1, created=2, now=3)
    return f


_BUILDERS = {
    SchemeId.SCHEME1: _scheme1,
    SchemeId.SCHEME1_MIRROR: _scheme1_mirror,
    SchemeId.SCHEME2: _scheme2,
    SchemeId.SCHEME2_MIRROR: _scheme2_mirror,
    SchemeId.SCHEME3: _scheme3,
    SchemeId.SCHEME3_MIRROR: _scheme3_mirror,
}


def build_tdm_plan(view: CsitView | None = None) -> TransmitPlan:
    """One interference-free symbol per slot, no CSIT read.

    u1 from T1 in slot 1, v2 from T2 in slot 2, u2 from T2 in slot 3.
    """
    d = _zeros()
    _put(d, 1, 1, 1, 1.0)
    _put(d, 2, 2, 2, 1.0)
    _put(d, 1, 2, 3, 1.0)
    return TransmitPlan(d.f, SchemeId.TDM, d.formulas)


def build_plan(scheme: SchemeId, view: CsitView) -> TransmitPlan:
    """Precoders of ``scheme``, reading channel knowledge only through ``view``.

    Raises
    ------
    CsitAccessError
        If a transmit equation needs a coefficient the pattern withholds at
        that slot.
    PatternMismatchError
        If the view's pattern does not dominate the scheme's minimal pattern.
    """
    if scheme is SchemeId.TDM:
        return build_tdm_plan(view)
    draft = _BUILDERS[scheme](view)
    if not dominates(view.pattern, scheme.binding):
        raise PatternMismatchError(
            f"{scheme.label} needs pattern ({scheme.binding}) or higher, got ({view.pattern})"
        )
    return TransmitPlan(draft.f, scheme, draft.formulas)


class SchemeMatch(NamedTuple):
    scheme: SchemeId
    minimal: CsitPattern


def select_scheme(p: CsitPattern) -> SchemeMatch | None:
    """First table entry dominated by ``p``, or None if ``p`` is not covered."""
    for minimal, scheme in TABLE1:
        if dominates(p, minimal):
            return SchemeMatch(scheme, minimal)
    return None
