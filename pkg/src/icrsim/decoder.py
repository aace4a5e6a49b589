"""Slot combining and zero-forcing recovery at the receivers.

Each receiver combines its three received samples with fixed {0, +-1}
weights: a difference of two slots cancels an interference term that was
received twice, and a single slot is taken as is when it arrived clean.  The
two combined rows form a 2x2 system in the receiver's own symbols.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .channel import ChannelRealization, ReceivedBlock, SymbolVector
from .csit import CsitPattern
from .schemes import CsitView, SchemeId, TransmitPlan, build_plan

__all__ = [
    "CombiningRow",
    "CombiningRecipe",
    "EffectiveSystem",
    "DecodeResult",
    "SingularSystemError",
    "SingularSystemWarning",
    "recipe_for",
    "received_coefficients",
    "assemble_effective_system",
    "decode",
    "DET_RTOL",
]

DET_RTOL = 1e-12
SELF_CHECK_RTOL = 1e-9

# symbol order in every coefficient matrix: u1, u2, v1, v2
SYMBOLS = ("u1", "u2", "v1", "v2")
_U = (0, 1)
_V = (2, 3)


class SingularSystemWarning(RuntimeWarning):
    pass


class SingularSystemError(np.linalg.LinAlgError):
    pass


@dataclass(frozen=True)
class CombiningRow:
    weights: tuple[int, int, int]
    label: str
    cancelled: str | None = None

    def __str__(self) -> str:
        expr = ""
        for t, w in enumerate(self.weights, start=1):
            if w:
                sign = "-" if w < 0 else "+"
                expr += (f" {sign} " if expr else ("-" if w < 0 else "")) + f"Y({t})"
        return f"{self.label} = {expr}" + (f"  [cancels {self.cancelled}]" if self.cancelled else "")


@dataclass(frozen=True)
class CombiningRecipe:
    """Per-receiver combining rows and the symbols each receiver solves for."""

    scheme: SchemeId
    rows: tuple[tuple[CombiningRow, ...], tuple[CombiningRow, ...]]
    desired: tuple[tuple[int, ...], tuple[int, ...]]

    def weights(self, receiver: int) -> np.ndarray:
        return np.array([r.weights for r in self.rows[receiver - 1]], dtype=float)


def _row(weights, label, cancelled=None):
    return CombiningRow(tuple(weights), label, cancelled)


_I1 = "I_1(v1,v2)"
_I2 = "I_2(u1,u2)"

_RECIPES = {
    SchemeId.SCHEME1: (
        (_row((1, -1, 0), "L_1^1", _I1), _row((0, 0, 1), "L_1^2")),
        (_row((1, 0, -1), "L_2^1", _I2), _row((0, 1, 0), "L_2^2")),
    ),
    SchemeId.SCHEME1_MIRROR: (
        (_row((1, 0, -1), "L_1^1", _I1), _row((0, 1, 0), "L_1^2")),
        (_row((1, -1, 0), "L_2^1", _I2), _row((0, 0, 1), "L_2^2")),
    ),
    SchemeId.SCHEME2: (
        (_row((0, -1, 1), "L_1^2", _I1), _row((1, 0, 0), "L_1^1")),
        (_row((-1, 0, 1), "L_2^2", _I2), _row((0, 1, 0), "L_2^1")),
    ),
    SchemeId.SCHEME2_MIRROR: (
        (_row((-1, 0, 1), "L_1^2", _I1), _row((0, 1, 0), "L_1^1")),
        (_row((0, -1, 1), "L_2^2", _I2), _row((1, 0, 0), "L_2^1")),
    ),
    SchemeId.SCHEME3: (
        (_row((-1, 1, 0), "L_1^1", _I1), _row((0, 0, 1), "L_1^2")),
        (_row((1, 0, 0), "L_2^1"), _row((0, 1, -1), "L_2^2", _I2)),
    ),
    SchemeId.SCHEME3_MIRROR: (
        (_row((1, 0, 0), "L_1^1"), _row((0, 1, -1), "L_1^2", _I1)),
        (_row((-1, 1, 0), "L_2^1", _I2), _row((0, 0, 1), "L_2^2")),
    ),
    SchemeId.TDM: (
        (_row((1, 0, 0), "u1"), _row((0, 0, 1), "u2")),
        (_row((0, 1, 0), "v2"),),
    ),
}


def recipe_for(scheme: SchemeId) -> CombiningRecipe:
    desired = ((0, 1), (3,)) if scheme is SchemeId.TDM else (_U, _V)
    return CombiningRecipe(scheme, _RECIPES[scheme], desired)


def received_coefficients(plan: TransmitPlan, H: ChannelRealization) -> np.ndarray:
    """Noiseless map from symbols to samples: ``G[i, t, s]`` is the weight of
    symbol s (u1, u2, v1, v2) in Y_{i+1}(t+1)."""
    # h[t, i, j] * f[t, m, j] -> G[i, t, (m, j)]
    g = np.einsum("tij,tmj->itmj", H.h, plan.f)
    return g.reshape(2, 3, 4)


@dataclass(frozen=True, eq=False)
class EffectiveSystem:
    """Interference-free systems ``combined_i = M_i @ desired_i + noise``.

    ``K[i]`` is the covariance of the combined noise at unit noise power.
    """

    recipe: CombiningRecipe
    plan: TransmitPlan
    M: tuple[np.ndarray, np.ndarray]
    K: tuple[np.ndarray, np.ndarray]
    singular: bool

    @property
    def scheme(self) -> SchemeId:
        return self.recipe.scheme

    def det(self, receiver: int) -> complex:
        return complex(np.linalg.det(self.M[receiver - 1]))


def _is_singular(m: np.ndarray) -> bool:
    n = m.shape[0]
    return abs(np.linalg.det(m)) < DET_RTOL * np.linalg.norm(m) ** n


def assemble_effective_system(
    scheme: SchemeId,
    H: ChannelRealization,
    pattern: CsitPattern | None = None,
) -> EffectiveSystem:
    """Build the plan for ``scheme`` and combine each receiver's slots.

    The plan is built through a :class:`CsitView` on ``pattern`` (the scheme's
    minimal pattern by default).  The combined rows are checked to carry no
    undesired symbol; a violation means a recipe does not match its scheme.
    A nearly singular ``M`` only sets ``singular`` and warns.
    """
    if pattern is None:
        pattern = scheme.binding if scheme.binding is not None else CsitPattern.parse("NN,NN,NN")
    plan = build_plan(scheme, CsitView(H, pattern))
    recipe = recipe_for(scheme)
    G = received_coefficients(plan, H)
    Ms, Ks = [], []
    singular = False
    for r in (1, 2):
        W = recipe.weights(r)
        C = W @ G[r - 1]
        desired = list(recipe.desired[r - 1])
        others = [s for s in range(4) if s not in desired]
        leak = np.abs(C[:, others]).max()
        if leak > SELF_CHECK_RTOL * max(1.0, np.abs(G[r - 1]).max()):
            raise RuntimeError(
                f"{scheme.label}: combined rows at R{r} still contain undesired symbols "
                f"(leak {leak:.3g})"
            )
        m = C[:, desired]
        m.setflags(write=False)
        k = W @ W.T
        k.setflags(write=False)
        Ms.append(m)
        Ks.append(k)
        singular = singular or _is_singular(m)
    if singular:
        warnings.warn(f"{scheme.label}: effective system is numerically singular", SingularSystemWarning, stacklevel=2)
    return EffectiveSystem(recipe, plan, tuple(Ms), tuple(Ks), singular)


@dataclass(frozen=True)
class DecodeResult:
    """Recovered symbols; symbols a scheme does not carry are None."""

    u1: complex | None
    u2: complex | None
    v1: complex | None
    v2: complex | None
    residual: float | None = None

    def as_dict(self) -> dict[str, complex | None]:
        return {n: getattr(self, n) for n in SYMBOLS}


def decode(
    system: EffectiveSystem,
    received: ReceivedBlock,
    truth: SymbolVector | None = None,
) -> DecodeResult:
    """Zero-forcing solve of both receivers' combined observations.

    With ``truth`` given, ``residual`` is the largest absolute error over the
    recovered symbols.
    """
    if system.singular:
        raise SingularSystemError(f"{system.scheme.label}: effective system is singular")
    out: dict[str, complex | None] = dict.fromkeys(SYMBOLS)
    for r in (1, 2):
        W = system.recipe.weights(r)
        z = W @ received.y[r - 1]
        est = np.linalg.solve(system.M[r - 1], z)
        for s, val in zip(system.recipe.desired[r - 1], est):
            out[SYMBOLS[s]] = complex(val)
    residual = None
    if truth is not None:
        ref = truth.as_array()
        residual = max(
            abs(out[name] - ref[k]) for k, name in enumerate(SYMBOLS) if out[name] is not None
        )
    return DecodeResult(residual=residual, **out)
