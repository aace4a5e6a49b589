"""Block-fading two-user SISO X-channel over three slots.

Index conventions used throughout the package (all 1-based in the public
accessors, 0-based in the arrays):

* ``ChannelRealization.h[t, i, j]`` is h_ij(t+1): slot, receiver, transmitter.
* transmit signals ``x[t, j]`` are X_j(t+1).
* ``ReceivedBlock.y[i, t]`` is Y_i(t+1).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "DEFAULT_EPS",
    "ChannelRealization",
    "SymbolVector",
    "ReceivedBlock",
    "draw_channel",
    "draw_symbols",
    "apply_channel",
    "crandn",
]

NUM_SLOTS = 3
DEFAULT_EPS = 1e-6


def crandn(rng: np.random.Generator, shape) -> np.ndarray:
    """Standard circularly-symmetric complex Gaussian samples, E|z|^2 = 1."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class ChannelRealization:
    """Channel coefficients h_ij(t) of one three-slot block."""

    h: np.ndarray
    seed: int | None = None
    eps: float = DEFAULT_EPS

    def __post_init__(self):
        h = _frozen(self.h)
        if h.shape != (NUM_SLOTS, 2, 2):
            raise ValueError(f"channel array must have shape (3, 2, 2), got {h.shape}")
        object.__setattr__(self, "h", h)

    def coef(self, i: int, j: int, t: int) -> complex:
        """h_ij(t), 1-based receiver ``i``, transmitter ``j`` and slot ``t``."""
        return complex(self.h[t - 1, i - 1, j - 1])

    @classmethod
    def constant(cls, value: complex = 1.0, **overrides: complex) -> "ChannelRealization":
        """All coefficients equal ``value`` except named ones, e.g. ``h21_3=4``."""
        h = np.full((NUM_SLOTS, 2, 2), value, dtype=complex)
        for name, v in overrides.items():
            if len(name) != 5 or not name.startswith("h") or name[3] != "_":
                raise ValueError(f"coefficient names look like 'h21_3', got {name!r}")
            i, j, t = int(name[1]), int(name[2]), int(name[4])
            h[t - 1, i - 1, j - 1] = v
        return cls(h)

    def swapped(self) -> "ChannelRealization":
        """Exchange the two receivers (rows of every slot matrix)."""
        return ChannelRealization(self.h[:, ::-1, :], seed=self.seed, eps=self.eps)

    # h[t] is serialized row-major as [h11, h12, h21, h22], each as [re, im].
    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "eps": self.eps,
            "h": [
                [[float(c.real), float(c.imag)] for c in self.h[t].reshape(-1)]
                for t in range(NUM_SLOTS)
            ],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "ChannelRealization":
        h = np.array(
            [[complex(re, im) for re, im in slot] for slot in doc["h"]], dtype=complex
        ).reshape(NUM_SLOTS, 2, 2)
        return cls(h, seed=doc.get("seed"), eps=doc.get("eps", DEFAULT_EPS))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "ChannelRealization":
        return cls.from_dict(json.loads(text))


def draw_channel(seed: int, eps: float = DEFAULT_EPS) -> ChannelRealization:
    """Draw 12 i.i.d. CN(0,1) coefficients, redrawing any with ``|h| < eps``.

    Each redraw is a fresh sample from the same seeded stream, so the result is
    fully determined by ``seed``.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    if eps >= 1:
        raise ValueError(f"eps={eps} is not small; it would distort the channel law")
    rng = np.random.default_rng(seed)
    h = crandn(rng, (NUM_SLOTS, 2, 2))
    small = np.abs(h) < eps
    while small.any():
        h[small] = crandn(rng, int(small.sum()))
        small = np.abs(h) < eps
    return ChannelRealization(h, seed=seed, eps=eps)


@dataclass(frozen=True)
class SymbolVector:
    """The four data symbols: u1, u2 for R1 (from T1, T2); v1, v2 for R2."""

    u1: complex
    u2: complex
    v1: complex
    v2: complex

    NAMES = ("u1", "u2", "v1", "v2")

    def as_array(self) -> np.ndarray:
        return np.array([self.u1, self.u2, self.v1, self.v2], dtype=complex)

    @classmethod
    def from_array(cls, a) -> "SymbolVector":
        u1, u2, v1, v2 = (complex(z) for z in a)
        return cls(u1, u2, v1, v2)

    def scaled(self, factor: float) -> "SymbolVector":
        return SymbolVector.from_array(self.as_array() * factor)


_QPSK = np.array([1 + 1j, -1 + 1j, -1 - 1j, 1 - 1j]) / np.sqrt(2)


def draw_symbols(seed: int) -> SymbolVector:
    """Four independent unit-energy QPSK symbols."""
    rng = np.random.default_rng(seed)
    return SymbolVector.from_array(_QPSK[rng.integers(0, 4, size=4)])


@dataclass(frozen=True, eq=False)
class ReceivedBlock:
    """Received samples Y_i(t) of one block.

    ``noise`` holds the unit-variance draws; the noise actually added is
    ``sqrt(noise_power) * noise``, so ``clean`` and ``y`` can be compared on
    the same realization.
    """

    y: np.ndarray
    clean: np.ndarray
    noise: np.ndarray
    noise_power: float = 0.0
    noise_seed: int | None = None

    def __post_init__(self):
        for name in ("y", "clean", "noise"):
            arr = _frozen(getattr(self, name))
            if arr.shape != (2, NUM_SLOTS):
                raise ValueError(f"{name} must have shape (2, 3), got {arr.shape}")
            object.__setattr__(self, name, arr)
        if self.noise_power < 0:
            raise ValueError("noise_power must be non-negative")

    def sample(self, i: int, t: int) -> complex:
        """Y_i(t), 1-based."""
        return complex(self.y[i - 1, t - 1])


def apply_channel(
    x,
    H: ChannelRealization,
    noise_power: float = 0.0,
    noise_seed: int | None = 0,
) -> ReceivedBlock:
    """Y_i(t) = h_i1(t) X_1(t) + h_i2(t) X_2(t) + N_i(t).

    ``x`` has shape (3, 2): ``x[t, j]`` is the signal of transmitter j+1 in
    slot t+1.
    """
    x = np.asarray(x, dtype=complex)
    if x.shape != (NUM_SLOTS, 2):
        raise ValueError(f"transmit signals must have shape (3, 2), got {x.shape}")
    if noise_power < 0:
        raise ValueError("noise_power must be non-negative")
    clean = np.einsum("tij,tj->it", H.h, x)
    noise = crandn(np.random.default_rng(noise_seed), (2, NUM_SLOTS))
    y = clean + np.sqrt(noise_power) * noise if noise_power > 0 else clean.copy()
    return ReceivedBlock(y=y, clean=clean, noise=noise, noise_power=noise_power, noise_seed=noise_seed)
