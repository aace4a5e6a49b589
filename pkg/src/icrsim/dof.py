"""Monte Carlo sum rates, DoF slope fits and the per-state DoF baseline.

Rates are Gaussian-input rates of each receiver's effective system with the
combined (whitened) noise, divided by the 3 channel uses of the block.  Each
transmitter splits its power equally over the symbols it carries, so every
symbol of an ICR scheme gets P/2 and the TDM symbols get P.

The precoders are used exactly as the schemes define them, without
renormalisation.  Resurrection slots multiply a symbol by ratios such as
h11(1)/h11(2); the ratio of two CN(0,1) variables has unbounded second
moment, so the average transmit power of those slots exceeds P (it is only
finite because coefficients below ``eps`` are redrawn) while the median stays
close to P.  This shifts the rate curves by a constant and leaves the slope,
and hence the DoF estimate, unchanged.  :func:`transmit_power_profile`
quantifies the deviation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .channel import DEFAULT_EPS, draw_channel
from .csit import CsitPattern, SlotCsit
from .decoder import EffectiveSystem, assemble_effective_system
from .schemes import SchemeId

__all__ = [
    "DOF_PERFECT",
    "DOF_DELAYED",
    "DOF_NO_CSIT",
    "STATE_DOF",
    "RatePoint",
    "DofEstimate",
    "RedrawBudgetExceeded",
    "UnsupportedStateError",
    "trial_seed",
    "symbol_power",
    "sum_rate",
    "rate_sweep",
    "estimate_dof",
    "weighted_average_dof",
    "transmit_power_profile",
]

# Perfect CSIT: the 4/3 upper bound of the two-user SISO X-channel.
DOF_PERFECT = Fraction(4, 3)
# Delayed CSIT: cited both as achievable and as an upper bound; stored as is.
DOF_DELAYED = Fraction(6, 5)
DOF_NO_CSIT = Fraction(1)

STATE_DOF: dict[SlotCsit, Fraction] = {
    SlotCsit.parse("PP"): DOF_PERFECT,
    SlotCsit.parse("DD"): DOF_DELAYED,
    SlotCsit.parse("NN"): DOF_NO_CSIT,
}

MAX_REDRAWS = 100


class RedrawBudgetExceeded(RuntimeError):
    pass


class UnsupportedStateError(ValueError):
    pass


@dataclass(frozen=True)
class RatePoint:
    P: float
    sum_rate: float
    trials: int
    skipped: int = 0
    scheme: SchemeId | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.sum_rate < 0:
            raise ValueError("sum_rate must be non-negative")

    @property
    def log2P(self) -> float:
        return math.log2(self.P)


@dataclass(frozen=True)
class DofEstimate:
    slope: float
    intercept: float
    points: tuple[RatePoint, ...]
    scheme: SchemeId
    pattern: CsitPattern | None = None


def trial_seed(seed: int, trial: int, attempt: int = 0) -> int:
    """Channel seed of one trial, independent of how trials are scheduled."""
    ss = np.random.SeedSequence([seed, trial, attempt])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def symbol_power(scheme: SchemeId, P: float) -> float:
    """Per-symbol power: P shared equally by the symbols of one transmitter."""
    return P if scheme is SchemeId.TDM else P / 2


def _gram_eigenvalues(system: EffectiveSystem) -> np.ndarray:
    # eigenvalues of M^H K^-1 M, both receivers concatenated
    out = []
    for m, k in zip(system.M, system.K):
        a = m.conj().T @ np.linalg.solve(k, m)
        out.append(np.clip(np.linalg.eigvalsh(a), 0.0, None))
    return np.concatenate(out)


def _collect(scheme, trials, seed, pattern, eps):
    """Eigenvalue stacks of ``trials`` non-singular realizations + skip count."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    eig = []
    skipped = 0
    for trial in range(trials):
        for attempt in range(MAX_REDRAWS):
            H = draw_channel(trial_seed(seed, trial, attempt), eps)
            system = assemble_effective_system(scheme, H, pattern)
            if not system.singular:
                break
            skipped += 1
        else:
            raise RedrawBudgetExceeded(
                f"trial {trial}: {MAX_REDRAWS} consecutive singular realizations"
            )
        eig.append(_gram_eigenvalues(system))
    return np.array(eig), skipped


def _rate(eig: np.ndarray, p_sym: float) -> float:
    per_trial = np.log2(1.0 + p_sym * eig).sum(axis=1) / 3.0
    return float(per_trial.mean())


def rate_sweep(
    scheme: SchemeId,
    powers: Sequence[float],
    trials: int,
    seed: int,
    pattern: CsitPattern | None = None,
    eps: float = DEFAULT_EPS,
) -> list[RatePoint]:
    """Sum rates at several powers over one common set of channel draws."""
    if any(not P > 0 for P in powers):
        raise ValueError("powers must be positive")
    eig, skipped = _collect(scheme, trials, seed, pattern, eps)
    return [
        RatePoint(float(P), _rate(eig, symbol_power(scheme, P)), trials, skipped, scheme)
        for P in powers
    ]


def sum_rate(
    scheme: SchemeId,
    P: float,
    trials: int,
    seed: int,
    pattern: CsitPattern | None = None,
    eps: float = DEFAULT_EPS,
) -> RatePoint:
    """Average sum rate in bits per channel use at transmit power ``P``.

    Singular realizations are redrawn (``skipped`` counts them) so they do not
    bias the average.
    """
    return rate_sweep(scheme, [P], trials, seed, pattern, eps)[0]


def estimate_dof(
    scheme: SchemeId,
    powers: Sequence[float],
    trials: int,
    seed: int,
    pattern: CsitPattern | None = None,
    eps: float = DEFAULT_EPS,
) -> DofEstimate:
    """Least-squares slope of sum rate against log2 P."""
    powers = [float(P) for P in powers]
    if len(powers) < 2:
        raise ValueError("need at least two powers to fit a slope")
    if len(set(powers)) != len(powers):
        raise ValueError("powers must be distinct")
    if any(P <= 1 for P in powers):
        raise ValueError("powers must exceed 1")
    points = rate_sweep(scheme, powers, trials, seed, pattern, eps)
    x = np.array([p.log2P for p in points])
    y = np.array([p.sum_rate for p in points])
    slope, intercept = np.polyfit(x, y, 1)
    return DofEstimate(float(slope), float(intercept), tuple(points), scheme, pattern)


def weighted_average_dof(p: CsitPattern) -> Fraction:
    """DoF of the three slots used independently: the mean per-state DoF."""
    total = Fraction(0)
    for slot in p.slots:
        try:
            total += STATE_DOF[slot]
        except KeyError:
            raise UnsupportedStateError(
                f"no individual DoF for slot state {slot}; supported: PP, DD, NN"
            ) from None
    return total / len(p.slots)


def transmit_power_profile(
    scheme: SchemeId,
    trials: int = 1000,
    seed: int = 0,
    eps: float = DEFAULT_EPS,
) -> dict[str, np.ndarray]:
    """Mean and median of |X_j(t)|^2 per slot and transmitter at unit total
    power per slot for the creation slots (symbol power 1/2, i.e. P = 1).

    Returns arrays of shape (3, 2) under the keys ``"mean"`` and ``"median"``.
    """
    p_sym = symbol_power(scheme, 1.0)
    powers = []
    for trial in range(trials):
        H = draw_channel(trial_seed(seed, trial), eps)
        system = assemble_effective_system(scheme, H)
        # independent unit-energy symbols: E|X_j(t)|^2 = p_sym * sum_m |f_mj(t)|^2
        powers.append(p_sym * (np.abs(system.plan.f) ** 2).sum(axis=1))
    powers = np.array(powers)
    return {"mean": powers.mean(axis=0), "median": np.median(powers, axis=0)}
