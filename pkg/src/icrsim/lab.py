"""Single-trial traces and the printed walkthroughs of Schemes 1-3."""

from __future__ import annotations

import math

import numpy as np

from .channel import ChannelRealization, apply_channel, draw_channel, draw_symbols
from .csit import CsitPattern
from .decoder import SYMBOLS, assemble_effective_system, decode, received_coefficients
from .dof import symbol_power
from .schemes import CsitView, SchemeId, build_plan

__all__ = ["trial_seeds", "simulate_trial", "render_walkthrough", "demo_text"]


def trial_seeds(seed: int) -> tuple[int, int, int]:
    """Independent (channel, symbol, noise) seeds derived from one seed."""
    children = np.random.SeedSequence(seed).spawn(3)
    return tuple(int(c.generate_state(1, dtype=np.uint64)[0]) for c in children)


def simulate_trial(
    scheme: SchemeId,
    seed: int,
    pattern: CsitPattern | None = None,
    noise_power: float = 0.0,
    P: float | None = None,
) -> dict:
    """Run one block end to end and return a trace (see :mod:`icrsim.reports`).

    Symbols have unit energy unless ``P`` is given, in which case they are
    scaled to the scheme's per-symbol power.
    """
    if pattern is None:
        pattern = scheme.binding or CsitPattern.parse("NN,NN,NN")
    ch_seed, sym_seed, noise_seed = trial_seeds(seed)
    H = draw_channel(ch_seed)
    view = CsitView(H, pattern)
    plan = build_plan(scheme, view)
    system = assemble_effective_system(scheme, H, pattern)
    symbols = draw_symbols(sym_seed)
    if P is not None:
        symbols = symbols.scaled(math.sqrt(symbol_power(scheme, P)))
    rx = apply_channel(plan.signals(symbols), H, noise_power, noise_seed)
    result = decode(system, rx, symbols)

    values = []
    for t in (1, 2, 3):
        for i in (1, 2):
            for j in (1, 2):
                values.append(("channel", f"h{i}{j}({t})", H.coef(i, j, t)))
    for t in (1, 2, 3):
        for i in (1, 2):
            for j in (1, 2):
                values.append(("plan", f"f{i}{j}({t})", plan.coef(i, j, t)))
    for name, z in zip(SYMBOLS, symbols.as_array()):
        values.append(("symbol", name, complex(z)))
    for i in (1, 2):
        for t in (1, 2, 3):
            values.append(("received", f"Y{i}({t})", rx.sample(i, t)))
    for i in (1, 2):
        for t in (1, 2, 3):
            values.append(("noise", f"N{i}({t})", complex(math.sqrt(noise_power) * rx.noise[i - 1, t - 1])))
    for r in (1, 2):
        values.append(("det", f"R{r}", system.det(r)))
    for name, z in result.as_dict().items():
        if z is not None:
            values.append(("recovered", name, z))
    values.append(("residual", "max_abs", complex(result.residual)))

    meta = {
        "command": "simulate",
        "scheme": scheme.value,
        "pattern": str(pattern),
        "seed": str(seed),
        "noise_power": repr(float(noise_power)),
        "P": repr(float(P)) if P is not None else "",
        "csit_reads": str(len(view.log)),
    }
    return {"meta": meta, "values": values}


def _c(z: complex) -> str:
    return f"({z.real:+.4f}{z.imag:+.4f}j)"


def _combo(coeffs, names=SYMBOLS) -> str:
    terms = [f"{_c(complex(c))}*{n}" for c, n in zip(coeffs, names) if abs(c) > 1e-12]
    return " + ".join(terms) if terms else "0"


def render_walkthrough(scheme: SchemeId, H: ChannelRealization, symbols) -> str:
    """Slot-by-slot transmit/receive equations of one scheme, with numbers."""
    pattern = scheme.binding
    view = CsitView(H, pattern)
    plan = build_plan(scheme, view)
    system = assemble_effective_system(scheme, H, pattern)
    rx = apply_channel(plan.signals(symbols), H, 0.0)
    G = received_coefficients(plan, H)
    out = [f"== {scheme.label}  pattern ({pattern}) =="]
    for t in (1, 2, 3):
        out.append(f"slot {t}  CSIT {pattern.slots[t - 1]}")
        for j in (1, 2):
            symbolic, numeric = [], []
            for i, name in ((1, f"u{j}"), (2, f"v{j}")):
                formula = plan.formulas.get((i, j, t))
                if formula is not None:
                    symbolic.append(name if formula == "1" else f"{formula} {name}")
                    numeric.append(f"{_c(plan.coef(i, j, t))}*{name}")
            out.append(f"  X_{j}({t}) = " + (" + ".join(symbolic) or "0"))
            if numeric:
                out.append("         = " + " + ".join(numeric))
        for i in (1, 2):
            out.append(f"  Y_{i}({t}) = {_combo(G[i - 1, t - 1])}")
    reads = ", ".join(f"h{i}{j}({tc})@{now}" for (i, j, tc), now in view.log)
    out.append(f"CSIT reads: {reads}")
    result = decode(system, rx, symbols)
    for r in (1, 2):
        names = [SYMBOLS[s] for s in system.recipe.desired[r - 1]]
        out.append(f"R{r}:")
        for row, m in zip(system.recipe.rows[r - 1], system.M[r - 1]):
            out.append(f"  {row}  ->  {_combo(m, names)}")
        out.append(f"  det M = {_c(system.det(r))}")
        out.append("  recovered " + ", ".join(f"{n}={_c(result.as_dict()[n])}" for n in names))
    out.append(f"max residual {result.residual:.3e}")
    return "\n".join(out) + "\n"


def demo_text(seed: int = 0) -> str:
    ch_seed, sym_seed, _ = trial_seeds(seed)
    H = draw_channel(ch_seed)
    symbols = draw_symbols(sym_seed)
    header = [f"seed {seed}", "symbols " + ", ".join(f"{n}={_c(z)}" for n, z in zip(SYMBOLS, symbols.as_array())), ""]
    parts = [render_walkthrough(s, H, symbols) for s in (SchemeId.SCHEME1, SchemeId.SCHEME2, SchemeId.SCHEME3)]
    return "\n".join(header) + "\n".join(parts)
