"""Acceptance criteria, one marked group per criterion.

The terminal summary prints one PASS/FAIL line per criterion.
"""

import subprocess
import sys
import warnings
from fractions import Fraction

import numpy as np
import pytest

from icrsim.channel import ChannelRealization, apply_channel, draw_channel, draw_symbols
from icrsim.classifier import enumerate_patterns, minimal_elements
from icrsim.csit import CsitPattern, all_patterns, dominates
from icrsim.decoder import SingularSystemWarning, assemble_effective_system, decode
from icrsim.dof import estimate_dof, weighted_average_dof
from icrsim.schemes import ICR_SCHEMES, TABLE1, CsitView, SchemeId, build_plan, select_scheme
from oracles import readable

SWEEP = [2.0 ** k for k in (20, 25, 30, 35, 40)]
TRIALS = 2000
P = CsitPattern.parse


def c(label):
    return pytest.mark.criterion(label)


# 1. exact recovery ---------------------------------------------------------

RECOVERY_PATTERNS = [str(p) for p, _ in TABLE1] + ["DD,PP,PN", "DD,PP,NP", "DD,DD,PP"]


@c("1 exact recovery")
@pytest.mark.parametrize("pattern", RECOVERY_PATTERNS)
def test_c1_exact_recovery(pattern):
    p = P(pattern)
    scheme = select_scheme(p).scheme
    worst = 0.0
    for trial in range(1000):
        ch, sym = np.random.SeedSequence([2024, trial]).spawn(2)
        H = draw_channel(int(ch.generate_state(1, dtype=np.uint64)[0]))
        s = draw_symbols(int(sym.generate_state(1, dtype=np.uint64)[0]))
        view = CsitView(H, p)
        plan = build_plan(scheme, view)  # any violation raises
        for (i, _, t), now in view.log:
            assert readable(pattern, i, t, now)
        system = assemble_effective_system(scheme, H, p)
        res = decode(system, apply_channel(plan.signals(s), H), s)
        worst = max(worst, res.residual)
    print(f"{pattern} via {scheme.label}: max residual {worst:.2e}")
    assert worst < 1e-8


# 2. DoF slope of the six schemes --------------------------------------------

@c("2 ICR slope 4/3")
@pytest.mark.parametrize("scheme", ICR_SCHEMES, ids=lambda s: s.value)
def test_c2_icr_slope(scheme):
    est = estimate_dof(scheme, SWEEP, TRIALS, seed=0)
    print(f"{scheme.label}: slope {est.slope:.4f}")
    assert 1.303 <= est.slope <= 1.363


# 3. TDM baseline -------------------------------------------------------------

@c("3 TDM slope 1")
def test_c3_tdm_slope():
    est = estimate_dof(SchemeId.TDM, SWEEP, TRIALS, seed=0)
    print(f"TDM: slope {est.slope:.4f}")
    assert 0.97 <= est.slope <= 1.03


# 4. synergy gap ----------------------------------------------------------------

@c("4 synergy gap")
def test_c4_weighted_average_exact():
    w = weighted_average_dof(P("DD,DD,PP"))
    assert isinstance(w, Fraction) and w == Fraction(56, 45)


@c("4 synergy gap")
def test_c4_slope_exceeds_average():
    est = estimate_dof(SchemeId.SCHEME2, SWEEP, TRIALS, seed=0, pattern=P("DD,DD,PP"))
    gap = est.slope - float(Fraction(56, 45))
    print(f"Scheme 2 on DD,DD,PP: slope {est.slope:.4f}, gap {gap:.4f}")
    assert gap >= 0.08


# 5. classifier equivalence -------------------------------------------------------

@c("5 classifier equivalence")
def test_c5_equivalence():
    atlas = enumerate_patterns()
    assert len(atlas.reports) == 729
    assert set(atlas.theorem1) == set(atlas.synergistic)
    assert atlas.disagreements == []


@c("5 classifier equivalence")
def test_c5_minimal_elements():
    syn = enumerate_patterns().synergistic
    assert set(minimal_elements(syn)) == {p for p, _ in TABLE1}


@c("5 classifier equivalence")
def test_c5_partial_order_exhaustive():
    pats = all_patterns()
    D = np.array([[dominates(a, b) for b in pats] for a in pats])
    assert D.diagonal().all()                            # reflexive
    assert not (D & D.T & ~np.eye(len(pats), dtype=bool)).any()  # antisymmetric
    two_step = (D.astype(np.int32) @ D.astype(np.int32)) > 0
    assert not (two_step & ~D).any()                     # transitive


# 6. degeneracy handling -------------------------------------------------------------

@c("6 degeneracy handling")
def test_c6_identity_singular():
    with pytest.warns(SingularSystemWarning):
        system = assemble_effective_system(SchemeId.SCHEME1, ChannelRealization.constant(1.0))
    assert system.singular


@c("6 degeneracy handling")
def test_c6_no_flags_on_random_channels():
    flags = 0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SingularSystemWarning)
        for seed in range(100_000):
            flags += assemble_effective_system(SchemeId.SCHEME1, draw_channel(seed, 1e-6)).singular
    print(f"singular flags: {flags} / 100000")
    assert flags == 0


# 7. reproducibility -------------------------------------------------------------------

COMMANDS = [
    ["classify", "--pattern", "DD,DD,PP"],
    ["enumerate"],
    ["simulate", "--scheme", "scheme3", "--seed", "5", "--noise", "0.5"],
    ["dof-sweep", "--scheme", "tdm", "--seed", "1"],
    ["dof-sweep", "--pattern", "DD,DD,PP", "--seed", "2", "--trials", "500"],
    ["demo", "--seed", "4"],
]


@c("7 reproducibility")
@pytest.mark.parametrize("fmt", ["csv", "json"])
@pytest.mark.parametrize("argv", COMMANDS, ids=lambda a: a[0])
def test_c7_byte_identical(argv, fmt, tmp_path):
    outs = []
    for k in range(2):
        target = tmp_path / f"run{k}.{fmt}"
        subprocess.run(
            [sys.executable, "-m", "icrsim", *argv, "--format", fmt, "--no-timestamp", "--out", str(target)],
            check=True, capture_output=True,
        )
        outs.append(target.read_bytes())
    assert outs[0] == outs[1]
    assert len(outs[0]) > 0
