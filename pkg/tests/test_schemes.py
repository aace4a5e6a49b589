import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from icrsim.channel import ChannelRealization, SymbolVector, apply_channel, draw_channel
from icrsim.csit import ALL_SLOT_STATES, CsitPattern, dominates
from icrsim.schemes import (
    ICR_SCHEMES,
    TABLE1,
    CsitAccessError,
    CsitView,
    PatternMismatchError,
    SchemeId,
    TransmitPlan,
    build_plan,
    build_tdm_plan,
    select_scheme,
)
from oracles import readable

seeds = st.integers(min_value=0, max_value=2**32 - 1)
patterns = st.tuples(*[st.sampled_from(ALL_SLOT_STATES)] * 3).map(CsitPattern)
P = CsitPattern.parse


def plan_for(scheme, H, pattern=None):
    view = CsitView(H, pattern or scheme.binding)
    return build_plan(scheme, view), view


def test_bindings():
    expected = {
        SchemeId.SCHEME1: "DD,PN,NP",
        SchemeId.SCHEME1_MIRROR: "DD,NP,PN",
        SchemeId.SCHEME2: "ND,DN,PP",
        SchemeId.SCHEME2_MIRROR: "DN,ND,PP",
        SchemeId.SCHEME3: "DN,PD,NP",
        SchemeId.SCHEME3_MIRROR: "ND,DP,PN",
    }
    for s, p in expected.items():
        assert str(s.binding) == p
        assert s.mirror.mirror is s
        assert s.mirror.binding == s.binding.swapped()


@pytest.mark.parametrize("text, scheme", [
    ("scheme1", SchemeId.SCHEME1), ("Scheme 2 (mirror)", SchemeId.SCHEME2_MIRROR),
    ("scheme3m", SchemeId.SCHEME3_MIRROR), ("tdm", SchemeId.TDM),
])
def test_scheme_parse(text, scheme):
    assert SchemeId.parse(text) is scheme


def test_scheme_parse_rejects():
    with pytest.raises(ValueError):
        SchemeId.parse("scheme9")


def test_scheme1_identity_channel():
    plan, _ = plan_for(SchemeId.SCHEME1, ChannelRealization.constant(1.0))
    u1, u2, v1, v2 = 1.0, 2.0, 3.0, 4.0
    x = plan.signals(SymbolVector(u1, u2, v1, v2))
    assert x[0, 0] == u1 + v1 and x[0, 1] == u2 + v2
    assert x[1, 0] == v1 and x[1, 1] == v2
    assert x[2, 0] == u1 and x[2, 1] == u2


def test_scheme1_equations_on_random_channel():
    H = draw_channel(5)
    h = H.coef
    plan, _ = plan_for(SchemeId.SCHEME1, H)
    s = SymbolVector(1 + 1j, 2 - 1j, -1 + 0.5j, 0.3j)
    x = plan.signals(s)
    assert np.isclose(x[1, 0], h(1, 1, 1) / h(1, 1, 2) * s.v1)
    assert np.isclose(x[1, 1], h(1, 2, 1) / h(1, 2, 2) * s.v2)
    assert np.isclose(x[2, 0], h(2, 1, 1) / h(2, 1, 3) * s.u1)
    assert np.isclose(x[2, 1], h(2, 2, 1) / h(2, 2, 3) * s.u2)


def test_scheme1_resurrects_slot1_interference():
    # R1 sees in slot 2 exactly the v-part it saw in slot 1
    H = draw_channel(8)
    plan, _ = plan_for(SchemeId.SCHEME1, H)
    s = SymbolVector(0, 0, 1 - 2j, 0.7 + 0.1j)
    rx = apply_channel(plan.signals(s), H)
    assert np.isclose(rx.sample(1, 1), rx.sample(1, 2))


def test_scheme2_example_coefficient():
    H = ChannelRealization.constant(h21_1=2, h21_3=4)
    plan, _ = plan_for(SchemeId.SCHEME2, H)
    assert plan.coef(1, 1, 3) == pytest.approx(0.5)
    assert plan.formulas[(1, 1, 3)] == "h21(3)^-1 h21(1)"


def test_scheme1_on_withheld_pattern_raises_at_slot2():
    view = CsitView(draw_channel(0), P("DD,NN,NP"))
    with pytest.raises(CsitAccessError) as exc:
        build_plan(SchemeId.SCHEME1, view)
    assert exc.value.slot == 2
    assert exc.value.coef[2] == 2


def test_every_scheme_rejects_every_non_dominating_pattern():
    # exhaustive over 729 patterns: success iff the pattern dominates the binding
    from icrsim.csit import all_patterns
    H = draw_channel(2)
    for scheme in ICR_SCHEMES:
        for p in all_patterns():
            try:
                build_plan(scheme, CsitView(H, p))
                ok = True
            except (CsitAccessError, PatternMismatchError):
                ok = False
            assert ok == dominates(p, scheme.binding), (scheme, str(p))


def test_higher_pattern_reads_nothing_extra():
    H = draw_channel(4)
    for scheme in ICR_SCHEMES:
        _, v_min = plan_for(scheme, H)
        _, v_top = plan_for(scheme, H, P("PP,PP,PP"))
        assert v_min.log == v_top.log


def test_tdm_plan():
    H = ChannelRealization.constant(1.0)
    view = CsitView(H, P("NN,NN,NN"))
    plan = build_tdm_plan(view)
    assert view.log == []
    assert plan.coef(2, 1, 1) == 0 and plan.coef(1, 2, 2) == 0
    s = SymbolVector(1 + 2j, 3.0, 5.0, -1j)
    rx = apply_channel(plan.signals(s), H)
    assert rx.sample(1, 1) == s.u1
    assert rx.sample(2, 2) == s.v2
    assert rx.sample(1, 3) == s.u2


def test_plan_json_roundtrip():
    plan, _ = plan_for(SchemeId.SCHEME3, draw_channel(6))
    back = TransmitPlan.from_json(plan.to_json())
    assert back.scheme is SchemeId.SCHEME3
    assert np.array_equal(back.f, plan.f)
    assert back.to_json() == plan.to_json()


@pytest.mark.parametrize("text, scheme, minimal", [
    ("DD,PN,NP", SchemeId.SCHEME1, "DD,PN,NP"),
    ("DD,DD,PP", SchemeId.SCHEME2_MIRROR, "DN,ND,PP"),
    ("PP,PP,PP", SchemeId.SCHEME1, "DD,PN,NP"),
])
def test_select_scheme(text, scheme, minimal):
    m = select_scheme(P(text))
    assert m.scheme is scheme and str(m.minimal) == minimal


def test_select_scheme_scheme2_family_for_dd_dd_pp():
    assert select_scheme(P("DD,DD,PP")).scheme in (SchemeId.SCHEME2, SchemeId.SCHEME2_MIRROR)


@pytest.mark.parametrize("text", ["NN,DD,PP", "ND,PD,DP", "NN,NN,NN"])
def test_select_scheme_not_covered(text):
    assert select_scheme(P(text)) is None


def test_table1_self_selection():
    for minimal, scheme in TABLE1:
        m = select_scheme(minimal)
        assert m.scheme is scheme and m.minimal == minimal


@given(patterns, patterns)
def test_select_scheme_monotone(p, q):
    if select_scheme(p) is not None and dominates(q, p):
        assert select_scheme(q) is not None


@given(seeds, st.sampled_from(ICR_SCHEMES), patterns)
@settings(max_examples=200)
def test_access_log_replays(seed, scheme, p):
    view = CsitView(draw_channel(seed), p)
    try:
        build_plan(scheme, view)
    except (CsitAccessError, PatternMismatchError):
        pass
    for (i, j, t), now in view.log:
        assert readable(str(p), i, t, now)


@given(seeds, st.sampled_from(ICR_SCHEMES))
@settings(max_examples=100)
def test_mirror_symmetry(seed, scheme):
    H = draw_channel(seed)
    plan, _ = plan_for(scheme, H)
    mirror, _ = plan_for(scheme.mirror, H.swapped())
    # u <-> v swaps the message index of every precoder
    assert np.allclose(mirror.f[:, 0, :], plan.f[:, 1, :], rtol=1e-12, atol=0)
    assert np.allclose(mirror.f[:, 1, :], plan.f[:, 0, :], rtol=1e-12, atol=0)
