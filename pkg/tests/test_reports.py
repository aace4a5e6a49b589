import pytest
from hypothesis import given, settings, strategies as st

from icrsim import reports
from icrsim.classifier import classify, enumerate_patterns
from icrsim.csit import ALL_SLOT_STATES, CsitPattern
from icrsim.dof import estimate_dof
from icrsim.lab import simulate_trial
from icrsim.schemes import ICR_SCHEMES, SchemeId

patterns = st.tuples(*[st.sampled_from(ALL_SLOT_STATES)] * 3).map(CsitPattern)


@pytest.fixture(scope="module")
def atlas():
    return enumerate_patterns()


@pytest.fixture(scope="module")
def estimate():
    return estimate_dof(SchemeId.SCHEME1, [2.0 ** 10, 2.0 ** 20], 20, seed=1,
                        pattern=CsitPattern.parse("DD,PP,NP"))


def test_atlas_csv_fixed_point(atlas):
    text = reports.emit_atlas_csv(atlas.reports)
    assert text.splitlines()[0] == ",".join(reports.ATLAS_COLUMNS)
    assert len(text.splitlines()) == 730
    assert reports.emit_atlas_csv(reports.parse_atlas_csv(text)) == text


def test_atlas_json_fixed_point(atlas):
    text = reports.emit_atlas_json(atlas.reports, atlas.summary())
    parsed, rest = reports.parse_atlas_json(text)
    assert rest == atlas.summary()
    assert reports.emit_atlas_json(parsed, rest) == text


def test_atlas_timestamp_is_ignored_on_parse(atlas):
    a = reports.emit_atlas_csv(atlas.reports[:5], generated="2020-01-01T00:00:00+00:00")
    b = reports.emit_atlas_csv(atlas.reports[:5])
    assert a != b and a.endswith(b)
    assert reports.emit_atlas_csv(reports.parse_atlas_csv(a)) == b


def test_atlas_csv_rejects_contradiction():
    text = reports.emit_atlas_csv([classify(CsitPattern.parse("DD,PN,NP"))])
    with pytest.raises(ValueError):
        reports.parse_atlas_csv(text.replace("Synergistic", "NotCovered"))


def test_csv_rejects_wrong_columns():
    with pytest.raises(ValueError):
        reports.parse_atlas_csv("a,b\n1,2\n")


def test_sweep_csv_fixed_point(estimate):
    text = reports.emit_sweep_csv(estimate)
    back = reports.parse_sweep_csv(text)
    assert back.slope == estimate.slope and back.points == estimate.points
    assert back.pattern == estimate.pattern
    assert reports.emit_sweep_csv(back) == text


def test_sweep_json_fixed_point(estimate):
    text = reports.emit_sweep_json(estimate, generated="x")
    back = reports.parse_sweep_json(text)
    assert reports.emit_sweep_json(back, generated="x") == text


@pytest.mark.parametrize("scheme", list(SchemeId))
def test_trace_fixed_points(scheme):
    trace = simulate_trial(scheme, seed=2, noise_power=0.1, P=2.0 ** 10)
    for emit, parse in ((reports.emit_trace_csv, reports.parse_trace_csv),
                        (reports.emit_trace_json, reports.parse_trace_json)):
        text = emit(trace)
        back = parse(text)
        assert back["values"] == trace["values"]
        assert emit(back) == text


@given(st.lists(patterns, min_size=1, max_size=20))
@settings(max_examples=50)
def test_atlas_roundtrip_property(pats):
    reps = [classify(p) for p in pats]
    text = reports.emit_atlas_csv(reps)
    assert reports.emit_atlas_csv(reports.parse_atlas_csv(text)) == text
    js = reports.emit_atlas_json(reps)
    assert reports.emit_atlas_json(*reports.parse_atlas_json(js)) == js


@given(st.sampled_from(ICR_SCHEMES), st.integers(0, 2**20), st.floats(0, 10))
@settings(max_examples=30, deadline=None)
def test_trace_roundtrip_property(scheme, seed, noise):
    trace = simulate_trial(scheme, seed, noise_power=noise, P=2.0 ** 8)
    text = reports.emit_trace_csv(trace)
    assert reports.emit_trace_csv(reports.parse_trace_csv(text)) == text
