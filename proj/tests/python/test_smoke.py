import math

import pytest

import gridcode


@pytest.fixture(scope="module")
def ieee14():
    return gridcode.fixture_grid("ieee14")


def test_fixture_names():
    assert "ieee14" in gridcode.fixture_names()


def test_ieee14_k2_optimum(ieee14):
    assert len(ieee14.transformers) == 5
    m = gridcode.build_monitor(ieee14, k=2)
    assert len(m.candidates) == 40
    assert len(m.viable) == 40
    s = gridcode.solve(m)
    assert s["selected"] == [8, 27, 35]
    assert s["optimal"]
    assert gridcode.verify(m, s["selected"])["passed"]


def test_greedy_is_a_code(ieee14):
    m = gridcode.build_monitor(ieee14, k=2)
    s = gridcode.solve(m, solver="greedy")
    assert gridcode.verify(m, s["selected"])["passed"]


def test_signatures_and_decode(ieee14):
    m = gridcode.build_monitor(ieee14, k=2)
    p = gridcode.assign_codes(m, [8, 27, 35])
    assert p.signatures == ["AB", "ABC", "A", "B", "BC"]
    assert gridcode.decode(p, "A,B") == "T1"
    assert gridcode.decode(p, "AC") is None


def test_not_a_code(ieee14):
    m = gridcode.build_monitor(ieee14, k=2)
    with pytest.raises(gridcode.NotACode):
        gridcode.assign_codes(m, [8])


def test_round_trip(ieee14):
    m = gridcode.build_monitor(ieee14, k=1)
    again = gridcode.MonitorInstance.from_json(m.to_json())
    assert again.observers == m.observers
    assert gridcode.Grid.from_json(ieee14.to_json()).transformers[0].name == "T1"


def test_snr():
    assert gridcode.snr_db([0.5, 1.5]) == pytest.approx(10 * math.log10(2 ** 0.5), abs=1e-9)
    with pytest.raises(gridcode.DegenerateSignal):
        gridcode.snr_db([1.0] * 30)
    near = gridcode.snr_series(gridcode.synth_signal(hop=1, seed=3))
    far = gridcode.snr_series(gridcode.synth_signal(hop=3, seed=3))
    assert near["band_width"] > far["band_width"]


def test_demo(ieee14):
    m = gridcode.build_monitor(ieee14, k=2)
    p = gridcode.assign_codes(m, [8, 27, 35])
    for name in m.targets:
        assert gridcode.run_demo(ieee14, p, name)["identified"] == name


def test_lp_export(ieee14):
    lp = gridcode.export_lp(gridcode.build_monitor(ieee14, k=2))
    assert lp.count(" color_") == 5
    assert lp.count(" unique_") == 10


def test_unknown_fixture():
    with pytest.raises(gridcode.Error):
        gridcode.fixture_grid("nope")
