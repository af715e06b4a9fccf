import math

import pytest

from fwmindex.liouville.models import four_level_drives, four_level_scheme
from fwmindex.liouville.scheme import (
    DecayChannel,
    Dephasing,
    DipoleCoupling,
    DriveAssignment,
    Field,
    LevelScheme,
    SchemeError,
    State,
    rotating_frame,
)

from conftest import GAMMA_R, four_level


def _lambda_scheme():
    states = (State("g1", 0.0, False), State("g2", 10.0, False), State("e", 1000.0, True))
    couplings = (DipoleCoupling("g1", "e", 1.0, "a"), DipoleCoupling("g2", "e", 1.0, "b"))
    decays = (DecayChannel("e", "g1", 1.0), DecayChannel("e", "g2", 1.0))
    return LevelScheme(states, couplings, decays)


def test_yaml_roundtrip(tmp_path):
    s = four_level_scheme(four_level())
    assert LevelScheme.loads(s.dumps()) == s
    path = tmp_path / "scheme.yaml"
    s.save(path)
    loaded = LevelScheme.load(path)
    assert loaded == s
    # pinned coherence survives as infinity
    assert any(math.isinf(d.rate) for d in loaded.dephasing)


def test_validation_errors():
    st = (State("a", 0.0, False), State("b", 1.0, True))
    with pytest.raises(SchemeError):
        LevelScheme(st + (State("a", 2.0, True),), (), ())
    with pytest.raises(SchemeError):
        LevelScheme(st, (DipoleCoupling("b", "a", 1.0),), ())
    with pytest.raises(SchemeError):
        LevelScheme(st, (DipoleCoupling("a", "x", 1.0),), ())
    with pytest.raises(SchemeError):
        LevelScheme(st, (), (DecayChannel("b", "a", -1.0),))
    with pytest.raises(SchemeError):
        LevelScheme(st, (), (), (Dephasing("a", "a", 1.0),))
    with pytest.raises(SchemeError):
        LevelScheme((State("a", math.nan, False),), (), ())


def test_drive_validation():
    with pytest.raises(SchemeError):
        DriveAssignment((Field("x", 1.0, 1.0, ("a",)), Field("x", 2.0, 1.0, ("b",))))
    with pytest.raises(SchemeError):
        DriveAssignment((Field("x", 1.0, 1.0, ("a",)), Field("y", 2.0, 1.0, ("a",))))
    d = DriveAssignment((Field("x", 1.0, 1.0, ("a",)), Field("p", 2.0, 0.0, ("b",), probe=True, sweep=1.0)))
    assert DriveAssignment.from_dict(d.to_dict()) == d
    assert d.with_rabi(x=3.0).field("x").rabi == 3.0
    assert d.frequencies(0.5)["p"] == 1.5
    with pytest.raises(KeyError):
        d.field("nope")


def test_frame_makes_drives_static():
    s = _lambda_scheme()
    d = DriveAssignment((Field("c", 1000.0, 1.0, ("a",)), Field("p", 992.0, 0.0, ("b",), probe=True, sweep=1.0)))
    th = rotating_frame(s, d, 0.5)
    assert th[2] - th[0] == pytest.approx(1000.0)
    assert th[2] - th[1] == pytest.approx(992.0 - 0.5)


def test_frame_mismatch_raises():
    p = four_level(0.2)
    s = four_level_scheme(p)
    d = four_level_drives(s, p.control_rabi)
    f = d.field("probe2")
    bad = DriveAssignment(tuple(f.__class__(**{**f.__dict__, "frequency": f.frequency + 1e6}) if x.name == "probe2" else x for x in d.fields))
    with pytest.raises(SchemeError):
        rotating_frame(s, bad)
    with pytest.raises(SchemeError):
        bad.check_matching(s)
    d.check_matching(s)
