import pytest

from rigdesign.coverage import (KMH_TO_MM_S, MotionProfile, coverage_sweep, frames_per_target,
                                kmh_to_mm_s, max_processing_time, required_fov_v)
from rigdesign.errors import DomainError

from oracles import min_frames_seen


def test_kmh_conversion_exact():
    assert KMH_TO_MM_S == 1_000_000 / 3600
    assert kmh_to_mm_s(3.6) == pytest.approx(1000)


@pytest.mark.parametrize("v,expected", [(1388, 3), (277.8, 16), (972.2, 4)])
def test_frames_per_target(v, expected):
    assert frames_per_target(MotionProfile(v, 10), 450.09) == expected


@pytest.mark.parametrize("kmh", [1, 1.5, 2.5, 3.5, 5, 0.7, 7.3])
def test_frames_match_simulation(kmh):
    p = MotionProfile.from_kmh(kmh, frame_rate_hz=10)
    assert frames_per_target(p, 450.09) == min_frames_seen(450.09, p.velocity_mm_s, 10)


def test_processing_budget():
    assert max_processing_time(MotionProfile(1400, 10, required_views=3), 581.41) == pytest.approx(138.4, abs=0.05)
    assert max_processing_time(MotionProfile(1400, 10, required_views=1), 581.41) == pytest.approx(415.3, abs=0.05)
    fast, slow = MotionProfile(1400), MotionProfile(700)
    assert max_processing_time(slow, 500) == pytest.approx(2 * max_processing_time(fast, 500))


def test_required_fov_v():
    assert required_fov_v(MotionProfile(1400, 10, 100, 1)) == pytest.approx(140)
    assert required_fov_v(MotionProfile(1400, 10, 100, 3)) == pytest.approx(420)


def test_budget_and_fov_are_inverse():
    p = MotionProfile(1234, 10, 87.5, 4)
    assert max_processing_time(p, required_fov_v(p)) == pytest.approx(87.5)


@pytest.mark.parametrize("kwargs", [dict(velocity_mm_s=0), dict(velocity_mm_s=1, required_views=0),
                                    dict(velocity_mm_s=1, frame_rate_hz=-1)])
def test_profile_validation(kwargs):
    with pytest.raises(DomainError):
        MotionProfile(**kwargs)


def test_sweep_rows():
    rows = coverage_sweep(450.09, [1, 5])
    assert [r.frames for r in rows] == [16, 3]
    assert rows[1].advance_per_frame_mm == pytest.approx(138.89, abs=0.01)
