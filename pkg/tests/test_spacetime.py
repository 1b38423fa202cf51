import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from coverlaw import instruments as ins
from coverlaw import spacetime as stime
from coverlaw.spacetime import FrameTransform, Order, SpacetimeRegion

seeds = st.integers(0, 2 ** 63 - 1)


def pair():
    return (SpacetimeRegion.box((0, 1), (0, 1)), SpacetimeRegion.box((0, 1), (10, 11)))


class TestGeometry:
    def test_spacelike_pair(self):
        O1, O2 = pair()
        assert stime.spacelike(O1, O2) and stime.spacelike(O2, O1)
        assert not stime.timelike_ordered(O1, O2)

    def test_timelike_pair(self):
        O1 = SpacetimeRegion.box((0, 1), (0, 1))
        O2 = SpacetimeRegion.box((5, 6), (0, 1))
        assert not stime.spacelike(O1, O2)
        assert stime.timelike_ordered(O1, O2)
        assert stime.reordering_boost(O1, O2) is None

    def test_touching_light_cone_not_spacelike(self):
        O1 = SpacetimeRegion.box((0, 1), (0, 1))
        O2 = SpacetimeRegion.box((2, 3), (2, 3))
        assert not stime.spacelike(O1, O2)

    def test_region_validation(self):
        with pytest.raises(ValueError):
            SpacetimeRegion([1, 0], [0, 1])

    def test_boost_known_value(self):
        g = FrameTransform.boost(0.5)
        t, x = g.apply(np.array([[0.0, 2.0]]))[0]
        assert abs(t + 2 / np.sqrt(3)) < 1e-12
        assert abs(x - 4 / np.sqrt(3)) < 1e-12

    def test_boost_rejects_superluminal(self):
        with pytest.raises(ValueError):
            FrameTransform.boost(1.0)

    def test_boost_composition_1d(self):
        a, b = FrameTransform.boost(0.3), FrameTransform.boost(0.4)
        c = a.compose(b)
        w = (0.3 + 0.4) / (1 + 0.12)
        np.testing.assert_allclose(c.lorentz(), stime.boost_matrix([w]), atol=1e-12)

    def test_temporal_order_flips(self):
        O1, O2 = pair()
        assert stime.temporal_order(FrameTransform.identity(), O1, O2) is Order.OVERLAPPING
        assert stime.temporal_order(FrameTransform.boost(0.9), O1, O2) is Order.AFTER
        assert stime.temporal_order(FrameTransform.boost(-0.9), O1, O2) is Order.BEFORE

    def test_reordering_boost_simultaneous_centers(self):
        assert stime.reordering_boost(*pair()) == 0.5

    def test_reordering_boost_3d(self, rng):
        O1, O2 = stime.random_region_pair(rng, "spacelike", dim=3)
        v = stime.reordering_boost(O1, O2)
        assert np.linalg.norm(v) < 1
        c = FrameTransform.boost(v).apply(np.vstack([O1.center, O2.center]))
        assert np.sign(c[1, 0] - c[0, 0]) != np.sign(O2.center[0] - O1.center[0]) or \
            O2.center[0] == O1.center[0]

    def test_ordering_speed(self):
        O1, O2 = pair()
        v = stime.ordering_speed(O1, O2, [1.0])
        assert 0 < v < 1
        g = FrameTransform.boost(min(v * 1.01, 0.999))
        assert stime.temporal_order(g, O1, O2) is not Order.OVERLAPPING


class TestFrameConsistency:
    def test_random_scenarios(self, rng):
        for split in [(2, 2), (2, 3), (3, 3)]:
            sc = stime.random_scenario(rng, split)
            r = stime.frame_consistency(sc.I, sc.J, sc.state, sc.frames)
            assert r.passed, r.max_deviation
            assert sorted(r.details["descriptions"]) == ["I_first", "J_first", "simultaneous"]

    def test_rejects_timelike(self, rng):
        sc = stime.random_scenario(rng)
        later = stime.LocalizedInstrument(sc.J.instrument,
                                          SpacetimeRegion.box((50, 51), (0, 1)))
        with pytest.raises(stime.NotSpacelikeError):
            stime.frame_consistency(sc.I, later, sc.state, sc.frames)

    def test_rejects_noncommuting(self, rng):
        sc = stime.random_scenario(rng)
        other = ins.random_instrument(4, rng)
        J = stime.LocalizedInstrument(other, sc.J.region)
        with pytest.raises(stime.S2Violation):
            stime.frame_consistency(sc.I, J, sc.state, sc.frames)


@settings(max_examples=50, deadline=None)
@given(seeds, st.sampled_from(["spacelike", "timelike"]), st.integers(1, 3))
def test_reordering_boost_property(seed, kind, dim):
    rng = np.random.default_rng(seed)
    O1, O2 = stime.random_region_pair(rng, kind, dim)
    v = stime.reordering_boost(O1, O2)
    if kind == "timelike":
        assert v is None
    else:
        assert np.linalg.norm(np.atleast_1d(v)) < 1


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_interval_invariance_property(seed):
    rng = np.random.default_rng(seed)
    v = rng.uniform(-1, 1, 3)
    v *= rng.uniform(0, 0.99) / np.linalg.norm(v)
    g = FrameTransform.boost(v)
    x, y = rng.uniform(-10, 10, (2, 4))
    gx, gy = g.apply(np.vstack([x, y]))
    assert abs(stime.minkowski_interval(x, y) - stime.minkowski_interval(gx, gy)) < 1e-9


def test_compose_matches_sequential_application(rng):
    th = 0.4
    R = np.array([[np.cos(th), -np.sin(th)], [np.sin(th), np.cos(th)]])
    a = FrameTransform(np.array([0.3, -0.2]), R, np.array([1.0, 2.0, -1.0]))
    b = FrameTransform(np.array([-0.5, 0.1]), R.T, np.array([0.0, 0.5, 0.5]))
    ev = rng.uniform(-5, 5, (6, 3))
    np.testing.assert_allclose(a.compose(b).apply(ev), a.apply(b.apply(ev)), atol=1e-12)


@settings(max_examples=25, deadline=None)
@given(seeds, st.floats(0, 1), st.floats(0, 1))
def test_realization_instant_does_not_matter(seed, a, b):
    rng = np.random.default_rng(seed)
    sc = stime.random_scenario(rng)
    ref = stime.frame_consistency(sc.I, sc.J, sc.state, sc.frames)
    I = stime.LocalizedInstrument(sc.I.instrument, sc.I.region, a)
    J = stime.LocalizedInstrument(sc.J.instrument, sc.J.region, b)
    moved = stime.frame_consistency(I, J, sc.state, sc.frames)
    assert moved.passed == ref.passed is True
    assert moved.details["descriptions"] == ref.details["descriptions"]
