import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from coverlaw import hilbert as hb
from coverlaw import instruments as ins
from coverlaw.instruments import Instrument, NonCommutingError

H = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
seeds = st.integers(0, 2 ** 63 - 1)


def zx():
    return Instrument.computational(2, "Z"), Instrument.from_basis(H, label="X")


class TestInstrument:
    def test_resolution_enforced(self):
        with pytest.raises(ValueError):
            Instrument((hb.Projector.onto([1, 0]),))

    def test_from_basis_groups(self, rng):
        U = hb.random_unitary(4, rng)
        I = Instrument.from_basis(U, [[0, 2], [1], [3]])
        assert [P.rank for P in I.outcomes] == [2, 1, 1]

    def test_conjugate(self, rng):
        U = hb.random_unitary(3, rng)
        I = Instrument.computational(3).conjugate(U)
        np.testing.assert_allclose(I[0].matrix, np.outer(U[:, 0], U[:, 0].conj()),
                                   atol=1e-12)

    def test_distribution_sums_to_one(self, rng):
        I = ins.random_instrument(5, rng)
        s = hb.random_state(5, False, rng)
        assert abs(ins.distribution(I, s).sum() - 1) < 1e-12

    def test_apply_and_aggregate(self, rng):
        I = ins.random_instrument(3, rng)
        s = hb.random_state(3, True, rng)
        bm = ins.apply(I, s)
        np.testing.assert_allclose(bm.aggregate(), ins.aggregate_state(I, s).matrix,
                                   atol=1e-12)


class TestCommuting:
    def test_noncommuting_reports_indices(self):
        Z, X = zx()
        with pytest.raises(NonCommutingError) as exc:
            ins.check_commuting(Z, X)
        assert exc.value.indices == (0, 0)
        assert not ins.commuting(Z, X)

    def test_confluence_keeps_null_branches(self):
        Z = Instrument.computational(2)
        C = ins.confluence(Z, Z)
        assert len(C) == 4
        assert [P.rank for P in C.outcomes] == [1, 0, 0, 1]

    def test_confluence_refuses_noncommuting(self):
        with pytest.raises(NonCommutingError):
            ins.confluence(*zx())

    @pytest.mark.parametrize("d,kind", [(4, "tensor"), (6, "block"), (9, "tensor"),
                                        (8, "block")])
    def test_generators_commute(self, rng, d, kind):
        for _ in range(5):
            I, J = ins.random_commuting_pair(d, rng, kind)
            assert ins.commuting(I, J)

    def test_unknown_generator(self, rng):
        with pytest.raises(ValueError):
            ins.random_commuting_pair(5, rng, "tensor")


class TestTheorem:
    def test_equalities_on_known_pair(self):
        # Z on qubit 1, X on qubit 2 commute
        Z = Instrument(tuple(np.kron(P.matrix, np.eye(2))
                             for P in Instrument.computational(2).outcomes))
        X = Instrument(tuple(np.kron(np.eye(2), P.matrix)
                             for P in Instrument.from_basis(H).outcomes))
        p = hb.DensityState.from_vector(np.array([1, 0, 0, 1]) / np.sqrt(2))
        assert ins.verify_eq1(Z, X, p).passed
        assert ins.verify_eq2(Z, X, [p]).passed
        assert ins.verify_eq3_eq4(Z, X, p).passed
        np.testing.assert_allclose(ins.confluence_joint(Z, X, p).probabilities,
                                   np.full((2, 2), 0.25), atol=1e-15)

    def test_negative_control_fails_by_large_margin(self):
        Z, X = zx()
        p = hb.DensityState.from_vector([1, 0])
        r = ins.verify_eq3_eq4(Z, X, p, require_commuting=False)
        assert not r.passed and r.max_deviation > 1e-3

    def test_eq3_requires_commuting_by_default(self):
        Z, X = zx()
        with pytest.raises(NonCommutingError):
            ins.verify_eq3_eq4(Z, X, hb.DensityState.from_vector([1, 0]))

    def test_sequential_zero_branch(self):
        Z = Instrument.computational(2)
        res = ins.sequential(Z, Z, hb.DensityState.from_vector([1, 0]))
        assert res.states[1][0] is None
        np.testing.assert_allclose(res.probabilities, [[1, 0], [0, 0]])

    def test_no_signaling_singlet_style(self, rng):
        I, J = ins.tensor_pair(2, 2, rng, mix=False)
        alts = [ins.tensor_pair(2, 2, rng, mix=False)[1] for _ in range(3)]
        p = hb.random_state(4, True, rng)
        assert ins.no_signaling_check(I, J, p, alternatives=alts).passed

    def test_covariance(self, rng):
        I = ins.random_instrument(3, rng)
        s = hb.random_state(3, True, rng)
        assert ins.covariance_check(hb.random_unitary(3, rng), I, s).passed

    def test_report_dict(self):
        Z, X = zx()
        d = ins.verify_eq3_eq4(Z, X, hb.DensityState.from_vector([1, 0]),
                               require_commuting=False).to_dict()
        assert d["pass"] is False and d["property"] == "eq3_eq4_order_symmetry"


@settings(max_examples=40, deadline=None)
@given(seeds, st.sampled_from([(4, "tensor"), (6, "tensor"), (5, "block"), (6, "block")]))
def test_theorem_property(seed, case):
    d, kind = case
    rng = np.random.default_rng(seed)
    I, J = ins.random_commuting_pair(d, rng, kind)
    p = hb.random_state(d, bool(rng.integers(2)), rng)
    for a, b in ((I, J), (J, I)):
        assert ins.verify_eq1(a, b, p).passed
        assert ins.verify_eq2(a, b, [p]).passed
        assert ins.verify_eq3_eq4(a, b, p).passed


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_confluence_aggregate_matches_sequential(seed):
    rng = np.random.default_rng(seed)
    I, J = ins.block_pair(5, rng)
    p = hb.random_state(5, False, rng)
    np.testing.assert_allclose(ins.confluence_joint(I, J, p).aggregate(),
                               ins.sequential(I, J, p).aggregate(), atol=1e-10)
