import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from coverlaw import epr
from coverlaw import hilbert as hb
from coverlaw import instruments as ins
from coverlaw.cli import random_psi_prime_case
from coverlaw.instruments import Instrument, NonCommutingError

seeds = st.integers(0, 2 ** 63 - 1)


class TestSinglet:
    def test_vector(self):
        v = epr.singlet_vector()
        np.testing.assert_allclose(v, np.array([0, 1, -1, 0]) / np.sqrt(2))

    @pytest.mark.parametrize("theta", [0.0, 0.3, np.pi / 4, 2.0])
    def test_pass_half(self, theta):
        for arm in (1, 2):
            I = epr.polarizer_instrument("linear", theta, arm)
            assert abs(epr.pass_probability(I) - 0.5) < 1e-12
        assert abs(epr.pass_probability(epr.polarizer_instrument("circular", arm=2)) - 0.5) \
            < 1e-12

    def test_same_axis_anticorrelated(self):
        A = epr.polarizer_instrument("linear", 0.7, 1)
        B = epr.polarizer_instrument("linear", 0.7, 2)
        P = ins.confluence_joint(A, B, epr.singlet_state()).probabilities
        np.testing.assert_allclose(P, [[0, 0.5], [0.5, 0]], atol=1e-15)

    def test_malus_correlation(self):
        a, b = 0.2, 0.9
        A = epr.polarizer_instrument("linear", a, 1)
        B = epr.polarizer_instrument("linear", b, 2)
        P = ins.confluence_joint(A, B, epr.singlet_state()).probabilities
        assert abs(P[0, 0] - 0.5 * np.sin(a - b) ** 2) < 1e-12

    def test_unknown_polarizer(self):
        with pytest.raises(ValueError):
            epr.polarizer_basis("elliptic")

    def test_remote_mixture(self, rng):
        agg, mix = epr.remote_mixture(hb.random_unitary(2, rng))
        np.testing.assert_allclose(agg.matrix, np.eye(2) / 2, atol=1e-12)
        assert len(mix.components) == 2
        assert all(s.is_pure for s in mix.states)
        np.testing.assert_allclose(mix.weights, [0.5, 0.5], atol=1e-12)

    def test_remote_mixture_components_depend_on_basis(self):
        _, a = epr.remote_mixture(np.eye(2))
        _, b = epr.remote_mixture(epr.polarizer_basis("circular"))
        assert np.abs(a.states[0].matrix - b.states[0].matrix).max() > 0.1


class TestSplit:
    def test_factor_parts(self):
        sp = epr.TensorSplit(2, 3)
        X = np.diag([1.0, 0.0])
        assert sp.factor1_part(sp.embed1(X)) is not None
        assert sp.factor2_part(sp.embed1(X)) is None

    def test_find_split_hidden(self, rng):
        sp = epr.TensorSplit(2, 2)
        I = sp.lift1(Instrument.computational(2))
        V = hb.random_unitary(4, rng)
        frame = epr.find_tensor_split(I.conjugate(V), I.conjugate(V), min_d2=2)
        assert (frame.split.d1, frame.split.d2) == (2, 2)

    def test_block_pair_without_split(self, rng):
        I = Instrument.from_basis(np.eye(4), [[0], [1, 2, 3]])
        with pytest.raises(epr.NoTensorSplitError):
            epr.find_tensor_split(I, I, min_d2=2)


class TestPsiPrime:
    def test_worked_example(self):
        # |+>|0>, I = J = computational on factor 1
        sp = epr.QUBITS
        Z = sp.lift1(Instrument.computational(2))
        Jp = epr.canonical_remote_instrument(2, 2, sp)
        psi = np.kron(np.array([1, 1]) / np.sqrt(2), [1, 0])
        res = epr.construct_psi_prime(sp, Z, Z, Jp, psi)
        assert res.choices == {(0, 0): (0, 0), (1, 1): (1, 0)}
        assert res.checks["norm_deviation"] < 1e-12
        np.testing.assert_allclose(np.abs(res.psi_prime) ** 2, [0.5, 0, 0, 0.5], atol=1e-12)

    def test_rejects_wrong_factor(self):
        sp = epr.QUBITS
        Z1 = sp.lift1(Instrument.computational(2))
        Z2 = sp.lift2(Instrument.computational(2))
        with pytest.raises(epr.ConstructionError):
            epr.construct_psi_prime(sp, Z2, Z1, Z2, epr.singlet_vector())
        with pytest.raises(epr.ConstructionError):
            epr.construct_psi_prime(sp, Z1, Z1, Z1, epr.singlet_vector())

    def test_result_serializes(self, rng):
        import json
        sp, I, J, Jp, psi = random_psi_prime_case(rng, 2, 3)
        d = epr.construct_psi_prime(sp, I, J, Jp, psi).to_dict()
        json.dumps(d)
        assert set(d) >= {"psi_prime", "lambda", "choices", "checks"}

    @pytest.mark.parametrize("d1,d2", [(2, 2), (2, 3), (4, 2), (4, 3)])
    def test_random_cases(self, rng, d1, d2):
        for _ in range(5):
            sp, I, J, Jp, psi = random_psi_prime_case(rng, d1, d2)
            res = epr.construct_psi_prime(sp, I, J, Jp, psi)
            assert res.checks["norm_deviation"] < 1e-12
            assert res.checks["marginal_match_max"] < 1e-10
            eq = epr.ep_equalities(I, J, hb.DensityState.from_vector(psi), Jp,
                                   hb.DensityState.from_vector(res.psi_prime))
            assert max(eq.values()) < 1e-10


class TestVerifyEP:
    def test_same_instrument(self, rng):
        sp = epr.QUBITS
        I = sp.lift1(Instrument.from_basis(hb.random_unitary(2, rng))).conjugate(
            hb.random_unitary(4, rng))
        r, Jp, pp = epr.verify_ep(I, I, hb.random_state(4, True, rng))
        assert r.passed
        assert ins.commuting(I, Jp)
        assert r.details["witness_spacelike"]

    def test_rejects_noncommuting(self):
        Z = Instrument.computational(2)
        X = Instrument.from_basis(np.array([[1, 1], [1, -1]]) / np.sqrt(2))
        with pytest.raises(NonCommutingError):
            epr.verify_ep(Z, X, hb.DensityState.from_vector([1, 0]))

    def test_rejects_mixed(self):
        I = epr.QUBITS.lift1(Instrument.computational(2))
        with pytest.raises(ValueError):
            epr.verify_ep(I, I, hb.DensityState.maximally_mixed(4))


@settings(max_examples=30, deadline=None)
@given(seeds, st.sampled_from([(2, 2), (2, 3), (4, 3)]))
def test_psi_prime_choice_independence(seed, dims):
    """Random admissible choices give the same observable statistics."""
    rng = np.random.default_rng(seed)
    sp, I, J, Jp, psi = random_psi_prime_case(rng, *dims)
    a = epr.construct_psi_prime(sp, I, J, Jp, psi, seed=1)
    b = epr.construct_psi_prime(sp, I, J, Jp, psi, seed=2,
                                choice_rng=np.random.default_rng(seed))
    pa = hb.DensityState.from_vector(a.psi_prime)
    pb = hb.DensityState.from_vector(b.psi_prime)
    np.testing.assert_allclose(ins.confluence_joint(I, Jp, pa).probabilities,
                               ins.confluence_joint(I, Jp, pb).probabilities, atol=1e-10)


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(2, 5))
def test_composed_mixture_matches_sequential(seed, d):
    rng = np.random.default_rng(seed)
    A, B = ins.random_instrument(d, rng), ins.random_instrument(d, rng)
    rho = hb.random_state(d, False, rng)
    np.testing.assert_allclose(epr.composed_mixture(rho, A, B),
                               ins.sequential(A, B, rho).aggregate(), atol=1e-9)
