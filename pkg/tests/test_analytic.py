import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ghzdecay import analytic as A
from ghzdecay.analytic import CriticalKind, Method
from ghzdecay.channels import ChannelKind, ChannelModel
from ghzdecay.errors import UnsupportedClosedFormError
from ghzdecay.ghz import make_ghz
from ghzdecay.oracle import evolve, partial_transpose

from conftest import random_amplitudes

DEP, PD = ChannelKind.DEPOLARIZING, ChannelKind.PHASE_DAMPING


def equal(d, N):
    return make_ghz(d, N, np.ones(d))


# frozen from an independent brute-force script (explicit tensor evolution +
# numpy eigvalsh), not from this package
DIAG_QUTRIT_0011_P03 = 0.004300000000000001
ORACLE_P1_QUTRIT_N4 = 0.5210794962265324
ORACLE_PBAL_BELL = 0.42264973081037416


class TestLambda:
    def test_zero_noise(self):
        s = equal(3, 4)
        for n in (1, 2, 3):
            assert A.lambda_n(s, 0.0, 0, 1, n) == 0.0

    def test_full_noise_qubits(self):
        assert A.lambda_n(equal(2, 4), 1.0, 0, 1, 2) == pytest.approx(1 / 16, abs=1e-15)

    def test_matches_brute_force_diagonal(self):
        s = equal(3, 4)
        assert A.lambda_n(s, 0.3, 0, 1, 2) == pytest.approx(DIAG_QUTRIT_0011_P03, abs=1e-15)
        rho = evolve(s, ChannelModel(DEP, 0.3, 3)).data
        idx = int("0011", 3)
        assert A.lambda_n(s, 0.3, 0, 1, 2) == pytest.approx(rho[idx, idx].real, abs=1e-15)

    def test_without_spectators(self):
        s = equal(3, 4)
        printed = A.lambda_n(s, 0.3, 0, 1, 2, spectators=False)
        assert printed == pytest.approx(2 / 3 * 0.1**2 * 0.8**2, abs=1e-15)
        assert A.lambda_n(s, 0.3, 0, 1, 2) - printed == pytest.approx(0.1**4 / 3, abs=1e-15)

    def test_index_errors(self):
        s = equal(3, 4)
        with pytest.raises(IndexError):
            A.lambda_n(s, 0.1, 1, 0, 2)
        with pytest.raises(IndexError):
            A.lambda_n(s, 0.1, 0, 3, 2)
        with pytest.raises(ValueError):
            A.lambda_n(s, 0.1, 0, 1, 4)


class TestPairBlock:
    def test_zero_noise(self, rng):
        s = make_ghz(3, 4, random_amplitudes(rng, 3))
        b = A.pair_block(s, ChannelModel(DEP, 0.0, 3), 0, 2, 1)
        c = abs(s.alphas[0] * s.alphas[2])
        assert b.xi == 0.0
        assert b.eta == pytest.approx(-c * c, abs=1e-15)
        assert b.mu == pytest.approx(-c, abs=1e-15)

    def test_full_noise(self):
        s = make_ghz(3, 5, [0.2, 0.5, 0.7])
        b = A.pair_block(s, ChannelModel(DEP, 1.0, 3), 0, 1, 2)
        assert b.mu == pytest.approx(min(b.lambda_n, b.lambda_Nn), abs=1e-16)
        assert b.mu > 0

    def test_matches_brute_force_block(self):
        s = equal(2, 4)
        ch = ChannelModel(DEP, 0.2, 2)
        pt = partial_transpose(evolve(s, ch), [2, 3]).data
        idx = [int("0011", 2), int("1100", 2)]
        block = pt[np.ix_(idx, idx)]
        b = A.pair_block(s, ch, 0, 1, 2)
        assert b.mu == pytest.approx(np.linalg.eigvalsh(block)[0], abs=1e-15)

    def test_phase_damping_fields(self):
        s = equal(3, 4)
        b = A.pair_block(s, ChannelModel(PD, 0.5, 3), 0, 1, 1)
        assert b.lambda_n == b.lambda_Nn == 0.0
        assert b.nu == pytest.approx(-(0.5**4) / 3, abs=1e-16)
        assert b.mu is None

    @settings(max_examples=200, deadline=None)
    @given(st.integers(2, 5), st.integers(2, 9), st.floats(0, 1), st.integers(0, 2**32 - 1))
    def test_block_invariants(self, d, N, p, seed):
        s = make_ghz(d, N, random_amplitudes(np.random.default_rng(seed), d))
        ch = ChannelModel(DEP, p, d)
        for n in range(1, N):
            b = A.pair_block(s, ch, 0, d - 1, n)
            assert b.xi == 0.5 * (b.lambda_n + b.lambda_Nn)
            assert b.xi**2 - b.eta >= -1e-15
            # the naive form loses ~1e-14 to cancellation; the 2x2 eigensolver is the tight check
            assert b.mu == pytest.approx(b.xi - math.sqrt(max(b.xi**2 - b.eta, 0.0)), abs=1e-13)
            mat = np.array([[b.lambda_n, b.coherence], [b.coherence, b.lambda_Nn]])
            assert b.mu == pytest.approx(np.linalg.eigvalsh(mat)[0], abs=1e-14)


class TestNegativity:
    @pytest.mark.parametrize("kind", [DEP, PD])
    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_noiseless_equal_amplitudes(self, kind, d):
        rep = A.negativity(equal(d, 4), ChannelModel(kind, 0.0, d))
        for n in (1, 2, 3):
            assert rep[n] == pytest.approx((d - 1) / 2, abs=1e-14)

    def test_phase_damping_qutrits(self):
        rep = A.negativity(equal(3, 4), ChannelModel(PD, 0.5, 3))
        for n in (1, 2, 3):
            assert rep[n] == pytest.approx(0.0625, abs=1e-15)

    def test_vanishes_past_balanced_point(self):
        s = equal(2, 6)
        pb = A.critical_p_balanced_closed_form(s).value
        for p in (pb + 1e-9, 0.7, 1.0):
            assert A.negativity(s, ChannelModel(DEP, p, 2), 3)[3] == 0.0

    def test_contributions_sum(self, rng):
        s = make_ghz(4, 5, random_amplitudes(rng, 4))
        rep = A.negativity(s, ChannelModel(DEP, 0.15, 4))
        for n in range(1, 5):
            parts = [rep.contributions[(i, j, n)] for i, j in s.pairs()]
            assert all(c >= 0 for c in parts)
            assert rep[n] == sum(parts)

    def test_zero_pairs_never_contribute(self):
        s = make_ghz(3, 4, [0.6, 0, 0.8])
        rep = A.negativity(s, ChannelModel(DEP, 0.1, 3))
        assert rep.contributions[(0, 1, 2)] == 0.0
        assert rep.contributions[(1, 2, 2)] == 0.0

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            A.negativity(equal(3, 4), ChannelModel(DEP, 0.1, 2))

    @settings(max_examples=150, deadline=None)
    @given(st.integers(2, 5), st.integers(2, 9), st.floats(0, 1), st.integers(0, 2**32 - 1))
    def test_partition_monotonicity_and_symmetry(self, d, N, p, seed):
        s = make_ghz(d, N, random_amplitudes(np.random.default_rng(seed), d))
        vals = A.negativity(s, ChannelModel(DEP, p, d)).values
        for n in range(1, N // 2):
            assert vals[n] <= vals[n + 1] + 1e-12
        for n in range(1, N):
            assert vals[n] == pytest.approx(vals[N - n], abs=1e-15)

    @settings(max_examples=100, deadline=None)
    @given(st.integers(2, 5), st.integers(2, 8), st.floats(0, 1), st.integers(0, 2**32 - 1))
    def test_phase_damping_is_n_independent(self, d, N, p, seed):
        s = make_ghz(d, N, random_amplitudes(np.random.default_rng(seed), d))
        vals = A.negativity(s, ChannelModel(PD, p, d)).values
        assert max(abs(v - vals[1]) for v in vals.values()) == 0.0
        expected = (1 - p) ** N * sum(abs(s.alphas[i] * s.alphas[j]) for i, j in s.pairs())
        assert vals[1] == pytest.approx(expected, abs=1e-14)

    @settings(max_examples=100, deadline=None)
    @given(st.integers(2, 4), st.sampled_from([2, 4, 6]), st.floats(0, 1), st.integers(0, 2**32 - 1))
    def test_phase_invariance(self, d, N, p, seed):
        rng = np.random.default_rng(seed)
        s = make_ghz(d, N, random_amplitudes(rng, d))
        t = s.with_phases(rng.uniform(0, 2 * np.pi, size=d))
        for kind in (DEP, PD):
            a = A.negativity(s, ChannelModel(kind, p, d)).values
            b = A.negativity(t, ChannelModel(kind, p, d)).values
            assert max(abs(a[n] - b[n]) for n in a) <= 1e-14
        pairs = [
            (A.critical_p_balanced_closed_form(s), A.critical_p_balanced_closed_form(t)),
            (A.critical_p_partition(s, DEP, 1), A.critical_p_partition(t, DEP, 1)),
            (A.epsilon_threshold(s, DEP, 0.05), A.epsilon_threshold(t, DEP, 0.05)),
        ]
        for x, y in pairs:
            assert abs(x.value - y.value) <= 1e-14

    def test_balanced_block_has_equal_diagonals(self, rng):
        s = make_ghz(3, 6, random_amplitudes(rng, 3))
        for p in np.linspace(0, 1, 21):
            b = A.pair_block(s, ChannelModel(DEP, p, 3), 0, 2, 3)
            assert b.lambda_n == pytest.approx(b.lambda_Nn, abs=1e-17)
            assert b.mu == pytest.approx(b.lambda_n - b.coherence, abs=1e-15)


class TestBalancedClosedForm:
    def test_bell_pair(self):
        cp = A.critical_p_balanced_closed_form(equal(2, 2))
        assert cp.value == pytest.approx(2 / (3 + math.sqrt(3)), abs=1e-15)
        assert cp.value == pytest.approx(ORACLE_PBAL_BELL, abs=1e-12)
        assert cp.method is Method.CLOSED_FORM and cp.kind is CriticalKind.VANISH_BALANCED
        assert cp.warnings == ()

    def test_large_N_limit(self):
        vals = [A.critical_p_balanced_closed_form(equal(2, N)).value for N in (2, 8, 64, 1024, 2**16)]
        assert all(a < b for a, b in zip(vals, vals[1:]))
        assert vals[-1] == pytest.approx(4 / (5 + math.sqrt(5)), abs=1e-4)

    def test_large_d_limit(self):
        vals = [A.critical_p_balanced_closed_form(equal(d, 4)).value for d in (2, 5, 20, 100, 1000)]
        assert all(a < b < 1 for a, b in zip(vals, vals[1:]))
        assert vals[-1] > 0.99

    def test_odd_N_refused(self):
        with pytest.raises(UnsupportedClosedFormError):
            A.critical_p_balanced_closed_form(equal(2, 3))

    def test_product_state(self):
        cp = A.critical_p_balanced_closed_form(make_ghz(3, 4, [0, 1, 0]))
        assert cp.value is None and cp.pair_values == {}

    def test_pairs_excluded_and_max(self):
        s = make_ghz(3, 4, [0.6, 0.0, 0.8])
        cp = A.critical_p_balanced_closed_form(s)
        assert set(cp.pair_values) == {(0, 2)}
        assert cp.value == cp.pair_value(0, 2) < 1
        assert cp.warnings == ()

    def test_spectator_warning(self):
        assert A.critical_p_balanced_closed_form(equal(3, 4)).warnings == (A.SPECTATOR_WARNING,)

    def test_equal_amplitude_degeneracy(self):
        cp = A.critical_p_balanced_closed_form(equal(5, 6))
        vals = set(cp.pair_values.values())
        assert len(vals) == 1 and cp.value in vals and len(cp.pair_values) == 10


class TestPartition:
    def test_closed_form_is_oracle_for_root_finder(self, rng):
        cases = [equal(2, N) for N in (2, 4, 6, 8)]
        cases += [make_ghz(2, 4, random_amplitudes(rng, 2)) for _ in range(5)]
        cases += [make_ghz(4, 6, [0.3, 0, 0.95, 0])]
        for s in cases:
            exact = A.critical_p_partition(s, DEP, s.N // 2)
            assert exact.value == pytest.approx(A.critical_p_balanced_closed_form(s).value, abs=1e-10)

    def test_closed_form_matches_root_without_spectators(self, rng):
        for d, N in [(3, 4), (4, 6), (5, 2)]:
            s = make_ghz(d, N, random_amplitudes(rng, d))
            root = A.critical_p_partition(s, DEP, N // 2, spectators=False)
            closed = A.critical_p_balanced_closed_form(s)
            assert root.value == pytest.approx(closed.value, abs=1e-10)
            for pair, v in closed.pair_values.items():
                assert root.pair_values[pair] == pytest.approx(v, abs=1e-10)

    def test_qutrit_least_balanced(self):
        cp = A.critical_p_partition(equal(3, 4), DEP, 1)
        assert cp.value == pytest.approx(ORACLE_P1_QUTRIT_N4, abs=1e-10)
        assert cp.method is Method.BISECTION and not cp.multiplicity_warning

    def test_phase_damping_never_vanishes(self, rng):
        for n in (1, 2, 3):
            cp = A.critical_p_partition(make_ghz(3, 4, random_amplitudes(rng, 3)), PD, n)
            assert cp.value == 1.0
            assert set(cp.pair_values.values()) == {1.0}

    def test_least_balanced_decreases_with_N(self):
        p4 = A.critical_p_partition(equal(2, 4), DEP, 1).value
        p6 = A.critical_p_partition(equal(2, 6), DEP, 1).value
        assert p6 < p4

    def test_least_balanced_vanishes_first(self, rng):
        for _ in range(5):
            s = make_ghz(3, 6, random_amplitudes(rng, 3))
            vals = [A.critical_p_partition(s, DEP, n).value for n in (1, 2, 3)]
            assert vals[0] <= vals[1] <= vals[2]

    def test_product_state(self):
        assert A.critical_p_partition(make_ghz(2, 4, [1, 0]), DEP, 1).value is None

    def test_scan_root_flags_multiple_changes(self):
        root, changes = A._scan_root(lambda p: np.cos(12 * np.asarray(p)))
        assert changes == 4
        assert root == pytest.approx(math.pi / 24, abs=1e-11)


class TestEpsilon:
    def test_phase_damping_closed_form(self):
        for d in (2, 3, 7):
            for n in (1, 2):
                cp = A.epsilon_threshold(equal(d, 4), PD, 0.01, n=n)
                assert cp.value == pytest.approx(1 - 0.01**0.25, abs=1e-15)
        assert A.epsilon_threshold(equal(2, 4), PD, 0.01).value == pytest.approx(0.683772, abs=1e-6)

    def test_root_satisfies_balanced_equation(self, rng):
        d, N, eps = 3, 6, 0.05
        s = make_ghz(d, N, random_amplitudes(rng, d))
        cp = A.epsilon_threshold(s, DEP, eps, spectators=False)
        for (i, j), p in cp.pair_values.items():
            wi, wj = abs(s.alphas[i]) ** 2, abs(s.alphas[j]) ** 2
            c = math.sqrt(wi * wj)
            lhs = (wi + wj) * (p / d) ** (N / 2) * (1 - (d - 1) * p / d) ** (N / 2) - c * (1 - p) ** N
            assert lhs == pytest.approx(-eps * c, abs=1e-12)

    def test_log_law(self):
        cp = A.epsilon_threshold(equal(3, 200), DEP, 0.01)
        est = A.epsilon_scaling_estimate(200, 0.01)
        assert est == pytest.approx(0.023026, abs=1e-6)
        assert abs(cp.value - est) / est < 0.05

    def test_large_d_limit(self):
        cp = A.epsilon_threshold(equal(10**4, 4), DEP, 0.01)
        assert abs(cp.value - (1 - 0.01**0.25)) < 1e-3

    @settings(max_examples=60, deadline=None)
    @given(st.integers(2, 5), st.sampled_from([2, 4, 6, 8]), st.floats(1e-6, 0.999),
           st.integers(0, 2**32 - 1))
    def test_threshold_ordering(self, d, N, eps, seed):
        s = make_ghz(d, N, random_amplitudes(np.random.default_rng(seed), d))
        for spectators in (True, False):
            pe = A.epsilon_threshold(s, DEP, eps, spectators=spectators)
            pv = A.critical_p_partition(s, DEP, N // 2, spectators=spectators)
            for pair, v in pe.pair_values.items():
                assert 0 < v < pv.pair_values[pair] < 1

    @pytest.mark.parametrize("eps", [0.0, 1.0, -0.1, 1.5])
    def test_epsilon_range(self, eps):
        with pytest.raises(ValueError):
            A.epsilon_threshold(equal(2, 4), DEP, eps)

    def test_product_state(self):
        cp = A.epsilon_threshold(make_ghz(3, 4, [0, 0, 1]), PD, 0.1)
        assert cp.value is None


def test_asymptote_values():
    assert A.asymptote_balanced(2) == pytest.approx(0.552786, abs=1e-6)
    assert A.asymptote_balanced(3) == pytest.approx(0.649627, abs=1e-6)
    vals = [A.asymptote_balanced(d) for d in (2, 10, 1000, 10**9)]
    assert all(a < b for a, b in zip(vals, vals[1:])) and vals[-1] == pytest.approx(1, abs=1e-8)


def test_epsilon_scaling_estimate():
    assert A.epsilon_scaling_estimate(100, 0.01) == pytest.approx(0.0460517, abs=1e-7)
    assert A.epsilon_scaling_estimate(4, math.exp(-4)) == pytest.approx(1.0, abs=1e-15)
    assert A.epsilon_scaling_estimate(10, 1.0) == 0.0
