"""Spectrum, information bounds, and attack strategies for fake probes."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tqcash import eavesdrop as ev
from tqcash import qsim

@st.composite
def unit_real_probes(draw):
    v = np.array(
        draw(
            st.lists(
                st.floats(-1.0, 1.0, allow_nan=False),
                min_size=16,
                max_size=16,
            )
        )
    )
    norm = np.linalg.norm(v)
    if norm < 1e-3:
        v = np.zeros(16)
        v[draw(st.integers(0, 15))] = 1.0
        norm = 1.0
    return ev.FakeSignal(v / norm)


class TestFakeSignal:
    def test_letter_order_is_data_major(self):
        # amplitude number 4*data + ancilla
        assert ev.LETTERS == "abcdefghijkqmnrs"
        probe = ev.FakeSignal.from_named(c=1.0)
        assert probe.amps[2] == 1.0
        probe = ev.FakeSignal.from_named(m=1.0)
        assert probe.amps[12] == 1.0
        assert probe.letter("m") == 1.0
        assert probe.letter("a") == 0.0

    def test_unknown_letter_rejected(self):
        with pytest.raises(ValueError, match="letter"):
            ev.FakeSignal.from_named(z=1.0)
        with pytest.raises(ValueError, match="letter"):
            ev.legal_probe().letter("t")

    def test_norm_enforced(self):
        with pytest.raises(ValueError, match="norm"):
            ev.FakeSignal(np.full(16, 0.3))
        with pytest.raises(ValueError, match="16 amplitudes"):
            ev.FakeSignal(np.zeros(4))

    def test_is_real(self):
        assert ev.FakeSignal.from_named(a=1.0).is_real
        assert not ev.FakeSignal.from_named(a=1j).is_real

    def test_legal_probe_is_carrier_with_idle_ancilla(self):
        probe = ev.legal_probe(2, 1)
        expected = np.kron(qsim.basis_state(2, 1).amps, qsim.ket(0, 4).amps)
        assert np.allclose(probe.amps, expected)
        assert ev.legal_probe().letter("a") == 1.0


class TestAverageState:
    def test_legal_probe_averages_to_maximally_mixed_data(self):
        # eight carrier states, uniform: data marginal is I/4
        target = np.kron(np.eye(4) / 4, np.outer([1, 0, 0, 0], [1, 0, 0, 0]))
        for variant in qsim.VARIANTS:
            w = ev.build_w(ev.legal_probe(), variant)
            assert w.dims == (4, 4)
            assert np.allclose(w.entries, target, atol=1e-14)

    def test_invariant_probe_stays_pure(self):
        # uniform data superposition is fixed by every coded operation
        probe = ev.FakeSignal.from_named(a=0.5, e=0.5, i=0.5, m=0.5)
        for variant in qsim.VARIANTS:
            w = ev.build_w(probe, variant)
            assert np.allclose(w.entries, np.outer(probe.amps, probe.amps.conj()), atol=1e-14)
            assert ev.info_bound(probe, variant) == 0.0

    @pytest.mark.parametrize("variant", qsim.VARIANTS)
    def test_rank_never_exceeds_four(self, variant):
        rng = np.random.default_rng(17 + (variant == "xor"))
        for _ in range(25):
            theta = ev.random_probe(rng, complex_amplitudes=True)
            eigs = np.linalg.eigvalsh(ev.build_w(theta, variant).entries)
            assert int((eigs > 1e-10).sum()) <= 4


class TestClosedFormSpectrum:
    def test_change_of_basis_is_orthogonal(self):
        x = ev.x_transform()
        assert np.allclose(x @ x.T, np.eye(16), atol=1e-14)

    def test_change_of_basis_block_diagonalizes(self):
        # blocks of sizes 8, 4, 4 carrying 2*lam1, lam3, lam4
        rng = np.random.default_rng(11)
        x = ev.x_transform()
        for _ in range(10):
            theta = ev.random_probe(rng)
            b = x @ ev.build_w(theta, "cyclic").entries.real @ x.T
            lam1, _, lam3, lam4 = ev.closed_form_values(theta)
            assert np.allclose(b[:8, 8:], 0.0, atol=1e-12)
            assert np.allclose(b[8:12, 12:], 0.0, atol=1e-12)
            assert abs(np.trace(b[:8, :8]) - 2 * lam1) < 1e-12
            assert abs(np.trace(b[8:12, 8:12]) - lam3) < 1e-12
            assert abs(np.trace(b[12:, 12:]) - lam4) < 1e-12

    def test_two_letter_probe_gives_half_half(self):
        r = 1 / np.sqrt(2.0)
        report = ev.closed_form_eigs(ev.FakeSignal.from_named(a=r, i=r))
        assert np.allclose(report.closed_form, (0.0, 0.0, 0.5, 0.5), atol=1e-12)
        assert np.allclose(report.numeric[:2], 0.5, atol=1e-12)
        assert np.allclose(report.numeric[2:], 0.0, atol=1e-12)
        assert abs(report.entropy_bits - 1.0) < 1e-12

    def test_closed_form_matches_numeric_spectrum(self):
        rng = np.random.default_rng(23)
        for _ in range(150):
            report = ev.closed_form_eigs(ev.random_probe(rng))
            assert report.max_deviation <= 1e-9

    @given(unit_real_probes())
    @settings(max_examples=60, deadline=None)
    def test_closed_form_sums_to_one(self, theta):
        values = ev.closed_form_values(theta)
        assert values[0] == values[1]
        assert abs(sum(values) - 1.0) < 1e-9

    def test_complex_probe_goes_numeric_only(self):
        probe = ev.FakeSignal.from_named(a=1j)
        report = ev.closed_form_eigs(probe)
        assert report.closed_form is None
        assert report.max_deviation is None
        assert report.entropy_bits <= 2.0 + 1e-9
        with pytest.raises(ValueError, match="real"):
            ev.closed_form_values(probe)

    def test_report_validates_spectrum(self):
        with pytest.raises(ValueError, match="16 values"):
            ev.SpectrumReport(np.zeros(4), None, 0.0, None)
        bad = np.zeros(16)
        bad[0] = 1.1
        with pytest.raises(ValueError, match="sum"):
            ev.SpectrumReport(bad, None, 0.0, None)
        neg = np.zeros(16)
        neg[0] = 1 + 1e-7
        neg[1] = -1e-7
        with pytest.raises(ValueError, match="below"):
            ev.SpectrumReport(neg, None, 0.0, None)


class TestInformationBound:
    @pytest.mark.parametrize("variant", qsim.VARIANTS)
    def test_two_bit_cap(self, variant):
        rng = np.random.default_rng(31 + (variant == "xor"))
        for k in range(40):
            theta = ev.random_probe(rng, complex_amplitudes=(k % 2 == 1))
            assert ev.info_bound(theta, variant) <= 2.0 + 1e-9

    @pytest.mark.parametrize("variant", qsim.VARIANTS)
    def test_saturating_families(self, variant):
        probes = ev.max_information_probes()
        assert len(probes) == 8
        for probe in probes:
            assert abs(ev.info_bound(probe, variant) - 2.0) < 1e-9

    def test_saturating_families_have_flat_closed_form(self):
        for probe in ev.max_information_probes():
            assert np.allclose(ev.closed_form_values(probe), 0.25, atol=1e-12)


class TestInterceptResend:
    @pytest.mark.parametrize("variant", qsim.VARIANTS)
    def test_exact_error_and_information(self, variant):
        error, mi = ev.intercept_resend(variant, 0)
        assert error == 0.375
        assert mi == 1.0

    def test_sampled_error_near_exact(self):
        trials = 20000
        error, mi = ev.intercept_resend("cyclic", trials, np.random.default_rng(3))
        sigma = np.sqrt(0.375 * 0.625 / trials)
        assert abs(error - 0.375) < 3 * sigma
        assert mi == 1.0

    def test_argument_validation(self):
        with pytest.raises(ValueError, match=">= 0"):
            ev.intercept_resend("cyclic", -1)
        with pytest.raises(ValueError, match="rng"):
            ev.intercept_resend("cyclic", 10)


class TestStrategyMi:
    def test_basis_measurements_extract_one_bit(self):
        for projs in (ev.computational_projectors(), ev.conjugated_projectors()):
            for variant in qsim.VARIANTS:
                assert abs(ev.strategy_mi(projs, variant) - 1.0) < 1e-12

    def test_trivial_measurement_learns_nothing(self):
        assert ev.strategy_mi([np.eye(16)], "cyclic") == 0.0

    def test_never_beats_entropy_bound(self):
        rng = np.random.default_rng(59)
        for _ in range(10):
            theta = ev.random_probe(rng)
            basis, _ = np.linalg.qr(rng.normal(size=(16, 16)))
            projs = [np.outer(basis[:, k], basis[:, k].conj()) for k in range(16)]
            for variant in qsim.VARIANTS:
                mi = ev.strategy_mi(projs, variant, theta)
                assert mi <= ev.info_bound(theta, variant) + 1e-9

    def test_rejects_bad_projector_sets(self):
        p0 = ev.computational_projectors()[0]
        with pytest.raises(ValueError, match="identity"):
            ev.strategy_mi([p0], "cyclic")
        with pytest.raises(ValueError, match="Hermitian"):
            ev.strategy_mi([np.triu(np.ones((16, 16)))], "cyclic")
        with pytest.raises(ValueError, match="idempotent"):
            ev.strategy_mi([np.eye(16) * 0.5, np.eye(16) * 0.5], "cyclic")
        with pytest.raises(ValueError, match="shape"):
            ev.strategy_mi([np.eye(4)], "cyclic")


class TestSweep:
    def test_tracks_extremes_and_deviation(self):
        report = ev.sweep(30, np.random.default_rng(61), "cyclic")
        assert report.count == 30
        assert 0.0 <= report.min_entropy <= report.max_entropy <= 2.0 + 1e-9
        assert report.max_closed_form_deviation <= 1e-9
        assert len(report.argmax_amps) == 16
        assert len(report.argmin_amps) == 16

    def test_deterministic_given_seed(self):
        a = ev.sweep(15, np.random.default_rng(67), "xor", complex_probes=True)
        b = ev.sweep(15, np.random.default_rng(67), "xor", complex_probes=True)
        assert a == b
        assert a.max_closed_form_deviation is None

    def test_count_validated(self):
        with pytest.raises(ValueError, match=">= 1"):
            ev.sweep(0, np.random.default_rng(0), "cyclic")
