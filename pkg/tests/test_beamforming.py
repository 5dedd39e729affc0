import logging
import numpy as np
import pytest
from numpy.testing import assert_allclose

from conftest import random_hermitian
from pseur.data import (Scenario, SourceSpec, pow2db, steering_vector,
                        synthesize)
from pseur.metrics import (beampattern, calculate_deviation,
                           calculate_optimal_sinr, calculate_sinr,
                           notch_prediction)
from pseur.models.archs import define_reconstructor
from pseur.models.archs.arch_util import sector_sampling
from pseur.models.archs.doa_util import AngularSector
from pseur.models.archs.pseur_arch import estimate_ipn, run_pseur_pipeline
from pseur.models.archs.sample_arch import loaded_inverse, true_ipn_inverse
from pseur.models.archs.spectrum_arch import (capon_spectrum, cho_inverse,
                                              ipn_region, meps_spectrum)
from pseur.models.archs.weight_util import (BeamformerWeights, mvdr_weights,
                                            white_noise_weights)
from pseur.ops import (EigenSystem, NumericalError, hermitian_eig,
                       woodbury_inverse)

ALL_METHODS = ('PseurReconstructor', 'CaponReconstructor',
               'MepsReconstructor', 'SampleReconstructor',
               'OracleReconstructor')


def soi_only_batch(spec, snr_db=10.0, num_snapshots=30, seed=0):
    scenario = Scenario(spec, (SourceSpec(10.0, 10**(snr_db / 10), 'soi'), ))
    return synthesize(scenario, num_snapshots, np.random.default_rng(seed))


class TestMvdr:

    def test_identity_inverse(self, spec):
        a = steering_vector(10.0, spec)
        weights = mvdr_weights(np.eye(20), a)
        assert_allclose(weights.weights, a / 20)

    def test_distortionless(self, rng):
        mat = random_hermitian(rng, 8)
        mat = mat @ mat.conj().T + np.eye(8)
        a = rng.standard_normal(8) + 1j * rng.standard_normal(8)
        weights = mvdr_weights(np.linalg.inv(mat), a)
        assert abs(weights.response(a) - 1) <= 1e-10

    def test_scale_invariant(self, rng, spec):
        mat = random_hermitian(rng, 20)
        inverse = np.linalg.inv(mat @ mat.conj().T + np.eye(20))
        a = steering_vector(-15.0, spec)
        assert_allclose(
            mvdr_weights(7.5 * inverse, a).weights,
            mvdr_weights(inverse, a).weights,
            rtol=1e-10)

    def test_global_phase(self, spec, example_batch):
        inverse = loaded_inverse(example_batch, 0.0)
        a = steering_vector(10.0, spec)
        rotated = mvdr_weights(inverse, a * np.exp(1j * 0.3)).weights
        assert_allclose(
            rotated,
            mvdr_weights(inverse, a).weights * np.exp(1j * 0.3),
            rtol=1e-10)

    def test_not_positive_definite(self, spec):
        a = steering_vector(0.0, spec)
        with pytest.raises(NumericalError):
            mvdr_weights(-np.eye(20), a)
        with pytest.raises(NumericalError):
            mvdr_weights(np.full((20, 20), np.nan), a)

    def test_white_noise(self, spec):
        a = steering_vector(25.0, spec)
        weights = white_noise_weights(a)
        assert_allclose(weights.weights, a / 20)
        assert isinstance(weights, BeamformerWeights)


class TestSinr:

    def test_white_noise_gain(self, spec):
        batch = soi_only_batch(spec)
        weights = white_noise_weights(steering_vector(10.0, spec))
        assert calculate_sinr(weights, batch) == pytest.approx(
            10.0 + pow2db(20.0), abs=1e-9)
        assert calculate_deviation(weights, batch) == pytest.approx(
            0.0, abs=1e-9)

    def test_optimal_weights(self, example_batch):
        weights = define_reconstructor(dict(
            type='OracleReconstructor')).weights(example_batch)
        assert calculate_sinr(weights, example_batch) == pytest.approx(
            calculate_optimal_sinr(example_batch), abs=1e-9)

    def test_optimal_is_upper_bound(self, example_batch):
        optimal = calculate_optimal_sinr(example_batch)
        for method in ALL_METHODS:
            weights = define_reconstructor(dict(type=method)).weights(
                example_batch)
            assert calculate_sinr(weights, example_batch) <= optimal + 1e-9

    @pytest.mark.parametrize('method', ALL_METHODS)
    def test_distortionless(self, method, example_batch):
        weights = define_reconstructor(dict(type=method)).weights(
            example_batch)
        assert abs(weights.response(weights.look_steering) - 1) <= 1e-10


class TestBeampattern:

    def test_matched_filter_peak(self, spec):
        a = steering_vector(spec.grid[120], spec)
        pattern = beampattern(white_noise_weights(a), spec)
        peak = np.argmax(pattern.magnitude)
        assert pattern.angles[peak] == spec.grid[120]
        assert pattern.magnitude[peak] == pytest.approx(1.0)
        assert pattern.gain_db[peak] == pytest.approx(0.0, abs=1e-12)
        assert np.all(np.isfinite(pattern.gain_db))

    def test_unit_gain_at_look_direction(self, example_batch):
        weights = run_pseur_pipeline(example_batch)
        pattern = beampattern(weights, example_batch.spec, [10.0])
        assert pattern.gain_at(10.0) == pytest.approx(0.0, abs=1e-9)

    def test_notches_at_interferers(self, example_batch):
        weights = run_pseur_pipeline(example_batch)
        pattern = beampattern(weights, example_batch.spec, [-50.0, 30.0])
        assert pattern.gain_at(-50.0) <= -35.0
        assert pattern.gain_at(30.0) <= -35.0


class TestNotchPrediction:

    def test_matches_measured_response(self, example_batch):
        state = estimate_ipn(example_batch)
        product = state.product
        spectrum = product.spectrum
        look = steering_vector(10.0, example_batch.spec)
        weights = mvdr_weights(product.inverse, look)
        predicted = notch_prediction(product.partial_eig,
                                     spectrum.gamma_low, spectrum.gamma_high,
                                     look, product.angles,
                                     example_batch.spec, state.sectors)
        measured = np.abs(
            weights.response(
                steering_vector(product.angles, example_batch.spec)))
        ratio = predicted / measured
        assert np.all(ratio >= 0.5) and np.all(ratio <= 2.0)

    def rank_one(self, spec, theta):
        a = steering_vector(theta, spec)
        return hermitian_eig(0.05 * np.outer(a, a.conj())).truncate()

    def test_equal_levels_limit(self, spec):
        eig = self.rank_one(spec, 30.0)
        look = steering_vector(10.0, spec)
        predicted = notch_prediction(eig, 1.0, 1.0 + 1e-12, look, 30.0,
                                     spec)
        expected = abs(np.vdot(steering_vector(30.0, spec), look)) / 20
        assert predicted == pytest.approx(expected, rel=1e-6)

    def test_deepens_with_gamma_high(self, spec):
        eig = self.rank_one(spec, 30.0)
        look = steering_vector(10.0, spec)
        depths = [
            notch_prediction(eig, 1.0, high, look, 30.0, spec)
            for high in (10.0, 100.0, 1000.0)
        ]
        assert depths[0] > depths[1] > depths[2]

    def test_matches_exact_rank_one(self, spec):
        eig = self.rank_one(spec, 30.0)
        look = steering_vector(10.0, spec)
        inverse = woodbury_inverse(1.0, 500.0, eig)
        exact = abs(np.vdot(steering_vector(30.0, spec), inverse @ look))
        predicted = notch_prediction(eig, 1.0, 500.0, look, 30.0, spec)
        assert predicted == pytest.approx(
            exact * 2 * np.pi / 20, rel=1e-9)

    def test_outside_sectors(self, spec):
        eig = self.rank_one(spec, 30.0)
        look = steering_vector(10.0, spec)
        with pytest.raises(ValueError, match='outside'):
            notch_prediction(eig, 1.0, 10.0, look, 40.0, spec,
                             [AngularSector(30.0, 1.0)])

    def test_rank_zero(self, spec):
        eig = EigenSystem(np.zeros(0), np.zeros((20, 0)))
        with pytest.raises(ValueError):
            notch_prediction(eig, 1.0, 10.0, steering_vector(10.0, spec),
                             30.0, spec)


class TestSampleMatrixInversion:

    def test_singular_without_loading(self, spec):
        batch = soi_only_batch(spec, num_snapshots=10)
        with pytest.raises(ValueError, match='loading'):
            define_reconstructor(dict(type='SampleReconstructor')).weights(
                batch)

    def test_loading_makes_it_solvable(self, spec):
        batch = soi_only_batch(spec, num_snapshots=10)
        weights = define_reconstructor(
            dict(type='SampleReconstructor', loading=10.0)).weights(batch)
        assert abs(weights.response(weights.look_steering) - 1) <= 1e-10

    def test_heavy_loading_is_matched_filter(self, spec, example_batch):
        weights = define_reconstructor(
            dict(type='SampleReconstructor', loading=1e15)).weights(
                example_batch)
        assert_allclose(
            weights.weights, steering_vector(10.0, spec) / 20, atol=1e-9)

    def test_noise_only_converges_to_matched_filter(self, spec):
        batch = soi_only_batch(spec, snr_db=-300.0, num_snapshots=50000)
        weights = define_reconstructor(
            dict(type='SampleReconstructor')).weights(batch)
        error = np.abs(weights.weights - steering_vector(10.0, spec) / 20)
        assert error.max() <= 1e-2

    def test_negative_loading(self):
        with pytest.raises(ValueError):
            define_reconstructor(dict(type='SampleReconstructor',
                                      loading=-1.0))


class TestOracle:

    def test_noise_only(self, spec):
        batch = soi_only_batch(spec)
        weights = define_reconstructor(
            dict(type='OracleReconstructor')).weights(batch)
        assert_allclose(weights.weights, steering_vector(10.0, spec) / 20)

    def test_true_inverse(self, example_batch):
        assert_allclose(
            true_ipn_inverse(example_batch),
            np.linalg.inv(example_batch.ipn_covariance),
            atol=1e-10)


class TestSpectralBaselines:

    def test_white_noise_spectra_are_flat(self, spec):
        angles = np.linspace(-80.0, 80.0, 33)
        inverse = np.eye(20) / 2.0
        assert_allclose(capon_spectrum(inverse, angles, spec), 2.0 / 20)
        assert_allclose(meps_spectrum(inverse, angles, spec), 2.0)

    def test_ipn_region(self):
        sectors = ipn_region(10.0, 6.0)
        assert sectors == (AngularSector(-43.0, 47.0),
                           AngularSector(53.0, 37.0))
        angles, _, _ = sector_sampling(sectors, 188)
        assert angles.size == 188
        assert not np.any((angles > 4.0) & (angles < 16.0))
        assert ipn_region(-85.0, 6.0) == (AngularSector(5.5, 84.5), )
        with pytest.raises(ValueError):
            ipn_region(0.0, 95.0)

    def test_singular_covariance_is_loaded(self, caplog):
        mat = np.diag([1.0, 1.0, 0.0, 0.0]).astype(np.complex128)
        with caplog.at_level(logging.WARNING, logger='pseur'):
            inverse = cho_inverse(mat)
        assert np.all(np.isfinite(inverse))
        assert 'diagonal loading' in caplog.text

    @pytest.mark.parametrize('method',
                             ['CaponReconstructor', 'MepsReconstructor'])
    def test_suppresses_interference(self, method, example_batch):
        weights = define_reconstructor(dict(type=method)).weights(
            example_batch)
        pattern = beampattern(weights, example_batch.spec, [-50.0, 30.0])
        assert pattern.gain_at(-50.0) <= -10.0
        assert pattern.gain_at(30.0) <= -10.0

    def test_rejects_few_points(self):
        with pytest.raises(ValueError):
            define_reconstructor(dict(type='CaponReconstructor',
                                      num_points=4))


class TestRegistry:

    @pytest.mark.parametrize(
        'name', ['steering_vector', 'AngularSector', 'NoSuchReconstructor'])
    def test_unknown_type(self, name):
        with pytest.raises(ValueError, match='not found'):
            define_reconstructor(dict(type=name))

    def test_invalid_options(self):
        with pytest.raises(ValueError, match='Invalid options'):
            define_reconstructor(dict(type='SampleReconstructor', bogus=1))

    def test_missing_type(self):
        with pytest.raises(ValueError, match='type'):
            define_reconstructor(dict(loading=0.1))
