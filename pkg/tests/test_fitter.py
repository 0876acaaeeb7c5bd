import numpy as np
import pytest
from sklearn.exceptions import NotFittedError

from harmonic_nav import get_fitter
from harmonic_nav.fitter import FitDiverged, known_fitters, register
from harmonic_nav.fitters.circle import CircleFitter
from harmonic_nav.fitters.squircle import SquircleFitter
from harmonic_nav.shapes import Circle, Squircle


def test_builtin_fitters_are_registered():
    collection = get_fitter()
    assert [name for name, _ in collection.fitters] == ['circle', 'squircle']
    assert known_fitters['circle'] is CircleFitter
    assert known_fitters['squircle'] is SquircleFitter


def test_unknown_fitter():
    with pytest.raises(ValueError):
        get_fitter(['polygon'])


def test_duplicate_registration():
    with pytest.raises(ValueError):
        register('circle')(CircleFitter)


def test_options_reach_the_fitters():
    collection = get_fitter(['squircle'], {'squircle': {'initial_kappa': 0.5}})
    fitter = collection.fitters[0][1]
    assert fitter.initial_kappa == 0.5
    assert fitter.get_params()['initial_kappa'] == 0.5


def test_predict_needs_a_fit():
    with pytest.raises(NotFittedError):
        CircleFitter().predict(np.zeros((1, 2)))


def test_fit_and_predict():
    points = Circle((0.5, 0.5), 0.2).boundary_points(32)
    fitter = CircleFitter().fit(points)
    assert not fitter.provisional_
    assert fitter.residual_ < 1e-9
    assert np.max(np.abs(fitter.predict(points))) < 1e-9


def test_bad_point_arrays():
    with pytest.raises(ValueError):
        CircleFitter().fit(np.zeros((10, 3)))


def test_collection_prefers_accurate_fits():
    circle = get_fitter().fit(Circle((0.0, 0.0), 0.3).boundary_points(40))
    assert circle.method_ == 'circle'
    assert not circle.provisional_
    squircle = get_fitter().fit(Squircle((0.0, 0.0), (0.4, 0.25), 0.9).boundary_points(64))
    assert squircle.method_ == 'squircle'
    assert not squircle.provisional_
    assert np.allclose(squircle.shape_.half_widths, [0.4, 0.25], atol=1e-6)


def test_noisy_fit_is_provisional():
    rng = np.random.default_rng(1)
    points = Circle((0.0, 0.0), 0.3).boundary_points(60) + rng.normal(0.0, 0.005, size=(60, 2))
    result = get_fitter(['circle']).fit(points)
    assert result.provisional_
    assert result.residual_ < 0.05


def test_collection_failure():
    with pytest.raises(FitDiverged):
        get_fitter().fit(np.array([[0.0, 0.0], [1.0, 1.0]]))
