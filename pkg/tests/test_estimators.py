import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from chebqr._validation import check_coefficients, check_points
from chebqr.chebtech import ChebSeries
from chebqr.estimators import ChebyshevRootFinder, ColleagueEigensolver


class TestValidation:
    def test_strips_and_casts(self):
        c = check_coefficients([1, 2, 0, 0])
        assert c.dtype == np.float64
        np.testing.assert_array_equal(c, [1.0, 2.0])

    def test_complex(self):
        assert check_coefficients([1j, 1.0]).dtype == np.complex128
        with pytest.raises(ValueError):
            check_coefficients([1j, 1.0], allow_complex=False)

    @pytest.mark.parametrize("bad", [[], [[1.0, 2.0]], [1.0, np.nan], ["a", "b"]])
    def test_rejects(self, bad):
        with pytest.raises(ValueError):
            check_coefficients(bad)

    def test_min_degree(self):
        with pytest.raises(ValueError):
            check_coefficients([1.0, 0.0], min_degree=1)

    def test_points(self):
        np.testing.assert_array_equal(check_points([[0.1], [0.2]]), [0.1, 0.2])
        with pytest.raises(ValueError):
            check_points(np.zeros((3, 2)))
        with pytest.raises(ValueError):
            check_points([np.inf])


class TestEigensolver:
    def test_fit(self):
        est = ColleagueEigensolver().fit([0.0, 0.0, 0.0, 1.0])
        np.testing.assert_allclose(np.sort(est.eigenvalues_.real),
                                   np.sort(np.cos(np.pi * np.array([1, 3, 5]) / 6)), atol=1e-14)
        assert est.backward_error_ < 1e-14
        # v = 0 for a pure T_n, so every window product vanishes
        assert est.gamma_hat_ == 0.0 and est.n_sweeps_ >= 0
        assert len(est.real_roots()) == 3

    def test_linear(self):
        est = ColleagueEigensolver().fit([1.0, 2.0])
        assert est.report_ is None
        np.testing.assert_allclose(est.eigenvalues_, [-0.5])

    def test_predict(self):
        est = ColleagueEigensolver().fit([1.0, 2.0, 3.0])
        np.testing.assert_allclose(est.predict([0.5]), [1.0 + 1.0 + 3.0 * (-0.5)])

    def test_params(self):
        est = ColleagueEigensolver(mode="double", workers=2)
        assert est.get_params()["mode"] == "double"
        assert clone(est).get_params() == est.get_params()
        est.set_params(aed=False)
        assert est.aed is False

    def test_not_fitted(self):
        with pytest.raises(NotFittedError):
            ColleagueEigensolver().predict([0.0])


class TestRootFinder:
    def test_expression(self):
        m = ChebyshevRootFinder().fit("x^2 - 1/4")
        np.testing.assert_allclose(m.roots_, [-0.5, 0.5], atol=1e-14)
        assert m.stability_ == "ok"
        np.testing.assert_allclose(m.predict([0.0]), [-0.25], atol=1e-15)

    def test_transform(self):
        m = ChebyshevRootFinder().fit("x^2 - 1/4")
        np.testing.assert_allclose(m.transform([0.4, -0.9, 0.5]), [-0.1, -0.4, 0.0], atol=1e-14)

    def test_series_and_constant(self):
        m = ChebyshevRootFinder().fit(ChebSeries(np.array([2.0])))
        assert len(m.roots_) == 0
        assert np.all(np.isinf(m.transform([0.0])))

    def test_callable(self):
        m = ChebyshevRootFinder(tol=1e-12).fit(np.sin)
        np.testing.assert_allclose(m.roots_, [0.0], atol=1e-14)

    def test_suspect(self):
        m = ChebyshevRootFinder(suspect_threshold=0.0).fit("x^2 - 1/4")
        assert m.stability_ == "suspect"
