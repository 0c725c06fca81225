import numpy as np
import numpy.polynomial.chebyshev as npc
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from chebqr.colleague import (DENSE_LIMIT, DegenerateDegreeError, Generators,
                              LeadingCoefficientError, build_colleague, colleague_dense,
                              linear_root, strip_leading_zeros)

from conftest import match_distance

coeff_arrays = arrays(float, st.integers(3, 30),
                      elements=st.floats(-5, 5, allow_nan=False)).filter(
    lambda c: abs(c[-1]) > 0.1)


class TestBuild:
    def test_small_example(self):
        # p = T_0 + 2 T_1 + 3 T_2 + 4 T_3
        g = build_colleague([1.0, 2.0, 3.0, 4.0])
        A = g.to_dense()
        expect = np.array([[-3 / 8, 0.5 - 2 / 8, -np.sqrt(2) / 8],
                           [0.5, 0.0, np.sqrt(0.5)],
                           [0.0, np.sqrt(0.5), 0.0]])
        np.testing.assert_allclose(A, expect, atol=1e-16)

    def test_generator_layout(self):
        g = build_colleague([1.0, 2.0, 3.0, 4.0, 8.0])
        np.testing.assert_allclose(g.beta, [0.5, 0.5, np.sqrt(0.5)])
        np.testing.assert_array_equal(g.u, [1, 0, 0, 0])
        np.testing.assert_allclose(g.v, -np.array([4, 3, 2, np.sqrt(2)]) / 16)
        assert g.d[0] == g.v[0] and np.all(g.d[1:] == 0)

    @given(coeff_arrays)
    def test_matches_independent_dense(self, c):
        np.testing.assert_allclose(build_colleague(c).to_dense(), colleague_dense(c),
                                   atol=1e-15 * np.abs(c).max() / abs(c[-1]))

    @given(coeff_arrays)
    def test_eigenvalues_are_roots(self, c):
        ev = np.linalg.eigvals(colleague_dense(c))
        ref = npc.chebroots(c)
        scale = max(1.0, np.abs(ref).max())
        assert match_distance(ev, ref) <= 1e-6 * scale

    @given(coeff_arrays)
    def test_structure(self, c):
        g = build_colleague(c)
        assert g.hermitian_residue() <= 1e-15
        assert g.hessenberg_residue() == 0.0
        A = g.to_dense()
        assert np.all(np.tril(A, -2) == 0)

    def test_complex_coefficients(self):
        c = np.array([1 + 1j, 0.5, -2j, 1.0])
        g = build_colleague(c)
        assert g.d.dtype == np.complex128
        np.testing.assert_allclose(g.to_dense(), colleague_dense(c), atol=1e-15)
        assert g.hermitian_residue() < 1e-16

    def test_dtype_override(self):
        assert build_colleague([1.0, 0.0, 1.0], dtype=np.complex128).v.dtype == np.complex128

    def test_entry_matches_dense(self):
        g = build_colleague([0.3, -1.0, 0.5, 2.0, 1.0])
        A = g.to_dense()
        for i in range(4):
            for j in range(4):
                assert g.entry(i, j) == pytest.approx(A[i, j], abs=1e-16)


class TestErrors:
    @pytest.mark.parametrize("c", [[1.0], [1.0, 2.0]])
    def test_degree_too_small(self, c):
        with pytest.raises(DegenerateDegreeError):
            build_colleague(c)

    def test_zero_leading(self):
        with pytest.raises(LeadingCoefficientError):
            build_colleague([1.0, 2.0, 0.0])

    def test_tiny_leading(self):
        with pytest.raises(LeadingCoefficientError):
            build_colleague([1.0, 2.0, 1e-12], monic_tol=1e-10)

    def test_non_finite(self):
        with pytest.raises(ValueError):
            build_colleague([1.0, np.inf, 1.0])

    def test_densify_guard(self):
        g = build_colleague(np.r_[np.zeros(DENSE_LIMIT + 1), 1.0])
        with pytest.raises(MemoryError):
            g.to_dense()


class TestHelpers:
    def test_linear_root(self):
        assert linear_root([1.0, 4.0]) == -0.25

    def test_strip(self):
        np.testing.assert_array_equal(strip_leading_zeros([1.0, 2.0, 0.0, 0.0]), [1.0, 2.0])
        with pytest.raises(ValueError):
            strip_leading_zeros([0.0, 0.0])

    def test_copy_is_independent(self):
        g = build_colleague([1.0, 2.0, 3.0])
        h = g.copy()
        h.d[0] = 99
        h.extra[(2, 0)] = 1.0
        assert g.d[0] != 99 and not g.extra

    def test_extra_entries_densify(self):
        g = Generators(np.zeros(3), np.ones(2), np.zeros(3), np.zeros(3), extra={(2, 0): 0.5})
        A = g.to_dense()
        assert A[2, 0] == 0.5 and A[0, 2] == 0.5
        assert g.hessenberg_residue() == 0.5
