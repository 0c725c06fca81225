import warnings
from collections import defaultdict

import numpy as np
import pytest

from chebqr import _pipeline as P
from chebqr.colleague import build_colleague, colleague_dense
from chebqr.parchase import (DEFAULT_CHUNK, GAP_SINGLE, chase_pipeline, min_spacing,
                             parallel_eigenvalues)
from chebqr.qrcore import StabilityTracker, eigenvalues, sweep_single

from conftest import match_distance


def generators(n, seed=0):
    c = np.random.default_rng(seed).standard_normal(n + 1)
    return build_colleague(c, dtype=np.complex128)


class TestSpacing:
    def test_formula(self):
        assert min_spacing(32) == 32 + 2 * GAP_SINGLE + 4
        for chunk in (1, 4, 16, 64):
            assert min_spacing(chunk) >= chunk + P.REACH_LO + P.REACH_HI


class TestChasePipeline:
    @pytest.mark.parametrize("workers, chunk", [(2, 8), (3, 16), (4, DEFAULT_CHUNK)])
    def test_bitwise_equal_to_sequential(self, workers, chunk):
        shifts = np.array([0.1 + 0.2j, -0.3, 0.5j, 0.7, -0.2 - 0.1j, 0.05])
        a = generators(300, seed=workers)
        b = a.copy()
        ta, tb = StabilityTracker(a), StabilityTracker(b)
        chase_pipeline(a, shifts, workers, ta, chunk=chunk)
        for s in shifts:
            sweep_single(b, s, tb)
        for x, y in zip((a.d, a.beta, a.u, a.v), (b.d, b.beta, b.u, b.v)):
            np.testing.assert_array_equal(x, y)
        assert ta.trk[0] == tb.trk[0]
        assert ta.rotations_applied == tb.rotations_applied

    def test_tickets_disjoint_and_separated(self):
        g = generators(400, seed=1)
        tickets = chase_pipeline(g, np.linspace(-0.5, 0.5, 8), 4, StabilityTracker(g),
                                 trace=True)
        assert tickets
        by_step = defaultdict(list)
        for t in tickets:
            by_step[(t.round, t.superstep)].append(t)
        assert max(len(v) for v in by_step.values()) > 1
        for group in by_step.values():
            group.sort(key=lambda t: t.id)
            for lead, follow in zip(group, group[1:]):
                # rows touched by the follower end strictly before the leader's reach
                assert follow.end + P.REACH_HI < lead.start - P.REACH_LO
                assert lead.start - follow.end >= 2 * GAP_SINGLE

    def test_too_small(self):
        g = generators(2)
        with pytest.raises(ValueError):
            chase_pipeline(g, [0.1], 2, StabilityTracker(g))


class TestParallelEigenvalues:
    def test_workers_one_is_sequential(self):
        g = generators(120, seed=3)
        a = parallel_eigenvalues(g, 1)
        b = eigenvalues(g)
        np.testing.assert_array_equal(a.eigenvalues, b.eigenvalues)
        assert a.tickets == [] and a.flushes == []

    @pytest.mark.parametrize("workers", [2, 4])
    def test_matches_dense(self, workers):
        c = np.random.default_rng(workers).standard_normal(601)
        rep = parallel_eigenvalues(build_colleague(c), workers, trace=True)
        assert rep.converged and rep.workers == workers
        ref = eigenvalues(build_colleague(c)).eigenvalues
        assert match_distance(rep.eigenvalues, ref) <= 1e-9 * np.linalg.norm(colleague_dense(c), 2)
        assert rep.flushes and rep.tickets
        assert rep.flushes[0]["tickets"] <= 6 * workers

    def test_double_falls_back(self):
        g = build_colleague(np.arange(1.0, 20.0))
        with pytest.warns(RuntimeWarning):
            rep = parallel_eigenvalues(g, 4, mode="double")
        assert rep.mode == "double"

    def test_small_matrix(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            rep = parallel_eigenvalues(build_colleague([0.5, 0.0, 1.0]), 4)
        np.testing.assert_allclose(np.sort(rep.eigenvalues.real), [-0.5, 0.5], atol=1e-15)

    def test_bad_workers(self):
        with pytest.raises(ValueError):
            parallel_eigenvalues(generators(5), 0)
