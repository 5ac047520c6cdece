import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

import striplab as sl
from striplab.errors import (
    EmptySupport,
    FullSupport,
    IndexInSupport,
    NonConvergence,
    ZeroColumn,
)


def brute_gram(phi):
    """Independent oracle: inner products by explicit summation loops."""
    m, n = phi.m, phi.N
    g = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            g[i, j] = sum(np.conj(phi.entries[t, i]) * phi.entries[t, j] for t in range(m))
    return g


class TestSensingMatrix:
    def test_rejects_non_unit_columns(self):
        with pytest.raises(ValueError, match="unit-norm"):
            sl.SensingMatrix(np.eye(3) * 2.0)

    def test_rejects_nan(self):
        a = np.eye(3)
        a[0, 0] = np.nan
        with pytest.raises(ValueError, match="NaN"):
            sl.SensingMatrix(a)

    def test_rejects_tall(self):
        with pytest.raises(ValueError, match="m <= N"):
            sl.SensingMatrix(np.eye(4)[:, :2])

    def test_entries_read_only(self, chirp5):
        with pytest.raises(ValueError):
            chirp5.entries[0, 0] = 0.0

    def test_scalar_kind(self, chirp5, simplex3):
        assert chirp5.scalar_kind == "complex"
        assert simplex3.scalar_kind == "real"


class TestHollowGram:
    def test_identity_is_zero(self):
        phi = sl.SensingMatrix(np.eye(3))
        assert np.abs(sl.hollow_gram(phi)).max() == 0.0

    def test_chirp5_magnitudes(self, chirp5):
        h = sl.hollow_gram(chirp5)
        mags = np.abs(h[~np.eye(25, dtype=bool)])
        near_zero = np.abs(mags) < 1e-12
        near_chirp = np.abs(mags - 1 / np.sqrt(5)) < 1e-12
        assert np.all(near_zero | near_chirp)
        # cross-check against the explicit-sum oracle
        oracle = brute_gram(chirp5)
        np.fill_diagonal(oracle, 0.0)
        assert np.abs(h - oracle).max() < 1e-12

    def test_simplex_etf_entries(self, simplex3):
        h = sl.hollow_gram(simplex3)
        off = h[~np.eye(4, dtype=bool)]
        assert np.abs(off - (-1.0 / 3.0)).max() < 1e-12

    def test_hermitian_zero_diagonal(self, family_zoo):
        for phi in family_zoo.values():
            h = sl.hollow_gram(phi)
            assert np.abs(np.diag(h)).max() == 0.0
            assert np.abs(h - h.conj().T).max() <= 1e-12


class TestSpectralNorm:
    def test_identity(self):
        assert abs(sl.spectral_norm(np.eye(5)) - 1.0) < 1e-10

    def test_rank_one_flat(self):
        m, n = 4, 9
        a = np.full((m, n), 1 / np.sqrt(m))
        assert abs(sl.spectral_norm(a) - np.sqrt(n)) < 1e-9

    def test_chirp_full_matrix(self, chirp5):
        assert abs(sl.spectral_norm(chirp5.entries) - np.sqrt(5)) < 1e-9

    @pytest.mark.parametrize("seed", range(5))
    def test_matches_svd(self, seed):
        rng = np.random.default_rng(seed)
        a = rng.standard_normal((7, 12))
        assert abs(sl.spectral_norm(a) - np.linalg.svd(a, compute_uv=False)[0]) < 1e-8
        c = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
        assert abs(sl.spectral_norm(c) - np.linalg.svd(c, compute_uv=False)[0]) < 1e-8

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            sl.spectral_norm(np.eye(2), rel_tol=0.0)
        with pytest.raises(ValueError):
            sl.spectral_norm(np.eye(2), rel_tol=1e-2)
        with pytest.raises(ValueError):
            sl.spectral_norm(np.eye(2), max_iters=5)

    def test_non_convergence(self):
        # two nearly equal top singular values crawl too slowly for 10 iters
        a = np.diag([1.0, 1.0 - 1e-12, 0.5])
        a[0, 1] = 1e-13
        with pytest.raises(NonConvergence):
            sl.spectral_norm(a + np.triu(np.full((3, 3), 1e-3), 1), max_iters=10, rel_tol=1e-10)
        # generous budget converges
        sl.spectral_norm(a, max_iters=10_000)


class TestRestrictedGram:
    def test_singleton_is_zero(self, family_zoo):
        for phi in family_zoo.values():
            assert sl.restricted_gram_norm(phi, [0]) <= 1e-9

    def test_pairs_equal_coherence(self, family_zoo):
        rng = np.random.default_rng(0)
        for phi in family_zoo.values():
            g = sl.hollow_gram(phi)
            for _ in range(100):
                i, j = rng.choice(phi.N, size=2, replace=False)
                assert abs(sl.restricted_gram_norm(phi, [i, j]) - abs(g[i, j])) < 1e-10

    def test_chirp_same_b_pair_orthogonal(self, chirp5):
        # columns am+b with equal b: coherence 0 by direct inner product
        i, j = 0 * 5 + 1, 3 * 5 + 1  # (a=1,b=2) and (a=4,b=2) in 0-based layout
        direct = np.vdot(chirp5.entries[:, i], chirp5.entries[:, j])
        assert abs(direct) < 1e-12
        assert sl.restricted_gram_norm(chirp5, [i, j]) < 1e-10

    def test_oversized_support_allowed(self, chirp5):
        val = sl.restricted_gram_norm(chirp5, list(range(10)))  # |I| = 2m
        assert val >= 10 / 5 - 1 - 1e-9  # delta >= |I|/m - 1 for any frame

    def test_empty_support(self, chirp5):
        with pytest.raises(EmptySupport):
            sl.restricted_gram_norm(chirp5, [])


class TestSincStatistic:
    def test_orthonormal_zero(self, identity4):
        assert sl.sinc_statistic(identity4, [0, 2]) == 0.0

    def test_chirp5_all_pairs_two_fifths(self, chirp5):
        vals = [sl.sinc_statistic(chirp5, list(pair))
                for pair in itertools.combinations(range(25), 2)]
        assert len(vals) == 300
        assert np.abs(np.asarray(vals) - 0.4).max() < 1e-12

    def test_simplex_pair(self, simplex3):
        assert abs(sl.sinc_statistic(simplex3, [0, 1]) - 2.0 / 9.0) < 1e-12

    def test_full_support_error(self, identity4):
        with pytest.raises(FullSupport):
            sl.sinc_statistic(identity4, [0, 1, 2, 3])

    def test_equals_max_column_sum(self, family_zoo):
        rng = np.random.default_rng(1)
        for phi in family_zoo.values():
            for _ in range(5):
                k = int(rng.integers(1, min(4, phi.N - 1) + 1))
                supp = sorted(rng.choice(phi.N, size=k, replace=False).tolist())
                outside = [j for j in range(phi.N) if j not in supp]
                best = max(sl.column_sum_statistic(phi, supp, j) for j in outside)
                assert abs(sl.sinc_statistic(phi, supp) - best) <= 1e-12


class TestColumnSum:
    def test_orthonormal_zero(self, identity4):
        assert sl.column_sum_statistic(identity4, [0, 1], 3) == 0.0

    def test_etf_closed_form(self, simplex3):
        mu = 1.0 / 3.0
        assert abs(sl.column_sum_statistic(simplex3, [0, 2], 3) - 2 * mu**2) < 1e-12

    def test_chirp_same_b_pair(self, chirp5):
        supp = [1, 16]          # same-b pair (b=2)
        j = 7                   # (a=2, b=3): different b from both members
        assert abs(sl.column_sum_statistic(chirp5, supp, j) - 0.4) < 1e-12
        direct = sum(abs(np.vdot(chirp5.entries[:, l], chirp5.entries[:, j])) ** 2
                     for l in supp)
        assert abs(direct - 0.4) < 1e-12

    def test_index_in_support(self, chirp5):
        with pytest.raises(IndexInSupport):
            sl.column_sum_statistic(chirp5, [0, 1], 1)


class TestNormalizeColumns:
    def test_scales(self):
        out = sl.normalize_columns(np.array([[3.0], [4.0], [0.0]]))
        assert np.allclose(out.entries[:, 0], [0.6, 0.8, 0.0], atol=1e-15)

    def test_unit_columns_unchanged(self, chirp5):
        out = sl.normalize_columns(chirp5.entries)
        assert np.abs(out.entries - chirp5.entries).max() <= 1e-15

    def test_zero_column(self):
        raw = np.eye(3)
        raw[:, 1] = 0.0
        with pytest.raises(ZeroColumn) as exc:
            sl.normalize_columns(raw)
        assert exc.value.index == 1


class TestCoherenceProfile:
    def test_chirp5_closed_forms(self, chirp5):
        p = sl.coherence_profile(chirp5)
        assert abs(p.mu - 1 / np.sqrt(5)) < 1e-10
        assert abs(p.mu_bar_sq - 1 / 6) < 1e-10
        assert abs(p.spectral_norm - np.sqrt(5)) < 1e-10
        assert p.tight_frame_defect <= 1e-10
        assert p.coherence_invariant

    def test_identity_profile(self):
        p = sl.coherence_profile(sl.SensingMatrix(np.eye(4)))
        assert p.mu == 0.0 and p.mu_bar_sq == 0.0
        assert abs(p.spectral_norm - 1.0) < 1e-10

    def test_dg_exact_values(self, dg10):
        p = sl.coherence_profile(dg10)
        assert p.mu == 0.25
        assert p.mu_bar_sq == 240 / 4080
        assert p.coherence_invariant
        assert p.tight_frame_defect <= 1e-8

    def test_mean_square_below_max_square(self, family_zoo):
        for phi in family_zoo.values():
            p = sl.coherence_profile(phi)
            assert p.mu_bar_sq <= p.mu**2 + 1e-15
            assert np.all(p.mu_bar_sq_per_column <= p.mu**2 + 1e-15)
            assert p.mu_bar_sq == p.mu_bar_sq_per_column.max()

    def test_trace_identity(self, family_zoo):
        # sum_{i != j} |<phi_i, phi_j>|^2 == ||Phi^* Phi||_F^2 - N
        for phi in family_zoo.values():
            g = phi.entries.conj().T @ phi.entries
            frob = float((np.abs(g) ** 2).sum()) - phi.N
            p = sl.coherence_profile(phi)
            total = float(((phi.N - 1) * p.mu_bar_sq_per_column).sum())
            assert abs(total - frob) <= 1e-8 * max(1.0, abs(frob))

    def test_tight_families(self, family_zoo):
        for name in ("chirp", "simplex-etf", "reed-muller", "delsarte-goethals",
                     "random-harmonic"):
            phi = family_zoo[name]
            p = sl.coherence_profile(phi)
            assert p.tight_frame_defect <= 1e-8, name
            assert abs(p.spectral_norm - np.sqrt(phi.N / phi.m)) <= 1e-8, name

    def test_gaussian_not_invariant(self, family_zoo):
        assert not sl.coherence_profile(family_zoo["gaussian"]).coherence_invariant

    def test_refuses_huge(self):
        phi = sl.build_gaussian(4, 16, seed=0)
        import striplab.frames as fr
        assert fr.PROFILE_COLUMN_LIMIT < 10**5  # documented dense-Gram scope


class TestSubsetEvaluation:
    def test_bundles_both_statistics(self, chirp5):
        ev = sl.evaluate_subset(chirp5, [3, 17])
        assert ev.support == (3, 17)
        assert abs(ev.delta - sl.restricted_gram_norm(chirp5, [3, 17])) < 1e-12
        assert abs(ev.sinc_stat - sl.sinc_statistic(chirp5, [3, 17])) < 1e-12
        assert ev.delta >= 0 and ev.sinc_stat >= 0


@given(st.integers(2, 6), st.integers(0, 2**32 - 1))
def test_two_column_delta_equals_coherence(m, seed):
    rng = np.random.default_rng(seed)
    raw = rng.standard_normal((m, m + 2))
    phi = sl.normalize_columns(raw)
    g = abs(np.vdot(phi.entries[:, 0], phi.entries[:, 1]))
    assert abs(sl.restricted_gram_norm(phi, [0, 1]) - g) < 1e-10
