import numpy as np
import pytest

from aebiplot import (
    chi2_distance,
    decompose,
    from_pi_matrix,
    reconstruct,
    standardized_residuals,
    total_inertia,
)
from aebiplot.ca import _apply_sign_convention
from aebiplot.errors import DegenerateTable, ZeroWeight
from conftest import (
    B35_EXPECTED_SHARES,
    R04_EXPECTED_SHARES,
    eq5_double_loop,
    random_pi,
)


def make_table(pi, prefix="c"):
    n_classes, n_groups = np.asarray(pi).shape
    return from_pi_matrix(
        np.asarray(pi, dtype=float),
        [f"{prefix}{i:02d}" for i in range(n_classes)],
        [f"g{j}" for j in range(n_groups)],
    )


def gaussian_elimination_rank(matrix, tol=1e-10):
    """Row-reduction rank oracle, independent of any SVD machinery."""
    m = [list(map(float, row)) for row in matrix]
    rows, cols = len(m), len(m[0])
    rank = 0
    for col in range(cols):
        pivot = None
        best = tol
        for r in range(rank, rows):
            if abs(m[r][col]) > best:
                best = abs(m[r][col])
                pivot = r
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        pv = m[rank][col]
        for r in range(rows):
            if r != rank and m[r][col] != 0.0:
                f = m[r][col] / pv
                for c2 in range(cols):
                    m[r][c2] -= f * m[rank][c2]
        rank += 1
        if rank == rows:
            break
    return rank


class TestChi2Distance:
    def test_identity(self):
        p = np.array([0.4, 0.6])
        assert chi2_distance(p, p, np.array([0.5, 0.5])) == 0.0

    def test_symmetric_hand_case(self):
        d = chi2_distance(np.array([1.0, 0.0]), np.array([0.5, 0.5]), np.array([0.5, 0.5]))
        assert d == pytest.approx(1.0, abs=1e-15)

    def test_zero_weight_error(self):
        with pytest.raises(ZeroWeight):
            chi2_distance(np.array([1.0, 0.0]), np.array([0.5, 0.5]), np.array([0.5, 0.0]))

    def test_skips_jointly_zero_coordinates(self):
        d = chi2_distance(np.array([1.0, 0.0, 0.0]), np.array([0.5, 0.5, 0.0]),
                          np.array([0.5, 0.5, 0.0]))
        assert d == pytest.approx(1.0, abs=1e-15)

    def test_mass_weighted_sum_equals_total_inertia(self, r04_table):
        t = r04_table
        total = sum(
            t.col_masses[j] * chi2_distance(t.P[:, j], t.row_masses, t.row_masses) ** 2
            for j in range(len(t.groups))
        )
        assert total == pytest.approx(t.total_inertia, rel=1e-12)


class TestTotalInertia:
    def test_identical_columns(self):
        assert total_inertia(make_table([[0.3, 0.3], [0.7, 0.7]])) == pytest.approx(0.0, abs=1e-15)

    def test_hand_case(self):
        assert total_inertia(make_table([[1.0, 0.0], [0.0, 1.0]])) == pytest.approx(1.0)

    def test_matches_double_loop(self):
        rng = np.random.default_rng(11)
        for _ in range(25):
            pi = random_pi(rng)
            t = make_table(pi)
            assert total_inertia(t) == pytest.approx(eq5_double_loop(t.pi), rel=1e-12)

    def test_all_degenerate(self):
        with pytest.raises(DegenerateTable):
            total_inertia(make_table([[1.0, 1.0], [0.0, 0.0]]))


class TestResiduals:
    def test_identical_columns_zero(self):
        res = standardized_residuals(make_table([[0.3, 0.3], [0.7, 0.7]]))
        np.testing.assert_allclose(res.S, 0.0, atol=1e-15)

    def test_frobenius_norm_is_inertia(self):
        t = make_table([[1.0, 0.0], [0.0, 1.0]])
        res = standardized_residuals(t)
        assert np.sum(res.S**2) == pytest.approx(1.0, rel=1e-12)

    def test_weighted_centering(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            t = make_table(random_pi(rng, max_classes=4, max_groups=3))
            res = standardized_residuals(t)
            np.testing.assert_allclose(res.S @ np.sqrt(res.col_masses), 0.0, atol=1e-10)
            np.testing.assert_allclose(np.sqrt(res.row_masses) @ res.S, 0.0, atol=1e-10)

    def test_degenerate_rows_dropped(self):
        res = standardized_residuals(make_table([[1.0, 1.0], [0.2, 0.8]]))
        assert res.dropped_classes == ("c00",)
        assert res.S.shape == (2, 2)


class TestDecompose:
    def test_r04_shares(self, r04_table):
        shares = decompose(r04_table).inertia_shares_pct
        assert len(shares) == 3
        np.testing.assert_allclose(shares, R04_EXPECTED_SHARES, atol=0.5)

    def test_b35_shares(self, b35_table):
        shares = decompose(b35_table).inertia_shares_pct
        np.testing.assert_allclose(shares, B35_EXPECTED_SHARES, atol=0.5)

    def test_sum_of_squared_singular_values_is_inertia(self, r04_table):
        r = decompose(r04_table)
        assert np.sum(r.singular_values**2) == pytest.approx(r04_table.total_inertia, rel=1e-10)

    def test_orthonormal_factors(self, r04_table):
        r = decompose(r04_table)
        eye = np.eye(r.rank)
        np.testing.assert_allclose(r.class_coords.T @ r.class_coords, eye, atol=1e-10)

    def test_contributions_sum_to_one_per_dim(self, r04_table):
        r = decompose(r04_table)
        np.testing.assert_allclose(r.contributions.sum(axis=0), 1.0, atol=1e-10)

    def test_mass_weighted_centering_of_coords(self, r04_table):
        r = decompose(r04_table)
        np.testing.assert_allclose(r.group_masses @ r.treatment_coords, 0.0, atol=1e-10)

    def test_sign_convention(self, r04_table):
        F = decompose(r04_table).treatment_coords
        for k in range(F.shape[1]):
            assert F[np.abs(F[:, k]).argmax(), k] > 0

    def test_duplicated_group_column(self):
        rng = np.random.default_rng(8)
        pi = rng.uniform(0.05, 0.95, (4, 3))
        pi = np.column_stack([pi, pi[:, 1]])
        r = decompose(make_table(pi))
        np.testing.assert_allclose(r.treatment_coords[1], r.treatment_coords[3], atol=1e-10)

    def test_rank_bound(self):
        rng = np.random.default_rng(9)
        for _ in range(20):
            pi = random_pi(rng)
            r = decompose(make_table(pi))
            upper = min(2 * pi.shape[0], pi.shape[1]) - 1
            assert r.rank <= upper

    def test_zero_inertia_rank_zero(self):
        r = decompose(make_table([[0.3, 0.3], [0.7, 0.7]]))
        assert r.rank == 0
        assert r.singular_values.size == 0
        assert r.treatment_coords.shape == (2, 0)

    def test_dropped_classes_reported(self):
        r = decompose(make_table([[1.0, 1.0], [0.2, 0.8]]))
        assert r.dropped_classes == ("c00",)
        assert r.class_labels == ("c01",)

    def test_all_dropped_raises(self):
        with pytest.raises(DegenerateTable):
            decompose(make_table([[1.0, 1.0], [0.0, 0.0]]))

    def test_distance_identity(self):
        # Euclidean distances between principal-coordinate rows reproduce
        # chi-square distances between the column profiles.
        rng = np.random.default_rng(21)
        for _ in range(10):
            t = make_table(random_pi(rng, max_classes=6, max_groups=5))
            r = decompose(t)
            F = r.treatment_coords
            for j in range(len(t.groups)):
                for j2 in range(j + 1, len(t.groups)):
                    expected = chi2_distance(t.P[:, j], t.P[:, j2], t.row_masses)
                    assert np.linalg.norm(F[j] - F[j2]) == pytest.approx(expected, abs=1e-8)

    def test_group_permutation_equivariance(self):
        rng = np.random.default_rng(14)
        for _ in range(20):
            pi = random_pi(rng)
            perm = rng.permutation(pi.shape[1])
            r1 = decompose(make_table(pi))
            r2 = decompose(make_table(pi[:, perm]))
            np.testing.assert_allclose(r2.singular_values, r1.singular_values, atol=1e-12)
            expected_F = r1.treatment_coords[perm].copy()
            expected_A = r1.class_coords.copy()
            _apply_sign_convention(expected_F, expected_A)
            np.testing.assert_allclose(r2.treatment_coords, expected_F, atol=1e-9)
            np.testing.assert_allclose(r2.class_coords, expected_A, atol=1e-9)

    def test_class_permutation_equivariance(self):
        rng = np.random.default_rng(15)
        pi = random_pi(rng, max_classes=6, max_groups=5)
        labels = [f"c{i:02d}" for i in range(pi.shape[0])]
        perm = rng.permutation(pi.shape[0])
        t1 = make_table(pi)
        t2 = from_pi_matrix(pi[perm], [labels[i] for i in perm],
                            [f"g{j}" for j in range(pi.shape[1])])
        r1, r2 = decompose(t1), decompose(t2)
        # labels sort back to the same order, so results must match exactly
        np.testing.assert_allclose(r2.singular_values, r1.singular_values, atol=1e-12)
        np.testing.assert_allclose(r2.treatment_coords, r1.treatment_coords, atol=1e-9)
        np.testing.assert_allclose(r2.class_coords, r1.class_coords, atol=1e-9)

    def test_json_dict_field_names(self, r04_table):
        d = decompose(r04_table).to_json_dict()
        for key in ("singular_values", "inertia_shares_pct", "treatment_coords",
                    "class_coords", "contributions", "dropped_classes"):
            assert key in d


class TestReconstruct:
    def test_random_tables(self):
        rng = np.random.default_rng(33)
        for _ in range(20):
            t = make_table(random_pi(rng))
            r = decompose(t)
            S = standardized_residuals(t).S
            assert np.abs(reconstruct(r) - S).max() < 1e-10

    def test_rank_matches_elimination_oracle(self):
        rng = np.random.default_rng(34)
        pi = rng.uniform(0.05, 0.95, (4, 2))
        pi = np.column_stack([pi, pi[:, 0]])  # 3 groups, one duplicated
        t = make_table(pi)
        r = decompose(t)
        S = standardized_residuals(t).S
        assert r.rank == gaussian_elimination_rank(S)
        assert r.rank == 1

    def test_zero_inertia(self):
        r = decompose(make_table([[0.4, 0.4], [0.1, 0.1]]))
        rebuilt = reconstruct(r)
        np.testing.assert_allclose(rebuilt, 0.0, atol=0)
