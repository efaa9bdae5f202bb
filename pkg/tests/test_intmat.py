import random

import pytest

from quotcoh.intmat import (
    IntMatrix,
    image_basis,
    is_prime,
    kernel_saturated,
    quotient_group,
    rank_mod_p,
    smith_decomposition,
    smith_normal_form,
    solve_integer,
)


def random_matrix(rng, nrows, ncols, bound=9):
    return IntMatrix([[rng.randrange(-bound, bound + 1) for _ in range(ncols)] for _ in range(nrows)])


def cycle(n):
    return IntMatrix([[1 if j == (i + 1) % n else 0 for j in range(n)] for i in range(n)])


def e8_gram():
    edges = [(i, i + 1) for i in range(6)] + [(4, 7)]
    m = [[2 if i == j else 0 for j in range(8)] for i in range(8)]
    for i, j in edges:
        m[i][j] = m[j][i] = -1
    return IntMatrix(m)


class TestSmithNormalForm:
    def test_divisibility_chain_forces_one_six(self):
        _, d, _ = smith_normal_form(IntMatrix.diagonal([2, 3]))
        assert d == IntMatrix.diagonal([1, 6])

    def test_identity_already_snf(self):
        for n in (1, 2, 5):
            _, d, _ = smith_normal_form(IntMatrix.identity(n))
            assert d == IntMatrix.identity(n)

    def test_hyperbolic_plane_scaled(self):
        _, d, _ = smith_normal_form(IntMatrix([[0, 2], [2, 0]]))
        assert d == IntMatrix.diagonal([2, 2])

    def test_transforms_on_random_matrices(self):
        rng = random.Random(7)
        for _ in range(60):
            m = random_matrix(rng, rng.randrange(1, 6), rng.randrange(1, 6))
            u, d, v = smith_normal_form(m)
            assert u * m * v == d
            assert abs(u.det()) == 1
            assert abs(v.det()) == 1
            diag = [d[i, i] for i in range(min(d.nrows, d.ncols))]
            assert all(x >= 0 for x in diag)
            nonzero = [x for x in diag if x]
            assert all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))
            # off-diagonal must vanish
            for i in range(d.nrows):
                for j in range(d.ncols):
                    if i != j:
                        assert d[i, j] == 0

    def test_inverse_transforms(self):
        rng = random.Random(11)
        for _ in range(20):
            m = random_matrix(rng, rng.randrange(1, 5), rng.randrange(1, 5))
            s = smith_decomposition(m)
            assert s.u * s.u_inv == IntMatrix.identity(m.nrows)
            assert s.v * s.v_inv == IntMatrix.identity(m.ncols)


class TestRankModP:
    def test_identity(self):
        assert rank_mod_p(IntMatrix.identity(3), 5) == 3

    def test_row_vanishes_mod_p(self):
        assert rank_mod_p(IntMatrix([[5, 0], [0, 1]]), 5) == 1

    def test_cycle_minus_identity(self):
        m = cycle(5) - IntMatrix.identity(5)
        assert rank_mod_p(m, 5) == 4
        # nullspace is spanned by the all-ones vector
        assert m.apply([1] * 5) == (0,) * 5

    def test_rejects_composite(self):
        with pytest.raises(ValueError):
            rank_mod_p(IntMatrix.identity(2), 6)

    def test_agrees_with_snf_diagonal(self):
        rng = random.Random(3)
        for p in (2, 3, 5, 7):
            for _ in range(25):
                m = random_matrix(rng, rng.randrange(1, 5), rng.randrange(1, 5))
                diag = smith_decomposition(m).diagonal
                expected = sum(1 for x in diag if x % p != 0)
                assert rank_mod_p(m, p) == expected


class TestKernelSaturated:
    def test_zero_matrix(self):
        assert kernel_saturated(IntMatrix.zeros(2, 2)) == IntMatrix.identity(2)

    def test_sum_zero_line(self):
        basis = kernel_saturated(IntMatrix([[1, 1]]))
        assert basis.nrows == 1
        (row,) = basis.rows
        assert sorted(row) == [-1, 1]

    def test_cycle_fixed_space(self):
        fixed = kernel_saturated(cycle(5) - IntMatrix.identity(5))
        assert fixed.nrows == 1
        assert abs(fixed[0, 0]) == 1 and len(set(fixed.rows[0])) == 1

    def test_saturated_means_torsion_free_quotient(self):
        rng = random.Random(19)
        for _ in range(40):
            m = random_matrix(rng, rng.randrange(1, 5), rng.randrange(1, 6), bound=6)
            basis = kernel_saturated(m)
            for row in basis.rows:
                assert m.apply(row) == (0,) * m.nrows
            if basis.nrows:
                assert quotient_group(basis, m.ncols) == []


class TestQuotientGroup:
    def test_two_torsion_square(self):
        assert quotient_group(IntMatrix.diagonal([2, 2]), 2) == [2, 2]

    def test_units_dropped(self):
        assert quotient_group(IntMatrix.diagonal([1, 6]), 2) == [6]

    def test_diagonal_antidiagonal_e8_pair(self):
        g = e8_gram()
        assert abs(g.det()) == 1
        rows = []
        for i in range(8):
            e = [0] * 8
            e[i] = 1
            rows.append(e + e)
        for i in range(8):
            e = [0] * 8
            e[i] = 1
            rows.append(e + [-x for x in e])
        sub = IntMatrix(rows, ncols=16)
        assert quotient_group(sub, 16) == [2] * 8

    def test_dependent_rows_rejected(self):
        with pytest.raises(ValueError):
            quotient_group(IntMatrix([[1, 2], [2, 4]]), 2)


class TestSolveAndImage:
    def test_solve_roundtrip(self):
        rng = random.Random(23)
        for _ in range(30):
            m = random_matrix(rng, rng.randrange(1, 5), rng.randrange(1, 5))
            x = [rng.randrange(-4, 5) for _ in range(m.ncols)]
            b = m.apply(x)
            sol = solve_integer(m, b)
            assert sol is not None
            assert m.apply(sol) == b

    def test_unsolvable(self):
        assert solve_integer(IntMatrix([[2]]), [1]) is None

    def test_image_basis_spans_image(self):
        rng = random.Random(29)
        for _ in range(30):
            m = random_matrix(rng, rng.randrange(1, 5), rng.randrange(1, 5), bound=5)
            basis = image_basis(m)
            # every column of m is an integer combination of the basis rows
            for j in range(m.ncols):
                assert solve_integer(basis.transpose(), m.column(j)) is not None
            # every basis row is in the image of m
            for row in basis.rows:
                assert solve_integer(m, row) is not None


def test_is_prime_small_values():
    assert [p for p in range(25) if is_prime(p)] == [2, 3, 5, 7, 11, 13, 17, 19, 23]
