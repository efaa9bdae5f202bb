import random
from fractions import Fraction

import pytest

from quotcoh.intmat import IntMatrix, kernel_saturated, quotient_group
from quotcoh.lattices import (
    GLattice,
    Lattice,
    RationalLattice,
    bns_invariants,
    discriminant,
    discriminant_group,
    dual_lattice,
    fujiki_constant,
    group_cohomology,
    invariants,
    named_lattice,
    overlattice_from_glue,
    pushforward_quotient_lattice,
    rescale_to_primitive,
    signature,
)
from quotcoh.hilbert import nikulin_involution
from quotcoh.selftest import cycle_matrix, random_glattice


def U(scale=1):
    return named_lattice("U", scale)


class TestBasicInvariants:
    def test_discriminant_unimodular(self):
        assert discriminant(U()) == 1

    def test_discriminant_binary_block(self):
        assert discriminant(named_lattice("Lambda7")) == 7

    def test_discriminant_scaled(self):
        assert discriminant(U(5)) == 25

    def test_discriminant_group_scaled_planes(self):
        l = U(2).direct_sum(U(2), U(2))
        assert discriminant_group(l) == [2] * 6

    def test_discriminant_group_unimodular(self):
        assert discriminant_group(named_lattice("E8", -1)) == []

    def test_discriminant_group_mixed(self):
        # invariant lattice of the 7-point construction at m = 2
        l = named_lattice("U", 7).direct_sum(named_lattice("Gamma7"), named_lattice("rank1", -2))
        divisors = discriminant_group(l)
        assert divisors.count(14) == 1
        assert sum(1 for d in divisors if d % 7 == 0) == 3
        assert discriminant(l) == 2 * 7 ** 3

    def test_signature(self):
        assert signature(U()) == (1, 1)
        assert signature(named_lattice("E8", -1)) == (0, 8)
        assert signature(U(5).direct_sum(U(), U())) == (3, 3)

    def test_signature_rejects_degenerate(self):
        with pytest.raises(ValueError):
            Lattice(IntMatrix([[1, 1], [1, 1]]))

    def test_root_lattice_discriminants(self):
        assert discriminant(named_lattice("A2")) == 3
        assert discriminant(named_lattice("A4")) == 5
        assert discriminant(named_lattice("E6")) == 3
        assert discriminant(named_lattice("E8")) == 1
        assert signature(named_lattice("E8")) == (8, 0)

    def test_named_lattice_scaling(self):
        assert named_lattice("U", 2).gram == IntMatrix([[0, 2], [2, 0]])
        assert named_lattice("L17").gram.det() == 17
        assert signature(named_lattice("E8", -1)) == (0, 8)
        with pytest.raises(ValueError):
            named_lattice("F4")

    def test_l17_dual(self):
        l17 = named_lattice("L17")
        dual17 = dual_lattice(l17, 17)
        assert invariants(dual17).signature == (0, 4)
        assert discriminant(dual17) == 17 ** 3


class TestBNS:
    def test_nikulin_swap(self):
        assert bns_invariants(nikulin_involution()) == (6, 0, 8)

    def test_trivial_action(self):
        gl = GLattice(U().gram, IntMatrix.identity(2), 5, allow_trivial=True)
        assert bns_invariants(gl) == (2, 0, 0)

    def test_rank22_model_with_invariant_rank_6(self):
        # trivial plane plus four 5-cycles: 22 = 2 + 5*4, invariants of rank 6
        blocks = [IntMatrix.identity(2)] + [cycle_matrix(5)] * 4
        action = IntMatrix.block_diagonal(*blocks)
        gram = IntMatrix.block_diagonal(U().gram, IntMatrix.identity(20))
        gl = GLattice(gram, action, 5)
        assert bns_invariants(gl) == (2, 0, 4)

    def test_isometry_required(self):
        gram = IntMatrix.diagonal([1, 2])
        swap = IntMatrix([[0, 1], [1, 0]])
        with pytest.raises(ValueError):
            GLattice(gram, swap, 2)


class TestGroupCohomology:
    def test_nikulin_even_degree(self):
        assert group_cohomology(nikulin_involution(), 2) == (0, (2,) * 6)

    def test_cycle_odd_degree_vanishes(self):
        gl = GLattice(IntMatrix.identity(5), cycle_matrix(5), 5)
        assert group_cohomology(gl, 1) == (0, ())

    def test_trivial_module(self):
        gl = GLattice(IntMatrix([[1]]), IntMatrix.identity(1), 5, allow_trivial=True)
        assert group_cohomology(gl, 3) == (0, ())
        assert group_cohomology(gl, 2) == (0, (5,))
        assert group_cohomology(gl, 0) == (1, ())

    @pytest.mark.parametrize("p", [2, 3, 5, 7])
    def test_two_paths_agree_on_random_lattices(self, p):
        rng = random.Random(1000 + p)
        for _ in range(10):
            gl = random_glattice(rng, p, max_dim=9)
            for i in (1, 2, 3, 4):
                group_cohomology(gl, i)  # raises on disagreement


class TestPushforward:
    def test_nikulin_matches_table_lattice(self):
        pushed = pushforward_quotient_lattice(nikulin_involution())
        target = named_lattice("E8", -1).direct_sum(U(2), U(2), U(2))
        assert invariants(pushed) == invariants(target)
        # discriminant group has p-length l_plus
        assert invariants(pushed).discriminant_group == (2,) * 6

    def test_trivial_action_rescales(self):
        gl = GLattice(U().gram, IntMatrix.identity(2), 5, allow_trivial=True)
        assert pushforward_quotient_lattice(gl).gram == U(5).gram

    def test_cycle_collapses_to_rank_one(self):
        gl = GLattice(IntMatrix.identity(5), cycle_matrix(5), 5)
        assert pushforward_quotient_lattice(gl).gram == IntMatrix([[1]])


class TestOverlattice:
    def test_empty_glue_is_identity(self):
        l = U(3).direct_sum(named_lattice("A2", -1))
        assert overlattice_from_glue(l, []) == l

    def test_gamma7_glue_detects_lambda7(self):
        # inside the invariant block with entries (4,1;1,2): the vectors
        # a+3b and a-4b span a sublattice with Gram 7*(4,-3;-3,4)
        g = named_lattice("Gamma7").gram
        combo = IntMatrix([[1, 3], [1, -4]])
        sub = combo * g * combo.transpose()
        assert sub == IntMatrix([[28, -21], [-21, 28]])
        # gluing (a+3b)/7 into the 7-scaled block produces a lattice with
        # the invariants of Lambda7
        base = Lattice(g * 7)
        glued = overlattice_from_glue(base, [[Fraction(1, 7), Fraction(3, 7)]])
        assert invariants(glued) == invariants(named_lattice("Lambda7"))

    def test_index_follows_discriminants(self):
        base = Lattice(named_lattice("U", 5).gram * 5)
        glued = overlattice_from_glue(
            base, [[Fraction(1, 5), 0], [0, Fraction(1, 5)]]
        )
        # index 5^2, so the discriminant drops by 5^4
        assert discriminant(base) == discriminant(glued) * 5 ** 4
        assert invariants(glued) == invariants(U())

    def test_bad_glue_rejected(self):
        with pytest.raises(ValueError):
            overlattice_from_glue(U(), [[Fraction(1, 5), 0]])

    def test_non_integral_selfpairing_rejected(self):
        base = Lattice(IntMatrix.diagonal([3, 3]))
        with pytest.raises(ValueError):
            overlattice_from_glue(base, [[Fraction(1, 3), 0]])


class TestRescale:
    def test_already_primitive(self):
        rl = RationalLattice.from_rows([[0, Fraction(7, 7)], [Fraction(7, 7), 0]])
        c, l = rescale_to_primitive(rl)
        assert c == 1
        assert l == U()

    def test_divides_content(self):
        rl = RationalLattice.from_rows([[0, 2], [2, 0]])
        c, l = rescale_to_primitive(rl)
        assert c == Fraction(1, 2)
        assert l == U()

    def test_seventh_of_scaled_block(self):
        gram = [[Fraction(7 * e, 7) for e in row] for row in named_lattice("Lambda7").gram.rows]
        c, l = rescale_to_primitive(RationalLattice(tuple(tuple(r) for r in gram)))
        assert c == 1
        assert l == named_lattice("Lambda7")


class TestFujiki:
    def test_reference_values(self):
        assert fujiki_constant(7, 2, 7) == 21
        assert fujiki_constant(5, 2, 5) == 15
        assert fujiki_constant(5, 3, 5) == 375

    def test_rejects_small_m(self):
        with pytest.raises(ValueError):
            fujiki_constant(5, 1, 5)


class TestLatticeTheoryIdentities:
    def test_index_squared_is_discriminant_ratio(self):
        rng = random.Random(77)
        for _ in range(25):
            n = rng.randrange(2, 5)
            while True:
                g = [[0] * n for _ in range(n)]
                for i in range(n):
                    for j in range(i, n):
                        g[i][j] = g[j][i] = rng.randrange(-3, 4)
                gram = IntMatrix(g, ncols=n)
                if gram.det() != 0:
                    break
            while True:
                b = IntMatrix([[rng.randrange(-2, 3) for _ in range(n)] for _ in range(n)])
                if b.det() != 0:
                    break
            sub = Lattice(b * gram * b.transpose())
            index = 1
            for d in quotient_group(b, n):
                index *= d
            assert index * index * discriminant(Lattice(gram)) == discriminant(sub)

    def test_primitive_complement_in_unimodular(self):
        # inside the even unimodular lattice of the involution: a scaled
        # plane and its orthogonal complement share their discriminant
        amb = nikulin_involution().gram
        n = amb.nrows
        emb = IntMatrix([[1 if j == i else 0 for j in range(n)] for i in range(2)], ncols=n)
        sub = Lattice(emb * amb * emb.transpose())
        comp_basis = kernel_saturated(emb * amb)
        comp = Lattice(comp_basis * amb * comp_basis.transpose())
        assert discriminant(sub) == discriminant(comp)
