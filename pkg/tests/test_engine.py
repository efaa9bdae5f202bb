import random

import pytest

from quotcoh.engine import (
    DegreeInvariants,
    GradedInvariants,
    alpha_even_bound,
    degeneration_status,
    e2_entry,
    lefschetz_euler,
    odd_alpha_pairs,
    quotient_report,
    u_dimensions,
)
from quotcoh.selftest import random_graded_invariants


def k3_invariants(p, l_plus_2, eta):
    one = DegreeInvariants.make(rank=1, l_plus=1)
    zero = DegreeInvariants.make()
    l_p = (22 - l_plus_2) // p
    h2 = DegreeInvariants.make(rank=22, l_plus=l_plus_2, l_pf=l_p)
    return GradedInvariants(p=p, n=2, eta=eta, degrees=(one, zero, h2, zero, one))


def hilbert2_p5():
    from quotcoh.hilbert import hilbert_invariants

    return hilbert_invariants(5, 2)


class TestGradedInvariants:
    def test_rank_identity_enforced(self):
        bad_middle = DegreeInvariants.make(rank=3, l_plus=1)  # fine on its own
        with pytest.raises(ValueError):
            GradedInvariants(
                p=5, n=1, eta=0,
                degrees=(
                    DegreeInvariants.make(rank=1, l_plus=1),
                    bad_middle,
                    DegreeInvariants.make(rank=1, l_plus=1),
                ),
            )

    def test_strict_requires_connected_ends(self):
        with pytest.raises(ValueError):
            GradedInvariants(
                p=5, n=1, eta=0,
                degrees=(
                    DegreeInvariants.make(rank=0),
                    DegreeInvariants.make(rank=0),
                    DegreeInvariants.make(rank=1, l_plus=1),
                ),
            )

    def test_json_roundtrip(self):
        inv = k3_invariants(5, 2, 4)
        assert GradedInvariants.from_json(inv.to_json()) == inv


class TestE2Entry:
    def test_k3_even_row(self):
        inv = k3_invariants(5, 2, 4)
        assert e2_entry(inv, 2, 2) == (0, 2)

    def test_base_corner(self):
        inv = k3_invariants(5, 2, 4)
        assert e2_entry(inv, 0, 0) == (1, 0)

    def test_odd_row_vanishes_without_cyclotomic_summands(self):
        inv = k3_invariants(5, 2, 4)
        assert e2_entry(inv, 1, 2) == (0, 0)

    def test_torsion_profile_contributes(self):
        one = DegreeInvariants.make(rank=1, l_plus=1)
        zero = DegreeInvariants.make()
        middle = DegreeInvariants.make(rank=5, l_plus=5, l_qt={1: 2, 5: 1})
        inv = GradedInvariants(p=5, n=2, eta=0, degrees=(one, zero, middle, zero, one))
        assert e2_entry(inv, 0, 2) == (5, 3)   # all torsion blocks invariant
        assert e2_entry(inv, 1, 2) == (0, 2)   # blocks below p only
        assert e2_entry(inv, 2, 2) == (0, 7)

    def test_f_coefficients(self):
        inv = k3_invariants(5, 2, 4)
        # H^2 mod p has 2 trivial and 4 free blocks
        assert e2_entry(inv, 0, 2, coefficients="F") == (0, 6)
        assert e2_entry(inv, 1, 2, coefficients="F") == (0, 2)

    def test_f_entries_from_adjacent_integral_rows(self):
        # universal coefficients for torsion-free input: the mod-p page in a
        # positive row is the p-torsion of the two adjacent integral rows
        rng = random.Random(27)
        for _ in range(20):
            p = rng.choice((2, 3, 5, 7))
            inv = random_graded_invariants(rng, p, rng.randrange(2, 4))
            for q in range(2 * inv.n + 1):
                for d in (1, 2, 3):
                    mod_dim = e2_entry(inv, d, q, coefficients="F").p_torsion
                    t_d = e2_entry(inv, d, q).p_torsion
                    t_d1 = e2_entry(inv, d + 1, q).p_torsion
                    assert mod_dim == t_d + t_d1


class TestLefschetz:
    def test_k3_symplectic_p5(self):
        assert lefschetz_euler(k3_invariants(5, 2, 4)) == 4

    def test_two_point_hilbert_scheme(self):
        assert lefschetz_euler(hilbert2_p5()) == 14

    def test_even_only(self):
        inv = k3_invariants(7, 1, 3)
        assert lefschetz_euler(inv) == 1 + 1 + 1


class TestDegeneration:
    def test_k3_rows_degenerate(self):
        status = degeneration_status(k3_invariants(5, 2, 4))
        assert status.two and status.three
        assert status.one and status.four

    def test_eta_one_never_degenerates(self):
        status = degeneration_status(k3_invariants(5, 2, 1))
        assert not (status.two or status.three or status.one or status.four)
        assert status.notes

    def test_three_point_hilbert_scheme_p7(self):
        from quotcoh.hilbert import hilbert_invariants

        inv = hilbert_invariants(7, 3)
        assert inv.eta == 22
        status = degeneration_status(inv)
        assert status.two  # 22 = 1+2+5+6+5+2+1
        assert status.three

    def test_mismatched_eta_yields_disagreement_note(self):
        status = degeneration_status(k3_invariants(5, 2, 10))
        assert not status.two and status.three
        assert status.one is None and status.four is None


class TestUDimensions:
    def test_degenerate_torsion_kills_u(self):
        inv = k3_invariants(5, 2, 4)
        dims = u_dimensions(inv, {2: 1, 3: 0})
        assert dims.u == {2: 0, 3: 0}

    def test_k3_u2_vanishes(self):
        inv = k3_invariants(5, 2, 4)
        assert u_dimensions(inv, {2: 1, 3: 0}).u[2] == 0

    def test_zero_torsion_detects_nondegeneration(self):
        inv = k3_invariants(5, 2, 4)
        dims = u_dimensions(inv, {2: 0, 3: 0})
        assert dims.u[2] == 1

    def test_negative_rejected(self):
        inv = k3_invariants(5, 2, 4)
        with pytest.raises(ValueError):
            u_dimensions(inv, {2: 5, 3: 0})

    def test_ubar_is_consecutive_sum(self):
        rng = random.Random(9)
        for _ in range(25):
            p = rng.choice((3, 5, 7))
            n = rng.randrange(2, 5)
            inv = random_graded_invariants(rng, p, n)
            torsion = {}
            for k in range(1, n):
                torsion[2 * k] = 0
                torsion[2 * k + 1] = 0
            dims = u_dimensions(inv, torsion)
            for k in range(2, 2 * n - 1):
                assert dims.ubar[k] == dims.u[k] + dims.u[k + 1]


class TestAlpha:
    def test_zero_odd_cohomology(self):
        inv = k3_invariants(5, 2, 4)
        assert odd_alpha_pairs(inv) == {0: 0, 1: 0}

    def test_symbolic_pair(self):
        one = DegreeInvariants.make(rank=1, l_plus=1)
        zero = DegreeInvariants.make()
        odd = DegreeInvariants.make(rank=2, l_plus=2)
        degrees = (one, zero, zero, odd, zero, zero, zero, zero, one)
        inv = GradedInvariants(p=5, n=4, eta=0, degrees=degrees, strict=True)
        assert odd_alpha_pairs(inv)[1] == 2

    def test_even_bound(self):
        inv = k3_invariants(5, 2, 4)
        assert alpha_even_bound(inv) == 0
        one = DegreeInvariants.make(rank=1, l_plus=1)
        zero = DegreeInvariants.make()
        mid = DegreeInvariants.make(rank=4, l_minus=1)
        inv2 = GradedInvariants(p=5, n=2, eta=0, degrees=(one, zero, mid, zero, one))
        assert alpha_even_bound(inv2) == 1


class TestQuotientReport:
    def test_k3_row(self):
        report = quotient_report(k3_invariants(5, 2, 4))
        assert report.degenerate
        assert report.alpha == {k: 0 for k in range(1, 5)}
        assert report.even_torsion_free
        assert report.odd_torsion_pairs == {1: 2}  # H^3 = Z/5
        assert report.betti == (1, 0, 6, 0, 1)
        assert report.u == {2: 0, 3: 0}
        assert report.beta == {2: 0}

    def test_two_point_hilbert_scheme_p5(self):
        inv = hilbert2_p5()
        report = quotient_report(inv)
        assert report.degenerate
        assert report.odd_torsion_pairs == {1: 11, 2: 8, 3: 11}
        assert report.betti == (1, 0, 7, 0, 60, 0, 7, 0, 1)
        # rank bookkeeping: what the quotient loses is (p-1) per cyclotomic
        # or free summand
        for k in range(9):
            d = inv.degree(k)
            assert d.rank - report.betti[k] == (inv.p - 1) * (d.l_minus + d.l_pf)

    def test_d_p_pairs(self):
        report = quotient_report(hilbert2_p5())
        inv = hilbert2_p5()
        # d_p^k + d_p^(n-k) = t^2k(U) + t^(2n-2k)(U) + 2 l_+^2k
        t = {2: 1, 4: 1 + 3, 6: 1 + 3 + 6}
        for k in (1, 2, 3):
            assert report.d_p_pairs[k] == t[2 * k] + t[8 - 2 * k] + 2 * inv.l_plus(2 * k)

    def test_conjectural_split_is_optional_and_labeled(self):
        report = quotient_report(hilbert2_p5())
        assert report.conjectural_odd_torsion is None
        report2 = quotient_report(hilbert2_p5(), conjectural_split=True)
        assert report2.conjectural_odd_torsion is not None
        # the split must be consistent with the proved pair sums
        for k, pair in report2.odd_torsion_pairs.items():
            lo = report2.conjectural_odd_torsion[2 * k + 1]
            hi = report2.conjectural_odd_torsion.get(2 * (4 - k) + 1)
            if hi is not None:
                assert lo + hi == pair

    def test_non_degenerate_is_conditional(self):
        one = DegreeInvariants.make(rank=1, l_plus=1)
        zero = DegreeInvariants.make()
        mid = DegreeInvariants.make(rank=4, l_minus=1)
        inv = GradedInvariants(p=5, n=2, eta=0, degrees=(one, zero, mid, zero, one))
        report = quotient_report(inv)
        assert not report.degenerate
        assert report.alpha is None
        assert report.odd_torsion_pairs is None
        assert report.alpha_even_pair_bound == 1

    def test_torsion_in_input_rejected(self):
        one = DegreeInvariants.make(rank=1, l_plus=1)
        zero = DegreeInvariants.make()
        mid = DegreeInvariants.make(rank=4, l_plus=4, l_qt={1: 1})
        inv = GradedInvariants(p=5, n=2, eta=6, degrees=(one, zero, mid, zero, one))
        with pytest.raises(ValueError):
            quotient_report(inv)

    def test_inconsistent_eta_rejected(self):
        # criterion (3) holds but eta disagrees with the Euler count
        with pytest.raises(ValueError):
            quotient_report(k3_invariants(5, 2, 6))


class TestRandomConsistency:
    def test_criteria_two_three_agree_when_eta_is_the_euler_count(self):
        rng = random.Random(13)
        for _ in range(60):
            p = rng.choice((3, 5, 7))
            inv0 = random_graded_invariants(rng, p, rng.randrange(2, 5))
            eta = lefschetz_euler(inv0)
            if eta < 2:
                continue
            inv = GradedInvariants(
                p=inv0.p, n=inv0.n, eta=eta, degrees=inv0.degrees, strict=False
            )
            status = degeneration_status(inv)
            assert status.two == status.three
