from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from concalc.diagram import closure
from concalc.invariants import (
    AlexanderPoly,
    SeifertMatrix,
    alexander,
    averaged_signature,
    braid_seifert_matrix,
    compress,
    lt_signature,
    nullity,
    seifert_matrix,
    signature_function,
    signature_profile_csv,
)
from concalc.morse import parse_braid, split_union


def tref():
    return braid_seifert_matrix(parse_braid("2; 1 1 1"))


def fig8():
    return braid_seifert_matrix(parse_braid("3; 1 -2 1 -2"))


class TestAlexander:
    def test_trefoil(self):
        assert alexander(tref()).coeffs == (1, -1, 1)

    def test_unknot(self):
        a = alexander(SeifertMatrix(()))
        assert a.coeffs == (1,) and a.at_one() == 1

    def test_symmetric(self):
        assert alexander(fig8()).is_symmetric

    def test_connected_sum_multiplies(self):
        d = closure(parse_braid("2; 1 1 1").to_tangle())
        sum_diag = closure(parse_braid("3; 1 1 1 2 2 2").to_tangle())
        a = alexander(seifert_matrix(d))
        assert alexander(seifert_matrix(sum_diag)).coeffs == (a * a).coeffs

    def test_zero_for_split(self):
        d = closure(
            split_union(
                parse_braid("2; 1 1 1").to_tangle(), parse_braid("2; 1").to_tangle()
            )
        )
        assert alexander(seifert_matrix(d)).is_zero


class TestLtSignature:
    def test_trefoil_half(self):
        assert lt_signature(tref(), Fraction(1, 2)) == -2

    def test_trefoil_before_first_jump(self):
        assert lt_signature(tref(), Fraction(1, 12)) == 0

    def test_theta_zero_convention(self):
        assert lt_signature(tref(), Fraction(0)) == 0

    def test_unknot(self):
        assert lt_signature(SeifertMatrix(()), Fraction(1, 3)) == 0

    def test_oracle_2x2_hermitian(self):
        # independent check: eigenvalues of H(1/2) = 2(A + A^T) for the
        # trefoil matrix [[-1,1],[0,-1]] are -2 and -6
        A = sympy.Matrix([[-1, 1], [0, -1]])
        H = 2 * (A + A.T)
        ev = list(H.eigenvals())
        assert all(e < 0 for e in ev)
        assert lt_signature(tref(), Fraction(1, 2)) == -2


class TestNullity:
    def test_trefoil(self):
        assert nullity(tref(), Fraction(1, 6)) == 1
        assert nullity(tref(), Fraction(1, 2)) == 0

    def test_unknot(self):
        assert nullity(SeifertMatrix(()), Fraction(1, 7)) == 0


class TestSignatureFunction:
    def test_trefoil_steps(self):
        sf = signature_function(tref())
        assert [j.theta for j in sf.jumps] == [Fraction(1, 6), Fraction(5, 6)]
        assert sf.plateaus == (0, -2, 0)
        assert [j.averaged_times_2 for j in sf.jumps] == [-2, -2]
        assert [j.nullity for j in sf.jumps] == [1, 1]

    def test_figure8_flat(self):
        sf = signature_function(fig8())
        assert sf.jumps == () and sf.plateaus == (0,)

    def test_unknot(self):
        sf = signature_function(SeifertMatrix(()))
        assert sf.jumps == () and sf.plateaus == (0,)

    def test_averaged_at_jump_is_mean(self):
        sf = signature_function(tref())
        for i, j in enumerate(sf.jumps):
            assert j.averaged_times_2 == sf.plateaus[i] + sf.plateaus[i + 1]

    def test_stabilization_invariance(self):
        # enlarging by the standard stabilization block changes nothing
        A = tref().rows()
        n = len(A)
        for r in A:
            r.extend([0, 0])
        A.append([0] * n + [0, 1])
        A.append([0] * n + [0, 0])
        big = SeifertMatrix(tuple(tuple(r) for r in A))
        sf0, sf1 = signature_function(tref()), signature_function(big)
        assert sf0.plateaus == sf1.plateaus
        assert [j.theta for j in sf0.jumps] == [j.theta for j in sf1.jumps]
        assert sf0.generic_nullity == sf1.generic_nullity

    def test_block_sum_additive(self):
        M = tref().block_sum(tref())
        sf = signature_function(M)
        assert sf.plateaus == (0, -4, 0)
        assert [j.averaged_times_2 for j in sf.jumps] == [-4, -4]

    def test_mirror_negates(self):
        left = braid_seifert_matrix(parse_braid("2; -1 -1 -1"))
        sf = signature_function(left)
        assert sf.plateaus == (0, 2, 0)

    def test_irrational_jumps_certified(self):
        # Delta = 2t^2 - 3t + 2 is palindromic but not cyclotomic, so the
        # jumps sit at irrational angles carried as (minpoly, interval)
        M = SeifertMatrix(((1, 1), (0, 2)))
        sf = signature_function(M)
        assert sf.jumps and all(j.theta is None for j in sf.jumps)
        for j in sf.jumps:
            lo, hi = j.interval
            assert 0 < lo < hi < 1
            g = sympy.Poly(list(j.cos_minpoly), sympy.Symbol("x"))
            assert g.degree() >= 1
        assert sf.plateaus[0] == 0
        assert sf.plateaus == tuple(reversed(sf.plateaus))

    def test_degenerate_split_link(self):
        d = closure(
            split_union(
                parse_braid("2; 1 1 1").to_tangle(), parse_braid("2; 1 1 1").to_tangle()
            )
        )
        sf = signature_function(seifert_matrix(d))
        assert sf.generic_nullity == 1
        assert sf.plateaus == (0, -4, 0)
        assert [j.nullity for j in sf.jumps] == [3, 3]


class TestAveraged:
    def test_off_jump_equals_sigma(self):
        assert averaged_signature(tref(), Fraction(1, 2)) == -2

    def test_at_jump(self):
        assert averaged_signature(tref(), Fraction(1, 6)) == Fraction(-1)


class TestProfileCsv:
    def test_unknot_rows(self):
        csv = signature_profile_csv(SeifertMatrix(()), 4)
        lines = csv.strip().split("\n")
        assert lines[0] == "theta_num,theta_den,sigma,sigma_bar_times_2,nullity,is_jump"
        assert len(lines) == 5
        assert all(l.endswith(",0,0,0,0") for l in lines[1:])

    def test_trefoil_resolution_12(self):
        csv = signature_profile_csv(tref(), 12)
        lines = csv.strip().split("\n")
        assert len(lines) == 1 + 12 + 2
        assert "1,6,-1,-2,1,1" in lines

    def test_deterministic(self):
        assert signature_profile_csv(tref(), 8) == signature_profile_csv(tref(), 8)


@settings(deadline=None, max_examples=25)
@given(
    st.integers(2, 3),
    st.lists(st.integers(-2, 2).filter(lambda x: x != 0), min_size=2, max_size=8),
    st.integers(1, 20),
    st.integers(2, 21),
)
def test_symmetry_and_consistency(n, w, p, q):
    from hypothesis import assume

    w = [x for x in w if abs(x) < n]
    assume(len({abs(x) for x in w}) == n - 1)
    M = compress(braid_seifert_matrix(parse_braid(f"{n}; " + " ".join(map(str, w)))))
    th = Fraction(p, q) % 1
    assume(0 < th < 1)
    assert lt_signature(M, th) == lt_signature(M, 1 - th)
    sf = signature_function(M)
    assert sf.sigma(th) == lt_signature(M, th)
    assert sf.nullity_at(th) == nullity(M, th)
