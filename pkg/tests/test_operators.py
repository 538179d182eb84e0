import pytest
import sympy

from concalc.diagram import LinkDiagram, closure
from concalc.invariants import signature_function
from concalc.morse import MorseTangle, cap, cross, cup, mirror, parse_braid
from concalc.operators import (
    BinaryTree,
    C_knot,
    C_link,
    C_n,
    T_s,
    bing,
    bing_double,
    cable,
    cable2_untwisted,
    complete_tree,
    component_writhes,
    ell2,
    format_tree,
    iterated_bing,
    parse_tree,
    to_closed_tangle,
    trace_close_strands,
    trace_closed,
    tree_bing,
    whitehead_minus,
    whitehead_plus,
)
from concalc.seifert import alexander_det, seifert_matrix

from helpers import alex_canonical

t = sympy.Symbol("t")
ONE = sympy.Poly(1, t)
TREF_DELTA = sympy.Poly(t**2 - t + 1, t)


def canon(d):
    return alex_canonical(alexander_det(seifert_matrix(d)).as_expr())


def per_comp(d):
    return sorted((str(canon(d.sublink([i]))) for i in range(d.n_components)))


def off_diag_zero(lk):
    return all(
        lk[i][j] == 0 for i in range(len(lk)) for j in range(len(lk)) if i != j
    )


def braid_closed(text):
    return trace_closed(parse_braid(text).to_tangle())


def one_string(text):
    return trace_close_strands(parse_braid(text).to_tangle(), 1)


UNKNOT = MorseTangle(0, (cup(1), cap(1)), (), (1,))


class TestCableEngine:
    def test_width_one_is_identity(self):
        k = braid_closed("2; 1 1 1")
        c = cable(k, (1,), ((1,),))
        assert c.events == k.events and c.cup_dirs == k.cup_dirs

    def test_component_writhes(self):
        assert component_writhes(braid_closed("2; 1 1 1")) == (3,)
        assert component_writhes(braid_closed("2; -1 -1 -1")) == (-3,)
        assert component_writhes(braid_closed("3; 1 -2 1 -2")) == (0,)

    def test_parallel_copies_of_trefoil(self):
        c = cable2_untwisted(braid_closed("2; 1 1 1"), 0)
        assert c.n_components == 2
        assert c.crossing_count == 4 * 3 + 2 * 3
        d = closure(c)
        assert off_diag_zero(d.linking_matrix())
        assert per_comp(d) == [str(TREF_DELTA)] * 2

    def test_bad_widths_rejected(self):
        k = braid_closed("2; 1 1 1")
        with pytest.raises(ValueError):
            cable(k, (2,), ((1,),))
        with pytest.raises(ValueError):
            cable(k, (1, 1), ((1,), (1,)))


class TestBing:
    def test_unknot_gives_unlink_invariants(self):
        d = closure(bing(UNKNOT))
        assert d.n_components == 2
        assert off_diag_zero(d.linking_matrix())
        assert alexander_det(seifert_matrix(d)).is_zero
        assert per_comp(d) == [str(ONE)] * 2

    def test_trefoil(self):
        d = closure(bing(braid_closed("2; 1 1 1")))
        assert d.n_components == 2
        assert len(d.crossings) == 22
        assert off_diag_zero(d.linking_matrix())
        assert per_comp(d) == [str(ONE)] * 2

    def test_figure8_and_mirror_clasp(self):
        k = braid_closed("3; 1 -2 1 -2")
        for cl in (1, -1):
            d = closure(bing(k, clasp_sign=cl))
            assert d.n_components == 2
            assert off_diag_zero(d.linking_matrix())
            assert per_comp(d) == [str(ONE)] * 2

    def test_single_component_selection(self):
        b1 = bing(UNKNOT)
        b2 = bing(b1, comps=[0])
        assert b2.n_components == 3

    def test_string_link_rejected(self):
        with pytest.raises(ValueError):
            bing(MorseTangle(1, (), (1,), ()))

    def test_diagram_round_trip(self):
        d0 = closure(braid_closed("2; 1 1 1"))
        d = bing_double(d0)
        assert isinstance(d, LinkDiagram)
        assert d.n_components == 2

    def test_iterated(self):
        b2 = iterated_bing(braid_closed("2; 1 1 1"), 2)
        assert b2.n_components == 4
        d = closure(b2)
        assert off_diag_zero(d.linking_matrix())


class TestWhitehead:
    def test_unknot(self):
        d = closure(whitehead_plus(UNKNOT))
        assert d.n_components == 1
        assert canon(d) == ONE

    def test_trefoil_trivial_alexander(self):
        d = closure(whitehead_plus(braid_closed("2; 1 1 1")))
        assert d.n_components == 1
        assert canon(d) == ONE

    def test_clasp_oriented_sign_is_positive(self):
        # the splice's two clasp crossings act on the antiparallel pair:
        # geometric sign -1, strand directions (+1, -1), oriented sign +1
        w = whitehead_plus(UNKNOT)
        clasps = [e for e in w.events if e.kind == "X"]
        assert len(clasps) == 2 and all(e.sign == -1 for e in clasps)
        # the doubled cup emits dirs (+1, -1), so each oriented clasp sign
        # is (-1) * (+1) * (-1) = +1
        assert w.cup_dirs[0] == 1

    def test_minus_is_mirror_of_plus_on_mirror(self):
        k = braid_closed("2; 1 1 1")
        a = whitehead_minus(k)
        b = mirror(whitehead_plus(mirror(k)))
        assert a.events == b.events and a.cup_dirs == b.cup_dirs


class TestTrees:
    def test_parse_format_round_trip(self):
        for text in [".", "(..)", "((..).)", "(.(..))", "((..)(..))"]:
            assert format_tree(parse_tree(text)) == text

    def test_order_counts_internal_nodes(self):
        assert parse_tree(".").order == 0
        assert parse_tree("(..)").order == 1
        assert parse_tree("((..)(..))").order == 3
        assert complete_tree(3).leaves == 8

    def test_parse_errors(self):
        for bad in ["", "(.", "(...)", "x", "(..)."]:
            with pytest.raises(ValueError):
                parse_tree(bad)

    def test_complete_tree_is_iterated_bing(self):
        k = braid_closed("2; 1 1 1")
        for n in (1, 2):
            a = iterated_bing(k, n)
            b = tree_bing(k, complete_tree(n))
            assert a.events == b.events and a.cup_dirs == b.cup_dirs

    def test_lopsided_tree(self):
        k = braid_closed("2; 1 1 1")
        out = tree_bing(k, parse_tree("((..).)"))
        assert out.n_components == 3
        d = closure(out)
        assert off_diag_zero(d.linking_matrix())

    def test_tree_bing_needs_knot(self):
        with pytest.raises(ValueError):
            tree_bing(bing(UNKNOT), parse_tree("(..)"))


class TestCKnot:
    def test_is_string_link(self):
        g = C_knot(one_string("2; 1 1 1"))
        assert g.inputs == 2 and g.is_string_link()

    def test_closure_matches_bing_double(self):
        dc = closure(trace_closed(C_knot(one_string("2; 1 1 1"))))
        db = closure(bing(braid_closed("2; 1 1 1")))
        assert dc.n_components == db.n_components == 2
        assert off_diag_zero(dc.linking_matrix())
        assert per_comp(dc) == per_comp(db) == [str(ONE)] * 2
        sc = signature_function(seifert_matrix(dc))
        sb = signature_function(seifert_matrix(db))
        assert sc.plateaus == sb.plateaus
        assert [j.theta for j in sc.jumps] == [j.theta for j in sb.jumps]
        a = alexander_det(seifert_matrix(dc))
        b = alexander_det(seifert_matrix(db))
        assert a.is_zero == b.is_zero

    def test_trivial_string(self):
        d = closure(trace_closed(C_knot(MorseTangle(1, (), (1,), ()))))
        assert d.n_components == 2
        assert off_diag_zero(d.linking_matrix())
        assert per_comp(d) == [str(ONE)] * 2


class TestCLink:
    def test_trivial(self):
        g = C_link(MorseTangle(2, (), (1, 1), ()))
        assert g.is_string_link()
        assert g.crossing_count == 8
        d = closure(trace_closed(g))
        assert d.n_components == 2
        assert off_diag_zero(d.linking_matrix())
        assert per_comp(d) == [str(ONE)] * 2
        assert alexander_det(seifert_matrix(d)).is_zero

    def test_clasped_input_gives_whitehead_like_closure(self):
        # a +/- clasp between the strings makes the closure a link with
        # unknotted components, zero linking number, nonvanishing
        # Alexander polynomial and signature plateau (+/-1,)
        for word, plateau in [("2; 1 1", (1,)), ("2; -1 -1", (-1,))]:
            d = closure(trace_closed(C_link(parse_braid(word).to_tangle())))
            assert per_comp(d) == [str(ONE)] * 2
            assert off_diag_zero(d.linking_matrix())
            assert not alexander_det(seifert_matrix(d)).is_zero
            assert signature_function(seifert_matrix(d)).plateaus == plateau

    def test_c2_of_trefoil(self):
        g = C_n(one_string("2; 1 1 1"), 2)
        assert g.is_string_link()
        assert g.crossing_count == 30
        d = closure(trace_closed(g))
        assert d.n_components == 2
        assert off_diag_zero(d.linking_matrix())
        assert per_comp(d) == [str(ONE)] * 2

    def test_c0_is_identity(self):
        b = one_string("2; 1 1 1")
        assert C_n(b, 0) is b

    def test_needs_two_strings(self):
        with pytest.raises(ValueError):
            C_link(MorseTangle(1, (), (1,), ()))


class TestSmallOperators:
    def test_T_s(self):
        triv = MorseTangle(2, (), (1, 1), ())
        assert T_s(triv, 0).crossing_count == 0
        g = T_s(triv, 2)
        assert g.is_string_link()
        lk = closure(trace_closed(g)).linking_matrix()
        assert lk[0][1] == 1

    def test_T_s_rejects_negative(self):
        with pytest.raises(ValueError):
            T_s(MorseTangle(2, (), (1, 1), ()), -1)

    def test_ell2(self):
        g = ell2(one_string("2; 1 1 1"))
        assert g.inputs == 2 and g.is_string_link()
        d = closure(trace_closed(g))
        assert d.n_components == 2
        assert alexander_det(seifert_matrix(d)).is_zero

    def test_trace_close_strands(self):
        b = parse_braid("3; 1 -2 1 -2").to_tangle()
        s = trace_close_strands(b, 1)
        assert s.inputs == 1 and s.is_string_link()
        assert canon(closure(trace_closed(s))) == sympy.Poly(t**2 - 3 * t + 1, t)

    def test_to_closed_tangle_from_diagram(self):
        d = closure(parse_braid("2; 1 1 1").to_tangle())
        ct = to_closed_tangle(d)
        assert ct.is_closed() and ct.n_components == 1
        assert canon(closure(ct)) == TREF_DELTA
