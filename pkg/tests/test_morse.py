import pytest
from hypothesis import given, strategies as st

from concalc.morse import (
    BraidWord,
    MorseTangle,
    cap,
    cross,
    cup,
    format_braid,
    format_tangle,
    inverse,
    mirror,
    parse_braid,
    parse_tangle,
    plat_closed,
    plat_string,
    product,
    reverse_component,
    reverse_r,
    split_union,
)


def braid_tangle(text):
    return parse_braid(text).to_tangle()


class TestBraidWord:
    def test_parse_round_trip(self):
        for text in ["2; 1 1 1", "3; 1 -2 1 -2", "4;", "5; -1 -1 2 3 -4"]:
            assert format_braid(parse_braid(text)) == text

    def test_parse_rejects_garbage(self):
        with pytest.raises(ValueError):
            parse_braid("3 1 1")
        with pytest.raises(ValueError):
            parse_braid("2; 1 x")
        with pytest.raises(ValueError):
            parse_braid("2; 3")  # letter out of range
        with pytest.raises(ValueError):
            parse_braid("2; 0")

    def test_permutation(self):
        # [DERIVED] compose transpositions by hand: strand at slot 0 is
        # moved to slot 1 by sigma_1, then to slot 2 by sigma_2.
        b = parse_braid("3; 1 2")
        assert b.permutation() == (2, 0, 1)

    def test_inverse_word(self):
        b = parse_braid("3; 1 -2 1")
        assert b.inverse().word == (-1, 2, -1)

    @given(st.integers(2, 5), st.lists(st.integers(-4, 4).filter(lambda x: x != 0), max_size=8))
    def test_inverse_permutation_is_inverse(self, n, w):
        w = [x for x in w if abs(x) < n]
        b = BraidWord(n, tuple(w))
        p = b.permutation()
        q = b.inverse().permutation()
        assert tuple(q[p[i]] for i in range(n)) == tuple(range(n))


class TestSweep:
    def test_identity_tangle(self):
        t = MorseTangle(3)
        assert t.outputs == 3
        assert t.n_components == 3
        assert t.is_string_link()

    def test_closure_like_component_count(self):
        # closed loop inside a tangle: cup then cap
        t = MorseTangle(0, (cup(1), cap(1)), (), (1,))
        assert t.is_closed()
        assert t.n_components == 1

    def test_figure8_word_components(self):
        # [DERIVED] perm of (1 -2 1 -2) on 3 strands is a 3-cycle, so the
        # closure is a knot; as a tangle it has 3 components.
        t = braid_tangle("3; 1 -2 1 -2")
        assert t.n_components == 3
        assert not t.is_string_link()  # strands end at permuted slots

    def test_pure_braid_is_string_link(self):
        t = braid_tangle("2; 1 1")
        assert t.is_string_link()

    def test_cap_rejects_coherent_strands(self):
        with pytest.raises(ValueError):
            MorseTangle(2, (cap(1),), (1, 1), ())

    def test_width_underflow_rejected(self):
        with pytest.raises(ValueError):
            MorseTangle(1, (cross(1, 1),), (1,), ())


class TestOps:
    def test_product_stacks(self):
        a = braid_tangle("2; 1")
        b = braid_tangle("2; 1 1")
        assert product(a, b).events == braid_tangle("2; 1 1 1").events

    def test_product_interface_mismatch(self):
        a = MorseTangle(2, (cap(1),), (1, -1), ())
        b = braid_tangle("2; 1")
        with pytest.raises(ValueError):
            product(a, b)

    def test_inverse_of_braid_matches_word_inverse(self):
        b = parse_braid("3; 1 -2 2 1")
        assert inverse(b.to_tangle()).events == b.inverse().to_tangle().events

    def test_inverse_involutive(self):
        t = MorseTangle(1, (cup(2), cross(1, 1), cross(2, -1), cap(1)), (1,), (-1,))
        assert inverse(inverse(t)) == t

    def test_mirror_involutive(self):
        t = braid_tangle("3; 1 -2 1")
        assert mirror(mirror(t)) == t
        assert mirror(t).events == braid_tangle("3; -1 2 -1").events

    def test_reverse_r_involutive(self):
        t = braid_tangle("2; 1 1")
        assert reverse_r(reverse_r(t)) == t
        assert reverse_r(t).input_dirs == (-1, -1)

    def test_split_union_shifts(self):
        a = braid_tangle("2; 1")
        b = braid_tangle("2; -1")
        u = split_union(a, b)
        assert u.inputs == 4
        assert [e.pos for e in u.events] == [1, 3]
        assert u.n_components == 4

    def test_reverse_component_single(self):
        t = braid_tangle("2; 1 1")  # pure: two components
        r = reverse_component(t, 0)
        assert r.input_dirs == (-1, 1)
        assert reverse_component(r, 0) == t


class TestTextForm:
    def test_round_trip(self):
        t = MorseTangle(1, (cup(2), cross(1, 1), cross(2, -1), cap(1)), (1,), (-1,))
        assert parse_tangle(format_tangle(t)) == t

    def test_round_trip_byte_identical(self):
        text = "in=2 out=2; X+1 X+1; up=++ cup="
        assert format_tangle(parse_tangle(text)) == text

    def test_declared_width_checked(self):
        with pytest.raises(ValueError):
            parse_tangle("in=2 out=1; X+1; up=++ cup=")


class TestPlat:
    def test_plat_closed_shape(self):
        t = braid_tangle("2; 1 1")
        p = plat_closed(t)
        assert p.is_closed()
        assert p.n_components == 1

    def test_plat_string_shape(self):
        t = braid_tangle("2; 1 1")
        p = plat_string(t)
        assert p.inputs == 1 and p.outputs == 1
        assert p.is_string_link()
        assert p.n_components == 1


@given(
    st.integers(2, 4),
    st.lists(st.integers(-3, 3).filter(lambda x: x != 0), max_size=10),
)
def test_braid_tangle_always_valid(n, w):
    w = [x for x in w if abs(x) < n]
    t = BraidWord(n, tuple(w)).to_tangle()
    assert t.outputs == n
    assert t.crossing_count == len(w)
    # mirror and r commute
    assert mirror(reverse_r(t)) == reverse_r(mirror(t))
