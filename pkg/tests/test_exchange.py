import pytest

import brute
from exchange_ge import (
    check_exchange,
    covering_idempotent,
    exchange_idempotent,
    full_idempotent_in_range,
    orthogonal_idempotents,
    preset,
)
from exchange_ge.errors import NotFull
from exchange_ge.exchange import full_idempotent_in_corange, subequivalence


def z6(k):
    return preset("Z/6").element(k)


class TestExchangeIdempotent:
    def test_one(self):
        R = preset("Z/6")
        c = exchange_idempotent(R.one)
        assert (c.e, c.x, c.y) == (R.one, R.one, R.zero)

    def test_three(self):
        c = exchange_idempotent(z6(3))
        assert c.e == z6(3) and c.replay()

    def test_nilpotent_gives_zero(self):
        R = preset("Ex2.12(F2)")
        c = exchange_idempotent(R.basis[1])
        assert c.e.is_zero() and c.replay()

    @pytest.mark.parametrize("name", ["M2(F2)", "UT2(F2)", "Z/12"])
    def test_idempotent_lies_in_brute_ideals(self, name):
        R = preset(name)
        idem = set(brute.idempotents(R))
        for a in R.elements():
            c = exchange_idempotent(a)
            assert c.replay()
            e = c.e.coords
            assert e in idem
            assert e in brute.right_ideal(R, [a.coords])
            one_minus_a = brute.add(R, brute.one(R), brute.neg(R, a.coords))
            one_minus_e = brute.add(R, brute.one(R), brute.neg(R, e))
            assert one_minus_e in brute.right_ideal(R, [one_minus_a])


@pytest.mark.parametrize("name", ["Z/6", "Ex2.12(F2)", "M2(F2)"])
def test_check_exchange_examples(name):
    v = check_exchange(preset(name))
    assert v.holds and v.checked == preset(name).size


class TestOrthogonal:
    def test_single_ideal(self):
        R = preset("Z/6")
        s = orthogonal_idempotents([[R.one]])
        assert s.idempotents == (R.one,) and s.replay()

    def test_three_four(self):
        s = orthogonal_idempotents([[z6(3)], [z6(4)]])
        assert s.idempotents == (z6(3), z6(4)) and s.replay()

    def test_two_three(self):
        s = orthogonal_idempotents([[z6(2)], [z6(3)]])
        assert s.idempotents == (z6(4), z6(3)) and s.replay()

    def test_matrix_ring_three_ideals(self):
        R = preset("M2(F2)")
        e11, e22 = R.element((1, 0, 0, 0)), R.element((0, 0, 0, 1))
        s = orthogonal_idempotents([[e11], [e22], [R.zero]])
        assert s.replay()
        total = R.zero
        for e in s.idempotents:
            total = total + e
        assert total == R.one


class TestCovering:
    def test_single(self):
        R = preset("M2(F2)")
        e = R.element((1, 0, 0, 0))
        c = covering_idempotent([e])
        assert c.e == e and c.replay()

    def test_three_four(self):
        c = covering_idempotent([z6(3), z6(4)])
        assert c.e == z6(1) and c.replay() and c.ideal_equality()

    def test_contains_one(self):
        R = preset("UT2(F2)")
        others = [e for e in R.idempotents if not e.is_zero()][:2]
        c = covering_idempotent([R.one] + others)
        assert c.e == R.one and c.replay()

    @pytest.mark.parametrize("name", ["UT2(F2)", "M2(F2)", "Z/6 x F2"])
    def test_ideal_equality_all_pairs(self, name):
        R = preset(name)
        idem = R.idempotents
        for e1 in idem:
            for e2 in idem:
                c = covering_idempotent([e1, e2])
                assert c.replay() and c.ideal_equality()


class TestFullIdempotent:
    def test_unit(self):
        R = preset("Z/6")
        f = full_idempotent_in_range(z6(5))
        assert f.e == R.one and f.replay()

    def test_matrix_unit(self):
        R = preset("M2(F2)")
        e11 = R.element((1, 0, 0, 0))
        f = full_idempotent_in_range(e11)
        assert f.replay()
        assert f.e.coords in brute.right_ideal(R, [e11.coords])

    def test_not_full(self):
        with pytest.raises(NotFull):
            full_idempotent_in_range(z6(3))

    def test_corange(self):
        R = preset("M2(F2)")
        for a in R.elements():
            try:
                f = full_idempotent_in_corange(a)
            except NotFull:
                assert brute.one(R) not in brute.two_sided_ideal(R, [a.coords])
                continue
            assert f.replay() and f.side == "left"


def test_subequivalence_witness():
    R = preset("M2(F2)")
    e11, e22 = R.element((1, 0, 0, 0)), R.element((0, 0, 0, 1))
    w = subequivalence(e11, e22)
    assert w is not None and w.replay()
    assert subequivalence(R.one, e11) is None


def test_deterministic():
    R = preset("UT2(F2)")
    a = [exchange_idempotent(x) for x in R.elements()]
    b = [exchange_idempotent(x) for x in R.elements()]
    assert a == b
