import random
from fractions import Fraction

import pytest

from toricmirror.series import QSeries, SeriesError, SubstitutionMap

W = (1, 1)


def S(terms, order=8, weights=W):
    return QSeries(len(weights), weights, order, terms)


def rand_series(rng, nvars=2, weights=W, order=6, lo=-2, hi=3, zero_const=True):
    terms = {}
    for _ in range(rng.randrange(1, 7)):
        e = tuple(rng.randrange(lo, hi) for _ in range(nvars))
        if zero_const and not any(e):
            continue
        if sum(w * x for w, x in zip(weights, e)) <= 0:
            continue
        terms[e] = Fraction(rng.randrange(-9, 10), rng.randrange(1, 5))
    return QSeries(nvars, weights, order, terms)


def test_constructor_drops_zeros_and_high_order():
    f = S({(1, 0): Fraction(0), (0, 1): 1, (9, 0): 7})
    assert f.terms == {(0, 1): Fraction(1)}


def test_weights_must_be_positive():
    with pytest.raises(SeriesError):
        QSeries(2, (1, 0), 4, {})
    with pytest.raises(SeriesError):
        QSeries(2, (1, Fraction(-1, 2)), 4, {})


def test_fractional_weights_bound_the_support():
    f = QSeries(2, (Fraction(1, 2), 3), 4, {(8, 0): 1, (9, 0): 1, (0, 1): 1})
    # degree of (9,0) is 9/2 > 4, so it is cut
    assert set(f.terms) == {(8, 0), (0, 1)}
    assert f.min_degree() == 3


def test_add_cancels_exactly():
    f = S({(1, 0): Fraction(2, 3), (0, 2): -1})
    assert f.add(f.neg()).is_zero()
    assert (f - f).terms == {}


def test_mul_truncates_to_order():
    u = S({(0, 0): 1, (1, 0): 1}, order=1)
    sq = u.mul(u)
    assert sq.terms == {(0, 0): Fraction(1), (1, 0): Fraction(2)}


def test_shape_mismatch_raises():
    f = S({(1, 0): 1})
    g = QSeries(2, (1, 2), 8, {(1, 0): 1})
    with pytest.raises(SeriesError):
        f.add(g)
    with pytest.raises(SeriesError):
        f.mul(QSeries(3, (1, 1, 1), 8, {}))


def test_geometric_reciprocal():
    u = S({(0, 0): 1, (1, 0): -1})
    r = u.recip()
    assert all(r.coefficient((k, 0)) == 1 for k in range(9))
    assert u.mul(r) == QSeries.one(2, W, 8)


def test_recip_needs_a_unit():
    with pytest.raises(SeriesError):
        S({(1, 0): 1}).recip()


def test_npow_matches_repeated_mul():
    u = S({(0, 0): 1, (1, 0): 2, (0, 1): Fraction(-1, 3)})
    assert u.npow(3) == u.mul(u).mul(u)
    assert u.npow(0) == QSeries.one(2, W, 8)
    assert u.npow(-2) == u.recip().mul(u.recip())


def test_exp_coefficients_are_inverse_factorials():
    from math import factorial
    e = S({(1, 0): 1}).exp()
    for k in range(9):
        assert e.coefficient((k, 0)) == Fraction(1, factorial(k))


def test_log_of_geometric_series():
    u = S({(0, 0): 1, (1, 0): -1}).recip()   # 1/(1-q1)
    lg = u.log()
    for k in range(1, 9):
        assert lg.coefficient((k, 0)) == Fraction(1, k)


def test_exp_log_are_inverse():
    rng = random.Random(7)
    for _ in range(12):
        f = rand_series(rng)
        assert f.exp().log() == f
        assert f.exp().recip() == f.neg().exp()


def test_exp_is_additive():
    rng = random.Random(8)
    for _ in range(8):
        f, g = rand_series(rng), rand_series(rng)
        assert f.exp().mul(g.exp()) == f.add(g).exp()


def test_exp_rejects_nonzero_constant():
    with pytest.raises(SeriesError):
        S({(0, 0): 1, (1, 0): 1}).exp()


def test_log_rejects_constant_not_one():
    with pytest.raises(SeriesError):
        S({(0, 0): 2, (1, 0): 1}).log()
    with pytest.raises(SeriesError):
        S({(1, 0): 1}).log()


def test_shift_multiplies_by_a_monomial():
    f = S({(1, 0): 1, (0, 1): 3})
    g = f.shift((-1, 1), Fraction(1, 2))
    assert g.terms == {(0, 1): Fraction(1, 2), (-1, 2): Fraction(3, 2)}


def test_negative_exponents_weigh_in():
    # weights (1,3): the monomial q1^-1 q2 has degree 2 and survives order 2
    f = QSeries(2, (1, 3), 2, {(-1, 1): 1, (1, 1): 1})
    assert f.terms == {(-1, 1): Fraction(1)}
    assert f.degree((-1, 1)) == 2


def test_truncate_and_coefficient():
    f = S({(1, 0): 1, (2, 0): 2, (3, 0): 3})
    t = f.truncate(2)
    assert t.order == 2 and set(t.terms) == {(1, 0), (2, 0)}
    assert f.coefficient((5, 5)) == 0
    assert f.constant_term() == 0


def test_substitute_identity_is_noop():
    rng = random.Random(9)
    ident = SubstitutionMap.identity(2, W, 6)
    for _ in range(6):
        f = rand_series(rng)
        assert ident.apply(f) == f


def rand_unit_map(rng, nvars=2, weights=W, order=6):
    units = []
    for _ in range(nvars):
        u = rand_series(rng, nvars, weights, order)
        units.append(u.add(QSeries.one(nvars, weights, order)))
    return SubstitutionMap(tuple(units))


def test_compose_agrees_with_sequential_apply():
    rng = random.Random(10)
    for _ in range(6):
        outer, inner = rand_unit_map(rng), rand_unit_map(rng)
        f = rand_series(rng)
        assert outer.compose(inner).apply(f) == inner.apply(outer.apply(f))


def test_revert_gives_two_sided_inverse():
    rng = random.Random(11)
    for _ in range(6):
        m = rand_unit_map(rng)
        inv = m.revert()
        assert m.compose(inv).is_identity()
        assert inv.compose(m).is_identity()


def test_substitution_map_requires_unit_factors():
    bad = S({(1, 0): 1})
    with pytest.raises(SeriesError):
        SubstitutionMap((bad, bad))


def test_records_roundtrip_graded_lex():
    f = S({(0, 1): Fraction(-1, 2), (1, 0): 1, (2, -1): 5})
    recs = f.to_records()
    assert recs == [
        {"exponent": [0, 1], "num": -1, "den": 2},
        {"exponent": [1, 0], "num": 1, "den": 1},
        {"exponent": [2, -1], "num": 5, "den": 1},
    ]
    assert QSeries.from_records(recs, 2, W, 8) == f


def test_from_records_validation():
    with pytest.raises(SeriesError):
        QSeries.from_records([{"exponent": [0, 1], "num": 1, "den": 0}], 2, W, 8)
    with pytest.raises(SeriesError):
        QSeries.from_records([{"exponent": [0], "num": 1, "den": 1}], 2, W, 8)
    dup = [{"exponent": [0, 1], "num": 1, "den": 1},
           {"exponent": [0, 1], "num": 2, "den": 1}]
    with pytest.raises(SeriesError):
        QSeries.from_records(dup, 2, W, 8)


def test_to_text():
    # graded-lex: q1^-1 q2 has degree 0 and sorts before the constant
    f = S({(0, 0): 1, (1, 0): 2, (1, 2): Fraction(-3, 2), (-1, 1): 1})
    assert f.to_text() == "q1^-1 q2 + 1 + 2·q1 - 3/2·q1 q2^2"
    assert S({}).to_text() == "0"
    assert S({(1, 0): -1}).to_text(var="t") == "-t1"


def test_eq_ignores_truncation_metadata():
    a = S({(1, 0): 1}, order=4)
    b = S({(1, 0): 1}, order=9)
    assert a == b
    assert a != S({(1, 0): 2}, order=4)
