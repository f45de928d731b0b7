from itertools import product

import pytest

import itazrp.fock as fock
from itazrp.fock import (
    K,
    TruncatedSpace,
    a_minus,
    a_plus,
    build_A,
    build_A_from_generators,
    check_hat_relation,
    d_op,
    identity,
    k_op,
    trace_product,
)
from itazrp.polyring import Polynomial


def test_two_species_operator_table():
    sp = TruncatedSpace([3])
    w1, w2 = Polynomial.variables(2)
    k, d = k_op(sp, 2, 0), d_op(sp, 2, 0)
    ap, am = a_plus(sp, 2, 0), a_minus(sp, 2, 0)
    assert build_A((0,), (0, 1), sp) == k * w2
    assert build_A((1,), (1, 0), sp) == ap @ (d * w1 + k * w2) @ am
    assert build_A((0,), (0, 0), sp) == d * w1 + k * w2


def test_three_species_vacuum_operator():
    sp = TruncatedSpace([2, 2])
    w1, w2, w3 = Polynomial.variables(3)
    one = identity(sp, 3)
    k1, d1 = k_op(sp, 3, 0), d_op(sp, 3, 0)
    k2, d2 = k_op(sp, 3, 1), d_op(sp, 3, 1)
    want = d1 @ one * w1 + k1 @ d2 * w2 + k1 @ k2 * w3
    assert build_A((0, 0), (0, 0, 0), sp) == want


def test_trace_of_vacuum_projector():
    sp = TruncatedSpace([2])
    assert trace_product([k_op(sp, 1, 0)]) == 1
    with pytest.raises(ValueError):
        trace_product([])


def test_number_operator_identity_below_cap():
    sp = TruncatedSpace([3])
    lhs = k_op(sp, 1, 0) + a_plus(sp, 1, 0) @ a_minus(sp, 1, 0)
    one = identity(sp, 1)
    # a+ a- annihilates nothing inside the box, so the identity holds everywhere
    assert lhs == one
    rhs = a_minus(sp, 1, 0) @ a_plus(sp, 1, 0)
    for s in range(3):
        assert rhs.element((s,), (s,)) == 1
    assert rhs.element((3,), (3,)) == 0  # creation past the cap is dropped


def test_K_projectors_partition_identity():
    sp = TruncatedSpace([2, 1, 2])
    total = K(sp, 4, 1)
    for r in range(2, 5):
        total = total + K(sp, 4, r)
    assert total == identity(sp, 4)


def test_direct_assembly_matches_generator_products():
    sp = TruncatedSpace([2, 2])
    for mu in product(range(2), repeat=2):
        for alpha in product(range(3), repeat=3):
            for hat in (False, True):
                assert build_A(mu, alpha, sp, hat) == build_A_from_generators(mu, alpha, sp, hat)


def test_hat_operator_has_one_extra_factor():
    # with g(alpha) = 0 the hat coefficient of term r is w_r^2 instead of w_r
    sp = TruncatedSpace([2, 2])
    a = build_A((1, 0), (0, 0, 0), sp)
    ah = build_A((1, 0), (0, 0, 0), sp, hat=True)
    for s, col in a.cols.items():
        (out, c), = col.items()
        (out_h, ch), = ah.cols[s].items()
        assert out == out_h
        exps = next(iter(c.terms))
        r = exps.index(1) + 1
        assert ch == c * Polynomial.var(r, 3)


def test_trace_rotation_invariance():
    sp = TruncatedSpace([2, 1])
    ops = [build_A((1, 0), (0, 1, 0), sp), build_A((0, 1), (1, 0, 1), sp),
           build_A((1, 0), (1, 0, 0), sp)]
    t = trace_product(ops)
    assert t
    assert trace_product(ops[1:] + ops[:1]) == t
    assert trace_product(ops[2:] + ops[:2]) == t


def test_trace_stable_under_larger_caps():
    from itazrp.states import Sector, enumerate_sector
    small = TruncatedSpace([1, 2])
    nonzero = 0
    for sigma in enumerate_sector(Sector(3, (1, 2, 1)))[::7]:
        for mus in enumerate_sector(Sector(3, (1, 2))):
            t1 = trace_product([build_A(m, s, small) for m, s in zip(mus, sigma)])
            t2 = trace_product([build_A(m, s, small.raised()) for m, s in zip(mus, sigma)])
            assert t1 == t2
            nonzero += bool(t1)
    assert nonzero


def test_build_A_errors():
    with pytest.raises(ValueError):
        build_A((0,), (1,))
    with pytest.raises(ValueError):
        build_A((0, 0), (1, 0))
    with pytest.raises(ValueError):
        build_A((0,), (1, 0), TruncatedSpace([1, 1]))
    with pytest.raises(ValueError):
        k_op(TruncatedSpace([1]), 2, 0) + k_op(TruncatedSpace([2]), 2, 0)


@pytest.mark.parametrize("n,bound", [(2, 1), (2, 2), (3, 1)])
def test_hat_relation_small(n, bound):
    res = check_hat_relation(n, bound)
    assert res.passed
    assert res.tuples == ((bound + 1) ** n) ** 2 * ((bound + 1) ** (n - 1)) ** 2


def test_hat_relation_detects_wrong_operator(monkeypatch):
    original = fock._weights

    def wrong(alpha, hat):
        w = original(alpha, hat)
        if hat:
            w = [None if x is None else x + 1 for x in w]
        return w

    monkeypatch.setattr(fock, "_weights", wrong)
    fock._build_A_cached.cache_clear()
    try:
        res = check_hat_relation(2, 1)
    finally:
        fock._build_A_cached.cache_clear()
    assert not res
    assert res.summary()["first_failure"]["residual"] != "0"


def test_operator_json_dump():
    op = build_A((1,), (1, 0), TruncatedSpace([2]))
    trip = op.to_triplets()
    assert trip[0]["in"] == [1] and trip[0]["out"] == [1]
    assert trip[0]["poly"] == [{"exps": [0, 1], "coeff": "1"}]  # vacuum after lowering: w2 k
