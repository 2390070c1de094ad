import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mathieusub.ff import (
    FieldError,
    FieldMismatchError,
    FieldZeroDivisionError,
    field_arith,
    find_primitive_root_of_unity,
    is_irreducible,
    make_field,
    parse_field_spec,
)

SMALL = [(2, 1), (3, 1), (5, 1), (2, 2), (3, 2), (2, 3), (2, 4), (7, 1), (5, 2), (3, 3)]


def rootless_monic(p, k):
    """Monic degree-k polys over GF(p) with no root, low->high coefficients."""
    out = []
    for tail in itertools.product(range(p), repeat=k):
        poly = list(tail) + [1]
        if all(sum(c * x ** i for i, c in enumerate(poly)) % p for x in range(p)):
            out.append(tuple(poly))
    return out


def test_prime_field_modulus_is_x():
    assert make_field(2, 1).modulus == (0, 1)


def test_gf4_modulus_only_irreducible_quadratic():
    cands = rootless_monic(2, 2)
    assert cands == [(1, 1, 1)]
    assert make_field(2, 2).modulus == (1, 1, 1)


def test_gf9_modulus():
    # for degree 2, irreducible == rootless; smallest by code (high coefficient first)
    cands = rootless_monic(3, 2)
    smallest = min(cands, key=lambda c: c[1] * 3 + c[0])
    assert smallest == (1, 0, 1)
    assert make_field(3, 2).modulus == (1, 0, 1)


@pytest.mark.parametrize("p,k", [(2, 3), (3, 3), (5, 3), (2, 2), (7, 2)])
def test_irreducibility_matches_root_test_for_small_degree(p, k):
    rootless = set(rootless_monic(p, k))
    for tail in itertools.product(range(p), repeat=k):
        poly = list(tail) + [1]
        assert is_irreducible(poly, p) == (tuple(poly) in rootless)


def test_degree_four_reducible_without_roots():
    # (x^2+x+1)^2 = x^4+x^2+1 over GF(2) has no root but is reducible
    assert not is_irreducible([1, 0, 1, 0, 1], 2)
    assert is_irreducible([1, 1, 0, 0, 1], 2)


def test_make_field_rejects_bad_input():
    with pytest.raises(FieldError):
        make_field(4, 1)
    with pytest.raises(FieldError):
        make_field(2, 0)
    with pytest.raises(FieldError):
        make_field(2, 9)


def test_make_field_deterministic():
    a, b = make_field(3, 4), make_field.__wrapped__(3, 4)
    assert a == b and a.modulus == b.modulus


def test_gf4_x_squared():
    F = make_field(2, 2)
    x = F([0, 1])
    assert x * x == F([1, 1])


def test_field_arith_dispatch():
    F = make_field(5)
    assert field_arith("pow", F(2), 4) == F(1)
    assert field_arith("add", F(3), F(0)) == F(3)
    assert field_arith("inv", F(2)) == F(3)
    with pytest.raises(FieldZeroDivisionError):
        field_arith("inv", F(0))
    with pytest.raises(FieldMismatchError):
        F(1) + make_field(7)(1)


@pytest.mark.parametrize("p,k", SMALL)
def test_field_axioms_exhaustive(p, k):
    F = make_field(p, k)
    q = F.order
    a = np.arange(q)
    A, B = np.meshgrid(a, a, indexing="ij")
    add, mul = F.add(A, B), F.mul(A, B)
    assert np.array_equal(add, add.T) and np.array_equal(mul, mul.T)
    assert np.array_equal(F.add(a, 0), a)
    assert np.array_equal(F.mul(a, 1), a)
    assert np.all(F.add(a, F.neg(a)) == 0)
    nz = a[1:]
    assert np.all(F.mul(nz, F.inv(nz)) == 1)
    # each row of the multiplication table on nonzero elements is a permutation
    assert all(sorted(row) == list(range(1, q)) for row in mul[1:, 1:].tolist())
    C = a[(np.arange(q) * 7 + 3) % q]
    assert np.array_equal(F.mul(F.add(A, B), C[:, None]), F.add(F.mul(A, C[:, None]), F.mul(B, C[:, None])))


@pytest.mark.parametrize("p,k", SMALL + [(2, 8)])
def test_frobenius_fixed_point(p, k):
    F = make_field(p, k)
    assert all(F.pow_scalar(a, F.order) == a for a in range(F.order))


def test_scalar_and_vector_paths_agree():
    F = make_field(3, 3)
    for a in range(F.order):
        for b in range(0, F.order, 5):
            assert F.mul_scalar(a, b) == F._mul_scalar_slow(a, b) == int(F.mul(a, b))
            assert F.add_scalar(a, b) == int(F.add(a, b))


def brute_orders(F):
    out = {}
    for a in range(1, F.order):
        m, x = 1, a
        while x != 1:
            x = F._mul_scalar_slow(x, a)
            m += 1
        out[a] = m
    return out


def test_primitive_root_examples():
    assert find_primitive_root_of_unity(make_field(3), 5) is None
    F = make_field(2, 2)
    assert find_primitive_root_of_unity(F, 1) == F.one
    assert find_primitive_root_of_unity(F, 3) == F([0, 1])


@pytest.mark.parametrize("p,k", SMALL)
def test_primitive_root_absent_exactly_when_expected(p, k):
    F = make_field(p, k)
    orders = brute_orders(F)
    for d in range(1, 2 * F.order):
        xi = find_primitive_root_of_unity(F, d)
        with_order = sorted(a for a, m in orders.items() if m == d)
        if with_order:
            assert xi is not None and xi.value == with_order[0]
        else:
            assert xi is None
        assert (xi is None) == (d % p == 0 or (F.order - 1) % d != 0)


def test_large_field_root_path():
    F = make_field(101, 4)
    assert not F.tabled
    xi = find_primitive_root_of_unity(F, 5)
    assert xi ** 5 == F.one and all(xi ** e != F.one for e in range(1, 5))


def test_parse_field_spec():
    assert parse_field_spec("5").order == 5
    assert parse_field_spec("2^2").order == 4
    for bad in ["x", "4", "2^", "2^99", "6^2"]:
        with pytest.raises(FieldError) as exc:
            parse_field_spec(bad)
        assert repr(bad) in str(exc.value)


def test_literals_roundtrip():
    for F in [make_field(2, 2), make_field(3, 2), make_field(11, 2), make_field(7)]:
        for a in range(F.order):
            assert F.parse(F.format(a)) == a
    assert make_field(2, 2).format(2) == "10"
    assert make_field(5).parse("-1") == 4


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(SMALL), st.data())
def test_vectorized_sum_matches_fold(pk, data):
    F = make_field(*pk)
    xs = data.draw(st.lists(st.integers(0, F.order - 1), min_size=1, max_size=30))
    acc = 0
    for x in xs:
        acc = F.add_scalar(acc, x)
    assert int(F.sum(np.array(xs))) == acc
    targets = data.draw(st.lists(st.integers(0, 3), min_size=len(xs), max_size=len(xs)))
    got = F.scatter_sum(np.array(xs), np.array(targets), 4)
    for t in range(4):
        want = 0
        for x, tt in zip(xs, targets):
            if tt == t:
                want = F.add_scalar(want, x)
        assert got[t] == want
