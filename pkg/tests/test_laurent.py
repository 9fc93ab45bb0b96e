import json

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from gencluster.laurent import (
    LaurentError,
    LaurentPoly,
    VarTable,
    arith,
    divide_exact,
    leading_monomial,
    substitute,
)
from gencluster.sl3 import chi

T = VarTable(["x1", "x2", "x3"])
x1, x2, x3 = T.gens()
Y = VarTable(["Y0", "Y2"])
Y0, Y2 = Y.gens()


def to_sympy(p: LaurentPoly):
    syms = sympy.symbols(p.table.names)
    out = sympy.Integer(0)
    for mono, c in p.items():
        term = sympy.Integer(c)
        for i, e in mono:
            term *= syms[i] ** e
        out += term
    return sympy.expand(out)


monomials = st.tuples(*[st.integers(-5, 5)] * 3)
polys = st.dictionaries(monomials, st.integers(-1000, 1000), max_size=6).map(
    lambda d: LaurentPoly.from_terms(T, [(tuple((i, e) for i, e in enumerate(k)), c) for k, c in d.items()])
)
small_polys = st.dictionaries(st.tuples(*[st.integers(-2, 2)] * 3), st.integers(-5, 5), max_size=4).map(
    lambda d: LaurentPoly.from_terms(T, [(tuple((i, e) for i, e in enumerate(k)), c) for k, c in d.items()])
)


def test_additive_inverse_is_empty():
    assert arith("add", x1, -x1).terms == {}


def test_distributivity_example():
    assert arith("mul", x1 + x2 ** -1, x2) == x1 * x2 + 1


def test_two_by_two_product():
    assert (Y0 + Y2 ** -1) * (Y2 + Y0 ** -1) == Y0 * Y2 + 2 + Y0 ** -1 * Y2 ** -1


def test_mismatched_tables_rejected():
    with pytest.raises(LaurentError, match="incompatible variable tables"):
        x1 + Y0


def test_divide_by_monomial():
    assert divide_exact(x1 * x2 + x2, x2) == x1 + 1


def test_monomials_are_units():
    lam = x3
    num = x1 ** 2 + lam * x1 + 1
    assert divide_exact(num, x2) == num * x2 ** -1


def test_divide_non_divisible_fails():
    lam = x3
    with pytest.raises(LaurentError, match="not Laurent-divisible"):
        divide_exact(x1 ** 2 + lam * x1 + 1, x2 + 1)
    with pytest.raises(LaurentError, match="not Laurent-divisible"):
        divide_exact(3 * x1 + 1, 2 * x1 + 2)


def test_divide_multiterm():
    p = (1 + x2) * x1 ** -1 * (1 + x2)
    assert divide_exact(p, 1 + x2) == (1 + x2) * x1 ** -1


def test_divide_by_zero():
    with pytest.raises(LaurentError):
        divide_exact(x1, T.zero())


def test_substitute_identity_binding():
    assert substitute(x1 * x2, {"x1": T.one()}) == x2


def test_substitute_monomial_binding():
    T1 = VarTable(["x1"])
    p = T1.var("x1") + T1.var("x1") ** -1
    assert substitute(p, {"x1": Y0 * Y2}, Y) == Y0 * Y2 + Y0 ** -1 * Y2 ** -1


def test_substitute_rejects_rational_result():
    with pytest.raises(LaurentError, match="non-Laurent substitution"):
        substitute(x1 ** -1, {"x1": x2 + 1}, T)


def test_substitute_clears_denominators():
    # (x2^2 + x2) / x1 with x1 -> x2 + 1 is exactly x2
    assert substitute((x2 ** 2 + x2) * x1 ** -1, {"x1": x2 + 1}, T) == x2
    assert substitute(x3 + (x2 ** 2 + x2) * x1 ** -1, {"x1": x2 + 1}, T) == x3 + x2


def test_leading_monomial_examples():
    mono, c = leading_monomial(Y0 * Y2 + 2 + Y0 ** -1 * Y2 ** -1)
    assert LaurentPoly(Y, {mono: 1}) == Y0 * Y2 and c == 1
    assert leading_monomial(Y.const(3)) == ((), 3)
    with pytest.raises(LaurentError, match="zero polynomial"):
        leading_monomial(Y.zero())


def test_leading_monomial_printed_character():
    p = chi("Y1_0*Y2_1")
    mono, c = leading_monomial(p)
    assert p.exps(mono) == {"Y1_0": 1, "Y2_1": 1} and c == 1


def test_json_roundtrip_and_ordering():
    p = 3 * x1 ** 2 * x2 ** -1 - x3 + 7
    obj = p.to_json_obj()
    assert obj["vars"] == ["x1", "x2", "x3"]
    assert obj["terms"][0] == {"exps": {"x1": 2, "x2": -1}, "coef": "3"}
    assert LaurentPoly.from_json(json.dumps(obj)) == p


def test_big_coefficients_are_exact():
    p = (x1 + 10 ** 30) ** 3
    assert p.coefficient(()) == 10 ** 90


@given(polys, polys, polys)
def test_ring_axioms(p, q, r):
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p * q == q * p
    assert p + q == q + p


@given(small_polys, small_polys)
def test_product_matches_sympy(p, q):
    assert to_sympy(p * q) == sympy.expand(to_sympy(p) * to_sympy(q))


@given(polys, polys)
def test_divide_exact_inverts_mul(p, q):
    if q.is_zero():
        return
    assert divide_exact(p * q, q) == p


@given(small_polys, small_polys)
def test_inexact_division_detected(p, q):
    if q.is_zero() or q.is_monomial():
        return
    r = p * q + x1 ** 7
    try:
        s = divide_exact(r, q)
    except LaurentError:
        return
    assert s * q == r


@given(polys)
def test_canonical_form_idempotent(p):
    again = LaurentPoly.from_terms(T, p.items())
    assert again.terms == p.terms
    assert all(c != 0 for _, c in p.items())
    assert all(e != 0 for m, _ in p.items() for _, e in m)


mono_bindings = st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.sampled_from([1, -1]))


@given(polys, polys, mono_bindings)
def test_substitute_is_a_ring_homomorphism(p, q, b):
    a, c, sign = b
    bind = {"x1": T.monomial({"x2": a, "x3": c}, sign)}
    assert substitute(p * q, bind, T) == substitute(p, bind, T) * substitute(q, bind, T)
