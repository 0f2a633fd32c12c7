from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from confalg.diffring import (NoCanonicalMapError, RingMismatchError, RingSpec, can_embed, delta_divided, embed,
                              is_constant, square_roots_of_one)
from confalg.scalars import Scalar

from conftest import SPECS, ring_elements, scalars

L, C = RingSpec.laurent(), RingSpec.const()
t = L.t()


def test_arithmetic_examples():
    assert t * L.monomial(1, -1) == L.one()
    T3 = RingSpec.trunc(3)
    s = T3.t()
    assert (T3.one() + s) * (T3.one() + s * s) == T3.one() + s + s * s
    P = RingSpec.puiseux(2)
    h = P.monomial(1, Fraction(1, 2))
    assert h * h == P.t()


def test_derivation_examples():
    assert (t ** 3).delta() == L.monomial(3, 2)
    assert L.monomial(1, -1).delta() == L.monomial(-1, -2)
    assert C.scalar(Scalar(5, 2)).delta() == C.zero()
    assert delta_divided(t ** 3, 2) == L.monomial(3, 1)
    assert delta_divided(t ** 3, 0) == t ** 3
    assert delta_divided(t ** 3, 4) == L.zero()


def test_truncated_derivation_is_euler():
    # t d/dt preserves (t^N); d/dt would not
    T4 = RingSpec.trunc(4)
    s = T4.t()
    assert (s ** 3).delta() == s ** 3 * 3
    assert (s ** 3 * s).delta() == T4.zero()


def test_constants():
    assert is_constant(L.scalar(5))
    assert not is_constant(t)
    T2 = RingSpec.trunc(2)
    assert not is_constant(T2.one() + T2.t())


def test_units():
    assert (t * t * 2).inverse_if_unit() == L.monomial(Scalar(1) / 2, -2)
    T3 = RingSpec.trunc(3)
    s = T3.t()
    assert (T3.one() - s).inverse_if_unit() == T3.one() + s + s * s
    assert (L.one() + t).inverse_if_unit() is None
    assert C.zero().inverse_if_unit() is None
    assert T3.t().inverse_if_unit() is None


def test_embeddings():
    P = RingSpec.puiseux(2)
    assert embed(t, P) == P.t()
    assert embed(C.scalar(3), L) == L.scalar(3)
    with pytest.raises(NoCanonicalMapError):
        embed(RingSpec.trunc(2).t(), L)
    assert not can_embed(RingSpec.trunc(2), RingSpec.trunc(3))


def test_mismatch():
    with pytest.raises(RingMismatchError):
        t + RingSpec.puiseux(2).t()


def test_spec_parsing():
    assert [str(RingSpec.parse(s)) for s in ("const", "laurent", "puiseux:2", "trunc:4")] == \
        ["const", "laurent", "puiseux:2", "trunc:4"]
    for bad in ("poly", "trunc", "puiseux:x", "const:2"):
        with pytest.raises(ValueError):
            RingSpec.parse(bad)


@pytest.mark.parametrize("spec", SPECS, ids=str)
@given(data=st.data())
def test_leibniz_and_linearity(spec, data):
    r = data.draw(ring_elements(spec))
    s = data.draw(ring_elements(spec))
    a, b = data.draw(scalars), data.draw(scalars)
    assert (r * s).delta() == r.delta() * s + r * s.delta()
    assert (r * a + s * b).delta() == r.delta() * a + s.delta() * b
    assert (r * s) == (s * r)


@pytest.mark.parametrize("spec", SPECS, ids=str)
@given(data=st.data())
def test_inverse_round_trip(spec, data):
    r = data.draw(ring_elements(spec, max_terms=2))
    inv = r.inverse_if_unit()
    if inv is not None:
        assert r * inv == spec.one()


@given(ring_elements(RingSpec.laurent()))
def test_embed_commutes_with_delta(r):
    for D in (1, 2, 3, 4):
        P = RingSpec.puiseux(D)
        assert embed(r.delta(), P) == embed(r, P).delta()


@pytest.mark.parametrize("spec", SPECS, ids=str)
@given(data=st.data())
def test_square_roots_of_one_are_constant(spec, data):
    r = data.draw(ring_elements(spec, max_terms=2))
    for cand in (r, r * r):
        if cand * cand == spec.one():
            assert cand.delta() == spec.zero()


@pytest.mark.parametrize("N", [1, 2, 3, 4, 5])
def test_truncated_square_roots_oracle(N):
    """sympy solves the coefficient equations of r^2 = 1 in k[t]/(t^N)."""
    xs = sympy.symbols(f"r0:{N}")
    eqs = []
    for k in range(N):
        conv = sum(xs[i] * xs[k - i] for i in range(k + 1))
        eqs.append(conv - (1 if k == 0 else 0))
    sols = sympy.solve(eqs, xs, dict=True)
    spec = RingSpec.trunc(N)
    expected = {tuple(Scalar(Fraction(int(sympy.fraction(s[x])[0]), int(sympy.fraction(s[x])[1])))
                      for x in xs) for s in sols}
    roots = square_roots_of_one(spec)
    got = {tuple(r.coeffs.get(k, Scalar(0)) for k in range(N)) for r in roots}
    assert got == expected
    assert {r for r in roots} == {spec.one(), -spec.one()}
    assert all(r * r == spec.one() and r.delta() == spec.zero() for r in roots)


def test_formatting():
    assert str(t * t * 2 + L.monomial(1, -1)) == "2*t^2 + t^-1"
    assert str(RingSpec.puiseux(2).monomial(Scalar(1, 1), Fraction(1, 2))) == "(1 + i)*t^(1/2)"
