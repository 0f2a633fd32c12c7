import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from confalg.diffring import RingSpec
from confalg.morphisms import (ConfMorphism, ExtensionRequired, InKernel, NotInKernel, SL2Pair, bracket_failures,
                               compose, const_inverse, factorize, is_conf_automorphism, is_identity, is_V_stable,
                               k2_phi, kernel_witness, n4_table, random_pair, theta, theta_unchecked)
from confalg.n4 import Mat2
from confalg.scalars import I, Scalar

from conftest import SPECS

N4 = n4_table()
C, L = RingSpec.const(), RingSpec.laurent()
ODD = {"G1", "G2", "Gb1", "Gb2"}


def pair(spec, A, B):
    return SL2Pair(Mat2.of(spec, A), Mat2.of(spec, B))


def ident(spec):
    return Mat2.identity(spec)


def test_theta_examples():
    for spec in SPECS:
        assert is_identity(theta(SL2Pair(ident(spec), ident(spec))))
        assert is_identity(theta(SL2Pair(-ident(spec), -ident(spec))))
    t = L.t()
    A = Mat2(L.one(), t, L.zero(), L.one())
    phi = theta(SL2Pair(A, ident(L)))
    assert phi.images[0] == N4.gen("L", L) + N4.gen("T1", L) + N4.gen("T2", L, L.scalar(I))
    assert is_V_stable(phi)


def test_pair_invariants():
    with pytest.raises(ValueError):
        pair(C, ((2, 0), (0, 1)), ((1, 0), (0, 1)))
    t = L.t()
    with pytest.raises(ValueError):
        SL2Pair(ident(L), Mat2(L.one(), t, L.zero(), L.one()))


def test_scaling_L_is_not_an_automorphism():
    phi = ConfMorphism.from_names(N4, C, {"L": N4.gen("L") * Scalar(2)})
    report = is_conf_automorphism(phi)
    assert report.verdict is False and report.witness == ("L", "L")


def test_k2_phi():
    phi = k2_phi()
    assert not is_V_stable(phi)
    assert is_identity(compose(phi, phi))
    assert is_conf_automorphism(phi).verdict is None
    report = is_conf_automorphism(phi, phi)
    assert report.verdict is True
    assert const_inverse(phi) == phi
    wrong = ConfMorphism.identity(phi.table, phi.ring)
    assert is_conf_automorphism(phi, wrong).verdict is False


def test_compose_with_identity():
    p = random_pair(L, random.Random(5))
    phi = theta(p)
    assert compose(phi, ConfMorphism.identity(N4, L)) == phi
    assert compose(ConfMorphism.identity(N4, L), phi) == phi


def test_non_constant_B_fails_against_L():
    t = L.t()
    B = Mat2(L.one(), t, L.zero(), L.one())
    report = is_conf_automorphism(theta_unchecked(ident(L), B))
    assert report.verdict is False
    assert any((a == "L" and b in ODD) or (b == "L" and a in ODD) for a, b in report.failures)


def test_non_unimodular_B_fails_on_odd_pairs():
    report = is_conf_automorphism(theta_unchecked(ident(C), ident(C) * Scalar(2)))
    assert report.verdict is False
    a, b = report.witness
    assert a in ODD and b in ODD


def test_kernel_examples():
    for spec in (C, L, RingSpec.trunc(4)):
        assert kernel_witness(SL2Pair(ident(spec), ident(spec))) == InKernel(Scalar(1))
        assert kernel_witness(SL2Pair(-ident(spec), -ident(spec))) == InKernel(Scalar(-1))
        assert kernel_witness(SL2Pair(ident(spec), -ident(spec))) == NotInKernel("G1")
        assert isinstance(kernel_witness(SL2Pair(-ident(spec), ident(spec))), NotInKernel)


def test_factorize_examples():
    p = pair(C, ((2, 1), (1, 1)), ((1, 0), (0, 1)))
    q = factorize(theta(p))
    assert q == p or q == -p
    q = factorize(ConfMorphism.identity(N4, C))
    assert q == SL2Pair(ident(C), ident(C)) or q == -SL2Pair(ident(C), ident(C))
    with pytest.raises(ExtensionRequired) as err:
        factorize(theta_unchecked(Mat2.of(C, ((2, 0), (0, 1))), Mat2.of(C, ((2, 0), (0, 1)))))
    assert err.value.value == Scalar(2)


def test_factorize_sign_normalization():
    p = pair(C, ((-1, 0), (0, -1)), ((-1, 0), (0, -1)))
    q = factorize(theta(p))
    assert q.A.a.constant_term() == Scalar(-1)  # tie-break root of 1 is -1
    assert theta(-q) == theta(q)


@settings(max_examples=25)
@given(st.integers(0, 10 ** 6))
def test_factorize_round_trip(seed):
    p = random_pair(C, random.Random(seed))
    q = factorize(theta(p))
    assert theta(q) == theta(p)
    assert q == p or q == -p


@pytest.mark.parametrize("spec", SPECS, ids=str)
@settings(max_examples=15)
@given(st.integers(0, 10 ** 6))
def test_theta_homomorphism(spec, seed):
    rng = random.Random(seed)
    p, q = random_pair(spec, rng), random_pair(spec, rng)
    assert is_conf_automorphism(theta(p)).verdict is True
    assert theta(p * q) == compose(theta(p), theta(q))


@settings(max_examples=15)
@given(st.integers(0, 10 ** 6), st.sampled_from([1, 2, 3]))
def test_functoriality(seed, D):
    P = RingSpec.puiseux(D)
    p = random_pair(L, random.Random(seed))
    assert theta(p.embed(P)) == theta(p).embed(P)


@settings(max_examples=20)
@given(st.integers(0, 10 ** 6))
def test_const_inverse_of_theta(seed):
    phi = theta(random_pair(C, random.Random(seed)))
    inv = const_inverse(phi)
    assert is_identity(compose(phi, inv)) and is_identity(compose(inv, phi))


def test_bracket_failures_empty_for_identity():
    assert bracket_failures(ConfMorphism.identity(N4, L)) == []
