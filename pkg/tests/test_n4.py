import pytest
from hypothesis import given
from hypothesis import strategies as st

from confalg.conformal import lambda_bracket
from confalg.diffring import RingSpec
from confalg.morphisms import n4_table
from confalg.n4 import LTGTriple, Mat2, NotInVError, dagger, decode, encode, generator_triple, sigma, structured_bracket
from confalg.render import format_lambda_poly
from confalg.scalars import I, Scalar

from conftest import SPECS, ring_elements

N4 = n4_table()
C, L = RingSpec.const(), RingSpec.laurent()


@st.composite
def matrices(draw, spec):
    return Mat2(*(draw(ring_elements(spec, max_terms=2)) for _ in range(4)))


@st.composite
def triples(draw, spec):
    X = draw(matrices(spec))
    X = X - Mat2.identity(spec) * (X.trace() * (Scalar(1) / 2))
    return LTGTriple(draw(ring_elements(spec, max_terms=2)), X, draw(matrices(spec)))


def test_encode_examples():
    assert encode(N4, LTGTriple.T(sigma(1, C))) == N4.gen("T1") * Scalar(2)
    assert encode(N4, LTGTriple.T(sigma(3, C))) == N4.gen("T3") * Scalar(2)
    assert encode(N4, LTGTriple.G(Mat2.identity(C))) == (N4.gen("G1") + N4.gen("Gb1")) * (-I)


def test_decode_examples():
    assert decode(N4, N4.gen("T1") * Scalar(2)) == LTGTriple.T(sigma(1, C))
    t = L.t()
    assert decode(N4, N4.gen("L", L, t)) == LTGTriple.L(t)
    with pytest.raises(NotInVError):
        decode(N4, N4.gen("L").d())


def test_traceless_enforced():
    with pytest.raises(ValueError):
        LTGTriple.T(Mat2.identity(C))


def test_dagger_examples():
    E11 = Mat2.of(C, ((1, 0), (0, 0)))
    assert dagger(E11) == Mat2.of(C, ((0, 0), (0, -1)))
    assert dagger(Mat2.identity(C)) == -Mat2.identity(C)
    s1, s3 = sigma(1, C), sigma(3, C)
    assert dagger(s1 * s3) == -(dagger(s3) * dagger(s1))
    assert dagger(s1 * s3) == Mat2.of(C, ((0, -1), (1, 0)))


@pytest.mark.parametrize("spec", SPECS, ids=str)
@given(data=st.data())
def test_dagger_identities(spec, data):
    X, Y, Z = (data.draw(matrices(spec)) for _ in range(3))
    assert dagger(X * Y) == -(dagger(Y) * dagger(X))
    assert dagger(X * Y * Z) == dagger(Z) * dagger(Y) * dagger(X)
    assert X * dagger(Y) + Y * dagger(X) == Mat2.identity(spec) * (X * dagger(Y)).trace()
    assert dagger(dagger(X)) == X


@pytest.mark.parametrize("spec", SPECS, ids=str)
@given(data=st.data())
def test_encode_decode_inverse(spec, data):
    u = data.draw(triples(spec))
    assert decode(N4, encode(N4, u)) == u
    assert encode(N4, decode(N4, encode(N4, u))) == encode(N4, u)


def test_structured_examples():
    one = C.one()
    assert format_lambda_poly(structured_bracket(N4, LTGTriple.L(one), LTGTriple.L(one))) == "(D + 2*lam) L"
    p = structured_bracket(N4, LTGTriple.T(sigma(1, C)), LTGTriple.T(sigma(2, C)))
    assert p.nth(0) == N4.gen("T3") * (I * 4) and p.degree() == 0
    t = L.t()
    u, v = LTGTriple.G(Mat2.identity(L) * t), LTGTriple.G(Mat2.identity(L))
    assert structured_bracket(N4, u, v) == lambda_bracket(N4, encode(N4, u), encode(N4, v))


@pytest.mark.parametrize("spec", SPECS, ids=str)
def test_structured_matches_engine_on_generators(spec):
    for a in N4.basis.names:
        for b in N4.basis.names:
            u, v = generator_triple(a, spec), generator_triple(b, spec)
            assert structured_bracket(N4, u, v) == lambda_bracket(N4, encode(N4, u), encode(N4, v)), (a, b)


@pytest.mark.parametrize("spec", SPECS, ids=str)
@given(data=st.data())
def test_structured_matches_engine(spec, data):
    u, v = data.draw(triples(spec)), data.draw(triples(spec))
    assert structured_bracket(N4, u, v) == lambda_bracket(N4, encode(N4, u), encode(N4, v))


def test_inverse_by_dagger():
    A = Mat2.of(C, ((2, 1), (1, 1)))
    assert A * -dagger(A) == Mat2.identity(C)
    assert A.inverse() == -dagger(A)
