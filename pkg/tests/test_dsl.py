from importlib import resources

import pytest
from hypothesis import given
from hypothesis import strategies as st

from confalg.builders import BUILTINS, builtin
from confalg.conformal import GeneratorBasis, StructureTable, lambda_bracket
from confalg.diffring import RingSpec
from confalg.dsl import DslError, parse_algebra, parse_element, parse_matrix, parse_ring_element, print_algebra
from confalg.n4 import Mat2
from confalg.render import format_lambda_poly
from confalg.scalars import Scalar

from conftest import SPECS, ring_elements, scalars

L = RingSpec.laurent()


def test_virasoro_like_table():
    table = parse_algebra("algebra vir\ngenerator L even\nprod L L 0 = D^1 L\nprod L L 1 = 2 L\n")
    assert table.name == "vir"
    assert format_lambda_poly(lambda_bracket(table, table.gen("L"), table.gen("L"))) == "(D + 2*lam) L"


def test_empty_product_section_is_abelian():
    table = parse_algebra("generator a even\ngenerator b odd  # comment\n")
    assert all(entry == {} for entry in table.products.values())
    assert len(table.products) == 4
    assert not lambda_bracket(table, table.gen("a"), table.gen("b"))


def test_explicit_zero_product():
    table = parse_algebra("generator a even\ngenerator b even\nprod a b 0 = 0\n")
    assert table.products[(0, 1)] == {} and (1, 0) not in table.products


@pytest.mark.parametrize("text,line,column,fragment", [
    ("generator L even\nprod L L 1 = 2 X", 2, 16, "unknown generator 'X'"),
    ("generator L even\nprod L L 1 = 2/ L", 2, 15, "malformed coefficient"),
    ("generator L even\nprod L M 0 = L", 2, 8, "unknown generator 'M'"),
    ("generator L even\nfoo bar", 2, 1, "unknown directive"),
    ("generator L even\ngenerator L odd", 2, 11, "declared twice"),
    ("generator L neutral", 1, 13, "parity"),
    ("generator L even\nprod L L x = L", 2, 10, "non-negative integer"),
    ("generator L even\nprod L L 0 L", 2, 13, "expected '='"),
    ("generator L even\ngenerator G odd\nprod L L 0 = G", 3, 14, "G is odd"),
    ("generator D even", 1, 11, "invalid generator name"),
])
def test_diagnostics(text, line, column, fragment):
    with pytest.raises(DslError) as err:
        parse_algebra(text)
    assert (err.value.line, err.value.column) == (line, column)
    assert fragment in err.value.message


@pytest.mark.parametrize("name", list(BUILTINS))
def test_round_trip_builtins(name):
    table = builtin(name)
    text = print_algebra(table)
    assert parse_algebra(text) == table
    assert print_algebra(parse_algebra(text)) == text


@pytest.mark.parametrize("name", list(BUILTINS))
def test_shipped_files(name):
    text = (resources.files("confalg") / "algebras" / f"{name}.alg").read_text(encoding="utf-8")
    table = parse_algebra(text)
    assert table == builtin(name)
    assert print_algebra(table) == text


@st.composite
def random_tables(draw):
    k = draw(st.integers(1, 4))
    names = tuple(f"g{i}" for i in range(k))
    parities = tuple(draw(st.lists(st.integers(0, 1), min_size=k, max_size=k)))
    products = {}
    for a in range(k):
        for b in range(k):
            if not draw(st.booleans()):
                continue
            entry = {}
            for n in range(draw(st.integers(0, 2))):
                items = []
                for h in range(k):
                    if parities[h] == (parities[a] + parities[b]) % 2 and draw(st.booleans()):
                        items.append((draw(st.integers(0, 2)), names[h], draw(scalars)))
                entry[n] = items
            products[(names[a], names[b])] = entry
    return StructureTable(GeneratorBasis(names, parities), products, "rand")


@given(random_tables())
def test_round_trip_random_tables(table):
    """Print then parse: equal up to the pairs the parser fills in as zero."""
    back = parse_algebra(print_algebra(table))
    assert back.basis == table.basis
    for key, entry in back.products.items():
        if key in table.products:
            assert entry == table.products[key]
        else:
            i, j = key
            assert entry == {} and (j, i) not in table.products
    assert set(table.products) <= set(back.products)


def test_ring_literals():
    t = L.t()
    assert parse_ring_element("2*t^2 + t^-1", L) == t * t * 2 + L.monomial(1, -1)
    assert parse_ring_element("(1+i)*t - 3", L) == t * Scalar(1, 1) - L.scalar(3)
    assert parse_ring_element("t^(-2)", L) == L.monomial(1, -2)
    assert parse_ring_element("(t + 1)", L) == t + L.one()
    P = RingSpec.puiseux(2)
    assert parse_ring_element("t^(1/2) - t^-1/2", P) == P.monomial(1, "1/2") - P.monomial(1, "-1/2")
    with pytest.raises(DslError):
        parse_ring_element("t^", L)
    with pytest.raises(DslError):
        parse_ring_element("t", RingSpec.const())
    with pytest.raises(DslError):
        parse_ring_element("t^(1/2)", L)


@pytest.mark.parametrize("spec", SPECS, ids=str)
@given(data=st.data())
def test_ring_print_parse_round_trip(spec, data):
    r = data.draw(ring_elements(spec))
    assert parse_ring_element(str(r), spec) == r


def test_element_literals():
    basis = builtin("n4").basis
    a = parse_element("L ⊗ t", basis, L)
    assert a == parse_element("L (x) t", basis, L)
    assert a.coefficient("L") == L.t()
    b = parse_element("2 D T1 (x) (t + 1) - i G1", basis, L)
    assert b.coefficient("T1", 1) == (L.t() + L.one()) * 2
    assert b.coefficient("G1") == L.scalar(Scalar(0, -1))
    with pytest.raises(DslError):
        parse_element("Q ⊗ t", basis, L)


def test_matrix_literals():
    M = parse_matrix("[[1, t],[0, 1]]", L)
    assert M == Mat2(L.one(), L.t(), L.zero(), L.one())
    assert parse_matrix("[[1, (1+i)*t^-1], [t^2 - 1, 1]]", L).b == L.monomial(Scalar(1, 1), -1)
    for bad in ("[[1,2],[3]]", "[1,2,3,4]", "[[1,2],[3,x]]"):
        with pytest.raises(DslError):
            parse_matrix(bad, L)
