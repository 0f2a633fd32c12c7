"""The L(r) / T(X) / G(M) parametrization of the N=4 algebra over a ring.

``L(r) = L (x) r``
``T(X) = T1 (x) (y + z) + i T2 (x) (y - z) + 2 T3 (x) x``  for ``X = [[x, y], [z, -x]]``
``G(M) = -i G1 (x) d - i Gb1 (x) a + i G2 (x) b - i Gb2 (x) c``  for ``M = [[a, b], [c, d]]``

:func:`structured_bracket` evaluates the matrix-form bracket relations
directly, independently of the structure table.
"""

from __future__ import annotations

from dataclasses import dataclass

from .conformal import ConfElement, LambdaPoly
from .diffring import RingElement, RingSpec, embed
from .scalars import I, Scalar

HALF = Scalar(1) / 2


class NotInVError(ValueError):
    """The element has terms with a positive D-power."""


class Mat2:
    """2x2 matrix over a :class:`RingSpec` ring, row-major ``[[a, b], [c, d]]``."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a: RingElement, b: RingElement, c: RingElement, d: RingElement):
        if not (a.spec == b.spec == c.spec == d.spec):
            raise ValueError("matrix entries must share a ring")
        self.a, self.b, self.c, self.d = a, b, c, d

    @classmethod
    def of(cls, spec: RingSpec, rows) -> Mat2:
        (a, b), (c, d) = rows
        conv = [x if isinstance(x, RingElement) else spec.scalar(x) for x in (a, b, c, d)]
        return cls(*conv)

    @classmethod
    def identity(cls, spec: RingSpec) -> Mat2:
        return cls.of(spec, ((1, 0), (0, 1)))

    @classmethod
    def zero(cls, spec: RingSpec) -> Mat2:
        return cls.of(spec, ((0, 0), (0, 0)))

    @property
    def spec(self) -> RingSpec:
        return self.a.spec

    def entries(self) -> tuple[RingElement, ...]:
        return (self.a, self.b, self.c, self.d)

    def rows(self) -> tuple[tuple[RingElement, RingElement], ...]:
        return ((self.a, self.b), (self.c, self.d))

    def __add__(self, other: Mat2) -> Mat2:
        return Mat2(self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d)

    def __neg__(self) -> Mat2:
        return Mat2(-self.a, -self.b, -self.c, -self.d)

    def __sub__(self, other: Mat2) -> Mat2:
        return self + (-other)

    def __mul__(self, other) -> Mat2:
        if isinstance(other, Mat2):
            return Mat2(self.a * other.a + self.b * other.c, self.a * other.b + self.b * other.d,
                        self.c * other.a + self.d * other.c, self.c * other.b + self.d * other.d)
        return Mat2(self.a * other, self.b * other, self.c * other, self.d * other)

    def __rmul__(self, other) -> Mat2:
        return self * other

    def __eq__(self, other) -> bool:
        if not isinstance(other, Mat2):
            return NotImplemented
        return self.entries() == other.entries()

    __hash__ = None

    def __repr__(self) -> str:
        return f"[[{self.a}, {self.b}], [{self.c}, {self.d}]]"

    def trace(self) -> RingElement:
        return self.a + self.d

    def det(self) -> RingElement:
        return self.a * self.d - self.b * self.c

    def dagger(self) -> Mat2:
        return dagger(self)

    def delta(self) -> Mat2:
        return Mat2(*(x.delta() for x in self.entries()))

    def is_constant(self) -> bool:
        return all(not x.delta() for x in self.entries())

    def adjugate(self) -> Mat2:
        return Mat2(self.d, -self.b, -self.c, self.a)

    def inverse(self) -> Mat2 | None:
        """Inverse when the determinant is a unit, else None."""
        u = self.det().inverse_if_unit()
        return None if u is None else self.adjugate() * u

    def embed(self, target: RingSpec) -> Mat2:
        return Mat2(*(embed(x, target) for x in self.entries()))

    def is_zero(self) -> bool:
        return not any(self.entries())


def dagger(M: Mat2) -> Mat2:
    """``[[a, b], [c, d]]^dagger = [[-d, b], [c, -a]]``."""
    return Mat2(-M.d, M.b, M.c, -M.a)


def commutator(X: Mat2, Y: Mat2) -> Mat2:
    return X * Y - Y * X


def sigma(i: int, spec: RingSpec | None = None) -> Mat2:
    """Pauli matrix sigma^i, i = 1, 2, 3."""
    spec = spec or RingSpec.const()
    rows = {1: ((0, 1), (1, 0)), 2: ((0, -I), (I, 0)), 3: ((1, 0), (0, -1))}[i]
    return Mat2.of(spec, rows)


def unit_matrix(spec: RingSpec, row: int, col: int, c=1) -> Mat2:
    rows = [[0, 0], [0, 0]]
    rows[row][col] = c
    return Mat2.of(spec, rows)


@dataclass(frozen=True, eq=False)
class LTGTriple:
    r: RingElement
    X: Mat2
    M: Mat2

    def __post_init__(self):
        if self.X.trace():
            raise ValueError("the T-component must be traceless")
        if not (self.r.spec == self.X.spec == self.M.spec):
            raise ValueError("components must share a ring")

    @classmethod
    def zero(cls, spec: RingSpec) -> LTGTriple:
        return cls(spec.zero(), Mat2.zero(spec), Mat2.zero(spec))

    @classmethod
    def L(cls, r: RingElement) -> LTGTriple:
        return cls(r, Mat2.zero(r.spec), Mat2.zero(r.spec))

    @classmethod
    def T(cls, X: Mat2) -> LTGTriple:
        return cls(X.spec.zero(), X, Mat2.zero(X.spec))

    @classmethod
    def G(cls, M: Mat2) -> LTGTriple:
        return cls(M.spec.zero(), Mat2.zero(M.spec), M)

    @property
    def spec(self) -> RingSpec:
        return self.r.spec

    def __add__(self, other: LTGTriple) -> LTGTriple:
        return LTGTriple(self.r + other.r, self.X + other.X, self.M + other.M)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LTGTriple):
            return NotImplemented
        return self.r == other.r and self.X == other.X and self.M == other.M

    __hash__ = None


# -- encode / decode ----------------------------------------------------------

def _elem(table, spec, items) -> ConfElement:
    basis = table.basis
    return ConfElement.build(basis, spec, [((basis.index(g), 0), c) for g, c in items if c])


def L_of(table, r: RingElement) -> ConfElement:
    return _elem(table, r.spec, [("L", r)])


def T_of(table, X: Mat2) -> ConfElement:
    if X.trace():
        raise ValueError("T(X) needs a traceless X")
    x, y, z = X.a, X.b, X.c
    return _elem(table, X.spec, [("T1", y + z), ("T2", (y - z) * I), ("T3", x * 2)])


def G_of(table, M: Mat2) -> ConfElement:
    a, b, c, d = M.entries()
    return _elem(table, M.spec, [("G1", d * -I), ("G2", b * I), ("Gb1", a * -I), ("Gb2", c * -I)])


def encode(table, t: LTGTriple) -> ConfElement:
    return L_of(table, t.r) + T_of(table, t.X) + G_of(table, t.M)


def decode(table, e: ConfElement) -> LTGTriple:
    if not e.is_in_V():
        raise NotInVError("element has D-powers; it does not lie in V (x) R")
    c = {name: e.coefficient(name) for name in table.basis.names}
    x = c["T3"] * HALF
    y = (c["T1"] - c["T2"] * I) * HALF
    z = (c["T1"] + c["T2"] * I) * HALF
    X = Mat2(x, y, z, -x)
    M = Mat2(c["Gb1"] * I, c["G2"] * -I, c["Gb2"] * I, c["G1"] * I)
    return LTGTriple(c["L"], X, M)


# -- matrix-form brackets -----------------------------------------------------

class _Acc:
    """Accumulates ``lam^n D^m e`` terms into a LambdaPoly (D = D (x) 1)."""

    def __init__(self, table, spec):
        self.table = table
        self.spec = spec
        self.coeffs: dict[int, ConfElement] = {}

    def add(self, e: ConfElement, lam: int = 0, dpow: int = 0, c=None) -> None:
        for _ in range(dpow):
            e = e.d()
        if c is not None:
            e = e * Scalar.coerce(c)
        if not e:
            return
        self.coeffs[lam] = self.coeffs[lam] + e if lam in self.coeffs else e

    def poly(self) -> LambdaPoly:
        return LambdaPoly(self.table.basis, self.spec, self.coeffs)


def structured_bracket(table, u: LTGTriple, v: LTGTriple) -> LambdaPoly:
    """``[u _lam v]`` from the matrix-form relations, summed bilinearly."""
    if u.spec != v.spec:
        raise ValueError("triples live over different rings")
    acc = _Acc(table, u.spec)
    r, X, M = u.r, u.X, u.M
    s, Y, N = v.r, v.X, v.M
    Lf = lambda x: L_of(table, x)
    Tf = lambda x: T_of(table, x)
    Gf = lambda x: G_of(table, x)
    three_halves = Scalar(3) / 2

    # [L(r) _lam L(s)] = (D + 2 lam) L(rs) + 2 L(delta(r) s)
    if r and s:
        acc.add(Lf(r * s), dpow=1)
        acc.add(Lf(r * s), lam=1, c=2)
        acc.add(Lf(r.delta() * s), c=2)
    # [L(r) _lam T(Y)] = (D + lam) T(rY) + T(delta(r) Y)
    if r and not Y.is_zero():
        acc.add(Tf(Y * r), dpow=1)
        acc.add(Tf(Y * r), lam=1)
        acc.add(Tf(Y * r.delta()))
    # [T(X) _lam L(s)] = lam T(sX) + T(s delta(X))
    if s and not X.is_zero():
        acc.add(Tf(X * s), lam=1)
        acc.add(Tf(X.delta() * s))
    # [T(X) _lam T(Y)] = T([X, Y])
    if not X.is_zero() and not Y.is_zero():
        acc.add(Tf(commutator(X, Y)))
    # [L(r) _lam G(N)] = (D + 3/2 lam) G(rN) + 3/2 G(delta(r) N)
    if r and not N.is_zero():
        acc.add(Gf(N * r), dpow=1)
        acc.add(Gf(N * r), lam=1, c=three_halves)
        acc.add(Gf(N * r.delta()), c=three_halves)
    # [G(M) _lam L(s)] = (1/2 D + 3/2 lam) G(sM) + 3/2 G(s delta(M))
    if s and not M.is_zero():
        acc.add(Gf(M * s), dpow=1, c=HALF)
        acc.add(Gf(M * s), lam=1, c=three_halves)
        acc.add(Gf(M.delta() * s), c=three_halves)
    # [T(X) _lam G(N)] = G(XN) and [G(M) _lam T(Y)] = -G(YM)
    if not X.is_zero() and not N.is_zero():
        acc.add(Gf(X * N))
    if not M.is_zero() and not Y.is_zero():
        acc.add(Gf(Y * M), c=-1)
    # [G(M) _lam G(N)] = 2 L(tr(M N^dagger)) + (D + 2 lam) T(M N^dagger - N M^dagger)
    #                    + 2 T(delta(M) N^dagger - N delta(M^dagger))
    if not M.is_zero() and not N.is_zero():
        Md, Nd = dagger(M), dagger(N)
        acc.add(Lf((M * Nd).trace()), c=2)
        sym = M * Nd - N * Md
        acc.add(Tf(sym), dpow=1)
        acc.add(Tf(sym), lam=1, c=2)
        acc.add(Tf(M.delta() * Nd - N * Md.delta()), c=2)
    return acc.poly()


def generator_triple(name: str, spec: RingSpec) -> LTGTriple:
    """The LTG triple of a bare generator, e.g. ``T1 = T(sigma^1 / 2)``."""
    if name == "L":
        return LTGTriple.L(spec.one())
    if name in ("T1", "T2", "T3"):
        return LTGTriple.T(sigma(int(name[1]), spec) * HALF)
    unit = {"G1": ((1, 1), I), "Gb1": ((0, 0), I), "G2": ((0, 1), -I), "Gb2": ((1, 0), I)}
    if name not in unit:
        raise KeyError(f"{name!r} is not an N=4 generator")
    (row, col), c = unit[name]
    return LTGTriple.G(unit_matrix(spec, row, col, c))
