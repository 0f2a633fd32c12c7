"""Constructors for the built-in conformal superalgebras.

``n4``      the N=4 algebra on L, T1, T2, T3 (even) and G1, G2, Gb1, Gb2 (odd)
``cur-sl2`` the current algebra of sl2
``k1..k3``  K_N realized on the Grassmann algebra in N variables
``k2-alt``  K_2 realized on Der(Lambda(1)) + Lambda(1)
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations

from .conformal import EVEN, ODD, GeneratorBasis, StructureTable, TableError
from .scalars import I, ONE, ZERO, Scalar

HALF = Scalar(1, 0) / 2


class JacobiError(TableError):
    pass


@dataclass
class LieStructConsts:
    """A finite-dimensional Lie superalgebra by structure constants.

    ``brackets[(i, j)]`` is a list of ``(k, c)`` meaning ``[x_i, x_j] = sum c x_k``.
    Missing orientations are filled in by super-antisymmetry; the Jacobi
    identity is checked on construction.
    """

    names: tuple[str, ...]
    parities: tuple[int, ...]
    brackets: dict = field(default_factory=dict)

    def __post_init__(self):
        self.names = tuple(self.names)
        self.parities = tuple(self.parities)
        idx = {n: i for i, n in enumerate(self.names)}
        full: dict[tuple[int, int], dict[int, Scalar]] = {}
        for (a, b), items in self.brackets.items():
            i, j = idx.get(a, a), idx.get(b, b)
            vec: dict[int, Scalar] = defaultdict(lambda: ZERO)
            for k, c in items:
                vec[idx.get(k, k)] += Scalar.coerce(c)
            full[(i, j)] = {k: c for k, c in vec.items() if c}
        for (i, j), vec in list(full.items()):
            sign = -self.sign(i, j)
            rev = {k: c * sign for k, c in vec.items()}
            if (j, i) in full and full[(j, i)] != rev:
                raise TableError(f"bracket [{self.names[i]}, {self.names[j]}] is not super-antisymmetric")
            full[(j, i)] = rev
        self.table = full
        self._check_jacobi()

    @property
    def dim(self) -> int:
        return len(self.names)

    def sign(self, i: int, j: int) -> int:
        return -1 if self.parities[i] and self.parities[j] else 1

    def bracket(self, x: dict[int, Scalar], y: dict[int, Scalar]) -> dict[int, Scalar]:
        out: dict[int, Scalar] = defaultdict(lambda: ZERO)
        for i, a in x.items():
            for j, b in y.items():
                for k, c in self.table.get((i, j), {}).items():
                    out[k] += a * b * c
        return {k: c for k, c in out.items() if c}

    def _check_jacobi(self) -> None:
        # [a, [b, c]] = [[a, b], c] + p(a, b) [b, [a, c]]
        n = self.dim
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    ea, eb, ec = {a: ONE}, {b: ONE}, {c: ONE}
                    lhs = self.bracket(ea, self.bracket(eb, ec))
                    rhs = _vadd(self.bracket(self.bracket(ea, eb), ec),
                                _vscale(self.bracket(eb, self.bracket(ea, ec)), self.sign(a, b)))
                    if lhs != rhs:
                        names = self.names
                        raise JacobiError(f"Jacobi identity fails on ({names[a]}, {names[b]}, {names[c]})")


def _vadd(x: dict, y: dict) -> dict:
    out = dict(x)
    for k, c in y.items():
        out[k] = out.get(k, ZERO) + c
    return {k: c for k, c in out.items() if c}


def _vscale(x: dict, s) -> dict:
    return {k: c * s for k, c in x.items() if c * s}


def sl2() -> LieStructConsts:
    return LieStructConsts(("e", "f", "h"), (EVEN, EVEN, EVEN), {
        ("e", "f"): [("h", 1)],
        ("h", "e"): [("e", 2)],
        ("h", "f"): [("f", -2)],
    })


def abelian(dim: int = 1) -> LieStructConsts:
    return LieStructConsts(tuple(f"x{i + 1}" for i in range(dim)) if dim > 1 else ("x",),
                           (EVEN,) * dim)


def build_current(g: LieStructConsts, name: str | None = None) -> StructureTable:
    """Current algebra: ``a_(0) b = [a, b]`` and all higher products zero."""
    basis = GeneratorBasis(g.names, g.parities)
    products = {}
    for i in range(g.dim):
        for j in range(i, g.dim):
            vec = g.table.get((i, j), {})
            products[(i, j)] = {0: [(0, k, c) for k, c in vec.items()]} if vec else {}
    return StructureTable(basis, products, name or "cur")


# -- N=4 ----------------------------------------------------------------------

N4_NAMES = ("L", "T1", "T2", "T3", "G1", "G2", "Gb1", "Gb2")
N4_PARITIES = (EVEN, EVEN, EVEN, EVEN, ODD, ODD, ODD, ODD)

# Pauli matrices as nested tuples of scalars
SIGMA = (
    ((ZERO, ONE), (ONE, ZERO)),
    ((ZERO, -I), (I, ZERO)),
    ((ONE, ZERO), (ZERO, -ONE)),
)


def levi_civita(i: int, j: int, k: int) -> int:
    return {(0, 1, 2): 1, (1, 2, 0): 1, (2, 0, 1): 1,
            (0, 2, 1): -1, (2, 1, 0): -1, (1, 0, 2): -1}.get((i, j, k), 0)


def build_N4() -> StructureTable:
    L, T, G, Gb = 0, (1, 2, 3), (4, 5), (6, 7)
    prods: dict = defaultdict(lambda: defaultdict(list))

    prods[(L, L)][0].append((1, L, ONE))
    prods[(L, L)][1].append((0, L, Scalar(2)))
    for t in T:
        prods[(L, t)][0].append((1, t, ONE))
        prods[(L, t)][1].append((0, t, ONE))
    for g in G + Gb:
        prods[(L, g)][0].append((1, g, ONE))
        prods[(L, g)][1].append((0, g, Scalar(3, 0) / 2))
    for a in range(3):
        for b in range(3):
            prods[(T[a], T[b])]
            for c in range(3):
                eps = levi_civita(a, b, c)
                if eps:
                    prods[(T[a], T[b])][0].append((0, T[c], I * eps))
    for a in range(3):
        for p in range(2):
            for q in range(2):
                s = SIGMA[a][p][q]
                if s:
                    prods[(T[a], G[p])][0].append((0, G[q], -HALF * s))
                s = SIGMA[a][q][p]
                if s:
                    prods[(T[a], Gb[p])][0].append((0, Gb[q], HALF * s))
    for odd in (G, Gb):
        for p in range(2):
            for q in range(p, 2):
                prods[(odd[p], odd[q])]
    for p in range(2):
        for q in range(2):
            entry = prods[(G[p], Gb[q])]
            if p == q:
                entry[0].append((0, L, Scalar(2)))
            for a in range(3):
                s = SIGMA[a][p][q]
                if s:
                    entry[0].append((1, T[a], s * -2))
                    entry[1].append((0, T[a], s * -4))
    basis = GeneratorBasis(N4_NAMES, N4_PARITIES)
    return StructureTable(basis, {k: dict(v) for k, v in prods.items()}, "n4")


# -- Grassmann algebras and K_N -----------------------------------------------

class GrassmannElement:
    """Element of the Grassmann algebra on xi_1..xi_N; monomials are sorted tuples."""

    __slots__ = ("N", "coeffs")

    def __init__(self, N: int, coeffs: dict[tuple[int, ...], Scalar] | None = None):
        self.N = N
        self.coeffs = {m: Scalar.coerce(c) for m, c in (coeffs or {}).items() if c}
        for m in self.coeffs:
            if list(m) != sorted(set(m)) or any(not 1 <= i <= N for i in m):
                raise ValueError(f"bad Grassmann monomial {m} for N = {N}")

    @classmethod
    def monomial(cls, N: int, indices=(), coeff=1) -> GrassmannElement:
        return cls(N, {tuple(indices): coeff})

    def __add__(self, other: GrassmannElement) -> GrassmannElement:
        self._check(other)
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = out.get(m, ZERO) + c
        return GrassmannElement(self.N, out)

    def __neg__(self) -> GrassmannElement:
        return GrassmannElement(self.N, {m: -c for m, c in self.coeffs.items()})

    def __sub__(self, other: GrassmannElement) -> GrassmannElement:
        return self + (-other)

    def __mul__(self, other) -> GrassmannElement:
        if not isinstance(other, GrassmannElement):
            c = Scalar.coerce(other)
            return GrassmannElement(self.N, {m: v * c for m, v in self.coeffs.items()})
        self._check(other)
        out: dict[tuple[int, ...], Scalar] = {}
        for m1, c1 in self.coeffs.items():
            for m2, c2 in other.coeffs.items():
                if set(m1) & set(m2):
                    continue
                sign = _merge_sign(m1, m2)
                key = tuple(sorted(m1 + m2))
                out[key] = out.get(key, ZERO) + c1 * c2 * sign
        return GrassmannElement(self.N, out)

    def deriv(self, i: int) -> GrassmannElement:
        """Left derivative with respect to xi_i."""
        if not 1 <= i <= self.N:
            raise IndexError(f"variable index {i} out of range 1..{self.N}")
        out = {}
        for m, c in self.coeffs.items():
            if i in m:
                p = m.index(i)
                out[tuple(x for x in m if x != i)] = c * (-1) ** p
        return GrassmannElement(self.N, out)

    def _check(self, other: GrassmannElement) -> None:
        if other.N != self.N:
            raise ValueError("Grassmann elements in different numbers of variables")

    def __eq__(self, other) -> bool:
        if not isinstance(other, GrassmannElement):
            return NotImplemented
        return self.N == other.N and self.coeffs == other.coeffs

    __hash__ = None

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for m, c in sorted(self.coeffs.items(), key=lambda kv: (len(kv[0]), kv[0])):
            mono = "*".join(f"xi{i}" for i in m) or "1"
            parts.append(f"({c})*{mono}")
        return " + ".join(parts)


def _merge_sign(m1: tuple[int, ...], m2: tuple[int, ...]) -> int:
    inversions = sum(1 for a in m1 for b in m2 if a > b)
    return -1 if inversions % 2 else 1


def grassmann_mul(f: GrassmannElement, g: GrassmannElement) -> GrassmannElement:
    return f * g


def grassmann_deriv(f: GrassmannElement, i: int) -> GrassmannElement:
    return f.deriv(i)


def grassmann_monomials(N: int) -> list[tuple[int, ...]]:
    """Monomials ordered by degree, then lexicographically."""
    return [m for d in range(N + 1) for m in combinations(range(1, N + 1), d)]


def monomial_name(m: tuple[int, ...], N: int) -> str:
    if not m:
        return "one"
    if N == 1:
        return "xi"
    return "xi" + "".join(str(i) for i in m)


def build_KN(N: int) -> StructureTable:
    """K_N for N = 1, 2, 3 on the monomial basis of the Grassmann algebra.

    ``f_(0) g = (|f|/2 - 1) D(fg) + (1/2)(-1)^|f| sum_i (d_i f)(d_i g)``,
    ``f_(1) g = ((|f| + |g|)/2 - 2) fg`` and higher products vanish.
    """
    if N not in (1, 2, 3):
        raise ValueError("K_N is built for N = 1, 2, 3")
    monos = grassmann_monomials(N)
    index = {m: k for k, m in enumerate(monos)}
    basis = GeneratorBasis(tuple(monomial_name(m, N) for m in monos),
                           tuple(len(m) % 2 for m in monos))
    products = {}
    for a, f_m in enumerate(monos):
        f = GrassmannElement.monomial(N, f_m)
        for b, g_m in enumerate(monos):
            g = GrassmannElement.monomial(N, g_m)
            fg = f * g
            entry: dict[int, list] = defaultdict(list)
            c0 = HALF * len(f_m) - 1
            for m, c in fg.coeffs.items():
                if c0:
                    entry[0].append((1, index[m], c * c0))
            acc = GrassmannElement(N)
            for i in range(1, N + 1):
                acc = acc + f.deriv(i) * g.deriv(i)
            half_sign = HALF * (-1) ** len(f_m)
            for m, c in acc.coeffs.items():
                entry[0].append((0, index[m], c * half_sign))
            c1 = HALF * (len(f_m) + len(g_m)) - 2
            for m, c in fg.coeffs.items():
                if c1:
                    entry[1].append((0, index[m], c * c1))
            products[(a, b)] = dict(entry)
    return StructureTable(basis, products, f"k{N}")


# -- alternate K_2 ------------------------------------------------------------

K2_ALT_NAMES = ("ddxi", "xiddxi", "one", "xi")
K2_ALT_PARITIES = (ODD, EVEN, EVEN, ODD)


def build_K2_alt() -> StructureTable:
    """K_2 on ``Der(Lambda(1)) + Lambda(1)`` with basis d/dxi, xi d/dxi, 1, xi.

    ``a_(0) b = [a, b]``, ``a_(0) f = a(f)``, ``a_(1) f = -(-1)^(p(a)p(f)) f a``,
    ``f_(0) g = -D(fg)`` and ``f_(1) g = -2 fg``; every other product vanishes.
    """
    D, E, one, xi = range(4)
    products = {
        (D, D): {},
        (D, E): {0: [(0, D, 1)]},         # [d/dxi, xi d/dxi] = d/dxi
        (E, E): {},
        (D, one): {1: [(0, D, -1)]},      # 1 * d/dxi
        (D, xi): {0: [(0, one, 1)],       # d/dxi (xi) = 1
                  1: [(0, E, 1)]},        # -(-1) xi d/dxi
        (E, one): {1: [(0, E, -1)]},
        (E, xi): {0: [(0, xi, 1)]},       # xi * xi d/dxi = 0
        (one, one): {0: [(1, one, -1)], 1: [(0, one, -2)]},
        (one, xi): {0: [(1, xi, -1)], 1: [(0, xi, -2)]},
        (xi, xi): {},
    }
    return StructureTable(GeneratorBasis(K2_ALT_NAMES, K2_ALT_PARITIES), products, "k2-alt")


BUILTINS = {
    "n4": build_N4,
    "cur-sl2": lambda: build_current(sl2(), "cur-sl2"),
    "k1": lambda: build_KN(1),
    "k2": lambda: build_KN(2),
    "k3": lambda: build_KN(3),
    "k2-alt": build_K2_alt,
}


def builtin(name: str) -> StructureTable:
    try:
        return BUILTINS[name]()
    except KeyError:
        raise KeyError(f"unknown algebra {name!r}; built-ins are {', '.join(BUILTINS)}") from None
