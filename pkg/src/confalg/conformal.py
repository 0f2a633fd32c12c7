"""Lie conformal superalgebras given by structure tables, and their base change.

A table stores ``g_i (n) g_j`` for generators ``g_i, g_j`` as a sum of
``c * D^m g``.  Elements of ``A (x) R`` are sums ``D^m g (x) r``; the
n-th products are extended to them by sesquilinearity and the base-change
rule ``(a (x) r)_(n)(b (x) s) = sum_j a_(n+j) b (x) delta^(j)(r) s``.

Coefficients of elements only need ``+ - *``, ``bool``, ``delta`` and
``delta_divided``; the ring object only needs ``zero()``.  That lets the same
engine run over :class:`~confalg.diffring.RingSpec` rings and over the
symbolic ring used by the escape search.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct
from math import comb, factorial

from .diffring import RingSpec
from .scalars import ZERO, Scalar

EVEN, ODD = 0, 1

_INV_FACT = [Scalar(Fraction(1, factorial(n))) for n in range(64)]


def inv_factorial(n: int) -> Scalar:
    if n < len(_INV_FACT):
        return _INV_FACT[n]
    return Scalar(Fraction(1, factorial(n)))


class UndefinedProductError(KeyError):
    """Neither orientation of a generator pair is present in the table."""


class TableError(ValueError):
    pass


@dataclass(frozen=True)
class GeneratorBasis:
    names: tuple[str, ...]
    parities: tuple[int, ...]

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise TableError("generator names must be unique")
        if len(self.names) != len(self.parities):
            raise TableError("one parity per generator")
        if any(p not in (EVEN, ODD) for p in self.parities):
            raise TableError("parities are 0 (even) or 1 (odd)")
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(self.names)})

    def __len__(self) -> int:
        return len(self.names)

    def index(self, name: str | int) -> int:
        if isinstance(name, int):
            if not 0 <= name < len(self.names):
                raise IndexError(name)
            return name
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown generator {name!r}") from None

    def parity(self, g: int) -> int:
        return self.parities[g]

    def sign(self, g: int, h: int) -> int:
        """``p(a, b) = (-1)^(p(a) p(b))``."""
        return -1 if self.parities[g] and self.parities[h] else 1


# An A-level element: {(generator, D-power): Scalar}
KElem = dict


class StructureTable:
    """Immutable table of n-th products between generators.

    ``products[(i, j)]`` maps ``n`` to a tuple of ``(m, g, c)`` meaning
    ``g_i (n) g_j = sum c D^m g_g``.  A declared pair with an empty mapping
    has all products zero.  Pairs declared in one orientation only are
    completed through skew-symmetry.
    """

    def __init__(self, basis: GeneratorBasis, products: dict, name: str = "algebra"):
        self.basis = basis
        self.name = name
        canon: dict[tuple[int, int], dict[int, tuple]] = {}
        for (i, j), by_n in products.items():
            i, j = basis.index(i), basis.index(j)
            entry = {}
            for n, items in by_n.items():
                if n < 0:
                    raise TableError("n-th products are indexed by n >= 0")
                acc: dict[tuple[int, int], Scalar] = {}
                for m, g, c in items:
                    g = basis.index(g)
                    c = Scalar.coerce(c)
                    if m < 0:
                        raise TableError("D-powers are non-negative")
                    if basis.parities[g] != (basis.parities[i] + basis.parities[j]) % 2:
                        raise TableError(
                            f"parity violation in {basis.names[i]}_({n}){basis.names[j]}: "
                            f"{basis.names[g]} has the wrong parity")
                    acc[(g, m)] = acc.get((g, m), ZERO) + c
                cleaned = tuple(sorted((m, g, c) for (g, m), c in acc.items() if c))
                if cleaned:
                    entry[n] = tuple(sorted(cleaned, key=lambda t: (t[1], t[0])))
            canon[(i, j)] = entry
        self.products = canon
        self._gen_cache: dict[tuple[int, int], dict[int, KElem]] = {}
        self._shift_cache: dict[tuple[int, int, int, int], list] = {}

    def __eq__(self, other) -> bool:
        if not isinstance(other, StructureTable):
            return NotImplemented
        return (self.name == other.name and self.basis == other.basis
                and self.products == other.products)

    __hash__ = None

    def __repr__(self) -> str:
        return f"StructureTable({self.name!r}, {len(self.basis)} generators)"

    def declared(self, i: int, j: int) -> bool:
        return (i, j) in self.products

    def gen(self, name: str | int, ring=None, coeff=None, dpow: int = 0) -> ConfElement:
        return ConfElement.generator(self.basis, ring or RingSpec.const(), name, coeff, dpow)

    # -- generator-level products -----------------------------------------

    def gen_products(self, i: int, j: int) -> dict[int, KElem]:
        """``{n: g_i (n) g_j}`` with only nonzero n present."""
        key = (i, j)
        cached = self._gen_cache.get(key)
        if cached is not None:
            return cached
        entry = self.products.get(key)
        if entry is not None:
            out = {n: {(g, m): c for m, g, c in items} for n, items in entry.items()}
        else:
            rev = self.products.get((j, i))
            if rev is None:
                names = self.basis.names
                raise UndefinedProductError(
                    f"product {names[i]}_(n){names[j]} is not defined in either orientation")
            out = self._skew(i, j, rev)
        self._gen_cache[key] = out
        return out

    def _skew(self, i: int, j: int, rev: dict[int, tuple]) -> dict[int, KElem]:
        # a_(n) b = -p(a,b) sum_j (-1)^(j+n) D^(j) (b_(n+j) a)
        sign = -self.basis.sign(i, j)
        top = max(rev, default=-1)
        out: dict[int, KElem] = {}
        for n in range(top + 1):
            acc: KElem = {}
            for k in range(0, top - n + 1):
                items = rev.get(n + k)
                if not items:
                    continue
                f = inv_factorial(k) * (sign * (-1) ** (k + n))
                for m, g, c in items:
                    key = (g, m + k)
                    acc[key] = acc.get(key, ZERO) + c * f
            acc = {kk: v for kk, v in acc.items() if v}
            if acc:
                out[n] = acc
        return out

    def support(self, i: int, j: int) -> int:
        """Largest n with a nonzero product, or -1."""
        return max(self.gen_products(i, j), default=-1)

    def max_support(self) -> int:
        n = len(self.basis)
        return max((self.support(i, j) for i in range(n) for j in range(n)), default=-1)

    def shifted_products(self, g: int, m: int, h: int, l: int) -> list[list[tuple]]:
        """n-th products ``(D^m g)_(N) (D^l h)`` for N = 0..top as item lists.

        Uses ``[D^m a _lam D^l b] = (-lam)^m (D + lam)^l [a _lam b]``.
        """
        key = (g, m, h, l)
        cached = self._shift_cache.get(key)
        if cached is not None:
            return cached
        base = self.gen_products(g, h)
        # ordinary lambda coefficients: {lambda power: {(gen, dpow): Scalar}}
        poly: dict[int, KElem] = {}
        sign_m = -1 if m % 2 else 1
        for n, elem in base.items():
            scale = inv_factorial(n) * sign_m
            for k in range(l + 1):
                c_bin = comb(l, k)
                lam = n + m + k
                bucket = poly.setdefault(lam, {})
                for (gen, p), c in elem.items():
                    kk = (gen, p + l - k)
                    bucket[kk] = bucket.get(kk, ZERO) + c * scale * c_bin
        top = max(poly, default=-1)
        out: list[list[tuple]] = []
        for N in range(top + 1):
            f = factorial(N)
            items = [(kk, c * f) for kk, c in sorted(poly.get(N, {}).items()) if c]
            out.append(items)
        while out and not out[-1]:
            out.pop()
        self._shift_cache[key] = out
        return out


class ConfElement:
    """Element of ``A (x) R``: ``{(generator, D-power): coefficient}``."""

    __slots__ = ("basis", "ring", "terms")

    def __init__(self, basis: GeneratorBasis, ring, terms: dict):
        self.basis = basis
        self.ring = ring
        self.terms = terms

    @classmethod
    def build(cls, basis, ring, items) -> ConfElement:
        acc: dict = {}
        for key, c in items:
            v = acc.get(key)
            acc[key] = c if v is None else v + c
        return cls(basis, ring, {k: v for k, v in acc.items() if v})

    @classmethod
    def zero(cls, basis, ring) -> ConfElement:
        return cls(basis, ring, {})

    @classmethod
    def generator(cls, basis, ring, name, coeff=None, dpow: int = 0) -> ConfElement:
        g = basis.index(name)
        if coeff is None:
            coeff = ring.one()
        elif not hasattr(coeff, "delta"):
            coeff = ring.scalar(coeff)
        return cls(basis, ring, {(g, dpow): coeff} if coeff else {})

    def _check(self, other: ConfElement) -> None:
        if other.basis != self.basis or other.ring != self.ring:
            raise ValueError("elements live in different algebras or rings")

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda kv: kv[0])

    def __add__(self, other: ConfElement) -> ConfElement:
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k)
            if v is None:
                out[k] = c
            else:
                v = v + c
                if v:
                    out[k] = v
                else:
                    del out[k]
        return ConfElement(self.basis, self.ring, out)

    def __neg__(self) -> ConfElement:
        return ConfElement(self.basis, self.ring, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: ConfElement) -> ConfElement:
        return self + (-other)

    def __mul__(self, r) -> ConfElement:
        """Right action of a ring element or scalar on the coefficient."""
        out = {}
        for k, c in self.terms.items():
            v = c * r
            if v:
                out[k] = v
        return ConfElement(self.basis, self.ring, out)

    __rmul__ = __mul__

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ConfElement):
            return NotImplemented
        return self.basis == other.basis and self.ring == other.ring and self.terms == other.terms

    __hash__ = None

    def __repr__(self) -> str:
        from .render import format_element
        return f"ConfElement({format_element(self)!r})"

    def d(self) -> ConfElement:
        """``D (x) 1``: raise every D-power by one."""
        return ConfElement(self.basis, self.ring, {(g, m + 1): c for (g, m), c in self.terms.items()})

    def dhat(self) -> ConfElement:
        """``D (x) 1 + 1 (x) delta``."""
        out: dict = {}
        for (g, m), c in self.terms.items():
            out[(g, m + 1)] = out[(g, m + 1)] + c if (g, m + 1) in out else c
            dc = c.delta()
            if dc:
                v = out.get((g, m))
                out[(g, m)] = dc if v is None else v + dc
        return ConfElement(self.basis, self.ring, {k: v for k, v in out.items() if v})

    def dhat_power(self, k: int) -> ConfElement:
        e = self
        for _ in range(k):
            e = e.dhat()
        return e

    def max_dpow(self) -> int:
        return max((m for (_, m) in self.terms), default=-1)

    def is_in_V(self) -> bool:
        return all(m == 0 for (_, m) in self.terms)

    def parity(self) -> int | None:
        ps = {self.basis.parities[g] for (g, _) in self.terms}
        if not ps:
            return None
        if len(ps) > 1:
            raise ValueError("element is not parity-homogeneous")
        return ps.pop()

    def coefficient(self, name, dpow: int = 0):
        return self.terms.get((self.basis.index(name), dpow), self.ring.zero())

    def map_coeffs(self, f, ring=None) -> ConfElement:
        ring = ring if ring is not None else self.ring
        out = {}
        for k, c in self.terms.items():
            v = f(c)
            if v:
                out[k] = v
        return ConfElement(self.basis, ring, out)


class LambdaPoly:
    """Polynomial in lambda with :class:`ConfElement` coefficients (ordinary powers)."""

    __slots__ = ("basis", "ring", "coeffs")

    def __init__(self, basis, ring, coeffs: dict[int, ConfElement]):
        self.basis = basis
        self.ring = ring
        self.coeffs = {n: c for n, c in coeffs.items() if c}

    @classmethod
    def zero(cls, basis, ring) -> LambdaPoly:
        return cls(basis, ring, {})

    @classmethod
    def constant(cls, e: ConfElement) -> LambdaPoly:
        return cls(e.basis, e.ring, {0: e})

    def coeff(self, n: int) -> ConfElement:
        return self.coeffs.get(n) or ConfElement.zero(self.basis, self.ring)

    def nth(self, n: int) -> ConfElement:
        """The n-th product ``n! * coeff(n)``."""
        return self.coeff(n) * Scalar(factorial(n))

    def degree(self) -> int:
        return max(self.coeffs, default=-1)

    def __add__(self, other: LambdaPoly) -> LambdaPoly:
        out = dict(self.coeffs)
        for n, c in other.coeffs.items():
            out[n] = out[n] + c if n in out else c
        return LambdaPoly(self.basis, self.ring, out)

    def __neg__(self) -> LambdaPoly:
        return LambdaPoly(self.basis, self.ring, {n: -c for n, c in self.coeffs.items()})

    def __sub__(self, other: LambdaPoly) -> LambdaPoly:
        return self + (-other)

    def __mul__(self, r) -> LambdaPoly:
        return LambdaPoly(self.basis, self.ring, {n: c * r for n, c in self.coeffs.items()})

    __rmul__ = __mul__

    def times_lambda(self, k: int = 1) -> LambdaPoly:
        return LambdaPoly(self.basis, self.ring, {n + k: c for n, c in self.coeffs.items()})

    def map(self, f) -> LambdaPoly:
        return LambdaPoly(self.basis, self.ring, {n: f(c) for n, c in self.coeffs.items()})

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LambdaPoly):
            return NotImplemented
        return self.basis == other.basis and self.ring == other.ring and self.coeffs == other.coeffs

    __hash__ = None

    def __repr__(self) -> str:
        from .render import format_lambda_poly
        return f"LambdaPoly({format_lambda_poly(self)!r})"


# -- products on A (x) R ----------------------------------------------------

def _check_pair(table: StructureTable, a: ConfElement, b: ConfElement) -> None:
    if a.basis != table.basis or b.basis != table.basis:
        raise ValueError("element basis does not match the table")
    if a.ring != b.ring:
        raise ValueError(f"ring mismatch: {a.ring} vs {b.ring}")


def _bracket_coeffs(table: StructureTable, a: ConfElement, b: ConfElement,
                    only: int | None = None) -> dict[int, dict]:
    """Ordinary lambda-coefficients of ``[a _lam b]`` (or just ``lam^only``)."""
    out: dict[int, dict] = {}
    for (g, m), r in a.terms.items():
        derivs = [r]
        for (h, l), s in b.terms.items():
            prods = table.shifted_products(g, m, h, l)
            for N, items in enumerate(prods):
                if not items:
                    continue
                for j in range(N + 1):
                    n = N - j
                    if only is not None and n != only:
                        continue
                    while len(derivs) <= j:
                        nxt = derivs[-1].delta() if derivs[-1] else derivs[-1]
                        derivs.append(nxt)
                    dr = derivs[j]
                    if not dr:
                        break
                    coef = dr * s
                    if j > 1:
                        coef = coef * inv_factorial(j)
                    if not coef:
                        continue
                    scale = inv_factorial(n)
                    bucket = out.setdefault(n, {})
                    for key, c in items:
                        v = coef * (c * scale)
                        old = bucket.get(key)
                        bucket[key] = v if old is None else old + v
    return out


def lambda_bracket(table: StructureTable, a: ConfElement, b: ConfElement) -> LambdaPoly:
    """``[a _lam b] = sum_n lam^n / n! * a_(n) b``."""
    _check_pair(table, a, b)
    raw = _bracket_coeffs(table, a, b)
    coeffs = {}
    for n, bucket in raw.items():
        e = ConfElement(table.basis, a.ring, {k: v for k, v in bucket.items() if v})
        if e:
            coeffs[n] = e
    return LambdaPoly(table.basis, a.ring, coeffs)


def nth_product(table: StructureTable, a: ConfElement, b: ConfElement, n: int) -> ConfElement:
    _check_pair(table, a, b)
    if n < 0:
        raise ValueError("n must be non-negative")
    raw = _bracket_coeffs(table, a, b, only=n).get(n, {})
    f = Scalar(factorial(n))
    return ConfElement(table.basis, a.ring, {k: v * f for k, v in raw.items() if v})


def apply_dhat(a: ConfElement) -> ConfElement:
    return a.dhat()


def divided_dhat(a: ConfElement, j: int) -> ConfElement:
    """``D^(j) = D^j / j!`` with D the derivation of ``A (x) R``."""
    return a.dhat_power(j) * inv_factorial(j)


# -- axiom checking ---------------------------------------------------------

@dataclass
class AxiomResult:
    axiom: str
    passed: bool = True
    checked: int = 0
    witness: str | None = None
    witness_generators: tuple[str, ...] | None = None

    def fail(self, witness: str, gens: tuple[str, ...]) -> None:
        if self.passed:
            self.passed = False
            self.witness = witness
            self.witness_generators = gens


@dataclass
class AxiomReport:
    table: str
    bounds: dict
    results: list[AxiomResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def result(self, axiom: str) -> AxiomResult:
        for r in self.results:
            if r.axiom == axiom:
                return r
        raise KeyError(axiom)

    def summary(self) -> str:
        b = self.bounds
        lines = [f"algebra {self.table}: axiom check "
                 f"(n <= {b['n_max']}, m <= {b['m_max']}, D-powers <= {b['dpow_max']})"]
        for r in self.results:
            status = "pass" if r.passed else "FAIL"
            line = f"  {r.axiom:<4} {status}  ({r.checked} checks)"
            if not r.passed:
                line += f"\n       counterexample: {r.witness}"
            lines.append(line)
        lines.append("result: " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines)


def check_axioms(table: StructureTable, n_max: int = 6, m_max: int = 4,
                 dpow_max: int = 2) -> AxiomReport:
    """Check CS0-CS3 over the constant ring on a bounded spanning set."""
    ring = RingSpec.const()
    basis = table.basis
    names = basis.names
    gens = [ConfElement.generator(basis, ring, g) for g in range(len(basis))]
    report = AxiomReport(table.name, {"n_max": n_max, "m_max": m_max, "dpow_max": dpow_max})

    def label(g, p):
        return f"D^{p} {names[g]}" if p else names[g]

    shifted = {(g, p): gens[g].dhat_power(p) for g in range(len(basis)) for p in range(dpow_max + 1)}

    # CS0: finite support, with the bound predicted by sesquilinearity.
    cs0 = AxiomResult("CS0")
    for (g, p), (h, q) in iproduct(shifted, repeat=2):
        try:
            br = lambda_bracket(table, shifted[(g, p)], shifted[(h, q)])
        except UndefinedProductError as exc:
            cs0.fail(str(exc), (names[g], names[h]))
            continue
        bound = table.support(g, h) + p + q
        cs0.checked += 1
        if br.degree() > bound or br.degree() > n_max + 2 * dpow_max:
            cs0.fail(f"{label(g, p)}_(n){label(h, q)} nonzero at n = {br.degree()}",
                     (names[g], names[h]))
    report.results.append(cs0)
    if not cs0.passed:
        return report

    # CS1 and the right D-rule.
    cs1 = AxiomResult("CS1")
    for (g, p), (h, q) in iproduct(shifted, repeat=2):
        a, b = shifted[(g, p)], shifted[(h, q)]
        da, db = a.dhat(), b.dhat()
        prods = [nth_product(table, a, b, n) for n in range(n_max + 1)]
        for n in range(n_max + 1):
            lhs = nth_product(table, da, b, n)
            rhs = prods[n - 1] * Scalar(-n) if n else ConfElement.zero(basis, ring)
            cs1.checked += 1
            if lhs != rhs:
                cs1.fail(f"(D {label(g, p)})_({n}){label(h, q)} != -{n} {label(g, p)}_({n - 1}){label(h, q)}",
                         (names[g], names[h]))
            lhs = nth_product(table, a, db, n)
            rhs = prods[n].dhat()
            if n:
                rhs = rhs + prods[n - 1] * Scalar(n)
            cs1.checked += 1
            if lhs != rhs:
                cs1.fail(f"{label(g, p)}_({n})(D {label(h, q)}) violates the right D-rule",
                         (names[g], names[h]))
    report.results.append(cs1)

    # CS2 on generator pairs.
    cs2 = AxiomResult("CS2")
    top = table.max_support()
    for g, h in iproduct(range(len(basis)), repeat=2):
        a, b = gens[g], gens[h]
        ab = lambda_bracket(table, a, b)
        ba = lambda_bracket(table, b, a)
        sign = -basis.sign(g, h)
        for n in range(n_max + 1):
            rhs = ConfElement.zero(basis, ring)
            for j in range(0, max(top, ba.degree()) + 1):
                term = ba.nth(n + j)
                if term:
                    rhs = rhs + divided_dhat(term, j) * Scalar(sign * (-1) ** (j + n))
            cs2.checked += 1
            if ab.nth(n) != rhs:
                cs2.fail(f"{names[g]}_({n}){names[h]} is not skew-symmetric to {names[h]}_(*){names[g]}",
                         (names[g], names[h]))
    report.results.append(cs2)

    # CS3 (Jacobi) on generator triples.
    cs3 = AxiomResult("CS3")
    n_gen = len(basis)
    brackets = {(g, h): lambda_bracket(table, gens[g], gens[h])
                for g in range(n_gen) for h in range(n_gen)}
    for g, h, k in iproduct(range(n_gen), repeat=3):
        a, b, c = gens[g], gens[h], gens[k]
        sign = basis.sign(g, h)
        bc = brackets[(h, k)]
        ac = brackets[(g, k)]
        ab = brackets[(g, h)]
        a_on_bc = [lambda_bracket(table, a, bc.nth(n)) for n in range(m_max + 1)]
        b_on_ac = [lambda_bracket(table, b, ac.nth(m)) for m in range(m_max + 1)]
        ab_on_c = [lambda_bracket(table, ab.nth(j), c) for j in range(m_max + 1)]
        for m in range(m_max + 1):
            for n in range(m_max + 1):
                lhs = a_on_bc[n].nth(m)
                rhs = b_on_ac[m].nth(n) * Scalar(sign)
                for j in range(m + 1):
                    term = ab_on_c[j].nth(m + n - j)
                    if term:
                        rhs = rhs + term * Scalar(comb(m, j))
                cs3.checked += 1
                if lhs != rhs:
                    cs3.fail(f"Jacobi identity fails for ({names[g]}, {names[h]}, {names[k]}) "
                             f"at m = {m}, n = {n}", (names[g], names[h], names[k]))
    report.results.append(cs3)
    return report
