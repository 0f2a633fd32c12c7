"""Morphisms of ``A (x) R``: the theta family, automorphism checks, kernel, factorization.

A morphism is stored by its generator images and extended by
``phi(D^m g (x) r) = Dhat^m(phi(g)) r``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import permutations

from sympy import QQ, QQ_I
from sympy.polys.matrices import DomainMatrix

from .builders import build_K2_alt, build_N4
from .conformal import ConfElement, LambdaPoly, StructureTable, lambda_bracket
from .diffring import CONST, TRUNC, RingSpec, embed
from .n4 import LTGTriple, Mat2, dagger, decode, encode, generator_triple, sigma
from .scalars import I, ONE, Scalar


class NotAnAutomorphismError(ValueError):
    pass


class ExtensionRequired(ArithmeticError):
    """The factorization needs a square root outside the Gaussian rationals."""

    def __init__(self, value: Scalar):
        super().__init__(f"requires field extension: {value} has no square root in Q(i)")
        self.value = value


@lru_cache(maxsize=None)
def n4_table() -> StructureTable:
    return build_N4()


@lru_cache(maxsize=None)
def k2_alt_table() -> StructureTable:
    return build_K2_alt()


class ConfMorphism:
    """R-linear, Dhat-equivariant map given by its generator images."""

    def __init__(self, table: StructureTable, ring, images):
        self.table = table
        self.ring = ring
        self.images = tuple(images)
        if len(self.images) != len(table.basis):
            raise ValueError("one image per generator is required")
        for g, img in enumerate(self.images):
            if img.basis != table.basis or img.ring != ring:
                raise ValueError(f"image of {table.basis.names[g]} lives in another algebra")
            p = img.parity()
            if p is not None and p != table.basis.parities[g]:
                raise ValueError(f"image of {table.basis.names[g]} has the wrong parity")
        self._dhat: dict[tuple[int, int], ConfElement] = {}

    @classmethod
    def identity(cls, table: StructureTable, ring) -> ConfMorphism:
        return cls(table, ring, [table.gen(g, ring) for g in range(len(table.basis))])

    @classmethod
    def from_names(cls, table: StructureTable, ring, images: dict) -> ConfMorphism:
        """Images given by generator name; unnamed generators are fixed."""
        out = []
        for g, name in enumerate(table.basis.names):
            out.append(images.get(name, table.gen(g, ring)))
        return cls(table, ring, out)

    def image(self, g: int, m: int = 0) -> ConfElement:
        key = (g, m)
        cached = self._dhat.get(key)
        if cached is None:
            cached = self.images[g] if m == 0 else self.image(g, m - 1).dhat()
            self._dhat[key] = cached
        return cached

    def __call__(self, e: ConfElement) -> ConfElement:
        out = ConfElement.zero(self.table.basis, self.ring)
        for (g, m), r in e.terms.items():
            out = out + self.image(g, m) * r
        return out

    def apply_poly(self, p: LambdaPoly) -> LambdaPoly:
        return p.map(self)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ConfMorphism):
            return NotImplemented
        return (self.table == other.table and self.ring == other.ring
                and self.images == other.images)

    __hash__ = None

    def __repr__(self) -> str:
        from .render import format_element
        body = ", ".join(f"{n} -> {format_element(e)}"
                         for n, e in zip(self.table.basis.names, self.images))
        return f"ConfMorphism({body})"

    def embed(self, target: RingSpec) -> ConfMorphism:
        """Push the morphism along the canonical inclusion of its ring."""
        return ConfMorphism(self.table, target,
                            [e.map_coeffs(lambda r: embed(r, target), target) for e in self.images])


def compose(phi: ConfMorphism, psi: ConfMorphism) -> ConfMorphism:
    """``phi o psi``."""
    if phi.table != psi.table or phi.ring != psi.ring:
        raise ValueError("morphisms act on different algebras")
    return ConfMorphism(phi.table, phi.ring, [phi(e) for e in psi.images])


def is_identity(phi: ConfMorphism) -> bool:
    return all(img == phi.table.gen(g, phi.ring) for g, img in enumerate(phi.images))


def is_V_stable(phi: ConfMorphism) -> bool:
    return all(img.is_in_V() for img in phi.images)


# -- automorphism verification ------------------------------------------------

@dataclass
class AutomorphismReport:
    verdict: bool | None
    reason: str
    witness: tuple[str, str] | None = None
    failures: list[tuple[str, str]] = field(default_factory=list)
    inverse: ConfMorphism | None = None

    def __bool__(self) -> bool:
        return self.verdict is True


def bracket_failures(phi: ConfMorphism) -> list[tuple[str, str]]:
    """Ordered generator pairs on which ``phi`` does not preserve the lambda-bracket."""
    table, ring = phi.table, phi.ring
    names = table.basis.names
    gens = [table.gen(g, ring) for g in range(len(names))]
    failures = []
    for g, a in enumerate(gens):
        for h, b in enumerate(gens):
            lhs = phi.apply_poly(lambda_bracket(table, a, b))
            rhs = lambda_bracket(table, phi.images[g], phi.images[h])
            if lhs != rhs:
                failures.append((names[g], names[h]))
    return failures


def _det(rows: list[list]):
    n = len(rows)
    total = None
    for perm in permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = rows[0][perm[0]]
        for i in range(1, n):
            if not term:
                break
            term = term * rows[i][perm[i]]
        if not term:
            continue
        term = -term if inversions % 2 else term
        total = term if total is None else total + term
    return total


def _block_inverse(rows: list[list], ring):
    """Adjugate inverse of a square matrix over ``ring``, or None."""
    n = len(rows)
    det = _det(rows) or ring.zero()
    det_inv = det.inverse_if_unit()
    if det_inv is None:
        return None
    if n == 1:
        return [[det_inv]]
    inv = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[rows[r][c] for c in range(n) if c != j] for r in range(n) if r != i]
            cof = _det(minor) or ring.zero()
            inv[j][i] = (cof if (i + j) % 2 == 0 else -cof) * det_inv
    return inv


def v_stable_inverse(phi: ConfMorphism) -> ConfMorphism | None:
    """Inverse of a V-stable morphism via the adjugate on each parity block."""
    table, ring = phi.table, phi.ring
    basis = table.basis
    inverse_images: list[ConfElement | None] = [None] * len(basis)
    for parity in (0, 1):
        block = [g for g in range(len(basis)) if basis.parities[g] == parity]
        if not block:
            continue
        # column j holds the coordinates of phi(block[j])
        rows = [[phi.images[gj].terms.get((gi, 0), ring.zero()) for gj in block] for gi in block]
        inv = _block_inverse(rows, ring)
        if inv is None:
            return None
        for j, gj in enumerate(block):
            inverse_images[gj] = ConfElement.build(
                basis, ring, [((gi, 0), inv[i][j]) for i, gi in enumerate(block) if inv[i][j]])
    return ConfMorphism(table, ring, inverse_images)


def is_conf_automorphism(phi: ConfMorphism, inverse_witness: ConfMorphism | None = None
                         ) -> AutomorphismReport:
    """Bracket preservation on generator pairs, parity, then invertibility.

    The verdict is None when ``phi`` is not V-stable and no inverse witness is
    supplied: invertibility is then undecided rather than false.
    """
    failures = bracket_failures(phi)
    if failures:
        return AutomorphismReport(False, "lambda-bracket not preserved", failures[0], failures)
    for g, img in enumerate(phi.images):
        try:
            p = img.parity()
        except ValueError:
            p = -1
        if p is not None and p != phi.table.basis.parities[g]:
            name = phi.table.basis.names[g]
            return AutomorphismReport(False, "parity not preserved", (name, name))
    if is_V_stable(phi):
        inv = v_stable_inverse(phi)
        if inv is None:
            return AutomorphismReport(False, "determinant on V (x) R is not a unit")
        return AutomorphismReport(True, "V-stable with unit determinant", inverse=inv)
    if inverse_witness is None:
        return AutomorphismReport(None, "not V-stable and no inverse witness: invertibility undecided")
    if is_identity(compose(phi, inverse_witness)) and is_identity(compose(inverse_witness, phi)):
        return AutomorphismReport(True, "inverse witness verified", inverse=inverse_witness)
    return AutomorphismReport(False, "supplied witness is not a two-sided inverse")


# -- the theta family ---------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SL2Pair:
    """``(A, B)`` with ``det A = det B = 1`` and B constant."""

    A: Mat2
    B: Mat2

    def __post_init__(self):
        if self.A.spec != self.B.spec:
            raise ValueError("A and B must share a ring")
        if self.A.det() != 1:
            raise ValueError(f"det(A) = {self.A.det()} is not 1")
        if self.B.det() != 1:
            raise ValueError(f"det(B) = {self.B.det()} is not 1")
        if not self.B.is_constant():
            raise ValueError("B must have constant entries")

    @property
    def spec(self) -> RingSpec:
        return self.A.spec

    def __mul__(self, other: SL2Pair) -> SL2Pair:
        return SL2Pair(self.A * other.A, self.B * other.B)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SL2Pair):
            return NotImplemented
        return self.A == other.A and self.B == other.B

    __hash__ = None

    def __neg__(self) -> SL2Pair:
        return SL2Pair(-self.A, -self.B)

    def embed(self, target: RingSpec) -> SL2Pair:
        return SL2Pair(self.A.embed(target), self.B.embed(target))


def conjugation_morphism(A: Mat2, B: Mat2, A_inv: Mat2, B_inv: Mat2) -> ConfMorphism:
    """``L(r) -> L(r) + T(r delta(A) A^-1)``, ``T(X) -> T(A X A^-1)``, ``G(M) -> G(A M B^-1)``.

    No determinant or constancy condition is checked here.
    """
    table = n4_table()
    spec = A.spec
    images = []
    for name in table.basis.names:
        t = generator_triple(name, spec)
        if name == "L":
            img = LTGTriple(t.r, A.delta() * A_inv, Mat2.zero(spec))
        else:
            img = LTGTriple(t.r, A * t.X * A_inv, A * t.M * B_inv)
        images.append(encode(table, img))
    return ConfMorphism(table, spec, images)


def theta(p: SL2Pair) -> ConfMorphism:
    """``theta_{A,B}``; inverses are ``-A^dagger`` and ``-B^dagger``."""
    return conjugation_morphism(p.A, p.B, -dagger(p.A), -dagger(p.B))


def theta_unchecked(A: Mat2, B: Mat2) -> ConfMorphism:
    """theta formula for arbitrary invertible A, B (used to probe failures)."""
    A_inv, B_inv = A.inverse(), B.inverse()
    if A_inv is None or B_inv is None:
        raise ValueError("A and B must be invertible")
    return conjugation_morphism(A, B, A_inv, B_inv)


# -- kernel -------------------------------------------------------------------

@dataclass(frozen=True)
class InKernel:
    a: Scalar


@dataclass(frozen=True)
class NotInKernel:
    witness: str


def kernel_witness(p: SL2Pair) -> InKernel | NotInKernel:
    """InKernel(a) exactly when theta(p) is the identity; then A = B = a I."""
    phi = theta(p)
    for g, img in enumerate(phi.images):
        if img != phi.table.gen(g, phi.ring):
            return NotInKernel(phi.table.basis.names[g])
    a = p.A.a
    spec = p.spec
    if p.A != Mat2.identity(spec) * a or p.B != Mat2.identity(spec) * a:
        raise AssertionError("identity theta with a non-scalar pair")
    if a * a != 1 or a.delta():
        raise AssertionError("kernel element is not a constant square root of 1")
    return InKernel(a.constant_term())


# -- factorization over the constants -----------------------------------------

def _to_qqi(c: Scalar):
    return QQ_I(QQ(c.re.numerator, c.re.denominator), QQ(c.im.numerator, c.im.denominator))


def _from_qqi(z) -> Scalar:
    return Scalar(Fraction(int(z.x.numerator), int(z.x.denominator)),
                  Fraction(int(z.y.numerator), int(z.y.denominator)))


def _t_image_matrix(phi: ConfMorphism, i: int) -> Mat2:
    """X^i with phi(T(sigma^i)) = T(X^i)."""
    t = decode(phi.table, phi.images[phi.table.basis.index(f"T{i}")])
    return t.X * Scalar(2)


def factorize(phi: ConfMorphism) -> SL2Pair:
    """Recover (A, B) with theta(A, B) = phi for an automorphism over the constants.

    A solves ``A sigma^i = X^i A``; it is scaled so the first nonzero entry
    (row-major) is the tie-break square root of ``1/det``.  Raises
    :class:`ExtensionRequired` when that root is not in Q(i).
    """
    spec = phi.ring
    if not isinstance(spec, RingSpec) or spec.kind != CONST:
        raise ValueError("factorize works over the constant ring")
    if phi.table != n4_table():
        raise ValueError("factorize needs an N=4 morphism")
    if not is_V_stable(phi) or not is_conf_automorphism(phi):
        raise NotAnAutomorphismError("input is not a V-stable automorphism")
    # unknowns (a, b, c, d): rows of A sigma - X A = 0
    rows = []
    for i in (1, 2, 3):
        S = [[x.constant_term() for x in row] for row in sigma(i, spec).rows()]
        X = [[x.constant_term() for x in row] for row in _t_image_matrix(phi, i).rows()]
        for r in range(2):
            for c in range(2):
                coeffs = [Scalar(0)] * 4
                for k in range(2):
                    coeffs[2 * r + k] = coeffs[2 * r + k] + S[k][c]   # A[r][k] S[k][c]
                    coeffs[2 * k + c] = coeffs[2 * k + c] - X[r][k]   # X[r][k] A[k][c]
                rows.append([_to_qqi(x) for x in coeffs])
    null = DomainMatrix(rows, (len(rows), 4), QQ_I).nullspace().to_list()
    if len(null) != 1:
        raise NotAnAutomorphismError("T-sector is not a conjugation")
    vec = [_from_qqi(z) for z in null[0]]
    lead = next(x for x in vec if x)
    vec = [x / lead for x in vec]
    A0 = Mat2.of(spec, ((vec[0], vec[1]), (vec[2], vec[3])))
    det = A0.det().constant_term()
    s = (ONE / det).sqrt_if_exists()
    if s is None:
        raise ExtensionRequired(ONE / det)
    A = A0 * s
    # phi(G(I)) = G(A B^-1)
    table = phi.table
    MB = decode(table, phi(encode(table, LTGTriple.G(Mat2.identity(spec))))).M
    B_inv = -dagger(A) * MB
    B = -dagger(B_inv)
    if B_inv.det() != 1 or B.delta() != Mat2.zero(spec):
        raise NotAnAutomorphismError("recovered B is not in SL2 of the constants")
    pair = SL2Pair(A, B)
    if theta(pair) != phi:
        raise NotAnAutomorphismError("automorphism is not of the form theta(A, B)")
    return pair


# -- the K2 example -----------------------------------------------------------

def k2_phi() -> ConfMorphism:
    """``1 -> 1 - D(xi d/dxi)``, ``xi -> d/dxi``, ``d/dxi -> xi``, ``xi d/dxi -> -xi d/dxi``."""
    table = k2_alt_table()
    ring = RingSpec.const()
    g = lambda name, c=1, m=0: table.gen(name, ring, c, m)
    return ConfMorphism.from_names(table, ring, {
        "one": g("one") - g("xiddxi", 1, 1),
        "xi": g("ddxi"),
        "ddxi": g("xi"),
        "xiddxi": -g("xiddxi"),
    })


# -- random sampling ----------------------------------------------------------

def random_ring_element(spec: RingSpec, rng: random.Random, terms: int = 2):
    pool = [Scalar(1), Scalar(-1), Scalar(2), I, Scalar(1, 1), Scalar(Fraction(1, 2)), Scalar(-3, 1)]
    if spec.kind == CONST:
        return spec.scalar(rng.choice(pool))
    if spec.kind == TRUNC:
        exps = [Fraction(k) for k in range(spec.param)]
    else:
        D = spec.denominator
        exps = [Fraction(k, D) for k in range(-2 * D, 2 * D + 1)]
    r = spec.zero()
    for _ in range(terms):
        r = r + spec.monomial(rng.choice(pool), rng.choice(exps))
    return r


def random_unit(spec: RingSpec, rng: random.Random):
    pool = [Scalar(1), Scalar(-1), Scalar(2), I, Scalar(1, 1), Scalar(Fraction(1, 3))]
    c = rng.choice(pool)
    if spec.kind == CONST:
        return spec.scalar(c)
    if spec.kind == TRUNC:
        return spec.scalar(c) + random_ring_element(spec, rng, 1) * spec.t()
    D = spec.denominator
    return spec.monomial(c, Fraction(rng.randint(-2 * D, 2 * D), D))


def random_sl2(spec: RingSpec, rng: random.Random, steps: int = 3, constant: bool = False) -> Mat2:
    """Product of elementary and diagonal-unit matrices; constant entries if asked."""
    sample = (lambda: spec.scalar(rng.choice([1, -1, 2, I, Fraction(1, 2)]))) if constant \
        else (lambda: random_ring_element(spec, rng, 1))
    unit = (lambda: spec.scalar(rng.choice([1, -1, 2, I, Fraction(1, 3)]))) if constant \
        else (lambda: random_unit(spec, rng))
    A = Mat2.identity(spec)
    for _ in range(steps):
        kind = rng.randrange(3)
        if kind == 0:
            E = Mat2(spec.one(), sample(), spec.zero(), spec.one())
        elif kind == 1:
            E = Mat2(spec.one(), spec.zero(), sample(), spec.one())
        else:
            u = unit()
            E = Mat2(u, spec.zero(), spec.zero(), u.inverse_if_unit())
        A = A * E
    return A


def random_pair(spec: RingSpec, rng: random.Random) -> SL2Pair:
    return SL2Pair(random_sl2(spec, rng), random_sl2(spec, rng, constant=True))


# -- inverses over the constants ----------------------------------------------

def const_inverse(phi: ConfMorphism) -> ConfMorphism | None:
    """Inverse over the constant ring via the adjugate over k[D], or None.

    Over ``(k, 0)`` a morphism is a k[D]-linear map of a free module; it is
    invertible exactly when each parity block has a nonzero constant
    determinant.
    """
    from sympy.polys.rings import ring as poly_ring

    if not isinstance(phi.ring, RingSpec) or phi.ring.kind != CONST:
        raise ValueError("const_inverse works over the constant ring")
    table, spec = phi.table, phi.ring
    basis = table.basis
    R, x = poly_ring("x", QQ_I)
    images: list[ConfElement | None] = [None] * len(basis)
    for parity in (0, 1):
        block = [g for g in range(len(basis)) if basis.parities[g] == parity]
        if not block:
            continue
        rows = []
        for h in block:
            row = []
            for g in block:
                p = R.zero
                for (hh, m), r in phi.images[g].terms.items():
                    if hh == h:
                        p += x ** m * _to_qqi(r.constant_term())
                row.append(p)
            rows.append(row)
        n = len(block)
        det = _det(rows) or R.zero
        if not det or not det.is_ground:
            return None
        det_inv = _from_qqi(det.LC).inv()
        adj = [[R.zero] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                minor = [[rows[r][c] for c in range(n) if c != j] for r in range(n) if r != i]
                cof = (_det(minor) or R.zero) if n > 1 else R.one
                adj[j][i] = cof if (i + j) % 2 == 0 else -cof
        for j, g in enumerate(block):
            items = []
            for i, h in enumerate(block):
                for (m,), c in adj[i][j].terms():
                    items.append(((h, m), spec.scalar(_from_qqi(c) * det_inv)))
            images[g] = ConfElement.build(basis, spec, items)
    return ConfMorphism(table, spec, images)
