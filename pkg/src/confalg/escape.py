"""Bounded search for automorphisms that leave V (x) R.

Generator images are taken as ``sum Dhat^m (h (x) u)`` with unknown
coefficients u and m up to ``dmax``; such an image is V-stable exactly when
every u with m > 0 vanishes.  Bracket preservation on generator pairs gives polynomial
equations in the unknowns.  Over a non-constant ring the derivatives of an
unknown are replaced by fresh "jet" variables; a solution over an integral
domain R is then a point over Frac(R), so an inconsistent relaxed system
rules out solutions in R.

The search runs in stages.  Each stage takes a set S of generators whose
images are solved for jointly, using the equations from a chosen set of
generator pairs.  A coefficient is *forced to vanish* when it lies in the
radical of the stage ideal, tested by adding ``c z - 1`` and computing a
Groebner basis.  Once the images of S are known to stay inside the span of S,
the determinant of the induced map on ``A / Dhat A`` restricted to S must be a
unit; that is added as ``det * w - 1``.

If every D-power coefficient is forced to vanish the result is "none".  Over
the constant ring, if some D-power coefficient survives, a concrete solution
is extracted and verified with the engine; it is returned as a witness.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from math import factorial

from sympy import QQ, QQ_I
from sympy.polys.groebnertools import groebner
from sympy.polys.rings import ring as poly_ring

from .conformal import ConfElement, StructureTable, lambda_bracket
from .diffring import CONST, RingSpec
from .scalars import Scalar


class JetOverflowError(RuntimeError):
    pass


def to_qqi(c: Scalar):
    return QQ_I(QQ(c.re.numerator, c.re.denominator), QQ(c.im.numerator, c.im.denominator))


def from_qqi(z) -> Scalar:
    return Scalar(Fraction(int(z.x.numerator), int(z.x.denominator)),
                  Fraction(int(z.y.numerator), int(z.y.denominator)))


class SymRing:
    """Polynomials over Q(i) in unknowns and their jets, with a formal derivation.

    With ``jets = 0`` the derivation is zero (the constant ring).  Otherwise
    unknown ``u`` has jet variables ``u_0 = u, u_1 = delta(u), ..., u_jets``
    and differentiating the top jet raises :class:`JetOverflowError`.
    """

    def __init__(self, unknowns: list[str], jets: int, aux: list[str] = ()):
        names = [f"{u}_{j}" for u in unknowns for j in range(jets + 1)] + list(aux)
        self.ring, *gens = poly_ring(",".join(names), QQ_I)
        self.gens = dict(zip(names, gens))
        self.jets = jets
        self._next: dict[int, object] = {}
        self._top: set[int] = set()
        self.jet_indices: set[int] = set()
        for u in unknowns:
            for j in range(jets + 1):
                idx = names.index(f"{u}_{j}")
                if j:
                    self.jet_indices.add(idx)
                if j < jets:
                    self._next[idx] = self.gens[f"{u}_{j + 1}"]
                else:
                    self._top.add(idx)

    def var(self, name: str, jet: int = 0) -> SymElem:
        return SymElem(self, self.gens[f"{name}_{jet}"])

    def aux(self, name: str):
        return self.gens[name]

    def zero(self) -> SymElem:
        return SymElem(self, self.ring.zero)

    def one(self) -> SymElem:
        return SymElem(self, self.ring.one)

    def scalar(self, c) -> SymElem:
        return SymElem(self, self.ring.one * to_qqi(Scalar.coerce(c)))

    def derive(self, p):
        if self.jets == 0 or p.is_ground:
            return self.ring.zero
        out = self.ring.zero
        gens = self.ring.gens
        for idx, deg in enumerate(p.degrees()):
            if not deg:
                continue
            dp = p.diff(gens[idx])
            if idx in self._top:
                raise JetOverflowError("jet order too small for this computation")
            if idx in self._next:
                out += dp * self._next[idx]
        return out

    def __repr__(self) -> str:
        return f"SymRing({self.ring.ngens} variables, jets={self.jets})"


class SymElem:
    __slots__ = ("sr", "p")

    def __init__(self, sr: SymRing, p):
        self.sr = sr
        self.p = p

    def _lift(self, other):
        if isinstance(other, SymElem):
            return other.p
        return self.sr.ring.one * to_qqi(Scalar.coerce(other))

    def __add__(self, other) -> SymElem:
        return SymElem(self.sr, self.p + self._lift(other))

    __radd__ = __add__

    def __sub__(self, other) -> SymElem:
        return SymElem(self.sr, self.p - self._lift(other))

    def __neg__(self) -> SymElem:
        return SymElem(self.sr, -self.p)

    def __mul__(self, other) -> SymElem:
        return SymElem(self.sr, self.p * self._lift(other))

    __rmul__ = __mul__

    def __bool__(self) -> bool:
        return bool(self.p)

    def __eq__(self, other) -> bool:
        if isinstance(other, SymElem):
            return self.p == other.p
        return NotImplemented

    __hash__ = None

    def delta(self) -> SymElem:
        return SymElem(self.sr, self.sr.derive(self.p))

    def delta_divided(self, j: int) -> SymElem:
        out = self
        for _ in range(j):
            out = out.delta()
        return out * Scalar(Fraction(1, factorial(j)))

    def __repr__(self) -> str:
        return str(self.p)


def compact(polys: list):
    """Move polynomials into a ring over just the variables they use."""
    used = set()
    for p in polys:
        for idx, deg in enumerate(p.degrees()):
            if deg:
                used.add(idx)
    symbols = [polys[0].ring.symbols[i] for i in sorted(used)] or polys[0].ring.symbols[:1]
    sub = poly_ring(symbols, QQ_I)[0]
    return sub, [p.set_ring(sub) for p in polys]


def dhat_coordinates(e: ConfElement) -> dict:
    """Coefficients of ``e`` in the basis ``Dhat^m (h (x) 1)`` (coefficients on the right)."""
    out = {}
    while e:
        top = max(m for (_, m) in e.terms)
        for (h, m), r in list(e.terms.items()):
            if m == top:
                out[(h, m)] = r
                e = e - ConfElement.generator(e.basis, e.ring, h, r).dhat_power(m)
    return out


def uses_jets(sr: SymRing, p) -> bool:
    return any(deg and idx in sr.jet_indices for idx, deg in enumerate(p.degrees()))


# -- the search ---------------------------------------------------------------

@dataclass
class Stage:
    generators: tuple[str, ...]
    pairs: tuple[tuple[str, str], ...]


@dataclass
class StageResult:
    generators: tuple[str, ...]
    closed: bool
    forced: list[str]
    surviving: list[str]


@dataclass
class EscapeReport:
    table: str
    ring: str
    dmax: int
    escape: bool
    witness: object = None
    stages: list[StageResult] = field(default_factory=list)

    def summary(self, ascii_mode: bool = False) -> str:
        lines = [f"escape search on {self.table} over {self.ring}, D-powers <= {self.dmax}"]
        for st in self.stages:
            lines.append(f"  stage {', '.join(st.generators)}: "
                         f"{len(st.forced)} D-coefficients forced to vanish, "
                         f"{len(st.surviving)} free"
                         + ("" if st.closed else " (images not closed; no determinant condition)"))
        if self.escape:
            from .render import format_element
            lines.append("result: escape found")
            if self.witness is not None:
                for name, img in zip(self.witness.table.basis.names, self.witness.images):
                    lines.append(f"  {name} -> {format_element(img, ascii_mode)}")
        else:
            lines.append("result: none")
        return "\n".join(lines)


def default_stages(table: StructureTable) -> list[Stage]:
    """Stages for the built-in algebras.

    For the N=4 algebra the order is T-sector, then L with T, then each odd
    generator against L.  Otherwise: the even block, then each odd generator
    together with the even block.
    """
    names = table.basis.names
    even = tuple(n for n in names if table.basis.parities[names.index(n)] == 0)
    odd = tuple(n for n in names if table.basis.parities[names.index(n)] == 1)
    square = lambda S: tuple((a, b) for a in S for b in S)
    if set(names) == {"L", "T1", "T2", "T3", "G1", "G2", "Gb1", "Gb2"}:
        T = ("T1", "T2", "T3")
        stages = [Stage(T, square(T)), Stage(("L",) + T, square(("L",) + T))]
        for g in odd:
            stages.append(Stage(("L", g), (("L", "L"), ("L", g), (g, "L"))))
        return stages
    stages = [Stage(even, square(even))]
    for g in odd:
        S = even + (g,)
        stages.append(Stage(S, square(S)))
    return stages


class _Search:
    def __init__(self, table: StructureTable, spec: RingSpec, dmax: int, jets: int | None):
        self.table = table
        self.spec = spec
        self.dmax = dmax
        self.const = spec.kind == CONST
        basis = table.basis
        self.keys: dict[tuple[int, int, int], str] = {}
        for g in range(len(basis)):
            for h in range(len(basis)):
                if basis.parities[g] != basis.parities[h]:
                    continue
                for m in range(dmax + 1):
                    self.keys[(g, h, m)] = f"c_{basis.names[g]}_{basis.names[h]}_{m}"
        if jets is None:
            jets = 0 if self.const else table.max_support() + 2 * dmax + 2
        self.sr = SymRing(list(self.keys.values()), jets, aux=["w", "z", "w0", "w1"])
        self.zero_vars: set[str] = set()
        self._dvars = {name for (g, h, m), name in self.keys.items() if m > 0}

    def image(self, g: int) -> ConfElement:
        """``sum Dhat^m (h (x) u)`` over the live unknowns u of generator g."""
        basis = self.table.basis
        out = ConfElement.zero(basis, self.sr)
        for (gg, h, m), name in self.keys.items():
            if gg == g and name not in self.zero_vars:
                term = ConfElement.generator(basis, self.sr, h, self.sr.var(name))
                out = out + term.dhat_power(m)
        return out

    def morphism_apply(self, images: dict[int, ConfElement], e: ConfElement) -> ConfElement:
        out = ConfElement.zero(self.table.basis, self.sr)
        for (g, m), r in e.terms.items():
            img = images[g]
            for _ in range(m):
                img = img.dhat()
            out = out + img * r
        return out

    def equations(self, gens: tuple[int, ...], pairs) -> list:
        basis = self.table.basis
        images = {g: self.image(g) for g in gens}
        eqs = []
        for a, b in pairs:
            a, b = basis.index(a), basis.index(b)
            ga = ConfElement.generator(basis, self.sr, a)
            gb = ConfElement.generator(basis, self.sr, b)
            lhs = lambda_bracket(self.table, ga, gb).map(lambda e: self.morphism_apply(images, e))
            rhs = lambda_bracket(self.table, images[a], images[b])
            diff = lhs - rhs
            for c in diff.coeffs.values():
                eqs.extend(r.p for r in dhat_coordinates(c).values())
        if not self.const:
            # keep the jet-free equations only: a sound relaxation
            eqs = [e for e in eqs if not uses_jets(self.sr, e)]
        return eqs

    def quotient_det(self, gens: tuple[int, ...]):
        """det of the induced map on ``A / Dhat A`` restricted to ``gens``.

        Modulo Dhat only the m = 0 unknowns survive.
        """
        n = len(gens)
        zero = self.sr.ring.zero
        mat = [[zero if self.keys[(g, h, 0)] in self.zero_vars
                else self.sr.gens[f"{self.keys[(g, h, 0)]}_0"] for g in gens] for h in gens]
        det = zero
        for perm in permutations(range(n)):
            sign = (-1) ** sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
            term = self.sr.ring.one * sign
            for i in range(n):
                term *= mat[i][perm[i]]
                if not term:
                    break
            det += term
        return det

    def forced_zero(self, eqs: list, name: str) -> bool:
        z = self.sr.aux("z")
        polys = eqs + [self.sr.gens[f"{name}_0"] * z - 1]
        sub, polys = compact(polys)
        basis = groebner(polys, sub)
        return len(basis) == 1 and basis[0].is_ground and bool(basis[0])

    def run_stage(self, stage: Stage) -> StageResult:
        """Force coefficients to vanish until nothing changes.

        Candidates are D-power coefficients of the stage images and the
        coefficients on generators outside the stage.  Once the latter are all
        gone the determinant condition is added.
        """
        basis = self.table.basis
        gens = tuple(basis.index(g) for g in stage.generators)
        live = lambda: {key: name for key, name in self.keys.items()
                        if key[0] in gens and name not in self.zero_vars}
        closed = False
        forced: list[str] = []
        while True:
            eqs = [e for e in self.equations(gens, stage.pairs) if e]
            if closed:
                eqs.append(self.quotient_det(gens) * self.sr.aux("w") - 1)
            candidates = [name for (g, h, m), name in live().items() if m > 0 or h not in gens]
            newly = [name for name in candidates if self.forced_zero(eqs, name)]
            if newly:
                self.zero_vars.update(newly)
                forced.extend(n for n in newly if n in self._dvars)
                continue
            if not closed and not any(h not in gens for (g, h, m) in live()):
                closed = True
                continue
            break
        surviving = [name for (g, h, m), name in live().items() if m > 0]
        return StageResult(stage.generators, closed, forced, surviving)


def bounded_escape_search(table: StructureTable, spec: RingSpec, dmax: int = 1,
                          stages: list[Stage] | None = None, jets: int | None = None
                          ) -> EscapeReport:
    """Look for automorphisms with images of D-power <= dmax that are not V-stable."""
    if not spec.is_domain():
        raise ValueError("the escape search needs an integral domain")
    search = _Search(table, spec, dmax, jets)
    report = EscapeReport(table.name, str(spec), dmax, escape=False)
    for stage in stages or default_stages(table):
        result = search.run_stage(stage)
        report.stages.append(result)
        if result.surviving:
            report.escape = True
            if search.const:
                report.witness = find_witness(table, dmax, result.surviving[0])
            return report
    return report


def _consistent(polys: list) -> bool:
    if not polys:
        return True
    sub, polys = compact(polys)
    basis = groebner(polys, sub)
    return not (len(basis) == 1 and basis[0].is_ground and bool(basis[0]))


_POOL = [Fraction(0), Fraction(1), Fraction(-1), Fraction(2), Fraction(-2), Fraction(1, 2),
         Scalar(0, 1), Scalar(0, -1)]


def find_witness(table: StructureTable, dmax: int, escaping: str | None = None):
    """A verified non-V-stable automorphism over the constants, or None.

    All generator pairs are imposed together with a unit determinant on each
    parity block; the unknowns are then fixed one at a time from a small pool
    of Gaussian rationals, keeping the system consistent.  ``escaping`` names
    a D-power coefficient to keep nonzero.
    """
    from .morphisms import ConfMorphism, const_inverse, is_conf_automorphism, is_V_stable

    spec = RingSpec.const()
    search = _Search(table, spec, dmax, jets=0)
    basis = table.basis
    gens = tuple(range(len(basis)))
    pairs = [(a, b) for a in basis.names for b in basis.names]
    eqs = [e for e in search.equations(gens, pairs) if e]
    for parity, aux in ((0, "w0"), (1, "w1")):
        block = tuple(g for g in gens if basis.parities[g] == parity)
        if block:
            eqs.append(search.quotient_det(block) * search.sr.aux(aux) - 1)
    dvars = sorted(search._dvars)
    targets = [escaping] if escaping else dvars
    for target in targets:
        system = eqs + [search.sr.gens[f"{target}_0"] * search.sr.aux("z") - 1]
        if not _consistent(system):
            continue
        values: dict[str, Scalar] = {}
        order = [target] + [n for n in search.keys.values() if n != target]
        for name in order:
            var = search.sr.gens[f"{name}_0"]
            for c in _POOL:
                c = Scalar.coerce(c)
                trial = system + [var - to_qqi(c)]
                if _consistent(trial):
                    system, values[name] = trial, c
                    break
            else:
                break
        if len(values) != len(order):
            continue
        images = []
        for g in gens:
            img = ConfElement.zero(basis, spec)
            for (gg, h, m), name in search.keys.items():
                if gg == g and values[name]:
                    img = img + ConfElement.generator(basis, spec, h, spec.scalar(values[name])).dhat_power(m)
            images.append(img)
        phi = ConfMorphism(table, spec, images)
        inverse = const_inverse(phi)
        if inverse is None or is_V_stable(phi):
            continue
        if is_conf_automorphism(phi, inverse).verdict:
            return phi
    return None
