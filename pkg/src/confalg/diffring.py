"""Concrete differential rings (R, delta) with exact coefficients.

Four families are provided:

* ``const``        -- k with the zero derivation
* ``laurent``      -- k[t, 1/t] with d/dt
* ``puiseux:D``    -- k[t^(1/D), t^(-1/D)] with d/dt
* ``trunc:N``      -- k[t]/(t^N) with the Euler derivation t d/dt (not a domain;
  has nilpotents).  Plain d/dt does not preserve the ideal (t^N), so it is
  not a derivation of the quotient; every derivation there is p(t) d/dt with
  p(0) = 0, and t d/dt is the simplest one.  Its constants are exactly k.

Exponents are stored as integer numerators over the spec's denominator
(``D`` for Puiseux rings, 1 otherwise), so ``t^(3/2)`` in ``puiseux:2`` is
key ``3``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .scalars import ONE, ZERO, Scalar

CONST, LAURENT, PUISEUX, TRUNC = "const", "laurent", "puiseux", "trunc"


class RingMismatchError(ValueError):
    pass


class NoCanonicalMapError(ValueError):
    pass


@dataclass(frozen=True)
class RingSpec:
    kind: str
    param: int = 1

    def __post_init__(self):
        if self.kind not in (CONST, LAURENT, PUISEUX, TRUNC):
            raise ValueError(f"unknown ring kind {self.kind!r}")
        if self.param < 1:
            raise ValueError("ring parameter must be a positive integer")
        if self.kind in (CONST, LAURENT) and self.param != 1:
            raise ValueError(f"{self.kind} takes no parameter")

    @classmethod
    def const(cls) -> RingSpec:
        return cls(CONST)

    @classmethod
    def laurent(cls) -> RingSpec:
        return cls(LAURENT)

    @classmethod
    def puiseux(cls, D: int) -> RingSpec:
        return cls(PUISEUX, D)

    @classmethod
    def trunc(cls, N: int) -> RingSpec:
        return cls(TRUNC, N)

    @classmethod
    def parse(cls, text: str) -> RingSpec:
        name, _, arg = text.strip().lower().partition(":")
        if name in (CONST, LAURENT):
            if arg:
                raise ValueError(f"ring {name!r} takes no parameter")
            return cls(name)
        if name in (PUISEUX, TRUNC):
            if not arg.isdigit():
                raise ValueError(f"ring {name!r} needs a positive integer parameter, e.g. {name}:2")
            return cls(name, int(arg))
        raise ValueError(f"unknown ring {text!r}; expected const, laurent, puiseux:D or trunc:N")

    def __str__(self) -> str:
        if self.kind in (PUISEUX, TRUNC):
            return f"{self.kind}:{self.param}"
        return self.kind

    @property
    def denominator(self) -> int:
        return self.param if self.kind == PUISEUX else 1

    def is_domain(self) -> bool:
        return self.kind != TRUNC or self.param == 1

    # -- element factories -------------------------------------------------

    def zero(self) -> RingElement:
        return RingElement(self, {})

    def one(self) -> RingElement:
        return RingElement(self, {0: ONE})

    def scalar(self, c) -> RingElement:
        c = Scalar.coerce(c)
        return RingElement(self, {0: c} if c else {})

    def monomial(self, c, exponent) -> RingElement:
        """``c * t^exponent``; ``exponent`` may be a Fraction for Puiseux rings."""
        c = Scalar.coerce(c)
        key = self._key(Fraction(exponent))
        if not c or (self.kind == TRUNC and key >= self.param):
            return self.zero()
        return RingElement(self, {key: c})

    def t(self) -> RingElement:
        return self.monomial(1, 1)

    def _key(self, q: Fraction) -> int:
        scaled = q * self.denominator
        if scaled.denominator != 1:
            raise ValueError(f"exponent {q} not allowed in {self}")
        key = int(scaled)
        if self.kind == CONST and key != 0:
            raise ValueError("the constant ring has no t")
        if self.kind == TRUNC and key < 0:
            raise ValueError(f"negative exponent {q} not allowed in {self}")
        return key


class RingElement:
    """Sparse element of a :class:`RingSpec` ring; immutable."""

    __slots__ = ("spec", "coeffs")

    def __init__(self, spec: RingSpec, coeffs: dict[int, Scalar]):
        self.spec = spec
        self.coeffs = coeffs

    @classmethod
    def _clean(cls, spec: RingSpec, coeffs: dict[int, Scalar]) -> RingElement:
        if spec.kind == TRUNC:
            return cls(spec, {k: c for k, c in coeffs.items() if c and k < spec.param})
        return cls(spec, {k: c for k, c in coeffs.items() if c})

    def terms(self) -> list[tuple[Fraction, Scalar]]:
        """``(exponent, coefficient)`` pairs, ascending exponent."""
        D = self.spec.denominator
        return [(Fraction(k, D), self.coeffs[k]) for k in sorted(self.coeffs)]

    def constant_term(self) -> Scalar:
        return self.coeffs.get(0, ZERO)

    def as_scalar(self) -> Scalar | None:
        if not self.coeffs:
            return ZERO
        if len(self.coeffs) == 1 and 0 in self.coeffs:
            return self.coeffs[0]
        return None

    def _check(self, other: RingElement) -> None:
        if other.spec != self.spec:
            raise RingMismatchError(f"ring mismatch: {self.spec} vs {other.spec}")

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other) -> RingElement:
        if not isinstance(other, RingElement):
            return self + self.spec.scalar(other)
        self._check(other)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            v = out.get(k)
            if v is None:
                out[k] = c
            else:
                v = v + c
                if v:
                    out[k] = v
                else:
                    del out[k]
        return RingElement(self.spec, out)

    __radd__ = __add__

    def __neg__(self) -> RingElement:
        return RingElement(self.spec, {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other) -> RingElement:
        if not isinstance(other, RingElement):
            other = self.spec.scalar(other)
        return self + (-other)

    def __rsub__(self, other) -> RingElement:
        return self.spec.scalar(other) - self

    def __mul__(self, other) -> RingElement:
        if not isinstance(other, RingElement):
            try:
                c = Scalar.coerce(other)
            except TypeError:
                return NotImplemented
            if not c:
                return RingElement(self.spec, {})
            return RingElement(self.spec, {k: v * c for k, v in self.coeffs.items()})
        self._check(other)
        if not self.coeffs or not other.coeffs:
            return RingElement(self.spec, {})
        bound = self.spec.param if self.spec.kind == TRUNC else None
        out: dict[int, Scalar] = {}
        for k1, c1 in self.coeffs.items():
            for k2, c2 in other.coeffs.items():
                k = k1 + k2
                if bound is not None and k >= bound:
                    continue
                v = out.get(k)
                out[k] = c1 * c2 if v is None else v + c1 * c2
        return RingElement(self.spec, {k: c for k, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> RingElement:
        if n < 0:
            inv = self.inverse_if_unit()
            if inv is None:
                raise ZeroDivisionError(f"{self} is not a unit")
            return inv ** (-n)
        out = self.spec.one()
        for _ in range(n):
            out = out * self
        return out

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, RingElement):
            return self.spec == other.spec and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction, Scalar)):
            s = self.as_scalar()
            return s is not None and s == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.spec, frozenset(self.coeffs.items())))

    # -- derivation --------------------------------------------------------

    def delta(self) -> RingElement:
        if self.spec.kind == CONST or not self.coeffs:
            return RingElement(self.spec, {})
        if self.spec.kind == TRUNC:
            return RingElement(self.spec, {k: c * k for k, c in self.coeffs.items() if k})
        D = self.spec.denominator
        out = {}
        for k, c in self.coeffs.items():
            if k == 0:
                continue
            out[k - D] = c * Scalar(Fraction(k, D))
        return RingElement(self.spec, out)

    def delta_divided(self, j: int) -> RingElement:
        """``delta^j(self) / j!``."""
        if j == 0:
            return self
        r = self
        for _ in range(j):
            r = r.delta()
            if not r:
                return r
        return r * Scalar(Fraction(1, factorial(j)))

    def is_constant(self) -> bool:
        return not self.delta()

    # -- units -------------------------------------------------------------

    def inverse_if_unit(self) -> RingElement | None:
        """Two-sided inverse, or None when ``self`` is not (recognised as) a unit.

        Laurent and Puiseux elements are inverted by a bounded series division
        from the lowest exponent; the attempt gives up once the quotient's span
        exceeds twice the input's span.  Every true unit of these rings is a
        monomial, so the bound never rejects one.
        """
        spec = self.spec
        if not self.coeffs:
            return None
        if spec.kind == CONST:
            return spec.scalar(self.coeffs[0].inv())
        if spec.kind == TRUNC:
            c0 = self.coeffs.get(0)
            if not c0:
                return None
            c0_inv = c0.inv()
            nil = self * c0_inv - spec.one()
            acc = spec.one()
            power = spec.one()
            for _ in range(1, spec.param):
                power = power * (-nil)
                if not power:
                    break
                acc = acc + power
            return acc * c0_inv
        keys = sorted(self.coeffs)
        low = keys[0]
        span = keys[-1] - low
        lead_inv = self.coeffs[low].inv()
        bound = 2 * span
        remainder = spec.one()
        quotient: dict[int, Scalar] = {}
        while remainder:
            rk = min(remainder.coeffs)
            qk = rk - low
            if qk - (-low) > bound:
                return None
            qc = remainder.coeffs[rk] * lead_inv
            quotient[qk] = qc
            remainder = remainder - RingElement(spec, {qk: qc}) * self
        return RingElement(spec, quotient)

    # -- printing ----------------------------------------------------------

    def __repr__(self) -> str:
        return f"RingElement({self.spec}, {str(self)!r})"

    def __str__(self) -> str:
        return format_ring_element(self)


def format_ring_element(r: RingElement, descending: bool = True) -> str:
    if not r.coeffs:
        return "0"
    items = r.terms()
    if descending:
        items = items[::-1]
    parts: list[str] = []
    for q, c in items:
        mono = _fmt_monomial(q)
        if mono == "":
            body = str(c)
        elif c == 1:
            body = mono
        elif c == -1:
            body = "-" + mono
        elif c.is_atomic():
            body = f"{c}*{mono}"
        else:
            body = f"({c})*{mono}"
        parts.append(body)
    out = parts[0]
    for p in parts[1:]:
        if p.startswith("-"):
            out += " - " + p[1:]
        else:
            out += " + " + p
    return out


def _fmt_monomial(q: Fraction) -> str:
    if q == 0:
        return ""
    if q == 1:
        return "t"
    if q.denominator == 1:
        return f"t^{q.numerator}"
    return f"t^({q.numerator}/{q.denominator})"


# -- module-level operations ------------------------------------------------

def ring_add(a: RingElement, b: RingElement) -> RingElement:
    return a + b


def ring_mul(a: RingElement, b: RingElement) -> RingElement:
    return a * b


def ring_neg(a: RingElement) -> RingElement:
    return -a


def delta(r: RingElement) -> RingElement:
    return r.delta()


def delta_divided(r: RingElement, j: int) -> RingElement:
    return r.delta_divided(j)


def is_constant(r: RingElement) -> bool:
    return r.is_constant()


def inverse_if_unit(r: RingElement) -> RingElement | None:
    return r.inverse_if_unit()


def can_embed(source: RingSpec, target: RingSpec) -> bool:
    if source == target or source.kind == CONST:
        return True
    return source.kind == LAURENT and target.kind == PUISEUX


def embed(r: RingElement, target: RingSpec) -> RingElement:
    """Image of ``r`` under the canonical derivation-compatible inclusion."""
    source = r.spec
    if not can_embed(source, target):
        raise NoCanonicalMapError(f"no canonical map {source} -> {target}")
    if source == target:
        return r
    if source.kind == CONST:
        return target.scalar(r.constant_term())
    D = target.param
    return RingElement(target, {k * D: c for k, c in r.coeffs.items()})


def square_roots_of_one(spec: RingSpec) -> list[RingElement]:
    """All r with r^2 = 1, solved coefficient by coefficient.

    Only defined for ``trunc:N``: r_0 = +-1 and each higher coefficient
    satisfies ``2 r_0 r_j + sum_{0<i<j} r_i r_{j-i} = 0``, so it is forced.
    """
    if spec.kind != TRUNC:
        raise ValueError("square roots of 1 are enumerated only for truncated rings")
    roots = []
    for r0 in (ONE, -ONE):
        coeffs = [r0]
        for j in range(1, spec.param):
            acc = ZERO
            for i in range(1, j):
                acc = acc + coeffs[i] * coeffs[j - i]
            coeffs.append(-acc / (2 * r0))
        roots.append(RingElement._clean(spec, dict(enumerate(coeffs))))
    return roots
