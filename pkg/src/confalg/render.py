"""Text rendering of elements and lambda-brackets.

Terms are grouped by (generator, power of t).  Groups come in generator
order and, within a generator, by descending t-exponent.  Inside a group the
coefficient is a polynomial in ``lam`` and ``D``, listed by ascending
``lam`` power and then ascending ``D`` power, e.g.
``(D + 2*lam) L⊗t + 2 L⊗1``.
"""

from __future__ import annotations

from fractions import Fraction

from .diffring import CONST, RingElement
from .scalars import Scalar

TENSOR = "⊗"
ASCII_TENSOR = "(x)"


def _power(sym: str, k: int) -> str:
    return sym if k == 1 else f"{sym}^{k}"


def _t_text(q: Fraction) -> str:
    if q == 0:
        return "1"
    if q == 1:
        return "t"
    if q.denominator == 1:
        return f"t^{q.numerator}"
    return f"t^({q.numerator}/{q.denominator})"


def _monomial(c: Scalar, lam: int, dpow: int) -> str:
    factors = ([_power("D", dpow)] if dpow else []) + ([_power("lam", lam)] if lam else [])
    body = "*".join(factors)
    if not body:
        return str(c)
    if c == 1:
        return body
    if c == -1:
        return "-" + body
    if c.is_atomic():
        return f"{c}*{body}"
    return f"({c})*{body}"


def _join(parts: list[str]) -> str:
    out = parts[0]
    for p in parts[1:]:
        out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
    return out


def _render(entries, basis, ring, ascii_mode: bool) -> str:
    """``entries``: iterable of (lam power, dpow, generator, ring coefficient)."""
    tensor = ASCII_TENSOR if ascii_mode else TENSOR
    groups: dict[tuple, dict[tuple[int, int], Scalar]] = {}
    opaque: list[str] = []
    for lam, dpow, g, r in entries:
        if isinstance(r, RingElement):
            for q, c in r.terms():
                bucket = groups.setdefault((g, -q), {})
                bucket[(lam, dpow)] = bucket.get((lam, dpow), Scalar(0)) + c
        else:
            mono = _monomial(Scalar(1), lam, dpow)
            prefix = "" if mono == "1" else f"{mono} "
            opaque.append(f"{prefix}{basis.names[g]}{tensor}({r})")
    parts = []
    const = getattr(ring, "kind", None) == CONST
    for (g, neg_q) in sorted(groups):
        poly = {k: v for k, v in groups[(g, neg_q)].items() if v}
        if not poly:
            continue
        monos = [_monomial(c, lam, dpow) for (lam, dpow), c in sorted(poly.items())]
        name = basis.names[g]
        if not const:
            name += tensor + _t_text(-neg_q)
        if len(monos) > 1:
            parts.append(f"({_join(monos)}) {name}")
        elif monos[0] == "1":
            parts.append(name)
        elif monos[0] == "-1":
            parts.append("-" + name)
        else:
            parts.append(f"{monos[0]} {name}")
    parts.extend(opaque)
    return _join(parts) if parts else "0"


def format_element(e, ascii_mode: bool = False) -> str:
    entries = ((0, m, g, r) for (g, m), r in e.terms.items())
    return _render(entries, e.basis, e.ring, ascii_mode)


def format_lambda_poly(p, ascii_mode: bool = False) -> str:
    entries = ((n, m, g, r) for n, c in p.coeffs.items() for (g, m), r in c.terms.items())
    return _render(entries, p.basis, p.ring, ascii_mode)
