"""Text formats: algebra definition files and ring, element and matrix literals.

Algebra files are line oriented::

    algebra vir
    generator L even      # comments start with '#'
    prod L L 0 = D L
    prod L L 1 = 2 L

A product right-hand side is ``0`` or a signed sum of ``[scalar] [D^m] gen``
terms.  Non-atomic scalars are parenthesized, e.g. ``(1/2 + i) G1``.  Pairs
declared in neither orientation are zero; a pair declared in one orientation
only is completed by skew-symmetry.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .conformal import EVEN, ODD, ConfElement, GeneratorBasis, StructureTable, TableError
from .diffring import RingElement, RingSpec
from .scalars import Scalar, ScalarParseError, parse_scalar

TENSOR_SIGNS = ("⊗", "(x)")
RESERVED = {"D", "lam", "t", "i", "algebra", "generator", "prod"}
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")


class DslError(ValueError):
    """Parse error with a 1-based line and column."""

    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


def _split_signed(text: str, base: int = 0) -> list[tuple[int, int, str]]:
    """Split on top-level ``+``/``-``; returns ``(sign, column, body)``.

    Signs inside parentheses or brackets, or right after ``^``, do not split.
    Consecutive signs combine.
    """
    out = []
    depth = 0
    sign, start = 1, 0
    for i, ch in enumerate(text):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
            if depth < 0:
                raise DslError(f"unbalanced {ch!r}", 1, base + i + 1)
        elif ch in "+-" and depth == 0 and not text[:i].rstrip().endswith("^"):
            body = text[start:i]
            if body.strip():
                out.append((sign, base + start, body))
                sign = 1
            if ch == "-":
                sign = -sign
            start = i + 1
    if depth:
        raise DslError("unbalanced parentheses", 1, base + len(text))
    body = text[start:]
    if body.strip():
        out.append((sign, base + start, body))
    elif text.strip():
        raise DslError("dangling sign", 1, base + len(text))
    return out


def _lead_ws(s: str) -> int:
    return len(s) - len(s.lstrip())


# -- ring literals ------------------------------------------------------------

_T_POWER = re.compile(r"t(?:\s*\^\s*(\(\s*-?\d+(?:\s*/\s*\d+)?\s*\)|-?\d+(?:/\d+)?))?$")


def _exponent(text: str | None) -> Fraction:
    if text is None:
        return Fraction(1)
    return Fraction(text.strip("() ").replace(" ", ""))


def parse_ring_element(text: str, spec: RingSpec, base: int = 0) -> RingElement:
    """``2*t^2 + t^(1/2)``, ``t^-1``, ``(1+i)*t``, ``-3``; columns offset by ``base``."""
    if not text.strip():
        raise DslError("empty ring element", 1, base + 1)
    stripped = text.strip()
    if stripped.startswith("(") and _closing(stripped, 0) == len(stripped) - 1:
        inner = text.index("(") + 1
        return parse_ring_element(stripped[1:-1], spec, base + inner)
    total = spec.zero()
    for sign, col, body in _split_signed(text, base):
        col += _lead_ws(body)
        body = body.strip()
        scalar_part, mono = body, None
        m = re.search(r"(?:^|\*|\s)(t(?:\s*\^.*)?)$", body)
        if m:
            mono = m.group(1)
            scalar_part = body[:m.start(1)].rstrip().rstrip("*").rstrip()
        if mono is not None:
            pm = _T_POWER.match(mono)
            if pm is None:
                raise DslError(f"malformed power of t: {mono!r}", 1, col + m.start(1) + 1)
            q = _exponent(pm.group(1))
        else:
            q = Fraction(0)
        c = Scalar(1)
        if scalar_part:
            try:
                c = parse_scalar(scalar_part)
            except ScalarParseError as err:
                raise DslError(f"malformed coefficient {scalar_part!r}", 1, col + err.pos + 1) from None
        try:
            total = total + spec.monomial(c * sign, q)
        except ValueError as err:
            raise DslError(str(err), 1, col + 1) from None
    return total


def _closing(text: str, start: int) -> int:
    depth = 0
    for i in range(start, len(text)):
        if text[i] == "(":
            depth += 1
        elif text[i] == ")":
            depth -= 1
            if depth == 0:
                return i
    return -1


def parse_matrix(text: str, spec: RingSpec):
    """``[[a,b],[c,d]]`` with ring literal entries, as a :class:`~confalg.n4.Mat2`."""
    from .n4 import Mat2
    src = text.strip()
    if not (src.startswith("[[") and src.endswith("]]")):
        raise DslError("matrix must look like [[a,b],[c,d]]", 1, 1)
    rows = _split_top(src[1:-1], ",")
    if len(rows) != 2:
        raise DslError("matrix must have two rows", 1, 1)
    entries = []
    for row_text, col in rows:
        row_text = row_text.strip()
        if not (row_text.startswith("[") and row_text.endswith("]")):
            raise DslError("each row must be bracketed", 1, col + 2)
        cells = _split_top(row_text[1:-1], ",")
        if len(cells) != 2:
            raise DslError("each row must have two entries", 1, col + 2)
        for cell, ccol in cells:
            entries.append(parse_ring_element(cell, spec, col + ccol + 3))
    return Mat2(*entries)


def _split_top(text: str, sep: str) -> list[tuple[str, int]]:
    out, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif ch == sep and depth == 0:
            out.append((text[start:i], start))
            start = i + 1
    out.append((text[start:], start))
    return out


# -- generator terms ----------------------------------------------------------

_D_POWER = re.compile(r"D(?:\s*\^\s*(\d+))?$")


def _parse_term(body: str, col: int, basis: GeneratorBasis, line: int):
    """``[scalar] [D^m] gen [⊗ ring]`` -> (scalar, m, generator index, ring text, ring column)."""
    ring_text, ring_col = None, 0
    for sign in TENSOR_SIGNS:
        k = body.find(sign)
        if k >= 0:
            ring_text, ring_col = body[k + len(sign):], col + k + len(sign)
            body = body[:k]
            break
    stripped = body.rstrip()
    m = re.search(r"[A-Za-z_][A-Za-z0-9_]*$", stripped)
    if m is None:
        raise DslError("expected a generator name", line, col + len(stripped) + 1)
    name = m.group(0)
    gcol = col + m.start()
    rest = stripped[:m.start()].rstrip().rstrip("*").rstrip()
    dpow = 0
    dm = re.search(r"(?:^|\*|\s)(D(?:\s*\^\s*\d+)?)$", rest)
    if dm is not None:
        dpow = int(_D_POWER.match(dm.group(1)).group(1) or 1)
        rest = rest[:dm.start(1)].rstrip().rstrip("*").rstrip()
    if name in ("D", "i", "t"):
        raise DslError(f"expected a generator name, found {name!r}", line, gcol + 1)
    try:
        g = basis.index(name)
    except KeyError:
        raise DslError(f"unknown generator {name!r}", line, gcol + 1) from None
    c = Scalar(1)
    if rest:
        try:
            c = parse_scalar(rest)
        except ScalarParseError as err:
            raise DslError(f"malformed coefficient {rest!r}", line,
                           col + _lead_ws(body) + err.pos + 1) from None
    return c, dpow, g, ring_text, ring_col


def parse_element(text: str, basis: GeneratorBasis, spec: RingSpec) -> ConfElement:
    """``L ⊗ t``, ``2 D T1 (x) (t + 1)``, ``G1 - i G2``; a missing tensor factor means 1."""
    if not text.strip():
        raise DslError("empty element", 1, 1)
    out = ConfElement.zero(basis, spec)
    for sign, col, body in _split_signed(text):
        col += _lead_ws(body)
        c, dpow, g, ring_text, ring_col = _parse_term(body.strip(), col, basis, 1)
        r = spec.one() if ring_text is None else parse_ring_element(ring_text, spec, ring_col)
        out = out + ConfElement.generator(basis, spec, g, r * spec.scalar(c * sign), dpow)
    return out


# -- algebra files ------------------------------------------------------------

def parse_algebra(text: str) -> StructureTable:
    name = "algebra"
    names: list[str] = []
    parities: list[int] = []
    raw: list[tuple[int, str, str, int, str, int]] = []
    for lineno, full in enumerate(text.splitlines(), start=1):
        line = full.split("#", 1)[0]
        if not line.strip():
            continue
        words = line.split()
        head = words[0]
        col_of = lambda k: _word_column(line, k)
        if head == "algebra":
            if len(words) != 2:
                raise DslError("expected 'algebra <name>'", lineno, col_of(min(len(words), 2) - 1))
            name = words[1]
        elif head == "generator":
            if len(words) != 3:
                raise DslError("expected 'generator <name> <even|odd>'", lineno, col_of(0))
            gname, par = words[1], words[2]
            if not _NAME.match(gname) or gname in RESERVED:
                raise DslError(f"invalid generator name {gname!r}", lineno, col_of(1))
            if gname in names:
                raise DslError(f"generator {gname!r} declared twice", lineno, col_of(1))
            if par not in ("even", "odd"):
                raise DslError(f"parity must be 'even' or 'odd', not {par!r}", lineno, col_of(2))
            names.append(gname)
            parities.append(EVEN if par == "even" else ODD)
        elif head == "prod":
            if "=" not in line:
                raise DslError("expected '=' in product declaration", lineno, len(line.rstrip()) + 1)
            lhs, rhs = line.split("=", 1)
            lw = lhs.split()
            if len(lw) != 4:
                raise DslError("expected 'prod <g1> <g2> <n> = ...'", lineno, col_of(0))
            for k in (1, 2):
                if lw[k] not in names:
                    raise DslError(f"unknown generator {lw[k]!r}", lineno, col_of(k))
            if not lw[3].isdigit():
                raise DslError(f"product index must be a non-negative integer, not {lw[3]!r}",
                               lineno, col_of(3))
            raw.append((lineno, lw[1], lw[2], int(lw[3]), rhs, len(lhs) + 1))
        else:
            raise DslError(f"unknown directive {head!r}", lineno, col_of(0))
    try:
        basis = GeneratorBasis(tuple(names), tuple(parities))
    except TableError as err:
        raise DslError(str(err), 1, 1) from None
    products: dict[tuple[str, str], dict[int, list]] = {}
    for lineno, a, b, n, rhs, base in raw:
        entry = products.setdefault((a, b), {})
        items = entry.setdefault(n, [])
        if rhs.strip() == "0":
            continue
        try:
            parts = _split_signed(rhs, base)
        except DslError as err:
            raise DslError(err.message, lineno, err.column) from None
        if not parts:
            raise DslError("missing right-hand side", lineno, base + 1)
        for sign, col, body in parts:
            col += _lead_ws(body)
            c, dpow, g, ring_text, _ = _parse_term(body.strip(), col, basis, lineno)
            if ring_text is not None:
                raise DslError("table entries take no tensor factor", lineno, col + 1)
            want = (basis.parities[basis.index(a)] + basis.parities[basis.index(b)]) % 2
            if basis.parities[g] != want:
                raise DslError(f"{names[g]} is {'odd' if basis.parities[g] else 'even'} but "
                               f"{a}_({n}){b} must be {'odd' if want else 'even'}",
                               lineno, col + body.strip().rfind(names[g]) + 1)
            items.append((dpow, g, c * sign))
    declared = set(products)
    for a in names:
        for b in names:
            if (a, b) not in declared and (b, a) not in declared:
                products[(a, b)] = {}
    try:
        return StructureTable(basis, products, name)
    except TableError as err:
        line = raw[-1][0] if raw else 1
        raise DslError(str(err), line, 1) from None


def _word_column(line: str, k: int) -> int:
    pos = 0
    for idx, m in enumerate(re.finditer(r"\S+", line)):
        pos = m.start()
        if idx == k:
            break
    return pos + 1


def _format_term(c: Scalar, dpow: int, gen: str) -> tuple[int, str]:
    """Sign and body of ``c D^m gen`` as written in algebra files."""
    sign = 1
    if c.is_atomic() and str(c).startswith("-"):
        sign, c = -1, -c
    parts = []
    if c != 1:
        parts.append(str(c) if c.is_atomic() else f"({c})")
    if dpow:
        parts.append("D" if dpow == 1 else f"D^{dpow}")
    parts.append(gen)
    return sign, " ".join(parts)


def print_algebra(table: StructureTable) -> str:
    names = table.basis.names
    lines = [f"algebra {table.name}"]
    for g, p in zip(names, table.basis.parities):
        lines.append(f"generator {g} {'odd' if p else 'even'}")
    for (i, j) in sorted(table.products):
        entry = table.products[(i, j)]
        if not entry:
            if table.products.get((j, i)) == {}:
                continue  # restored as zero on parsing
            lines.append(f"prod {names[i]} {names[j]} 0 = 0")
            continue
        for n in sorted(entry):
            rhs = ""
            for k, (m, g, c) in enumerate(entry[n]):
                sign, body = _format_term(c, m, names[g])
                if k == 0:
                    rhs = ("-" if sign < 0 else "") + body
                else:
                    rhs += (" - " if sign < 0 else " + ") + body
            lines.append(f"prod {names[i]} {names[j]} {n} = {rhs}")
    return "\n".join(lines) + "\n"
