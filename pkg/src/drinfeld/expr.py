"""Text forms for enveloping-algebra, tensor and polyvector elements.

Tensor grammar:  ``3/2 * e1*e2 (x) e2 - e2 (x) e1``; ``1`` is the unit and a
bracketed number such as ``[3/2]`` is an element of the scalar line.
Polyvector grammar: ``e1 ^ e2 - 1/2 * [e1,e2]``; for the free kind higher
Lie-basis elements are written as nested brackets of generators.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .envelope import AlgebraError, LieAlgebraSpec, NCElement, TensorElement, commutator
from .linalg import add_term

_TOKEN = re.compile(r"\s*(?:(\(x\))|(\d+(?:/\d+)?)|([A-Za-z_]\w*)|(.))")


class ParseError(ValueError):
    pass


def _tokens(text: str) -> list[tuple[str, str]]:
    out = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"cannot tokenize {text[pos:]!r}")
        pos = m.end()
        tens, num, name, other = m.groups()
        if tens:
            out.append(("TENS", tens))
        elif num:
            out.append(("NUM", num))
        elif name:
            out.append(("NAME", name))
        elif other.strip():
            out.append(("OP", other))
    return out


def _split_terms(toks: list) -> list[tuple[int, list]]:
    """Split a token list on top-level ``+``/``-`` (outside brackets)."""
    terms: list[tuple[int, list]] = []
    sign, cur, depth = 1, [], 0
    for kind, val in toks:
        if kind == "OP" and val in "[(":
            depth += 1
        elif kind == "OP" and val in "])":
            depth -= 1
        if kind == "OP" and val in "+-" and depth == 0:
            if cur:
                terms.append((sign, cur))
                cur = []
                sign = 1
            if val == "-":
                sign = -sign
            continue
        cur.append((kind, val))
    if cur:
        terms.append((sign, cur))
    elif toks:
        raise ParseError("dangling sign")
    return terms


def _gen_index(alg: LieAlgebraSpec, name: str) -> int:
    try:
        return alg.names.index(name)
    except ValueError:
        raise ParseError(f"unknown generator {name!r}") from None


def parse_tensor(alg: LieAlgebraSpec, text: str) -> TensorElement:
    toks = _tokens(text)
    if not toks:
        raise ParseError("empty expression")
    terms: dict[tuple, Fraction] = {}
    arity = None
    for sign, tt in _split_terms(toks):
        coeff = Fraction(sign)
        if ("OP", "[") in tt:
            if len(tt) >= 2 and tt[0][0] == "NUM" and tt[1] == ("OP", "*"):
                coeff *= Fraction(tt[0][1])
                tt = tt[2:]
            if len(tt) != 3 or tt[0] != ("OP", "[") or tt[2] != ("OP", "]") or tt[1][0] != "NUM":
                raise ParseError("scalar terms look like [p/q]")
            key, coeff = (), coeff * Fraction(tt[1][1])
        else:
            factors = [[]]
            expect_item = True
            for kind, val in tt:
                if kind == "TENS":
                    factors.append([])
                    expect_item = True
                elif kind == "OP" and val == "*":
                    if expect_item:
                        raise ParseError("misplaced '*'")
                    expect_item = True
                elif kind == "NUM":
                    if not expect_item:
                        raise ParseError(f"missing '*' before {val}")
                    coeff *= Fraction(val)
                    expect_item = False
                elif kind == "NAME":
                    if not expect_item:
                        raise ParseError(f"missing '*' before {val}")
                    factors[-1].append(_gen_index(alg, val))
                    expect_item = False
                else:
                    raise ParseError(f"unexpected {val!r}")
            if expect_item:
                raise ParseError("expression ends with an operator")
            key = tuple(tuple(f) for f in factors)
        if arity is None:
            arity = len(key)
        elif arity != len(key):
            raise ParseError("terms with different numbers of tensor factors")
        add_term(terms, key, coeff)
    return TensorElement(alg, arity, terms)


def parse_nc(alg: LieAlgebraSpec, text: str) -> NCElement:
    t = parse_tensor(alg, text)
    if t.arity != 1:
        raise ParseError("expected a single tensor factor")
    return NCElement(alg, {k[0]: c for k, c in t.terms.items()})


def _join(parts: list[tuple[Fraction, str | None]]) -> str:
    if not parts:
        return "0"
    out = []
    for n, (c, body) in enumerate(parts):
        first = n == 0
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if body is None:
            piece = str(a)
        elif a == 1:
            piece = body
        else:
            piece = f"{a} * {body}"
        if first:
            out.append(("-" if c < 0 else "") + piece)
        else:
            out.append(f" {sign} {piece}")
    return "".join(out)


def _fmt_word(alg: LieAlgebraSpec, m: tuple) -> str:
    return "*".join(alg.names[i] for i in m) if m else "1"


def format_tensor(t: TensorElement) -> str:
    alg = t.algebra
    parts = []
    for key in sorted(t.terms, key=lambda k: (tuple(len(m) for m in k), k)):
        c = t.terms[key]
        if t.arity == 0:
            parts.append((c, "[1]"))
            continue
        parts.append((c, " (x) ".join(_fmt_word(alg, m) for m in key)))
    return _join(parts)


def format_nc(a: NCElement) -> str:
    parts = [(a.terms[m], _fmt_word(a.algebra, m)) for m in sorted(a.terms, key=lambda m: (len(m), m))]
    return _join(parts)


def format_poly(p) -> str:
    names = p.basis.names
    parts = []
    for key in sorted(p.terms, key=lambda k: (len(k), k)):
        c = p.terms[key]
        parts.append((c, None if not key else " ^ ".join(names[i] for i in key)))
    return _join(parts)


def parse_poly(basis, text: str):
    from .exterior import PolyVector

    toks = _tokens(text)
    if not toks:
        raise ParseError("empty expression")
    alg = basis.algebra
    out: dict[tuple, Fraction] = {}
    for sign, tt in _split_terms(toks):
        coeff = Fraction(sign)
        pos = 0
        factors: list[dict[int, Fraction]] = []
        expect_item = True
        while pos < len(tt):
            kind, val = tt[pos]
            if kind == "NUM":
                if not expect_item:
                    raise ParseError(f"missing operator before {val}")
                coeff *= Fraction(val)
                pos += 1
                expect_item = False
            elif kind == "OP" and val in "*^":
                if expect_item:
                    raise ParseError(f"misplaced {val!r}")
                pos += 1
                expect_item = True
            elif kind == "NAME" or (kind == "OP" and val == "["):
                if not expect_item:
                    raise ParseError("missing operator between factors")
                elem, pos = _parse_lie(alg, tt, pos)
                try:
                    factors.append(basis.coords(elem.terms))
                except AlgebraError as exc:
                    raise ParseError(str(exc)) from None
                expect_item = False
            else:
                raise ParseError(f"unexpected {val!r}")
        if expect_item and tt:
            raise ParseError("expression ends with an operator")
        acc: dict[tuple, Fraction] = {(): coeff}
        for f in factors:
            acc = {k + (i,): c * x for k, c in acc.items() for i, x in f.items()}
        for k, c in acc.items():
            add_term(out, k, c)
    return PolyVector(basis, out)


def _parse_lie(alg, tt, pos):
    kind, val = tt[pos]
    if kind == "NAME":
        return NCElement.gen(alg, _gen_index(alg, val)), pos + 1
    # '[' lie ',' lie ']'
    left, pos = _parse_lie(alg, tt, pos + 1)
    if pos >= len(tt) or tt[pos] != ("OP", ","):
        raise ParseError("expected ',' inside bracket")
    right, pos = _parse_lie(alg, tt, pos + 1)
    if pos >= len(tt) or tt[pos] != ("OP", "]"):
        raise ParseError("expected ']'")
    return commutator(left, right), pos + 1
