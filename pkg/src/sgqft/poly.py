"""
Sparse multivariate polynomials over the rationals.

Symbols are interned, so equality and hashing are by identity. A monomial
is a sorted tuple of ``(Sym, exponent)`` pairs and a polynomial is a dict
from monomials to nonzero ``Fraction`` coefficients.
"""
from __future__ import annotations

import ast
import re
from fractions import Fraction
from typing import Iterable, Mapping

KAPPA, KAPPA_IJ, EPS, SCALAR, THEORY, THEORY_L, HOLO = range(7)

# rank of the built-in holomorphic generators of the anomaly module
_HOLO_BASE = {"F03": 0, "h11": 1, "E4": 2}


class Sym:
    """A formal symbol; use the factory functions rather than the constructor."""

    __slots__ = ("kind", "data", "name", "key")
    _table: dict = {}

    def __new__(cls, kind: int, data: tuple, name: str):
        k = (kind, data)
        s = cls._table.get(k)
        if s is None:
            s = object.__new__(cls)
            s.kind, s.data, s.name, s.key = kind, data, name, k
            cls._table[k] = s
        return s

    def __lt__(self, other: "Sym") -> bool:
        return self.key < other.key

    def __repr__(self) -> str:
        return self.name

    def __reduce__(self):
        return (Sym, (self.kind, self.data, self.name))


def kappa(i: int | None = None, j: int | None = None) -> Sym:
    if i is None:
        return Sym(KAPPA, (), "kappa")
    i, j = min(i, j), max(i, j)
    return Sym(KAPPA_IJ, (i, j), f"kappa[{i},{j}]")


def eps(i: int) -> Sym:
    return Sym(EPS, (i,), f"e{i}")


def scalar(name: str) -> Sym:
    return Sym(SCALAR, (name,), f"scalar:{name}")


def theory(g: int, n) -> Sym:
    """``F[g,n]``, or ``F[g;l1,..,lN]`` when ``n`` is a tuple of label counts."""
    if isinstance(n, tuple):
        return Sym(THEORY_L, (g, n), f"F[{g};{','.join(map(str, n))}]")
    return Sym(THEORY, (g, n), f"F[{g},{n}]")


def holo(base: str, k: int = 0) -> Sym:
    """A holomorphic generator; ``base`` is F03, h11, E4 or amb[g]."""
    m = re.fullmatch(r"amb\[(\d+)\]", base)
    if m:
        rank = (3, int(m.group(1)))
    elif base in _HOLO_BASE:
        rank = (_HOLO_BASE[base], 0)
    else:
        raise ValueError(f"unknown generator {base!r}")
    name = base if k == 0 else f"D^{k}:{base}"
    return Sym(HOLO, (rank, k, base), name)


_TOKEN = re.compile(
    r"F\[\d+,\d+\]|F\[\d+;\d+(?:,\d+)*\]|kappa\[\d+,\d+\]|kappa"
    r"|scalar:[A-Za-z_][A-Za-z0-9_]*|D\^\d+:(?:F03|h11|E4|amb\[\d+\])"
    r"|amb\[\d+\]|F03|h11|E4|e\d+"
)


def sym_from_string(text: str) -> Sym:
    m = re.fullmatch(r"F\[(\d+),(\d+)\]", text)
    if m:
        return theory(int(m.group(1)), int(m.group(2)))
    m = re.fullmatch(r"F\[(\d+);([\d,]+)\]", text)
    if m:
        return theory(int(m.group(1)), tuple(int(x) for x in m.group(2).split(",")))
    m = re.fullmatch(r"kappa\[(\d+),(\d+)\]", text)
    if m:
        return kappa(int(m.group(1)), int(m.group(2)))
    if text == "kappa":
        return kappa()
    if text.startswith("scalar:"):
        return scalar(text[7:])
    m = re.fullmatch(r"e(\d+)", text)
    if m:
        return eps(int(m.group(1)))
    m = re.fullmatch(r"D\^(\d+):(.+)", text)
    if m:
        return holo(m.group(2), int(m.group(1)))
    return holo(text)


def _mono_mul(a: tuple, b: tuple) -> tuple:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for s, e in b:
        d[s] = d.get(s, 0) + e
    return tuple(sorted(d.items(), key=lambda t: t[0].key))


class Poly:
    """Exact sparse polynomial. Coefficients are ``Fraction``."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping | None = None):
        self.terms = {}
        if terms:
            for m, c in terms.items():
                if c:
                    self.terms[m] = Fraction(c)

    @classmethod
    def const(cls, c) -> "Poly":
        p = cls()
        if c:
            p.terms[()] = Fraction(c)
        return p

    @classmethod
    def var(cls, s: Sym, e: int = 1) -> "Poly":
        p = cls()
        p.terms[((s, e),) if e else ()] = Fraction(1)
        return p

    @classmethod
    def monomial(cls, syms: Iterable[Sym], c=1) -> "Poly":
        d: dict = {}
        for s in syms:
            d[s] = d.get(s, 0) + 1
        p = cls()
        if c:
            p.terms[tuple(sorted(d.items(), key=lambda t: t[0].key))] = Fraction(c)
        return p

    # arithmetic

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            other = Poly.const(other)
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __neg__(self) -> "Poly":
        p = Poly()
        p.terms = {m: -c for m, c in self.terms.items()}
        return p

    def __add__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            other = Poly.const(other)
        t = dict(self.terms)
        for m, c in other.terms.items():
            v = t.get(m, 0) + c
            if v:
                t[m] = v
            else:
                t.pop(m, None)
        p = Poly()
        p.terms = t
        return p

    __radd__ = __add__

    def __sub__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            other = Poly.const(other)
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return Poly.const(other) - self

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            c = Fraction(other)
            p = Poly()
            if c:
                p.terms = {m: v * c for m, v in self.terms.items()}
            return p
        t: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                v = t.get(m, 0) + c1 * c2
                if v:
                    t[m] = v
                else:
                    del t[m]
        p = Poly()
        p.terms = t
        return p

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Poly":
        return self * (1 / Fraction(other))

    def __pow__(self, e: int) -> "Poly":
        if e < 0:
            raise ValueError("negative power")
        result, base = Poly.const(1), self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # inspection

    def symbols(self) -> set:
        return {s for m in self.terms for s, _ in m}

    def degree(self, s: Sym) -> int:
        return max((dict(m).get(s, 0) for m in self.terms), default=0)

    def coefficient(self, s: Sym, e: int) -> "Poly":
        """Coefficient of ``s**e``, as a polynomial in the other symbols."""
        p = Poly()
        for m, c in self.terms.items():
            d = dict(m)
            if d.get(s, 0) == e:
                d.pop(s, None)
                p.terms[tuple(sorted(d.items(), key=lambda t: t[0].key))] = c
        return p

    def constant(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    def is_constant(self) -> bool:
        return all(not m for m in self.terms)

    def diff(self, s: Sym) -> "Poly":
        p = Poly()
        for m, c in self.terms.items():
            d = dict(m)
            e = d.get(s, 0)
            if e:
                if e == 1:
                    del d[s]
                else:
                    d[s] = e - 1
                p.terms[tuple(sorted(d.items(), key=lambda t: t[0].key))] = c * e
        return p

    def subs(self, values: Mapping) -> "Poly":
        """Substitute symbols by polynomials (or rationals)."""
        cache: dict = {}

        def power(s, e):
            k = (s, e)
            if k not in cache:
                v = values[s]
                cache[k] = (v if isinstance(v, Poly) else Poly.const(v)) ** e
            return cache[k]

        out = Poly()
        for m, c in self.terms.items():
            term = Poly.const(c)
            keep = []
            for s, e in m:
                if s in values:
                    term = term * power(s, e)
                else:
                    keep.append((s, e))
            if keep:
                term = term * Poly({tuple(keep): 1})
            out = out + term
        return out

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda t: _term_key(t[0]))

    # serialisation

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for i, (m, c) in enumerate(self.sorted_terms()):
            sign = "-" if c < 0 else "+"
            a = abs(c)
            factors = [s.name if e == 1 else f"{s.name}^{e}" for s, e in m]
            if a != 1 or not factors:
                factors.insert(0, str(a))
            body = "*".join(factors)
            if i == 0:
                out.append(("-" if sign == "-" else "") + body)
            else:
                out.append(f" {sign} {body}")
        return "".join(out)

    __repr__ = __str__

    def to_json(self) -> list:
        out = []
        for m, c in self.sorted_terms():
            syms = []
            for s, e in m:
                syms.extend([s.name] * e)
            out.append({"coeff": str(c), "monomial": syms})
        return out

    @classmethod
    def from_json(cls, data: list) -> "Poly":
        p = cls()
        for item in data:
            p = p + cls.monomial(
                [sym_from_string(x) for x in item["monomial"]], Fraction(item["coeff"])
            )
        return p

    @classmethod
    def parse(cls, text: str) -> "Poly":
        """Parse text such as ``F[1,1] + 1/2*kappa*F[0,3]`` or ``e1+e2``."""
        syms: list = []

        def repl(m):
            syms.append(sym_from_string(m.group(0)))
            return f"_s{len(syms) - 1}"

        src = _TOKEN.sub(repl, text).replace("^", "**")
        try:
            tree = ast.parse(src, mode="eval")
        except SyntaxError as exc:
            raise ValueError(f"cannot parse polynomial {text!r}") from exc
        return _eval_ast(tree.body, syms, text)


def _term_key(m: tuple):
    return (sum(e for _, e in m), [(s.key, -e) for s, e in m])


def _eval_ast(node, syms, text):
    if isinstance(node, ast.BinOp):
        a = _eval_ast(node.left, syms, text)
        b = _eval_ast(node.right, syms, text)
        if isinstance(node.op, ast.Add):
            return a + b
        if isinstance(node.op, ast.Sub):
            return a - b
        if isinstance(node.op, ast.Mult):
            return a * b
        if isinstance(node.op, ast.Div) and b.is_constant() and b:
            return a * (1 / b.constant())
        if isinstance(node.op, ast.Pow) and b.is_constant():
            e = b.constant()
            if e.denominator == 1 and e >= 0:
                return a ** int(e)
    elif isinstance(node, ast.UnaryOp):
        a = _eval_ast(node.operand, syms, text)
        if isinstance(node.op, ast.USub):
            return -a
        if isinstance(node.op, ast.UAdd):
            return a
    elif isinstance(node, ast.Constant) and isinstance(node.value, int):
        return Poly.const(node.value)
    elif isinstance(node, ast.Name) and re.fullmatch(r"_s\d+", node.id):
        return Poly.var(syms[int(node.id[2:])])
    raise ValueError(f"cannot parse polynomial {text!r}")


def as_poly(x) -> Poly:
    return x if isinstance(x, Poly) else Poly.const(x)
