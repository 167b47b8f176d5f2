"""Sparse multivariate polynomials with rational coefficients."""

from __future__ import annotations

import ast
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Sequence

Exponent = tuple[int, ...]
Number = int | Fraction


class PolynomialError(ValueError):
    pass


class RingMismatch(PolynomialError):
    pass


class Ring:
    """An ordered list of variable names, optionally grouped into blocks.

    Blocks are keyed by an identifier (a face id for patch rings) and list the
    variables belonging to that block.
    """

    __slots__ = ("names", "index", "blocks", "_hash")

    def __init__(self, names: Sequence[str], blocks: Mapping[object, Sequence[str]] | None = None):
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise PolynomialError(f"duplicate variable names in {self.names}")
        self.index = {name: i for i, name in enumerate(self.names)}
        if blocks is None:
            blocks = {None: self.names}
        self.blocks = {key: tuple(vs) for key, vs in blocks.items()}
        for vs in self.blocks.values():
            for v in vs:
                if v not in self.index:
                    raise PolynomialError(f"block variable {v!r} not in ring")
        self._hash = hash(self.names)

    @property
    def nvars(self) -> int:
        return len(self.names)

    def __eq__(self, other):
        return isinstance(other, Ring) and self.names == other.names

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Ring({', '.join(self.names)})"

    def zero(self) -> Polynomial:
        return Polynomial(self, {})

    def one(self) -> Polynomial:
        return Polynomial(self, {(0,) * self.nvars: Fraction(1)})

    def constant(self, c: Number) -> Polynomial:
        c = Fraction(c)
        return Polynomial(self, {(0,) * self.nvars: c} if c else {})

    def var(self, name: str) -> Polynomial:
        e = [0] * self.nvars
        e[self.index[name]] = 1
        return Polynomial(self, {tuple(e): Fraction(1)})

    def gens(self) -> list[Polynomial]:
        return [self.var(n) for n in self.names]

    def monomial(self, exp: Exponent, coeff: Number = 1) -> Polynomial:
        if len(exp) != self.nvars:
            raise PolynomialError("exponent length does not match ring")
        c = Fraction(coeff)
        return Polynomial(self, {tuple(exp): c} if c else {})

    def monomial_str(self, exp: Exponent) -> str:
        parts = []
        for name, e in zip(self.names, exp):
            if e == 1:
                parts.append(name)
            elif e:
                parts.append(f"{name}^{e}")
        return "*".join(parts) if parts else "1"

    def parse(self, text: str) -> Polynomial:
        return parse_polynomial(text, self)


def union_ring(rings: Iterable[Ring]) -> Ring:
    names: list[str] = []
    blocks: dict = {}
    for ring in rings:
        for key, vs in ring.blocks.items():
            blocks.setdefault(key, vs)
        for n in ring.names:
            if n not in names:
                names.append(n)
    return Ring(names, blocks)


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order: ``grevlex``, ``lex`` or ``block``.

    ``block`` compares the blocks of the ring one after another (in ring
    order), using grevlex inside each block; it eliminates earlier blocks.
    ``priority`` optionally reorders the variables (highest first).
    """

    kind: str = "grevlex"
    priority: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.kind not in ("grevlex", "lex", "block"):
            raise PolynomialError(f"unknown monomial order {self.kind!r}")

    def key(self, ring: Ring) -> Callable[[Exponent], tuple]:
        return _order_key(self, ring)


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


@lru_cache(maxsize=None)
def _order_key(order: MonomialOrder, ring: Ring) -> Callable[[Exponent], tuple]:
    if order.priority is None:
        perm = tuple(range(ring.nvars))
    else:
        missing = [n for n in ring.names if n not in order.priority]
        perm = tuple(ring.index[n] for n in order.priority if n in ring.index)
        perm += tuple(ring.index[n] for n in missing)
    identity = perm == tuple(range(ring.nvars))

    if order.kind == "lex":
        if identity:
            return lambda e: e
        return lambda e: tuple(e[i] for i in perm)
    if order.kind == "grevlex":
        rev = perm[::-1]
        return lambda e: (sum(e), tuple(-e[i] for i in rev))
    pos = {i: k for k, i in enumerate(perm)}
    groups = []
    for vs in ring.blocks.values():
        idx = sorted((ring.index[v] for v in vs), key=pos.__getitem__)
        groups.append(tuple(idx))
    groups.sort(key=lambda g: pos[g[0]])

    def block_key(e):
        out = []
        for g in groups:
            out.append(sum(e[i] for i in g))
            out.extend(-e[i] for i in reversed(g))
        return tuple(out)

    return block_key


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, str)):
        return Fraction(c)
    raise PolynomialError(f"non-rational coefficient {c!r}")


class Polynomial:
    """Immutable sparse polynomial: ``{exponent tuple: Fraction}`` over a ``Ring``."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: Ring, terms: Mapping[Exponent, Number] | None = None):
        self.ring = ring
        clean = {}
        if terms:
            for e, c in terms.items():
                c = _frac(c)
                if c:
                    clean[tuple(e)] = c
        self.terms = clean

    @classmethod
    def _raw(cls, ring: Ring, terms: dict) -> Polynomial:
        p = object.__new__(cls)
        p.ring = ring
        p.terms = terms
        return p

    def _check(self, other: Polynomial):
        if other.ring != self.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")

    def _coerce(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.constant(other)
        return NotImplemented

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Polynomial._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if not c:
                return self.ring.zero()
            return Polynomial._raw(self.ring, {e: v * c for e, v in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, 0) + c1 * c2
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return Polynomial._raw(self.ring, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) and other:
            return self * (1 / Fraction(other))
        raise PolynomialError("only division by a nonzero rational is supported")

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise PolynomialError("exponent must be a nonnegative integer")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def mul_term(self, exp: Exponent, coeff: Fraction) -> Polynomial:
        return Polynomial._raw(
            self.ring,
            {tuple(a + b for a, b in zip(e, exp)): c * coeff for e, c in self.terms.items()},
        )

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, name: str) -> int:
        if not self.terms:
            return -1
        i = self.ring.index[name]
        return max(e[i] for e in self.terms)

    def variables(self) -> set[str]:
        used = set()
        for e in self.terms:
            used.update(self.ring.names[i] for i, k in enumerate(e) if k)
        return used

    def coefficient(self, exp: Exponent) -> Fraction:
        return self.terms.get(tuple(exp), Fraction(0))

    def constant_term(self) -> Fraction:
        return self.coefficient((0,) * self.ring.nvars)

    def leading_monomial(self, order: MonomialOrder = GREVLEX) -> Exponent:
        if not self.terms:
            raise PolynomialError("zero polynomial has no leading monomial")
        return max(self.terms, key=order.key(self.ring))

    def leading_term(self, order: MonomialOrder = GREVLEX) -> tuple[Exponent, Fraction]:
        m = self.leading_monomial(order)
        return m, self.terms[m]

    def monic(self, order: MonomialOrder = GREVLEX) -> Polynomial:
        if not self.terms:
            return self
        return self * (1 / self.leading_term(order)[1])

    def sorted_terms(self, order: MonomialOrder = GREVLEX) -> list[tuple[Exponent, Fraction]]:
        key = order.key(self.ring)
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def derivative(self, name: str) -> Polynomial:
        i = self.ring.index[name]
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = c * e[i]
        return Polynomial._raw(self.ring, out)

    def embed(self, ring: Ring) -> Polynomial:
        """Reinterpret in ``ring``, which must contain every variable used."""
        if ring == self.ring:
            return self
        perm = _embedding(self.ring, ring)
        out = {}
        for e, c in self.terms.items():
            f = [0] * ring.nvars
            for i, k in enumerate(e):
                if k:
                    j = perm[i]
                    if j < 0:
                        raise RingMismatch(f"variable {self.ring.names[i]} not in {ring}")
                    f[j] = k
            out[tuple(f)] = c
        return Polynomial._raw(ring, out)

    def substitute(self, images: Mapping[str, Polynomial], ring: Ring | None = None) -> Polynomial:
        """Replace variables by polynomials in ``ring``; unmapped variables must
        exist in ``ring`` and are kept."""
        if ring is None:
            ring = next(iter(images.values())).ring if images else self.ring
        imgs = []
        for name in self.ring.names:
            if name in images:
                img = images[name]
                if img.ring != ring:
                    img = img.embed(ring)
                imgs.append(img)
            elif name in ring.index:
                imgs.append(ring.var(name))
            else:
                imgs.append(None)
        powers: list[dict[int, Polynomial]] = [{} for _ in imgs]

        def power(i, k):
            cache = powers[i]
            if k not in cache:
                if imgs[i] is None:
                    raise RingMismatch(f"no image for {self.ring.names[i]}")
                cache[k] = imgs[i] ** k if k < 2 or (k - 1) not in cache else cache[k - 1] * imgs[i]
            return cache[k]

        acc: dict = {}
        for e, c in self.terms.items():
            term = ring.constant(c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            for f, v in term.terms.items():
                s = acc.get(f, 0) + v
                if s:
                    acc[f] = s
                else:
                    acc.pop(f, None)
        return Polynomial._raw(ring, acc)

    def evaluate(self, point: Mapping[str, Number]) -> Fraction:
        vals = [Fraction(point[n]) if n in point else None for n in self.ring.names]
        total = Fraction(0)
        for e, c in self.terms.items():
            t = c
            for i, k in enumerate(e):
                if k:
                    if vals[i] is None:
                        raise PolynomialError(f"no value for {self.ring.names[i]}")
                    t *= vals[i] ** k
            total += t
        return total

    def to_str(self, order: MonomialOrder = GREVLEX) -> str:
        return format_polynomial(self, order)

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({format_polynomial(self)!r})"


@lru_cache(maxsize=4096)
def _embedding(src: Ring, dst: Ring) -> tuple[int, ...]:
    return tuple(dst.index.get(n, -1) for n in src.names)


def format_polynomial(p: Polynomial, order: MonomialOrder = GREVLEX) -> str:
    """Text form using ``*`` and ``^``; parses back to the same polynomial."""
    if not p.terms:
        return "0"
    out = []
    for exp, c in p.sorted_terms(order):
        mono = p.ring.monomial_str(exp)
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if mono == "1":
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        out.append((sign, body))
    first_sign, first = out[0]
    text = ("-" if first_sign == "-" else "") + first
    for sign, body in out[1:]:
        text += f" {sign} {body}"
    return text


def parse_polynomial(text: str, ring: Ring) -> Polynomial:
    """Parse ``text`` (``+ - * / ^`` and parentheses, rational constants)."""
    try:
        tree = ast.parse(text.replace("^", "**").strip(), mode="eval")
    except SyntaxError as exc:
        raise PolynomialError(f"cannot parse polynomial {text!r}") from exc
    return _eval_node(tree.body, ring, text)


def _eval_node(node, ring: Ring, text: str) -> Polynomial:
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return ring.constant(node.value)
    if isinstance(node, ast.Name):
        if node.id not in ring.index:
            raise PolynomialError(f"unknown variable {node.id!r} in {text!r}")
        return ring.var(node.id)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        val = _eval_node(node.operand, ring, text)
        return -val if isinstance(node.op, ast.USub) else val
    if isinstance(node, ast.BinOp):
        left = _eval_node(node.left, ring, text)
        if isinstance(node.op, ast.Pow):
            exp = _eval_node(node.right, ring, text)
            if exp.variables() or exp.constant_term().denominator != 1 or exp.constant_term() < 0:
                raise PolynomialError(f"exponent must be a nonnegative integer in {text!r}")
            return left ** int(exp.constant_term())
        right = _eval_node(node.right, ring, text)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            if right.variables() or right.is_zero():
                raise PolynomialError(f"division by a non-constant or zero in {text!r}")
            return left / right.constant_term()
    raise PolynomialError(f"unsupported syntax in polynomial {text!r}")


def parse_rational(value) -> Fraction:
    """Accept ints, ``"p/q"`` strings and terminating decimals (no floats)."""
    if isinstance(value, bool) or isinstance(value, float):
        raise PolynomialError(f"inexact number {value!r}; use an integer or 'p/q' string")
    try:
        return Fraction(value)
    except (TypeError, ValueError) as exc:
        raise PolynomialError(f"not a rational number: {value!r}") from exc


@dataclass(frozen=True)
class Grading:
    """``total`` degree at most d, or ``bidegree``: degree at most d in each variable."""

    kind: str
    d: int

    def __post_init__(self):
        if self.kind not in ("total", "bidegree"):
            raise PolynomialError(f"unknown grading {self.kind!r}")
        if self.d < 0:
            raise PolynomialError("degree must be nonnegative")

    def admits(self, exps: Sequence[int]) -> bool:
        if self.kind == "total":
            return sum(exps) <= self.d
        return max(exps, default=0) <= self.d

    def contains(self, p: Polynomial, block: Sequence[str] | None = None) -> bool:
        names = block if block is not None else p.ring.names
        idx = [p.ring.index[n] for n in names]
        others = [i for i in range(p.ring.nvars) if i not in idx]
        for e in p.terms:
            if any(e[i] for i in others):
                return False
            if not self.admits([e[i] for i in idx]):
                return False
        return True


def block_exponents(nvars: int, grading: Grading) -> list[tuple[int, ...]]:
    if grading.kind == "total":
        out = []

        def rec(prefix, left, k):
            if k == 0:
                out.append(tuple(prefix))
                return
            for a in range(left + 1):
                rec(prefix + [a], left - a, k - 1)

        rec([], grading.d, nvars)
        return out
    out = [()]
    for _ in range(nvars):
        out = [e + (a,) for e in out for a in range(grading.d + 1)]
    return out


def monomials_within(ring: Ring, block, grading: Grading, order: MonomialOrder = GREVLEX) -> list[Exponent]:
    """All monomials of one block admitted by ``grading``, descending in ``order``."""
    if block not in ring.blocks:
        raise PolynomialError(f"no block {block!r} in {ring}")
    names = ring.blocks[block]
    if grading.kind == "bidegree" and len(names) != 2:
        raise PolynomialError("bidegree grading needs blocks of exactly two variables")
    idx = [ring.index[n] for n in names]
    out = []
    for small in block_exponents(len(idx), grading):
        e = [0] * ring.nvars
        for i, k in zip(idx, small):
            e[i] = k
        out.append(tuple(e))
    key = order.key(ring)
    out.sort(key=key, reverse=True)
    return out


def count_monomials(nvars: int, grading: Grading) -> int:
    if grading.kind == "total":
        return math.comb(grading.d + nvars, nvars)
    return (grading.d + 1) ** nvars
