"""Sparse multivariate polynomials with exact rational coefficients.

A :class:`Polynomial` is an immutable map from exponent tuples to nonzero
``gmpy2.mpq`` coefficients, tied to an explicit :class:`VariableSet`.
Operations between polynomials over different variable sets raise
:class:`RingMismatchError`; nothing is coerced silently.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from gmpy2 import mpq

Monomial = tuple  # tuple[int, ...], one exponent per variable

ZERO = mpq(0)
ONE = mpq(1)


class StructuralError(ValueError):
    """Raised for malformed input: unknown variables, bad shapes, bad ranges."""


class RingMismatchError(StructuralError):
    """Raised when combining objects that live over different variable sets."""


def rational(value) -> mpq:
    """Coerce ``int``, ``Fraction``, ``mpq`` or a ``"num/den"`` string to mpq."""
    if isinstance(value, str):
        return mpq(value.strip())
    if isinstance(value, float):
        raise TypeError("floating point coefficients are not allowed")
    return mpq(value)


def format_rational(c: mpq) -> str:
    return str(mpq(c))


@dataclass(frozen=True)
class VariableSet:
    names: tuple[str, ...]
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        names = tuple(self.names)
        if len(set(names)) != len(names):
            raise StructuralError(f"duplicate variable names in {names}")
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(names)})

    @classmethod
    def of(cls, *names: str) -> "VariableSet":
        if len(names) == 1 and not isinstance(names[0], str):
            names = tuple(names[0])
        return cls(tuple(names))

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self):
        return iter(self.names)

    def __contains__(self, name) -> bool:
        return name in self._index

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise StructuralError(f"unknown variable {name!r} in {self.names}") from None

    def extend(self, *names: str) -> "VariableSet":
        return VariableSet(self.names + tuple(names))

    def gen(self, name: str) -> "Polynomial":
        i = self.index(name)
        e = [0] * len(self.names)
        e[i] = 1
        return Polynomial(self, {tuple(e): ONE}, _trusted=True)

    def gens(self) -> tuple["Polynomial", ...]:
        return tuple(self.gen(n) for n in self.names)

    def const(self, c) -> "Polynomial":
        c = rational(c)
        if not c:
            return Polynomial(self, {}, _trusted=True)
        return Polynomial(self, {(0,) * len(self.names): c}, _trusted=True)

    def zero(self) -> "Polynomial":
        return Polynomial(self, {}, _trusted=True)

    def one(self) -> "Polynomial":
        return self.const(1)

    def monomial(self, exps: Iterable[int], coeff=1) -> "Polynomial":
        exps = tuple(int(e) for e in exps)
        if len(exps) != len(self.names) or any(e < 0 for e in exps):
            raise StructuralError(f"bad exponent vector {exps} for {self.names}")
        return Polynomial(self, {exps: rational(coeff)})


class Polynomial:
    """Exact polynomial over a fixed variable set.

    Treat instances as immutable; ``terms`` must not be modified after
    construction. Equality is equality of variable sets and term maps.
    """

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: VariableSet, terms: Mapping | None = None, *, _trusted=False):
        self.ring = ring
        self._hash = None
        if _trusted:
            self.terms = terms
            return
        n = len(ring.names)
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(int(v) for v in e)
            if len(e) != n or any(v < 0 for v in e):
                raise StructuralError(f"bad exponent vector {e} for {ring.names}")
            c = rational(c)
            if c:
                clean[e] = clean.get(e, ZERO) + c
                if not clean[e]:
                    del clean[e]
        self.terms = clean

    # -- basic queries -------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, name: str) -> int:
        i = self.ring.index(name)
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def constant_term(self) -> mpq:
        return self.terms.get((0,) * len(self.ring.names), ZERO)

    def is_constant(self) -> bool:
        z = (0,) * len(self.ring.names)
        return all(e == z for e in self.terms)

    def variables(self) -> set[str]:
        used = set()
        for e in self.terms:
            for name, v in zip(self.ring.names, e):
                if v:
                    used.add(name)
        return used

    def coefficient(self, exps) -> mpq:
        return self.terms.get(tuple(exps), ZERO)

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, float):
            return NotImplemented
        try:
            other = self.ring.const(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring.names, frozenset(self.terms.items())))
        return self._hash

    # -- arithmetic ------------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingMismatchError(f"{self.ring.names} vs {other.ring.names}")
            return other
        if isinstance(other, float):
            raise TypeError("floating point coefficients are not allowed")
        try:
            return self.ring.const(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if len(other.terms) > len(self.terms):
            big, small = other.terms, self.terms
        else:
            big, small = self.terms, other.terms
        out = dict(big)
        for e, c in small.items():
            s = out.get(e, ZERO) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Polynomial(self.ring, out, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, {e: -c for e, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, ZERO) - c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Polynomial(self.ring, out, _trusted=True)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        out: dict = {}
        get = out.get
        for eb, cb in b.items():
            for ea, ca in a.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = get(e, ZERO) + ca * cb
        return Polynomial(self.ring, {e: c for e, c in out.items() if c}, _trusted=True)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise StructuralError("exponent must be a non-negative integer")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, c) -> "Polynomial":
        c = rational(c)
        if not c:
            return self.ring.zero()
        return Polynomial(self.ring, {e: v * c for e, v in self.terms.items()}, _trusted=True)

    def mul_monomial(self, exps: Monomial, c=ONE) -> "Polynomial":
        return Polynomial(
            self.ring,
            {tuple(x + y for x, y in zip(e, exps)): v * c for e, v in self.terms.items()},
            _trusted=True,
        )

    def truncate(self, name: str, bound: int) -> "Polynomial":
        """Drop every term whose degree in ``name`` is at least ``bound``."""
        i = self.ring.index(name)
        return Polynomial(
            self.ring, {e: c for e, c in self.terms.items() if e[i] < bound}, _trusted=True
        )

    def primitive(self) -> "Polynomial":
        """Scale so the coefficients are coprime integers with the sign of the
        first term (in canonical order) positive. Content removal only."""
        if not self.terms:
            return self
        from math import gcd, lcm

        den = 1
        for c in self.terms.values():
            den = lcm(den, int(c.denominator))
        nums = [int(c * den) for c in self.terms.values()]
        g = 0
        for v in nums:
            g = gcd(g, v)
        first = self.terms[min(self.terms)]
        scale = mpq(den, g) if first > 0 else mpq(-den, g)
        return self.scale(scale)

    # -- calculus and substitution --------------------------------------

    def partial_derivative(self, name: str) -> "Polynomial":
        i = self.ring.index(name)
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                ne = e[:i] + (k - 1,) + e[i + 1:]
                out[ne] = c * k
        return Polynomial(self.ring, out, _trusted=True)

    def substitute(self, bindings: Mapping[str, "Polynomial"], target: VariableSet | None = None) -> "Polynomial":
        """Simultaneous substitution of variables by polynomials.

        Bound variables are replaced by their images; unbound variables are
        carried over by name into the target ring (the common ring of the
        images, or ``target`` when given). Carrying an unbound variable that
        the target lacks is an error.
        """
        for name in bindings:
            self.ring.index(name)
        rings = {p.ring for p in bindings.values()}
        if target is None:
            if len(rings) > 1:
                raise RingMismatchError("substitution images live in different rings")
            target = rings.pop() if rings else self.ring
        elif rings and rings != {target}:
            raise RingMismatchError("substitution images must live in the target ring")

        images = []
        for name in self.ring.names:
            if name in bindings:
                images.append(bindings[name])
            elif name in target:
                images.append(target.gen(name))
            else:
                images.append(None)

        power_cache: dict = {}

        def power(i, k):
            key = (i, k)
            if key not in power_cache:
                power_cache[key] = images[i] ** k
            return power_cache[key]

        result: dict = {}
        for e, c in self.terms.items():
            term = target.const(c)
            for i, k in enumerate(e):
                if not k:
                    continue
                if images[i] is None:
                    raise StructuralError(
                        f"variable {self.ring.names[i]!r} has no image in {target.names}"
                    )
                term = term * power(i, k)
            for te, tc in term.terms.items():
                s = result.get(te, ZERO) + tc
                if s:
                    result[te] = s
                else:
                    result.pop(te, None)
        return Polynomial(target, result, _trusted=True)

    def to_ring(self, target: VariableSet) -> "Polynomial":
        """Re-express over another variable set by matching variable names."""
        if target == self.ring:
            return self
        idx = []
        for name in self.ring.names:
            idx.append(target.index(name) if name in target else None)
        out = {}
        n = len(target.names)
        for e, c in self.terms.items():
            ne = [0] * n
            for i, k in enumerate(e):
                if k:
                    if idx[i] is None:
                        raise StructuralError(
                            f"variable {self.ring.names[i]!r} missing from {target.names}"
                        )
                    ne[idx[i]] = k
            out[tuple(ne)] = c
        return Polynomial(target, out, _trusted=True)

    # -- rendering and interchange --------------------------------------

    def sorted_terms(self, key=None):
        """Terms in descending order; grevlex unless another sort key is given."""
        if key is None:
            key = _grevlex_desc_key
        return sorted(self.terms.items(), key=lambda t: key(t[0]))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                name if k == 1 else f"{name}^{k}"
                for name, k in zip(self.ring.names, e)
                if k
            )
            neg = c < 0
            a = -c if neg else c
            if not mono:
                body = format_rational(a)
            elif a == 1:
                body = mono
            else:
                body = f"{format_rational(a)}*{mono}"
            if not parts:
                parts.append(f"-{body}" if neg else body)
            else:
                parts.append(f"- {body}" if neg else f"+ {body}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"Polynomial({self})"

    def to_json(self) -> dict:
        return {
            "vars": list(self.ring.names),
            "terms": [
                {"e": list(e), "c": format_rational(c)} for e, c in self.sorted_terms()
            ],
        }

    @classmethod
    def from_json(cls, data, ring: VariableSet | None = None) -> "Polynomial":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            names = tuple(data["vars"])
            terms = data["terms"]
        except (KeyError, TypeError) as exc:
            raise StructuralError(f"malformed polynomial JSON: {exc}") from None
        own = VariableSet(names)
        if ring is not None and ring != own:
            raise RingMismatchError(f"{names} vs {ring.names}")
        out = {}
        for t in terms:
            e = tuple(t["e"])
            if e in out:
                raise StructuralError(f"repeated exponent vector {e}")
            out[e] = t["c"]
        return cls(ring or own, out)


def _grevlex_desc_key(e):
    return (-sum(e),) + tuple(reversed(e))


def parse(text: str, ring: VariableSet) -> Polynomial:
    """Parse a polynomial written with ``+ - * ^ ( )``, integers and ``a/b``.

    Intended for tests and the command line; variable names must belong to
    ``ring``.
    """
    tokens = _tokenize(text, ring)
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def take():
        nonlocal pos
        tok = tokens[pos]
        pos += 1
        return tok

    def expr():
        sign = 1
        if peek() in ("+", "-"):
            sign = -1 if take() == "-" else 1
        acc = term().scale(sign)
        while peek() in ("+", "-"):
            op = take()
            t = term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term():
        acc = factor()
        while peek() in ("*", "/"):
            op = take()
            f = factor()
            if op == "*":
                acc = acc * f
            else:
                if not f.is_constant() or f.is_zero():
                    raise StructuralError("division only by nonzero constants")
                acc = acc.scale(1 / f.constant_term())
        return acc

    def factor():
        base = atom()
        if peek() == "^":
            take()
            tok = take()
            if not isinstance(tok, int):
                raise StructuralError("exponent must be an integer")
            base = base ** tok
        return base

    def atom():
        tok = take() if peek() is not None else None
        if tok == "(":
            v = expr()
            if take() != ")":
                raise StructuralError("unbalanced parentheses")
            return v
        if tok == "-":
            return -factor()
        if isinstance(tok, int):
            return ring.const(tok)
        if isinstance(tok, str) and tok in ring:
            return ring.gen(tok)
        raise StructuralError(f"unexpected token {tok!r} in {text!r}")

    result = expr()
    if pos != len(tokens):
        raise StructuralError(f"trailing input in {text!r}")
    return result


def _tokenize(text: str, ring: VariableSet):
    names = sorted(ring.names, key=len, reverse=True)
    out = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "+-*/^()":
            if ch == "*" and text.startswith("**", i):
                out.append("^")
                i += 2
                continue
            out.append(ch)
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            out.append(int(text[i:j]))
            i = j
        else:
            for name in names:
                if text.startswith(name, i):
                    out.append(name)
                    i += len(name)
                    break
            else:
                raise StructuralError(f"unknown symbol at {text[i:]!r}")
    return out
