"""Truncated x-adic arithmetic over polynomial coefficients.

Elements of ``Q[y, z, ...][x] / (x^N)`` are stored as a list of ``N``
coefficient polynomials in the non-x variables. Generic power series in
``x Q[[x]]`` are modeled by seeded pseudo-random truncations, and
:func:`endpiece` splits an element into the head/tail pieces used to
present the ring as a union of localized polynomial rings.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from math import comb

from gmpy2 import mpq

from .polycore import Polynomial, RingMismatchError, StructuralError, VariableSet, format_rational

COEFF_RANGE = (1, 9)


@dataclass(frozen=True)
class GenericSeries:
    """Truncation ``a_1 x + ... + a_{N-1} x^{N-1}`` of a generic series.

    The coefficient stream depends only on ``(seed, label)``, so a longer
    truncation extends a shorter one.
    """

    label: str
    seed: int
    N: int
    coeffs: tuple[mpq, ...]  # a_1 .. a_{N-1}

    def __post_init__(self):
        if self.N < 2:
            raise StructuralError("truncation must be at least 2")
        if len(self.coeffs) != self.N - 1:
            raise StructuralError("need exactly N-1 coefficients")
        if any(not c for c in self.coeffs):
            raise StructuralError("generic series coefficients must be nonzero")

    def coefficient(self, j: int) -> mpq:
        if j == 0 or j >= self.N:
            return mpq(0)
        return self.coeffs[j - 1]

    def to_polynomial(self, ring: VariableSet, x: str = "x") -> Polynomial:
        t = ring.gen(x)
        out = ring.zero()
        for j, c in enumerate(self.coeffs, start=1):
            out = out + (t ** j).scale(c)
        return out

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "seed": self.seed,
            "N": self.N,
            "coeffs": [format_rational(c) for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, data: dict) -> "GenericSeries":
        try:
            return cls(data["label"], int(data["seed"]), int(data["N"]),
                       tuple(mpq(c) for c in data["coeffs"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise StructuralError(f"malformed series JSON: {exc}") from None


def make_generic(seed: int, label: str, N: int) -> GenericSeries:
    if N < 2:
        raise StructuralError("truncation must be at least 2")
    rng = random.Random(f"{seed}/{label}")
    lo, hi = COEFF_RANGE
    coeffs = tuple(mpq(rng.randint(lo, hi)) for _ in range(N - 1))
    return GenericSeries(label, int(seed), N, coeffs)


def fixed_series(label: str, coeffs, N: int) -> GenericSeries:
    """Series with prescribed leading coefficients, padded by zeros.

    Only for fixtures such as ``alpha = x``; bypasses the nonzero rule by
    construction, so it is built without validation.
    """
    vals = [mpq(c) for c in coeffs][: N - 1]
    vals += [mpq(0)] * (N - 1 - len(vals))
    obj = object.__new__(GenericSeries)
    object.__setattr__(obj, "label", label)
    object.__setattr__(obj, "seed", -1)
    object.__setattr__(obj, "N", N)
    object.__setattr__(obj, "coeffs", tuple(vals))
    return obj


class TruncatedElement:
    """Element of ``base[x] / (x^N)``; ``coeffs[j]`` multiplies ``x^j``."""

    __slots__ = ("base", "coeffs", "x")

    def __init__(self, base: VariableSet, coeffs, x: str = "x"):
        coeffs = tuple(coeffs)
        if not coeffs:
            raise StructuralError("truncation must be positive")
        if x in base:
            raise StructuralError(f"{x!r} must not be a coefficient variable")
        for c in coeffs:
            if c.ring != base:
                raise RingMismatchError(f"{c.ring.names} vs {base.names}")
        self.base = base
        self.coeffs = coeffs
        self.x = x

    @property
    def N(self) -> int:
        return len(self.coeffs)

    @property
    def ring(self) -> VariableSet:
        """The full ring ``x`` followed by the coefficient variables."""
        return VariableSet((self.x,) + self.base.names)

    @classmethod
    def constant(cls, p: Polynomial, N: int, x: str = "x") -> "TruncatedElement":
        return cls(p.ring, [p] + [p.ring.zero()] * (N - 1), x)

    @classmethod
    def from_series(cls, s: GenericSeries, base: VariableSet, x: str = "x") -> "TruncatedElement":
        return cls(base, [base.const(s.coefficient(j)) for j in range(s.N)], x)

    @classmethod
    def from_polynomial(cls, p: Polynomial, N: int, x: str = "x") -> "TruncatedElement":
        """Truncate a polynomial in ``x`` and the base variables mod ``x^N``."""
        i = p.ring.index(x)
        base = VariableSet(tuple(n for n in p.ring.names if n != x))
        buckets = [dict() for _ in range(N)]
        for e, c in p.terms.items():
            k = e[i]
            if k < N:
                buckets[k][e[:i] + e[i + 1:]] = c
        return cls(base, [Polynomial(base, b) for b in buckets], x)

    def _check(self, other: "TruncatedElement"):
        if not isinstance(other, TruncatedElement):
            raise TypeError("expected a TruncatedElement")
        if other.N != self.N:
            raise StructuralError(f"truncation mismatch: {self.N} vs {other.N}")
        if other.base != self.base or other.x != self.x:
            raise RingMismatchError(f"{self.ring.names} vs {other.ring.names}")

    def __eq__(self, other):
        if not isinstance(other, TruncatedElement):
            return NotImplemented
        return self.N == other.N and self.base == other.base and self.coeffs == other.coeffs

    __hash__ = None

    def __add__(self, other):
        self._check(other)
        return TruncatedElement(self.base, [a + b for a, b in zip(self.coeffs, other.coeffs)], self.x)

    def __sub__(self, other):
        self._check(other)
        return TruncatedElement(self.base, [a - b for a, b in zip(self.coeffs, other.coeffs)], self.x)

    def __neg__(self):
        return TruncatedElement(self.base, [-a for a in self.coeffs], self.x)

    def __mul__(self, other):
        if isinstance(other, TruncatedElement):
            return mul_truncated(self, other)
        return TruncatedElement(self.base, [a * other for a in self.coeffs], self.x)

    def __pow__(self, k: int):
        out = TruncatedElement.constant(self.base.one(), self.N, self.x)
        for _ in range(k):
            out = mul_truncated(out, self)
        return out

    def shift(self, k: int = 1) -> "TruncatedElement":
        """Multiply by ``x^k``; the top ``k`` slots fall off."""
        zero = self.base.zero()
        return TruncatedElement(self.base, ([zero] * k + list(self.coeffs))[: self.N], self.x)

    def retruncate(self, N: int) -> "TruncatedElement":
        if N > self.N:
            raise StructuralError("cannot raise precision of a truncated element")
        return TruncatedElement(self.base, self.coeffs[:N], self.x)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def __repr__(self):
        return f"TruncatedElement(N={self.N}, {to_polynomial(self)})"

    def to_json(self) -> list:
        return [c.to_json() for c in self.coeffs]

    @classmethod
    def from_json(cls, data: list, x: str = "x") -> "TruncatedElement":
        if not isinstance(data, list) or not data:
            raise StructuralError("truncated element must be a nonempty list")
        coeffs = [Polynomial.from_json(c) for c in data]
        return cls(coeffs[0].ring, coeffs, x)


def mul_truncated(a: TruncatedElement, b: TruncatedElement) -> TruncatedElement:
    a._check(b)
    N = a.N
    out = [a.base.zero() for _ in range(N)]
    for i, ca in enumerate(a.coeffs):
        if ca.is_zero():
            continue
        for j in range(N - i):
            cb = b.coeffs[j]
            if not cb.is_zero():
                out[i + j] = out[i + j] + ca * cb
    return TruncatedElement(a.base, out, a.x)


def to_polynomial(e: TruncatedElement, ring: VariableSet | None = None) -> Polynomial:
    """Reassemble ``sum c_j x^j`` over ``ring`` (default: x then base)."""
    ring = ring or e.ring
    xi = ring.index(e.x)
    out = {}
    for j, c in enumerate(e.coeffs):
        for ce, cv in c.to_ring(_without(ring, e.x)).terms.items():
            full = ce[:xi] + (j,) + ce[xi:]
            out[full] = cv
    return Polynomial(ring, out)


def _without(ring: VariableSet, name: str) -> VariableSet:
    return VariableSet(tuple(n for n in ring.names if n != name))


def square_shifted(var: str, s: GenericSeries, h: int, base: VariableSet, x: str = "x") -> TruncatedElement:
    """``(var - s)^h`` mod ``x^N`` by binomial expansion in the series."""
    if h < 2:
        raise StructuralError("exponent must be at least 2")
    N = s.N
    v = base.gen(var)
    minus_s = -TruncatedElement.from_series(s, base, x)
    power = TruncatedElement.constant(base.one(), N, x)
    total = TruncatedElement(base, [base.zero()] * N, x)
    for k in range(h + 1):
        total = total + power * (v ** (h - k)).scale(comb(h, k))
        power = mul_truncated(power, minus_s)
    return total


@dataclass(frozen=True)
class EndpieceDecomposition:
    """``e = x^r * endpiece + head * x + leading`` mod ``x^N``.

    ``head`` collects ``b_1 .. b_{r-1}`` as ``sum b_j x^(j-1)``; ``tail``
    holds ``b_1 .. b_{N-1}``.
    """

    r: int
    endpiece: TruncatedElement
    head: Polynomial
    leading: Polynomial
    tail: tuple[Polynomial, ...]

    def reassemble(self, N: int) -> TruncatedElement:
        ring = self.head.ring
        x = self.endpiece.x
        t = ring.gen(x)
        p = t ** self.r * to_polynomial(self.endpiece, ring) + self.head * t + self.leading.to_ring(ring)
        return TruncatedElement.from_polynomial(p.truncate(x, N), N, x)

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "endpiece": self.endpiece.to_json(),
            "head": self.head.to_json(),
            "leading": self.leading.to_json(),
            "tail": [b.to_json() for b in self.tail],
        }


def endpiece(e: TruncatedElement, r: int) -> EndpieceDecomposition:
    """Split off the ``r``-th endpiece ``sum_{j>=r} b_j x^(j-r)``.

    The endpiece is known modulo ``x^(N-r)``. ``head`` is a polynomial in
    ``x`` and the base variables.
    """
    N = e.N
    if not 1 <= r < N:
        raise StructuralError(f"endpiece index r={r} outside 1..{N - 1}")
    tail = e.coeffs[1:]
    piece = TruncatedElement(e.base, e.coeffs[r:], e.x)
    ring = e.ring
    t = ring.gen(e.x)
    head = ring.zero()
    for j in range(1, r):
        head = head + e.coeffs[j].to_ring(ring) * t ** (j - 1)
    return EndpieceDecomposition(r, piece, head, e.coeffs[0], tuple(tail))
