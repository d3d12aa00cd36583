"""Integral dependence of an element over an ideal, via reductions.

``r`` is integral over ``I`` exactly when ``I`` is a reduction of
``J = I + (r)``, that is ``I * J^(n-1) = J^n`` for some ``n >= 1``. Each
candidate ``n`` is decided by reduced Groebner basis equality.

A ``modulus`` ideal may be supplied; every comparison is then made after
adding it to both sides. This is how identities that only hold modulo a
power of ``x`` are certified.
"""

from __future__ import annotations

from dataclasses import dataclass

from .groebner import Ideal, _check_compatible, colength, ideal_contains, ideal_equal, normal_form
from .polycore import Polynomial, RingMismatchError, StructuralError

DEFAULT_NMAX = 10


class PreconditionError(StructuralError):
    """An operation was called on inputs outside its domain."""


def ideal_product(I: Ideal, J: Ideal) -> Ideal:
    """Ideal generated by all pairwise products of generators."""
    _check_compatible(I, J)
    seen = set()
    gens = []
    for a in I.generators:
        for b in J.generators:
            p = a * b
            if p not in seen:
                seen.add(p)
                gens.append(p)
    return I.with_generators(gens)


def ideal_power(I: Ideal, n: int) -> Ideal:
    if n < 0:
        raise StructuralError("negative ideal power")
    out = I.with_generators([I.ring.one()])
    for _ in range(n):
        out = ideal_product(out, I)
    return out


@dataclass(frozen=True)
class ReductionWitness:
    """Certificate that ``I * J^(n-1) = J^n`` (plus ``modulus`` if given)."""

    n: int
    I: Ideal
    J: Ideal
    left_gb: tuple[Polynomial, ...]
    right_gb: tuple[Polynomial, ...]
    modulus: Ideal | None = None

    def verify(self) -> bool:
        """Recompute both sides from scratch and compare."""
        return reduction_holds(self.I, self.J, self.n, self.modulus)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "order": self.J.order.tag,
            "I": [g.to_json() for g in self.I.generators],
            "J": [g.to_json() for g in self.J.generators],
            "modulus": None if self.modulus is None else [g.to_json() for g in self.modulus.generators],
            "left_gb": [g.to_json() for g in self.left_gb],
            "right_gb": [g.to_json() for g in self.right_gb],
        }


def _with_modulus(K: Ideal, modulus: Ideal | None) -> Ideal:
    if modulus is None:
        return K
    return K.with_generators(K.generators + modulus.generators)


def reduction_holds(I: Ideal, J: Ideal, n: int, modulus: Ideal | None = None) -> bool:
    """Independent single-``n`` check, building both sides from generators."""
    if n < 1:
        raise StructuralError("n must be positive")
    left = _with_modulus(ideal_product(I, ideal_power(J, n - 1)), modulus)
    right = _with_modulus(ideal_power(J, n), modulus)
    return ideal_equal(left, right)


def _products(A: list[Polynomial], B: tuple[Polynomial, ...], modulus: Ideal | None) -> list[Polynomial]:
    seen = set()
    out = []
    for a in A:
        for b in B:
            p = a * b
            if modulus is not None:
                p = normal_form(p, modulus)
            if p and p not in seen:
                seen.add(p)
                out.append(p)
    return out


def _plausible(left: Ideal, right: Ideal, extra, power) -> bool:
    """Cheap necessary test for ``left == right`` given ``left ⊆ right``.

    For finite colength the two ideals agree iff their colengths do, and
    colength is read off whichever basis is cheapest; otherwise test the
    extra generators of ``right`` for membership in ``left``.
    """
    try:
        return colength(left) == colength(right)
    except StructuralError:
        return all(normal_form(e * p, left).is_zero() for e in extra for p in power)


def _search(I: Ideal, J: Ideal, extra: list[Polynomial], n_max: int,
            modulus: Ideal | None) -> ReductionWitness | None:
    # J = I + (extra). With G generating J^(n-1), I*J^(n-1) is I*G and
    # J^n = I*G + extra*G, so equality reduces to extra*G lying in I*G.
    # Generators are kept as plain products (reduced by the modulus):
    # feeding Groebner bases back in only adds redundant generators.
    if n_max < 1:
        raise StructuralError("n_max must be at least 1")
    power = [J.ring.one()]
    for n in range(1, n_max + 1):
        left = _with_modulus(J.with_generators(_products(power, I.generators, modulus)), modulus)
        right = _with_modulus(J.with_generators(_products(power, J.generators, modulus)), modulus)
        if _plausible(left, right, extra, power):
            if ideal_equal(left, right):
                return ReductionWitness(n, I, J, left.gb, right.gb, modulus)
        if n < n_max:
            power = _products(power, J.generators, modulus)
    return None


def is_integral_over(r: Polynomial, I: Ideal, n_max: int = DEFAULT_NMAX,
                     modulus: Ideal | None = None) -> ReductionWitness | None:
    """Least ``n <= n_max`` with ``I * J^(n-1) = J^n`` for ``J = I + (r)``.

    ``None`` means no such ``n`` up to ``n_max``; that is not a proof that
    ``r`` fails to be integral.
    """
    if r.ring != I.ring:
        raise RingMismatchError(f"{r.ring.names} vs {I.ring.names}")
    if modulus is not None:
        _check_compatible(I, modulus)
    J = I.with_generators(I.generators + (r,))
    return _search(I, J, [r], n_max, modulus)


def is_reduction(I: Ideal, J: Ideal, n_max: int = DEFAULT_NMAX,
                 modulus: Ideal | None = None) -> ReductionWitness | None:
    """Least ``n <= n_max`` with ``I * J^(n-1) = J^n``; requires ``I ⊆ J``."""
    _check_compatible(I, J)
    if not ideal_contains(J, I):
        raise PreconditionError("I is not contained in J")
    return _search(I, J, list(J.generators), n_max, modulus)
