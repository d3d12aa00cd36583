"""Buchberger's algorithm and the ideal operations built on it.

Every ideal is canonically represented by its reduced Groebner basis with
respect to a fixed :class:`MonomialOrder`; two ideals over the same ring
and order are equal exactly when those bases coincide term for term.
"""

from __future__ import annotations

import heapq
import itertools
import json
import threading
from dataclasses import dataclass
from typing import Iterable, Sequence

from gmpy2 import mpq

from .polycore import (
    ONE,
    ZERO,
    Polynomial,
    RingMismatchError,
    StructuralError,
    VariableSet,
)


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order; ``key`` sorts ascending from the largest monomial.

    ``block`` orders split the variables into consecutive blocks of the
    given sizes (the last block takes whatever is left) and compare block
    by block, grevlex inside each block. A monomial involving the first
    block therefore beats every monomial that avoids it.
    """

    kind: str = "grevlex"
    block: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in ("grevlex", "lex", "block"):
            raise StructuralError(f"unknown monomial order {self.kind!r}")
        sizes = (self.block,) if isinstance(self.block, int) else tuple(self.block)
        if self.kind != "block":
            sizes = ()
        elif not sizes or any(k < 1 for k in sizes):
            raise StructuralError("block order needs positive block sizes")
        object.__setattr__(self, "block", sizes)

    @property
    def tag(self) -> str:
        if self.kind == "block":
            return "block:" + ",".join(map(str, self.block))
        return self.kind

    @classmethod
    def parse(cls, tag: str) -> "MonomialOrder":
        try:
            if tag.startswith("block:"):
                return cls("block", tuple(int(k) for k in tag.split(":", 1)[1].split(",")))
        except ValueError:
            raise StructuralError(f"bad block order tag {tag!r}") from None
        return cls(tag)

    def nested(self, k: int) -> "MonomialOrder":
        """The order with a new first block of ``k`` variables prepended."""
        if self.kind == "block":
            return MonomialOrder("block", (k,) + self.block)
        if self.kind == "lex":
            return self
        return MonomialOrder("block", (k,))

    def key(self, e):
        if self.kind == "grevlex":
            return (-sum(e),) + e[::-1]
        if self.kind == "lex":
            return tuple(-v for v in e)
        out = ()
        start = 0
        for k in self.block:
            part = e[start:start + k]
            out += (-sum(part),) + part[::-1]
            start += k
        part = e[start:]
        return out + (-sum(part),) + part[::-1]

    def compare(self, a, b) -> int:
        """+1 if monomial ``a`` is larger, -1 if smaller, 0 if equal."""
        ka, kb = self.key(a), self.key(b)
        return (ka < kb) - (ka > kb)

    def leading(self, p: Polynomial):
        if not p.terms:
            raise StructuralError("the zero polynomial has no leading term")
        return min(p.terms, key=self.key)


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


# ---------------------------------------------------------------------------
# term-level kernels; polynomials are plain dicts here


def _divides(a, b) -> bool:
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _lcm(a, b):
    return tuple(x if x > y else y for x, y in zip(a, b))


def _coprime(a, b) -> bool:
    for x, y in zip(a, b):
        if x and y:
            return False
    return True


def _reduce(terms: dict, basis: Sequence, key) -> dict:
    """Fully reduce ``terms`` by ``basis``, a list of ``(lm, terms)`` pairs
    with monic leading terms. Returns the remainder as a new dict."""
    p = dict(terms)
    heap = [(key(e), e) for e in p]
    heapq.heapify(heap)
    rem = {}
    pop = heapq.heappop
    push = heapq.heappush
    while heap:
        _, e = pop(heap)
        c = p.pop(e, None)
        if c is None:
            continue
        for lm, g in basis:
            if _divides(lm, e):
                q = tuple(a - b for a, b in zip(e, lm))
                for ge, gc in g.items():
                    if ge == lm:
                        continue
                    ne = tuple(a + b for a, b in zip(ge, q))
                    old = p.get(ne)
                    if old is None:
                        p[ne] = -c * gc
                        push(heap, (key(ne), ne))
                    else:
                        v = old - c * gc
                        if v:
                            p[ne] = v
                        else:
                            del p[ne]
                break
        else:
            rem[e] = c
    return rem


def _monic(terms: dict, key):
    lm = min(terms, key=key)
    lc = terms[lm]
    if lc == 1:
        return lm, terms
    inv = 1 / lc
    return lm, {e: c * inv for e, c in terms.items()}


def _spoly(f, g):
    (lf, tf), (lg, tg) = f, g
    l = _lcm(lf, lg)
    mf = tuple(a - b for a, b in zip(l, lf))
    mg = tuple(a - b for a, b in zip(l, lg))
    out = {}
    for e, c in tf.items():
        if e == lf:
            continue
        out[tuple(a + b for a, b in zip(e, mf))] = c
    for e, c in tg.items():
        if e == lg:
            continue
        ne = tuple(a + b for a, b in zip(e, mg))
        v = out.get(ne, ZERO) - c
        if v:
            out[ne] = v
        else:
            out.pop(ne, None)
    return out


def _buchberger(polys: list[dict], order: MonomialOrder, strategy: str = "sugar") -> list:
    """Reduced Groebner basis of the given term dicts as ``(lm, terms)``
    pairs, sorted by descending leading monomial.

    Pairs are chosen by smallest sugar degree (``strategy="sugar"``) or by
    smallest lcm (``"normal"``), ties broken by the lcm in the order and
    then by pair index, so the run is deterministic. The product and chain
    criteria prune pairs in the Gebauer-Moeller form.
    """
    key = order.key
    basis: list = []  # every element ever added, indexed
    active: list[int] = []
    pairs: list[tuple[int, int]] = []
    sugar: list[int] = []

    def lcm_of(pair):
        return _lcm(basis[pair[0]][0], basis[pair[1]][0])

    def update(h: int):
        nonlocal active, pairs
        lh = basis[h][0]
        cand = [(h, g) for g in active]
        kept = []
        while cand:
            pr = cand.pop(0)
            lg = basis[pr[1]][0]
            l1 = _lcm(lh, lg)
            if _coprime(lh, lg):
                kept.append(pr)
                continue
            dominated = False
            for other in itertools.chain(cand, kept):
                if _divides(_lcm(lh, basis[other[1]][0]), l1):
                    dominated = True
                    break
            if not dominated:
                kept.append(pr)
        new_pairs = [pr for pr in kept if not _coprime(lh, basis[pr[1]][0])]
        survivors = []
        for pr in pairs:
            a, b = pr
            l = lcm_of(pr)
            if (
                _divides(lh, l)
                and _lcm(basis[a][0], lh) != l
                and _lcm(basis[b][0], lh) != l
            ):
                continue
            survivors.append(pr)
        pairs = survivors + new_pairs
        active = [g for g in active if not _divides(lh, basis[g][0])] + [h]

    def current():
        # trying small leading monomials first keeps reducers short
        return sorted((basis[i] for i in active), key=lambda pair: key(pair[0]), reverse=True)

    # interreduce the input: each polynomial against its predecessors, to a fixed point
    start = [_monic(p, key) for p in polys if p]
    while True:
        nxt = []
        for i, (lm, t) in enumerate(start):
            r = _reduce(t, start[:i], key)
            if r:
                nxt.append(_monic(r, key))
        if nxt == start:
            break
        start = nxt
    start.sort(key=lambda pair: key(pair[0]), reverse=True)
    for pair in start:
        basis.append(pair)
        sugar.append(max(sum(e) for e in pair[1]))
        update(len(basis) - 1)

    def pair_sugar(pr):
        a, b = pr
        l = lcm_of(pr)
        la, lb = basis[a][0], basis[b][0]
        return max(sugar[a] + sum(l) - sum(la), sugar[b] + sum(l) - sum(lb))

    while pairs:
        if strategy == "normal":
            best = min(pairs, key=lambda pr: (_neg(key(lcm_of(pr))), pr))
        else:
            best = min(pairs, key=lambda pr: (pair_sugar(pr), _neg(key(lcm_of(pr))), pr))
        pairs.remove(best)
        s_sugar = pair_sugar(best)
        s = _spoly(basis[best[0]], basis[best[1]])
        if not s:
            continue
        r = _reduce(s, current(), key)
        if r:
            basis.append(_monic(r, key))
            sugar.append(max(s_sugar, max(sum(e) for e in r)))
            update(len(basis) - 1)

    # minimal basis, then interreduction
    g = [basis[i] for i in active]
    minimal = []
    for i, (lm, t) in enumerate(g):
        if any(j != i and _divides(g[j][0], lm) and (g[j][0] != lm or j < i) for j in range(len(g))):
            continue
        minimal.append((lm, t))
    reduced = []
    for i, (lm, t) in enumerate(minimal):
        others = [m for j, m in enumerate(minimal) if j != i]
        tail = {e: c for e, c in t.items() if e != lm}
        r = _reduce(tail, others, key)
        r[lm] = ONE
        reduced.append((lm, r))
    reduced.sort(key=lambda pair: key(pair[0]))
    return reduced


def _neg(k):
    # among equal degrees, the pair whose lcm is smallest in the order goes first
    return tuple(-v for v in k)


# ---------------------------------------------------------------------------
# Ideal


class Ideal:
    """Finitely generated ideal with a lazily computed reduced Groebner basis."""

    def __init__(self, generators: Iterable[Polynomial], order: MonomialOrder = GREVLEX,
                 ring: VariableSet | None = None, *, hint: "ComputeHint | None" = None):
        gens = list(generators)
        if ring is None:
            if not gens:
                raise StructuralError("an ideal with no generators needs an explicit ring")
            ring = gens[0].ring
        for g in gens:
            if g.ring != ring:
                raise RingMismatchError(f"{g.ring.names} vs {ring.names}")
        if order.kind == "block" and sum(order.block) > len(ring):
            raise StructuralError("block size exceeds the number of variables")
        self.ring = ring
        self.order = order
        self.generators = tuple(g for g in gens if g)
        self.hint = hint
        self._gb: tuple | None = None
        self._pairs = None
        self._source = None
        self._lock = threading.Lock()

    def _compute(self):
        if self._gb is None:
            with self._lock:
                if self._gb is None:
                    pairs = None
                    if self.hint is not None:
                        pairs = _via_hint(self)
                    if pairs is None:
                        pairs = _buchberger([g.terms for g in self.generators], self.order)
                    self._pairs = pairs
                    self._gb = tuple(Polynomial(self.ring, t, _trusted=True) for _, t in pairs)
        return self._gb

    @property
    def gb(self) -> tuple[Polynomial, ...]:
        return self._compute()

    def _basis_pairs(self):
        self._compute()
        return self._pairs

    def leading_monomials(self) -> list[tuple]:
        return [lm for lm, _ in self._basis_pairs()]

    def is_whole_ring(self) -> bool:
        gb = self.gb
        return len(gb) == 1 and gb[0].is_constant()

    def with_order(self, order: MonomialOrder) -> "Ideal":
        return Ideal(self.generators, order, self.ring, hint=self.hint)

    def with_generators(self, generators: Iterable[Polynomial]) -> "Ideal":
        """Same ring, order and hint; new generators."""
        return Ideal(generators, self.order, self.ring, hint=self.hint)

    def __contains__(self, p: Polynomial) -> bool:
        return normal_form(p, self).is_zero()

    def __eq__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        return ideal_equal(self, other)

    __hash__ = None

    def __add__(self, other: "Ideal") -> "Ideal":
        _check_compatible(self, other)
        return self.with_generators(self.generators + other.generators)

    def __repr__(self):
        return f"Ideal({', '.join(str(g) for g in self.generators)})"

    def to_json(self) -> dict:
        return {
            "order": self.order.tag,
            "vars": list(self.ring.names),
            "generators": [g.to_json() for g in self.generators],
        }

    @classmethod
    def from_json(cls, data) -> "Ideal":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            ring = VariableSet(tuple(data["vars"]))
            order = MonomialOrder.parse(data.get("order", "grevlex"))
            gens = [Polynomial.from_json(g, ring) for g in data["generators"]]
        except (KeyError, TypeError) as exc:
            raise StructuralError(f"malformed ideal JSON: {exc}") from None
        return cls(gens, order, ring)

    def gb_json(self) -> list:
        return [g.to_json() for g in self.gb]


def _check_compatible(I: Ideal, J: Ideal):
    if I.ring != J.ring:
        raise RingMismatchError(f"{I.ring.names} vs {J.ring.names}")
    if I.order != J.order:
        raise StructuralError(f"order mismatch: {I.order.tag} vs {J.order.tag}")


# ---------------------------------------------------------------------------
# operations


def groebner_basis(I: Ideal) -> list[Polynomial]:
    return list(I.gb)


def normal_form(p: Polynomial, I: Ideal) -> Polynomial:
    if p.ring != I.ring:
        raise RingMismatchError(f"{p.ring.names} vs {I.ring.names}")
    r = _reduce(p.terms, I._basis_pairs(), I.order.key)
    return Polynomial(p.ring, r, _trusted=True)


def reduce_with_quotients(p: Polynomial, divisors: Sequence[Polynomial],
                          order: MonomialOrder = GREVLEX):
    """Multivariate division: ``p = sum(q_i * d_i) + r`` with no term of ``r``
    divisible by a leading monomial of the divisors."""
    ring = p.ring
    key = order.key
    lead = []
    for d in divisors:
        if d.ring != ring:
            raise RingMismatchError(f"{d.ring.names} vs {ring.names}")
        if d.is_zero():
            raise StructuralError("division by the zero polynomial")
        lm = order.leading(d)
        lead.append((lm, d.terms[lm]))
    quotients = [dict() for _ in divisors]
    rest = dict(p.terms)
    rem = {}
    while rest:
        e = min(rest, key=key)
        c = rest[e]
        for i, (lm, lc) in enumerate(lead):
            if _divides(lm, e):
                q = tuple(a - b for a, b in zip(e, lm))
                f = c / lc
                quotients[i][q] = quotients[i].get(q, ZERO) + f
                for de, dc in divisors[i].terms.items():
                    ne = tuple(a + b for a, b in zip(de, q))
                    v = rest.get(ne, ZERO) - f * dc
                    if v:
                        rest[ne] = v
                    else:
                        rest.pop(ne, None)
                break
        else:
            rem[e] = c
            del rest[e]
    qs = [Polynomial(ring, {e: c for e, c in q.items() if c}, _trusted=True) for q in quotients]
    return qs, Polynomial(ring, rem, _trusted=True)


def divide_exact(p: Polynomial, d: Polynomial, order: MonomialOrder = GREVLEX) -> Polynomial:
    (q,), r = reduce_with_quotients(p, [d], order)
    if not r.is_zero():
        raise StructuralError(f"{d} does not divide {p}")
    return q


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder = GREVLEX) -> Polynomial:
    key = order.key
    a = _monic(f.terms, key)
    b = _monic(g.terms, key)
    return Polynomial(f.ring, _spoly(a, b), _trusted=True)


def is_groebner(basis: Sequence[Polynomial], order: MonomialOrder = GREVLEX) -> bool:
    """Buchberger's criterion: every S-polynomial reduces to zero."""
    if not basis:
        return True
    key = order.key
    pairs = [_monic(g.terms, key) for g in basis if g]
    for i in range(len(pairs)):
        for j in range(i + 1, len(pairs)):
            s = _spoly(pairs[i], pairs[j])
            if s and _reduce(s, pairs, key):
                return False
    return True


def is_reduced(basis: Sequence[Polynomial], order: MonomialOrder = GREVLEX) -> bool:
    """Monic, and no term of any element divisible by another's leading monomial."""
    key = order.key
    lms = []
    for g in basis:
        lm = order.leading(g)
        if g.terms[lm] != 1:
            return False
        lms.append(lm)
    for i, g in enumerate(basis):
        for e in g.terms:
            for j, lm in enumerate(lms):
                if i != j and _divides(lm, e):
                    return False
    return [key(m) for m in lms] == sorted(key(m) for m in lms)


def ideal_equal(I: Ideal, J: Ideal) -> bool:
    _check_compatible(I, J)
    return I.gb == J.gb


def ideal_contains(I: Ideal, J: Ideal) -> bool:
    """``J`` is contained in ``I``."""
    _check_compatible(I, J)
    return all(normal_form(g, I).is_zero() for g in J.generators)


def _fresh_name(ring: VariableSet, stem: str) -> str:
    name = stem
    i = 0
    while name in ring:
        i += 1
        name = f"{stem}{i}"
    return name


def eliminate(I: Ideal, keep: Iterable[str], inner: MonomialOrder | None = None) -> Ideal:
    """``I`` intersected with the subring in the ``keep`` variables.

    The result lives over the variable set formed by ``keep`` in the
    original variable order, ordered by ``inner`` (grevlex unless ``I``
    itself has a usable order). The elimination order puts the dropped
    variables in a leading block in front of ``inner``.
    """
    keep = set(keep)
    for name in keep:
        I.ring.index(name)
    kept = [n for n in I.ring.names if n in keep]
    dropped = [n for n in I.ring.names if n not in keep]
    sub = VariableSet(tuple(kept))
    if inner is None:
        inner = I.order if I.order.kind != "block" or not dropped else GREVLEX
    if not dropped:
        return Ideal(I.generators, inner, sub)
    work = VariableSet(tuple(dropped + kept))
    order = inner.nested(len(dropped))
    gens = [g.to_ring(work) for g in I.generators]
    J = Ideal(gens, order, work)
    k = len(dropped)
    survivors = [g for g in J.gb if all(not any(e[:k]) for e in g.terms)]
    return Ideal([g.to_ring(sub) for g in survivors], inner, sub)


def intersect(I: Ideal, J: Ideal) -> Ideal:
    _check_compatible(I, J)
    t = _fresh_name(I.ring, "t")
    big = I.ring.extend(t)
    T = big.gen(t)
    gens = [T * g.to_ring(big) for g in I.gb]
    gens += [(1 - T) * g.to_ring(big) for g in J.gb]
    K = eliminate(Ideal(gens, GREVLEX, big), I.ring.names, I.order)
    return Ideal(K.generators, I.order, I.ring)


def colon(I: Ideal, h: Polynomial) -> Ideal:
    """The ideal quotient ``(I : h)`` via ``I ∩ (h)`` divided by ``h``."""
    if h.ring != I.ring:
        raise RingMismatchError(f"{h.ring.names} vs {I.ring.names}")
    if h.is_zero():
        raise StructuralError("colon by the zero polynomial")
    if h.is_constant():
        return Ideal(I.generators, I.order, I.ring)
    if not I.generators:
        return Ideal([], I.order, I.ring)
    if normal_form(h, I).is_zero():
        return Ideal([I.ring.one()], I.order, I.ring)
    if is_zero_dimensional(I):
        return _colon_finite(I, h)
    return colon_by_intersection(I, h)


def colon_by_intersection(I: Ideal, h: Polynomial) -> Ideal:
    K = intersect(I, Ideal([h], I.order, I.ring))
    return Ideal([divide_exact(g, h, I.order) for g in K.gb], I.order, I.ring)


def _finite(lms, n: int) -> bool:
    pure = set()
    for lm in lms:
        support = [i for i, v in enumerate(lm) if v]
        if not support:
            return True
        if len(support) == 1:
            pure.add(support[0])
    return len(pure) == n


def _staircase(lms, n: int) -> list[tuple]:
    out = []
    frontier = [(0,) * n]
    seen = set(frontier)
    while frontier:
        e = frontier.pop()
        if any(_divides(lm, e) for lm in lms):
            continue
        out.append(e)
        for i in range(n):
            ne = e[:i] + (e[i] + 1,) + e[i + 1:]
            if ne not in seen:
                seen.add(ne)
                frontier.append(ne)
    return out


def is_zero_dimensional(I: Ideal) -> bool:
    """Finite colength: every variable has a pure power among the leading monomials."""
    if not I.generators:
        return len(I.ring) == 0
    return _finite(I.leading_monomials(), len(I.ring))


def standard_monomials(I: Ideal) -> list[tuple]:
    """Monomials outside the leading ideal, descending; only for finite colength."""
    if not is_zero_dimensional(I):
        raise StructuralError("infinitely many standard monomials")
    out = _staircase(I.leading_monomials(), len(I.ring))
    out.sort(key=I.order.key)
    return out


# ---------------------------------------------------------------------------
# finite quotients and basis conversion


@dataclass(frozen=True)
class ComputeHint:
    """Route a Groebner basis computation through another order.

    The basis is first computed over ``variables`` (a permutation of the
    ring's variables) in ``order``; when that basis has finite colength it
    is converted to the ideal's own order by linear algebra on the
    quotient. The reduced basis that results does not depend on the hint.
    """

    variables: tuple[str, ...]
    order: MonomialOrder = LEX


class _Quotient:
    """Multiplication by each variable on the monomial basis of ``R/I``."""

    def __init__(self, pairs, key, nvars: int, perm=None):
        # perm[i]: position in the basis coordinates of ring variable i
        self.perm = perm or list(range(nvars))
        self.nvars = nvars
        self.pairs = pairs
        self.key = key
        lms = [lm for lm, _ in pairs]
        self.basis = _staircase(lms, nvars)
        self.basis.sort(key=key)
        self.index = {e: i for i, e in enumerate(self.basis)}
        self._table: dict = {}

    def vector(self, e) -> dict:
        r = _reduce({e: ONE}, self.pairs, self.key)
        return {self.index[m]: c for m, c in r.items()}

    def one(self) -> dict:
        return self.vector((0,) * self.nvars)

    def mul_monomial(self, e, vec: dict) -> dict:
        """``e`` in ring coordinates."""
        for i, k in enumerate(e):
            for _ in range(k):
                vec = self.mul_var(i, vec)
        return vec

    def image(self, p: Polynomial) -> dict:
        """Coordinates of ``p`` modulo the ideal."""
        out: dict = {}
        one = self.one()
        for e, c in p.terms.items():
            for r, v in self.mul_monomial(e, one).items():
                nv = out.get(r, ZERO) + c * v
                if nv:
                    out[r] = nv
                else:
                    out.pop(r, None)
        return out

    def mul_var(self, i: int, vec: dict) -> dict:
        j = self.perm[i]
        out: dict = {}
        for b, c in vec.items():
            k = (j, b)
            col = self._table.get(k)
            if col is None:
                e = self.basis[b]
                col = self.vector(e[:j] + (e[j] + 1,) + e[j + 1:])
                self._table[k] = col
            for r, v in col.items():
                nv = out.get(r, ZERO) + c * v
                if nv:
                    out[r] = nv
                else:
                    out.pop(r, None)
        return out


def _fglm(Q: _Quotient, order: MonomialOrder, relations=()) -> list:
    """Reduced basis, in ``order``, of the ideal whose quotient is ``Q``
    modulo the span of ``relations`` (which must itself be an ideal of Q)."""
    key = order.key
    n = Q.nvars
    rows: dict[int, tuple[dict, dict]] = {}

    def reduce(v: dict):
        # rows are echelon by their smallest index and only add larger
        # indices, so pending positions can be visited through a heap
        v = dict(v)
        combo: dict = {}
        todo = list(v)
        heapq.heapify(todo)
        last = -1
        while todo:
            p = heapq.heappop(todo)
            if p == last or p not in v:
                continue
            last = p
            if p not in rows:
                break
            c = v[p]
            rv, rc = rows[p]
            for k, x in rv.items():
                old = v.get(k)
                if old is None:
                    v[k] = -c * x
                    heapq.heappush(todo, k)
                else:
                    nv = old - c * x
                    if nv:
                        v[k] = nv
                    else:
                        del v[k]
            for k, x in rc.items():
                combo[k] = combo.get(k, ZERO) + c * x
        return v, combo

    def insert(v: dict, combo: dict):
        p = min(v)
        inv = 1 / v[p]
        rows[p] = ({k: x * inv for k, x in v.items()}, {k: x * inv for k, x in combo.items() if x})

    for rel in relations:
        v, _ = reduce(rel)
        if v:
            insert(v, {})

    zero = (0,) * n
    stair: list[tuple] = []
    lms: list[tuple] = []
    result = []
    pending = {zero: Q.one()}
    heap = [(_neg(key(zero)), zero)]
    while heap:
        _, m = heapq.heappop(heap)
        vm = pending.pop(m)
        if any(_divides(lm, m) for lm in lms):
            continue
        v, combo = reduce(vm)
        if not v:
            terms = {m: ONE}
            for j, c in combo.items():
                if c:
                    terms[stair[j]] = -c
            result.append((m, terms))
            lms.append(m)
            continue
        t = len(stair)
        stair.append(m)
        rc = {j: -c for j, c in combo.items() if c}
        rc[t] = ONE
        insert(v, rc)
        for i in range(n):
            nm = m[:i] + (m[i] + 1,) + m[i + 1:]
            if nm not in pending and not any(_divides(lm, nm) for lm in lms):
                pending[nm] = Q.mul_var(i, vm)
                heapq.heappush(heap, (_neg(key(nm)), nm))
    result.sort(key=lambda pair: key(pair[0]))
    return result


def _hint_basis(I: Ideal):
    """Basis pairs in the hint's variables and order, computed once."""
    if I._source is None:
        hint = I.hint
        if sorted(hint.variables) != sorted(I.ring.names):
            raise StructuralError(f"hint variables {hint.variables} do not match {I.ring.names}")
        hring = VariableSet(tuple(hint.variables))
        I._source = _buchberger([g.to_ring(hring).terms for g in I.generators], hint.order)
    return I._source


def colength(I: Ideal) -> int:
    """``dim_Q R/I`` for a finite-colength ideal.

    Uses the hint basis when there is one, so no basis conversion runs.
    """
    if not I.generators:
        raise StructuralError("the zero ideal has infinite colength")
    if I.hint is not None and I._gb is None:
        with I._lock:
            lms = [lm for lm, _ in _hint_basis(I)]
    else:
        lms = I.leading_monomials()
    if not _finite(lms, len(I.ring)):
        raise StructuralError("ideal does not have finite colength")
    return len(_staircase(lms, len(I.ring)))


def _via_hint(I: Ideal):
    hint = I.hint
    src = _hint_basis(I)
    hring = VariableSet(tuple(hint.variables))
    n = len(I.ring)
    perm = [hring.index(name) for name in I.ring.names]
    if not _finite([lm for lm, _ in src], n):
        back = [Polynomial(hring, t, _trusted=True).to_ring(I.ring).terms for _, t in src]
        return _buchberger(back, I.order)
    Q = _Quotient(src, hint.order.key, n, perm)
    # mul_var takes ring variable indices, so the result is in ring coordinates
    return _fglm(Q, I.order)


def _colon_finite(I: Ideal, h: Polynomial) -> Ideal:
    # (I : h) / I is the kernel of multiplication by h on R/I
    key = I.order.key
    Q = _Quotient(I._basis_pairs(), key, len(I.ring))
    vh = Q.image(h)
    rows = [dict() for _ in Q.basis]  # rows[i][j]: coefficient of basis[i] in NF(basis[j]*h)
    for j, b in enumerate(Q.basis):
        for i, v in Q.mul_monomial(b, vh).items():
            rows[i][j] = v
    kernel = _nullspace(rows, len(Q.basis))
    pairs = _fglm(Q, I.order, kernel)
    J = I.with_generators([Polynomial(I.ring, t, _trusted=True) for _, t in pairs])
    J._gb = tuple(Polynomial(I.ring, t, _trusted=True) for _, t in pairs)
    J._pairs = pairs
    return J


def _nullspace(rows: list[dict], ncols: int) -> list[dict]:
    """Exact nullspace of a sparse matrix given as row dicts ``{col: value}``."""
    pivots: dict[int, dict] = {}  # pivot column -> normalized row
    for row in rows:
        r = dict(row)
        for pc, prow in pivots.items():
            c = r.get(pc)
            if c:
                for k, v in prow.items():
                    nv = r.get(k, ZERO) - c * v
                    if nv:
                        r[k] = nv
                    else:
                        r.pop(k, None)
        if not r:
            continue
        pc = min(r)
        inv = 1 / r[pc]
        r = {k: v * inv for k, v in r.items()}
        for other in pivots.values():
            c = other.get(pc)
            if c:
                for k, v in r.items():
                    nv = other.get(k, ZERO) - c * v
                    if nv:
                        other[k] = nv
                    else:
                        other.pop(k, None)
        pivots[pc] = r
    free = [c for c in range(ncols) if c not in pivots]
    out = []
    for fc in free:
        vec = {fc: ONE}
        for pc, prow in pivots.items():
            c = prow.get(fc)
            if c:
                vec[pc] = -c
        out.append(vec)
    return out


def saturate(I: Ideal, h: Polynomial) -> Ideal:
    """``(I : h^∞)``: adjoin ``w``, add ``w*h - 1``, eliminate ``w``."""
    if h.ring != I.ring:
        raise RingMismatchError(f"{h.ring.names} vs {I.ring.names}")
    if h.is_zero():
        raise StructuralError("saturation by the zero polynomial")
    w = _fresh_name(I.ring, "w")
    big = I.ring.extend(w)
    W = big.gen(w)
    gens = [g.to_ring(big) for g in I.generators] + [W * h.to_ring(big) - 1]
    K = eliminate(Ideal(gens, GREVLEX, big), I.ring.names, I.order)
    return Ideal(K.generators, I.order, I.ring)


def krull_dimension(I: Ideal) -> int:
    """Dimension of the quotient ring; -1 for the unit ideal."""
    if not I.generators:
        return len(I.ring)
    if I.is_whole_ring():
        return -1
    supports = [frozenset(i for i, v in enumerate(lm) if v) for lm in I.leading_monomials()]
    n = len(I.ring)
    for size in range(n, -1, -1):
        for subset in itertools.combinations(range(n), size):
            s = set(subset)
            if not any(sup <= s for sup in supports):
                return size
    return 0


def independent_sets(I: Ideal) -> list[tuple[str, ...]]:
    """All maximal-size variable subsets independent modulo the leading ideal."""
    d = krull_dimension(I)
    if d < 0:
        return []
    supports = [frozenset(i for i, v in enumerate(lm) if v) for lm in I.leading_monomials()] \
        if I.generators else []
    out = []
    for subset in itertools.combinations(range(len(I.ring)), d):
        s = set(subset)
        if not any(sup <= s for sup in supports):
            out.append(tuple(I.ring.names[i] for i in subset))
    return out


def _coordinate_variables(m: Ideal) -> set[int]:
    idx = set()
    for g in m.generators:
        if len(g.terms) != 1:
            raise StructuralError("localization ideal must be generated by variables")
        (e, c), = g.terms.items()
        if sum(e) != 1:
            raise StructuralError("localization ideal must be generated by variables")
        idx.add(e.index(1))
    return idx


def local_membership(p: Polynomial, I: Ideal, m: Ideal, *, with_colon: bool = False):
    """Is ``p`` in ``I`` after localizing at the coordinate prime ``m``?

    Decided through the colon ideal: ``p`` is a local member exactly when
    ``(I : p)`` is not contained in ``m``. With ``with_colon`` the colon
    ideal is returned alongside the verdict.
    """
    _check_compatible(I, m)
    mvars = _coordinate_variables(m)
    if p.is_zero():
        return (True, None) if with_colon else True
    Q = colon(I, p)
    verdict = any(
        any(all(e[i] == 0 for i in mvars) for e in g.terms) for g in Q.gb
    )
    return (verdict, Q) if with_colon else verdict
