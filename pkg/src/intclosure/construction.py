"""The three-dimensional example and its d-dimensional family.

An instance fixes a dimension ``d``, the power ``h = d - 1``, a truncation
``N`` and a seed. Each coordinate ``y_i`` gets a generic series ``a_i`` in
``x Q[[x]]`` and the elements

    f_i = (y_i - a_i)^h,    xi = prod_i (y_i - a_i)

are formed modulo ``x^N``. For ``d = 3`` the names specialize to ``y, z``,
``α, β`` and ``f, g``.

The checks below certify, at finite precision, that ``xi`` is integral
over ``P = (f_1, ..., f_h)`` but lies outside ``P`` after localizing at the
origin, together with the ideal identities used to show that the
polynomial presentations of ``P`` are height ``h`` primes.
"""

from __future__ import annotations

import functools
import hashlib
import json
import time
from dataclasses import dataclass, field

from .closure import DEFAULT_NMAX, is_integral_over
from .groebner import (
    GREVLEX,
    ComputeHint,
    Ideal,
    MonomialOrder,
    colon,
    ideal_equal,
    independent_sets,
    krull_dimension,
    local_membership,
    normal_form,
    saturate,
)
from .polycore import Polynomial, StructuralError, VariableSet
from .series import (
    GenericSeries,
    TruncatedElement,
    endpiece,
    make_generic,
    square_shifted,
    to_polynomial,
)

PASS, FAIL, NA = "pass", "fail", "n/a"

CHECK_NAMES = (
    "construction",
    "xi-power",
    "integral-dependence",
    "not-integrally-closed",
    "endpieces",
    "prime-witness",
    "jacobian",
)

# The prime-witness presentation puts y, z in a leading block so that
# y^2 and z^2 lead the two generators.
WITNESS_ORDER = MonomialOrder("block", 2)


def coordinate_names(d: int) -> tuple[str, ...]:
    if d == 3:
        return ("y", "z")
    return tuple(f"y_{i}" for i in range(1, d))


def series_labels(d: int) -> tuple[str, ...]:
    if d == 3:
        return ("α", "β")
    return tuple(f"α_{i}" for i in range(1, d))


def _shifted(name: str, s: GenericSeries, base: VariableSet) -> TruncatedElement:
    return TruncatedElement.constant(base.gen(name), s.N) - TruncatedElement.from_series(s, base)


@dataclass(frozen=True)
class ExampleInstance:
    d: int
    h: int
    N: int
    seed: int
    series: tuple[GenericSeries, ...]
    f: tuple[TruncatedElement, ...]
    xi: TruncatedElement

    @property
    def names(self) -> tuple[str, ...]:
        return coordinate_names(self.d)

    @property
    def base(self) -> VariableSet:
        return VariableSet(self.names)

    @property
    def ring(self) -> VariableSet:
        """``x`` followed by the coordinates."""
        return VariableSet(("x",) + self.names)

    @property
    def hint(self) -> ComputeHint:
        # with x last, lex bases of (f_i, x^n) stay small
        return ComputeHint(self.names + ("x",))

    def f_polys(self) -> list[Polynomial]:
        return [to_polynomial(e, self.ring) for e in self.f]

    def xi_poly(self) -> Polynomial:
        return to_polynomial(self.xi, self.ring)

    def ideal(self, gens, order: MonomialOrder = GREVLEX) -> Ideal:
        return Ideal(gens, order, self.ring, hint=self.hint)

    def P(self, order: MonomialOrder = GREVLEX) -> Ideal:
        return self.ideal(self.f_polys(), order)

    def with_xi(self, xi: TruncatedElement) -> "ExampleInstance":
        return ExampleInstance(self.d, self.h, self.N, self.seed, self.series, self.f, xi)

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "h": self.h,
            "N": self.N,
            "seed": self.seed,
            "series": [s.to_json() for s in self.series],
            "f": [e.to_json() for e in self.f],
            "xi": self.xi.to_json(),
        }

    @classmethod
    def from_json(cls, data) -> "ExampleInstance":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            d, h, N, seed = int(data["d"]), int(data["h"]), int(data["N"]), int(data["seed"])
            series = tuple(GenericSeries.from_json(s) for s in data["series"])
            f = tuple(TruncatedElement.from_json(e) for e in data["f"])
            xi = TruncatedElement.from_json(data["xi"])
        except (KeyError, TypeError, ValueError) as exc:
            raise StructuralError(f"malformed instance JSON: {exc}") from None
        if d < 3 or h != d - 1 or len(series) != h or len(f) != h:
            raise StructuralError("instance fields are inconsistent with d")
        base = VariableSet(coordinate_names(d))
        for e in f + (xi,):
            if e.N != N or e.base != base:
                raise StructuralError("instance element has the wrong ring or truncation")
        return cls(d, h, N, seed, series, f, xi)

    def digest(self) -> str:
        blob = json.dumps(self.to_json(), sort_keys=True, ensure_ascii=False)
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


def build(d: int, N: int, seed: int) -> ExampleInstance:
    if d < 3:
        raise StructuralError("dimension must be at least 3")
    if N < 2:
        raise StructuralError("truncation must be at least 2")
    h = d - 1
    names = coordinate_names(d)
    base = VariableSet(names)
    series = tuple(make_generic(seed, label, N) for label in series_labels(d))
    f = tuple(square_shifted(v, s, h, base) for v, s in zip(names, series))
    xi = _product([_shifted(v, s, base) for v, s in zip(names, series)])
    return ExampleInstance(d, h, N, int(seed), series, f, xi)


def _product(elements: list[TruncatedElement]) -> TruncatedElement:
    out = elements[0]
    for e in elements[1:]:
        out = out * e
    return out


# ---------------------------------------------------------------------------
# check records


@dataclass
class CheckRecord:
    name: str
    verdict: str
    inputs: str = ""
    artifacts: dict = field(default_factory=dict)
    failed: list[str] = field(default_factory=list)
    message: str = ""
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def to_json(self) -> dict:
        out = {"name": self.name, "verdict": self.verdict, "inputs": self.inputs}
        if self.failed:
            out["failed"] = list(self.failed)
        if self.message:
            out["message"] = self.message
        out["artifacts"] = self.artifacts
        return out


def _verdict(ok: bool) -> str:
    return PASS if ok else FAIL


def _gb_json(I: Ideal) -> list:
    return [str(g) for g in I.gb]


def _timed(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        rec = fn(*args, **kwargs)
        rec.seconds = time.perf_counter() - t0
        return rec
    return wrapper


@_timed
def verify_construction(inst: ExampleInstance) -> CheckRecord:
    """Stored elements agree with a fresh expansion from the stored series."""
    base = inst.base
    bad = []
    for i, (v, s, e) in enumerate(zip(inst.names, inst.series, inst.f)):
        if s.N != inst.N or square_shifted(v, s, inst.h, base) != e:
            bad.append(f"f_{i + 1}")
    if _product([_shifted(v, s, base) for v, s in zip(inst.names, inst.series)]) != inst.xi:
        bad.append("xi")
    return CheckRecord("construction", _verdict(not bad), inst.digest(), {
        "series": {s.label: [str(c) for c in s.coeffs] for s in inst.series},
    }, bad, "elements disagree with the series: " + ", ".join(bad) if bad else "")


@_timed
def verify_xi_power(inst: ExampleInstance) -> CheckRecord:
    """``xi^h = f_1 ... f_h`` exactly modulo ``x^N``."""
    diff = inst.xi ** inst.h - _product(list(inst.f))
    ok = diff.is_zero()
    return CheckRecord("xi-power", _verdict(ok), inst.digest(), {
        "h": inst.h,
        "difference": str(to_polynomial(diff, inst.ring)),
    }, [] if ok else ["identity"], "" if ok else "xi^h differs from the product of the f_i")


@_timed
def verify_integral_dependence(inst: ExampleInstance, n_max: int = DEFAULT_NMAX,
                               order: MonomialOrder = GREVLEX) -> CheckRecord:
    """``xi^h = prod f_i`` and the reduction criterion holds with ``n = h``.

    The criterion is decided modulo ``x^N``, the precision at which the
    elements are known.
    """
    diff = inst.xi ** inst.h - _product(list(inst.f))
    failed = []
    if not diff.is_zero():
        failed.append("identity")
    P = inst.P(order)
    x = inst.ring.gen("x")
    modulus = inst.ideal([x ** inst.N], order)
    # the least n must equal h, so there is no point searching past it
    witness = is_integral_over(inst.xi_poly(), P, min(n_max, inst.h), modulus)
    n = witness.n if witness else None
    if n != inst.h:
        failed.append("witness")
    artifacts = {
        "difference": str(to_polynomial(diff, inst.ring)),
        "modulus": f"x^{inst.N}",
        "n": n,
        "searched_up_to": min(n_max, inst.h),
        "witness_gb": [str(g) for g in witness.left_gb] if witness else None,
        "witness_gb_size": len(witness.left_gb) if witness else None,
        "bases_agree": (witness.left_gb == witness.right_gb) if witness else None,
    }
    msg = ""
    if "identity" in failed:
        msg = "xi^h - prod f_i is nonzero: " + artifacts["difference"]
    elif failed:
        msg = f"reduction exponent {n} (expected {inst.h})"
    return CheckRecord("integral-dependence", _verdict(not failed), inst.digest(), artifacts, failed, msg)


@_timed
def verify_not_integrally_closed(inst: ExampleInstance, element: Polynomial | None = None,
                                 order: MonomialOrder = GREVLEX) -> CheckRecord:
    """``xi`` lies outside ``(f_1, ..., f_h, x^n)`` localized at the origin,
    for every ``n`` in ``2..N``."""
    p = inst.xi_poly() if element is None else element
    ring = inst.ring
    x = ring.gen("x")
    m = Ideal(list(ring.gens()), order, ring)
    levels = {}
    failed = []
    for n in range(2, inst.N + 1):
        I = inst.ideal(inst.f_polys() + [x ** n], order)
        member, Q = local_membership(p, I, m, with_colon=True)
        levels[str(n)] = {
            "local_member": member,
            "colon_gb": _gb_json(Q) if Q is not None else [],
        }
        if member:
            failed.append(f"level {n}")
    msg = "element is a local member at " + ", ".join(failed) if failed else ""
    return CheckRecord("not-integrally-closed", _verdict(not failed), inst.digest(),
                       {"element": str(p), "levels": levels}, failed, msg)


@_timed
def verify_endpieces(inst: ExampleInstance) -> CheckRecord:
    """Endpiece decompositions, their recurrence and the degree bound."""
    N = inst.N
    failed = []
    table = {}
    for i, (v, e) in enumerate(zip(inst.names, inst.f)):
        label = ("f", "g")[i] if inst.d == 3 else f"f_{i + 1}"
        rows = {}
        for r in range(1, N):
            dec = endpiece(e, r)
            row = {
                "endpiece": str(to_polynomial(dec.endpiece)),
                "u": str(dec.head),
                "identity": dec.reassemble(N) == e,
            }
            if not row["identity"]:
                failed.append(f"{label} identity r={r}")
            if r <= N - 2:
                nxt = endpiece(e, r + 1).endpiece
                lhs = TruncatedElement(e.base, list(nxt.coeffs) + [e.base.zero()], e.x).shift(1)
                b_r = TruncatedElement.constant(e.coeffs[r], N - r, e.x)
                row["recurrence"] = lhs == dec.endpiece - b_r
                if not row["recurrence"]:
                    failed.append(f"{label} recurrence r={r}")
            rows[str(r)] = row
        degs = [b.degree_in(v) if b else 0 for b in e.coeffs[1:]]
        if max(degs, default=0) > inst.h - 1:
            failed.append(f"{label} degree bound")
        table[label] = {"b": [str(b) for b in e.coeffs[1:]], "levels": rows}
    return CheckRecord("endpieces", _verdict(not failed), inst.digest(), table, failed,
                       "; ".join(failed))


# ---------------------------------------------------------------------------
# primality witnesses for the presentations B_r


@dataclass(frozen=True)
class WitnessPresentation:
    """``f_expr = x^r F + u x + y^2`` and ``g_expr = x^r G + v x + z^2``."""

    r: int
    ring: VariableSet
    f_expr: Polynomial
    g_expr: Polynomial
    u: Polynomial
    v: Polynomial


def witness_presentation(inst: ExampleInstance, r: int) -> WitnessPresentation:
    if inst.d != 3:
        raise StructuralError("the prime witness presentation needs d = 3")
    if not 1 <= r < inst.N:
        raise StructuralError(f"r={r} outside 1..{inst.N - 1}")
    F, G = f"F{r}", f"G{r}"
    ring = VariableSet(("y", "z", "x", F, G))
    y, z, x, Fv, Gv = ring.gens()
    df, dg = endpiece(inst.f[0], r), endpiece(inst.f[1], r)
    u, v = df.head.to_ring(ring), dg.head.to_ring(ring)
    return WitnessPresentation(r, ring, x ** r * Fv + u * x + y ** 2, x ** r * Gv + v * x + z ** 2, u, v)


def check_prime_witness(W: WitnessPresentation, name: str, digest: str = "") -> CheckRecord:
    """Sub-checks (a) to (d) on a presentation; every sub-check always runs."""
    ring, r = W.ring, W.r
    y, z, x, Fv, Gv = ring.gens()
    order = WITNESS_ORDER
    I = Ideal([W.f_expr, W.g_expr], order, ring)
    failed = []
    art = {"r": r, "f_expr": str(W.f_expr), "g_expr": str(W.g_expr), "order": order.tag}

    left = Ideal([x, W.f_expr, W.g_expr], order, ring)
    right = Ideal([x, y ** 2, z ** 2], order, ring)
    a = ideal_equal(left, right)
    art["a_leading_form"] = {"holds": a, "left_gb": _gb_json(left), "right_gb": _gb_json(right)}
    if not a:
        failed.append("a")

    C = colon(I, x)
    b = ideal_equal(C, I)
    art["b_nonzerodivisor"] = {"holds": b, "colon_gb": _gb_json(C), "ideal_gb": _gb_json(I)}
    if not b:
        failed.append("b")

    dim = krull_dimension(I)
    art["c_dimension"] = {"dimension": dim, "independent_sets": [list(s) for s in independent_sets(I)]}
    if dim != 3:
        failed.append("c")

    S = saturate(I, x)
    target = VariableSet(("y", "z", "x", "w"))
    W_ = target.gen("w")
    X = target.gen("x")
    bindings = {
        str(Fv): -(W.u.to_ring(target) * X + target.gen("y") ** 2) * W_ ** r,
        str(Gv): -(W.v.to_ring(target) * X + target.gen("z") ** 2) * W_ ** r,
    }
    inverse = Ideal([W_ * X - 1], GREVLEX, target)
    images = [normal_form(g.substitute(bindings, target), inverse) for g in S.gb]
    d_ok = all(p.is_zero() for p in images)
    art["d_kernel"] = {
        "holds": d_ok,
        "saturation_gb": _gb_json(S),
        "saturation_equals_ideal": ideal_equal(S, I),
        "images": [str(p) for p in images],
    }
    if not d_ok:
        failed.append("d")
    msg = "failed sub-checks: " + ", ".join(failed) if failed else ""
    if "c" in failed:
        msg += f" (dimension {dim}, expected 3)"
    return CheckRecord(name, _verdict(not failed), digest, art, failed, msg)


@_timed
def verify_prime_witness(inst: ExampleInstance, r: int) -> CheckRecord:
    return check_prime_witness(witness_presentation(inst, r), f"prime-witness-r{r}", inst.digest())


# ---------------------------------------------------------------------------
# Jacobian and the rank-four freeness


JACOBIAN_RING = VariableSet(("x", "y", "z", "α", "β"))


def jacobian_determinant(h: int = 2) -> Polynomial:
    """``det [[df/dα, dg/dα], [df/dβ, dg/dβ]]`` for ``f = (y-α)^h, g = (z-β)^h``."""
    x, y, z, a, b = JACOBIAN_RING.gens()
    f, g = (y - a) ** h, (z - b) ** h
    m = [[f.partial_derivative("α"), g.partial_derivative("α")],
         [f.partial_derivative("β"), g.partial_derivative("β")]]
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


@_timed
def jacobian_ideal(inst: ExampleInstance) -> CheckRecord:
    """The determinant generates the principal ideal ``((y-α)(z-β))``."""
    if inst.d != 3:
        raise StructuralError("the Jacobian check needs d = 3")
    x, y, z, a, b = JACOBIAN_RING.gens()
    det = jacobian_determinant(inst.h)
    target = ((y - a) * (z - b)) ** (inst.h - 1)
    D = Ideal([det], GREVLEX, JACOBIAN_RING)
    T = Ideal([target], GREVLEX, JACOBIAN_RING)
    ok = not det.is_zero() and ideal_equal(D, T)
    return CheckRecord("jacobian", _verdict(ok), inst.digest(), {
        "determinant": str(det),
        "ideal_gb": _gb_json(D),
        "expected_gb": _gb_json(T),
    }, [] if ok else ["ideal"], "" if ok else "determinant ideal differs from ((y-α)(z-β))")


FREENESS_RING = VariableSet(("x", "y", "z", "s", "t"))


@dataclass(frozen=True)
class FreenessDecomposition:
    """``p = c0 + c1 s + c2 t + c3 s t`` with every ``c_i`` even in ``s, t``.

    With ``s = y - α`` and ``t = z - β`` the even part is the subring
    generated over ``Q[x, y, z]`` by ``f = s^2`` and ``g = t^2``.
    """

    c0: Polynomial
    c1: Polynomial
    c2: Polynomial
    c3: Polynomial

    @property
    def components(self) -> tuple[Polynomial, ...]:
        return (self.c0, self.c1, self.c2, self.c3)

    def reassemble(self) -> Polynomial:
        s, t = FREENESS_RING.gen("s"), FREENESS_RING.gen("t")
        return self.c0 + self.c1 * s + self.c2 * t + self.c3 * s * t

    def is_even(self) -> bool:
        i, j = FREENESS_RING.index("s"), FREENESS_RING.index("t")
        return all(e[i] % 2 == 0 and e[j] % 2 == 0 for c in self.components for e in c.terms)


def to_shifted_coordinates(p: Polynomial) -> Polynomial:
    """Rewrite ``p`` over ``x, y, z, s, t`` with ``α = y - s, β = z - t``."""
    names = set(p.ring.names)
    if names <= set(FREENESS_RING.names):
        return p.to_ring(FREENESS_RING)
    if not names <= set(JACOBIAN_RING.names):
        raise StructuralError(f"expected variables among x, y, z, α, β; got {p.ring.names}")
    y, z, s, t = (FREENESS_RING.gen(n) for n in "yzst")
    return p.to_ring(JACOBIAN_RING).substitute({"α": y - s, "β": z - t}, FREENESS_RING)


def freeness_decompose(p: Polynomial) -> FreenessDecomposition:
    q = to_shifted_coordinates(p)
    i, j = FREENESS_RING.index("s"), FREENESS_RING.index("t")
    parts = [{}, {}, {}, {}]
    for e, c in q.terms.items():
        a, b = e[i] % 2, e[j] % 2
        ne = list(e)
        ne[i] -= a
        ne[j] -= b
        parts[a + 2 * b][tuple(ne)] = c
    dec = FreenessDecomposition(*(Polynomial(FREENESS_RING, t) for t in parts))
    if dec.reassemble() != q:
        raise AssertionError("freeness decomposition failed to reassemble")
    return dec


# ---------------------------------------------------------------------------
# the suite


@dataclass(frozen=True)
class SuiteOptions:
    n_max: int = DEFAULT_NMAX
    r_max: int | None = None
    order: MonomialOrder = GREVLEX
    checks: frozenset[str] | None = None  # None runs everything

    def enabled(self, family: str) -> bool:
        return self.checks is None or family in self.checks


@dataclass
class VerificationCertificate:
    instance: dict
    options: dict
    records: list[CheckRecord]

    @property
    def overall(self) -> str:
        enabled = [r for r in self.records if r.verdict != NA]
        return PASS if enabled and all(r.passed for r in enabled) else FAIL

    @property
    def failures(self) -> list[CheckRecord]:
        return [r for r in self.records if r.verdict == FAIL]

    def record(self, name: str) -> CheckRecord:
        for r in self.records:
            if r.name == name:
                return r
        raise KeyError(name)

    def body(self) -> dict:
        """Everything except timings; deterministic for fixed inputs."""
        return {
            "instance": self.instance,
            "options": self.options,
            "checks": [r.to_json() for r in self.records],
            "overall": self.overall,
        }

    def to_json(self) -> dict:
        out = {"header": {"seconds": {r.name: round(r.seconds, 3) for r in self.records}}}
        out.update(self.body())
        return out

    def render_text(self) -> str:
        inst = self.instance
        lines = [
            f"instance d={inst['d']} h={inst['h']} N={inst['N']} seed={inst['seed']}",
            "series: " + "; ".join(f"{s['label']} = {' '.join(s['coeffs'])}" for s in inst["series"]),
        ]
        for r in self.records:
            lines.append(f"[{r.verdict}] {r.name}" + (f"  {r.message}" if r.message else ""))
            lines.extend(_render_artifacts(r.artifacts, "    "))
        lines.append(f"overall: {self.overall}")
        return "\n".join(lines) + "\n"


def _render_artifacts(obj, indent: str) -> list[str]:
    out = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v:
                out.append(f"{indent}{k}:")
                out.extend(_render_artifacts(v, indent + "  "))
            else:
                out.append(f"{indent}{k}: {v}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)):
                out.extend(_render_artifacts(v, indent + "  "))
            else:
                out.append(f"{indent}- {v}")
    else:
        out.append(f"{indent}{obj}")
    return out


def _na(name: str, why: str, digest: str) -> CheckRecord:
    return CheckRecord(name, NA, digest, {}, [], why)


def run_suite(inst: ExampleInstance, options: SuiteOptions = SuiteOptions()) -> VerificationCertificate:
    digest = inst.digest()
    r_max = options.r_max if options.r_max is not None else min(6, inst.N - 1)
    if not 0 <= r_max < inst.N:
        raise StructuralError(f"r_max={r_max} must be below N={inst.N}")
    records: list[CheckRecord] = []
    if options.enabled("construction"):
        records.append(verify_construction(inst))
    if options.enabled("xi-power"):
        records.append(verify_xi_power(inst))
    if options.enabled("integral-dependence"):
        records.append(verify_integral_dependence(inst, options.n_max, options.order))
    if options.enabled("not-integrally-closed"):
        records.append(verify_not_integrally_closed(inst, order=options.order))
    if options.enabled("endpieces"):
        records.append(verify_endpieces(inst))
    if options.enabled("prime-witness"):
        if inst.d == 3:
            records.extend(verify_prime_witness(inst, r) for r in range(1, r_max + 1))
        else:
            records.append(_na("prime-witness", "needs d = 3", digest))
    if options.enabled("jacobian"):
        if inst.d == 3:
            records.append(jacobian_ideal(inst))
        else:
            records.append(_na("jacobian", "needs d = 3", digest))
    records.sort(key=lambda r: _sort_key(r.name))
    opts = {
        "n_max": options.n_max,
        "r_max": r_max,
        "order": options.order.tag,
        "checks": sorted(options.checks) if options.checks is not None else "all",
    }
    return VerificationCertificate(inst.to_json(), opts, records)


def _sort_key(name: str):
    # prime-witness-r10 after prime-witness-r9
    head, _, tail = name.rpartition("-r")
    if head and tail.isdigit():
        return (head, int(tail))
    return (name, -1)


# ---------------------------------------------------------------------------
# negative controls


def tampered(inst: ExampleInstance) -> ExampleInstance:
    """The instance with ``xi`` replaced by ``xi + x^(N-1)``."""
    bump = TruncatedElement.constant(inst.base.one(), inst.N).shift(inst.N - 1)
    return inst.with_xi(inst.xi + bump)


def negative_controls(inst: ExampleInstance) -> list[CheckRecord]:
    """Checks run on deliberately broken inputs; each must fail."""
    out = []
    rec = verify_integral_dependence(tampered(inst))
    rec.name = "control-tampered-xi"
    out.append(rec)
    rec = verify_not_integrally_closed(inst, element=inst.f_polys()[0])
    rec.name = "control-generator-for-xi"
    out.append(rec)
    if inst.d == 3:
        W = witness_presentation(inst, 1)
        dup = WitnessPresentation(W.r, W.ring, W.f_expr, W.f_expr, W.u, W.u)
        out.append(check_prime_witness(dup, "control-duplicated-generator", inst.digest()))
    return out
