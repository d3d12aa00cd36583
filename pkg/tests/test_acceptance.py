"""The nine acceptance criteria, one test each.

Each test prints one ``criterion k: PASS|FAIL`` line (see conftest.py);
a summary of all of them is repeated at the end of the run.
"""

import json
import random
import time
from concurrent.futures import ThreadPoolExecutor

import pytest

from intclosure.closure import is_integral_over
from intclosure.construction import (
    FAIL,
    FREENESS_RING,
    JACOBIAN_RING,
    PASS,
    build,
    freeness_decompose,
    jacobian_determinant,
    jacobian_ideal,
    negative_controls,
    verify_endpieces,
    verify_integral_dependence,
    verify_not_integrally_closed,
    verify_prime_witness,
    verify_xi_power,
)
from intclosure.groebner import Ideal, groebner_basis, ideal_equal, is_groebner, is_reduced, normal_form
from intclosure.polycore import VariableSet
from intclosure.series import endpiece, to_polynomial
from oracles import (
    in_newton_polyhedron,
    linear_membership,
    min_power,
    random_polynomial,
    shifted_local_membership,
)


@pytest.mark.criterion(1, "d=3 seeds 1..3, N=8: dependence with n=2, non-membership at levels 2..8")
def test_criterion_1_headline():
    for seed in (1, 2, 3):
        start = time.perf_counter()
        inst = build(3, 8, seed)
        dep = verify_integral_dependence(inst)
        assert dep.verdict == PASS, dep.message
        assert dep.artifacts["n"] == 2
        closed = verify_not_integrally_closed(inst)
        assert closed.verdict == PASS, closed.message
        levels = closed.artifacts["levels"]
        assert sorted(map(int, levels)) == list(range(2, 9))
        for n in range(2, 9):
            assert levels[str(n)]["local_member"] is False
            assert shifted_local_membership(inst, n) is False
        assert time.perf_counter() - start < 60


@pytest.mark.criterion(2, "d=4 seed 1, N=5: xi^3 = f1 f2 f3, non-membership at 2..5, witness n=3")
def test_criterion_2_family():
    start = time.perf_counter()
    inst = build(4, 5, 1)
    assert verify_xi_power(inst).verdict == PASS
    product = inst.f_polys()[0] * inst.f_polys()[1] * inst.f_polys()[2]
    X = inst.ring.gen("x")
    assert normal_form(inst.xi_poly() ** 3 - product, Ideal([X**5])).is_zero()
    closed = verify_not_integrally_closed(inst)
    assert closed.verdict == PASS, closed.message
    for n in range(2, 6):
        assert closed.artifacts["levels"][str(n)]["local_member"] is False
        assert shifted_local_membership(inst, n) is False
    dep = verify_integral_dependence(inst)
    assert dep.verdict == PASS, dep.message
    assert dep.artifacts["n"] == 3
    assert time.perf_counter() - start < 300


@pytest.mark.criterion(3, "endpiece identities and recurrence, r = 1..6")
def test_criterion_3_endpieces():
    inst = build(3, 8, 1)
    rec = verify_endpieces(inst)
    assert rec.verdict == PASS, rec.message
    R = inst.ring
    X = R.gen("x")
    for v, e, f in zip(inst.names, inst.f, inst.f_polys()):
        b = [c.to_ring(R) for c in e.coeffs]
        # independent recomputation from the coefficients b_j
        for r in range(1, 7):
            f_r = sum((b[j] * X ** (j - r) for j in range(r, inst.N)), R.zero())
            u_r = sum((b[j] * X ** (j - 1) for j in range(1, r)), R.zero())
            assert X**r * f_r + u_r * X + R.gen(v) ** 2 == f
            assert to_polynomial(endpiece(e, r).endpiece, R) == f_r
            assert endpiece(e, r).head == u_r
            f_next = sum((b[j] * X ** (j - r - 1) for j in range(r + 1, inst.N)), R.zero())
            assert X * f_next == f_r - b[r]
            assert rec.artifacts[("f", "g")[inst.names.index(v)]]["levels"][str(r)]["recurrence"]


@pytest.mark.criterion(4, "prime witnesses for r = 1..6")
def test_criterion_4_prime_witnesses():
    inst = build(3, 8, 1)
    for r in range(1, 7):
        start = time.perf_counter()
        rec = verify_prime_witness(inst, r)
        assert rec.verdict == PASS, rec.message
        art = rec.artifacts
        assert art["a_leading_form"]["holds"]
        assert art["b_nonzerodivisor"]["holds"]
        assert art["c_dimension"]["dimension"] == 3
        assert art["d_kernel"]["holds"] and all(p == "0" for p in art["d_kernel"]["images"])
        assert time.perf_counter() - start < 120


@pytest.mark.criterion(5, "Jacobian determinant generates ((y - α)(z - β))")
def test_criterion_5_jacobian():
    x, y, z, a, b = JACOBIAN_RING.gens()
    det = jacobian_determinant(2)
    target = (y - a) * (z - b)
    m = next(iter(target.terms))
    c = det.terms.get(m, 0) / target.terms[m]
    assert c != 0 and det == target.scale(c)
    assert ideal_equal(Ideal([det]), Ideal([target]))
    assert jacobian_ideal(build(3, 8, 1)).verdict == PASS


@pytest.mark.criterion(6, "freeness decomposition of 100 random polynomials")
def test_criterion_6_freeness():
    rng = random.Random(606)
    for _ in range(100):
        p = random_polynomial(rng, FREENESS_RING, 6, 12)
        d = freeness_decompose(p)
        assert d.is_even()
        assert d.reassemble() == p


def _random_ideal(rng):
    n = rng.randint(1, 3)
    S = VariableSet(tuple("xyz"[:n]))
    gens = [g for g in (random_polynomial(rng, S, 3, 3) for _ in range(rng.randint(1, 3))) if g]
    return S, gens or [S.gen("x")]


def _gb_texts(seed):
    rng = random.Random(seed)
    out = []
    for _ in range(20):
        _, gens = _random_ideal(rng)
        out.append(json.dumps(Ideal(gens).gb_json()))
    return out


@pytest.mark.criterion(7, "Groebner kernel on 200 random ideals: oracle, S-pair audit, determinism")
def test_criterion_7_groebner_kernel():
    rng = random.Random(707)
    for _ in range(200):
        S, gens = _random_ideal(rng)
        I = Ideal(gens)
        gb = groebner_basis(I)
        assert is_groebner(gb, I.order) and is_reduced(gb, I.order)
        member = sum((random_polynomial(rng, S, 1, 2) * g for g in gens), S.zero())
        other = random_polynomial(rng, S, 3, 4)
        for cand in (member, other):
            assert normal_form(cand, I).is_zero() == linear_membership(cand, gens)
    seeds = range(10)
    first = [_gb_texts(s) for s in seeds]
    second = [_gb_texts(s) for s in seeds]
    with ThreadPoolExecutor(max_workers=4) as pool:
        threaded = list(pool.map(_gb_texts, seeds))
    assert first == second == threaded


R2 = VariableSet(("x", "y"))


@pytest.mark.criterion(8, "100 monomial ideals against the Newton polyhedron")
def test_criterion_8_newton_polyhedron():
    rng = random.Random(808)
    positives = negatives = 0
    for _ in range(100):
        k = rng.randint(1, 3)
        exps = sorted({(rng.randint(0, 4), rng.randint(0, 4)) for _ in range(k)} - {(0, 0)})
        exps = exps or [(1, 0)]
        deg = rng.randint(0, 4)
        a = rng.randint(0, deg)
        a = (a, deg - a)
        inside = in_newton_polyhedron(a, exps)
        m = min_power(a, exps, 24) if inside else None
        assert inside == (m is not None)
        I = Ideal([R2.monomial(e) for e in exps])
        w = is_integral_over(R2.monomial(a), I, n_max=max(10, m or 0))
        if inside:
            positives += 1
            assert w is not None and w.n == m
        else:
            negatives += 1
            assert w is None
    assert positives and negatives


@pytest.mark.criterion(9, "negative controls fail loudly with named sub-checks")
def test_criterion_9_negative_controls():
    recs = {r.name: r for r in negative_controls(build(3, 8, 1))}
    tampered = recs["control-tampered-xi"]
    assert tampered.verdict == FAIL and "identity" in tampered.failed and tampered.message
    generator = recs["control-generator-for-xi"]
    assert generator.verdict == FAIL
    assert all(v["local_member"] for v in generator.artifacts["levels"].values())
    assert generator.failed == [f"level {n}" for n in range(2, 9)]
    dup = recs["control-duplicated-generator"]
    assert dup.verdict == FAIL and "c" in dup.failed
    assert dup.artifacts["c_dimension"]["dimension"] == 4
    assert "dimension 4" in dup.message
