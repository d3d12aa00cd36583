import json
import random

import pytest

from intclosure.construction import (
    FAIL,
    NA,
    PASS,
    ExampleInstance,
    SuiteOptions,
    WitnessPresentation,
    build,
    check_prime_witness,
    freeness_decompose,
    jacobian_determinant,
    jacobian_ideal,
    negative_controls,
    run_suite,
    tampered,
    verify_integral_dependence,
    verify_not_integrally_closed,
    verify_prime_witness,
    witness_presentation,
    FREENESS_RING,
    JACOBIAN_RING,
    _sort_key,
)
from intclosure.groebner import Ideal, ideal_equal, saturate
from intclosure.polycore import Polynomial, StructuralError
from oracles import random_polynomial, shifted_local_membership


# -- build -------------------------------------------------------------


def test_build_three_dimensional():
    inst = build(3, 8, 1)
    assert (inst.d, inst.h, inst.N) == (3, 2, 8)
    assert inst.names == ("y", "z")
    assert [s.label for s in inst.series] == ["α", "β"]
    y, z = inst.base.gens()
    f, g = inst.f
    assert f.coeffs[0] == y**2 and g.coeffs[0] == z**2
    assert inst.xi.coeffs[0] == y * z


def test_build_family():
    inst = build(4, 5, 1)
    assert inst.h == 3
    assert len(inst.series) == 3
    assert inst.names == ("y_1", "y_2", "y_3")
    assert all(e.coeffs[0] == inst.base.gen(v) ** 3 for v, e in zip(inst.names, inst.f))


def test_minimal_instance():
    inst = build(3, 2, 7)
    assert all(e.N == 2 for e in inst.f)


def test_build_rejects_bad_parameters():
    with pytest.raises(StructuralError):
        build(2, 8, 1)
    with pytest.raises(StructuralError):
        build(3, 1, 1)


def test_instance_json_round_trip():
    inst = build(3, 5, 2)
    text = json.dumps(inst.to_json(), ensure_ascii=False)
    again = ExampleInstance.from_json(text)
    assert again == inst
    assert json.dumps(again.to_json(), ensure_ascii=False) == text


def test_instance_json_rejects_inconsistent_data():
    data = build(3, 4, 1).to_json()
    data["h"] = 3
    with pytest.raises(StructuralError):
        ExampleInstance.from_json(data)


# -- integral dependence -----------------------------------------------


@pytest.mark.parametrize("seed", [4, 5])
@pytest.mark.parametrize("N", [2, 3, 5])
def test_integral_dependence_small(seed, N):
    rec = verify_integral_dependence(build(3, N, seed))
    assert rec.verdict == PASS
    assert rec.artifacts["n"] == 2


def test_tampered_xi_fails_with_difference():
    inst = build(3, 6, 1)
    rec = verify_integral_dependence(tampered(inst))
    assert rec.verdict == FAIL
    assert "identity" in rec.failed
    assert rec.artifacts["difference"] != "0"


# -- non-membership ----------------------------------------------------


@pytest.mark.parametrize("seed", [1, 2])
def test_not_integrally_closed_matches_shift_oracle(seed):
    inst = build(3, 6, seed)
    rec = verify_not_integrally_closed(inst)
    assert rec.verdict == PASS
    for n in range(2, 7):
        assert rec.artifacts["levels"][str(n)]["local_member"] is False
        assert shifted_local_membership(inst, n) is False


def test_generator_control_is_a_member_everywhere():
    inst = build(3, 5, 1)
    rec = verify_not_integrally_closed(inst, element=inst.f_polys()[0])
    assert rec.verdict == FAIL
    assert all(v["local_member"] for v in rec.artifacts["levels"].values())


def test_family_non_membership_small():
    inst = build(4, 3, 1)
    rec = verify_not_integrally_closed(inst)
    assert rec.verdict == PASS
    assert all(not shifted_local_membership(inst, n) for n in (2, 3))


# -- prime witnesses ---------------------------------------------------


@pytest.mark.parametrize("r", [1, 2, 3])
def test_prime_witness_passes(r):
    rec = verify_prime_witness(build(3, 6, 1), r)
    assert rec.verdict == PASS, rec.message
    art = rec.artifacts
    assert art["c_dimension"]["dimension"] == 3
    # (b) implies the saturation adds nothing
    assert art["b_nonzerodivisor"]["holds"] and art["d_kernel"]["saturation_equals_ideal"]


def test_saturation_equals_ideal_concretely():
    W = witness_presentation(build(3, 6, 2), 2)
    from intclosure.construction import WITNESS_ORDER

    I = Ideal([W.f_expr, W.g_expr], WITNESS_ORDER)
    x = W.ring.gen("x")
    assert ideal_equal(saturate(I, x), I)


def test_duplicated_generator_drops_height():
    W = witness_presentation(build(3, 6, 1), 1)
    dup = WitnessPresentation(W.r, W.ring, W.f_expr, W.f_expr, W.u, W.u)
    rec = check_prime_witness(dup, "dup")
    assert rec.verdict == FAIL
    assert "c" in rec.failed
    assert rec.artifacts["c_dimension"]["dimension"] == 4


def test_prime_witness_range():
    inst = build(3, 4, 1)
    with pytest.raises(StructuralError):
        witness_presentation(inst, 4)
    with pytest.raises(StructuralError):
        witness_presentation(build(4, 4, 1), 1)


# -- Jacobian ----------------------------------------------------------


def test_jacobian_determinant_by_hand():
    x, y, z, a, b = JACOBIAN_RING.gens()
    assert jacobian_determinant(2) == 4 * (y - a) * (z - b)


def test_jacobian_ideal_record():
    rec = jacobian_ideal(build(3, 4, 1))
    assert rec.verdict == PASS


def test_jacobian_cubic_analog():
    x, y, z, a, b = JACOBIAN_RING.gens()
    det = jacobian_determinant(3)
    assert det == 9 * (y - a) ** 2 * (z - b) ** 2
    assert ideal_equal(Ideal([det]), Ideal([((y - a) * (z - b)) ** 2]))


# -- freeness ----------------------------------------------------------


def test_freeness_examples():
    x, y, z, s, t = FREENESS_RING.gens()
    d = freeness_decompose(s**2)
    assert d.c0 == s**2 and all(c.is_zero() for c in d.components[1:])
    d = freeness_decompose(s * t)
    assert d.c3 == FREENESS_RING.one()
    assert all(c.is_zero() for c in d.components[:3])
    d = freeness_decompose(y * s)
    assert d.c1 == y and d.c0.is_zero() and d.c2.is_zero() and d.c3.is_zero()


def test_freeness_from_alpha_beta_coordinates():
    x, y, z, a, b = JACOBIAN_RING.gens()
    p = (y - a) * (z - b) + x * (y - a) ** 3
    d = freeness_decompose(p)
    xs, ys, zs, s, t = FREENESS_RING.gens()
    assert d.c3 == FREENESS_RING.one()
    assert d.c1 == xs * s**2
    assert d.is_even()


def test_freeness_random_reassembly():
    rng = random.Random(6)
    y, z, a, b = (JACOBIAN_RING.gen(n) for n in ("y", "z", "α", "β"))
    for _ in range(30):
        p = random_polynomial(rng, JACOBIAN_RING, 6, 8)
        d = freeness_decompose(p)
        assert d.is_even()
        back = d.reassemble().substitute({"s": y - a, "t": z - b}, JACOBIAN_RING)
        assert back == p


# -- suite -------------------------------------------------------------


def test_suite_small_instance_passes():
    cert = run_suite(build(3, 5, 1))
    assert cert.overall == PASS
    names = [r.name for r in cert.records]
    assert names == sorted(names, key=_sort_key)
    assert {"prime-witness-r1", "prime-witness-r4", "jacobian", "endpieces"} <= set(names)


def test_suite_family_marks_not_applicable():
    cert = run_suite(build(4, 3, 1))
    assert cert.record("prime-witness").verdict == NA
    assert cert.record("jacobian").verdict == NA
    assert cert.record("integral-dependence").artifacts["n"] == 3
    assert cert.overall == PASS


def test_suite_filtering():
    cert = run_suite(build(3, 4, 1), SuiteOptions(checks=frozenset({"not-integrally-closed"})))
    assert [r.name for r in cert.records] == ["not-integrally-closed"]
    assert cert.overall == PASS


def test_failing_enabled_check_fails_overall():
    inst = tampered(build(3, 4, 1))
    cert = run_suite(inst, SuiteOptions(checks=frozenset({"xi-power", "endpieces"})))
    assert cert.overall == FAIL
    assert [r.name for r in cert.failures] == ["xi-power"]


def test_certificate_body_is_deterministic():
    a = run_suite(build(3, 4, 3))
    b = run_suite(build(3, 4, 3))
    ja = json.dumps(a.body(), ensure_ascii=False, sort_keys=True)
    jb = json.dumps(b.body(), ensure_ascii=False, sort_keys=True)
    assert ja == jb
    assert "seconds" not in ja
    assert a.render_text() == b.render_text()


def test_negative_controls_all_fail():
    recs = negative_controls(build(3, 4, 1))
    assert [r.name for r in recs] == [
        "control-tampered-xi", "control-generator-for-xi", "control-duplicated-generator"]
    assert all(r.verdict == FAIL for r in recs)
