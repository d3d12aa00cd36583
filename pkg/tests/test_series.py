import json

import pytest

from intclosure.construction import build
from intclosure.polycore import RingMismatchError, StructuralError, VariableSet, parse
from intclosure.series import (
    COEFF_RANGE,
    GenericSeries,
    TruncatedElement,
    endpiece,
    fixed_series,
    make_generic,
    mul_truncated,
    square_shifted,
    to_polynomial,
)

B = VariableSet.of("y", "z")
Y, Z = B.gens()


def test_generic_series_shape():
    s = make_generic(1, "α", 4)
    assert len(s.coeffs) == 3
    assert s.coefficient(0) == 0
    lo, hi = COEFF_RANGE
    assert all(lo <= c <= hi and c.denominator == 1 for c in s.coeffs)


def test_generic_series_is_reproducible():
    assert make_generic(1, "α", 6) == make_generic(1, "α", 6)


def test_labels_feed_the_stream():
    assert make_generic(1, "α", 8).coeffs != make_generic(1, "β", 8).coeffs


def test_longer_truncation_extends_shorter():
    short, long = make_generic(5, "β", 4), make_generic(5, "β", 9)
    assert long.coeffs[:3] == short.coeffs


def test_generic_series_rejects_short_truncation():
    with pytest.raises(StructuralError):
        make_generic(1, "α", 1)


def test_series_json_round_trip():
    s = make_generic(2, "α", 5)
    data = json.loads(json.dumps(s.to_json(), ensure_ascii=False))
    assert data["label"] == "α" and data["seed"] == 2 and data["N"] == 5
    assert GenericSeries.from_json(data) == s


# -- square_shifted ----------------------------------------------------


def test_square_of_y_minus_x():
    e = square_shifted("y", fixed_series("x", [1], 5), 2, B)
    assert e.coeffs[0] == Y**2
    assert e.coeffs[1] == -2 * Y
    assert e.coeffs[2] == B.one()
    assert all(c.is_zero() for c in e.coeffs[3:])


def test_square_at_minimal_truncation():
    s = make_generic(4, "α", 2)
    e = square_shifted("y", s, 2, B)
    assert e.N == 2
    assert e.coeffs[0] == Y**2
    assert e.coeffs[1] == (-2 * s.coeffs[0]) * Y


def test_constant_slot_is_the_pure_power():
    e = square_shifted("z", make_generic(1, "β", 6), 2, B)
    assert e.coeffs[0] == Z**2


def test_square_shifted_matches_polynomial_expansion():
    s = make_generic(3, "α", 6)
    R = VariableSet.of("x", "y", "z")
    a = s.to_polynomial(R)
    expected = ((R.gen("y") - a) ** 3).truncate("x", 6)
    assert to_polynomial(square_shifted("y", s, 3, B)) == expected


# -- mul_truncated and to_polynomial -----------------------------------


@pytest.mark.parametrize("seed", [1, 2, 3, 4])
@pytest.mark.parametrize("N", [2, 5, 10])
def test_xi_squared_is_fg(seed, N):
    inst = build(3, N, seed)
    f, g = inst.f
    assert mul_truncated(inst.xi, inst.xi) == mul_truncated(f, g)


def test_xi_power_for_the_family():
    inst = build(4, 5, 1)
    f1, f2, f3 = inst.f
    assert inst.xi ** 3 == f1 * f2 * f3


def test_multiplying_by_one():
    a = build(3, 6, 2).f[0]
    assert a * TruncatedElement.constant(B.one(), 6) == a


def test_x_shift_drops_the_top_slot():
    a = build(3, 4, 1).f[0]
    xe = TruncatedElement(B, [B.zero(), B.one(), B.zero(), B.zero()])
    shifted = a * xe
    assert shifted.coeffs == (B.zero(),) + a.coeffs[:3]
    assert shifted == a.shift(1)


def test_truncation_mismatch():
    with pytest.raises(StructuralError):
        build(3, 4, 1).f[0] * build(3, 5, 1).f[0]
    with pytest.raises(RingMismatchError):
        build(3, 4, 1).f[0] * build(4, 4, 1).f[0]


def test_to_polynomial_reassembles():
    e = TruncatedElement(B, [Y**2, -2 * Y, B.one()])
    p = to_polynomial(e)
    assert p == parse("y^2 - 2*x*y + x^2", p.ring)
    assert TruncatedElement.from_polynomial(p, 3) == e
    assert to_polynomial(TruncatedElement(B, [B.zero()] * 3)).is_zero()


def test_element_json_round_trip():
    e = build(3, 5, 1).xi
    assert TruncatedElement.from_json(json.loads(json.dumps(e.to_json()))) == e


# -- endpieces ---------------------------------------------------------


def _fx(N=5):
    return square_shifted("y", fixed_series("x", [1], N), 2, B)


def test_first_endpiece_of_y_minus_x_squared():
    f = _fx()
    dec = endpiece(f, 1)
    R = dec.head.ring
    assert to_polynomial(dec.endpiece, R) == parse("-2*y + x", R)
    assert dec.head.is_zero()
    assert dec.reassemble(5) == f


def test_second_endpiece_of_y_minus_x_squared():
    f = _fx()
    dec = endpiece(f, 2)
    R = dec.head.ring
    assert to_polynomial(dec.endpiece, R) == R.one()
    assert dec.head == parse("-2*y", R)
    assert dec.reassemble(5) == f


def test_zero_tail():
    e = TruncatedElement.constant(Y**2, 5)
    for r in range(1, 5):
        dec = endpiece(e, r)
        assert dec.endpiece.is_zero() and dec.head.is_zero()


def test_endpiece_range():
    with pytest.raises(StructuralError):
        endpiece(_fx(), 0)
    with pytest.raises(StructuralError):
        endpiece(_fx(), 5)


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_decomposition_and_recurrence(seed):
    N = 8
    for e in build(3, N, seed).f:
        for r in range(1, N):
            dec = endpiece(e, r)
            assert dec.reassemble(N) == e
            if r <= N - 2:
                nxt = endpiece(e, r + 1).endpiece
                padded = TruncatedElement(e.base, list(nxt.coeffs) + [e.base.zero()])
                b_r = TruncatedElement.constant(e.coeffs[r], N - r)
                assert padded.shift(1) == dec.endpiece - b_r


def test_tail_degree_bound():
    for d in (3, 4):
        inst = build(d, 6, 1)
        for v, e in zip(inst.names, inst.f):
            assert all(b.degree_in(v) <= inst.h - 1 for b in e.coeffs[1:])
