from fractions import Fraction

import pytest

from qmfrob.cyclo import CycloNum, I, ONE, SQRT2, SQRT3, SQRT6
from qmfrob import qseries
from qmfrob.qseries import (EtaQuotient, NonUnitLeading, OffGridExponent,
                            PrecisionExceedsListedData, QSeries, build_f,
                            build_eigenbasis, build_form, calibrate_f_offset,
                            eta_expand, etaq_expand)


def euler_product_oracle(n_terms):
    """prod_{k>=1}(1 - q^k) by direct truncated multiplication."""
    out = [Fraction(0)] * n_terms
    out[0] = Fraction(1)
    for k in range(1, n_terms):
        # multiply by (1 - q^k)
        for n in range(n_terms - 1, k - 1, -1):
            out[n] -= out[n - k]
    return out


def test_eta_matches_euler_product():
    n = 40
    oracle = euler_product_oracle(n)
    e = eta_expand(1, 24 * n)
    for m in range(n):
        assert e.coeff(1 + 24 * m).rational() == oracle[m]


def test_eta_examples():
    e = eta_expand(1, 24 * 16)
    # q^(1/24)(1 - q - q^2 + q^5 + q^7 - q^12 - q^15 + ...)
    expected = {0: 1, 1: -1, 2: -1, 5: 1, 7: 1, 12: -1, 15: -1}
    for m in range(16):
        want = expected.get(m, 0)
        assert e.coeff(1 + 24 * m).rational() == want
    assert eta_expand(2, 8).lead == 2
    assert e.coeff(1 + 24 * 3).rational() == 0  # 3 is not pentagonal


def test_etaq_leads():
    assert build_form("B", 240).lead == -24
    assert build_form("F", 240).lead == 24
    assert build_form("f5", 240).lead == 5
    assert build_form("f7", 240).lead == 7
    assert build_form("f13", 240).lead == 13
    assert build_form("f23", 240).lead == 23


def test_etaq_validation():
    with pytest.raises(ValueError):
        EtaQuotient(((2, 1), (2, 3)))
    with pytest.raises(ValueError):
        EtaQuotient(((2, 0),))


def test_series_mul_basics():
    a = build_form("f5", 120)
    one = QSeries.one(120)
    prod = a * one
    assert prod.lead == a.lead
    assert prod.coeffs == a.coeffs[:prod.prec]
    q1 = QSeries(1, [ONE])
    assert (q1 * q1).lead == 2


def test_inverse_round_trip():
    B = build_form("B", 480)
    round_trip = B * B.inverse()
    assert round_trip.lead == 0
    assert round_trip.coeff(0) == ONE
    assert all(c.is_zero() for c in round_trip.coeffs[1:])


ZEROC = CycloNum()


def test_pow_rational():
    B = build_form("B", 480)
    assert B.pow_rational(1, 6).lead == -4
    a = build_form("f5", 120)
    shifted = QSeries(0, a.coeffs)  # unit leading coefficient
    assert shifted.pow_rational(0, 1).coeff(0) == ONE
    opq = QSeries(0, [ONE] + [ZEROC] * 23 + [ONE] + [ZEROC] * 24)  # 1 + q
    sq = opq.pow_rational(1, 2)
    assert sq * sq == opq
    with pytest.raises(NonUnitLeading):
        QSeries(0, [2, 1]).pow_rational(1, 2)
    with pytest.raises(OffGridExponent):
        QSeries(1, [ONE, ONE]).pow_rational(1, 2)


def test_build_form_leads():
    assert build_form("F1", 480).lead == 4
    assert build_form("F3", 480).lead == 12
    assert build_form("F5", 480).lead == 20


def test_support_classes():
    prec = 24 * 30
    for j in range(1, 6):
        fj = build_form(f"F{j}", prec)
        assert fj.support_residues(24) == {4 * j % 24}
    assert build_form("f5", prec).support_residues(24) == {5}
    assert build_form("f7", prec).support_residues(24) == {7}


def test_denominators_are_6_smooth():
    f2 = build_form("F2", 24 * 20)
    for c in f2.coeffs:
        den = c.co[0].denominator
        while den % 2 == 0:
            den //= 2
        while den % 3 == 0:
            den //= 3
        assert den == 1


def test_eigenbasis():
    (lab1, g1), (lab5, g5) = build_eigenbasis(-3, 240)
    assert (lab1, lab5) == ("F1", "F5")
    assert g1.lead == 4 and g5.lead == 20
    (labp, gp), (labm, gm) = build_eigenbasis(-2, 240)
    assert gp.coeff(4) == ONE  # the F1 part leads
    (labi, gi), _ = build_eigenbasis(6, 240)
    for c in gi.coeffs:
        assert all(x == 0 for x in c.co[2:])  # coefficients in Q(i)
    with pytest.raises(ValueError):
        build_eigenbasis(5)


def test_build_f_calibration_values():
    f = build_f(-1)
    assert f.coeff(1) == ONE
    assert f.coeff(5) == 3 * SQRT6
    assert f.coeff(7) == 6 * SQRT3
    assert f.coeff(23) == -6 * I * SQRT6
    assert f.coeff(25) == CycloNum.from_rat(29)
    assert f.coeff(49) == CycloNum.from_rat(59)
    literal = build_f(0)
    assert literal.coeff(25) == ONE
    assert literal.coeff(49) == CycloNum.from_rat(29)
    assert literal.coeff(1).is_zero()


def test_build_f_precision_limit():
    with pytest.raises(PrecisionExceedsListedData):
        build_f(-1, end=400)


def test_calibrate_f_offset():
    assert calibrate_f_offset() == -1


def test_hecke_relation_at_5():
    # a(25) = a(5)^2 - chi(5)*25 with chi = (-6/.)
    from qmfrob.qmfactor import legendre

    f = build_f(-1)
    assert legendre(-6, 5) == 1
    assert f.coeff(25) == f.coeff(5) ** 2 - CycloNum.from_rat(25)


def test_dump_tsv_first_line():
    f1 = build_form("F1", 240)
    first = f1.dump_tsv().splitlines()[0]
    n, coeff = first.split("\t")
    assert n == "4"
    import json

    assert CycloNum.from_json(json.loads(coeff)) == ONE
