from fractions import Fraction

import pytest

from qmfrob.cyclo import CycloNum, ONE
from qmfrob.modp import NonIntegralAtP
from qmfrob.congruence import (AmbiguousRecovery, BadPrime, CharPoly4,
                               asd_check, check_prime, eigenbasis_reduced,
                               eigenform_reduced, new_forms_reduced,
                               recover_charpoly, reduce_mod, scholl_check,
                               working_digits)
from qmfrob.qmfactor import factor_qm, pair_eigenvectors
from qmfrob.qseries import QSeries, build_form

GOLDEN = {
    5: (0, 4, 0, 625),
    7: (0, 10, 0, 2401),
    11: (0, -170, 0, 14641),
    13: (0, -230, 0, 28561),
    17: (0, -128, 0, 83521),
    19: (40, 1122, 14440, 130321),
    23: (0, -842, 0, 279841),
    29: (0, -332, 0, 707281),
}


def test_charpoly_invariants_on_golden():
    for p, coeffs in GOLDEN.items():
        CharPoly4(p, *coeffs).validate()


def test_charpoly_invariant_failures():
    with pytest.raises(ValueError):
        CharPoly4(5, 0, 4, 0, 624).validate()    # constant term
    with pytest.raises(ValueError):
        CharPoly4(5, 4, 4, 0, 625).validate()    # functional equation
    with pytest.raises(ValueError):
        CharPoly4(5, 0, 9000, 0, 625).validate()  # coefficient box
    # inside the coefficient box but roots leave the circle |z| = 5
    with pytest.raises(ValueError):
        CharPoly4(5, 0, -60, 0, 625).validate()


def test_check_prime():
    for bad in (1, 2, 3, 4, 6, 9, 49):
        with pytest.raises(BadPrime):
            check_prime(bad)
    check_prime(5)
    check_prime(47)


def test_reduce_mod_f1():
    f1 = build_form("F1", 24 * 40)
    red = reduce_mod(f1, 5, 4)
    assert red.unit_den == 6
    assert red.coeff8(1)[0] == 1  # leading coefficient 1 mod 625
    assert red.coeff8(2) == (0,) * 8


def test_reduce_mod_zero_series():
    red = reduce_mod(QSeries.zero(), 7, 3)
    assert red.coeff8(123) == (0,) * 8


def test_reduce_mod_rejects_p_denominator():
    s = QSeries(24, [CycloNum.from_rat(Fraction(1, 5))])
    with pytest.raises(NonIntegralAtP):
        reduce_mod(s, 5, 4)


def test_fast_path_matches_exact_reduction():
    prec6 = 60
    exact = reduce_mod(build_form("F5", 24 * (prec6 + 4)), 7, 5)
    fast = eigenform_reduced([(5, 1)], 7, 5, prec6, "F5")
    for n in range(1, prec6):
        assert exact.coeff8(n) == fast.coeff8(n)


def test_asd_zero_series_passes():
    rep = asd_check(QSeries.zero(), 3, -25, 5, Nmax=10)
    assert rep.passed
    assert all(m is None for _, m in rep.rows)


def test_asd_golden_pair_at_5():
    H = CharPoly4(5, *GOLDEN[5])
    assignment = pair_eigenvectors(6, H, p=5, Nmax=30)
    labels = {lab for lab, _, _ in assignment.entries}
    assert labels == {"F1+2iF5", "F1-2iF5"}
    for rep in assignment.reports:
        assert rep.passed
        assert all(m is None or m >= 0 for _, m in rep.rows)


def test_asd_perturbed_A_fails():
    H = CharPoly4(5, *GOLDEN[5])
    assignment = pair_eigenvectors(6, H, p=5, Nmax=30)
    label, A, B = assignment.entries[0]
    k = working_digits(3, 30, 5)
    form = dict(zip(("F1+2iF5", "F1-2iF5"),
                    eigenbasis_reduced(6, 5, k, 5 * 30 + 8)))[label]
    bad = asd_check(form, A + 1, B, 5, Nmax=30)
    assert not bad.passed
    assert any(m is not None and m < 0 for n, m in bad.rows if n <= 30)


def test_scholl_new_forms_pass_old_forms_fail():
    H = CharPoly4(5, *GOLDEN[5])
    k = working_digits(3, 40, 5)
    units = 25 * 41 + 8
    for j in (1, 5):
        form = eigenform_reduced([(j, 1)], 5, k, units, f"F{j}")
        assert scholl_check(form, H).passed
    form3 = eigenform_reduced([(3, 1)], 5, k, units, "F3")
    assert not scholl_check(form3, H).passed


@pytest.mark.parametrize("p", sorted(GOLDEN))
def test_recover_matches_golden(p):
    H = recover_charpoly(None, p)
    assert H.coefficients() == GOLDEN[p]


def test_recover_rejects_single_form():
    with pytest.raises(ValueError):
        recover_charpoly(new_forms_reduced(5)[:1], 5)


def test_recovered_quartic_passes_scholl():
    p = 7
    H = recover_charpoly(None, p)
    for form in new_forms_reduced(p):
        assert scholl_check(form, H).passed


def test_margins_are_exact_integers():
    H = CharPoly4(7, *GOLDEN[7])
    form = new_forms_reduced(7)[0]
    rep = scholl_check(form, H)
    for n, margin in rep.rows:
        assert margin is None or isinstance(margin, int)


def test_asd_report_serialization():
    H = CharPoly4(5, *GOLDEN[5])
    assignment = pair_eigenvectors(6, H, p=5, Nmax=10)
    doc = assignment.reports[0].to_json()
    assert doc["pass"] is True
    assert doc["failures"] == []
    assert doc["p"] == 5
