import pytest

from qmfrob.congruence import CharPoly4, recover_charpoly
from qmfrob.cyclo import CycloNum, sqrt_small
from qmfrob.qmfactor import (BothAssignmentsPass, NoQMFactorization,
                             QuadFactorization, factor_qm, legendre,
                             pair_eigenvectors, splitting_set)

GOLDEN = {
    5: ((0, 4, 0, 625), "conjugate_pair", (3, -6), -25),
    7: ((0, 10, 0, 2401), "conjugate_pair", (6, -3), -49),
    11: ((0, -170, 0, 14641), "conjugate_pair", (6, -2), -121),
    13: ((0, -230, 0, 28561), "conjugate_pair", (6, -3), -169),
    17: ((0, -128, 0, 83521), "conjugate_pair", (15, -2), -289),
    19: ((40, 1122, 14440, 130321), "squared", (-20, 1), 361),
    23: ((0, -842, 0, 279841), "conjugate_pair", (6, -6), -529),
    29: ((0, -332, 0, 707281), "conjugate_pair", (15, -6), -841),
}


def test_legendre_examples():
    assert legendre(6, 5) == 1
    assert legendre(-3, 7) == 1
    assert legendre(-2, 5) == -1
    assert legendre(10, 5) == 0


def test_splitting_examples():
    assert splitting_set(5) == (6,)
    assert splitting_set(7) == (-3,)
    assert splitting_set(11) == (-2,)
    assert splitting_set(19) == (-3, -2, 6)


def test_splitting_set_structure():
    primes = [p for p in range(5, 500)
              if all(p % d for d in range(2, int(p ** 0.5) + 1))]
    for p in primes:
        s = splitting_set(p)
        assert len(s) in (1, 3)
        prod = 1
        for u in (-3, -2, 6):
            prod *= legendre(u, p)
        assert prod == 1
        # completely split iff p = 1 or 19 mod 24
        assert (len(s) == 3) == (p % 24 in (1, 19))


@pytest.mark.parametrize("p", sorted(GOLDEN))
def test_factor_golden_rows(p):
    coeffs, kind, (s, d), B = GOLDEN[p]
    fact = factor_qm(CharPoly4(p, *coeffs))
    assert fact.kind == kind
    assert fact.B == B
    want = s * sqrt_small(d)
    assert fact.A in (want, -want)
    assert fact.expand().coefficients() == coeffs


def test_factor_field_is_discovered_not_assumed():
    # at p = 5 the split field is Q(sqrt 6) but A lives in Q(sqrt -6)
    fact = factor_qm(CharPoly4(5, 0, 4, 0, 625))
    assert fact.u == 6
    assert fact.A == 3 * sqrt_small(-6) or fact.A == -3 * sqrt_small(-6)


def test_conjugate_flip_swaps_factors():
    fact = factor_qm(CharPoly4(17, 0, -128, 0, 83521))
    assert fact.conjugate_A() == -fact.A  # trace-free quartic
    prod = fact.A * fact.conjugate_A()
    assert prod.is_rational()


def test_no_factorization():
    # Weil-valid quartic that is not a conjugate-quadratic product
    H = CharPoly4(5, 2, 7, 50, 625).validate()
    with pytest.raises(NoQMFactorization):
        factor_qm(H)


@pytest.mark.parametrize("p", [31, 37, 41, 43, 47])
def test_factor_held_out_primes_reexpand(p):
    H = recover_charpoly(None, p)
    fact = factor_qm(H)
    assert fact.expand().coefficients() == H.coefficients()


def test_pairing_unique_at_7():
    H = CharPoly4(7, *GOLDEN[7][0])
    assignment = pair_eigenvectors(-3, H, p=7, Nmax=30)
    byform = dict((lab, A) for lab, A, _ in assignment.entries)
    assert set(byform) == {"F1", "F5"}
    assert byform["F1"] == -byform["F5"]
    a = 6 * sqrt_small(-3)
    assert byform["F1"] in (a, -a)


def test_pairing_squared_case():
    H = CharPoly4(19, *GOLDEN[19][0])
    assignment = pair_eigenvectors(-3, H, p=19, Nmax=20)
    values = {str(A) for _, A, _ in assignment.entries}
    assert values == {"-20"}
    assert all(B == 361 for _, _, B in assignment.entries)


def test_pairing_rejects_nonsplit_u():
    H = CharPoly4(7, *GOLDEN[7][0])
    with pytest.raises(ValueError):
        pair_eigenvectors(6, H, p=7)


def test_conjugate_symmetry_of_assignments():
    # if (form1, A) passes then (form2, conj A) is the partner: the returned
    # assignment always pairs A with its flip across the two forms
    for p in (5, 11, 13):
        H = CharPoly4(p, *GOLDEN[p][0])
        fact = factor_qm(H)
        assignment = pair_eigenvectors(fact.u, fact, p=p, Nmax=24)
        (l1, A1, B1), (l2, A2, B2) = assignment.entries
        assert A2 == _flip(A1)
        assert B1 == B2 == fact.B


def _flip(a):
    return CycloNum([a.co[0]] + [-c for c in a.co[1:]])
