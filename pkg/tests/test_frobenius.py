import random

import pytest

from qmfrob.congruence import CharPoly4
from qmfrob.frobenius import (CorrectionPolicy, DEFAULT_POLICY, Fq, FiberSums,
                              WeilBoundViolation, assemble_charpoly,
                              count_points, fiber_at, fiber_sums, new_trace,
                              s_sum, smallest_nonresidue)

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


def test_count_points_f5():
    # y^2 = x^3 + x over F_5: affine (0,0), (2,0), (3,0) plus infinity
    field = Fq(5, 1)
    assert count_points(0, 1, field) == 4


def test_count_points_brute_force_cross_check():
    field = Fq(7, 1)
    rng = random.Random(1)
    for _ in range(10):
        a2, a4 = rng.randrange(7), rng.randrange(1, 7)
        brute = 1 + sum(1 for x in range(7) for y in range(7)
                        if (y * y - (x ** 3 + a2 * x * x + a4 * x)) % 7 == 0)
        assert count_points(a2, a4, field) == brute


def test_hasse_bound_on_random_fibers():
    rng = random.Random(7)
    for p, deg in ((13, 1), (5, 2), (11, 2)):
        field = Fq(p, deg)
        seen = 0
        while seen < 200 // (3 - deg):
            t = rng.randrange(1, field.q)
            fc = fiber_at(t, 6, field)
            if fc.singular:
                continue
            assert fc.trace * fc.trace <= 4 * field.q
            seen += 1


def test_fiber_at_d1_vs_d6():
    field = Fq(7, 1)
    for t in range(1, 7):
        B = pow(t, 6, 7)
        f6 = fiber_at(t, 6, field)
        f1 = fiber_at(B, 1, field)
        assert f6.B == f1.B
        assert f6.trace == f1.trace
        assert f6.singular == f1.singular


def test_fiber_trace_matches_count_points():
    field = Fq(11, 1)
    from qmfrob.frobenius import _curve_data

    for t in (1, 2, 3, 4):
        fc = fiber_at(t, 2, field)
        if not fc.singular:
            a2, a4, _, _ = _curve_data(field, fc.B)
            assert fc.trace == field.q + 1 - count_points(a2, a4, field)


def test_s_sum_direct_vs_bulk():
    for p, deg in ((7, 1), (11, 1), (5, 2)):
        field = Fq(p, deg)
        for d in (1, 2, 3, 6):
            direct = 0
            for t in range(1, field.q):
                if field.deg == 2 and t == 0:
                    continue
                fc = fiber_at(t, d, field)
                if not fc.singular:
                    direct += fc.trace
            assert s_sum(d, p, deg) == direct


def test_s_sum_nonresidue_independent():
    p = 13
    sums_default = fiber_sums(p, 2)
    r0 = sums_default.field.w2
    # rebuild with a different nonresidue
    other = None
    for r in range(r0 + 1, p):
        if pow(r, (p - 1) // 2, p) == p - 1:
            other = r
            break
    field = Fq(p, 2)
    field.w2 = other
    field._build_tables()
    alt = FiberSums(field)
    for d in (1, 2, 3, 6):
        assert alt.s_sum(d) == sums_default.s_sum(d)


def test_inclusion_exclusion_matches_character_weights():
    # S6 - S3 - S2 + S1 equals the order-6-character-weighted good sum
    for p, deg in ((7, 1), (13, 1), (5, 2)):
        sums = fiber_sums(p, deg)
        combo = (sums.s_sum(6) - sums.s_sum(3) - sums.s_sum(2) + sums.s_sum(1))
        w = sums.new_weights()
        good = ~sums.singular
        assert combo == int((w[good] * sums.trace[good]).sum())


def test_bad_fibers_are_split_multiplicative():
    for p in (7, 13, 19):
        sums = fiber_sums(p, 1)
        bad = sums.bad_fibers()
        assert {B for B, _, _ in bad} == {p - 1, 8 % p}  # B = -1 and B = 8
        assert all(kind == "split" for _, _, kind in bad)


def test_hasse_all_counted_fibers():
    for p, deg in ((29, 1), (13, 2)):
        assert fiber_sums(p, deg).hasse_ok()


@pytest.mark.parametrize("p", sorted(GOLDEN))
def test_new_trace_matches_golden(p):
    c1, c2, _, _ = GOLDEN[p]
    s1 = new_trace(p, 1)
    s2 = new_trace(p, 2)
    assert s1 == -c1
    assert c2 == (s1 * s1 - s2) // 2


@pytest.mark.parametrize("p", sorted(GOLDEN))
def test_assemble_matches_golden(p):
    assert assemble_charpoly(p).coefficients() == GOLDEN[p]


def test_wrong_policy_is_detected():
    # dropping the split-multiplicative term must break the golden rows
    broken = CorrectionPolicy(split_mult=0)
    results = []
    for p in (7, 13, 19):
        try:
            results.append(assemble_charpoly(p, broken).coefficients() == GOLDEN[p])
        except WeilBoundViolation:
            results.append(False)
    assert not all(results)


def test_policy_id_is_stable():
    assert DEFAULT_POLICY.policy_id == "smult1:nmult-1:add0:c00:cinf0"


def test_smallest_nonresidue():
    assert smallest_nonresidue(5) == 2
    assert smallest_nonresidue(7) == 3
    assert smallest_nonresidue(23) == 5
