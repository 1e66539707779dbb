"""Factoring the Frobenius quartic through the quaternionic structure.

The quartic H(x) = x^4 + c1 x^3 + c2 x^2 + c1 p^2 x + p^4 factors over a
quadratic field as a product of two conjugate quadratics

    (x^2 - A x + B)(x^2 - A' x + B),      A' the quadratic conjugate of A,

or, when p splits completely in Q(sqrt-2, sqrt-3), as a perfect square
with A rational.  Matching coefficients with A = r + s*sqrt(D) gives

    r = -c1/2,   B = +-p^2 (forced to +p^2 when c1 != 0),
    D s^2 = 2B + r^2 - c2,

so the field of A is found by testing the squarefree D with sqrt(D) in
Q(i, sqrt2, sqrt3) rather than assumed; the observed pattern (D = u for
u < 0, D = -6 for u = 6) is not wired in.  Every factorization is
verified by exact re-expansion before it is returned.
"""

from dataclasses import dataclass
from fractions import Fraction

from .cyclo import CycloNum, sqrt_small, UnrepresentableRadical
from .congruence import (ASDReport, CharPoly4, asd_check, check_prime,
                         eigenbasis_reduced, working_digits)


class NoQMFactorization(ArithmeticError):
    """No conjugate-quadratic or squared factorization exists."""


class NoValidAssignment(ArithmeticError):
    """Neither pairing of factors with eigenforms passes the congruences."""


class BothAssignmentsPass(ArithmeticError):
    """Both pairings pass; the congruence data cannot separate them."""


def legendre(a, p):
    """Quadratic-residue symbol (a/p) in {-1, 0, 1} for odd prime p."""
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def splitting_set(p):
    """The u in {-2, -3, 6} with p split in Q(sqrt u); never empty.

    The product of the three symbols is (36/p) = +1, so the set has odd
    size: either one element or all three (iff p = 1 or 19 mod 24).
    """
    check_prime(p)
    return tuple(u for u in (-3, -2, 6) if legendre(u, p) == 1)


SQUAREFREE_D = (1, -1, 2, -2, 3, -3, 6, -6)


@dataclass(frozen=True)
class QuadFactorization:
    """H(x) = (x^2 - A x + B)(x^2 - conj(A) x + B), or its squared form."""

    p: int
    u: int
    kind: str  # "squared" | "conjugate_pair"
    A: CycloNum
    B: int

    def conjugate_A(self):
        """The other trace coefficient, via the Galois flip killing sqrt(D)."""
        return _flip_irrational(self.A)

    def expand(self):
        """Multiply the two factors back out; must reproduce the quartic."""
        A1, A2 = self.A, self.conjugate_A()
        s = A1 + A2
        q = A1 * A2
        c1 = -s
        c2 = q + 2 * self.B
        c3 = -s * self.B
        c4 = CycloNum.from_rat(self.B * self.B)
        coeffs = []
        for c in (c1, c2, c3, c4):
            if not c.is_rational() or c.rational().denominator != 1:
                raise NoQMFactorization(f"non-integral expansion coefficient {c}")
            coeffs.append(int(c.rational()))
        return CharPoly4(self.p, *coeffs)

    def to_json(self):
        return {"p": self.p, "kind": self.kind, "u": self.u,
                "A": self.A.to_json(), "B": self.B}


def _flip_irrational(a):
    """Negate every irrational basis coordinate (fixes the rational part)."""
    co = list(a.co)
    return CycloNum([co[0]] + [-c for c in co[1:]])


def _rational_sqrt(x):
    """sqrt of a nonnegative Fraction if it is exact, else None."""
    if x < 0:
        return None
    num, den = x.numerator, x.denominator
    rn, rd = _isqrt_exact(num), _isqrt_exact(den)
    if rn is None or rd is None:
        return None
    return Fraction(rn, rd)


def _isqrt_exact(n):
    from math import isqrt
    r = isqrt(n)
    return r if r * r == n else None


def factor_qm(H):
    """QuadFactorization of a valid CharPoly4.

    Tries the squared shape when p splits completely, otherwise solves
    D s^2 = 2B + r^2 - c2 over the candidate squarefree D and both signs
    of B (the functional equation forces B = p^2 once c1 != 0), verifying
    every branch by exact expansion.
    """
    H.validate()
    p = H.p
    split = splitting_set(p)
    p2 = p * p
    r = Fraction(-H.c1, 2)

    if len(split) == 3:
        # (x^2 - A x + B)^2 = H needs A = r exactly
        for B in (p2, -p2):
            cand = QuadFactorization(p, split[0], "squared",
                                     CycloNum.from_rat(r), B)
            try:
                if cand.expand() == H:
                    return cand
            except NoQMFactorization:
                pass
        raise NoQMFactorization(f"squared shape fails at p={p}")

    u = split[0]
    betas = (p2,) if H.c1 != 0 else (-p2, p2)
    for B in betas:
        m = 2 * B + r * r - H.c2
        for D in SQUAREFREE_D:
            s2 = Fraction(m) / D
            s = _rational_sqrt(s2)
            if s is None or s == 0 and m != 0:
                continue
            try:
                A = CycloNum.from_rat(r) + s * sqrt_small(D)
            except UnrepresentableRadical:
                continue
            cand = QuadFactorization(p, u, "conjugate_pair", A, B)
            try:
                if cand.expand() == H:
                    return cand
            except NoQMFactorization:
                continue
    raise NoQMFactorization(f"no quadratic factorization found for {H}")


@dataclass
class EigenAssignment:
    """Which eigenform carries which quadratic factor at p."""

    p: int
    u: int
    entries: list  # [(form_label, A, B)]
    reports: list  # the passing ASDReports

    def to_json(self):
        return {"p": self.p, "u": self.u,
                "entries": [{"form": lab, "A": A.to_json(), "B": B}
                            for lab, A, B in self.entries]}


def pair_eigenvectors(u, H, forms=None, p=None, kappa=3, Nmax=40):
    """Assign the factor pair (A, conj A) to the two eigenforms of u.

    Runs the three-term congruence for both candidate pairings and returns
    the unique one that passes.  In the squared case the two factors agree
    and both forms receive the same (A, B); the check still runs on both.
    """
    p = p or H.p
    if u not in splitting_set(p):
        raise ValueError(f"p={p} is not split in Q(sqrt({u}))")
    fact = factor_qm(H) if not isinstance(H, QuadFactorization) else H
    k = working_digits(kappa, Nmax, p)
    if forms is None:
        forms = eigenbasis_reduced(u, p, k, p * Nmax + 8)
    A1, B = fact.A, fact.B
    A2 = fact.conjugate_A()
    assignments = ((A1, A2),) if A1 == A2 else ((A1, A2), (A2, A1))
    passing = []
    for assignment in assignments:
        reports = [asd_check(form, A, B, p, kappa, Nmax, u=u)
                   for form, A in zip(forms, assignment)]
        if all(rep.passed for rep in reports):
            passing.append((assignment, reports))
    if not passing:
        raise NoValidAssignment(f"no pairing passes at p={p}, u={u}")
    if len(passing) > 1:
        raise BothAssignmentsPass(f"congruences cannot separate factors at p={p}")
    (assignment, reports) = passing[0]
    entries = [(form.label, A, B) for form, A in zip(forms, assignment)]
    return EigenAssignment(p, u, entries, reports)
