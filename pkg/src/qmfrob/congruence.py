"""Three-term and five-term congruence checks, and recovery of the quartic.

For a p-adically integral form a = sum a(n) q^(n/mu) the three-term
(Atkin-Swinnerton-Dyer) relation with parameters (A, B) asserts

    a(p n) - A a(n) + B a(n/p)  ==  0   mod p^((kappa-1)(1+ord_p n)),

and the five-term (Scholl) relation with the degree-4 Frobenius polynomial
x^4 + C1 x^3 + C2 x^2 + C3 x + C4 asserts

    a(p^2 n) + C1 a(p n) + C2 a(n) + C3 a(n/p) + C4 a(n/p^2)  ==  0

to the same modulus.  Congruences are verified exactly: every margin is an
integer (valuation minus required exponent), never a float tolerance.

The three-term relation involves irrational A; its congruence is a
statement at one prime above p, so the expression is evaluated under a
fixed embedding into Z/p^k or its unramified quadratic extension
(modp.Place).  Checked coordinate-wise it would be false: at p = 5 the
relation equates 2i with 3i*sqrt6 through sqrt6 = 9 mod 25, which no
coordinate comparison can see.  The five-term relation has integer
coefficients and is checked coordinate-wise.
"""

from dataclasses import dataclass, field
from math import gcd

from .cyclo import CycloNum
from . import modp
from .modp import NonIntegralAtP, Place, form_table, int_vp, reduce_cyclo

GOOD_PRIME_MIN = 5


class InsufficientPrecision(ValueError):
    """The stored series window is too short for the requested check."""


class InsufficientUnitCoefficients(ValueError):
    """No index with a unit coefficient; the linear stage cannot start."""


class AmbiguousRecovery(ValueError):
    """More than one candidate quartic survives every filter."""


class NoSolution(ValueError):
    """No candidate quartic survives the congruence filters."""


class BadPrime(ValueError):
    """Congruence machinery needs a prime p >= 5."""


def check_prime(p):
    if p < GOOD_PRIME_MIN or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
        raise BadPrime(f"need a good prime p >= 5, got {p}")


def ord_p(n, p):
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


# -- the quartic ----------------------------------------------------------


@dataclass(frozen=True)
class CharPoly4:
    """Monic integer quartic x^4 + c1 x^3 + c2 x^2 + c3 x + c4 for Frob_p."""

    p: int
    c1: int
    c2: int
    c3: int
    c4: int

    def validate(self):
        """Functional equation and the exact all-roots-on-|z|=p condition.

        Writing y = x + p^2/x maps the circle |x| = p onto the real segment
        [-2p, 2p] and H(x) = x^2 (y^2 + c1 y + c2 - 2p^2); all four roots
        have absolute value p iff the quadratic in y has real roots in
        [-2p, 2p].  Those are exact integer inequalities.
        """
        p = self.p
        if self.c4 != p ** 4:
            raise ValueError(f"constant term {self.c4} != p^4")
        if self.c3 != self.c1 * p * p:
            raise ValueError(f"functional equation fails: c3 != c1 p^2")
        if abs(self.c1) > 4 * p or abs(self.c2) > 6 * p * p:
            raise ValueError("coefficient outside Weil bounds")
        q2 = self.c2 - 2 * p * p
        disc = self.c1 * self.c1 - 4 * q2
        if disc < 0:
            raise ValueError("trace quadratic has complex roots")
        for y in (2 * p, -2 * p):
            if y * y + self.c1 * y + q2 < 0:
                raise ValueError("root of absolute value != p")
        return self

    def coefficients(self):
        return (self.c1, self.c2, self.c3, self.c4)

    def __call__(self, x):
        return x ** 4 + self.c1 * x ** 3 + self.c2 * x ** 2 + self.c3 * x + self.c4

    def __str__(self):
        return (f"x^4 + {self.c1}*x^3 + {self.c2}*x^2 + "
                f"{self.c3}*x + {self.c4}").replace("+ -", "- ")


# -- reduced series -------------------------------------------------------


class ReducedSeries:
    """Coefficients a(n) of a form on q^(n/unit_den), reduced mod p^k.

    coeff8(n) returns the 8 basis coordinates as residues.  Two concrete
    layouts exist: a dense window reduced from an exact QSeries, and the
    fast eta-quotient path assembled from FormTable components.
    """

    def __init__(self, p, k, unit_den, nmax, label):
        self.p, self.k = p, k
        self.modulus = p ** k
        self.unit_den = unit_den
        self.nmax = nmax
        self.label = label

    def coeff8(self, n):
        raise NotImplementedError


class DenseReduced(ReducedSeries):
    def __init__(self, p, k, unit_den, rows, label):
        # an identically zero reduction has unbounded precision
        nmax = len(rows) if rows else float("inf")
        super().__init__(p, k, unit_den, nmax, label)
        self._rows = rows

    def coeff8(self, n):
        if not self._rows:
            return (0,) * 8
        if n >= self.nmax:
            raise InsufficientPrecision(
                f"{self.label}: index {n} beyond precision {self.nmax}")
        if n < 0:
            return (0,) * 8
        return self._rows[n]


class CombinationReduced(ReducedSeries):
    """sum of scalar * F_j read off a FormTable; indices in units of 1/6."""

    def __init__(self, p, k, parts, nmax, label):
        super().__init__(p, k, 6, nmax, label)
        self.table = form_table(p, k, nmax)
        self.parts = [(j, reduce_cyclo(_as_cyclo(c), p, k)) for j, c in parts]

    def coeff8(self, n):
        if n >= self.nmax:
            raise InsufficientPrecision(
                f"{self.label}: index {n} beyond precision {self.nmax}")
        out = [0] * 8
        if n > 0:
            m = self.modulus
            for j, scalar8 in self.parts:
                g = self.table.coeff(j, n) % m
                if g:
                    for idx in range(8):
                        if scalar8[idx]:
                            out[idx] = (out[idx] + g * scalar8[idx]) % m
        return tuple(out)


def _as_cyclo(c):
    return c if isinstance(c, CycloNum) else CycloNum.from_rat(c)


def reduce_mod(series, p, k):
    """Reduce an exact QSeries into residue rows mod p^k.

    The index grid is normalized to the series' own cusp width: exponents
    n/24 with support on stride d become indices n/d on q^(n*d/24...), so
    the weight-3 family indexes as q^(n/6) and the eigenform as q^(n/24).
    Raises NonIntegralAtP when a coefficient has p in a denominator.
    """
    check_prime(p)
    if series.is_zero():
        return DenseReduced(p, k, 24, [], "0")
    if series.lead < 0:
        raise ValueError("only cusp expansions (positive lead) reduce")
    div = gcd(24, series.lead)
    for off, c in enumerate(series.coeffs):
        if not c.is_zero():
            div = gcd(div, series.lead + off)
    unit_den = 24 // div
    rows = [(0,) * 8] * ((series.lead // div))
    for off in range(series.prec):
        n = series.lead + off
        if n % div == 0:
            rows.append(reduce_cyclo(series.coeffs[off], p, k))
        elif not series.coeffs[off].is_zero():
            raise ValueError("support stride is inconsistent")
    return DenseReduced(p, k, unit_den, rows, "reduced")


def eigenform_reduced(parts, p, k, n_units, label=None):
    """Fast-path reduced form: parts = [(j, scalar)] over the F_j family."""
    check_prime(p)
    label = label or "+".join(f"{c}*F{j}" for j, c in parts)
    return CombinationReduced(p, k, parts, n_units, label)


EIGEN_PARTS = {
    -3: ((("F1", [(1, 1)]), ("F5", [(5, 1)]))),
    -2: ((("F1+2F5", [(1, 1), (5, 2)]), ("F1-2F5", [(1, 1), (5, -2)]))),
    6: ((("F1+2iF5", [(1, 1), (5, 2 * CycloNum.basis_element(1))]),
         ("F1-2iF5", [(1, 1), (5, -2 * CycloNum.basis_element(1))]))),
}


def eigenbasis_reduced(u, p, k, n_units):
    """The two candidate eigenforms for u, as fast-path reduced series."""
    if u not in EIGEN_PARTS:
        raise ValueError("u must be one of -3, -2, 6")
    return tuple(eigenform_reduced(parts, p, k, n_units, label)
                 for label, parts in EIGEN_PARTS[u])


# -- reports ---------------------------------------------------------------


@dataclass
class ASDReport:
    """Margins of a congruence check; pass iff every margin is >= 0.

    A margin of None means the expression vanished to the full working
    precision p^k, i.e. the true margin is at least cap = k - required.
    """

    p: int
    u: object
    form_label: str
    kind: str
    rows: list = field(default_factory=list)

    @property
    def passed(self):
        return all(m is None or m >= 0 for _, m in self.rows)

    def worst(self):
        finite = [m for _, m in self.rows if m is not None]
        return min(finite) if finite else None

    def failures(self):
        return [(n, m) for n, m in self.rows if m is not None and m < 0]

    def to_json(self):
        return {
            "p": self.p,
            "u": self.u,
            "form": self.form_label,
            "kind": self.kind,
            "pass": self.passed,
            "failures": [{"n": n, "margin": m} for n, m in self.failures()],
        }


def _coerce_reduced(form, p, k):
    if isinstance(form, ReducedSeries):
        if form.p != p:
            raise ValueError("reduced series built for a different prime")
        if form.k < k:
            raise InsufficientPrecision("reduced series has too few p-adic digits")
        return form
    return reduce_mod(form, p, k)


def working_digits(kappa, Nmax, p):
    """p-adic digits carried by the checks: the worst required exponent
    (kappa-1)(1+ord) over n <= Nmax, plus slack so margins stay visible."""
    max_ord = 0
    n = p
    while n <= Nmax:
        max_ord += 1
        n *= p
    return (kappa - 1) * (1 + max_ord) + 4


def asd_check(form, A, B, p, kappa=3, Nmax=40, u=None):
    """Three-term congruence report for one form and parameters (A, B).

    The expression a(pn) - A a(n) + B a(n/p) is embedded at a fixed place
    above p and its valuation compared with (kappa-1)(1+ord_p n).
    """
    check_prime(p)
    k = working_digits(kappa, Nmax, p)
    form = _coerce_reduced(form, p, k)
    k = form.k
    place = Place(p, k)
    if form.nmax <= p * Nmax:
        raise InsufficientPrecision(
            f"need indices through {p * Nmax}, have {form.nmax}")
    a_emb = place.embed_cyclo(_as_cyclo(A))
    report = ASDReport(p, u, form.label, "asd-3term")
    m = place.modulus
    for n in range(1, Nmax + 1):
        req = (kappa - 1) * (1 + ord_p(n, p))
        x = place.embed_coords(form.coeff8(p * n))
        y = place.mul(a_emb, place.embed_coords(form.coeff8(n)))
        z = place.embed_coords(form.coeff8(n // p)) if n % p == 0 else (0, 0)
        expr = ((x[0] - y[0] + B * z[0]) % m, (x[1] - y[1] + B * z[1]) % m)
        if expr == (0, 0):
            margin = None
        else:
            margin = place.val(expr) - req
        report.rows.append((n, margin))
    return report


def scholl_check(form, H, kappa=3, Nmax=40, u=None):
    """Five-term congruence report against a CharPoly4, coordinate-wise."""
    check_prime(H.p)
    p = H.p
    k = working_digits(kappa, Nmax, p)
    form = _coerce_reduced(form, p, k)
    k = form.k
    modulus = p ** k
    if form.nmax <= p * p * Nmax:
        raise InsufficientPrecision(
            f"need indices through {p * p * Nmax}, have {form.nmax}")
    report = ASDReport(p, u, form.label, "scholl-5term")
    coeffs = (1, H.c1, H.c2, H.c3, H.c4)
    for n in range(1, Nmax + 1):
        req = (kappa - 1) * (1 + ord_p(n, p))
        acc = [0] * 8
        for i, C in enumerate(coeffs):
            shift = 2 - i  # a(p^2 n) down to a(n/p^2)
            if shift >= 0:
                idx = n * p ** shift
            else:
                if n % p ** (-shift) != 0:
                    continue
                idx = n // p ** (-shift)
            row = form.coeff8(idx)
            for c in range(8):
                if row[c]:
                    acc[c] = (acc[c] + C * row[c]) % modulus
        if all(v == 0 for v in acc):
            margin = None
        else:
            margin = min(int_vp(v, p, k) for v in acc) - req
        report.rows.append((n, margin))
    return report


# -- recovery of the quartic ----------------------------------------------


def _stage2_indices(p):
    """Multipliers m for the mod-p^4 stage at n = p*m.

    Because F1 and F5 occupy complementary support classes mod 6, m = 1
    over both forms already pins C1 and C2 mod p^4 whatever p mod 6 is;
    m = 2 is backup against an inconvenient coefficient divisible by p,
    and small p get a wider spread (their series are cheap).
    """
    pool = (1, 2, 3, 4, 5, 7, 11) if p <= 13 else (1, 2)
    return [m for m in pool if m % p != 0]


def recovery_units(p, Nmax=40):
    """Series length (in q^(1/6) steps) recover_charpoly wants at p."""
    return max(p * p * (Nmax + 1), p ** 3 * max(_stage2_indices(p)) + 8) + 8


def new_forms_reduced(p, k=None, Nmax=40):
    """The two new forms F1, F5 on the fast path, sized for recovery."""
    k = k or working_digits(3, Nmax, p)
    units = recovery_units(p, Nmax)
    return (eigenform_reduced([(1, 1)], p, k, units, "F1"),
            eigenform_reduced([(5, 1)], p, k, units, "F5"))


def recover_charpoly(forms, p, kappa=3, Nmax=40):
    """Recover the Frobenius quartic from the five-term congruences alone.

    Stage 1 solves for (C1, C2) mod p^2 from indices coprime to p with a
    unit coefficient; stage 2 filters mod p^4 at indices divisible by p;
    stage 3 verifies each surviving integer candidate inside the Weil
    bounds by a full five-term check on both forms.

    At a prime splitting completely in Q(sqrt-2, sqrt-3) the congruence
    data cannot be unique: if the quadratic x^2 - Ax + B annihilates both
    new forms, every product (x^2 - Ax + B)(x^2 + ex + B) with the
    functional equation satisfies all five-term congruences.  The
    surviving line is then resolved by the quaternionic structure, which
    forces the perfect square; the choice is cross-checked against the
    point-counting engine (frobenius.assemble_charpoly).
    """
    check_prime(p)
    if kappa != 3:
        raise ValueError("only weight 3 is wired up")
    k = working_digits(kappa, Nmax, p)
    if forms is None:
        forms = new_forms_reduced(p, k, Nmax)
    forms = [_coerce_reduced(f, p, k) for f in forms]
    if len(forms) < 2:
        raise ValueError("recovery requires both new forms")
    k = min(f.k for f in forms)
    modulus = p ** k
    p2, p4 = p * p, p ** 4

    def rows_for(form, n):
        return form.coeff8(n)

    # stage 1: C1 x + C2 y = -z (mod p^2) from coordinates of unit indices
    eqs = []
    for form in forms:
        for n in range(1, Nmax + 1):
            if n % p == 0:
                continue
            x8, y8, z8 = (rows_for(form, p * n), rows_for(form, n),
                          rows_for(form, p * p * n))
            for c in range(8):
                if x8[c] or y8[c] or z8[c]:
                    eqs.append((x8[c] % p2, y8[c] % p2, (-z8[c]) % p2))
    if not any(y % p for _, y, _ in eqs):
        raise InsufficientUnitCoefficients(
            f"no unit coefficient among indices <= {Nmax}")

    def in_window(center_mod, bound):
        lo = center_mod - p2 * ((bound + center_mod) // p2)
        out = []
        t = lo
        while t <= bound:
            if t >= -bound:
                out.append(t)
            t += p2
        return out

    c1_mod = c2_mod = None
    for i, (x1, y1, z1) in enumerate(eqs):
        for x2, y2, z2 in eqs[i + 1:]:
            det = (x1 * y2 - x2 * y1) % p2
            if det % p:
                inv = pow(det, -1, p2)
                c1_mod = (z1 * y2 - z2 * y1) * inv % p2
                c2_mod = (x1 * z2 - x2 * z1) * inv % p2
                break
        if c1_mod is not None:
            break

    if c1_mod is not None:
        pairs = [(C1, C2) for C1 in in_window(c1_mod, 4 * p)
                 for C2 in in_window(c2_mod, 6 * p2)]
    else:
        # rank-1 system: all equations proportional mod p.  This happens
        # when multiplication by p swaps the support classes (p = 5 mod 6,
        # where the a(pn) column vanishes) and at completely split primes,
        # where one quadratic already annihilates both forms.  Parametrize
        # the solution line by C1 and read C2 off a unit equation.
        unit_eq = next(((x, y, z) for x, y, z in eqs if y % p), None)
        if unit_eq is None:
            raise InsufficientUnitCoefficients("stage 1 system is degenerate")
        x0, y0, z0 = unit_eq
        inv_y = pow(y0, -1, p2)
        pairs = []
        for C1 in range(-4 * p, 4 * p + 1):
            c2_line = (z0 - C1 * x0) * inv_y % p2
            pairs.extend((C1, C2) for C2 in in_window(c2_line, 6 * p2))

    # prune against every stage-1 equation before the expensive stages
    pairs = [(C1, C2) for C1, C2 in pairs
             if all((C1 * x + C2 * y - z) % p2 == 0 for x, y, z in eqs)]

    # stage 2: filter mod p^4 using n = p*m
    stage2 = []
    for form in forms:
        for m in _stage2_indices(p):
            need = p ** 3 * m
            if need >= form.nmax:
                continue
            stage2.append((rows_for(form, p ** 3 * m), rows_for(form, p2 * m),
                           rows_for(form, p * m), rows_for(form, m)))
    survivors = []
    for C1, C2 in pairs:
        ok = True
        for t8, x8, y8, z8 in stage2:
            for c in range(8):
                expr = (t8[c] + C1 * x8[c] + C2 * y8[c] + C1 * p2 * z8[c]) % p4
                if expr:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            survivors.append((C1, C2))

    # stage 3: exact invariants + full five-term verification
    verified = []
    for C1, C2 in survivors:
        try:
            H = CharPoly4(p, C1, C2, C1 * p2, p4).validate()
        except ValueError:
            continue
        if all(scholl_check(form, H, kappa, Nmax).passed for form in forms):
            verified.append(H)

    if not verified:
        raise NoSolution(f"no quartic passes the congruences at p={p}")
    if len(verified) == 1:
        return verified[0]

    # completely split prime: impose the squared quaternionic shape
    from .qmfactor import splitting_set

    if len(splitting_set(p)) == 3:
        squares = []
        for H in verified:
            if H.c1 % 2 == 0:
                a = H.c1 // 2
                b = p2
                if (a * a + 2 * b == H.c2 and 2 * a * b == H.c3
                        and b * b == H.c4):
                    squares.append(H)
        if len(squares) == 1:
            return squares[0]
    raise AmbiguousRecovery(
        f"{len(verified)} candidates survive at p={p}: "
        f"{[(H.c1, H.c2) for H in verified[:6]]}")
