"""Exact truncated q-expansions on the fractional grid q^(1/24).

A QSeries stores coefficients of q^((lead+n)/24) densely, with CycloNum
values, so eta quotients (grid q^(d/24)), the weight-3 family on q^(1/6)
and the eigenform components on q^(n/24) all live on one grid and share
one convolution.

The named forms:

    F  = eta(z)^4 eta(2z) eta(6z)^5 / eta(3z)^4      (weight 3, lead q)
    B  = eta(2z)^3 eta(3z)^9 / (eta(z)^3 eta(6z)^9)   (lead q^-1)
    Fj = B^((6-j)/6) * F   for j = 1..5               (lead q^(j/6))

plus the eta-quotient eigenform components f5, f7, f13, f23 and the four
tabulated components f1, f11, f17, f19 (shipped as literal coefficient
data; only eight coefficients each are known).
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .cyclo import CycloNum, I, SQRT2, SQRT3, SQRT6, ZERO, ONE, sqrt_small

GRID = 24


class NonUnitLeading(ValueError):
    """Rational powers need leading coefficient exactly 1."""


class OffGridExponent(ValueError):
    """The requested exponent does not lie on the 1/24 grid."""


class PrecisionExceedsListedData(ValueError):
    """Only eight coefficients of f1, f11, f17, f19 are known."""


class InsufficientPrecision(ValueError):
    """A coefficient beyond the stored window was requested."""


def _as_cyclo(c):
    return c if isinstance(c, CycloNum) else CycloNum.from_rat(c)


class QSeries:
    """Truncated series sum_n c[n] q^((lead+n)/24), c[0] != 0 unless zero."""

    __slots__ = ("lead", "coeffs", "prec")

    def __init__(self, lead, coeffs, prec=None):
        coeffs = [_as_cyclo(c) for c in coeffs]
        drop = 0
        while drop < len(coeffs) and coeffs[drop].is_zero():
            drop += 1
        self.prec = len(coeffs) if prec is None else prec
        if drop == len(coeffs):
            self.lead = lead + self.prec
            self.coeffs = []
            self.prec = 0
        else:
            self.lead = lead + drop
            self.coeffs = coeffs[drop:]
            self.prec -= drop

    @classmethod
    def zero(cls):
        return cls(0, [])

    @classmethod
    def one(cls, prec):
        return cls(0, [ONE] + [ZERO] * (prec - 1))

    def is_zero(self):
        return not self.coeffs

    @property
    def end(self):
        """First grid exponent beyond the stored window."""
        return self.lead + self.prec

    def coeff(self, n):
        """Coefficient of q^(n/24); 0 below the window, error beyond it."""
        if self.is_zero():
            return ZERO
        if n < self.lead:
            return ZERO
        if n >= self.end:
            raise InsufficientPrecision(
                f"coefficient q^({n}/24) beyond stored precision q^({self.end}/24)")
        return self.coeffs[n - self.lead]

    # -- arithmetic -----------------------------------------------------

    def __add__(self, other):
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        lead = min(self.lead, other.lead)
        end = min(self.end, other.end)
        out = []
        for n in range(lead, end):
            a = self.coeffs[n - self.lead] if self.lead <= n else ZERO
            b = other.coeffs[n - other.lead] if other.lead <= n else ZERO
            out.append(a + b)
        return QSeries(lead, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        c = _as_cyclo(c)
        if c.is_zero() or self.is_zero():
            return QSeries.zero()
        return QSeries(self.lead, [c * x for x in self.coeffs], self.prec)

    def _stride(self):
        s = 0
        for n, c in enumerate(self.coeffs):
            if n and not c.is_zero():
                s = gcd(s, n)
                if s == 1:
                    return 1
        return s or 1

    def __mul__(self, other):
        if self.is_zero() or other.is_zero():
            return QSeries.zero()
        prec = min(self.prec, other.prec)
        # convolve on the common support stride; forms here are usually
        # supported on q^(k/6) or integer powers inside the 1/24 grid
        s = gcd(self._stride(), other._stride())
        na = (min(self.prec, prec) + s - 1) // s
        nb = (min(other.prec, prec) + s - 1) // s
        nout = (prec + s - 1) // s
        out = [ZERO] * nout
        a, b = self.coeffs, other.coeffs
        for ia in range(na):
            ca = a[ia * s]
            if ca.is_zero():
                continue
            for ib in range(min(nb, nout - ia)):
                cb = b[ib * s]
                if not cb.is_zero():
                    out[ia + ib] = out[ia + ib] + ca * cb
        full = [ZERO] * prec
        for k, c in enumerate(out):
            if k * s < prec:
                full[k * s] = c
        return QSeries(self.lead + other.lead, full)

    def inverse(self):
        """Reciprocal series; leading coefficient must be invertible."""
        if self.is_zero():
            raise ZeroDivisionError("inverting the zero series")
        s = self._stride()
        n = (self.prec + s - 1) // s
        a = [self.coeffs[k * s] for k in range(n)]
        inv0 = a[0].inverse()
        out = [inv0] + [ZERO] * (n - 1)
        for m in range(1, n):
            acc = ZERO
            for k in range(1, m + 1):
                if not a[k].is_zero():
                    acc = acc + a[k] * out[m - k]
            out[m] = -inv0 * acc
        full = [ZERO] * self.prec
        for k, c in enumerate(out):
            if k * s < self.prec:
                full[k * s] = c
        return QSeries(-self.lead, full)

    def pow_rational(self, num, den):
        """self^(num/den) by the binomial recurrence; needs leading coeff 1.

        The new lead is lead*num/den and must land back on the 1/24 grid.
        """
        if self.is_zero():
            raise NonUnitLeading("zero series has no rational power")
        if self.coeffs[0] != ONE:
            raise NonUnitLeading("rational powers require leading coefficient 1")
        if (self.lead * num) % den != 0:
            raise OffGridExponent(
                f"lead {self.lead}/24 times {num}/{den} leaves the grid")
        alpha = Fraction(num, den)
        s = self._stride()
        n = (self.prec + s - 1) // s
        a = [self.coeffs[k * s] for k in range(n)]
        # n*g_n = sum_k ((alpha+1)k - n) a_k g_{n-k}
        g = [ONE] + [ZERO] * (n - 1)
        for mm in range(1, n):
            acc = ZERO
            for k in range(1, mm + 1):
                if not a[k].is_zero():
                    acc = acc + CycloNum.from_rat((alpha + 1) * k - mm) * a[k] * g[mm - k]
            g[mm] = acc * CycloNum.from_rat(Fraction(1, mm))
        full = [ZERO] * self.prec
        for k, c in enumerate(g):
            if k * s < self.prec:
                full[k * s] = c
        return QSeries(self.lead * num // den, full)

    def __eq__(self, other):
        return (isinstance(other, QSeries) and self.lead == other.lead
                and self.coeffs == other.coeffs)

    def __repr__(self):
        if self.is_zero():
            return "QSeries(0)"
        head = ", ".join(f"q^({self.lead + n}/24)*({c})"
                         for n, c in enumerate(self.coeffs[:4]) if not c.is_zero())
        return f"QSeries({head} + ..., prec={self.prec})"

    def support_residues(self, m):
        """Set of (lead+n) mod m over the nonzero stored coefficients."""
        if GRID % m != 0:
            raise ValueError("modulus must divide 24")
        return {(self.lead + n) % m
                for n, c in enumerate(self.coeffs) if not c.is_zero()}

    def dump_tsv(self):
        """TSV lines "n<TAB>coefficient-json" for the nonzero coefficients."""
        import json
        return "\n".join(f"{self.lead + n}\t{json.dumps(c.to_json())}"
                         for n, c in enumerate(self.coeffs) if not c.is_zero())


# -- eta quotients ------------------------------------------------------


@dataclass(frozen=True)
class EtaQuotient:
    """prod_d eta(d z)^{r_d}, stored as ((d, r), ...) with distinct d, r != 0."""

    factors: tuple

    def __post_init__(self):
        ds = [d for d, _ in self.factors]
        if len(set(ds)) != len(ds):
            raise ValueError("duplicate eta arguments")
        if any(r == 0 for _, r in self.factors):
            raise ValueError("zero exponent in eta quotient")
        if any(d <= 0 for d, _ in self.factors):
            raise ValueError("eta arguments must be positive")

    @property
    def lead(self):
        return sum(d * r for d, r in self.factors)


def eta_expand(d, prec):
    """eta(d z) = q^(d/24) prod_k (1 - q^(dk)), to prec grid coefficients.

    The product expands by Euler's pentagonal number theorem,
    sum_{k in Z} (-1)^k q^(d k(3k-1)/2), so the series is +-1 on the sparse
    set of generalized pentagonal offsets and 0 elsewhere.
    """
    if prec < 1:
        raise ValueError("prec must be >= 1")
    coeffs = [0] * prec
    coeffs[0] = 1
    k = 1
    while True:
        placed = False
        for g in (k * (3 * k - 1) // 2, k * (3 * k + 1) // 2):
            e = 24 * d * g  # whole powers of q, in 1/24 grid steps
            if e < prec:
                coeffs[e] = (-1) ** k
                placed = True
        if not placed:
            break
        k += 1
    return QSeries(d, coeffs)


def etaq_expand(e, prec):
    """Expansion of an eta quotient, negative exponents via series inversion."""
    if prec < 1:
        raise ValueError("prec must be >= 1")
    num = QSeries.one(prec)
    den = QSeries.one(prec)
    for d, r in e.factors:
        base = eta_expand(d, prec)
        # strip the q^(d/24) prefactor before powering to keep leads exact
        core = QSeries(0, base.coeffs, base.prec)
        piece = _int_pow(core, abs(r), prec)
        if r > 0:
            num = num * piece
        else:
            den = den * piece
    out = num * den.inverse()
    return QSeries(out.lead + e.lead, out.coeffs, out.prec)


def _int_pow(series, n, prec):
    out = QSeries.one(prec)
    base = series
    while n:
        if n & 1:
            out = out * base
        base = base * base
        n >>= 1
    return out


# -- the named forms ------------------------------------------------------

ETA_QUOTIENTS = {
    "F": EtaQuotient(((1, 4), (2, 1), (6, 5), (3, -4))),
    "B": EtaQuotient(((2, 3), (3, 9), (1, -3), (6, -9))),
    "f5": EtaQuotient(((1, 5), (6, 5), (3, -2), (12, -2))),
    "f7": EtaQuotient(((1, 5), (4, 1), (6, 2), (2, -1), (12, -1))),
    "f13": EtaQuotient(((1, 4), (2, 2), (3, 1), (12, 1), (4, -1), (6, -1))),
    "f23": EtaQuotient(((1, 5), (12, 2), (6, -1))),
}

DEFAULT_PREC = 1200

# Tabulated coefficients of the four non-eta eigenform components, in the
# printed order; see build_f for the two candidate index conventions.
LISTED_COMPONENTS = {
    1: (1, 29, 59, 20, 40, -49, -270, 61),
    11: (1, 9, 4, 15, -20, 6, -45, 6),
    17: (5, 17, 18, 3, -15, -25, -36, -72),
    19: (5, 10, 25, -27, 27, -43, -40, -45),
}

# Coefficient of each component inside the assembled eigenform: the scalars
# multiplying f1, f5, ..., f23, written over the basis of Q(i, sqrt2, sqrt3).
COMPONENT_SCALARS = {
    1: ONE,
    5: 3 * SQRT6,
    7: 6 * SQRT3,
    11: 6 * SQRT2,
    13: 6 * I * SQRT3,
    17: 3 * I * SQRT2,
    19: -4 * I,
    23: -6 * I * SQRT6,
}


def build_form(name, prec=DEFAULT_PREC):
    """Expansion of a named form: F, B, F1..F5, f5, f7, f13, f23."""
    if name in ETA_QUOTIENTS:
        return etaq_expand(ETA_QUOTIENTS[name], prec)
    if name in ("F1", "F2", "F3", "F4", "F5"):
        j = int(name[1])
        b = build_form("B", prec)
        f = build_form("F", prec)
        return b.pow_rational(6 - j, 6) * f
    raise KeyError(f"unknown form {name!r}")


def build_eigenbasis(u, prec=DEFAULT_PREC):
    """The two candidate eigenforms attached to u in {-3, -2, 6}.

    Returns ((label, series), (label, series)); the first entry carries the
    +i-eigenvector candidate.  Which of the pair actually matches which
    quadratic factor at a given prime is settled by the congruence test in
    qmfactor.pair_eigenvectors.
    """
    if u not in (-3, -2, 6):
        raise ValueError("eigenbasis exists only for u in {-3, -2, 6}")
    f1 = build_form("F1", prec)
    f5 = build_form("F5", prec)
    if u == -3:
        return (("F1", f1), ("F5", f5))
    if u == -2:
        return (("F1+2F5", f1 + f5.scale(2)), ("F1-2F5", f1 - f5.scale(2)))
    return (("F1+2iF5", f1 + f5.scale(2 * I)), ("F1-2iF5", f1 - f5.scale(2 * I)))


ETA_COMPONENTS = (5, 7, 13, 23)


def _component_window_end(j, offset_shift):
    """First exponent of residue class j whose coefficient is not tabulated."""
    return j + 24 * (len(LISTED_COMPONENTS[j]) + offset_shift + 1)


def f_component(j, offset_shift=-1, end=None):
    """Component f_j of the assembled eigenform, valid on exponents < end.

    The eta-quotient components (j in 5, 7, 13, 23) expand to any end; the
    other four are literal data with eight known coefficients each.
    """
    if j in ETA_COMPONENTS:
        return etaq_expand(ETA_QUOTIENTS[f"f{j}"], (end or DEFAULT_PREC) - j)
    data = LISTED_COMPONENTS[j]
    limit = _component_window_end(j, offset_shift)
    if end is None:
        end = limit
    if end > limit:
        raise PrecisionExceedsListedData(
            f"f{j} is tabulated only for exponents below {limit}")
    coeffs = [ZERO] * (end - j)
    for m, c in enumerate(data, start=1):
        n = j + 24 * (m + offset_shift)
        if 0 <= n - j < len(coeffs):
            coeffs[n - j] = CycloNum.from_rat(c)
    return QSeries(j, coeffs)


def build_f(offset_shift=-1, end=None):
    """The assembled congruence eigenform sum_j scalar_j f_j on q^(n/24).

    offset_shift selects how the printed component listings are indexed:
    shift 0 reads "q + 29q^2 + ..." literally (inner series starting at q),
    shift -1 reads those numbers as coefficients of q^0, q^1, ....  The
    empirical calibration (calibrate_f_offset) picks -1.  Coefficients are
    valid for exponents n < end; end is capped by the tabulated data.
    """
    if offset_shift not in (0, -1):
        raise ValueError("offset_shift must be 0 or -1")
    limit = min(_component_window_end(j, offset_shift) for j in LISTED_COMPONENTS)
    if end is None:
        end = limit
    if end > limit:
        raise PrecisionExceedsListedData(
            f"assembled eigenform known only for exponents below {limit}")
    total = QSeries.zero()
    for j, scalar in COMPONENT_SCALARS.items():
        total = total + f_component(j, offset_shift, end).scale(scalar)
    return total


class NoConsistentOffset(ValueError):
    """Neither candidate index convention satisfies the Hecke relations."""


def coefficient(series, n):
    """a(n): the coefficient of q^(n/24)."""
    return series.coeff(n)


def calibrate_f_offset(prec=None):
    """Pick the component index convention from the Hecke relations.

    A normalized weight-3 eigenform with nebentypus chi = (-6/.) satisfies
    a(49) = a(7)^2 - chi(7)*49 and a(35) = a(5)*a(7); exactly one of the two
    candidate conventions does.
    """
    from .qmfactor import legendre

    good = []
    for shift in (0, -1):
        f = build_f(shift, prec)
        chi7 = legendre(-6, 7)
        lhs49 = coefficient(f, 49)
        rhs49 = coefficient(f, 7) ** 2 - CycloNum.from_rat(chi7 * 49)
        lhs35 = coefficient(f, 35)
        rhs35 = coefficient(f, 5) * coefficient(f, 7)
        if lhs49 == rhs49 and lhs35 == rhs35:
            good.append(shift)
    if len(good) != 1:
        raise NoConsistentOffset(f"offsets passing Hecke relations: {good}")
    return good[0]
