"""Exact arithmetic in the degree-8 field Q(i, sqrt2, sqrt3).

Every element is stored by its coordinates over the fixed basis

    (1, i, sqrt2, i*sqrt2, sqrt3, i*sqrt3, sqrt6, i*sqrt6)

with i the upper half-plane root of -1 and the real radicals positive,
so sqrt6 = sqrt2*sqrt3.  This field contains all 24th roots of unity
and all square roots of -1, +-2, +-3, +-6, which is exactly what the
rest of the package needs: series coefficients, quadratic-factor data
and the sixth root of unity e^(pi*i/3) = (1 + i*sqrt3)/2.
"""

from fractions import Fraction
from math import inf

BASIS_NAMES = ("1", "i", "sqrt2", "i*sqrt2", "sqrt3", "i*sqrt3", "sqrt6", "i*sqrt6")

# basis index = eps + 2*a + 4*b <-> i^eps * sqrt2^a * sqrt3^b


def _build_mul_table():
    """table[j][k] = (index, integer factor) with b_j*b_k = factor*b_index."""
    table = []
    for j in range(8):
        e1, a1, b1 = j & 1, (j >> 1) & 1, (j >> 2) & 1
        row = []
        for k in range(8):
            e2, a2, b2 = k & 1, (k >> 1) & 1, (k >> 2) & 1
            sign = -1 if (e1 + e2) >= 2 else 1
            factor = sign * 2 ** ((a1 + a2) // 2) * 3 ** ((b1 + b2) // 2)
            idx = ((e1 + e2) & 1) + 2 * ((a1 + a2) & 1) + 4 * ((b1 + b2) & 1)
            row.append((idx, factor))
        table.append(tuple(row))
    return tuple(table)


_MUL = _build_mul_table()
_ZERO8 = (Fraction(0),) * 8


class UnrepresentableRadical(ValueError):
    """sqrt(d) does not lie in Q(i, sqrt2, sqrt3)."""


class CycloNum:
    """An element of Q(i, sqrt2, sqrt3), immutable."""

    __slots__ = ("co",)

    def __init__(self, coords=None):
        if coords is None:
            self.co = _ZERO8
        else:
            if len(coords) != 8:
                raise ValueError("need 8 coordinates")
            self.co = tuple(Fraction(c) for c in coords)

    @classmethod
    def from_rat(cls, value):
        x = cls.__new__(cls)
        x.co = (Fraction(value),) + _ZERO8[1:]
        return x

    @classmethod
    def basis_element(cls, idx, scale=1):
        co = [Fraction(0)] * 8
        co[idx] = Fraction(scale)
        x = cls.__new__(cls)
        x.co = tuple(co)
        return x

    # -- predicates ----------------------------------------------------

    def is_zero(self):
        return all(c == 0 for c in self.co)

    def is_rational(self):
        return all(c == 0 for c in self.co[1:])

    def rational(self):
        """The value as a Fraction; raises if the element is irrational."""
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.co[0]

    # -- ring operations ----------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        x = CycloNum.__new__(CycloNum)
        x.co = tuple(a + b for a, b in zip(self.co, other.co))
        return x

    __radd__ = __add__

    def __neg__(self):
        x = CycloNum.__new__(CycloNum)
        x.co = tuple(-a for a in self.co)
        return x

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        x = CycloNum.__new__(CycloNum)
        x.co = tuple(a - b for a, b in zip(self.co, other.co))
        return x

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.co, other.co
        acc = [Fraction(0)] * 8
        for j in range(8):
            cj = a[j]
            if cj == 0:
                continue
            row = _MUL[j]
            for k in range(8):
                ck = b[k]
                if ck == 0:
                    continue
                idx, f = row[k]
                acc[idx] += f * cj * ck
        x = CycloNum.__new__(CycloNum)
        x.co = tuple(acc)
        return x

    __rmul__ = __mul__

    def inverse(self):
        """1/self, as the product of the seven nontrivial conjugates over the norm."""
        if self.is_zero():
            raise ZeroDivisionError("cyclotomic division by zero")
        prod = ONE
        for mask in range(1, 8):
            flips = {name for bit, name in ((1, "i"), (2, "sqrt2"), (4, "sqrt3"))
                     if mask & bit}
            prod = prod * self.conj(flips)
        norm = (self * prod).rational()
        return prod * CycloNum.from_rat(Fraction(1, 1) / norm)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return _coerce(other) * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out, base = ONE, self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.co == other.co

    def __hash__(self):
        return hash(self.co)

    # -- field structure ----------------------------------------------

    def conj(self, flips):
        """Galois conjugation negating the generators named in `flips`.

        `flips` is an iterable drawn from {"i", "sqrt2", "sqrt3"}.  A basis
        coordinate is negated iff its monomial contains an odd number of
        flipped generators, which makes this a ring automorphism.
        """
        mask = 0
        for name in flips:
            mask |= {"i": 1, "sqrt2": 2, "sqrt3": 4}[name]
        x = CycloNum.__new__(CycloNum)
        x.co = tuple(-c if (bin(idx & mask).count("1") & 1) else c
                     for idx, c in enumerate(self.co))
        return x

    def abs2(self):
        """|self|^2 = self * conj(self, {i}) under the fixed complex embedding."""
        return self * self.conj({"i"})

    def vp(self, p):
        """Coordinate-wise p-adic valuation, minimum over the 8 coordinates.

        For p >= 5 (unramified here, with the basis spanning the p-local
        maximal order) this is the smallest normalized valuation over all
        primes above p.  Returns math.inf for zero.  p in {2, 3} is refused:
        those primes ramify and coordinates do not see place valuations.
        """
        if p < 5:
            raise ValueError("valuation only supported for primes p >= 5")
        vals = [_frac_vp(c, p) for c in self.co if c != 0]
        return min(vals) if vals else inf

    # -- presentation ---------------------------------------------------

    def __repr__(self):
        if self.is_zero():
            return "0"
        parts = []
        for name, c in zip(BASIS_NAMES, self.co):
            if c == 0:
                continue
            if name == "1":
                parts.append(str(c))
            elif c == 1:
                parts.append(name)
            elif c == -1:
                parts.append(f"-{name}")
            else:
                parts.append(f"{c}*{name}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self):
        """JSON form: list of 8 strings "num/den" in the fixed basis order."""
        return [f"{c.numerator}/{c.denominator}" for c in self.co]

    @classmethod
    def from_json(cls, data):
        return cls([Fraction(s) for s in data])


def _coerce(value):
    if isinstance(value, CycloNum):
        return value
    if isinstance(value, (int, Fraction)):
        return CycloNum.from_rat(value)
    return NotImplemented


def _frac_vp(c, p):
    v, num, den = 0, c.numerator, c.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


ZERO = CycloNum()
ONE = CycloNum.from_rat(1)
I = CycloNum.basis_element(1)
SQRT2 = CycloNum.basis_element(2)
SQRT3 = CycloNum.basis_element(4)
SQRT6 = CycloNum.basis_element(6)

# e^(pi i/3) and e^(-pi i/3), the sixth roots of unity used by the upper
# triangular translation action and the base maps of the surface package.
ZETA6 = CycloNum([Fraction(1, 2), 0, 0, 0, 0, Fraction(1, 2), 0, 0])
ZETA6_BAR = ZETA6.conj({"i"})


def sqrt_small(d):
    """sqrt(d) as a CycloNum for d = m^2*d0 with squarefree part d0 | 6 (up to sign).

    Negative d0 picks the root with positive imaginary part (i*sqrt|d0|).
    Raises UnrepresentableRadical when the squarefree part is not in
    {1, -1, +-2, +-3, +-6}.
    """
    if d == 0:
        return ZERO
    m, d0 = 1, d
    k = 2
    while k * k <= abs(d0):
        while d0 % (k * k) == 0:
            d0 //= k * k
            m *= k
        k += 1
    idx = {1: 0, -1: 1, 2: 2, -2: 3, 3: 4, -3: 5, 6: 6, -6: 7}.get(d0)
    if idx is None:
        raise UnrepresentableRadical(f"sqrt({d}) is not in Q(i, sqrt2, sqrt3)")
    return CycloNum.basis_element(idx, m)
