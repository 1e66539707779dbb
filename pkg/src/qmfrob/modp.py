"""Integer power-series arithmetic mod p^k and p-adic embeddings.

The congruence checks need tens of thousands of coefficients of the
weight-3 family, far beyond what exact rational arithmetic can deliver.
Everything here works with dense coefficient lists of Python ints reduced
mod p^k; truncated products go through Kronecker substitution so that a
single big-integer multiply does the convolution.

A Place object fixes one prime above p in Q(i, sqrt2, sqrt3): it maps the
three generators to residues, either in Z/p^k or in its unramified
quadratic extension (Z/p^k)[w]/(w^2 - r), and evaluates valuations there.
"""

from math import gcd

try:
    from gmpy2 import mpz
except ImportError:  # pure-Python fallback; same results, slower multiplies
    def mpz(x):
        return x


def poly_mul(a, b, n_out, modulus):
    """Truncated product of coefficient lists, entries reduced mod modulus.

    Kronecker substitution: coefficients pack into fixed-width limbs of one
    big integer, one integer multiply does the convolution, and the limb
    width is chosen so column sums cannot carry.
    """
    na, nb = min(len(a), n_out), min(len(b), n_out)
    if na == 0 or nb == 0:
        return [0] * n_out
    limb_bits = 2 * (modulus - 1).bit_length() + min(na, nb).bit_length() + 1
    lb = (limb_bits + 7) // 8
    packed_a = int.from_bytes(b"".join(x.to_bytes(lb, "little") for x in a[:na]), "little")
    packed_b = int.from_bytes(b"".join(x.to_bytes(lb, "little") for x in b[:nb]), "little")
    raw = int(mpz(packed_a) * mpz(packed_b)).to_bytes((na + nb) * lb, "little")
    out = [0] * n_out
    for i in range(min(n_out, na + nb - 1)):
        out[i] = int.from_bytes(raw[i * lb:(i + 1) * lb], "little") % modulus
    return out


def poly_inv(a, n_out, modulus):
    """Newton inversion of a power series; a[0] must be a unit."""
    out = [pow(a[0], -1, modulus)]
    prec = 1
    while prec < n_out:
        prec = min(2 * prec, n_out)
        t = poly_mul(a, out, prec, modulus)
        t = [-x % modulus for x in t]
        t[0] = (t[0] + 2) % modulus
        out = poly_mul(out, t, prec, modulus)
    return out


def poly_pow(a, e, n_out, modulus):
    out = [1] + [0] * (n_out - 1)
    base = a[:n_out]
    while e:
        if e & 1:
            out = poly_mul(out, base, n_out, modulus)
        base = poly_mul(base, base, n_out, modulus)
        e >>= 1
    return out


def poly_root6(a, n_out, modulus):
    """a^(1/6) for a[0] = 1, via Newton for the inverse sixth root.

    s <- s*(7 - a s^6)/6 doubles the precision of s = a^(-1/6); the only
    division is by 6, a unit mod p^k for p >= 5.
    """
    inv6 = pow(6, -1, modulus)
    s = [1]
    prec = 1
    while prec < n_out:
        prec = min(2 * prec, n_out)
        s2 = poly_mul(s, s, prec, modulus)
        s6 = poly_mul(poly_mul(s2, s2, prec, modulus), s2, prec, modulus)
        t = poly_mul(a, s6, prec, modulus)
        t = [-x % modulus for x in t]
        t[0] = (t[0] + 7) % modulus
        t = [x * inv6 % modulus for x in t]
        s = poly_mul(s, t, prec, modulus)
    s2 = poly_mul(s, s, n_out, modulus)
    s5 = poly_mul(poly_mul(s2, s2, n_out, modulus), s, n_out, modulus)
    return poly_mul(a, s5, n_out, modulus)


def pentagonal_product(d, n_out, modulus):
    """prod_{k>=1} (1 - q^(dk)) as a coefficient list in whole powers of q."""
    out = [0] * n_out
    out[0] = 1
    k = 1
    while True:
        placed = False
        for g in (k * (3 * k - 1) // 2, k * (3 * k + 1) // 2):
            e = d * g
            if e < n_out:
                out[e] = (-1) ** k % modulus
                placed = True
        if not placed:
            break
        k += 1
    return out


class FormTable:
    """Shared mod-p^k coefficient tables g_j with F_j = q^(j/6) g_j(q).

    The whole weight-3 family reduces to one sixth root: with
    F = q*Fhat and B = q^-1*Bhat, radicand r = Bhat^(1/6) gives
    g_j = r^(6-j) * Fhat, all series in whole powers of q.
    """

    def __init__(self, p, k, n_units):
        """n_units: coefficients are valid for indices n < n_units on q^(n/6)."""
        if p < 5:
            raise ValueError("need a good prime p >= 5")
        self.p, self.k = p, k
        self.modulus = p ** k
        self.n_units = n_units
        n_out = n_units // 6 + 2
        m = self.modulus
        e1 = pentagonal_product(1, n_out, m)
        e2 = pentagonal_product(2, n_out, m)
        e3 = pentagonal_product(3, n_out, m)
        e6 = pentagonal_product(6, n_out, m)
        fhat = poly_mul(poly_mul(poly_pow(e1, 4, n_out, m), e2, n_out, m),
                        poly_pow(e6, 5, n_out, m), n_out, m)
        fhat = poly_mul(fhat, poly_inv(poly_pow(e3, 4, n_out, m), n_out, m), n_out, m)
        bhat = poly_mul(poly_pow(e2, 3, n_out, m), poly_pow(e3, 9, n_out, m), n_out, m)
        bhat = poly_mul(bhat, poly_inv(
            poly_mul(poly_pow(e1, 3, n_out, m), poly_pow(e6, 9, n_out, m), n_out, m),
            n_out, m), n_out, m)
        root = poly_root6(bhat, n_out, m)
        self._g = {}
        for j in range(1, 6):
            self._g[j] = poly_mul(poly_pow(root, 6 - j, n_out, m), fhat, n_out, m)

    def coeff(self, j, n):
        """a_j(n): coefficient of q^(n/6) in F_j, reduced mod p^k."""
        if n <= 0 or n % 6 != j % 6:
            return 0
        if n >= self.n_units:
            raise IndexError(f"index {n} beyond table precision {self.n_units}")
        return self._g[j][(n - j) // 6]


_FORM_TABLES = {}


def form_table(p, k, n_units):
    """Cached FormTable, grown on demand."""
    key = p
    tab = _FORM_TABLES.get(key)
    if tab is None or tab.k < k or tab.n_units < n_units:
        grown = tab is not None
        tab = FormTable(p, max(k, tab.k if grown else 0),
                        max(n_units, tab.n_units if grown else 0))
        _FORM_TABLES[key] = tab
    return tab


# -- p-adic places --------------------------------------------------------


def hensel_sqrt(a, p, k):
    """A root of x^2 = a mod p^k, or None when a is not a square mod p."""
    modulus = p ** k
    a %= modulus
    a0 = a % p
    if a0 == 0:
        raise ValueError("radicand divisible by p")
    if pow(a0, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        x = pow(a0, (p + 1) // 4, p)
    else:
        x = _tonelli(a0, p)
    m = p
    while m < modulus:
        m = min(m * m, modulus)
        x = (x - (x * x - a) * pow(2 * x, -1, m)) % m
    return x


def _tonelli(a, p):
    """Square root mod p (Tonelli-Shanks)."""
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def int_vp(x, p, cap):
    """p-adic valuation of a residue, capped (a residue 0 means >= cap)."""
    if x == 0:
        return cap
    v = 0
    while x % p == 0 and v < cap:
        x //= p
        v += 1
    return v


class Place:
    """One fixed prime of Q(i, sqrt2, sqrt3) above p, realized mod p^k.

    Values land in (Z/p^k)[w]/(w^2 - r) with r the smallest positive
    nonresidue mod p; generators that are squares mod p embed into the
    first component via Hensel lifting, the others pick up a w.  The
    extension is unramified, so the valuation of (x, y) is min(v(x), v(y)).
    """

    def __init__(self, p, k):
        self.p, self.k = p, k
        self.modulus = p ** k
        self.r = 2
        while pow(self.r, (p - 1) // 2, p) != p - 1:
            self.r += 1
        inv_r = pow(self.r, -1, self.modulus)
        imgs = []
        for d in (-1, 2, 3):
            root = hensel_sqrt(d, p, k)
            if root is not None:
                imgs.append((root, 0))
            else:
                imgs.append((0, hensel_sqrt(d * inv_r, p, k)))
        i_img, s2_img, s3_img = imgs
        s6_img = self.mul(s2_img, s3_img)
        self.basis = (
            (1, 0), i_img, s2_img, self.mul(i_img, s2_img),
            s3_img, self.mul(i_img, s3_img), s6_img, self.mul(i_img, s6_img),
        )

    def mul(self, a, b):
        m = self.modulus
        return ((a[0] * b[0] + self.r * a[1] * b[1]) % m,
                (a[0] * b[1] + a[1] * b[0]) % m)

    def add(self, a, b):
        m = self.modulus
        return ((a[0] + b[0]) % m, (a[1] + b[1]) % m)

    def scale(self, c, a):
        m = self.modulus
        return (c * a[0] % m, c * a[1] % m)

    def embed_coords(self, co8):
        """Image of sum co8[b] * basis_b; co8 are residues mod p^k."""
        x = y = 0
        for c, (bx, by) in zip(co8, self.basis):
            if c:
                x += c * bx
                y += c * by
        return (x % self.modulus, y % self.modulus)

    def embed_cyclo(self, value):
        return self.embed_coords(reduce_cyclo(value, self.p, self.k))

    def val(self, z):
        """Valuation of (x, y), capped at k."""
        return min(int_vp(z[0], self.p, self.k), int_vp(z[1], self.p, self.k))


class NonIntegralAtP(ArithmeticError):
    """A coefficient has negative p-adic valuation and cannot be reduced."""


def reduce_fraction(c, p, k):
    modulus = p ** k
    num, den = c.numerator, c.denominator
    if den % p == 0:
        raise NonIntegralAtP(f"{c} is not p-integral at {p}")
    return num * pow(den, -1, modulus) % modulus


def reduce_cyclo(value, p, k):
    """8 residue coordinates of a CycloNum mod p^k."""
    return tuple(reduce_fraction(c, p, k) for c in value.co)
