"""Dense univariate polynomials over the Gaussian rationals.

Coefficients are stored lowest degree first with no trailing zeros, matching
the on-disk JSON convention for rational functions.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence, Tuple

from .gaussian import GaussianRational, ONE, ZERO, gr

Coeffs = Tuple[GaussianRational, ...]


def _trim(cs: Sequence[GaussianRational]) -> Coeffs:
    n = len(cs)
    while n and cs[n - 1].is_zero():
        n -= 1
    return tuple(cs[:n])


class Poly:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        object.__setattr__(
            self, "coeffs", _trim([GaussianRational.of(c) for c in coeffs])
        )

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    # -- constructors ---------------------------------------------------

    @staticmethod
    def const(c) -> "Poly":
        return Poly([GaussianRational.of(c)])

    @staticmethod
    def x() -> "Poly":
        return Poly([ZERO, ONE])

    @staticmethod
    def monomial(k: int, c=1) -> "Poly":
        return Poly([ZERO] * k + [GaussianRational.of(c)])

    # -- basic queries ----------------------------------------------------

    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0].is_one()

    def is_const(self) -> bool:
        return len(self.coeffs) <= 1

    def const_value(self) -> GaussianRational:
        if not self.is_const():
            raise ValueError("not a constant polynomial")
        return self.coeffs[0] if self.coeffs else ZERO

    def leading(self) -> GaussianRational:
        if not self.coeffs:
            return ZERO
        return self.coeffs[-1]

    def __getitem__(self, k: int) -> GaussianRational:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return ZERO

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] = out[k] + c
        return Poly(out)

    def __neg__(self) -> "Poly":
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction, GaussianRational)):
            c = GaussianRational.of(other)
            if c.is_zero():
                return Poly()
            return Poly([a * c for a in self.coeffs])
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out = [ZERO] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai.is_zero():
                continue
            for j, bj in enumerate(b):
                out[i + j] = out[i + j] + ai * bj
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        out = Poly.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def scale(self, c) -> "Poly":
        return self * c

    def shift(self, k: int) -> "Poly":
        """Multiply by x^k (k >= 0)."""
        if self.is_zero():
            return self
        return Poly([ZERO] * k + list(self.coeffs))

    def divmod(self, other: "Poly") -> Tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        num = list(self.coeffs)
        dd = other.degree()
        lead_inv = other.leading().inverse()
        q = [ZERO] * max(0, len(num) - dd)
        for k in range(len(num) - dd - 1, -1, -1):
            c = num[k + dd] * lead_inv
            if not c.is_zero():
                q[k] = c
                for j, oc in enumerate(other.coeffs):
                    num[k + j] = num[k + j] - c * oc
        return Poly(q), Poly(num[:dd] if dd > 0 else [])

    def __mod__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[1]

    def __floordiv__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[0]

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self * self.leading().inverse()

    def derivative(self) -> "Poly":
        return Poly([c * k for k, c in enumerate(self.coeffs)][1:])

    def compose_neg(self) -> "Poly":
        """p(-x)."""
        return Poly([c if k % 2 == 0 else -c for k, c in enumerate(self.coeffs)])

    def compose_linear(self, a, b) -> "Poly":
        """p(a*x + b) by Horner."""
        ax_b = Poly([GaussianRational.of(b), GaussianRational.of(a)])
        out = Poly()
        for c in reversed(self.coeffs):
            out = out * ax_b + Poly.const(c)
        return out

    def eval(self, v) -> GaussianRational:
        v = GaussianRational.of(v)
        out = ZERO
        for c in reversed(self.coeffs):
            out = out * v + c
        return out

    def eval_complex(self, v: complex) -> complex:
        out = 0j
        for c in reversed(self.coeffs):
            out = out * v + c.to_complex()
        return out

    def conj(self) -> "Poly":
        """Polynomial with conjugated coefficients."""
        return Poly([c.conj() for c in self.coeffs])

    def real_imag(self) -> Tuple["Poly", "Poly"]:
        re = Poly([GaussianRational(c.re) for c in self.coeffs])
        im = Poly([GaussianRational(c.im) for c in self.coeffs])
        return re, im

    # -- gcd --------------------------------------------------------------

    def gcd(self, other: "Poly") -> "Poly":
        """Monic gcd over Q(i), via a modular degree probe plus primitive PRS.

        Straight monic Euclid suffers catastrophic coefficient swell; the
        usual remedy of a single-prime degree probe rejects the common
        coprime case instantly, and the exact fallback works on
        content-stripped Gaussian-integer coefficients.
        """
        if self.is_zero():
            return other.monic()
        if other.is_zero():
            return self.monic()
        if self.degree() == 0 or other.degree() == 0:
            return P_ONE
        if _modular_gcd_degree(self, other) == 0:
            return P_ONE
        a = _int_coeffs(self)
        b = _int_coeffs(other)
        g = _prs_gcd(a, b)
        return Poly(g).monic()

    def squarefree_part(self) -> "Poly":
        if self.degree() <= 0:
            return self.monic()
        g = self.gcd(self.derivative())
        return (self // g).monic()

    # -- comparison ----------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction, GaussianRational)):
            return self == Poly.const(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        if self.is_zero():
            return "Poly(0)"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            if k == 0:
                terms.append(str(c))
            elif k == 1:
                terms.append(f"({c})*x")
            else:
                terms.append(f"({c})*x^{k}")
        return "Poly(" + " + ".join(terms) + ")"


P_ZERO = Poly()
P_ONE = Poly.const(1)


# -- gcd internals ----------------------------------------------------------

# Prime p = 1 mod 4 so that i has a square root s in GF(p); Q(i) coefficients
# with denominators prime to p map to GF(p) and gcd degrees can only grow
# under reduction.
_GCD_PRIMES = (2147483629, 2147483549, 2147482951)


def _sqrt_minus_one(p: int) -> int:
    for a in range(2, 50):
        s = pow(a, (p - 1) // 4, p)
        if (s * s) % p == p - 1:
            return s
    raise AssertionError("no sqrt of -1 found")


_SQRT_CACHE = {}


def _mod_image(poly: "Poly", p: int, s: int):
    out = []
    for c in poly.coeffs:
        dn = int(c.re.denominator) * int(c.im.denominator)
        if dn % p == 0:
            return None
        num = int(c.re.numerator) * int(c.im.denominator) + s * int(
            c.im.numerator
        ) * int(c.re.denominator)
        out.append((num * pow(dn, p - 2, p)) % p)
    while out and out[-1] == 0:
        out.pop()
    return out


def _modular_gcd_degree(a: "Poly", b: "Poly") -> int:
    """Degree of gcd(a mod p, b mod p); an upper bound on deg gcd is not
    guaranteed, but a result of 0 certifies coprimality over Q(i)."""
    for p in _GCD_PRIMES:
        if p not in _SQRT_CACHE:
            _SQRT_CACHE[p] = _sqrt_minus_one(p)
        s = _SQRT_CACHE[p]
        fa = _mod_image(a, p, s)
        fb = _mod_image(b, p, s)
        if fa is None or fb is None or not fa or not fb:
            continue
        if len(fa) - 1 != a.degree() or len(fb) - 1 != b.degree():
            continue  # leading coefficient vanished mod p; try another prime
        while fb:
            fa, fb = fb, _mod_poly_rem(fa, fb, p)
        return len(fa) - 1
    return min(a.degree(), b.degree())


def _mod_poly_rem(a, b, p):
    a = list(a)
    db = len(b) - 1
    inv = pow(b[-1], p - 2, p)
    for k in range(len(a) - 1 - db, -1, -1):
        c = (a[k + db] * inv) % p
        if c:
            for j, bc in enumerate(b):
                a[k + j] = (a[k + j] - c * bc) % p
    while a and a[-1] == 0:
        a.pop()
    return a


def _int_coeffs(poly: "Poly"):
    """Scale to Gaussian-integer coefficients as (re, im) int pairs."""
    from math import gcd as igcd

    lcm = 1
    for c in poly.coeffs:
        for d in (int(c.re.denominator), int(c.im.denominator)):
            lcm = lcm * d // igcd(lcm, d)
    return [
        (int(c.re.numerator) * (lcm // int(c.re.denominator)),
         int(c.im.numerator) * (lcm // int(c.im.denominator)))
        for c in poly.coeffs
    ]


def _pair_mul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _pair_sub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def _content_strip(cs):
    from math import gcd as igcd

    g = 0
    for re, im in cs:
        g = igcd(g, abs(re))
        g = igcd(g, abs(im))
    if g > 1:
        cs = [(re // g, im // g) for re, im in cs]
    return cs


def _prs_gcd(a, b):
    """Primitive pseudo-remainder gcd on Gaussian-integer coefficient lists."""
    a = _content_strip([c for c in a])
    b = _content_strip([c for c in b])
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _pseudo_rem(a, b)
        while r and r[-1] == (0, 0):
            r.pop()
        a, b = b, _content_strip(r) if r else []
    return [GaussianRational(Fraction(re), Fraction(im)) for re, im in a]


def _pseudo_rem(a, b):
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    for k in range(len(a) - 1 - db, -1, -1):
        c = a[k + db]
        a = [_pair_mul(x, lb) for x in a]
        if c != (0, 0):
            for j, bc in enumerate(b):
                a[k + j] = _pair_sub(a[k + j], _pair_mul(c, bc))
    return a[:db] if db > 0 else []
