"""Rational functions of one variable over Q(i), scalar and matrix valued.

Numerators are expanded polynomials; denominators are kept factored into
monic irreducibles (see fden), which makes products, sums, derivatives and
cancellation run without polynomial gcds.  Denominators handed in as plain
polynomials are factored once over Q(i) through sympy and cached.

Partial-fraction decompositions read the stored factors directly; a factor of
degree two or more signals a pole outside Q(i) and raises UnsupportedPole.
Real-pole detection is per-factor and cached, with a Sturm-chain fallback for
numerator root counting elsewhere in the package.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import sympy

from .errors import NotInvertible, UnsupportedPole
from .fden import FDen
from .gaussian import GaussianRational, ONE, ZERO, gr
from .poly import P_ONE, P_ZERO, Poly

_x = sympy.symbols("_zeta")


def _poly_to_sympy(p: Poly):
    return sympy.Poly.from_list(
        [
            sympy.Rational(int(c.re.numerator), int(c.re.denominator))
            + sympy.I * sympy.Rational(int(c.im.numerator), int(c.im.denominator))
            for c in reversed(p.coeffs)
        ]
        or [0],
        _x,
        domain="QQ_I",
    )


_factor_cache: Dict[Tuple, List[Tuple[Poly, int]]] = {}


def factor_poly(p: Poly) -> List[Tuple[Poly, int]]:
    """Irreducible factorisation over Q(i) (monic factors, multiplicities)."""
    key = p.coeffs
    hit = _factor_cache.get(key)
    if hit is not None:
        return hit
    if p.degree() <= 0:
        _factor_cache[key] = []
        return []
    if p.degree() == 1:
        out = [(p.monic(), 1)]
        _factor_cache[key] = out
        return out
    sp = _poly_to_sympy(p)
    _, facs = sp.factor_list()
    out = []
    for fac, mult in facs:
        cs = fac.all_coeffs()
        coeffs = []
        for c in reversed(cs):
            re, im = sympy.simplify(sympy.nsimplify(c)).as_real_imag()
            coeffs.append(
                GaussianRational(
                    Fraction(int(re.p), int(re.q)), Fraction(int(im.p), int(im.q))
                )
            )
        out.append((Poly(coeffs).monic(), int(mult)))
    _factor_cache[key] = out
    return out


def _fden_from_poly(p: Poly) -> Tuple[FDen, GaussianRational]:
    """Factor a denominator polynomial; returns (factored, leading coeff)."""
    if p.is_zero():
        raise ZeroDivisionError("zero denominator")
    lead = p.leading()
    if p.degree() == 0:
        return FDen.one(), lead
    out = FDen.one()
    for fac, mult in factor_poly(p):
        out = out.mul_factor(fac, mult)
    return out, lead


def _cancel(num: Poly, den: FDen) -> Tuple[Poly, FDen]:
    if num.is_zero():
        return num, FDen.one()
    for key, (fac, e) in list(den.factors.items()):
        removed = 0
        while removed < e:
            q, r = num.divmod(fac)
            if not r.is_zero():
                break
            num = q
            removed += 1
        if removed:
            den = den.div_factor(key, removed)
    return num, den


class PartialFractions:
    """Polynomial part plus terms c/(x - pole)^k, reproducing f exactly."""

    __slots__ = ("poly_part", "pole_terms")

    def __init__(self, poly_part: Poly, pole_terms: Dict[GaussianRational, Dict[int, GaussianRational]]):
        object.__setattr__(self, "poly_part", poly_part)
        object.__setattr__(self, "pole_terms", pole_terms)

    def __setattr__(self, name, value):
        raise AttributeError("PartialFractions is immutable")

    def poles(self):
        return sorted(self.pole_terms, key=lambda p: (p.re, p.im))

    def reconstruct(self) -> "RatFunc":
        out = RatFunc(self.poly_part, P_ONE)
        for p, terms in self.pole_terms.items():
            lin = Poly([-p, ONE])
            for k, c in terms.items():
                out = out + RatFunc(Poly.const(c), lin ** k)
        return out


_pf_cache: Dict[Tuple, PartialFractions] = {}
_pole_free_cache: Dict[Tuple, bool] = {}


class RatFunc:
    __slots__ = ("num", "fden")

    def __init__(self, num: Poly, den=P_ONE):
        if isinstance(den, FDen):
            fden = den
        else:
            fden, lead = _fden_from_poly(den)
            if not lead.is_one():
                num = num * lead.inverse()
        num, fden = _cancel(num, fden)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "fden", fden)

    def __setattr__(self, name, value):
        raise AttributeError("RatFunc is immutable")

    @staticmethod
    def _make(num: Poly, fden: FDen) -> "RatFunc":
        num, fden = _cancel(num, fden)
        out = object.__new__(RatFunc)
        object.__setattr__(out, "num", num)
        object.__setattr__(out, "fden", fden)
        return out

    # -- constructors ---------------------------------------------------

    @staticmethod
    def of(value) -> "RatFunc":
        if isinstance(value, RatFunc):
            return value
        if isinstance(value, Poly):
            return RatFunc._make(value, FDen.one())
        return RatFunc._make(Poly.const(GaussianRational.of(value)), FDen.one())

    @staticmethod
    def var() -> "RatFunc":
        return RatFunc._make(Poly.x(), FDen.one())

    # -- views ------------------------------------------------------------

    @property
    def den(self) -> Poly:
        return self.fden.expand()

    def reduced(self) -> "RatFunc":
        return self

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_const(self) -> bool:
        return self.fden.is_one() and self.num.is_const()

    def const_value(self) -> GaussianRational:
        if not self.is_const():
            raise ValueError("not constant")
        return self.num.const_value()

    def growth_order(self) -> int:
        """Degree at infinity: f ~ c * z^d. Returns d (0 for f = 0)."""
        if self.is_zero():
            return 0
        return self.num.degree() - self.fden.degree()

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        other = RatFunc.of(other)
        if self.num.is_zero():
            return other
        if other.num.is_zero():
            return self
        if self.fden == other.fden:
            return RatFunc._make(self.num + other.num, self.fden)
        common = self.fden.gcd(other.fden)
        d1r = self.fden.div(common)
        d2r = other.fden.div(common)
        num = self.num * d2r.expand() + other.num * d1r.expand()
        return RatFunc._make(num, self.fden * d2r)

    __radd__ = __add__

    def __neg__(self):
        out = object.__new__(RatFunc)
        object.__setattr__(out, "num", -self.num)
        object.__setattr__(out, "fden", self.fden)
        return out

    def __sub__(self, other):
        return self + (-RatFunc.of(other))

    def __rsub__(self, other):
        return RatFunc.of(other) - self

    def __mul__(self, other):
        other = RatFunc.of(other)
        if self.num.is_zero() or other.num.is_zero():
            return RF_ZERO
        return RatFunc._make(self.num * other.num, self.fden * other.fden)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        new_fden = FDen.one()
        lead = self.num.leading()
        for fac, mult in factor_poly(self.num):
            new_fden = new_fden.mul_factor(fac, mult)
        num = self.fden.expand() * lead.inverse()
        return RatFunc._make(num, new_fden)

    def __truediv__(self, other):
        return self * RatFunc.of(other).inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = RF_ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def derivative(self) -> "RatFunc":
        if self.fden.is_one():
            return RatFunc._make(self.num.derivative(), FDen.one())
        radical = self.fden.radical()
        # S = sum_i e_i f_i' * prod_{j != i} f_j
        s = P_ZERO
        for fac, e in self.fden.items():
            others = P_ONE
            for fac2, _e2 in self.fden.items():
                if fac2 is not fac:
                    others = others * fac2
            s = s + fac.derivative() * others * e
        num = self.num.derivative() * radical - self.num * s
        return RatFunc._make(num, self.fden.bump_all(1))

    def compose_neg(self) -> "RatFunc":
        num = self.num.compose_neg()
        fden = FDen.one()
        sign = ONE
        for fac, e in self.fden.items():
            g = fac.compose_neg()
            if fac.degree() % 2 == 1:
                g = -g
                if e % 2 == 1:
                    sign = -sign
            fden = fden.mul_factor(g, e)
        return RatFunc._make(num * sign, fden)

    def eval(self, v) -> GaussianRational:
        v = GaussianRational.of(v)
        d = ONE
        for fac, e in self.fden.items():
            fv = fac.eval(v)
            if fv.is_zero():
                raise ZeroDivisionError(f"pole at {v}")
            d = d * fv ** e
        return self.num.eval(v) / d

    def eval_complex(self, v: complex) -> complex:
        d = 1 + 0j
        for fac, e in self.fden.items():
            d *= fac.eval_complex(v) ** e
        return self.num.eval_complex(v) / d

    # -- asymptotics -----------------------------------------------------------

    def expansion_at_infinity(self, k_min: int, k_max: int) -> Dict[int, GaussianRational]:
        """Coefficients of z^{-k} for k in [k_min, k_max] at z = infinity."""
        if self.is_zero():
            return {}
        den = self.fden.expand()
        dn, dd = self.num.degree(), den.degree()
        shift = dd - dn
        num_rev = list(reversed(self.num.coeffs))
        den_rev = list(reversed(den.coeffs))
        n_terms = k_max - shift + 1
        out: Dict[int, GaussianRational] = {}
        if n_terms <= 0:
            return out
        inv0 = den_rev[0].inverse()
        series = [ZERO] * n_terms
        for n in range(n_terms):
            acc = num_rev[n] if n < len(num_rev) else ZERO
            for j in range(1, min(n, len(den_rev) - 1) + 1):
                acc = acc - den_rev[j] * series[n - j]
            series[n] = acc * inv0
        for n, c in enumerate(series):
            k = n + shift
            if k_min <= k <= k_max and not c.is_zero():
                out[k] = c
        return out

    def inf_coeff(self, k: int) -> GaussianRational:
        return self.expansion_at_infinity(k, k).get(k, ZERO)

    # -- pole analysis -----------------------------------------------------------

    def partial_fractions(self) -> PartialFractions:
        key = (self.num.coeffs, hash(self.fden))
        hit = _pf_cache.get(key)
        if hit is not None:
            return hit
        den = self.fden.expand()
        poly_part, rem = self.num.divmod(den)
        pole_terms: Dict[GaussianRational, Dict[int, GaussianRational]] = {}
        if not rem.is_zero():
            for fac, mult in self.fden.items():
                if fac.degree() > 1:
                    raise UnsupportedPole(
                        f"denominator factor {fac!r} not linear over Q(i)"
                    )
            for fac, mult in self.fden.items():
                p = -fac.coeffs[0]
                other = den
                for _ in range(mult):
                    other = other // fac
                terms: Dict[int, GaussianRational] = {}
                for j in range(mult):
                    val = _dk_eval(rem, other, j, p)
                    if not val.is_zero():
                        terms[mult - j] = val
                if terms:
                    pole_terms[p] = terms
        pf = PartialFractions(poly_part, pole_terms)
        _pf_cache[key] = pf
        return pf

    def real_pole_free(self, lo=None, hi=None) -> bool:
        """True iff no denominator factor vanishes on real [lo, hi]."""
        lo_f = None if lo is None else Fraction(lo)
        hi_f = None if hi is None else Fraction(hi)
        for fac, _e in self.fden.items():
            key = (fac.coeffs, lo_f, hi_f)
            hit = _pole_free_cache.get(key)
            if hit is None:
                re, im = fac.real_imag()
                g = re if im.is_zero() else re.gcd(im)
                hit = g.degree() <= 0 or count_real_roots(g, lo_f, hi_f) == 0
                _pole_free_cache[key] = hit
            if not hit:
                return False
        return True

    # -- comparison ----------------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational, Poly)):
            other = RatFunc.of(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        if self.fden == other.fden:
            return self.num == other.num
        return self.num * other.fden.expand() == other.num * self.fden.expand()

    def __hash__(self):
        return hash((self.num.coeffs, self.fden))

    def __repr__(self):
        if self.fden.is_one():
            return f"RatFunc({self.num!r})"
        return f"RatFunc({self.num!r} / {self.fden.expand()!r})"


RF_ZERO = RatFunc(P_ZERO)
RF_ONE = RatFunc(P_ONE)


def _dk_eval(num: Poly, den: Poly, k: int, p: GaussianRational) -> GaussianRational:
    """Evaluate (1/k!) d^k/dx^k [num/den] at x = p (den(p) != 0)."""
    nshift = num.compose_linear(1, p)
    dshift = den.compose_linear(1, p)
    d0 = dshift[0]
    if d0.is_zero():
        raise ZeroDivisionError("pole hit while evaluating derivative")
    inv0 = d0.inverse()
    series = []
    for n in range(k + 1):
        acc = nshift[n]
        for j in range(1, n + 1):
            acc = acc - dshift[j] * series[n - j]
        series.append(acc * inv0)
    return series[k]


# -- Sturm machinery (real-root counting over Q) ------------------------------


def _sturm_chain(p: Poly) -> List[Poly]:
    """Sturm chain with integer primitive pseudo-remainders.

    Remainders are rescaled by positive rationals only, which preserves sign
    variations while avoiding the coefficient swell of exact Euclid.
    """
    p = p.squarefree_part()
    a = _int_real_coeffs(p)
    b = [c * k for k, c in enumerate(a)][1:]
    chain = [a, b]
    while chain[-1]:
        r = _neg_prem_signed(chain[-2], chain[-1])
        if not r:
            break
        chain.append(r)
    chain = [c for c in chain if c]
    return [Poly([Fraction(x) for x in cs]) for cs in chain]


def _int_real_coeffs(p: Poly):
    from math import gcd as igcd

    lcm = 1
    for c in p.coeffs:
        d = int(c.re.denominator)
        lcm = lcm * d // igcd(lcm, d)
    return [int(c.re.numerator) * (lcm // int(c.re.denominator)) for c in p.coeffs]


def _neg_prem_signed(a, b):
    """-(a mod b) up to a positive factor, on integer coefficient lists."""
    from math import gcd as igcd

    da, db = len(a) - 1, len(b) - 1
    if da < db:
        return [-x for x in a]
    lb = b[-1]
    r = list(a)
    steps = 0
    for k in range(da - db, -1, -1):
        c = r[k + db]
        r = [lb * x for x in r]
        steps += 1
        if c:
            for j, bc in enumerate(b):
                r[k + j] -= c * bc
    r = r[:db]
    while r and r[-1] == 0:
        r.pop()
    if not r:
        return []
    sign = -1 if (lb > 0 or steps % 2 == 0) else 1
    r = [sign * x for x in r]
    g = 0
    for x in r:
        g = igcd(g, abs(x))
    if g > 1:
        r = [x // g for x in r]
    return r


def _sign_at(p: Poly, v: Optional[Fraction], at_plus_inf: bool = False, at_minus_inf: bool = False) -> int:
    if at_plus_inf:
        c = p.leading()
        return _sgn(c.re)
    if at_minus_inf:
        c = p.leading()
        s = _sgn(c.re)
        return s if p.degree() % 2 == 0 else -s
    val = p.eval(GaussianRational(v))
    return _sgn(val.re)


def _sgn(q) -> int:
    return (q > 0) - (q < 0)


def _variations(signs: Sequence[int]) -> int:
    signs = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a * b < 0)


def count_real_roots(p: Poly, lo=None, hi=None) -> int:
    """Number of distinct real roots of p in [lo, hi] (bounds may be None).

    Endpoint roots are counted.  Complex-coefficient polynomials are reduced
    to the real gcd of their real and imaginary parts first.
    """
    re, im = p.real_imag()
    if not im.is_zero():
        p = re.gcd(im)
        if p.degree() <= 0:
            return 0
    else:
        p = re
    if p.degree() <= 0:
        return 0
    chain = _sturm_chain(p)
    if lo is not None:
        lo = Fraction(lo)
        if p.eval(GaussianRational(lo)).is_zero():
            lo = lo - _root_gap(p)
    if hi is not None:
        hi = Fraction(hi)
    va = _variations([_sign_at(q, lo, at_minus_inf=lo is None) for q in chain])
    vb = _variations([_sign_at(q, hi, at_plus_inf=hi is None) for q in chain])
    return va - vb


def _root_gap(p: Poly) -> Fraction:
    """A positive rational below the distance between distinct real roots."""
    lead = abs(Fraction(p.leading().re))
    h = max([abs(Fraction(c.re)) + abs(Fraction(c.im)) for c in p.coeffs] + [Fraction(1)])
    n = max(p.degree(), 1)
    return Fraction(1, 2) * (lead / (1 + h)) ** n / Fraction(n * n)


def isolate_real_root(p: Poly, lo=None, hi=None, depth: int = 80):
    """Some rational point within 2^-depth of a real root in [lo, hi], or None."""
    if count_real_roots(p, lo, hi) == 0:
        return None
    re, im = p.real_imag()
    p = re if im.is_zero() else re.gcd(im)
    a = Fraction(lo) if lo is not None else None
    b = Fraction(hi) if hi is not None else None
    bound = _cauchy_bound(p)
    if a is None:
        a = -bound
    if b is None:
        b = bound
    if p.eval(GaussianRational(a)).is_zero():
        return a
    if p.eval(GaussianRational(b)).is_zero():
        return b
    for _ in range(depth):
        mid = (a + b) / 2
        if p.eval(GaussianRational(mid)).is_zero():
            return mid
        if count_real_roots(p, a, mid) > 0:
            b = mid
        else:
            a = mid
        if b - a < Fraction(1, 2 ** depth):
            break
    return (a + b) / 2


def _cauchy_bound(p: Poly) -> Fraction:
    re, im = p.real_imag()
    q = re if im.is_zero() else re.gcd(im)
    lead = abs(Fraction(q.leading().re))
    if not lead:
        return Fraction(1)
    return 1 + max(abs(Fraction(c.re)) for c in q.coeffs) / lead


# -- matrices ------------------------------------------------------------------


class RatMat:
    """Square matrix of rational functions (the spec's RationalFunction type)."""

    __slots__ = ("entries", "dim")

    def __init__(self, entries: Sequence[Sequence]):
        rows = tuple(tuple(RatFunc.of(e) for e in row) for row in entries)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix must be square")
        object.__setattr__(self, "entries", rows)
        object.__setattr__(self, "dim", n)

    def __setattr__(self, name, value):
        raise AttributeError("RatMat is immutable")

    # -- constructors ---------------------------------------------------------

    @staticmethod
    def identity(n: int) -> "RatMat":
        return RatMat(
            [[RF_ONE if i == j else RF_ZERO for j in range(n)] for i in range(n)]
        )

    @staticmethod
    def zero(n: int) -> "RatMat":
        return RatMat([[RF_ZERO] * n for _ in range(n)])

    @staticmethod
    def scalar(n: int, f) -> "RatMat":
        f = RatFunc.of(f)
        return RatMat([[f if i == j else RF_ZERO for j in range(n)] for i in range(n)])

    # -- arithmetic --------------------------------------------------------------

    def __add__(self, other: "RatMat") -> "RatMat":
        return RatMat(
            [
                [a + b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.entries, other.entries)
            ]
        )

    def __neg__(self) -> "RatMat":
        return RatMat([[-a for a in row] for row in self.entries])

    def __sub__(self, other: "RatMat") -> "RatMat":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, RatMat):
            n = self.dim
            return RatMat(
                [
                    [
                        sum(
                            (self.entries[i][k] * other.entries[k][j] for k in range(n)),
                            RF_ZERO,
                        )
                        for j in range(n)
                    ]
                    for i in range(n)
                ]
            )
        f = RatFunc.of(other)
        return RatMat([[a * f for a in row] for row in self.entries])

    def __rmul__(self, other):
        f = RatFunc.of(other)
        return RatMat([[f * a for a in row] for row in self.entries])

    def scale(self, f) -> "RatMat":
        return self * f

    def derivative(self) -> "RatMat":
        return RatMat([[a.derivative() for a in row] for row in self.entries])

    def compose_neg(self) -> "RatMat":
        return RatMat([[a.compose_neg() for a in row] for row in self.entries])

    def trace(self) -> RatFunc:
        return sum((self.entries[i][i] for i in range(self.dim)), RF_ZERO)

    def det(self) -> RatFunc:
        n = self.dim
        if n == 1:
            return self.entries[0][0]
        if n == 2:
            a, b = self.entries[0]
            c, d = self.entries[1]
            return a * d - b * c
        out = RF_ZERO
        sign = 1
        for j in range(n):
            minor = RatMat(
                [
                    [self.entries[i][k] for k in range(n) if k != j]
                    for i in range(1, n)
                ]
            )
            term = self.entries[0][j] * minor.det()
            out = out + (term if sign > 0 else -term)
            sign = -sign
        return out

    def inverse(self) -> "RatMat":
        n = self.dim
        d = self.det()
        if d.is_zero():
            raise NotInvertible("matrix of rational functions is singular")
        dinv = d.inverse()
        if n == 1:
            return RatMat([[dinv]])
        cof = [[RF_ZERO] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                minor = RatMat(
                    [
                        [self.entries[r][c] for c in range(n) if c != j]
                        for r in range(n)
                        if r != i
                    ]
                )
                s = minor.det() * dinv
                cof[j][i] = s if (i + j) % 2 == 0 else -s
        return RatMat(cof)

    # -- asymptotics / evaluation ----------------------------------------------------

    def growth_order(self) -> int:
        orders = [
            e.growth_order() for row in self.entries for e in row if not e.is_zero()
        ]
        return max(orders) if orders else 0

    def inf_coeff(self, k: int) -> "GaussianMatrix":
        return GaussianMatrix(
            [[e.inf_coeff(k) for e in row] for row in self.entries]
        )

    def expansion_at_infinity(self, k_min: int, k_max: int) -> Dict[int, "GaussianMatrix"]:
        per_entry = [
            [e.expansion_at_infinity(k_min, k_max) for e in row]
            for row in self.entries
        ]
        ks = set()
        for row in per_entry:
            for d in row:
                ks.update(d)
        return {
            k: GaussianMatrix(
                [[d.get(k, ZERO) for d in row] for row in per_entry]
            )
            for k in sorted(ks)
        }

    def eval(self, v) -> "GaussianMatrix":
        return GaussianMatrix([[e.eval(v) for e in row] for row in self.entries])

    def eval_complex(self, v: complex):
        return [[e.eval_complex(v) for e in row] for row in self.entries]

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.entries for e in row)

    def is_const(self) -> bool:
        return all(e.is_zero() or e.is_const() for row in self.entries for e in row)

    def reduced(self) -> "RatMat":
        return self

    def real_pole_free(self, lo=None, hi=None) -> bool:
        return all(e.real_pole_free(lo, hi) for row in self.entries for e in row)

    def __eq__(self, other):
        if not isinstance(other, RatMat):
            return NotImplemented
        if self.dim != other.dim:
            return False
        return all(
            a == b
            for ra, rb in zip(self.entries, other.entries)
            for a, b in zip(ra, rb)
        )

    def __hash__(self):
        return hash(tuple(tuple(row) for row in self.entries))

    def __repr__(self):
        return f"RatMat({self.entries!r})"


class GaussianMatrix:
    """Constant matrix over Q(i); the value type of jets and evaluations."""

    __slots__ = ("entries", "dim")

    def __init__(self, entries: Sequence[Sequence]):
        rows = tuple(tuple(GaussianRational.of(e) for e in row) for row in entries)
        object.__setattr__(self, "entries", rows)
        object.__setattr__(self, "dim", len(rows))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianMatrix is immutable")

    @staticmethod
    def identity(n: int) -> "GaussianMatrix":
        return GaussianMatrix(
            [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
        )

    def __add__(self, other):
        return GaussianMatrix(
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.entries, other.entries)]
        )

    def __neg__(self):
        return GaussianMatrix([[-a for a in row] for row in self.entries])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, GaussianMatrix):
            n = self.dim
            return GaussianMatrix(
                [
                    [
                        sum(
                            (self.entries[i][k] * other.entries[k][j] for k in range(n)),
                            ZERO,
                        )
                        for j in range(n)
                    ]
                    for i in range(n)
                ]
            )
        c = GaussianRational.of(other)
        return GaussianMatrix([[a * c for a in row] for row in self.entries])

    __rmul__ = __mul__

    def trace(self) -> GaussianRational:
        return sum((self.entries[i][i] for i in range(self.dim)), ZERO)

    def is_zero(self) -> bool:
        return all(a.is_zero() for row in self.entries for a in row)

    def det(self) -> GaussianRational:
        n = self.dim
        if n == 1:
            return self.entries[0][0]
        if n == 2:
            return (
                self.entries[0][0] * self.entries[1][1]
                - self.entries[0][1] * self.entries[1][0]
            )
        out = ZERO
        sign = 1
        for j in range(n):
            minor = GaussianMatrix(
                [[self.entries[i][k] for k in range(n) if k != j] for i in range(1, n)]
            )
            term = self.entries[0][j] * minor.det()
            out = out + (term if sign > 0 else -term)
            sign = -sign
        return out

    def __eq__(self, other):
        if not isinstance(other, GaussianMatrix):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return f"GaussianMatrix({self.entries!r})"
