"""The exact scalar ring: Gaussian-rational combinations of pi powers and logs.

Every trace functional in the package takes values here.  A scalar is a finite
sum of monomials  c * pi^p * log(g1)^e1 * ... * log(gm)^em  with c in Q(i),
p in Z (negative allowed) and the log arguments drawn from a fixed canonical
multiplicative basis: the rational prime 2, rational primes q = 3 mod 4, and
canonical Gaussian primes a+bi with a > |b| (norm 1 mod 4, both conjugates).

Logarithms of arbitrary nonzero Gaussian rationals are admitted through
`log_scalar`, which factors the argument over that basis and accounts for the
unit and branch parts exactly as multiples of i*pi; the principal branch is
used throughout, so identities such as log(6) - log(2) = log(3) and
log(-1) = i*pi hold on the nose.

Equality of values is equality of normal forms.  The implied transcendence
assumption (no hidden relations among pi and the basis logs) is documented in
the README.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from typing import Dict, Iterable, Tuple

import mpmath
import sympy

from .gaussian import GaussianRational, ONE, ZERO, gr

# A log atom is a Gaussian integer (a, b) from the canonical basis; b == 0
# means the rational prime a.
Atom = Tuple[int, int]
# Monomial: (pi exponent, sorted tuple of (atom, exponent)).
Monomial = Tuple[int, Tuple[Tuple[Atom, int], ...]]

_UNIT_MONOMIAL: Monomial = (0, ())

_atom_lock = threading.Lock()
_split_cache: Dict[int, Tuple[int, int]] = {}


def _split_prime(p: int) -> Tuple[int, int]:
    """Return the canonical Gaussian prime (a, b), a > |b| > 0, with a^2+b^2 = p.

    Only called for rational primes p = 1 mod 4.  Results are cached in an
    append-only registry; the computation is deterministic so concurrent
    refinement is confluent.
    """
    with _atom_lock:
        if p in _split_cache:
            return _split_cache[p]
    # x with x^2 = -1 mod p, then gcd(p, x + i) in Z[i] via Euclid.
    x = int(sympy.sqrt_mod(p - 1, p))
    a, b = p, 0
    c, d = x, 1
    while c * c + d * d:
        # remainder of (a+bi) / (c+di) with rounded quotient
        n = c * c + d * d
        qr = (a * c + b * d + n // 2) // n if n else 0
        qi = (b * c - a * d + n // 2) // n if n else 0
        ra = a - (qr * c - qi * d)
        ri = b - (qr * d + qi * c)
        a, b, c, d = c, d, ra, ri
    a, b = abs(a), abs(b)
    if a < b:
        a, b = b, a
    # canonical associate has positive real part exceeding |imag|
    out = (a, b)
    with _atom_lock:
        _split_cache[p] = out
    return out


def _atom_arg(atom: Atom):
    a, b = atom
    return mpmath.atan2(b, a)


def _atom_str(atom: Atom) -> str:
    a, b = atom
    if b == 0:
        return f"log({a})"
    if b > 0:
        return f"log({a}+{b}i)" if b != 1 else f"log({a}+i)"
    return f"log({a}{b}i)" if b != -1 else f"log({a}-i)"


class ExactScalar:
    """Element of Q(i)[pi, pi^-1][log-atoms], kept in normal form."""

    __slots__ = ("terms",)

    def __init__(self, terms: Dict[Monomial, GaussianRational] = None):
        clean = {}
        if terms:
            for mono, c in terms.items():
                c = GaussianRational.of(c)
                if not c.is_zero():
                    clean[mono] = c
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("ExactScalar is immutable")

    # -- constructors ---------------------------------------------------

    @staticmethod
    def of(value) -> "ExactScalar":
        if isinstance(value, ExactScalar):
            return value
        c = GaussianRational.of(value)
        return ExactScalar({_UNIT_MONOMIAL: c})

    @staticmethod
    def zero() -> "ExactScalar":
        return ExactScalar()

    @staticmethod
    def pi(power: int = 1, coeff=1) -> "ExactScalar":
        return ExactScalar({(power, ()): GaussianRational.of(coeff)})

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        other = ExactScalar.of(other)
        out = dict(self.terms)
        for mono, c in other.terms.items():
            out[mono] = out.get(mono, ZERO) + c
        return ExactScalar(out)

    __radd__ = __add__

    def __neg__(self):
        return ExactScalar({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-ExactScalar.of(other))

    def __rsub__(self, other):
        return ExactScalar.of(other) - self

    def __mul__(self, other):
        other = ExactScalar.of(other)
        out: Dict[Monomial, GaussianRational] = {}
        for (p1, l1), c1 in self.terms.items():
            for (p2, l2), c2 in other.terms.items():
                logs: Dict[Atom, int] = {}
                for a, e in l1:
                    logs[a] = logs.get(a, 0) + e
                for a, e in l2:
                    logs[a] = logs.get(a, 0) + e
                mono = (p1 + p2, tuple(sorted((a, e) for a, e in logs.items() if e)))
                c = c1 * c2
                out[mono] = out.get(mono, ZERO) + c
        return ExactScalar(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = GaussianRational.of(other)
        return self * c.inverse()

    # -- queries -------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_rational(self) -> bool:
        if not self.terms:
            return True
        return set(self.terms) == {_UNIT_MONOMIAL} and self.terms[
            _UNIT_MONOMIAL
        ].is_rational()

    def rational_value(self) -> Fraction:
        if self.is_zero():
            return Fraction(0)
        if not self.is_rational():
            raise ValueError(f"scalar {self} is not rational")
        return self.terms[_UNIT_MONOMIAL].re

    def constant_part(self) -> GaussianRational:
        return self.terms.get(_UNIT_MONOMIAL, ZERO)

    def coeff(self, pi_power: int = 0, logs: Tuple[Tuple[Atom, int], ...] = ()):
        return self.terms.get((pi_power, logs), ZERO)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            other = ExactScalar.of(other)
        if not isinstance(other, ExactScalar):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return not self.is_zero()

    # -- numerics ---------------------------------------------------------

    def to_mpc(self):
        """High-precision numeric value (for oracle cross-checks only)."""
        total = mpmath.mpc(0)
        for (p, logs), c in self.terms.items():
            v = mpmath.mpc(str(c.re.numerator)) / mpmath.mpf(
                str(c.re.denominator)
            ) + mpmath.mpc(0, 1) * mpmath.mpf(str(c.im.numerator)) / mpmath.mpf(
                str(c.im.denominator)
            )
            v *= mpmath.pi ** p
            for atom, e in logs:
                a, b = atom
                v *= mpmath.log(mpmath.mpc(a, b)) ** e
            total += v
        return total

    def to_complex(self) -> complex:
        return complex(self.to_mpc())

    # -- display ----------------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for mono in sorted(self.terms, key=lambda m: (m[0], m[1])):
            c = self.terms[mono]
            p, logs = mono
            factors = []
            if p == 1:
                factors.append("pi")
            elif p != 0:
                factors.append(f"pi^{p}")
            for atom, e in logs:
                s = _atom_str(atom)
                factors.append(s if e == 1 else f"{s}^{e}")
            cs = _coeff_str(c)
            if factors:
                parts.append(cs + "*" + "*".join(factors))
            else:
                parts.append(cs)
        return " + ".join(parts)

    __repr__ = __str__


def _coeff_str(c: GaussianRational) -> str:
    if not c.im:
        return str(c.re)
    if not c.re:
        return f"({c.im})i"
    return f"({c.re} + ({c.im})i)"


ES_ZERO = ExactScalar.zero()
ES_ONE = ExactScalar.of(1)
PI = ExactScalar.pi()
I_PI = ExactScalar.pi(1, gr(0, 1))


def scalar_arith(a: ExactScalar, b: ExactScalar, kind: str) -> ExactScalar:
    """Binary/unary arithmetic dispatch used by the CLI."""
    if kind == "add":
        return a + b
    if kind == "mul":
        return a * b
    if kind == "neg":
        return -a
    raise ValueError(f"unknown kind {kind!r}")


# -- canonical logarithms ----------------------------------------------------


def _gaussian_divmod(a: int, b: int, c: int, d: int):
    """(a+bi) = q*(c+di) + r with rounded quotient; returns (qr, qi, rr, ri)."""
    n = c * c + d * d
    qr_num = a * c + b * d
    qi_num = b * c - a * d
    qr = (qr_num + (n // 2 if qr_num >= 0 else -(n // 2))) // n
    qi = (qi_num + (n // 2 if qi_num >= 0 else -(n // 2))) // n
    rr = a - (qr * c - qi * d)
    ri = b - (qr * d + qi * c)
    return qr, qi, rr, ri


def _divide_exact(a: int, b: int, c: int, d: int):
    """Exact Gaussian-integer division (a+bi)/(c+di); None if not divisible."""
    n = c * c + d * d
    rr = a * c + b * d
    ri = b * c - a * d
    if rr % n or ri % n:
        return None
    return rr // n, ri // n


def log_scalar(w: GaussianRational) -> ExactScalar:
    """Principal logarithm of a nonzero Gaussian rational, in normal form.

    The modulus part lands on the basis logs, the argument part on i*pi with
    an exact rational coefficient (quarter integers from units and the
    ramified prime, plus the branch correction integer).
    """
    if w.is_zero():
        raise ValueError("log of zero")
    # Clear denominators: w = (a+bi)/d with a, b integers, d positive integer.
    den = w.re.denominator * w.im.denominator // _gcd(
        w.re.denominator, w.im.denominator
    )
    a = int(w.re * den)
    b = int(w.im * den)
    d = den

    atoms: Dict[Atom, Fraction] = {}
    ipi_quarters = Fraction(0)  # coefficient of i*pi

    norm = a * a + b * b
    for p, e_norm in sympy.factorint(norm).items():
        p = int(p)
        if p == 2:
            # ramified: divide out (1+i) e_norm times; each contributes
            # (1/2) log 2 + (i pi)/4
            for _ in range(e_norm):
                q = _divide_exact(a, b, 1, 1)
                a, b = q
            atoms[(2, 0)] = atoms.get((2, 0), Fraction(0)) + Fraction(e_norm, 2)
            ipi_quarters += Fraction(e_norm, 4)
        elif p % 4 == 3:
            e = e_norm // 2
            for _ in range(e):
                q = _divide_exact(a, b, p, 0)
                a, b = q
            atoms[(p, 0)] = atoms.get((p, 0), Fraction(0)) + e
        else:
            ga, gb = _split_prime(p)
            for atom in ((ga, gb), (ga, -gb)):
                while True:
                    q = _divide_exact(a, b, atom[0], atom[1])
                    if q is None:
                        break
                    a, b = q
                    atoms[atom] = atoms.get(atom, Fraction(0)) + 1
    # remaining a+bi is a unit
    unit_quarters = {(1, 0): Fraction(0), (0, 1): Fraction(1, 2), (-1, 0): Fraction(2, 2), (0, -1): Fraction(-1, 2)}[(a, b)]
    ipi_quarters += unit_quarters

    # Denominator: positive integer, factors into basis logs with arg 0.
    if d > 1:
        for p, e in sympy.factorint(d).items():
            p = int(p)
            if p == 2:
                atoms[(2, 0)] = atoms.get((2, 0), Fraction(0)) - e
            elif p % 4 == 3:
                atoms[(p, 0)] = atoms.get((p, 0), Fraction(0)) - e
            else:
                ga, gb = _split_prime(p)
                atoms[(ga, gb)] = atoms.get((ga, gb), Fraction(0)) - e
                atoms[(ga, -gb)] = atoms.get((ga, -gb), Fraction(0)) - e

    # Branch correction: Arg(w) differs from the accumulated atom/unit args
    # by an exact multiple of 2*pi.
    with mpmath.workdps(60):
        acc = ipi_quarters.numerator * mpmath.pi / ipi_quarters.denominator
        for atom, e in atoms.items():
            if e:
                acc += e * _atom_arg(atom)
        target = mpmath.atan2(
            mpmath.mpf(w.im.numerator) / w.im.denominator,
            mpmath.mpf(w.re.numerator) / w.re.denominator,
        )
        m = mpmath.nint((target - acc) / (2 * mpmath.pi))
        residual = abs((target - acc) - 2 * mpmath.pi * m)
        if residual > mpmath.mpf("1e-40"):
            raise AssertionError("branch correction is not an integer")
    ipi_quarters += 2 * Fraction(int(m))

    terms: Dict[Monomial, GaussianRational] = {}
    for atom, e in atoms.items():
        if e:
            terms[(0, ((atom, 1),))] = GaussianRational(e)
    if ipi_quarters:
        terms[(1, ())] = GaussianRational(0, ipi_quarters)
    return ExactScalar(terms)


def log_rational(q) -> ExactScalar:
    """log of a positive rational (convenience wrapper)."""
    return log_scalar(GaussianRational.of(q))


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a
