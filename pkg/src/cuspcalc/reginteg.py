"""Exact regularized integrals of rational functions over growing windows.

The window is [-T + d_minus, T + d_plus] with symbolic T; the integral of a
rational function with no real poles on the window expands exactly as

    sum_j c_j T^j  +  c_log log T  +  c_0  +  o(1)

and all displayed parts are computed in closed form over the scalar ring.
Pole terms contribute through principal-branch logarithms (continuous along
the horizontal integration path, so the i*pi bookkeeping is exact) and
endpoint evaluations; o(1) tails are discarded.

The same machinery integrates the three-piece families used for suspended
symbols: pieces (-inf,-1], [-1,1], [1,inf), each owning its own rational
function, with the finite piece integrated exactly.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Dict, Optional, Tuple

from .errors import UnsupportedPole
from .gaussian import GaussianRational, ONE, ZERO, gr
from .poly import Poly
from .ratfunc import RatFunc
from .scalars import ES_ZERO, ExactScalar, log_scalar


class RegularizedIntegral:
    """Constant term, log T coefficient and T-power parts of a window integral."""

    __slots__ = ("constant", "logT_coeff", "power_part", "higher_log")

    def __init__(
        self,
        constant: ExactScalar = ES_ZERO,
        logT_coeff: ExactScalar = ES_ZERO,
        power_part: Optional[Dict[int, ExactScalar]] = None,
        higher_log: Optional[Dict[int, ExactScalar]] = None,
    ):
        object.__setattr__(self, "constant", constant)
        object.__setattr__(self, "logT_coeff", logT_coeff)
        object.__setattr__(
            self,
            "power_part",
            {k: v for k, v in (power_part or {}).items() if not v.is_zero()},
        )
        object.__setattr__(
            self,
            "higher_log",
            {k: v for k, v in (higher_log or {}).items() if not v.is_zero()},
        )

    def __setattr__(self, name, value):
        raise AttributeError("RegularizedIntegral is immutable")

    def __add__(self, other: "RegularizedIntegral") -> "RegularizedIntegral":
        power = dict(self.power_part)
        for k, v in other.power_part.items():
            power[k] = power.get(k, ES_ZERO) + v
        hi = dict(self.higher_log)
        for k, v in other.higher_log.items():
            hi[k] = hi.get(k, ES_ZERO) + v
        return RegularizedIntegral(
            self.constant + other.constant,
            self.logT_coeff + other.logT_coeff,
            power,
            hi,
        )

    def __neg__(self):
        return self.scale(GaussianRational.of(-1))

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "RegularizedIntegral":
        s = ExactScalar.of(c) if not isinstance(c, ExactScalar) else c
        return RegularizedIntegral(
            self.constant * s,
            self.logT_coeff * s,
            {k: v * s for k, v in self.power_part.items()},
            {k: v * s for k, v in self.higher_log.items()},
        )

    def is_strict(self) -> bool:
        """True when no regularization was needed (pure convergent integral)."""
        return (
            self.logT_coeff.is_zero()
            and not self.power_part
            and not self.higher_log
        )

    def __eq__(self, other):
        if not isinstance(other, RegularizedIntegral):
            return NotImplemented
        return (
            self.constant == other.constant
            and self.logT_coeff == other.logT_coeff
            and self.power_part == other.power_part
            and self.higher_log == other.higher_log
        )

    def __repr__(self):
        bits = [f"const={self.constant}"]
        if not self.logT_coeff.is_zero():
            bits.append(f"logT={self.logT_coeff}")
        for k in sorted(self.power_part):
            bits.append(f"T^{k}:{self.power_part[k]}")
        return "RegularizedIntegral(" + ", ".join(bits) + ")"


RI_ZERO = RegularizedIntegral()


def _log_endpoint(v: GaussianRational) -> ExactScalar:
    """Principal log used for finite endpoint evaluations x - p.

    For real arguments the real log of |v| is used (the integrand is real
    there and the two endpoint signs agree, so the branch never matters).
    """
    if v.is_zero():
        raise UnsupportedPole("pole on the integration window")
    if v.is_rational():
        mag = v.re if v.re > 0 else -v.re
        return log_scalar(GaussianRational(mag))
    return log_scalar(v)


def _integrate_poly_segment(p: Poly, a: Fraction, b: Fraction) -> GaussianRational:
    """Exact integral of a polynomial over [a, b]."""
    total = ZERO
    fa = GaussianRational(a)
    fb = GaussianRational(b)
    pa, pb = fa, fb
    for j, c in enumerate(p.coeffs):
        # antiderivative term c x^{j+1} / (j+1)
        total = total + c * (pb - pa) * Fraction(1, j + 1)
        pa = pa * fa
        pb = pb * fb
    return total


def _poly_tail_plus(
    p: Poly, a: Fraction, delta: Fraction
) -> Tuple[ExactScalar, Dict[int, ExactScalar]]:
    """Integral of a polynomial over [a, T + delta]: constant and T powers."""
    const = ZERO
    powers: Dict[int, GaussianRational] = {}
    for j, c in enumerate(p.coeffs):
        inv = Fraction(1, j + 1)
        # (T + delta)^{j+1} expanded; subtract a^{j+1}
        for m in range(j + 2):
            coeff = c * inv * comb(j + 1, m) * (GaussianRational(delta) ** (j + 1 - m))
            if m == 0:
                const = const + coeff
            else:
                powers[m] = powers.get(m, ZERO) + coeff
        const = const - c * inv * (GaussianRational(a) ** (j + 1))
    return (
        ExactScalar.of(const),
        {m: ExactScalar.of(v) for m, v in powers.items() if not v.is_zero()},
    )


def _poly_tail_minus(
    p: Poly, b: Fraction, delta: Fraction
) -> Tuple[ExactScalar, Dict[int, ExactScalar]]:
    """Integral of a polynomial over [-T + delta, b]."""
    const = ZERO
    powers: Dict[int, GaussianRational] = {}
    for j, c in enumerate(p.coeffs):
        inv = Fraction(1, j + 1)
        const = const + c * inv * (GaussianRational(b) ** (j + 1))
        # subtract (-T + delta)^{j+1} = sum binom (-T)^m delta^{j+1-m}
        for m in range(j + 2):
            coeff = (
                c
                * inv
                * comb(j + 1, m)
                * ((-ONE) ** m)
                * (GaussianRational(delta) ** (j + 1 - m))
            )
            if m == 0:
                const = const - coeff
            else:
                powers[m] = powers.get(m, ZERO) - coeff
    return (
        ExactScalar.of(const),
        {m: ExactScalar.of(v) for m, v in powers.items() if not v.is_zero()},
    )


def _check_piece_pole_free(f: RatFunc, lo, hi):
    if not f.real_pole_free(lo, hi):
        raise UnsupportedPole(
            f"integrand has a real pole on piece [{lo}, {hi}]"
        )


def integrate_finite(f: RatFunc, a, b) -> ExactScalar:
    """Exact integral of f over the finite interval [a, b]; exact scalar value."""
    a, b = Fraction(a), Fraction(b)
    _check_piece_pole_free(f, a, b)
    pf = f.partial_fractions()
    total = ExactScalar.of(_integrate_poly_segment(pf.poly_part, a, b))
    for p, terms in pf.pole_terms.items():
        for k, c in terms.items():
            if k == 1:
                val = _log_endpoint(GaussianRational(b) - p) - _log_endpoint(
                    GaussianRational(a) - p
                )
                total = total + val * c
            else:
                inv = Fraction(1, k - 1)
                end_b = ((GaussianRational(b) - p) ** (1 - k)) * inv
                end_a = ((GaussianRational(a) - p) ** (1 - k)) * inv
                total = total + ExactScalar.of((end_a - end_b) * c)
    return total


def integrate_plus_tail(f: RatFunc, a, delta=Fraction(0)) -> RegularizedIntegral:
    """Regularized integral of f over [a, T + delta]."""
    a, delta = Fraction(a), Fraction(delta)
    _check_piece_pole_free(f, a, None)
    pf = f.partial_fractions()
    const, powers = _poly_tail_plus(pf.poly_part, a, delta)
    logT = ES_ZERO
    for p, terms in pf.pole_terms.items():
        for k, c in terms.items():
            if k == 1:
                logT = logT + ExactScalar.of(c)
                const = const - _log_endpoint(GaussianRational(a) - p) * c
            else:
                inv = Fraction(1, k - 1)
                end_a = ((GaussianRational(a) - p) ** (1 - k)) * inv
                const = const + ExactScalar.of(end_a * c)
    return RegularizedIntegral(const, logT, powers)


def integrate_minus_tail(f: RatFunc, b, delta=Fraction(0)) -> RegularizedIntegral:
    """Regularized integral of f over [-T + delta, b]."""
    b, delta = Fraction(b), Fraction(delta)
    _check_piece_pole_free(f, None, b)
    pf = f.partial_fractions()
    const, powers = _poly_tail_minus(pf.poly_part, b, delta)
    logT = ES_ZERO
    for p, terms in pf.pole_terms.items():
        for k, c in terms.items():
            if k == 1:
                logT = logT - ExactScalar.of(c)
                val = _log_endpoint(GaussianRational(b) - p)
                if not p.is_rational():
                    # Log(-T + delta - p) -> log T - i pi sign(Im p) + o(1)
                    s = 1 if p.im > 0 else -1
                    val = val + ExactScalar.pi(1, gr(0, s))
                const = const + val * c
            else:
                inv = Fraction(1, k - 1)
                end_b = ((GaussianRational(b) - p) ** (1 - k)) * inv
                const = const - ExactScalar.of(end_b * c)
    return RegularizedIntegral(const, logT, powers)


def reg_integral_line(f: RatFunc, shifts=(0, 0)) -> RegularizedIntegral:
    """Regularized integral of a single rational function over the whole window."""
    d_minus, d_plus = Fraction(shifts[0]), Fraction(shifts[1])
    return integrate_minus_tail(f, 0, d_minus) + integrate_plus_tail(f, 0, d_plus)


def reg_integral_pieces(
    f_minus: RatFunc, f_mid: RatFunc, f_plus: RatFunc, shifts=(0, 0)
) -> RegularizedIntegral:
    """Regularized integral of a three-piece function over the window.

    Pieces live on [-T + d_minus, -1], [-1, 1] and [1, T + d_plus].
    """
    d_minus, d_plus = Fraction(shifts[0]), Fraction(shifts[1])
    mid = RegularizedIntegral(integrate_finite(f_mid, -1, 1))
    return (
        integrate_minus_tail(f_minus, -1, d_minus)
        + mid
        + integrate_plus_tail(f_plus, 1, d_plus)
    )


def reg_integral(f, shifts=(0, 0)) -> RegularizedIntegral:
    """Dispatch on a single rational function or a (minus, mid, plus) triple."""
    if isinstance(f, RatFunc):
        return reg_integral_line(f, shifts)
    f_minus, f_mid, f_plus = f
    return reg_integral_pieces(f_minus, f_mid, f_plus, shifts)
