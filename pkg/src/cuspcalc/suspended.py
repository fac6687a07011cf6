"""The suspended algebra over a boundary point: matrix families in xi.

A SuspendedFamily is a triple of matrix rational functions on the pieces
(-inf,-1], [-1,1], [1,inf), continuous at the seams.  Rational functions have
a single Laurent expansion at infinity, so the two unbounded pieces are what
let a family carry different asymptotics on the two branches xi -> +inf and
xi -> -inf; the middle piece is free interpolation data.

Multiplication is pointwise in xi.  The derivation [t, .] acts as
s_t * i * d/dxi; the regularized trace integrates the matrix trace over the
growing window and keeps the constant term, normalized by 1/(2 pi).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Optional, Tuple

from .calibration import CalibrationConstants, default_calibration
from .errors import NotInvertible
from .gaussian import GaussianRational, ONE, ZERO, gr
from .poly import Poly
from .ratfunc import GaussianMatrix, RatFunc, RatMat, RF_ONE, RF_ZERO, isolate_real_root
from .reginteg import RegularizedIntegral, reg_integral_pieces
from .scalars import ES_ZERO, ExactScalar

_HALF_INV_PI = None


def _half_inv_pi() -> ExactScalar:
    global _HALF_INV_PI
    if _HALF_INV_PI is None:
        _HALF_INV_PI = ExactScalar.pi(-1, GaussianRational(Fraction(1, 2)))
    return _HALF_INV_PI


_PIECES = ((None, Fraction(-1)), (Fraction(-1), Fraction(1)), (Fraction(1), None))


class SuspendedFamily:
    __slots__ = ("minus", "mid", "plus", "dim")

    def __init__(self, minus: RatMat, mid: RatMat, plus: RatMat, check: bool = True):
        if not (minus.dim == mid.dim == plus.dim):
            raise ValueError("piece dimensions differ")
        object.__setattr__(self, "minus", minus)
        object.__setattr__(self, "mid", mid)
        object.__setattr__(self, "plus", plus)
        object.__setattr__(self, "dim", minus.dim)
        if check:
            for piece, (lo, hi) in zip((minus, mid, plus), _PIECES):
                if not piece.real_pole_free(lo, hi):
                    raise ValueError(f"piece has a real pole on [{lo}, {hi}]")

    def __setattr__(self, name, value):
        raise AttributeError("SuspendedFamily is immutable")

    # -- constructors ---------------------------------------------------

    @staticmethod
    def uniform(m: RatMat) -> "SuspendedFamily":
        """Same rational matrix on all three pieces."""
        return SuspendedFamily(m, m, m)

    @staticmethod
    def from_scalar(f: RatFunc, dim: int = 1) -> "SuspendedFamily":
        return SuspendedFamily.uniform(RatMat.scalar(dim, f))

    @staticmethod
    def constant(c, dim: int = 1) -> "SuspendedFamily":
        return SuspendedFamily.uniform(RatMat.scalar(dim, RatFunc.of(c)))

    @staticmethod
    def identity(dim: int = 1) -> "SuspendedFamily":
        return SuspendedFamily.uniform(RatMat.identity(dim))

    @staticmethod
    def zero(dim: int = 1) -> "SuspendedFamily":
        return SuspendedFamily.uniform(RatMat.zero(dim))

    @staticmethod
    def var(dim: int = 1) -> "SuspendedFamily":
        """The family xi (times the identity)."""
        return SuspendedFamily.from_scalar(RatFunc.var(), dim)

    def pieces(self) -> Tuple[RatMat, RatMat, RatMat]:
        return (self.minus, self.mid, self.plus)

    # -- structure checks -------------------------------------------------

    def is_continuous(self) -> bool:
        try:
            return self.minus.eval(-1) == self.mid.eval(-1) and self.mid.eval(
                1
            ) == self.plus.eval(1)
        except ZeroDivisionError:
            return False

    def is_zero(self) -> bool:
        return self.minus.is_zero() and self.mid.is_zero() and self.plus.is_zero()

    # -- algebra ----------------------------------------------------------

    def _zip(self, other: "SuspendedFamily", op) -> "SuspendedFamily":
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        return SuspendedFamily(
            op(self.minus, other.minus),
            op(self.mid, other.mid),
            op(self.plus, other.plus),
            check=False,
        )

    def __add__(self, other: "SuspendedFamily") -> "SuspendedFamily":
        return self._zip(other, lambda a, b: a + b)

    def __neg__(self) -> "SuspendedFamily":
        return SuspendedFamily(-self.minus, -self.mid, -self.plus, check=False)

    def __sub__(self, other: "SuspendedFamily") -> "SuspendedFamily":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, SuspendedFamily):
            return self._zip(other, lambda a, b: a * b)
        return SuspendedFamily(
            self.minus * other, self.mid * other, self.plus * other, check=False
        )

    def __rmul__(self, other):
        return SuspendedFamily(
            other * self.minus, other * self.mid, other * self.plus, check=False
        )

    def derivative(self) -> "SuspendedFamily":
        """Piecewise d/dxi. Result may lose continuity at the seams."""
        return SuspendedFamily(
            self.minus.derivative(),
            self.mid.derivative(),
            self.plus.derivative(),
            check=False,
        )

    def reflect(self) -> "SuspendedFamily":
        """F(-xi); swaps the unbounded pieces."""
        return SuspendedFamily(
            self.plus.compose_neg(),
            self.mid.compose_neg(),
            self.minus.compose_neg(),
            check=False,
        )

    # -- expansions -----------------------------------------------------------

    def branch_coeff(self, j: int, sigma: int) -> GaussianMatrix:
        """Coefficient of |xi|^j on branch sign sigma of the end expansion."""
        if sigma > 0:
            return self.plus.inf_coeff(-j)
        m = self.minus.inf_coeff(-j)
        return m if j % 2 == 0 else -m

    def branch_expansion(
        self, j_min: int, j_max: int
    ) -> Dict[Tuple[int, int], GaussianMatrix]:
        out = {}
        plus = self.plus.expansion_at_infinity(-j_max, -j_min)
        minus = self.minus.expansion_at_infinity(-j_max, -j_min)
        for k, mat in plus.items():
            if not mat.is_zero():
                out[(-k, 1)] = mat
        for k, mat in minus.items():
            m = mat if k % 2 == 0 else -mat
            if not m.is_zero():
                out[(-k, -1)] = m
        return out

    def order_bound(self) -> int:
        return max(
            self.minus.growth_order(), self.mid.growth_order(), self.plus.growth_order()
        )

    def eval(self, v) -> GaussianMatrix:
        v = Fraction(v)
        if v <= -1:
            return self.minus.eval(v)
        if v >= 1:
            return self.plus.eval(v)
        return self.mid.eval(v)

    def __eq__(self, other):
        if not isinstance(other, SuspendedFamily):
            return NotImplemented
        return (
            self.minus == other.minus
            and self.mid == other.mid
            and self.plus == other.plus
        )

    def __hash__(self):
        return hash((self.minus, self.mid, self.plus))

    def __repr__(self):
        return f"SuspendedFamily(minus={self.minus!r}, mid={self.mid!r}, plus={self.plus!r})"


# -- operations -------------------------------------------------------------


def sus_mul(a: SuspendedFamily, b: SuspendedFamily) -> SuspendedFamily:
    """Pointwise product; composition is pointwise by translation invariance."""
    return a * b


def sus_inverse(a: SuspendedFamily) -> SuspendedFamily:
    """Pointwise inverse; fails with a witness where the determinant vanishes."""
    for name, piece, (lo, hi) in zip(
        ("minus", "mid", "plus"), a.pieces(), _PIECES
    ):
        d = piece.det().reduced()
        if d.is_zero():
            raise NotInvertible(
                f"determinant vanishes identically on piece {name}", witness=name
            )
        re, im = d.num.real_imag()
        g = re if im.is_zero() else re.gcd(im)
        if g.degree() > 0:
            root = isolate_real_root(g, lo, hi)
            if root is not None:
                raise NotInvertible(
                    f"determinant vanishes near xi = {float(root):.6g} on piece {name}",
                    witness=root,
                )
    return SuspendedFamily(
        a.minus.inverse(), a.mid.inverse(), a.plus.inverse(), check=False
    )


def t_commutator(
    b: SuspendedFamily, cal: Optional[CalibrationConstants] = None
) -> SuspendedFamily:
    """Commutator with the suspension variable: s_t * i * dB/dxi piecewise."""
    cal = cal or default_calibration()
    c = gr(0, cal.s_t)
    return b.derivative() * RatFunc.of(c)


def bTr_integral(b: SuspendedFamily) -> RegularizedIntegral:
    return reg_integral_pieces(
        b.minus.trace(), b.mid.trace(), b.plus.trace()
    )


def bTr(b: SuspendedFamily) -> ExactScalar:
    """Regularized trace: (2 pi)^{-1} times the window-integral constant term."""
    return bTr_integral(b).constant * _half_inv_pi()


def tTr(b: SuspendedFamily, cal: Optional[CalibrationConstants] = None) -> ExactScalar:
    """bTr of [t, b]; for continuous b this telescopes to the end limits."""
    return bTr(t_commutator(b, cal))


def eta_suspended(
    a: SuspendedFamily, cal: Optional[CalibrationConstants] = None
) -> ExactScalar:
    """Eta invariant of an invertible family, sign fixed by the calibration."""
    cal = cal or default_calibration()
    inv = sus_inverse(a)
    da = t_commutator(a, cal)
    val = bTr(inv * da + da * inv)
    val = -val
    if cal.s_eta < 0:
        val = -val
    return val
