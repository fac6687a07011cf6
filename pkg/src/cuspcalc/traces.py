"""Trace and regularized-trace functionals on cusp elements.

Five functionals:

  rTr   double residue read: the (x^1, |zeta|^{-1}) corner jets, traced and
        summed over ends and fiber branches (it vanishes on both model
        ideals and is a trace on the double quotient);
  dTr   the residue trace on interior symbols with decaying coefficients:
        the z-integral of the branch-summed degree -1 coefficient, strict;
  hdTr  its regularized extension: the constant term of the same integral
        over the growing window, with the divergent parts retained;
  iTr   the boundary trace: bTr of the x^1 end families;
  hiTr  its extension by regularization; for a regularizer with an offset
        logarithm the change-of-regularizer correction is applied.

All values are ExactScalars.  The end orientations enter through the sign
with which each end contributes; these signs are fixed here (the minus end
carries the opposite orientation for the residue reads, none for the
boundary trace) and validated by the commutation-identity suite.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Tuple

from .calibration import CalibrationConstants, default_calibration
from .cusp import (
    CuspElement,
    DEFAULT_Q,
    ENDS,
    MINUS,
    PLUS,
    RegularizerQ,
    add,
    commutator,
    neg,
    scale,
    star,
    sub,
    unit,
)
from .errors import SharedPrincipalRequired, TruncationLoss
from .gaussian import GaussianRational, ZERO, gr
from .ratfunc import RatFunc, RF_ZERO
from .reginteg import RegularizedIntegral, reg_integral_line
from .scalars import ES_ZERO, ExactScalar
from .suspended import SuspendedFamily, bTr

# End orientation signs for the residue reads.  The boundary trace iTr/hiTr
# sums the two ends without signs (it is an integral over the boundary); the
# double-residue read weights the minus end by -1 (its fiber orientation is
# reversed), which is what makes the commutation identities hold exactly.
_R_END_SIGN = {PLUS: 1, MINUS: -1}
_I_END_SIGN = {PLUS: 1, MINUS: 1}

_HALF_INV_PI = ExactScalar.pi(-1, GaussianRational(Fraction(1, 2)))


def rtr_raw(a: CuspElement) -> ExactScalar:
    """(2 pi)^{-1} sum of the oriented (x^1, |zeta|^{-1}) corner jets."""
    if a.smoothing or a.flat:
        return ES_ZERO
    total = ZERO
    for e in ENDS:
        fam = a.ends[e].get(1)
        if fam is None:
            continue
        for sigma in (1, -1):
            total = total + fam.branch_coeff(-1, sigma).trace() * _R_END_SIGN[e]
    return ExactScalar.of(total) * _HALF_INV_PI


def rTr(a: CuspElement, cal: Optional[CalibrationConstants] = None) -> ExactScalar:
    cal = cal or default_calibration()
    return cal.kappa_r * rtr_raw(a)


def _interior_density(a: CuspElement) -> RatFunc:
    """Branch-summed trace of the degree -1 interior coefficient."""
    pair = a.sigma.get(-1)
    if pair is None:
        return RF_ZERO
    return pair.plus.trace() + pair.minus.trace()


def hdtr_integral(a: CuspElement, shifts=(0, 0)) -> RegularizedIntegral:
    if a.smoothing:
        return RegularizedIntegral()
    return reg_integral_line(_interior_density(a), shifts)


def hdtr_raw(a: CuspElement, shifts=(0, 0)) -> ExactScalar:
    return hdtr_integral(a, shifts).constant * _HALF_INV_PI


def hdTr(
    a: CuspElement,
    Q: RegularizerQ = DEFAULT_Q,
    cal: Optional[CalibrationConstants] = None,
    shifts=(0, 0),
) -> ExactScalar:
    """Regularized interior residue trace; independent of the regularizer."""
    cal = cal or default_calibration()
    return cal.kappa_d * hdtr_raw(a, shifts)


def hdTr_report(
    a: CuspElement,
    Q: RegularizerQ = DEFAULT_Q,
    cal: Optional[CalibrationConstants] = None,
    shifts=(0, 0),
) -> Tuple[ExactScalar, bool]:
    """Value plus the strict flag (no divergent parts discarded)."""
    cal = cal or default_calibration()
    ri = hdtr_integral(a, shifts)
    return cal.kappa_d * ri.constant * _HALF_INV_PI, ri.is_strict()


def dTr(a: CuspElement, cal: Optional[CalibrationConstants] = None) -> ExactScalar:
    """Strict residue trace; raises when regularization would be needed."""
    value, strict = hdTr_report(a, cal=cal)
    if not strict:
        raise TruncationLoss("dTr applied to an element needing regularization")
    return value


def itr_raw(a: CuspElement) -> ExactScalar:
    if a.flat:
        return ES_ZERO
    total = ES_ZERO
    for e in ENDS:
        fam = a.ends[e].get(1)
        if fam is None:
            continue
        v = bTr(fam)
        if _I_END_SIGN[e] < 0:
            v = -v
        total = total + v
    return total


def iTr(a: CuspElement, cal: Optional[CalibrationConstants] = None) -> ExactScalar:
    cal = cal or default_calibration()
    return cal.kappa_i * itr_raw(a)


def hiTr(
    a: CuspElement,
    Q: RegularizerQ = DEFAULT_Q,
    cal: Optional[CalibrationConstants] = None,
) -> ExactScalar:
    """Boundary regularized trace.

    For a translation-invariant regularizer this reads the x^1 end families;
    an offset regularizer contributes the change-of-regularizer correction
    -rTr(a * log_ratio(Q, Q0)).
    """
    cal = cal or default_calibration()
    base = cal.kappa_i * itr_raw(a)
    if Q.offset_log is not None:
        corr = rTr(star(a, Q.offset_log), cal)
        base = base - corr
    return base


# -- change of regularizer --------------------------------------------------------


def star_log(one_plus_s: CuspElement, s: CuspElement) -> CuspElement:
    """log(1 + s) by the star power series, truncation exact.

    Requires s of negative interior order and positive boundary order so that
    the series terminates inside the element's window.
    """
    top = s.top_degree()
    if top is not None and top >= 0:
        raise SharedPrincipalRequired(
            "offset must have negative interior order (shared principal symbol)"
        )
    for e in ENDS:
        if s.ends[e] and min(s.ends[e]) < 1:
            raise SharedPrincipalRequired(
                "offset must vanish at the boundary (positive x order)"
            )
    jmin, K = s.trunc
    depth_int = (-jmin) // max(1, -top) if top is not None else 0
    depth_ends = K  # boundary orders grow by at least one per power
    depth = max(depth_int, depth_ends, 1)
    out = None
    power = s
    sign = 1
    for m in range(1, depth + 2):
        if power.is_zero():
            break
        term = scale(power, GaussianRational(Fraction(sign, m)))
        out = term if out is None else add(out, term)
        power = star(power, s)
        sign = -sign
    if out is None:
        out = CuspElement(s.dim, s.trunc)
    return out


def log_ratio(Qp: RegularizerQ, Q: RegularizerQ) -> CuspElement:
    """log(Q'/Q) for regularizers sharing the same principal base.

    Realized as the difference of the stored offset logarithms, which makes
    the cocycle identity log(Q''/Q') + log(Q'/Q) = log(Q''/Q) exact.
    """
    if Qp.rho != Q.rho:
        raise SharedPrincipalRequired(
            "regularizers do not share a principal symbol"
        )
    if Qp.offset_log is None and Q.offset_log is None:
        raise SharedPrincipalRequired(
            "regularizers carry no offset data; provide a dimension via "
            "log_ratio_zero"
        )
    a = Qp.offset_log
    b = Q.offset_log
    if a is None:
        return neg(b)
    if b is None:
        return a
    return sub(a, b)


def make_offset_regularizer(
    base: RegularizerQ, s: CuspElement, name: str = "offset"
) -> RegularizerQ:
    """Regularizer (1+s) Q routed through its star logarithm."""
    one = unit(s.dim, s.trunc)
    return base.with_offset(star_log(add(one, s), s), name)
