"""Two-layer cusp symbols on the compactified line and their star product.

An element carries an interior layer (a finite jet of homogeneous terms
c_j^{sigma}(z) |zeta|^j with rational matrix coefficients, one per fiber
branch sigma = +/-) and a boundary layer at each end z -> +/-inf (a truncated
Laurent series in the boundary function x_e = +/-1/z whose coefficients are
suspended families in xi).  The two layers describe one object in different
regimes; on the overlap their double expansions agree, which is the
compatibility invariant.

The product is the left-quantization composition series
a * b = sum_k (1/k!) (d/dzeta)^k a . D_z^k b with D_z = -i d/dz, realised on
the interior layer directly and on the boundary layer through
D_z = s_e i x^2 d/dx (s_e the end sign).  Every element carries the window
(jmin, K) on which its data is exact together with flags recording whether
anything nonzero was ever discarded outside the window; binary operations
propagate both so that equality assertions are always made on provably
exact ranges.

Elements may be marked `smoothing` (interior declared to vanish to infinite
order; only boundary data is meaningful) or `flat` (boundary expansions
declared rapidly decaying; only the interior jet is meaningful).  These model
the two classical ideals and are where one-ended data is allowed to live.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Dict, List, Optional, Tuple

from .calibration import CalibrationConstants, default_calibration
from .errors import (
    CompatibilityError,
    NotFullyElliptic,
    NotInvertible,
)
from .gaussian import GaussianRational, ONE, ZERO, gr
from .poly import Poly
from .ratfunc import (
    GaussianMatrix,
    RatFunc,
    RatMat,
    RF_ONE,
    RF_ZERO,
    factor_poly,
    isolate_real_root,
)
from .suspended import SuspendedFamily, sus_inverse

_BIG = 10 ** 9

PLUS, MINUS = 1, -1
ENDS = (PLUS, MINUS)


def _falling(j: int, k: int) -> int:
    out = 1
    for i in range(k):
        out *= j - i
    return out


def _rising(k: int, l: int) -> int:
    out = 1
    for i in range(l):
        out *= k + i
    return out


class BranchPair:
    """Interior coefficient of |zeta|^j: one rational matrix per branch."""

    __slots__ = ("plus", "minus")

    def __init__(self, plus: RatMat, minus: RatMat):
        if plus.dim != minus.dim:
            raise ValueError("branch dimensions differ")
        object.__setattr__(self, "plus", plus)
        object.__setattr__(self, "minus", minus)

    def __setattr__(self, name, value):
        raise AttributeError("BranchPair is immutable")

    @staticmethod
    def both(m: RatMat) -> "BranchPair":
        return BranchPair(m, m)

    def get(self, sigma: int) -> RatMat:
        return self.plus if sigma > 0 else self.minus

    def map(self, f) -> "BranchPair":
        return BranchPair(f(self.plus, 1), f(self.minus, -1))

    def __add__(self, other: "BranchPair") -> "BranchPair":
        return BranchPair(self.plus + other.plus, self.minus + other.minus)

    def __neg__(self) -> "BranchPair":
        return BranchPair(-self.plus, -self.minus)

    def is_zero(self) -> bool:
        return self.plus.is_zero() and self.minus.is_zero()

    def __eq__(self, other):
        if not isinstance(other, BranchPair):
            return NotImplemented
        return self.plus == other.plus and self.minus == other.minus

    def __repr__(self):
        return f"BranchPair(+:{self.plus!r}, -:{self.minus!r})"


class CuspElement:
    __slots__ = (
        "dim",
        "jmin",
        "K",
        "sigma",
        "ends",
        "int_exact",
        "ends_exact",
        "smoothing",
        "flat",
    )

    def __init__(
        self,
        dim: int,
        trunc: Tuple[int, int],
        sigma: Dict[int, BranchPair] = None,
        ends: Dict[int, Dict[int, SuspendedFamily]] = None,
        int_exact: bool = True,
        ends_exact: bool = True,
        smoothing: bool = False,
        flat: bool = False,
        validate: bool = False,
    ):
        jmin, K = trunc
        sig: Dict[int, BranchPair] = {}
        if sigma and not smoothing:
            for j, pair in sigma.items():
                if pair.is_zero():
                    continue
                if j < jmin:
                    int_exact = False
                    continue
                sig[j] = pair
        end_data: Dict[int, Dict[int, SuspendedFamily]] = {PLUS: {}, MINUS: {}}
        if ends and not flat:
            for e in ENDS:
                for k, fam in (ends.get(e) or {}).items():
                    if fam.is_zero():
                        continue
                    if k > K:
                        ends_exact = False
                        continue
                    end_data[e][k] = fam
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "jmin", jmin)
        object.__setattr__(self, "K", K)
        object.__setattr__(self, "sigma", sig)
        object.__setattr__(self, "ends", end_data)
        object.__setattr__(self, "int_exact", int_exact)
        object.__setattr__(self, "ends_exact", ends_exact)
        object.__setattr__(self, "smoothing", smoothing)
        object.__setattr__(self, "flat", flat)
        if validate:
            self._validate()

    def __setattr__(self, name, value):
        raise AttributeError("CuspElement is immutable")

    # -- validation --------------------------------------------------------

    def _validate(self):
        for j, pair in self.sigma.items():
            for mat in (pair.plus, pair.minus):
                if mat.dim != self.dim:
                    raise ValueError("interior coefficient dimension mismatch")
                if not mat.real_pole_free():
                    raise ValueError(
                        f"interior coefficient at degree {j} has a real pole"
                    )
        for e in ENDS:
            for k, fam in self.ends[e].items():
                if fam.dim != self.dim:
                    raise ValueError("end family dimension mismatch")

    # -- bookkeeping ----------------------------------------------------------

    @property
    def trunc(self) -> Tuple[int, int]:
        return (self.jmin, self.K)

    @property
    def trunc_loss(self) -> bool:
        return not (self.int_exact and self.ends_exact)

    def top_degree(self) -> Optional[int]:
        return max(self.sigma) if self.sigma else None

    def min_end_order(self, e: int) -> Optional[int]:
        return min(self.ends[e]) if self.ends[e] else None

    def weight(self) -> int:
        """Maximal x^{-p} growth across both layers."""
        p = 0
        for e in ENDS:
            if self.ends[e]:
                p = max(p, -min(self.ends[e]))
        for pair in self.sigma.values():
            p = max(p, pair.plus.growth_order(), pair.minus.growth_order())
        return p

    def is_zero(self) -> bool:
        return not self.sigma and not self.ends[PLUS] and not self.ends[MINUS]

    def _eff_jmin(self) -> int:
        return -_BIG if (self.int_exact or self.smoothing) else self.jmin

    def _eff_K(self) -> int:
        return _BIG if (self.ends_exact or self.flat) else self.K

    # -- compatibility invariant ----------------------------------------------

    def compatibility_defects(self) -> List[Tuple[int, int, int]]:
        """(j, k, end) triples where interior jets and end expansions differ.

        Only meaningful for symbolic/laurent elements; smoothing or flat
        layers are exempt by declaration.
        """
        if self.smoothing or self.flat:
            return []
        defects = []
        degrees = set(self.sigma)
        for e in ENDS:
            orders = set(self.ends[e])
            k_lo = min(orders) if orders else 0
            for pair in self.sigma.values():
                g = max(pair.plus.growth_order(), pair.minus.growth_order())
                k_lo = min(k_lo, -g)
            fam_exps = {
                k: self.ends[e][k].branch_expansion(self.jmin, _top(self) )
                for k in orders
            }
            for j in sorted(degrees | _fam_degrees(fam_exps)):
                if j < self.jmin:
                    continue
                pair = self.sigma.get(j)
                for k in range(k_lo, self.K + 1):
                    for sigma_sign in (1, -1):
                        if pair is None:
                            jet = None
                        else:
                            mat = pair.get(sigma_sign)
                            c = mat.inf_coeff(k)
                            if e == MINUS and k % 2 == 1:
                                c = -c
                            jet = c
                        fam = self.ends[e].get(k)
                        if fam is None:
                            fam_c = None
                        else:
                            fam_c = fam_exps[k].get((j, sigma_sign))
                        lhs = jet if jet is not None else _zero_mat(self.dim)
                        rhs = fam_c if fam_c is not None else _zero_mat(self.dim)
                        if lhs != rhs:
                            defects.append((j, k, e))
        return sorted(set(defects))

    def check_compatibility(self):
        defects = self.compatibility_defects()
        if defects:
            j, k, e = defects[0]
            raise CompatibilityError(
                f"interior jet and end expansion disagree at degree {j}, "
                f"order {k}, end {'+' if e > 0 else '-'}",
                j=j,
                k=k,
                end=e,
            )

    # -- comparison ----------------------------------------------------------------

    def eq_mod_trunc(self, other: "CuspElement") -> bool:
        """Equality on the intersection of the guaranteed-exact windows."""
        if self.dim != other.dim:
            return False
        jlo = max(self._eff_jmin(), other._eff_jmin())
        khi = min(self._eff_K(), other._eff_K())
        for j in set(self.sigma) | set(other.sigma):
            if j < jlo:
                continue
            a = self.sigma.get(j)
            b = other.sigma.get(j)
            if a is None:
                a = BranchPair.both(_zero_rmat(self.dim))
            if b is None:
                b = BranchPair.both(_zero_rmat(self.dim))
            if a != b:
                return False
        for e in ENDS:
            for k in set(self.ends[e]) | set(other.ends[e]):
                if k > khi:
                    continue
                fa = self.ends[e].get(k)
                fb = other.ends[e].get(k)
                if fa is None:
                    fa = SuspendedFamily.zero(self.dim)
                if fb is None:
                    fb = SuspendedFamily.zero(self.dim)
                if fa != fb:
                    return False
        return True

    def __repr__(self):
        return (
            f"CuspElement(dim={self.dim}, trunc=({self.jmin},{self.K}), "
            f"degrees={sorted(self.sigma)}, "
            f"ends+={sorted(self.ends[PLUS])}, ends-={sorted(self.ends[MINUS])}, "
            f"exact=({self.int_exact},{self.ends_exact})"
            + (", smoothing" if self.smoothing else "")
            + (", flat" if self.flat else "")
            + ")"
        )


def _top(a: CuspElement) -> int:
    t = a.top_degree()
    return t if t is not None else a.jmin


def _fam_degrees(fam_exps) -> set:
    out = set()
    for d in fam_exps.values():
        out.update(j for (j, s) in d)
    return out


_zero_mats: Dict[int, GaussianMatrix] = {}
_zero_rmats: Dict[int, RatMat] = {}


def _zero_mat(n: int) -> GaussianMatrix:
    if n not in _zero_mats:
        _zero_mats[n] = GaussianMatrix([[ZERO] * n for _ in range(n)])
    return _zero_mats[n]


def _zero_rmat(n: int) -> RatMat:
    if n not in _zero_rmats:
        _zero_rmats[n] = RatMat.zero(n)
    return _zero_rmats[n]


# -- canonical elements --------------------------------------------------------


def unit(dim: int = 1, trunc=(-6, 6)) -> CuspElement:
    return CuspElement(
        dim,
        trunc,
        sigma={0: BranchPair.both(RatMat.identity(dim))},
        ends={PLUS: {0: SuspendedFamily.identity(dim)}, MINUS: {0: SuspendedFamily.identity(dim)}},
    )


def zeta(dim: int = 1, trunc=(-6, 6)) -> CuspElement:
    """The symbol of -i d/dz: homogeneous of degree one, branch signs +/-."""
    idm = RatMat.identity(dim)
    return CuspElement(
        dim,
        trunc,
        sigma={1: BranchPair(idm, -idm)},
        ends={PLUS: {0: SuspendedFamily.var(dim)}, MINUS: {0: SuspendedFamily.var(dim)}},
    )


def zmul(dim: int = 1, trunc=(-6, 6)) -> CuspElement:
    """Multiplication by z; behaves as x^{-1} at the + end and -x^{-1} at -."""
    z = RatMat.scalar(dim, RatFunc.var())
    plus_fam = SuspendedFamily.identity(dim)
    minus_fam = SuspendedFamily.constant(-1, dim) if dim == 1 else SuspendedFamily.uniform(
        RatMat.scalar(dim, RatFunc.of(-1))
    )
    return CuspElement(
        dim,
        trunc,
        sigma={0: BranchPair.both(z)},
        ends={PLUS: {-1: plus_fam}, MINUS: {-1: minus_fam}},
    )


def from_zeta_function(f: RatFunc, dim: int = 1, trunc=(-6, 6)) -> CuspElement:
    """Element given by a translation-invariant symbol f(zeta).

    The interior jet is the branch expansion of f at infinity truncated at
    jmin; the boundary layer is the exact family f(xi) at order zero on both
    ends, so no information is lost (the jet truncation is flagged).
    """
    jmin, K = trunc
    fam = SuspendedFamily.from_scalar(f, dim)
    g = f.growth_order()
    sigma: Dict[int, BranchPair] = {}
    lost = False
    exp = f.expansion_at_infinity(-g, -jmin + 1)
    for k, c in exp.items():
        j = -k
        mp = RatMat.scalar(dim, RatFunc.of(c))
        mm = RatMat.scalar(dim, RatFunc.of(c if j % 2 == 0 else -c))
        if j < jmin:
            if not c.is_zero():
                lost = True
            continue
        sigma[j] = BranchPair(mp, mm)
    # a rational symbol has an infinite expansion unless it is a polynomial
    if not f.reduced().den.is_one():
        lost = True
    return CuspElement(
        dim,
        trunc,
        sigma=sigma,
        ends={PLUS: {0: fam}, MINUS: {0: fam}},
        int_exact=not lost,
    )


def from_z_function(f: RatFunc, dim: int = 1, trunc=(-6, 6)) -> CuspElement:
    """Multiplication element by a rational function of z (no real poles)."""
    jmin, K = trunc
    if not f.real_pole_free():
        raise ValueError("multiplier has a real pole")
    g = f.growth_order()
    sigma = {0: BranchPair.both(RatMat.scalar(dim, f))}
    ends: Dict[int, Dict[int, SuspendedFamily]] = {PLUS: {}, MINUS: {}}
    lost = not f.reduced().den.is_one()
    exp = f.expansion_at_infinity(-g, K)
    for k, c in exp.items():
        cp = c
        cm = c if k % 2 == 0 else -c
        if not cp.is_zero():
            ends[PLUS][k] = SuspendedFamily.constant(cp, dim)
        if not cm.is_zero():
            ends[MINUS][k] = SuspendedFamily.constant(cm, dim)
    return CuspElement(dim, trunc, sigma=sigma, ends=ends, ends_exact=not lost)


def smoothing_element(
    dim: int,
    trunc: Tuple[int, int],
    ends: Dict[int, Dict[int, SuspendedFamily]],
) -> CuspElement:
    """Boundary-only element of the order -infinity (smoothing) model."""
    return CuspElement(dim, trunc, sigma=None, ends=ends, smoothing=True)


def flat_element(
    dim: int,
    trunc: Tuple[int, int],
    sigma: Dict[int, BranchPair],
) -> CuspElement:
    """Interior-only element with rapidly decaying boundary behavior."""
    return CuspElement(dim, trunc, sigma=sigma, ends=None, flat=True)


# -- linear structure --------------------------------------------------------


def add(a: CuspElement, b: CuspElement) -> CuspElement:
    if a.dim != b.dim:
        raise ValueError("dimension mismatch")
    ja, jb = a._eff_jmin(), b._eff_jmin()
    jmin = max(ja, jb)
    if jmin == -_BIG:
        jmin = min(a.jmin, b.jmin)
    Ka, Kb = a._eff_K(), b._eff_K()
    K = min(Ka, Kb)
    if K == _BIG:
        K = max(a.K, b.K)
    sigma: Dict[int, BranchPair] = dict(a.sigma)
    for j, pair in b.sigma.items():
        sigma[j] = sigma[j] + pair if j in sigma else pair
    ends: Dict[int, Dict[int, SuspendedFamily]] = {PLUS: {}, MINUS: {}}
    for e in ENDS:
        ends[e] = dict(a.ends[e])
        for k, fam in b.ends[e].items():
            ends[e][k] = ends[e][k] + fam if k in ends[e] else fam
    return CuspElement(
        a.dim,
        (jmin, K),
        sigma=sigma,
        ends=ends,
        int_exact=a.int_exact and b.int_exact,
        ends_exact=a.ends_exact and b.ends_exact,
        smoothing=a.smoothing and b.smoothing,
        flat=a.flat and b.flat,
    )


def neg(a: CuspElement) -> CuspElement:
    return CuspElement(
        a.dim,
        a.trunc,
        sigma={j: -p for j, p in a.sigma.items()},
        ends={e: {k: -f for k, f in a.ends[e].items()} for e in ENDS},
        int_exact=a.int_exact,
        ends_exact=a.ends_exact,
        smoothing=a.smoothing,
        flat=a.flat,
    )


def sub(a: CuspElement, b: CuspElement) -> CuspElement:
    return add(a, neg(b))


def scale(a: CuspElement, c) -> CuspElement:
    c = GaussianRational.of(c)
    f = RatFunc.of(c)
    return CuspElement(
        a.dim,
        a.trunc,
        sigma={j: BranchPair(p.plus * f, p.minus * f) for j, p in a.sigma.items()},
        ends={e: {k: fam * f for k, fam in a.ends[e].items()} for e in ENDS},
        int_exact=a.int_exact,
        ends_exact=a.ends_exact,
        smoothing=a.smoothing,
        flat=a.flat,
    )


# -- the star product -----------------------------------------------------------


_MINUS_I = gr(0, -1)


def _dz_powers(mat: RatMat, upto: int) -> List[RatMat]:
    """[mat, D_z mat, ..., D_z^upto mat] with D_z = -i d/dz."""
    out = [mat]
    cur = mat
    for _ in range(upto):
        cur = cur.derivative() * RatFunc.of(_MINUS_I)
        out.append(cur)
    return out


def _dxi_powers(fam: SuspendedFamily, upto: int) -> List[SuspendedFamily]:
    out = [fam]
    cur = fam
    for _ in range(upto):
        cur = cur.derivative()
        out.append(cur)
    return out


def star(
    a: CuspElement,
    b: CuspElement,
    trunc: Optional[Tuple[int, int]] = None,
) -> CuspElement:
    """Composition a * b, exact on the derived window.

    The result window is the intersection of the operand windows adjusted by
    the standard pollution bounds: inexact low interior tails of one factor
    contaminate output degrees up to (its floor) + (top degree of the other),
    and inexact high boundary tails contaminate orders down from (its cap) +
    (minimal boundary order of the other).
    """
    if a.dim != b.dim:
        raise ValueError("dimension mismatch")
    dim = a.dim

    ma = a.top_degree()
    mb = b.top_degree()
    floors = []
    caps = []
    if not (a.int_exact or a.smoothing) and mb is not None:
        floors.append(a.jmin + mb)
    if not (b.int_exact or b.smoothing) and ma is not None:
        floors.append(b.jmin + ma)
    floor = max(floors) if floors else max(a.jmin, b.jmin)
    ka = [a.min_end_order(e) for e in ENDS]
    kb = [b.min_end_order(e) for e in ENDS]
    kmin_a = min([k for k in ka if k is not None], default=None)
    kmin_b = min([k for k in kb if k is not None], default=None)
    if not (a.ends_exact or a.flat) and kmin_b is not None:
        caps.append(a.K + kmin_b)
    if not (b.ends_exact or b.flat) and kmin_a is not None:
        caps.append(b.K + kmin_a)
    cap = min(caps) if caps else min(a.K, b.K)
    if trunc is not None:
        floor = max(floor, trunc[0])
        cap = min(cap, trunc[1])

    smoothing = a.smoothing or b.smoothing
    flat = a.flat or b.flat

    int_loss = False
    sigma: Dict[int, BranchPair] = {}
    if not smoothing and a.sigma and b.sigma:
        for j2, pair_b in b.sigma.items():
            dzb_p = None
            dzb_m = None
            for j1, pair_a in a.sigma.items():
                kmax = j1 + j2 - floor
                if kmax < 0:
                    # every term of this pair lies below the floor
                    if not (pair_a.is_zero() or pair_b.is_zero()):
                        int_loss = True
                    continue
                if dzb_p is None:
                    depth = max(
                        (j1p + j2 - floor) for j1p in a.sigma
                    )
                    dzb_p = _dz_powers(pair_b.plus, max(depth, 0))
                    dzb_m = _dz_powers(pair_b.minus, max(depth, 0))
                terminated = False
                for k in range(kmax + 1):
                    fall = _falling(j1, k)
                    if fall == 0:
                        terminated = True
                        break
                    coeff = Fraction(fall, factorial(k))
                    j = j1 + j2 - k
                    sgn = 1 if k % 2 == 0 else -1
                    tp = pair_a.plus * (dzb_p[k] * RatFunc.of(coeff))
                    tm = pair_a.minus * (dzb_m[k] * RatFunc.of(coeff * sgn))
                    term = BranchPair(tp, tm)
                    if j in sigma:
                        sigma[j] = sigma[j] + term
                    else:
                        sigma[j] = term
                if not terminated:
                    # series continues below the floor with nonzero entries
                    # unless the z-derivative chain has died out
                    k = kmax + 1
                    if _falling(j1, k) != 0 and not (
                        dzb_p[min(k, len(dzb_p) - 1)].is_zero()
                        and dzb_m[min(k, len(dzb_m) - 1)].is_zero()
                    ):
                        int_loss = True

    ends_loss = False
    ends: Dict[int, Dict[int, SuspendedFamily]] = {PLUS: {}, MINUS: {}}
    if not flat:
        for e in ENDS:
            s_i = gr(0, 1) if e == PLUS else gr(0, -1)
            layer_a = a.ends[e]
            layer_b = b.ends[e]
            if not layer_a or not layer_b:
                continue
            for k1, f1 in layer_a.items():
                depth = cap - k1 - min(layer_b) + 1
                if depth < 0:
                    ends_loss = True
                    continue
                d1 = _dxi_powers(f1, depth)
                for k2, f2 in layer_b.items():
                    lmax = cap - k1 - k2
                    if lmax < 0:
                        ends_loss = True
                        continue
                    died = False
                    for l in range(lmax + 1):
                        rise = _rising(k2, l)
                        if rise == 0:
                            if l > 0:
                                died = True
                                break
                            continue
                        coeff = (s_i ** l) * Fraction(rise, factorial(l))
                        fam = (d1[l] * f2) * RatFunc.of(coeff)
                        order = k1 + k2 + l
                        if order in ends[e]:
                            ends[e][order] = ends[e][order] + fam
                        else:
                            ends[e][order] = fam
                    if not died:
                        nxt = lmax + 1
                        if _rising(k2, nxt) != 0 and not d1[nxt].is_zero():
                            ends_loss = True

    return CuspElement(
        dim,
        (floor, cap),
        sigma=sigma,
        ends=ends,
        int_exact=a.int_exact and b.int_exact and not int_loss,
        ends_exact=a.ends_exact and b.ends_exact and not ends_loss,
        smoothing=smoothing,
        flat=flat,
    )


def commutator(a: CuspElement, b: CuspElement) -> CuspElement:
    return sub(star(a, b), star(b, a))


# -- D_z and d/dzeta on whole elements --------------------------------------------


def dzeta(a: CuspElement) -> CuspElement:
    """d/dzeta: (j, sigma, c) -> (j-1, sigma, j sigma c); d/dxi on families."""
    sigma: Dict[int, BranchPair] = {}
    lost = False
    for j, pair in a.sigma.items():
        if j - 1 < a.jmin:
            if j != 0:
                lost = True
            continue
        if j == 0:
            continue
        sigma[j - 1] = BranchPair(
            pair.plus * RatFunc.of(j), pair.minus * RatFunc.of(-j)
        )
    ends = {
        e: {k: fam.derivative() for k, fam in a.ends[e].items()}
        for e in ENDS
    }
    return CuspElement(
        a.dim,
        a.trunc,
        sigma=sigma,
        ends=ends,
        int_exact=a.int_exact and not lost,
        ends_exact=a.ends_exact,
        smoothing=a.smoothing,
        flat=a.flat,
    )


def dz(a: CuspElement) -> CuspElement:
    """D_z = -i d/dz on the interior, s_e i x^2 d/dx on the boundary layer."""
    sigma = {
        j: BranchPair(
            pair.plus.derivative() * RatFunc.of(_MINUS_I),
            pair.minus.derivative() * RatFunc.of(_MINUS_I),
        )
        for j, pair in a.sigma.items()
    }
    sigma = {j: p for j, p in sigma.items() if not p.is_zero()}
    ends: Dict[int, Dict[int, SuspendedFamily]] = {PLUS: {}, MINUS: {}}
    lost = False
    for e in ENDS:
        s_i = gr(0, 1) if e == PLUS else gr(0, -1)
        for k, fam in a.ends[e].items():
            if k == 0:
                continue
            if k + 1 > a.K:
                lost = True
                continue
            ends[e][k + 1] = fam * RatFunc.of(s_i * k)
    return CuspElement(
        a.dim,
        a.trunc,
        sigma=sigma,
        ends=ends,
        int_exact=a.int_exact,
        ends_exact=a.ends_exact and not lost,
        smoothing=a.smoothing,
        flat=a.flat,
    )


# -- exterior derivations ------------------------------------------------------------

# Interior realisation of the boundary log-derivative: d(log x)/dz is odd,
# rational, pole free and matches -1/z at both ends to leading order.
_DLOGX_DZ = RatFunc(Poly([0, -1]), Poly([1, 0, 1]))  # -z/(1+z^2)


def _logx_dz_powers(upto: int) -> List[RatFunc]:
    """[D_z^1 log x, ..., D_z^upto log x] as rational functions of z."""
    out = []
    cur = _DLOGX_DZ * RatFunc.of(_MINUS_I)  # D_z log x = -i d/dz log x
    out.append(cur)
    for _ in range(upto - 1):
        cur = cur.derivative() * RatFunc.of(_MINUS_I)
        out.append(cur)
    return out


class RegularizerQ:
    """Log-derivative data of a positive elliptic order-one regularizer.

    Only d(log q)/dzeta is stored (rational; default zeta/(1+zeta^2), i.e.
    q = (1+zeta^2)^{1/2}), so square roots never appear.  A non
    translation-invariant regularizer is modelled as (1+s) * Q0 against a
    shared translation-invariant base: `offset_log` holds log(1+s) computed
    by the star-power series.
    """

    __slots__ = ("rho", "offset_log", "name")

    def __init__(self, rho: RatFunc = None, offset_log: Optional[CuspElement] = None, name: str = "default"):
        if rho is None:
            rho = RatFunc(Poly([0, 1]), Poly([1, 0, 1]))  # zeta/(1+zeta^2)
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "offset_log", offset_log)
        object.__setattr__(self, "name", name)

    def __setattr__(self, name, value):
        raise AttributeError("RegularizerQ is immutable")

    def translation_invariant(self) -> bool:
        return self.offset_log is None

    def with_offset(self, offset_log: CuspElement, name: str = "offset") -> "RegularizerQ":
        return RegularizerQ(self.rho, offset_log, name)


DEFAULT_Q = RegularizerQ()


def log_derivation_x(a: CuspElement) -> CuspElement:
    """Commutation with log x: -sum_{k>=1} (1/k!) (d/dzeta)^k a . D_z^k log x."""
    if a.is_zero():
        return a
    # interior depth: one past the window floor so losses are detected
    depth_int = 0
    if a.sigma:
        depth_int = max(j - a.jmin for j in a.sigma) + 1
    depth_ends = max(a.K - min(a.ends[e], default=a.K) for e in ENDS)
    depth = max(depth_int, depth_ends, 1)
    lx = _logx_dz_powers(depth)

    sigma: Dict[int, BranchPair] = {}
    int_loss = False
    if not a.smoothing:
        for j, pair in a.sigma.items():
            for k in range(1, j - a.jmin + 2):
                fall = _falling(j, k)
                if fall == 0:
                    break
                jt = j - k
                if jt < a.jmin:
                    if not pair.is_zero():
                        int_loss = True
                    break
                coeff = -Fraction(fall, factorial(k))
                sgn = 1 if k % 2 == 0 else -1
                tp = pair.plus * (lx[k - 1] * coeff)
                tm = pair.minus * (lx[k - 1] * (coeff * sgn))
                term = BranchPair(tp, tm)
                sigma[jt] = sigma[jt] + term if jt in sigma else term

    ends: Dict[int, Dict[int, SuspendedFamily]] = {PLUS: {}, MINUS: {}}
    ends_loss = False
    if not a.flat:
        for e in ENDS:
            layer = a.ends[e]
            if not layer:
                continue
            kmin_layer = min(layer)
            for k1, fam in layer.items():
                dmax = a.K - k1 - 1
                if dmax < 0:
                    ends_loss = True
                    continue
                dfam = _dxi_powers(fam, min(dmax + 1, depth))
                for k in range(1, depth + 1):
                    if k > len(dfam) - 1:
                        break
                    # x-expansion of D_z^k log x at this end
                    exp = lx[k - 1].expansion_at_infinity(k, a.K - k1)
                    for m, c in exp.items():
                        if e == MINUS and m % 2 == 1:
                            c = -c
                        coeff = -c * Fraction(1, factorial(k))
                        order = k1 + m
                        if order > a.K:
                            ends_loss = True
                            continue
                        term = dfam[k] * RatFunc.of(coeff)
                        if order in ends[e]:
                            ends[e][order] = ends[e][order] + term
                        else:
                            ends[e][order] = term
                # the tail of the x-expansion beyond K is always nonzero
                if not fam.derivative().is_zero():
                    ends_loss = True

    return CuspElement(
        a.dim,
        a.trunc,
        sigma=sigma,
        ends=ends,
        int_exact=a.int_exact and not int_loss,
        ends_exact=a.ends_exact and not ends_loss,
        smoothing=a.smoothing,
        flat=a.flat,
    )


def log_derivation_q(a: CuspElement, Q: RegularizerQ = DEFAULT_Q) -> CuspElement:
    """Commutation with log Q for a translation-invariant base regularizer.

    d(a) = sum_{k>=1} (1/k!) (d/dzeta)^{k-1} rho . D_z^k a, plus the inner
    commutator with the stored offset logarithm when Q carries one.
    """
    if a.is_zero():
        return a
    rho = Q.rho
    # depth in k: interior terms need D_z^k a; the rho jet lowers degrees.
    depth = max(_top(a) - a.jmin + 2, a.K - min([min(a.ends[e], default=a.K) for e in ENDS]) + 2, 2)

    # successive D_z^k a as whole elements
    out = None
    cur = a
    rho_d: List[RatFunc] = [rho]
    for _ in range(depth):
        rho_d.append(rho_d[-1].derivative())
    for k in range(1, depth + 1):
        cur = dz(cur)
        if cur.is_zero():
            break
        inv_fact = Fraction(1, factorial(k))
        # multiply (d/dzeta)^{k-1} rho  with  D_z^k a
        term = _mul_by_zeta_function(cur, rho_d[k - 1], inv_fact)
        out = term if out is None else add(out, term)
    if out is None:
        out = CuspElement(a.dim, a.trunc, smoothing=a.smoothing, flat=a.flat)
    if Q.offset_log is not None:
        out = add(out, commutator(Q.offset_log, a))
    return out


def _mul_by_zeta_function(a: CuspElement, g: RatFunc, c: Fraction) -> CuspElement:
    """Multiply an element by c * g(zeta) (a z-independent scalar symbol).

    The boundary layer is multiplied by the exact family g(xi); the interior
    layer by the branch jet of g truncated at the element's floor.
    """
    dim = a.dim
    gham = SuspendedFamily.from_scalar(g * RatFunc.of(c), dim)
    ends = {
        e: {k: gham * fam for k, fam in a.ends[e].items()} for e in ENDS
    }
    sigma: Dict[int, BranchPair] = {}
    int_loss = False
    if not a.smoothing and a.sigma:
        gord = g.growth_order()
        exp = g.expansion_at_infinity(-gord, -(a.jmin - _top(a)))
        for j1, pair in a.sigma.items():
            for kk, cc in exp.items():
                jg = -kk
                j = j1 + jg
                if j < a.jmin:
                    if not cc.is_zero():
                        int_loss = True
                    continue
                cp = cc * c
                cm = (cc if jg % 2 == 0 else -cc) * c
                term = BranchPair(pair.plus * RatFunc.of(cp), pair.minus * RatFunc.of(cm))
                sigma[j] = sigma[j] + term if j in sigma else term
        if not g.reduced().den.is_one():
            int_loss = True
    return CuspElement(
        dim,
        a.trunc,
        sigma=sigma,
        ends=ends,
        int_exact=a.int_exact and not int_loss,
        ends_exact=a.ends_exact,
        smoothing=a.smoothing,
        flat=a.flat,
    )


def log_derivation(a: CuspElement, kind: str, Q: RegularizerQ = DEFAULT_Q) -> CuspElement:
    if kind == "logx":
        return log_derivation_x(a)
    if kind == "logQ":
        return log_derivation_q(a, Q)
    raise ValueError(f"unknown derivation kind {kind!r}")


def tilde_derivation(a: CuspElement, Q: RegularizerQ = DEFAULT_Q) -> CuspElement:
    """[log Q - log x, a]."""
    return sub(log_derivation_q(a, Q), log_derivation_x(a))


# -- indicial data ------------------------------------------------------------------


def indicial_expand(a: CuspElement, end: int) -> Dict[int, SuspendedFamily]:
    """The stored boundary layer at the given end (+1 or -1)."""
    return dict(a.ends[end])


def indicial_family(a: CuspElement, end: int) -> SuspendedFamily:
    """Leading (weight-normalized) family at the end."""
    layer = a.ends[end]
    if not layer:
        return SuspendedFamily.zero(a.dim)
    return layer[min(layer)]


# -- ellipticity ----------------------------------------------------------------------


def is_fully_elliptic(a: CuspElement, Q: RegularizerQ = DEFAULT_Q):
    """Interior and boundary invertibility checks.

    Returns (ok, witnesses, notes).  The interior test asks that the leading
    branch coefficients be invertible for all real z including infinity; a
    determinant of the form z^r * (zero-free) is accepted with a weight-shift
    note, matching invertibility in the completed algebra.
    """
    witnesses = []
    notes = []
    m = a.top_degree()
    if m is None and not a.smoothing:
        return False, ["empty interior symbol"], notes
    if not a.smoothing:
        pair = a.sigma[m]
        for sgn, mat in ((1, pair.plus), (-1, pair.minus)):
            d = mat.det().reduced()
            if d.is_zero():
                witnesses.append(f"leading coefficient singular on branch {sgn:+d}")
                continue
            # strip z^r factors (weight shifts)
            num = d.num
            r = 0
            while num[0].is_zero():
                num = Poly(num.coeffs[1:])
                r += 1
            if r:
                notes.append(f"weight shift z^{r} on branch {sgn:+d}")
            rem = RatFunc(num, d.den)
            if not rem.real_pole_free():
                witnesses.append(f"denominator vanishes on branch {sgn:+d}")
                continue
            re, im = num.real_imag()
            g = re if im.is_zero() else re.gcd(im)
            if g.degree() > 0:
                root = isolate_real_root(g, None, None)
                if root is not None:
                    witnesses.append(
                        f"interior symbol vanishes near z = {float(root):.6g} on branch {sgn:+d}"
                    )
    for e in ENDS:
        fam = indicial_family(a, e)
        if fam.is_zero():
            witnesses.append(f"indicial family missing at end {'+' if e>0 else '-'}")
            continue
        try:
            sus_inverse(fam)
        except NotInvertible as exc:
            witnesses.append(
                f"indicial family not invertible at end {'+' if e>0 else '-'}: witness {exc.witness}"
            )
    return (not witnesses), witnesses, notes


# -- parametrix -------------------------------------------------------------------------


def _interior_jet_inverse(a: CuspElement, floor: int) -> Dict[int, BranchPair]:
    """Jet b with (a * b)-jet = 1 down to the floor, built degree by degree."""
    m = a.top_degree()
    pair_m = a.sigma[m]
    dim = a.dim
    lead: Dict[int, RatMat] = {}
    for sgn, mat in ((1, pair_m.plus), (-1, pair_m.minus)):
        d = mat.det().reduced()
        num, den = d.num, d.den
        r = 0
        while num[0].is_zero():
            num = Poly(num.coeffs[1:])
            r += 1
        if r == 0:
            lead[sgn] = mat.inverse()
        else:
            # regularized reciprocal of the z^r weight factor
            chi = RatFunc(Poly([0, 1]), Poly([1, 0, 1]))  # z/(1+z^2)
            dreg = RatFunc(num, den).inverse() * (chi ** r)
            adj = mat.inverse() * mat.det()  # adjugate
            lead[sgn] = adj * dreg
    binv: Dict[int, BranchPair] = {-m: BranchPair(lead[1], lead[-1])}
    # Neumann sweep: compute residual degrees of 1 - a*b and correct top-down.
    work = (floor, a.K)
    b_elt = CuspElement(dim, work, sigma=binv, int_exact=False, flat=True)
    one = CuspElement(dim, work, sigma={0: BranchPair.both(RatMat.identity(dim))}, flat=True)
    a_flat = CuspElement(dim, work, sigma=dict(a.sigma), int_exact=a.int_exact, flat=True)
    for _ in range((0 - floor) + m + 2):
        r = sub(one, star(a_flat, b_elt, work))
        degs = [j for j, p in r.sigma.items() if not p.is_zero()]
        if not degs:
            break
        jtop = max(degs)
        if jtop < floor:
            break
        pair_r = r.sigma[jtop]
        corr = {
            jtop - m: BranchPair(
                lead[1] * pair_r.plus, lead[-1] * pair_r.minus
            )
        }
        corr_elt = CuspElement(dim, work, sigma=corr, int_exact=False, flat=True)
        b_elt = add(b_elt, corr_elt)
    return dict(b_elt.sigma)


def _ends_layer_inverse(
    layer: Dict[int, SuspendedFamily], e: int, cap: int, dim: int
) -> Dict[int, SuspendedFamily]:
    """x-Laurent inverse of a boundary layer with invertible leading family.

    Solves (layer * G)_n = delta_{n,0} order by order: at product order n the
    single term containing the newest unknown is A_{kmin} G_{n - kmin}, all
    other terms involve already-computed coefficients.
    """
    if not layer:
        raise NotInvertible("empty boundary layer")
    kmin = min(layer)
    lead_inv = sus_inverse(layer[kmin])
    out: Dict[int, SuspendedFamily] = {-kmin: lead_inv}
    s_i = gr(0, 1) if e == PLUS else gr(0, -1)
    deriv_cache: Dict[int, List[SuspendedFamily]] = {}
    max_n = cap + kmin
    for n in range(1, max_n + 1):
        acc = SuspendedFamily.zero(dim)
        unknown_order = n - kmin
        for k1, f1 in layer.items():
            for k2 in list(out):
                l = n - k1 - k2
                if l < 0:
                    continue
                if k1 == kmin and k2 == unknown_order:
                    continue  # the unknown itself (l == 0 there)
                rise = _rising(k2, l)
                if rise == 0:
                    continue
                if k1 not in deriv_cache or len(deriv_cache[k1]) <= l:
                    deriv_cache[k1] = _dxi_powers(f1, max_n)
                coeff = (s_i ** l) * Fraction(rise, factorial(l))
                acc = acc + (deriv_cache[k1][l] * out[k2]) * RatFunc.of(coeff)
        out[unknown_order] = lead_inv * (-acc)
    return {k: f for k, f in out.items() if not f.is_zero() or k == -kmin}


def parametrix(
    a: CuspElement,
    Q: RegularizerQ = DEFAULT_Q,
    target: Optional[Tuple[int, int]] = None,
) -> CuspElement:
    """Inverse modulo the residual corner, on both layers.

    The interior jet is inverted degree by degree; the boundary layers are
    inverted as x-Laurent series with the suspended inverse of the leading
    family.  target = (P, M) requests residual x-order >= P and interior
    degree <= -M.
    """
    ok, witnesses, _notes = is_fully_elliptic(a, Q)
    if not ok:
        raise NotFullyElliptic("element is not fully elliptic", witnesses)
    if target is None:
        target = (a.K, -a.jmin)
    P, M = target
    m = a.top_degree() if a.top_degree() is not None else 0
    floor = min(-M - abs(m), a.jmin - abs(m))
    cap = max(P + a.weight(), a.K + a.weight())

    sigma = _interior_jet_inverse(a, floor) if not a.smoothing else {}
    ends: Dict[int, Dict[int, SuspendedFamily]] = {PLUS: {}, MINUS: {}}
    for e in ENDS:
        if a.ends[e]:
            ends[e] = _ends_layer_inverse(a.ends[e], e, cap, a.dim)
    return CuspElement(
        a.dim,
        (floor, cap),
        sigma=sigma,
        ends=ends,
        int_exact=False,
        ends_exact=False,
        smoothing=a.smoothing,
        flat=a.flat,
    )
