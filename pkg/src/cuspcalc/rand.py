"""Seeded random generators for every value type in the package.

All suites and property tests draw through these, so a fixed seed gives a
byte-identical run.  Cusp elements are generated interior-first: random
branch-pair coefficients in z, then boundary families realized so the
compatibility invariant holds on the nose, then optional free middle bumps
and below-window tails (the parts of the boundary data the interior cannot
see), which is where branch- and end-asymmetric trace behavior comes from.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .cusp import (
    BranchPair,
    CuspElement,
    ENDS,
    MINUS,
    PLUS,
    flat_element,
    smoothing_element,
)
from .gaussian import GaussianRational, ONE, ZERO, gr
from .poly import Poly
from .ratfunc import RatFunc, RatMat
from .suspended import SuspendedFamily


class Rng:
    def __init__(self, seed: int):
        self._r = random.Random(seed)

    def randint(self, a, b):
        return self._r.randint(a, b)

    def choice(self, seq):
        return self._r.choice(seq)

    def fraction(self, max_num=3, max_den=2) -> Fraction:
        n = self._r.randint(-max_num, max_num)
        d = self._r.randint(1, max_den)
        return Fraction(n, d)

    def gauss_rat(self, max_num=3, complex_prob=0.5) -> GaussianRational:
        re = self.fraction(max_num)
        im = self.fraction(max_num) if self._r.random() < complex_prob else Fraction(0)
        return GaussianRational(re, im)

    def nonzero_gauss(self, max_num=3) -> GaussianRational:
        while True:
            g = self.gauss_rat(max_num)
            if not g.is_zero():
                return g

    def subset(self, seq, k):
        return self._r.sample(list(seq), k)

    def random(self):
        return self._r.random()


def rand_poly(rng: Rng, deg: int, max_num=2) -> Poly:
    return Poly([rng.gauss_rat(max_num) for _ in range(deg + 1)])


_SAFE_DENS = (
    Poly([1, 0, 1]),          # z^2 + 1
    Poly([4, 0, 1]),          # z^2 + 4
    Poly([Fraction(1, 4), 0, 1]),
    Poly([2, 2, 1]),          # (z+1)^2 + 1
)


def rand_ratfunc(rng: Rng, growth: int, den_factors: int = 1) -> RatFunc:
    """Rational function of z with no real poles and growth order <= growth."""
    den = Poly.const(1)
    for _ in range(den_factors):
        den = den * rng.choice(_SAFE_DENS)
    num_deg = max(0, den.degree() + growth)
    num = rand_poly(rng, num_deg)
    return RatFunc(num, den)


def rand_coeff_matrix(rng: Rng, dim: int, growth: int) -> RatMat:
    return RatMat(
        [
            [
                rand_ratfunc(rng, growth)
                if rng.random() < 0.8
                else RatFunc.of(rng.gauss_rat())
                for _ in range(dim)
            ]
            for _ in range(dim)
        ]
    )


# -- realizing prescribed end expansions ---------------------------------------


def _basis_fn(j: int) -> RatFunc:
    """Rational function with leading behavior xi^j and no real poles."""
    if j >= 0:
        return RatFunc(Poly.monomial(j))
    m = (-j + 1) // 2
    return RatFunc(Poly.monomial(j + 2 * m), Poly([1, 0, 1]) ** m)


def realize_expansion(prescribed: Dict[int, GaussianRational], j_floor: int) -> RatFunc:
    """Rational function whose Laurent coefficients at +infinity match
    `prescribed` (as coefficients of xi^j) for every j >= j_floor."""
    if not prescribed:
        return RatFunc.of(0)
    remaining = dict(prescribed)
    out = RatFunc.of(0)
    j_top = max(remaining)
    for j in range(j_top, j_floor - 1, -1):
        c = remaining.get(j, ZERO)
        if c.is_zero():
            continue
        b = _basis_fn(j)
        out = out + b * RatFunc.of(c)
        # subtract b's lower-degree expansion contributions
        exp = b.expansion_at_infinity(-j, -j_floor)
        for k, bc in exp.items():
            jj = -k
            if jj == j:
                continue
            if jj >= j_floor:
                remaining[jj] = remaining.get(jj, ZERO) - c * bc
        remaining[j] = ZERO
    return out


def realize_matrix_expansion(
    prescribed: Dict[int, "object"], j_floor: int, dim: int
) -> RatMat:
    entries = []
    for i in range(dim):
        row = []
        for jj in range(dim):
            per = {
                j: mat.entries[i][jj]
                for j, mat in prescribed.items()
                if not mat.entries[i][jj].is_zero()
            }
            row.append(realize_expansion(per, j_floor))
        entries.append(row)
    return RatMat(entries)


def _mid_interpolate(
    minus_piece: RatMat, plus_piece: RatMat, bump: Optional[RatMat]
) -> RatMat:
    """Middle piece matching the seam values, plus an optional free bump."""
    u = minus_piece.eval(-1)
    v = plus_piece.eval(1)
    dim = minus_piece.dim
    half = Fraction(1, 2)
    xi = RatFunc.var()
    lo = RatFunc.of(GaussianRational(half)) - xi * RatFunc.of(GaussianRational(half))
    hi = RatFunc.of(GaussianRational(half)) + xi * RatFunc.of(GaussianRational(half))
    entries = []
    for i in range(dim):
        row = []
        for j in range(dim):
            f = lo * RatFunc.of(u.entries[i][j]) + hi * RatFunc.of(v.entries[i][j])
            row.append(f)
        entries.append(row)
    mid = RatMat(entries)
    if bump is not None:
        vanish = RatFunc(Poly([-1, 0, 1]))  # xi^2 - 1, zero at both seams
        mid = mid + bump * vanish
    return mid


def rand_bump_matrix(rng: Rng, dim: int) -> RatMat:
    return RatMat(
        [
            [
                RatFunc(rand_poly(rng, 1), Poly([1, 0, 1]))
                if rng.random() < 0.6
                else RatFunc.of(0)
                for _ in range(dim)
            ]
            for _ in range(dim)
        ]
    )


def rand_deep_tail(rng: Rng, dim: int, j_floor: int) -> RatMat:
    """Matrix whose expansion at both infinities starts below the window."""
    m = (-j_floor + 2 + 1) // 2
    den = Poly([1, 0, 1]) ** m
    return RatMat(
        [
            [
                RatFunc(rand_poly(rng, 1), den)
                if rng.random() < 0.5
                else RatFunc.of(0)
                for _ in range(dim)
            ]
            for _ in range(dim)
        ]
    )


def rand_family(
    rng: Rng,
    dim: int,
    order: int = 0,
    j_floor: int = -6,
    free_parts: bool = True,
) -> SuspendedFamily:
    """Random continuous family of growth <= order with free middle data."""
    plus_data = {}
    minus_data = {}
    for j in range(order, max(order - 3, j_floor) - 1, -1):
        if rng.random() < 0.7:
            plus_data[j] = _rand_const_matrix(rng, dim)
        if rng.random() < 0.7:
            minus_data[j] = _rand_const_matrix(rng, dim)
    plus_piece = realize_matrix_expansion(plus_data, j_floor, dim)
    minus_piece = realize_matrix_expansion(
        {j: _alternate(m, j) for j, m in minus_data.items()}, j_floor, dim
    )
    tail = rand_deep_tail(rng, dim, j_floor) if free_parts else None
    if tail is not None:
        plus_piece = plus_piece + tail
        minus_piece = minus_piece + tail
    bump = rand_bump_matrix(rng, dim) if free_parts else None
    mid = _mid_interpolate(minus_piece, plus_piece, bump)
    return SuspendedFamily(minus_piece, mid, plus_piece)


def _rand_const_matrix(rng: Rng, dim: int):
    from .ratfunc import GaussianMatrix

    return GaussianMatrix([[rng.gauss_rat(2) for _ in range(dim)] for _ in range(dim)])


def _alternate(mat, j: int):
    # branch-minus data |xi|^j <-> Laurent coefficient of xi^j
    return mat if j % 2 == 0 else -mat


def rand_cusp_element(
    rng: Rng,
    dim: int = 1,
    trunc: Tuple[int, int] = (-6, 6),
    degrees: Sequence[int] = (-3, 2),
    x_orders: Sequence[int] = (-2, 3),
    n_terms: int = 2,
    free_parts: bool = True,
) -> CuspElement:
    """Random compatible element.

    Interior data is drawn first (branch pairs of rational matrices with
    growth inside the x-order range); boundary families are then realized
    from the interior jets and decorated with free middles and deep tails.
    """
    jmin, K = trunc
    j_lo, j_hi = degrees
    k_lo, k_hi = x_orders
    sigma: Dict[int, BranchPair] = {}
    for _ in range(n_terms):
        j = rng.randint(j_lo, j_hi)
        growth = rng.randint(min(-k_lo, 0), -k_lo)
        cp = rand_coeff_matrix(rng, dim, growth)
        cm = rand_coeff_matrix(rng, dim, growth) if rng.random() < 0.7 else cp
        pair = BranchPair(cp, cm)
        sigma[j] = sigma[j] + pair if j in sigma else pair

    ends: Dict[int, Dict[int, SuspendedFamily]] = {PLUS: {}, MINUS: {}}
    for e in ENDS:
        # prescribed jets per x-order from the interior layer
        per_order: Dict[int, Dict[int, Dict[int, object]]] = {}
        for j, pair in sigma.items():
            for sgn, mat in ((1, pair.plus), (-1, pair.minus)):
                exp = mat.expansion_at_infinity(k_lo, K)
                for k, coeff in exp.items():
                    c = coeff if (e == PLUS or k % 2 == 0) else -coeff
                    per_order.setdefault(k, {}).setdefault(sgn, {})[j] = c
        for k, by_sign in per_order.items():
            plus_data = by_sign.get(1, {})
            minus_data = by_sign.get(-1, {})
            plus_piece = realize_matrix_expansion(plus_data, jmin, dim)
            minus_piece = realize_matrix_expansion(
                {j: _alternate(m, j) for j, m in minus_data.items()}, jmin, dim
            )
            bump = rand_bump_matrix(rng, dim) if free_parts else None
            mid = _mid_interpolate(minus_piece, plus_piece, bump)
            fam = SuspendedFamily(minus_piece, mid, plus_piece)
            if not fam.is_zero():
                ends[e][k] = fam
        if free_parts:
            # independent boundary data invisible to the interior layer
            for _ in range(rng.randint(0, 2)):
                k = rng.randint(max(k_lo, 1 - 2), k_hi)
                tail = rand_deep_tail(rng, dim, jmin)
                bump = rand_bump_matrix(rng, dim)
                mid = _mid_interpolate(tail, tail, bump)
                fam = SuspendedFamily(tail, mid, tail)
                if not fam.is_zero():
                    ends[e][k] = ends[e][k] + fam if k in ends[e] else fam

    return CuspElement(dim, trunc, sigma=sigma, ends=ends)


def rand_smoothing_element(
    rng: Rng,
    dim: int = 1,
    trunc: Tuple[int, int] = (-6, 6),
    x_orders: Sequence[int] = (-1, 3),
    n_terms: int = 2,
) -> CuspElement:
    """Random element of the boundary smoothing model (interior order -inf)."""
    jmin, K = trunc
    ends: Dict[int, Dict[int, SuspendedFamily]] = {PLUS: {}, MINUS: {}}
    for e in ENDS:
        for _ in range(n_terms):
            k = rng.randint(x_orders[0], x_orders[1])
            tail = rand_deep_tail(rng, dim, jmin)
            bump = rand_bump_matrix(rng, dim)
            mid = _mid_interpolate(tail, tail, bump)
            fam = SuspendedFamily(tail, mid, tail)
            if not fam.is_zero():
                ends[e][k] = ends[e][k] + fam if k in ends[e] else fam
    return smoothing_element(dim, trunc, ends)


def rand_flat_element(
    rng: Rng,
    dim: int = 1,
    trunc: Tuple[int, int] = (-6, 6),
    degrees: Sequence[int] = (-3, 0),
    n_terms: int = 2,
    decay: int = 2,
) -> CuspElement:
    """Random interior element with rapidly decaying coefficients."""
    sigma: Dict[int, BranchPair] = {}
    for _ in range(n_terms):
        j = rng.randint(degrees[0], degrees[1])
        cp = rand_coeff_matrix(rng, dim, -decay)
        cm = rand_coeff_matrix(rng, dim, -decay) if rng.random() < 0.7 else cp
        pair = BranchPair(cp, cm)
        sigma[j] = sigma[j] + pair if j in sigma else pair
    return flat_element(dim, trunc, sigma)
