"""Factored monic denominators for rational functions.

Denominators in this package are always products of a small set of monic
irreducibles over Q(i) (quadratics like 1 + x^2 and the linear factors of
user data).  Keeping them factored makes products, cancellations and pole
analysis linear-time and avoids polynomial gcds entirely on hot paths.
"""

from __future__ import annotations

from typing import Dict, Iterator, Tuple

from .poly import P_ONE, Poly

Key = Tuple  # coefficient tuple of a monic irreducible


class FDen:
    """Multiset of monic irreducible polynomials (a factored denominator)."""

    __slots__ = ("factors", "_expanded")

    def __init__(self, factors: Dict[Key, Tuple[Poly, int]] = None):
        object.__setattr__(self, "factors", dict(factors or {}))
        object.__setattr__(self, "_expanded", None)

    def __setattr__(self, name, value):
        raise AttributeError("FDen is immutable")

    @staticmethod
    def one() -> "FDen":
        return _FDEN_ONE

    @staticmethod
    def of_factor(p: Poly, e: int = 1) -> "FDen":
        if p.degree() == 0:
            return _FDEN_ONE
        p = p.monic()
        return FDen({p.coeffs: (p, e)})

    def is_one(self) -> bool:
        return not self.factors

    def degree(self) -> int:
        return sum(p.degree() * e for p, e in self.factors.values())

    def expand(self) -> Poly:
        if self._expanded is None:
            out = P_ONE
            for p, e in self.factors.values():
                out = out * (p ** e)
            object.__setattr__(self, "_expanded", out)
        return self._expanded

    def items(self) -> Iterator[Tuple[Poly, int]]:
        return iter(self.factors.values())

    def __mul__(self, other: "FDen") -> "FDen":
        if not self.factors:
            return other
        if not other.factors:
            return self
        out = dict(self.factors)
        for key, (p, e) in other.factors.items():
            if key in out:
                out[key] = (p, out[key][1] + e)
            else:
                out[key] = (p, e)
        return FDen(out)

    def mul_factor(self, p: Poly, e: int = 1) -> "FDen":
        p = p.monic()
        out = dict(self.factors)
        key = p.coeffs
        if key in out:
            out[key] = (p, out[key][1] + e)
        else:
            out[key] = (p, e)
        return FDen(out)

    def div_factor(self, key: Key, e: int = 1) -> "FDen":
        out = dict(self.factors)
        p, cur = out[key]
        if cur < e:
            raise ValueError("dividing by more than present")
        if cur == e:
            del out[key]
        else:
            out[key] = (p, cur - e)
        return FDen(out)

    def gcd(self, other: "FDen") -> "FDen":
        out = {}
        for key, (p, e) in self.factors.items():
            oe = other.factors.get(key)
            if oe is not None:
                out[key] = (p, min(e, oe[1]))
        return FDen(out)

    def div(self, other: "FDen") -> "FDen":
        out = dict(self.factors)
        for key, (p, e) in other.factors.items():
            cur = out.get(key)
            if cur is None or cur[1] < e:
                raise ValueError("not divisible")
            if cur[1] == e:
                del out[key]
            else:
                out[key] = (p, cur[1] - e)
        return FDen(out)

    def radical(self) -> Poly:
        out = P_ONE
        for p, _e in self.factors.values():
            out = out * p
        return out

    def bump_all(self, by: int = 1) -> "FDen":
        return FDen({k: (p, e + by) for k, (p, e) in self.factors.items()})

    def __eq__(self, other):
        if not isinstance(other, FDen):
            return NotImplemented
        return {k: e for k, (_p, e) in self.factors.items()} == {
            k: e for k, (_p, e) in other.factors.items()
        }

    def __hash__(self):
        return hash(frozenset((k, e) for k, (_p, e) in self.factors.items()))

    def __repr__(self):
        if not self.factors:
            return "FDen(1)"
        return "FDen(" + " * ".join(
            f"({p!r})^{e}" for p, e in self.factors.values()
        ) + ")"


_FDEN_ONE = FDen({})
