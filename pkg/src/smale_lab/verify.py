"""Exact re-verification of candidate counterexamples.

Double-precision floats are exact rationals, and every quantity in the
quotient checks is built from +, -, * of the inputs followed by modulus
comparisons.  Squaring both sides turns each inequality into a comparison
of exact rationals, so a candidate violation found by the float pipeline
can be re-decided with no rounding error at all.  Only the critical points
themselves remain approximate (they come from the root finder); their
residuals are recorded on the certificate, and the tightened tolerance
absorbs their effect.

A candidate is promoted to a certificate only when this exact computation
still sees a violation at half the float slack.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

# Half of the float comparison slack (CONJ_SLACK = 1e-9), exactly.
TIGHT_SLACK = Fraction(1, 2 * 10 ** 9)


class XC:
    """Exact complex number over the rationals."""

    __slots__ = ("re", "im")

    def __init__(self, re: Fraction, im: Fraction):
        self.re = re
        self.im = im

    @classmethod
    def of(cls, z: complex) -> "XC":
        return cls(Fraction(z.real), Fraction(z.imag))

    def __add__(self, other: "XC") -> "XC":
        return XC(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "XC") -> "XC":
        return XC(self.re - other.re, self.im - other.im)

    def __mul__(self, other: "XC") -> "XC":
        return XC(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im


def _product(factors: list[XC]) -> XC:
    acc = XC(Fraction(1), Fraction(0))
    for f in factors:
        acc = acc * f
    return acc


def _derivative_sum(factors: list[XC]) -> XC:
    acc = XC(Fraction(0), Fraction(0))
    for j in range(len(factors)):
        term = XC(Fraction(1), Fraction(0))
        for i, f in enumerate(factors):
            if i != j:
                term = term * f
        acc = acc + term
    return acc


@dataclass(frozen=True)
class ExactQuotients:
    """Exact squared ratios for one (P, z) pair over a finite witness set."""

    min_ratio2: Fraction
    max_ratio2: Fraction
    sharp_violated: bool
    dual_violated: bool
    strong_smale_violated: bool
    strong_dual_violated: bool


def exact_cstar_quotients(
    root_coords: list[list[complex]],
    z_coords: list[complex],
    witnesses: list[tuple[complex, ...]],
) -> ExactQuotients:
    """Re-decide the quotient inequalities in exact rational arithmetic.

    root_coords is indexed [root][coordinate]; witnesses are the critical
    elements found by the float pipeline, used verbatim.
    """
    n = len(root_coords)
    k = len(z_coords)
    roots = [[XC.of(c) for c in r] for r in root_coords]
    zs = [XC.of(c) for c in z_coords]

    pz = []
    dz = []
    dp2 = Fraction(0)
    for t in range(k):
        factors = [zs[t] - roots[i][t] for i in range(n)]
        pz.append(_product(factors))
        dz.append(_derivative_sum(factors))
        d2 = dz[t].abs2()
        if d2 > dp2:
            dp2 = d2

    sharp_target2 = (Fraction(n - 1, n) + TIGHT_SLACK) ** 2
    dual_target2 = (Fraction(1, n) - TIGHT_SLACK) ** 2
    sharp_fac2 = Fraction((n - 1) ** 2, n ** 2)
    dual_fac2 = Fraction(1, n ** 2)

    min_ratio2: Fraction | None = None
    max_ratio2: Fraction | None = None
    some_strong_smale = False
    some_strong_dual = False
    for w in witnesses:
        ws = [XC.of(c) for c in w]
        num2 = Fraction(0)
        dist2 = Fraction(0)
        smale_ok = True
        dual_ok = True
        for t in range(k):
            factors = [ws[t] - roots[i][t] for i in range(n)]
            diff = pz[t] - _product(factors)
            d2 = diff.abs2()
            gap2 = (zs[t] - ws[t]).abs2()
            if d2 > num2:
                num2 = d2
            if gap2 > dist2:
                dist2 = gap2
            rhs = gap2 * dz[t].abs2()
            slack = TIGHT_SLACK * max(Fraction(1), d2, rhs)
            if d2 > sharp_fac2 * rhs + slack:
                smale_ok = False
            if dual_fac2 * rhs > d2 + slack:
                dual_ok = False
        if smale_ok:
            some_strong_smale = True
        if dual_ok:
            some_strong_dual = True
        ratio2 = num2 / (dist2 * dp2)
        if min_ratio2 is None or ratio2 < min_ratio2:
            min_ratio2 = ratio2
        if max_ratio2 is None or ratio2 > max_ratio2:
            max_ratio2 = ratio2

    assert min_ratio2 is not None and max_ratio2 is not None
    return ExactQuotients(
        min_ratio2=min_ratio2,
        max_ratio2=max_ratio2,
        sharp_violated=min_ratio2 > sharp_target2,
        dual_violated=max_ratio2 < dual_target2,
        strong_smale_violated=not some_strong_smale,
        strong_dual_violated=not some_strong_dual,
    )


def exact_normalized_ratios(
    coeffs: list[complex], witnesses: list[complex]
) -> tuple[Fraction, Fraction]:
    """Exact squared |P(w)/w| extremes for a normalized coefficient poly."""
    cs = [XC.of(c) for c in coeffs]
    lo: Fraction | None = None
    hi: Fraction | None = None
    for w in witnesses:
        xw = XC.of(w)
        acc = XC(Fraction(0), Fraction(0))
        for c in reversed(cs):
            acc = acc * xw + c
        r2 = acc.abs2() / xw.abs2()
        if lo is None or r2 < lo:
            lo = r2
        if hi is None or r2 > hi:
            hi = r2
    assert lo is not None and hi is not None
    return lo, hi


@dataclass(frozen=True)
class Certificate:
    """A fully serialized candidate violation, exact-checked before issue."""

    kind: str
    degree: int
    dim: int
    trial: int
    seed: int
    confirmed: bool
    data: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "degree": self.degree,
            "dim": self.dim,
            "trial": self.trial,
            "seed": self.seed,
            "confirmed": self.confirmed,
            "data": self.data,
        }
