"""Weil heights via Mahler measure, torsion detection, and the explicit
lower-bound constants (lambda, c).

Heights are floating point with a certified error bound obtained by
agreement across increasing working precisions; everything feeding the
constants is exact integer or rational arithmetic until the final logs.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp
import sympy

from .errors import (NonpositiveConstant, PreconditionViolated,
                     ReduciblePolynomial, RootIsolationFailure,
                     ZeroPolynomial)
from .finite_algebra import is_prime
from .ramification import h2_constants

IRREDUCIBILITY_CHECK_DEGREE = 8


class AlgebraicNumber:
    """An algebraic number given by an integer polynomial, constant term
    first.  Stored primitive (content 1, positive leading coefficient).
    Irreducibility is verified up to degree 8 and assumed above that;
    the `irreducible` attribute is True or None accordingly.
    """

    __slots__ = ("coeffs", "degree", "irreducible")

    def __init__(self, coeffs, check_irreducible=True):
        cs = [int(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        if not cs:
            raise ZeroPolynomial("the zero polynomial")
        if len(cs) == 1:
            raise PreconditionViolated("degree must be >= 1")
        g = 0
        for c in cs:
            g = math.gcd(g, c)
        cs = [c // g for c in cs]
        if cs[-1] < 0:
            cs = [-c for c in cs]
        self.coeffs = tuple(cs)
        self.degree = len(cs) - 1
        if check_irreducible and self.degree <= IRREDUCIBILITY_CHECK_DEGREE:
            x = sympy.Symbol("x")
            poly = sympy.Poly(list(reversed(cs)), x)
            if not poly.is_irreducible:
                raise ReduciblePolynomial(
                    f"{self} factors over the integers")
            self.irreducible = True
        else:
            self.irreducible = None

    @classmethod
    def parse(cls, text):
        """Comma-separated integer coefficients, constant term first."""
        try:
            coeffs = [int(t.strip()) for t in text.split(",")]
        except ValueError:
            raise PreconditionViolated(
                f"cannot parse polynomial {text!r}") from None
        return cls(coeffs)

    def __eq__(self, other):
        return (isinstance(other, AlgebraicNumber)
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"AlgebraicNumber({list(self.coeffs)})"


@dataclass(frozen=True)
class HeightValue:
    value: float
    abs_error: float

    def to_json(self):
        return {"value": self.value, "abs_error": self.abs_error}


def weil_height(f):
    """(1/d) (log|lead| + sum of log+ |root|) over the complex roots.

    Runs the root finder at increasing precision until two consecutive
    values agree to well within 1e-9; the reported abs_error is twice the
    last observed difference (floored at 1e-12).
    """
    if not isinstance(f, AlgebraicNumber):
        f = AlgebraicNumber(f)
    coeffs_desc = list(reversed(f.coeffs))
    d = f.degree
    prev = None
    for dps in (40, 80, 160):
        with mp.workdps(dps):
            try:
                roots, err = mp.polyroots(
                    [mp.mpf(c) for c in coeffs_desc],
                    maxsteps=200, extraprec=2 * dps, error=True)
            except mp.libmp.NoConvergence:
                prev = None
                continue
            acc = mp.log(abs(mp.mpf(coeffs_desc[0])))
            for r in roots:
                ar = abs(r)
                if ar > 1:
                    acc += mp.log(ar)
            h = float(acc / d)
            err_f = float(err)
        if prev is not None and err_f < 1e-20:
            diff = abs(h - prev)
            bound = max(2.0 * diff, 1e-12)
            if bound <= 1e-9:
                return HeightValue(value=max(h, 0.0), abs_error=bound)
        prev = h
    raise RootIsolationFailure(
        f"could not certify the height of {f} to 1e-9")


def is_root_of_unity(f):
    """True iff every root of f is a root of unity, i.e. f is (the
    primitive part of) a cyclotomic polynomial.  Candidate orders m are
    those with phi(m) = deg f; phi(m) >= sqrt(m/2) caps the search."""
    if not isinstance(f, AlgebraicNumber):
        f = AlgebraicNumber(f)
    if f.coeffs[-1] != 1:
        return False
    d = f.degree
    x = sympy.Symbol("x")
    for m in range(1, 2 * d * d + 5):
        if sympy.totient(m) != d:
            continue
        cm = tuple(int(c) for c in reversed(
            sympy.Poly(sympy.cyclotomic_poly(m, x), x).all_coeffs()))
        if cm == f.coeffs:
            return True
    return False


# -- the explicit constants -------------------------------------------------

def default_policy(a):
    """One acceleration step: the ultrametric p-th-power bound
    |x^p - y^p| <= |x - y| max(1/p, |x - y|) doubles the exponent gain
    while it is below 1 and adds 1 afterwards."""
    return min(2 * a, a + 1)


def acceleration_lambda(p, C1, C2, policy=None):
    """Least number of steps driving a_0 = 1/C1 to a value >= C2 under
    the step policy (default min(2a, a+1)).  Exact rational arithmetic;
    the linear tail of the default policy is fast-forwarded in closed
    form, so astronomically large C2 is fine."""
    if p < 3:
        raise PreconditionViolated(f"p = {p} must be >= 3")
    if C1 < 1 or C2 < 1:
        raise PreconditionViolated("need C1 >= 1 and C2 >= 1")
    a = Fraction(1, C1)
    C2 = Fraction(C2)
    lam = 0
    if policy is not None:
        while a < C2:
            nxt = policy(a)
            if nxt <= a:
                raise PreconditionViolated("policy must strictly increase")
            a = nxt
            lam += 1
            if lam > 10 ** 6:
                raise PreconditionViolated("policy exceeded 10^6 steps")
        return lam
    while a < 1 and a < C2:
        a = min(2 * a, a + 1)
        lam += 1
    if a < C2:
        lam += math.ceil(C2 - a)
    return lam


@dataclass(frozen=True)
class BoundParams:
    """The (lambda, c) record; c is carried in log-space so the decimal
    rendering survives denominators like p^(p^(4 degK))."""

    p: int
    lam: int
    log_c: float
    c: object
    c_decimal: str
    C1: object = None
    C2: object = None
    kind: object = None

    def to_json(self):
        return {
            "p": self.p, "kind": self.kind, "C1": self.C1, "C2": self.C2,
            "lambda": self.lam, "log_c": self.log_c, "c": self.c,
            "c_decimal": self.c_decimal,
        }


def _scientific(log_c):
    log10c = log_c / math.log(10)
    expo = math.floor(log10c)
    mant = 10.0 ** (log10c - expo)
    if round(mant, 6) >= 10.0:
        mant /= 10.0
        expo += 1
    return f"{mant:.6f}e{expo:+03d}"


def bound_constant(p, lam):
    """c = log(p/2) / (2 p^lambda), computed as
    log c = log log(p/2) - log 2 - lambda log p to avoid underflow."""
    if p <= 2:
        raise NonpositiveConstant(f"log(p/2) <= 0 for p = {p}")
    if lam < 0:
        raise PreconditionViolated(f"lambda = {lam} must be >= 0")
    log_c = math.log(math.log(p / 2)) - math.log(2) - lam * math.log(p)
    c = math.exp(log_c) if log_c > -700 else None
    return BoundParams(p=p, lam=lam, log_c=log_c, c=c,
                       c_decimal=_scientific(log_c))


def bogomolov_bound(p, kind, degK=None):
    """Chain: tower constants (C1, C2), then the acceleration count, then
    the closed-form constant."""
    if not is_prime(p) or p < 5:
        raise PreconditionViolated(f"p = {p} must be a prime >= 5")
    h2 = h2_constants(kind, p, degK)
    lam = acceleration_lambda(p, h2.C1, h2.C2)
    frag = bound_constant(p, lam)
    return BoundParams(p=p, lam=lam, log_c=frag.log_c, c=frag.c,
                       c_decimal=frag.c_decimal, C1=h2.C1, C2=h2.C2,
                       kind=h2.kind)


def empirical_bound_check(sample, c):
    """For each number: torsion (skipped) or h >= c; anything else is a
    violation.  Returns a plain-dict report."""
    entries = []
    violations = 0
    for f in sample:
        if not isinstance(f, AlgebraicNumber):
            f = AlgebraicNumber(f)
        if is_root_of_unity(f):
            entries.append({"poly": list(f.coeffs), "status": "torsion",
                            "height": 0.0})
            continue
        h = weil_height(f)
        ok = h.value >= c
        if not ok:
            violations += 1
        entries.append({"poly": list(f.coeffs),
                        "status": "ok" if ok else "violation",
                        "height": h.value})
    return {"checked": len(entries), "violations": violations,
            "entries": entries}
