"""Closed-form ramification data for the two towers in play.

Everything here is exact integer or rational arithmetic: the filtration
of the degree delta*q^(n-1) abelian extension of Q_q attached to a weight-k
form (q = p^2), the classical cyclotomic filtration, the Herbrand
transition, crystalline and Frobenius characteristic polynomials, and the
constants feeding the height bound.

Abstract Galois groups are reported as lists of cyclic invariant factors;
no group elements are materialized.
"""

import warnings
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import OddWeight, PreconditionViolated
from .finite_algebra import is_prime


def _check_pk(p, k):
    if not (is_prime(p) and p >= 3):
        raise PreconditionViolated(f"p = {p} must be a prime >= 3")
    if k % 2:
        raise OddWeight(f"k = {k} must be even")
    if k < 2:
        raise PreconditionViolated(f"k = {k} must be >= 2")


def s_value(p, k):
    """Order of the subgroup of (k-1)-th powers in F_p^x."""
    return (p - 1) // gcd(k - 1, p - 1)


def delta(p, k):
    """(q-1)/gcd(q-1, k-1) with q = p^2; the tame degree of the tower.

    Always > 1: k-1 is odd while q-1 is even, so the gcd is a proper
    divisor of q-1.
    """
    _check_pk(p, k)
    q = p * p
    return (q - 1) // gcd(q - 1, k - 1)


def p3_holds(p, k):
    """Weight condition: p >= 5 prime, p and (p+1)/2 both prime to k-1."""
    if not is_prime(p) or p < 5:
        return False
    return (k - 1) % p != 0 and (k - 1) % ((p + 1) // 2) != 0


@dataclass(frozen=True)
class RamProfile:
    """Filtration data of the level-n layer over Q_q, q = p^2.

    The extension is totally ramified abelian of degree e_n = delta*q^(n-1)
    with invariant factors [delta, p^(n-1), p^(n-1)]; breaks in the lower
    numbering are governed by q^(j-1) <= d*i <= q^j - 1.
    """

    p: int
    k: int
    q: int
    d: int
    delta: int
    n: int
    e_n: int
    i_n: int
    jumps: tuple
    group: tuple
    last_group: tuple

    def to_json(self):
        return {
            "p": self.p, "k": self.k, "q": self.q, "d": self.d,
            "delta": self.delta, "n": self.n, "e_n": self.e_n,
            "i_n": self.i_n,
            "jumps": [list(t) for t in self.jumps],
            "group": list(self.group),
            "last_group": list(self.last_group),
        }


def ram_jumps(p, k, n):
    """Break ranges [[i_lo, i_hi, j], ...] for j = 1..n-1: for i in the
    j-th range the ramification group G_i fixes exactly the level-j layer.
    The ranges partition [1, i_n]."""
    _check_pk(p, k)
    if n < 1:
        raise PreconditionViolated(f"n = {n} must be >= 1")
    q = p * p
    d = gcd(q - 1, k - 1)
    out = []
    for j in range(1, n):
        i_lo = -((-q ** (j - 1)) // d)
        i_hi = (q ** j - 1) // d
        out.append((i_lo, i_hi, j))
    return out


def ram_profile(p, k, n):
    _check_pk(p, k)
    if n < 1:
        raise PreconditionViolated(f"n = {n} must be >= 1")
    if not p3_holds(p, k):
        warnings.warn(
            f"(p, k) = ({p}, {k}) fails the weight condition; the stated "
            "last-group structure is not guaranteed", stacklevel=2)
    q = p * p
    d = gcd(q - 1, k - 1)
    dl = (q - 1) // d
    e_n = dl * q ** (n - 1)
    i_n = (q ** (n - 1) - 1) // d
    assert (q ** (n - 1) - 1) % d == 0, "d must divide q^(n-1)-1"
    if n == 1:
        group = (dl,)
        last_group = (dl,)
    else:
        group = (dl, p ** (n - 1), p ** (n - 1))
        last_group = (p, p)
    jumps = tuple(ram_jumps(p, k, n))
    if jumps:
        assert jumps[0][0] == 1 and jumps[-1][1] == i_n
    else:
        assert i_n == 0
    return RamProfile(p=p, k=k, q=q, d=d, delta=dl, n=n, e_n=e_n, i_n=i_n,
                      jumps=jumps, group=group, last_group=last_group)


@dataclass(frozen=True)
class CycloProfile:
    """Classical filtration of Q(zeta_{p^n})/Q at p."""

    p: int
    n: int
    e_n: int
    i_n: int
    jumps: tuple

    def to_json(self):
        return {
            "p": self.p, "n": self.n, "e_n": self.e_n, "i_n": self.i_n,
            "jumps": [list(t) for t in self.jumps],
        }


def cyclo_profile(p, n):
    """e_n = (p-1)p^(n-1), breaks at p^(j-1) <= i <= p^j - 1; this is the
    (q -> p, d -> 1) specialization of the modular profile."""
    if not is_prime(p):
        raise PreconditionViolated(f"p = {p} must be prime")
    if n < 1:
        raise PreconditionViolated(f"n = {n} must be >= 1")
    e_n = (p - 1) * p ** (n - 1)
    i_n = p ** (n - 1) - 1
    jumps = tuple((p ** (j - 1), p ** j - 1, j) for j in range(1, n))
    return CycloProfile(p=p, n=n, e_n=e_n, i_n=i_n, jumps=jumps)


def herbrand_eta(r, d):
    """Transition value of the Herbrand function at r for a subquotient
    where the first d integers share one break: eta(r) = r/d exactly."""
    if r < 0 or d < 1:
        raise PreconditionViolated("need r >= 0 and d >= 1")
    return Fraction(r, d)


# -- characteristic polynomials ---------------------------------------------

@dataclass(frozen=True)
class MonicQuadratic:
    """X^2 + linear*X + constant with exact coefficients."""

    linear: object
    constant: object

    def __call__(self, x):
        return x * x + self.linear * x + self.constant

    def companion(self):
        return ((0, -self.constant), (1, -self.linear))

    def __str__(self):
        parts = ["X^2"]
        if self.linear:
            parts.append(f"{'+' if self.linear > 0 else '-'} "
                         f"{abs(self.linear)}*X")
        if self.constant:
            parts.append(f"{'+' if self.constant > 0 else '-'} "
                         f"{abs(self.constant)}")
        return " ".join(parts)


def _mat2_mul(x, y):
    return ((x[0][0] * y[0][0] + x[0][1] * y[1][0],
             x[0][0] * y[0][1] + x[0][1] * y[1][1]),
            (x[1][0] * y[0][0] + x[1][1] * y[1][0],
             x[1][0] * y[0][1] + x[1][1] * y[1][1]))


def crystalline_charpoly(p, kprime, a, chi_p=1):
    """Characteristic polynomial of the crystalline Frobenius on the
    filtered module with basis (e1, e2):

        phi(e1) = p^(kprime-1) * chi_p^2 * e2
        phi(e2) = -e1 + a * chi_p * e2

    chi_p is the value of the (quadratic) character at p^-1, so the trace
    term carries one factor of chi_p.  The matrix is built and its
    characteristic polynomial cross-checked before returning.
    """
    if kprime < 2:
        raise PreconditionViolated(f"kprime = {kprime} must be >= 2")
    c = p ** (kprime - 1) * chi_p * chi_p
    quad = MonicQuadratic(linear=-a * chi_p, constant=c)
    phi = ((0, -1), (c, a * chi_p))
    tr = phi[0][0] + phi[1][1]
    det = phi[0][0] * phi[1][1] - phi[0][1] * phi[1][0]
    assert -tr == quad.linear and det == quad.constant, \
        "phi-matrix characteristic polynomial mismatch"
    return quad


def frobenius_charpoly(ell, a_ell, k):
    """X^2 - a_ell*X + ell^(k-1) for an unramified prime ell; the constant
    term is the determinant ell^(k-1).  The caller is responsible for
    ell not dividing N*p."""
    if not is_prime(ell):
        raise PreconditionViolated(f"ell = {ell} must be prime")
    return MonicQuadratic(linear=-a_ell, constant=ell ** (k - 1))


def frobp_square_scalar(p, k):
    """Scalar value of Frob_p^2 when a_p = 0: the companion matrix of
    X^2 + p^(k-1) squares to -p^(k-1) * I."""
    quad = crystalline_charpoly(p, k, 0)
    C = quad.companion()
    C2 = _mat2_mul(C, C)
    val = -p ** (k - 1)
    assert C2 == ((val, 0), (0, val)), "companion square is not scalar"
    return val


# -- constants for the height bound -----------------------------------------

@dataclass(frozen=True)
class H2Constants:
    C1: int
    C2: int
    kind: str

    def to_json(self):
        return {"C1": self.C1, "C2": self.C2, "kind": self.kind}


def h2_constants(kind, p, degK=None):
    """Ramification-index and residual-cardinality bounds: (p, p) in the
    cyclotomic tower, (p^2, p^(4*degK)) in the modular one."""
    if kind == "cyclotomic":
        if not is_prime(p):
            raise PreconditionViolated(f"p = {p} must be prime")
        return H2Constants(C1=p, C2=p, kind="cyclotomic")
    if kind == "modular":
        if not is_prime(p) or p < 5:
            raise PreconditionViolated(f"p = {p} must be a prime >= 5")
        if degK is None or degK < 1:
            raise PreconditionViolated("modular kind needs degK >= 1")
        return H2Constants(C1=p * p, C2=p ** (4 * degK),
                           kind=f"modular(degK={degK})")
    raise PreconditionViolated(f"unknown kind {kind!r}")


def ratio_bound_check(p, k, n):
    """e_n/(i_n + 1) <= q - 1, the inequality behind taking C1 = p^2."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        prof = ram_profile(p, k, n)
    return Fraction(prof.e_n, prof.i_n + 1) <= prof.q - 1


def h1_witness(p, k=None, M=2):
    """Cyclotomic-character value g = (M^2)^(p-1) > 1 of the centralized
    inertia element; the (p-1)-th power kills the root-of-unity part.
    The weight plays no role in the value and is accepted only so callers
    can pass their full context."""
    if not is_prime(p) or p < 5:
        raise PreconditionViolated(f"p = {p} must be a prime >= 5")
    if M < 2:
        raise PreconditionViolated(f"M = {M} must be >= 2")
    g = (M * M) ** (p - 1)
    assert g > 1
    return g
