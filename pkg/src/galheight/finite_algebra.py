"""Exact arithmetic in finite products of local commutative F_p-algebras.

A ProductAlgebra is A = A_1 x ... x A_r where each local factor is
F_{p^m}[t]/(t^e) for some m >= 1, e >= 1 (m = e = 1 gives the prime
field).  Elements are stored fully reduced, so structural equality is
semantic equality and elements can be hashed into group closures.
"""

import re
from dataclasses import dataclass

from .errors import (MixedParents, NonPrimeP, NotAUnit, ParseError,
                     ReduciblePolynomial, TooLarge)
from ._fplin import FpSpan

ENUM_GUARD = 2 ** 20

PRIME_FIELD = "PrimeField"
FIELD_EXTENSION = "FieldExtension"
TRUNCATED_POLY = "TruncatedPoly"
EXT_TRUNCATED = "ExtTruncated"


def is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1 if d == 2 else 2
    return True


# -- F_p[x] helpers, dense constant-first int lists -------------------------

def _ptrim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def _pmulmod(a, b, f, p):
    """a*b mod (f, p); f monic."""
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _prem(out, f, p)


def _prem(a, f, p):
    a = _ptrim([x % p for x in a])
    d = len(f) - 1
    while len(a) - 1 >= d:
        co = a[-1]
        sh = len(a) - 1 - d
        for i in range(d + 1):
            a[sh + i] = (a[sh + i] - co * f[i]) % p
        a = _ptrim(a)
    return a


def _ppowmod(a, n, f, p):
    r = [1]
    b = list(a)
    while n:
        if n & 1:
            r = _pmulmod(r, b, f, p)
        b = _pmulmod(b, b, f, p)
        n >>= 1
    return r


def _pgcd(a, b, p):
    a, b = _ptrim([x % p for x in a]), _ptrim([x % p for x in b])
    while b:
        inv = pow(b[-1], -1, p)
        bb = [(inv * x) % p for x in b]
        a, b = b, _prem(a, bb, p)
    return a


def _pinvmod(a, f, p):
    """Inverse of a in F_p[x]/(f), f irreducible; a nonzero mod f."""
    r0, r1 = list(f), _prem(a, f, p)
    s0, s1 = [], [1]
    while True:
        r1 = _ptrim(r1)
        if len(r1) == 1:
            inv = pow(r1[0], -1, p)
            return _prem([(inv * x) % p for x in s1], f, p)
        assert r1, "element not invertible"
        q, r = _pdivmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _psub(s0, _pmul(q, s1, p), p)


def _pdivmod(a, b, p):
    a = _ptrim(list(a))
    b = _ptrim(list(b))
    q = [0] * max(0, len(a) - len(b) + 1)
    binv = pow(b[-1], -1, p)
    while len(a) >= len(b) and a:
        co = (a[-1] * binv) % p
        sh = len(a) - len(b)
        q[sh] = co
        for i in range(len(b)):
            a[sh + i] = (a[sh + i] - co * b[i]) % p
        a = _ptrim(a)
    return q, a


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def _psub(a, b, p):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _ptrim([(x - y) % p for x, y in zip(a, b)])


def _is_irreducible(f, p):
    """Monic f irreducible over F_p, by the derived-from-Frobenius test:
    x^(p^m) = x mod f, and gcd(x^(p^(m/r)) - x, f) = 1 for primes r | m."""
    m = len(f) - 1
    if m == 1:
        return True
    x = [0, 1]
    xq = _ppowmod(x, p ** m, f, p)
    if _psub(xq, x, p):
        return False
    r = 2
    mm = m
    pr = set()
    while r * r <= mm:
        while mm % r == 0:
            pr.add(r)
            mm //= r
        r += 1
    if mm > 1:
        pr.add(mm)
    for r in pr:
        xr = _ppowmod(x, p ** (m // r), f, p)
        g = _pgcd(_psub(xr, x, p), f, p)
        if len(g) != 1:
            return False
    return True


def lex_min_irreducible(p, m):
    """Lexicographically least monic irreducible of degree m over F_p
    (constant-first coefficient ordering).  Used as the default extension
    polynomial in algebra-spec strings."""
    if m == 1:
        return (0, 1)
    # odometer over the m low coefficients, constant term slowest
    for n in range(p ** m):
        coeffs = [0] * m
        rem = n
        for i in range(m):
            div = p ** (m - 1 - i)
            coeffs[i], rem = divmod(rem, div)
        f = coeffs + [1]
        if _is_irreducible(f, p):
            return tuple(f)
    raise AssertionError("no irreducible polynomial found")


@dataclass(frozen=True)
class LocalAlgebraSpec:
    """One local factor F_{p^m}[t]/(t^e).

    kind is one of PrimeField, FieldExtension, TruncatedPoly, ExtTruncated;
    poly is the monic irreducible defining the residue field when m > 1
    (constant-first integer tuple, reduced mod p).
    """
    p: int
    kind: str
    m: int = 1
    e: int = 1
    poly: tuple = ()

    def __post_init__(self):
        if not is_prime(self.p):
            raise NonPrimeP(f"p = {self.p} is not prime")
        if self.m < 1 or self.e < 1:
            raise ParseError(f"invalid local parameters m={self.m} e={self.e}")
        kinds = {PRIME_FIELD: (1, 1), FIELD_EXTENSION: (self.m, 1),
                 TRUNCATED_POLY: (1, self.e), EXT_TRUNCATED: (self.m, self.e)}
        if self.kind not in kinds:
            raise ParseError(f"unknown local kind {self.kind!r}")
        want = kinds[self.kind]
        if (self.m, self.e) != want:
            raise ParseError(
                f"{self.kind} requires (m, e) = {want}, got "
                f"({self.m}, {self.e})")
        if self.m > 1:
            poly = tuple(c % self.p for c in self.poly)
            if len(poly) != self.m + 1 or poly[-1] != 1:
                raise ReduciblePolynomial(
                    f"extension of degree {self.m} needs a monic degree-"
                    f"{self.m} polynomial, got {self.poly}")
            if not _is_irreducible(list(poly), self.p):
                raise ReduciblePolynomial(
                    f"{list(poly)} is reducible mod {self.p}")
            object.__setattr__(self, "poly", poly)
        else:
            object.__setattr__(self, "poly", (0, 1))

    @property
    def dim(self):
        return self.m * self.e

    @property
    def size(self):
        return self.p ** self.dim

    @property
    def unit_count(self):
        q = self.p ** self.m
        return (q - 1) * q ** (self.e - 1)

    def sl2_order(self):
        q = self.p ** self.m
        return q * (q * q - 1) * q ** (3 * (self.e - 1))


def prime_field(p):
    return LocalAlgebraSpec(p, PRIME_FIELD)


def field_extension(p, poly):
    m = len(poly) - 1
    return LocalAlgebraSpec(p, FIELD_EXTENSION, m=m, poly=tuple(poly))


def truncated_poly(p, e):
    return LocalAlgebraSpec(p, TRUNCATED_POLY, e=e)


def ext_truncated(p, poly, e):
    m = len(poly) - 1
    return LocalAlgebraSpec(p, EXT_TRUNCATED, m=m, e=e, poly=tuple(poly))


class AlgebraElement:
    """Element of a ProductAlgebra; coords[i] is the coordinate tuple of
    the i-th local component on the basis x^a t^b (index b*m + a)."""

    __slots__ = ("parent", "coords", "_hash")

    def __init__(self, parent, coords):
        self.parent = parent
        self.coords = coords
        self._hash = hash(coords)

    def __eq__(self, other):
        return (isinstance(other, AlgebraElement)
                and self.parent is other.parent
                and self.coords == other.coords)

    def __hash__(self):
        return self._hash

    def __add__(self, other):
        return self.parent.add(self, other)

    def __sub__(self, other):
        return self.parent.add(self, self.parent.neg(other))

    def __mul__(self, other):
        return self.parent.mul(self, other)

    def __neg__(self):
        return self.parent.neg(self)

    def is_zero(self):
        return all(all(c == 0 for c in comp) for comp in self.coords)

    def is_unit(self):
        return self.parent.is_unit(self)

    def flat(self):
        """Flattened F_p coordinate tuple of length parent.dim."""
        return tuple(c for comp in self.coords for c in comp)

    def __repr__(self):
        return f"AlgebraElement{self.coords}"


class ProductAlgebra:
    """A = prod of local factors, with exact componentwise arithmetic."""

    def __init__(self, factors):
        if not factors:
            raise ParseError("empty factor list")
        ps = {f.p for f in factors}
        if len(ps) != 1:
            raise MixedParents(f"factors over different primes: {sorted(ps)}")
        self.p = factors[0].p
        self.factors = tuple(factors)
        self.dim = sum(f.dim for f in factors)
        self.size = self.p ** self.dim
        self.unit_count = 1
        for f in factors:
            self.unit_count *= f.unit_count
        self.idempotents = tuple(
            self._from_local_units(i) for i in range(len(factors)))

    # -- construction helpers ---------------------------------------------

    def _from_local_units(self, i):
        coords = []
        for j, f in enumerate(self.factors):
            c = [0] * f.dim
            if i == j:
                c[0] = 1
            coords.append(tuple(c))
        return AlgebraElement(self, tuple(coords))

    def zero(self):
        return AlgebraElement(
            self, tuple(tuple([0] * f.dim) for f in self.factors))

    def one(self):
        return self.scalar(1)

    def scalar(self, c):
        """The image of c under F_p -> A (diagonal embedding)."""
        c %= self.p
        coords = []
        for f in self.factors:
            v = [0] * f.dim
            v[0] = c
            coords.append(tuple(v))
        return AlgebraElement(self, tuple(coords))

    def from_flat(self, vec):
        vec = list(vec)
        assert len(vec) == self.dim
        coords = []
        at = 0
        for f in self.factors:
            coords.append(tuple(x % self.p for x in vec[at:at + f.dim]))
            at += f.dim
        return AlgebraElement(self, tuple(coords))

    def basis(self):
        """The standard F_p-basis of A as elements (unit flat vectors)."""
        out = []
        for i in range(self.dim):
            v = [0] * self.dim
            v[i] = 1
            out.append(self.from_flat(v))
        return out

    # -- arithmetic ---------------------------------------------------------

    def _check(self, *els):
        for el in els:
            if el.parent is not self:
                raise MixedParents("elements from different algebras")

    def add(self, a, b):
        self._check(a, b)
        p = self.p
        coords = tuple(
            tuple((x + y) % p for x, y in zip(ca, cb))
            for ca, cb in zip(a.coords, b.coords))
        return AlgebraElement(self, coords)

    def neg(self, a):
        self._check(a)
        p = self.p
        return AlgebraElement(
            self, tuple(tuple((-x) % p for x in comp) for comp in a.coords))

    def mul(self, a, b):
        self._check(a, b)
        coords = tuple(
            self._local_mul(f, ca, cb)
            for f, ca, cb in zip(self.factors, a.coords, b.coords))
        return AlgebraElement(self, coords)

    def _local_mul(self, f, ca, cb):
        p, m, e = self.p, f.m, f.e
        if m == 1 and e == 1:
            return ((ca[0] * cb[0]) % p,)
        fp = list(f.poly)
        # coefficients in F_{p^m} indexed by powers of t, truncated at t^e
        out = [[0] * m for _ in range(e)]
        for i in range(e):
            ai = list(ca[i * m:(i + 1) * m])
            if not any(ai):
                continue
            for j in range(e - i):
                bj = list(cb[j * m:(j + 1) * m])
                if not any(bj):
                    continue
                prod = _pmulmod(ai, bj, fp, p)
                row = out[i + j]
                for t, c in enumerate(prod):
                    row[t] = (row[t] + c) % p
        return tuple(c for row in out for c in row)

    def is_unit(self, a):
        self._check(a)
        # unit iff every residue-field component (t^0 part) is nonzero
        for f, comp in zip(self.factors, a.coords):
            if not any(comp[:f.m]):
                return False
        return True

    def inv(self, a):
        self._check(a)
        if not self.is_unit(a):
            raise NotAUnit(f"{a} has a component in the maximal ideal")
        coords = tuple(
            self._local_inv(f, comp)
            for f, comp in zip(self.factors, a.coords))
        return AlgebraElement(self, coords)

    def _local_inv(self, f, comp):
        p, m, e = self.p, f.m, f.e
        fp = list(f.poly)
        a0 = list(comp[:m])
        b0 = _pinvmod(a0, fp, p)
        if e == 1:
            b0 = b0 + [0] * (m - len(b0))
            return tuple(b0[:m])
        # Newton iteration b <- b(2 - ab) doubles t-adic precision
        width = m * e
        b = (b0 + [0] * (m - len(b0)))[:m] + [0] * (m * (e - 1))
        prec = 1
        two = self._local_scalar_vec(f, 2)
        while prec < e:
            ab = self._local_mul(f, tuple(comp), tuple(b))
            t = [(x - y) % p for x, y in zip(two, ab)]
            b = list(self._local_mul(f, tuple(b), tuple(t)))
            prec *= 2
        assert len(b) == width
        return tuple(b)

    def _local_scalar_vec(self, f, c):
        v = [0] * f.dim
        v[0] = c % self.p
        return v

    # -- enumeration --------------------------------------------------------

    def elements(self):
        """All elements in lexicographic flat-coordinate order (first
        coordinate most significant)."""
        if self.size > ENUM_GUARD:
            raise TooLarge(f"|A| = {self.size} exceeds {ENUM_GUARD}")
        vec = [0] * self.dim
        while True:
            yield self.from_flat(vec)
            i = self.dim - 1
            while i >= 0 and vec[i] == self.p - 1:
                vec[i] = 0
                i -= 1
            if i < 0:
                return
            vec[i] += 1

    def units(self):
        """Invertible elements, in the same deterministic order."""
        for el in self.elements():
            if self.is_unit(el):
                yield el

    def sl2_order(self):
        out = 1
        for f in self.factors:
            out *= f.sl2_order()
        return out

    def __repr__(self):
        return f"ProductAlgebra(p={self.p}, dim={self.dim}, " \
               f"factors={len(self.factors)})"


def make_algebra(specs, p):
    """Build the product algebra, checking primality and consistency."""
    if not is_prime(p):
        raise NonPrimeP(f"p = {p} is not prime")
    for s in specs:
        if s.p != p:
            raise MixedParents(f"factor over p = {s.p}, expected {p}")
    return ProductAlgebra(list(specs))


def span_of_unit_squares(A):
    """F_p-span of the squares of all units, as an echelon FpSpan, plus a
    flag telling whether the span is all of A."""
    span = FpSpan(A.p, A.dim)
    cnt = 0
    for u in A.units():
        cnt += 1
        span.insert(A.mul(u, u).flat())
        if span.dim == A.dim:
            # span cannot grow further; still correct to stop early
            return span, True
    assert cnt == A.unit_count
    return span, span.dim == A.dim


# -- textual algebra specs --------------------------------------------------

_FACTOR_RE = re.compile(r"F(\d+)(?:\^(\d+))?(?:\[x\]/x\^(\d+))?")


def parse_algebra(text):
    """Parse a product-algebra spec string.

    Grammar: factors `F<p>`, `F<p>^<m>`, `F<p>[x]/x^<e>` (and the
    combination `F<p>^<m>[x]/x^<e>`), joined by `x`.  Extensions use the
    lexicographically least monic irreducible polynomial of the stated
    degree; supply specs programmatically to pin a different one.
    """
    s = text.replace(" ", "")
    if not s:
        raise ParseError("empty algebra spec")
    specs = []
    pos = 0
    while True:
        mo = _FACTOR_RE.match(s, pos)
        if mo is None or mo.start() != pos:
            raise ParseError(f"cannot parse algebra spec at {s[pos:]!r}")
        p = int(mo.group(1))
        if not is_prime(p):
            raise NonPrimeP(f"p = {p} is not prime")
        m = int(mo.group(2)) if mo.group(2) else 1
        e = int(mo.group(3)) if mo.group(3) else 1
        if m < 1 or e < 1:
            raise ParseError(f"exponents must be >= 1 in {text!r}")
        if m > 1 and e > 1:
            specs.append(ext_truncated(p, lex_min_irreducible(p, m), e))
        elif m > 1:
            specs.append(field_extension(p, lex_min_irreducible(p, m)))
        elif e > 1:
            specs.append(truncated_poly(p, e))
        else:
            specs.append(prime_field(p))
        pos = mo.end()
        if pos == len(s):
            break
        if s[pos] != "x":
            raise ParseError(f"expected factor separator 'x' at {s[pos:]!r}")
        pos += 1
    ps = {f.p for f in specs}
    if len(ps) != 1:
        raise ParseError(f"mixed characteristics in spec: {sorted(ps)}")
    return make_algebra(specs, specs[0].p)
