"""2x2 matrix groups over a ProductAlgebra and over Z/p^n.

Covers the finite matrix-group side of the toolkit: SL2/Ghat enumeration
by breadth-first closure, normal closures, the determinant membership
condition, the adjoint action on trace-zero matrices, and the I + p^(n-1)A
logarithm with its determinant-trace identity.
"""

from collections import namedtuple
from math import gcd

import numpy as np

from . import _backend
from ._fplin import FpSpan
from ._tables import TABLE_LIMIT, AlgebraTables
from .errors import (MixedParents, NonzeroTrace, NotSubgroup,
                     NotUnipotentAtLevel, PreconditionViolated,
                     SingularMatrix, TooLarge)
from .finite_algebra import is_prime
from .ramification import delta, s_value

GROUP_GUARD = 2 ** 22


class Mat2:
    """2x2 matrix over a ProductAlgebra, entries canonical."""

    __slots__ = ("parent", "a", "b", "c", "d", "_hash")

    def __init__(self, parent, a, b, c, d):
        for e in (a, b, c, d):
            if e.parent is not parent:
                raise MixedParents("matrix entries from a different algebra")
        self.parent = parent
        self.a, self.b, self.c, self.d = a, b, c, d
        self._hash = hash((a, b, c, d))

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def __eq__(self, other):
        return (isinstance(other, Mat2) and self.parent is other.parent
                and self.entries() == other.entries())

    def __hash__(self):
        return self._hash

    def __mul__(self, other):
        A = self.parent
        return Mat2(
            A,
            A.add(A.mul(self.a, other.a), A.mul(self.b, other.c)),
            A.add(A.mul(self.a, other.b), A.mul(self.b, other.d)),
            A.add(A.mul(self.c, other.a), A.mul(self.d, other.c)),
            A.add(A.mul(self.c, other.b), A.mul(self.d, other.d)))

    def det(self):
        A = self.parent
        return A.add(A.mul(self.a, self.d), A.neg(A.mul(self.b, self.c)))

    def trace(self):
        return self.parent.add(self.a, self.d)

    def inv(self):
        A = self.parent
        det = self.det()
        if not A.is_unit(det):
            raise SingularMatrix("determinant is not a unit")
        di = A.inv(det)
        return Mat2(A, A.mul(di, self.d), A.mul(di, A.neg(self.b)),
                    A.mul(di, A.neg(self.c)), A.mul(di, self.a))

    def conj_by(self, g):
        """g * self * g^-1."""
        return g * self * g.inv()

    def serialize(self):
        return " ".join(_el_str(e) for e in self.entries())

    def __repr__(self):
        return f"Mat2[{self.serialize()}]"


def _el_str(el):
    return ";".join(",".join(str(c) for c in comp) for comp in el.coords)


def identity(A):
    return Mat2(A, A.one(), A.zero(), A.zero(), A.one())


def elementary_S(A, alpha):
    """[[1, alpha], [0, 1]]."""
    return Mat2(A, A.one(), alpha, A.zero(), A.one())


def elementary_T(A, alpha):
    """[[1, 0], [alpha, 1]]."""
    return Mat2(A, A.one(), A.zero(), alpha, A.one())


# -- closure engine ---------------------------------------------------------

def _gen_key_list(tabs, mats, with_inverses=True):
    keys = []
    for m in mats:
        k4 = tuple(tabs.id_of(e) for e in m.entries())
        keys.append(k4)
    if with_inverses:
        cols = tuple(np.array(col, dtype=np.int32)
                     for col in zip(*keys))
        ia, ib, ic, idd = tabs.mat_inv_cols(*cols)
        for j in range(len(keys)):
            keys.append((int(ia[j]), int(ib[j]), int(ic[j]), int(idd[j])))
    seen = set()
    out = []
    for k4 in keys:
        if k4 not in seen:
            seen.add(k4)
            out.append(k4)
    return out


def _bfs_closure(tabs, gen4s, guard=GROUP_GUARD):
    """Closure of the generator set under multiplication; returns the
    sorted int64 key array of the generated subgroup."""
    add_t, mul_t = tabs.add, tabs.mul
    idk = tabs.mat_key((tabs.one_id, tabs.zero_id, tabs.zero_id,
                        tabs.one_id))
    start = {idk} | {tabs.mat_key(g) for g in gen4s}
    known = np.array(sorted(start), dtype=np.int64)
    frontier = known
    while frontier.size:
        cols = tabs.keys_to_cols(frontier)
        waves = [_backend.mul_batch(*cols, g, add_t, mul_t) for g in gen4s]
        cand = np.unique(np.concatenate(waves)) if waves else \
            np.empty(0, dtype=np.int64)
        fresh = cand[~np.isin(cand, known, assume_unique=True)]
        if known.size + fresh.size > guard:
            raise TooLarge(f"group closure exceeded {guard} elements")
        known = np.union1d(known, fresh)
        frontier = fresh
    return known


class GroupSet:
    """A finite matrix group as an explicit, deterministically ordered set.

    Elements are stored as packed int64 keys (sorted ascending, which is
    lexicographic order on entry coordinates); membership is O(1).
    """

    def __init__(self, A, tables, keys, generators):
        self.A = A
        self.tables = tables
        self.keys = keys
        self.key_set = set(map(int, keys))
        self.generators = list(generators)

    @property
    def order(self):
        return len(self.keys)

    def key_of(self, m):
        return self.tables.mat_key(tuple(self.tables.id_of(e)
                                         for e in m.entries()))

    def __contains__(self, m):
        return self.key_of(m) in self.key_set

    def mat_of_key(self, key):
        t = self.tables
        a, b, c, d = (t.el_of(i) for i in t.key_mat(key))
        return Mat2(self.A, a, b, c, d)

    def __iter__(self):
        for k in self.keys:
            yield self.mat_of_key(int(k))

    def __len__(self):
        return len(self.keys)

    def serialize_lines(self):
        for m in self:
            yield m.serialize()

    def verify(self, samples=500, seed=0):
        """Spot-check the group axioms: all generator inverses and a
        random sample of pairwise products stay inside the set."""
        rng = np.random.default_rng(seed)
        for g in self.generators:
            if g.inv() not in self:
                return False
        n = len(self.keys)
        for _ in range(min(samples, n * n)):
            i, j = rng.integers(0, n, size=2)
            m = self.mat_of_key(int(self.keys[i])) \
                * self.mat_of_key(int(self.keys[j]))
            if m not in self:
                return False
        return True


def sl2_generators(A):
    """Elementary generators over an F_p-basis of A."""
    gens = []
    for b in A.basis():
        gens.append(elementary_S(A, b))
        gens.append(elementary_T(A, b))
    return gens


def enumerate_SL2(A):
    predicted = A.sl2_order()
    if predicted > GROUP_GUARD:
        raise TooLarge(f"|SL2(A)| = {predicted} exceeds {GROUP_GUARD}")
    if A.size > TABLE_LIMIT:
        raise TooLarge(f"|A| = {A.size} exceeds the table limit")
    tabs = AlgebraTables(A)
    gens = sl2_generators(A)
    keys = _bfs_closure(tabs, _gen_key_list(tabs, gens))
    assert len(keys) == predicted, \
        f"BFS order {len(keys)} != closed form {predicted}"
    return GroupSet(A, tabs, keys, gens)


def det_power_subgroup(p, k):
    """The subgroup (F_p^x)^(k-1) of F_p^x, sorted."""
    return sorted({pow(x, k - 1, p) for x in range(1, p)})


def enumerate_ghat(A, k):
    """Ghat(A) = matrices with determinant in the diagonal copy of
    (F_p^x)^(k-1); realized as SL2(A) extended by diag(x, 1) cosets."""
    p = A.p
    D = det_power_subgroup(p, k)
    s = len(D)
    assert s == s_value(p, k)
    predicted = A.sl2_order() * s
    if predicted > GROUP_GUARD:
        raise TooLarge(f"|Ghat(A)| = {predicted} exceeds {GROUP_GUARD}")
    G0 = enumerate_SL2(A)
    tabs = G0.tables
    all_keys = [G0.keys]
    cols = tabs.keys_to_cols(G0.keys)
    zero, one = tabs.zero_id, tabs.one_id
    for x in D:
        if x == 1:
            continue
        xid = tabs.id_of(A.scalar(x))
        g4 = (xid, zero, zero, one)
        all_keys.append(_backend.mul_batch(*cols, g4, tabs.add, tabs.mul))
    keys = np.unique(np.concatenate(all_keys))
    assert len(keys) == predicted, \
        f"coset union {len(keys)} != {predicted}"
    gens = list(G0.generators)
    if s > 1:
        x0 = _cyclic_generator(D, p)
        gens.append(Mat2(A, A.scalar(x0), A.zero(), A.zero(), A.one()))
    return GroupSet(A, tabs, keys, gens)


def _cyclic_generator(D, p):
    s = len(D)
    for x in D:
        if x == 1:
            continue
        o, cur = 1, x
        while cur != 1:
            cur = (cur * x) % p
            o += 1
        if o == s:
            return x
    assert s == 1
    return 1


def ghat_membership(M, k):
    """det(M) is a scalar (diagonal F_p constant) lying in (F_p^x)^(k-1)."""
    A = M.parent
    det = M.det()
    if not A.is_unit(det):
        raise SingularMatrix("matrix is not invertible")
    c = det.coords[0][0]
    if det != A.scalar(c):
        return False
    p = A.p
    return pow(c, (p - 1) // gcd(k - 1, p - 1), p) == 1


def normal_closure(H, G):
    """Smallest normal subgroup of G containing H.

    H may be a GroupSet or an iterable of Mat2.  Strategy: keep a small
    generating list, close it, and conjugate the generators by G's
    generators (and inverses) until stable; conjugation by generators
    suffices because conjugation is an automorphism.
    """
    gens_H = list(H.generators) if isinstance(H, GroupSet) else list(H)
    tabs = G.tables
    for h in gens_H:
        if h.parent is not G.A:
            raise MixedParents("H lives over a different algebra")
        if h not in G:
            raise NotSubgroup("H generator outside G")
    gens = [h for h in gens_H if h != identity(G.A)]
    if not gens:
        keys = np.array([G.key_of(identity(G.A))], dtype=np.int64)
        return GroupSet(G.A, tabs, keys, [identity(G.A)])
    conjugators = []
    for g in G.generators:
        conjugators.append(g)
        conjugators.append(g.inv())
    S = _bfs_closure(tabs, _gen_key_list(tabs, gens))
    S_set = set(map(int, S))
    i = 0
    while i < len(conjugators):
        g = conjugators[i]
        new = []
        for w in gens:
            t = w.conj_by(g)
            if G.key_of(t) not in S_set:
                new.append(t)
        if new:
            gens.extend(new)
            S = _bfs_closure(tabs, _gen_key_list(tabs, gens))
            S_set = set(map(int, S))
            i = 0
        else:
            i += 1
    assert np.isin(S, G.keys, assume_unique=True).all(), \
        "closure escaped G"
    return GroupSet(G.A, tabs, S, gens)


# -- adjoint action on trace-zero matrices ----------------------------------

class Subspace:
    """An F_p-subspace of M2(A)^0 (trace-zero matrices), echelonized.

    A trace-zero matrix [[x, y], [z, -x]] is coordinatized by the flat
    vectors of (x, y, z), width 3*dim(A).
    """

    def __init__(self, A):
        self.A = A
        self.span = FpSpan(A.p, 3 * A.dim)

    @property
    def dim(self):
        return self.span.dim

    @property
    def ambient_dim(self):
        return 3 * self.A.dim

    def is_full(self):
        return self.dim == self.ambient_dim

    def coords(self, M):
        return M.a.flat() + M.b.flat() + M.c.flat()

    def contains(self, M):
        return self.span.contains(self.coords(M))

    def serialize_lines(self):
        A = self.A
        d = A.dim
        for row in self.span.rows:
            x = A.from_flat(row[:d])
            y = A.from_flat(row[d:2 * d])
            z = A.from_flat(row[2 * d:])
            yield " ".join(_el_str(e) for e in (x, y, z))


def adjoint_orbit_span(seed):
    """Smallest F_p-subspace of M2(A)^0 containing seed and stable under
    SL2(A)-conjugation; closed over the elementary generators."""
    A = seed.parent
    if not seed.trace().is_zero():
        raise NonzeroTrace("seed has nonzero trace")
    sub = Subspace(A)
    conjugators = []
    for b in A.basis():
        nb = A.neg(b)
        conjugators.extend([elementary_S(A, b), elementary_S(A, nb),
                            elementary_T(A, b), elementary_T(A, nb)])
    work = []
    if sub.span.insert(sub.coords(seed)):
        work.append(seed)
    while work:
        M = work.pop()
        for g in conjugators:
            N = M.conj_by(g)
            if sub.span.insert(sub.coords(N)):
                work.append(N)
    return sub


# -- matrices over Z/p^n and the level log ----------------------------------

class Mat2ZpN:
    """2x2 matrix over Z/p^n, entries reduced."""

    __slots__ = ("p", "n", "e")

    def __init__(self, p, n, entries):
        self.p = p
        self.n = n
        mod = p ** n
        a, b, c, d = entries
        self.e = (a % mod, b % mod, c % mod, d % mod)

    @property
    def modulus(self):
        return self.p ** self.n

    def __eq__(self, other):
        return (isinstance(other, Mat2ZpN) and self.p == other.p
                and self.n == other.n and self.e == other.e)

    def __hash__(self):
        return hash((self.p, self.n, self.e))

    def __mul__(self, other):
        assert self.p == other.p and self.n == other.n
        a, b, c, d = self.e
        e, f, g, h = other.e
        return Mat2ZpN(self.p, self.n, (a * e + b * g, a * f + b * h,
                                        c * e + d * g, c * f + d * h))

    def det(self):
        a, b, c, d = self.e
        return (a * d - b * c) % self.modulus

    def inv(self):
        mod = self.modulus
        a, b, c, d = self.e
        det = (a * d - b * c) % mod
        try:
            di = pow(det, -1, mod)
        except ValueError:
            raise SingularMatrix(f"det = {det} not invertible mod {mod}")
        return Mat2ZpN(self.p, self.n, (di * d, -di * b, -di * c, di * a))

    def __repr__(self):
        return f"Mat2ZpN(p={self.p}, n={self.n}, {self.e})"


def identity_zpn(p, n):
    return Mat2ZpN(p, n, (1, 0, 0, 1))


LogData = namedtuple("LogData", ["matrix", "trace"])


def mat_log(M):
    """Write M = I + p^(n-1) A mod p^n and return (A mod p, trace(A) mod p).

    Also checks the determinant identity
    det(M) = 1 + trace(A) p^(n-1) mod p^n, which pins the trace."""
    p, n = M.p, M.n
    if n < 2:
        raise PreconditionViolated("mat_log needs level n >= 2")
    pn1 = p ** (n - 1)
    a, b, c, d = M.e
    if (a - 1) % pn1 or b % pn1 or c % pn1 or (d - 1) % pn1:
        raise NotUnipotentAtLevel(f"matrix is not I mod {p}^{n - 1}")
    A = (((a - 1) // pn1) % p, (b // pn1) % p,
         (c // pn1) % p, ((d - 1) // pn1) % p)
    tr = (A[0] + A[3]) % p
    assert (M.det() - 1 - tr * pn1) % (p ** n) == 0, \
        "determinant-trace identity failed"
    return LogData(matrix=A, trace=tr)


def _mat2p_mul(x, y, p):
    a, b, c, d = x
    e, f, g, h = y
    return ((a * e + b * g) % p, (a * f + b * h) % p,
            (c * e + d * g) % p, (c * f + d * h) % p)


def _mat2p_inv(x, p):
    a, b, c, d = x
    det = (a * d - b * c) % p
    di = pow(det, -1, p)
    return ((di * d) % p, (-di * b) % p, (-di * c) % p, (di * a) % p)


def log_equivariance_check(sigma, g):
    """mat_log(g sigma g^-1) equals the mod-p conjugate of mat_log(sigma)."""
    lhs = mat_log(g * sigma * g.inv()).matrix
    p = sigma.p
    gbar = tuple(x % p for x in g.e)
    A = mat_log(sigma).matrix
    rhs = _mat2p_mul(_mat2p_mul(gbar, A, p), _mat2p_inv(gbar, p), p)
    return lhs == rhs


# -- the delta > 2s inequality ----------------------------------------------

def delta_vs_2s_check(p, k):
    """delta(p, k) > 2s with s = (p-1)/gcd(k-1, p-1); holds whenever
    neither (p+1)/2 nor p+1 divides k-1 (and p >= 5, k even)."""
    if not (is_prime(p) and p >= 5):
        raise PreconditionViolated(f"p = {p} must be a prime >= 5")
    if k < 2 or k % 2:
        raise PreconditionViolated(f"k = {k} must be even and >= 2")
    if (k - 1) % ((p + 1) // 2) == 0:
        raise PreconditionViolated(
            f"(p+1)/2 divides k-1 for (p, k) = ({p}, {k})")
    return delta(p, k) > 2 * s_value(p, k)


# -- curated subgroups of GL2(F_p) for the normal-closure suite -------------

def _nonsquare(p):
    return next(u for u in range(2, p) if pow(u, (p - 1) // 2, p) == p - 1)


def _primitive_root(p):
    for g in range(2, p):
        o, cur = 1, g
        while cur != 1:
            cur = (cur * g) % p
            o += 1
        if o == p - 1:
            return g
    raise AssertionError


def _fp2_generator(p, u):
    """Generator of F_{p^2}^x as a + b sqrt(u), by exhaustive order check."""
    target = p * p - 1
    for a in range(p):
        for b in range(1, p):
            o, cur = 1, (a, b)
            while cur != (1, 0):
                cur = ((cur[0] * a + u * cur[1] * b) % p,
                       (cur[0] * b + cur[1] * a) % p)
                o += 1
                if o > target:
                    break
            if o == target:
                return (a, b)
    raise AssertionError("no generator found")


def _fp2_pow(x, n, p, u):
    r = (1, 0)
    b = x
    while n:
        if n & 1:
            r = ((r[0] * b[0] + u * r[1] * b[1]) % p,
                 (r[0] * b[1] + r[1] * b[0]) % p)
        b = ((b[0] * b[0] + u * b[1] * b[1]) % p,
             (2 * b[0] * b[1]) % p)
        n >>= 1
    return r


def curated_subgroups(Ap, k):
    """Subgroups H of GL2(F_p) exercising the normal-closure hypotheses:
    |H| > 2s and det(H) = (F_p^x)^(k-1).  Returns (name, generator list,
    order) triples; families failing the hypotheses are filtered out."""
    p = Ap.p
    assert len(Ap.factors) == 1 and Ap.dim == 1, "expects the F_p algebra"
    s = s_value(p, k)
    D = det_power_subgroup(p, k)
    u = _nonsquare(p)
    g0 = _primitive_root(p)
    gg = _fp2_generator(p, u)

    def mat(a, b, c, d):
        return Mat2(Ap, Ap.scalar(a), Ap.scalar(b), Ap.scalar(c),
                    Ap.scalar(d))

    def cartan(x):
        a, b = x
        return mat(a, (u * b) % p, b, a)

    families = []
    # non-split Cartan, norm in D: cyclic of order (p+1)s
    t = (p * p - 1) // ((p + 1) * s)
    families.append(("nonsplit_cartan_norm", [cartan(_fp2_pow(gg, t, p, u))]))
    # split Cartan with determinant in D: order (p-1)s
    families.append(("split_cartan_det", [
        mat(g0, 0, 0, pow(g0, -1, p)),
        mat(g0, 0, 0, pow(g0, k - 2, p))]))
    # SL2(F_p) extended by determinants in D
    sl2ext = [mat(1, 1, 0, 1), mat(1, 0, 1, 1)]
    if s > 1:
        sl2ext.append(mat(pow(g0, k - 1, p), 0, 0, 1))
    families.append(("sl2_extended", sl2ext))
    # cyclic of order delta inside the non-split torus
    dd = gcd(p * p - 1, k - 1)
    families.append(("delta_cyclic", [cartan(_fp2_pow(gg, dd, p, u))]))
    # normalizer-of-split-Cartan elements with determinant in D
    families.append(("monomial_det", [
        mat(g0, 0, 0, pow(g0, -1, p)),
        mat(g0, 0, 0, pow(g0, k - 2, p)),
        mat(0, 1, p - 1, 0)]))

    tabs = AlgebraTables(Ap)
    out = []
    for name, gens in families:
        keys = _bfs_closure(tabs, _gen_key_list(tabs, gens))
        order = len(keys)
        dets = _subgroup_of_units(
            [int(m.det().coords[0][0]) for m in gens], p)
        if order > 2 * s and dets == D:
            out.append((name, gens, order))
    return out


def _subgroup_of_units(vals, p):
    cur = {1}
    frontier = {1}
    while frontier:
        new = {(x * v) % p for x in frontier for v in vals} - cur
        cur |= new
        frontier = new
    return sorted(cur)


def embed_diagonal(M, A):
    """Embed a matrix over F_p into A via the scalar diagonal map."""
    vals = [e.coords[0][0] for e in M.entries()]
    return Mat2(A, *(A.scalar(v) for v in vals))
