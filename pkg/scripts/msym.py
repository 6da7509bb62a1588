#!/usr/bin/env python3
"""Offline modular-symbols engine used to build the package corpus.

Computes Hecke eigenvalue data for newforms on Gamma0(N) with trivial
character and even weight k >= 2, over Q, from scratch:

  * Manin symbols (X^a Y^(k-2-a), (u:v)) for (u:v) in P^1(Z/N),
  * two- and three-term relations (sigma/tau) quotient,
  * Hecke operators via Merel's determinant-n matrix family,
  * star involution, cuspidal subspace as im(T_t - (1 + t^(k-1))),
  * exact rational linear algebra for the weight-2 prime levels
    (eigenvectors over the coefficient field, certified by T_q v = a_q v),
  * mod-P pipeline at independent 31-bit primes with centered lifts for
    the larger higher-weight spaces (rational eigensystems only).

This is a development tool; nothing here is imported by the installed
package.  Run `python scripts/msym.py selftest` for the calibration
battery (dimension formulas, classical eigenvalues, Hecke identities).
"""

from __future__ import annotations

import argparse
import json
import os
import time
from fractions import Fraction
from math import comb, gcd

import numpy as np

# 31-bit primes; all mod-P kernels keep int64 intermediates below 2^63.
MODP_PRIMES = (2147483629, 2147483587, 2147483563, 2147483549)

MAX_N = 100


# ---------------------------------------------------------------------------
# small arithmetic helpers

def factorize(n):
    n = abs(n)
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def divisors(n):
    ds = [1]
    for p, e in factorize(n).items():
        ds = [d * p**i for d in ds for i in range(e + 1)]
    return sorted(ds)


def is_prime(n):
    return n >= 2 and factorize(n) == {n: 1}


def primes_upto(n):
    return [p for p in range(2, n + 1) if is_prime(p)]


CERT_PRIMES = primes_upto(97)


def euler_phi(n):
    out = n
    for p in factorize(n):
        out = out // p * (p - 1)
    return out


# ---------------------------------------------------------------------------
# dimension formulas for Gamma0(N), trivial character, even weight

def gamma0_index(N):
    mu = N
    for p in factorize(N):
        mu = mu // p * (p + 1)
    return mu


def nu2(N):
    if N % 4 == 0:
        return 0
    out = 1
    for p in factorize(N):
        if p != 2:
            out *= 1 + (1 if p % 4 == 1 else -1)
    return out


def nu3(N):
    if N % 9 == 0:
        return 0
    out = 1
    for p in factorize(N):
        if p != 3:
            out *= 1 + (1 if p % 3 == 1 else -1)
    return out


def nu_inf(N):
    return sum(euler_phi(gcd(d, N // d)) for d in divisors(N))


def genus(N):
    g = Fraction(1) + Fraction(gamma0_index(N), 12) - Fraction(nu2(N), 4) \
        - Fraction(nu3(N), 3) - Fraction(nu_inf(N), 2)
    assert g.denominator == 1
    return int(g)


def dim_cusp(N, k):
    assert k >= 2 and k % 2 == 0
    g = genus(N)
    if k == 2:
        return g
    return (k - 1) * (g - 1) + (k // 2 - 1) * nu_inf(N) \
        + nu2(N) * (k // 4) + nu3(N) * (k // 3)


def dim_eis(N, k):
    return nu_inf(N) - 1 if k == 2 else nu_inf(N)


def dim_msym(N, k):
    return 2 * dim_cusp(N, k) + dim_eis(N, k)


# ---------------------------------------------------------------------------
# P^1(Z/N)

def p1_normalize(N, u, v):
    """Lex-least representative of (u:v), or None if gcd(u, v, N) > 1."""
    if N == 1:
        return (0, 0)
    u %= N
    v %= N
    if gcd(gcd(u, v), N) != 1:
        return None
    if u == 0:
        return (0, 1)
    g = gcd(u, N)
    d = N // g
    s = pow((u // g) % d, -1, d)
    for _ in range(g + 1):
        if gcd(s, N) == 1:
            break
        s += d
    else:
        raise AssertionError("no unit lift")
    v2 = (s * v) % N
    if g > 1:
        best = v2
        for t in range(1, g):
            z = (1 + t * d) % N
            if gcd(z, N) == 1:
                w = (z * v2) % N
                if w < best:
                    best = w
        v2 = best
    return (g, v2)


class P1List:
    def __init__(self, N):
        self.N = N
        seen = {}
        reps = []
        for g in divisors(N):
            for v in range(N):
                t = p1_normalize(N, g % N, v)
                if t is not None and t not in seen:
                    seen[t] = len(reps)
                    reps.append(t)
        self.reps = reps
        self._idx = seen
        assert len(reps) == gamma0_index(N)

    def __len__(self):
        return len(self.reps)

    def index(self, u, v):
        t = p1_normalize(self.N, u, v)
        if t is None:
            return None
        return self._idx[t]


def _p1_brute_min(N, u, v):
    u %= N
    v %= N
    if N == 1:
        return (0, 0)
    if gcd(gcd(u, v), N) != 1:
        return None
    return min(((z * u) % N, (z * v) % N) for z in range(N) if gcd(z, N) == 1)


# ---------------------------------------------------------------------------
# signed union-find for the two-term relations

class SignedUF:
    def __init__(self, n):
        self.par = list(range(n))
        self.sgn = [1] * n
        self.dead = [False] * n

    def find(self, i):
        s = 1
        while self.par[i] != i:
            s *= self.sgn[i]
            i = self.par[i]
        return i, s

    def union(self, i, j, rel):
        # impose x_i = rel * x_j, rel in {+1, -1}
        ri, si = self.find(i)
        rj, sj = self.find(j)
        if ri == rj:
            if si != rel * sj:
                self.dead[ri] = True
            return
        self.par[rj] = ri
        self.sgn[rj] = si * rel * sj
        if self.dead[rj]:
            self.dead[ri] = True


# ---------------------------------------------------------------------------
# Merel's matrices of determinant n

_MEREL_CACHE = {}


def merel_matrices(n):
    """Integer matrices [a,b;c,d], det = n, a > b >= 0, d > c >= 0."""
    if n in _MEREL_CACHE:
        return _MEREL_CACHE[n]
    out = []
    for a in range(1, n + 1):
        for b in range(0, a):
            if b == 0:
                if n % a == 0:
                    d = n // a
                    for c in range(0, d):
                        out.append((a, 0, c, d))
            else:
                cmax = (n - 1) // (a - b)
                for c in range(0, cmax + 1):
                    num = n + b * c
                    if num % a == 0:
                        d = num // a
                        if d > c:
                            out.append((a, b, c, d))
    out = tuple(out)
    for (a, b, c, d) in out:
        assert a * d - b * c == n
    _MEREL_CACHE[n] = out
    return out


# ---------------------------------------------------------------------------
# Manin symbol space

SIGMA = (0, -1, 1, 0)
TAU = (0, -1, 1, -1)
TAU2 = (-1, 1, -1, 0)   # TAU squared; TAU^3 = identity
STAR = (-1, 0, 0, 1)


class MSpace:
    """Manin symbols of weight k for Gamma0(N), with the relation quotient."""

    def __init__(self, N, k):
        assert k >= 2 and k % 2 == 0
        self.N = N
        self.k = k
        self.w = k - 2
        self.p1 = P1List(N)
        self.nP1 = len(self.p1)
        self.nsym = (k - 1) * self.nP1
        self._expand_cache = {}
        self._build_relations()
        self._exact = None
        self._modp = {}

    # -- symbol algebra ----------------------------------------------------

    def _expand(self, h, a):
        """Coefficients of (A X + B Y)^a (C X + D Y)^(w-a) on X^t Y^(w-t)."""
        key = (h, a)
        hit = self._expand_cache.get(key)
        if hit is not None:
            return hit
        A, B, C, D = h
        w = self.w
        p = [comb(a, i) * A**i * B**(a - i) for i in range(a + 1)]
        q = [comb(w - a, m) * C**m * D**(w - a - m) for m in range(w - a + 1)]
        out = [0] * (w + 1)
        for i, pi in enumerate(p):
            if pi:
                for m, qm in enumerate(q):
                    if qm:
                        out[i + m] += pi * qm
        out = tuple(out)
        self._expand_cache[key] = out
        return out

    def symbol_image(self, s, h):
        """Right action of h on free symbol s; invalid P^1 images drop out."""
        a, j = divmod(s, self.nP1)
        u, v = self.p1.reps[j]
        A, B, C, D = h
        j2 = self.p1.index(u * A + v * C, u * B + v * D)
        if j2 is None:
            return ()
        co = self._expand(h, a)
        return tuple((t * self.nP1 + j2, c) for t, c in enumerate(co) if c)

    # -- relations ---------------------------------------------------------

    def _build_relations(self):
        n = self.nsym
        uf = SignedUF(n)
        for s in range(n):
            img = self.symbol_image(s, SIGMA)
            assert len(img) == 1
            t, c = img[0]
            assert abs(c) == 1
            uf.union(s, t, -c)
        self.uf = uf
        roots = [s for s in range(n) if uf.par[s] == s and not uf.dead[s]]
        self.cls_root = roots
        cls_index = {r: i for i, r in enumerate(roots)}
        self.ncls = len(roots)
        fold_cls = [-1] * n
        fold_sgn = [0] * n
        for s in range(n):
            r, sg = uf.find(s)
            if not uf.dead[r]:
                fold_cls[s] = cls_index[r]
                fold_sgn[s] = sg
        self.fold_cls = fold_cls
        self.fold_sgn = fold_sgn

        # tau rows, one generating P^1 point per tau-orbit
        visited = [False] * self.nP1
        rows = []
        for j in range(self.nP1):
            if visited[j]:
                continue
            u, v = self.p1.reps[j]
            orb = {j}
            uu, vv = u, v
            for _ in range(2):
                uu, vv = vv, -uu - vv     # projective action of TAU
                orb.add(self.p1.index(uu, vv))
            for jj in orb:
                visited[jj] = True
            for a in range(self.k - 1):
                s = a * self.nP1 + j
                terms = [(s, 1)]
                terms += list(self.symbol_image(s, TAU))
                terms += list(self.symbol_image(s, TAU2))
                row = {}
                for t, c in terms:
                    cl = fold_cls[t]
                    if cl >= 0:
                        row[cl] = row.get(cl, 0) + c * fold_sgn[t]
                row = {c: val for c, val in row.items() if val}
                if row:
                    rows.append(row)
        self.tau_rows = rows

    def fold_terms(self, terms):
        """Fold free-symbol terms through the two-term relations."""
        row = {}
        for t, c in terms:
            cl = self.fold_cls[t]
            if cl >= 0:
                val = row.get(cl, 0) + c * self.fold_sgn[t]
                if val:
                    row[cl] = val
                elif cl in row:
                    del row[cl]
        return row

    # -- exact quotient ----------------------------------------------------

    def quotient_exact(self):
        if self._exact is not None:
            return self._exact
        piv = {}          # pivot class -> reduced row (dict over classes)
        for row0 in self.tau_rows:
            row = {c: Fraction(v) for c, v in row0.items()}
            while row:
                hits = sorted(set(row) & set(piv))
                if not hits:
                    break
                c = hits[0]
                mult = row.pop(c)
                for cc, vv in piv[c].items():
                    val = row.get(cc, Fraction(0)) - mult * vv
                    if val:
                        row[cc] = val
                    elif cc in row:
                        del row[cc]
            if not row:
                continue
            pc = min(row)
            inv = row.pop(pc)
            row = {c: v / inv for c, v in row.items()}
            for other in piv.values():
                if pc in other:
                    mult = other.pop(pc)
                    for cc, vv in row.items():
                        val = other.get(cc, Fraction(0)) - mult * vv
                        if val:
                            other[cc] = val
                        elif cc in other:
                            del other[cc]
            piv[pc] = row
        basis = [c for c in range(self.ncls) if c not in piv]
        assert len(basis) == dim_msym(self.N, self.k), \
            (self.N, self.k, len(basis), dim_msym(self.N, self.k))
        self._exact = (piv, basis, {c: i for i, c in enumerate(basis)})
        return self._exact

    def reduce_exact(self, terms):
        """Quotient coordinates (Fraction list over basis) of symbol terms."""
        piv, basis, bpos = self.quotient_exact()
        vec = [Fraction(0)] * len(basis)
        for cl, co in self.fold_terms(terms).items():
            if cl in bpos:
                vec[bpos[cl]] += co
            else:
                for cc, vv in piv[cl].items():
                    vec[bpos[cc]] -= co * vv
        return vec

    def op_matrix_exact(self, mats):
        """Matrix (on quotient basis) of the sum of right actions by mats."""
        piv, basis, bpos = self.quotient_exact()
        cols = []
        for c in basis:
            s = self.cls_root[c]
            terms = []
            for h in mats:
                terms.extend(self.symbol_image(s, h))
            cols.append(self.reduce_exact(terms))
        nb = len(basis)
        return [[cols[j][i] for j in range(nb)] for i in range(nb)]

    def hecke_exact(self, n):
        return self.op_matrix_exact(merel_matrices(n))

    def star_exact(self):
        return self.op_matrix_exact((STAR,))

    # -- mod-P quotient ----------------------------------------------------

    def quotient_modp(self, P):
        if P in self._modp:
            return self._modp[P]
        rows = self.tau_rows
        A = np.zeros((len(rows), self.ncls), dtype=np.int64)
        for i, row in enumerate(rows):
            for c, v in row.items():
                A[i, c] = v % P
        R, pivcols = rref_modp(A, P)
        basis = [c for c in range(self.ncls) if c not in set(pivcols)]
        if len(basis) != dim_msym(self.N, self.k):
            raise RuntimeError(f"prime {P} drops rank at ({self.N},{self.k})")
        E = np.zeros((self.ncls, len(basis)), dtype=np.int64)
        barr = np.array(basis, dtype=np.intp)
        E[barr, np.arange(len(basis))] = 1
        if pivcols:
            E[np.array(pivcols, dtype=np.intp)] = (-R[:, barr]) % P
        self._modp[P] = (E, basis)
        return self._modp[P]

    def reduce_modp(self, terms, P):
        E, basis = self.quotient_modp(P)
        vec = np.zeros(len(basis), dtype=np.int64)
        for cl, co in self.fold_terms(terms).items():
            vec = (vec + (co % P) * E[cl]) % P
        return vec

    def op_matrix_modp(self, mats, P):
        E, basis = self.quotient_modp(P)
        nb = len(basis)
        M = np.zeros((nb, nb), dtype=np.int64)
        for j, c in enumerate(basis):
            s = self.cls_root[c]
            terms = []
            for h in mats:
                terms.extend(self.symbol_image(s, h))
            M[:, j] = self.reduce_modp(terms, P)
        return M

    def hecke_modp(self, n, P):
        return self.op_matrix_modp(merel_matrices(n), P)

    def star_modp(self, P):
        return self.op_matrix_modp((STAR,), P)


# ---------------------------------------------------------------------------
# dense linear algebra mod P (numpy int64, P < 2^31.5)

def matmul_modp(A, B, P):
    """(A @ B) % P without int64 overflow (splits B into 16-bit halves)."""
    A = np.asarray(A, dtype=np.int64) % P
    B = np.asarray(B, dtype=np.int64) % P
    Bh, Bl = np.divmod(B, 1 << 16)
    return ((A @ Bl) % P + (((A @ Bh) % P) << 16)) % P


def rref_modp(A, P):
    A = np.array(A, dtype=np.int64) % P
    m, n = A.shape
    pivcols = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            A[[r, pr]] = A[[pr, r]]
        A[r] = (A[r] * pow(int(A[r, c]), -1, P)) % P
        col = A[:, c].copy()
        col[r] = 0
        nzr = np.nonzero(col)[0]
        if nzr.size:
            A[nzr] = (A[nzr] - col[nzr, None] * A[r][None, :]) % P
        pivcols.append(c)
        r += 1
    return A[:r], pivcols


def nullspace_modp(A, P):
    """Columns spanning ker(A) mod P."""
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[1]
    R, piv = rref_modp(A, P)
    free = [c for c in range(n) if c not in set(piv)]
    out = np.zeros((n, len(free)), dtype=np.int64)
    farr = np.array(free, dtype=np.intp)
    out[farr, np.arange(len(free))] = 1
    if piv:
        out[np.array(piv, dtype=np.intp)] = (-R[:, farr]) % P
    return out


def colspace_modp(A, P):
    """(B, pivrows): echelonized basis of the column space, B[pivrows] = I."""
    A = np.asarray(A, dtype=np.int64)
    R, piv = rref_modp(A.T % P, P)
    return R.T.copy(), piv


def coords_modp(B, pivrows, V, P):
    C = V[np.array(pivrows, dtype=np.intp)] % P
    if not np.array_equal(matmul_modp(B, C, P), V % P):
        raise RuntimeError("vector not in subspace")
    return C


def restrict_modp(T, B, pivrows, P):
    return coords_modp(B, pivrows, matmul_modp(T, B, P), P)


def centered(a, P):
    a %= P
    return a - P if a > P // 2 else a


# ---------------------------------------------------------------------------
# dense exact linear algebra (Fractions, lists of lists)

def qeye(n):
    return [[Fraction(1) if i == j else Fraction(0) for j in range(n)]
            for i in range(n)]


def qmatmul(A, B):
    n, m, p = len(A), len(B), len(B[0])
    out = [[Fraction(0)] * p for _ in range(n)]
    for i in range(n):
        Ai = A[i]
        row = out[i]
        for kk in range(m):
            a = Ai[kk]
            if a:
                Bk = B[kk]
                for j in range(p):
                    if Bk[j]:
                        row[j] += a * Bk[j]
    return out


def qmatvec(A, v):
    return [sum((a * b for a, b in zip(row, v) if a and b), Fraction(0))
            for row in A]


def rref_exact(A):
    A = [row[:] for row in A]
    m = len(A)
    n = len(A[0]) if m else 0
    pivcols = []
    r = 0
    for c in range(n):
        if r == m:
            break
        pr = next((i for i in range(r, m) if A[i][c]), None)
        if pr is None:
            continue
        A[r], A[pr] = A[pr], A[r]
        inv = A[r][c]
        A[r] = [x / inv for x in A[r]]
        for i in range(m):
            if i != r and A[i][c]:
                mult = A[i][c]
                A[i] = [x - mult * y for x, y in zip(A[i], A[r])]
        pivcols.append(c)
        r += 1
    return A[:r], pivcols


def nullspace_exact(A):
    m = len(A)
    n = len(A[0]) if m else 0
    R, piv = rref_exact(A)
    free = [c for c in range(n) if c not in set(piv)]
    cols = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for rr, pc in enumerate(piv):
            v[pc] = -R[rr][fc]
        cols.append(v)
    return [[cols[j][i] for j in range(len(cols))] for i in range(n)]


def colspace_exact(A):
    At = [[A[i][j] for i in range(len(A))] for j in range(len(A[0]))]
    R, piv = rref_exact(At)
    B = [[R[j][i] for j in range(len(R))] for i in range(len(A))]
    return B, piv


def coords_exact(B, pivrows, V):
    C = [V[i][:] for i in pivrows]
    assert qmatmul(B, C) == V, "vector not in subspace"
    return C


def restrict_exact(T, B, pivrows):
    return coords_exact(B, pivrows, qmatmul(T, B))


def charpoly_exact(A):
    """det(xI - A) by Hessenberg reduction; constant-first coefficients."""
    n = len(A)
    if n == 0:
        return [Fraction(1)]
    H = [row[:] for row in A]
    for c in range(n - 2):
        pr = next((i for i in range(c + 1, n) if H[i][c]), None)
        if pr is None:
            continue
        if pr != c + 1:
            H[c + 1], H[pr] = H[pr], H[c + 1]
            for i in range(n):
                H[i][c + 1], H[i][pr] = H[i][pr], H[i][c + 1]
        for i in range(c + 2, n):
            if H[i][c]:
                t = H[i][c] / H[c + 1][c]
                H[i] = [x - t * y for x, y in zip(H[i], H[c + 1])]
                for r_ in range(n):
                    H[r_][c + 1] += t * H[r_][i]
    polys = [[Fraction(1)]]
    for m in range(1, n + 1):
        p = [Fraction(0)] + polys[m - 1][:]
        d = H[m - 1][m - 1]
        for i, co in enumerate(polys[m - 1]):
            p[i] -= d * co
        run = Fraction(1)
        for i in range(m - 1, 0, -1):
            run *= H[i][i - 1]
            if run == 0:
                break
            co = H[i - 1][m - 1] * run
            if co:
                for jj, cj in enumerate(polys[i - 1]):
                    p[jj] -= co * cj
        polys.append(p)
    return polys[n]


# ---------------------------------------------------------------------------
# polynomials over Q (constant-first lists) and number field scraps

def poly_trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def poly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return out


def poly_divmod(a, b):
    a = poly_trim(a)
    b = poly_trim(b)
    assert b
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    r = list(a)
    while len(r) >= len(b):
        co = r[-1] / b[-1]
        deg = len(r) - len(b)
        q[deg] = co
        for i in range(len(b)):
            r[deg + i] -= co * b[i]
        r = poly_trim(r)
    return q, r


def poly_xgcd(a, b):
    """Monic gcd over Q with Bezout coefficients: s a + t b = g."""
    r0, r1 = poly_trim(a), poly_trim(b)
    s0, s1 = [Fraction(1)], []
    t0, t1 = [], [Fraction(1)]
    while r1:
        q, r = poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, poly_sub(s0, poly_mul(q, s1))
        t0, t1 = t1, poly_sub(t0, poly_mul(q, t1))
    if r0:
        lc = r0[-1]
        r0 = [x / lc for x in r0]
        s0 = [x / lc for x in s0]
        t0 = [x / lc for x in t0]
    return r0, s0, t0


def poly_sub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return poly_trim([x - y for x, y in zip(a, b)])


class NF:
    """Q[x]/(g), g monic irreducible; elements are constant-first tuples."""

    def __init__(self, g):
        g = [Fraction(x) for x in g]
        assert g and g[-1] == 1
        self.g = g
        self.deg = len(g) - 1
        self._tp = None

    def el(self, coeffs):
        c = [Fraction(x) for x in coeffs]
        q, r = poly_divmod(c, self.g) if len(poly_trim(c)) > self.deg \
            else ([], poly_trim(c))
        r = list(r) + [Fraction(0)] * (self.deg - len(r))
        return tuple(r[:self.deg])

    def zero(self):
        return self.el([])

    def one(self):
        return self.el([1])

    def theta(self):
        return self.el([0, 1])

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(x - y for x, y in zip(a, b))

    def mul(self, a, b):
        _, r = poly_divmod(poly_mul(list(a), list(b)), self.g)
        r = list(r) + [Fraction(0)] * (self.deg - len(r))
        return tuple(r[:self.deg])

    def smul(self, s, a):
        return tuple(s * x for x in a)

    def is_zero(self, a):
        return all(x == 0 for x in a)

    def inv(self, a):
        assert not self.is_zero(a)
        g1, s, _ = poly_xgcd(list(a), self.g)
        assert len(g1) == 1 and g1[0] == 1, "element not invertible"
        return self.el(s)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def trace_powers(self):
        """Traces of theta^i, i = 0..deg-1, via Newton's identities."""
        n = self.deg
        es = [Fraction(0)] * (n + 1)
        for j in range(1, n + 1):
            es[j] = (-1) ** j * self.g[n - j]
        p = [Fraction(n)]
        for kk in range(1, n):
            s = Fraction(0)
            for j in range(1, kk):
                s += (-1) ** (j - 1) * es[j] * p[kk - j]
            s += (-1) ** (kk - 1) * es[kk] * kk
            p.append(s)
        return p

    def trace(self, a):
        if self._tp is None:
            self._tp = self.trace_powers()
        return sum(c * t for c, t in zip(a, self._tp))


# ---------------------------------------------------------------------------
# exact eigensystem extraction

def eigenvector_over_K(A, g):
    """Kernel vector of (theta*I - A) over K = Q[x]/(g); A rational, square."""
    K = NF(g)
    r = len(A)
    M = [[K.el([-A[i][j]]) for j in range(r)] for i in range(r)]
    for i in range(r):
        M[i][i] = K.add(M[i][i], K.theta())
    rowi = 0
    pivots = []
    for c in range(r):
        pr = next((i for i in range(rowi, r) if not K.is_zero(M[i][c])), None)
        if pr is None:
            continue
        M[rowi], M[pr] = M[pr], M[rowi]
        inv = K.inv(M[rowi][c])
        M[rowi] = [K.mul(inv, x) for x in M[rowi]]
        for i in range(r):
            if i != rowi and not K.is_zero(M[i][c]):
                co = M[i][c]
                M[i] = [K.sub(x, K.mul(co, y)) for x, y in zip(M[i], M[rowi])]
        pivots.append(c)
        rowi += 1
    free = [c for c in range(r) if c not in pivots]
    assert len(free) == 1, "kernel over K is not 1-dimensional"
    fc = free[0]
    v = [K.zero()] * r
    v[fc] = K.one()
    for rr, pc in enumerate(pivots):
        v[pc] = K.smul(Fraction(-1), M[rr][fc])
    return v, K


class KVec:
    """K-valued vector stored as a stack of rational component vectors."""

    def __init__(self, K, comps):
        self.K = K
        self.comps = comps

    @classmethod
    def from_K_list(cls, K, v):
        n = len(v)
        return cls(K, [[v[j][t] for j in range(n)] for t in range(K.deg)])

    def apply_rational(self, T):
        return KVec(self.K, [qmatvec(T, comp) for comp in self.comps])

    def lift(self, B):
        return KVec(self.K, [qmatvec(B, comp) for comp in self.comps])

    def entry(self, j):
        return self.K.el([self.comps[t][j] for t in range(self.K.deg)])

    def scalar_mul(self, a):
        K = self.K
        n = len(self.comps[0])
        out = [[Fraction(0)] * n for _ in range(K.deg)]
        red = []
        cur = K.el(a)
        for _ in range(K.deg):
            red.append(cur)
            cur = K.mul(cur, K.theta())
        for t in range(K.deg):
            at = red[t]
            comp = self.comps[t]
            for tt in range(K.deg):
                co = at[tt]
                if co:
                    row = out[tt]
                    for j in range(n):
                        if comp[j]:
                            row[j] += co * comp[j]
        return KVec(K, out)

    def eq(self, other):
        return self.comps == other.comps

    def nonzero_index(self):
        n = len(self.comps[0])
        for j in range(n):
            if any(self.comps[t][j] for t in range(self.K.deg)):
                return j
        return None


class Orbit:
    def __init__(self, field_poly, an, traces, generator_note=""):
        self.field_poly = field_poly    # constant-first monic ints
        self.an = an                    # n -> K element (Fraction tuple)
        self.traces = traces            # trace(a_n), n = 1..MAX_N
        self.generator_note = generator_note


def exact_level(N, k, verbose=True):
    t0 = time.time()
    sp = MSpace(N, k)
    _, basis, _ = sp.quotient_exact()
    if verbose:
        print(f"[{N}.{k}] exact quotient dim {len(basis)} "
              f"({time.time()-t0:.1f}s, {len(sp.tau_rows)} tau rows)")
    return sp


def exact_plus_cusp(sp):
    """Plus subspace and its cuspidal part (exact); returns the two bases."""
    N, k = sp.N, sp.k
    S = sp.star_exact()
    nb = len(S)
    assert qmatmul(S, S) == qeye(nb), "star is not an involution"
    SmI = [[S[i][j] - (1 if i == j else 0) for j in range(nb)]
           for i in range(nb)]
    Bplus = nullspace_exact(SmI)
    Bp, pivp = colspace_exact(Bplus)
    t = next(p for p in primes_upto(100) if N % p != 0)
    lam = 1 + t ** (k - 1)
    Tp = restrict_exact(sp.hecke_exact(t), Bp, pivp)
    r = len(Tp)
    D = [[Tp[i][j] - (lam if i == j else 0) for j in range(r)]
         for i in range(r)]
    Bc, pivc = colspace_exact(D)
    assert len(pivc) == dim_cusp(N, k), \
        f"cusp dim {len(pivc)} != {dim_cusp(N, k)}"
    return Bp, pivp, Bc, pivc


def exact_pieces(N, k, verbose=True):
    """Decompose the plus-cuspidal space into Hecke-invariant pieces.

    Returns (sp, lifts, TM, T_on_cusp, pieces) where each piece is
    (Bsub, pivsub, A, gco) with gco the irreducible minimal polynomial of
    the generating operator restricted to that piece.  No eigenvector is
    extracted here; that step is priced per piece by the caller."""
    import sympy

    sp = exact_level(N, k, verbose)
    Bp, pivp, Bc, pivc = exact_plus_cusp(sp)

    M_cache = {}

    def TM(q):
        if q not in M_cache:
            M_cache[q] = sp.hecke_exact(q)
        return M_cache[q]

    cusp_cache = {}

    def T_on_cusp(q):
        if q not in cusp_cache:
            Tq = restrict_exact(TM(q), Bp, pivp)
            cusp_cache[q] = restrict_exact(Tq, Bc, pivc)
        return cusp_cache[q]

    xsym = sympy.symbols("x")

    def factored_charpoly(A):
        cp = charpoly_exact(A)
        poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator)
                           for c in reversed(cp)], xsym)
        return [( [Fraction(str(c)) for c in reversed(g.all_coeffs())], m)
                for g, m in poly.factor_list()[1]]

    # candidate splitting operators on the cuspidal-plus space
    def op_list():
        for q in (2, 3, 5, 7, 11, 13, 17, 19):
            yield (f"T{q}", T_on_cusp(q))
        # generic fallback combinations
        for cmix in (1, 2, 3, 5):
            A2, A3 = T_on_cusp(2), T_on_cusp(3)
            yield (f"T2+{cmix}T3",
                   [[x + cmix * y for x, y in zip(r2, r3)]
                    for r2, r3 in zip(A2, A3)])

    def decompose(Bsub, pivsub):
        dim = len(pivsub)
        if dim == 0:
            return []
        for name, op in op_list():
            A = restrict_exact(op, Bsub, pivsub)
            fl = factored_charpoly(A)
            if len(fl) == 1:
                gco, mult = fl[0]
                if len(gco) - 1 == dim:
                    return [(Bsub, pivsub, A, gco)]
                continue   # does not see the splitting; try next operator
            pieces = []
            for gco, mult in fl:
                co = list(reversed(gco))     # leading first
                GA = [[co[0] * (1 if i == j else 0) for j in range(dim)]
                      for i in range(dim)]
                for cc in co[1:]:
                    GA = qmatmul(GA, A)
                    for i in range(dim):
                        GA[i][i] += cc
                GAm = GA
                for _ in range(mult - 1):
                    GAm = qmatmul(GAm, GA)
                Kv = nullspace_exact(GAm)
                assert Kv and Kv[0], "empty kernel for charpoly factor"
                Bk, pivk = colspace_exact(Kv)
                lifted = qmatmul(Bsub, Bk)
                Bl, pivl = colspace_exact(lifted)
                pieces.extend(decompose(Bl, pivl))
            return pieces
        raise RuntimeError("orbit decomposition did not terminate")

    dimS = dim_cusp(N, k)
    pieces = decompose(qeye(dimS), list(range(dimS)))
    assert sum(len(p[1]) for p in pieces) == dimS
    for (Bsub, pivsub, A, gco) in pieces:
        assert len(gco) - 1 == len(pivsub)
    return sp, (Bp, pivp, Bc, pivc), TM, T_on_cusp, pieces


def piece_traces(T_on_cusp, Bsub, pivsub, nmax=40):
    """Integer traces of T_n on one piece, n = 1..nmax (matrix traces)."""
    out = []
    for n in range(1, nmax + 1):
        An = restrict_exact(T_on_cusp(n), Bsub, pivsub)
        t = sum(An[i][i] for i in range(len(An)))
        assert t.denominator == 1
        out.append(int(t))
    return out


def exact_orbits(N, k, verbose=True):
    """All orbits with full certified eigensystems (small spaces only)."""
    sp, lifts, TM, _, pieces = exact_pieces(N, k, verbose)
    Bp, pivp, Bc, pivc = lifts
    orbits = [extract_orbit(sp, Bp, pivp, Bc, pivc, Bsub, pivsub, A, gco, TM)
              for (Bsub, pivsub, A, gco) in pieces]
    return sp, orbits


def extract_orbit(sp, Bp, pivp, Bc, pivc, Bsub, pivsub, A, gco, TM):
    """Certified eigensystem for one orbit, over K = Q[x]/(g)."""
    N, k = sp.N, sp.k
    assert all(c.denominator == 1 for c in gco), "nonintegral minpoly"
    vK, K = eigenvector_over_K(A, gco)
    v = KVec.from_K_list(K, vK)
    v = v.lift(Bsub).lift(Bc).lift(Bp)
    j0 = v.nonzero_index()
    v0 = v.entry(j0)
    an = {1: K.one()}
    for q in CERT_PRIMES:
        w = v.apply_rational(TM(q))
        aq = K.div(w.entry(j0), v0)
        assert w.eq(v.scalar_mul(aq)), f"certificate failed at q={q}"
        an[q] = aq
    fill_an(K, an, N, k)
    orb = Orbit([int(c) for c in gco], an, traces_of(K, an))
    return rebase_orbit(orb)


def traces_of(K, an):
    traces = []
    for n in range(1, MAX_N + 1):
        t = K.trace(an[n])
        assert t.denominator == 1
        traces.append(int(t))
    return traces


def fill_an(K, an, N, k):
    """Complete an[] for n <= MAX_N from primes via Hecke recurrences."""
    for p in CERT_PRIMES:
        pe = p * p
        while pe <= MAX_N:
            r = pe // p
            if N % p == 0:
                an[pe] = K.mul(an[p], an[r])
            else:
                back = K.smul(Fraction(p ** (k - 1)), an[r // p])
                an[pe] = K.sub(K.mul(an[p], an[r]), back)
            pe *= p
    for n in range(2, MAX_N + 1):
        if n in an:
            continue
        acc = K.one()
        for p, e in factorize(n).items():
            acc = K.mul(acc, an[p ** e])
        an[n] = acc


def rebase_orbit(orb):
    """Re-express the orbit in the power basis of a_q for the first prime q
    whose a_q generates K (preferring squarefree minpoly discriminant)."""
    deg = len(orb.field_poly) - 1
    if deg == 1:
        # normalize rational orbits to field_poly = x
        K1 = NF([Fraction(0), Fraction(1)])
        root = Fraction(-orb.field_poly[0], orb.field_poly[1]) \
            if orb.field_poly[1] else Fraction(0)
        # a_n are constants in K; nothing depends on theta
        an = {n: (v[0],) for n, v in orb.an.items()}
        return Orbit([0, 1], an, orb.traces, "rational")
    K = NF([Fraction(c) for c in orb.field_poly])
    candidates = []
    for q in CERT_PRIMES:
        a = K.el(orb.an[q])
        # powers of a as rows; generator iff nonsingular
        rows = []
        cur = K.one()
        for _ in range(deg):
            rows.append(list(cur))
            cur = K.mul(cur, a)
        Bmat = [[rows[i][j] for j in range(deg)] for i in range(deg)]
        R, piv = rref_exact(Bmat)
        if len(piv) != deg:
            continue
        # minpoly of a = charpoly of multiplication-by-a
        mul_cols = []
        for t in range(deg):
            basis_el = tuple(Fraction(1) if i == t else Fraction(0)
                             for i in range(deg))
            mul_cols.append(list(K.mul(a, basis_el)))
        mulmat = [[mul_cols[j][i] for j in range(deg)] for i in range(deg)]
        cp = charpoly_exact(mulmat)
        assert all(c.denominator == 1 for c in cp)
        candidates.append((q, a, Bmat, [int(c) for c in cp]))
        if squarefree_disc(cp):
            break
    assert candidates, "no single a_q generates the coefficient field"
    q, a, Bmat, gnew = candidates[-1]
    if gnew == orb.field_poly and all(
            a == K.theta() for _ in (1,)) and a == K.theta():
        return Orbit(orb.field_poly, orb.an, orb.traces, f"theta = a_{q}")
    # change of basis: coords in powers of a solve  (Bmat^T) y = coords(x)
    Bt = [[Bmat[j][i] for j in range(deg)] for i in range(deg)]
    aug = [row[:] + [Fraction(0)] * deg for row in Bt]
    for i in range(deg):
        aug[i][deg + i] = Fraction(1)
    R, piv = rref_exact(aug)
    assert piv == list(range(deg))
    Binv = [row[deg:] for row in R]
    an2 = {n: tuple(qmatvec(Binv, list(v))) for n, v in orb.an.items()}
    K2 = NF([Fraction(c) for c in gnew])
    # sanity: a_q itself must become theta, traces must be preserved
    assert an2[q] == K2.theta()
    for n in (2, 3, 5, 6, 10):
        assert K2.trace(an2[n]) == orb.traces[n - 1]
    return Orbit(gnew, an2, orb.traces, f"theta = a_{q}")


def squarefree_disc(cp):
    d = poly_disc([int(c) for c in cp])
    return d != 0 and all(e == 1 for e in factorize(d).values())


def poly_disc(co):
    import sympy
    x = sympy.symbols("x")
    return int(sympy.discriminant(sympy.Poly(list(reversed(co)), x).as_expr(), x))


# ---------------------------------------------------------------------------
# mod-P pipeline for rational targets in big spaces

def modp_rational_systems(sp, P, zero_at, verbose=True):
    """All integer eigensystems in the plus-cuspidal space with a_q = 0 for
    q in zero_at; values are residues mod P (caller lifts/centers them)."""
    N, k = sp.N, sp.k
    t0 = time.time()
    S = sp.star_modp(P)
    nb = S.shape[0]
    assert np.array_equal(matmul_modp(S, S, P), np.eye(nb, dtype=np.int64))
    Bplus = nullspace_modp((S - np.eye(nb, dtype=np.int64)) % P, P)
    Bp, pivp = colspace_modp(Bplus, P)
    t = next(p for p in primes_upto(100) if N % p != 0)
    lam = (1 + t ** (k - 1)) % P
    Tp = restrict_modp(sp.hecke_modp(t, P), Bp, pivp, P)
    D = (Tp - lam * np.eye(Tp.shape[0], dtype=np.int64)) % P
    Bc, pivc = colspace_modp(D, P)
    dimS = dim_cusp(N, k)
    assert len(pivc) == dimS, f"cusp dim {len(pivc)} != {dimS}"
    if verbose:
        print(f"  [mod {P}] star/cusp done ({time.time()-t0:.1f}s); "
              f"cusp+ dim {dimS}")

    M_cache = {}

    def TMq(q):
        if q not in M_cache:
            M_cache[q] = sp.hecke_modp(q, P)
        return M_cache[q]

    cusp_cache = {}

    def T_on_cusp(q):
        if q not in cusp_cache:
            Tq = restrict_modp(TMq(q), Bp, pivp, P)
            cusp_cache[q] = restrict_modp(Tq, Bc, pivc, P)
        return cusp_cache[q]

    Kb = np.eye(dimS, dtype=np.int64)
    pivk = list(range(dimS))
    for q in zero_at:
        A = restrict_modp(T_on_cusp(q), Kb, pivk, P)
        ns = nullspace_modp(A, P)
        if ns.shape[1] == 0:
            return []
        Kb, pivk = colspace_modp(matmul_modp(Kb, ns, P), P)
    if verbose:
        print(f"  [mod {P}] joint kernel dim {len(pivk)} at "
              f"zero_at={list(zero_at)} ({time.time()-t0:.1f}s)")

    def split(B, piv, ops):
        if len(piv) == 1 or not ops:
            return [(B, piv)]
        q = ops[0]
        A = restrict_modp(T_on_cusp(q), B, piv, P)
        r = A.shape[0]
        bound = int(2 * q ** ((sp.k - 1) / 2)) + 1
        out = []
        for tval in range(-bound, bound + 1):
            M = (A - tval * np.eye(r, dtype=np.int64)) % P
            ns = nullspace_modp(M, P)
            if ns.shape[1]:
                B2, piv2 = colspace_modp(matmul_modp(B, ns, P), P)
                out.extend(split(B2, piv2, ops[1:]))
        return out

    split_ops = [q for q in (2, 3, 5, 7, 13, 17, 19, 23, 29)
                 if q not in zero_at]
    comps = split(Kb, pivk, split_ops)
    systems = []
    for B, piv in comps:
        if len(piv) != 1:
            continue    # irrational leftovers; rational systems split fully
        vc = B[:, 0] % P
        vplus = matmul_modp(Bc, vc, P)
        vM = matmul_modp(Bp, vplus, P)
        j0 = int(np.nonzero(vM)[0][0])
        inv0 = pow(int(vM[j0]), -1, P)
        sysvals = {}
        ok = True
        for q in CERT_PRIMES:
            w = matmul_modp(TMq(q), vM, P)
            aq = (int(w[j0]) * inv0) % P
            if not np.array_equal((aq * vM) % P, w):
                ok = False
                break
            sysvals[q] = aq
        if ok:
            systems.append(sysvals)
    if verbose:
        print(f"  [mod {P}] {len(systems)} rational candidate system(s) "
              f"({time.time()-t0:.1f}s)")
    return systems


# ---------------------------------------------------------------------------
# targets and fixture output

TARGETS = [
    # label, N, k, pinned-zero primes, expected deg(K), expected field disc
    ("73.2.a.c", 73, 2, (59,), 2, 13),
    ("167.2.a.a", 167, 2, (11,), 2, 5),
    ("383.2.a.a", 383, 2, (13,), 2, 5),
    ("151.2.a.a", 151, 2, (41,), 3, None),
    ("186.4.a.a", 186, 4, (11,), 1, 1),
    ("210.4.a.e", 210, 4, (11, 23), 1, 1),
    ("1265.4.a.c", 1265, 4, (53,), 1, 1),
    ("390.6.a.c", 390, 6, (7,), 1, 1),
    ("66.8.a.a", 66, 8, (5,), 1, 1),
]


def hecke_lattice_index(gco, an):
    """([O_K : Z[{a_n}]], disc K) when disc(g) is squarefree, else (None, None).

    The computed index is exact for the ring generated by a_n, n <= MAX_N;
    since the full Hecke ring contains it, index 1 certifies index 1."""
    deg = len(gco) - 1
    disc_g = poly_disc(gco)
    if not (disc_g != 0 and all(e == 1 for e in factorize(disc_g).values())):
        return None, None
    den = 1
    for v in an.values():
        for c in v:
            den = den * c.denominator // gcd(den, c.denominator)
    rows = [[den] + [0] * (deg - 1)]
    for v in an.values():
        rows.append([int(c * den) for c in v])
    det = integer_row_lattice_det(rows, deg)
    if det == 0:
        return None, None
    idx = Fraction(det, den ** deg)
    assert idx.denominator == 1 and idx > 0
    return int(idx), disc_g


def integer_row_lattice_det(rows, deg):
    """Covolume of the integer row span inside Z^deg (0 if rank < deg)."""
    work = {}
    for v in rows:
        v = list(v)
        for c in range(deg):
            if v[c] == 0:
                continue
            if c in work:
                b = work[c]
                g, x, y = ext_gcd(b[c], v[c])
                newb = [x * bb + y * vv for bb, vv in zip(b, v)]
                newv = [(b[c] // g) * vv - (v[c] // g) * bb
                        for bb, vv in zip(b, v)]
                work[c] = newb
                v = newv
            else:
                if v[c] < 0:
                    v = [-x for x in v]
                work[c] = v
                break
    if len(work) < deg:
        return 0
    det = 1
    for c in range(deg):
        det *= abs(work[c][c])
    return det


def ext_gcd(a, b):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def write_fixture(label, N, k, orb, outdir, disc_expected=None,
                  order_note="", prime_trail=None):
    deg = len(orb.field_poly) - 1
    if deg == 1:
        idx, disc_K = 1, 1
    else:
        idx, disc_K = hecke_lattice_index(orb.field_poly, orb.an)
    if disc_expected is not None and disc_K is not None:
        assert disc_K == disc_expected, (label, disc_K, disc_expected)
    for p in CERT_PRIMES:
        tr = orb.traces[p - 1]
        assert abs(tr) <= 2 * deg * p ** ((k - 1) / 2) + 1e-9, (label, p, tr)
    allint = all(c.denominator == 1 for v in orb.an.values() for c in v)
    an_out = {}
    for n in range(1, MAX_N + 1):
        v = orb.an[n]
        if allint:
            an_out[str(n)] = [int(c) for c in v]
        else:
            an_out[str(n)] = [str(c) for c in v]
    note = ("computed offline with scripts/msym.py (Manin symbols, Merel "
            "Hecke operators)")
    if prime_trail:
        note += ("; mod-P pipeline, centered lifts agreed at primes "
                 f"{list(prime_trail)}")
    else:
        note += ("; exact rational pipeline, eigenvector certified over the "
                 "coefficient field at every prime up to 97")
    if orb.generator_note:
        note += f"; {orb.generator_note}"
    if order_note:
        note += f"; {order_note}"
    rec = {
        "schema_version": 1,
        "record": {
            "label": label,
            "level": N,
            "weight": k,
            "field_poly": orb.field_poly,
            "degK": deg,
            "field_disc": disc_K,
            "hecke_ring_index": idx,
            "basis": "power",
            "an_coords": an_out,
        },
        "provenance": {
            "source": "manual",
            "retrieval_date": time.strftime("%Y-%m-%d"),
            "note": note,
        },
    }
    os.makedirs(outdir, exist_ok=True)
    path = os.path.join(outdir, f"{label}.json")
    with open(path, "w") as f:
        json.dump(rec, f, indent=1)
        f.write("\n")
    print(f"  wrote {path}")


def run_exact_target(label, N, k, zeros, deg_expected, disc_expected, outdir):
    sp, lifts, TM, T_on_cusp, pieces = exact_pieces(N, k)
    Bp, pivp, Bc, pivc = lifts
    trs = [piece_traces(T_on_cusp, Bsub, pivsub)
           for (Bsub, pivsub, _, _) in pieces]
    order = sorted(range(len(pieces)), key=lambda i: trs[i])
    letters = {idx: chr(ord("a") + pos) for pos, idx in enumerate(order)}
    match = []
    for i, (Bsub, pivsub, A, gco) in enumerate(pieces):
        if len(pivsub) != deg_expected:
            continue
        # a_q = 0 on the orbit iff T_q restricts to the zero matrix
        if all(not any(any(row) for row in
                       restrict_exact(T_on_cusp(q), Bsub, pivsub))
               for q in zeros):
            match.append(i)
    assert len(match) == 1, f"{label}: {len(match)} pieces match the pins"
    i = match[0]
    orb = extract_orbit(sp, Bp, pivp, Bc, pivc, *pieces[i], TM)
    assert orb.traces[:len(trs[i])] == trs[i], "trace cross-check failed"
    letter = label.split(".")[-1]
    if letters[i] == letter:
        order_note = "orbit position under trace-lex ordering matches label"
        print(f"  {label}: trace-lex position '{letters[i]}' matches")
    else:
        order_note = (f"orbit pinned by invariants; trace-lex position "
                      f"'{letters[i]}' differs from label letter")
        print(f"  WARNING {label}: trace-lex position '{letters[i]}' != "
              f"'{letter}'")
    dims = sorted(len(pv) for (_, pv, _, _) in pieces)
    print(f"  orbit dims: {dims}")
    write_fixture(label, N, k, orb, outdir,
                  disc_expected=disc_expected, order_note=order_note)


def run_modp_target(label, N, k, zeros, outdir, nprimes=3):
    runs = []
    used = []
    for P in MODP_PRIMES:
        if len(runs) == nprimes:
            break
        try:
            sp = MSpace(N, k)
            t0 = time.time()
            E, basis = sp.quotient_modp(P)
            print(f"  [mod {P}] quotient dim {len(basis)} "
                  f"({time.time()-t0:.1f}s)")
            systems = modp_rational_systems(sp, P, zeros)
        except RuntimeError as e:
            print(f"  skipping prime {P}: {e}")
            continue
        lifted = []
        for sysvals in systems:
            vals = {}
            okwin = True
            for q, aq in sysvals.items():
                c = centered(aq, P)
                if abs(c) > 2 * q ** ((k - 1) / 2) + 0.5:
                    okwin = False
                    break
                vals[q] = c
            if okwin and all(vals.get(q, 1) == 0 for q in zeros):
                lifted.append(tuple(sorted(vals.items())))
        runs.append(sorted(lifted))
        used.append(P)
    assert len(runs) == nprimes, "not enough good primes"
    for other in runs[1:]:
        assert other == runs[0], f"{label}: prime runs disagree"
    assert len(runs[0]) == 1, \
        f"{label}: {len(runs[0])} rational systems match the pins"
    ap = dict(runs[0][0])
    for q in factorize(N):
        assert abs(ap[q]) == q ** (k // 2 - 1), \
            (label, q, ap[q], "Atkin-Lehner newform certificate")
    anq = {1: 1}
    for p in CERT_PRIMES:
        anq[p] = ap[p]
    for p in CERT_PRIMES:
        pe = p * p
        while pe <= MAX_N:
            r = pe // p
            if N % p == 0:
                anq[pe] = anq[p] * anq[r]
            else:
                anq[pe] = anq[p] * anq[r] - p ** (k - 1) * anq[r // p]
            pe *= p
    for n in range(2, MAX_N + 1):
        if n not in anq:
            acc = 1
            for p, e in factorize(n).items():
                acc *= anq[p ** e]
            anq[n] = acc
    orb = Orbit([0, 1], {n: (Fraction(v),) for n, v in anq.items()},
                [anq[n] for n in range(1, MAX_N + 1)], "rational")
    write_fixture(label, N, k, orb, outdir, prime_trail=used)


# ---------------------------------------------------------------------------
# calibration battery

def selftest():
    t0 = time.time()
    for N in list(range(1, 41)) + [60, 72]:
        for u in range(N):
            for v in range(N):
                assert p1_normalize(N, u, v) == _p1_brute_min(N, u, v), \
                    (N, u, v)
    print(f"p1_normalize brute-force agreement OK ({time.time()-t0:.1f}s)")

    assert set(merel_matrices(2)) == {(1, 0, 0, 2), (2, 0, 0, 1),
                                      (2, 1, 0, 1), (1, 0, 1, 2)}

    assert genus(11) == 1 and genus(37) == 2 and genus(73) == 5
    assert genus(167) == 14 and genus(383) == 32 and genus(151) == 12
    assert dim_cusp(1, 12) == 1 and dim_cusp(1, 16) == 1
    assert dim_cusp(186, 4) == 92 and dim_cusp(210, 4) == 136
    assert dim_cusp(1265, 4) == 428 and dim_cusp(390, 6) == 412
    assert dim_cusp(66, 8) == 80
    print("dimension formulas OK")

    for (N, k) in [(1, 12), (1, 16), (2, 8), (3, 6), (5, 4), (6, 4), (7, 4),
                   (9, 4), (10, 4), (11, 2), (14, 2), (15, 2), (17, 2),
                   (24, 2), (37, 2), (4, 6), (13, 4)]:
        sp = MSpace(N, k)
        _, basis, _ = sp.quotient_exact()
        assert len(basis) == dim_msym(N, k), (N, k, len(basis))
    print("exact quotient dims match 2*dim S + dim Eis on the grid")

    P = MODP_PRIMES[0]
    for (N, k) in [(11, 2), (1, 12), (7, 4)]:
        sp = MSpace(N, k)
        _, basis, _ = sp.quotient_exact()
        E, basisP = sp.quotient_modp(P)
        assert basis == basisP
        Te = sp.hecke_exact(2)
        Tp = sp.hecke_modp(2, P)
        for i in range(len(basis)):
            for j in range(len(basis)):
                x = Te[i][j]
                assert (x.numerator * pow(x.denominator, -1, P)) % P \
                    == Tp[i][j] % P, (N, k, i, j)
    print("mod-P quotient and Hecke agree with exact reduction")

    for (N, k) in [(11, 2), (5, 4)]:
        sp = MSpace(N, k)
        T2, T3 = sp.hecke_exact(2), sp.hecke_exact(3)
        T6 = sp.hecke_exact(6)
        assert qmatmul(T2, T3) == T6, (N, k, "T2*T3 != T6")
        assert qmatmul(T3, T2) == T6, (N, k)
        T4 = sp.hecke_exact(4)
        T2sq = qmatmul(T2, T2)
        for i in range(len(T2)):
            T2sq[i][i] -= 2 ** (k - 1)
        assert T2sq == T4, (N, k, "T4 != T2^2 - 2^(k-1)")
    print("Hecke identities T2*T3 = T6 and T4 = T2^2 - 2^(k-1) OK")

    sp, orbits = exact_orbits(11, 2, verbose=False)
    assert len(orbits) == 1 and len(orbits[0].field_poly) == 2
    tr = orbits[0].traces
    want_11a = {2: -2, 3: -1, 4: 2, 5: 1, 6: 2, 7: -2, 9: -2, 10: -2,
                11: 1, 13: 4, 14: 4, 15: -1, 16: -4, 17: -2, 19: 0, 25: -4}
    for n, a in want_11a.items():
        assert tr[n - 1] == a, (n, tr[n - 1], a)
    print("level 11 weight 2: eigenvalues match (incl. U_11 = 1)")

    sp, orbits = exact_orbits(1, 12, verbose=False)
    assert len(orbits) == 1
    tr = orbits[0].traces
    want_tau = {2: -24, 3: 252, 4: -1472, 5: 4830, 6: -6048, 7: -16744,
                8: 84480, 9: -113643, 10: -115920, 25: -25499225}
    for n, a in want_tau.items():
        assert tr[n - 1] == a, (n, tr[n - 1], a)
    print("level 1 weight 12: Ramanujan tau values match")

    sp, orbits = exact_orbits(1, 16, verbose=False)
    assert len(orbits) == 1
    tr = orbits[0].traces
    assert tr[1] == 216 and tr[2] == -3348, tr[:3]
    print("level 1 weight 16: a_2 = 216, a_3 = -3348 match")

    sp, orbits = exact_orbits(37, 2, verbose=False)
    assert len(orbits) == 2
    sys_ = sorted((o.traces[1], o.traces[2]) for o in orbits)
    assert sys_ == [(-2, -3), (0, 1)], sys_
    print("level 37 weight 2: orbits (a2,a3) = (-2,-3), (0,1) match")

    sp, orbits = exact_orbits(14, 2, verbose=False)
    assert len(orbits) == 1
    tr = orbits[0].traces
    assert abs(tr[1]) == 1 and abs(tr[6]) == 1, (tr[1], tr[6])
    print("level 14 weight 2: |U_2| = |U_7| = 1 (newform certificate shape)")

    spP = MSpace(11, 2)
    systems = modp_rational_systems(spP, P, zero_at=(19,), verbose=False)
    assert len(systems) == 1
    vals = {q: centered(a, P) for q, a in systems[0].items()}
    assert vals[2] == -2 and vals[3] == -1 and vals[7] == -2 and vals[11] == 1
    print("mod-P pipeline reproduces level 11 (pinned at a_19 = 0)")

    print(f"selftest passed ({time.time()-t0:.1f}s)")


# ---------------------------------------------------------------------------

def main():
    ap = argparse.ArgumentParser(description="modular symbols fixture engine")
    sub = ap.add_subparsers(dest="cmd", required=True)
    sub.add_parser("selftest")
    tp = sub.add_parser("target")
    tp.add_argument("--label", required=True)
    tp.add_argument("--out", default="src/galheight/corpus")
    allp = sub.add_parser("alltargets")
    allp.add_argument("--out", default="src/galheight/corpus")
    allp.add_argument("--only-weight2", action="store_true")
    allp.add_argument("--only-modp", action="store_true")
    args = ap.parse_args()

    if args.cmd == "selftest":
        selftest()
        return

    wanted = getattr(args, "label", None)
    for (label, N, k, zeros, deg, disc) in TARGETS:
        if wanted is not None and label != wanted:
            continue
        if args.cmd == "alltargets":
            if args.only_weight2 and k != 2:
                continue
            if args.only_modp and k == 2:
                continue
        t0 = time.time()
        print(f"== {label} (N={N}, k={k}, zeros={list(zeros)}) ==")
        if k == 2:
            run_exact_target(label, N, k, zeros, deg, disc, args.out)
        else:
            run_modp_target(label, N, k, zeros, args.out)
        print(f"== {label} done in {time.time()-t0:.1f}s ==")


if __name__ == "__main__":
    main()
