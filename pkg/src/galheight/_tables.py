"""Dense arithmetic tables for small product algebras.

Group enumeration encodes an algebra element by its id: the big-endian
base-p integer of the flattened coordinate vector, which coincides with
the element's position in the deterministic enumeration order.  A 2x2
matrix is then four ids, and a whole matrix packs into one int64 key.
The add/mul tables below turn batched matrix products into array gathers.
"""

import numpy as np

from .errors import TooLarge

TABLE_LIMIT = 2048


class AlgebraTables:
    def __init__(self, A):
        n = A.size
        if n > TABLE_LIMIT:
            raise TooLarge(f"|A| = {n} exceeds the dense-table limit "
                           f"{TABLE_LIMIT}")
        self.A = A
        self.n = n
        self.p = A.p
        els = list(A.elements())
        self.elements = els
        self._id = {el: i for i, el in enumerate(els)}
        # digit matrix: ids ascending are exactly lex-ordered flat coords
        digits = np.array([el.flat() for el in els], dtype=np.int64)
        p = A.p
        dim = A.dim
        weights = p ** np.arange(dim - 1, -1, -1, dtype=np.int64)
        ids = digits @ weights
        assert np.array_equal(ids, np.arange(n))
        # add: componentwise mod p, vectorized over all pairs
        summed = (digits[:, None, :] + digits[None, :, :]) % p
        self.add = (summed @ weights).astype(np.int32)
        # mul: exact products through the algebra (n^2 small by the guard)
        mul = np.empty((n, n), dtype=np.int32)
        for i, a in enumerate(els):
            row = [self._id[A.mul(a, b)] for b in els]
            mul[i] = row
        self.mul = mul
        self.neg = np.array([self._id[A.neg(a)] for a in els], dtype=np.int32)
        inv = np.full(n, -1, dtype=np.int32)
        for i, a in enumerate(els):
            if A.is_unit(a):
                inv[i] = self._id[A.inv(a)]
        self.inv = inv
        self.zero_id = 0
        self.one_id = self._id[A.one()]

    def id_of(self, el):
        return self._id[el]

    def el_of(self, i):
        return self.elements[i]

    def mat_key(self, m4):
        a, b, c, d = m4
        n = self.n
        return ((a * n + b) * n + c) * n + d

    def key_mat(self, key):
        n = self.n
        key, d = divmod(int(key), n)
        key, c = divmod(key, n)
        a, b = divmod(key, n)
        return (a, b, c, d)

    def keys_to_cols(self, keys):
        """Vectorized key -> four int32 id columns."""
        n = self.n
        keys = np.asarray(keys, dtype=np.int64)
        d = keys % n
        r = keys // n
        c = r % n
        r = r // n
        b = r % n
        a = r // n
        return (a.astype(np.int32), b.astype(np.int32),
                c.astype(np.int32), d.astype(np.int32))

    def mat_inv_cols(self, a, b, c, d):
        """Batched matrix inverse by adjugate; entries are id arrays.
        All dets must be units (caller guarantees group elements)."""
        mt, ad, ng, iv = self.mul, self.add, self.neg, self.inv
        det = ad[mt[a, d], ng[mt[b, c]]]
        di = iv[det]
        assert (di >= 0).all(), "singular matrix in group data"
        return (mt[di, d], mt[di, ng[b]], mt[di, ng[c]], mt[di, a])
