"""Row-reduced F_p spans used by the algebra and matrix-group modules."""


class FpSpan:
    """A subspace of F_p^width kept in reduced row echelon form.

    Rows are int tuples; the basis is canonical, so two spans are equal
    iff their row lists are equal.
    """

    def __init__(self, p, width):
        self.p = p
        self.width = width
        self.rows = []      # echelon rows, pivot columns strictly increasing
        self.pivots = []

    @property
    def dim(self):
        return len(self.rows)

    def _reduce(self, vec):
        p = self.p
        v = [x % p for x in vec]
        for row, pc in zip(self.rows, self.pivots):
            c = v[pc]
            if c:
                v = [(a - c * b) % p for a, b in zip(v, row)]
        return v

    def contains(self, vec):
        return not any(self._reduce(vec))

    def insert(self, vec):
        """Add vec to the span; returns True if the dimension grew."""
        v = self._reduce(vec)
        pc = next((i for i, x in enumerate(v) if x), None)
        if pc is None:
            return False
        inv = pow(v[pc], -1, self.p)
        v = [(inv * x) % self.p for x in v]
        # back-substitute into existing rows to keep reduced form
        for i, row in enumerate(self.rows):
            c = row[pc]
            if c:
                self.rows[i] = tuple((a - c * b) % self.p
                                     for a, b in zip(row, v))
        at = next((i for i, q in enumerate(self.pivots) if q > pc),
                  len(self.pivots))
        self.rows.insert(at, tuple(v))
        self.pivots.insert(at, pc)
        return True

    def __eq__(self, other):
        return (isinstance(other, FpSpan) and self.p == other.p
                and self.width == other.width and self.rows == other.rows)

    def __repr__(self):
        return f"FpSpan(p={self.p}, width={self.width}, dim={self.dim})"
