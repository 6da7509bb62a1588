"""Newform eigenvalue records and the four-part assumption checker.

A record carries exact Hecke eigenvalue coordinates in a stated basis of
the coefficient field; every test here is exact integer arithmetic on
those coordinates.  The surjectivity-flavored condition is reported as
graded evidence, never as a bare boolean true.
"""

from dataclasses import dataclass
from types import MappingProxyType

from .errors import InvariantViolation, MissingCoefficient, \
    PreconditionViolated
from .finite_algebra import is_prime
from .ramification import p3_holds

PROVEN_RIBET = "ProvenRibetCriterion"
HEURISTIC_RATIONAL = "HeuristicRationalField"
UNKNOWN = "Unknown"


@dataclass(frozen=True, eq=False)
class ModFormRecord:
    """Exact newform data: level, weight, coefficient field, and a_n
    coordinate vectors (constant-first integer tuples of length degK)."""

    label: str
    level: int
    weight: int
    field_poly: tuple
    degK: int
    field_disc: object
    hecke_ring_index: object
    an_coords: object
    basis: str = "power"

    def __post_init__(self):
        if self.level < 1:
            raise InvariantViolation(f"level {self.level} must be >= 1")
        if self.weight < 2 or self.weight % 2:
            raise InvariantViolation(
                f"weight {self.weight} must be even and >= 2")
        fp = tuple(int(c) for c in self.field_poly)
        object.__setattr__(self, "field_poly", fp)
        if len(fp) - 1 != self.degK or self.degK < 1:
            raise InvariantViolation(
                f"field_poly degree {len(fp) - 1} != degK {self.degK}")
        if self.basis == "power" and fp[-1] != 1:
            raise InvariantViolation("power basis needs a monic field_poly")
        coords = {}
        for n, vec in dict(self.an_coords).items():
            v = tuple(int(c) for c in vec)
            if len(v) != self.degK:
                raise InvariantViolation(
                    f"a_{n} has {len(v)} coordinates, expected {self.degK}")
            coords[int(n)] = v
        object.__setattr__(self, "an_coords", MappingProxyType(coords))
        one = (1,) + (0,) * (self.degK - 1)
        if coords.get(1) != one:
            raise InvariantViolation("a_1 must be 1 (normalized eigenform)")
        if self.hecke_ring_index is not None and self.hecke_ring_index < 1:
            raise InvariantViolation("hecke_ring_index must be >= 1")
        if self.field_disc is not None and self.field_disc == 0:
            raise InvariantViolation("field_disc must be nonzero if given")

    def a(self, n):
        try:
            return self.an_coords[n]
        except KeyError:
            raise MissingCoefficient(
                f"{self.label} has no a_{n}") from None

    def a_is_zero(self, n):
        return all(c == 0 for c in self.a(n))

    def __eq__(self, other):
        if not isinstance(other, ModFormRecord):
            return NotImplemented
        return (self.label == other.label and self.level == other.level
                and self.weight == other.weight
                and self.field_poly == other.field_poly
                and self.degK == other.degK
                and self.field_disc == other.field_disc
                and self.hecke_ring_index == other.hecke_ring_index
                and dict(self.an_coords) == dict(other.an_coords)
                and self.basis == other.basis)

    def __hash__(self):
        return hash((self.label, self.level, self.weight, self.field_poly))


def check_P0(N, p):
    """p does not divide the level."""
    if N < 1:
        raise PreconditionViolated(f"N = {N} must be >= 1")
    if not is_prime(p):
        raise PreconditionViolated(f"p = {p} must be prime")
    return N % p != 0


def check_P1(rec, p):
    """a_p = 0, exactly, on the stored coordinate vector."""
    return rec.a_is_zero(p)


@dataclass(frozen=True)
class P3Result:
    holds: bool
    sufficient_p_ge_2k1: bool

    def __bool__(self):
        return self.holds


def check_P3(p, k):
    """p >= 5 with p and (p+1)/2 both prime to k-1.  The companion flag
    records the simpler sufficient condition p >= 2k-1."""
    if not is_prime(p):
        raise PreconditionViolated(f"p = {p} must be prime")
    if k < 2:
        raise PreconditionViolated(f"k = {k} must be >= 2")
    return P3Result(holds=p3_holds(p, k),
                    sufficient_p_ge_2k1=(p >= 2 * k - 1))


def check_P2_evidence(rec, p):
    """Graded evidence for residual surjectivity.

    ProvenRibetCriterion: k = 2, prime level, p away from 6(N-1), the
    coefficient field unramified at p (tested as p not dividing the field
    discriminant), and the coefficient ring generated by the a_n (index 1).
    HeuristicRationalField: rational coefficient field with a_p = 0.
    Anything less decisive degrades to Unknown.
    """
    N, k = rec.level, rec.weight
    if (k == 2 and is_prime(N) and (6 * (N - 1)) % p != 0
            and rec.field_disc is not None and rec.field_disc % p != 0
            and rec.hecke_ring_index == 1):
        return PROVEN_RIBET
    if rec.degK == 1:
        try:
            if rec.a_is_zero(p):
                return HEURISTIC_RATIONAL
        except MissingCoefficient:
            pass
    return UNKNOWN


@dataclass(frozen=True)
class AssumptionReport:
    label: str
    p: int
    P0: bool
    P1: bool
    P3: bool
    P2_evidence: str
    eligible: bool
    overall: bool

    def to_json(self):
        return {
            "label": self.label, "p": self.p, "P0": self.P0,
            "P1": self.P1, "P3": self.P3,
            "P2_evidence": self.P2_evidence,
            "eligible": self.eligible, "overall": self.overall,
        }


def check_assumptions(rec, p):
    """Full report at one prime."""
    p0 = check_P0(rec.level, p)
    p1 = check_P1(rec, p)
    p3 = bool(check_P3(p, rec.weight))
    p2 = check_P2_evidence(rec, p)
    eligible = p0 and p1 and p3
    return AssumptionReport(
        label=rec.label, p=p, P0=p0, P1=p1, P3=p3, P2_evidence=p2,
        eligible=eligible, overall=eligible and p2 != UNKNOWN)


def _primes_upto(n):
    out = []
    for m in range(2, n + 1):
        if is_prime(m):
            out.append(m)
    return out


def scan(rec, p_max):
    """Reports for every prime p <= p_max with a_p = 0, sorted by p.
    The record must carry a_p for all primes up to p_max."""
    primes = _primes_upto(p_max)
    missing = [q for q in primes if q not in rec.an_coords]
    if missing:
        raise MissingCoefficient(
            f"{rec.label} lacks a_p for p in {missing}")
    return [check_assumptions(rec, q) for q in primes
            if rec.a_is_zero(q)]


def render_table(reports):
    """Fixed-width text table of assumption reports."""
    headers = ("label", "p", "P0", "P1", "P3", "P2_evidence", "eligible",
               "overall")
    rows = [headers]
    for r in reports:
        j = r.to_json()
        rows.append(tuple(str(j[h]) for h in headers))
    widths = [max(len(row[i]) for row in rows) for i in range(len(headers))]
    lines = []
    for idx, row in enumerate(rows):
        lines.append("  ".join(cell.ljust(w)
                               for cell, w in zip(row, widths)).rstrip())
        if idx == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines)
