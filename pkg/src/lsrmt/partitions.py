"""Partitions as tuples: diagrams, ribbons, overlaps and staircase walks.

A partition is a weakly decreasing tuple of non-negative integers; the
canonical form drops trailing zeros and all functions here return canonical
tuples.  Points use matrix-free coordinates (i, j) where (i, j) lies in the
diagram iff i <= lambda_j; by convention points with a zero coordinate belong
to every partition and the 0-th part is infinite.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial


Partition = tuple[int, ...]


def canonical(parts) -> Partition:
    """Canonical form: tuple without trailing zeros."""
    p = tuple(int(x) for x in parts)
    while p and p[-1] == 0:
        p = p[:-1]
    if any(x < 0 for x in p):
        raise ValueError(f"negative part in {parts}")
    if any(p[i] < p[i + 1] for i in range(len(p) - 1)):
        raise ValueError(f"parts not weakly decreasing: {parts}")
    return p


def size(lam) -> int:
    return sum(lam)


def length(lam) -> int:
    return len(canonical(lam))


def part(lam, j: int) -> int:
    """j-th part, 1-based; 0 for j beyond the length."""
    if j < 1:
        raise ValueError("parts are 1-based")
    return lam[j - 1] if j <= len(lam) else 0


def contains_point(lam, i: int, j: int) -> bool:
    """(i, j) in lambda, with the zero-coordinate and lambda_0 conventions."""
    if i <= 0 or j <= 0:
        return True
    return i <= part(lam, j)


def contains(lam, mu) -> bool:
    """Diagram containment mu subset-of lam."""
    mu = canonical(mu)
    return all(part(lam, j + 1) >= mu[j] for j in range(len(mu)))


def conjugate(lam) -> Partition:
    """Transpose of the Ferrers diagram."""
    lam = canonical(lam)
    if not lam:
        return ()
    return tuple(sum(1 for p in lam if p >= i) for i in range(1, lam[0] + 1))


def multiplicities(lam) -> dict[int, int]:
    """Map part value -> multiplicity (positive parts only)."""
    mult: dict[int, int] = {}
    for p in canonical(lam):
        mult[p] = mult.get(p, 0) + 1
    return mult


def z_stat(lam) -> Fraction:
    """prod_i i^{m_i} m_i! over the part multiplicities m_i."""
    z = Fraction(1)
    for i, m in multiplicities(lam).items():
        z *= Fraction(i) ** m * factorial(m)
    return z


def add(lam, mu) -> Partition:
    """Elementwise sum of (zero-padded) part sequences."""
    n = max(len(lam), len(mu))
    return canonical(tuple(part(lam, j) + part(mu, j) for j in range(1, n + 1)))


def union(lam, mu) -> Partition:
    """Multiset union, sorted decreasingly."""
    return canonical(tuple(sorted(list(lam) + list(mu), reverse=True)))


def rectangle(m: int, n: int) -> Partition:
    """The partition <m^n>: n parts equal to m."""
    return canonical((m,) * n)


def staircase(n: int) -> Partition:
    """rho_n = (n-1, ..., 1, 0)."""
    return tuple(range(n - 1, 0, -1))


def complement(lam, m: int, n: int) -> Partition:
    """(m,n)-complement of lam inside the rectangle <m^n>."""
    lam = canonical(lam)
    if len(lam) > n or (lam and lam[0] > m):
        raise ValueError(f"{lam} not contained in rectangle <{m}^{n}>")
    padded = lam + (0,) * (n - len(lam))
    return canonical(tuple(m - padded[n - 1 - i] for i in range(n)))


def mn_index(lam, m: int, n: int) -> int:
    """Largest k <= min(m,n) with the point (m+1-k, n+1-k) outside lam."""
    k = min(m, n)
    while contains_point(lam, m + 1 - k, n + 1 - k):
        k -= 1
    return k


def partitions_of(s: int, max_part: int | None = None, max_len: int | None = None):
    """Yield all partitions of s with the given bounds, lex-decreasing."""
    if s == 0:
        yield ()
        return
    mp = s if max_part is None else min(max_part, s)
    ml = s if max_len is None else max_len
    if ml <= 0 or mp <= 0:
        return
    for first in range(mp, 0, -1):
        for rest in partitions_of(s - first, max_part=first, max_len=ml - 1):
            yield (first,) + rest


def partitions_up_to(s: int, max_part: int | None = None, max_len: int | None = None):
    """All partitions of size 0..s."""
    for k in range(s + 1):
        yield from partitions_of(k, max_part=max_part, max_len=max_len)


def subdiagrams(lam):
    """All partitions contained in the diagram of lam."""
    lam = canonical(lam)
    if not lam:
        yield ()
        return
    def rows(j, cap):
        if j == len(lam):
            yield ()
            return
        for first in range(min(cap, lam[j]), -1, -1):
            if first == 0:
                yield ()
                return
            for rest in rows(j + 1, first):
                yield (first,) + rest
    yield from rows(0, lam[0])


# -- skew shapes: strips and ribbons ---------------------------------------

def is_horizontal_strip(lam, mu) -> bool:
    """lam/mu has at most one box per column."""
    if not contains(lam, mu):
        return False
    return all(part(lam, j + 1) <= part(mu, j) for j in range(1, len(lam) + 1))


def is_vertical_strip(lam, mu) -> bool:
    return is_horizontal_strip(conjugate(lam), conjugate(mu))


def skew_boxes(lam, mu) -> list[tuple[int, int]]:
    """Boxes (col, row) of lam/mu, 1-based."""
    return [
        (i, j)
        for j in range(1, len(lam) + 1)
        for i in range(part(mu, j) + 1, part(lam, j) + 1)
    ]


def ribbon_height(lam, mu) -> int | None:
    """Height of the ribbon lam/mu, or None if the skew shape is no ribbon.

    A ribbon is edgewise connected and contains no 2x2 block; its height is
    one less than the number of rows it occupies.
    """
    lam, mu = canonical(lam), canonical(mu)
    if not contains(lam, mu):
        raise ValueError(f"{mu} not contained in {lam}")
    boxes = skew_boxes(lam, mu)
    if not boxes:
        return None
    cells = set(boxes)
    for (i, j) in cells:
        if {(i + 1, j), (i, j + 1), (i + 1, j + 1)} <= cells:
            return None  # 2x2 block
    seen = {boxes[0]}
    frontier = [boxes[0]]
    while frontier:
        i, j = frontier.pop()
        for nb in ((i + 1, j), (i - 1, j), (i, j + 1), (i, j - 1)):
            if nb in cells and nb not in seen:
                seen.add(nb)
                frontier.append(nb)
    if len(seen) != len(cells):
        return None  # disconnected
    return len({j for _, j in cells}) - 1


@dataclass(frozen=True)
class RibbonStep:
    """One ribbon move between two partitions."""
    start: Partition
    end: Partition
    size: int
    height: int


def _beta(lam, n: int) -> list[int]:
    """Beta numbers lam_i + n - i for i = 1..n (strictly decreasing)."""
    return [part(lam, i) + n - i for i in range(1, n + 1)]


def ribbons_added(mu, k: int, max_len: int | None = None) -> list[RibbonStep]:
    """All lam with lam/mu a k-ribbon, via the sorted-sequence characterization.

    Adding a k-ribbon is adding k to one entry of mu + rho_n and resorting;
    the height is the number of entries jumped over.  Results are sorted for
    reproducibility.
    """
    if k < 1:
        raise ValueError("ribbon size must be >= 1")
    mu = canonical(mu)
    n = len(mu) + k if max_len is None else max_len
    if n < len(mu):
        return []
    beta = _beta(mu, n)
    present = set(beta)
    out = []
    for q in range(n):
        new = beta[q] + k
        if new in present:
            continue
        height = sum(1 for b in beta if beta[q] < b < new)
        shifted = sorted(beta[:q] + beta[q + 1:] + [new], reverse=True)
        lam = canonical(tuple(shifted[i] - (n - 1 - i) for i in range(n)))
        out.append(RibbonStep(mu, lam, k, height))
    out.sort(key=lambda r: r.end)
    return out


def ribbons_removed(lam, k: int) -> list[RibbonStep]:
    """All mu with lam/mu a k-ribbon, by subtracting k from one beta number."""
    if k < 1:
        raise ValueError("ribbon size must be >= 1")
    lam = canonical(lam)
    n = len(lam)
    beta = _beta(lam, n)
    present = set(beta)
    out = []
    for q in range(n):
        new = beta[q] - k
        if new < 0 or new in present:
            continue
        height = sum(1 for b in beta if new < b < beta[q])
        shifted = sorted(beta[:q] + beta[q + 1:] + [new], reverse=True)
        mu = canonical(tuple(shifted[i] - (n - 1 - i) for i in range(n)))
        out.append(RibbonStep(mu, lam, k, height))
    out.sort(key=lambda r: r.start)
    return out


# -- overlap ----------------------------------------------------------------

INFINITE = "infinite"


@dataclass(frozen=True)
class OverlapOutcome:
    """Finite overlap (partition plus sorting sign) or the infinite symbol."""
    result: Partition | None
    sign: int

    @property
    def finite(self) -> bool:
        return self.result is not None

    def to_json(self):
        if not self.finite:
            return {"result": INFINITE, "sign": 1}
        return {"result": list(self.result), "sign": self.sign}


def _inversion_sign(seq) -> int:
    inv = 0
    for a, b in itertools.combinations(seq, 2):
        if a < b:
            inv += 1
    return -1 if inv % 2 else 1


def overlap(mu, nu, m: int, n: int) -> OverlapOutcome:
    """(m,n)-overlap: sorted merge of mu + rho_m and nu + rho_n, with sign.

    Finite outcome lam satisfies lam + rho_{m+n} = sorted merge; infinite when
    the merge has a repeated entry.
    """
    mu, nu = canonical(mu), canonical(nu)
    if len(mu) > m or len(nu) > n:
        raise ValueError(f"length precondition violated: {mu}, {nu} vs ({m}, {n})")
    merged = [part(mu, i) + m - i for i in range(1, m + 1)]
    merged += [part(nu, i) + n - i for i in range(1, n + 1)]
    if len(set(merged)) < len(merged):
        return OverlapOutcome(None, 1)
    sign = _inversion_sign(merged)
    srt = sorted(merged, reverse=True)
    total = m + n
    lam = canonical(tuple(srt[i] - (total - 1 - i) for i in range(total)))
    return OverlapOutcome(lam, sign)


# -- staircase walks --------------------------------------------------------

@dataclass(frozen=True)
class StaircaseWalk:
    """Walk across an n-columns-by-m-rows rectangle using west/south steps.

    Stored as a string over {V, H} read in walk order from the top-right
    corner; V is a south (vertical) step, H a west (horizontal) step.
    """
    steps: str

    def __post_init__(self):
        if set(self.steps) - {"V", "H"}:
            raise ValueError(f"bad step string {self.steps!r}")

    @property
    def vertical_count(self) -> int:
        return self.steps.count("V")

    @property
    def horizontal_count(self) -> int:
        return self.steps.count("H")

    def v_times(self) -> tuple[int, ...]:
        """1-based times of vertical steps."""
        return tuple(i + 1 for i, s in enumerate(self.steps) if s == "V")

    def h_times(self) -> tuple[int, ...]:
        return tuple(i + 1 for i, s in enumerate(self.steps) if s == "H")

    def upper_partition(self) -> Partition:
        """mu(pi), the shape above the walk (inside <n^m> for m rows)."""
        n = self.horizontal_count
        return canonical(tuple(n + i - t for i, t in enumerate(self.v_times(), 1)))

    def lower_partition_conjugate(self) -> Partition:
        """nu(pi)', read off the horizontal step times."""
        m = self.vertical_count
        return canonical(tuple(m + j - t for j, t in enumerate(self.h_times(), 1)))


def walks_in_rectangle(n: int, m: int):
    """All staircase walks across an n x m rectangle (n columns, m rows).

    Enumerated in lexicographic order of the vertical-step times; this order
    is part of the external contract.
    """
    for v_positions in itertools.combinations(range(m + n), m):
        chars = ["H"] * (m + n)
        for p in v_positions:
            chars[p] = "V"
        yield StaircaseWalk("".join(chars))


def overlap_fiber(lam, m: int, n: int) -> list[tuple[Partition, Partition, int]]:
    """All (mu, nu, sign) whose (m,n)-overlap is lam, one per staircase walk.

    The walk pi across the n x m rectangle maps to
    (mu(pi) + lam_V, nu(pi)' + lam_H) with sign (-1)^{|nu(pi)|}.
    """
    lam = canonical(lam)
    if len(lam) > m + n:
        raise ValueError(f"l({lam}) > {m + n}")
    lam_pad = lam + (0,) * (m + n - len(lam))
    out = []
    for walk in walks_in_rectangle(n, m):
        v, h = walk.v_times(), walk.h_times()
        mu = add(walk.upper_partition(), tuple(lam_pad[t - 1] for t in v))
        nu = add(walk.lower_partition_conjugate(), tuple(lam_pad[t - 1] for t in h))
        lower_size = m * n - size(walk.upper_partition())
        out.append((mu, nu, -1 if lower_size % 2 else 1))
    return out


# -- subpartitions ----------------------------------------------------------

def sub_partition(lam, n: int, K) -> Partition | None:
    """Subpartition of lam for the index subsequence K inside [n].

    Solves mu_j + l(K) - j = lam_{K_j} + n - K_j; returns None when the shift
    is not a valid partition.
    """
    lam = canonical(lam)
    if len(lam) > n:
        raise ValueError(f"l({lam}) > {n}")
    K = tuple(K)
    if any(not 1 <= k <= n for k in K) or list(K) != sorted(set(K)):
        raise ValueError(f"K must be a subsequence of [1..{n}]: {K}")
    lk = len(K)
    vals = [part(lam, K[j - 1]) + n - K[j - 1] - (lk - j) for j in range(1, lk + 1)]
    if any(v < 0 for v in vals):
        return None
    if any(vals[i] < vals[i + 1] for i in range(len(vals) - 1)):
        return None
    return canonical(tuple(vals))


def c_seq(n: int, K) -> tuple[int, ...]:
    """C_n(K): sorted (n - j + 1 for j outside K), a subsequence of [n]."""
    K = set(K)
    return tuple(sorted(n - j + 1 for j in range(1, n + 1) if j not in K))


def ferrers_ascii(lam) -> str:
    """ASCII Ferrers diagram, one row of # per part."""
    return "\n".join("#" * p for p in canonical(lam))


def binomial(n: int, k: int) -> int:
    return comb(n, k)
