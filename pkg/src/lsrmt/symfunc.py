"""Numeric evaluation of symmetric and doubly symmetric polynomials.

Variable sets are ordered tuples of complex numbers; all values are computed
in complex double precision.  Two independent routes are provided for Schur
and Littlewood-Schur functions: a combinatorial one (tableau recursion over
Littlewood-Richardson data, stable for repeated variables) and a determinantal
one (generalized Vandermonde ratios, requiring pairwise distinct points).
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from .partitions import (
    Partition,
    canonical,
    conjugate,
    contains,
    mn_index,
    part,
    partitions_of,
    size,
    subdiagrams,
)

DISTINCT_EPS = 1e-6
SIZE_CAP = 20

VarSet = tuple[complex, ...]


class CoincidentVariablesError(ValueError):
    """Raised when a determinantal formula is evaluated at coincident points."""


class SizeCapError(ValueError):
    """Raised when a combinatorial enumeration exceeds the size cap."""


def as_varset(values) -> VarSet:
    return tuple(complex(v) for v in values)


def pairwise_distinct(values, eps: float = DISTINCT_EPS) -> bool:
    vals = as_varset(values)
    return all(
        abs(a - b) >= eps for a, b in itertools.combinations(vals, 2)
    )


def abs_below(values, r: float) -> bool:
    return all(abs(v) <= r for v in values)


def delta(xs) -> complex:
    """Vandermonde product prod_{i<j} (x_i - x_j)."""
    xs = as_varset(xs)
    out = 1.0 + 0j
    for i in range(len(xs)):
        for j in range(i + 1, len(xs)):
            out *= xs[i] - xs[j]
    return out


def delta2(xs, ys) -> complex:
    """Pairwise difference product prod_{x in X, y in Y} (x - y)."""
    out = 1.0 + 0j
    for x in as_varset(xs):
        for y in as_varset(ys):
            out *= x - y
    return out


def e_prod(xs) -> complex:
    """Plain product of the variables."""
    out = 1.0 + 0j
    for x in as_varset(xs):
        out *= x
    return out


def neg(xs) -> VarSet:
    return tuple(-x for x in as_varset(xs))


def inv(xs) -> VarSet:
    xs = as_varset(xs)
    if any(x == 0 for x in xs):
        raise ValueError("zero variable cannot be inverted")
    return tuple(1 / x for x in xs)


# -- classical bases ---------------------------------------------------------

def monomial_eval(lam, xs) -> complex:
    """m_lambda(X): sum over distinct permutations of the padded exponents."""
    lam = canonical(lam)
    xs = as_varset(xs)
    n = len(xs)
    if len(lam) > n:
        return 0j
    exps = lam + (0,) * (n - len(lam))
    total = 0j
    for perm in set(itertools.permutations(exps)):
        term = 1.0 + 0j
        for x, e in zip(xs, perm):
            term *= x ** e
        total += term
    return total


def powersum_r(r: int, xs) -> complex:
    return sum((x ** r for x in as_varset(xs)), 0j)


def elementary_r(r: int, xs) -> complex:
    xs = as_varset(xs)
    if r == 0:
        return 1.0 + 0j
    if r > len(xs):
        return 0j
    return sum(
        (e_prod(sub) for sub in itertools.combinations(xs, r)), 0j
    )


def complete_r(r: int, xs) -> complex:
    xs = as_varset(xs)
    if r == 0:
        return 1.0 + 0j
    if not xs:
        return 0j
    return sum(
        (e_prod(sub) for sub in itertools.combinations_with_replacement(xs, r)),
        0j,
    )


def basis_eval(kind: str, lam, xs) -> complex:
    """Evaluate m/e/h/p bases and the negative power sum p_{-lambda}."""
    lam = canonical(lam)
    xs = as_varset(xs)
    if kind == "monomial":
        return monomial_eval(lam, xs)
    if kind == "elementary":
        out = 1.0 + 0j
        for p in lam:
            out *= elementary_r(p, xs)
        return out
    if kind == "complete":
        out = 1.0 + 0j
        for p in lam:
            out *= complete_r(p, xs)
        return out
    if kind == "powersum":
        out = 1.0 + 0j
        for p in lam:
            out *= powersum_r(p, xs)
        return out
    if kind == "powersum_neg":
        return basis_eval("powersum", lam, inv(xs))
    raise ValueError(f"unknown basis {kind!r}")


# -- Schur functions ---------------------------------------------------------

def schur_det(lam, xs, eps: float = DISTINCT_EPS) -> complex:
    """Schur polynomial as a ratio of the generalized Vandermonde to Delta."""
    lam = canonical(lam)
    xs = as_varset(xs)
    n = len(xs)
    if len(lam) > n:
        return 0j
    if n == 0:
        return 1.0 + 0j
    if not pairwise_distinct(xs, eps):
        raise CoincidentVariablesError(
            "variables closer than distinctness threshold; use schur_comb"
        )
    mat = np.array(
        [[x ** (part(lam, j) + n - j) for j in range(1, n + 1)] for x in xs],
        dtype=complex,
    )
    return complex(np.linalg.det(mat) / delta(xs))


@lru_cache(maxsize=1 << 16)
def _schur_comb_cached(lam: Partition, xs: VarSet) -> complex:
    if not lam:
        return 1.0 + 0j
    if not xs:
        return 0j
    head, last = xs[:-1], xs[-1]
    total = 0j
    weight = size(lam)
    for mu in _horizontal_strip_predecessors(lam):
        total += last ** (weight - size(mu)) * _schur_comb_cached(mu, head)
    return total


@lru_cache(maxsize=1 << 16)
def _horizontal_strip_predecessors(lam: Partition) -> tuple[Partition, ...]:
    """All mu with lam/mu a horizontal strip (branching rule)."""
    lam = canonical(lam)
    ranges = [
        range(part(lam, j + 2), lam[j] + 1) for j in range(len(lam))
    ]
    out = []
    for choice in itertools.product(*ranges):
        if all(choice[i] >= choice[i + 1] for i in range(len(choice) - 1)):
            out.append(canonical(choice))
    return tuple(out)


def schur_comb(lam, xs, cap: int = SIZE_CAP) -> complex:
    """Schur polynomial as the semistandard-tableau weight sum.

    Evaluated by peeling horizontal strips for the last variable, which is the
    tableau sum organized by the largest entry; valid for repeated variables.
    """
    lam = canonical(lam)
    if size(lam) > cap:
        raise SizeCapError(f"|lambda| = {size(lam)} exceeds cap {cap}")
    if len(lam) > len(xs):
        return 0j
    return _schur_comb_cached(lam, as_varset(xs))


# -- Littlewood-Richardson coefficients --------------------------------------

@lru_cache(maxsize=1 << 16)
def lr_coeff(lam: Partition, mu: Partition, nu: Partition, cap: int = SIZE_CAP) -> int:
    """Littlewood-Richardson coefficient c^lam_{mu nu}.

    Counts semistandard skew tableaux of shape lam/nu and content mu whose row
    word (rows read right to left, top to bottom) is a lattice word.
    """
    lam, mu, nu = canonical(lam), canonical(mu), canonical(nu)
    if size(lam) > cap:
        raise SizeCapError(f"|lambda| = {size(lam)} exceeds cap {cap}")
    if size(lam) != size(mu) + size(nu):
        return 0
    if not (contains(lam, mu) and contains(lam, nu)):
        return 0
    if not mu:
        return 1  # shape lam/nu is empty iff lam == nu, ensured by the sizes
    nrows = len(lam)
    nvals = len(mu)

    def fill_rows(row: int, above: tuple[int, ...], counts: tuple[int, ...]) -> int:
        if row > nrows:
            return 1
        lo, width = part(nu, row), part(lam, row) - part(nu, row)

        def fill_cells(col: int, prev_val: int, cnow: tuple[int, ...], acc: tuple[int, ...]) -> int:
            if col == width:
                # lattice condition consumes this row right to left,
                # starting from the counts accumulated before the row
                c = list(counts)
                for v in reversed(acc):
                    c[v - 1] += 1
                    if v > 1 and c[v - 1] > c[v - 2]:
                        return 0
                return fill_rows(row + 1, acc, tuple(c))
            abs_col = lo + col + 1
            upper = 0
            if row > 1 and abs_col > part(nu, row - 1):
                upper = above[abs_col - part(nu, row - 1) - 1]
            total = 0
            for v in range(max(prev_val, upper + 1), nvals + 1):
                if cnow[v - 1] >= mu[v - 1]:
                    continue
                bumped = cnow[:v - 1] + (cnow[v - 1] + 1,) + cnow[v:]
                total += fill_cells(col + 1, v, bumped, acc + (v,))
            return total

        return fill_cells(0, 1, counts, ())

    return fill_rows(1, (), (0,) * nvals)


# -- Littlewood-Schur functions ----------------------------------------------

def ls_comb(lam, xs, ys, cap: int = SIZE_CAP) -> complex:
    """LS_lambda(X; Y) = sum over (mu, nu) of c^lam_{mu nu} s_mu(X) s_{nu'}(Y).

    Valid for arbitrary, even coincident, values.
    """
    lam = canonical(lam)
    if size(lam) > cap:
        raise SizeCapError(f"|lambda| = {size(lam)} exceeds cap {cap}")
    xs, ys = as_varset(xs), as_varset(ys)
    n, m = len(xs), len(ys)
    total = 0j
    for nu in subdiagrams(lam):
        # s_{nu'}(Y) vanishes unless nu' has at most m rows
        if nu and nu[0] > m:
            continue
        sy = schur_comb(conjugate(nu), ys, cap=cap)
        if sy == 0:
            continue
        rest = size(lam) - size(nu)
        for mu in partitions_of(rest, max_len=n):
            if not contains(lam, mu):
                continue
            c = lr_coeff(lam, mu, nu, cap=cap)
            if c:
                total += c * schur_comb(mu, xs, cap=cap) * sy
    return total


def ls_det_sign(lam, m: int, n: int) -> int:
    """epsilon(lambda) = (-1)^{|lam_[n-k]|} (-1)^{mk} (-1)^{k(k-1)/2}."""
    lam = canonical(lam)
    k = mn_index(lam, m, n)
    head = sum(part(lam, j) for j in range(1, n - k + 1))
    exp = head + m * k + k * (k - 1) // 2
    return -1 if exp % 2 else 1


def ls_det(lam, xs, ys, eps: float = DISTINCT_EPS) -> complex:
    """Determinantal evaluation of LS_lambda(-X; Y).

    Computes the value of the Littlewood-Schur function at the negated first
    variable set, which is the normalization in which the block-determinant
    formula holds; callers wanting LS_lambda(X; Y) should negate X first.
    Returns 0 when the (m,n)-index of lambda is negative.
    """
    lam = canonical(lam)
    xs, ys = as_varset(xs), as_varset(ys)
    n, m = len(xs), len(ys)
    k = mn_index(lam, m, n)
    if k < 0:
        return 0j
    if not pairwise_distinct(xs + ys, eps):
        raise CoincidentVariablesError(
            "X union Y has coincident variables; use ls_comb"
        )
    lamc = conjugate(lam)
    dim = n + (m - k)
    mat = np.zeros((dim, dim), dtype=complex)
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            mat[i, j] = 1 / (x - y)
        for j in range(1, n - k + 1):
            mat[i, m + j - 1] = x ** (part(lam, j) + n - m - j)
    for i in range(1, m - k + 1):
        for j, y in enumerate(ys):
            mat[n + i - 1, j] = y ** (part(lamc, i) + m - n - i)
    det = complex(np.linalg.det(mat))
    sign = ls_det_sign(lam, m, n)
    return sign * delta2(ys, xs) / (delta(xs) * delta(ys)) * det


def schur_in_monomials(lam, nvars: int, cap: int = SIZE_CAP) -> dict[Partition, int]:
    """Kostka expansion s_lam = sum_mu K_{lam mu} m_mu restricted to nvars."""
    lam = canonical(lam)
    if size(lam) > cap:
        raise SizeCapError(f"|lambda| = {size(lam)} exceeds cap {cap}")
    out: dict[Partition, int] = {}
    for mu in partitions_of(size(lam), max_len=nvars):
        k = lr_kostka(lam, mu)
        if k:
            out[mu] = k
    return out


@lru_cache(maxsize=1 << 12)
def lr_kostka(lam: Partition, mu: Partition) -> int:
    """Kostka number: semistandard tableaux of shape lam and content mu."""
    lam, mu = canonical(lam), canonical(mu)
    if size(lam) != size(mu):
        return 0

    def count(shape: Partition, remaining: Partition) -> int:
        if not remaining:
            return 1 if not shape else 0
        r = remaining[0]
        total = 0
        for prev in _horizontal_strip_predecessors(shape):
            if size(shape) - size(prev) == remaining[-1]:
                total += count(prev, remaining[:-1])
        return total

    return count(lam, mu)
