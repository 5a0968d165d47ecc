"""Named verification suites behind the CLI and the acceptance tests.

Every suite draws seeded random instances, checks an identity at a stated
tolerance, and returns a report dict {identity, seed, instances, max_rel_err,
pass, failures}.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .overlap_identities import (
    verify_first_overlap,
    verify_second_overlap,
)
from .partitions import (
    canonical,
    conjugate,
    partitions_up_to,
    ribbons_added,
)
from .rmt import (
    RecipeInput,
    logders_main,
    ratio_avg,
    recipe_main,
)
from .schur_algebra import (
    SchurExpansion,
    hall_inner,
    mn_derive,
    mn_multiply,
    mn_negative,
)
from .symfunc import (
    basis_eval,
    delta2,
    ls_comb,
    ls_det,
    neg,
    schur_comb,
    schur_det,
)


def _rel(a, b) -> float:
    return abs(a - b) / max(1.0, abs(a), abs(b))


def _points(rng, count, avoid=(), rmin=0.3, rmax=1.5, min_sep=1e-3):
    out, taken = [], list(avoid)
    while len(out) < count:
        radius = rng.uniform(rmin, rmax)
        angle = rng.uniform(0, 2 * np.pi)
        z = complex(radius * np.cos(angle), radius * np.sin(angle))
        if all(abs(z - w) >= min_sep for w in taken):
            out.append(z)
            taken.append(z)
    return tuple(out)


def _partition(rng, max_size, max_len=None, max_part=None):
    pool = list(partitions_up_to(max_size, max_len=max_len, max_part=max_part))
    return pool[int(rng.integers(len(pool)))]


def _report(identity, seed, instances, max_err, tol, failures):
    return {
        "identity": identity,
        "seed": seed,
        "instances": instances,
        "max_rel_err": max_err,
        "tolerance": tol,
        "pass": not failures,
        "failures": failures[:5],
    }


def verify_ls_properties(seed: int, instances: int = 100, tol: float = 1e-7) -> dict:
    """The five characterizing properties of Littlewood-Schur functions."""
    rng = np.random.default_rng(seed)
    max_err, failures = 0.0, []

    def record(name, err, ctx):
        nonlocal max_err
        max_err = max(max_err, err)
        if err > tol:
            failures.append({"property": name, "err": err, **ctx})

    for _ in range(instances):
        n, m = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        lam = _partition(rng, 6)
        xs = _points(rng, n)
        ys = _points(rng, m, avoid=xs)
        base = ls_det(lam, xs, ys)

        # homogeneity: LS(-aX; aY) = a^{|lam|} LS(-X; Y)
        a = complex(*rng.uniform(0.5, 1.2, size=2))
        scaled = ls_det(lam, tuple(a * x for x in xs), tuple(a * y for y in ys))
        record("homogeneity", _rel(scaled, a ** sum(lam) * base), {"lam": list(lam)})

        # double symmetry under independent permutations
        perm_x = tuple(xs[i] for i in rng.permutation(n))
        perm_y = tuple(ys[i] for i in rng.permutation(m))
        record("double-symmetry", _rel(ls_det(lam, perm_x, perm_y), base), {"lam": list(lam)})

        # restriction: appending zero changes nothing (combinatorial route)
        comb = ls_comb(lam, neg(xs), ys)
        record(
            "restriction",
            max(
                _rel(ls_comb(lam, neg(xs) + (0j,), ys), comb),
                _rel(ls_comb(lam, neg(xs), ys + (0j,)), comb),
            ),
            {"lam": list(lam)},
        )

        # cancellation: x_n = y_m removes one variable from each side
        t = complex(*rng.uniform(0.4, 1.1, size=2))
        record(
            "cancellation",
            _rel(ls_comb(lam, neg(xs) + (-t,), ys + (t,)), comb),
            {"lam": list(lam)},
        )

        # factorization at lam = (<m^n> + alpha) cup beta'
        alpha = _partition(rng, 4, max_len=n)
        beta = _partition(rng, 4, max_len=m)
        lam_f = canonical(
            tuple(
                p + m for p in (alpha + (0,) * (n - len(alpha)))
            )
            + conjugate(beta)
        )
        got = ls_det(lam_f, xs, ys)
        want = delta2(ys, xs) * schur_det(alpha, neg(xs)) * schur_det(beta, ys)
        record("factorization", _rel(got, want), {"lam": list(lam_f)})
    return _report("ls-properties", seed, instances, max_err, tol, failures)


def verify_overlap_first(seed: int, instances: int = 200, tol: float = 1e-7) -> dict:
    return verify_first_overlap(seed, instances, tol)


def verify_overlap_second(seed: int, instances: int = 200, tol: float = 1e-7) -> dict:
    return verify_second_overlap(seed, instances, tol)


def verify_mn_all(seed: int, instances: int = 100, tol: float = 1e-9) -> dict:
    """Adjointness (exact), negative-power variants, and MN for LS."""
    rng = np.random.default_rng(seed)
    max_err, failures = 0.0, []

    def random_expansion():
        out = SchurExpansion()
        for _ in range(int(rng.integers(1, 4))):
            out.add_term(
                _partition(rng, 6),
                Fraction(int(rng.integers(-6, 7)), int(rng.integers(1, 5))),
            )
        return out

    exact_bad = 0
    for _ in range(instances):
        f, g = random_expansion(), random_expansion()
        k = int(rng.integers(1, 5))
        if hall_inner(mn_derive(k, f), g) != hall_inner(f, mn_multiply(k, g)):
            exact_bad += 1
    if exact_bad:
        failures.append({"check": "adjointness", "violations": exact_bad})

    for _ in range(instances):
        n = int(rng.integers(1, 4))
        min_part = int(rng.integers(1, 4))
        body = _partition(rng, 5, max_len=n)
        mu = canonical(tuple(p + min_part for p in (body + (0,) * (n - len(body)))))
        k = int(rng.integers(1, mu[-1] + 1))
        xs = _points(rng, n)
        try:
            mn_negative(mu, k, xs, tol=tol)
        except AssertionError:
            failures.append({"check": "mn-negative-r", "mu": list(mu), "k": k})

    # composite operator route for p_{-lambda}
    for _ in range(max(instances // 10, 5)):
        n = int(rng.integers(1, 3))
        lam = _partition(rng, 3)
        if not lam:
            continue
        body = _partition(rng, 4, max_len=n)
        floor = sum(lam) + int(rng.integers(0, 3))
        mu = canonical(tuple(p + floor for p in (body + (0,) * (n - len(body)))))
        xs = _points(rng, n)
        op = SchurExpansion({mu: 1})
        for p in lam:
            op = mn_derive(p, op)
        lhs = op.evaluate(xs, schur=schur_comb)
        rhs = schur_comb(mu, xs) * basis_eval("powersum_neg", lam, xs)
        err = _rel(lhs, rhs)
        max_err = max(max_err, err)
        if err > tol:
            failures.append({"check": "mn-negative-lambda", "mu": list(mu), "lam": list(lam), "err": err})

    # MN for Littlewood-Schur, |mu| <= 6, k <= 4
    xs = _points(rng, 2)
    ys = _points(rng, 2, avoid=xs)
    for mu in partitions_up_to(6):
        for k in range(1, 5):
            factor = basis_eval("powersum", (k,), xs) + (-1) ** (k - 1) * basis_eval(
                "powersum", (k,), ys
            )
            lhs = ls_comb(mu, xs, ys) * factor
            rhs = sum(
                (-1) ** s.height * ls_comb(s.end, xs, ys)
                for s in ribbons_added(mu, k)
            )
            err = _rel(lhs, rhs)
            max_err = max(max_err, err)
            if err > tol:
                failures.append({"check": "mn-for-ls", "mu": list(mu), "k": k, "err": err})
    return _report("mn-all", seed, instances, max_err, tol, failures)


def verify_cauchy(seed: int, instances: int = 20, tol: float = 1e-8) -> dict:
    """Cauchy (truncated), dual Cauchy (exact), generalized Cauchy."""
    rng = np.random.default_rng(seed)
    max_err, failures = 0.0, []

    # Cauchy identity: values scaled so |xy| <= 0.5, truncation at L = 40
    for _ in range(instances):
        n, m = int(rng.integers(1, 3)), int(rng.integers(1, 3))
        xs = _points(rng, n, rmin=0.3, rmax=0.7)
        ys = _points(rng, m, rmin=0.3, rmax=0.7, avoid=xs)
        closed = 1.0 + 0j
        for x in xs:
            for y in ys:
                closed /= 1 - x * y
        partial = 0j
        for lam in partitions_up_to(40, max_len=min(n, m)):
            partial += schur_det(lam, xs) * schur_det(lam, ys)
        err = abs(partial - closed) / max(1.0, abs(closed))
        max_err = max(max_err, err)
        if err > tol:
            failures.append({"check": "cauchy", "err": err})

    # dual Cauchy: finite, exact to 1e-10
    for _ in range(instances):
        n, m = int(rng.integers(1, 3)), int(rng.integers(1, 3))
        xs = _points(rng, n)
        ys = _points(rng, m, avoid=xs)
        closed = 1.0 + 0j
        for x in xs:
            for y in ys:
                closed *= 1 + x * y
        total = sum(
            schur_det(lam, xs) * schur_det(conjugate(lam), ys)
            for lam in partitions_up_to(m * n, max_part=m, max_len=n)
        )
        err = _rel(total, closed)
        max_err = max(max_err, err)
        if err > 1e-10:
            failures.append({"check": "dual-cauchy", "err": err})

    # generalized Cauchy with one variable per set, |values| <= 0.4
    for _ in range(max(instances // 4, 3)):
        s, t, u, v = (complex(z) for z in rng.uniform(0.15, 0.4, size=4) * np.exp(
            1j * rng.uniform(0, 2 * np.pi, size=4)
        ))
        closed = (1 + s * v) * (1 + u * t) / ((1 - s * t) * (1 - u * v))
        # with one variable per set only hooks (a, 1^b) survive
        hooks = [()] + [
            (a,) + (1,) * b for a in range(1, 15) for b in range(15 - a)
        ]
        total = sum(
            (
                ls_comb(lam, (s,), (u,)) * ls_comb(lam, (t,), (v,))
                for lam in hooks
            ),
            0j,
        )
        err = abs(total - closed) / max(1.0, abs(closed))
        max_err = max(max_err, err)
        if err > 1e-6:
            failures.append({"check": "generalized-cauchy", "err": err})
    return _report("cauchy", seed, instances, max_err, tol, failures)


def verify_recipe_consistency(seed: int, instances: int = 3, tol: float = 1e-6) -> dict:
    """Recipe main term against its closed-form specializations."""
    rng = np.random.default_rng(seed)
    max_err, failures = 0.0, []

    # E = F = {}: ratios
    a = _points(rng, 1, rmin=0.8, rmax=1.2)
    b = _points(rng, 1, rmin=0.8, rmax=1.2, avoid=a)
    c = _points(rng, 1, rmin=0.2, rmax=0.45)
    d = _points(rng, 1, rmin=0.2, rmax=0.45, avoid=c)
    big_n = 10
    got = recipe_main(RecipeInput(a, b, c, d, (), (), big_n), part_cap=30, size_cap=30)
    want = ratio_avg(a, b, c, d, big_n)
    err = _rel(got, want)
    max_err = max(max_err, err)
    if err > tol:
        failures.append({"check": "recipe-to-ratios", "err": err})

    # A..D = {}: logarithmic derivatives
    eps = complex(rng.uniform(0.2, 0.35))
    phi = complex(rng.uniform(0.2, 0.35))
    got = recipe_main(
        RecipeInput((), (), (), (), (eps,), (phi,), 14), part_cap=40, size_cap=20
    )
    want = logders_main((eps,), (phi,))
    err = _rel(got, want)
    max_err = max(max_err, err)
    if err > tol:
        failures.append({"check": "recipe-to-logders", "err": err})

    # F = {}, single epsilon, B and C present: ratio-and-log-derivative form
    bb = (complex(rng.uniform(0.4, 0.55)),)
    cc = (complex(rng.uniform(0.3, 0.45)),)
    got = recipe_main(
        RecipeInput((), bb, cc, (), (eps,), (), 30), part_cap=40, size_cap=20
    )
    want = _logders_ratio_main_single(bb, cc, eps)
    err = _rel(got, want)
    max_err = max(max_err, err)
    if err > tol:
        failures.append({"check": "recipe-to-logders-ratio", "err": err})
    return _report("recipe-consistency", seed, instances, max_err, tol, failures)


def _logders_ratio_main_single(b_vars, c_vars, eps, cap: int = 60) -> complex:
    """Direct main term for B, C nonempty, E = (eps), F = {}."""
    total = 0j
    # branch E' = (), E'' = (eps): psi empty, chi = (q)
    for q in range(1, cap):
        total += (-eps) ** (q - 1) * basis_eval("powersum", (q,), neg(b_vars))
    # branch E' = (eps), E'' = (): psi = (s), omega empty
    for s in range(1, cap):
        total += eps ** (s - 1) * basis_eval("powersum", (s,), c_vars)
    return -total


SUITES = {
    "ls-properties": verify_ls_properties,
    "overlap-1": verify_overlap_first,
    "overlap-2": verify_overlap_second,
    "mn-all": verify_mn_all,
    "cauchy": verify_cauchy,
    "recipe-consistency": verify_recipe_consistency,
}


def run_suite(name: str, seed: int, instances: int | None = None, tol: float | None = None) -> dict:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    kwargs = {}
    if instances is not None:
        kwargs["instances"] = instances
    if tol is not None:
        kwargs["tol"] = tol
    return SUITES[name](seed, **kwargs)
