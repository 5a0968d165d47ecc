import numpy as np
import pytest

from lsrmt.haar import (
    MCEstimate,
    PoleProximityError,
    char_poly,
    completed_log_deriv,
    inverse_sample,
    log_deriv,
    make_estimator,
    mc_average,
    sample_haar,
    weyl_quadrature,
)
from lsrmt.partitions import partitions_up_to
from lsrmt.rmt import moment_unitary
from lsrmt.symfunc import schur_in_monomials
from util import rel_err


def test_sample_haar_unit_modulus_and_det():
    s = sample_haar(6, seed=42)
    assert len(s.eigenvalues) == 6
    for rho in s.eigenvalues:
        assert abs(abs(rho) - 1) < 1e-10
    prod = 1
    for rho in s.eigenvalues:
        prod *= rho
    assert abs(s.det_phase - prod) < 1e-10
    assert abs(abs(s.det_phase) - 1) < 1e-10


def test_sample_haar_deterministic():
    a = sample_haar(4, seed=7)
    b = sample_haar(4, seed=7)
    assert a == b


def test_char_poly_at_zero():
    s = sample_haar(5, seed=1)
    assert char_poly(s, 0) == pytest.approx(1)


def test_log_deriv_series_identity():
    # chi'/chi(eps) = -sum_m eps^{m-1} conj(p_m) for |eps| < 1
    s = sample_haar(6, seed=3)
    eps = 0.3 + 0.05j
    direct = log_deriv(s, eps)
    series = 0j
    for m in range(1, 200):
        pm = sum(rho ** m for rho in s.eigenvalues)
        series += -(eps ** (m - 1)) * pm.conjugate()
    assert abs(direct - series) < 1e-10


def test_log_deriv_pole_guard():
    s = sample_haar(4, seed=9)
    z = s.eigenvalues[0]
    with pytest.raises(PoleProximityError):
        log_deriv(s, z)


def test_functional_equation():
    # z Lambda'/Lambda(z) = -w Lambda'/Lambda(w) for g^{-1}, w = 1/z
    s = sample_haar(7, seed=11)
    for z in (0.4 + 0.2j, 1.7 - 0.3j, 0.9j):
        lhs = z * completed_log_deriv(s, z)
        w = 1 / z
        rhs = -w * completed_log_deriv(inverse_sample(s), w)
        assert abs(lhs - rhs) < 1e-9 * max(1, abs(lhs))


def test_mc_average_constant():
    est = mc_average("one", big_n=3, samples=500, seed=5)
    assert est.mean == pytest.approx(1)
    assert est.stderr == 0
    assert est.samples == 500


def test_mc_average_rejects_small_m():
    with pytest.raises(ValueError):
        mc_average("one", big_n=2, samples=10, seed=0)


def test_mc_average_deterministic_across_workers():
    a = mc_average("trace", big_n=3, samples=2000, seed=13, workers=1)
    b = mc_average("trace", big_n=3, samples=2000, seed=13, workers=4)
    assert a == b


def test_mc_trace_zero():
    est = mc_average("trace", big_n=5, samples=20000, seed=21)
    assert abs(est.mean) < 4 * est.stderr


def test_mc_abs_trace_sq_one():
    est = mc_average("abs_trace_sq", big_n=4, samples=20000, seed=22)
    assert abs(est.mean - 1) < 4 * est.stderr


def test_mc_abs_char_sq():
    est = make_estimator("abs_char_sq", big_n=3, z=1.0)
    assert est.prediction == pytest.approx(complex(moment_unitary(1, 3)))
    out = mc_average(est, big_n=3, samples=20000, seed=23)
    assert abs(out.mean - 4) < 4 * out.stderr


def test_mc_eigenangle_density_uniform():
    # marginal eigenangle density is uniform: bin counts match N/bins
    big_n, bins, samples = 5, 16, 20000
    rng = np.random.default_rng(31)
    from lsrmt.haar import _haar_batch

    counts = np.zeros((samples, bins))
    done = 0
    while done < samples:
        batch = min(4096, samples - done)
        eigs = _haar_batch(rng, batch, big_n)
        angles = np.angle(eigs)  # in (-pi, pi]
        idx = np.floor((angles + np.pi) / (2 * np.pi) * bins).astype(int)
        idx = np.clip(idx, 0, bins - 1)
        for b in range(bins):
            counts[done:done + batch, b] = np.sum(idx == b, axis=1)
        done += batch
    expected = big_n / bins
    for b in range(bins):
        mean = counts[:, b].mean()
        stderr = counts[:, b].std(ddof=1) / np.sqrt(samples)
        assert abs(mean - expected) < 4 * stderr


def test_weyl_constant_and_moment():
    assert weyl_quadrature(lambda e: np.ones(e.shape[0]), 1, grid=8) == pytest.approx(1)
    val = weyl_quadrature(
        lambda e: np.abs(np.prod(1 - np.conj(e), axis=1)) ** 2, 2, grid=16
    )
    assert rel_err(val, complex(moment_unitary(1, 2))) < 1e-8


def test_weyl_schur_orthogonality_small():
    from lsrmt.haar import _monomial_batch_sum

    big_n = 2
    for mu in partitions_up_to(2):
        for nu in partitions_up_to(2):
            mu_exp = schur_in_monomials(mu, big_n)
            nu_exp = schur_in_monomials(nu, big_n)

            def functional(e):
                return _monomial_batch_sum(mu_exp, e) * np.conj(
                    _monomial_batch_sum(nu_exp, e)
                )

            val = weyl_quadrature(functional, big_n, grid=16)
            want = 1.0 if (mu == nu and len(mu) <= big_n) else 0.0
            assert abs(val - want) < 1e-6, (mu, nu)


def test_schur_pair_estimator_matches_weyl():
    est = make_estimator("schur_pair", big_n=2, mu=(1,), nu=(1,))
    out = mc_average(est, big_n=2, samples=20000, seed=33)
    assert abs(out.mean - 1) < 4 * out.stderr


def test_mc_estimate_json():
    e = MCEstimate(1 + 2j, 0.5, 100, 7, 1)
    assert e.to_json() == {
        "mean_re": 1.0,
        "mean_im": 2.0,
        "stderr": 0.5,
        "samples": 100,
        "seed": 7,
        "rejected": 1,
    }
