import json
import math

import numpy as np
import pytest

import bltfact as bf


def test_identity_eval_via_cli(tmp_path):
    path = tmp_path / "id.json"
    path.write_text(json.dumps({"degree": 0, "theta": [], "theta_hat": [], "n": 100,
                                "meta": {"method": "identity", "version": 1}}))
    code, out, _ = bf.cli(["eval", "--blt", str(path), "--steps", "100"])
    assert code == 0
    assert json.loads(out)["max_err"] == pytest.approx(10.0, rel=1e-12)


def test_optimal_coeffs_self_convolution():
    f = np.array(bf.optimal_coeffs(32))
    conv = np.convolve(f, f)[:32]
    assert np.allclose(conv, 1.0, atol=1e-12)


def test_closed_form_matches_direct():
    f = bf.make_factorization([0.9, 0.5], [0.95, 0.7], 256)
    a, b = bf.max_err(f, 256), bf.max_err_direct(f, 256)
    assert a.max_err == pytest.approx(b.max_err, rel=1e-10)


def test_noise_matches_dense_product():
    f = bf.optimize(3, 512)
    assert f.converged or f.final_max_err < 1.05 * bf.opt_lt_toe(512)
    fac = f.factorization
    n, m = 64, 3
    z = bf.noise(fac, n, m, seed=7, zeta=0.0)
    assert np.all(z == 0.0)
    prefix = bf.noise(fac, n, m, seed=7, mode="prefix")
    step = bf.noise(fac, n, m, seed=7)
    assert np.allclose(np.cumsum(step, axis=0), prefix, atol=1e-10)


def test_ra_blt_ratio():
    f = bf.ra_blt(16)
    assert bf.max_err(f, 10_000).ratio < 1.01


def test_gradient_shape_and_invalid_region():
    g = bf.gradient([0.25], [0.5], 100)
    assert len(g) == 2 and all(math.isfinite(v) for v in g)
    assert math.isinf(bf.loss([0.5], [0.25], 100))


def test_json_round_trip():
    f = bf.degree1_factorization(1000)
    g = bf.BltFactorization.from_json(f.to_json())
    assert g.theta == f.theta and g.method == "degree1"
