import json
import math

import numpy as np
import pytest

import nhmms


@pytest.fixture
def e3():
    space = nhmms.Space.from_points([[0.0], [1.0], [3.0]], [1.0, 1.0, 2.0])
    return space, nhmms.Lambda.power(4.0, 1.0)


def test_space_basics(e3):
    space, lam = e3
    assert len(space) == 3
    assert space.admissible_radii == [1.0, 2.0, 3.0]
    assert space.ball(0, 1.0) == [0, 1]
    assert space.measure(2, 2.0) == 3.0
    assert lam(0, 3.0) == 12.0


def test_invalid_space():
    with pytest.raises(ValueError):
        nhmms.Space([[0.0, 1.0], [2.0, 0.0]], [1.0, 1.0])


def test_hand_values(e3):
    space, lam = e3
    t = nhmms.fractional_integral(space, lam, [0.0, 1.0, 0.0], 0.5)
    assert isinstance(t, np.ndarray)
    assert t[0] == pytest.approx(0.5, rel=1e-15)
    i2 = nhmms.multilinear_fractional_integral(space, lam, [[0, 1, 0], [0, 0, 1]], 0.5)
    assert i2[0] == pytest.approx(1 / 32, rel=1e-15)
    assert nhmms.k_coefficient(space, lam, 0, 1.0, 0, 36.0) == pytest.approx(43 / 36, rel=1e-14)


def test_commutator_of_constants_vanishes():
    space, lam = nhmms.generate("grid", side=8)
    rng = np.random.default_rng(3)
    f1, f2 = rng.normal(size=8), rng.normal(size=8)
    c = nhmms.commutator(space, lam, [np.full(8, 2.0), np.full(8, -1.0)], [f1, f2], 0.4)
    assert np.max(np.abs(c)) <= 1e-12 * np.max(np.abs(nhmms.multilinear_fractional_integral(space, lam, [f1, f2], 0.4)))


def test_maximal_and_rbmo():
    space, lam = nhmms.generate("cantor", level=3)
    f = np.random.default_rng(1).normal(size=len(space))
    beta0 = nhmms.default_beta0(space, lam)
    assert np.all(np.abs(f) <= nhmms.doubling_maximal(space, f, beta0))
    assert np.all(nhmms.sharp_maximal(space, lam, np.ones(len(space)), 0.25) == 0.0)
    base = nhmms.rbmo_norm(space, lam, f)
    assert nhmms.rbmo_norm(space, lam, f + 3.0) == pytest.approx(base, rel=1e-12)
    assert nhmms.rbmo_norm(space, lam, np.ones(len(space))) == 0.0
    assert np.all(nhmms.fractional_maximal(space, np.ones(len(space)), 2.0) <= 1.0)


def test_binding_errors(e3):
    space, lam = e3
    with pytest.raises(ValueError):
        nhmms.lp_norm(space, [1.0, 2.0], 2.0)


def test_space_round_trip(tmp_path):
    space, lam = nhmms.generate("mixed_dimension", side=3)
    path = tmp_path / "s.json"
    nhmms.save_space(path, space, lam)
    back, back_lam = nhmms.load_space(path)
    assert back.id == space.id
    assert back_lam.family == lam.family
    report = nhmms.check_upper_doubling(back, back_lam, samples=200)
    assert report["upper_doubling"]
    assert report["measured_C0"] <= 1 / 1.05 + 1e-12


def test_suite_is_deterministic():
    config = {
        "seed": 2,
        "spaces": {"c": {"gen": {"family": "cantor", "level": 3}}},
        "checks": [
            {"type": "operator_norm", "space": "c", "which": "comm12", "trials": 4},
            {"type": "product_bound", "space": "c", "trials": 5},
        ],
    }
    nhmms.set_threads(1)
    a, ok = nhmms.run_suite(config)
    nhmms.set_threads(4)
    b, _ = nhmms.run_suite(config)
    assert ok
    assert json.dumps(a["checks"]) == json.dumps(b["checks"])
    with pytest.raises(ValueError):
        nhmms.run_suite({"spaces": {}, "checks": [{"type": "kernel", "space": "missing"}]})
