import json

import numpy as np
import pytest

from ellaybe import closed_form as cf
from ellaybe import special_functions as sf
from ellaybe import tensor_algebra as ta
from ellaybe import verifier as vf
from ellaybe.acceptance import example_matrix_gauge, example_scalar_gauge, symmetry_residuals
from ellaybe.errors import DegeneracyError, ParameterError, PoleError
from ellaybe.serialization import tensor_from_json

from conftest import FIXTURES

REF = cf.SolutionParams(2, 1, 0.8j)
REF_POINT = (0.13 + 0.07j, 0.1, 0.32)


def rel(a, b):
    return float(np.linalg.norm(a - b) / max(np.linalg.norm(a), np.linalg.norm(b)))


def test_golden_tensor(golden):
    t = cf.r_elliptic(REF, *REF_POINT)
    for inputs, val in golden["r_elliptic"]:
        idx = tuple(int(i) for i in inputs[-4:])
        assert abs(t[idx] - val) < 1e-13


def test_golden_tensor_json_fixture():
    fixture = json.loads((FIXTURES / "eval_n2_d1.json").read_text())
    expected = tensor_from_json(fixture["tensor"])
    assert rel(cf.r_elliptic(REF, *REF_POINT), expected) < 1e-14


@pytest.mark.parametrize("n,d,tau", [(2, 2, 1j), (4, 2, 1j), (3, 1, 0.5), (3, 1, -1j)])
def test_params_validation(n, d, tau):
    with pytest.raises(ParameterError):
        cf.SolutionParams(n, d, tau)


def test_pole_set_and_distance():
    p = cf.SolutionParams(3, 1, 0.3 + 1j)
    assert p.min_pole_distance == pytest.approx(1 / 3)
    assert len(p.pole_set) == 9
    for pole in p.pole_set:
        with pytest.raises(PoleError):
            cf.r_elliptic(p, pole, 0.1, 0.3)
    assert cf.pole_distance(p, 0.1, 0.3) > 0


def test_pole_error_carries_index():
    p = cf.SolutionParams(3, 1, 0.8j)
    v = -(1 / 3) * (2 * p.tau + 1)
    with pytest.raises(PoleError) as exc:
        cf.r_elliptic(p, v, 0.1, 0.3)
    assert exc.value.index == (2, 1)
    assert exc.value.distance < 1e-12


def test_pole_in_x():
    with pytest.raises(PoleError):
        cf.r_elliptic(REF, 0.1, 0.2, 1.2)


def test_vectorized_v_matches_pointwise():
    v = np.array([0.1 + 0.1j, -0.2 + 0.05j, 0.3 - 0.2j])
    stack = cf.r_elliptic(REF, v, 0.1, 0.32)
    assert stack.shape == (3, 2, 2, 2, 2)
    for vi, t in zip(v, stack):
        assert rel(t, cf.r_elliptic(REF, vi, 0.1, 0.32)) < 1e-15


def test_depends_on_difference_only():
    a = cf.r_elliptic(REF, 0.13 + 0.07j, 0.1, 0.32)
    b = cf.r_elliptic(REF, 0.13 + 0.07j, 0.6 - 0.2j, 0.82 - 0.2j)
    assert rel(a, b) < 1e-14


def test_unit_residue_normalization():
    raw = cf.r_elliptic(REF, *REF_POINT)
    unit = cf.r_elliptic(REF, *REF_POINT, normalization="unit-residue")
    assert np.array_equal(unit, 2 * raw)
    with pytest.raises(ParameterError):
        cf.r_elliptic(REF, *REF_POINT, normalization="other")
    with pytest.raises(ParameterError):
        cf.closed_form_evaluator(REF, "other")


def test_periodicity_and_skew_at_reference_point():
    v, x1, x2 = REF_POINT
    t = cf.r_elliptic(REF, v, x1, x2)
    assert rel(cf.r_elliptic(REF, v + 1, x1, x2), t) < 1e-13
    assert rel(-ta.swap_legs(cf.r_elliptic(REF, -v, x2, x1)), t) < 1e-13


@pytest.mark.parametrize("n,d,tau", [(3, 1, 0.8j), (5, 2, 0.3 + 1j)])
def test_symmetries(n, d, tau):
    p = cf.SolutionParams(n, d, tau)
    points, _ = vf.sample_points(p, vf.SampleScheme(seed=3, count=20), "theorem")
    res = symmetry_residuals(p, points)
    assert res["ad_X"] < 1e-10 and res["ad_Y"] < 1e-10
    assert res["v_period_1"] < 1e-9 and res["v_period_tau"] < 1e-9


# --- theta form of the coefficients -----------------------------------------------

@pytest.mark.parametrize("seed", range(3))
def test_r_coeff_theta_sigma_form(seed):
    rng = np.random.default_rng(seed)
    p = cf.SolutionParams(3, 1, 0.3 + 1j)
    v = complex(rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3))
    z = complex(rng.uniform(-0.4, 0.4), rng.uniform(-0.3, 0.3))
    for k, l in ta.index_set(3):
        lhs = cf.r_coeff_theta(p, k, l, v, z)
        rhs = np.exp(-2j * np.pi * p.d * k * z / p.n) * sf.kronecker_sigma(
            v - p.d / p.n * (k * p.tau - l), z, p.tau)
        assert abs(lhs - rhs) < 1e-12 * abs(rhs)


def test_r_coeff_theta_last_index_is_sigma():
    p = cf.SolutionParams(3, 2, 0.8j)
    v, z = 0.11 - 0.2j, 0.27 + 0.1j
    assert abs(cf.r_coeff_theta(p, 3, 3, v, z) - sf.kronecker_sigma(v, z, p.tau)) < 1e-12


def test_r_coeff_theta_errors():
    p = cf.SolutionParams(3, 1, 0.8j)
    s = (1 / 3) * (2 * p.tau - 1)
    with pytest.raises(PoleError):
        cf.r_coeff_theta(p, 2, 1, s + 1, 0.3)
    with pytest.raises(ParameterError):
        cf.r_coeff_theta(p, 0, 1, 0.1, 0.3)


# --- Laurent expansion ------------------------------------------------------------------

def test_laurent_residue_is_identity_over_n():
    p = cf.SolutionParams(2, 1, 1j)
    e = cf.laurent_expand(p, 0.1, 0.32)
    c = e.residue_constant()
    assert abs(c - 0.5) < 1e-10
    assert e.off_identity_mass() < 1e-8 * abs(c)
    assert e.est_error < 1e-9


def test_laurent_unit_residue():
    p = cf.SolutionParams(3, 1, 0.3 + 1j)
    e = cf.laurent_expand(p, 0.1, 0.32, normalization="unit-residue")
    assert abs(e.residue_constant() - 1) < 1e-10


def test_laurent_reconstructs_r():
    p = cf.SolutionParams(3, 2, 0.8j)
    e = cf.laurent_expand(p, -0.1, 0.25 + 0.1j)
    v = 0.0005 + 0.0003j
    approx = sum(e.coefficients[m] * v**m for m in cf.LAURENT_ORDERS)
    assert rel(approx, cf.r_elliptic(p, v, -0.1, 0.25 + 0.1j)) < 1e-9


def test_laurent_r0_skew():
    p = cf.SolutionParams(2, 1, 1j)
    a = cf.laurent_expand(p, 0.1, 0.32).coefficients[0]
    b = cf.laurent_expand(p, 0.32, 0.1).coefficients[0]
    assert rel(a, -ta.swap_legs(b)) < 1e-8


def test_laurent_error_decreases_with_samples():
    p = cf.SolutionParams(2, 1, 1j)
    e16 = cf.laurent_expand(p, 0.1, 0.32, radius=0.05, samples=16)
    e32 = cf.laurent_expand(p, 0.1, 0.32, radius=0.05, samples=32)
    assert e32.est_error < e16.est_error


def test_laurent_argument_checks():
    p = cf.SolutionParams(3, 1, 0.3 + 1j)
    with pytest.raises(PoleError):
        cf.laurent_expand(p, 0.1, 0.32, radius=0.5)
    with pytest.raises(ParameterError):
        cf.laurent_expand(p, 0.1, 0.32, radius=-0.1)
    with pytest.raises(ParameterError):
        cf.laurent_expand(p, 0.1, 0.32, samples=4)


def test_laurent_record():
    rec = cf.laurent_expand(REF, 0.1, 0.32).as_record()
    assert set(rec["coefficients"]) == {"-1", "0", "1", "2"}
    assert rec["sample_count"] == 32
    json.dumps(rec)


# --- gauge transforms ---------------------------------------------------------------------

def test_gauge_identity_is_noop():
    r = cf.closed_form_evaluator(REF)
    g = cf.gauge_conjugate(r, lambda x: np.eye(2))
    assert rel(g(*REF_POINT), r(*REF_POINT)) < 1e-15
    s = cf.gauge_scalar(r, lambda x: 0.7 - 0.2j)
    assert rel(s(*REF_POINT), r(*REF_POINT)) < 1e-15


def test_gauge_by_clock_matrix_is_noop():
    p = cf.SolutionParams(3, 1, 0.8j)
    r = cf.closed_form_evaluator(p)
    g = cf.gauge_conjugate(r, lambda x: p.pair.X)
    assert rel(g(0.1 + 0.1j, 0.1, 0.3), r(0.1 + 0.1j, 0.1, 0.3)) < 1e-13


def test_gauge_transforms_preserve_aybe():
    p = cf.SolutionParams(3, 1, 0.3 + 1j)
    r = cf.closed_form_evaluator(p)
    scheme = vf.SampleScheme(seed=1, count=30)
    assert vf.run_aybe(p, scheme, cf.gauge_conjugate(r, example_matrix_gauge(3))).verdict
    assert vf.run_aybe(p, scheme, cf.gauge_scalar(r, example_scalar_gauge())).verdict


def test_one_point_gauge_breaks_aybe():
    p = cf.SolutionParams(2, 1, 0.8j)
    g = cf.gauge_conjugate(cf.closed_form_evaluator(p), example_matrix_gauge(2), "one-point")
    assert vf.run_aybe(p, vf.SampleScheme(count=20), g).max_rel > 1e-2


def test_scalar_gauge_exchanges_periodicity_factor():
    # with beta(x) = 2 pi i x the 1-shift acquires the factor of the tau-shift
    p = cf.SolutionParams(2, 1, 0.8j)
    r = cf.closed_form_evaluator(p)
    g = cf.gauge_scalar(r, lambda x: 2j * np.pi * x)
    v, x1, x2 = REF_POINT
    factor = np.exp(-2j * np.pi * (x2 - x1))
    assert rel(g(v + 1, x1, x2), factor * g(v, x1, x2)) < 1e-13
    assert rel(r(v + p.tau, x1, x2), factor * r(v, x1, x2)) < 1e-13


def test_gauge_errors():
    r = cf.closed_form_evaluator(REF)
    with pytest.raises(ParameterError):
        cf.gauge_conjugate(r, lambda x: np.eye(2), "other")
    g = cf.gauge_conjugate(r, lambda x: np.zeros((2, 2)))
    with pytest.raises(DegeneracyError):
        g(*REF_POINT)


def test_deterministic():
    a = cf.r_elliptic(REF, *REF_POINT)
    b = cf.r_elliptic(cf.SolutionParams(2, 1, 0.8j), *REF_POINT)
    assert a.tobytes() == b.tobytes()
