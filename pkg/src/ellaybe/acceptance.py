"""The acceptance table: eleven numerical criteria with fixed grids and tolerances.

Each ``criterion_N()`` returns a :class:`CriterionResult`; :func:`run_all`
evaluates the whole table.  Shared by the test suite and ``ellaybe acceptance``.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import special_functions as sf
from . import tensor_algebra as ta
from . import verifier as vf
from .closed_form import (SolutionParams, closed_form_evaluator, gauge_conjugate, gauge_scalar,
                          laurent_expand)
from .faults import noisy, theta_sign_flip_closed_form, theta_sign_flip_construction
from .geometric import construction_evaluator

GRID_ND = ((2, 1), (3, 1), (3, 2), (4, 1), (5, 2))
GRID_TAU = (0.8j, 0.3 + 1j)
GRID = tuple(SolutionParams(n, d, tau) for n, d in GRID_ND for tau in GRID_TAU)
THEOREM_ND = ((2, 1), (3, 1), (3, 2))
QYBE_ND = ((2, 1), (3, 1))
CYBE_SEEDS = (0, 1, 2, 3, 4)
NEGATIVE_MARGIN = 1e4
RUNTIME_LIMITS = {1: 1.0, 2: 1.0, 3: 30.0, 5: 10.0}


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    runtime: float = 0.0
    details: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        summary = ", ".join(f"{k}={_fmt(v)}" for k, v in self.details.items()
                            if not isinstance(v, (dict, list)))
        return f"[{status}] criterion {self.number:2d} {self.name} ({self.runtime:.2f}s): {summary}"

    def as_record(self) -> dict:
        return {"criterion": self.number, "name": self.name, "passed": self.passed,
                "runtime": self.runtime, **self.details}


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.3g}"
    if isinstance(v, complex):
        return f"{v.real:.6g}{v.imag:+.3g}j"
    return str(v)


def _timed(number, name, body):
    t0 = time.perf_counter()
    passed, details = body()
    runtime = time.perf_counter() - t0
    limit = RUNTIME_LIMITS.get(number)
    if limit is not None:
        details["runtime_limit"] = limit
        passed = passed and runtime < limit
    return CriterionResult(number, name, bool(passed), runtime, details)


def _rel(a, b):
    a, b = np.asarray(a), np.asarray(b)
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(a), np.abs(b))))


# --- 1: theta functions ------------------------------------------------------------

THETA_TAUS = (1j, 0.3 + 1j, 0.8j)


def theta_law_residuals(count=100, seed=0) -> dict:
    """Worst relative residual per theta law over ``count`` random points per tau."""
    rng = np.random.default_rng(seed)
    out = {}

    def upd(key, val):
        out[key] = max(out.get(key, 0.0), val)

    for tau in THETA_TAUS:
        q = sf.nome(tau)
        z = rng.uniform(-2, 2, count) + 1j * tau.imag * rng.uniform(-1.5, 1.5, count)
        t1, t3 = sf.theta1(z, tau), sf.theta3(z, tau)
        upd("theta1_period_1", _rel(sf.theta1(z + 1, tau), -t1))
        upd("theta3_period_1", _rel(sf.theta3(z + 1, tau), t3))
        upd("theta1_period_tau", _rel(sf.theta1(z + tau, tau), -np.exp(-2j * np.pi * z) / q * t1))
        upd("theta3_period_tau", _rel(sf.theta3(z + tau, tau), np.exp(-2j * np.pi * z) / q * t3))
        upd("theta1_parity", _rel(sf.theta1(-z, tau), -t1))
        upd("theta3_parity", _rel(sf.theta3(-z, tau), t3))
        m = rng.integers(-3, 4, count)
        k = rng.integers(-2, 3, count)
        zero1 = m + k * tau
        zero3 = zero1 + (1 + tau) / 2
        # relative to the function size a quarter period away
        for name, f, zeros in (("theta1_zeros", sf.theta1, zero1), ("theta3_zeros", sf.theta3, zero3)):
            scale = np.maximum(np.abs(f(zeros + 0.25, tau)), np.abs(f(zeros + 0.25 * tau, tau)))
            upd(name, float(np.max(np.abs(f(zeros, tau)) / scale)))
    return out


def criterion_1() -> CriterionResult:
    def body():
        d = theta_law_residuals()
        laws_ok = all(v < 1e-12 for v in d.values())
        exact = math.pi**0.25 / math.gamma(0.75)
        d["theta3_0_i"] = abs(sf.theta3(0, 1j) - exact) / exact
        jacobi = 0.0
        for tau in THETA_TAUS:
            lhs = sf.theta1_deriv_zero(tau)
            rhs = math.pi * sf.theta2_zero(tau) * sf.theta3(0, tau) * sf.theta4_zero(tau)
            jacobi = max(jacobi, abs(lhs - rhs) / abs(lhs))
        d["theta1_deriv_jacobi"] = jacobi
        return laws_ok and d["theta3_0_i"] < 1e-12 and jacobi < 1e-10, d

    return _timed(1, "theta suite", body)


# --- 2: Kronecker sigma --------------------------------------------------------------

def _generic_pairs(rng, tau, count, margin=0.05):
    out = []
    while len(out) < count:
        u = complex(rng.uniform(-0.5, 0.5) + 1j * rng.uniform(-0.5, 0.5) * tau.imag)
        z = complex(rng.uniform(-0.5, 0.5) + 1j * rng.uniform(-0.5, 0.5) * tau.imag)
        dist = sf.lattice_distance(np.array([u, z, u + z]), tau)[0]
        if dist.min() > margin:
            out.append((u, z))
    return np.array(out).T


def sigma_law_residuals(count=100, seed=0) -> dict:
    rng = np.random.default_rng(seed)
    out = {}

    def upd(key, val):
        out[key] = max(out.get(key, 0.0), val)

    for tau in (1j, 0.3 + 1j):
        u, z = _generic_pairs(rng, tau, count)
        s = sf.kronecker_sigma(u, z, tau)
        upd("symmetry", _rel(sf.kronecker_sigma(z, u, tau), s))
        upd("u_period_1", _rel(sf.kronecker_sigma(u + 1, z, tau), s))
        upd("u_period_tau", _rel(sf.kronecker_sigma(u + tau, z, tau), np.exp(-2j * np.pi * z) * s))
        for d in (1, 2):
            upd(f"shift_d{d}",
                _rel(sf.kronecker_sigma(u - d * tau, z, tau), np.exp(2j * np.pi * d * z) * s))
        # z sigma(u, z) -> 1; the symmetric average cancels the O(z) term
        h = 1e-5
        lim = (h * sf.kronecker_sigma(u, h, tau) - h * sf.kronecker_sigma(u, -h, tau)) / 2
        upd("z_limit", float(np.max(np.abs(lim - 1))))
    return out


def criterion_2() -> CriterionResult:
    def body():
        d = sigma_law_residuals()
        return all(v < 1e-8 for v in d.values()), d

    return _timed(2, "Kronecker sigma", body)


# --- 3, 4: AYBE and skew-symmetry ------------------------------------------------------

def _grid_sweep(run, samples, evaluator_for=None, tol=None):
    reports = []
    for p in GRID:
        scheme = vf.SampleScheme(seed=0, count=samples)
        kwargs = {} if tol is None else {"tol": tol}
        ev = evaluator_for(p) if evaluator_for else None
        reports.append(run(p, scheme, ev, **kwargs))
    return reports


def _summarize(reports):
    worst = max(reports, key=lambda r: r.max_rel)
    return {
        "max_rel": worst.max_rel,
        "worst_config": f"n={worst.params.n},d={worst.params.d},tau={worst.params.tau}",
        "configs": len(reports),
        "samples": sum(r.samples_used for r in reports),
    }


def criterion_3(samples=200) -> CriterionResult:
    def body():
        reports = _grid_sweep(vf.run_aybe, samples)
        return all(r.verdict for r in reports), _summarize(reports)

    return _timed(3, "AYBE", body)


def criterion_4(samples=200) -> CriterionResult:
    def body():
        reports = _grid_sweep(vf.run_skew, samples)
        return all(r.verdict for r in reports), _summarize(reports)

    return _timed(4, "skew-symmetry", body)


# --- 5: closed form versus construction -----------------------------------------------

def criterion_5(points=50) -> CriterionResult:
    def body():
        scheme = vf.SampleScheme(seed=0, count=points)
        reports = [vf.theorem_main_check(SolutionParams(n, d, tau), scheme)
                   for n, d in THEOREM_ND for tau in GRID_TAU]
        d = _summarize(reports)
        d["max_c_spread"] = max(r.extra["c_spread"] for r in reports)
        consts = [complex(*r.extra["constant"]) for r in reports]
        d["constant"] = consts[int(np.argmax([abs(c - 1) for c in consts]))]
        return all(r.verdict for r in reports), d

    return _timed(5, "closed form vs construction", body)


# --- 6: Laurent ansatz ---------------------------------------------------------------

LAURENT_POINTS = ((0.1, 0.32), (-0.2 + 0.05j, 0.15), (0.0, 0.4 - 0.1j), (0.3, -0.1 + 0.2j))


def criterion_6() -> CriterionResult:
    def body():
        worst_mass = worst_spread = 0.0
        matches = {}
        ok = True
        for p in GRID:
            cs = []
            for x1, x2 in LAURENT_POINTS:
                e = laurent_expand(p, x1, x2)
                c = e.residue_constant()
                cs.append(c)
                worst_mass = max(worst_mass, e.off_identity_mass() / abs(c))
            cs = np.array(cs)
            spread = float(np.max(np.abs(cs - cs.mean())) / abs(cs.mean()))
            worst_spread = max(worst_spread, spread)
            c = complex(cs.mean())
            match = min((("1", abs(c - 1)), ("1/n", abs(c - 1 / p.n))), key=lambda t: t[1])
            matches[f"{p.n},{p.d},{p.tau}"] = {"c": [c.real, c.imag], "match": match[0],
                                               "distance": match[1]}
            ok = ok and match[1] < 1e-8
        labels = {m["match"] for m in matches.values()}
        d = {"off_identity_mass": worst_mass, "c_spread": worst_spread,
             "matched_normalization": "/".join(sorted(labels)), "per_config": matches}
        return ok and worst_mass < 1e-8 and worst_spread < 1e-8, d

    return _timed(6, "Laurent ansatz", body)


# --- 7: CYBE ---------------------------------------------------------------------------

CYBE_CONFIGS = (SolutionParams(2, 1, 0.3 + 1j), SolutionParams(3, 1, 0.8j))


def criterion_7(samples=100) -> CriterionResult:
    def body():
        orders, r0, r1 = set(), 0.0, float("inf")
        ok = True
        for p in CYBE_CONFIGS:
            for seed in CYBE_SEEDS:
                try:
                    sel = vf.cybe_source_select(p, vf.SampleScheme(seed=seed, count=samples))
                except vf.SelectionError:
                    ok = False
                    continue
                orders.add(sel.selected_order)
                r0 = max(r0, sel.residual_r0) if sel.selected_order == 0 else r0
                r1 = min(r1, sel.residual_r1)
        d = {"selected_order": "/".join(map(str, sorted(orders))) or "none",
             "max_residual_r0": r0, "min_residual_r1": r1}
        return ok and len(orders) == 1, d

    return _timed(7, "CYBE projection", body)


# --- 8: QYBE ---------------------------------------------------------------------------

def criterion_8(samples=100) -> CriterionResult:
    def body():
        reports = [vf.run_qybe(SolutionParams(n, d, tau), vf.SampleScheme(seed=0, count=samples))
                   for n, d in QYBE_ND for tau in GRID_TAU]
        d = _summarize(reports)
        d["u0"] = vf.QYBE_BASE_POINT
        return all(r.verdict for r in reports), d

    return _timed(8, "QYBE", body)


# --- 9: equivariance and quasi-periodicity -------------------------------------------------

def symmetry_residuals(params: SolutionParams, points) -> dict:
    """Relative residuals of the X/Y equivariance and the v-periods of r."""
    r = closed_form_evaluator(params)
    X, Y, tau = params.pair.X, params.pair.Y, params.tau
    out = dict.fromkeys(("ad_X", "ad_Y", "v_period_1", "v_period_tau"), 0.0)

    def rel(a, b):
        return float(np.linalg.norm(a - b) / max(np.linalg.norm(a), np.linalg.norm(b)))

    def conj(g, t):
        G = ta.to_operator(ta.simple_tensor(g, g))
        return ta.from_operator(G @ ta.to_operator(t) @ np.linalg.inv(G), params.n)

    for v, x1, x2 in points:
        t = r(v, x1, x2)
        out["ad_X"] = max(out["ad_X"], rel(conj(X, t), t))
        out["ad_Y"] = max(out["ad_Y"], rel(conj(Y, t), t))
        out["v_period_1"] = max(out["v_period_1"], rel(r(v + 1, x1, x2), t))
        out["v_period_tau"] = max(out["v_period_tau"],
                                  rel(r(v + tau, x1, x2), np.exp(-2j * np.pi * (x2 - x1)) * t))
    return out


def criterion_9(samples=50) -> CriterionResult:
    def body():
        d = dict.fromkeys(("ad_X", "ad_Y", "v_period_1", "v_period_tau"), 0.0)
        for p in GRID:
            points, _ = vf.sample_points(p, vf.SampleScheme(seed=0, count=samples), "theorem")
            for k, v in symmetry_residuals(p, points).items():
                d[k] = max(d[k], v)
        return all(v < 1e-9 for v in d.values()), d

    return _timed(9, "equivariance and periodicity", body)


# --- 10: gauge closure ------------------------------------------------------------------

def example_matrix_gauge(n, seed=0):
    """phi(x) = P diag(exp(a x)) P^-1, holomorphic and invertible everywhere."""
    rng = np.random.default_rng(seed)
    P = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)) + 2 * np.eye(n)
    Pinv = np.linalg.inv(P)
    a = rng.normal(size=n) + 1j * rng.normal(size=n)
    return lambda x: P @ np.diag(np.exp(a * x)) @ Pinv


def example_scalar_gauge(seed=0):
    rng = np.random.default_rng(seed)
    b0, b1, b2 = rng.normal(size=3) + 1j * rng.normal(size=3)
    return lambda x: b0 + b1 * x + b2 * x * x


def criterion_10(samples=200) -> CriterionResult:
    def body():
        conj = _grid_sweep(vf.run_aybe, samples, lambda p: gauge_conjugate(
            closed_form_evaluator(p), example_matrix_gauge(p.n)))
        scal = _grid_sweep(vf.run_aybe, samples, lambda p: gauge_scalar(
            closed_form_evaluator(p), example_scalar_gauge()))
        d = {"conjugation_max_rel": max(r.max_rel for r in conj),
             "scalar_max_rel": max(r.max_rel for r in scal)}
        return all(r.verdict for r in conj + scal), d

    return _timed(10, "gauge closure", body)


# --- 11: negative controls ----------------------------------------------------------------

def criterion_11(samples=200, points=50) -> CriterionResult:
    def body():
        d = {}
        aybe_tol = vf.TOLERANCES["aybe"]
        thm_tol = vf.TOLERANCES["theorem-main"]
        faults = {
            "sign_flip": (theta_sign_flip_closed_form, theta_sign_flip_construction),
            "noise": (lambda p: noisy(closed_form_evaluator(p)),
                      lambda p: noisy(construction_evaluator(p))),
        }
        ok = True
        for name, (bad_closed, bad_construction) in faults.items():
            a = min(r.max_rel for r in _grid_sweep(vf.run_aybe, samples, bad_closed))
            t = min(
                max(r.max_rel, r.extra["c_spread"])
                for r in (vf.theorem_main_check(SolutionParams(n, dd, tau),
                                                vf.SampleScheme(seed=0, count=points),
                                                construction=bad_construction(SolutionParams(n, dd, tau)))
                          for n, dd in THEOREM_ND for tau in GRID_TAU)
            )
            d[f"{name}_aybe_min_rel"] = a
            d[f"{name}_theorem_min_rel"] = t
            ok = ok and a >= NEGATIVE_MARGIN * aybe_tol and t >= NEGATIVE_MARGIN * thm_tol
        return ok, d

    return _timed(11, "negative controls", body)


CRITERIA = {i: globals()[f"criterion_{i}"] for i in range(1, 12)}


def run_all(numbers=None):
    for i in numbers or sorted(CRITERIA):
        yield CRITERIA[i]()
