"""Residual harness for the functional identities satisfied by r.

Evaluators are callables ``r(v, x1, x2) -> (n, n, n, n)`` tensor.  All norms
are Frobenius norms of flattened tensors; relative residuals divide by the
largest individual term of the identity, never by the (cancelling) sum.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from . import tensor_algebra as ta
from .closed_form import SolutionParams, closed_form_evaluator, laurent_expand, pole_distance
from .special_functions import lattice_distance
from .errors import DegeneracyError, PoleError, SelectionError

TOLERANCES = {
    "aybe": 1e-8,
    "theorem-main": 1e-8,
    "skew": 1e-10,
    "cybe": 1e-7,
    "qybe": 1e-7,
}
QYBE_BASE_POINT = 0.17 + 0.23j


@dataclass(frozen=True)
class SampleScheme:
    """Reproducible sampling of generic points.

    Boxes are ``(re_min, re_max, im_min, im_max)``.  Points closer than
    ``min_pole_distance`` to any pole of an evaluation they feed are skipped
    and counted.
    """

    seed: int = 0
    count: int = 100
    v_box: tuple = (-0.5, 0.5, -0.3, 0.3)
    x_box: tuple = (-0.5, 0.5, -0.25, 0.25)
    min_pole_distance: float = 0.05
    max_attempts_factor: int = 50

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("count must be >= 1")
        if not self.min_pole_distance > 0:
            raise ValueError("min_pole_distance must be positive")


@dataclass
class ResidualReport:
    identity_name: str
    params: SolutionParams
    max_abs: float
    max_rel: float
    worst_point: dict
    samples_used: int
    skipped: int
    seed: int
    tolerance: float
    extra: dict = field(default_factory=dict)

    @property
    def verdict(self) -> bool:
        spread = self.extra.get("c_spread", 0.0)
        return bool(self.max_rel < self.tolerance and spread < self.tolerance)

    def as_record(self) -> dict:
        rec = {
            "identity": self.identity_name,
            "n": self.params.n,
            "d": self.params.d,
            "tau": [self.params.tau.real, self.params.tau.imag],
            "max_abs": self.max_abs,
            "max_rel": self.max_rel,
            "worst_point": self.worst_point,
            "samples_used": self.samples_used,
            "skipped": self.skipped,
            "seed": self.seed,
            "tolerance": self.tolerance,
            "verdict": "pass" if self.verdict else "fail",
        }
        rec.update(self.extra)
        return rec


def _rel(diff, terms):
    scale = max(float(np.linalg.norm(t)) for t in terms)
    err = float(np.linalg.norm(diff))
    return err, (err / scale if scale > 0 else 0.0)


def _aybe_parts(r, u, v, x1, x2, x3):
    lhs = ta.three_mul(ta.embed(r(u, x1, x2), 12), ta.embed(r(u + v, x2, x3), 23))
    rhs1 = ta.three_mul(ta.embed(r(u + v, x1, x3), 13), ta.embed(r(-v, x1, x2), 12))
    rhs2 = ta.three_mul(ta.embed(r(v, x2, x3), 23), ta.embed(r(u, x1, x3), 13))
    return _rel(lhs - rhs1 - rhs2, (lhs, rhs1, rhs2))


def aybe_residual(r, u, v, x1, x2, x3) -> float:
    """Relative residual of
    r(u;x1,x2)^12 r(u+v;x2,x3)^23 = r(u+v;x1,x3)^13 r(-v;x1,x2)^12 + r(v;x2,x3)^23 r(u;x1,x3)^13.
    """
    return _aybe_parts(r, u, v, x1, x2, x3)[1]


def _skew_parts(r, v, x1, x2):
    a = r(v, x1, x2)
    b = ta.swap_legs(r(-v, x2, x1))
    err = float(np.linalg.norm(a + b))
    scale = float(np.linalg.norm(a))
    return err, (err / scale if scale > 0 else 0.0)


def skew_residual(r, v, x1, x2) -> float:
    """||r(v;x1,x2) + r^21(-v;x2,x1)|| / ||r(v;x1,x2)||."""
    return _skew_parts(r, v, x1, x2)[1]


def nondegeneracy(t) -> dict:
    L = ta.can(t)
    sv = np.linalg.svd(L, compute_uv=False)
    cond = float(sv[0] / sv[-1]) if sv[-1] > 0 else float("inf")
    return {"condition_number": cond, "det_modulus": float(abs(np.linalg.det(L)))}


def _cybe_parts(rbar, x1, x2, x3):
    a = ta.embed(rbar(x1, x2), 12)
    b = ta.embed(rbar(x1, x3), 13)
    c = ta.embed(rbar(x2, x3), 23)
    brackets = (ta.commutator(a, b), ta.commutator(b, c), ta.commutator(a, c))
    return _rel(sum(brackets), brackets)


def cybe_residual(rbar, x1, x2, x3) -> float:
    """[r12, r13] + [r13, r23] + [r12, r23] normalized by the largest bracket."""
    return _cybe_parts(rbar, x1, x2, x3)[1]


def _qybe_parts(R, x1, x2, x3):
    r12 = ta.embed(R(x1, x2), 12)
    r13 = ta.embed(R(x1, x3), 13)
    r23 = ta.embed(R(x2, x3), 23)
    lhs = ta.three_mul(ta.three_mul(r12, r13), r23)
    rhs = ta.three_mul(ta.three_mul(r23, r13), r12)
    return _rel(lhs - rhs, (lhs, rhs))


def qybe_residual(R, x1, x2, x3) -> float:
    """R12 R13 R23 = R23 R13 R12, normalized by the larger side."""
    return _qybe_parts(R, x1, x2, x3)[1]


# --- sampling -----------------------------------------------------------------

def _draw(rng, box, size):
    re = rng.uniform(box[0], box[1], size)
    im = rng.uniform(box[2], box[3], size)
    return re + 1j * im


def _generic(params, evaluations, threshold):
    for v, x1, x2 in evaluations:
        if v is None:
            dist = float(lattice_distance(x2 - x1, params.tau)[0])
        else:
            dist = pole_distance(params, v, x2 - x1)
        if dist < threshold:
            return False
    return True


_KIND_NAMES = {
    "aybe": ("u", "v", "x1", "x2", "x3"),
    "skew": ("v", "x1", "x2"),
    "theorem": ("v", "x1", "x2"),
    "curve": ("x1", "x2", "x3"),
}


def _evaluations(kind, p, u0):
    if kind == "aybe":
        u, v, x1, x2, x3 = p
        return [(u, x1, x2), (u + v, x2, x3), (u + v, x1, x3), (-v, x1, x2), (v, x2, x3),
                (u, x1, x3)]
    if kind in ("skew", "theorem"):
        v, x1, x2 = p
        return [(v, x1, x2), (-v, x2, x1)]
    x1, x2, x3 = p
    return [(u0, x1, x2), (u0, x1, x3), (u0, x2, x3)]


def sample_points(params: SolutionParams, scheme: SampleScheme, kind: str, u0=QYBE_BASE_POINT):
    """Draw ``scheme.count`` generic points; returns ``(points, skipped)``."""
    rng = np.random.default_rng(scheme.seed)
    nv = {"aybe": 2, "skew": 1, "theorem": 1, "curve": 0}[kind]
    nx = len(_KIND_NAMES[kind]) - nv
    points, skipped = [], 0
    for _ in range(scheme.count * scheme.max_attempts_factor):
        if len(points) == scheme.count:
            break
        p = tuple(_draw(rng, scheme.v_box, nv)) + tuple(_draw(rng, scheme.x_box, nx))
        p = tuple(complex(z) for z in p)
        if _generic(params, _evaluations(kind, p, u0), scheme.min_pole_distance):
            points.append(p)
        else:
            skipped += 1
    return points, skipped


def _point_record(kind, p):
    return {name: [z.real, z.imag] for name, z in zip(_KIND_NAMES[kind], p)}


def _sweep(name, kind, params, scheme, tol, parts, u0=QYBE_BASE_POINT, extra=None):
    points, skipped = sample_points(params, scheme, kind, u0)
    max_abs = max_rel = 0.0
    worst = {}
    used = 0
    for p in points:
        try:
            err, rel = parts(*p)
        except PoleError:
            skipped += 1
            continue
        used += 1
        max_abs = max(max_abs, err)
        if rel >= max_rel:
            max_rel, worst = rel, _point_record(kind, p)
    if used == 0:
        max_rel = max_abs = float("inf")
    return ResidualReport(name, params, max_abs, max_rel, worst, used, skipped, scheme.seed,
                          tol, extra or {})


def run_aybe(params, scheme, evaluator=None, tol=TOLERANCES["aybe"]) -> ResidualReport:
    r = evaluator or closed_form_evaluator(params)
    return _sweep("aybe", "aybe", params, scheme, tol, lambda *p: _aybe_parts(r, *p))


def run_skew(params, scheme, evaluator=None, tol=TOLERANCES["skew"]) -> ResidualReport:
    r = evaluator or closed_form_evaluator(params)
    return _sweep("skew", "skew", params, scheme, tol, lambda *p: _skew_parts(r, *p))


def run_qybe(params, scheme, evaluator=None, u0=QYBE_BASE_POINT,
             tol=TOLERANCES["qybe"]) -> ResidualReport:
    r = evaluator or closed_form_evaluator(params)

    def R(x1, x2):
        return r(u0, x1, x2)

    return _sweep("qybe", "curve", params, scheme, tol, lambda *p: _qybe_parts(R, *p), u0,
                  {"u0": [u0.real, u0.imag]})


def run_nondegeneracy(params, scheme, evaluator=None) -> dict:
    r = evaluator or closed_form_evaluator(params)
    points, _ = sample_points(params, scheme, "skew")
    stats = [nondegeneracy(r(*p)) for p in points]
    return {
        "max_condition_number": max(s["condition_number"] for s in stats),
        "min_det_modulus": min(s["det_modulus"] for s in stats),
    }


# --- CYBE source selection ------------------------------------------------------

@dataclass
class CYBESelection:
    selected_order: int
    residual_r0: float
    residual_r1: float
    samples_used: int
    seed: int

    def as_record(self) -> dict:
        return asdict(self)


def projected_coefficient(params, order, expand=None):
    """rbar(x1, x2) = (pi (x) pi) r_order(x1, x2) from the numerical Laurent expansion."""
    expand = expand or (lambda x1, x2: laurent_expand(params, x1, x2))

    def rbar(x1, x2):
        return ta.sl_project(expand(x1, x2).coefficients[order])

    return rbar


def cybe_source_select(params, scheme, tol=TOLERANCES["cybe"], expand=None) -> CYBESelection:
    """CYBE residuals of the projected r_0 and r_1; exactly one must pass."""
    expand = expand or (lambda x1, x2: laurent_expand(params, x1, x2))
    points, _ = sample_points(params, scheme, "curve", u0=None)
    cache = {}

    def cached(x1, x2):
        if (x1, x2) not in cache:
            cache[(x1, x2)] = expand(x1, x2)
        return cache[(x1, x2)]

    residual = {}
    for order in (0, 1):
        rbar = projected_coefficient(params, order, cached)
        residual[order] = max(cybe_residual(rbar, *p) for p in points)
    passing = [m for m in (0, 1) if residual[m] < tol]
    if len(passing) != 1:
        raise SelectionError(
            f"expected exactly one Laurent order to satisfy CYBE at tol {tol:g}; "
            f"residuals r0={residual[0]:.3g}, r1={residual[1]:.3g}"
        )
    return CYBESelection(passing[0], residual[0], residual[1], len(points), scheme.seed)


def run_cybe(params, scheme, tol=TOLERANCES["cybe"], expand=None) -> ResidualReport:
    """CYBE report for the selected order (fails if selection fails)."""
    try:
        sel = cybe_source_select(params, scheme, tol, expand)
        rel = sel.residual_r0 if sel.selected_order == 0 else sel.residual_r1
        extra = sel.as_record()
    except SelectionError as exc:
        rel, extra = float("inf"), {"selection_error": str(exc)}
        sel = None
    return ResidualReport("cybe", params, rel, rel, {}, sel.samples_used if sel else 0, 0,
                          scheme.seed, tol, extra)


# --- closed form versus construction ---------------------------------------------

def theorem_main_check(params, scheme, tol=TOLERANCES["theorem-main"], construction=None,
                       closed=None) -> ResidualReport:
    """Fit one complex constant c between the construction and the closed form.

    Reports the maximum relative deviation after the fit (``max_rel``) and the
    spread of per-point constants around the global one (``c_spread``).
    """
    from .geometric import construction_evaluator

    closed = closed or closed_form_evaluator(params)
    construction = construction or construction_evaluator(params)
    points, skipped = sample_points(params, scheme, "theorem")
    got, want, used = [], [], []
    for p in points:
        try:
            got.append(construction(*p))
            want.append(closed(*p))
            used.append(p)
        except (PoleError, DegeneracyError):
            skipped += 1
    if not used:
        raise DegeneracyError("no usable sample points for the fit")
    got, want = np.stack(got), np.stack(want)
    ww = np.vdot(want, want).real
    if not ww > 0:
        raise DegeneracyError("closed form vanishes on the sample; fit is ill-conditioned")
    c = complex(np.vdot(want, got) / ww)
    devs = [float(np.linalg.norm(g - c * w) / np.linalg.norm(g)) for g, w in zip(got, want)]
    consts = [complex(np.vdot(w, g) / np.vdot(w, w).real) for g, w in zip(got, want)]
    spread = max(abs(ci - c) for ci in consts) / abs(c) if c != 0 else float("inf")
    i = int(np.argmax(devs))
    max_abs = max(float(np.linalg.norm(g - c * w)) for g, w in zip(got, want))
    return ResidualReport(
        "theorem-main", params, max_abs, max(devs), _point_record("theorem", used[i]),
        len(used), skipped, scheme.seed, tol,
        {"constant": [c.real, c.imag], "c_spread": float(spread)},
    )
