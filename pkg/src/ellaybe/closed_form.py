"""The elliptic AYBE solution in closed form.

    r(v; x1, x2) = sum_{(k,l) in I} exp(2 pi i d k x / n) sigma(v + (d/n)(k tau + l), x)
                   Z^v_(k,l) (x) Z_(k,l),        x = x2 - x1.

The (n, n) term carries the only pole at v = 0; its residue is ``(1/n) 1 (x) 1``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import gcd

import numpy as np

from . import special_functions as sf
from . import tensor_algebra as ta
from .errors import DegeneracyError, ParameterError, PoleError

NORMALIZATIONS = ("raw", "unit-residue")


@dataclass(frozen=True)
class SolutionParams:
    n: int
    d: int
    tau: complex

    def __post_init__(self):
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "d", int(self.d))
        object.__setattr__(self, "tau", complex(self.tau))
        if not (0 < self.d < self.n) or gcd(self.n, self.d) != 1:
            raise ParameterError(f"need 0 < d < n, gcd(n, d) = 1; got ({self.n}, {self.d})")
        if not self.tau.imag > 0:
            raise ParameterError(f"tau={self.tau} is not in the upper half-plane")

    @cached_property
    def modular(self) -> sf.ModularParameter:
        return sf.ModularParameter(self.tau)

    @cached_property
    def pair(self) -> ta.HeisenbergPair:
        return ta.heisenberg_pair(self.n, self.d)

    @cached_property
    def indices(self) -> np.ndarray:
        """Rows (k, l) of I in the order used by :attr:`basis`."""
        return np.array(ta.index_set(self.n))

    @cached_property
    def basis(self) -> np.ndarray:
        return ta.basis_tensors(self.pair)

    @cached_property
    def shifts(self) -> np.ndarray:
        """(d/n)(k tau + l) for each (k, l)."""
        k, l = self.indices.T
        return self.d / self.n * (k * self.tau + l)

    @cached_property
    def pole_set(self) -> np.ndarray:
        """Poles of r in v, one representative -(d/n)(k tau + l) per (k, l), reduced."""
        z0, _, _ = sf._reduce(-self.shifts, self.tau)
        return z0

    @cached_property
    def min_pole_distance(self) -> float:
        """Distance from v = 0 to the nearest other pole of r."""
        dist, _ = sf.lattice_distance(self.shifts[:-1], self.tau)
        return float(dist.min()) if dist.size else float(min(1.0, abs(self.tau)))


@dataclass(frozen=True)
class EvaluationPoint:
    v: complex
    x1: complex
    x2: complex

    @property
    def x(self) -> complex:
        return self.x2 - self.x1

    def as_record(self) -> dict:
        return {k: [getattr(self, k).real, getattr(self, k).imag] for k in ("v", "x1", "x2")}


def pole_distance(params: SolutionParams, v, x) -> float:
    """Smallest distance of any sigma argument in r(v; x1, x2) to the lattice."""
    dx, _ = sf.lattice_distance(x, params.tau)
    dv, _ = sf.lattice_distance(complex(v) + params.shifts, params.tau)
    return float(min(dx.min(), dv.min()))


def check_poles(params: SolutionParams, v, x, threshold=sf.POLE_THRESHOLD):
    """Raise :class:`PoleError` if x or any sigma argument of r(v; .) is near the lattice."""
    dist, nearest = sf.lattice_distance(x, params.tau)
    if np.any(dist < threshold):
        raise PoleError(
            f"x = x2 - x1 = {x} within {threshold:g} of lattice point {complex(np.ravel(nearest)[0])}",
            lattice_point=complex(np.ravel(nearest)[0]),
            distance=float(np.min(dist)),
        )
    u = np.asarray(v, dtype=complex)[..., None] + params.shifts
    dist, nearest = sf.lattice_distance(u, params.tau)
    bad = dist < threshold
    if np.any(bad):
        where = np.argwhere(bad)[0]
        k, l = params.indices[where[-1]]
        point = complex(nearest[tuple(where)])
        raise PoleError(
            f"v + (d/n)(k tau + l) within {threshold:g} of lattice point {point} at (k, l) = ({k}, {l})",
            lattice_point=point,
            index=(int(k), int(l)),
            distance=float(dist[tuple(where)]),
        )


def elliptic_coefficients(params: SolutionParams, v, x1, x2, policy=sf.DEFAULT_POLICY,
                          threshold=sf.POLE_THRESHOLD):
    """Scalar coefficients of Z^v_(k,l) (x) Z_(k,l); shape ``v.shape + (n^2,)``."""
    x = complex(x2) - complex(x1)
    check_poles(params, v, x, threshold)
    k = params.indices[:, 0]
    u = np.asarray(v, dtype=complex)[..., None] + params.shifts
    phase = np.exp(2j * np.pi * params.d * k * x / params.n)
    return phase * sf.kronecker_sigma(u, x, params.tau, policy, threshold=0)


def _scale(params, normalization):
    if normalization not in NORMALIZATIONS:
        raise ParameterError(f"normalization must be one of {NORMALIZATIONS}")
    return params.n if normalization == "unit-residue" else 1


def r_elliptic(params: SolutionParams, v, x1, x2, normalization="raw",
               policy=sf.DEFAULT_POLICY) -> np.ndarray:
    """Two-tensor r(v; x1, x2); an array ``v`` gives a stack of tensors.

    ``normalization="unit-residue"`` rescales by n so that the residue at
    v = 0 is ``1 (x) 1``.
    """
    coeffs = elliptic_coefficients(params, v, x1, x2, policy)
    return _scale(params, normalization) * np.einsum("...i,iabcd->...abcd", coeffs, params.basis)


def closed_form_evaluator(params: SolutionParams, normalization="raw", policy=sf.DEFAULT_POLICY):
    """Callable ``r(v, x1, x2)`` for use with the verifier."""
    _scale(params, normalization)

    def evaluate(v, x1, x2):
        return r_elliptic(params, v, x1, x2, normalization, policy)

    evaluate.params = params
    return evaluate


def r_coeff_theta(params: SolutionParams, k: int, l: int, v, z, policy=sf.DEFAULT_POLICY,
                  threshold=sf.POLE_THRESHOLD):
    """The theta_3 quotient coefficient of the construction, for basis index (k, l).

    exp(-2 pi i d k z/n) theta'(h) theta(z + v + h - s) / (theta(v + h - s) theta(z + h)),
    with h = (1 + tau)/2, s = (d/n)(k tau - l) and theta = theta_3.
    """
    tau = params.tau
    if not (1 <= k <= params.n and 1 <= l <= params.n):
        raise ParameterError(f"(k, l) = ({k}, {l}) outside I")
    s = params.d / params.n * (k * tau - l)
    sf.check_not_pole(np.asarray(v) - s, tau, threshold, what="v - (d/n)(k tau - l)")
    sf.check_not_pole(z, tau, threshold, what="z")
    h = (1 + tau) / 2
    z = np.asarray(z, dtype=complex)
    v = np.asarray(v, dtype=complex)
    num = sf.theta3_deriv_half_period(tau, policy) * sf.theta3(z + v + h - s, tau, policy)
    den = sf.theta3(v + h - s, tau, policy) * sf.theta3(z + h, tau, policy)
    return sf._out(np.exp(-2j * np.pi * params.d * k * z / params.n) * num / den)


LAURENT_ORDERS = (-1, 0, 1, 2)


@dataclass
class LaurentExpansion:
    x1: complex
    x2: complex
    coefficients: dict
    circle_radius: float
    sample_count: int
    est_error: float
    n: int = field(default=0)

    def residue_constant(self) -> complex:
        """c such that the order -1 coefficient is closest to c (1 (x) 1)."""
        t = self.coefficients[-1]
        n = t.shape[0]
        return complex(np.einsum("aacc->", t) / n**2)

    def off_identity_mass(self) -> float:
        t = self.coefficients[-1]
        return float(np.linalg.norm(t - self.residue_constant() * ta.identity_tensor(t.shape[0])))

    def as_record(self) -> dict:
        from .serialization import tensor_to_json

        return {
            "x1": [self.x1.real, self.x1.imag],
            "x2": [self.x2.real, self.x2.imag],
            "circle_radius": self.circle_radius,
            "sample_count": self.sample_count,
            "est_error": self.est_error,
            "residue_constant": [self.residue_constant().real, self.residue_constant().imag],
            "off_identity_mass": self.off_identity_mass(),
            "coefficients": {str(k): tensor_to_json(v) for k, v in self.coefficients.items()},
        }


def _circle_coefficients(evaluator, x1, x2, radius, samples):
    v = radius * np.exp(2j * np.pi * np.arange(samples) / samples)
    values = evaluator(v, x1, x2)
    return {
        m: np.einsum("j,jabcd->abcd", v ** (-m), values) / samples for m in LAURENT_ORDERS
    }


def laurent_expand(params: SolutionParams, x1, x2, radius=None, samples=32,
                   normalization="raw", evaluator=None) -> LaurentExpansion:
    """Laurent coefficients of r in v at v = 0 by discrete Fourier inversion on a circle.

    The default radius is 0.05 times the distance to the nearest foreign pole.
    ``est_error`` is the largest coefficient change when the sample count doubles.
    """
    samples = int(samples)
    if samples < 8:
        raise ParameterError("samples must be >= 8")
    dmin = params.min_pole_distance
    if radius is None:
        radius = 0.05 * dmin
    if not radius > 0:
        raise ParameterError(f"radius must be positive, got {radius:g}")
    if not radius < dmin:
        raise PoleError(
            f"radius {radius:g} encloses a pole other than v = 0 (nearest at distance {dmin:g})",
            distance=dmin,
        )
    if evaluator is None:
        evaluator = closed_form_evaluator(params, normalization)
    x1, x2 = complex(x1), complex(x2)
    coarse = _circle_coefficients(evaluator, x1, x2, radius, samples)
    fine = _circle_coefficients(evaluator, x1, x2, radius, 2 * samples)
    est = max(float(np.max(np.abs(coarse[m] - fine[m]))) for m in LAURENT_ORDERS)
    return LaurentExpansion(x1, x2, coarse, float(radius), samples, est, params.n)


def gauge_conjugate(evaluator, phi, variant="two-point"):
    """Gauge transform by a matrix-valued function ``phi``.

    ``"two-point"``: (phi(x1) (x) phi(x2)) r (phi(x1) (x) phi(x2))^-1.
    ``"one-point"``: (phi(x1) (x) phi(x1)) r, left multiplication at one point.
    """
    if variant not in ("two-point", "one-point"):
        raise ParameterError(f"unknown gauge variant {variant!r}")

    def _inv(g, x):
        try:
            return np.linalg.inv(g)
        except np.linalg.LinAlgError as exc:
            raise DegeneracyError(f"phi({x}) is singular") from exc

    def transformed(v, x1, x2):
        r = evaluator(v, x1, x2)
        g1 = np.asarray(phi(x1), dtype=complex)
        if variant == "one-point":
            _inv(g1, x1)
            return _apply(ta.simple_tensor(g1, g1), r)
        g2 = np.asarray(phi(x2), dtype=complex)
        g = ta.simple_tensor(g1, g2)
        ginv = ta.simple_tensor(_inv(g1, x1), _inv(g2, x2))
        return _apply(_apply(g, r), ginv, right=True)

    return transformed


def _apply(g, r, right=False):
    # r may be a stack of tensors over leading axes
    G = ta.to_operator(g)
    n = g.shape[0]
    R = r.reshape((-1,) + (n,) * 4)
    out = [ta.from_operator(ta.to_operator(t) @ G if right else G @ ta.to_operator(t), n)
           for t in R]
    return np.stack(out).reshape(r.shape)


def gauge_scalar(evaluator, beta):
    """Multiply r(v; x1, x2) by exp(v (beta(x1) - beta(x2)))."""

    def transformed(v, x1, x2):
        r = evaluator(v, x1, x2)
        factor = np.exp(np.asarray(v) * (beta(x1) - beta(x2)))
        return factor[..., None, None, None, None] * r

    return transformed
