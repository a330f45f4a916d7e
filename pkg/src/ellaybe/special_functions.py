"""Jacobi theta functions theta_1, theta_3 and the Kronecker elliptic function.

Conventions (nome ``q = exp(pi*i*tau)``)::

    theta1(z|tau) = 2 q^(1/4) sum_{n>=0} (-1)^n q^(n(n+1)) sin((2n+1) pi z)
    theta3(z|tau) = 1 + 2 sum_{n>=1} q^(n^2) cos(2 pi n z)
    sigma(u, z)   = theta1'(0) theta1(u + z) / (theta1(u) theta1(z))

All evaluators accept scalars or numpy arrays and broadcast.  Arguments are
reduced into the strip ``|Re z| <= 1/2, |Im z| <= Im(tau)/2`` before the
series is summed; the quasi-periodicity factor is applied afterwards.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError, PoleError, PrecisionError

POLE_THRESHOLD = 1e-6
_NEIGHBOURS = np.array([(a, b) for a in (-1, 0, 1) for b in (-1, 0, 1)])


@dataclass(frozen=True)
class ModularParameter:
    tau: complex
    q: complex = field(init=False)

    def __post_init__(self):
        tau = complex(self.tau)
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "q", nome(tau))


@dataclass(frozen=True)
class PrecisionPolicy:
    """Truncation rule for the theta q-series.

    Summation stops once the a-priori bound of the current term drops below
    ``target_abs_error`` times the largest bound seen so far.
    """

    target_abs_error: float = 1e-17
    max_series_terms: int = 64

    def __post_init__(self):
        if not self.target_abs_error > 0:
            raise ParameterError("target_abs_error must be positive")
        if int(self.max_series_terms) < 8:
            raise ParameterError("max_series_terms must be at least 8")


DEFAULT_POLICY = PrecisionPolicy()


@dataclass(frozen=True)
class ReducedArgument:
    """``z = z0 + m + k*tau`` and ``theta(z) = multiplier * theta(z0)``."""

    z0: complex
    m: int
    k: int
    multiplier: complex


def _check_tau(tau) -> complex:
    tau = complex(tau)
    if not tau.imag > 0:
        raise ParameterError(f"tau={tau} is not in the upper half-plane")
    return tau


def nome(tau) -> complex:
    tau = _check_tau(tau)
    return complex(np.exp(1j * np.pi * tau))


def _out(a):
    a = np.asarray(a)
    return complex(a) if a.ndim == 0 else a


def _reduce(z, tau):
    z = np.asarray(z, dtype=complex)
    k = np.rint(z.imag / tau.imag)
    z1 = z - k * tau
    m = np.rint(z1.real)
    return z1 - m, m.astype(int), k.astype(int)


def _multiplier(which, z0, m, k, tau):
    mult = np.exp(-1j * np.pi * (k * k * tau + 2 * k * z0))
    if which == "theta1":
        mult = mult * np.where((m + k) % 2 == 0, 1.0, -1.0)
    return mult


def reduce_argument(z, tau, which="theta3") -> ReducedArgument:
    tau = _check_tau(tau)
    if which not in ("theta1", "theta3"):
        raise ParameterError(f"unknown theta function {which!r}")
    z0, m, k = _reduce(z, tau)
    mult = _multiplier(which, z0, m, k, tau)
    return ReducedArgument(complex(z0), int(m), int(k), complex(mult))


def _sum_series(term, policy):
    """Sum ``term(j) -> (value, bound)`` for j = 0, 1, ... until converged."""
    total = 0
    running = 0.0
    for j in range(policy.max_series_terms):
        value, bound = term(j)
        total = total + value
        running = np.maximum(running, bound)
        if np.all(bound <= policy.target_abs_error * running):
            return total
    raise PrecisionError(
        f"theta series not converged after {policy.max_series_terms} terms"
    )


def theta1_series(z, tau, policy: PrecisionPolicy = DEFAULT_POLICY):
    """Direct truncated sine series for theta_1, no argument reduction."""
    tau = _check_tau(tau)
    z = np.asarray(z, dtype=complex)
    q = np.exp(1j * np.pi * tau)
    grow = np.exp(np.pi * np.abs(z.imag))

    def term(j):
        c = (-1) ** j * q ** (j * (j + 1))
        bound = abs(c) * grow ** (2 * j + 1)
        return c * np.sin((2 * j + 1) * np.pi * z), bound

    return _out(2 * np.exp(1j * np.pi * tau / 4) * _sum_series(term, policy))


def theta3_series(z, tau, policy: PrecisionPolicy = DEFAULT_POLICY):
    """Direct truncated cosine series for theta_3, no argument reduction."""
    tau = _check_tau(tau)
    z = np.asarray(z, dtype=complex)
    q = np.exp(1j * np.pi * tau)
    grow = np.exp(2 * np.pi * np.abs(z.imag))

    def term(j):
        if j == 0:
            return np.ones_like(z), np.ones(z.shape)
        c = 2 * q ** (j * j)
        return c * np.cos(2 * np.pi * j * z), abs(c) * grow**j

    return _out(_sum_series(term, policy))


def theta1(z, tau, policy: PrecisionPolicy = DEFAULT_POLICY):
    tau = _check_tau(tau)
    z0, m, k = _reduce(z, tau)
    return _out(_multiplier("theta1", z0, m, k, tau) * theta1_series(z0, tau, policy))


def theta3(z, tau, policy: PrecisionPolicy = DEFAULT_POLICY):
    tau = _check_tau(tau)
    z0, m, k = _reduce(z, tau)
    return _out(_multiplier("theta3", z0, m, k, tau) * theta3_series(z0, tau, policy))


def theta1_deriv_zero(tau, policy: PrecisionPolicy = DEFAULT_POLICY) -> complex:
    """theta_1'(0) by term-wise differentiation of the sine series."""
    tau = _check_tau(tau)
    q = np.exp(1j * np.pi * tau)

    def term(j):
        c = (-1) ** j * (2 * j + 1) * q ** (j * (j + 1))
        return c, abs(c)

    return complex(2 * np.pi * np.exp(1j * np.pi * tau / 4) * _sum_series(term, policy))


def theta3_deriv_series(z, tau, policy: PrecisionPolicy = DEFAULT_POLICY):
    """Term-wise derivative of the theta_3 series (valid for |Im z| <= Im tau / 2)."""
    tau = _check_tau(tau)
    z = np.asarray(z, dtype=complex)
    q = np.exp(1j * np.pi * tau)
    grow = np.exp(2 * np.pi * np.abs(z.imag))

    def term(j):
        n = j + 1
        c = -4 * np.pi * n * q ** (n * n)
        return c * np.sin(2 * np.pi * n * z), abs(c) * grow**n

    return _out(_sum_series(term, policy))


def theta3_deriv_half_period(tau, policy: PrecisionPolicy = DEFAULT_POLICY) -> complex:
    """theta_3'((1 + tau)/2) = i exp(-pi i tau / 4) theta_1'(0)."""
    tau = _check_tau(tau)
    return 1j * np.exp(-1j * np.pi * tau / 4) * theta1_deriv_zero(tau, policy)


def theta2_zero(tau, policy: PrecisionPolicy = DEFAULT_POLICY) -> complex:
    tau = _check_tau(tau)
    q = np.exp(1j * np.pi * tau)

    def term(j):
        c = q ** (j * (j + 1))
        return c, abs(c)

    return complex(2 * np.exp(1j * np.pi * tau / 4) * _sum_series(term, policy))


def theta4_zero(tau, policy: PrecisionPolicy = DEFAULT_POLICY) -> complex:
    tau = _check_tau(tau)
    q = np.exp(1j * np.pi * tau)

    def term(j):
        if j == 0:
            return 1.0, 1.0
        c = 2 * (-1) ** j * q ** (j * j)
        return c, abs(c)

    return complex(_sum_series(term, policy))


def theta_shifted(x, w, tau, policy: PrecisionPolicy = DEFAULT_POLICY):
    """theta_3(w + (1 + tau)/2 - x); vanishes exactly at w = x mod lattice."""
    tau = _check_tau(tau)
    return theta3(np.asarray(w) + (1 + tau) / 2 - np.asarray(x), tau, policy)


def lattice_distance(z, tau):
    """Distance from ``z`` to Z + tau Z and the nearest lattice point."""
    tau = _check_tau(tau)
    z = np.asarray(z, dtype=complex)
    z0, m, k = _reduce(z, tau)
    offsets = (_NEIGHBOURS[:, 0] + _NEIGHBOURS[:, 1] * tau)
    dist = np.abs(z0[..., None] - offsets)
    j = np.argmin(dist, axis=-1)
    best = np.take_along_axis(dist, j[..., None], axis=-1)[..., 0]
    nearest = (m + k * tau) + offsets[j]
    return best, nearest


def check_not_pole(z, tau, threshold=POLE_THRESHOLD, what="argument"):
    dist, nearest = lattice_distance(z, tau)
    bad = dist < threshold
    if np.any(bad):
        i = np.flatnonzero(np.ravel(bad))[0]
        point = complex(np.ravel(nearest)[i])
        raise PoleError(
            f"{what} within {threshold:g} of lattice point {point}",
            lattice_point=point,
            distance=float(np.ravel(dist)[i]),
        )


def kronecker_sigma(u, z, tau, policy: PrecisionPolicy = DEFAULT_POLICY, method="ratio",
                    threshold=POLE_THRESHOLD):
    """Kronecker elliptic function sigma(u, z).

    ``method="ratio"`` (default) evaluates the theta quotient.
    ``method="series"`` uses :func:`kronecker_sigma_series` and only serves as
    a cross-check; it requires ``-Im(tau) < Im(z) < 0``.
    Arguments within ``threshold`` of the lattice raise :class:`PoleError`;
    ``threshold=0`` skips the check.
    """
    tau = _check_tau(tau)
    if threshold > 0:
        check_not_pole(u, tau, threshold, what="u")
        check_not_pole(z, tau, threshold, what="z")
    if method == "series":
        return kronecker_sigma_series(u, z, tau)
    if method != "ratio":
        raise ParameterError(f"unknown method {method!r}")
    u = np.asarray(u, dtype=complex)
    z = np.asarray(z, dtype=complex)
    num = theta1_deriv_zero(tau, policy) * theta1(u + z, tau, policy)
    return _out(num / (theta1(u, tau, policy) * theta1(z, tau, policy)))


def kronecker_sigma_series(u, z, tau, terms=64, form="standard"):
    """Bilateral Fourier series of sigma, for cross-checking only.

    ``form="standard"``: ``2 pi i sum_n exp(-2 pi i n z) / (1 - exp(-2 pi i (u - n tau)))``,
    convergent for ``-Im(tau) < Im(z) < 0`` and equal to the theta quotient there.
    ``form="scaled-shift"`` replaces ``n tau`` by ``2 pi i n tau``; it does not agree
    with the theta quotient and is kept to document the discrepancy.
    """
    tau = _check_tau(tau)
    u = np.asarray(u, dtype=complex)[..., None]
    z = np.asarray(z, dtype=complex)[..., None]
    n = np.arange(-terms, terms + 1)
    if form == "standard":
        shift = n * tau
    elif form == "scaled-shift":
        shift = 2j * np.pi * n * tau
    else:
        raise ParameterError(f"unknown series form {form!r}")
    with np.errstate(over="ignore", invalid="ignore"):
        terms_ = np.exp(-2j * np.pi * n * z) / (1 - np.exp(-2j * np.pi * (u - shift)))
        terms_ = np.where(np.isfinite(terms_), terms_, 0)
    return _out(2j * np.pi * terms_.sum(axis=-1))
