"""Deliberately broken evaluators, used as negative controls."""
from __future__ import annotations

import numpy as np

from . import special_functions as sf
from . import tensor_algebra as ta
from .closed_form import SolutionParams, elliptic_coefficients
from .geometric import FROZEN_IDENTIFICATION, _res_ev_scalars


def theta_sign_flip_closed_form(params: SolutionParams, index=(1, 1)):
    """Closed form with the numerator theta_1(u + z) of one (k, l) term negated."""
    i = (index[0] - 1) * params.n + (index[1] - 1)
    sign = np.ones(params.n**2)
    sign[i] = -1

    def evaluate(v, x1, x2):
        coeffs = elliptic_coefficients(params, v, x1, x2) * sign
        return np.einsum("...i,iabcd->...abcd", coeffs, params.basis)

    evaluate.params = params
    return evaluate


def theta_sign_flip_construction(params: SolutionParams, index=(1, 1)):
    """Construction route with the evaluation-side theta_3 of one basis function negated."""
    i = (index[0] - 1) * params.n + (index[1] - 1)
    sign = np.ones(params.n**2)
    sign[i] = -1

    def raw(v, x, y):
        rho, ev = _res_ev_scalars(params, complex(v), complex(x), complex(y), sf.DEFAULT_POLICY)
        alpha = np.einsum("i,iab->ab", sign * ev / rho, np.stack([ta.can(b) for b in params.basis]))
        return ta.can_inv(alpha)

    def evaluate(v, x1, x2):
        return FROZEN_IDENTIFICATION.apply(raw, v, x1, x2)

    evaluate.params = params
    return evaluate


def noisy(evaluator, level=1e-3, seed=0):
    """Add complex Gaussian noise of relative Frobenius size ``level`` to every output."""
    rng = np.random.default_rng(seed)

    def evaluate(v, x1, x2):
        t = evaluator(v, x1, x2)
        noise = rng.normal(size=t.shape) + 1j * rng.normal(size=t.shape)
        return t + level * np.linalg.norm(t) / np.linalg.norm(noise) * noise

    evaluate.params = getattr(evaluator, "params", None)
    return evaluate
