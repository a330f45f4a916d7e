"""Clock-and-shift basis of Mat_n(C) and tensor-leg calculus.

Storage conventions (dense numpy arrays throughout, n <= 16):

* a ``SquareMatrix`` is an ``(n, n)`` complex array;
* a two-tensor is an ``(n, n, n, n)`` array ``t[a, b, c, d]``, the
  coefficient of ``E_ab (x) E_cd``;
* a three-tensor is an ``(n,)*6`` array ``t[a, b, c, d, e, f]``, the
  coefficient of ``E_ab (x) E_cd (x) E_ef``;
* a ``LinearEndo`` of Mat_n is an ``(n^2, n^2)`` matrix acting on
  column-major vectorizations, ``vec(Z)[a + n*b] = Z[a, b]``
  (``Z.flatten(order="F")``).  This is the only place the convention lives.

Products of tensors are leg-wise: ``(a(x)b)(a'(x)b') = aa' (x) bb'``.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np

from .errors import DegeneracyError, ParameterError

MAX_N = 16


@dataclass(frozen=True, eq=False)
class HeisenbergPair:
    n: int
    d: int
    eps: complex
    X: np.ndarray
    Y: np.ndarray


def heisenberg_pair(n: int, d: int) -> HeisenbergPair:
    """Clock matrix ``X = diag(eps^j)`` and cyclic shift ``Y`` (``Y[j, j+1] = 1``)."""
    n, d = int(n), int(d)
    if not (0 < d < n) or gcd(n, d) != 1:
        raise ParameterError(f"need 0 < d < n with gcd(n, d) = 1, got (n, d) = ({n}, {d})")
    if n > MAX_N:
        raise ParameterError(f"n = {n} exceeds the supported envelope n <= {MAX_N}")
    eps = np.exp(2j * np.pi * d / n)
    X = np.diag(eps ** np.arange(n))
    Y = np.roll(np.eye(n, dtype=complex), 1, axis=1)
    X.setflags(write=False)
    Y.setflags(write=False)
    return HeisenbergPair(n, d, complex(eps), X, Y)


def _shift_power(n, k):
    # Y^k exactly, without accumulating round-off
    return np.roll(np.eye(n, dtype=complex), k % n, axis=1)


def _clock_power(pair, l):
    j = np.arange(pair.n)
    return np.diag(np.exp(2j * np.pi * pair.d * ((l * j) % pair.n) / pair.n))


def _check_index(pair, k, l):
    if not (1 <= k <= pair.n and 1 <= l <= pair.n):
        raise ParameterError(f"(k, l) = ({k}, {l}) outside I = {{1..{pair.n}}}^2")


def z_basis(pair: HeisenbergPair, k: int, l: int) -> np.ndarray:
    """Z_(k,l) = Y^k X^(-l)."""
    _check_index(pair, k, l)
    return _shift_power(pair.n, k) @ _clock_power(pair, -l)


def z_dual(pair: HeisenbergPair, k: int, l: int) -> np.ndarray:
    """Z^v_(k,l) = (1/n) X^l Y^(-k), dual to Z_(k,l) under tr(A B)."""
    _check_index(pair, k, l)
    return _clock_power(pair, l) @ _shift_power(pair.n, -k) / pair.n


def index_set(n: int):
    """The index set I = {1..n} x {1..n} in row-major order."""
    return [(k, l) for k in range(1, n + 1) for l in range(1, n + 1)]


def basis_tensors(pair: HeisenbergPair) -> np.ndarray:
    """Stack of ``Z^v_(k,l) (x) Z_(k,l)`` over I, shape ``(n^2, n, n, n, n)``."""
    return np.stack(
        [simple_tensor(z_dual(pair, k, l), z_basis(pair, k, l)) for k, l in index_set(pair.n)]
    )


def change_of_basis(pair: HeisenbergPair) -> np.ndarray:
    """Columns are vec(Z_(k,l)); invertible iff the Z's form a basis."""
    return np.column_stack([vec(z_basis(pair, k, l)) for k, l in index_set(pair.n)])


def ad(T: np.ndarray, Z: np.ndarray) -> np.ndarray:
    """T Z T^-1."""
    T = np.asarray(T)
    try:
        Tinv = np.linalg.inv(T)
    except np.linalg.LinAlgError as exc:
        raise DegeneracyError("cannot conjugate by a singular matrix") from exc
    return T @ np.asarray(Z) @ Tinv


def trace_pairing(A: np.ndarray, B: np.ndarray) -> complex:
    A, B = np.asarray(A), np.asarray(B)
    if A.shape != B.shape or A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ParameterError(f"shape mismatch {A.shape} vs {B.shape}")
    return complex(np.einsum("ij,ji->", A, B))


def matrix_unit(n: int, a: int, b: int) -> np.ndarray:
    E = np.zeros((n, n), dtype=complex)
    E[a, b] = 1
    return E


def vec(Z: np.ndarray) -> np.ndarray:
    return np.asarray(Z).flatten(order="F")


def unvec(z: np.ndarray, n: int) -> np.ndarray:
    return np.asarray(z).reshape((n, n), order="F")


def tensor_n(t: np.ndarray, legs: int = 2) -> int:
    t = np.asarray(t)
    if t.ndim != 2 * legs or len(set(t.shape)) != 1:
        raise ParameterError(f"expected a {legs}-leg tensor of shape (n,)*{2 * legs}, got {t.shape}")
    return t.shape[0]


def simple_tensor(*factors: np.ndarray) -> np.ndarray:
    """A (x) B (x) ... as a tensor with 2 * len(factors) indices."""
    out = np.asarray(factors[0], dtype=complex)
    for f in factors[1:]:
        out = np.multiply.outer(out, np.asarray(f, dtype=complex))
    return out


def identity_tensor(n: int, legs: int = 2) -> np.ndarray:
    return simple_tensor(*([np.eye(n, dtype=complex)] * legs))


def to_operator(t: np.ndarray) -> np.ndarray:
    """Kronecker-product matrix of a tensor: A (x) B  ->  np.kron(A, B)."""
    t = np.asarray(t)
    legs = t.ndim // 2
    n = tensor_n(t, legs)
    rows = tuple(range(0, 2 * legs, 2))
    cols = tuple(range(1, 2 * legs, 2))
    return t.transpose(rows + cols).reshape(n**legs, n**legs)


def from_operator(M: np.ndarray, n: int, legs: int = 2) -> np.ndarray:
    M = np.asarray(M)
    if M.shape != (n**legs, n**legs):
        raise ParameterError(f"operator shape {M.shape} incompatible with n={n}, legs={legs}")
    t = M.reshape((n,) * (2 * legs))
    # axes are (row legs..., col legs...); interleave back to (a, b, c, d, ...)
    order = []
    for i in range(legs):
        order += [i, legs + i]
    return t.transpose(order)


def can(t: np.ndarray) -> np.ndarray:
    """The endomorphism ``Z -> sum tr(A Z) B`` of ``t = sum A (x) B``."""
    n = tensor_n(t)
    return np.asarray(t).transpose(2, 3, 1, 0).reshape(n * n, n * n, order="F")


def can_inv(L: np.ndarray) -> np.ndarray:
    L = np.asarray(L)
    n = int(round(np.sqrt(L.shape[0])))
    if L.shape != (n * n, n * n):
        raise ParameterError(f"LinearEndo must be square of size n^2, got {L.shape}")
    return L.reshape(n, n, n, n, order="F").transpose(3, 2, 0, 1)


def apply_endo(L: np.ndarray, Z: np.ndarray) -> np.ndarray:
    Z = np.asarray(Z)
    return unvec(L @ vec(Z), Z.shape[0])


_EMBED = {"12": "abcd,ef->abcdef", "13": "abef,cd->abcdef", "23": "cdef,ab->abcdef"}


def embed(t: np.ndarray, slots) -> np.ndarray:
    """r^12, r^13 or r^23: insert the identity in the omitted leg."""
    key = str(slots)
    if key not in _EMBED:
        raise ParameterError(f"invalid slot tag {slots!r}; expected one of 12, 13, 23")
    n = tensor_n(t)
    return np.einsum(_EMBED[key], t, np.eye(n, dtype=complex))


def _mul(s, t, legs):
    n = tensor_n(s, legs)
    if tensor_n(t, legs) != n:
        raise ParameterError(f"shape mismatch {np.shape(s)} vs {np.shape(t)}")
    return from_operator(to_operator(s) @ to_operator(t), n, legs)


def two_mul(s: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Leg-wise product in A (x) A."""
    return _mul(s, t, 2)


def three_mul(s: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Leg-wise product in A (x) A (x) A."""
    return _mul(s, t, 3)


def _permute_legs(t, perm):
    # acts on the last four axes so stacks of two-tensors pass through
    t = np.asarray(t)
    tensor_n(t[(0,) * (t.ndim - 4)] if t.ndim > 4 else t)
    lead = tuple(range(t.ndim - 4))
    return t.transpose(lead + tuple(len(lead) + p for p in perm))


def swap_legs(t: np.ndarray) -> np.ndarray:
    """t^21: the coefficient of E_ab (x) E_cd moves to E_cd (x) E_ab."""
    return _permute_legs(t, (2, 3, 0, 1))


def leg_transpose(t: np.ndarray) -> np.ndarray:
    """Matrix transpose applied to both legs, (A (x) B) -> A^T (x) B^T."""
    return _permute_legs(t, (1, 0, 3, 2))


def partial_trace(t: np.ndarray, leg: int) -> np.ndarray:
    """Trace out leg 1 or 2 of a two-tensor."""
    tensor_n(t)
    if leg == 1:
        return np.einsum("aacd->cd", t)
    if leg == 2:
        return np.einsum("abcc->ab", t)
    raise ParameterError("leg must be 1 or 2")


def sl_project(t: np.ndarray) -> np.ndarray:
    """(pi (x) pi) t with pi(Z) = Z - tr(Z)/n I."""
    n = tensor_n(t)
    eye = np.eye(n)
    t = np.asarray(t, dtype=complex)
    t = t - np.einsum("ab,cd->abcd", eye, partial_trace(t, 1)) / n
    return t - np.einsum("ab,cd->abcd", partial_trace(t, 2), eye) / n


def commutator(s: np.ndarray, t: np.ndarray) -> np.ndarray:
    return three_mul(s, t) - three_mul(t, s)
