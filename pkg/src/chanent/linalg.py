"""Dense complex linear algebra used throughout the package.

Matrices are plain :class:`numpy.ndarray` objects. Composite spaces are
ordered left-to-right as in ``np.kron``; vectorization is row-major,

.. math::

    |X\\rangle\\rangle = \\sum_{ij} X_{ij} |i\\rangle \\otimes |j\\rangle,

so that ``(A ⊗ B)|X>> = |A X B^T>>``. All logarithms are natural.
"""

from typing import Callable, NamedTuple

import math

import numpy as np

from .errors import (
    ConvergenceFailure,
    DimensionMismatch,
    InvalidParameter,
    NotHermitian,
    NotPSD,
    SingularState,
)

TOL_HERM = 1e-10
TOL_PSD = 1e-10
TOL_RECON = 1e-10
EPS_EIG = 1e-12
GAUSS_LEGENDRE_NODES = 64


class HermitianEigensystem(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def _scale(m: np.ndarray) -> float:
    return max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0


def is_hermitian(m: np.ndarray, tol: float = TOL_HERM) -> bool:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return float(np.max(np.abs(m - m.conj().T))) <= tol * _scale(m)


def is_unitary(u: np.ndarray, tol: float = 1e-10) -> bool:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return np.allclose(u.conj().T @ u, np.eye(u.shape[0]), rtol=0, atol=tol)


def hermitian_eig(m: np.ndarray, tol: float = TOL_HERM) -> HermitianEigensystem:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    Raises
    ------
    NotHermitian
        If ``m`` is not square or deviates from its adjoint by more than
        ``tol`` (scaled by the max-norm of ``m``).
    ConvergenceFailure
        If LAPACK fails to converge.
    """
    m = np.asarray(m)
    if not is_hermitian(m, tol):
        raise NotHermitian("matrix is not square-Hermitian within tolerance")
    try:
        w, v = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    return HermitianEigensystem(w, v)


def eigvalsh(m: np.ndarray) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian matrix (no validation)."""
    try:
        return np.linalg.eigvalsh(m)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc


_FUNCTIONS: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "log": np.log,
    "sqrt": np.sqrt,
    "inverse": lambda w: 1.0 / w,
    "inv_sqrt": lambda w: 1.0 / np.sqrt(w),
}


def spectral_function(
    m: np.ndarray,
    f: str,
    mode: str = "support",
    eps: float = EPS_EIG,
    tol_psd: float = TOL_PSD,
) -> np.ndarray:
    """Apply a scalar function to a Hermitian PSD matrix through its spectrum.

    ``f`` is one of ``"log"``, ``"sqrt"``, ``"inverse"``, ``"inv_sqrt"``.

    With ``mode="support"`` (default) the singular functions (log, inverse,
    inv_sqrt) act only on the eigenspace with eigenvalues ``>= eps``; the
    kernel maps to zero. ``mode="clip"`` instead raises small eigenvalues to
    ``eps`` before applying ``f``. ``sqrt`` is unaffected by the mode.
    """
    if f not in _FUNCTIONS:
        raise InvalidParameter(f"unknown spectral function {f!r}")
    if mode not in ("support", "clip"):
        raise InvalidParameter(f"unknown mode {mode!r}")
    w, v = hermitian_eig(m)
    if w.size and w[0] < -tol_psd * _scale(m):
        raise NotPSD(f"minimum eigenvalue {w[0]:.3e} is negative")
    w = np.clip(w, 0.0, None)
    if f == "sqrt":
        out = np.sqrt(w)
    elif mode == "clip":
        out = _FUNCTIONS[f](np.maximum(w, eps))
    else:
        out = np.zeros_like(w)
        keep = w >= eps
        out[keep] = _FUNCTIONS[f](w[keep])
    return (v * out) @ v.conj().T


def kron(*ops: np.ndarray) -> np.ndarray:
    """Kronecker product of any number of matrices, left to right."""
    out = np.ones((1, 1), dtype=complex)
    for op in ops:
        out = np.kron(out, op)
    return out


def partial_trace(m: np.ndarray, dims: tuple[int, int], keep: str) -> np.ndarray:
    """Trace out one factor of a bipartite operator on ``X_A ⊗ X_B``.

    ``keep`` is ``"A"`` (trace over B) or ``"B"`` (trace over A).
    """
    d_a, d_b = dims
    m = np.asarray(m)
    if m.shape != (d_a * d_b, d_a * d_b):
        raise DimensionMismatch(f"shape {m.shape} does not match dims {dims}")
    t = m.reshape(d_a, d_b, d_a, d_b)
    if keep == "A":
        return np.einsum("ibjb->ij", t)
    if keep == "B":
        return np.einsum("aiaj->ij", t)
    raise InvalidParameter(f"keep must be 'A' or 'B', got {keep!r}")


def vectorize(x: np.ndarray) -> np.ndarray:
    """Row-major vectorization ``sum_ij X_ij |i>|j>``."""
    x = np.asarray(x)
    if x.ndim != 2:
        raise DimensionMismatch("vectorize expects a matrix")
    return x.reshape(-1).copy()


def devectorize(v: np.ndarray, shape: tuple[int, int]) -> np.ndarray:
    return np.asarray(v).reshape(shape).copy()


def frechet_log_derivative(
    rho: np.ndarray,
    direction: np.ndarray,
    nodes: int = GAUSS_LEGENDRE_NODES,
    eps: float = EPS_EIG,
) -> np.ndarray:
    """Directional derivative of the matrix logarithm at ``rho``.

    Evaluates

    .. math::

        \\int_0^1 (s(\\rho - I) + I)^{-1} \\Delta (s(\\rho - I) + I)^{-1} ds

    with ``nodes``-point Gauss-Legendre quadrature, working in the
    eigenbasis of ``rho`` so each node costs only an elementwise product.
    The integrand has width ``~min(eig rho)`` near ``s = 1``, so the interval
    is split into panels ``[1 - 2^-j, 1 - 2^-(j+1)]`` down to that scale,
    each integrated with the same rule. Well-conditioned ``rho`` (smallest
    eigenvalue above 1/2) uses a single panel.
    """
    w, v = hermitian_eig(rho)
    if w[0] <= eps:
        raise SingularState(f"rho has eigenvalue {w[0]:.3e} <= {eps:g}")
    delta = np.asarray(direction)
    if delta.shape != rho.shape:
        raise DimensionMismatch("direction shape differs from rho")
    x, wt = np.polynomial.legendre.leggauss(nodes)
    panels = max(1, int(math.ceil(-math.log2(min(w[0], 0.5)))))
    edges = np.append(1.0 - 0.5 ** np.arange(panels), 1.0)
    kernel = np.zeros((w.size, w.size))
    for lo, hi in zip(edges[:-1], edges[1:]):
        s = lo + 0.5 * (hi - lo) * (x + 1.0)
        r = 1.0 / (s[:, None] * (w[None, :] - 1.0) + 1.0)  # (nodes, n)
        kernel += np.einsum("q,qi,qj->ij", 0.5 * (hi - lo) * wt, r, r)
    inner = v.conj().T @ delta @ v
    out = v @ (kernel * inner) @ v.conj().T
    return 0.5 * (out + out.conj().T)
