"""Quantum states and channels.

A :class:`Channel` keeps a Kraus list and/or a Choi (dynamical) matrix

.. math::

    D_\\Phi = (\\Phi \\otimes 1)(|\\phi^+\\rangle\\langle\\phi^+|)
            = \\sum_k |K_k\\rangle\\rangle\\langle\\langle K_k|,

living on ``X_out ⊗ X_in`` (output factor first). Whichever representation
is missing is computed on first access.
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple, Optional, Sequence
import zlib

import numpy as np
from scipy.stats import unitary_group

from . import linalg
from .errors import (
    DimensionMismatch,
    InvalidParameter,
    NotPSD,
    NotTracePreserving,
    NotUnitary,
    SingularMarginal,
)
from .linalg import EPS_EIG, TOL_HERM, TOL_PSD

TOL_CPTP = 1e-8
RANDOM_CHANNEL_RETRIES = 10

PAULIS = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

SCHMIDT_KINDS = ("dir_d_1", "dir_2_1", "dir_d_2", "delta")


# -- randomness --------------------------------------------------------------


def make_rng(seed, *stream) -> np.random.Generator:
    """Independent generator for ``seed`` and a stream key.

    Stream components may be ints or strings; strings are hashed with CRC32
    so the key is stable across processes.
    """
    if isinstance(seed, np.random.Generator):
        if stream:
            raise InvalidParameter("cannot key a stream off an existing Generator")
        return seed
    key = [int(seed) & 0xFFFFFFFFFFFFFFFF]
    for s in stream:
        key.append(zlib.crc32(s.encode()) if isinstance(s, str) else int(s))
    return np.random.default_rng(np.random.SeedSequence(key))


# -- states ------------------------------------------------------------------


def check_density(rho: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Validate and return ``rho`` as a complex density matrix."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DimensionMismatch(f"density matrix must be square, got {rho.shape}")
    w = linalg.hermitian_eig(rho, TOL_HERM).eigenvalues
    if w[0] < -TOL_PSD:
        raise NotPSD(f"minimum eigenvalue {w[0]:.3e}")
    if abs(np.trace(rho).real - 1.0) > tol:
        raise InvalidParameter(f"trace {np.trace(rho).real!r} is not 1")
    return rho


def check_schmidt(lam) -> np.ndarray:
    lam = np.asarray(lam, dtype=float)
    if lam.ndim != 1 or lam.size == 0:
        raise InvalidParameter("Schmidt spectrum must be a non-empty vector")
    if np.any(lam < 0) or abs(lam.sum() - 1.0) > 1e-12:
        raise InvalidParameter("Schmidt spectrum must be a probability vector")
    return lam


def schmidt_state(lam, u: Optional[np.ndarray] = None, v: Optional[np.ndarray] = None) -> np.ndarray:
    """Projector onto ``(U ⊗ V) sum_i sqrt(lam_i) |i, i>``."""
    lam = check_schmidt(lam)
    d = lam.size
    x = np.diag(np.sqrt(lam)).astype(complex)
    for w in (u, v):
        if w is not None and (w.shape != (d, d) or not linalg.is_unitary(w)):
            raise NotUnitary("local rotation must be a d x d unitary")
    if u is not None:
        x = u @ x
    if v is not None:
        x = x @ v.T
    psi = linalg.vectorize(x)
    return np.outer(psi, psi.conj())


def sample_schmidt(d: int, kind: str, seed) -> np.ndarray:
    """Random Schmidt spectrum of length ``d``.

    ``kind`` selects the distribution: ``dir_d_1`` (flat Dirichlet on all
    ``d`` coordinates), ``dir_d_2`` (Dirichlet with all concentrations 2),
    ``dir_2_1`` (flat Dirichlet on two coordinates, zero-padded) and
    ``delta`` (the uniform vector).
    """
    if d < 2:
        raise InvalidParameter("d must be >= 2")
    if kind == "delta":
        return np.full(d, 1.0 / d)
    rng = make_rng(seed)
    if kind == "dir_d_1":
        g = rng.gamma(1.0, size=d)
    elif kind == "dir_d_2":
        g = rng.gamma(2.0, size=d)
    elif kind == "dir_2_1":
        g = np.zeros(d)
        g[:2] = rng.gamma(1.0, size=2)
    else:
        raise InvalidParameter(f"unknown Schmidt kind {kind!r}; expected one of {SCHMIDT_KINDS}")
    lam = g / g.sum()
    # Renormalize once more so the sum is 1 to the last bit.
    return lam / lam.sum()


# -- channels ----------------------------------------------------------------


def choi_from_kraus(kraus: Sequence[np.ndarray]) -> np.ndarray:
    kraus = [np.asarray(k, dtype=complex) for k in kraus]
    if not kraus:
        raise DimensionMismatch("empty Kraus list")
    shape = kraus[0].shape
    if any(k.shape != shape or k.ndim != 2 for k in kraus):
        raise DimensionMismatch("Kraus operators must share a 2-D shape")
    vecs = np.stack([k.reshape(-1) for k in kraus], axis=1)
    return vecs @ vecs.conj().T


def kraus_from_choi(
    choi: np.ndarray, dims: tuple[int, int], eps: float = EPS_EIG, tol: float = TOL_CPTP
) -> list[np.ndarray]:
    """Kraus operators from the eigendecomposition of a Choi matrix.

    ``dims`` is ``(d_out, d_in)``. Eigenvalues below ``eps`` are dropped.
    """
    d_out, d_in = dims
    choi = np.asarray(choi, dtype=complex)
    if choi.shape != (d_out * d_in, d_out * d_in):
        raise DimensionMismatch(f"Choi shape {choi.shape} does not match {dims}")
    w, v = linalg.hermitian_eig(choi, TOL_HERM)
    if w[0] < -tol * max(1.0, w[-1]):
        raise NotPSD(f"Choi matrix has eigenvalue {w[0]:.3e}")
    marginal = linalg.partial_trace(choi, (d_out, d_in), keep="B")
    if np.max(np.abs(marginal - np.eye(d_in))) > tol:
        raise NotTracePreserving("Tr_out of the Choi matrix is not the identity")
    keep = w > eps
    return [np.sqrt(wi) * v[:, i].reshape(d_out, d_in) for i, wi in zip(np.flatnonzero(keep), w[keep])]


@dataclass(frozen=True, eq=False)
class Channel:
    """A linear map ``L(X_in) -> L(X_out)`` in Kraus and/or Choi form.

    Build with :meth:`from_kraus` or :meth:`from_choi`; validity (CPTP) is
    checked separately with :func:`is_cptp`.
    """

    dim_in: int
    dim_out: int
    kraus_ops: Optional[tuple] = field(default=None, repr=False)
    choi_matrix: Optional[np.ndarray] = field(default=None, repr=False)
    name: str = "channel"

    def __post_init__(self):
        if self.kraus_ops is None and self.choi_matrix is None:
            raise InvalidParameter("a channel needs Kraus operators or a Choi matrix")
        if self.kraus_ops is not None:
            for k in self.kraus_ops:
                if k.shape != (self.dim_out, self.dim_in):
                    raise DimensionMismatch(f"Kraus shape {k.shape} != {(self.dim_out, self.dim_in)}")
        n = self.dim_in * self.dim_out
        if self.choi_matrix is not None and self.choi_matrix.shape != (n, n):
            raise DimensionMismatch("Choi matrix shape does not match dimensions")
        if self.kraus_ops is not None and self.choi_matrix is not None:
            if np.max(np.abs(choi_from_kraus(self.kraus_ops) - self.choi_matrix)) > TOL_CPTP:
                raise InvalidParameter("Kraus and Choi representations disagree")

    @classmethod
    def from_kraus(cls, kraus: Sequence[np.ndarray], name: str = "channel") -> "Channel":
        ops = tuple(np.array(k, dtype=complex) for k in kraus)
        if not ops:
            raise DimensionMismatch("empty Kraus list")
        d_out, d_in = ops[0].shape
        for k in ops:
            k.setflags(write=False)
        return cls(d_in, d_out, kraus_ops=ops, name=name)

    @classmethod
    def from_choi(cls, choi: np.ndarray, dims: tuple[int, int], name: str = "channel") -> "Channel":
        """``dims`` is ``(d_out, d_in)``."""
        choi = np.array(choi, dtype=complex)
        choi.setflags(write=False)
        return cls(dims[1], dims[0], choi_matrix=choi, name=name)

    @cached_property
    def choi(self) -> np.ndarray:
        if self.choi_matrix is not None:
            return self.choi_matrix
        out = choi_from_kraus(self.kraus_ops)
        out.setflags(write=False)
        return out

    @cached_property
    def kraus(self) -> tuple:
        if self.kraus_ops is not None:
            return self.kraus_ops
        ops = kraus_from_choi(self.choi, (self.dim_out, self.dim_in))
        for k in ops:
            k.setflags(write=False)
        return tuple(ops)

    @property
    def jamiolkowski(self) -> np.ndarray:
        """The Choi-Jamiolkowski state ``D / dim_in``."""
        return self.choi / self.dim_in

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        return apply(self, rho)


def apply(phi: Channel, rho: np.ndarray) -> np.ndarray:
    rho = np.asarray(rho)
    if rho.shape != (phi.dim_in, phi.dim_in):
        raise DimensionMismatch(f"input shape {rho.shape}, channel expects {phi.dim_in}")
    k = np.stack(phi.kraus)
    return np.einsum("kab,bc,kdc->ad", k, rho, k.conj())


def apply_extended(phi: Channel, rho_ar: np.ndarray) -> np.ndarray:
    """``(Phi ⊗ 1)(rho_AR)`` with the reference dimension inferred."""
    rho_ar = np.asarray(rho_ar)
    n = rho_ar.shape[0]
    if rho_ar.ndim != 2 or rho_ar.shape[1] != n or n % phi.dim_in:
        raise DimensionMismatch(f"input shape {rho_ar.shape} incompatible with dim_in={phi.dim_in}")
    d_r = n // phi.dim_in
    t = rho_ar.reshape(phi.dim_in, d_r, phi.dim_in, d_r)
    k = np.stack(phi.kraus)
    out = np.einsum("kab,brcs,kdc->ards", k, t, k.conj())
    m = phi.dim_out * d_r
    return out.reshape(m, m)


def conjugated_choi(phi: Channel, u: np.ndarray) -> np.ndarray:
    """Choi matrix of ``rho -> Phi(U rho U^dag)``, i.e. ``(1⊗U^T) D (1⊗conj(U))``."""
    m = np.kron(np.eye(phi.dim_out), u.T)
    return m @ phi.choi @ m.conj().T


class CPTPCheck(NamedTuple):
    ok: bool
    min_choi_eigenvalue: float
    completeness_violation: float

    def __bool__(self):
        return self.ok


def check_cptp(phi: Channel, tol: float = TOL_CPTP) -> CPTPCheck:
    """CPTP test with the measured violations."""
    w = linalg.eigvalsh(phi.choi)
    marginal = linalg.partial_trace(phi.choi, (phi.dim_out, phi.dim_in), keep="B")
    tp = float(np.max(np.abs(marginal - np.eye(phi.dim_in))))
    herm = float(np.max(np.abs(phi.choi - phi.choi.conj().T)))
    ok = w[0] >= -tol and tp <= tol and herm <= tol
    return CPTPCheck(bool(ok), float(w[0]), tp)


def is_cptp(phi: Channel, tol: float = TOL_CPTP) -> bool:
    return check_cptp(phi, tol).ok


def is_unital(phi: Channel, tol: float = TOL_CPTP) -> bool:
    if phi.dim_in != phi.dim_out:
        return False
    d = phi.dim_in
    out = apply(phi, np.eye(d) / d)
    return bool(np.max(np.abs(out - np.eye(d) / d)) <= tol)


# -- constructors ------------------------------------------------------------


def identity(d: int) -> Channel:
    return Channel.from_kraus([np.eye(d)], name="identity")


def unitary(w: np.ndarray) -> Channel:
    w = np.asarray(w, dtype=complex)
    if not linalg.is_unitary(w):
        raise NotUnitary("unitary channel needs a unitary matrix")
    return Channel.from_kraus([w], name="unitary")


def depolarizing(d: int) -> Channel:
    """The completely depolarizing channel ``rho -> Tr(rho) I/d``."""
    ops = []
    for a in range(d):
        for b in range(d):
            e = np.zeros((d, d))
            e[a, b] = np.sqrt(1.0 / d)
            ops.append(e)
    return Channel.from_kraus(ops, name="depolarizing")


def partial_depolarizing(d: int, q: float) -> Channel:
    """``rho -> (1 - q) rho + q Tr(rho) I/d``."""
    if not 0.0 <= q <= 1.0:
        raise InvalidParameter(f"q={q} outside [0, 1]")
    ops = [np.sqrt(q) * k for k in depolarizing(d).kraus]
    if q < 1.0:
        ops.insert(0, np.sqrt(1.0 - q) * np.eye(d))
    return Channel.from_kraus(ops, name="partial_depolarizing")


def pauli_mixture(q0: float, q1: float, q2: float, q3: float) -> Channel:
    q = np.array([q0, q1, q2, q3], dtype=float)
    if np.any(q < 0) or abs(q.sum() - 1.0) > 1e-12:
        raise InvalidParameter("Pauli weights must form a probability vector")
    return Channel.from_kraus([np.sqrt(qi) * p for qi, p in zip(q, PAULIS) if qi > 0], name="pauli_mixture")


def random_unitary_mixture(d: int, m: int, weights=None, seed=None) -> Channel:
    """Mixture of ``m`` Haar-random unitaries; unital by construction."""
    if m < 1 or d < 2:
        raise InvalidParameter("need m >= 1 and d >= 2")
    rng = make_rng(0 if seed is None else seed)
    if weights is None:
        weights = rng.dirichlet(np.ones(m))
    weights = np.asarray(weights, dtype=float)
    if weights.shape != (m,) or np.any(weights < 0) or abs(weights.sum() - 1.0) > 1e-12:
        raise InvalidParameter("weights must be a probability vector of length m")
    ops = [np.sqrt(p) * unitary_group.rvs(d, random_state=rng) for p in weights]
    return Channel.from_kraus(ops, name="random_unitary_mixture")


def amplitude_damping(gamma: float) -> Channel:
    if not 0.0 <= gamma <= 1.0:
        raise InvalidParameter(f"gamma={gamma} outside [0, 1]")
    k0 = np.array([[1, 0], [0, np.sqrt(1 - gamma)]])
    k1 = np.array([[0, np.sqrt(gamma)], [0, 0]])
    return Channel.from_kraus([k0, k1], name="amplitude_damping")


def random_channel(d: int, k: Optional[int] = None, seed=0) -> Channel:
    """Random channel from a normalized Wishart matrix.

    Draws ``G`` (``d^2 x k``, i.i.d. standard complex Gaussian), forms
    ``W = G G^dag`` on ``X_out ⊗ X_in`` and returns the channel with Choi
    matrix ``(1 ⊗ S^{-1/2}) W (1 ⊗ S^{-1/2})``, ``S = Tr_out W``.
    ``k = d^2`` (the default) gives the uniform measure on channels.
    """
    if d < 2:
        raise InvalidParameter("d must be >= 2")
    k = d * d if k is None else int(k)
    if not 1 <= k <= d * d:
        raise InvalidParameter(f"Kraus rank k={k} outside [1, d^2]")
    rng = make_rng(seed)
    for _ in range(RANDOM_CHANNEL_RETRIES):
        g = rng.standard_normal((d * d, k)) + 1j * rng.standard_normal((d * d, k))
        w = g @ g.conj().T
        s = linalg.partial_trace(w, (d, d), keep="B")
        ev, vec = np.linalg.eigh(s)
        if ev[0] >= EPS_EIG * max(1.0, ev[-1]):
            break
    else:
        raise SingularMarginal(f"marginal stayed singular after {RANDOM_CHANNEL_RETRIES} draws")
    s_isqrt = (vec / np.sqrt(ev)) @ vec.conj().T
    a = np.kron(np.eye(d), s_isqrt)
    choi = a @ w @ a.conj().T
    choi = 0.5 * (choi + choi.conj().T)
    return Channel.from_choi(choi, (d, d), name="random")


def named_channel(name: str, params: Optional[dict] = None, seed=None) -> Channel:
    """Construct one of the named channel families from a parameter dict."""
    p = dict(params or {})
    try:
        if name == "identity":
            return identity(int(p.get("d", 2)))
        if name == "unitary":
            return unitary(np.asarray(p["matrix"]))
        if name == "depolarizing":
            return depolarizing(int(p.get("d", 2)))
        if name == "partial_depolarizing":
            return partial_depolarizing(int(p.get("d", 2)), float(p["q"]))
        if name == "pauli_mixture":
            return pauli_mixture(*[float(x) for x in p["q"]])
        if name == "amplitude_damping":
            return amplitude_damping(float(p["gamma"]))
        if name == "random_unitary_mixture":
            return random_unitary_mixture(
                int(p.get("d", 2)), int(p.get("m", 2)), p.get("weights"), seed=0 if seed is None else seed
            )
        if name == "random":
            d = int(p.get("d", 2))
            return random_channel(d, p.get("k"), seed=0 if seed is None else seed)
    except (KeyError, TypeError) as exc:
        raise InvalidParameter(f"bad parameters for {name!r}: {exc}") from exc
    raise InvalidParameter(f"unknown channel name {name!r}")
