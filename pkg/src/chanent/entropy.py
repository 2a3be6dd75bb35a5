"""Entropies of states and channels.

Two channel entropies are computed here:

* the *map entropy* ``H^K(Phi) = H(J_Phi)``, the von Neumann entropy of the
  Choi-Jamiolkowski state, and
* the *channel entropy* ``H(Phi) = log d_out - D(Phi || R)`` where ``R`` is
  the completely depolarizing channel and

  .. math::

      D(\\Phi \\| R) = \\sup_\\psi D((\\Phi\\otimes 1)\\psi \\| (R\\otimes 1)\\psi).

For a pure input with Schmidt spectrum ``lam`` the relative entropy reduces
to ``log d_out + H(lam) - H(sigma)``, ``sigma = (Phi ⊗ 1)(psi)``, because
``(R ⊗ 1)(psi) = I/d_out ⊗ Tr_A psi`` and ``Tr_B sigma = Tr_A psi``. The
supremum is estimated by a multi-start pattern search over the Schmidt
spectrum and an input-side unitary; reference-side unitaries leave the
objective unchanged and are not searched.
"""

from dataclasses import dataclass, field
import math
from typing import Optional

import numpy as np
from scipy.stats import unitary_group

from . import linalg
from .channels import Channel, check_cptp, check_schmidt, make_rng
from .errors import DimensionMismatch, NotCPTP, NotUnitary
from .linalg import EPS_EIG

TOL_SUPP = 1e-10
DEFAULT_RESTARTS = 8
MAX_EVALS = 2000
SWEEP_TOL = 1e-10
INITIAL_STEP = 0.5
MIN_STEP = 1e-5


def shannon(p) -> float:
    """Shannon entropy in nats; entries below ``EPS_EIG`` count as zero."""
    p = np.asarray(p, dtype=float)
    p = p[p >= EPS_EIG]
    return 0.0 - float(np.sum(p * np.log(p)))


def von_neumann(rho: np.ndarray) -> float:
    """Von Neumann entropy ``-Tr rho log rho`` in nats."""
    return shannon(linalg.eigvalsh(rho))


def relative_entropy(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Quantum relative entropy ``Tr rho (log rho - log sigma)``.

    Returns ``math.inf`` when the support of ``rho`` is not contained in the
    support of ``sigma``. The logarithm of ``sigma`` is taken on its support
    only.
    """
    rho = np.asarray(rho)
    sigma = np.asarray(sigma)
    if rho.shape != sigma.shape:
        raise DimensionMismatch(f"{rho.shape} vs {sigma.shape}")
    w, v = linalg.hermitian_eig(sigma)
    kernel = v[:, w < EPS_EIG]
    if kernel.shape[1]:
        leak = kernel.conj().T @ rho @ kernel
        if np.max(np.abs(leak)) > TOL_SUPP:
            return math.inf
    keep = w >= EPS_EIG
    vs = v[:, keep]
    cross = np.einsum("ij,ji->i", vs.conj().T @ rho, vs).real
    return float(-von_neumann(rho) - np.dot(cross, np.log(w[keep])))


def _require_cptp(phi: Channel) -> None:
    chk = check_cptp(phi)
    if not chk.ok:
        raise NotCPTP(
            f"channel is not CPTP (min Choi eigenvalue {chk.min_choi_eigenvalue:.3e}, "
            f"completeness violation {chk.completeness_violation:.3e})"
        )


def map_entropy(phi: Channel, validate: bool = True) -> float:
    """Entropy of the Choi-Jamiolkowski state ``J = D / d_in``."""
    if validate:
        _require_cptp(phi)
    return von_neumann(phi.jamiolkowski)


def output_state(phi: Channel, lam, u: Optional[np.ndarray] = None) -> np.ndarray:
    """``(Phi_U ⊗ 1)(psi_lam)`` where ``psi_lam = sum_i sqrt(lam_i)|ii>``.

    Computed as ``(1 ⊗ sqrt(Lam) U^T) D (1 ⊗ conj(U) sqrt(Lam))``.
    """
    lam = np.asarray(lam, dtype=float)
    if lam.shape != (phi.dim_in,):
        raise DimensionMismatch("Schmidt vector length must equal dim_in")
    m = np.sqrt(lam)[:, None] * (np.eye(phi.dim_in) if u is None else u.T)
    k = np.kron(np.eye(phi.dim_out), m)
    return k @ phi.choi @ k.conj().T


def objective(phi: Channel, lam, u: Optional[np.ndarray] = None, validate: bool = True) -> float:
    """Relative entropy of ``(Phi⊗1)psi`` to ``(R⊗1)psi`` for a pure input.

    ``psi = (U ⊗ 1) sum_i sqrt(lam_i) |i, i>``.
    """
    lam = check_schmidt(lam)
    if validate:
        _require_cptp(phi)
        if u is not None and not linalg.is_unitary(u):
            raise NotUnitary("input rotation is not unitary")
    sigma = output_state(phi, lam, u)
    return math.log(phi.dim_out) + shannon(lam) - von_neumann(sigma)


# -- optimizer ---------------------------------------------------------------


def _softmax(a: np.ndarray) -> np.ndarray:
    z = np.concatenate([np.zeros(a.shape[:-1] + (1,)), a], axis=-1)
    z = z - z.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def _generator(h: np.ndarray, d: int, triu=None) -> np.ndarray:
    """Batch of zero-diagonal Hermitian matrices from ``d(d-1)`` reals."""
    out = np.zeros((h.shape[0], d, d), dtype=complex)
    iu, ju = np.triu_indices(d, 1) if triu is None else triu
    off = h[:, 0::2] + 1j * h[:, 1::2]
    out[:, iu, ju] = off
    out[:, ju, iu] = off.conj()
    return out


def _expi(g: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(g)
    return (v * np.exp(1j * w)[:, None, :]) @ np.conj(np.swapaxes(v, 1, 2))


class _Chart:
    """Local coordinates ``(a, h)`` around a base unitary.

    ``lam = softmax(0, a)`` and ``U = U_base exp(i G(h))`` with ``G`` the
    Hermitian generator with zero diagonal. The diagonal part is left out on
    purpose: ``U -> U diag(e^{i t})`` leaves the objective unchanged.
    """

    def __init__(self, phi: Channel, u_base: Optional[np.ndarray] = None):
        self.d_in = phi.dim_in
        self.d_out = phi.dim_out
        self.choi = np.asarray(phi.choi)
        self.log_d = math.log(phi.dim_out)
        self.u_base = np.eye(self.d_in, dtype=complex) if u_base is None else u_base
        self.size = self.d_in - 1 + self.d_in * (self.d_in - 1)
        self.blocks = self.choi.reshape(self.d_out, self.d_in, self.d_out, self.d_in).transpose(0, 2, 1, 3)
        self._triu = np.triu_indices(self.d_in, 1)

    def unpack(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        x = np.atleast_2d(x)
        d = self.d_in
        lam = _softmax(x[:, : d - 1])
        u = self.u_base @ _expi(_generator(x[:, d - 1 :], d, self._triu))
        return lam, u

    def recenter(self, x: np.ndarray) -> np.ndarray:
        _, u = self.unpack(x)
        self.u_base = u[0]
        y = x.copy()
        y[self.d_in - 1 :] = 0.0
        return y

    def __call__(self, x: np.ndarray) -> np.ndarray:
        lam, u = self.unpack(x)
        b = lam.shape[0]
        m = np.sqrt(lam)[:, :, None] * np.swapaxes(u, 1, 2)
        # Block (o, p) of sigma is M D_op M^dag.
        blocks = m[:, None, None] @ self.blocks[None] @ np.conj(np.swapaxes(m, 1, 2))[:, None, None]
        n = self.d_out * self.d_in
        sigma = blocks.transpose(0, 1, 3, 2, 4).reshape(b, n, n)
        ev = np.linalg.eigvalsh(sigma)
        ev = np.where(ev >= EPS_EIG, ev, 1.0)
        lam_c = np.where(lam >= EPS_EIG, lam, 1.0)
        return self.log_d - np.sum(lam_c * np.log(lam_c), axis=1) + np.sum(ev * np.log(ev), axis=1)


@dataclass
class RestartTrace:
    index: int
    value: float
    evaluations: int
    converged: bool


@dataclass
class OptimizerResult:
    """Estimate of ``D(Phi || R)`` with the maximizing input and diagnostics."""

    value: float
    schmidt: np.ndarray
    unitary: np.ndarray
    evaluations: int
    restarts: int
    converged: bool
    best_restart: int
    traces: list = field(default_factory=list)

    def diagnostics(self) -> dict:
        return {
            "argmax_schmidt": [float(x) for x in self.schmidt],
            "evaluations": self.evaluations,
            "restarts": self.restarts,
            "converged": self.converged,
            "best_restart": self.best_restart,
            "restart_values": [t.value for t in self.traces],
        }


def _pattern_search(fun, x0, max_evals, sweep_tol, step, min_step, recenter=None):
    """Maximize ``fun`` by compass polling with pattern moves.

    Each sweep polls ``x ± step e_i`` for every coordinate in one batch. Two
    pattern directions are built from the poll values alone: the combined
    improving coordinate moves, and the per-coordinate parabolic step
    through ``f(x - step e_i), f(x), f(x + step e_i)``. Both are tried at a
    few lengths. The best point seen becomes the new base; a sweep gaining
    less than ``sweep_tol`` halves the step, and a sweep like that at
    ``step <= min_step`` means convergence. ``recenter``, if given, maps an
    accepted point to equivalent coordinates in a refreshed chart.
    """
    n = x0.size
    x = x0.copy()
    fx = float(fun(x[None, :])[0])
    evals = 1
    dirs = np.concatenate([np.eye(n), -np.eye(n)])
    scales = np.array([0.5, 1.0, 2.0, 4.0])
    while evals + 2 * n + 2 * scales.size <= max_evals:
        poll = x[None, :] + step * dirs
        vals = fun(poll)
        evals += 2 * n
        up, down = vals[:n] - fx, vals[n:] - fx
        sign_move = np.where((up > 0) & (up >= down), 1.0, np.where(down > 0, -1.0, 0.0)) * step
        curv = -(up + down)
        newton = np.where(curv > 0, 0.5 * step * (up - down) / np.where(curv > 0, curv, 1.0), sign_move)
        newton = np.clip(newton, -8 * step, 8 * step)
        pattern = x[None, :] + np.concatenate([scales[:, None] * sign_move, scales[:, None] * newton])
        pvals = fun(pattern)
        evals += 2 * scales.size
        cand = np.concatenate([poll, pattern])
        cvals = np.concatenate([vals, pvals])
        best = int(np.argmax(cvals))
        gain = cvals[best] - fx
        if gain > 0:
            x = cand[best].copy()
            fx = float(cvals[best])
            if recenter is not None:
                x = recenter(x)
        if gain < sweep_tol:
            if step <= min_step:
                return x, fx, evals, True
            step *= 0.5
    return x, fx, evals, False


def channel_relative_entropy(
    phi: Channel,
    restarts: int = DEFAULT_RESTARTS,
    seed=0,
    max_evals: int = MAX_EVALS,
    sweep_tol: float = SWEEP_TOL,
    validate: bool = True,
) -> OptimizerResult:
    """Estimate ``D(Phi || R)`` over pure inputs ``(U ⊗ 1) sum sqrt(lam_i)|ii>``.

    Restart 0 always starts at the maximally entangled input (uniform
    ``lam``, ``U = I``), so the result never falls below the objective
    there. Restart ``r > 0`` draws its start from its own seeded stream;
    the best restart wins, ties going to the lower index.
    """
    if validate:
        _require_cptp(phi)
    restarts = max(1, int(restarts))
    d = phi.dim_in
    traces = []
    best = None
    for r in range(restarts):
        if r == 0:
            chart = _Chart(phi)
            x0 = np.zeros(chart.size)
        else:
            rng = make_rng(seed, "restart", r)
            chart = _Chart(phi, unitary_group.rvs(d, random_state=rng) if d > 1 else None)
            x0 = np.zeros(chart.size)
            x0[: d - 1] = rng.standard_normal(d - 1)
        x, fx, evals, conv = _pattern_search(
            chart, x0, max_evals, sweep_tol, INITIAL_STEP, MIN_STEP, recenter=chart.recenter
        )
        traces.append(RestartTrace(r, fx, evals, conv))
        if best is None or fx > best[2]:
            lam, u = chart.unpack(x)
            best = (lam[0], u[0], fx, r)
    lam, u, value, r_best = best
    lam = np.where(lam < EPS_EIG, 0.0, lam)
    lam = lam / lam.sum()
    return OptimizerResult(
        value=value,
        schmidt=lam,
        unitary=u,
        evaluations=sum(t.evaluations for t in traces),
        restarts=restarts,
        converged=traces[r_best].converged,
        best_restart=r_best,
        traces=traces,
    )


def channel_entropy(phi: Channel, restarts: int = DEFAULT_RESTARTS, seed=0, **kw) -> float:
    """``H(Phi) = log d_out - D(Phi || R)``; negative for unitary channels."""
    return math.log(phi.dim_out) - channel_relative_entropy(phi, restarts, seed, **kw).value


@dataclass
class EntropyReport:
    h_map: float
    h_channel: float
    gap: float
    optimizer: OptimizerResult

    def to_dict(self, log_base: float = math.e) -> dict:
        c = 1.0 / math.log(log_base)
        return {
            "h_map": self.h_map * c,
            "h_channel": self.h_channel * c,
            "gap": self.gap * c,
            "log_base": "e" if log_base == math.e else log_base,
            "optimizer": self.optimizer.diagnostics(),
        }


def lemma1_gap(phi: Channel, restarts: int = DEFAULT_RESTARTS, seed=0, **kw) -> EntropyReport:
    """Compare both entropies: ``gap = H^K - log d_out - H >= 0``."""
    _require_cptp(phi)
    h_map = map_entropy(phi, validate=False)
    opt = channel_relative_entropy(phi, restarts, seed, validate=False, **kw)
    log_d = math.log(phi.dim_out)
    h_channel = log_d - opt.value
    return EntropyReport(h_map, h_channel, h_map - log_d - h_channel, opt)
