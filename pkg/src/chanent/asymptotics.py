"""Large-dimension experiments for random channels.

For an input ``(U ⊗ V) sum_i sqrt(lam_i)|i, i>`` the extended outputs are

    sigma = (1 ⊗ diag(sqrt(lam))) D (1 ⊗ diag(sqrt(lam)))
    gamma = I/d ⊗ diag(lam)

(local unitaries dropped). ``sigma`` shares its spectrum with
``D (1 ⊗ diag(lam))``, whose limiting law is the free multiplicative
convolution of the Choi and Schmidt spectra. ``Tr sigma log gamma`` is
``-H(lam) - log d`` for every channel, so ``D(sigma || gamma)`` reduces to
``log d + H(lam) - H(sigma)``.

Every random draw is keyed by ``(seed, experiment, d, trial)`` so results do
not depend on evaluation order.
"""

from dataclasses import dataclass
import math
from typing import NamedTuple, Sequence

import numpy as np

from . import entropy
from .channels import SCHMIDT_KINDS, Channel, check_cptp, check_schmidt, make_rng, random_channel, sample_schmidt
from .errors import DimensionMismatch, InsufficientTrials, InvalidParameter, NotCPTP
from .linalg import EPS_EIG

CONJECTURE_OFFSET = 0.5


def _require_square_cptp(phi: Channel, lam: np.ndarray) -> None:
    if phi.dim_in != phi.dim_out:
        raise DimensionMismatch("asymptotic experiments need dim_in == dim_out")
    if lam.size != phi.dim_in:
        raise DimensionMismatch("Schmidt vector length must equal d")
    if not check_cptp(phi).ok:
        raise NotCPTP("channel is not CPTP")


def extended_output(phi: Channel, lam) -> np.ndarray:
    """``sigma = (1 ⊗ sqrt(Lam)) D (1 ⊗ sqrt(Lam))``."""
    s = np.tile(np.sqrt(lam), phi.dim_out)
    return s[:, None] * np.asarray(phi.choi) * s[None, :]


@dataclass
class SpectrumSample:
    d: int
    eigenvalues: np.ndarray
    identity_deviation: float

    @property
    def rescaled(self) -> np.ndarray:
        """Eigenvalues times ``d^2``, so that they average to one."""
        return self.eigenvalues * self.d**2


def output_spectrum(phi: Channel, lam, check: bool = True) -> SpectrumSample:
    """Spectrum of ``sigma``, cross-checked against ``eig(D (1 ⊗ Lam))``.

    ``identity_deviation`` is the largest gap between the two sorted
    spectra; the second one is obtained with a general (non-Hermitian)
    eigensolver.
    """
    lam = check_schmidt(lam)
    if check:
        _require_square_cptp(phi, lam)
    ev = np.linalg.eigvalsh(extended_output(phi, lam))
    other = np.linalg.eigvals(np.asarray(phi.choi) * np.tile(lam, phi.dim_out)[None, :])
    other = np.sort(other.real)
    return SpectrumSample(phi.dim_in, ev, float(np.max(np.abs(ev - other))))


class TraceIdentity(NamedTuple):
    value: float
    predicted: float

    @property
    def residual(self) -> float:
        return abs(self.value - self.predicted)


def tr_sigma_log_gamma(phi: Channel, lam, check: bool = True) -> TraceIdentity:
    """``Tr sigma log gamma`` next to its closed form ``-H(lam) - log d``.

    ``log gamma`` is taken on the support of ``gamma``, i.e. over the
    nonzero Schmidt coefficients.
    """
    lam = check_schmidt(lam)
    if check:
        _require_square_cptp(phi, lam)
    d = phi.dim_in
    diag_gamma = np.tile(lam, d) / d
    sigma_diag = np.real(np.diag(extended_output(phi, lam)))
    keep = diag_gamma >= EPS_EIG / d
    value = float(np.dot(sigma_diag[keep], np.log(diag_gamma[keep])))
    return TraceIdentity(value, -entropy.shannon(lam) - math.log(d))


def d_sigma_gamma(phi: Channel, lam) -> float:
    """``D(sigma || gamma) = log d + H(lam) - H(sigma)`` for this input."""
    return math.log(phi.dim_out) + entropy.shannon(lam) - entropy.von_neumann(extended_output(phi, lam))


def _trial_channel(d: int, k: int, seed, experiment: str, trial: int) -> Channel:
    return random_channel(d, k, seed=make_rng(seed, experiment, d, trial))


def _trial_schmidt(d: int, kind: str, seed, experiment: str, trial: int) -> np.ndarray:
    return sample_schmidt(d, kind, make_rng(seed, experiment, "schmidt", kind, d, trial))


def mean_stderr(x) -> tuple[float, float]:
    x = np.asarray(x, dtype=float)
    if x.size < 2:
        return float(x.mean()), 0.0
    return float(x.mean()), float(x.std(ddof=1) / math.sqrt(x.size))


@dataclass
class FreeMomentReport:
    d: int
    nu_kind: str
    trials: int
    m1: float
    m2: float
    m1_predicted: float
    m2_predicted: float
    z_m1: float
    z_m2: float

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def _z(diff: np.ndarray) -> float:
    mean, se = mean_stderr(diff)
    if abs(mean) <= 1e-12:
        return 0.0
    return mean / se if se > 0 else math.copysign(math.inf, mean)


def free_moment_check(d: int, k=None, nu_kind: str = "dir_d_1", trials: int = 50, seed=0) -> FreeMomentReport:
    """Compare output-spectrum moments with the free product prediction.

    With ``a`` the Choi spectrum scaled by ``d``, ``b = d * lam`` and ``x`` the
    output spectrum scaled by ``d^2`` (all of mean one), freeness of ``a``
    and ``b`` predicts

        m1 = a1 b1,   m2 = a2 b1^2 + a1^2 b2 - a1^2 b1^2.

    Moments of ``a`` and ``b`` are pooled over trials for the reported
    prediction; the z-scores use the paired per-trial differences
    ``m(x) - prediction(a, b)``.
    """
    if trials < 2:
        raise InsufficientTrials("need at least 2 trials for a z-score")
    k = d * d if k is None else k
    rows = []
    for t in range(trials):
        phi = _trial_channel(d, k, seed, "free-moments", t)
        lam = _trial_schmidt(d, nu_kind, seed, "free-moments", t)
        x = output_spectrum(phi, lam, check=False).rescaled
        a = d * np.linalg.eigvalsh(phi.choi)
        b = d * lam
        rows.append((x.mean(), (x**2).mean(), a.mean(), (a**2).mean(), b.mean(), (b**2).mean()))
    m1, m2, a1, a2, b1, b2 = np.asarray(rows).T
    pred1 = a1 * b1
    pred2 = a2 * b1**2 + a1**2 * b2 - a1**2 * b1**2
    A1, A2, B1, B2 = a1.mean(), a2.mean(), b1.mean(), b2.mean()
    return FreeMomentReport(
        d=d,
        nu_kind=nu_kind,
        trials=trials,
        m1=float(m1.mean()),
        m2=float(m2.mean()),
        m1_predicted=float(A1 * B1),
        m2_predicted=float(A2 * B1**2 + A1**2 * B2 - A1**2 * B1**2),
        z_m1=_z(m1 - pred1),
        z_m2=_z(m2 - pred2),
    )


@dataclass
class CurvePoint:
    """Mean of ``D(sigma || gamma)`` over random channels and inputs.

    ``entropy_estimate = log d - mean_D`` is the matching upper estimate of
    the channel entropy, to be compared with ``reference = log d - 1/2``.
    """

    d: int
    nu_kind: str
    mean_D: float
    stderr: float
    trials: int

    @property
    def entropy_estimate(self) -> float:
        return math.log(self.d) - self.mean_D

    @property
    def reference(self) -> float:
        return math.log(self.d) - CONJECTURE_OFFSET


def fig1_trial_values(d: int, nu_kind: str, trials: int, seed=0, k=None) -> np.ndarray:
    """Per-trial ``D(sigma || gamma)``.

    Channel draws depend on ``(d, trial)`` only, so every Schmidt
    distribution is evaluated on the same channels.
    """
    if trials < 1:
        raise InvalidParameter("trials must be >= 1")
    k = d * d if k is None else k
    out = np.empty(trials)
    for t in range(trials):
        phi = _trial_channel(d, k, seed, "fig1", t)
        lam = _trial_schmidt(d, nu_kind, seed, "fig1", t)
        out[t] = d_sigma_gamma(phi, lam)
    return out


def fig1_channels(d: int, trials: int, seed=0, k=None) -> list[Channel]:
    """The channels used by :func:`fig1_trial_values` for dimension ``d``."""
    k = d * d if k is None else k
    return [_trial_channel(d, k, seed, "fig1", t) for t in range(trials)]


def fig1_experiment(
    d_list: Sequence[int], nu_kinds: Sequence[str] = SCHMIDT_KINDS, trials: int = 20, seed=0
) -> list[CurvePoint]:
    if list(d_list) != sorted(d_list):
        raise InvalidParameter("d_list must be ascending")
    points = []
    for d in d_list:
        for kind in nu_kinds:
            vals = fig1_trial_values(d, kind, trials, seed)
            mean, se = mean_stderr(vals)
            points.append(CurvePoint(d, kind, mean, se, trials))
    return points


@dataclass
class ConjectureRow:
    """Per-dimension summary; ``mean_d_phi_plus`` is a lower bound on ``D(Phi || R)``."""

    d: int
    trials: int
    mean_h_map: float
    h_map_deviation: float
    h_map_stderr: float
    mean_d_phi_plus: float
    d_phi_plus_deviation: float
    d_phi_plus_stderr: float


def conjecture_sweep(d_list: Sequence[int], trials: int = 20, seed=0, k=None) -> list[ConjectureRow]:
    """Map entropy and maximally entangled relative entropy of random channels.

    Deviations are ``mean H^K - (2 log d - 1/2)`` and
    ``mean D(phi+) - 1/2``.
    """
    rows = []
    for d in d_list:
        kk = d * d if k is None else k
        h_map, d_plus = [], []
        uniform = np.full(d, 1.0 / d)
        for t in range(trials):
            phi = _trial_channel(d, kk, seed, "conjecture", t)
            h_map.append(entropy.map_entropy(phi, validate=False))
            d_plus.append(d_sigma_gamma(phi, uniform))
        mh, sh = mean_stderr(h_map)
        md, sd = mean_stderr(d_plus)
        rows.append(
            ConjectureRow(
                d, trials, mh, mh - (2 * math.log(d) - CONJECTURE_OFFSET), sh, md, md - CONJECTURE_OFFSET, sd
            )
        )
    return rows
