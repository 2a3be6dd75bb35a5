"""Unital qubit channels: the one-parameter relative-entropy profile.

For the input ``|sqrt(P)>> = sqrt(p)|00> + sqrt(1-p)|11>`` the extended
output is ``(1 ⊗ sqrt(P)) D (1 ⊗ sqrt(P))`` and the relative entropy to
``(R ⊗ 1)`` of the same input is

    f(p) = log 2 + h(p) - H((1 ⊗ sqrt(P)) D (1 ⊗ sqrt(P)))

with ``h`` the binary entropy. For unital channels ``f`` is symmetric about
``1/2`` and concave, so its maximum, and hence ``D(Phi || R)``, sits at the
maximally entangled input.
"""

from dataclasses import dataclass
import math
from typing import Optional

import numpy as np

from . import entropy
from .channels import Channel, is_cptp, is_unital
from .errors import NotCPTP, NotQubit, NotUnital, POutOfRange

EPS_P = 1e-9
TOL_CONCAVE = 1e-6
TOL_SYMMETRY = 1e-9
GRID_POINTS = 99
H_STEP = 1e-2
GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _require_unital_qubit(phi: Channel) -> None:
    if phi.dim_in != 2 or phi.dim_out != 2:
        raise NotQubit(f"expected a qubit channel, got {phi.dim_out}x{phi.dim_in}")
    if not is_cptp(phi):
        raise NotCPTP("channel is not CPTP")
    if not is_unital(phi):
        raise NotUnital("channel does not fix the identity")


def _binary_entropy(p: float) -> float:
    return entropy.shannon([p, 1.0 - p])


def _f(choi: np.ndarray, p: float) -> float:
    s = np.sqrt([p, 1.0 - p])
    scale = np.tile(s, 2)
    sigma = scale[:, None] * choi * scale[None, :]
    return math.log(2.0) + _binary_entropy(p) - entropy.von_neumann(sigma)


def f_of_p(phi: Channel, p: float, check: bool = True) -> float:
    """Relative entropy ``D((Phi⊗1)(phi_P) || (R⊗1)(phi_P))`` in nats."""
    if check:
        _require_unital_qubit(phi)
    if not EPS_P < p < 1.0 - EPS_P:
        raise POutOfRange(f"p={p} outside ({EPS_P}, {1 - EPS_P})")
    return _f(np.asarray(phi.choi), p)


@dataclass
class PGrid:
    points: np.ndarray
    values: np.ndarray


def default_grid(n: int = GRID_POINTS) -> np.ndarray:
    """``n`` evenly spaced points in (0, 1), symmetric about 1/2."""
    return np.arange(1, n + 1) / (n + 1)


def profile(phi: Channel, grid: Optional[np.ndarray] = None) -> PGrid:
    _require_unital_qubit(phi)
    grid = default_grid() if grid is None else np.asarray(grid, dtype=float)
    choi = np.asarray(phi.choi)
    return PGrid(grid, np.array([_f(choi, p) for p in grid]))


def verify_symmetry(phi: Channel, grid: Optional[np.ndarray] = None) -> float:
    """Largest ``|f(p) - f(1 - p)|`` over the grid."""
    _require_unital_qubit(phi)
    grid = default_grid() if grid is None else np.asarray(grid, dtype=float)
    choi = np.asarray(phi.choi)
    return max(abs(_f(choi, p) - _f(choi, 1.0 - p)) for p in grid)


def second_differences(phi: Channel, grid: Optional[np.ndarray] = None, h_step: float = H_STEP) -> PGrid:
    """``(f(p-h) - 2 f(p) + f(p+h)) / h^2`` at grid points whose stencil stays inside (0, 1)."""
    _require_unital_qubit(phi)
    grid = default_grid() if grid is None else np.asarray(grid, dtype=float)
    grid = grid[(grid - h_step > EPS_P) & (grid + h_step < 1.0 - EPS_P)]
    choi = np.asarray(phi.choi)
    vals = [(_f(choi, p - h_step) - 2.0 * _f(choi, p) + _f(choi, p + h_step)) / h_step**2 for p in grid]
    return PGrid(grid, np.array(vals))


def verify_concavity(phi: Channel, grid: Optional[np.ndarray] = None, h_step: float = H_STEP) -> float:
    """Largest discrete second difference of ``f``; concave means ``<= TOL_CONCAVE``."""
    return float(np.max(second_differences(phi, grid, h_step).values))


def golden_section_max(fun, a: float, b: float, tol: float = 1e-10, tie_tol: float = 1e-14):
    """Maximize a unimodal ``fun`` on ``[a, b]``.

    When the two interior values tie within ``tie_tol`` the bracket shrinks
    to the interval between them, which keeps a symmetric bracket centred
    and sends flat functions to the midpoint.
    """
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = fun(c), fun(d)
    while b - a > tol:
        if abs(fc - fd) <= tie_tol * max(1.0, abs(fc)):
            a, b = c, d
            c = b - GOLDEN * (b - a)
            d = a + GOLDEN * (b - a)
            fc, fd = fun(c), fun(d)
        elif fc > fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = fun(d)
    x = 0.5 * (a + b)
    return x, fun(x)


def maximize_f(phi: Channel, tol: float = 1e-10) -> tuple[float, float]:
    """Golden-section maximum ``(p_star, f(p_star))`` of the profile on (0, 1)."""
    _require_unital_qubit(phi)
    choi = np.asarray(phi.choi)
    return golden_section_max(lambda p: _f(choi, p), EPS_P, 1.0 - EPS_P, tol)


@dataclass
class Theorem2Report:
    """``H(Phi)`` against ``H^K(Phi) - log 2``.

    ``lhs`` comes from the general optimizer over all pure inputs,
    ``lhs_profile`` from the golden-section maximum of ``f``.
    """

    lhs: float
    lhs_profile: float
    rhs: float
    p_star: float

    @property
    def delta(self) -> float:
        return self.lhs - self.rhs

    @property
    def delta_profile(self) -> float:
        return self.lhs_profile - self.rhs


def verify_theorem2(phi: Channel, restarts: int = entropy.DEFAULT_RESTARTS, seed=0) -> Theorem2Report:
    _require_unital_qubit(phi)
    p_star, f_max = maximize_f(phi)
    log2 = math.log(2.0)
    return Theorem2Report(
        lhs=entropy.channel_entropy(phi, restarts, seed),
        lhs_profile=log2 - f_max,
        rhs=entropy.map_entropy(phi) - log2,
        p_star=p_star,
    )
