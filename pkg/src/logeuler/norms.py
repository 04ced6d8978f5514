"""Norms and functionals tracked along solver trajectories: Lebesgue norms,
homogeneous Sobolev norms, the sup_p ||f||_p / sqrt(p) functional, the sup
norm of the velocity gradient, and the conserved generalized energy.

Quadrature convention: integrals over the torus use the uniform rectangle
rule, which is spectrally accurate for band-limited integrands, and
Plancherel reads sum_j |f_j|^2 dx^2 = 4 pi^2 sum_k |coeff(k)|^2.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .multipliers import tgamma_eval, velocity_spectral
from .spectral import (
    ZERO_MEAN_TOL,
    RealField,
    SpectralField,
    dft_inverse,
    gradient,
)

__all__ = [
    "NormBundle",
    "lp_norm",
    "lp_norm_map",
    "sobolev_norm",
    "sup_p_ratio",
    "grad_u_sup",
    "generalized_energy",
    "h1_norm",
    "compute_norm_bundle",
]

FOUR_PI_SQ = 4.0 * np.pi**2


def _check_zero_mean(s: SpectralField, what: str) -> None:
    mean = abs(s.coeffs[0, 0])
    if mean > ZERO_MEAN_TOL:
        raise ValueError(f"{what} needs a zero-mean field, |coeff(0,0)| = {mean:.3e}")


def lp_norm(f: RealField, p) -> float:
    """Lebesgue norm (sum_j |f|^p dx^2)^(1/p); p = inf gives the grid max.

    Only p >= 2 is supported; the scale is factored out before exponentiation
    so large p cannot overflow.
    """
    p = float(p)
    if not p >= 2.0:
        raise ValueError(f"p must be >= 2 (or inf), got {p}")
    m = float(np.max(np.abs(f.values)))
    if np.isinf(p) or m == 0.0:
        return m
    scaled = np.abs(f.values) / m
    total = float(np.sum(scaled**p)) * f.grid.dx**2
    return m * total ** (1.0 / p)


def lp_norm_map(f: RealField, p_values) -> dict[int, float]:
    """L^p norms for a set of integer exponents >= 2, sharing one power sweep."""
    ps = sorted(set(int(p) for p in p_values))
    if ps and ps[0] < 2:
        raise ValueError(f"p must be >= 2, got {ps[0]}")
    out: dict[int, float] = {}
    m = float(np.max(np.abs(f.values)))
    if m == 0.0:
        return {p: 0.0 for p in ps}
    base = np.abs(f.values) / m
    dx2 = f.grid.dx**2
    acc = base * base
    power = 2
    for p in ps:
        while power < p:
            acc = acc * base
            power += 1
        out[p] = m * (float(np.sum(acc)) * dx2) ** (1.0 / p)
    return out


def sobolev_norm(s: SpectralField, order: float) -> float:
    """Homogeneous Sobolev norm (4 pi^2 sum_{k!=0} |k|^{2s} |coeff|^2)^(1/2).

    Negative orders require a zero-mean field.
    """
    if order < 0:
        _check_zero_mean(s, f"Sobolev norm of order {order}")
    kmod = s.grid.kmod.copy()
    kmod[0, 0] = 1.0  # origin excluded from the sum below
    power = np.abs(s.coeffs) ** 2 * kmod ** (2.0 * order)
    power[0, 0] = 0.0
    return float(np.sqrt(FOUR_PI_SQ * np.sum(power)))


def h1_norm(s: SpectralField) -> float:
    """Inhomogeneous H^1 norm in the completion convention: ||f||_2 + ||f||_H1dot."""
    return sobolev_norm(s, 0.0) + sobolev_norm(s, 1.0)


def sup_p_ratio(f: RealField, p_max: int) -> float:
    """max over integer p in {2, ..., p_max} of ||f||_p / sqrt(p)."""
    if p_max < 2:
        raise ValueError(f"p_max must be >= 2, got {p_max}")
    norms = lp_norm_map(f, range(2, p_max + 1))
    return max(norms[p] / np.sqrt(p) for p in norms)


def grad_u_sup(omega: SpectralField, gamma: float) -> float:
    """Sup norm over all four components of grad u, u the smoothed velocity."""
    _check_zero_mean(omega, "velocity-gradient sup")
    u1, u2 = velocity_spectral(omega, gamma)
    worst = 0.0
    for comp in (u1, u2):
        for deriv in gradient(comp):
            worst = max(worst, float(np.max(np.abs(dft_inverse(deriv).values))))
    return worst


def generalized_energy(omega: SpectralField, gamma: float) -> float:
    """Conserved quadratic functional 4 pi^2 sum_{k!=0} m(|k|) |coeff|^2 / |k|^2,

    with m the log-smoothing symbol; at gamma = 0 this is the kinetic energy
    ||u||_2^2 of the classical flow.
    """
    _check_zero_mean(omega, "generalized energy")
    g = omega.grid
    k2 = g.k2.copy()
    k2[0, 0] = 1.0
    dens = tgamma_eval(g.kmod, gamma) * np.abs(omega.coeffs) ** 2 / k2
    dens[0, 0] = 0.0
    return float(FOUR_PI_SQ * np.sum(dens))


@dataclass(frozen=True)
class NormBundle:
    """All proof-relevant norms of one vorticity snapshot."""

    l2: float
    h1dot: float
    hm1dot: float
    lp: Mapping[int, float]
    sup_p_ratio: float
    grad_u_sup: float
    energy_gamma: float


def compute_norm_bundle(
    omega: SpectralField, gamma: float, p_max: int = 64
) -> NormBundle:
    """Evaluate the full norm bundle of a zero-mean vorticity field."""
    phys = dft_inverse(omega)
    p_grid = range(2, max(p_max, 8) + 1)  # always include p = 4, 8 for reports
    lp = lp_norm_map(phys, p_grid)
    ratio = max(lp[p] / np.sqrt(p) for p in range(2, p_max + 1))
    return NormBundle(
        l2=lp[2],
        h1dot=sobolev_norm(omega, 1.0),
        hm1dot=sobolev_norm(omega, -1.0),
        lp=lp,
        sup_p_ratio=ratio,
        grad_u_sup=grad_u_sup(omega, gamma),
        energy_gamma=generalized_energy(omega, gamma),
    )
