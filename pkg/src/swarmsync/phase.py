"""Order parameter and alignment potentials over heading ensembles.

For N headings theta_k the complex mean of the unit heading vectors,

    p = (1/N) sum_k exp(i*theta_k) = |p| exp(i*Psi),

measures alignment: |p| = 1 iff all headings coincide mod 2*pi, |p| = 0 in a
balanced arrangement. Two scalar potentials drive the controllers:

  * mean-field alignment potential   (N/2) * (1 - |p|^2), minimized at sync;
  * graph coupling potential         (1/2) <e^{i theta}, L e^{i theta}> for a
    graph Laplacian L, which reduces to N times the mean-field potential on
    the complete graph and is minimized at sync for any connected graph.

All functions here are pure and stateless.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# |p| below this is treated as zero and the mean phase reported as undefined.
ZERO_MAGNITUDE_TOL = 1e-12


def as_heading_vector(theta) -> np.ndarray:
    """Validate and return a heading vector as a float64 array.

    Headings are unwrapped radians (not reduced mod 2*pi). Requires at least
    two agents and finite entries.
    """
    th = np.asarray(theta, dtype=float)
    if th.ndim != 1 or th.size < 2:
        raise ValueError("heading vector must be 1-D with at least 2 entries")
    if not np.all(np.isfinite(th)):
        raise ValueError("heading vector contains non-finite entries")
    return th


@dataclass(frozen=True)
class OrderParameter:
    """Complex mean of unit heading vectors.

    ``mean_phase`` is None when the magnitude vanishes (the phase of a zero
    vector is genuinely undefined).
    """

    magnitude: float
    mean_phase: float | None
    as_complex: complex

    @property
    def phase_defined(self) -> bool:
        return self.mean_phase is not None


def order_parameter(theta) -> OrderParameter:
    """p = (1/N) sum_k exp(i*theta_k), with magnitude in [0, 1]."""
    th = as_heading_vector(theta)
    p = complex(np.exp(1j * th).mean())
    mag = abs(p)
    phase = float(np.angle(p)) if mag > ZERO_MAGNITUDE_TOL else None
    return OrderParameter(magnitude=mag, mean_phase=phase, as_complex=p)


def alignment_potential(theta) -> float:
    """Mean-field alignment potential (N/2) * (1 - |p|^2), in [0, N/2]."""
    th = as_heading_vector(theta)
    p = np.exp(1j * th).mean()
    return float(0.5 * th.size * (1.0 - abs(p) ** 2))


def alignment_potential_grad(theta) -> np.ndarray:
    """Gradient of the mean-field alignment potential.

    Component k is -|p| sin(Psi - theta_k) = -(1/N) sum_{j != k} sin(theta_j
    - theta_k). The components always sum to zero (pairwise antisymmetry).
    """
    th = as_heading_vector(theta)
    z = np.exp(1j * th)
    p = z.mean()
    return -np.imag(p * np.conj(z))


def _check_laplacian_shape(th: np.ndarray, lap) -> np.ndarray:
    lap = np.asarray(lap, dtype=float)
    if lap.shape != (th.size, th.size):
        raise ValueError(
            f"Laplacian shape {lap.shape} does not match {th.size} headings"
        )
    return lap


def laplacian_potential(theta, lap) -> float:
    """Graph coupling potential (1/2) <e^{i theta}, L e^{i theta}>.

    Equals (1/2) sum_k sum_{j in N_k} (1 - cos(theta_j - theta_k)) >= 0 for
    the Laplacian of an undirected graph.
    """
    th = as_heading_vector(theta)
    lap = _check_laplacian_shape(th, lap)
    z = np.exp(1j * th)
    return float(0.5 * np.real(np.vdot(z, lap @ z)))


def laplacian_potential_grad(theta, lap) -> np.ndarray:
    """Gradient of the graph coupling potential.

    Component k is -sum_{j in N_k} sin(theta_j - theta_k); the components sum
    to zero for undirected graphs.
    """
    th = as_heading_vector(theta)
    lap = _check_laplacian_shape(th, lap)
    z = np.exp(1j * th)
    return np.imag(np.conj(z) * (lap @ z))


def lyapunov_rate(theta, gains, lap=None) -> float:
    """Time derivative of the active potential under the gradient control law.

    Returns sum_k K_k * (dPhi/dtheta_k)^2 where Phi is the mean-field
    potential when ``lap`` is None and the graph potential otherwise. Strictly
    negative away from critical points whenever every gain is negative.
    """
    from .control import as_gains  # local import to avoid a cycle

    th = as_heading_vector(theta)
    k = as_gains(gains)
    if k.size != th.size:
        raise ValueError("gains length does not match headings")
    g = alignment_potential_grad(th) if lap is None else laplacian_potential_grad(th, lap)
    return float(np.sum(k * g * g))
