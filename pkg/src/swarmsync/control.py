"""Per-agent turn-rate commands.

Two coupling variants share one shape, u_k = omega0 + K_k * dPhi/dtheta_k:

  * mean-field (all-to-all):  u_k = omega0 - (K_k/N) sum_{j != k} sin(theta_j - theta_k)
  * neighbor (graph) coupling: u_k = omega0 - K_k sum_{j in N_k} sin(theta_j - theta_k)

Note the mean-field law carries a 1/N factor the neighbor law does not: on a
complete graph the neighbor law equals the mean-field law with gains scaled
by N. Gains are implemented from the potential-gradient form; the sine forms
above are derived identities, tested against each other.

Bounded actuation comes in two flavors: capping |K_k| at (N/(N-1))*u_max,
which bounds |u_k| by u_max analytically, or clipping the command itself with
a saturation function.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass

import numpy as np

from .phase import alignment_potential_grad, as_heading_vector, laplacian_potential_grad
from .topology import InteractionGraph, is_connected, laplacian


class GainClass(str, enum.Enum):
    ALL_NEGATIVE = "all_negative"
    MIXED_SUM_NEGATIVE = "mixed_sum_negative"
    OTHER = "other"


@dataclass(frozen=True, eq=False)
class GainVector:
    """Per-agent controller gains K_k. Zero gains are rejected at construction."""

    gains: np.ndarray

    def __post_init__(self):
        g = np.atleast_1d(np.asarray(self.gains, dtype=float))
        if g.ndim != 1 or g.size == 0:
            raise ValueError("gains must be a non-empty 1-D sequence")
        if not np.all(np.isfinite(g)):
            raise ValueError("gains contain non-finite entries")
        if np.any(g == 0.0):
            idx = int(np.flatnonzero(g == 0.0)[0])
            raise ValueError(f"gain K_{idx} is exactly 0; zero gains are not allowed")
        g = g.copy()
        g.setflags(write=False)
        object.__setattr__(self, "gains", g)

    def __len__(self) -> int:
        return self.gains.size

    @property
    def classification(self) -> GainClass:
        if np.all(self.gains < 0.0):
            return GainClass.ALL_NEGATIVE
        if self.gains.sum() < 0.0:
            return GainClass.MIXED_SUM_NEGATIVE
        return GainClass.OTHER

    @property
    def all_negative(self) -> bool:
        return self.classification is GainClass.ALL_NEGATIVE


def as_gains(gains) -> np.ndarray:
    """Accept a GainVector or array-like; return the validated gain array."""
    if isinstance(gains, GainVector):
        return gains.gains
    return GainVector(np.asarray(gains, dtype=float)).gains


@dataclass(frozen=True, eq=False)
class ControlCommand:
    """Turn-rate commands (rad/s) plus a per-agent clipping record."""

    u: np.ndarray
    saturated_mask: np.ndarray


def control_all_to_all(theta, gains, omega0: float = 0.0) -> ControlCommand:
    """Mean-field command u_k = omega0 - (K_k/N) sum_{j != k} sin(theta_j - theta_k)."""
    th = as_heading_vector(theta)
    k = as_gains(gains)
    if k.size != th.size:
        raise ValueError("gains length does not match headings")
    u = omega0 + k * alignment_potential_grad(th)
    return ControlCommand(u=u, saturated_mask=np.zeros(th.size, dtype=bool))


def control_limited(theta, gains, g: InteractionGraph, omega0: float = 0.0) -> ControlCommand:
    """Neighbor command u_k = omega0 - K_k sum_{j in N_k} sin(theta_j - theta_k)."""
    th = as_heading_vector(theta)
    k = as_gains(gains)
    if k.size != th.size:
        raise ValueError("gains length does not match headings")
    if g.n != th.size:
        raise ValueError("graph size does not match headings")
    if not is_connected(g):
        warnings.warn("interaction graph is not connected; synchronization is not guaranteed")
    u = omega0 + k * laplacian_potential_grad(th, laplacian(g))
    return ControlCommand(u=u, saturated_mask=np.zeros(th.size, dtype=bool))


def saturate(cmd: ControlCommand, u_max: float) -> ControlCommand:
    """Clamp each command to [-u_max, u_max]; the mask records actual clipping.

    Commands exactly at the limit pass unchanged. Idempotent.
    """
    if not u_max > 0.0:
        raise ValueError("u_max must be positive")
    mask = np.abs(cmd.u) > u_max
    return ControlCommand(u=np.clip(cmd.u, -u_max, u_max), saturated_mask=mask)


def gain_cap(n: int, u_max: float) -> float:
    """Largest |K_k| keeping the mean-field command within u_max.

    |u_k| <= ((N-1)/N)|K_k| for the mean-field law, so any |K_k| <=
    (N/(N-1))*u_max guarantees |u_k| <= u_max without clipping.
    """
    if n < 2:
        raise ValueError("gain cap needs n >= 2")
    if not u_max > 0.0:
        raise ValueError("u_max must be positive")
    return (n / (n - 1)) * u_max


@dataclass(frozen=True)
class GainValidation:
    passed: bool
    regime: str
    offending: tuple[int, ...]
    message: str

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "regime": self.regime,
            "offending": list(self.offending),
            "message": self.message,
        }


def validate_gains(gains, regime: str, n: int | None = None, u_max: float | None = None) -> GainValidation:
    """Check gains against a named admissibility regime.

    Regimes: ``all_negative`` (every K_k < 0), ``two_agent_sum``
    (K_1 + K_2 < 0, exactly two gains), ``cap`` (|K_k| <= gain_cap(n, u_max)).
    """
    k = as_gains(gains)
    if regime == "all_negative":
        bad = tuple(int(i) for i in np.flatnonzero(k >= 0.0))
        ok = not bad
        msg = "all gains negative" if ok else f"non-negative gains at indices {list(bad)}"
        return GainValidation(ok, regime, bad, msg)
    if regime == "two_agent_sum":
        if k.size != 2:
            raise ValueError("two_agent_sum regime needs exactly 2 gains")
        ok = bool(k.sum() < 0.0)
        msg = "K_1 + K_2 < 0" if ok else f"K_1 + K_2 = {k.sum():g} is not negative"
        return GainValidation(ok, regime, () if ok else (0, 1), msg)
    if regime == "cap":
        if u_max is None:
            raise ValueError("cap regime needs u_max")
        cap = gain_cap(k.size if n is None else n, u_max)
        bad = tuple(int(i) for i in np.flatnonzero(np.abs(k) > cap))
        ok = not bad
        msg = (
            f"all |K_k| within cap {cap:g}"
            if ok
            else f"|K_k| exceeds cap {cap:g} at indices {list(bad)}"
        )
        return GainValidation(ok, regime, bad, msg)
    raise ValueError(f"unknown gain regime {regime!r}")


def named_gain_set(name: str, n: int) -> np.ndarray:
    """Built-in gain families, indexed by agent number k = 1..n.

    set1: K_k = -k        set2: K_k = -1/k
    set3: K_1 = 0.5, K_k = -k for k >= 2 (mixed signs, negative sum)
    set4: K_k = -0.1/k    (all within gain_cap(n, 0.1))
    """
    ks = np.arange(1, n + 1, dtype=float)
    if name == "set1":
        return -ks
    if name == "set2":
        return -1.0 / ks
    if name == "set3":
        g = -ks
        g[0] = 0.5
        return g
    if name == "set4":
        return -0.1 / ks
    raise ValueError(f"unknown gain set {name!r}; expected set1..set4")
