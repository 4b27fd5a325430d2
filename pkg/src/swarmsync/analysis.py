"""Closed-form direction prediction, reachability, gain synthesis, and
critical-point classification.

The geometric backbone: when the initial unit heading vectors span an acute
convex cone (an arc shorter than pi), the order parameter never leaves that
cone, so for all-negative gains the swarm synchronizes at

    theta_c = (sum_k theta_hat_k0 / K_k) / (sum_k 1 / K_k) + theta_R,

a 1/K-weighted average of the initial headings expressed in a frame rotated
by theta_R so that all of them are non-negative. The weighting is a convex
combination, so exactly the open interior of the initial arc is reachable
with negative gains; the extreme rays are not. For two agents the admissible
gain set relaxes to K_1 + K_2 < 0 and every direction on the circle becomes
reachable, including directions outside the initial arc.

All angles here are radians; results are wrapped to (-pi, pi].
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .angles import TWO_PI, wrap_angle
from .control import GainVector, as_gains
from .phase import alignment_potential_grad, as_heading_vector, order_parameter


class NonAcuteConeError(ValueError):
    """Initial headings span half the circle or more; the cone theory does not apply."""


@dataclass(frozen=True)
class RotatedFrame:
    """Reference rotation that makes every initial heading non-negative.

    ``theta_hat0`` are the rotated headings, all in [0, span] with the
    minimum exactly 0. The cone is acute iff span < pi.
    """

    theta_R: float
    theta_hat0: np.ndarray
    span: float
    acute: bool


def rotated_frame(theta0) -> RotatedFrame:
    """Pick the extreme-ray reference angle and rotate the headings onto it.

    Every heading is tried as the reference; the one minimizing the maximum
    relative angle (taken in [0, 2*pi)) wins, ties going to the smallest
    index. Initial headings must lie in the open interval (-pi, pi).
    """
    th = as_heading_vector(theta0)
    if np.any(th <= -np.pi) or np.any(th >= np.pi):
        raise ValueError("initial headings must lie in the open interval (-pi, pi)")
    best_span = np.inf
    best_rel = None
    best_ref = 0.0
    for cand in th:
        rel = np.mod(th - cand, TWO_PI)
        span = float(rel.max())
        if span < best_span:
            best_span = span
            best_rel = rel
            best_ref = float(cand)
    return RotatedFrame(
        theta_R=best_ref,
        theta_hat0=best_rel,
        span=best_span,
        acute=bool(best_span < np.pi),
    )


def _require_acute(frame: RotatedFrame) -> RotatedFrame:
    if not frame.acute:
        raise NonAcuteConeError(
            f"initial headings span {np.degrees(frame.span):.3f} deg >= 180 deg"
        )
    return frame


def _require_all_negative(gains) -> np.ndarray:
    k = as_gains(gains)
    if np.any(k > 0.0):
        raise ValueError("all gains must be negative for this operation")
    return k


def _rotated_prediction(theta_hat0: np.ndarray, k: np.ndarray) -> float:
    inv = 1.0 / k
    return float((theta_hat0 @ inv) / inv.sum())


def predict_direction(theta0, gains) -> float:
    """Synchronized direction for all-negative gains, wrapped to (-pi, pi]."""
    frame = _require_acute(rotated_frame(theta0))
    k = _require_all_negative(gains)
    if k.size != frame.theta_hat0.size:
        raise ValueError("gains length does not match headings")
    return float(wrap_angle(_rotated_prediction(frame.theta_hat0, k) + frame.theta_R))


def convex_weights(gains) -> np.ndarray:
    """Weights lambda_k = (1/K_k) / sum_j (1/K_j); positive, summing to 1.

    The predicted direction is exactly sum_k lambda_k * theta_hat_k0 in the
    rotated frame.
    """
    k = _require_all_negative(gains)
    inv = 1.0 / k
    return inv / inv.sum()


@dataclass(frozen=True)
class ReachabilityReport:
    """Which synchronized directions are attainable from given initial headings."""

    target: float
    interval_rotated: tuple[float, float]
    interval_standard: tuple[float, float]
    reachable_negative_gains: bool
    reachable_two_agent_extended: bool | None
    theta_R: float
    span: float

    def to_dict(self) -> dict:
        return {
            "target": self.target,
            "target_deg": float(np.degrees(self.target)),
            "interval_rotated": list(self.interval_rotated),
            "interval_standard": list(self.interval_standard),
            "reachable_negative_gains": self.reachable_negative_gains,
            "reachable_two_agent_extended": self.reachable_two_agent_extended,
            "theta_R": self.theta_R,
            "span": self.span,
        }


def is_reachable(theta0, target: float) -> ReachabilityReport:
    """Strict-interior reachability test for all-negative gains.

    The open interval between the extreme rays is reachable; the rays
    themselves are not. For two agents the report also notes the extended
    regime (any direction, via mixed-sign gains with negative sum).
    """
    frame = _require_acute(rotated_frame(theta0))
    t_hat = float(np.mod(target - frame.theta_R, TWO_PI))
    reachable = bool(0.0 < t_hat < frame.span)
    extended: bool | None = None
    if frame.theta_hat0.size == 2:
        if frame.span > 0.0:
            extended = True
        else:
            extended = bool(abs(wrap_angle(target - frame.theta_R)) < 1e-12)
    return ReachabilityReport(
        target=float(wrap_angle(target)),
        interval_rotated=(0.0, frame.span),
        interval_standard=(
            float(wrap_angle(frame.theta_R)),
            float(wrap_angle(frame.theta_R + frame.span)),
        ),
        reachable_negative_gains=reachable,
        reachable_two_agent_extended=extended,
        theta_R=frame.theta_R,
        span=frame.span,
    )


def synthesize_gains(theta0, target: float, c: float = -1.0) -> GainVector:
    """All-negative gains K_k = c / alpha_k steering sync to ``target``.

    The convex weights alpha are a deterministic blend of uniform weights
    with a two-point bracket around the target: the bracket pair is pushed
    just far enough past the target that mixing with the uniform mean lands
    the weighted average exactly on it. Every alpha_k stays strictly
    positive, so any c < 0 yields strictly negative gains with
    sum_k 1/K_k = 1/c. The gains are not unique; rescaling c moves them all.
    """
    if not c < 0.0:
        raise ValueError("c must be negative")
    report = is_reachable(theta0, target)
    if not report.reachable_negative_gains:
        raise ValueError(
            f"target {np.degrees(wrap_angle(target)):.4f} deg is not reachable "
            "with all-negative gains (must be strictly inside the initial arc)"
        )
    frame = rotated_frame(theta0)
    hat = frame.theta_hat0
    n = hat.size
    t_hat = float(np.mod(target - frame.theta_R, TWO_PI))
    mean = float(hat.mean())

    alpha = np.full(n, 1.0 / n)
    if abs(t_hat - mean) > 1e-15 * max(1.0, frame.span):
        if t_hat > mean:
            above = np.flatnonzero(hat > t_hat)
            hi = int(above[np.argmin(hat[above])])
            below = np.flatnonzero(hat <= t_hat)
            lo = int(below[np.argmax(hat[below])])
            s_min = (t_hat - mean) / (hat[hi] - mean)
        else:
            below = np.flatnonzero(hat < t_hat)
            lo = int(below[np.argmax(hat[below])])
            above = np.flatnonzero(hat >= t_hat)
            hi = int(above[np.argmin(hat[above])])
            s_min = (mean - t_hat) / (mean - hat[lo])
        s = 0.5 * (1.0 + s_min)
        t_adj = mean + (t_hat - mean) / s
        w_hi = (t_adj - hat[lo]) / (hat[hi] - hat[lo])
        alpha *= 1.0 - s
        alpha[lo] += s * (1.0 - w_hi)
        alpha[hi] += s * w_hi
    if np.any(alpha <= 0.0):
        raise RuntimeError("internal error: synthesized weights not strictly positive")
    return GainVector(c / alpha)


@dataclass(frozen=True)
class PerturbationBounds:
    """Admissible final directions when homogeneous gains carry up to a
    fractional error eta.

    All angles are in the rotated frame. ``mean_direction`` is the
    unperturbed homogeneous-gain direction (the arithmetic mean of the
    rotated initial headings); deviations satisfy
    delta_lower = (2*eta/(1+eta)) * mean and delta_upper = (2*eta/(1-eta)) *
    mean. ``admissible_lo/hi`` intersect that band with the open reachable
    interval (0, span).
    """

    eta: float
    mean_direction: float
    delta_lower: float
    delta_upper: float
    admissible_lo: float
    admissible_hi: float
    theta_R: float
    span: float

    def contains(self, rotated_direction: float, tol: float = 1e-12) -> bool:
        x = rotated_direction
        return bool(
            0.0 < x < self.span
            and self.admissible_lo - tol <= x <= self.admissible_hi + tol
        )

    def to_dict(self) -> dict:
        return {
            "eta": self.eta,
            "mean_direction": self.mean_direction,
            "mean_direction_deg": float(np.degrees(self.mean_direction)),
            "delta_lower": self.delta_lower,
            "delta_upper": self.delta_upper,
            "admissible_lo": self.admissible_lo,
            "admissible_hi": self.admissible_hi,
            "theta_R": self.theta_R,
            "span": self.span,
        }


def perturbation_bounds(theta0, eta: float) -> PerturbationBounds:
    """Deviation band of the final direction under gain errors |eps_k| <= eta*|K|."""
    if not 0.0 <= eta < 1.0:
        raise ValueError("eta must lie in [0, 1)")
    frame = _require_acute(rotated_frame(theta0))
    mean = float(frame.theta_hat0.mean())
    delta_lower = (2.0 * eta / (1.0 + eta)) * mean
    delta_upper = (2.0 * eta / (1.0 - eta)) * mean
    return PerturbationBounds(
        eta=eta,
        mean_direction=mean,
        delta_lower=delta_lower,
        delta_upper=delta_upper,
        admissible_lo=max(0.0, mean - delta_lower),
        admissible_hi=min(frame.span, mean + delta_upper),
        theta_R=frame.theta_R,
        span=frame.span,
    )


def two_agent_direction(theta0, gains) -> float:
    """Synchronized direction of a pair under the relaxed condition K_1 + K_2 < 0.

    theta_hat_c = (K_2*theta_hat_10 + K_1*theta_hat_20) / (K_1 + K_2); with a
    positive gain in the mix the result can leave the initial arc. Wrapped to
    (-pi, pi].
    """
    th = as_heading_vector(theta0)
    if th.size != 2:
        raise ValueError("two_agent_direction needs exactly 2 headings")
    k = as_gains(gains)
    if k.size != 2:
        raise ValueError("two_agent_direction needs exactly 2 gains")
    if not k.sum() < 0.0:
        raise ValueError("requires K_1 + K_2 < 0")
    frame = _require_acute(rotated_frame(th))
    hat_c = (k[1] * frame.theta_hat0[0] + k[0] * frame.theta_hat0[1]) / k.sum()
    return float(wrap_angle(hat_c + frame.theta_R))


def two_agent_gains(theta0, target: float) -> GainVector:
    """Gains with K_1 + K_2 < 0 steering a pair to any direction on the circle.

    Interior targets use two negative gains; targets at or beyond the arc
    ends use one positive and one negative gain. The two rotated-frame
    boundary directions themselves would require a zero gain, which is
    excluded, so they raise.
    """
    th = as_heading_vector(theta0)
    if th.size != 2:
        raise ValueError("two_agent_gains needs exactly 2 headings")
    frame = _require_acute(rotated_frame(th))
    span = frame.span
    t_hat = float(wrap_angle(target - frame.theta_R))
    lo_i = int(np.argmin(frame.theta_hat0))
    hi_i = 1 - lo_i
    if span == 0.0:
        if abs(t_hat) < 1e-12:
            return GainVector(np.array([-1.0, -1.0]))
        raise ValueError("agents share one heading; only that direction is reachable")
    k = np.empty(2)
    if 0.0 < t_hat < span:
        lam_hi = t_hat / span
        k[lo_i] = -1.0 / (1.0 - lam_hi)
        k[hi_i] = -1.0 / lam_hi
    elif t_hat <= 0.0:
        beta = -t_hat / span
        if beta == 0.0:
            raise ValueError("boundary direction requires a zero gain, which is excluded")
        k[lo_i] = beta
        k[hi_i] = -(1.0 + beta)
    else:  # t_hat >= span
        gamma = (t_hat - span) / span
        if gamma == 0.0:
            raise ValueError("boundary direction requires a zero gain, which is excluded")
        k[hi_i] = gamma
        k[lo_i] = -(1.0 + gamma)
    return GainVector(k)


def critical_point_hessian(theta) -> np.ndarray:
    """Second-derivative matrix used to classify alignment critical points.

    Entries: 1/N - |p| cos(Psi - theta_k) on the diagonal and
    (1/N) cos(theta_j - theta_k) off it. This is the negative of the true
    Hessian of the alignment potential; the global sign flip does not affect
    indefiniteness-based classification. At a configuration with M agents
    opposite the mean phase it equals (1/N) w w^T + |p| diag(w) for the
    block sign vector w.
    """
    th = as_heading_vector(theta)
    n = th.size
    z = np.exp(1j * th)
    p = z.mean()
    h = np.real(np.outer(z, np.conj(z))) / n
    np.fill_diagonal(h, 1.0 / n - np.real(np.conj(p) * z))
    return h


class CriticalKind(str, enum.Enum):
    SYNC_MINIMUM = "sync_minimum"
    SADDLE = "saddle"
    BALANCED_MAXIMUM = "balanced_maximum"


@dataclass(frozen=True)
class CriticalPointConfig:
    """Classification of a zero-gradient heading configuration.

    ``antipodal_count`` is the number of agents at the phase opposite the
    mean phase (None for balanced configurations, where the mean phase is
    undefined).
    """

    antipodal_count: int | None
    p_mag: float
    kind: CriticalKind

    def to_dict(self) -> dict:
        return {
            "antipodal_count": self.antipodal_count,
            "p_mag": self.p_mag,
            "kind": self.kind.value,
        }


def classify_critical_point(theta, grad_tol: float = 1e-8) -> CriticalPointConfig:
    """Sort a critical configuration into minimum, saddle, or balanced maximum.

    Away from balance every agent sits at the mean phase Psi or at Psi + pi;
    zero agents opposite means the synchronized minimum, otherwise a saddle
    whose indefiniteness is confirmed by a two-agent witness vector q with
    q^T H q = -2|p| < 0.
    """
    th = as_heading_vector(theta)
    g = alignment_potential_grad(th)
    if np.max(np.abs(g)) > grad_tol:
        raise ValueError(
            f"configuration is not critical: max |gradient| = {np.max(np.abs(g)):.3e}"
        )
    op = order_parameter(th)
    if op.magnitude < 1e-8:
        return CriticalPointConfig(None, op.magnitude, CriticalKind.BALANCED_MAXIMUM)
    rel = wrap_angle(th - op.mean_phase)
    opposed = np.abs(rel) > 0.5 * np.pi
    m = int(np.count_nonzero(opposed))
    if m == 0:
        return CriticalPointConfig(0, op.magnitude, CriticalKind.SYNC_MINIMUM)
    aligned = np.flatnonzero(~opposed)
    if aligned.size < 2:
        raise ValueError("inconsistent critical configuration: majority block too small")
    q = np.zeros(th.size)
    q[aligned[0]] = -1.0
    q[aligned[1]] = 1.0
    witness = float(q @ critical_point_hessian(th) @ q)
    if witness >= 0.0:
        raise ValueError("saddle witness failed; configuration is not a clean saddle")
    return CriticalPointConfig(m, op.magnitude, CriticalKind.SADDLE)


def conic_hull_contains(theta0, point) -> bool:
    """Membership of a complex point in the unit-disk slice of the initial cone.

    The cone is the angular sector [theta_R, theta_R + span] spanned by the
    initial unit heading vectors; zero counts as contained. Requires an acute
    cone.
    """
    frame = _require_acute(rotated_frame(theta0))
    if isinstance(point, (tuple, list)) and len(point) == 2:
        z = complex(point[0], point[1])
    else:
        z = complex(point)
    r = abs(z)
    if r > 1.0 + 1e-12:
        return False
    if r < 1e-15:
        return True
    ang = float(np.mod(np.angle(z) - frame.theta_R, TWO_PI))
    return ang <= frame.span + 1e-12 or ang >= TWO_PI - 1e-12
