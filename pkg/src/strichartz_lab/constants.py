"""Closed-form precompactness thresholds and the known sharp-constant registry.

The symmetric threshold [sqrt(3) a (a-1)]^(-1/6) and the asymmetric one
((a^2-a)/2)^(-1/q) * M2(q,r) agree at (q, r) = (6, 6) because
[2 sqrt(3)]^(-1/6) = 12^(-1/12); the registry file records the provenance of
every stored constant, including the misprint note for the L^6 value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from importlib import resources

from .errors import InvalidAlphaError, InvalidInputError

__all__ = [
    "symmetric_threshold",
    "asymmetric_threshold",
    "precompactness_report",
    "ThresholdReport",
    "RegistryEntry",
    "known_constants",
    "M2_SYMMETRIC",
    "M2_Q8_R4",
]

# Sharp constants of the classical (alpha = 2) flow in d = 1.
M2_SYMMETRIC = 12.0 ** (-1.0 / 12.0)  # L^6_{t,x}; Gaussians extremal
M2_Q8_R4 = 2.0 ** (-0.25)  # L^8_t L^4_x; Gaussians extremal


@dataclass(frozen=True)
class RegistryEntry:
    key: str
    value: float
    expression: str
    provenance: str


@dataclass(frozen=True)
class ThresholdReport:
    alpha: float
    q: float
    r: float
    threshold: float
    measured_ratio: float
    margin: float
    verdict: str  # strict-above | within-tolerance | below(diagnostic)

    def line(self) -> str:
        return (
            f"alpha={self.alpha:g} (q,r)=({self.q:g},{self.r:g}) "
            f"measured={self.measured_ratio:.6f} threshold={self.threshold:.6f} "
            f"margin={self.margin:+.6f} -> {self.verdict}"
        )


def known_constants() -> dict[str, RegistryEntry]:
    """Parse the shipped registry file (``key | expression | provenance``)."""
    text = resources.files("strichartz_lab").joinpath("data/known_constants.txt").read_text()
    entries: dict[str, RegistryEntry] = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, expr, prov = (part.strip() for part in line.split("|", 2))
        value = float(eval(expr, {"__builtins__": {}}, {"sqrt": math.sqrt}))  # noqa: S307
        entries[key] = RegistryEntry(key, value, expr, prov)
    return entries


def symmetric_threshold(alpha: float) -> float:
    """[sqrt(3) * alpha * (alpha - 1)]^(-1/6); precompactness cutoff for the L^6 constant."""
    if not (alpha > 1 and math.isfinite(alpha)):
        raise InvalidAlphaError(f"alpha must exceed 1, got {alpha}")
    return (math.sqrt(3.0) * alpha * (alpha - 1.0)) ** (-1.0 / 6.0)


def asymmetric_threshold(alpha: float, q: float, schrodinger_constant: float) -> float:
    """((alpha^2 - alpha)/2)^(-1/q) times the classical constant for the same pair."""
    if not (alpha > 1 and math.isfinite(alpha)):
        raise InvalidInputError(f"alpha must exceed 1, got {alpha}")
    if not (q > 0 and math.isfinite(q)):
        raise InvalidInputError(f"q must be positive, got {q}")
    if not (schrodinger_constant > 0):
        raise InvalidInputError("classical constant must be positive")
    return ((alpha * alpha - alpha) / 2.0) ** (-1.0 / q) * schrodinger_constant


def precompactness_report(
    alpha: float, q: float, r: float, measured_ratio: float, tol: float
) -> ThresholdReport:
    """Compare a measured ratio against the closed-form threshold.

    ``strict-above`` certifies margin > tol; ``within-tolerance`` means the
    measurement cannot distinguish the ratio from the threshold (the equality
    case); ``below(diagnostic)`` flags a measurement below a proven lower
    bound, which can only be a numerical artifact.
    """
    for name, v in (("alpha", alpha), ("q", q), ("r", r),
                    ("measured_ratio", measured_ratio), ("tol", tol)):
        if not math.isfinite(v):
            raise InvalidInputError(f"{name} must be finite")
    if q == 6.0 and r == 6.0:
        threshold = symmetric_threshold(alpha)
    elif (q, r) == (8.0, 4.0):
        threshold = asymmetric_threshold(alpha, q, M2_Q8_R4)
    else:
        raise InvalidInputError(
            f"no registry constant for the classical pair ({q:g},{r:g})"
        )
    margin = measured_ratio - threshold
    if margin > tol:
        verdict = "strict-above"
    elif abs(margin) <= tol:
        verdict = "within-tolerance"
    else:
        verdict = "below(diagnostic)"
    return ThresholdReport(alpha, q, r, threshold, measured_ratio, margin, verdict)
