"""Scenario-level interface: validated collision parameters and the
entanglement they generate.

Two Gaussian packets approach each other head-on, particle 1 from the
right (center q1 > 0, momentum -K) and particle 2 from the left (center
-q2 < 0, momentum +K), and bounce off hard-core repulsion of radius a.
The asymptotic entanglement depends only on the mass fractions and the
width ratio; positions, momentum and core radius drop out.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .covariance import (
    EntanglementResult,
    GaussianPacket,
    MassFractions,
    d_closed_form,
)

__all__ = [
    "ScatterParams",
    "ZeroEntanglementClass",
    "asymptotic_entanglement",
    "is_zero_entanglement",
    "d_asymptotic",
]


class ZeroEntanglementClass(enum.Enum):
    """Which exact condition, if any, forces vanishing entanglement."""

    EQUAL_MASS = "EqualMass"
    WIDTH_MASS_BALANCE = "WidthMassBalance"
    NONE = "None"


@dataclass(frozen=True)
class ScatterParams:
    """Full parameter set of one collision scenario.

    Masses are normalized to unit total mass on construction (only the
    fractions matter for the entanglement; storing raw masses alongside
    fractions would invite inconsistency).  Times fed to the grid
    simulator are therefore measured in the matching unit.

    ``q1``/``q2`` default to ``8 * max(sigma1, sigma2) + core_radius`` so
    that the initial packets overlap neither each other nor the core.
    """

    mass1: float
    mass2: float
    sigma1_sq: float
    sigma2_sq: float
    momentum: float = 1.0
    core_radius: float = 0.0
    q1: float | None = None
    q2: float | None = None

    def __post_init__(self) -> None:
        if self.mass1 <= 0.0 or self.mass2 <= 0.0:
            raise ValueError(f"masses must be positive, got {self.mass1}, {self.mass2}")
        if self.sigma1_sq <= 0.0 or self.sigma2_sq <= 0.0:
            raise ValueError(
                f"widths must be positive, got sigma1_sq={self.sigma1_sq}, "
                f"sigma2_sq={self.sigma2_sq}"
            )
        if self.momentum <= 0.0:
            raise ValueError(
                f"momentum must be positive so the packets approach each other, "
                f"got {self.momentum}"
            )
        if self.core_radius < 0.0:
            raise ValueError(f"core radius must be non-negative, got {self.core_radius}")
        total = self.mass1 + self.mass2
        object.__setattr__(self, "mass1", self.mass1 / total)
        object.__setattr__(self, "mass2", self.mass2 / total)
        default_q = 8.0 * math.sqrt(max(self.sigma1_sq, self.sigma2_sq)) + self.core_radius
        if self.q1 is None:
            object.__setattr__(self, "q1", default_q)
        if self.q2 is None:
            object.__setattr__(self, "q2", default_q)
        if self.q1 <= self.core_radius or self.q2 <= self.core_radius:
            raise ValueError(
                f"packets must start outside the core: need q1, q2 > "
                f"{self.core_radius}, got q1={self.q1}, q2={self.q2}"
            )

    @classmethod
    def from_fractions(
        cls,
        mu1: float,
        sigma1_sq: float,
        sigma2_sq: float,
        **kwargs,
    ) -> "ScatterParams":
        """Build from the mass fraction of particle 1 instead of raw masses."""
        mu = MassFractions(mu1)
        return cls(mu.mu1, mu.mu2, sigma1_sq, sigma2_sq, **kwargs)

    @property
    def fractions(self) -> MassFractions:
        return MassFractions(self.mass1, self.mass2)

    @property
    def packet1(self) -> GaussianPacket:
        return GaussianPacket(self.q1, -self.momentum, self.sigma1_sq)

    @property
    def packet2(self) -> GaussianPacket:
        return GaussianPacket(-self.q2, self.momentum, self.sigma2_sq)

    @property
    def width_ratio(self) -> float:
        """sigma1 / sigma2 (widths, not squared widths)."""
        return math.sqrt(self.sigma1_sq / self.sigma2_sq)


def asymptotic_entanglement(params: ScatterParams) -> EntanglementResult:
    """Entanglement of the outgoing state, long after the collision.

    Built from the closed-form d; independent of q1, q2, the momentum and
    the core radius by construction.
    """
    d = d_closed_form(params.fractions, params.sigma1_sq, params.sigma2_sq)
    return EntanglementResult.from_d(d)


def is_zero_entanglement(
    params: ScatterParams, tol: float = 1e-9
) -> ZeroEntanglementClass:
    """Classify whether the scenario sits on a zero-entanglement locus.

    Equal masses are detected with an absolute tolerance on |mu1 - mu2|
    (fractions are already normalized); the width/mass balance
    mu1 s1 = mu2 s2 with a relative one (scale-free in the widths).
    Equal masses take precedence when both conditions hold.
    """
    if tol < 0.0:
        raise ValueError(f"tolerance must be non-negative, got {tol}")
    mu = params.fractions
    if abs(mu.delta) <= tol:
        return ZeroEntanglementClass.EQUAL_MASS
    lhs = mu.mu1 * params.sigma1_sq
    rhs = mu.mu2 * params.sigma2_sq
    if abs(lhs - rhs) <= tol * max(lhs, rhs):
        return ZeroEntanglementClass.WIDTH_MASS_BALANCE
    return ZeroEntanglementClass.NONE


def d_asymptotic(mu: MassFractions | float, width_ratio: float) -> float:
    """Leading-order d for a large width ratio: |2 mu1 - 1| mu1 sigma1/sigma2.

    Accepts either a MassFractions value or a bare mu1; the bare form also
    admits the closed-interval limit mu1 = 1, where the expression attains
    its global maximum (the exact pipeline keeps mu1 strictly inside the
    open interval).
    """
    if width_ratio <= 0.0:
        raise ValueError(f"width ratio must be positive, got {width_ratio}")
    mu1 = mu.mu1 if isinstance(mu, MassFractions) else float(mu)
    if not 0.0 < mu1 <= 1.0:
        raise ValueError(f"mu1 must lie in (0, 1], got {mu1}")
    return abs(2.0 * mu1 - 1.0) * mu1 * width_ratio
