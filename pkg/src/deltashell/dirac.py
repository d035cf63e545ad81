"""Radial bound-state problem for a 2+1-dimensional Dirac particle bound to
an attractive shell potential V(r) = -a delta(r - r0).

The two real radial amplitudes (F, G) obey the coupled first-order system
(natural units, hbar = c = 1)

    F'(r) = (j/r) F - (E - V + M) G
    G'(r) = (E - V - M) F - (j/r) G

with half-odd-integer total angular momentum j. Inside the gap |E| < M the
regular and decaying solutions reduce to modified Bessel functions of
integer order. This module fixes one real-valued convention for them:

    inner (regular at 0, j > 0, n = j - 1/2):
        F = +sqrt((M+E) kr) I_n(kr),   G = -sqrt((M-E) kr) I_{n+1}(kr)
    outer (decaying, j > 0):
        F = +sqrt((M+E) kr) K_n(kr),   G = +sqrt((M-E) kr) K_{n+1}(kr)

with k = sqrt(M^2 - E^2). Both satisfy the system identically; the signs
follow from eliminating the complex phases of the cylindrical-wave form of
the same solutions, and are verified numerically by the ODE-residual tests
and the shooting oracle.

Crossing the shell rotates the pair: (F+, G+) = A(a) (F-, G-), where A(a)
is the SO(2) matrix [[cos a, -sin a], [sin a, cos a]]. Equivalently the
phase theta = atan2(F, G) jumps by -a, so bound-state energies are the
zeros of

    wrap(theta_plus(E) - theta_minus(E) + a)

with wrap(...) reducing modulo pi into (-pi/2, pi/2]. The mod-pi reduction
matters: the outer solution may match the rotated inner one with either
overall sign, both of which are admissible bound states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ._backend import iv_pair_scaled, kv_pair_scaled
from .errors import GapEdgeError

__all__ = [
    "GAP_MARGIN",
    "ShellParams",
    "Channel",
    "SpinorSample",
    "TransferMatrix",
    "kappa",
    "transfer_matrix",
    "apply_transfer",
    "inner_solution",
    "outer_solution",
    "inner_ratio",
    "outer_ratio",
    "shell_angles",
    "matching_residual",
    "mobius_residual",
    "reflect_negative_j",
    "wrap_half_pi",
]

# fraction of M kept clear of the gap edges |E| = M (kappa underflow guard)
GAP_MARGIN = 1e-9


@dataclass(frozen=True)
class ShellParams:
    """Physical configuration: mass M, shell radius r0, coupling a.

    The coupling may be any real number; a > 0 is the attractive case. The
    matching condition involves tan(a), so values within 1e-12 of
    pi/2 + k*pi are rejected at construction.
    """

    mass: float
    radius: float
    coupling: float

    def __post_init__(self):
        if not (self.mass > 0.0 and math.isfinite(self.mass)):
            raise ValueError(f"mass must be positive and finite, got {self.mass}")
        if not (self.radius > 0.0 and math.isfinite(self.radius)):
            raise ValueError(f"radius must be positive and finite, got {self.radius}")
        if not math.isfinite(self.coupling):
            raise ValueError(f"coupling must be finite, got {self.coupling}")
        u = (self.coupling - 0.5 * math.pi) / math.pi
        if abs(u - round(u)) * math.pi < 1e-12:
            raise ValueError(
                f"coupling {self.coupling} is within 1e-12 of pi/2 + k*pi, "
                "where tan(a) is undefined"
            )

    @property
    def alpha(self) -> float:
        """tan(a), the coupling parameter of the ratio form of the matching."""
        return math.tan(self.coupling)

    @property
    def is_attractive(self) -> bool:
        return self.coupling > 0.0

    def with_coupling(self, a: float) -> "ShellParams":
        return ShellParams(self.mass, self.radius, a)


@dataclass(frozen=True)
class Channel:
    """Total angular momentum j = two_j / 2, two_j an odd signed integer."""

    two_j: int

    def __post_init__(self):
        if not isinstance(self.two_j, int) or isinstance(self.two_j, bool):
            raise TypeError(f"two_j must be an int, got {type(self.two_j).__name__}")
        if self.two_j % 2 == 0:
            raise ValueError(f"two_j must be odd (j half-odd-integer), got {self.two_j}")

    @property
    def j(self) -> float:
        return 0.5 * self.two_j

    @property
    def label(self) -> str:
        return f"{self.two_j}/2"

    def reflected(self) -> "Channel":
        return Channel(-self.two_j)

    def bessel_orders(self) -> tuple[int, int]:
        """(j - 1/2, j + 1/2) as non-negative integers; requires j > 0."""
        if self.two_j < 0:
            raise ValueError("bessel_orders is defined for positive j only")
        n = (self.two_j - 1) // 2
        return n, n + 1


@dataclass(frozen=True)
class SpinorSample:
    """The two radial amplitudes at one radius."""

    r: float
    f: float
    g: float

    @property
    def norm2(self) -> float:
        return self.f * self.f + self.g * self.g

    @property
    def theta(self) -> float:
        """Phase angle atan2(F, G)."""
        return math.atan2(self.f, self.g)


@dataclass(frozen=True)
class TransferMatrix:
    """SO(2) rotation relating (F, G) just outside the shell to just inside."""

    angle: float

    @property
    def entries(self) -> tuple[tuple[float, float], tuple[float, float]]:
        c, s = math.cos(self.angle), math.sin(self.angle)
        return ((c, -s), (s, c))


def transfer_matrix(a: float) -> TransferMatrix:
    """The rotation by angle a applied to the spinor pair at the shell."""
    return TransferMatrix(angle=a)


def apply_transfer(A: TransferMatrix, s: SpinorSample) -> SpinorSample:
    """(F, G) -> (F cos a - G sin a, F sin a + G cos a) at the same radius."""
    (c, ms), (sn, c2) = A.entries
    return SpinorSample(r=s.r, f=c * s.f + ms * s.g, g=sn * s.f + c2 * s.g)


def kappa(mass: float, energy: float, gap_margin: float = GAP_MARGIN) -> float:
    """Decay constant sqrt(M^2 - E^2); only defined inside the gap.

    Raises GapEdgeError when |E| comes within gap_margin * M of the edge
    (pass gap_margin=0.0 to allow the closed interval |E| <= M).
    """
    if abs(energy) > mass:
        raise ValueError(f"|E| = {abs(energy)} exceeds the gap edge M = {mass}")
    if gap_margin > 0.0 and mass - abs(energy) < gap_margin * mass:
        raise GapEdgeError(
            f"E = {energy} within {gap_margin:g}*M of the gap edge; "
            "kappa underflows the working window"
        )
    return math.sqrt((mass - energy) * (mass + energy))


def _require_positive_j(ch: Channel) -> tuple[int, int]:
    if ch.two_j < 0:
        raise ValueError(
            "analytic solutions are provided for j > 0; negative channels "
            "are handled through reflect_negative_j"
        )
    return ch.bessel_orders()


def inner_solution(ch: Channel, energy: float, r: float, p: ShellParams) -> SpinorSample:
    """Regular-at-origin solution evaluated at r in (0, r0].

    Deterministic overall scale: the values carry a factor e^{-k r0}
    relative to the bare Bessel form, so they stay representable for any
    k*r0 while preserving the exact r-dependence.
    """
    n, _ = _require_positive_j(ch)
    if not 0.0 < r <= p.radius:
        raise ValueError(f"inner_solution requires 0 < r <= r0, got r = {r}")
    k = kappa(p.mass, energy)
    x = k * r
    i_n, i_n1 = iv_pair_scaled(n, x)
    damp = math.exp(-k * (p.radius - r))  # e^{x} * e^{-k r0}
    f = math.sqrt((p.mass + energy) * x) * i_n * damp
    g = -math.sqrt((p.mass - energy) * x) * i_n1 * damp
    return SpinorSample(r=r, f=f, g=g)


def outer_solution(ch: Channel, energy: float, r: float, p: ShellParams) -> SpinorSample:
    """Decaying solution evaluated at r >= r0, scale factor e^{+k r0}."""
    n, _ = _require_positive_j(ch)
    if r < p.radius:
        raise ValueError(f"outer_solution requires r >= r0, got r = {r}")
    k = kappa(p.mass, energy)
    x = k * r
    k_n, k_n1 = kv_pair_scaled(n, x)
    damp = math.exp(-k * (r - p.radius))  # e^{-x} * e^{+k r0}
    f = math.sqrt((p.mass + energy) * x) * k_n * damp
    g = math.sqrt((p.mass - energy) * x) * k_n1 * damp
    return SpinorSample(r=r, f=f, g=g)


def inner_ratio(ch: Channel, energy: float, p: ShellParams) -> float:
    """F/G of the regular solution at the shell radius."""
    n, _ = _require_positive_j(ch)
    k = kappa(p.mass, energy)
    i_n, i_n1 = iv_pair_scaled(n, k * p.radius)
    s = math.sqrt((p.mass + energy) / (p.mass - energy))
    return -s * i_n / i_n1


def outer_ratio(ch: Channel, energy: float, p: ShellParams) -> float:
    """F/G of the decaying solution at the shell radius."""
    n, _ = _require_positive_j(ch)
    k = kappa(p.mass, energy)
    k_n, k_n1 = kv_pair_scaled(n, k * p.radius)
    s = math.sqrt((p.mass + energy) / (p.mass - energy))
    return s * k_n / k_n1


def shell_angles(ch: Channel, energy: float, p: ShellParams) -> tuple[float, float]:
    """(theta_minus, theta_plus): phases atan2(F, G) of the regular and
    decaying solutions at the shell radius.

    Computed from exponentially scaled Bessel values; the positive common
    factors sqrt(k r0) and the scale exponents drop out of atan2.
    """
    n, _ = _require_positive_j(ch)
    k = kappa(p.mass, energy)
    x = k * p.radius
    sp = math.sqrt(p.mass + energy)
    sm = math.sqrt(p.mass - energy)
    i_n, i_n1 = iv_pair_scaled(n, x)
    k_n, k_n1 = kv_pair_scaled(n, x)
    theta_minus = math.atan2(sp * i_n, -sm * i_n1)
    theta_plus = math.atan2(sp * k_n, sm * k_n1)
    return theta_minus, theta_plus


def wrap_half_pi(x: float) -> float:
    """Reduce an angle difference modulo pi into (-pi/2, pi/2]."""
    y = math.remainder(x, math.pi)
    if y <= -0.5 * math.pi:
        y += math.pi
    return y


def matching_residual(ch: Channel, energy: float, p: ShellParams) -> float:
    """Continuous function of E whose zeros are the bound-state energies.

    Angle form of the shell matching: wrap(theta_plus - theta_minus + a),
    wrapped modulo pi. Built on atan2, so it stays continuous where G
    crosses zero (a plain arctan of F/G would jump by pi there); the only
    discontinuities are the mod-pi wrap jumps at +-pi/2, which root
    refinement rejects because the residual magnitude stays at pi/2 there.
    """
    theta_minus, theta_plus = shell_angles(ch, energy, p)
    return wrap_half_pi(theta_plus - theta_minus + p.coupling)


def mobius_residual(ch: Channel, energy: float, p: ShellParams) -> float:
    """Ratio form of the matching: (rho- - alpha)/(1 + alpha rho-) - rho+.

    Cross-check only. Shares its zero set with matching_residual but has
    poles where 1 + alpha*rho- vanishes and degenerates as the coupling
    approaches pi/2 + k*pi (alpha -> inf); the angle form is canonical.
    """
    rho_in = inner_ratio(ch, energy, p)
    rho_out = outer_ratio(ch, energy, p)
    alpha = p.alpha
    num = rho_in - alpha
    den = 1.0 + alpha * rho_in
    if den == 0.0:
        return math.copysign(math.inf, num)
    return num / den - rho_out


def reflect_negative_j(ch: Channel, energy: float) -> tuple[Channel, float]:
    """The involution (j, E) -> (-j, -E) with amplitude interchange F <-> G.

    Transporting a solution of the radial system along this map turns a
    solution for potential V into one for potential -V, so for the shell it
    links channel -j at coupling a to channel +j at coupling -a:
    bound energies satisfy E(-j, a) = -E(+j, -a). Applying the map twice is
    the identity.
    """
    return ch.reflected(), -energy
