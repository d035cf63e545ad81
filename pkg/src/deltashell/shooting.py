"""Independent verification path for the bound-state solver.

The shell potential is replaced by a narrow normalized bump of width sigma,
the radial system is integrated numerically outward from the origin and
inward from the far decay region with an adaptive Cash-Karp 5(4) stepper,
and eigenvalues are the energies where the two phases meet at the bump's
outer edge. Extrapolating the measured eigenvalue to sigma -> 0 recovers
the exact shell result.

Nothing here touches the analytic solution layer: start conditions come
from the frozen-coefficient limits of the radial system itself (power-law
behavior at small r, pure exponential decay at large r), so agreement with
the matching-condition solver is a genuine two-route check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ._backend import integrate_radial
from .dirac import GAP_MARGIN, Channel, ShellParams, kappa, wrap_half_pi
from .errors import ConvergenceError, ExtrapolationError
from .spectrum import SearchConfig, _scan_with_densify

__all__ = [
    "RegularizedPotential",
    "IntegrationConfig",
    "TraceSample",
    "SolutionTrace",
    "integrate_outward",
    "integrate_inward",
    "phase_mismatch",
    "shoot_bound_state",
    "WidthExtrapolation",
    "fit_width_power_law",
    "extrapolate_to_zero_width",
]

_SQRT_2PI = 2.5066282746310005024

# half-width of the window (in units of sigma) where the gaussian bump is
# numerically distinguishable from zero and步 steps are capped
_GAUSS_WINDOW = 10.0

_SHAPES = ("gaussian", "top_hat")


@dataclass(frozen=True)
class RegularizedPotential:
    """Normalized bump standing in for the shell: integral over r is -a.

    gaussian: -a exp(-(r-r0)^2 / 2 sigma^2) / (sigma sqrt(2 pi))
    top_hat:  -a / (2 sigma) on [r0 - sigma, r0 + sigma], zero elsewhere

    The width must satisfy sigma <= r0 / 10 so the support stays well inside
    the half-line.
    """

    coupling: float
    radius: float
    sigma: float
    shape: str = "gaussian"

    def __post_init__(self):
        if self.shape not in _SHAPES:
            raise ValueError(f"shape must be one of {_SHAPES}, got {self.shape!r}")
        if not self.sigma > 0.0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if self.sigma > self.radius / 10.0:
            raise ValueError(
                f"sigma = {self.sigma} exceeds r0/10 = {self.radius / 10.0}"
            )

    def __call__(self, r: float) -> float:
        if self.shape == "gaussian":
            u = (r - self.radius) / self.sigma
            return -self.coupling * math.exp(-0.5 * u * u) / (self.sigma * _SQRT_2PI)
        if abs(r - self.radius) <= self.sigma:
            return -self.coupling / (2.0 * self.sigma)
        return 0.0

    @property
    def support(self) -> tuple[float, float]:
        """Radial window outside which the bump is treated as zero."""
        w = _GAUSS_WINDOW * self.sigma if self.shape == "gaussian" else self.sigma
        return self.radius - w, self.radius + w


@dataclass(frozen=True)
class IntegrationConfig:
    """Local error control and integration range for the shooting runs.

    r_min defaults to 1e-6 * r0 and r_max to r0 + kappa_span / kappa, both
    resolved per energy when left at None.
    """

    rtol: float = 1e-10
    atol: float = 1e-12
    r_min: float | None = None
    r_max: float | None = None
    kappa_span: float = 40.0
    max_steps: int = 5_000_000

    def __post_init__(self):
        for name in ("rtol", "atol", "kappa_span"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be positive")
        if self.r_min is not None and not self.r_min > 0.0:
            raise ValueError("r_min must be positive")
        if self.r_max is not None and not self.r_max > 0.0:
            raise ValueError("r_max must be positive")
        if self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")


@dataclass(frozen=True)
class TraceSample:
    """Renormalized amplitudes at one radius; the unscaled solution is
    (f, g) * exp(log_scale) up to the run's start normalization."""

    r: float
    f: float
    g: float
    log_scale: float

    @property
    def theta(self) -> float:
        return math.atan2(self.f, self.g)

    @property
    def norm(self) -> float:
        return math.hypot(self.f, self.g)


@dataclass(frozen=True)
class SolutionTrace:
    samples: tuple[TraceSample, ...]
    n_steps: int
    n_renorms: int

    @property
    def final(self) -> TraceSample:
        return self.samples[-1]


class _Marcher:
    """Piecewise integration state: splits every move at the bump edges so
    each kernel call sees a smooth potential."""

    def __init__(self, ch, energy, pot, cfg):
        self.two_j = ch.two_j
        self.energy = energy
        self.mass = None  # set by callers via params
        self.pot = pot
        self.cfg = cfg
        self.f = 0.0
        self.g = 0.0
        self.r = 0.0
        self.log_scale = 0.0
        self.steps = 0
        self.renorms = 0

    def set_state(self, r, f, g, mass):
        self.r, self.f, self.g, self.mass = r, f, g, mass

    def _kernel(self, r_to, kind, va, max_step):
        f, g, ls, steps, renorms, status = integrate_radial(
            self.two_j,
            self.energy,
            self.mass,
            self.r,
            r_to,
            self.f,
            self.g,
            kind,
            va,
            self.pot.radius,
            self.pot.sigma,
            self.cfg.rtol,
            self.cfg.atol,
            max_step,
            0.0,
            self.cfg.max_steps - self.steps,
        )
        if status == 1:
            raise ConvergenceError(
                f"step budget {self.cfg.max_steps} exhausted at r = {self.r}"
            )
        if status == 2:
            raise ConvergenceError(f"step size underflow near r = {self.r} (stiffness)")
        self.f, self.g, self.r = f, g, r_to
        self.log_scale += ls
        self.steps += steps
        self.renorms += renorms

    def advance(self, r_to):
        lo, hi = self.pot.support
        gaussian = self.pot.shape == "gaussian"
        const_v = -self.pot.coupling / (2.0 * self.pot.sigma)
        while self.r != r_to:
            if self.r < r_to:  # outward
                if self.r < lo:
                    target, kind = min(r_to, lo), 0
                elif self.r < hi:
                    target = min(r_to, hi)
                    kind = 1 if gaussian else 2
                else:
                    target, kind = r_to, 0
            else:  # inward
                if self.r > hi:
                    target, kind = max(r_to, hi), 0
                elif self.r > lo:
                    target = max(r_to, lo)
                    kind = 1 if gaussian else 2
                else:
                    target, kind = r_to, 0
            if kind == 1:
                self._kernel(target, 1, self.pot.coupling, self.pot.sigma / 3.0)
            elif kind == 2:
                self._kernel(target, 2, const_v, math.inf)
            else:
                self._kernel(target, 0, 0.0, math.inf)

    def sample(self):
        return TraceSample(r=self.r, f=self.f, g=self.g, log_scale=self.log_scale)


def _resolve_r_min(cfg: IntegrationConfig, pot: RegularizedPotential) -> float:
    return cfg.r_min if cfg.r_min is not None else 1e-6 * pot.radius


def _resolve_r_max(cfg, pot, mass, energy) -> float:
    if cfg.r_max is not None:
        r_max = cfg.r_max
    else:
        r_max = pot.radius + cfg.kappa_span / kappa(mass, energy)
    if kappa(mass, energy) * (r_max - pot.radius) < 30.0:
        raise ValueError(
            "r_max too close to the shell: kappa * (r_max - r0) must be >= 30"
        )
    return r_max


def integrate_outward(
    ch: Channel,
    energy: float,
    pot: RegularizedPotential,
    p: ShellParams,
    cfg: IntegrationConfig | None = None,
    radii=None,
) -> SolutionTrace:
    """Integrate from near the origin to the bump's outer edge.

    The start condition is the leading power-law pair of the regular
    solution of the frozen-coefficient system at r_min:
    (F, G) proportional to (1, (E-M) r / (2j+1)) for j > 0 and to
    (-(E+M) r / (2|j|+1), 1) for j < 0. Samples are taken at the requested
    radii (ascending, within range) and always at the final edge.
    """
    cfg = cfg or IntegrationConfig()
    kappa(p.mass, energy)  # gap-window guard
    r_min = _resolve_r_min(cfg, pot)
    _, edge = pot.support
    j = ch.j
    if j > 0:
        f0, g0 = 1.0, (energy - p.mass) * r_min / (2.0 * j + 1.0)
    else:
        m = -j
        f0, g0 = -(energy + p.mass) * r_min / (2.0 * m + 1.0), 1.0

    march = _Marcher(ch, energy, pot, cfg)
    march.set_state(r_min, f0, g0, p.mass)
    targets = sorted(radii) if radii is not None else []
    if targets and (targets[0] < r_min or targets[-1] > edge):
        raise ValueError(f"sample radii must lie within [{r_min}, {edge}]")
    samples = []
    for r in targets:
        march.advance(r)
        samples.append(march.sample())
    if march.r != edge:
        march.advance(edge)
        samples.append(march.sample())
    return SolutionTrace(
        samples=tuple(samples), n_steps=march.steps, n_renorms=march.renorms
    )


def integrate_inward(
    ch: Channel,
    energy: float,
    pot: RegularizedPotential,
    p: ShellParams,
    cfg: IntegrationConfig | None = None,
    radii=None,
) -> SolutionTrace:
    """Integrate from the far decay region down to the bump's outer edge.

    Starts on the decaying branch of the frozen-coefficient system,
    (F, G) proportional to (sqrt(M+E), sqrt(M-E)), at
    r_max = r0 + kappa_span / kappa; any admixture of the growing branch
    shrinks like e^{-2 kappa (r_max - r)} on the way in.
    """
    cfg = cfg or IntegrationConfig()
    r_max = _resolve_r_max(cfg, pot, p.mass, energy)
    _, edge = pot.support
    f0 = math.sqrt(p.mass + energy)
    g0 = math.sqrt(p.mass - energy)

    march = _Marcher(ch, energy, pot, cfg)
    march.set_state(r_max, f0, g0, p.mass)
    targets = sorted(radii, reverse=True) if radii is not None else []
    if targets and (targets[0] > r_max or targets[-1] < edge):
        raise ValueError(f"sample radii must lie within [{edge}, {r_max}]")
    samples = []
    for r in targets:
        march.advance(r)
        samples.append(march.sample())
    if march.r != edge:
        march.advance(edge)
        samples.append(march.sample())
    return SolutionTrace(
        samples=tuple(samples), n_steps=march.steps, n_renorms=march.renorms
    )


def phase_mismatch(
    ch: Channel,
    energy: float,
    pot: RegularizedPotential,
    p: ShellParams,
    cfg: IntegrationConfig | None = None,
) -> float:
    """Wrapped phase difference of the two runs at the bump's outer edge.

    Zero exactly at the bound-state energies of the regularized problem;
    wrapped modulo pi like the analytic matching residual (the two
    solutions may align with either relative sign).
    """
    out = integrate_outward(ch, energy, pot, p, cfg).final
    inw = integrate_inward(ch, energy, pot, p, cfg).final
    return wrap_half_pi(out.theta - inw.theta)


def shoot_bound_state(
    ch: Channel,
    p: ShellParams,
    sigma: float,
    shape: str = "gaussian",
    cfg: IntegrationConfig | None = None,
    search: SearchConfig | None = None,
) -> list[float]:
    """Bound energies of the width-sigma regularized problem, ascending.

    Scans and refines the phase mismatch with the same machinery the
    spectrum module uses; only the ODE integrator and the free-solution
    asymptotics enter, never the analytic matching formulas.
    """
    pot = RegularizedPotential(
        coupling=p.coupling, radius=p.radius, sigma=sigma, shape=shape
    )
    search = search or SearchConfig(scan_points=128, residual_tol=1e-6)
    fn = lambda e: phase_mismatch(ch, e, pot, p, cfg)
    half = p.mass * (1.0 - 1.5 * GAP_MARGIN)
    found, _ = _scan_with_densify(fn, -half, half, search, p.mass)
    return [root for root, _, _ in found]


@dataclass(frozen=True)
class WidthExtrapolation:
    """sigma -> 0 limit of one eigenvalue with a conservative error bar."""

    energy: float
    error_bar: float
    exponent: float
    sigmas: tuple[float, ...]
    energies: tuple[float, ...]


def fit_width_power_law(sigmas, energies) -> WidthExtrapolation:
    """Fit E(sigma) = E0 + c sigma^q through the last three points.

    The exponent comes from a bisection on the difference ratio; E(sigma)
    must vary monotonically. The error bar is |E(smallest sigma) - E0|.
    """
    sigmas = tuple(float(s) for s in sigmas)
    energies = tuple(float(e) for e in energies)
    if len(sigmas) < 3 or len(sigmas) != len(energies):
        raise ExtrapolationError("need at least 3 (sigma, energy) pairs")
    if any(s2 >= s1 for s1, s2 in zip(sigmas, sigmas[1:])):
        raise ExtrapolationError("sigmas must be strictly decreasing")

    s1, s2, s3 = sigmas[-3:]
    e1, e2, e3 = energies[-3:]
    d12, d23 = e1 - e2, e2 - e3
    spread = abs(e1 - e3)
    if spread < 1e-13 * (abs(e3) + 1.0):
        # already converged to working precision; no exponent measurable
        return WidthExtrapolation(
            energy=e3,
            error_bar=spread,
            exponent=math.nan,
            sigmas=sigmas,
            energies=energies,
        )
    if d23 == 0.0 or (d12 < 0.0) != (d23 < 0.0):
        raise ExtrapolationError(
            f"non-monotone energy sequence {energies[-3:]} over widths {sigmas[-3:]}"
        )
    ratio = d12 / d23
    if ratio <= 1.0:
        raise ExtrapolationError(
            f"difference ratio {ratio:.4g} <= 1: no positive-power convergence"
        )

    def gap(q):
        return (s1**q - s2**q) / (s2**q - s3**q) - ratio

    q_lo, q_hi = 0.05, 10.0
    if gap(q_lo) * gap(q_hi) > 0.0:
        raise ExtrapolationError(
            f"difference ratio {ratio:.4g} outside the exponent window "
            f"[{q_lo}, {q_hi}] for widths {sigmas[-3:]}"
        )
    for _ in range(200):
        q_mid = 0.5 * (q_lo + q_hi)
        if gap(q_lo) * gap(q_mid) <= 0.0:
            q_hi = q_mid
        else:
            q_lo = q_mid
        if q_hi - q_lo < 1e-13:
            break
    q = 0.5 * (q_lo + q_hi)
    c = d23 / (s2**q - s3**q)
    e0 = e3 - c * s3**q
    return WidthExtrapolation(
        energy=e0,
        error_bar=abs(e3 - e0),
        exponent=q,
        sigmas=sigmas,
        energies=energies,
    )


def extrapolate_to_zero_width(
    ch: Channel,
    p: ShellParams,
    sigmas,
    shape: str = "gaussian",
    cfg: IntegrationConfig | None = None,
    search: SearchConfig | None = None,
) -> list[WidthExtrapolation]:
    """Shoot at every width and extrapolate each eigenvalue to sigma -> 0.

    Returns one extrapolation per bound state (ascending energy). The root
    count must be identical across widths; eigenvalues are paired by rank.
    """
    sigmas = tuple(float(s) for s in sigmas)
    if len(sigmas) < 3:
        raise ExtrapolationError("need at least 3 widths for the extrapolation")
    per_width = [shoot_bound_state(ch, p, s, shape, cfg, search) for s in sigmas]
    counts = {len(roots) for roots in per_width}
    if len(counts) != 1:
        raise ExtrapolationError(
            f"root count varies across widths: {[len(r) for r in per_width]}"
        )
    results = []
    for idx in range(len(per_width[0])):
        series = [roots[idx] for roots in per_width]
        results.append(fit_width_power_law(sigmas, series))
    return results
