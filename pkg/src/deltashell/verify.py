"""Runtime invariant battery behind the ``verify`` subcommand.

Each check returns its worst measured error together with the tolerance it
must satisfy. The defaults exercise fixed demonstration configurations and
are deterministic from run to run.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from . import dirac, spectrum
from ._backend import iv_pair_scaled, kv_pair_scaled
from .dirac import Channel, ShellParams
from .specfun import bessel_i, bessel_k, complex_bessel_j_series

__all__ = ["CheckResult", "run_battery", "BATTERY"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    worst: float
    tol: float
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.worst <= self.tol


def _log_grid(lo, hi, n):
    ratio = (hi / lo) ** (1.0 / (n - 1))
    return [lo * ratio**i for i in range(n)]


def check_wronskian() -> CheckResult:
    """I_n(x) K_{n+1}(x) + I_{n+1}(x) K_n(x) = 1/x, evaluated in scaled
    space so the exponential factors cancel exactly."""
    worst = 0.0
    for n in range(0, 21):
        for x in _log_grid(0.1, 30.0, 60):
            i0, i1 = iv_pair_scaled(n, x)
            k0, k1 = kv_pair_scaled(n, x)
            worst = max(worst, abs((i0 * k1 + i1 * k0) * x - 1.0))
    return CheckResult("wronskian", worst, 1e-12, "n <= 20, x in [0.1, 30]")


def check_recurrences() -> CheckResult:
    """I_{n-1} - I_{n+1} = (2n/x) I_n and K_{n+1} - K_{n-1} = (2n/x) K_n."""
    worst = 0.0
    for n in range(1, 21):
        for x in _log_grid(0.5, 30.0, 40):
            im1, i0 = iv_pair_scaled(n - 1, x)
            _, ip1 = iv_pair_scaled(n, x)
            lhs = im1 - ip1
            rhs = (2.0 * n / x) * i0
            worst = max(worst, abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300))
            km1, k0 = kv_pair_scaled(n - 1, x)
            _, kp1 = kv_pair_scaled(n, x)
            lhs = kp1 - km1
            rhs = (2.0 * n / x) * k0
            worst = max(worst, abs(lhs - rhs) / max(abs(lhs), abs(rhs)))
    return CheckResult("recurrences", worst, 1e-10, "n <= 20, x in [0.5, 30]")


def check_complex_bridge() -> CheckResult:
    """J_n(ix) = i^n I_n(x): the complex series against the real evaluator."""
    worst = 0.0
    for n in range(0, 11):
        for x in _log_grid(0.1, 20.0, 25):
            jv = complex_bessel_j_series(n, complex(0.0, x))
            ref = (1j**n) * bessel_i(n, x)
            worst = max(worst, abs(jv - ref) / abs(ref))
    return CheckResult("complex_bridge", worst, 1e-10, "n <= 10, x in [0.1, 20]")


def check_transfer_orthogonality() -> CheckResult:
    """A^T A = 1 and det A = 1 over a spread of rotation angles."""
    worst = 0.0
    for k in range(-20, 21):
        a = 0.37 * k
        (c, ms), (s, c2) = dirac.transfer_matrix(a).entries
        worst = max(
            worst,
            abs(c * c + s * s - 1.0),
            abs(c * ms + s * c2),
            abs(ms * ms + c2 * c2 - 1.0),
            abs(c * c2 - ms * s - 1.0),
        )
    return CheckResult("transfer_orthogonality", worst, 1e-14)


def check_transfer_group_law(pairs: int = 100) -> CheckResult:
    """A(a1) A(a2) = A(a1 + a2) entrywise over random angle pairs
    (fixed seed, so the run is reproducible)."""
    rng = random.Random(20240915)
    worst = 0.0
    for _ in range(pairs):
        a1 = rng.uniform(-6.0, 6.0)
        a2 = rng.uniform(-6.0, 6.0)
        m1 = dirac.transfer_matrix(a1).entries
        m2 = dirac.transfer_matrix(a2).entries
        m12 = dirac.transfer_matrix(a1 + a2).entries
        for i in range(2):
            for k in range(2):
                prod = m1[i][0] * m2[0][k] + m1[i][1] * m2[1][k]
                worst = max(worst, abs(prod - m12[i][k]))
    return CheckResult("transfer_group_law", worst, 1e-13, f"{pairs} random pairs")


_DEMO_CASES = (
    (Channel(1), ShellParams(1.0, 1.0, 0.5)),
    (Channel(1), ShellParams(1.0, 2.0, 1.1)),
    (Channel(3), ShellParams(1.0, 2.0, 1.1)),
    (Channel(1), ShellParams(1.0, 1.0, 2.0)),
)


def check_shell_conditions() -> tuple[CheckResult, CheckResult]:
    """At every converged eigenvalue of the demo set: the spinor norm is
    continuous across the shell after transfer-matrix rescaling, and the
    phase jumps by exactly -a (mod pi)."""
    worst_norm = 0.0
    worst_jump = 0.0
    n_roots = 0
    for ch, p in _DEMO_CASES:
        for state in spectrum.find_bound_states(ch, p):
            n_roots += 1
            minus, plus = spectrum.shell_pair(state, p)
            rotated = dirac.apply_transfer(dirac.transfer_matrix(p.coupling), minus)
            # rescale the outer side so the larger rotated component matches
            if abs(rotated.f) >= abs(rotated.g):
                lam = rotated.f / plus.f
            else:
                lam = rotated.g / plus.g
            n_in = rotated.norm2
            n_out = (lam * plus.f) ** 2 + (lam * plus.g) ** 2
            worst_norm = max(worst_norm, abs(n_out - n_in) / n_in)
            th_m, th_p = dirac.shell_angles(ch, state.energy, p)
            worst_jump = max(
                worst_jump, abs(dirac.wrap_half_pi(th_p - th_m + p.coupling))
            )
    detail = f"{n_roots} roots over {len(_DEMO_CASES)} configurations"
    return (
        CheckResult("shell_norm_continuity", worst_norm, 1e-10, detail),
        CheckResult("shell_phase_jump", worst_jump, 1e-9, detail),
    )


def _fd_residual(ch, energy, p, side, n_points) -> float:
    """Worst relative defect of the analytic solutions inserted into the
    radial system, derivatives taken by 5-point finite differences with a
    per-point stencil h = 1e-4 r."""
    j = ch.j
    M, E = p.mass, energy
    sol = dirac.inner_solution if side == "inner" else dirac.outer_solution
    if side == "inner":
        radii = [
            p.radius * (0.02 + (0.978 - 1e-3) * i / (n_points - 1))
            for i in range(n_points)
        ]
    else:
        radii = [
            p.radius * (1.0 + 1e-3 + 3.0 * i / (n_points - 1))
            for i in range(n_points)
        ]
    worst = 0.0
    for r in radii:
        h = 1e-4 * r
        sm2, sm1, s0, sp1, sp2 = (sol(ch, E, r + k * h, p) for k in (-2, -1, 0, 1, 2))
        df = (sm2.f - 8.0 * sm1.f + 8.0 * sp1.f - sp2.f) / (12.0 * h)
        dg = (sm2.g - 8.0 * sm1.g + 8.0 * sp1.g - sp2.g) / (12.0 * h)
        res_f = -df + (j / r) * s0.f - (E + M) * s0.g
        res_g = dg + (j / r) * s0.g - (E - M) * s0.f
        scale = max(
            abs(df) + abs((j / r) * s0.f) + abs((E + M) * s0.g),
            abs(dg) + abs((j / r) * s0.g) + abs((E - M) * s0.f),
        )
        worst = max(worst, max(abs(res_f), abs(res_g)) / scale)
    return worst


def check_ode_residual(n_points: int = 1000) -> CheckResult:
    """Finite-difference defect of the analytic inner and outer solutions
    away from the shell."""
    worst = 0.0
    p = ShellParams(1.0, 1.0, 0.5)
    for ch, energy in ((Channel(1), 0.6), (Channel(3), -0.4)):
        worst = max(worst, _fd_residual(ch, energy, p, "inner", n_points))
        worst = max(worst, _fd_residual(ch, energy, p, "outer", n_points))
    return CheckResult("ode_residual", worst, 1e-6, f"{n_points}-point grids")


def _direct_negative_j_roots(ch: Channel, p: ShellParams) -> list[float]:
    """Solve a negative-j channel from its own matching condition, without
    the reflection route: the regular/decaying solutions carry Bessel
    orders (|j|+1/2, |j|-1/2) on (F, G), and the shell rotation is the
    same -a phase jump."""
    if ch.two_j >= 0:
        raise ValueError("direct route is the negative-j cross-check")
    m = (-ch.two_j - 1) // 2  # |j| - 1/2

    def residual(energy):
        k = dirac.kappa(p.mass, energy)
        x = k * p.radius
        sp = math.sqrt(p.mass + energy)
        sm = math.sqrt(p.mass - energy)
        i_lo, i_hi = iv_pair_scaled(m, x)
        k_lo, k_hi = kv_pair_scaled(m, x)
        th_minus = math.atan2(-sp * i_hi, sm * i_lo)
        th_plus = math.atan2(sp * k_hi, sm * k_lo)
        return dirac.wrap_half_pi(th_plus - th_minus + p.coupling)

    cfg = spectrum.SearchConfig()
    lo, hi = spectrum._energy_window(p)
    found, _ = spectrum._scan_with_densify(residual, lo, hi, cfg, p.mass)
    return [root for root, _, _ in found]


def check_spectral_reflection() -> CheckResult:
    """E(-j, M, r0, -a) = -E(+j, M, r0, a): the reflection route against an
    independent direct solve of the negative channel."""
    worst = 0.0
    for ch, p in ((Channel(1), ShellParams(1.0, 1.0, 0.5)), (Channel(3), ShellParams(1.0, 2.0, 1.1))):
        pos = [s.energy for s in spectrum.find_bound_states(ch, p)]
        reflected = [
            s.energy
            for s in spectrum.find_bound_states(
                ch.reflected(), p.with_coupling(-p.coupling)
            )
        ]
        direct = _direct_negative_j_roots(
            ch.reflected(), p.with_coupling(-p.coupling)
        )
        if len(pos) != len(reflected) or len(pos) != len(direct):
            return CheckResult(
                "spectral_reflection",
                math.inf,
                1e-10,
                f"count mismatch: {len(pos)} vs {len(reflected)} vs {len(direct)}",
            )
        for e_pos, e_refl, e_dir in zip(sorted(pos), sorted(reflected, reverse=True), sorted(direct, reverse=True)):
            worst = max(worst, abs(e_refl + e_pos), abs(e_dir + e_pos))
    return CheckResult(
        "spectral_reflection", worst, 1e-10, "reflection route vs direct solve"
    )


def check_scale_covariance() -> CheckResult:
    """E(sM, r0/s, a) = s E(M, r0, a) for s in {0.5, 2, 10}."""
    worst = 0.0
    base = ShellParams(1.0, 1.0, 0.7)
    ch = Channel(1)
    ref = [s.energy for s in spectrum.find_bound_states(ch, base)]
    for s in (0.5, 2.0, 10.0):
        scaled = ShellParams(s * base.mass, base.radius / s, base.coupling)
        got = [st.energy for st in spectrum.find_bound_states(ch, scaled)]
        if len(got) != len(ref):
            return CheckResult(
                "scale_covariance", math.inf, 1e-9, f"count mismatch at s={s}"
            )
        for e_ref, e_got in zip(ref, got):
            worst = max(worst, abs(e_got / s - e_ref) / base.mass)
    return CheckResult("scale_covariance", worst, 1e-9, "s in {0.5, 2, 10}")


def run_battery() -> list[CheckResult]:
    """Execute every invariant check in a deterministic order."""
    results = [
        check_wronskian(),
        check_recurrences(),
        check_complex_bridge(),
        check_transfer_orthogonality(),
        check_transfer_group_law(),
    ]
    results.extend(check_shell_conditions())
    results.append(check_ode_residual())
    results.append(check_spectral_reflection())
    results.append(check_scale_covariance())
    return results


BATTERY = (
    "wronskian",
    "recurrences",
    "complex_bridge",
    "transfer_orthogonality",
    "transfer_group_law",
    "shell_norm_continuity",
    "shell_phase_jump",
    "ode_residual",
    "spectral_reflection",
    "scale_covariance",
)
