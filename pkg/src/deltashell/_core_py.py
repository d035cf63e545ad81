"""Pure-Python hot kernels: scaled modified Bessel pairs and the adaptive
radial integrator.

This module is the reference implementation of the numeric core. A compiled
twin (``deltashell._core_c``, built from Cython) exposes the exact same
functions; ``deltashell._backend`` picks one at import time. Keep the two in
lockstep: same algorithms, same constants, same branch structure.

Everything here is scalar float math on purpose (no numpy), so the Cython
port is mechanical and the fallback has no dependencies.
"""

import math

__all__ = [
    "iv_pair_scaled",
    "kv_pair_scaled",
    "integrate_radial",
]

_EULER_GAMMA = 0.5772156649015328606
_SQRT_2PI = 2.5066282746310005024

# power series is exact (positive terms) below this; Miller recurrence above
_IV_SERIES_CUTOFF = 18.0
# K0/K1 log-series below, trapezoidal integral representation above
_KV_SERIES_CUTOFF = 2.0
_KV_TRAP_PANELS = 40

_RENORM_HI = 1e140
_RENORM_LO = 1e-140


def _iv_series(n, x):
    # I_n(x) = (x/2)^n sum_k (x^2/4)^k / (k! (n+k)!), all terms positive
    half = 0.5 * x
    term = 1.0
    for k in range(1, n + 1):
        term *= half / k
        if term == 0.0:
            return 0.0
    q = half * half
    total = term
    k = 1
    while True:
        term *= q / (k * (n + k))
        total += term
        if term <= total * 1e-18:
            return total
        k += 1
        if k > 600:  # unreachable for x <= cutoff; guards misuse
            return total


def _iv_pair_miller(n, x):
    # backward recurrence I_{k-1} = I_{k+1} + (2k/x) I_k, normalized with
    # e^x = I_0 + 2 sum_{k>=1} I_k  (so 1 = tilde sum in scaled space)
    m = int(math.sqrt(n * n + 78.0 * x)) + 6
    if m < n + 4:
        m = n + 4
    vp = 0.0
    vc = 1e-250
    vn = 0.0
    vn1 = 0.0
    acc = 0.0
    k = m
    while k > 0:
        vm = vp + (2.0 * k / x) * vc
        vp = vc
        vc = vm
        if k - 1 == n:
            vn = vc
            vn1 = vp
        acc += vp  # accumulates I_1..I_m contributions
        if vc > 1e250:
            vc *= 1e-250
            vp *= 1e-250
            vn *= 1e-250
            vn1 *= 1e-250
            acc *= 1e-250
        k -= 1
    norm = vc + 2.0 * acc
    return vn / norm, vn1 / norm


def iv_pair_scaled(n, x):
    """Return (e^-x I_n(x), e^-x I_{n+1}(x)) for integer n >= 0, x >= 0."""
    if x == 0.0:
        return (1.0, 0.0) if n == 0 else (0.0, 0.0)
    if x <= _IV_SERIES_CUTOFF:
        s = math.exp(-x)
        return s * _iv_series(n, x), s * _iv_series(n + 1, x)
    return _iv_pair_miller(n, x)


def _kv01_series(x):
    # K_0 = -(ln(x/2)+g) I_0 + sum_k (x^2/4)^k/(k!)^2 H_k
    # K_1 = 1/x + ln(x/2) I_1 - (x/4) sum_k (H_k + H_{k+1} - 2g) (x^2/4)^k/(k!(k+1)!)
    q = 0.25 * x * x
    lg = math.log(0.5 * x)
    i0 = _iv_series(0, x)
    i1 = _iv_series(1, x)

    term = 1.0
    hk = 0.0
    s0 = 0.0
    k = 1
    while True:
        term *= q / (k * k)
        hk += 1.0 / k
        s0 += term * hk
        if term * hk <= (abs(s0) + 1.0) * 1e-18:
            break
        k += 1
    k0 = -(lg + _EULER_GAMMA) * i0 + s0

    term = 1.0
    hk = 0.0
    hk1 = 1.0
    s1 = hk + hk1 - 2.0 * _EULER_GAMMA
    k = 1
    while True:
        term *= q / (k * (k + 1))
        hk += 1.0 / k
        hk1 += 1.0 / (k + 1)
        d = term * (hk + hk1 - 2.0 * _EULER_GAMMA)
        s1 += d
        if abs(d) <= (abs(s1) + 1.0) * 1e-18:
            break
        k += 1
    k1 = 1.0 / x + lg * i1 - 0.25 * x * s1
    return k0, k1


def _kv01_trapezoid(x):
    # e^x K_n(x) = int_0^inf e^{x(1-cosh t)} cosh(nt) dt; integrand is even
    # and entire, so the trapezoid rule converges geometrically
    t_max = math.acosh(1.0 + 46.0 / x)
    h = t_max / _KV_TRAP_PANELS
    s0 = 0.5  # t=0 node: weight 1/2, integrand 1
    s1 = 0.5
    for i in range(1, _KV_TRAP_PANELS + 1):
        t = i * h
        w = math.exp(x * (1.0 - math.cosh(t)))
        s0 += w
        s1 += w * math.cosh(t)
    return h * s0, h * s1


def kv_pair_scaled(n, x):
    """Return (e^x K_n(x), e^x K_{n+1}(x)) for integer n >= 0, x > 0."""
    if x <= _KV_SERIES_CUTOFF:
        k0, k1 = _kv01_series(x)
        s = math.exp(x)
        k0 *= s
        k1 *= s
    else:
        k0, k1 = _kv01_trapezoid(x)
    # upward recurrence K_{k+1} = K_{k-1} + (2k/x) K_k (stable for K)
    for k in range(1, n + 1):
        k0, k1 = k1, k0 + (2.0 * k / x) * k1
    return k0, k1


# Cash-Karp 5(4) embedded pair
_B21 = 0.2
_B31, _B32 = 3.0 / 40.0, 9.0 / 40.0
_B41, _B42, _B43 = 0.3, -0.9, 1.2
_B51, _B52, _B53, _B54 = -11.0 / 54.0, 2.5, -70.0 / 27.0, 35.0 / 27.0
_B61, _B62, _B63, _B64, _B65 = (
    1631.0 / 55296.0,
    175.0 / 512.0,
    575.0 / 13824.0,
    44275.0 / 110592.0,
    253.0 / 4096.0,
)
_C1, _C3, _C4, _C6 = 37.0 / 378.0, 250.0 / 621.0, 125.0 / 594.0, 512.0 / 1771.0
_D1, _D3, _D4, _D5, _D6 = (
    -277.0 / 64512.0,
    6925.0 / 370944.0,
    -6925.0 / 202752.0,
    -277.0 / 14336.0,
    277.0 / 7084.0,
)


def _potential(kind, r, va, vr0, vs):
    if kind == 0:
        return 0.0
    if kind == 1:
        u = (r - vr0) / vs
        return -va * math.exp(-0.5 * u * u) / (vs * _SQRT_2PI)
    return va  # kind 2: constant value va


def integrate_radial(
    two_j,
    energy,
    mass,
    r_from,
    r_to,
    f,
    g,
    pot_kind,
    pot_a,
    pot_r0,
    pot_sigma,
    rtol,
    atol,
    max_step,
    fixed_step,
    max_steps,
):
    """Integrate the coupled radial system from r_from to r_to.

        F' = (j/r) F - (E - V(r) + M) G
        G' = (E - V(r) - M) F - (j/r) G

    Uses an adaptive Cash-Karp 5(4) pair; either direction of integration is
    allowed. The amplitude is renormalized whenever it leaves [1e-140, 1e140]
    and the accumulated log-scale is reported, so the true solution at the
    endpoint is (f, g) * exp(log_scale) times the start normalization.

    ``fixed_step > 0`` disables the error control and marches with exactly
    that step magnitude (used by integrator-order verification tests).

    Returns (f, g, log_scale, n_steps, n_renorms, status) with status 0 on
    success, 1 when max_steps was exhausted, 2 when the step size underflowed.
    """
    j = 0.5 * two_j
    direction = 1.0 if r_to >= r_from else -1.0
    span = abs(r_to - r_from)
    if span == 0.0:
        return f, g, 0.0, 0, 0, 0

    if fixed_step > 0.0:
        h = fixed_step
    else:
        h = span * 1e-3
        if h > max_step:
            h = max_step
    log_scale = 0.0
    r = r_from
    steps = 0
    renorms = 0
    status = 0

    while True:
        remaining = abs(r_to - r)
        if remaining <= 1e-15 * (abs(r_to) + abs(r)):
            break
        if steps >= max_steps:
            status = 1
            break
        if h > max_step:
            h = max_step
        if h > remaining:
            h = remaining
        hs = h * direction

        v = _potential(pot_kind, r, pot_a, pot_r0, pot_sigma)
        jr = j / r
        k1f = jr * f - (energy - v + mass) * g
        k1g = (energy - v - mass) * f - jr * g

        r2 = r + 0.2 * hs
        v = _potential(pot_kind, r2, pot_a, pot_r0, pot_sigma)
        jr = j / r2
        yf = f + hs * _B21 * k1f
        yg = g + hs * _B21 * k1g
        k2f = jr * yf - (energy - v + mass) * yg
        k2g = (energy - v - mass) * yf - jr * yg

        r2 = r + 0.3 * hs
        v = _potential(pot_kind, r2, pot_a, pot_r0, pot_sigma)
        jr = j / r2
        yf = f + hs * (_B31 * k1f + _B32 * k2f)
        yg = g + hs * (_B31 * k1g + _B32 * k2g)
        k3f = jr * yf - (energy - v + mass) * yg
        k3g = (energy - v - mass) * yf - jr * yg

        r2 = r + 0.6 * hs
        v = _potential(pot_kind, r2, pot_a, pot_r0, pot_sigma)
        jr = j / r2
        yf = f + hs * (_B41 * k1f + _B42 * k2f + _B43 * k3f)
        yg = g + hs * (_B41 * k1g + _B42 * k2g + _B43 * k3g)
        k4f = jr * yf - (energy - v + mass) * yg
        k4g = (energy - v - mass) * yf - jr * yg

        r2 = r + hs
        v = _potential(pot_kind, r2, pot_a, pot_r0, pot_sigma)
        jr = j / r2
        yf = f + hs * (_B51 * k1f + _B52 * k2f + _B53 * k3f + _B54 * k4f)
        yg = g + hs * (_B51 * k1g + _B52 * k2g + _B53 * k3g + _B54 * k4g)
        k5f = jr * yf - (energy - v + mass) * yg
        k5g = (energy - v - mass) * yf - jr * yg

        r2 = r + 0.875 * hs
        v = _potential(pot_kind, r2, pot_a, pot_r0, pot_sigma)
        jr = j / r2
        yf = f + hs * (_B61 * k1f + _B62 * k2f + _B63 * k3f + _B64 * k4f + _B65 * k5f)
        yg = g + hs * (_B61 * k1g + _B62 * k2g + _B63 * k3g + _B64 * k4g + _B65 * k5g)
        k6f = jr * yf - (energy - v + mass) * yg
        k6g = (energy - v - mass) * yf - jr * yg

        nf = f + hs * (_C1 * k1f + _C3 * k3f + _C4 * k4f + _C6 * k6f)
        ng = g + hs * (_C1 * k1g + _C3 * k3g + _C4 * k4g + _C6 * k6g)

        if fixed_step > 0.0:
            f, g = nf, ng
            r += hs
            steps += 1
        else:
            ef = hs * (_D1 * k1f + _D3 * k3f + _D4 * k4f + _D5 * k5f + _D6 * k6f)
            eg = hs * (_D1 * k1g + _D3 * k3g + _D4 * k4g + _D5 * k5g + _D6 * k6g)
            # (F, G) is one geometric object: scale both components by the
            # pair magnitude so zero crossings of F or G do not stall the step
            mag = max(abs(f), abs(nf), abs(g), abs(ng))
            sc = atol + rtol * mag
            errnorm = math.sqrt(0.5 * ((ef / sc) ** 2 + (eg / sc) ** 2))
            if errnorm <= 1.0:
                f, g = nf, ng
                r += hs
                steps += 1
                if errnorm > 1e-10:
                    fac = 0.9 * errnorm ** -0.2
                    if fac > 5.0:
                        fac = 5.0
                    h *= fac
                else:
                    h *= 5.0
            else:
                fac = 0.9 * errnorm ** -0.25
                if fac < 0.1:
                    fac = 0.1
                h *= fac
                if h < 1e-14 * max(abs(r), span):
                    status = 2
                    break
                continue

        norm = math.hypot(f, g)
        if norm > _RENORM_HI or (0.0 < norm < _RENORM_LO):
            f /= norm
            g /= norm
            log_scale += math.log(norm)
            renorms += 1

    return f, g, log_scale, steps, renorms, status
