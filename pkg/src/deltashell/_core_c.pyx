# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of deltashell._core_py: identical algorithms and constants,
C scalar arithmetic. Keep the two modules in lockstep."""

from libc.math cimport acosh, cosh, exp, fabs, hypot, log, sqrt

__all__ = ["iv_pair_scaled", "kv_pair_scaled", "integrate_radial"]

cdef double _EULER_GAMMA = 0.5772156649015328606
cdef double _SQRT_2PI = 2.5066282746310005024

cdef double _IV_SERIES_CUTOFF = 18.0
cdef double _KV_SERIES_CUTOFF = 2.0
cdef int _KV_TRAP_PANELS = 40

cdef double _RENORM_HI = 1e140
cdef double _RENORM_LO = 1e-140


cdef double _iv_series(int n, double x):
    cdef double half = 0.5 * x
    cdef double term = 1.0
    cdef double q, total
    cdef int k
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
        if k > 600:
            return total


cdef (double, double) _iv_pair_miller(int n, double x):
    cdef int m = <int>sqrt(n * n + 78.0 * x) + 6
    if m < n + 4:
        m = n + 4
    cdef double vp = 0.0
    cdef double vc = 1e-250
    cdef double vn = 0.0
    cdef double vn1 = 0.0
    cdef double acc = 0.0
    cdef double vm, norm
    cdef int k = m
    while k > 0:
        vm = vp + (2.0 * k / x) * vc
        vp = vc
        vc = vm
        if k - 1 == n:
            vn = vc
            vn1 = vp
        acc += vp
        if vc > 1e250:
            vc *= 1e-250
            vp *= 1e-250
            vn *= 1e-250
            vn1 *= 1e-250
            acc *= 1e-250
        k -= 1
    norm = vc + 2.0 * acc
    return vn / norm, vn1 / norm


def iv_pair_scaled(int n, double x):
    """Return (e^-x I_n(x), e^-x I_{n+1}(x)) for integer n >= 0, x >= 0."""
    cdef double s
    if x == 0.0:
        return (1.0, 0.0) if n == 0 else (0.0, 0.0)
    if x <= _IV_SERIES_CUTOFF:
        s = exp(-x)
        return s * _iv_series(n, x), s * _iv_series(n + 1, x)
    return _iv_pair_miller(n, x)


cdef (double, double) _kv01_series(double x):
    cdef double q = 0.25 * x * x
    cdef double lg = log(0.5 * x)
    cdef double i0 = _iv_series(0, x)
    cdef double i1 = _iv_series(1, x)
    cdef double term, hk, hk1, s0, s1, d, k0, k1
    cdef int k

    term = 1.0
    hk = 0.0
    s0 = 0.0
    k = 1
    while True:
        term *= q / (<double>k * k)
        hk += 1.0 / k
        s0 += term * hk
        if term * hk <= (fabs(s0) + 1.0) * 1e-18:
            break
        k += 1
    k0 = -(lg + _EULER_GAMMA) * i0 + s0

    term = 1.0
    hk = 0.0
    hk1 = 1.0
    s1 = hk + hk1 - 2.0 * _EULER_GAMMA
    k = 1
    while True:
        term *= q / (<double>k * (k + 1))
        hk += 1.0 / k
        hk1 += 1.0 / (k + 1)
        d = term * (hk + hk1 - 2.0 * _EULER_GAMMA)
        s1 += d
        if fabs(d) <= (fabs(s1) + 1.0) * 1e-18:
            break
        k += 1
    k1 = 1.0 / x + lg * i1 - 0.25 * x * s1
    return k0, k1


cdef (double, double) _kv01_trapezoid(double x):
    cdef double t_max = acosh(1.0 + 46.0 / x)
    cdef double h = t_max / _KV_TRAP_PANELS
    cdef double s0 = 0.5
    cdef double s1 = 0.5
    cdef double t, w, c
    cdef int i
    for i in range(1, _KV_TRAP_PANELS + 1):
        t = i * h
        c = cosh(t)
        w = exp(x * (1.0 - c))
        s0 += w
        s1 += w * c
    return h * s0, h * s1


def kv_pair_scaled(int n, double x):
    """Return (e^x K_n(x), e^x K_{n+1}(x)) for integer n >= 0, x > 0."""
    cdef double k0, k1, s, tmp
    cdef int k
    if x <= _KV_SERIES_CUTOFF:
        k0, k1 = _kv01_series(x)
        s = exp(x)
        k0 *= s
        k1 *= s
    else:
        k0, k1 = _kv01_trapezoid(x)
    for k in range(1, n + 1):
        tmp = k1
        k1 = k0 + (2.0 * k / x) * k1
        k0 = tmp
    return k0, k1


cdef double _B21 = 0.2
cdef double _B31 = 3.0 / 40.0, _B32 = 9.0 / 40.0
cdef double _B41 = 0.3, _B42 = -0.9, _B43 = 1.2
cdef double _B51 = -11.0 / 54.0, _B52 = 2.5, _B53 = -70.0 / 27.0, _B54 = 35.0 / 27.0
cdef double _B61 = 1631.0 / 55296.0, _B62 = 175.0 / 512.0, _B63 = 575.0 / 13824.0
cdef double _B64 = 44275.0 / 110592.0, _B65 = 253.0 / 4096.0
cdef double _C1 = 37.0 / 378.0, _C3 = 250.0 / 621.0, _C4 = 125.0 / 594.0
cdef double _C6 = 512.0 / 1771.0
cdef double _D1 = -277.0 / 64512.0, _D3 = 6925.0 / 370944.0, _D4 = -6925.0 / 202752.0
cdef double _D5 = -277.0 / 14336.0, _D6 = 277.0 / 7084.0


cdef inline double _potential(int kind, double r, double va, double vr0, double vs):
    cdef double u
    if kind == 0:
        return 0.0
    if kind == 1:
        u = (r - vr0) / vs
        return -va * exp(-0.5 * u * u) / (vs * _SQRT_2PI)
    return va


def integrate_radial(
    int two_j,
    double energy,
    double mass,
    double r_from,
    double r_to,
    double f,
    double g,
    int pot_kind,
    double pot_a,
    double pot_r0,
    double pot_sigma,
    double rtol,
    double atol,
    double max_step,
    double fixed_step,
    long max_steps,
):
    """Adaptive Cash-Karp 5(4) integration of the coupled radial system;
    see the pure-Python twin for the full contract."""
    cdef double j = 0.5 * two_j
    cdef double direction = 1.0 if r_to >= r_from else -1.0
    cdef double span = fabs(r_to - r_from)
    if span == 0.0:
        return f, g, 0.0, 0, 0, 0

    cdef double h
    if fixed_step > 0.0:
        h = fixed_step
    else:
        h = span * 1e-3
        if h > max_step:
            h = max_step
    cdef double log_scale = 0.0
    cdef double r = r_from
    cdef long steps = 0
    cdef int renorms = 0
    cdef int status = 0

    cdef double remaining, hs, v, jr, yf, yg, nf, ng, ef, eg, mag, sc, errnorm, fac, norm, r2
    cdef double k1f, k1g, k2f, k2g, k3f, k3g, k4f, k4g, k5f, k5g, k6f, k6g

    while True:
        remaining = fabs(r_to - r)
        if remaining <= 1e-15 * (fabs(r_to) + fabs(r)):
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
            f = nf
            g = ng
            r += hs
            steps += 1
        else:
            ef = hs * (_D1 * k1f + _D3 * k3f + _D4 * k4f + _D5 * k5f + _D6 * k6f)
            eg = hs * (_D1 * k1g + _D3 * k3g + _D4 * k4g + _D5 * k5g + _D6 * k6g)
            mag = fabs(f)
            if fabs(nf) > mag:
                mag = fabs(nf)
            if fabs(g) > mag:
                mag = fabs(g)
            if fabs(ng) > mag:
                mag = fabs(ng)
            sc = atol + rtol * mag
            errnorm = sqrt(0.5 * ((ef / sc) * (ef / sc) + (eg / sc) * (eg / sc)))
            if errnorm <= 1.0:
                f = nf
                g = ng
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
                if h < 1e-14 * max(fabs(r), span):
                    status = 2
                    break
                continue

        norm = hypot(f, g)
        if norm > _RENORM_HI or (0.0 < norm < _RENORM_LO):
            f /= norm
            g /= norm
            log_scale += log(norm)
            renorms += 1

    return f, g, log_scale, steps, renorms, status
