"""Independent reference computations used by the tests.

Nothing here calls the package's quadrature or spectral evaluation. Spectra
are re-derived from their parameters with plain numpy formulas, and
integrals use dense uniform trapezoids with Richardson extrapolation.
"""
import math

import numpy as np
from scipy.integrate import quad

from azqhm.spectra import QuasiLorentzianSpec

N_DENSE = 1_000_000


def _positive_branch(f):
    """(g, lo, hi, decay_from) for nu > 0, with g the analytic formula
    without step functions. ``decay_from`` is a point beyond which g is
    decreasing."""
    m = f.model
    w0, d = f.omega0, f.delta_s
    hot = f.side.value == "hot"
    if isinstance(m, QuasiLorentzianSpec):
        n = len(m.peaks)
        sign = 1.0 if hot else -1.0
        centers = [w0 + sign * (d + p.shift) for p in m.peaks]

        def g(nu):
            acc = np.zeros_like(nu)
            for p, c in zip(m.peaks, centers):
                acc += p.weight * p.width ** 2 / ((nu - c) ** 2 + p.width ** 2)
            return m.gamma0 * acc / n

        if hot:
            return g, w0 + m.epsilon, math.inf, max(centers)
        return g, m.epsilon, w0 - m.epsilon, None
    if hot:
        origin = w0 + d - m.delta

        def g(nu):
            u = np.maximum(nu - origin, 0.0)
            return m.gamma0 * u ** m.s / m.nu_bar ** (m.s - 1) * np.exp(-u / m.nu_bar)

        return g, origin, math.inf, origin + m.s * m.nu_bar
    origin = w0 - d + m.delta

    def g(nu):
        u = np.maximum(origin - nu, 0.0)
        return m.gamma0 * u ** m.s / m.nu_bar ** (m.s - 1) * np.exp(-u / m.nu_bar)

    return g, m.epsilon, origin, None


def spectral_value(f, nu: float) -> float:
    """G(nu) with step functions and KMS, from the closed-form expressions."""
    g, lo, hi, _ = _positive_branch(f)
    mu = abs(nu)
    if nu == 0 or not lo < mu < hi:
        return 0.0
    val = float(g(np.array([mu]))[0])
    return val * math.exp(-f.beta * mu) if nu < 0 else val


def _sinc_t(x, t):
    # sin(x t)/x with the removable point handled by np.sinc
    return t * np.sinc(x * t / math.pi)


def _trap_richardson(y, h):
    t1 = h * (y.sum() - 0.5 * (y[0] + y[-1]))
    y2 = y[::2]
    t2 = 2 * h * (y2.sum() - 0.5 * (y2[0] + y2[-1]))
    return (4.0 * t1 - t2) / 3.0


def dense_response(f, omega: float, t: float, rel_target: float = 1e-9, n: int = N_DENSE,
                   pos: bool = True, neg: bool = True, start: float = None):
    """Trapezoid oracle for I(omega, t) = int G(nu) sin((nu-omega)t)/(nu-omega).

    Both branches are folded onto nu > 0:
    G(nu) [K(nu - omega) + exp(-beta nu) K(-nu - omega)]. An infinite upper
    edge is truncated where the second-mean-value bound
    ``2 g(L) / t`` on the remaining tail falls below ``rel_target`` times
    a crude size estimate. ``pos``/``neg`` select the branches and
    ``start`` raises the lower limit of |nu|. Returns (value, tail_bound).
    """
    g, lo, hi, decay = _positive_branch(f)
    if start is not None:
        lo = max(lo, start)
    beta = f.beta
    scale = _size_estimate(g, lo, hi, omega, t, beta, decay, f.width)
    tail = 0.0
    if math.isinf(hi):
        L = max(decay, abs(omega)) + 8.0 * f.width + 1.0
        while True:
            # g(L)/|x| is decreasing beyond L on both branches
            bound = 2.0 / t * float(g(np.array([L]))[0]) * (
                1.0 / abs(L - omega) + math.exp(-beta * L) / abs(L + omega))
            if bound < rel_target * scale or L > 1e7:
                break
            L *= 1.25
        hi = L
        tail = bound
    # at least 64 samples per oscillation period, processed in chunks
    n = max(n, int(64 * (hi - lo) * t / (2 * math.pi)))
    chunks = max(1, -(-n // N_DENSE))
    per = 2 * (-(-n // (2 * chunks)))
    edges = np.linspace(lo, hi, chunks + 1)
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        nu = np.linspace(a, b, per + 1)
        y = g(nu) * (pos * _sinc_t(nu - omega, t)
                     + neg * np.exp(-beta * nu) * _sinc_t(-nu - omega, t))
        total += _trap_richardson(y, (b - a) / per)
    return total, tail


def _size_estimate(g, lo, hi, omega, t, beta, decay, width):
    # coarse trapezoid over the bulk of the spectrum; only the magnitude matters
    top = hi if math.isfinite(hi) else max(decay, abs(omega)) + 200.0 * width
    nu = np.linspace(lo, top, 400_001)
    y = g(nu) * (_sinc_t(nu - omega, t) + np.exp(-beta * nu) * _sinc_t(-nu - omega, t))
    return max(abs(np.trapezoid(y, nu)), 1e-13)


def fejer_average(f, omega: float, tau: float, cut: float = 400.0) -> float:
    """(1/tau) int_0^tau I(omega, t) dt = int G (1 - cos(x tau)) / (x^2 tau).

    Adaptive scipy quadrature on short panels; the kernel is positive and
    decays as 1/x^2, so truncation at ``cut`` from omega is harmless for
    the spectra used in the tests.
    """
    def kern(x):
        y = x * tau
        if abs(y) < 1e-4:
            return tau / 2.0 * (1.0 - y * y / 12.0)
        return (1.0 - math.cos(y)) / (x * x * tau)

    _, lo, hi, _ = _positive_branch(f)
    top = min(hi, abs(omega) + cut)
    total = 0.0
    for a, b in ((lo, top), (-top, -lo)):
        edges = np.unique(np.concatenate((np.linspace(a, b, 801), [omega] if a < omega < b else [])))
        for u, v in zip(edges[:-1], edges[1:]):
            total += quad(lambda nu: spectral_value(f, nu) * kern(nu - omega), u, v,
                          limit=200, epsabs=1e-15, epsrel=1e-11)[0]
    return total


def bessel_weights_fft(lam: float, q_max: int, samples: int = 4096) -> dict[int, float]:
    """|c_q|^2 of exp(i lam cos(theta)) by a discrete Fourier transform."""
    theta = 2 * math.pi * np.arange(samples) / samples
    c = np.fft.fft(np.exp(1j * lam * np.cos(theta))) / samples
    return {q: float(abs(c[q % samples]) ** 2) for q in range(-q_max, q_max + 1)}


def total_weight_quad(f) -> float:
    _, lo, hi, _ = _positive_branch(f)
    top = hi if math.isfinite(hi) else lo + 1e5
    pts = np.unique(np.concatenate((np.geomspace(lo, top, 400), [lo, top])))
    s = 0.0
    for u, v in zip(pts[:-1], pts[1:]):
        s += quad(lambda nu: spectral_value(f, nu) * (1.0 + math.exp(-f.beta * nu)), u, v,
                  limit=200)[0]
    return s
