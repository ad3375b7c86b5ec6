"""Hot numeric kernels: spectral evaluation and sinc-weighted panel quadrature.

Two implementations of the panel kernel exist. ``_panels_nb`` loops over
panels and Gauss-Kronrod nodes and is compiled with numba; ``_panels_np``
evaluates every node of every panel at once with numpy broadcasting. The
adaptive driver on top of them is written once and is either jit-compiled
(numba present) or run as plain Python on numpy arrays.

Spectra are packed into a flat float64 vector so compiled code can evaluate
them without Python objects; see ``pack`` in :mod:`azqhm.spectra`.
"""
import math

import numpy as np

from ._accel import HAVE_NUMBA, njit

# Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15).
XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# full 15-point rule for the vectorised path
_X15 = np.concatenate((-XGK[:7], XGK[7:], XGK[6::-1]))
_WK15 = np.concatenate((WGK[:7], WGK[7:], WGK[6::-1]))
_WG15 = np.zeros(15)
_WG15[1], _WG15[3], _WG15[5], _WG15[7] = WG[0], WG[1], WG[2], WG[3]
_WG15[13], _WG15[11], _WG15[9] = WG[0], WG[1], WG[2]

# packed-spectrum layout
S_KIND, S_BETA, S_LO, S_HI, S_GAMMA0, S_ORIENT, S_ORIGIN, S_S, S_NUBAR, S_NPEAKS = range(10)
S_PEAKS = 10
FAMILY_LORENTZ = 0.0
FAMILY_SUPEROHMIC = 1.0

# integrand kernels
KIND_SIN = 0     # sin(x t) / x
KIND_IMAG = 1    # (cos(x t) - 1) / x
KIND_COS = 2     # cos(x t) / x
KIND_INV = 3     # -1 / x
KIND_ONE = 4     # 1, plain integral of G

SERIES_CUT = 1e-6
EPS = 2.220446049250313e-16

STATUS_OK = 0
STATUS_MAXSUB = 1
STATUS_TAIL = 2

MAX_TAIL_LOBES = 4_000_000
MAX_CORE_EDGES = 20_000_000


@njit(cache=True, nogil=True)
def g_scalar(nu, spec):
    if nu == 0.0:
        return 0.0
    mu = abs(nu)
    if mu <= spec[S_LO] or mu >= spec[S_HI]:
        return 0.0
    if spec[S_KIND] == FAMILY_LORENTZ:
        n = int(spec[S_NPEAKS])
        acc = 0.0
        for r in range(n):
            c = spec[S_PEAKS + 3 * r]
            d = spec[S_PEAKS + 3 * r + 1] - mu
            w = spec[S_PEAKS + 3 * r + 2]
            acc += c * w * w / (d * d + w * w)
        val = spec[S_GAMMA0] * acc / n
    else:
        u = spec[S_ORIENT] * (mu - spec[S_ORIGIN])
        nb = spec[S_NUBAR]
        val = spec[S_GAMMA0] * u ** spec[S_S] / nb ** (spec[S_S] - 1.0) * math.exp(-u / nb)
    if nu < 0.0:
        val *= math.exp(-spec[S_BETA] * mu)
    return val


def g_vector(nu, spec):
    nu = np.asarray(nu, dtype=float)
    mu = np.abs(nu)
    inside = (mu > spec[S_LO]) & (mu < spec[S_HI]) & (nu != 0.0)
    if spec[S_KIND] == FAMILY_LORENTZ:
        n = int(spec[S_NPEAKS])
        acc = np.zeros_like(mu)
        for r in range(n):
            c, center, w = spec[S_PEAKS + 3 * r:S_PEAKS + 3 * r + 3]
            d = center - mu
            acc += c * w * w / (d * d + w * w)
        val = spec[S_GAMMA0] * acc / n
    else:
        u = np.where(inside, spec[S_ORIENT] * (mu - spec[S_ORIGIN]), 0.0)
        nb = spec[S_NUBAR]
        val = spec[S_GAMMA0] * u ** spec[S_S] / nb ** (spec[S_S] - 1.0) * np.exp(-u / nb)
    val = np.where(nu < 0.0, val * np.exp(-spec[S_BETA] * mu), val)
    return np.where(inside, val, 0.0)


@njit(cache=True, nogil=True)
def kernel_scalar(x, t, kind):
    if kind == KIND_ONE:
        return 1.0
    if kind == KIND_INV:
        return -1.0 / x
    y = x * t
    if kind == KIND_SIN:
        if abs(y) < SERIES_CUT:
            return t * (1.0 - y * y / 6.0)
        return math.sin(y) / x
    if kind == KIND_IMAG:
        if abs(y) < SERIES_CUT:
            return -0.5 * x * t * t
        s = math.sin(0.5 * y)
        return -2.0 * s * s / x
    return math.cos(y) / x


def kernel_vector(x, t, kind):
    x = np.asarray(x, dtype=float)
    if kind == KIND_ONE:
        return np.ones_like(x)
    small = np.abs(x * t) < SERIES_CUT
    xs = np.where(small, 1.0, x)
    if kind == KIND_INV:
        return -1.0 / x
    y = x * t
    if kind == KIND_SIN:
        return np.where(small, t * (1.0 - y * y / 6.0), np.sin(y) / xs)
    if kind == KIND_IMAG:
        s = np.sin(0.5 * y)
        return np.where(small, -0.5 * x * t * t, -2.0 * s * s / xs)
    return np.cos(y) / x


@njit(cache=True, nogil=True)
def _node_value(nu, x, t, kind, s, c, spec):
    """G(nu) K(x) given s = sin(x t), c = cos(x t) from angle addition."""
    g = g_scalar(nu, spec)
    if g == 0.0:
        return 0.0
    if kind == KIND_ONE:
        return g
    if kind == KIND_INV:
        return -g / x
    y = x * t
    if abs(y) < 0.5:
        return g * kernel_scalar(x, t, kind)
    if kind == KIND_SIN:
        return g * s / x
    if kind == KIND_IMAG:
        return g * (c - 1.0) / x
    return g * c / x


@njit(cache=True, nogil=True, error_model="numpy")
def _panels_nb(a, b, omega, t, kind, spec):
    n = a.shape[0]
    val = np.empty(n)
    err = np.empty(n)
    mag = np.empty(n)
    sd = np.empty(7)
    cd = np.empty(7)
    last_h = -1.0
    for i in range(n):
        c = 0.5 * (a[i] + b[i])
        h = 0.5 * (b[i] - a[i])
        if h != last_h:
            # node offsets repeat for every panel of the same width
            for j in range(7):
                sd[j] = math.sin(h * XGK[j] * t)
                cd[j] = math.cos(h * XGK[j] * t)
            last_h = h
        xc = c - omega
        sc = math.sin(xc * t)
        cc = math.cos(xc * t)
        fc = _node_value(c, xc, t, kind, sc, cc, spec)
        rk = fc * WGK[7]
        rg = fc * WG[3]
        ra = abs(fc) * WGK[7]
        for j in range(7):
            dx = h * XGK[j]
            s1 = sc * cd[j] - cc * sd[j]
            c1 = cc * cd[j] + sc * sd[j]
            s2 = sc * cd[j] + cc * sd[j]
            c2 = cc * cd[j] - sc * sd[j]
            f1 = _node_value(c - dx, xc - dx, t, kind, s1, c1, spec)
            f2 = _node_value(c + dx, xc + dx, t, kind, s2, c2, spec)
            rk += WGK[j] * (f1 + f2)
            ra += WGK[j] * (abs(f1) + abs(f2))
            if j % 2 == 1:
                rg += WG[j // 2] * (f1 + f2)
        val[i] = rk * h
        err[i] = abs((rk - rg) * h)
        mag[i] = ra * abs(h)
    return val, err, mag


def _panels_np(a, b, omega, t, kind, spec):
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    nodes = c[:, None] + h[:, None] * _X15[None, :]
    f = g_vector(nodes, spec) * kernel_vector(nodes - omega, t, kind)
    rk = f @ _WK15
    rg = f @ _WG15
    ra = np.abs(f) @ _WK15
    return rk * h, np.abs((rk - rg) * h), ra * np.abs(h)


@njit(cache=True, nogil=True)
def neumaier(values):
    s = 0.0
    comp = 0.0
    for v in values:
        tot = s + v
        if abs(s) >= abs(v):
            comp += (s - tot) + v
        else:
            comp += (v - tot) + s
        s = tot
    return s + comp


def _load_numpy_driver():
    import importlib.util
    import os
    import sys

    name = __package__ + "._driver_np"
    if name in sys.modules:
        return sys.modules[name]
    path = os.path.join(os.path.dirname(__file__), "_driver.py")
    spec = importlib.util.spec_from_file_location(name, path)
    mod = importlib.util.module_from_spec(spec)
    sys.modules[name] = mod
    spec.loader.exec_module(mod)
    return mod


def __getattr__(name):
    # drivers are resolved lazily to avoid a circular import with _driver
    if name in ("integrate_np", "profile_np"):
        mod = _load_numpy_driver()
        return getattr(mod, name[:-3])
    if name in ("integrate_nb", "profile_nb"):
        if not HAVE_NUMBA:
            return None
        from . import _driver
        return getattr(_driver, name[:-3])
    if name in ("integrate", "profile"):
        if HAVE_NUMBA:
            from . import _driver
            return getattr(_driver, name)
        return getattr(_load_numpy_driver(), name)
    raise AttributeError(name)
