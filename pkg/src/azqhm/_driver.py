"""Adaptive sinc-lobe quadrature driver.

This file is imported twice. As ``azqhm._driver`` every function is
compiled with numba on top of the looped panel kernel; as
``azqhm._driver_np`` (see :mod:`azqhm.kernels`) the identical source runs
as plain Python on top of the vectorised numpy kernel.
"""
import math

import numpy as np

from ._accel import HAVE_NUMBA, njit
from .kernels import (EPS, KIND_COS, KIND_IMAG, KIND_INV, KIND_SIN, MAX_CORE_EDGES,
                      MAX_TAIL_LOBES, STATUS_MAXSUB, STATUS_OK, STATUS_TAIL, _panels_nb,
                      _panels_np, neumaier)

if __name__.endswith("_np") or not HAVE_NUMBA:
    panels = _panels_np

    def _jit(f):
        return f
else:
    panels = _panels_nb
    _jit = njit(cache=True, nogil=True)


@_jit
def refine(a, b, owner, omega, t, kind, spec, tol_density, max_sub, nsub):
    """Bisect panels until each meets its share of the tolerance.

    ``owner`` tags every initial panel; children inherit the tag so
    callers can regroup results (e.g. per sinc lobe).
    """
    v, e, m = panels(a, b, omega, t, kind, spec)
    out_a = np.empty(0)
    out_v = np.empty(0)
    out_e = np.empty(0)
    out_o = np.empty(0, dtype=np.int64)
    status = STATUS_OK
    while True:
        limit = np.maximum(tol_density * (b - a), 64.0 * EPS * m)
        bad = e > limit
        good = ~bad
        out_a = np.concatenate((out_a, a[good]))
        out_v = np.concatenate((out_v, v[good]))
        out_e = np.concatenate((out_e, e[good]))
        out_o = np.concatenate((out_o, owner[good]))
        nbad = int(np.sum(bad))
        if nbad == 0:
            break
        if nsub + nbad > max_sub:
            status = STATUS_MAXSUB
            out_a = np.concatenate((out_a, a[bad]))
            out_v = np.concatenate((out_v, v[bad]))
            out_e = np.concatenate((out_e, e[bad]))
            out_o = np.concatenate((out_o, owner[bad]))
            break
        nsub += nbad
        ab = a[bad]
        bb = b[bad]
        ob = owner[bad]
        mid = 0.5 * (ab + bb)
        a = np.concatenate((ab, mid))
        b = np.concatenate((mid, bb))
        owner = np.concatenate((ob, ob))
        v, e, m = panels(a, b, omega, t, kind, spec)
    order = np.argsort(out_a, kind="mergesort")
    return out_a[order], out_v[order], out_e[order], out_o[order], nsub, status

@_jit
def snap(x, omega, t, up, phase):
    h = math.pi / t
    k = (x - omega) / h - phase
    if up:
        kk = math.ceil(k)
    else:
        kk = math.floor(k)
    return omega + (kk + phase) * h

@_jit
def core_edges(lo, hi, omega, t, struct, split):
    pts = [lo, hi]
    for s in struct:
        if s > lo and s < hi:
            pts.append(s)
    if split and t > 0.0:
        q = math.pi / t
        k0 = math.ceil((lo - omega) / q)
        k1 = math.floor((hi - omega) / q)
        if k1 - k0 + 1 > MAX_CORE_EDGES:
            k1 = k0 + MAX_CORE_EDGES - 1
        for k in range(k0, k1 + 1):
            p = omega + k * q
            if p > lo and p < hi:
                pts.append(p)
    arr = np.array(pts)
    arr = np.unique(arr)
    return arr

@_jit
def march(start, direction, period, offset, omega, t, kind, spec, tol_density,
          tol_stop, max_sub, nsub, geometric):
    """Integrate one semi-infinite tail, lobe by lobe, until three
    consecutive lobes fall below ``tol_stop``.

    Oscillatory lobes have width ``period`` and are split at ``offset``
    into two panels. ``geometric`` switches to doubling widths for the
    non-oscillatory ``-1/x`` tail.
    """
    kept = np.empty(0)
    err = 0.0
    status = STATUS_OK
    consecutive = 0
    done = False
    j0 = 0
    chunk = 32
    last = 0.0
    while not done:
        idx = np.arange(j0, j0 + chunk)
        if geometric:
            lo_off = period * (2.0 ** idx - 1.0)
            hi_off = period * (2.0 ** (idx + 1) - 1.0)
            mid_off = 0.5 * (lo_off + hi_off)
        else:
            lo_off = idx * period
            hi_off = (idx + 1) * period
            mid_off = lo_off + offset
        if direction > 0:
            a = np.concatenate((start + lo_off, start + mid_off))
            b = np.concatenate((start + mid_off, start + hi_off))
        else:
            a = np.concatenate((start - mid_off, start - hi_off))
            b = np.concatenate((start - lo_off, start - mid_off))
        owner = np.concatenate((idx - j0, idx - j0))
        keep_panel = b > a
        a = a[keep_panel]
        b = b[keep_panel]
        owner = owner[keep_panel]
        pa, pv, pe, po, nsub, st = refine(a, b, owner, omega, t, kind, spec, tol_density,
                                          max_sub, nsub)
        if st != STATUS_OK:
            status = st
        lobes = np.zeros(chunk)
        lerr = np.zeros(chunk)
        for i in range(pa.shape[0]):
            lobes[po[i]] += pv[i]
            lerr[po[i]] += pe[i]
        keep = chunk
        for li in range(chunk):
            if abs(lobes[li]) < tol_stop:
                consecutive += 1
            else:
                consecutive = 0
            if consecutive >= 3:
                keep = li + 1
                done = True
                break
        kept = np.concatenate((kept, lobes[:keep]))
        err += np.sum(lerr[:keep])
        last = abs(lobes[keep - 1])
        j0 += chunk
        if chunk < 4096:
            chunk *= 2
        if geometric and j0 > 900:
            done = True
        if kept.shape[0] > MAX_TAIL_LOBES:
            status = STATUS_TAIL
            done = True
        if status == STATUS_MAXSUB:
            done = True
    return neumaier(kept), err + last, nsub, status

@_jit
def integrate(spec, intervals, struct, omega, t, kind, rel_tol, abs_tol, max_sub,
              split, window):
    """Integral of G(nu) K(nu - omega; t) over the real line.

    Returns (value, error_estimate, status, subdivisions).
    """
    if kind == KIND_SIN or kind == KIND_IMAG:
        wwin = max(40.0 / t, window)
    else:
        wwin = window
    phase = 0.5 if kind == KIND_SIN else 0.0
    osc = kind == KIND_SIN or kind == KIND_IMAG
    n_int = intervals.shape[0]
    core_lo = np.empty(n_int)
    core_hi = np.empty(n_int)
    all_a = np.empty(0)
    all_b = np.empty(0)
    for i in range(n_int):
        lo = intervals[i, 0]
        hi = intervals[i, 1]
        clo = lo
        chi = hi
        if math.isinf(hi):
            x = max(lo, omega + wwin)
            for s in struct:
                if s > lo and s > x:
                    x = s
            chi = snap(x, omega, t, True, phase) if osc else x
        if math.isinf(lo):
            x = min(hi, omega - wwin)
            for s in struct:
                if s < hi and s < x:
                    x = s
            clo = snap(x, omega, t, False, phase) if osc else x
        core_lo[i] = clo
        core_hi[i] = chi
        edges = core_edges(clo, chi, omega, t, struct, split and osc)
        all_a = np.concatenate((all_a, edges[:-1]))
        all_b = np.concatenate((all_b, edges[1:]))
    v0, e0, m0 = panels(all_a, all_b, omega, t, kind, spec)
    est = np.sum(v0)
    tol = max(abs_tol, rel_tol * abs(est))
    width = np.sum(all_b - all_a)
    tol_density = 0.5 * tol / width if width > 0 else 0.0
    owner = np.zeros(all_a.shape[0], dtype=np.int64)
    pa, pv, pe, po, nsub, status = refine(all_a, all_b, owner, omega, t, kind, spec,
                                          tol_density, max_sub, 0)
    core = neumaier(pv)
    err = np.sum(pe)
    tol_stop = max(abs_tol, rel_tol * abs(core))
    parts = [core]
    h = math.pi / t if osc else 1.0
    for i in range(n_int):
        for direction in (1, -1):
            if direction > 0:
                if not math.isinf(intervals[i, 1]):
                    continue
                start = core_hi[i]
            else:
                if not math.isinf(intervals[i, 0]):
                    continue
                start = core_lo[i]
            if kind == KIND_SIN:
                val, e, nsub, st = march(start, direction, h, h, omega, t, KIND_SIN,
                                         spec, tol_density, tol_stop, max_sub, nsub, False)
                parts.append(val)
                err += e
            elif kind == KIND_IMAG:
                val, e, nsub, st = march(start, direction, h, h, omega, t, KIND_COS,
                                         spec, tol_density, tol_stop, max_sub, nsub, False)
                parts.append(val)
                err += e
                if st != STATUS_OK:
                    status = st
                base = max(h, abs(start - omega))
                val, e, nsub, st = march(start, direction, base, 0.0, omega, t, KIND_INV,
                                         spec, tol_density, tol_stop, max_sub, nsub, True)
                parts.append(val)
                err += e
            else:
                base = max(1.0, abs(start - omega))
                val, e, nsub, st = march(start, direction, base, 0.0, omega, t, kind,
                                         spec, tol_density, tol_stop, max_sub, nsub, True)
                parts.append(val)
                err += e
            if st != STATUS_OK:
                status = st
    return neumaier(np.array(parts)), err, status, nsub

@_jit
def profile(spec, intervals, struct, omega, ts, kind, rel_tol, abs_tol, max_sub, split,
            window):
    n = ts.shape[0]
    vals = np.zeros(n)
    errs = np.zeros(n)
    status = STATUS_OK
    worst = 0
    for k in range(n):
        if ts[k] <= 0.0:
            continue
        v, e, st, nsub = integrate(spec, intervals, struct, omega, ts[k], kind, rel_tol,
                                   abs_tol, max_sub, split, window)
        vals[k] = v
        errs[k] = e
        if st != STATUS_OK:
            status = st
            worst = k
    return vals, errs, status, worst
