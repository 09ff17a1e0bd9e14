"""Numba kernels behind backends.family_sweep / backends.eval_points.

Imported lazily; functions are cached to keep repeat CLI runs fast.  Opcode
numbers mirror tape.py (asserted at import).  Evaluation scratch is one
stack row per worker thread, claimed via get_thread_id(), so the hot loops
never allocate.
"""

from __future__ import annotations

import cmath
import math

import numpy as np
from numba import get_num_threads, get_thread_id, njit, prange

from . import tape as _t

assert (_t.OP_CONST, _t.OP_Z, _t.OP_NEG, _t.OP_ADD, _t.OP_SUB, _t.OP_MUL,
        _t.OP_DIV, _t.OP_POWI, _t.OP_POW, _t.OP_EXP, _t.OP_SIN, _t.OP_COS,
        _t.OP_LOG) == tuple(range(13))

_CINF = complex(np.inf, np.inf)


@njit(cache=True)
def _powi(b, k):
    if k == 0:
        return 1 + 0j
    kk = k if k > 0 else -k
    r = 1 + 0j
    first = True
    base = b
    while kk:
        if kk & 1:
            if first:
                r = base
                first = False
            else:
                r = r * base
        kk >>= 1
        if kk:
            base = base * base
    if k < 0:
        if r == 0:
            return _CINF
        r = 1 / r
    return r


@njit(cache=True)
def _eval_point(code, arg, consts, z, stack):
    sp = 0
    pole = False
    for i in range(code.shape[0]):
        op = code[i]
        a = arg[i]
        if op == 0:      # CONST
            stack[sp] = consts[a]
            sp += 1
        elif op == 1:    # Z
            stack[sp] = z
            sp += 1
        elif op == 2:    # NEG
            stack[sp - 1] = -stack[sp - 1]
        elif op == 3:    # ADD
            stack[sp - 2] = stack[sp - 2] + stack[sp - 1]
            sp -= 1
        elif op == 4:    # SUB
            stack[sp - 2] = stack[sp - 2] - stack[sp - 1]
            sp -= 1
        elif op == 5:    # MUL
            stack[sp - 2] = stack[sp - 2] * stack[sp - 1]
            sp -= 1
        elif op == 6:    # DIV
            d = stack[sp - 1]
            if d == 0:
                pole = True
                stack[sp - 2] = _CINF
            else:
                stack[sp - 2] = stack[sp - 2] / d
            sp -= 1
        elif op == 7:    # POWI
            b = stack[sp - 1]
            if a < 0 and b == 0:
                pole = True
                stack[sp - 1] = _CINF
            else:
                stack[sp - 1] = _powi(b, a)
        elif op == 8:    # POW (principal branch)
            e = stack[sp - 1]
            b = stack[sp - 2]
            sp -= 1
            if b == 0:
                if e == 0:
                    stack[sp - 1] = 1 + 0j
                elif e.real > 0:
                    stack[sp - 1] = 0j
                else:
                    pole = True
                    stack[sp - 1] = _CINF
            else:
                stack[sp - 1] = cmath.exp(e * cmath.log(b))
        elif op == 9:    # EXP
            stack[sp - 1] = cmath.exp(stack[sp - 1])
        elif op == 10:   # SIN
            stack[sp - 1] = cmath.sin(stack[sp - 1])
        elif op == 11:   # COS
            stack[sp - 1] = cmath.cos(stack[sp - 1])
        else:            # LOG
            b = stack[sp - 1]
            if b == 0:
                pole = True
                stack[sp - 1] = _CINF
            else:
                stack[sp - 1] = cmath.log(b)
    v = stack[0]
    if pole:
        fl = 2
    elif math.isfinite(v.real) and math.isfinite(v.imag):
        fl = 0
    else:
        fl = 1
    return v, fl


@njit(cache=True, parallel=True)
def eval_tape(code, arg, consts, pts, stack_need):
    n = pts.shape[0]
    out = np.empty(n, np.complex128)
    flags = np.empty(n, np.uint8)
    scratch = np.empty((get_num_threads(), stack_need), np.complex128)
    for p in prange(n):
        v, f = _eval_point(code, arg, consts, pts[p],
                           scratch[get_thread_id()])
        out[p] = v
        flags[p] = np.uint8(f)
    return out, flags


@njit(cache=True, parallel=True)
def family_sweep(fcode, farg, foff, dcode, darg, doff, consts,
                 member_part, member_window, pts, n_parts, n_windows,
                 want_mag, max_stack):
    n = pts.shape[0]
    n_members = member_part.shape[0]
    sph_wmax = np.full((n_windows, n), -1.0)
    mag_wmin = np.full((n_parts, n_windows, n), np.inf)
    mag_wmax = np.full((n_parts, n_windows, n), -1.0)
    pole_any = np.zeros(n, np.bool_)
    scratch = np.empty((get_num_threads(), max_stack), np.complex128)
    for m in range(n_members):
        part = member_part[m]
        w = member_window[m]
        fc = fcode[foff[m]:foff[m + 1]]
        fa = farg[foff[m]:foff[m + 1]]
        dc = dcode[doff[m]:doff[m + 1]]
        da = darg[doff[m]:doff[m + 1]]
        for p in prange(n):
            stack = scratch[get_thread_id()]
            v, f = _eval_point(fc, fa, consts, pts[p], stack)
            if f == 2:
                pole_any[p] = True
                mag = np.inf
            elif f == 1:
                mag = np.inf
            else:
                mag = abs(v)
            if want_mag and f != 2:
                if mag < mag_wmin[part, w, p]:
                    mag_wmin[part, w, p] = mag
                if mag > mag_wmax[part, w, p]:
                    mag_wmax[part, w, p] = mag
            dv, df = _eval_point(dc, da, consts, pts[p], stack)
            sph = 0.0
            if f == 0 and df == 0:
                sph = abs(dv) / (1.0 + mag * mag)
                if not math.isfinite(sph):
                    sph = 0.0
            if sph > sph_wmax[w, p]:
                sph_wmax[w, p] = sph
    return sph_wmax, mag_wmin, mag_wmax, pole_any
