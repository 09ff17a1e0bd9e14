"""Evaluation kernels: numba-accelerated with a pure-numpy fallback.

The two hot operations are batch tape evaluation and the family sweep (per
member, per grid point: magnitude and spherical-derivative statistics folded
into per-window reductions).  Both exist twice: a numba ``@njit`` version in
``_numba_impl`` and a vectorized numpy version here.

Selection: ``FATOUKIT_BACKEND`` = ``auto`` (default; numba when importable),
``numba`` or ``numpy``; ``set_backend()`` overrides at runtime.  Results are
deterministic for a fixed backend.  ``benchmarks/bench_backends.py`` compares
the two paths.
"""

from __future__ import annotations

import os
import warnings
from dataclasses import dataclass

import numpy as np

from .tape import (OP_ADD, OP_CONST, OP_COS, OP_DIV, OP_EXP, OP_LOG, OP_MUL,
                   OP_NEG, OP_POW, OP_POWI, OP_SIN, OP_SUB, OP_Z, Tape)

__all__ = ["MemberTapeTable", "active_backend", "set_backend",
           "eval_points", "family_sweep", "SweepResult"]

FLAG_OK = 0
FLAG_ESCAPED = 1
FLAG_POLE = 2

_backend: str | None = None
_numba_mod = None


def _resolve_default() -> str:
    choice = os.environ.get("FATOUKIT_BACKEND", "auto").strip().lower()
    if choice not in ("auto", "numba", "numpy"):
        warnings.warn(f"unknown FATOUKIT_BACKEND={choice!r}, using auto")
        choice = "auto"
    if choice in ("auto", "numba"):
        try:
            import numba  # noqa: F401
            return "numba"
        except ImportError:
            if choice == "numba":
                warnings.warn("numba requested but not importable; "
                              "falling back to numpy")
            return "numpy"
    return "numpy"


def active_backend() -> str:
    global _backend
    if _backend is None:
        _backend = _resolve_default()
    return _backend


def set_backend(name: str) -> None:
    """Force 'numba' or 'numpy' (or 'auto' to re-resolve from environment)."""
    global _backend
    if name == "auto":
        _backend = None
        return
    if name not in ("numba", "numpy"):
        raise ValueError("backend must be 'numba', 'numpy' or 'auto'")
    if name == "numba":
        import numba  # noqa: F401  (raise early if unavailable)
    _backend = name


def _numba_impl():
    global _numba_mod
    if _numba_mod is None:
        from . import _numba_impl as mod
        _numba_mod = mod
    return _numba_mod


# ---------------------------------------------------------------------------
# concatenated member tapes
# ---------------------------------------------------------------------------

@dataclass
class MemberTapeTable:
    """All member (value, derivative) tapes concatenated for kernel use."""
    fcode: np.ndarray
    farg: np.ndarray
    foff: np.ndarray      # int64[M+1]
    dcode: np.ndarray
    darg: np.ndarray
    doff: np.ndarray
    consts: np.ndarray    # shared complex pool
    member_part: np.ndarray    # int32[M]
    member_window: np.ndarray  # int32[M]
    max_stack: int

    @property
    def n_members(self) -> int:
        return len(self.member_part)


def build_tape_table(tapes_f: list[Tape], tapes_d: list[Tape],
                     member_part, member_window) -> MemberTapeTable:
    consts: list[np.ndarray] = []
    base = 0

    def concat(tapes):
        nonlocal base
        codes, args, offs = [], [], [0]
        for t in tapes:
            a = t.arg.copy()
            a[t.code == OP_CONST] += base
            codes.append(t.code)
            args.append(a)
            offs.append(offs[-1] + len(t.code))
            consts.append(t.consts)
            base += len(t.consts)
        return (np.concatenate(codes), np.concatenate(args),
                np.asarray(offs, dtype=np.int64))

    fcode, farg, foff = concat(tapes_f)
    dcode, darg, doff = concat(tapes_d)
    max_stack = max(max((t.stack_need for t in tapes_f), default=1),
                    max((t.stack_need for t in tapes_d), default=1), 1)
    return MemberTapeTable(
        fcode, farg, foff, dcode, darg, doff,
        np.concatenate(consts) if consts else np.zeros(1, np.complex128),
        np.asarray(member_part, dtype=np.int32),
        np.asarray(member_window, dtype=np.int32),
        max_stack)


# ---------------------------------------------------------------------------
# numpy kernels
# ---------------------------------------------------------------------------

def _powi_numpy(b: np.ndarray, k: int, pole: np.ndarray):
    if k == 0:
        return np.ones_like(b)
    kk = abs(k)
    r = None
    base = b
    while kk:
        if kk & 1:
            r = base if r is None else r * base
        kk >>= 1
        if kk:
            base = base * base
    if k < 0:
        pole |= (r == 0) & (b == 0)
        r = np.where(r == 0, np.inf + 0j, 1.0 / np.where(r == 0, 1.0, r))
    return r


def _eval_tape_numpy(code, arg, consts, pts):
    pts = np.ascontiguousarray(pts, dtype=np.complex128)
    pole = np.zeros(pts.shape, dtype=bool)
    stack: list[np.ndarray] = []
    with np.errstate(all="ignore"):
        for i in range(len(code)):
            op = code[i]
            if op == OP_CONST:
                stack.append(np.broadcast_to(consts[arg[i]], pts.shape))
            elif op == OP_Z:
                stack.append(pts)
            elif op == OP_NEG:
                stack[-1] = -stack[-1]
            elif op == OP_ADD:
                b = stack.pop()
                stack[-1] = stack[-1] + b
            elif op == OP_SUB:
                b = stack.pop()
                stack[-1] = stack[-1] - b
            elif op == OP_MUL:
                b = stack.pop()
                stack[-1] = stack[-1] * b
            elif op == OP_DIV:
                b = stack.pop()
                zero = (b == 0)
                pole |= zero
                stack[-1] = np.where(zero, np.inf + 0j,
                                     stack[-1] / np.where(zero, 1.0, b))
            elif op == OP_POWI:
                stack[-1] = _powi_numpy(stack[-1], int(arg[i]), pole)
            elif op == OP_POW:
                e = stack.pop()
                b = stack.pop()
                zero = (b == 0)
                res = np.exp(e * np.log(np.where(zero, 1.0, b)))
                if np.any(zero):
                    res = np.where(zero & (e == 0), 1.0 + 0j,
                                   np.where(zero & (e.real > 0), 0j,
                                            np.where(zero, np.inf + 0j, res)))
                    pole |= zero & (e.real <= 0) & (e != 0)
                stack.append(res)
            elif op == OP_EXP:
                stack[-1] = np.exp(stack[-1])
            elif op == OP_SIN:
                stack[-1] = np.sin(stack[-1])
            elif op == OP_COS:
                stack[-1] = np.cos(stack[-1])
            elif op == OP_LOG:
                b = stack[-1]
                zero = (b == 0)
                pole |= zero
                stack[-1] = np.log(np.where(zero, 1.0, b))
            else:
                raise ValueError(f"bad opcode {op}")
        val = np.array(stack[-1], dtype=np.complex128, copy=True)
    flags = np.where(pole, FLAG_POLE,
                     np.where(np.isfinite(val), FLAG_OK,
                              FLAG_ESCAPED)).astype(np.uint8)
    return val, flags


def _family_sweep_numpy(table: MemberTapeTable, pts, n_parts, n_windows,
                        want_mag: bool):
    P = pts.size
    flat = pts.reshape(-1)
    sph_wmax = np.full((n_windows, P), -1.0)
    mag_wmin = np.full((n_parts, n_windows, P), np.inf)
    mag_wmax = np.full((n_parts, n_windows, P), -1.0)
    pole_any = np.zeros(P, dtype=bool)
    with np.errstate(all="ignore"):
        for m in range(table.n_members):
            part = table.member_part[m]
            w = table.member_window[m]
            val, fl = _eval_tape_numpy(
                table.fcode[table.foff[m]:table.foff[m + 1]],
                table.farg[table.foff[m]:table.foff[m + 1]],
                table.consts, flat)
            dval, dfl = _eval_tape_numpy(
                table.dcode[table.doff[m]:table.doff[m + 1]],
                table.darg[table.doff[m]:table.doff[m + 1]],
                table.consts, flat)
            pole = fl == FLAG_POLE
            escaped = fl == FLAG_ESCAPED
            pole_any |= pole
            mag = np.abs(val)
            mag[escaped] = np.inf
            if want_mag:
                valid = ~pole
                row_min = mag_wmin[part, w]
                row_max = mag_wmax[part, w]
                np.minimum(row_min, np.where(valid, mag, np.inf), out=row_min)
                np.maximum(row_max, np.where(valid, mag, -1.0), out=row_max)
            # spherical derivative; escape/pole of either tape contributes 0
            sph = np.abs(dval) / (1.0 + mag * mag)
            bad = pole | escaped | (dfl != FLAG_OK) | ~np.isfinite(sph)
            sph[bad] = 0.0
            np.maximum(sph_wmax[w], sph, out=sph_wmax[w])
    return sph_wmax, mag_wmin, mag_wmax, pole_any


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

@dataclass
class SweepResult:
    """Per-window reductions over the members, per grid point (flat)."""
    sph_wmax: np.ndarray   # (n_windows, P); -1 marks windows with no data
    mag_wmin: np.ndarray   # (n_parts, n_windows, P); +inf where no data
    mag_wmax: np.ndarray   # (n_parts, n_windows, P); -1 where no data
    pole_any: np.ndarray   # (P,) bool


def eval_points(tape: Tape, pts: np.ndarray):
    """Evaluate a tape on an array of points -> (values, flags)."""
    pts = np.asarray(pts, dtype=np.complex128)
    if active_backend() == "numba":
        mod = _numba_impl()
        val, fl = mod.eval_tape(tape.code, tape.arg, tape.consts,
                                pts.reshape(-1), tape.stack_need)
        return val.reshape(pts.shape), fl.reshape(pts.shape)
    val, fl = _eval_tape_numpy(tape.code, tape.arg, tape.consts,
                               pts.reshape(-1))
    return val.reshape(pts.shape), fl.reshape(pts.shape)


def family_sweep(table: MemberTapeTable, pts: np.ndarray, n_parts: int,
                 n_windows: int, want_mag: bool = True) -> SweepResult:
    """Window statistics of all members over a point set."""
    flat = np.asarray(pts, dtype=np.complex128).reshape(-1)
    if active_backend() == "numba":
        mod = _numba_impl()
        out = mod.family_sweep(
            table.fcode, table.farg, table.foff,
            table.dcode, table.darg, table.doff,
            table.consts, table.member_part, table.member_window,
            flat, n_parts, n_windows, want_mag, table.max_stack)
        return SweepResult(*out)
    return SweepResult(*_family_sweep_numpy(table, flat, n_parts, n_windows,
                                            want_mag))
