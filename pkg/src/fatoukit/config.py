"""Parameter resolution: explicit values win over FATOUKIT_* environment
variables, which win over the built-in defaults."""

from __future__ import annotations

import os

from .escape import EscapeParams
from .normality import NormalityParams
from .orbit import OrbitLimits

__all__ = ["env_overrides", "make_normality_params", "make_escape_params",
           "make_orbit_limits", "ENV_VARS"]

ENV_VARS = {
    "n_max": ("FATOUKIT_NMAX", int),
    "escape_radius": ("FATOUKIT_ESCAPE_RADIUS", float),
    "marty_threshold": ("FATOUKIT_MARTY_THRESHOLD", float),
    "tail_window": ("FATOUKIT_TAIL_WINDOW", int),
    "u_hits": ("FATOUKIT_U_HITS", int),
    "growth_margin": ("FATOUKIT_GROWTH_MARGIN", float),
    "threads": ("FATOUKIT_THREADS", int),
}


def env_overrides() -> dict:
    out = {}
    for key, (var, conv) in ENV_VARS.items():
        raw = os.environ.get(var)
        if raw is not None and raw != "":
            out[key] = conv(raw)
    return out


def _pick(explicit, env_key, env, default):
    if explicit is not None:
        return explicit
    if env_key in env:
        return env[env_key]
    return default


def make_normality_params(n_max=None, window_len=None, marty_threshold=None,
                          growth_windows=None, growth_margin=None,
                          **kwargs) -> NormalityParams:
    env = env_overrides()
    return NormalityParams(
        n_max=_pick(n_max, "n_max", env, 256),
        window_len=_pick(window_len, "tail_window", env, 32),
        marty_threshold=_pick(marty_threshold, "marty_threshold", env, None),
        growth_windows=growth_windows if growth_windows is not None else 3,
        growth_margin=_pick(growth_margin, "growth_margin", env, 0.05),
        **kwargs)


def make_escape_params(n_max=None, escape_radius=None, tail_window=None,
                       u_hits=None, growth_margin=None) -> EscapeParams:
    env = env_overrides()
    return EscapeParams(
        n_max=_pick(n_max, "n_max", env, 256),
        escape_radius=_pick(escape_radius, "escape_radius", env, 2.0),
        tail_window=_pick(tail_window, "tail_window", env, 32),
        u_hits=_pick(u_hits, "u_hits", env, 4),
        growth_margin=_pick(growth_margin, "growth_margin", env, 0.05))


def make_orbit_limits(n_pre=None, depth=None, dedup_tol=None,
                      max_points=None) -> OrbitLimits:
    return OrbitLimits(
        n_pre=n_pre if n_pre is not None else 64,
        depth=depth if depth is not None else 3,
        dedup_tol=dedup_tol if dedup_tol is not None else 1e-9,
        max_points=max_points if max_points is not None else 10000)
