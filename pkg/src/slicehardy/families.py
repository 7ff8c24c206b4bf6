"""Seeded, deterministic test-function families.

A family spec is a string "name" or "name:key=value,...".  Regenerating
with the same spec and seed is bit-identical (a fresh Generator is
created per call).
"""

from __future__ import annotations

import numpy as np

from .errors import ConfigError
from .grid import GridFunction


def _parse_spec(spec):
    name, _, rest = spec.partition(":")
    args = {}
    if rest:
        for item in rest.split(";"):
            key, _, val = item.partition("=")
            if not val:
                raise ConfigError(f"malformed family argument {item!r}")
            args[key.strip()] = val.strip()
    return name.strip(), args


def _bump(x, center, width):
    return np.exp(-((x - center) / width) ** 2)


def _bumps(rng, count, h, n):
    out = []
    for _ in range(count):
        c = rng.uniform(0.5, 3.5)
        w = rng.uniform(0.05, 0.5)
        amp = rng.uniform(0.5, 2.0)
        if n == 1:
            f = GridFunction.from_callable(
                lambda x, c=c, w=w, amp=amp: amp * _bump(x, c, w),
                (0.0,), h, (int(round(4 / h)),))
        else:
            c2 = rng.uniform(0.5, 3.5)
            f = GridFunction.from_callable(
                lambda x, y, c=c, c2=c2, w=w, amp=amp:
                amp * _bump(x, c, w) * _bump(y, c2, w),
                (0.0, 0.0), h, (int(round(4 / h)),) * 2)
        out.append(f)
    return out


def _bursts(rng, count, h, n):
    if n != 1:
        raise ConfigError("bursts are one-dimensional")
    out = []
    for _ in range(count):
        c = rng.uniform(1.0, 3.0)
        w = rng.uniform(0.1, 0.6)
        amp = rng.uniform(0.5, 2.0)
        freq = rng.uniform(2.0, 30.0)
        phase = rng.uniform(0.0, 2 * np.pi)
        f = GridFunction.from_callable(
            lambda x, c=c, w=w, amp=amp, freq=freq, phase=phase:
            amp * np.cos(freq * x + phase) * _bump(x, c, w),
            (0.0,), h, (int(round(4 / h)),))
        out.append(f)
    return out


def _indicator_ladder(depth, h, n):
    if n != 1:
        raise ConfigError("the indicator ladder is one-dimensional")
    out = []
    cells = int(round(1.0 / h))
    for m in range(depth + 1):
        vals = np.zeros(cells)
        vals[: max(int(round(2.0 ** -m / h)), 1)] = 1.0
        out.append(GridFunction((0.0,), h, vals))
    return out


def _translates(radii, h, n):
    if n != 1:
        raise ConfigError("translates are one-dimensional")
    cells = int(round(1.0 / h))
    out = []
    for R in radii:
        f = GridFunction.from_callable(
            lambda x, R=R: _bump(x, R + 0.5, 0.2),
            (float(R),), h, (cells,))
        out.append(f)
    return out


def generate_family(spec, seed, h=2.0 ** -8, n=1):
    """Build the family named by spec, deterministically from the seed."""
    name, args = _parse_spec(spec)
    allowed = {"bumps": {"count"}, "bursts": {"count"},
               "indicator-ladder": {"M"}, "translates": {"R"}}
    if name in allowed:
        extra = set(args) - allowed[name]
        if extra:
            raise ConfigError(
                f"unknown argument(s) {sorted(extra)} for family {name!r}")
    rng = np.random.default_rng(seed)
    if name == "bumps":
        return _bumps(rng, int(args.get("count", 10)), h, n)
    if name == "bursts":
        return _bursts(rng, int(args.get("count", 10)), h, n)
    if name == "indicator-ladder":
        return _indicator_ladder(int(args.get("M", 6)), h, n)
    if name == "translates":
        radii = [float(v) for v in args.get("R", "0,4,16").split(",")]
        return _translates(radii, h, n)
    raise ConfigError(f"unknown family generator {name!r}")
