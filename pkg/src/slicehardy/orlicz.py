"""Orlicz and Musielak-Orlicz functionals, modulars and Luxemburg norms.

The Luxemburg gauge inf{lambda > 0 : modular(f / lambda) <= 1} is found by
bracketing and bisection; the modular is monotone in lambda, so bisection
is robust.  Power functionals take a closed-form shortcut (the gauge is
the plain L^p quadrature norm).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidDataError, NumericFailure

DEFAULT_TOL = 1e-10
_MAX_DOUBLINGS = 200


class OrliczFunction:
    """A Young-type functional with declared lower/upper type exponents.

    The exponents are user inputs; :func:`validate_orlicz` checks them
    empirically on a log-spaced sample grid.
    """

    def __init__(self, evaluate, p_minus, p_plus, c_lower=1.0, c_upper=1.0,
                 name="orlicz", power_exponent=None):
        if p_minus <= 0 or p_plus <= 0:
            raise ValueError("type exponents must be positive")
        if c_lower <= 0 or c_upper <= 0:
            raise ValueError("type constants must be positive")
        self._evaluate = evaluate
        self.p_minus = float(p_minus)
        self.p_plus = float(p_plus)
        self.c_lower = float(c_lower)
        self.c_upper = float(c_upper)
        self.name = name
        #: set for tau -> tau^p; enables the closed-form gauge
        self.power_exponent = power_exponent

    def __call__(self, tau):
        return self._evaluate(np.asarray(tau, dtype=float))

    def inverse(self, y, tol=1e-14):
        """Solve Phi(u) = y for u >= 0 by bracketing + bisection."""
        y = float(y)
        if y <= 0:
            return 0.0
        if self.power_exponent is not None:
            return y ** (1.0 / self.power_exponent)
        lo, hi = 0.0, 1.0
        for _ in range(_MAX_DOUBLINGS):
            if self(hi) >= y:
                break
            hi *= 2.0
        else:
            raise NumericFailure("could not bracket Phi inverse")
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if self(mid) < y:
                lo = mid
            else:
                hi = mid
            if hi - lo <= tol * max(hi, 1.0):
                break
        return 0.5 * (lo + hi)

    def __repr__(self):
        return f"OrliczFunction({self.name})"


class MusielakFunction:
    """A point-dependent functional theta(x, tau)."""

    def __init__(self, evaluate, name="musielak"):
        self._evaluate = evaluate
        self.name = name

    def __call__(self, x_norm, tau):
        return self._evaluate(np.asarray(x_norm, dtype=float),
                              np.asarray(tau, dtype=float))

    def __repr__(self):
        return f"MusielakFunction({self.name})"


# -- built-in functionals ---------------------------------------------------

def power(p):
    """Phi(tau) = tau^p; lower and upper type are both p."""
    p = float(p)
    if p <= 0:
        raise ValueError("power exponent must be positive")
    return OrliczFunction(lambda tau: tau ** p, p, p,
                          name=f"power:{p:g}", power_exponent=p)


def log_damped(p_minus=0.9):
    """Phi(tau) = tau / log(e + tau), upper type 1, declared lower type.

    The lower type exponent is not canonical; any value in (0, 1) validates
    on the standard sweep with a constant depending on it.
    """
    if not 0 < p_minus < 1:
        raise ValueError("declared lower type must lie in (0, 1)")
    c_lower = _log_damped_lower_constant(p_minus)
    return OrliczFunction(lambda tau: tau / np.log(np.e + tau),
                          p_minus, 1.0, c_lower=c_lower,
                          name="log_damped")


def _log_damped_lower_constant(p_minus):
    # sup over s in (0,1), tau > 0 of s^(1-p) log(e+tau)/log(e+s tau),
    # estimated on a coarse log grid and padded by 10%.
    s = np.exp(np.linspace(np.log(1e-8), 0.0, 120))[:, None]
    tau = np.exp(np.linspace(np.log(1e-8), np.log(1e8), 120))[None, :]
    ratio = s ** (1 - p_minus) * np.log(np.e + tau) / np.log(np.e + s * tau)
    return 1.1 * float(ratio.max())


def musielak_log():
    """theta(x, tau) = tau / (log(e+|x|) + log(e+tau))."""
    return MusielakFunction(
        lambda x, tau: tau / (np.log(np.e + x) + np.log(np.e + tau)),
        name="musielak_log")


def from_tag(tag):
    """Resolve a string tag: "power:p", "log_damped", "musielak_log"."""
    if tag.startswith("power:"):
        return power(float(tag.split(":", 1)[1]))
    if tag == "log_damped":
        return log_damped()
    if tag == "musielak_log":
        return musielak_log()
    raise ValueError(f"unknown functional tag {tag!r}")


# -- modulars and norms -----------------------------------------------------

def modular(phi, f, lam):
    """Quadrature value of the Orlicz modular of f at scale lam."""
    if lam <= 0:
        raise ValueError("lambda must be positive")
    if not np.all(np.isfinite(f.values)):
        raise InvalidDataError("non-finite sample in f")
    return float(phi(np.abs(f.values) / lam).sum() * f.cell_volume)


def musielak_modular(theta, f, lam):
    if lam <= 0:
        raise ValueError("lambda must be positive")
    if not np.all(np.isfinite(f.values)):
        raise InvalidDataError("non-finite sample in f")
    x = f.center_radii()
    return float(theta(x, np.abs(f.values) / lam).sum() * f.cell_volume)


def _gauge_bisect(modular_at, start, tol):
    """Gauge from a monotone nonincreasing lambda -> modular map."""
    lam = max(start, np.finfo(float).tiny)
    if modular_at(lam) <= 1.0:
        hi = lam
        lo = lam
        for _ in range(_MAX_DOUBLINGS):
            lo = lo / 2.0
            if modular_at(lo) > 1.0:
                break
        else:
            return 0.0  # modular stays <= 1 down to ~0: gauge is 0
    else:
        lo = lam
        hi = lam
        for _ in range(_MAX_DOUBLINGS):
            hi = hi * 2.0
            if modular_at(hi) <= 1.0:
                break
        else:
            raise NumericFailure("failed to bracket the Luxemburg gauge")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if modular_at(mid) <= 1.0:
            hi = mid
        else:
            lo = mid
        if hi - lo <= tol * hi:
            break
    return hi


def luxemburg_norm(phi, f, tol=DEFAULT_TOL):
    """Luxemburg gauge of f in the Orlicz space of phi."""
    if not np.all(np.isfinite(f.values)):
        raise InvalidDataError("non-finite sample in f")
    m = f.max_abs()
    if m == 0.0:
        return 0.0
    if phi.power_exponent is not None:
        return f.lp_norm(phi.power_exponent)
    return _gauge_bisect(lambda lam: modular(phi, f, lam), m, tol)


def musielak_norm(theta, f, tol=DEFAULT_TOL):
    """Luxemburg-type gauge for the point-dependent modular of theta."""
    if not np.all(np.isfinite(f.values)):
        raise InvalidDataError("non-finite sample in f")
    m = f.max_abs()
    if m == 0.0:
        return 0.0
    return _gauge_bisect(lambda lam: musielak_modular(theta, f, lam), m, tol)


def luxemburg_norm_rows(phi, rows, cell_volume, tol=DEFAULT_TOL):
    """Vectorized Luxemburg gauge of many sample vectors at once.

    `rows` has shape (m, w); row i holds the samples of one function and
    the result is the array of m gauges.  Used by the slice norm, which
    needs one gauge per outer sample point.
    """
    rows = np.abs(np.asarray(rows, dtype=float))
    m = rows.max(axis=1)
    out = np.zeros(rows.shape[0])
    active = m > 0
    if not active.any():
        return out
    if phi.power_exponent is not None:
        p = phi.power_exponent
        out[active] = (rows[active] ** p).sum(axis=1) ** (1.0 / p) \
            * cell_volume ** (1.0 / p)
        return out
    sub = rows[active]
    start = m[active]

    def mods(lam):
        return phi(sub / lam[:, None]).sum(axis=1) * cell_volume

    lo = start.copy()
    hi = start.copy()
    ok = mods(start) <= 1.0
    # bracket: double hi where modular > 1, halve lo where modular <= 1
    for _ in range(_MAX_DOUBLINGS):
        grow = ~ok & (mods(hi) > 1.0)
        if not grow.any():
            break
        hi[grow] *= 2.0
    else:
        raise NumericFailure("failed to bracket the Luxemburg gauge (rows)")
    for _ in range(_MAX_DOUBLINGS):
        shrink = ok & (mods(np.maximum(lo, np.finfo(float).tiny)) <= 1.0) \
            & (lo > 1e-300)
        if not shrink.any():
            break
        lo[shrink] /= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        le = mods(mid) <= 1.0
        hi = np.where(le, mid, hi)
        lo = np.where(le, lo, mid)
        if np.all(hi - lo <= tol * hi):
            break
    out[active] = hi
    return out


# -- empirical validation ---------------------------------------------------

@dataclass
class SampleSpec:
    """Log-spaced (s, tau) sweep used by validate_orlicz."""

    s_min: float = 2.0 ** -20
    s_max: float = 2.0 ** 20
    tau_min: float = 2.0 ** -20
    tau_max: float = 2.0 ** 20
    count: int = 64


@dataclass
class ValidationReport:
    passed: bool
    violations: list = field(default_factory=list)

    def __bool__(self):
        return self.passed


def validate_orlicz(phi, spec=None):
    """Empirically check monotonicity and the declared type inequalities.

    Violations are report content, not errors; each carries the witness
    (kind, s, tau, lhs, rhs).
    """
    spec = spec or SampleSpec()
    viol = []
    tau = np.exp(np.linspace(np.log(spec.tau_min), np.log(spec.tau_max),
                             spec.count))
    vals = phi(tau)
    if abs(float(phi(0.0))) > 0:
        viol.append(("zero", 0.0, 0.0, float(phi(0.0)), 0.0))
    bad = np.nonzero(vals <= 0)[0]
    for i in bad:
        viol.append(("positive", None, float(tau[i]), float(vals[i]), 0.0))
    drops = np.nonzero(np.diff(vals) < -1e-14 * np.abs(vals[:-1]))[0]
    for i in drops:
        viol.append(("nondecreasing", None, float(tau[i + 1]),
                     float(vals[i + 1]), float(vals[i])))

    s_lower = np.exp(np.linspace(np.log(spec.s_min), 0.0, spec.count))
    s_lower = s_lower[s_lower < 1.0]
    s_upper = np.exp(np.linspace(0.0, np.log(spec.s_max), spec.count))
    for s_grid, p, c, kind in (
            (s_lower, phi.p_minus, phi.c_lower, "lower_type"),
            (s_upper, phi.p_plus, phi.c_upper, "upper_type")):
        lhs = phi(s_grid[:, None] * tau[None, :])
        rhs = c * s_grid[:, None] ** p * vals[None, :]
        bad = np.argwhere(lhs > rhs * (1 + 1e-12))
        for i, j in bad[:20]:
            viol.append((kind, float(s_grid[i]), float(tau[j]),
                         float(lhs[i, j]), float(rhs[i, j])))
    return ValidationReport(passed=not viol, violations=viol)
