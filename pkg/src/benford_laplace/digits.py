"""Digital indicator functions and the logarithmic Laplace spectrum.

A digit event ``(b, d, l)`` is the set of positive reals whose base-``b``
significand lies in ``[d, d + l)``. Its indicator ``g`` has a Laplace
transform ``G``; on the log scale ``H(s) = e^s G(e^s)`` is periodic in ``s``
with period ``ln b`` and averages to the Benford term ``log_b(1 + l/d)``.
The remainder ``H(s) - log_b(1 + l/d)`` is the fluctuation that bounds how
far any distribution can stray from the digit law.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from . import kernels
from .errors import DomainError

DEFAULT_TOL = 1e-12
DEFAULT_GRID = 4096


@dataclass(frozen=True)
class DigitSpec:
    """Digit event ``[d, d + l)`` in base ``b``."""

    base: int = 10
    digit: int = 1
    run: int = 1

    def __post_init__(self):
        for name in ("base", "digit", "run"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise DomainError(f"{name} must be an integer, got {value!r}")
        if self.base < 2:
            raise DomainError(f"base >= 2 violated: base={self.base}")
        if not 1 <= self.digit <= self.base - 1:
            raise DomainError(f"1 <= digit <= base - 1 violated: digit={self.digit}, base={self.base}")
        if not 1 <= self.run <= self.base - self.digit:
            raise DomainError(
                f"1 <= run <= base - digit violated: run={self.run}, base={self.base}, digit={self.digit}"
            )

    @property
    def period(self):
        return math.log(self.base)

    def intervals(self, n):
        """Interval ``[d b^n, (d + l) b^n)`` for decade ``n``."""
        scale = float(self.base) ** n
        return self.digit * scale, (self.digit + self.run) * scale


@dataclass(frozen=True)
class SpectrumProfile:
    """Samples of a function of the log-scale variable on a uniform grid."""

    s_min: float
    step: float
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.size == 0:
            raise DomainError("profile values must be a non-empty 1-d sequence")
        if not self.step > 0:
            raise DomainError(f"step must be positive, got {self.step}")
        object.__setattr__(self, "values", values)

    @property
    def s(self):
        return self.s_min + self.step * np.arange(self.values.size)

    @property
    def s_max(self):
        return self.s_min + self.step * (self.values.size - 1)

    def __len__(self):
        return self.values.size

    def at(self, s):
        """Linear interpolation; zero outside the sampled window."""
        return np.interp(s, self.s, self.values, left=0.0, right=0.0)

    def shifted(self, offset):
        """The profile of ``s -> f(s + offset)``."""
        return SpectrumProfile(self.s_min - offset, self.step, self.values.copy())

    def to_csv(self, path, header=("s", "value")):
        data = np.column_stack([self.s, self.values])
        np.savetxt(path, data, delimiter=",", header=",".join(header), comments="", fmt="%.12g")


def _as_spec(spec):
    if isinstance(spec, DigitSpec):
        return spec
    return DigitSpec(*spec)


def benford_term(spec):
    """Benford probability ``log_b(1 + l/d)`` of a digit event.

    >>> round(benford_term(DigitSpec(10, 1, 1)), 5)
    0.30103
    """
    spec = _as_spec(spec)
    return math.log1p(spec.run / spec.digit) / math.log(spec.base)


def dif_eval(spec, x):
    """Digital indicator: 1 if ``x`` has significand in ``[d, d + l)``, else 0.

    A double that is the nearest one to an interval edge ``m b^n`` counts as
    lying on that edge, so ``0.3`` leads with 3 in base 10.
    """
    spec = _as_spec(spec)
    if not (math.isfinite(x) and x > 0):
        raise DomainError(f"indicator needs a finite x > 0, got {x!r}")
    lead = int(kernels.significant_digits(np.array([float(x)]), spec.base, 1)[0])
    return int(spec.digit <= lead < spec.digit + spec.run)


def _check_tol(tol):
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol!r}")


def h_tilde(spec, s, tol=DEFAULT_TOL):
    """Logarithmic Laplace spectrum of the digit indicator at ``s``.

    The doubly infinite series is cut where ``d b^n e^s > 40`` on the
    large side. On the small side every term with ``(d + l) u <= 1`` is
    folded into one power series in the largest such ``u`` (the ``u`` form
    a geometric sequence), truncated once its remainder is below ``tol``.
    Accepts scalars or arrays.
    """
    spec = _as_spec(spec)
    _check_tol(tol)
    arr = np.atleast_1d(np.asarray(s, dtype=np.float64))
    out = kernels.htilde(np.ascontiguousarray(arr.ravel()), spec.base, spec.digit, spec.run, float(tol))
    if np.ndim(s) == 0:
        return float(out[0])
    return out.reshape(arr.shape)


def delta_tilde(spec, s, tol=DEFAULT_TOL):
    """Periodic fluctuation of the spectrum around the Benford term."""
    spec = _as_spec(spec)
    return h_tilde(spec, s, tol) - benford_term(spec)


def period_mean(spec, points=2048, tol=DEFAULT_TOL):
    """Mean of the spectrum over one period.

    The integrand is smooth and periodic, so the rectangle rule on an open
    uniform grid converges geometrically.
    """
    spec = _as_spec(spec)
    s = np.arange(points) * (spec.period / points)
    return float(np.mean(h_tilde(spec, s, tol)))


def delta_extrema(spec, grid_points=DEFAULT_GRID, tol=DEFAULT_TOL, xtol=1e-10):
    """Minimum and maximum of the fluctuation over one period.

    A uniform scan locates the extrema; each is then polished by
    golden-section search on the three-point bracket around it.
    """
    spec = _as_spec(spec)
    if grid_points < 100:
        raise DomainError(f"grid_points >= 100 required, got {grid_points}")
    step = spec.period / grid_points
    # one extra cell on each side so brackets never straddle the wrap point
    s = (np.arange(-1, grid_points + 1)) * step
    values = delta_tilde(spec, s, tol)

    def polish(sign):
        i = int(np.argmin(sign * values[1:-1])) + 1
        func = lambda x: sign * delta_tilde(spec, x, tol)
        res = optimize.minimize_scalar(
            func, bracket=(s[i - 1], s[i], s[i + 1]), method="golden", tol=xtol
        )
        return min(sign * values[i], float(res.fun)) * sign

    return polish(1.0), polish(-1.0)


def delta_max_abs(spec, grid_points=DEFAULT_GRID):
    """Largest absolute fluctuation, the quantity tabulated per digit."""
    lo, hi = delta_extrema(spec, grid_points)
    return max(-lo, hi)


def second_digit_prob(d):
    """Probability that the second significant decimal digit equals ``d``."""
    if isinstance(d, bool) or not isinstance(d, (int, np.integer)) or not 0 <= d <= 9:
        raise DomainError(f"second digit must be an integer in [0, 9], got {d!r}")
    return sum(math.log10(1.0 + 1.0 / (10 * k + d)) for k in range(1, 10))


def hill_prob(digits):
    """Joint probability of the leading significant decimal digits ``digits``."""
    digits = list(digits)
    if not digits:
        raise DomainError("digit sequence must be non-empty")
    if any(isinstance(x, bool) or not isinstance(x, (int, np.integer)) for x in digits):
        raise DomainError(f"digits must be integers, got {digits!r}")
    if not 1 <= digits[0] <= 9:
        raise DomainError(f"leading digit must lie in [1, 9], got {digits[0]}")
    if any(not 0 <= x <= 9 for x in digits[1:]):
        raise DomainError(f"trailing digits must lie in [0, 9], got {digits!r}")
    value = 0
    for x in digits:
        value = 10 * value + int(x)
    return math.log10(1.0 + 1.0 / value)
