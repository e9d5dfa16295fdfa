"""Inverse Laplace profiles of densities and the digit-law error term.

For a density ``F`` with ``F(x) = int f(t) exp(-t x) dt`` the log-scale
profile ``f~(s) = f(e^s)`` integrates to one, and the digit probability is
the Benford term plus ``int f~(s) Delta~(s) ds``. Its L1 norm scales the
fluctuation extrema into an error interval. Profiles are obtained with the
Stehfest real-axis inversion except where the inverse is known in closed
form: a point mass for the exponential and a box for the log-uniform.
"""

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy import integrate, special

from .digits import SpectrumProfile, _as_spec, benford_term, delta_extrema, delta_tilde
from .distributions import Exponential, LogUniform, Scaled, UniformFromOne
from .errors import AccuracyWarning, DomainError, NumericError

DEFAULT_ORDER = 12
DEFAULT_STEP = 0.005
MIN_HALF_WIDTH = 10.0
MAX_HALF_WIDTH = 40.0
UNSTABLE_L1 = 10.0
# logistic edge width relative to the edge location, for the uniform density
SMOOTHING_WIDTH = 0.01

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class StehfestWeights:
    """Stehfest coefficients; ``exact`` holds the rationals they were rounded from."""

    order: int
    weights: np.ndarray
    exact: tuple = ()

    def __post_init__(self):
        v = np.asarray(self.weights, dtype=float)
        if v.shape != (self.order,):
            raise DomainError(f"expected {self.order} weights, got shape {v.shape}")
        if self.exact:
            if sum(self.exact) != 0 or sum(c / k for k, c in enumerate(self.exact, 1)) != 1:
                raise DomainError(f"Stehfest weights of order {self.order} break the exactness identities")
        sum_v, sum_vk = self.float_sums(v)
        # rounding each weight costs ~eps |V_k|, so the sums are judged against sum |V_k|
        k = np.arange(1, self.order + 1)
        if abs(sum_v) > 1e-6 * math.fsum(np.abs(v)):
            raise DomainError(f"Stehfest weights of order {self.order} do not sum to zero")
        if abs(sum_vk - 1.0) > 1e-6 * max(1.0, math.fsum(np.abs(v / k))):
            raise DomainError(f"Stehfest weights of order {self.order} fail sum V_k / k = 1")
        object.__setattr__(self, "weights", v)

    @staticmethod
    def float_sums(v):
        k = np.arange(1, len(v) + 1)
        return math.fsum(v), math.fsum(v / k)

    def __len__(self):
        return self.order


@lru_cache(maxsize=None)
def stehfest_weights(order=DEFAULT_ORDER):
    """Stehfest coefficients ``V_1..V_N``, computed in exact rational arithmetic."""
    if isinstance(order, bool) or int(order) != order or order % 2 or not 2 <= order <= 20:
        raise DomainError(f"Stehfest order must be an even integer in [2, 20], got {order!r}")
    n = int(order)
    m = n // 2
    f = math.factorial
    out = []
    for k in range(1, n + 1):
        total = Fraction(0)
        for j in range((k + 1) // 2, min(k, m) + 1):
            total += Fraction(j**m * f(2 * j), f(m - j) * f(j) * f(j - 1) * f(k - j) * f(2 * j - k))
        out.append((-1) ** (k + m) * total)
    return StehfestWeights(n, np.array([float(v) for v in out]), tuple(out))


def _weights(weights):
    if weights is None:
        return stehfest_weights(DEFAULT_ORDER)
    if isinstance(weights, (int, np.integer)):
        return stehfest_weights(int(weights))
    return weights


def invert(transform, t, weights=None):
    """Stehfest estimate of the original ``f(t)`` from its Laplace transform.

    ``(ln 2 / t) * sum_k V_k * transform(k ln 2 / t)``; ``transform`` may be
    called with arrays. Works elementwise for array ``t``.
    """
    w = _weights(weights)
    t_arr = np.asarray(t, dtype=float)
    if np.any(~(t_arr > 0)):
        raise DomainError(f"inversion needs t > 0, got {t!r}")
    k = np.arange(1, w.order + 1)
    p = (k * _LN2) / t_arr[..., None]
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        try:
            vals = np.asarray(transform(p), dtype=float)
            if vals.shape != p.shape:
                raise ValueError
        except (TypeError, ValueError):
            vals = np.vectorize(lambda z: float(transform(z)))(p)
    bad = ~np.isfinite(vals)
    if bad.any():
        where = p[bad][0]
        raise NumericError(f"transform is not finite at p={where!r}", abscissa=float(where))
    out = (_LN2 / t_arr) * np.sum(w.weights * vals, axis=-1)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class InverseLaplaceProfile:
    """Log-scale inverse Laplace transform of a density.

    ``method`` is ``"stehfest"``, ``"analytic-delta"`` (a point mass of
    ``weight`` at ``location``) or ``"analytic-closed-form"`` (exact
    samples). ``nonnegative`` records that the exact profile is known to be
    nonnegative, as for completely monotone densities.
    """

    spectrum: SpectrumProfile | None
    method: str
    order: int | None = None
    location: float | None = None
    weight: float | None = None
    nonnegative: bool = False
    smoothed: bool = False
    note: str = ""

    def __post_init__(self):
        if self.method == "analytic-delta":
            if self.weight is None or not self.weight > 0 or self.location is None:
                raise DomainError("a delta profile needs a location and a positive weight")
        elif self.spectrum is None:
            raise DomainError(f"{self.method} profile needs sampled values")

    def shifted(self, offset):
        if self.method == "analytic-delta":
            return InverseLaplaceProfile(None, self.method, location=self.location - offset, weight=self.weight,
                                         nonnegative=True, note=self.note)
        return InverseLaplaceProfile(self.spectrum.shifted(offset), self.method, self.order,
                                     nonnegative=self.nonnegative, smoothed=self.smoothed, note=self.note)

    def to_csv(self, path):
        if self.method == "analytic-delta":
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(f"# point mass of weight {self.weight!r} at s={self.location!r}\n")
                fh.write("s,f_tilde\n")
                fh.write(f"{self.location!r},inf\n")
            return
        self.spectrum.to_csv(path, header=("s", "f_tilde"))


def _smoothed_uniform(upper):
    def density(x):
        x = np.asarray(x, dtype=float)
        rise = special.expit((x - 1.0) / SMOOTHING_WIDTH)
        fall = special.expit((x - upper) / (SMOOTHING_WIDTH * upper))
        return (rise - fall) / (upper - 1.0)

    return density


def _laplace_density(pdf):
    """Density handed to the inversion, plus whether it was smoothed."""
    if isinstance(pdf, UniformFromOne):
        return _smoothed_uniform(pdf.upper), True
    if isinstance(pdf, Scaled):
        inner, smoothed = _laplace_density(pdf.base)
        a = pdf.a
        return (lambda x: inner(np.asarray(x, dtype=float) / a) / a), smoothed
    return pdf.pdf, False


def _profile_values(density, s, w):
    t = np.exp(s)
    k = np.arange(1, w.order + 1)
    p = (k[None, :] * _LN2) / t[:, None]
    with np.errstate(over="ignore", invalid="ignore", divide="ignore", under="ignore"):
        vals = np.asarray(density(p), dtype=float)
    bad = ~np.isfinite(vals)
    if bad.any():
        raise NumericError(f"density is not finite at x={p[bad][0]!r}", abscissa=float(p[bad][0]))
    return (_LN2 / t) * (vals @ w.weights)


def _log_uniform_box(pdf):
    base = pdf.base if isinstance(pdf, Scaled) else pdf
    shift = math.log(pdf.a) if isinstance(pdf, Scaled) else 0.0
    width = base.decades * math.log(base.base)
    return -width - shift, -shift, 1.0 / width


def _is_log_uniform(pdf):
    return isinstance(pdf, LogUniform) or (isinstance(pdf, Scaled) and isinstance(pdf.base, LogUniform))


def default_window(pdf, weights=None, step=DEFAULT_STEP):
    """Grid window around the profile's mass centre ``-ln(median)``.

    Starts at half-width 10 and widens (up to 40) while either end still
    carries more than ``1e-12`` of the peak magnitude.
    """
    w = _weights(weights)
    centre = -math.log(pdf.median())
    density, _ = _laplace_density(pdf)
    s = np.arange(centre - MAX_HALF_WIDTH, centre + MAX_HALF_WIDTH + step / 2, step)
    vals = np.abs(_profile_values(density, s, w))
    peak = vals.max()
    if not peak > 0:
        return centre - MIN_HALF_WIDTH, centre + MIN_HALF_WIDTH
    big = np.nonzero(vals > 1e-12 * peak)[0]
    lo = min(s[big[0]] - 1.0, centre - MIN_HALF_WIDTH)
    hi = max(s[big[-1]] + 1.0, centre + MIN_HALF_WIDTH)
    return max(lo, s[0]), min(hi, s[-1])


def f_tilde_profile(pdf, s_min=None, s_max=None, points=None, weights=None):
    """Inverse Laplace profile of ``pdf`` on a uniform ``s`` grid.

    Exponential densities return their exact point mass, log-uniform
    densities their exact box; the uniform density is replaced by a
    logistic-edged version before inversion (``smoothed=True``).
    """
    w = _weights(weights)
    if isinstance(pdf, Exponential):
        return InverseLaplaceProfile(None, "analytic-delta", location=math.log(pdf.rate), weight=1.0,
                                     nonnegative=True, note="exact inverse of the exponential density")
    if s_min is None or s_max is None:
        lo, hi = default_window(pdf, w)
        s_min = lo if s_min is None else s_min
        s_max = hi if s_max is None else s_max
    if not s_min < s_max:
        raise DomainError(f"need s_min < s_max, got {s_min}, {s_max}")
    if points is None:
        points = int(math.ceil((s_max - s_min) / DEFAULT_STEP)) + 1
    if points < 16:
        raise DomainError(f"points >= 16 required, got {points}")
    s = np.linspace(s_min, s_max, points)
    step = (s_max - s_min) / (points - 1)
    if _is_log_uniform(pdf):
        a, b, height = _log_uniform_box(pdf)
        vals = np.where((s >= a) & (s <= b), height, 0.0)
        return InverseLaplaceProfile(
            SpectrumProfile(s_min, step, vals), "analytic-closed-form", nonnegative=True,
            note="box profile; its forward transform is the soft-edged log-uniform density",
        )
    density, smoothed = _laplace_density(pdf)
    vals = _profile_values(density, s, w)
    note = f"uniform edges replaced by logistic steps of width {SMOOTHING_WIDTH:g} x edge" if smoothed else ""
    return InverseLaplaceProfile(SpectrumProfile(s_min, step, vals), "stehfest", w.order,
                                 nonnegative=bool(pdf.completely_monotone), smoothed=smoothed, note=note)


@dataclass(frozen=True)
class L1Norm:
    value: float
    grid_value: float
    tail: float
    refinement_gap: float
    warning: str | None = None

    def __float__(self):
        return self.value


def _tail(values, step):
    """Geometric extrapolation of ``|f|`` beyond the last sample."""
    a, b = abs(values[-2]), abs(values[-1])
    if b == 0.0:
        return 0.0, True
    if a <= b:
        return b * step, False
    rate = math.log(a / b) / step
    return b / rate, True


def l1_norm(profile):
    """L1 norm of a profile, with tail estimate and a refinement check.

    Certified nonnegative profiles use ``|int f~|``, which equals the L1
    norm of the exact profile; sign flips in their grid samples are
    inversion error, not signal.
    """
    if profile.method == "analytic-delta":
        return L1Norm(profile.weight, profile.weight, 0.0, 0.0)
    vals = profile.spectrum.values
    h = profile.spectrum.step
    if vals.size < 5:
        raise DomainError("profile too short for an L1 estimate")
    target = vals if profile.nonnegative else np.abs(vals)
    fine = integrate.trapezoid(target, dx=h)
    if vals.size % 2:
        coarse = integrate.trapezoid(target[::2], dx=2 * h)
    else:
        coarse = integrate.trapezoid(target[:-1:2], dx=2 * h) + 0.5 * h * (target[-2] + target[-1])
    left, ok_l = _tail(target[1::-1], h)
    right, ok_r = _tail(target[-2:], h)
    tail = left + right
    total = fine + tail
    if profile.nonnegative:
        total = abs(total)
    gap = abs(fine - coarse) / max(abs(fine), 1e-300)
    warning = None
    if gap > 0.02:
        warning = f"grid refinement changes the L1 norm by {100 * gap:.1f}%"
    elif not (ok_l and ok_r):
        warning = "profile does not decay at the window edge; tail estimate is crude"
    if warning:
        warnings.warn(warning, AccuracyWarning, stacklevel=2)
    return L1Norm(float(total), float(fine), float(tail), float(gap), warning)


@dataclass(frozen=True)
class ErrorBound:
    lo: float
    hi: float
    l1: float
    certified: bool
    warning: str | None = None

    def __iter__(self):
        return iter((self.lo, self.hi))

    def __contains__(self, value):
        return self.lo <= value <= self.hi


def error_bound(pdf, spec, weights=None, grid_points=4096):
    """Interval ``[L1 min Delta~, L1 max Delta~]`` that must contain the error term.

    The L1 norm is exactly one for completely monotone and log-uniform
    densities, which gives the tightest interval.
    """
    spec = _as_spec(spec)
    lo, hi = delta_extrema(spec, grid_points)
    certified = bool(pdf.completely_monotone) or _is_log_uniform(pdf)
    if certified:
        norm, warning = 1.0, None
    else:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", AccuracyWarning)
            res = l1_norm(f_tilde_profile(pdf, weights=weights))
        norm, warning = res.value, res.warning
        if warning:
            warnings.warn(warning, AccuracyWarning, stacklevel=2)
    return ErrorBound(norm * lo, norm * hi, norm, certified, warning)


@dataclass(frozen=True)
class ErrorTerm:
    value: float
    method: str
    unstable: bool = False
    l1: float | None = None
    refinement_gap: float = 0.0
    reason: str = ""

    def __float__(self):
        return self.value


def total_error(pdf, spec, weights=None):
    """Error term ``int f~(s) Delta~(s) ds`` computed in inverse Laplace space.

    Grid profiles are integrated by Simpson's rule on the full grid and on
    every second point; the Richardson combination is returned. The result
    is flagged unstable when those disagree by more than 1% or the profile's
    L1 norm exceeds 10.
    """
    spec = _as_spec(spec)
    profile = f_tilde_profile(pdf, weights=weights)
    if profile.method == "analytic-delta":
        value = profile.weight * delta_tilde(spec, profile.location)
        return ErrorTerm(float(value), "analytic-delta", l1=profile.weight)
    s = profile.spectrum.s
    f = profile.spectrum.values
    if profile.method == "analytic-closed-form":
        a, b, height = _log_uniform_box(pdf)
        # the box spans whole periods; trapezoid on a periodic integrand is spectrally accurate
        n = 64 * max(1, int(round((b - a) / spec.period)))
        grid = np.linspace(a, b, n + 1)
        value = height * integrate.trapezoid(delta_tilde(spec, grid), grid)
        return ErrorTerm(float(value), "analytic-closed-form", l1=1.0)
    peak = np.abs(f).max()
    keep = np.nonzero(np.abs(f) > 1e-12 * peak)[0]
    i0, i1 = keep[0], keep[-1]
    if (i1 - i0) % 2:
        i1 = min(i1 + 1, f.size - 1) if i1 + 1 < f.size else i1 - 1
    seg = slice(i0, i1 + 1)
    integrand = f[seg] * delta_tilde(spec, s[seg])
    h = profile.spectrum.step
    fine = integrate.simpson(integrand, dx=h)
    coarse = integrate.simpson(integrand[::2], dx=2 * h) if integrand.size >= 5 else fine
    value = fine + (fine - coarse) / 15.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AccuracyWarning)
        norm = l1_norm(profile)
    gap = abs(fine - coarse) / max(abs(fine), 1e-4)
    reasons = []
    if norm.value > UNSTABLE_L1:
        reasons.append(f"L1 norm {norm.value:.3g} exceeds {UNSTABLE_L1:g}")
    if gap > 0.01:
        reasons.append(f"refinements disagree by {100 * gap:.2g}%")
    if profile.smoothed:
        reasons.append("density was smoothed before inversion")
    unstable = norm.value > UNSTABLE_L1 or gap > 0.01
    return ErrorTerm(float(value), "stehfest", unstable, norm.value, float(gap), "; ".join(reasons))


def route_difference(pdf, spec, weights=None, tol=1e-12):
    """Error term from inverse Laplace space minus the direct-sum deviation."""
    from .distributions import digit_prob_oracle

    spec = _as_spec(spec)
    direct = digit_prob_oracle(pdf, spec, tol) - benford_term(spec)
    return total_error(pdf, spec, weights).value - direct
