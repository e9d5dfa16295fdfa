"""Densities on the positive reals and the direct digit-probability sum.

Every family exposes ``pdf``, ``cdf``, ``sf`` and ``mass`` on arrays and is
immutable after construction. ``digit_prob_oracle`` adds up interval masses
decade by decade; it never touches the Laplace machinery and is the ground
truth the spectral formulas are checked against.
"""

import csv
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import special
from scipy.integrate import tanhsinh

from .digits import _as_spec
from .errors import AccuracyWarning, DomainError, StateError

NORMALIZATION_TOL = 1e-8
_QUAD_RTOL = 1e-12
_QUAD_ATOL = 1e-16
# half-width (in ln x) of the tabulated cell range around the bulk of the mass
_CELL_SPAN = 80
# intervals longer than this in ln x are not integrated in one piece
_DIRECT_SPAN = 4.0


def _positive(name, value):
    if not (math.isfinite(value) and value > 0):
        raise DomainError(f"{name} must be a finite positive number, got {value!r}")
    return float(value)


class Distribution:
    """Base class for a normalized density on ``(0, inf)``."""

    family = "abstract"
    #: certified completely monotone, so its inverse Laplace profile is nonnegative
    completely_monotone = False
    normalization = 1.0
    support = (0.0, math.inf)

    @property
    def params(self):
        return {}

    @property
    def normalized(self):
        return True

    def describe(self):
        args = ", ".join(f"{k}={v:g}" if isinstance(v, float) else f"{k}={v}" for k, v in self.params.items())
        return f"{self.family}({args})"

    def __repr__(self):
        return f"<{self.describe()}>"

    def pdf(self, x):
        raise NotImplementedError

    def cdf(self, x):
        raise NotImplementedError

    def sf(self, x):
        return 1.0 - self.cdf(x)

    def mass(self, lo, hi):
        """Probability of ``[lo, hi)``, differenced on whichever side keeps precision."""
        lo = np.asarray(lo, dtype=float)
        hi = np.asarray(hi, dtype=float)
        c_lo = self.cdf(lo)
        left = c_lo < 0.5
        from_cdf = self.cdf(hi) - c_lo
        from_sf = self.sf(lo) - self.sf(hi)
        return np.where(left, from_cdf, from_sf)

    def ppf(self, q):
        raise NotImplementedError(f"{self.family} has no closed-form quantile")

    def scaled(self, a):
        return Scaled(self, a)

    def median(self):
        try:
            return float(self.ppf(0.5))
        except NotImplementedError:
            return _bisect_quantile(self, 0.5)


def _bisect_quantile(dist, q):
    lo, hi = -700.0, 700.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if dist.cdf(math.exp(mid)) < q:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-12:
            break
    return math.exp(0.5 * (lo + hi))


class Exponential(Distribution):
    family = "exponential"
    completely_monotone = True

    def __init__(self, rate=1.0):
        self.rate = _positive("rate", rate)

    @property
    def params(self):
        return {"rate": self.rate}

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        return np.where(x >= 0, self.rate * np.exp(-self.rate * np.maximum(x, 0.0)), 0.0)

    def cdf(self, x):
        return -np.expm1(-self.rate * np.maximum(np.asarray(x, dtype=float), 0.0))

    def sf(self, x):
        return np.exp(-self.rate * np.maximum(np.asarray(x, dtype=float), 0.0))

    def mass(self, lo, hi):
        lo = np.maximum(np.asarray(lo, dtype=float), 0.0)
        hi = np.asarray(hi, dtype=float)
        return np.exp(-self.rate * lo) * -np.expm1(-self.rate * (hi - lo))

    def ppf(self, q):
        return -np.log1p(-np.asarray(q, dtype=float)) / self.rate

    def scaled(self, a):
        return Exponential(self.rate / _positive("scale", a))


class LogNormal(Distribution):
    family = "lognormal"

    def __init__(self, mu=0.0, sigma=1.0):
        if not math.isfinite(mu):
            raise DomainError(f"mu must be finite, got {mu!r}")
        self.mu = float(mu)
        self.sigma = _positive("sigma", sigma)

    @property
    def params(self):
        return {"mu": self.mu, "sigma": self.sigma}

    def _z(self, x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore"):
            return (np.log(x) - self.mu) / self.sigma

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        z = self._z(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.exp(-0.5 * z * z) / (x * self.sigma * math.sqrt(2 * math.pi))
        return np.where(x > 0, out, 0.0)

    def cdf(self, x):
        return special.ndtr(self._z(x))

    def sf(self, x):
        return special.ndtr(-self._z(x))

    def ppf(self, q):
        return np.exp(self.mu + self.sigma * special.ndtri(np.asarray(q, dtype=float)))

    def scaled(self, a):
        return LogNormal(self.mu + math.log(_positive("scale", a)), self.sigma)


class UniformFromOne(Distribution):
    """Uniform density on ``[1, upper]``."""

    family = "uniform"

    def __init__(self, upper=10.0):
        upper = _positive("upper", upper)
        if not upper > 1:
            raise DomainError(f"upper > 1 required, got {upper}")
        self.upper = upper
        self.support = (1.0, upper)

    @property
    def params(self):
        return {"upper": self.upper}

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        return np.where((x >= 1.0) & (x <= self.upper), 1.0 / (self.upper - 1.0), 0.0)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        return np.clip((x - 1.0) / (self.upper - 1.0), 0.0, 1.0)

    def sf(self, x):
        x = np.asarray(x, dtype=float)
        return np.clip((self.upper - x) / (self.upper - 1.0), 0.0, 1.0)

    def ppf(self, q):
        return 1.0 + (self.upper - 1.0) * np.asarray(q, dtype=float)


class Normal(Distribution):
    """Normal variate viewed through its absolute value (a folded normal on x > 0)."""

    family = "normal"

    def __init__(self, mean=0.0, sd=1.0):
        if not math.isfinite(mean):
            raise DomainError(f"mean must be finite, got {mean!r}")
        self.mean = float(mean)
        self.sd = _positive("sd", sd)

    @property
    def params(self):
        return {"mean": self.mean, "sd": self.sd}

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        c = 1.0 / (self.sd * math.sqrt(2 * math.pi))
        zp = (x - self.mean) / self.sd
        zm = (x + self.mean) / self.sd
        return np.where(x >= 0, c * (np.exp(-0.5 * zp * zp) + np.exp(-0.5 * zm * zm)), 0.0)

    def cdf(self, x):
        x = np.maximum(np.asarray(x, dtype=float), 0.0)
        return special.ndtr((x - self.mean) / self.sd) - special.ndtr((-x - self.mean) / self.sd)

    def sf(self, x):
        x = np.maximum(np.asarray(x, dtype=float), 0.0)
        return special.ndtr((self.mean - x) / self.sd) + special.ndtr((-x - self.mean) / self.sd)

    def scaled(self, a):
        a = _positive("scale", a)
        return Normal(self.mean * a, self.sd * a)


class LogUniform(Distribution):
    """Density ``1 / (x m ln b)`` on ``[1, b^m)``: uniform in ``log_b x`` over ``m`` decades."""

    family = "loguniform"

    def __init__(self, decades=1, base=10):
        if isinstance(decades, bool) or int(decades) != decades or decades < 1:
            raise DomainError(f"decades must be a positive integer, got {decades!r}")
        if isinstance(base, bool) or int(base) != base or base < 2:
            raise DomainError(f"base must be an integer >= 2, got {base!r}")
        self.decades = int(decades)
        self.base = int(base)
        self.support = (1.0, float(self.base) ** self.decades)

    @property
    def params(self):
        return {"decades": self.decades, "base": self.base}

    def _log_b(self, x):
        with np.errstate(divide="ignore"):
            return np.log(np.asarray(x, dtype=float)) / math.log(self.base)

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        inside = (x >= 1.0) & (x < self.support[1])
        with np.errstate(divide="ignore"):
            return np.where(inside, 1.0 / (x * self.decades * math.log(self.base)), 0.0)

    def cdf(self, x):
        return np.clip(self._log_b(x) / self.decades, 0.0, 1.0)

    def sf(self, x):
        return np.clip(1.0 - self._log_b(x) / self.decades, 0.0, 1.0)

    def mass(self, lo, hi):
        a = np.clip(self._log_b(lo), 0.0, self.decades)
        b = np.clip(self._log_b(hi), 0.0, self.decades)
        return (b - a) / self.decades

    def ppf(self, q):
        return float(self.base) ** (self.decades * np.asarray(q, dtype=float))


class Scaled(Distribution):
    """Law of ``a X`` for ``X`` drawn from ``base``: density ``F(x / a) / a``."""

    def __init__(self, base, a):
        a = _positive("scale", a)
        if isinstance(base, Scaled):
            a *= base.a
            base = base.base
        self.base = base
        self.a = a
        self.family = f"scaled-{base.family}"
        self.completely_monotone = base.completely_monotone
        lo, hi = base.support
        self.support = (lo * a, hi * a)

    @property
    def params(self):
        return {"scale": self.a, **self.base.params}

    @property
    def normalized(self):
        return self.base.normalized

    def pdf(self, x):
        return self.base.pdf(np.asarray(x, dtype=float) / self.a) / self.a

    def cdf(self, x):
        return self.base.cdf(np.asarray(x, dtype=float) / self.a)

    def sf(self, x):
        return self.base.sf(np.asarray(x, dtype=float) / self.a)

    def mass(self, lo, hi):
        return self.base.mass(np.asarray(lo, dtype=float) / self.a, np.asarray(hi, dtype=float) / self.a)

    def ppf(self, q):
        return self.a * self.base.ppf(q)

    def median(self):
        return self.a * self.base.median()


class QuadratureDensity(Distribution):
    """Density known only pointwise; masses come from adaptive quadrature in ``ln x``.

    At construction the integrand ``g(u) = F(e^u) e^u`` is integrated over
    unit cells covering the bulk of the mass plus two semi-infinite tails,
    giving the normalizing constant and a cumulative table. ``cdf`` and
    ``sf`` add one partial-cell integral to the table.
    """

    family = "quadrature"

    def __init__(self, func, normalize=True, label="quadrature"):
        self._func = func
        self.family = label
        self._build_table()
        total = self._total
        if not (math.isfinite(total) and total > 0):
            raise DomainError(
                "density does not integrate to a finite positive value; "
                "normalization needs int_0^inf F(x) dx < inf"
            )
        self.raw_integral = total
        self.normalization = 1.0 / total if normalize else 1.0

    @property
    def normalized(self):
        return abs(self.raw_integral * self.normalization - 1.0) <= NORMALIZATION_TOL

    def _g(self, u):
        u = np.asarray(u, dtype=float)
        x = np.exp(u)
        with np.errstate(over="ignore", invalid="ignore", under="ignore", divide="ignore"):
            val = self._func(x) * x
        # e^u under/overflowed; the tail check already showed g decays there
        return np.where((x > 0) & np.isfinite(x), val, 0.0)

    def _locate_bulk(self):
        u = np.arange(-700.0, 701.0)
        g = self._g(u)
        finite = np.isfinite(g)
        if not finite.any():
            raise DomainError("density is not finite anywhere on the scan grid")
        return float(u[finite][np.argmax(g[finite])])

    def _check_tails(self, centre):
        # a tail converges only if g decays; flat or growing ends mean divergence
        for sign in (-1.0, 1.0):
            far = centre + sign * 600.0
            far = max(min(far, 700.0), -700.0)
            u = np.array([far - sign * 20.0, far])
            g = self._g(u)
            if not np.all(np.isfinite(g)):
                raise DomainError("density is not finite near the edge of its support; divergent integral")
            if g[1] > 0 and g[1] >= g[0] * math.exp(-1e-4 * 20.0):
                side = "infinity" if sign > 0 else "zero"
                raise DomainError(
                    f"integral of the density diverges near {side}; "
                    "normalization needs int_0^inf F(x) dx < inf"
                )

    def _integrate(self, a, b):
        res = tanhsinh(self._g, a, b, rtol=_QUAD_RTOL, atol=_QUAD_ATOL)
        integral = np.asarray(res.integral, dtype=float)
        if np.any(res.status == -3) or not np.all(np.isfinite(integral)):
            raise DomainError("quadrature detected a divergent or non-finite integral")
        # iteration cap: the integrand's own round-off can sit above rtol on tiny cells
        capped = np.asarray(res.status) == -2
        if np.any(capped & (np.asarray(res.error) > 1e-9 * np.abs(integral) + 1e-15)):
            warnings.warn("quadrature stopped at its iteration cap short of tolerance", AccuracyWarning, stacklevel=3)
        return integral

    def _build_table(self):
        centre = self._locate_bulk()
        self._check_tails(centre)
        lo = max(centre - _CELL_SPAN, -700.0)
        hi = min(centre + _CELL_SPAN, 700.0)
        edges = np.arange(lo, hi + 0.5)
        a = np.concatenate([[-np.inf], edges])
        b = np.concatenate([edges, [np.inf]])
        pieces = self._integrate(a, b)
        self._edges = edges
        # prefix[k] = mass below edges[k]; suffix[k] = mass above edges[k]
        self._prefix = np.cumsum(pieces)[:-1]
        self._suffix = np.cumsum(pieces[::-1])[::-1][1:]
        self._total = float(np.sum(pieces))

    def _split(self, x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore"):
            u = np.log(np.maximum(x, 0.0))
        k = np.clip(np.searchsorted(self._edges, u, side="right") - 1, 0, len(self._edges) - 1)
        return u, k

    def _partial(self, a, b):
        a = np.atleast_1d(a)
        b = np.atleast_1d(b)
        out = np.zeros(np.broadcast(a, b).shape)
        a, b = np.broadcast_arrays(a, b)
        need = b > a
        if need.any():
            out[need] = self._integrate(a[need], b[need])
        return out

    def _raw_cdf(self, x):
        u, k = self._split(x)
        below = u < self._edges[0]
        start = np.where(below, -np.inf, self._edges[k])
        base = np.where(below, 0.0, self._prefix[k])
        shape = np.shape(u)
        part = self._partial(np.ravel(start), np.ravel(u)).reshape(shape)
        return np.where(np.isneginf(u), 0.0, base + part)

    def _raw_sf(self, x):
        u, k = self._split(x)
        above = u >= self._edges[-1]
        nxt = np.minimum(k + 1, len(self._edges) - 1)
        stop = np.where(above, np.inf, self._edges[nxt])
        base = np.where(above, 0.0, self._suffix[nxt])
        shape = np.shape(u)
        part = self._partial(np.ravel(u), np.ravel(stop)).reshape(shape)
        return np.where(np.isneginf(u), self._total, base + part)

    def _require_normalized(self):
        if not self.normalized:
            raise StateError(f"{self.describe()} is not normalized (integral {self.raw_integral * self.normalization:.12g})")

    def pdf(self, x):
        self._require_normalized()
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            val = np.where(x > 0, self._func(np.where(x > 0, x, 1.0)), 0.0)
        return self.normalization * val

    def cdf(self, x):
        self._require_normalized()
        return self.normalization * self._raw_cdf(x)

    def sf(self, x):
        self._require_normalized()
        return self.normalization * self._raw_sf(x)

    def mass(self, lo, hi):
        self._require_normalized()
        lo = np.maximum(np.asarray(lo, dtype=float), 0.0)
        hi = np.asarray(hi, dtype=float)
        with np.errstate(divide="ignore"):
            ua = np.log(lo)
            ub = np.log(hi)
        shape = np.broadcast(ua, ub).shape
        ua, ub = np.ravel(ua * np.ones(shape)), np.ravel(ub * np.ones(shape))
        # one quadrature per short interval; wide ones go through the cumulative table
        wide = ub - ua > _DIRECT_SPAN
        out = self.normalization * self._partial(ua, np.where(wide, ua, ub))
        if wide.any():
            out[wide] = super().mass(np.exp(ua[wide]), np.exp(ub[wide]))
        return out.reshape(shape)

    def envelope(self):
        """Cell edges in ``ln x`` and an upper envelope of ``g`` per cell, for rejection sampling."""
        edges = np.arange(self._edges[0] - 40.0, self._edges[-1] + 41.0)
        probe = edges[:-1, None] + np.linspace(0.0, 1.0, 65)[None, :]
        g = np.nan_to_num(self._g(probe), nan=0.0, posinf=0.0)
        return edges, 1.25 * g.max(axis=1) * self.normalization


class CompletelyMonotone(QuadratureDensity):
    """Normalized completely monotone density built from a certified expression."""

    completely_monotone = True

    def __init__(self, expr, normalize=True, form=None, form_params=None):
        self.expr = expr
        self.form = form
        self.form_params = dict(form_params or {})
        super().__init__(expr.evaluate, normalize=normalize, label="cm")
        self.completely_monotone = bool(getattr(expr, "certified", False))

    @property
    def params(self):
        if self.form is not None:
            return {"form": self.form, **self.form_params}
        return {"expr": self.expr.node}


class Tabulated(Distribution):
    """Piecewise-linear density through sorted knots, zero outside ``[x_0, x_n]``."""

    family = "tabulated"

    def __init__(self, x, density, normalize=True):
        x = np.asarray(x, dtype=float)
        f = np.asarray(density, dtype=float)
        if x.ndim != 1 or x.shape != f.shape or x.size < 2:
            raise DomainError("tabulated density needs two equal-length columns with at least two rows")
        if not np.all(np.isfinite(x)) or not np.all(np.isfinite(f)):
            raise DomainError("tabulated values must be finite")
        if x[0] <= 0 or np.any(np.diff(x) <= 0):
            raise DomainError("tabulated x must be positive and strictly increasing")
        if np.any(f < 0):
            raise DomainError("tabulated density must be nonnegative")
        widths = np.diff(x)
        cells = 0.5 * widths * (f[:-1] + f[1:])
        total = float(cells.sum())
        if not total > 0:
            raise DomainError("tabulated density has zero mass")
        self.x = x
        self.f = f
        self.raw_integral = total
        self.normalization = 1.0 / total if normalize else 1.0
        self._cum = np.concatenate([[0.0], np.cumsum(cells)])
        self.support = (float(x[0]), float(x[-1]))

    @property
    def params(self):
        return {"knots": int(self.x.size)}

    @property
    def normalized(self):
        return abs(self.raw_integral * self.normalization - 1.0) <= NORMALIZATION_TOL

    def _require_normalized(self):
        if not self.normalized:
            raise StateError(f"tabulated density integrates to {self.raw_integral * self.normalization:.12g}, not 1")

    def pdf(self, x):
        self._require_normalized()
        return self.normalization * np.interp(x, self.x, self.f, left=0.0, right=0.0)

    def _raw_cdf(self, x):
        x = np.asarray(x, dtype=float)
        xc = np.clip(x, self.x[0], self.x[-1])
        k = np.clip(np.searchsorted(self.x, xc, side="right") - 1, 0, self.x.size - 2)
        x0 = self.x[k]
        h = self.x[k + 1] - x0
        f0 = self.f[k]
        slope = (self.f[k + 1] - f0) / h
        t = xc - x0
        return self._cum[k] + f0 * t + 0.5 * slope * t * t

    def cdf(self, x):
        self._require_normalized()
        return self.normalization * self._raw_cdf(x)

    def sf(self, x):
        self._require_normalized()
        return self.normalization * (self.raw_integral - self._raw_cdf(x))

    def ppf(self, q):
        self._require_normalized()
        target = np.asarray(q, dtype=float) * self.raw_integral
        k = np.clip(np.searchsorted(self._cum, target, side="right") - 1, 0, self.x.size - 2)
        r = target - self._cum[k]
        f0 = self.f[k]
        h = self.x[k + 1] - self.x[k]
        slope = (self.f[k + 1] - f0) / h
        # solve f0 t + slope t^2 / 2 = r on the cell, stable for slope -> 0
        disc = np.sqrt(np.maximum(f0 * f0 + 2.0 * slope * r, 0.0))
        with np.errstate(divide="ignore", invalid="ignore"):
            t = np.where(f0 + disc > 0, 2.0 * r / (f0 + disc), 0.0)
        return self.x[k] + np.clip(t, 0.0, h)

    def scaled(self, a):
        a = _positive("scale", a)
        return Tabulated(self.x * a, self.f / a, normalize=True)


def load_tabulated(path):
    """Read a two-column ``x,density`` CSV; lines starting with ``#`` are comments."""
    xs, fs = [], []
    with open(path, newline="", encoding="utf-8") as fh:
        rows = csv.reader(line for line in fh if line.strip() and not line.lstrip().startswith("#"))
        for lineno, row in enumerate(rows, 1):
            if len(row) < 2:
                raise DomainError(f"{path}: row {lineno} has fewer than two columns")
            try:
                xs.append(float(row[0]))
                fs.append(float(row[1]))
            except ValueError:
                if lineno == 1 and not xs:
                    continue  # header row
                raise DomainError(f"{path}: row {lineno} is not numeric: {row!r}") from None
    return Tabulated(xs, fs)


def pdf_eval(pdf, x):
    """Density of ``pdf`` at ``x > 0``."""
    _check_x(x)
    if not pdf.normalized:
        raise StateError(f"{pdf.describe()} is not normalized")
    return float(pdf.pdf(x))


def cdf_eval(pdf, x):
    """Cumulative probability of ``pdf`` at ``x > 0``."""
    _check_x(x)
    if not pdf.normalized:
        raise StateError(f"{pdf.describe()} is not normalized")
    return float(pdf.cdf(x))


def _check_x(x):
    if not (math.isfinite(x) and x > 0):
        raise DomainError(f"x must be a finite positive number, got {x!r}")


def _decade_limits(pdf, base, tol):
    n_max = int(math.floor(math.log(np.finfo(float).max) / math.log(base))) - 1
    n_min = -int(math.floor(-math.log(np.finfo(float).tiny) / math.log(base))) + 1
    half = 0.5 * tol

    def cdf_at(n):
        return float(pdf.cdf(float(base) ** n))

    def sf_at(n):
        return float(pdf.sf(float(base) ** n))

    lo = 0
    if cdf_at(lo) >= half:
        while cdf_at(lo) >= half:
            lo -= 1
            if lo < n_min:
                raise StateError(f"{pdf.describe()}: mass near zero does not vanish; digit sum diverges")
    else:
        while lo + 1 <= n_max and cdf_at(lo + 1) < half:
            lo += 1
    hi = max(lo + 1, 0)
    if sf_at(hi) >= half:
        while sf_at(hi) >= half:
            hi += 1
            if hi > n_max:
                raise StateError(f"{pdf.describe()}: tail mass does not vanish; digit sum diverges")
    else:
        while hi - 1 > lo and sf_at(hi - 1) < half:
            hi -= 1
    return lo, hi


def digit_prob_oracle(pdf, spec, tol=1e-12):
    """Probability of the digit event by direct summation of interval masses.

    Decades are kept from ``n_lo`` to ``n_hi`` where the mass below
    ``b^n_lo`` and above ``b^n_hi`` are each under ``tol / 2``.
    """
    spec = _as_spec(spec)
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol!r}")
    if not pdf.normalized:
        raise StateError(f"{pdf.describe()} is not normalized")
    lo, hi = _decade_limits(pdf, spec.base, tol)
    n = np.arange(lo, hi)
    scale = float(spec.base) ** n
    masses = pdf.mass(spec.digit * scale, (spec.digit + spec.run) * scale)
    total = float(np.sum(masses))
    if not math.isfinite(total):
        raise StateError(f"{pdf.describe()}: non-finite interval mass in digit sum")
    return total


def scale_pdf(pdf, a):
    """Law of the data multiplied by ``a``: density ``F(x / a) / a``."""
    if not (math.isfinite(a) and a > 0):
        raise DomainError(f"scale factor must be a finite positive number, got {a!r}")
    return pdf.scaled(a)


def transform_pdf(pdf, transform):
    """Density of ``tau(X)``; only the shifted square of a normal variate is supported.

    For ``X ~ Normal(mu, sigma)`` the two preimages of ``y = (x - mu)^2``
    contribute equally, giving ``(2 pi sigma^2 y)^(-1/2) exp(-y / (2 sigma^2))``.
    """
    if transform != "shifted-square" or not isinstance(pdf, Normal):
        raise DomainError(f"unsupported transform {transform!r} for {pdf.describe()}")
    from .cm import cm_catalog

    return cm_catalog("power-exp", a=1.0 / (2.0 * pdf.sd**2), alpha=1.0, nu=0.5)


@dataclass(frozen=True)
class Sample:
    values: np.ndarray
    method: str

    def __len__(self):
        return self.values.size


def sample(pdf, n, seed=0):
    """Draw ``n`` variates, by inverse CDF when available, else by rejection in ``ln x``."""
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    n = int(n)
    rng = np.random.default_rng(seed)
    target = pdf.base if isinstance(pdf, Scaled) else pdf
    factor = pdf.a if isinstance(pdf, Scaled) else 1.0
    if isinstance(target, Normal):
        z = special.ndtri(rng.random(n))
        return Sample(factor * np.abs(target.mean + target.sd * z), "inverse-cdf")
    if isinstance(target, QuadratureDensity):
        return Sample(factor * _rejection(target, n, rng), "rejection")
    return Sample(factor * target.ppf(rng.random(n)), "inverse-cdf")


def _rejection(dist, n, rng):
    edges, heights = dist.envelope()
    weights = heights / heights.sum()
    out = np.empty(0)
    while out.size < n:
        m = 2 * (n - out.size) + 64
        cell = rng.choice(heights.size, size=m, p=weights)
        u = edges[cell] + rng.random(m)
        accept = rng.random(m) * heights[cell] <= dist.normalization * np.nan_to_num(dist._g(u), nan=0.0)
        out = np.concatenate([out, np.exp(u[accept])])
    return out[:n]
