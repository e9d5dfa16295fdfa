"""NumPy implementations of the compiled kernels, used when the extension is absent."""

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np

BACKEND = "python"


# terms with (d + l) u below this are summed as one geometric tail
TAIL_SPLIT = 1.0


def tail_order(base, tol):
    """Power-series order whose remainder on the geometric tail is below ``tol``."""
    bound = 2.0 * base / (base - 1.0)
    j, term = 1, TAIL_SPLIT
    while bound * term * TAIL_SPLIT / (j + 1) > tol and j < 40:
        j += 1
        term *= TAIL_SPLIT / j
    return j


def tail_coefficients(base, digit, run, tol):
    """``c_j / (1 - b^-j)`` where ``e^{-du} - e^{-(d+l)u} = sum_j c_j u^j``."""
    out = []
    fact = 1.0
    for j in range(1, tail_order(base, tol) + 1):
        fact *= j
        c = ((digit + run) ** j - digit**j) / fact
        out.append((c if j % 2 else -c) / -np.expm1(-j * np.log(base)))
    return np.array(out)


def _ipow(q, n):
    """``q**n`` for a positive integer ``n`` by repeated squaring."""
    result = None
    while n:
        if n & 1:
            result = q if result is None else result * q
        n >>= 1
        if n:
            q = q * q
    return result


def htilde(s, base, digit, run, tol):
    s = np.ascontiguousarray(s, dtype=np.float64)
    log_b = np.log(base)
    coef = tail_coefficients(base, digit, run, tol)
    inv_log_b = 1.0 / log_b
    n_hi = np.ceil((np.log(40.0 / digit) - s) * inv_log_b).astype(np.int64)
    n_tail = np.floor((np.log(TAIL_SPLIT / (digit + run)) - s) * inv_log_b).astype(np.int64)
    # every u = b^n e^s with n <= n_tail is u_tail b^-k, so their sum is a power series in u_tail
    u_tail = np.exp(n_tail * log_b + s)
    # the series u (c_1 + c_2 u + ...) as even and odd parts in u^2, two short Horner chains
    u2 = u_tail * u_tail
    even = np.zeros_like(s)
    odd = np.zeros_like(s)
    for c in coef[0::2][::-1]:
        even = even * u2 + c
    for c in coef[1::2][::-1]:
        odd = odd * u2 + c
    out = u_tail * (even + u_tail * odd)
    width = int((n_hi - n_tail).max(initial=0))
    u = u_tail
    for k in range(1, width + 1):
        u = u * base
        # (d + l) u > 1 here, so 1 - q^l is far from cancellation
        q = np.exp(-u)
        qd = _ipow(q, digit)
        out += np.where(n_tail + k <= n_hi, qd - qd * _ipow(q, run), 0.0)
    return out


def _significand(ax, base):
    log_b = np.log(base)
    e = np.floor(np.log(ax) / log_b)
    half = np.floor(e / 2.0)
    sig = (ax * np.power(float(base), -half)) * np.power(float(base), -(e - half))
    up, down = sig >= base, sig < 1.0
    sig = np.where(up, sig / base, np.where(down, sig * base, sig))
    return sig, e + up - down


# significands this close to an integer are settled in exact arithmetic
NEAR = 1e-12


@lru_cache(maxsize=4096)
def boundary(m, k, base):
    """``m * base^k`` rounded to the nearest double."""
    try:
        return float(Fraction(m) * Fraction(base) ** k)
    except OverflowError:
        return math.inf


def settle(x, scaled, exponent, base):
    """Leading integer ``m`` with ``boundary(m, exponent) <= x < boundary(m + 1, exponent)``.

    ``scaled`` is the float estimate of ``x / base^exponent``, good to a few ulps.
    """
    m = math.floor(scaled)
    if scaled - m < NEAR * scaled:
        return m if x >= boundary(m, exponent, base) else m - 1
    if m + 1 - scaled < NEAR * scaled:
        return m + 1 if x >= boundary(m + 1, exponent, base) else m
    return m


def significant_digits(x, base, position):
    ax = np.abs(np.ascontiguousarray(x, dtype=np.float64))
    ok = np.isfinite(ax) & (ax != 0.0)
    out = np.full(ax.shape, -1, dtype=np.int64)
    vals = ax[ok]
    sig, e = _significand(vals, base)
    lo, hi = base ** (position - 1), base**position
    scaled = sig * lo if position > 1 else sig
    m = np.floor(scaled)
    frac = scaled - m
    near = np.nonzero((frac < NEAR * scaled) | (1.0 - frac < NEAR * scaled))[0]
    m = m.astype(np.int64)
    for i in near:
        m[i] = settle(float(vals[i]), float(scaled[i]), int(e[i]) - position + 1, base)
    # a settled prefix can step into the neighbouring decade
    m = np.where(m >= hi, lo, np.where(m < lo, hi - 1, m))
    out[ok] = m % base
    return out


def digit_histogram(x, base, position):
    digits = significant_digits(x, base, position)
    kept = digits[digits >= 0]
    return np.bincount(kept, minlength=base).astype(np.int64), int(digits.size - kept.size)
