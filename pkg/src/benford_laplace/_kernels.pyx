# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops: log-spectrum series and significand digit extraction."""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp, expm1, log, floor, ceil, pow, fabs, isfinite

cnp.import_array()

from ._kernels_py import NEAR as _NEAR, settle

cdef double NEAR = _NEAR

BACKEND = "cython"


DEF MAX_ORDER = 40
cdef double TAIL_SPLIT = 1.0


cdef int _tail_coefficients(double b, double d, double l, double tol, double* coef):
    cdef double bound = 2.0 * b / (b - 1.0), term = TAIL_SPLIT, fact = 1.0, c
    cdef int j, order = 1
    while bound * term * TAIL_SPLIT / (order + 1) > tol and order < MAX_ORDER:
        order += 1
        term *= TAIL_SPLIT / order
    for j in range(1, order + 1):
        fact *= j
        c = (pow(d + l, j) - pow(d, j)) / fact
        coef[j - 1] = (c if j % 2 else -c) / -expm1(-j * log(b))
    return order


cdef inline double _ipow(double q, long n) nogil:
    # same multiplication order as the NumPy fallback
    cdef double result = 1.0
    cdef bint first = True
    while n:
        if n & 1:
            if first:
                result = q
                first = False
            else:
                result = result * q
        n >>= 1
        if n:
            q = q * q
    return result


cdef inline double _htilde_one(double s, double b, double d, double l, double log_b, double inv_log_b,
                               double log_hi, double log_tail, double* coef, int order) nogil:
    cdef long n_hi = <long>ceil((log_hi - s) * inv_log_b)
    cdef long n_tail = <long>floor((log_tail - s) * inv_log_b)
    cdef double u = exp(n_tail * log_b + s)
    cdef double q, qd
    cdef long di = <long>d, li = <long>l
    cdef double total = 0.0
    cdef long n
    cdef int j
    cdef double u2 = u * u, even = 0.0, odd = 0.0
    # even and odd parts in u^2: two independent Horner chains
    for j in range((order - 1) // 2 * 2, -1, -2):
        even = even * u2 + coef[j]
    for j in range((order - 2) // 2 * 2 + 1, 0, -2):
        odd = odd * u2 + coef[j]
    total = u * (even + u * odd)
    for n in range(n_tail + 1, n_hi + 1):
        u = u * b
        # (d + l) u > 1 here, so 1 - q^l is far from cancellation
        q = exp(-u)
        qd = _ipow(q, di)
        total += qd - qd * _ipow(q, li)
    return total


def htilde(double[::1] s, int base, int digit, int run, double tol):
    """Log-spectrum series at every entry of ``s``; small terms summed as one geometric tail."""
    cdef Py_ssize_t i, m = s.shape[0]
    cdef double b = base, d = digit, l = run
    cdef double log_b = log(b)
    cdef double log_hi = log(40.0 / d), log_tail = log(TAIL_SPLIT / (d + l))
    cdef double coef[MAX_ORDER]
    cdef int order = _tail_coefficients(b, d, l, tol, coef)
    out = np.empty(m, dtype=np.float64)
    cdef double[::1] res = out
    with nogil:
        for i in range(m):
            res[i] = _htilde_one(s[i], b, d, l, log_b, 1.0 / log_b, log_hi, log_tail, coef, order)
    return out


def _power_table(double b):
    """``b^-k`` for every half exponent a finite double can need, and the smallest ``k``."""
    cdef double span = 1100.0 * log(2.0) / log(b) + 2.0
    cdef long k_min = -<long>(span / 2.0) - 1
    cdef long k_max = <long>(span / 2.0) + 2
    return np.power(b, -np.arange(k_min, k_max + 1, dtype=np.float64)), k_min


cdef inline double _significand(double ax, double b, double log_b, const double* pw, long* exponent) nogil:
    # pw points at the entry for k = 0
    cdef long e = <long>floor(log(ax) / log_b)
    cdef long half = e // 2 if e >= 0 else -((1 - e) // 2)
    cdef double sig = (ax * pw[half]) * pw[e - half]
    if sig >= b:
        sig /= b
        e += 1
    elif sig < 1.0:
        sig *= b
        e -= 1
    exponent[0] = e
    return sig


cdef inline long _digit(double ax, int base, int position, double log_b, const double* pw) nogil:
    cdef long e, m, lo = base if position > 1 else 1
    cdef double scaled = _significand(ax, base, log_b, pw, &e) * lo, frac
    m = <long>floor(scaled)
    frac = scaled - m
    if frac < NEAR * scaled or 1.0 - frac < NEAR * scaled:
        with gil:
            m = settle(ax, scaled, e - position + 1, base)
    # a settled prefix can step into the neighbouring decade
    if m >= lo * base:
        m = lo
    elif m < lo:
        m = lo * base - 1
    return m % base


def significant_digits(double[::1] x, int base, int position):
    """Digit at ``position`` (1 or 2) of ``|x|`` in ``base``; -1 marks a skip."""
    cdef Py_ssize_t i, m = x.shape[0]
    cdef double log_b = log(base), ax
    table, k_min = _power_table(base)
    cdef double[::1] tab = table
    cdef const double* pw = &tab[0] - <long>k_min
    out = np.empty(m, dtype=np.int64)
    cdef cnp.int64_t[::1] res = out
    with nogil:
        for i in range(m):
            ax = fabs(x[i])
            if ax == 0.0 or not isfinite(ax):
                res[i] = -1
            else:
                res[i] = _digit(ax, base, position, log_b, pw)
    return out


def digit_histogram(double[::1] x, int base, int position):
    """Counts per digit value (length ``base``) and the number of skipped entries."""
    cdef Py_ssize_t i, m = x.shape[0]
    cdef double log_b = log(base), ax
    cdef long skipped = 0
    table, k_min = _power_table(base)
    cdef double[::1] tab = table
    cdef const double* pw = &tab[0] - <long>k_min
    counts = np.zeros(base, dtype=np.int64)
    cdef cnp.int64_t[::1] c = counts
    with nogil:
        for i in range(m):
            ax = fabs(x[i])
            if ax == 0.0 or not isfinite(ax):
                skipped += 1
            else:
                c[_digit(ax, base, position, log_b, pw)] += 1
    return counts, skipped
