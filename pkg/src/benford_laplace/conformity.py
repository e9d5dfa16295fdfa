"""Empirical digit conformity and distribution classification.

Records are ingested in chunks and reduced to a digit histogram, so a file
of any length is read once with bounded memory. The report compares the
histogram against the Benford expectations with two statistics: the largest
absolute frequency deviation and Pearson's chi-square. Neither comes with a
verdict threshold; they are evidence for the user to weigh.
"""

import csv
import itertools
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .digits import DigitSpec, benford_term
from .errors import AccuracyWarning, DomainError, NumericError

CHUNK_SIZE = 1 << 16
SMALL_L1 = 3.0
OSCILLATING_L1 = 10.0

TAGS = ("scale-invariant", "small-l1", "completely-monotonic", "violently-oscillating", "unknown")


def _check_base(base):
    if isinstance(base, bool) or int(base) != base or base < 2:
        raise DomainError(f"base >= 2 violated: base={base!r}")
    return int(base)


def extract_first_digit(x, base=10):
    """Leading base-``base`` digit of ``|x|``; ``None`` for zero or non-finite input."""
    base = _check_base(base)
    digit = int(kernels.significant_digits(np.array([x], dtype=float), base, 1)[0])
    return None if digit < 0 else digit


def extract_second_digit(x, base=10):
    base = _check_base(base)
    digit = int(kernels.significant_digits(np.array([x], dtype=float), base, 2)[0])
    return None if digit < 0 else digit


def expected_frequencies(base=10, second_digit=False):
    """Benford probabilities indexed by digit value.

    First digits occupy indices ``1..b-1`` (index 0 is zero). The second
    digit law sums the two-digit probabilities over every leading digit.
    """
    base = _check_base(base)
    if not second_digit:
        return np.array([0.0] + [benford_term(DigitSpec(base, d, 1)) for d in range(1, base)])
    log_b = math.log(base)
    return np.array([
        math.fsum(math.log1p(1.0 / (k * base + d)) for k in range(1, base)) / log_b
        for d in range(base)
    ])


@dataclass(frozen=True)
class ConformityReport:
    base: int
    position: int
    counts: np.ndarray
    frequencies: np.ndarray
    expected: np.ndarray
    max_abs_deviation: float
    chi_square: float
    sample_size: int
    skipped: int
    classification: str | None = None

    @property
    def digits(self):
        return np.arange(self.counts.size) if self.position == 2 else np.arange(1, self.counts.size)

    def rows(self):
        """``(digit, count, frequency, expected)`` for every possible digit."""
        for d in self.digits:
            yield int(d), int(self.counts[d]), float(self.frequencies[d]), float(self.expected[d])

    def to_dict(self):
        return {
            "base": self.base,
            "position": self.position,
            "digits": [int(d) for d in self.digits],
            "counts": [int(self.counts[d]) for d in self.digits],
            "frequencies": [float(self.frequencies[d]) for d in self.digits],
            "expected": [float(self.expected[d]) for d in self.digits],
            "max_abs_deviation": self.max_abs_deviation,
            "chi_square": self.chi_square,
            "sample_size": self.sample_size,
            "skipped": self.skipped,
            "classification": self.classification,
        }


def _chunks(records, size):
    if isinstance(records, np.ndarray):
        flat = records.ravel()
        for i in range(0, flat.size, size):
            yield flat[i:i + size].astype(float, copy=False)
        return
    it = iter(records)
    while True:
        block = list(itertools.islice(it, size))
        if not block:
            return
        yield np.asarray(block, dtype=float)


def analyze(records, base=10, second_digit=False, classification=None, chunk_size=CHUNK_SIZE):
    """Digit conformity report for a stream of numbers.

    Zeros and non-finite values are counted as skipped. Negative values
    contribute their absolute value.
    """
    base = _check_base(base)
    position = 2 if second_digit else 1
    counts = np.zeros(base, dtype=np.int64)
    skipped = 0
    for block in _chunks(records, chunk_size):
        c, s = kernels.digit_histogram(np.ascontiguousarray(block), base, position)
        counts += np.asarray(c, dtype=np.int64)
        skipped += int(s)
    n = int(counts.sum())
    if n == 0:
        raise DomainError(f"no usable records: all {skipped} were zero or non-finite")
    expected = expected_frequencies(base, second_digit)
    frequencies = counts / n
    support = slice(0, base) if second_digit else slice(1, base)
    dev = np.abs(frequencies[support] - expected[support])
    want = n * expected[support]
    chi2 = float(np.sum((counts[support] - want) ** 2 / want))
    return ConformityReport(base, position, counts, frequencies, expected, float(dev.max()), chi2,
                            n, skipped, classification)


def _parse(token, lineno):
    try:
        return float(token)
    except ValueError:
        raise DomainError(f"line {lineno}: cannot parse {token.strip()!r} as a number") from None


def iter_records(path, column=None):
    """Numbers from a text file.

    Without ``column`` the file holds one number per line. With ``column``
    (0-based index or header name) it is read as CSV. Blank lines and lines
    starting with ``#`` are ignored.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        lines = ((i, ln) for i, ln in enumerate(fh, 1) if ln.strip() and not ln.lstrip().startswith("#"))
        if column is None:
            for lineno, line in lines:
                yield _parse(line, lineno)
            return
        numbered = list(itertools.islice(lines, 1))
        if not numbered:
            return
        first_no, first = numbered[0]
        rest = itertools.chain(numbered, lines)
        reader = csv.reader(ln for _, ln in rest)
        header = next(reader)
        if isinstance(column, str) and not column.lstrip("-").isdigit():
            if column not in header:
                raise DomainError(f"column {column!r} not in header {header}")
            index = header.index(column)
        else:
            index = int(column)
            if index >= len(header):
                raise DomainError(f"column {index} out of range for {len(header)} fields")
            yield _parse(header[index], first_no)
        for offset, row in enumerate(reader, 1):
            if index >= len(row):
                raise DomainError(f"record {offset + 1}: missing column {index}")
            yield _parse(row[index], first_no + offset)


def check_file(path, base=10, second_digit=False, column=None):
    return analyze(iter_records(path, column), base, second_digit)


@dataclass(frozen=True)
class Classification:
    tag: str
    evidence: dict = field(default_factory=dict)

    def __str__(self):
        return self.tag


def classify(pdf, spec=None):
    """Place a density in one of the four error-term categories.

    Scale-invariant and completely monotone densities are recognised
    structurally. Anything else is judged by the L1 norm of its inverse
    Laplace profile against the cutoffs 3 and 10.
    """
    from .laplace import _is_log_uniform, total_error

    spec = spec or DigitSpec()
    if _is_log_uniform(pdf):
        return Classification("scale-invariant", {"reason": "log-uniform over whole decades"})
    if getattr(pdf, "completely_monotone", False):
        return Classification("completely-monotonic", {"reason": "certified completely monotone"})
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", AccuracyWarning)
            term = total_error(pdf, spec)
    except NumericError as exc:
        return Classification("violently-oscillating", {"reason": f"inversion failed: {exc}"})
    evidence = {"l1": term.l1, "error_term": term.value, "refinement_gap": term.refinement_gap}
    if term.unstable or term.l1 > OSCILLATING_L1:
        evidence["reason"] = term.reason or f"L1 norm exceeds {OSCILLATING_L1:g}"
        return Classification("violently-oscillating", evidence)
    if term.l1 <= SMALL_L1:
        return Classification("small-l1", evidence)
    return Classification("unknown", evidence)
