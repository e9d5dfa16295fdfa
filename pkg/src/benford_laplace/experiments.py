"""Reproduction sweeps: the per-digit fluctuation table and two parameter scans.

Each experiment is a function of a flat config (defaults below, overridable
from a ``key = value`` file) and returns a header plus rows. Grid points are
independent, so scans can be spread over worker processes; results come back
in grid order, which keeps parallel output byte-identical to serial output.
"""

import csv
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .digits import DigitSpec, benford_term, delta_extrema
from .distributions import LogNormal, UniformFromOne, digit_prob_oracle
from .errors import DomainError

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

DEFAULTS = {
    "table1": {"base": 10, "grid_points": 4096},
    "fig6": {"base": 10, "digit": 1, "mu": math.log(5.0), "start": 0.01, "stop": 1.5, "step": 0.01},
    "fig8": {"base": 10, "digit": 1, "start": 1.1, "stop": 50.0, "step": 0.1},
}


@dataclass(frozen=True)
class Dataset:
    name: str
    header: tuple
    rows: list

    def column(self, name):
        i = self.header.index(name)
        return np.array([r[i] for r in self.rows])

    def to_csv(self, path_or_file):
        if hasattr(path_or_file, "write"):
            self._write(path_or_file)
        else:
            with open(path_or_file, "w", newline="", encoding="utf-8") as fh:
                self._write(fh)

    def _write(self, fh):
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(self.header)
        for row in self.rows:
            w.writerow([v if isinstance(v, int) else repr(float(v)) for v in row])


def load_config(path):
    """Read a flat ``key = value`` file; nested tables are rejected."""
    with open(path, "rb") as fh:
        try:
            data = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise DomainError(f"{path}: {exc}") from None
    nested = [k for k, v in data.items() if isinstance(v, dict)]
    if nested:
        raise DomainError(f"{path}: expected flat key = value pairs, found tables {nested}")
    return data


def resolve_config(name, config=None):
    if name not in DEFAULTS:
        raise DomainError(f"unknown experiment {name!r}; choose from {sorted(DEFAULTS)}")
    merged = dict(DEFAULTS[name])
    for key, value in (config or {}).items():
        if key not in merged:
            raise DomainError(f"{name}: unknown config key {key!r}; known keys {sorted(merged)}")
        merged[key] = type(merged[key])(value) if isinstance(merged[key], int) else float(value)
    return merged


def _grid(start, stop, step):
    """Points ``start, start + step, ...`` up to ``stop`` inclusive, free of drift."""
    if not step > 0 or stop < start:
        raise DomainError(f"bad grid start={start}, stop={stop}, step={step}")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + k * step, 12) for k in range(count)]


def _table1_row(args):
    base, digit, grid_points = args
    spec = DigitSpec(base, digit, 1)
    term = benford_term(spec)
    lo, hi = delta_extrema(spec, grid_points)
    dmax = max(-lo, hi)
    return digit, term, dmax, dmax / term


def _fig6_point(args):
    sigma, mu, spec = args
    return sigma, digit_prob_oracle(LogNormal(mu, sigma), spec), benford_term(spec)


def _fig8_point(args):
    a, spec = args
    return a, digit_prob_oracle(UniformFromOne(a), spec), benford_term(spec)


def _map(func, tasks, jobs):
    if jobs is None or jobs <= 1 or len(tasks) < 2:
        return [func(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(func, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))


def run_experiment(name, config=None, jobs=None):
    """Run ``table1``, ``fig6`` or ``fig8`` and return its dataset.

    Probabilities are fractions, not percentages.
    """
    cfg = resolve_config(name, config)
    if name == "table1":
        tasks = [(cfg["base"], d, cfg["grid_points"]) for d in range(1, cfg["base"])]
        rows = _map(_table1_row, tasks, jobs)
        return Dataset(name, ("digit", "benford_term", "delta_max", "relative_error"), rows)
    spec = DigitSpec(cfg["base"], cfg["digit"], 1)
    grid = _grid(cfg["start"], cfg["stop"], cfg["step"])
    if name == "fig6":
        rows = _map(_fig6_point, [(x, cfg["mu"], spec) for x in grid], jobs)
        return Dataset(name, ("sigma", "probability", "benford_term"), rows)
    if grid[0] <= 1.0:
        raise DomainError(f"fig8 needs a > 1, got start={grid[0]}")
    rows = _map(_fig8_point, [(x, spec) for x in grid], jobs)
    return Dataset(name, ("a", "probability", "benford_term"), rows)
