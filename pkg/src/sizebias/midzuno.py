"""Unequal-probability sampling that makes the ratio estimator unbiased.

Draw the first unit with probability proportional to its x value, then
fill the sample by simple random sampling from the rest.  Under that
design the subset ratio sum(y)/sum(x) has expectation exactly the
population ratio, with a closed-form law over subsets that a full
enumeration can verify.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from .errors import (
    BadSampleSize,
    BadSubsetSize,
    TooLargeToEnumerate,
    ZeroDenominator,
)

ENUM_CAP = 20


@dataclass(frozen=True)
class Population:
    """Paired unit values: xs nonnegative with positive total, ys free."""

    xs: np.ndarray
    ys: np.ndarray

    def __post_init__(self):
        xs = np.asarray(self.xs, dtype=float)
        ys = np.asarray(self.ys, dtype=float)
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)
        if xs.ndim != 1 or xs.shape != ys.shape:
            raise ValueError("xs and ys must be equal-length vectors")
        if xs.size < 2:
            raise ValueError("population needs at least 2 units")
        if np.any(xs < 0):
            raise ValueError(f"negative x value {xs.min()}")
        if xs.sum() <= 0:
            raise ValueError("x values must not all be zero")

    @property
    def n(self) -> int:
        return self.xs.size


def load_population_csv(path) -> Population:
    """Read a population from CSV with header ``x,y``, one unit per row.

    Malformed rows raise; a silently skipped unit would corrupt every
    probability downstream.
    """
    xs, ys = [], []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["x", "y"]:
            raise ValueError(f"expected header 'x,y', got {header}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise ValueError(f"line {lineno}: expected 2 fields, got {len(row)}")
            try:
                xs.append(float(row[0]))
                ys.append(float(row[1]))
            except ValueError as exc:
                raise ValueError(f"line {lineno}: {exc}") from None
    return Population(np.array(xs), np.array(ys))


def midzuno_sample(p: Population, m: int, rng) -> tuple:
    """Sorted index tuple: one size-biased draw, then an SRS of m-1."""
    if not 1 <= m <= p.n:
        raise BadSampleSize(f"sample size {m} outside 1..{p.n}")
    first = int(rng.choice(p.n, p=p.xs / p.xs.sum()))
    rest = np.delete(np.arange(p.n), first)
    tail = rng.choice(rest, size=m - 1, replace=False) if m > 1 else np.array([], dtype=int)
    return tuple(sorted([first, *tail.tolist()]))


def ratio_estimate(p: Population, r) -> float:
    """Subset ratio sum(y)/sum(x) over the sampled indices."""
    idx = list(r)
    sx = float(p.xs[idx].sum())
    if sx <= 0:
        raise ZeroDenominator("sampled x values sum to zero")
    return float(p.ys[idx].sum()) / sx


def subset_probability(p: Population, r, m: int) -> float:
    """P(sample = r): one over C(n,m), tilted by the subset x mean."""
    idx = list(r)
    if len(idx) != m or len(set(idx)) != m:
        raise BadSubsetSize(f"subset {r} is not {m} distinct indices")
    xbar_r = float(p.xs[idx].mean())
    xbar = float(p.xs.mean())
    return xbar_r / xbar / comb(p.n, m)


def exact_expectation(p: Population, m: int) -> float:
    """Mean of the ratio estimator by full enumeration over subsets.

    Equals sum(y)/sum(x) identically; the cancellation is the whole
    point of the design.
    """
    if p.n > ENUM_CAP:
        raise TooLargeToEnumerate(f"n = {p.n} exceeds the enumeration cap {ENUM_CAP}")
    if not 1 <= m <= p.n:
        raise BadSampleSize(f"sample size {m} outside 1..{p.n}")
    total = 0.0
    for r in combinations(range(p.n), m):
        prob = subset_probability(p, r, m)
        if prob > 0:      # all-zero-x subsets are never drawn
            total += ratio_estimate(p, r) * prob
    return total
