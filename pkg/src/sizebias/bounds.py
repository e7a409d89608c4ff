"""Poisson-approximation and concentration bounds from couplings.

Both results quantify how far a law sits from a benchmark through the
gap between its size-biased version and a simple shift: total variation
to a Poisson is controlled by E|X* - (X+1)|, and a bounded difference
X* - X <= c forces sub-Poissonian tails on both sides.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import binom, poisson

from .dist_core import DiscreteDist, merge_atoms
from .errors import DomainError

TAIL_TERM_CUT = 1e-18      # stop tail sums once terms fall below this x partial


@dataclass(frozen=True)
class CouplingGap:
    """E|X* - (X+1)| under some declared coupling of X with X*."""

    gap: float
    coupling_tag: str = ""
    se: float | None = None

    def __post_init__(self):
        if self.gap < 0:
            raise ValueError(f"gap must be nonnegative, got {self.gap}")


@dataclass(frozen=True)
class ConcentrationParams:
    """Mean a, coupling bound c with P(X* <= X + c) = 1, eval point x."""

    a: float
    c: float
    x: float

    def __post_init__(self):
        if self.a <= 0 or self.c <= 0 or self.x <= 0:
            raise ValueError("a, c, x must all be positive")


def tv_distance(p: DiscreteDist, q: DiscreteDist) -> float:
    """Half the summed absolute mass difference over the union support."""
    xs = np.concatenate([p.xs, q.xs])
    xs, _ = merge_atoms(xs, np.zeros_like(xs))
    return 0.5 * float(sum(abs(p.prob_at(x) - q.prob_at(x)) for x in xs))


def stein_poisson_bound(lam: float, gap) -> float:
    """Total variation to Poisson(lam) is at most (1 - e^-lam) * gap."""
    if lam <= 0:
        raise ValueError(f"rate must be positive, got {lam}")
    g = gap.gap if isinstance(gap, CouplingGap) else float(gap)
    return (1.0 - math.exp(-lam)) * g


def estimate_coupling_gap(draw_pair, n: int, rng, tag="monte carlo") -> CouplingGap:
    """Monte Carlo gap for a user-supplied coupling sampler.

    ``draw_pair(rng, n)`` must return paired arrays (x_star, x).  The
    standard error rides along so callers can widen the bound honestly.
    """
    x_star, x = draw_pair(rng, n)
    gaps = np.abs(np.asarray(x_star, dtype=float) - (np.asarray(x, dtype=float) + 1.0))
    return CouplingGap(float(gaps.mean()), tag, se=float(gaps.std(ddof=1) / math.sqrt(n)))


def _poisson_pmf_block(lam: float, hi: int) -> np.ndarray:
    return poisson.pmf(np.arange(hi + 1), lam)


def binomial_poisson_check(n: int, p: float):
    """(Stein bound, exact TV) for a binomial against Poisson(np).

    The coupling shares all but one summand, leaving X* - (X+1) equal
    to minus a single indicator, so the gap is exactly p and the bound
    (1 - e^-np) * p.  Returns both sides; the exact distance can touch
    the bound (n = 1) but never beats it.
    """
    if n < 1 or not 0.0 < p < 1.0:
        raise ValueError(f"need n >= 1 and p in (0,1), got n={n}, p={p}")
    lam = n * p
    bound = stein_poisson_bound(lam, p)
    # walk the Poisson terms out past n until they are dust
    term = math.exp(-lam)
    total = term
    k = 0
    while k < n or term >= TAIL_TERM_CUT * total:
        k += 1
        term *= lam / k
        total += term
    hi = k
    poi = _poisson_pmf_block(lam, hi)
    bi = np.zeros(hi + 1)
    bi[: n + 1] = binom.pmf(np.arange(n + 1), n, p)
    exact = 0.5 * (float(np.abs(bi - poi).sum()) + max(0.0, 1.0 - poi.sum()))
    assert exact <= bound * (1 + 1e-12) + 1e-15
    return bound, exact


# ===================================================================
# concentration from a bounded coupling
# ===================================================================

def _tight(a, c, x):
    return (a / x) ** (x / c) * math.exp((x - a) / c)


def concentration_upper(cp: ConcentrationParams):
    """(tight, gaussian) upper tail bounds at x >= a.

    tight = (a/x)^(x/c) e^((x-a)/c); gaussian = exp(-(x-a)^2/(c(a+x))).
    The tight form never exceeds the gaussian form on its domain.
    """
    if cp.x < cp.a:
        raise DomainError(f"upper tail needs x >= a, got x={cp.x} a={cp.a}")
    tight = _tight(cp.a, cp.c, cp.x)
    gauss = math.exp(-((cp.x - cp.a) ** 2) / (cp.c * (cp.a + cp.x)))
    assert tight <= gauss + 1e-15
    return tight, gauss


def concentration_lower(cp: ConcentrationParams):
    """(tight, gaussian) lower tail bounds at 0 < x <= a."""
    if cp.x > cp.a:
        raise DomainError(f"lower tail needs x <= a, got x={cp.x} a={cp.a}")
    tight = _tight(cp.a, cp.c, cp.x)
    gauss = math.exp(-((cp.a - cp.x) ** 2) / (2.0 * cp.c * cp.a))
    assert tight <= gauss + 1e-15
    return tight, gauss


def tail_iteration(cp: ConcentrationParams) -> float:
    """Upper bound from iterating G(x) <= (a/x) G(x-c) down to the mean.

    The product of the stepped ratios bounds the tail with the final
    factor capped at 1; it lands within a factor e of the closed form.
    """
    if cp.x <= cp.a:
        raise DomainError(f"iteration needs x > a, got x={cp.x} a={cp.a}")
    prod = 1.0
    xk = cp.x
    while xk > cp.a:
        prod *= cp.a / xk
        xk -= cp.c
    return prod


# exact Poisson tails for calibration against the bounds

def poisson_upper_tail(a: float, x: int) -> float:
    """P(X >= x) for Poisson(a), summed until terms are negligible."""
    term = math.exp(-a + x * math.log(a) - math.lgamma(x + 1))
    total = term
    k = x
    while term >= TAIL_TERM_CUT * total:
        k += 1
        term *= a / k
        total += term
    return total


def poisson_lower_tail(a: float, x: int) -> float:
    """P(X <= x) for Poisson(a) by direct summation."""
    term = math.exp(-a)
    total = term
    for k in range(1, x + 1):
        term *= a / k
        total += term
    return total
