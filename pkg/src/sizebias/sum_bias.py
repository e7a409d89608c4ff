"""Size-biasing sums, products, and mixtures of independent terms.

The workhorse identity: to size bias a sum of independent nonnegative
terms, pick one term with probability proportional to its mean and
replace it by its own size-biased version.  Exact pmf arithmetic and a
Monte Carlo sampler both live here, along with the binary-digit
constructions for the uniform and middle-thirds singular laws.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dist_core import DiscreteDist, merge_atoms, size_bias_discrete
from .errors import (
    SupportOverflow,
    ZeroInSupport,
    ZeroMeanComponent,
    ZeroMeanTerm,
)

CONV_ATOM_CAP = 1_000_000


@dataclass(frozen=True)
class IndependentSum:
    """Ordered list of independent nonnegative terms, each with mean > 0."""

    terms: tuple

    def __post_init__(self):
        if not self.terms:
            raise ValueError("need at least one term")
        object.__setattr__(self, "terms", tuple(self.terms))
        for i, t in enumerate(self.terms):
            if t.mean() <= 0:
                raise ZeroMeanTerm(f"term {i} has mean {t.mean()}")


@dataclass(frozen=True)
class IndexDist:
    """Which term got biased: P(I=i) proportional to the term means."""

    probs: np.ndarray

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=float)
        object.__setattr__(self, "probs", probs)
        if abs(probs.sum() - 1.0) > 1e-12 or np.any(probs < 0):
            raise ValueError("index weights must be a probability vector")


def index_distribution(s: IndependentSum) -> IndexDist:
    means = np.array([t.mean() for t in s.terms])
    return IndexDist(means / means.sum())


def convolve(d1: DiscreteDist, d2: DiscreteDist, cap=CONV_ATOM_CAP) -> DiscreteDist:
    """Exact pmf of the independent sum of two atom lists."""
    if d1.xs.size * d2.xs.size > cap:
        raise SupportOverflow(f"convolution would touch {d1.xs.size * d2.xs.size} atoms")
    xs = np.add.outer(d1.xs, d2.xs).ravel()
    ps = np.multiply.outer(d1.ps, d2.ps).ravel()
    xs, ps = merge_atoms(xs, ps)
    if xs.size > cap:
        raise SupportOverflow(f"convolution support has {xs.size} atoms, cap {cap}")
    return DiscreteDist(xs, ps / ps.sum(), signed=d1.signed or d2.signed)


def convolve_all(terms) -> DiscreteDist:
    out = terms[0]
    for t in terms[1:]:
        out = convolve(out, t)
    return out


def size_biased_sum_pmf(s: IndependentSum) -> DiscreteDist:
    """Exact transform of the sum via single-term biasing.

    Mixes, over i with weight mean_i / sum of means, the convolution in
    which term i alone is replaced by its size-biased law.  Equals the
    direct transform of the full convolution; tests hold it to that
    oracle atom by atom.
    """
    idx = index_distribution(s)
    pieces_x, pieces_p = [], []
    for i, w in enumerate(idx.probs):
        replaced = list(s.terms)
        replaced[i] = size_bias_discrete(s.terms[i])
        d = convolve_all(replaced)
        pieces_x.append(d.xs)
        pieces_p.append(w * d.ps)
    xs, ps = merge_atoms(np.concatenate(pieces_x), np.concatenate(pieces_p))
    return DiscreteDist(xs, ps / ps.sum())


def sample_size_biased_sum(s: IndependentSum, rng, n: int) -> np.ndarray:
    """Draw n values of the size-biased sum as S - X_I + X_I*.

    The replacement pair (X_I, X_I*) is drawn with independent
    components; any joint law works and independence is the simplest.
    """
    if n < 1:
        raise ValueError(f"need n >= 1 draws, got {n}")
    idx = index_distribution(s)
    total = np.zeros(n)
    draws = [t.sample(rng, n) for t in s.terms]
    for d in draws:
        total += d
    which = rng.choice(len(s.terms), size=n, p=idx.probs)
    stars = [size_bias_discrete(t).sample(rng, n) for t in s.terms]
    for i in range(len(s.terms)):
        sel = which == i
        total[sel] += stars[i][sel] - draws[i][sel]
    return total


def size_biased_product_pmf(terms) -> DiscreteDist:
    """Transform of a product of independent positive factors.

    Unlike sums, every factor gets biased.  Supports must be strictly
    positive; the law of the product is enumerated exactly.
    """
    star = []
    for i, t in enumerate(terms):
        if t.xs[0] <= 0:
            raise ZeroInSupport(f"factor {i} has support point {t.xs[0]}")
        if t.mean() <= 0:
            raise ZeroMeanTerm(f"factor {i} has mean {t.mean()}")
        star.append(size_bias_discrete(t))
    out = star[0]
    for t in star[1:]:
        xs = np.multiply.outer(out.xs, t.xs).ravel()
        ps = np.multiply.outer(out.ps, t.ps).ravel()
        if xs.size > CONV_ATOM_CAP:
            raise SupportOverflow(f"product support has {xs.size} atoms")
        xs, ps = merge_atoms(xs, ps)
        out = DiscreteDist(xs, ps / ps.sum())
    return out


def product_pmf(terms) -> DiscreteDist:
    """Plain law of the product, the oracle side of the product rule."""
    out = terms[0]
    for t in terms[1:]:
        xs = np.multiply.outer(out.xs, t.xs).ravel()
        ps = np.multiply.outer(out.ps, t.ps).ravel()
        xs, ps = merge_atoms(xs, ps)
        out = DiscreteDist(xs, ps / ps.sum())
    return out


def size_bias_mixture(components, weights):
    """Transform a mixture: reweight components by their means, bias each.

    Returns (mixed transform, new_weights) with new_weights[b]
    proportional to weights[b] * mean(component b).
    """
    weights = np.asarray(weights, dtype=float)
    if abs(weights.sum() - 1.0) > 1e-12:
        raise ValueError("mixture weights must sum to 1")
    means = np.array([c.mean() for c in components])
    if np.any(means <= 0):
        raise ZeroMeanComponent(f"component mean {means.min()} is not positive")
    new_w = weights * means
    new_w = new_w / new_w.sum()
    pieces_x, pieces_p = [], []
    for w, c in zip(new_w, components):
        star = size_bias_discrete(c)
        pieces_x.append(star.xs)
        pieces_p.append(w * star.ps)
    xs, ps = merge_atoms(np.concatenate(pieces_x), np.concatenate(pieces_p))
    return DiscreteDist(xs, ps / ps.sum()), new_w


def mix(components, weights) -> DiscreteDist:
    """Plain mixture pmf, oracle side of the mixture rule."""
    weights = np.asarray(weights, dtype=float)
    pieces_x = np.concatenate([c.xs for c in components])
    pieces_p = np.concatenate([w * c.ps for w, c in zip(weights, components)])
    xs, ps = merge_atoms(pieces_x, pieces_p)
    return DiscreteDist(xs, ps / ps.sum())


# ===================================================================
# digit constructions
# ===================================================================

def sample_uniform_star(rng, n: int, depth: int = 52) -> np.ndarray:
    """Draw from the transform of Uniform(0,1) by digit surgery.

    Write U in binary and force bit J to 1, where P(J=i) = 2^{-i}.  The
    result has density 2x; no accept-reject involved.
    """
    u = rng.random(n)
    j = rng.geometric(0.5, size=n)
    np.clip(j, 1, depth, out=j)
    w = 2.0 ** (-j.astype(float))
    bit = np.floor(u / w) % 2
    return u + (1.0 - bit) * w


def sample_cantor_star(rng, n: int, depth: int = 40):
    """Paired draws (S, S*) for the middle-thirds singular law.

    S = sum of 2*B_i/3^i with fair bits B_i.  Biasing picks index I with
    P(I=i) = 2/3^i and forces digit I on: S* = S + 2(1-B_I)/3^I.  Depth
    40 puts the truncation error below double precision at scale 1.
    """
    if depth < 30:
        raise ValueError(f"depth must be at least 30, got {depth}")
    bits = rng.integers(0, 2, size=(n, depth))
    pows = 3.0 ** -np.arange(1, depth + 1)
    s = 2.0 * bits @ pows
    i = rng.geometric(2.0 / 3.0, size=n)
    np.clip(i, 1, depth, out=i)
    b_i = bits[np.arange(n), i - 1]
    s_star = s + 2.0 * (1.0 - b_i) * pows[i - 1]
    return s, s_star
