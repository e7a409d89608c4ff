import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import sizebias as sb
from sizebias.errors import SupportOverflow, ZeroInSupport, ZeroMeanComponent, ZeroMeanTerm

RNG = np.random.Generator(np.random.Philox(5150))


def small_dist(rng, allow_zero=True):
    k = int(rng.integers(2, 5))
    lo = 0.0 if allow_zero else 0.1
    xs = np.sort(rng.uniform(lo, 6.0, size=k))
    while np.any(np.diff(xs) < 1e-4):
        xs = np.sort(rng.uniform(lo, 6.0, size=k))
    return sb.DiscreteDist(xs, rng.dirichlet(np.ones(k)))


# -------------------------------------------------------------------
# convolution plumbing

def test_convolve_binomials():
    b1 = sb.tabulate_named(sb.NamedDist("binomial", (3.0, 0.4)))
    b2 = sb.tabulate_named(sb.NamedDist("binomial", (5.0, 0.4)))
    from scipy.stats import binom
    got = sb.convolve(b1, b2)
    assert np.allclose(got.ps, binom.pmf(np.arange(9), 8, 0.4), atol=1e-12)


def test_convolve_cap():
    d = sb.DiscreteDist(np.linspace(0.0, 1.0, 40) ** 2, np.full(40, 1 / 40))
    with pytest.raises(SupportOverflow):
        sb.convolve(d, d, cap=100)


def test_index_distribution_weights_by_mean():
    d1 = sb.DiscreteDist.from_pairs([(1.0, 1.0)])
    d2 = sb.DiscreteDist.from_pairs([(3.0, 1.0)])
    s = sb.IndependentSum((d1, d2))
    idx = sb.index_distribution(s)
    assert np.allclose(idx.probs, [0.25, 0.75])


def test_sum_rejects_zero_mean_term():
    with pytest.raises(ZeroMeanTerm):
        sb.IndependentSum((sb.DiscreteDist.from_pairs([(0.0, 1.0)]),
                           sb.DiscreteDist.from_pairs([(1.0, 1.0)])))


# -------------------------------------------------------------------
# sum rule against the direct oracle

def test_sum_rule_fixed():
    d1 = sb.DiscreteDist.from_pairs([(0.0, 0.3), (1.0, 0.5), (2.5, 0.2)])
    d2 = sb.DiscreteDist.from_pairs([(1.0, 0.6), (3.0, 0.4)])
    lhs = sb.size_biased_sum_pmf(sb.IndependentSum((d1, d2)))
    rhs = sb.size_bias_discrete(sb.convolve(d1, d2))
    assert sb.max_atom_gap(lhs, rhs) <= 1e-12


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.integers(2, 4))
def test_sum_rule_random(seed, nterms):
    rng = np.random.Generator(np.random.Philox(seed))
    terms = [small_dist(rng) for _ in range(nterms)]
    try:
        s = sb.IndependentSum(tuple(terms))
    except ZeroMeanTerm:
        return
    lhs = sb.size_biased_sum_pmf(s)
    rhs = sb.size_bias_discrete(sb.convolve_all(terms))
    assert sb.max_atom_gap(lhs, rhs) <= 1e-10


def test_sum_rule_iid():
    # iid terms: biasing any single summand gives the same law
    d = sb.DiscreteDist.from_pairs([(1.0, 0.4), (2.0, 0.6)])
    s = sb.IndependentSum((d, d, d))
    lhs = sb.size_biased_sum_pmf(s)
    one = sb.convolve(sb.convolve(d, d), sb.size_bias_discrete(d))
    assert sb.max_atom_gap(lhs, one) <= 1e-12


def test_sum_sampler_mean():
    rng = np.random.Generator(np.random.Philox(99))
    d1 = sb.DiscreteDist.from_pairs([(0.0, 0.3), (1.0, 0.5), (2.5, 0.2)])
    d2 = sb.DiscreteDist.from_pairs([(1.0, 0.6), (3.0, 0.4)])
    s = sb.IndependentSum((d1, d2))
    pmf = sb.size_biased_sum_pmf(s)
    draws = sb.sample_size_biased_sum(s, rng, 200_000)
    se = draws.std(ddof=1) / math.sqrt(draws.size)
    assert abs(draws.mean() - pmf.mean()) < 5 * se


# -------------------------------------------------------------------
# product rule

def test_product_rule_fixed():
    d1 = sb.DiscreteDist.from_pairs([(1.0, 0.5), (2.0, 0.5)])
    d2 = sb.DiscreteDist.from_pairs([(1.0, 0.6), (3.0, 0.4)])
    lhs = sb.size_biased_product_pmf((d1, d2))
    rhs = sb.size_bias_discrete(sb.product_pmf((d1, d2)))
    assert sb.max_atom_gap(lhs, rhs) <= 1e-12


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.integers(2, 3))
def test_product_rule_random(seed, nterms):
    rng = np.random.Generator(np.random.Philox(seed))
    terms = [small_dist(rng, allow_zero=False) for _ in range(nterms)]
    lhs = sb.size_biased_product_pmf(terms)
    rhs = sb.size_bias_discrete(sb.product_pmf(terms))
    assert sb.max_atom_gap(lhs, rhs) <= 1e-10


def test_product_rejects_zero_atom():
    d = sb.DiscreteDist.from_pairs([(0.0, 0.5), (1.0, 0.5)])
    with pytest.raises(ZeroInSupport):
        sb.size_biased_product_pmf((d, d))


def test_product_moments_multiply():
    d1 = sb.DiscreteDist.from_pairs([(1.0, 0.5), (2.0, 0.5)])
    d2 = sb.DiscreteDist.from_pairs([(0.5, 0.2), (4.0, 0.8)])
    prod = sb.product_pmf((d1, d2))
    assert np.isclose(prod.mean(), d1.mean() * d2.mean(), rtol=1e-12)
    assert np.isclose(sb.moment(prod, 2), sb.moment(d1, 2) * sb.moment(d2, 2), rtol=1e-12)


# -------------------------------------------------------------------
# mixtures

def test_mixture_rule_fixed():
    d1 = sb.DiscreteDist.from_pairs([(1.0, 1.0)])
    d2 = sb.DiscreteDist.from_pairs([(2.0, 0.5), (4.0, 0.5)])
    mixed, w = sb.size_bias_mixture((d1, d2), (0.5, 0.5))
    # new weights tilt toward the heavier component: w_b m_b / sum
    assert np.allclose(w, [1.0 / 4.0, 3.0 / 4.0])
    ref = sb.size_bias_discrete(sb.mix((d1, d2), (0.5, 0.5)))
    assert sb.max_atom_gap(mixed, ref) <= 1e-12


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.integers(2, 4))
def test_mixture_rule_random(seed, ncomp):
    rng = np.random.Generator(np.random.Philox(seed))
    comps = [small_dist(rng, allow_zero=False) for _ in range(ncomp)]
    weights = rng.dirichlet(np.ones(ncomp))
    mixed, _ = sb.size_bias_mixture(comps, weights)
    ref = sb.size_bias_discrete(sb.mix(comps, weights))
    assert sb.max_atom_gap(mixed, ref) <= 1e-10


def test_mixture_rejects_zero_mean_component():
    z = sb.DiscreteDist.from_pairs([(0.0, 1.0)])
    d = sb.DiscreteDist.from_pairs([(1.0, 1.0)])
    with pytest.raises(ZeroMeanComponent):
        sb.size_bias_mixture((z, d), (0.5, 0.5))


# -------------------------------------------------------------------
# singular samplers

def test_uniform_star_sampler():
    rng = np.random.Generator(np.random.Philox(4242))
    u = sb.sample_uniform_star(rng, 400_000)
    assert np.all((u >= 0) & (u <= 1))
    # law is Beta(2,1): mean 2/3, second moment 1/2, cdf x^2
    assert abs(u.mean() - 2.0 / 3.0) < 5 * u.std(ddof=1) / math.sqrt(u.size)
    assert abs(np.mean(u ** 2) - 0.5) < 0.002
    grid = np.linspace(0.05, 0.95, 19)
    ecdf = np.searchsorted(np.sort(u), grid) / u.size
    assert np.max(np.abs(ecdf - grid ** 2)) < 0.005


def test_cantor_star_sampler():
    rng = np.random.Generator(np.random.Philox(77))
    s, s_star = sb.sample_cantor_star(rng, 400_000)
    assert np.all((s >= 0) & (s <= 1))
    assert np.all(s_star >= s - 1e-15)
    assert np.all(s_star <= 1 + 1e-15)
    n = s.size
    assert abs(s.mean() - 0.5) < 5 * s.std(ddof=1) / math.sqrt(n)
    assert abs(s_star.mean() - 0.75) < 5 * s_star.std(ddof=1) / math.sqrt(n)
    # var of the base law is 1/8
    assert abs(s.var(ddof=1) - 0.125) < 0.002
