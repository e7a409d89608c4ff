"""Distribution containers and the size-bias transform.

The transform reweights a nonnegative random quantity by its own value:
an atom at x with mass p moves to mass x*p/mean.  Everything downstream
(sums, divisibility tests, moment-problem checks, bounds) builds on the
two containers here, a finite atom list and a uniform-grid density.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats
from scipy.integrate import trapezoid
from scipy.special import gammaln

from .errors import (
    AtomAtZero,
    AtomPresent,
    NegativeMomentAtZero,
    NoClosedForm,
    NonpositiveScale,
    NoSuccesses,
    TailTooHeavy,
    ZeroMean,
)

ATOM_MERGE_TOL = 1e-12     # support points closer than this are one atom
PROB_SUM_TOL = 1e-12       # |sum(p) - 1| allowed
ATOM_EQ_TOL = 1e-9         # default atom-wise distribution equality
FD_STEP = 1e-5             # central difference step for the char fn derivative


# ===================================================================
# containers
# ===================================================================

def merge_atoms(xs, ps, tol=ATOM_MERGE_TOL):
    """Sort support points and sum masses of points closer than tol."""
    xs = np.asarray(xs, dtype=float)
    ps = np.asarray(ps, dtype=float)
    order = np.argsort(xs, kind="stable")
    xs, ps = xs[order], ps[order]
    out_x, out_p = [], []
    for x, p in zip(xs, ps):
        if out_x and x - out_x[-1] <= tol:
            out_p[-1] += p
        else:
            out_x.append(x)
            out_p.append(p)
    return np.array(out_x), np.array(out_p)


@dataclass(frozen=True, eq=False)
class DiscreteDist:
    """Finite list of (support point, probability) atoms.

    Support is sorted strictly increasing and nonnegative unless
    ``signed`` is set (only the embedding code uses signed supports).
    ``tail_bound`` records how much mass a truncated construction threw
    away before renormalizing; 0 for exact inputs.
    """

    xs: np.ndarray
    ps: np.ndarray
    signed: bool = False
    tail_bound: float = field(default=0.0, compare=False)

    def __post_init__(self):
        xs = np.asarray(self.xs, dtype=float)
        ps = np.asarray(self.ps, dtype=float)
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ps", ps)
        if xs.ndim != 1 or ps.ndim != 1 or xs.size != ps.size or xs.size == 0:
            raise ValueError("atoms must be two equal-length nonempty vectors")
        if np.any(np.diff(xs) <= 0):
            raise ValueError("support points must be strictly increasing")
        if not self.signed and xs[0] < 0:
            raise ValueError(f"negative support point {xs[0]} in unsigned distribution")
        if np.any(ps < -1e-15):
            raise ValueError(f"negative probability {ps.min()}")
        s = ps.sum()
        if abs(s - 1.0) > PROB_SUM_TOL:
            raise ValueError(f"probabilities sum to {s}, not 1")

    @classmethod
    def from_pairs(cls, pairs, signed=False, tail_bound=0.0):
        xs, ps = merge_atoms([x for x, _ in pairs], [p for _, p in pairs])
        return cls(xs, ps, signed=signed, tail_bound=tail_bound)

    @classmethod
    def from_pmf(cls, probs, tail_bound=0.0):
        """Atoms at 0..N-1 with the given masses; zero masses are kept."""
        probs = np.asarray(probs, dtype=float)
        return cls(np.arange(probs.size, dtype=float), probs, tail_bound=tail_bound)

    def mean(self) -> float:
        return float(self.xs @ self.ps)

    def prob_at(self, x, tol=ATOM_MERGE_TOL) -> float:
        hits = np.abs(self.xs - x) <= tol
        return float(self.ps[hits].sum())

    def survival(self, t) -> float:
        return float(self.ps[self.xs > t].sum())

    def sample(self, rng, n) -> np.ndarray:
        return rng.choice(self.xs, size=n, p=self.ps / self.ps.sum())


@dataclass(frozen=True, eq=False)
class GridDensity:
    """Density tabulated on the uniform grid {0, h, 2h, ...}.

    ``atom0`` is an optional point mass at 0 riding along with the
    continuous part.  ``mass_tol`` declares how far atom0 plus the
    trapezoid integral may sit from 1 (solver outputs carry small
    quadrature defects).
    """

    h: float
    values: np.ndarray
    atom0: float = 0.0
    mass_tol: float = field(default=1e-6, compare=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        if self.h <= 0:
            raise ValueError(f"grid step must be positive, got {self.h}")
        if values.ndim != 1 or values.size < 2:
            raise ValueError("need at least two grid values")
        if np.any(values < -1e-12):
            raise ValueError(f"negative density value {values.min()}")
        if not 0.0 <= self.atom0 <= 1.0:
            raise ValueError(f"atom0 = {self.atom0} outside [0, 1]")
        total = self.atom0 + self.integral()
        if abs(total - 1.0) > self.mass_tol:
            raise ValueError(f"total mass {total} off 1 beyond tolerance {self.mass_tol}")

    def grid(self) -> np.ndarray:
        return self.h * np.arange(self.values.size)

    def integral(self) -> float:
        return float(trapezoid(self.values, dx=self.h))

    def mean(self) -> float:
        return float(trapezoid(self.grid() * self.values, dx=self.h))


# ===================================================================
# named families
# ===================================================================

_NAMED_KINDS = {
    "poisson": 1, "bernoulli": 1, "binomial": 2, "geometric": 1,
    "gamma": 1, "exponential": 0, "lognormal": 2, "uniform01": 0,
    "borel": 1, "dirac": 1, "beta": 2,
}


@dataclass(frozen=True)
class NamedDist:
    """Tagged union over the standard families used throughout.

    kinds and params: poisson(rate), bernoulli(p), binomial(n, p),
    geometric(p) on {0,1,...}, gamma(shape), exponential(), lognormal(mu,
    sigma2), uniform01(), borel(rate), dirac(c).  beta(a, b) only appears
    as a transform output (the 2x density on (0,1) is beta(2,1)).
    """

    kind: str
    params: tuple = ()

    def __post_init__(self):
        if self.kind not in _NAMED_KINDS:
            raise ValueError(f"unknown family {self.kind!r}")
        object.__setattr__(self, "params", tuple(float(v) for v in self.params))
        if len(self.params) != _NAMED_KINDS[self.kind]:
            raise ValueError(f"{self.kind} takes {_NAMED_KINDS[self.kind]} parameters")
        k, p = self.kind, self.params
        if k == "poisson" and p[0] <= 0:
            raise ValueError("poisson rate must be > 0")
        if k in ("bernoulli", "geometric") and not 0 < p[0] <= 1:
            raise ValueError(f"{k} p must be in (0, 1]")
        if k == "binomial":
            if p[0] < 1 or p[0] != int(p[0]):
                raise ValueError("binomial n must be an integer >= 1")
            if not 0 < p[1] <= 1:
                raise ValueError("binomial p must be in (0, 1]")
        if k == "gamma" and p[0] <= 0:
            raise ValueError("gamma shape must be > 0")
        if k == "lognormal" and p[1] <= 0:
            raise ValueError("lognormal sigma2 must be > 0")
        if k == "borel" and not 0 <= p[0] < 1:
            raise ValueError("borel rate must be in [0, 1)")
        if k == "beta" and (p[0] <= 0 or p[1] <= 0):
            raise ValueError("beta parameters must be > 0")


def named_mean(nd: NamedDist) -> float:
    k, p = nd.kind, nd.params
    if k == "poisson":
        return p[0]
    if k == "bernoulli":
        return p[0]
    if k == "binomial":
        return p[0] * p[1]
    if k == "geometric":
        return (1 - p[0]) / p[0]
    if k == "gamma":
        return p[0]
    if k == "exponential":
        return 1.0
    if k == "lognormal":
        return math.exp(p[0] + p[1] / 2)
    if k == "uniform01":
        return 0.5
    if k == "borel":
        return 1.0 / (1.0 - p[0])
    if k == "dirac":
        return p[0]
    if k == "beta":
        return p[0] / (p[0] + p[1])
    raise AssertionError(k)


@dataclass(frozen=True)
class ShiftedNamed:
    """Closed-form transform result: ``shift`` plus a named family."""

    shift: float
    base: NamedDist


def closed_form_size_bias(nd: NamedDist) -> ShiftedNamed:
    """Symbolic transform for families that admit one.

    Raises NoClosedForm for families without a clean answer (borel,
    geometric); those go through the tabulated numeric path instead.
    """
    k, p = nd.kind, nd.params
    if k == "poisson":
        return ShiftedNamed(1.0, nd)
    if k == "bernoulli":
        return ShiftedNamed(0.0, NamedDist("dirac", (1.0,)))
    if k == "binomial":
        n, q = p
        if n == 1:
            return ShiftedNamed(0.0, NamedDist("dirac", (1.0,)))
        return ShiftedNamed(1.0, NamedDist("binomial", (n - 1, q)))
    if k == "exponential":
        return ShiftedNamed(0.0, NamedDist("gamma", (2.0,)))
    if k == "gamma":
        return ShiftedNamed(0.0, NamedDist("gamma", (p[0] + 1,)))
    if k == "lognormal":
        mu, s2 = p
        return ShiftedNamed(0.0, NamedDist("lognormal", (mu + s2, s2)))
    if k == "uniform01":
        return ShiftedNamed(0.0, NamedDist("beta", (2.0, 1.0)))
    if k == "dirac":
        if p[0] <= 0:
            raise ZeroMean("point mass at 0 cannot be size biased")
        return ShiftedNamed(0.0, nd)
    raise NoClosedForm(f"no closed-form transform for {k}")


def tabulate_named(nd: NamedDist, tail_tol=1e-12) -> DiscreteDist:
    """Finite atom list for a discrete named family.

    Infinite supports are cut once the remaining tail is below tail_tol,
    then renormalized; the cut is recorded in ``tail_bound``.
    """
    k, p = nd.kind, nd.params
    if k == "dirac":
        return DiscreteDist(np.array([p[0]]), np.array([1.0]))
    if k == "bernoulli":
        if p[0] == 1.0:
            return DiscreteDist(np.array([1.0]), np.array([1.0]))
        return DiscreteDist(np.array([0.0, 1.0]), np.array([1 - p[0], p[0]]))
    if k == "binomial":
        n = int(p[0])
        ks = np.arange(n + 1)
        return DiscreteDist(ks.astype(float), stats.binom.pmf(ks, n, p[1]))
    if k == "poisson":
        lam = p[0]
        hi = int(stats.poisson.ppf(1 - tail_tol / 4, lam)) + 10
        ks = np.arange(hi + 1)
        pmf = stats.poisson.pmf(ks, lam)
        tail = 1.0 - pmf.sum()
        return DiscreteDist(ks.astype(float), pmf / pmf.sum(), tail_bound=max(tail, 0.0))
    if k == "geometric":
        q = 1 - p[0]
        if q == 0.0:
            return DiscreteDist(np.array([0.0]), np.array([1.0]))
        hi = int(math.log(tail_tol) / math.log(q)) + 10
        ks = np.arange(hi + 1)
        pmf = p[0] * q ** ks
        tail = 1.0 - pmf.sum()
        return DiscreteDist(ks.astype(float), pmf / pmf.sum(), tail_bound=max(tail, 0.0))
    if k == "borel":
        return borel_pmf(p[0], tail_tol=max(tail_tol, 1e-13))
    raise ValueError(f"{k} is not a discrete family")


def named_density(nd: NamedDist, h=1e-3) -> GridDensity:
    """Grid tabulation of a continuous named family, renormalized."""
    k, p = nd.kind, nd.params
    if k == "uniform01":
        xs = np.arange(0.0, 1.0 + h / 2, h)
        return GridDensity(h, np.ones_like(xs))
    if k == "exponential":
        frozen = stats.expon()
    elif k == "gamma":
        frozen = stats.gamma(p[0])
    elif k == "lognormal":
        frozen = stats.lognorm(s=math.sqrt(p[1]), scale=math.exp(p[0]))
    elif k == "beta":
        frozen = stats.beta(p[0], p[1])
    else:
        raise ValueError(f"{k} is not a continuous family")
    xmax = float(frozen.ppf(1 - 1e-12))
    xs = np.arange(0.0, xmax + h, h)
    vals = frozen.pdf(xs)
    vals = np.where(np.isfinite(vals), vals, 0.0)
    total = trapezoid(vals, dx=h)
    return GridDensity(h, vals / total)


# ===================================================================
# the transform
# ===================================================================

def size_bias_discrete(d: DiscreteDist) -> DiscreteDist:
    """Reweight every atom by x/mean; any atom at 0 drops out."""
    a = d.mean()
    if a <= 0:
        raise ZeroMean("mean must be positive to size bias")
    keep = d.xs > 0
    xs = d.xs[keep]
    ps = d.xs[keep] * d.ps[keep] / a
    return DiscreteDist(xs, ps / ps.sum(), tail_bound=d.tail_bound)


def size_bias_density(g: GridDensity) -> GridDensity:
    """x*f(x)/mean on the same grid, renormalized to unit integral."""
    if g.atom0 != 0.0:
        raise AtomPresent("grid carries mass at 0, use the discrete path for atoms")
    a = g.mean()
    if a <= 0:
        raise ZeroMean("mean must be positive to size bias")
    vals = g.grid() * g.values / a
    total = trapezoid(vals, dx=g.h)
    return GridDensity(g.h, vals / total)


def moment(d, k: int) -> float:
    """k-th raw moment.  Negative k needs a zero-free discrete support."""
    if isinstance(d, DiscreteDist):
        if k < 0 and d.prob_at(0.0) > 0:
            raise NegativeMomentAtZero(f"moment k={k} undefined with an atom at 0")
        return float((d.xs ** k) @ d.ps)
    if isinstance(d, GridDensity):
        if k < 0:
            raise NegativeMomentAtZero("grid densities include the origin")
        xs = d.grid()
        contrib = d.atom0 if k == 0 else 0.0
        return contrib + float(trapezoid(xs ** k * d.values, dx=d.h))
    raise TypeError(f"cannot take moments of {type(d).__name__}")


def scale(d, c: float):
    """Multiply the support by c > 0; masses (or density mass) unchanged."""
    if c <= 0:
        raise NonpositiveScale(f"scale factor must be positive, got {c}")
    if isinstance(d, DiscreteDist):
        return DiscreteDist(d.xs * c, d.ps, signed=d.signed, tail_bound=d.tail_bound)
    if isinstance(d, GridDensity):
        return GridDensity(d.h * c, d.values / c, atom0=d.atom0, mass_tol=d.mass_tol)
    raise TypeError(f"cannot scale {type(d).__name__}")


def inverse_size_bias(z: DiscreteDist) -> DiscreteDist:
    """The unique zero-free preimage: mass proportional to p(x)/x."""
    if z.xs[0] <= 0:
        raise AtomAtZero("preimage exists only for strictly positive support")
    w = z.ps / z.xs
    return DiscreteDist(z.xs, w / w.sum())


def char_fn(d, u: float) -> complex:
    """E e^{iuX} for either container."""
    if isinstance(d, DiscreteDist):
        return complex(np.exp(1j * u * d.xs) @ d.ps)
    if isinstance(d, GridDensity):
        xs = d.grid()
        return complex(d.atom0 + trapezoid(np.exp(1j * u * xs) * d.values, dx=d.h))
    raise TypeError(f"no characteristic function for {type(d).__name__}")


def size_biased_char_fn(d: DiscreteDist, u: float) -> complex:
    """Characteristic function of the transform, via the exact atom list."""
    return char_fn(size_bias_discrete(d), u)


def size_biased_char_fn_fd(d, u: float, step=FD_STEP) -> complex:
    """Same quantity through the derivative identity phi'(u)/(i*mean).

    Central difference with the default step keeps the two routes within
    1e-6 of each other for |u| <= 10.
    """
    a = moment(d, 1)
    if a <= 0:
        raise ZeroMean("mean must be positive to size bias")
    dphi = (char_fn(d, u + step) - char_fn(d, u - step)) / (2 * step)
    return dphi / (1j * a)


def dominance_check(d: DiscreteDist) -> bool:
    """Transform never falls below the original in distribution.

    Checks P(X* > t) >= P(X > t) - 1e-12 at every support point; true for
    every valid input, kept as a callable sanity gate.
    """
    star = size_bias_discrete(d)
    return all(star.survival(t) >= d.survival(t) - 1e-12 for t in d.xs)


def size_bias_by_conditioning(pairs) -> DiscreteDist:
    """Empirical law of x over the pairs (x, flag) where flag is set.

    When x plays the role of a conditional probability P(A | F) and flag
    records whether A occurred, this estimates the transform of the
    x-law without ever weighting explicitly.
    """
    if not pairs:
        raise NoSuccesses("no pairs supplied")
    hits = [float(x) for x, a in pairs if a]
    if not hits:
        raise NoSuccesses("conditioning event never occurred")
    xs, counts = np.unique(np.asarray(hits), return_counts=True)
    return DiscreteDist(xs, counts / counts.sum())


def borel_pmf(lam: float, N: int = 200, tail_tol=1e-9) -> DiscreteDist:
    """Total-progeny law of a subcritical branching tree, truncated at N.

    P(X = i) = e^{-lam*i} (lam*i)^{i-1} / i! for i >= 1.  Raises
    TailTooHeavy when the first N terms leave more than tail_tol behind.
    """
    if not 0 <= lam < 1:
        raise ValueError(f"rate must be in [0, 1), got {lam}")
    if lam == 0.0:
        return DiscreteDist(np.array([1.0]), np.array([1.0]))
    ks = np.arange(1, N + 1)
    logp = -lam * ks + (ks - 1) * np.log(lam * ks) - gammaln(ks + 1)
    pmf = np.exp(logp)
    tail = 1.0 - pmf.sum()
    if tail > tail_tol:
        raise TailTooHeavy(f"tail mass {tail:.3e} exceeds {tail_tol} at N={N}")
    return DiscreteDist(ks.astype(float), pmf / pmf.sum(), tail_bound=max(tail, 0.0))


# ===================================================================
# comparison and serialization
# ===================================================================

def atoms_close(d1: DiscreteDist, d2: DiscreteDist, atol=ATOM_EQ_TOL) -> bool:
    """Atom-wise equality on the union of supports, within atol."""
    return max_atom_gap(d1, d2) <= atol


def max_atom_gap(d1: DiscreteDist, d2: DiscreteDist) -> float:
    xs = np.concatenate([d1.xs, d2.xs])
    xs, _ = merge_atoms(xs, np.zeros_like(xs))
    gaps = [abs(d1.prob_at(x) - d2.prob_at(x)) for x in xs]
    return float(max(gaps))


def dist_to_json(d) -> dict:
    if isinstance(d, DiscreteDist):
        return {"atoms": [[float(x), float(p)] for x, p in zip(d.xs, d.ps)]}
    if isinstance(d, GridDensity):
        return {"grid": {"h": d.h, "values": [float(v) for v in d.values],
                         "atom0": d.atom0}}
    raise TypeError(f"cannot serialize {type(d).__name__}")


def dist_from_json(obj: dict, signed=False):
    if "atoms" in obj:
        return DiscreteDist.from_pairs([(x, p) for x, p in obj["atoms"]], signed=signed)
    if "grid" in obj:
        g = obj["grid"]
        return GridDensity(float(g["h"]), np.asarray(g["values"], dtype=float),
                           atom0=float(g.get("atom0", 0.0)), mass_tol=1e-3)
    raise ValueError("expected an object with 'atoms' or 'grid'")
