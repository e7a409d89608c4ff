"""Compound-Poisson synthesis and infinite-divisibility testing.

A nonnegative law is infinitely divisible exactly when its size-biased
version splits as the original plus an independent nonnegative
increment.  On the integers that equivalence becomes a two-way
recursion: synthesize a pmf from jump rates, or extract the increment
from a pmf and watch for negative coefficients.  The two delay
equations at the end are the continuous fixed-point constructions with
uniform increments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dist_core import DiscreteDist, GridDensity
from .errors import (
    GapInSupport,
    GridTooCoarse,
    NonIntegerJump,
    TruncationTooSevere,
    ZeroAtOrigin,
    ZeroMean,
    ZeroSupportPoint,
)

NEG_MASS_TOL = 1e-9        # extracted mass below -this means "not divisible"
EXAMINE_TAIL = 1e-6        # skip indices once this little input mass remains


@dataclass(frozen=True)
class LevyRepr:
    """Mean, drift mass at jump size 0, and finite jump list (y, rate).

    The jump rates integrate the mean back: sum(rate*y) = a*(1-alpha0).
    """

    a: float
    alpha0: float
    jumps: tuple

    def __post_init__(self):
        object.__setattr__(self, "jumps", tuple((float(y), float(r)) for y, r in self.jumps))
        if self.a <= 0:
            raise ValueError(f"mean must be positive, got {self.a}")
        if not 0.0 <= self.alpha0 < 1.0:
            raise ValueError(f"drift mass {self.alpha0} outside [0, 1)")
        ys = [y for y, _ in self.jumps]
        if any(y <= 0 for y in ys):
            raise ValueError("jump sizes must be positive")
        if len(set(ys)) != len(ys):
            raise ValueError("jump sizes must be distinct")
        if any(r <= 0 for _, r in self.jumps):
            raise ValueError("jump rates must be positive")
        total = sum(r * y for y, r in self.jumps)
        if abs(total - self.a * (1 - self.alpha0)) > 1e-10:
            raise ValueError(f"rates integrate to {total}, expected {self.a * (1 - self.alpha0)}")

    def total_rate(self) -> float:
        return sum(r for _, r in self.jumps)


@dataclass(frozen=True)
class IdTestResult:
    """Outcome of increment extraction.

    When ``is_id`` the increment is a genuine distribution and the
    size-bias split holds.  Otherwise ``witness_index`` points at the
    first seriously negative extracted coefficient and ``witness_value``
    is that coefficient; ``raw`` keeps every coefficient for inspection.
    """

    is_id: bool
    a: float
    increment: DiscreteDist | None
    witness_index: int | None
    witness_value: float | None
    raw: np.ndarray
    examined: np.ndarray

    def jump_rates(self):
        """Derived rates rate_k = a * f_Y(k) / k on the examined indices."""
        return [(int(k), self.a * self.raw[k] / k) for k in self.examined]


def compound_poisson_from_increment(y_dist: DiscreteDist, a: float) -> LevyRepr:
    """Jump rates that make the increment law come out as y_dist.

    rate_i = a * p_i / y_i; the resulting sum of Poisson-many jumps has
    mean a and size-biases by adding one independent copy of the
    increment.
    """
    if y_dist.xs[0] <= 0:
        raise ZeroSupportPoint(f"increment support must be positive, got {y_dist.xs[0]}")
    if a <= 0:
        raise ZeroMean(f"mean must be positive, got {a}")
    jumps = [(float(y), a * float(p) / float(y)) for y, p in zip(y_dist.xs, y_dist.ps) if p > 0]
    return LevyRepr(a, 0.0, tuple(jumps))


def pmf_recursion(levy: LevyRepr, N: int) -> DiscreteDist:
    """Pmf on 0..N of the integer-jump compound Poisson law.

    f(0) = exp(-total rate); each later mass comes from the size-bias
    split f(m+1) = a/(m+1) * sum f(i) f_Y(m+1-i).  The truncated tail is
    recorded on the result and the masses renormalized.
    """
    if levy.alpha0 != 0.0:
        raise NonIntegerJump("drift mass shifts the law off the integer lattice")
    ys = []
    for y, _ in levy.jumps:
        if abs(y - round(y)) > 1e-12 or round(y) < 1:
            raise NonIntegerJump(f"jump size {y} is not a positive integer")
        ys.append(int(round(y)))
    kmax = max(ys)
    fy = np.zeros(max(kmax, N) + 1)
    for (y, r), k in zip(levy.jumps, ys):
        fy[k] = k * r / levy.a
    f = np.zeros(N + 1)
    f[0] = math.exp(-levy.total_rate())
    for m in range(N):
        f[m + 1] = levy.a / (m + 1) * float(f[: m + 1] @ fy[m + 1 : 0 : -1])
    tail = max(1.0 - f.sum(), 0.0)
    return DiscreteDist.from_pmf(f / f.sum(), tail_bound=tail)


def extract_increment(fX: DiscreteDist, examine_tail=EXAMINE_TAIL,
                      neg_tol=NEG_MASS_TOL) -> IdTestResult:
    """Invert the recursion: solve for the increment law given the pmf.

    The mean is taken from the input pmf itself.  For a truncated input
    (nonzero tail_bound) indices are examined only while the input still
    has at least ``examine_tail`` mass above them; later coefficients
    are pure truncation noise.  An exact input's zeros past the support
    are real, so there the recursion runs past the last atom, where
    finite-support counterexamples reveal themselves.  A coefficient
    below -neg_tol is a divisibility counterexample.
    """
    ks = np.round(fX.xs).astype(int)
    if np.any(np.abs(fX.xs - ks) > 1e-9) or ks[0] < 0:
        raise NonIntegerJump("support must sit on the nonnegative integers")
    exact = fX.tail_bound == 0.0
    K = int(ks[-1])
    kmax = 2 * K + 10 if exact else K
    f = np.zeros(kmax + 1)
    f[ks] = fX.ps
    if f[0] <= 0:
        raise ZeroAtOrigin("extraction divides by the mass at 0")
    a = fX.mean()
    if a <= 0:
        raise ZeroMean("mean must be positive")
    fy = np.zeros(kmax + 1)
    for m in range(kmax):
        inner = float(f[1 : m + 1] @ fy[m : 0 : -1])
        fy[m + 1] = ((m + 1) * f[m + 1] / a - inner) / f[0]
    if exact:
        examined = np.arange(1, kmax + 1)
    else:
        below = np.cumsum(f)      # below[k] = mass at or under k
        examined = np.array([k for k in range(1, K + 1)
                             if below[k - 1] < 1 - examine_tail], dtype=int)
        if examined.size == 0:
            examined = np.array([1], dtype=int)
    bad = [k for k in examined if fy[k] < -neg_tol]
    if bad:
        k0 = bad[0]
        return IdTestResult(False, a, None, k0, float(fy[k0]), fy, examined)
    # verdict settled on the examined window; the increment itself may
    # keep later coefficients up to the first negative one (that is
    # where truncation noise takes over) so its masses are not inflated
    # by renormalizing over a short window
    keep = int(examined[-1])
    while keep < kmax and fy[keep + 1] >= 0.0:
        keep += 1
    idx = np.arange(1, keep + 1)
    masses = np.clip(fy[idx], 0.0, None)
    inc = DiscreteDist(idx.astype(float), masses / masses.sum())
    return IdTestResult(True, a, inc, None, None, fy, examined)


def log_convexity_check(fX: DiscreteDist) -> bool:
    """Sufficient condition on a gap-free pmf: f(n-1)f(n+1) >= f(n)^2.

    Log-convex pmfs on {0,1,...} are always divisible; the converse
    fails (light-tailed divisible laws are log-concave instead).
    """
    ks = np.round(fX.xs).astype(int)
    ok = (np.all(np.abs(fX.xs - ks) <= 1e-9) and ks[0] == 0
          and np.all(np.diff(ks) == 1) and np.all(fX.ps > 0))
    if not ok:
        raise GapInSupport("need every mass positive on an initial segment {0..N}")
    p = fX.ps
    return bool(np.all(p[:-2] * p[2:] >= p[1:-1] ** 2 - 1e-15))


def levy_char_fn(levy: LevyRepr, u: float) -> complex:
    """exp of the drift term plus sum rate*(e^{iuy}-1) over the jumps."""
    acc = 1j * u * levy.a * levy.alpha0
    for y, r in levy.jumps:
        acc += r * (np.exp(1j * u * y) - 1.0)
    return complex(np.exp(acc))


# ===================================================================
# delay equations with uniform increments
# ===================================================================

def _check_grid(h, xmax):
    if h > 1e-3 + 1e-15:
        raise GridTooCoarse(f"grid step {h} too coarse, need h <= 1e-3")
    if xmax < 3:
        raise GridTooCoarse(f"xmax must be at least 3, got {xmax}")
    m1 = round(1.0 / h)
    if abs(1.0 / h - m1) > 1e-6:
        raise GridTooCoarse("1/h must be an integer so the unit delay sits on the grid")
    return m1


def dickman_solve(a: float, h: float = 1e-3, xmax: float = 5.0) -> GridDensity:
    """Density of the fixed point whose increment is Uniform(0,1).

    Solves f(x) = (a/x) * integral of f over (x-1, x) by marching the
    grid, seeded with the analytic power form C*x^(a-1) on (0,1].  The
    output is normalized to unit mass; its mean lands on a to about 1e-4,
    which tests use as the accuracy certificate.  At a=1 this is the
    rough-number density: e^(-gamma) times the classical decay function.
    """
    if a <= 0:
        raise ValueError(f"mean must be positive, got {a}")
    m1 = _check_grid(h, xmax)
    J = round(xmax / h)
    x = h * np.arange(J + 1)
    f = np.zeros(J + 1)
    f[1 : m1 + 1] = x[1 : m1 + 1] ** (a - 1.0)
    # endpoint value chosen so the first trapezoid panel matches the
    # exact integral h^a/a of the seed
    f[0] = max(2.0 * h ** (a - 1.0) / a - f[1], 0.0)
    F = np.zeros(J + 1)
    np.cumsum(0.5 * h * (f[1 : m1 + 1] + f[: m1]), out=F[1 : m1 + 1])
    for j in range(m1 + 1, J + 1):
        rhs = F[j - 1] + 0.5 * h * f[j - 1] - F[j - m1]
        f[j] = (a / x[j]) * rhs / (1.0 - a * h / (2.0 * x[j]))
        F[j] = F[j - 1] + 0.5 * h * (f[j - 1] + f[j])
    total = F[-1]
    return GridDensity(h, f / total)


def buchstab_solve(a: float, b: float, h: float = 1e-3, xmax: float = 8.0) -> GridDensity:
    """Fixed point with increment Uniform(b,1): atom at 0 plus gaps.

    The atom is b^(a/(1-b)) exactly; the density solves
    f(x) = (a/x) * [atom * 1(b<x<1) + integral of f over (x-1, x-b)] / (1-b)
    and vanishes off the union of [kb, k].  Stored with explicit zeros in
    the gaps; values at the two jump points b and 1 hold the average of
    the one-sided limits so plain trapezoid sums stay second order.
    The result is left unnormalized: atom + integral = 1 is the
    accuracy certificate, not an enforced identity.
    """
    if a <= 0:
        raise ValueError(f"mean must be positive, got {a}")
    if not 0.0 < b < 1.0:
        raise ValueError(f"b must be in (0, 1), got {b}")
    m1 = _check_grid(h, xmax)
    mb = round(b / h)
    if abs(b / h - mb) > 1e-9:
        raise GridTooCoarse(f"b = {b} must sit on the grid of step {h}")
    atom0 = b ** (a / (1.0 - b))
    J = round(xmax / h)
    x = h * np.arange(J + 1)
    f = np.zeros(J + 1)
    F = np.zeros(J + 1)
    w = 1.0 / (1.0 - b)
    for j in range(1, J + 1):
        atom_term = atom0 * w if mb < j < m1 else 0.0
        if j == mb or j == m1:
            atom_term = 0.5 * atom0 * w   # average across the jump
        lo = F[j - m1] if j >= m1 else 0.0
        hi = F[j - mb] if j >= mb else 0.0
        f[j] = (a / x[j]) * (atom_term + w * (hi - lo))
        F[j] = F[j - 1] + 0.5 * h * (f[j - 1] + f[j])
    if abs(atom0 + F[-1] - 1.0) > 1e-3:
        raise TruncationTooSevere(
            f"domain [0, {xmax}] cuts off {abs(atom0 + F[-1] - 1.0):.2e} of the mass; raise xmax")
    return GridDensity(h, f, atom0=atom0, mass_tol=1e-3)


# ===================================================================
# serialization
# ===================================================================

def levy_to_json(levy: LevyRepr) -> dict:
    return {"a": levy.a, "alpha0": levy.alpha0,
            "jumps": [[y, r] for y, r in levy.jumps]}


def levy_from_json(obj: dict) -> LevyRepr:
    return LevyRepr(float(obj["a"]), float(obj.get("alpha0", 0.0)),
                    tuple((y, r) for y, r in obj["jumps"]))
