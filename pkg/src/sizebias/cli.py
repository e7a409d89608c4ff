"""Command line front end: one JSON (or CSV) document per invocation.

Reproducibility contract.  All randomness flows from numpy's Philox
generator, a counter-based 64-bit bit stream.  The stream used by a
subcommand is derived from the seed as

    SeedSequence(seed, spawn_key=(index of subcommand, stream))

with stream 0 for ordinary runs.  ``--workers k`` (Monte Carlo
subcommands only) splits the workload across streams 0..k-1 and merges
in stream order, so output depends only on argv; ``--workers 1`` is the
reference run.  Floats are printed with 17 significant digits so every
double round-trips; identical argv therefore means identical bytes.

Exit codes: 0 success, 2 bad usage or bad input data, 1 internal error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import traceback
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import SizeBiasError, NoClosedForm
from .dist_core import (
    DiscreteDist, GridDensity, NamedDist, ShiftedNamed,
    closed_form_size_bias, tabulate_named, named_mean,
    size_bias_discrete, size_bias_density, moment,
    dist_to_json, dist_from_json,
)
from .sum_bias import IndependentSum, index_distribution, size_biased_sum_pmf, size_biased_product_pmf
from .inf_div import (
    compound_poisson_from_increment, pmf_recursion, extract_increment,
    dickman_solve, buchstab_solve, levy_from_json,
)
from .lognormal import (
    orbit_pmf, orbit_as_dist, orbit_size_bias_check, berg_pmf,
    StieltjesDensity, stieltjes_moment,
    mixture_normalizer, mixture_reconstruction_check,
)
from .midzuno import load_population_csv, midzuno_sample, ratio_estimate
from .stochastic import simulate_renewal_inspection, skorohod_coupling, skorohod_exit_pmf, expected_exit_time
from .bounds import (
    ConcentrationParams, binomial_poisson_check,
    concentration_upper, concentration_lower, tail_iteration,
)

DEFAULT_SEED = 0xC0FFEE

SUBCOMMANDS = (
    "transform", "sum", "product", "compound-poisson", "id-test",
    "dickman", "buchstab", "orbit", "stieltjes", "berg",
    "mixture-check", "midzuno", "renewal", "skorohod", "stein",
    "concentration",
)


@dataclass(frozen=True)
class RunConfig:
    """Everything one invocation depends on; equal configs mean equal bytes.

    ``params`` holds the subcommand-specific values (sorted key order)
    so the whole run is a hashable record.
    """

    command: str
    seed: int
    format: str = "json"
    out: str | None = None
    params: tuple = ()

    @classmethod
    def from_namespace(cls, args) -> "RunConfig":
        skip = {"command", "seed", "format", "out", "func"}
        params = tuple(sorted((k, v) for k, v in vars(args).items() if k not in skip))
        return cls(args.command, args.seed, args.format, args.out, params)

    def rng(self, stream: int = 0) -> np.random.Generator:
        return derive_rng(self.seed, self.command, stream)


def derive_rng(seed: int, name: str, stream: int = 0) -> np.random.Generator:
    """Philox stream for (seed, subcommand, stream); see module docstring."""
    ss = np.random.SeedSequence(seed, spawn_key=(SUBCOMMANDS.index(name), stream))
    return np.random.Generator(np.random.Philox(ss))


# ===================================================================
# serialization
# ===================================================================

def _gfloat(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite value {x}")
    return f"{x:.17g}"


def json_text(value) -> str:
    if value is True:
        return "true"
    if value is False:
        return "false"
    if value is None:
        return "null"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return _gfloat(float(value))
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, (list, tuple, np.ndarray)):
        return "[" + ", ".join(json_text(v) for v in value) + "]"
    if isinstance(value, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {json_text(v)}" for k, v in value.items()) + "}"
    raise TypeError(f"cannot serialize {type(value).__name__}")


def csv_text(value) -> str:
    """Two-column flattening: one row per scalar leaf, path in column 1."""
    lines = ["key,value"]

    def scalar(v):
        if v is True or v is False:
            return "true" if v else "false"
        if isinstance(v, (int, np.integer)):
            return str(int(v))
        if isinstance(v, (float, np.floating)):
            return _gfloat(float(v))
        s = str(v)
        return '"' + s.replace('"', '""') + '"' if ("," in s or '"' in s) else s

    def walk(path, v):
        if isinstance(v, dict):
            for k, x in v.items():
                walk(f"{path}.{k}" if path else str(k), x)
        elif isinstance(v, (list, tuple, np.ndarray)):
            for i, x in enumerate(v):
                walk(f"{path}[{i}]", x)
        else:
            lines.append(f"{path},{scalar(v)}")

    walk("", value)
    return "\n".join(lines) + "\n"


def _emit(result: dict, cfg: RunConfig) -> None:
    text = json_text(result) + "\n" if cfg.format == "json" else csv_text(result)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ===================================================================
# input parsing
# ===================================================================

def parse_dist(text: str, signed: bool = False):
    """`name:params` inline, `atoms:x=p,...` literal, or `@file.json`."""
    if text.startswith("@"):
        with open(text[1:]) as fh:
            return dist_from_json(json.load(fh), signed=signed)
    if text.startswith("atoms:"):
        pairs = []
        for chunk in text[len("atoms:"):].split(","):
            x, sep, p = chunk.partition("=")
            if not sep:
                raise SizeBiasError(f"atom {chunk!r} is not of the form x=p")
            pairs.append((float(x), float(p)))
        return DiscreteDist.from_pairs(pairs, signed=signed)
    name, _, rest = text.partition(":")
    params = tuple(float(t) for t in rest.split(",")) if rest else ()
    return NamedDist(name, params)


def _as_discrete(d) -> DiscreteDist:
    if isinstance(d, NamedDist):
        return tabulate_named(d)
    if isinstance(d, DiscreteDist):
        return d
    raise SizeBiasError("this subcommand needs an atomic distribution, not a density grid")


def _named_json(d) -> dict:
    if isinstance(d, ShiftedNamed):
        out = _named_json(d.base)
        out["shift"] = float(d.shift)
        return out
    return {"kind": d.kind, "params": [float(p) for p in d.params]}


# ===================================================================
# subcommands
# ===================================================================

def _cmd_transform(args) -> dict:
    d = parse_dist(args.dist)
    if isinstance(d, NamedDist):
        res = {"input": _named_json(d), "mean": named_mean(d)}
        try:
            res["size_biased"] = _named_json(closed_form_size_bias(d))
        except NoClosedForm:
            res["size_biased"] = dist_to_json(size_bias_discrete(tabulate_named(d)))
        return res
    if isinstance(d, GridDensity):
        return {"input": dist_to_json(d), "mean": d.mean(),
                "size_biased": dist_to_json(size_bias_density(d))}
    return {"input": dist_to_json(d), "mean": d.mean(),
            "size_biased": dist_to_json(size_bias_discrete(d))}


def _cmd_sum(args) -> dict:
    terms = [_as_discrete(parse_dist(t)) for t in args.dist]
    s = IndependentSum(tuple(terms))
    idx = index_distribution(s)
    return {"terms": len(terms),
            "index_probs": [float(p) for p in idx.probs],
            "size_biased_sum": dist_to_json(size_biased_sum_pmf(s))}


def _cmd_product(args) -> dict:
    terms = [_as_discrete(parse_dist(t)) for t in args.dist]
    return {"factors": len(terms),
            "size_biased_product": dist_to_json(size_biased_product_pmf(terms))}


def _cmd_compound_poisson(args) -> dict:
    if args.levy:
        with open(args.levy[1:] if args.levy.startswith("@") else args.levy) as fh:
            levy = levy_from_json(json.load(fh))
    else:
        if args.a is None or args.increment is None:
            raise SizeBiasError("need either --levy or both --a and --increment")
        levy = compound_poisson_from_increment(_as_discrete(parse_dist(args.increment)), args.a)
    pmf = pmf_recursion(levy, args.n)
    return {"a": levy.a, "alpha0": levy.alpha0,
            "jumps": [[y, r] for y, r in levy.jumps],
            "pmf": [float(p) for p in pmf.ps],
            "tail_bound": pmf.tail_bound}


def _cmd_id_test(args) -> dict:
    probs = [float(t) for t in args.pmf.split(",")]
    res = extract_increment(DiscreteDist.from_pmf(probs))
    if not res.is_id:
        return {"is_id": False, "witness_index": int(res.witness_index)}
    return {"is_id": True, "a": res.a,
            "increment": dist_to_json(res.increment),
            "jump_rates": [[k, r] for k, r in res.jump_rates()]}


def _cmd_dickman(args) -> dict:
    g = dickman_solve(args.a, h=args.h, xmax=args.xmax)
    out = dist_to_json(g)
    out["mass"] = g.integral()
    out["mean"] = g.mean()
    return out


def _cmd_buchstab(args) -> dict:
    g = buchstab_solve(args.a, args.b, h=args.h, xmax=args.xmax)
    out = dist_to_json(g)
    out["mass"] = g.atom0 + g.integral()
    out["mean"] = g.mean()
    return out


def _cmd_orbit(args) -> dict:
    o = orbit_pmf(args.b, args.c, M=args.half_width)
    d = orbit_as_dist(o)
    return {"b": o.b, "c": o.c, "half_width": o.M, "normalizer": o.t,
            "mean": d.mean(), "size_bias_check": orbit_size_bias_check(o),
            "atoms": [[float(x), float(p)] for x, p in zip(o.xs, o.masses)]}


def _cmd_stieltjes(args) -> dict:
    s = StieltjesDensity(args.m, args.delta, args.sigma)
    ks = list(range(args.kmax + 1))
    return {"m": s.m, "delta": s.delta, "sigma": s.sigma,
            "moments": [stieltjes_moment(s, k) for k in ks],
            "lognormal_moments": [math.exp(k * k * s.sigma ** 2 / 2.0) for k in ks]}


def _cmd_berg(args) -> dict:
    d = berg_pmf(args.sign, args.c, M=args.half_width)
    return {"sign": args.sign, "c": args.c,
            "moments": [moment(d, k) for k in range(4)],
            "size_bias_check": orbit_size_bias_check(d, c=args.c),
            "atoms": [[float(x), float(p)] for x, p in zip(d.xs, d.ps)]}


def _cmd_mixture_check(args) -> dict:
    return {"c": args.c, "k_c": mixture_normalizer(args.c),
            "max_reconstruction_gap": mixture_reconstruction_check(args.c)}


def _cmd_midzuno(args) -> dict:
    pop = load_population_csv(args.csv)
    rng = derive_rng(args.seed, "midzuno")
    subset = midzuno_sample(pop, args.m, rng)
    return {"estimate": ratio_estimate(pop, subset),
            "subset": [int(i) for i in subset],
            "seed": args.seed}


def _cmd_renewal(args) -> dict:
    dist = parse_dist(args.interarrival)
    sizes = [args.n // args.workers + (1 if w < args.n % args.workers else 0)
             for w in range(args.workers)]

    def run(w):
        if sizes[w] == 0:
            return []
        return simulate_renewal_inspection(dist, args.horizon, sizes[w],
                                           derive_rng(args.seed, "renewal", w))

    if args.workers == 1:
        chunks = [run(0)]
    else:
        with ThreadPoolExecutor(max_workers=args.workers) as pool:
            chunks = list(pool.map(run, range(args.workers)))
    lengths = np.array([s.covering_length for ch in chunks for s in ch])
    waits = np.array([s.residual_wait for ch in chunks for s in ch])
    return {"n": int(lengths.size), "workers": args.workers,
            "mean_covering": float(lengths.mean()),
            "se_covering": float(lengths.std(ddof=1) / math.sqrt(lengths.size)),
            "mean_wait": float(waits.mean()),
            "seed": args.seed}


def _cmd_skorohod(args) -> dict:
    d = _as_discrete(parse_dist(args.dist, signed=True))
    sc = skorohod_coupling(d)
    exit_law = skorohod_exit_pmf(sc)
    return {"p_plus": sc.p_plus, "p_zero": sc.p_zero, "p_minus": sc.p_minus,
            "uv_atoms": [[u, v, p] for u, v, p in sc.uv_atoms],
            "exit_atoms": [[float(x), float(p)] for x, p in zip(exit_law.xs, exit_law.ps)],
            "expected_exit_time": expected_exit_time(sc)}


def _cmd_stein(args) -> dict:
    bound, exact = binomial_poisson_check(args.n, args.p)
    return {"n": args.n, "p": args.p, "rate": args.n * args.p,
            "bound": bound, "exact_tv": exact}


def _cmd_concentration(args) -> dict:
    cp = ConcentrationParams(args.a, args.c, args.x)
    if args.x >= args.a:
        tight, gauss = concentration_upper(cp)
        res = {"side": "upper", "tight": tight, "gaussian": gauss}
        if args.x > args.a:
            res["iteration"] = tail_iteration(cp)
        return res
    tight, gauss = concentration_lower(cp)
    return {"side": "lower", "tight": tight, "gaussian": gauss}


# ===================================================================
# wiring
# ===================================================================

def _u64(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError(f"seed {v} outside [0, 2^64)")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_u64, default=DEFAULT_SEED,
                        help="64-bit stream seed (fixed default for reproducibility)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", default=None, help="write output here instead of stdout")

    p = argparse.ArgumentParser(prog="sizebias",
                                description="size-bias transform toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, **kw):
        sp = sub.add_parser(name, parents=[common], **kw)
        sp.set_defaults(func=fn)
        return sp

    sp = add("transform", _cmd_transform, help="size-bias one distribution")
    sp.add_argument("--dist", required=True)

    sp = add("sum", _cmd_sum, help="size-bias an independent sum")
    sp.add_argument("--dist", action="append", required=True,
                    help="repeat once per summand")

    sp = add("product", _cmd_product, help="size-bias an independent product")
    sp.add_argument("--dist", action="append", required=True,
                    help="repeat once per factor")

    sp = add("compound-poisson", _cmd_compound_poisson,
             help="pmf of an integer compound Poisson law")
    sp.add_argument("--levy", help="jump representation as @file.json")
    sp.add_argument("--a", type=float, help="mean, when building from an increment")
    sp.add_argument("--increment", help="increment distribution")
    sp.add_argument("--n", type=_positive, default=50, help="pmf computed on 0..n")

    sp = add("id-test", _cmd_id_test, help="infinite divisibility test")
    sp.add_argument("--pmf", required=True, help="comma list of masses on 0,1,2,...")

    sp = add("dickman", _cmd_dickman, help="delay-equation density, uniform increments")
    sp.add_argument("--a", type=float, required=True)
    sp.add_argument("--h", type=float, default=1e-3)
    sp.add_argument("--xmax", type=float, default=5.0)

    sp = add("buchstab", _cmd_buchstab, help="delay-equation density, gapped increments")
    sp.add_argument("--a", type=float, required=True)
    sp.add_argument("--b", type=float, required=True)
    sp.add_argument("--h", type=float, default=1e-3)
    sp.add_argument("--xmax", type=float, default=5.0)

    sp = add("orbit", _cmd_orbit, help="geometric-grid law with lognormal moments")
    sp.add_argument("--b", type=float, required=True)
    sp.add_argument("--c", type=float, required=True)
    sp.add_argument("--half-width", type=_positive, default=None)

    sp = add("stieltjes", _cmd_stieltjes, help="perturbed lognormal density moments")
    sp.add_argument("--m", type=_positive, default=1)
    sp.add_argument("--delta", type=float, default=0.5)
    sp.add_argument("--sigma", type=float, default=1.0)
    sp.add_argument("--kmax", type=_positive, default=4)

    sp = add("berg", _cmd_berg, help="signed-perturbation lognormal-moment law")
    sp.add_argument("--sign", type=int, choices=(-1, 1), required=True)
    sp.add_argument("--c", type=float, required=True)
    sp.add_argument("--half-width", type=_positive, default=None)

    sp = add("mixture-check", _cmd_mixture_check,
             help="lognormal as mixture of geometric-grid laws")
    sp.add_argument("--c", type=float, required=True)

    sp = add("midzuno", _cmd_midzuno, help="unequal-probability sampling estimate")
    sp.add_argument("--csv", required=True, help="population file, header x,y")
    sp.add_argument("--m", type=_positive, required=True, help="sample size")

    sp = add("renewal", _cmd_renewal, help="inspection-paradox Monte Carlo")
    sp.add_argument("--interarrival", required=True)
    sp.add_argument("--horizon", type=float, default=200.0)
    sp.add_argument("--n", type=_positive, default=10000)
    sp.add_argument("--workers", type=_positive, default=1,
                    help="independent streams; 1 is the reference")

    sp = add("skorohod", _cmd_skorohod, help="Brownian interval embedding a mean-zero law")
    sp.add_argument("--dist", required=True,
                    help="mean-zero law, e.g. atoms:-1=0.5,1=0.5 or @file.json")

    sp = add("stein", _cmd_stein, help="Poisson approximation bound vs exact distance")
    sp.add_argument("--n", type=_positive, required=True)
    sp.add_argument("--p", type=float, required=True)

    sp = add("concentration", _cmd_concentration, help="tail bounds from a bounded coupling")
    sp.add_argument("--a", type=float, required=True, help="mean")
    sp.add_argument("--c", type=float, required=True, help="coupling bound")
    sp.add_argument("--x", type=float, required=True, help="evaluation point")

    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig.from_namespace(args)
    try:
        result = args.func(args)
    except SizeBiasError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (ValueError, OSError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except Exception:
        traceback.print_exc()
        return 1
    try:
        _emit(result, cfg)
    except BrokenPipeError:
        # reader went away; silence the shutdown flush and bail quietly
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 0
    return 0


if __name__ == "__main__":
    sys.exit(main())
