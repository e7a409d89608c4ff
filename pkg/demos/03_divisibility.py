"""Testing infinite divisibility through the additive increment.

A nonnegative integer law is infinitely divisible exactly when its
tilted version can be written as itself plus an independent increment.
Unwinding the pmf recursion recovers that increment; a negative
coefficient on the way is a certificate of failure.
"""

import sizebias as sb

print("=== a Poisson law: increment concentrated at 1 ===")
levy = sb.LevyRepr(1.5, 0.0, ((1.0, 1.5),))
res = sb.extract_increment(sb.pmf_recursion(levy, 50))
print("  divisible:", res.is_id, " mean:", round(res.a, 10))
print("  increment mass at 1:", round(res.increment.prob_at(1.0), 10))

print()
print("=== a geometric law: logarithmic jump rates ===")
p = 0.4
res = sb.extract_increment(sb.tabulate_named(sb.NamedDist("geometric", (p,))))
print("  divisible:", res.is_id)
rates = dict(res.jump_rates())
print("  rate at k vs (1-p)^k / k:")
for k in (1.0, 2.0, 3.0):
    print(f"    k={int(k)}: {rates[k]:.8f} vs {(1 - p) ** k / k:.8f}")
print("  log-convex pmf (sufficient condition):",
      sb.log_convexity_check(sb.tabulate_named(sb.NamedDist("geometric", (p,)))))

print()
print("=== two-point laws always fail ===")
res = sb.extract_increment(sb.DiscreteDist.from_pmf([0.25, 0.5, 0.25]))
print("  divisible:", res.is_id,
      " first negative coefficient: index", res.witness_index,
      "value", res.witness_value)
