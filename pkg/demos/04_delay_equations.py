"""Fixed points of the transform with uniform and gapped increments.

If tilting a law is the same as adding an independent uniform (0,1)
increment, its density solves a delay integral equation.  Uniform on
(b,1) instead produces an atom at zero and support gaps.  Both are
solved on a grid here.
"""

import math

import sizebias as sb

print("=== uniform (0,1) increments ===")
g = sb.dickman_solve(1.0)
eg = math.exp(0.5772156649015329)
print(f"  f * e^gamma at 0.5:  {g.values[500] * eg:.8f}   (expect 1)")
print(f"  f * e^gamma at 2.0:  {g.values[2000] * eg:.8f}   (expect 1 - ln 2 = {1 - math.log(2):.8f})")
print(f"  total mass:          {g.integral():.8f}")
print(f"  mean:                {g.mean():.8f}   (a = 1)")

g2 = sb.dickman_solve(2.0, xmax=12.0)
print(f"  with a = 2, mean:    {g2.mean():.8f}   (fixed point pins the mean at a)")

print()
print("=== uniform (b,1) increments: atom plus gapped density ===")
a, b = 1.0, 0.5
h = sb.buchstab_solve(a, b)
print(f"  atom at zero: {h.atom0}   closed form b^(a/(1-b)) = {b ** (a / (1 - b))}")
print(f"  total mass:   {h.atom0 + h.integral():.8f}")
print(f"  density vanishes on (0, b): f(0.3) = {h.values[300]}")
print(f"  first jump, right limit at b: {h.values[500] * 2:.6f}"
      f"   (expect atom / (b (1-b)) = {h.atom0 / (b * (1 - b)):.6f})")
