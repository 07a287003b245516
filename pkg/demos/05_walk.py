"""
Product replacement walk
========================

A lazy random walk of Nielsen moves on generating triples of S_3.  The
uniform distribution on the orbit is invariant, and the empirical occupation
measure approaches it as the walk runs longer.
"""

from nielsenlab.groups import build
from nielsenlab.sampling import WalkConfig, invariance_check, uniform_on, walk
from nielsenlab.nielsen import orbit

s3 = build("sym:3")
start = (s3.parse_element("(12)"), s3.parse_element("(123)"), 0)

for steps in (10**3, 10**4, 10**5, 10**6):
    rep = walk(WalkConfig(s3, 3, start, steps, seed=1))
    print(f"{steps:>8} steps: TV to uniform {rep.tv:.4f}, coverage {rep.coverage:.2f}")

tuples = orbit(s3, start).tuples()
print("orbit size", len(tuples))
print("uniform measure moved by one step, worst TV:", invariance_check(s3, 3, uniform_on(tuples)))
print("point mass moved by one step, worst TV:", invariance_check(s3, 3, {start: 1.0}))
