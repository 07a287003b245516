"""
Rank, incompressibility and chain length
========================================

Small groups carry several integer invariants that bound one another:
d <= ic <= ic~ <= cl <= log2 |G|.  This script computes them for a few
groups and prints the witnesses.
"""

import math

from nielsenlab.groups import build, dihedral, quaternion
from nielsenlab.invariants import invariants, is_incompressible

# a few groups: symmetric groups, a lamplighter and two groups of order 8
groups = [build("sym:3"), build("sym:4"), build("sym:5"), build("lamp:3,2"),
          dihedral(4), quaternion(), build("gl:2,3")]

print(f"{'group':>10} {'|G|':>5} {'d':>3} {'ic':>3} {'ic~':>4} {'cl':>3} {'log2':>6}")
for g in groups:
    rep = invariants(g)
    print(f"{g.name:>10} {g.order:>5} {rep.d:>3} {rep.ic:>3} {rep.ic_tilde:>4} {rep.cl:>3} "
          f"{math.log2(g.order):>6.2f}")

# For S_n the chain length has a closed form in terms of the binary digits of n
for n in (3, 4, 5):
    formula = (3 * n - 1) // 2 - bin(n).count("1")
    print(f"S{n}: cl formula gives {formula}")

# Incompressible sets: {2, 3} in Z/6 generates and neither element lies in
# the subgroup generated by the other, while {2, 1} is compressible
z6 = build("cyc:6")
print("Z/6 {2,3} incompressible:", is_incompressible(z6, [2, 3]))
print("Z/6 {2,1} incompressible:", is_incompressible(z6, [2, 1]))

# witnesses are element labels
rep = invariants(build("sym:4"))
print("S4 largest incompressible generating set:", rep.witnesses["ic"])
