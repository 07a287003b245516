"""
Exact thresholds and integer symplectic reduction
=================================================

Thresholds of the form a + c*log2(J) are compared exactly.  The second part
reduces primitive integer vectors to the first basis vector with symplectic
matrices and stabilizes residue vectors over finite abelian groups.
"""

from nielsenlab.constants import N_sharp, JordanPolicy, report, intro_bound
from nielsenlab.symplectic import is_symplectic, matvec, sp_reduce, stabilize

for m in (1, 2, 3, 71):
    rep = report(m)
    tag = "exact" if rep.J_exact else "lower bound on J"
    print(f"m={m}: N#={rep.N_sharp} (smallest n {rep.N_sharp_min_n}), "
          f"sufficient n={rep.sufficient_n_thmA}, intro bound(b=0)={intro_bound(m, 0)} [{tag}]")

# a user table replaces the factorial rule where it is known
policy = JordanPolicy("user_supplied", {2: 12})
print("N#(2) with J(2)=12:", N_sharp(2, policy), "->", N_sharp(2, policy).ceil())

w = [6, 10, 15, 4]
m = sp_reduce(w)
print("M w =", matvec(m, w), "symplectic:", is_symplectic(m))

# a vector in (Z/2 + Z/3)^6, one row per coordinate
v = [[1, 2], [0, 1], [1, 0], [1, 1], [0, 2], [1, 2]]
out = stabilize(v, 3, [2, 3])
print("stabilized:", out.vector, "check:", out.check())
