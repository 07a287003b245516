"""
Orbits of Nielsen moves on generating tuples
============================================

Nielsen moves never change the subgroup generated by a tuple.  Once the
tuple is long enough, each set Epi(F_n; H) is a single orbit.  For short
tuples in (F_q)^2 the determinant of the basis is an extra invariant, up to
sign, and splits Epi(F_2; (F_q)^2) into (q-1)/2 orbits.
"""

from nielsenlab.groups import build
from nielsenlab.invariants import ic_tilde, d_tilde, lattice_of
from nielsenlab.nielsen import apply, classify, epi_count, orbit, rmul

z6 = build("cyc:6")
# the move RightMulInv(2,1) sends (2,3) to (2,1)
print("(2,3) ->", apply(z6, rmul(1, 0, inverse=True), (2, 3)))
print("orbit of (2,3) in Z/6 has", len(orbit(z6, (2, 3))), "tuples")

for q in (3, 5, 7):
    g = build(f"ab:{q},{q}")
    lat = lattice_of(g)
    rep = classify(g, 2, lat)
    epi = rep.orbits_with_image(lat.full)
    labels = [o.label for o in epi]
    print(f"(F_{q})^2, n=2: {len(epi)} orbit(s) on Epi, determinant classes {labels}")

# With n = ic~ + d~ the orbits are exactly the Epi sets
g = build("sym:4")
lat = lattice_of(g)
n = ic_tilde(g, lat)[0] + d_tilde(g, lat)[0]
rep = classify(g, n, lat)
print(f"S4, n={n}: {len(rep.orbits)} orbits for {len(lat)} subgroups, "
      f"matched={rep.matched_classification}")
full = rep.orbits_with_image(lat.full)[0]
print("generating orbit size", full.size, "= |Epi|", epi_count(g, n, lat))
