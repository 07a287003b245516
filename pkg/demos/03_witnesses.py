"""
Explicit move sequences
=======================

The normalization routines return the moves they used, so every claim can
be replayed.  Here a random generating 4-tuple of S_3 is carried to a fixed
pair of generators followed by identities, and tuples over an extension of
an abelian group are shown to be redundant.
"""

import numpy as np

from nielsenlab.groups import build
from nielsenlab.nielsen import replay, trace, witness_to_json
from nielsenlab.normalize import (canonicalize_epi, dunwoody_abelian, exact_sequence,
                                  exseq_redundancy, jordan_canonical, verify_form)

s3 = build("sym:3")
t = tuple(s3.parse_element(x) for x in ("(13)", "(23)", "(12)", "(132)"))
targets = (s3.parse_element("(12)"), s3.parse_element("(123)"))
form = canonicalize_epi(s3, t, targets)
print("source", [s3.label(x) for x in t])
print("target", [s3.label(x) for x in form.target], f"after {len(form.witness)} moves")
print("first moves", [str(m) for m in form.witness[:4]])
print("replays with the image preserved:", verify_form(s3, form))

# abelian groups need only one spare slot
f3 = build("ab:3,3")
e1, e2, e12 = (f3.index_of_row(r) for r in ([1, 0], [0, 1], [1, 1]))
form = dunwoody_abelian(f3, (e1, e2, e12), (e1, e2))
print("(F_3)^2:", [f3.label(x) for x in form.target], "moves:", len(form.witness))

# the lamplighter group is an extension of (Z/2)^3 by Z/3
lamp = build("lamp:3,2")
data = exact_sequence(lamp)
print(f"lamplighter: |A|={data.A.order}, d(A)={data.dA}, ic~(Q)={data.icQ_tilde}")
rng = np.random.default_rng(0)
t = tuple(int(x) for x in rng.integers(0, lamp.order, size=data.exseq_bound))
form = exseq_redundancy(lamp, t, data)
print("redundancy witness ends in", form.target[-1], "(the identity) and verifies:",
      verify_form(lamp, form))

t = tuple(int(x) for x in rng.integers(0, lamp.order, size=data.jordan_bound))
form = jordan_canonical(lamp, t, data)
print("canonical form", [lamp.label(x) for x in form.target])

# the witness as it would be written to disk
print(witness_to_json(form.witness[:3]))
assert replay(lamp, form.witness, t) == form.target
print("intermediate tuples:", sum(1 for _ in trace(lamp, form.witness, t)))
