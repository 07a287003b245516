"""Shared fixtures and brute-force oracles.

The oracles here deliberately avoid the package's closure and lattice code:
they work with plain Python sets and the group's multiplication only.
"""

import itertools

import pytest

from nielsenlab.groups import build, dihedral, quaternion

CORPUS_SPECS = ["cyc:6", "ab:2,2", "ab:3,3", "sym:3", "sym:4", "lamp:3,2", "gl:2,3"]


def corpus_group(name):
    if name == "D4":
        return dihedral(4)
    if name == "Q8":
        return quaternion()
    return build(name)


CORPUS = CORPUS_SPECS + ["D4", "Q8"]


@pytest.fixture(scope="session")
def groups():
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = corpus_group(name)
        return cache[name]

    return get


def brute_closure(g, gens):
    """Subgroup generated by ``gens`` as a frozenset (repeated products)."""
    members = {0}
    frontier = [0]
    gens = list(gens)
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = g.mul(x, s)
                if y not in members:
                    members.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(members)


def brute_subgroups_small(g):
    """All subsets containing the identity that are closed under products."""
    rest = list(range(1, g.order))
    found = set()
    for k in range(len(rest) + 1):
        for combo in itertools.combinations(rest, k):
            s = {0, *combo}
            if all(g.mul(a, b) in s for a in s for b in s):
                found.add(frozenset(s))
    return found


def brute_subgroups_generated(g, k=3):
    """Subgroups generated by at most ``k`` elements."""
    found = set()
    for r in range(k + 1):
        for combo in itertools.combinations(range(1, g.order), r):
            found.add(brute_closure(g, combo))
    return found


def brute_generating_count(g, n):
    return sum(1 for t in itertools.product(range(g.order), repeat=n)
               if len(brute_closure(g, t)) == g.order)


def fixed_point_subgroups(g):
    """Subgroups by closing all pairs, then joining found subgroups pairwise
    until nothing new appears.  Every subgroup is a join of cyclic ones, so
    the fixed point is the whole lattice."""
    found = {brute_closure(g, (a, b)) for a in range(g.order) for b in range(a, g.order)}
    frontier = set(found)
    while frontier:
        new = set()
        for h in frontier:
            for k in found:
                j = brute_closure(g, sorted(h | k))
                if j not in found:
                    new.add(j)
        found |= new
        frontier = new
    return found



# acceptance criteria report ---------------------------------------------------

ACCEPTANCE: dict[int, str] = {}


def record_criterion(number, passed, detail, seconds):
    line = f"criterion {number}: {'PASS' if passed else 'FAIL'} ({seconds:.1f} s) {detail}"
    ACCEPTANCE[number] = line
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
