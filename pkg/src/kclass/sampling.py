"""Seeded random generators for graphs, groups, and invariants.

Everything takes an explicit random.Random so test corpora are
reproducible.  The invariant generator mixes construction routes on
purpose: extensions with a vanishing K1 row, pairs of extensions glued
by zero connecting maps, cyclic hexagons with unit twists, and
invariants computed from random one-ideal graphs.
"""
from __future__ import annotations

import random

from .matrix import IntMatrix
from .groups import FgAbelianGroup, GroupHom
from .ext import ext1, realize_extension
from .graphalg import (DirectedGraph, hereditary_saturated_sets,
                       classify_simple, subgraph, quotient_graph,
                       one_ideal_invariant, AF, PURELY_INFINITE)
from .sixterm import (SixTermInvariant, all_positive_cone, standard_free_cone,
                      unordered_cone, NODES, MAP_KEYS)


def random_matrix(rng: random.Random, rows: int, cols: int,
                  lo: int = -9, hi: int = 9) -> IntMatrix:
    return IntMatrix([[rng.randint(lo, hi) for _ in range(cols)]
                      for _ in range(rows)])


_TORSION_CHOICES = [(), (2,), (3,), (4,), (5,), (6,), (2, 2), (2, 4), (3, 3),
                    (2, 6), (8,), (9,), (12,), (2, 8), (3, 6), (2, 12), (4, 4),
                    (5, 5), (2, 16), (6, 6), (36,)]


def random_group(rng: random.Random, max_rank: int = 2) -> FgAbelianGroup:
    return FgAbelianGroup(rng.randint(0, max_rank),
                          rng.choice(_TORSION_CHOICES))


def random_finite_group(rng: random.Random) -> FgAbelianGroup:
    return FgAbelianGroup(0, rng.choice(_TORSION_CHOICES))


def random_one_ideal_graph(rng: random.Random, max_vertices: int = 6,
                           max_mult: int = 3, attempts: int = 4000) -> DirectedGraph:
    """A graph with exactly one nontrivial hereditary saturated set whose
    ideal and quotient both classify, found by rejection sampling."""
    for _ in range(attempts):
        nb = rng.randint(1, max_vertices - 1)
        na = rng.randint(1, max_vertices - nb)
        n = nb + na
        adj = [[0] * n for _ in range(n)]
        # ideal block occupies the first nb vertices; no edges leave it
        for i in range(nb):
            for j in range(nb):
                if rng.random() < 0.5:
                    adj[i][j] = rng.randint(1, max_mult)
        for i in range(nb, n):
            for j in range(n):
                if rng.random() < 0.45:
                    adj[i][j] = rng.randint(1, max_mult)
        g = DirectedGraph([f"v{i}" for i in range(n)], IntMatrix(adj))
        nontrivial = [d for d in hereditary_saturated_sets(g) if d.nontrivial]
        if len(nontrivial) != 1:
            continue
        hset = nontrivial[0].vertices
        if classify_simple(subgraph(g, hset)) not in (AF, PURELY_INFINITE):
            continue
        if classify_simple(quotient_graph(g, hset)) not in (AF, PURELY_INFINITE):
            continue
        return g
    raise RuntimeError("no admissible graph found within the attempt budget")


def _random_cone(rng: random.Random, G: FgAbelianGroup):
    choices = [all_positive_cone(), unordered_cone()]
    if not G.torsion:
        choices.append(standard_free_cone())
    return rng.choice(choices)


def _random_extension(rng: random.Random, small: bool = False):
    """A short exact sequence 0 -> B -> G -> A -> 0 with its maps."""
    opts = [(), (2,), (3,), (4,), (6,)]
    while True:
        A = FgAbelianGroup(rng.randint(0, 1), rng.choice(opts))
        B = FgAbelianGroup(rng.randint(0, 1), rng.choice(opts))
        if small and (A.free_rank + B.free_rank > 1):
            continue
        if A.ngens + B.ngens == 0:
            continue
        break
    E = ext1(A, B)
    raw = [rng.randrange(24) for _ in range(E.nblocks * E.block_size)]
    x = E.element(raw) if raw else E.zero()
    G, incl, proj = realize_extension(x)
    return A, B, G, incl, proj


def _vanishing_k1_invariant(rng: random.Random) -> SixTermInvariant:
    A, B, G, incl, proj = _random_extension(rng)
    T = FgAbelianGroup(0, ())
    def z(d, c):
        return GroupHom(d, c, IntMatrix.zeros(c.ngens, d.ngens))
    groups = {"K0B": B, "K0E": G, "K0A": A, "K1A": T, "K1E": T, "K1B": T}
    maps = {"K0B->K0E": incl, "K0E->K0A": proj, "K0A->K1B": z(A, T),
            "K1B->K1E": z(T, T), "K1E->K1A": z(T, T), "K1A->K0B": z(T, B)}
    cones = {"K0B": _random_cone(rng, B), "K0E": unordered_cone(),
             "K0A": _random_cone(rng, A)}
    return SixTermInvariant(groups, maps, cones)


def _glued_pair_invariant(rng: random.Random) -> SixTermInvariant:
    # two short exact rows with zero connecting maps
    A0, B0, G0, incl0, proj0 = _random_extension(rng)
    A1, B1, G1, incl1, proj1 = _random_extension(rng, small=True)
    def z(d, c):
        return GroupHom(d, c, IntMatrix.zeros(c.ngens, d.ngens))
    groups = {"K0B": B0, "K0E": G0, "K0A": A0,
              "K1B": B1, "K1E": G1, "K1A": A1}
    maps = {"K0B->K0E": incl0, "K0E->K0A": proj0, "K0A->K1B": z(A0, B1),
            "K1B->K1E": incl1, "K1E->K1A": proj1, "K1A->K0B": z(A1, B0)}
    cones = {"K0B": _random_cone(rng, B0), "K0E": unordered_cone(),
             "K0A": _random_cone(rng, A0)}
    return SixTermInvariant(groups, maps, cones)


def _unit_cycle_invariant(rng: random.Random) -> SixTermInvariant:
    # all groups Z/p^2, every map p times a unit: exact all around
    p = rng.choice((2, 3))
    G = FgAbelianGroup(0, (p * p,))
    units = [u for u in range(1, p * p) if u % p != 0]
    groups = {n: G for n in NODES}
    maps = {k: GroupHom(G, G, IntMatrix([[p * rng.choice(units) % (p * p)]]))
            for k in MAP_KEYS}
    cones = {"K0B": _random_cone(rng, G), "K0E": unordered_cone(),
             "K0A": _random_cone(rng, G)}
    return SixTermInvariant(groups, maps, cones)


def random_valid_invariant(rng: random.Random) -> SixTermInvariant:
    route = rng.random()
    if route < 0.35:
        return _vanishing_k1_invariant(rng)
    if route < 0.65:
        return _glued_pair_invariant(rng)
    if route < 0.8:
        return _unit_cycle_invariant(rng)
    return one_ideal_invariant(random_one_ideal_graph(rng))


def invariant_corpus(seed: int, count: int) -> list[SixTermInvariant]:
    rng = random.Random(seed)
    return [random_valid_invariant(rng) for _ in range(count)]
