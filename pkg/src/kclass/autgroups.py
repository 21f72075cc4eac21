"""Generating sets for automorphism groups of f.g. abelian groups.

The generators follow the block structure of Aut(Z^r + T): a free block
GL(r, Z), a torsion block Aut(T) generated by diagonal units and
elementary transvections between torsion coordinates, and unipotent
mixed maps sending a free generator into the torsion part.
"""
from __future__ import annotations

import itertools
from math import gcd
from typing import Iterable, Sequence

from .matrix import IntMatrix
from .groups import FgAbelianGroup, GroupHom


def unit_group_generators(d: int) -> list[int]:
    """A small generating set for the unit group of Z/d (greedy closure)."""
    if d <= 2:
        return []
    units = [u for u in range(1, d) if gcd(u, d) == 1]
    gens: list[int] = []
    reached = {1}
    for u in units:
        if u in reached:
            continue
        gens.append(u)
        # close the subgroup generated so far
        frontier = list(reached)
        while frontier:
            new = []
            for a in frontier:
                for g in gens:
                    b = (a * g) % d
                    if b not in reached:
                        reached.add(b)
                        new.append(b)
            frontier = new
        if len(reached) == len(units):
            break
    return gens


def _identity_cols(G: FgAbelianGroup) -> list[list[int]]:
    n = G.ngens
    return [[1 if i == j else 0 for i in range(n)] for j in range(n)]


def _hom_from_cols(G: FgAbelianGroup, cols: Sequence[Sequence[int]]) -> GroupHom:
    return GroupHom(G, G, IntMatrix.from_columns(cols, rows=G.ngens))


def aut_generators(G: FgAbelianGroup) -> list[GroupHom]:
    """Automorphisms generating Aut(G).

    Free block: adjacent transpositions, one transvection, one sign flip.
    Torsion block: diagonal units of each Z/d_i, elementary transvections
    t_a -> t_a + c t_b with the minimal well-defined coefficient
    c = d_b / gcd(d_a, d_b), and swaps of equal-order coordinates.
    Mixed block: free generator -> itself + a torsion generator.
    Any automorphism factors through these blocks, so the list generates.
    """
    r = G.free_rank
    tor = G.torsion
    k = len(tor)
    gens: list[GroupHom] = []

    for f in range(r - 1):
        cols = _identity_cols(G)
        cols[f], cols[f + 1] = cols[f + 1], cols[f]
        gens.append(_hom_from_cols(G, cols))
    if r >= 1:
        cols = _identity_cols(G)
        cols[0] = [-c for c in cols[0]]
        gens.append(_hom_from_cols(G, cols))
    if r >= 2:
        cols = _identity_cols(G)
        cols[0][1] += 1
        gens.append(_hom_from_cols(G, cols))

    for i, d in enumerate(tor):
        for u in unit_group_generators(d):
            cols = _identity_cols(G)
            cols[r + i][r + i] = u
            gens.append(_hom_from_cols(G, cols))

    for a in range(k):
        for b in range(k):
            if a == b:
                continue
            lam = tor[b] // gcd(tor[a], tor[b])
            cols = _identity_cols(G)
            cols[r + a][r + b] += lam
            gens.append(_hom_from_cols(G, cols))

    for a in range(k - 1):
        if tor[a] == tor[a + 1]:
            cols = _identity_cols(G)
            cols[r + a], cols[r + a + 1] = cols[r + a + 1], cols[r + a]
            gens.append(_hom_from_cols(G, cols))

    for f in range(r):
        for i in range(k):
            cols = _identity_cols(G)
            cols[f][r + i] += 1
            gens.append(_hom_from_cols(G, cols))

    return gens


def subgroup_closure(gens: Sequence[GroupHom], limit: int = 10 ** 6,
                     group: FgAbelianGroup | None = None) -> list[GroupHom] | None:
    """All products of the generators, or None past ``limit`` elements.

    Intended for automorphisms of finite groups, where closing under
    composition automatically closes under inverse.  ``group`` supplies
    the underlying group when the generator list is empty.
    """
    if not gens:
        return [GroupHom.identity(group)] if group is not None else []
    G = gens[0].domain
    ident = GroupHom.identity(G)
    seen = {ident}
    frontier = [ident]
    while frontier:
        new = []
        for h in frontier:
            for g in gens:
                c = g @ h
                if c not in seen:
                    seen.add(c)
                    if len(seen) > limit:
                        return None
                    new.append(c)
        frontier = new
    return sorted(seen, key=lambda h: h.matrix.to_lists())


def word_ball(gens: Sequence[GroupHom], radius: int, limit: int = 10 ** 6) -> list[GroupHom]:
    """Distinct products of at most ``radius`` generators or inverses.

    Deterministic order: breadth first, ties by matrix entries.  Useful
    for sampling infinite automorphism groups; truncated at ``limit``.
    """
    if not gens:
        return []
    G = gens[0].domain
    alphabet: list[GroupHom] = []
    for g in gens:
        alphabet.append(g)
        try:
            inv = g.inverse()
        except ValueError:
            continue
        if inv not in alphabet:
            alphabet.append(inv)
    ident = GroupHom.identity(G)
    seen = {ident}
    order = [ident]
    frontier = [ident]
    for _ in range(radius):
        new = []
        for h in frontier:
            for g in alphabet:
                c = g @ h
                if c not in seen:
                    seen.add(c)
                    order.append(c)
                    new.append(c)
                    if len(order) >= limit:
                        return order
        new.sort(key=lambda h: h.matrix.to_lists())
        frontier = new
    return order


def aut_brute(G: FgAbelianGroup) -> list[GroupHom]:
    """Every automorphism of a small finite group, by exhaustion.

    Test oracle only: enumerates all generator images, so the cost is
    |G| ** (number of generators).
    """
    if G.free_rank != 0:
        raise ValueError("brute enumeration needs a finite group")
    n = G.ngens
    if n == 0:
        return [GroupHom.identity(G)]
    ranges = [range(d) for d in G.torsion]
    out = []
    all_coords = list(itertools.product(*ranges))
    for cols in itertools.product(all_coords, repeat=n):
        try:
            h = _hom_from_cols(G, cols)
        except ValueError:
            continue
        if h.is_isomorphism():
            out.append(h)
    return out
