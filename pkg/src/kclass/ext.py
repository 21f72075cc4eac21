"""Extension groups Ext(A, B) over the integers and extension classes.

For A with invariant factors d_1 | ... | d_k the group Ext(A, B) is
B/d_1 B + ... + B/d_k B.  Elements are stored in block coordinates
aligned to the torsion generators of A: block i is a vector over the
canonical generators of B, with each coordinate reduced modulo the
block modulus (d_i against a free generator of B, gcd(d_i, e) against a
torsion generator of order e).  The free part of A contributes nothing.
"""
from __future__ import annotations

from math import gcd
from typing import Callable, Sequence

from .matrix import IntMatrix
from .groups import (
    FgAbelianGroup,
    GroupHom,
    Presentation,
    cokernel,
    is_exact_pair,
    kernel,
    relation_matrix,
)


class ExtGroup:
    """Ext(source, target) with a basis aligned to the source's torsion generators."""

    __slots__ = ("source", "target", "moduli", "group", "_pres")

    def __init__(self, source: FgAbelianGroup, target: FgAbelianGroup):
        moduli = []
        for d in source.torsion:
            for e in target.gen_orders:
                moduli.append(d if e == 0 else gcd(d, e))
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "moduli", tuple(moduli))
        pres = Presentation(IntMatrix.diagonal(moduli, rows=len(moduli), cols=len(moduli)))
        object.__setattr__(self, "_pres", pres)
        object.__setattr__(self, "group", pres.group)

    def __setattr__(self, name, value):
        raise AttributeError("ExtGroup is immutable")

    def __eq__(self, other) -> bool:
        return (isinstance(other, ExtGroup) and self.source == other.source
                and self.target == other.target)

    def __hash__(self) -> int:
        return hash((self.source, self.target))

    @property
    def nblocks(self) -> int:
        return len(self.source.torsion)

    @property
    def block_size(self) -> int:
        return self.target.ngens

    def reduce(self, coords: Sequence[int]) -> tuple[int, ...]:
        if len(coords) != len(self.moduli):
            raise ValueError("coordinate length mismatch")
        return tuple(x % m if m else 0 for x, m in zip(coords, self.moduli))

    def element(self, coords: Sequence[int]) -> ExtElement:
        return ExtElement(self, self.reduce(coords))

    def zero(self) -> ExtElement:
        return self.element((0,) * len(self.moduli))

    def block(self, coords: Sequence[int], i: int) -> tuple[int, ...]:
        s = self.block_size
        return tuple(coords[i * s: (i + 1) * s])

    def to_canonical(self, el: ExtElement) -> tuple[int, ...]:
        """Coordinates of an element in the canonical form of the Ext group."""
        return self._pres.project(el.coords)

    def canonical_generator_coords(self, i: int) -> tuple[int, ...]:
        """Block coordinates of canonical generator i of the Ext group."""
        return self.reduce(self._pres.lift(i))

    def elements(self):
        for c in _tuples_mod(self.moduli):
            yield self.element(c)

    def __repr__(self) -> str:
        return f"ExtGroup({self.source} by {self.target}: {self.group})"


def _tuples_mod(moduli):
    if not moduli:
        yield ()
        return
    import itertools
    yield from itertools.product(*(range(max(m, 1)) for m in moduli))


class ExtElement:
    """An element of an ExtGroup, in reduced block coordinates."""

    __slots__ = ("group", "coords")

    def __init__(self, group: ExtGroup, coords: Sequence[int]):
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "coords", group.reduce(coords))

    def __setattr__(self, name, value):
        raise AttributeError("ExtElement is immutable")

    def __eq__(self, other) -> bool:
        return (isinstance(other, ExtElement) and self.group == other.group
                and self.coords == other.coords)

    def __hash__(self) -> int:
        return hash((self.group, self.coords))

    def __add__(self, other: ExtElement) -> ExtElement:
        if self.group != other.group:
            raise ValueError("elements of different Ext groups")
        return self.group.element(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> ExtElement:
        return self.group.element(tuple(-a for a in self.coords))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def __repr__(self) -> str:
        return f"ExtElement({self.coords} in {self.group.group})"


def ext1(source: FgAbelianGroup, target: FgAbelianGroup) -> ExtGroup:
    """The extension group Ext(source, target) with its aligned basis."""
    return ExtGroup(source, target)


def extension_class(incl: GroupHom, proj: GroupHom) -> ExtElement:
    """Class of a short exact sequence 0 -> B -> G -> A -> 0.

    ``incl`` is B -> G and ``proj`` is G -> A.  The class is measured by
    lifting each torsion generator a of A to g in G and expressing
    (order of a) * g as an element of B.  With this convention the
    sequence 0 -> Z -(m)-> Z -> Z/m -> 0 has class +1 times the
    canonical generator.
    """
    B, G, A = incl.domain, incl.codomain, proj.codomain
    if incl.codomain != proj.domain:
        raise ValueError("maps are not composable")
    K, _ = kernel(incl)
    if not K.is_trivial():
        raise ValueError("not exact: inclusion has a kernel")
    C, _ = cokernel(proj)
    if not C.is_trivial():
        raise ValueError("not exact: projection is not surjective")
    if not is_exact_pair(incl, proj):
        raise ValueError("not exact at the middle group")

    E = ExtGroup(A, B)
    rel_g = relation_matrix(G)
    rel_a = relation_matrix(A)
    coords: list[int] = []
    for i, d in enumerate(A.torsion):
        a_idx = A.free_rank + i
        target_vec = [0] * A.ngens
        target_vec[a_idx] = 1
        lifted = _solve_mod(proj.matrix, rel_a, target_vec)
        if lifted is None:
            raise ValueError("projection failed to lift a generator")
        scaled = [d * x for x in lifted]
        back = _solve_mod(incl.matrix, rel_g, scaled)
        if back is None:
            raise ValueError("scaled lift is not in the image of the inclusion")
        coords.extend(back)
    return E.element(coords)


def _solve_mod(F: IntMatrix, rels: IntMatrix, target: Sequence[int]):
    """One x with F x == target modulo the column span of rels."""
    from .matrix import solve as int_solve
    stacked = IntMatrix.hstack(F, rels)
    sol = int_solve(stacked, target)
    if sol is None:
        return None
    return list(sol[:F.cols])


def realize_extension(x: ExtElement) -> tuple[FgAbelianGroup, GroupHom, GroupHom]:
    """A short exact sequence 0 -> B -> G -> A -> 0 with class x.

    Returns (middle group, inclusion, projection) built from the block
    coordinates of x: the middle group is generated by the generators of
    B and lifts of the generators of A, with each torsion lift g_i
    satisfying d_i g_i = (block i of x) inside B.
    """
    E = x.group
    A, B = E.source, E.target
    nb, na = B.ngens, A.ngens
    n = nb + na
    cols = []
    for j, e in enumerate(B.torsion):
        col = [0] * n
        col[B.free_rank + j] = e
        cols.append(col)
    for i, d in enumerate(A.torsion):
        col = [0] * n
        col[nb + A.free_rank + i] = d
        blk = E.block(x.coords, i)
        for j in range(nb):
            col[j] = -blk[j]
        cols.append(col)
    pres = Presentation(IntMatrix.from_columns(cols, rows=n))
    G = pres.group
    incl_cols = []
    for j in range(nb):
        e = [0] * n
        e[j] = 1
        incl_cols.append(pres.project(e))
    incl = GroupHom(B, G, IntMatrix.from_columns(incl_cols, rows=G.ngens))
    proj_cols = []
    for i in range(G.ngens):
        amb = pres.lift(i)
        proj_cols.append(A.reduce(amb[nb:]))
    proj = GroupHom(G, A, IntMatrix.from_columns(proj_cols, rows=A.ngens))
    return G, incl, proj


def _chain_matrix(alpha: GroupHom) -> list[list[int]]:
    """Matrix of the induced map on torsion relation lattices.

    For alpha: A1 -> A2 the entry [j][i] is d1_i * alpha[row j][col i] / d2_j,
    which is an integer exactly because alpha is a homomorphism.
    """
    A1, A2 = alpha.domain, alpha.codomain
    out = []
    for j, d2 in enumerate(A2.torsion):
        row = []
        r = A2.free_rank + j
        for i, d1 in enumerate(A1.torsion):
            c = A1.free_rank + i
            num = d1 * alpha.matrix[r, c]
            row.append(num // d2)
        out.append(row)
    return out


def pull_element(alpha: GroupHom, x: ExtElement) -> ExtElement:
    """Functorial map Ext(A2, B) -> Ext(A1, B) along alpha: A1 -> A2."""
    E = x.group
    if alpha.codomain != E.source:
        raise ValueError("alpha must land in the source of the Ext group")
    target_ext = ExtGroup(alpha.domain, E.target)
    chain = _chain_matrix(alpha)
    s = E.block_size
    coords: list[int] = []
    for i in range(target_ext.nblocks):
        acc = [0] * s
        for j in range(E.nblocks):
            c = chain[j][i]
            if c:
                blk = E.block(x.coords, j)
                for t in range(s):
                    acc[t] += c * blk[t]
        coords.extend(acc)
    return target_ext.element(coords)


def push_element(beta: GroupHom, x: ExtElement) -> ExtElement:
    """Functorial map Ext(A, B1) -> Ext(A, B2) along beta: B1 -> B2."""
    E = x.group
    if beta.domain != E.target:
        raise ValueError("beta must start at the target of the Ext group")
    target_ext = ExtGroup(E.source, beta.codomain)
    coords: list[int] = []
    for i in range(E.nblocks):
        blk = E.block(x.coords, i)
        coords.extend(beta.matrix.apply(blk))
    return target_ext.element(coords)


def ext_pushforward(source: FgAbelianGroup, beta: GroupHom) -> GroupHom:
    """The induced hom between canonical Ext groups along beta on the target."""
    E1 = ExtGroup(source, beta.domain)
    E2 = ExtGroup(source, beta.codomain)
    cols = []
    for i in range(E1.group.ngens):
        el = E1.element(E1.canonical_generator_coords(i))
        cols.append(E2.to_canonical(push_element(beta, el)))
    return GroupHom(E1.group, E2.group, IntMatrix.from_columns(cols, rows=E2.group.ngens))


def ext_pullback(alpha: GroupHom, target: FgAbelianGroup) -> GroupHom:
    """The induced hom between canonical Ext groups along alpha on the source."""
    E2 = ExtGroup(alpha.codomain, target)
    E1 = ExtGroup(alpha.domain, target)
    cols = []
    for i in range(E2.group.ngens):
        el = E2.element(E2.canonical_generator_coords(i))
        cols.append(E1.to_canonical(pull_element(alpha, el)))
    return GroupHom(E2.group, E1.group, IntMatrix.from_columns(cols, rows=E1.group.ngens))


def _induced_steps(E: ExtGroup, source_auts: Sequence[GroupHom],
                   target_auts: Sequence[GroupHom]) -> list[tuple[str, int, Callable]]:
    steps: list[tuple[str, int, Callable]] = []
    for i, alpha in enumerate(source_auts):
        if alpha.domain != E.source or alpha.codomain != E.source:
            raise ValueError("source automorphism acts on the wrong group")
        if not alpha.is_isomorphism():
            raise ValueError("source generator is not an automorphism")
        chain = _chain_matrix(alpha)
        s = E.block_size
        nb = E.nblocks

        def mk_pull(chain=chain):
            def step(coords):
                out: list[int] = []
                for bi in range(nb):
                    acc = [0] * s
                    for bj in range(nb):
                        c = chain[bj][bi]
                        if c:
                            base = bj * s
                            for t in range(s):
                                acc[t] += c * coords[base + t]
                    out.extend(acc)
                return E.reduce(out)
            return step

        steps.append(("pull", i, mk_pull()))
    for i, beta in enumerate(target_auts):
        if beta.domain != E.target or beta.codomain != E.target:
            raise ValueError("target automorphism acts on the wrong group")
        if not beta.is_isomorphism():
            raise ValueError("target generator is not an automorphism")

        def mk_push(mat=beta.matrix):
            def step(coords):
                out: list[int] = []
                for bi in range(E.nblocks):
                    blk = E.block(coords, bi)
                    out.extend(mat.apply(blk))
                return E.reduce(out)
            return step

        steps.append(("push", i, mk_push()))
    return steps


def orbit_search(E: ExtGroup, x1: ExtElement, x2: ExtElement,
                 source_auts: Sequence[GroupHom], target_auts: Sequence[GroupHom],
                 limit: int = 10 ** 6):
    """BFS of the orbit of x1 under the induced automorphism action.

    Returns (found, word) where found is True/False/None (None when the
    orbit enumeration exceeded ``limit``) and word is the sequence of
    moves ("pull"/"push", generator index) carrying x1 to x2.
    """
    if x1.group != E or x2.group != E:
        raise ValueError("elements do not live in the given Ext group")
    steps = _induced_steps(E, source_auts, target_auts)
    start = x1.coords
    goal = x2.coords
    if start == goal:
        return True, []
    seen = {start: None}
    frontier = [start]
    while frontier:
        new: list[tuple[int, ...]] = []
        for c in frontier:
            for kind, idx, fn in steps:
                nc = fn(c)
                if nc in seen:
                    continue
                seen[nc] = (c, kind, idx)
                if nc == goal:
                    word = []
                    cur = nc
                    while seen[cur] is not None:
                        prev, kind2, idx2 = seen[cur]
                        word.append((kind2, idx2))
                        cur = prev
                    word.reverse()
                    return True, word
                if len(seen) > limit:
                    return None, None
                new.append(nc)
        frontier = new
    return False, None


def apply_word(E: ExtGroup, x: ExtElement, word: Sequence[tuple[str, int]],
               source_auts: Sequence[GroupHom], target_auts: Sequence[GroupHom]) -> ExtElement:
    """Apply a move word from orbit_search to an element, first move first."""
    steps = {(kind, idx): fn for kind, idx, fn in _induced_steps(E, source_auts, target_auts)}
    coords = x.coords
    for move in word:
        coords = steps[tuple(move)](coords)
    return E.element(coords)


def aut_orbit_decide(E: ExtGroup, x1: ExtElement, x2: ExtElement,
                     source_auts: Sequence[GroupHom], target_auts: Sequence[GroupHom],
                     limit: int = 10 ** 6) -> bool | None:
    """Whether x2 lies in the orbit of x1 under the generated automorphisms.

    The action is generated by pullbacks along the given automorphisms of
    the source and pushforwards along those of the target.  Because every
    generator acts with finite order on the finite group Ext(A, B), the
    reachable set is the full group orbit.  Returns None when the orbit
    grows past ``limit``.
    """
    found, _ = orbit_search(E, x1, x2, source_auts, target_auts, limit)
    return found
