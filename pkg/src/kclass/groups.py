"""Finitely generated abelian groups in canonical form, and their maps.

A group is stored as ``Z^free_rank + Z/d1 + ... + Z/dk`` with invariant
factors ``2 <= d1 | d2 | ... | dk``.  Canonical generators are ordered
free generators first, then torsion generators in increasing invariant
factor order.  Elements are coordinate tuples against that order, with
torsion coordinates kept in ``[0, d)``.

Group homomorphisms are integer matrices read against the canonical
generator orders (columns indexed by domain generators, rows by codomain
generators).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

from .matrix import (
    IntMatrix,
    column_space_basis,
    preimage_lattice,
    snf,
    solve,
    unimodular_inverse,
)


@dataclass(frozen=True)
class FgAbelianGroup:
    """A finitely generated abelian group in canonical form."""

    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(d) for d in self.torsion))
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        for d in self.torsion:
            if d < 2:
                raise ValueError("invariant factors must be at least 2")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError("invariant factors must form a divisibility chain")

    @property
    def ngens(self) -> int:
        return self.free_rank + len(self.torsion)

    @property
    def gen_orders(self) -> tuple[int, ...]:
        """Order of each canonical generator, 0 meaning infinite."""
        return (0,) * self.free_rank + self.torsion

    def is_trivial(self) -> bool:
        return self.ngens == 0

    def is_finite(self) -> bool:
        return self.free_rank == 0

    def order(self) -> int | None:
        if not self.is_finite():
            return None
        n = 1
        for d in self.torsion:
            n *= d
        return n

    def reduce(self, coords: Sequence[int]) -> tuple[int, ...]:
        """Canonical coordinate tuple of an element."""
        if len(coords) != self.ngens:
            raise ValueError("coordinate length mismatch")
        out = list(coords[: self.free_rank])
        for d, x in zip(self.torsion, coords[self.free_rank:]):
            out.append(x % d)
        return tuple(out)

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.ngens

    def elements(self) -> Iterator[tuple[int, ...]]:
        """All elements of a finite group."""
        if not self.is_finite():
            raise ValueError("cannot enumerate an infinite group")
        yield from itertools.product(*(range(d) for d in self.torsion))

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " x ".join(parts) if parts else "0"


def relation_matrix(G: FgAbelianGroup) -> IntMatrix:
    """Relations of the canonical presentation: one column d*e_i per torsion generator."""
    cols = []
    for i, d in enumerate(G.torsion):
        col = [0] * G.ngens
        col[G.free_rank + i] = d
        cols.append(col)
    return IntMatrix.from_columns(cols, rows=G.ngens)


class Presentation:
    """Cokernel of an integer relation matrix, with canonical coordinates.

    The presented group is Z^n modulo the column span of ``rel`` (n =
    ``rel.rows``).  The Smith form of the relations yields the canonical
    form together with explicit maps between ambient and canonical
    coordinates.
    """

    __slots__ = ("rel", "group", "_u", "_uinv", "_free_idx", "_tor_idx", "_orders")

    def __init__(self, rel: IntMatrix):
        self.rel = rel
        n, q = rel.rows, rel.cols
        dec = snf(rel)
        self._u = dec.U
        self._uinv = unimodular_inverse(dec.U)
        ds = [dec.D[j, j] if j < min(n, q) else 0 for j in range(n)]
        self._free_idx = [j for j, d in enumerate(ds) if d == 0]
        self._tor_idx = [j for j, d in enumerate(ds) if d >= 2]
        self._orders = tuple(ds[j] for j in self._tor_idx)
        self.group = FgAbelianGroup(len(self._free_idx), self._orders)

    def project(self, vec: Sequence[int]) -> tuple[int, ...]:
        """Canonical coordinates of the class of an ambient vector."""
        y = self._u.apply(vec)
        coords = [y[j] for j in self._free_idx]
        coords.extend(y[j] % d for j, d in zip(self._tor_idx, self._orders))
        return tuple(coords)

    def lift(self, i: int) -> tuple[int, ...]:
        """An ambient representative of canonical generator i."""
        idx = (self._free_idx + self._tor_idx)[i]
        return self._uinv.column(idx)

    def lift_matrix(self) -> IntMatrix:
        return IntMatrix.from_columns(
            [self.lift(i) for i in range(self.group.ngens)], rows=self.rel.rows)


def group_from_matrix(M: IntMatrix) -> FgAbelianGroup:
    """Cokernel of M acting Z^cols -> Z^rows, in canonical form."""
    return Presentation(M).group


class GroupHom:
    """A homomorphism between groups in canonical form.

    The matrix has one column per domain generator and one row per
    codomain generator.  Rows against torsion generators are stored
    reduced modulo the generator order.  Matrices that do not define a
    homomorphism (a torsion generator sent to an element not killed by
    its order) are rejected.
    """

    __slots__ = ("domain", "codomain", "matrix")

    def __init__(self, domain: FgAbelianGroup, codomain: FgAbelianGroup, matrix: IntMatrix):
        if matrix.rows != codomain.ngens or matrix.cols != domain.ngens:
            raise ValueError(
                f"hom matrix must be {codomain.ngens}x{domain.ngens}, got {matrix.rows}x{matrix.cols}")
        cod_orders = codomain.gen_orders
        reduced = [
            [x % d if d else x for x in row]
            for row, d in zip(matrix.to_lists(), cod_orders)
        ] if matrix.rows else []
        matrix = IntMatrix(reduced, cols=matrix.cols)
        for j, o in enumerate(domain.gen_orders):
            if o == 0:
                continue
            for i, d in enumerate(cod_orders):
                x = matrix[i, j] * o
                if (x % d) if d else x:
                    raise ValueError(
                        f"not a homomorphism: generator {j} of order {o} maps to an element not killed by {o}")
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "codomain", codomain)
        object.__setattr__(self, "matrix", matrix)

    def __setattr__(self, name, value):
        raise AttributeError("GroupHom is immutable")

    @classmethod
    def identity(cls, G: FgAbelianGroup) -> GroupHom:
        return cls(G, G, IntMatrix.identity(G.ngens))

    @classmethod
    def zero(cls, domain: FgAbelianGroup, codomain: FgAbelianGroup) -> GroupHom:
        return cls(domain, codomain, IntMatrix.zeros(codomain.ngens, domain.ngens))

    def __call__(self, coords: Sequence[int]) -> tuple[int, ...]:
        return self.codomain.reduce(self.matrix.apply(self.domain.reduce(coords)))

    def __matmul__(self, other: GroupHom) -> GroupHom:
        """Composition self after other."""
        if other.codomain != self.domain:
            raise ValueError("composition domain mismatch")
        return GroupHom(other.domain, self.codomain, self.matrix @ other.matrix)

    def __eq__(self, other) -> bool:
        return (isinstance(other, GroupHom) and self.domain == other.domain
                and self.codomain == other.codomain and self.matrix == other.matrix)

    def __hash__(self) -> int:
        return hash((self.domain, self.codomain, self.matrix))

    def is_zero(self) -> bool:
        return self.matrix.is_zero()

    def is_injective(self) -> bool:
        K, _ = kernel(self)
        return K.is_trivial()

    def is_surjective(self) -> bool:
        C, _ = cokernel(self)
        return C.is_trivial()

    def is_isomorphism(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def inverse(self) -> GroupHom:
        """Inverse of an isomorphism."""
        inv = solve_hom_equations(
            self.codomain, self.domain,
            [(None, self, IntMatrix.identity(self.domain.ngens))])
        if inv is None or not (self @ inv).matrix == IntMatrix.identity(self.codomain.ngens):
            raise ValueError("hom is not invertible")
        return inv

    def __repr__(self) -> str:
        return f"GroupHom({self.domain} -> {self.codomain}, {self.matrix.to_lists()})"


def kernel(f: GroupHom) -> tuple[FgAbelianGroup, GroupHom]:
    """Kernel subgroup with its inclusion into the domain."""
    G, H = f.domain, f.codomain
    span = preimage_lattice(f.matrix, relation_matrix(H))
    B = IntMatrix.from_columns(span, rows=G.ngens)
    basis = column_space_basis(B)
    Bmat = IntMatrix.from_columns(basis, rows=G.ngens)
    rels = preimage_lattice(Bmat, relation_matrix(G))
    pres = Presentation(IntMatrix.from_columns(rels, rows=len(basis)))
    K = pres.group
    cols = [Bmat.apply(pres.lift(i)) for i in range(K.ngens)]
    incl = GroupHom(K, G, IntMatrix.from_columns(cols, rows=G.ngens))
    return K, incl


def cokernel(f: GroupHom) -> tuple[FgAbelianGroup, GroupHom]:
    """Cokernel with the projection from the codomain."""
    H = f.codomain
    pres = Presentation(IntMatrix.hstack(f.matrix, relation_matrix(H)))
    C = pres.group
    cols = []
    for i in range(H.ngens):
        e = [0] * H.ngens
        e[i] = 1
        cols.append(pres.project(e))
    proj = GroupHom(H, C, IntMatrix.from_columns(cols, rows=C.ngens))
    return C, proj


def is_exact_pair(f: GroupHom, g: GroupHom) -> bool:
    """Whether image(f) equals kernel(g) inside f.codomain == g.domain."""
    if f.codomain != g.domain:
        raise ValueError("maps are not composable")
    mid = f.codomain
    rels = relation_matrix(mid)
    im_lat = IntMatrix.hstack(f.matrix, rels)
    ker_span = preimage_lattice(g.matrix, relation_matrix(g.codomain))
    ker_lat = IntMatrix.from_columns(ker_span, rows=mid.ngens)
    for j in range(im_lat.cols):
        if solve(ker_lat, im_lat.column(j)) is None:
            return False
    for j in range(ker_lat.cols):
        if solve(im_lat, ker_lat.column(j)) is None:
            return False
    return True


def solve_hom_equations(
    domain: FgAbelianGroup,
    codomain: FgAbelianGroup,
    equations: Sequence[tuple[GroupHom | None, GroupHom | None, IntMatrix]],
) -> GroupHom | None:
    """Find H: domain -> codomain with P @ H @ Q == rhs for each (P, Q, rhs).

    P post-composes (None meaning the identity on the codomain) and Q
    pre-composes (None meaning the identity on the domain); equality is
    equality of homomorphisms, so torsion rows are compared modulo their
    orders.  Returns one solution or None.  Any solution is automatically
    a well defined homomorphism.
    """
    nu = codomain.ngens * domain.ngens
    cod_orders = codomain.gen_orders
    dom_orders = domain.gen_orders

    rows: list[list[int]] = []
    rhs: list[int] = []
    slack_mods: list[int] = []

    def unknown(u: int, v: int) -> int:
        return u * domain.ngens + v

    def add_row(coeffs: dict[int, int], target: int, modulus: int) -> None:
        row = [0] * nu
        for k, c in coeffs.items():
            row[k] = c
        rows.append(row)
        rhs.append(target)
        slack_mods.append(modulus)

    for v, o in enumerate(dom_orders):
        if o == 0:
            continue
        for u, d in enumerate(cod_orders):
            if d == 0:
                add_row({unknown(u, v): 1}, 0, 0)
            else:
                add_row({unknown(u, v): o}, 0, d)

    for P, Q, target in equations:
        X = P.codomain if P is not None else codomain
        Y = Q.domain if Q is not None else domain
        if P is not None and P.domain != codomain:
            raise ValueError("post-map domain mismatch")
        if Q is not None and Q.codomain != domain:
            raise ValueError("pre-map codomain mismatch")
        if target.rows != X.ngens or target.cols != Y.ngens:
            raise ValueError("equation target has wrong shape")
        for r in range(X.ngens):
            mod = X.gen_orders[r]
            for c in range(Y.ngens):
                coeffs: dict[int, int] = {}
                for u in range(codomain.ngens):
                    pu = P.matrix[r, u] if P is not None else (1 if r == u else 0)
                    if pu == 0:
                        continue
                    for v in range(domain.ngens):
                        qv = Q.matrix[v, c] if Q is not None else (1 if v == c else 0)
                        if qv == 0:
                            continue
                        k = unknown(u, v)
                        coeffs[k] = coeffs.get(k, 0) + pu * qv
                add_row(coeffs, target[r, c], mod)

    nslack = sum(1 for m in slack_mods if m)
    full = []
    si = 0
    for row, m in zip(rows, slack_mods):
        srow = [0] * nslack
        if m:
            srow[si] = m
            si += 1
        full.append(row + srow)
    system = IntMatrix(full, cols=nu + nslack)
    sol = solve(system, rhs)
    if sol is None:
        return None
    entries = sol[:nu]
    mat = IntMatrix([[entries[unknown(u, v)] for v in range(domain.ngens)]
                     for u in range(codomain.ngens)], cols=domain.ngens)
    return GroupHom(domain, codomain, mat)
