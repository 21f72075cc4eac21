"""K-theory of finite directed graphs and their one-ideal invariants.

A graph stands for the algebra generated by its vertex projections and
edge isometries.  K0 is the cokernel and K1 the kernel of the transposed
adjacency matrix minus the identity, with columns restricted to the
vertices that emit at least one edge.  Ideals correspond to hereditary
saturated vertex sets; a graph with exactly one nontrivial such set
yields a six-term invariant whose cones reflect the ideal and quotient
types (coordinatewise for the approximately finite case, the whole
group for the purely infinite one).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .matrix import IntMatrix, kernel_basis, solve
from .groups import FgAbelianGroup, GroupHom, Presentation
from .sixterm import (SixTermInvariant, validate_sixterm, decide_iso_one_ideal,
                      all_positive_cone, standard_free_cone, unordered_cone)
from .verdict import IsoVerdict

NOT_SIMPLE = "not_simple"
AF = "af"
PURELY_INFINITE = "purely_infinite"
UNSUPPORTED = "unsupported"

MAX_VERTICES = 20


class DirectedGraph:
    """Finite directed graph with parallel edges.

    ``adjacency[i, j]`` counts the edges from vertex i to vertex j.
    """

    __slots__ = ("vertices", "adjacency")

    def __init__(self, vertices, adjacency):
        vertices = list(vertices)
        if len(set(vertices)) != len(vertices):
            raise ValueError("vertex labels must be distinct")
        if not isinstance(adjacency, IntMatrix):
            adjacency = IntMatrix(adjacency)
        if adjacency.rows != adjacency.cols or adjacency.rows != len(vertices):
            raise ValueError("adjacency must be square of size len(vertices)")
        if any(adjacency[i, j] < 0 for i in range(adjacency.rows)
               for j in range(adjacency.cols)):
            raise ValueError("edge counts must be nonnegative")
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "adjacency", adjacency)

    def __setattr__(self, name, value):
        raise AttributeError("DirectedGraph is immutable")

    @property
    def n(self) -> int:
        return len(self.vertices)

    def out_degree(self, i: int) -> int:
        return sum(self.adjacency.row(i))

    def is_regular(self, i: int) -> bool:
        """A vertex is regular when it emits at least one edge."""
        return self.out_degree(i) > 0

    def index_of(self, label) -> int:
        return self.vertices.index(label)

    def relabel(self, mapping: dict) -> "DirectedGraph":
        return DirectedGraph([mapping.get(v, v) for v in self.vertices],
                             self.adjacency)

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices),
                "adjacency": self.adjacency.to_lists()}

    @classmethod
    def from_json(cls, data: dict) -> "DirectedGraph":
        return cls(data["vertices"], IntMatrix(data["adjacency"]))

    def __repr__(self) -> str:
        return f"DirectedGraph({self.vertices!r}, {self.adjacency.to_lists()!r})"


@dataclass(frozen=True)
class IdealDatum:
    """A vertex subset with its ideal-defining properties."""

    vertices: tuple
    hereditary: bool
    saturated: bool
    nontrivial: bool


def evaluate_subset(g: DirectedGraph, subset) -> IdealDatum:
    """Hereditary and saturation flags for an arbitrary vertex subset."""
    idx = {g.index_of(v) for v in subset}
    hereditary = True
    for i in idx:
        for j in range(g.n):
            if g.adjacency[i, j] > 0 and j not in idx:
                hereditary = False
                break
        if not hereditary:
            break
    saturated = True
    for i in range(g.n):
        if i in idx or not g.is_regular(i):
            continue
        if all(g.adjacency[i, j] == 0 or j in idx for j in range(g.n)):
            saturated = False
            break
    labels = tuple(sorted(subset, key=g.index_of))
    return IdealDatum(labels, hereditary, saturated,
                      0 < len(idx) < g.n)


def hereditary_saturated_sets(g: DirectedGraph) -> list[IdealDatum]:
    """Every hereditary saturated vertex set, the trivial ones included."""
    if g.n > MAX_VERTICES:
        raise ValueError(f"graphs with more than {MAX_VERTICES} vertices "
                         "are not enumerated")
    out = []
    for r in range(g.n + 1):
        for combo in itertools.combinations(g.vertices, r):
            d = evaluate_subset(g, combo)
            if d.hereditary and d.saturated:
                out.append(d)
    return out


def _cycle_vertices(g: DirectedGraph) -> set:
    """Indices of vertices lying on some directed cycle."""
    reach = [[g.adjacency[i, j] > 0 for j in range(g.n)] for i in range(g.n)]
    for k in range(g.n):
        for i in range(g.n):
            if reach[i][k]:
                for j in range(g.n):
                    if reach[k][j]:
                        reach[i][j] = True
    return {i for i in range(g.n) if reach[i][i]}


def _has_exitless_cycle(g: DirectedGraph) -> bool:
    # a cycle with no exit forces out-degree exactly one along it
    succ = {}
    for i in range(g.n):
        if g.out_degree(i) == 1:
            succ[i] = next(j for j in range(g.n) if g.adjacency[i, j] > 0)
    for start in succ:
        slow = start
        seen = set()
        while slow in succ and slow not in seen:
            seen.add(slow)
            slow = succ[slow]
        if slow in seen:
            return True
    return False


def classify_simple(g: DirectedGraph) -> str:
    """Simplicity type of the graph algebra.

    not_simple when a nontrivial hereditary saturated set exists or some
    cycle has no exit; otherwise af without cycles and purely_infinite
    with them.
    """
    if any(d.nontrivial for d in hereditary_saturated_sets(g)):
        return NOT_SIMPLE
    if _has_exitless_cycle(g):
        return NOT_SIMPLE
    return PURELY_INFINITE if _cycle_vertices(g) else AF


def subgraph(g: DirectedGraph, subset) -> DirectedGraph:
    """Induced graph on a vertex subset (internal edges only)."""
    idx = sorted(g.index_of(v) for v in subset)
    adj = [[g.adjacency[i, j] for j in idx] for i in idx]
    return DirectedGraph([g.vertices[i] for i in idx],
                         IntMatrix(adj) if idx else IntMatrix.zeros(0, 0))


def quotient_graph(g: DirectedGraph, subset) -> DirectedGraph:
    """The graph with a hereditary saturated subset removed."""
    keep = [i for i in range(g.n) if g.vertices[i] not in set(subset)]
    adj = [[g.adjacency[i, j] for j in keep] for i in keep]
    return DirectedGraph([g.vertices[i] for i in keep],
                         IntMatrix(adj) if keep else IntMatrix.zeros(0, 0))


@dataclass(frozen=True)
class GraphKTheory:
    """K-groups of a graph with the map from vertex space to K0."""

    k0: FgAbelianGroup
    k1: FgAbelianGroup
    vertex_classes: GroupHom   # from Z^vertices onto K0
    unit_class: tuple          # class of the sum of all vertex projections


def _restricted_matrix(g: DirectedGraph) -> tuple[IntMatrix, list[int]]:
    """Transposed adjacency minus identity, on the emitting columns."""
    regular = [i for i in range(g.n) if g.is_regular(i)]
    cols = []
    for v in regular:
        col = [g.adjacency[v, j] for j in range(g.n)]
        col[v] -= 1
        cols.append(col)
    return IntMatrix.from_columns(cols, rows=g.n), regular


def graph_ktheory(g: DirectedGraph) -> GraphKTheory:
    M, _ = _restricted_matrix(g)
    pres = Presentation(M)
    k0 = pres.group
    cols = []
    for i in range(g.n):
        e = [0] * g.n
        e[i] = 1
        cols.append(pres.project(e))
    free = FgAbelianGroup(g.n, ())
    classes = GroupHom(free, k0, IntMatrix.from_columns(cols, rows=k0.ngens))
    unit = k0.reduce(classes.matrix.apply([1] * g.n)) if g.n else k0.zero()
    k1 = FgAbelianGroup(len(kernel_basis(M)), ())
    return GraphKTheory(k0, k1, classes, unit)


class _Side:
    """K0 presentation of one side of the extension, with lifts."""

    def __init__(self, graph: DirectedGraph, kind: str):
        self.kind = kind
        M, regular = _restricted_matrix(graph)
        self.matrix = M
        self.regular = regular
        self.k1_basis = kernel_basis(M)
        self.k1 = FgAbelianGroup(len(self.k1_basis), ())
        if kind == AF:
            # path-count coordinates: K0 is free on the sinks
            sinks = [i for i in range(graph.n) if not graph.is_regular(i)]
            order = _topological_order(graph)
            counts = {}
            for v in reversed(order):
                if v in sinks:
                    vec = [0] * len(sinks)
                    vec[sinks.index(v)] = 1
                    counts[v] = vec
                else:
                    vec = [0] * len(sinks)
                    for w in range(graph.n):
                        m = graph.adjacency[v, w]
                        if m:
                            vec = [a + m * b for a, b in zip(vec, counts[w])]
                    counts[v] = vec
            self.k0 = FgAbelianGroup(len(sinks), ())
            self._counts = IntMatrix.from_columns(
                [counts[v] for v in range(graph.n)], rows=len(sinks))
            self._sinks = sinks
            self.cone = standard_free_cone()
        else:
            self.pres = Presentation(M)
            self.k0 = self.pres.group
            self.cone = all_positive_cone()

    def project(self, vec) -> tuple:
        if self.kind == AF:
            return tuple(self._counts.apply(vec))
        return self.pres.project(vec)

    def lift(self, i: int) -> list:
        if self.kind == AF:
            out = [0] * self._counts.cols
            out[self._sinks[i]] = 1
            return out
        return list(self.pres.lift(i))


def _topological_order(g: DirectedGraph) -> list[int]:
    indeg = [0] * g.n
    for i in range(g.n):
        for j in range(g.n):
            if g.adjacency[i, j] > 0 and i != j:
                indeg[j] += 1
    order = [i for i in range(g.n) if indeg[i] == 0]
    for v in order:
        for j in range(g.n):
            if g.adjacency[v, j] > 0 and v != j:
                indeg[j] -= 1
                if indeg[j] == 0:
                    order.append(j)
    if len(order) != g.n:
        raise ValueError("graph has a cycle, no topological order exists")
    return order


def one_ideal_invariant(g: DirectedGraph) -> SixTermInvariant:
    """Six-term invariant of a graph with exactly one nontrivial ideal.

    The ideal and quotient must classify as af or purely_infinite.  The
    constructed cycle is checked for exactness before being returned.
    """
    nontrivial = [d for d in hereditary_saturated_sets(g) if d.nontrivial]
    if len(nontrivial) != 1:
        raise ValueError(f"expected exactly one nontrivial hereditary "
                         f"saturated set, found {len(nontrivial)}")
    hset = nontrivial[0].vertices
    sub = subgraph(g, hset)
    quot = quotient_graph(g, hset)
    kind_b = classify_simple(sub)
    kind_a = classify_simple(quot)
    for name, kind in (("ideal", kind_b), ("quotient", kind_a)):
        if kind not in (AF, PURELY_INFINITE):
            raise ValueError(f"the {name} does not classify as af or "
                             "purely_infinite")

    side_b = _Side(sub, kind_b)
    side_a = _Side(quot, kind_a)
    M_e, regular_e = _restricted_matrix(g)
    pres_e = Presentation(M_e)
    k0e = pres_e.group
    k1e_basis = kernel_basis(M_e)
    k1e = FgAbelianGroup(len(k1e_basis), ())

    h_idx = sorted(g.index_of(v) for v in hset)
    q_idx = [i for i in range(g.n) if i not in set(h_idx)]
    reg_pos = {v: c for c, v in enumerate(regular_e)}

    def pad_vertex(vec_local, idx):
        out = [0] * g.n
        for x, i in zip(vec_local, idx):
            out[i] = x
        return out

    # inclusion on K0: vertex classes of the ideal, viewed in the whole graph
    cols = [pres_e.project(pad_vertex(side_b.lift(i), h_idx))
            for i in range(side_b.k0.ngens)]
    iota0 = GroupHom(side_b.k0, k0e,
                     IntMatrix.from_columns(cols, rows=k0e.ngens))
    # projection on K0: drop the ideal coordinates
    cols = []
    for i in range(k0e.ngens):
        amb = pres_e.lift(i)
        cols.append(side_a.project([amb[j] for j in q_idx]))
    pi0 = GroupHom(k0e, side_a.k0,
                   IntMatrix.from_columns(cols, rows=side_a.k0.ngens))
    delta = GroupHom(side_a.k0, side_b.k1,
                     IntMatrix.zeros(side_b.k1.ngens, side_a.k0.ngens))

    # K1 maps ride on the kernel lattices
    sub_reg_vertices = [h_idx[c] for c in side_b.regular]
    quot_reg_vertices = [q_idx[c] for c in side_a.regular]
    basis_e = IntMatrix.from_columns(k1e_basis, rows=len(regular_e)) \
        if k1e_basis else IntMatrix.zeros(len(regular_e), 0)

    cols = []
    for vec in side_b.k1_basis:
        padded = [0] * len(regular_e)
        for x, v in zip(vec, sub_reg_vertices):
            padded[reg_pos[v]] = x
        sol = solve(basis_e, padded)
        if sol is None:
            raise RuntimeError("ideal cycle vector is missing upstairs")
        cols.append(sol)
    iota1 = GroupHom(side_b.k1, k1e,
                     IntMatrix.from_columns(cols, rows=k1e.ngens))

    basis_a = IntMatrix.from_columns(side_a.k1_basis,
                                     rows=len(side_a.regular)) \
        if side_a.k1_basis else IntMatrix.zeros(len(side_a.regular), 0)
    cols = []
    for vec in k1e_basis:
        restricted = [vec[reg_pos[v]] for v in quot_reg_vertices]
        sol = solve(basis_a, restricted)
        if sol is None:
            raise RuntimeError("cycle vector does not restrict to the quotient")
        cols.append(sol)
    pi1 = GroupHom(k1e, side_a.k1,
                   IntMatrix.from_columns(cols, rows=side_a.k1.ngens))

    # index map: push a quotient cycle vector through the whole matrix
    # and read off the ideal rows
    cols = []
    for vec in side_a.k1_basis:
        padded = [0] * len(regular_e)
        for x, v in zip(vec, quot_reg_vertices):
            padded[reg_pos[v]] = x
        img = M_e.apply(padded)
        cols.append(side_b.project([img[j] for j in h_idx]))
    bdry = GroupHom(side_a.k1, side_b.k0,
                    IntMatrix.from_columns(cols, rows=side_b.k0.ngens))

    inv = SixTermInvariant(
        {"K0B": side_b.k0, "K0E": k0e, "K0A": side_a.k0,
         "K1A": side_a.k1, "K1E": k1e, "K1B": side_b.k1},
        {"K0B->K0E": iota0, "K0E->K0A": pi0, "K0A->K1B": delta,
         "K1B->K1E": iota1, "K1E->K1A": pi1, "K1A->K0B": bdry},
        {"K0B": side_b.cone, "K0E": unordered_cone(), "K0A": side_a.cone})
    problems = validate_sixterm(inv)
    if problems:
        raise RuntimeError("constructed cycle is not exact: "
                           + "; ".join(problems))
    return inv


def compare_graphs(g1: DirectedGraph, g2: DirectedGraph, **kwargs) -> IsoVerdict:
    """Decide stable isomorphism of two one-ideal graph algebras by
    comparing their six-term invariants."""
    return decide_iso_one_ideal(one_ideal_invariant(g1),
                                one_ideal_invariant(g2), **kwargs)
