"""Graph K-theory, ideal lattices, and graph comparisons."""
import pytest

from kclass.graphalg import (
    DirectedGraph, IdealDatum, evaluate_subset, hereditary_saturated_sets,
    classify_simple, subgraph, quotient_graph, graph_ktheory,
    one_ideal_invariant, compare_graphs,
    NOT_SIMPLE, AF, PURELY_INFINITE,
)
from kclass.groups import FgAbelianGroup
from kclass.matrix import IntMatrix
from kclass.sixterm import validate_sixterm, verify_witness


def test_graph_validation():
    with pytest.raises(ValueError):
        DirectedGraph(["a", "a"], [[0, 0], [0, 0]])
    with pytest.raises(ValueError):
        DirectedGraph(["a"], [[0, 0], [0, 0]])
    with pytest.raises(ValueError):
        DirectedGraph(["a"], [[-1]])


def test_json_round_trip():
    g = DirectedGraph(["v", "w"], [[2, 1], [0, 3]])
    back = DirectedGraph.from_json(g.to_json())
    assert back.vertices == g.vertices
    assert back.adjacency.to_lists() == g.adjacency.to_lists()


def test_ktheory_single_vertex_three_loops():
    kt = graph_ktheory(DirectedGraph(["v"], [[3]]))
    assert kt.k0 == FgAbelianGroup(0, (2,))
    assert kt.k1.is_trivial()
    assert kt.unit_class == (1,)


def test_ktheory_single_vertex_two_loops():
    kt = graph_ktheory(DirectedGraph(["v"], [[2]]))
    assert kt.k0.is_trivial()
    assert kt.k1.is_trivial()


def test_ktheory_two_sinks():
    kt = graph_ktheory(DirectedGraph(["a", "b"], [[0, 0], [0, 0]]))
    assert kt.k0 == FgAbelianGroup(2, ())
    assert kt.k1.is_trivial()
    assert kt.vertex_classes.matrix.to_lists() == [[1, 0], [0, 1]]


def test_ktheory_k1_can_be_nonzero():
    # transposed adjacency minus identity is singular here
    kt = graph_ktheory(DirectedGraph(["a", "b"], [[2, 1], [2, 3]]))
    assert kt.k0 == FgAbelianGroup(1, ())
    assert kt.k1 == FgAbelianGroup(1, ())


def test_k1_is_torsion_free():
    # kernels of integer matrices never carry torsion
    import random
    rng = random.Random(7)
    for _ in range(25):
        n = rng.randrange(1, 5)
        adj = [[rng.randrange(0, 3) for _ in range(n)] for _ in range(n)]
        kt = graph_ktheory(DirectedGraph([f"v{i}" for i in range(n)], adj))
        assert kt.k1.torsion == ()


def test_hereditary_saturated_enumeration():
    g = DirectedGraph(["v", "w"], [[1, 1], [0, 3]])
    sets = hereditary_saturated_sets(g)
    assert [d.vertices for d in sets] == [(), ("w",), ("v", "w")]
    assert [d.vertices for d in sets if d.nontrivial] == [("w",)]


def test_saturation_failure_is_flagged():
    # v emits only into {w}, so the subset is hereditary but not saturated
    g = DirectedGraph(["v", "w"], [[0, 1], [0, 1]])
    d = evaluate_subset(g, ["w"])
    assert d.hereditary and not d.saturated


def test_hereditary_failure_is_flagged():
    g = DirectedGraph(["v", "w"], [[1, 1], [0, 3]])
    d = evaluate_subset(g, ["v"])
    assert not d.hereditary


def test_enumeration_guard():
    n = 21
    g = DirectedGraph([f"v{i}" for i in range(n)], IntMatrix.zeros(n, n))
    with pytest.raises(ValueError):
        hereditary_saturated_sets(g)


def test_classify_simple():
    assert classify_simple(DirectedGraph(["v"], [[1]])) == NOT_SIMPLE
    assert classify_simple(DirectedGraph(["v"], [[2]])) == PURELY_INFINITE
    assert classify_simple(DirectedGraph(["v"], [[0]])) == AF
    # a sink pair is disconnected, hence not simple
    assert classify_simple(DirectedGraph(["a", "b"], [[0, 0], [0, 0]])) == NOT_SIMPLE
    # 2-cycle without exits: not simple despite trivial ideal lattice
    assert classify_simple(DirectedGraph(["a", "b"], [[0, 1], [1, 0]])) == NOT_SIMPLE
    # strongly connected with parallel edges: purely infinite
    assert classify_simple(DirectedGraph(["a", "b"], [[0, 2], [1, 0]])) == PURELY_INFINITE


def test_subgraph_and_quotient():
    g = DirectedGraph(["v", "w"], [[2, 1], [0, 3]])
    s = subgraph(g, ["w"])
    assert s.vertices == ["w"] and s.adjacency.to_lists() == [[3]]
    q = quotient_graph(g, ["w"])
    assert q.vertices == ["v"] and q.adjacency.to_lists() == [[2]]


def test_one_ideal_invariant_worked_example():
    g = DirectedGraph(["v", "w"], [[2, 1], [0, 3]])
    inv = one_ideal_invariant(g)
    assert inv.groups["K0B"] == FgAbelianGroup(0, (2,))
    assert inv.groups["K0E"] == FgAbelianGroup(0, (2,))
    assert inv.groups["K0A"].is_trivial()
    assert all(inv.groups[n].is_trivial() for n in ("K1A", "K1E", "K1B"))
    # K0A = 0 forces the inclusion to be an isomorphism
    assert inv.maps["K0B->K0E"].is_isomorphism()
    assert inv.cones["K0B"].tag == "all_positive"
    assert validate_sixterm(inv) == []


def test_one_ideal_invariant_af_ideal():
    # sink ideal with purely infinite quotient: the K0 row is an index-3
    # extension of Z/3 by Z
    g = DirectedGraph(["v", "w"], [[4, 1], [0, 0]])
    inv = one_ideal_invariant(g)
    assert inv.groups["K0B"] == FgAbelianGroup(1, ())
    assert inv.groups["K0E"] == FgAbelianGroup(1, ())
    assert inv.groups["K0A"] == FgAbelianGroup(0, (3,))
    assert inv.cones["K0B"].tag == "standard_free"
    assert inv.cones["K0A"].tag == "all_positive"


def test_one_ideal_invariant_errors():
    with pytest.raises(ValueError):
        one_ideal_invariant(DirectedGraph(["a", "b"], [[0, 0], [0, 0]]))
    with pytest.raises(ValueError):
        # quotient is a single loop, which does not classify
        one_ideal_invariant(DirectedGraph(["v", "w"], [[1, 1], [0, 3]]))


def test_one_ideal_invariant_nonzero_k1():
    g = DirectedGraph(["q1", "q2", "w"], [[2, 1, 0], [2, 3, 1], [0, 0, 3]])
    inv = one_ideal_invariant(g)
    assert inv.groups["K1A"] == FgAbelianGroup(1, ())
    assert inv.groups["K1E"] == FgAbelianGroup(1, ())
    assert inv.groups["K1B"].is_trivial()
    assert not inv.maps["K1A->K0B"].is_zero()
    assert validate_sixterm(inv) == []


def test_compare_graphs_reflexive():
    g = DirectedGraph(["v", "w"], [[2, 1], [0, 3]])
    v = compare_graphs(g, g)
    assert v.status == "isomorphic"


def test_compare_graphs_distinct_ideal_torsion():
    g3 = DirectedGraph(["v", "w"], [[2, 1], [0, 3]])
    g4 = DirectedGraph(["v", "w"], [[2, 1], [0, 4]])
    v = compare_graphs(g3, g4)
    assert v.status == "not_isomorphic"
    assert "K0B" in v.certificate


def test_compare_graphs_extension_family():
    # ideal a sink, quotient four loops: the connecting edge count picks
    # the class of the K0 extension of Z/3 by Z
    def gk(k):
        return DirectedGraph(["v", "w"], [[4, k], [0, 0]])
    inv1 = one_ideal_invariant(gk(1))
    inv2 = one_ideal_invariant(gk(2))
    v12 = compare_graphs(gk(1), gk(2))
    assert v12.status == "isomorphic"
    assert verify_witness(inv1, inv2, v12.witness)
    assert compare_graphs(gk(1), gk(3)).status == "not_isomorphic"
    assert compare_graphs(gk(2), gk(3)).status == "not_isomorphic"


def test_compare_graphs_permuted_copy():
    g = DirectedGraph(["q1", "q2", "w"], [[2, 1, 2], [2, 3, 1], [0, 0, 3]])
    perm = DirectedGraph(["w", "q2", "q1"], [[3, 0, 0], [1, 3, 2], [2, 1, 2]])
    v = compare_graphs(g, perm)
    assert v.status == "isomorphic"
    assert verify_witness(one_ideal_invariant(g), one_ideal_invariant(perm),
                          v.witness)


def test_relabeling_does_not_change_the_invariant():
    g = DirectedGraph(["v", "w"], [[2, 1], [0, 3]])
    h = g.relabel({"v": "x", "w": "y"})
    assert h.vertices == ["x", "y"]
    assert one_ideal_invariant(g) == one_ideal_invariant(h)
