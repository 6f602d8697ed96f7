import math
from itertools import combinations

import pytest

from chgraphs.errors import CapabilityError, InputError
from chgraphs import constructions as cons
from chgraphs import graphcore as gc
from chgraphs import homogeneity as hom
from chgraphs.graphcore import Graph
from chgraphs.homogeneity import (
    LabeledPattern,
    ch3_local_criterion,
    classify_ch_structure,
    definitional_oracle_kch,
    embeddings,
    is_2_geodesic_transitive,
    is_k_homogeneous,
    is_k_set_homogeneous,
    is_kch,
    is_kcsh,
    is_s_arc_transitive,
    local_action,
    pattern_catalog,
    revalidate_witness,
)
from chgraphs.permgroup import Action, PermGroup, Permutation

from bruteforce import icosahedron_edges, mulclose, tuple_orbit_brute


# ---------------------------------------------------------------------------
# Pattern catalogs and embeddings
# ---------------------------------------------------------------------------

def test_connected_catalog_counts():
    counts = {}
    for p in pattern_catalog(5, True):
        counts[p.order] = counts.get(p.order, 0) + 1
    assert counts == {1: 1, 2: 1, 3: 2, 4: 6, 5: 21}


def test_full_catalog_counts():
    counts = {}
    for p in pattern_catalog(5, False):
        counts[p.order] = counts.get(p.order, 0) + 1
    assert counts == {1: 1, 2: 2, 3: 4, 4: 11, 5: 34}


def test_embeddings_examples():
    k3 = LabeledPattern(3, ((0, 1), (0, 2), (1, 2)))
    assert len(embeddings(k3, gc.complete_graph(3))) == 6
    edge = LabeledPattern(2, ((0, 1),))
    assert len(embeddings(edge, gc.cycle_graph(5))) == 10
    assert embeddings(k3, cons.petersen().graph) == []


def test_embeddings_are_induced_and_ordered():
    p3 = LabeledPattern(3, ((0, 1), (1, 2)))
    embs = embeddings(p3, gc.cycle_graph(4))
    assert embs == sorted(embs)
    g = gc.cycle_graph(4)
    for a, b, c in embs:
        assert g.adjacent(a, b) and g.adjacent(b, c) and not g.adjacent(a, c)


# ---------------------------------------------------------------------------
# Homogeneity verdicts
# ---------------------------------------------------------------------------

def test_group_must_act_on_graph():
    h = cons.hamming(2, 3)
    with pytest.raises(InputError):
        is_kch(h.graph, PermGroup.symmetric(9), 2)


def test_complete_graph_is_kch_for_all_k():
    inst = cons.complete(5)
    for k in range(1, 6):
        assert is_kch(inst.graph, inst.group, k).verdict


def test_c5_is_3_homogeneous():
    c5 = gc.cycle_graph(5)
    d10 = PermGroup.dihedral(5)
    assert is_k_homogeneous(c5, d10, 3).verdict
    assert is_kch(c5, d10, 3).verdict


def test_k2_laws_rotations_of_c5():
    """Edge-transitive but not arc-transitive: 2-CSH holds, 2-CH fails."""
    c5 = gc.cycle_graph(5)
    rot = PermGroup.cyclic(5)
    assert not is_s_arc_transitive(c5, rot, 1)
    assert not is_kch(c5, rot, 2).verdict
    assert is_kcsh(c5, rot, 2).verdict
    d10 = PermGroup.dihedral(5)
    assert is_s_arc_transitive(c5, d10, 1)
    assert is_kch(c5, d10, 2).verdict


def test_k2_ch_iff_arc_transitive_on_corpus_samples():
    samples = [cons.petersen(), cons.hamming(2, 3), cons.complete(4),
               cons.halved_cube(4)]
    for inst in samples:
        assert is_kch(inst.graph, inst.group, 2).verdict == \
            is_s_arc_transitive(inst.graph, inst.group, 1)


def test_monotonicity():
    for inst in [cons.petersen(), cons.hamming(2, 4), cons.hypercube(3)]:
        r3 = is_kch(inst.graph, inst.group, 3)
        if r3.verdict:
            assert is_kch(inst.graph, inst.group, 2).verdict
            assert is_kcsh(inst.graph, inst.group, 3).verdict


def test_cube_4ch_and_halved_cube_under_inherited_group():
    q4 = cons.hypercube(4)
    assert is_kch(q4.graph, q4.group, 4).verdict

    # the even-class stabilizer of the cube group, induced on the 8 even
    # vertices, has order 192 and is NOT order-4 connected-homogeneous
    hc = cons.halved_cube(4)
    evens = hc.vertex_labels
    stab_els = [g for g in q4.group.elements()
                if all(g(u) in evens for u in evens)]
    idx = {u: i for i, u in enumerate(evens)}
    induced = PermGroup(8, [Permutation([idx[g(u)] for u in evens])
                            for g in stab_els])
    assert induced.order == 192
    rep = is_kch(hc.graph, induced, 4)
    assert not rep.verdict
    assert revalidate_witness(hc.graph, induced, rep)
    # and the definitional oracle reaches the same verdict
    assert not definitional_oracle_kch(hc.graph, induced, 4).verdict
    # under its full automorphism group the halved 4-cube IS 4-CH
    full = is_kch(hc.graph, hc.group, 4)
    assert full.verdict
    assert definitional_oracle_kch(hc.graph, hc.group, 4).verdict


def test_witness_is_brute_force_unreachable():
    hc = cons.halved_cube(4)
    q4 = cons.hypercube(4)
    evens = hc.vertex_labels
    idx = {u: i for i, u in enumerate(evens)}
    induced = PermGroup(8, [Permutation([idx[g(u)] for u in evens])
                            for g in q4.group.elements()
                            if all(g(u) in evens for u in evens)])
    rep = is_kch(hc.graph, induced, 4)
    els = mulclose([g.images for g in induced.generators])
    assert len(els) == 192
    assert rep.witness.target not in tuple_orbit_brute(els, rep.witness.source)


def test_oracle_agreement_petersen():
    p = cons.petersen()
    assert definitional_oracle_kch(p.graph, p.group, 3).verdict == \
        is_kch(p.graph, p.group, 3).verdict is True


def test_oracle_bounds():
    j = cons.johnson(5, 2)
    big = Graph(33, [(i, i + 1) for i in range(32)])
    with pytest.raises(CapabilityError):
        definitional_oracle_kch(big, PermGroup.trivial(33), 3)


def test_icosahedron_not_4ch():
    n, edges = icosahedron_edges()
    g = Graph(n, edges)
    aut = gc.automorphism_group(g)
    assert aut.order == 120
    assert is_kch(g, aut, 3).verdict
    rep = is_kch(g, aut, 4)
    assert not rep.verdict
    assert revalidate_witness(g, aut, rep)


# ---------------------------------------------------------------------------
# Local actions
# ---------------------------------------------------------------------------

def test_local_action_hamming24():
    h = cons.hamming(2, 4)
    la = local_action(h.graph, h.group, 0)
    assert la.transitive and la.rank == 3
    assert la.suborbit_sizes == [1, 2, 3]
    assert la.shape == {"kind": "disjoint-cliques", "cliques": 2, "clique_size": 3}
    assert la.primitive is False


def test_local_action_johnson7_complement():
    j = cons.johnson_complement(7, 2)
    la = local_action(j.graph, j.group, 0)
    assert la.rank == 3 and la.primitive
    assert la.shape["kind"] == "connected-other"
    assert la.kernel_order == 2  # the transposition swapping the base pair
    stab = j.group.point_stabilizer(0)
    act = Action(stab, j.graph.neighbors(0), points=True)
    assert stab.order == act.image.order * act.kernel.order


def test_local_action_complete():
    inst = cons.complete(6)
    la = local_action(inst.graph, inst.group, 0)
    assert la.rank == 2
    assert la.shape["kind"] == "complete"


def test_local_action_errors():
    g = Graph(3, [(0, 1)])
    with pytest.raises(InputError):
        local_action(g, PermGroup.trivial(3), 2)


# ---------------------------------------------------------------------------
# The order-3 local criterion
# ---------------------------------------------------------------------------

def test_criterion_petersen_two_transitive_branch():
    p = cons.petersen()
    rep = ch3_local_criterion(p.graph, p.group)
    assert rep.verdict and rep.branch == "locally-2-transitive"
    assert rep.girth == 5


def test_criterion_hamming_rank3_branch():
    h = cons.hamming(2, 4)
    rep = ch3_local_criterion(h.graph, h.group)
    assert rep.verdict and rep.branch == "rank3-girth3"


def test_criterion_c6():
    rep = ch3_local_criterion(gc.cycle_graph(6), PermGroup.dihedral(6))
    assert rep.verdict and rep.branch == "locally-2-transitive"


def test_criterion_matches_kch_on_samples():
    samples = [cons.petersen(), cons.hamming(2, 4), cons.johnson(5, 2),
               cons.halved_cube(4), cons.folded_cube_rank3(5),
               cons.affine_ternary_cube(2), cons.complete(5)]
    for inst in samples:
        assert ch3_local_criterion(inst.graph, inst.group).verdict == \
            is_kch(inst.graph, inst.group, 3).verdict


def test_rank3_direction_for_girth3_noncomplete():
    samples = [cons.hamming(2, 4), cons.affine_ternary_cube(2),
               cons.affine_clique_union(2, 2), cons.folded_cube_rank3(5)]
    for inst in samples:
        assert gc.girth(inst.graph) == 3
        assert is_kch(inst.graph, inst.group, 3).verdict
        la = local_action(inst.graph, inst.group, 0)
        assert la.rank == 3
        assert len(la.suborbit_sizes) == 3


# ---------------------------------------------------------------------------
# Arc transitivity
# ---------------------------------------------------------------------------

def test_s_arc_transitivity():
    p = cons.petersen()
    for s in (1, 2, 3):
        assert is_s_arc_transitive(p.graph, p.group, s)
    q4 = cons.hypercube(4)
    assert is_s_arc_transitive(q4.graph, q4.group, 2)
    with pytest.raises(InputError):
        is_s_arc_transitive(p.graph, p.group, 4)


def test_s_arc_orbit_matches_brute():
    q3 = cons.hypercube(3)
    arcs = hom._s_arcs(q3.graph, 2)
    els = mulclose([g.images for g in q3.group.generators])
    assert len(tuple_orbit_brute(els, arcs[0])) == len(arcs)


def test_2_geodesic_transitive():
    assert is_2_geodesic_transitive(cons.hamming(2, 4).graph, cons.hamming(2, 4).group)
    assert is_2_geodesic_transitive(cons.petersen().graph, cons.petersen().group)
    with pytest.raises(InputError):
        is_2_geodesic_transitive(gc.complete_graph(4), PermGroup.symmetric(4))


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------

def test_classify_complete():
    rep = classify_ch_structure(gc.complete_graph(6), PermGroup.symmetric(6), 3)
    assert rep.case == "complete"
    assert rep.evidence["k_transitive"] is True


def test_classify_multipartite():
    inst = cons.complete_multipartite(3, 2)
    rep = classify_ch_structure(inst.graph, inst.group, 3)
    assert rep.case == "complete-multipartite"
    assert (rep.evidence["parts"], rep.evidence["part_size"]) == (3, 2)


def test_classify_two_arc_transitive():
    p = cons.petersen()
    rep = classify_ch_structure(p.graph, p.group, 3)
    assert rep.case == "two-arc-transitive"
    assert rep.evidence["two_arc_transitive"]


def test_classify_locally_disconnected():
    h = cons.hamming(2, 4)
    rep = classify_ch_structure(h.graph, h.group, 3)
    assert rep.case == "locally-disconnected"
    assert (rep.evidence["r"], rep.evidence["b"]) == (2, 3)


def test_classify_locally_primitive():
    fr = cons.folded_cube_rank3(5)
    rep = classify_ch_structure(fr.graph, fr.group, 3)
    assert rep.case == "locally-primitive"
    j = cons.johnson_complement(7, 2)
    rep = classify_ch_structure(j.graph, j.group, 3)
    assert rep.case == "locally-primitive"


def test_classify_not_ch():
    rep = classify_ch_structure(gc.cycle_graph(5), PermGroup.cyclic(5), 3)
    assert rep.case == "not-ch"
    assert rep.evidence["witness"] is not None


def test_csh_set_modes():
    p = cons.petersen()
    assert is_kcsh(p.graph, p.group, 3).verdict
    assert is_k_set_homogeneous(gc.cycle_graph(5), PermGroup.dihedral(5), 3).verdict


def test_report_serialization():
    p = cons.petersen()
    d = is_kch(p.graph, p.group, 3).to_dict()
    assert d["report"] == "homogeneity" and d["verdict"] is True
    d = local_action(p.graph, p.group, 0).to_dict()
    assert d["report"] == "local-action"
    d = ch3_local_criterion(p.graph, p.group).to_dict()
    assert d["report"] == "local-criterion"
    d = classify_ch_structure(p.graph, p.group, 3).to_dict()
    assert d["report"] == "classify"
