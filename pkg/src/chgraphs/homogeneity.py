"""Connected-homogeneity verdicts, local actions, and structure classification.

The central reduction: a labeled pattern of order m together with an injective
tuple inducing it is the same thing as an isomorphism between two induced
subgraphs, so "(G,k)-CH" is decided as "for every connected pattern of order
at most k, the embeddings form a single orbit".  A quadratic definitional
oracle (pairs of subgraphs, exhaustive isomorphism lists, extension tests)
guards the reduction at small scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, permutations
from typing import Optional, Sequence

from .errors import CapabilityError, InputError
from .graphcore import (
    Graph,
    detect_complete,
    detect_complete_multipartite,
    detect_rkb,
    girth,
    induced_subgraph,
    is_connected,
    shape_of,
    small_isomorphisms,
)
from .permgroup import Action, PermGroup

ORACLE_VERTEX_BOUND = 32
ORACLE_ORDER_BOUND = 10**6
PATTERN_ORDER_BOUND = 6


# ---------------------------------------------------------------------------
# Pattern catalogs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LabeledPattern:
    order: int
    edges: tuple

    @property
    def graph(self) -> Graph:
        return Graph(self.order, self.edges)

    @property
    def name(self) -> str:
        body = ",".join(f"{u}{v}" for u, v in self.edges) or "-"
        return f"{self.order}:{body}"


def _canonical_edges(m: int, edges) -> tuple:
    best = None
    for p in permutations(range(m)):
        cand = tuple(sorted(tuple(sorted((p[u], p[v]))) for u, v in edges))
        if best is None or cand < best:
            best = cand
    return best


@lru_cache(maxsize=None)
def pattern_catalog(max_order: int, connected_only: bool = True) -> tuple:
    """All labeled graphs on 1..max_order vertices, one per isomorphism class."""
    if not 1 <= max_order <= PATTERN_ORDER_BOUND:
        raise InputError(f"pattern order must be 1..{PATTERN_ORDER_BOUND}")
    out = []
    for m in range(1, max_order + 1):
        pairs = list(combinations(range(m), 2))
        seen = set()
        for bits in range(1 << len(pairs)):
            edges = tuple(pairs[i] for i in range(len(pairs)) if bits >> i & 1)
            canon = _canonical_edges(m, edges)
            if canon in seen:
                continue
            seen.add(canon)
            pat = LabeledPattern(m, canon)
            if connected_only and not is_connected(pat.graph):
                continue
            out.append(pat)
    out.sort(key=lambda p: (p.order, len(p.edges), p.edges))
    return tuple(out)


def embeddings(pattern: LabeledPattern, g: Graph) -> list:
    """All injective tuples inducing exactly the pattern, in lexicographic order."""
    m = pattern.order
    if m > PATTERN_ORDER_BOUND:
        raise CapabilityError(f"pattern order capped at {PATTERN_ORDER_BOUND}")
    pgraph = pattern.graph
    full = (1 << g.n) - 1
    out = []

    def rec(tup, used):
        i = len(tup)
        if i == m:
            out.append(tup)
            return
        mask = full & ~used
        for j in range(i):
            row = g.rows[tup[j]]
            mask &= row if pgraph.adjacent(i, j) else ~row & full
        while mask:
            w = (mask & -mask).bit_length() - 1
            mask &= mask - 1
            rec(tup + (w,), used | (1 << w))

    rec((), 0)
    return out


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

@dataclass
class Witness:
    pattern: str
    source: tuple
    target: tuple

    def to_dict(self) -> dict:
        return {"pattern": self.pattern,
                "source": list(self.source), "target": list(self.target)}


@dataclass
class CHReport:
    mode: str
    k: int
    verdict: bool
    graph_order: int
    group_order: int
    patterns: list = field(default_factory=list)
    witness: Optional[Witness] = None

    def to_dict(self) -> dict:
        return {
            "report": "homogeneity",
            "mode": self.mode,
            "k": self.k,
            "verdict": self.verdict,
            "graph_order": self.graph_order,
            "group_order": self.group_order,
            "patterns": self.patterns,
            "witness": self.witness.to_dict() if self.witness else None,
        }


@dataclass
class LocalActionReport:
    base_vertex: int
    neighborhood: tuple
    transitive: bool
    rank: Optional[int]
    suborbit_sizes: list
    primitive: Optional[bool]
    block_systems: list
    shape: dict
    kernel_order: int

    def to_dict(self) -> dict:
        return {
            "report": "local-action",
            "base_vertex": self.base_vertex,
            "neighborhood": list(self.neighborhood),
            "transitive": self.transitive,
            "rank": self.rank,
            "suborbit_sizes": self.suborbit_sizes,
            "primitive": self.primitive,
            "block_systems": [[list(b) for b in sys] for sys in self.block_systems],
            "shape": self.shape,
            "kernel_order": self.kernel_order,
        }


@dataclass
class CriterionReport:
    verdict: bool
    branch: Optional[str]
    vertex_transitive: bool
    girth: object
    local: LocalActionReport

    def to_dict(self) -> dict:
        return {
            "report": "local-criterion",
            "verdict": self.verdict,
            "branch": self.branch,
            "vertex_transitive": self.vertex_transitive,
            "girth": None if self.girth is math.inf else self.girth,
            "local": self.local.to_dict(),
        }


@dataclass
class ClassifyReport:
    k: int
    ch: bool
    case: str
    evidence: dict

    def to_dict(self) -> dict:
        return {"report": "classify", "k": self.k, "ch": self.ch,
                "case": self.case, "evidence": self.evidence}


# ---------------------------------------------------------------------------
# Homogeneity verdicts
# ---------------------------------------------------------------------------

def check_group_acts(g: Graph, group: PermGroup) -> None:
    if group.degree != g.n:
        raise InputError(f"group degree {group.degree} != vertex count {g.n}")
    for p in group.generators:
        for u, v in g.edges:
            if not g.adjacent(p(u), p(v)):
                raise InputError(
                    f"generator {p} maps edge {{{u},{v}}} to a non-edge")


def _orbit_reps_on_tuples(group: PermGroup, tuples: list, setwise: bool):
    """Partition tuples (or their underlying sets) into orbits; return reps."""
    if setwise:
        items = sorted({tuple(sorted(t)) for t in tuples})
    else:
        items = tuples
    item_set = set(items)
    seen = set()
    reps = []
    for t in items:
        if t in seen:
            continue
        reps.append(t)
        stack = [t]
        seen.add(t)
        while stack:
            cur = stack.pop()
            for p in group.generators:
                img = p.apply(cur)
                if setwise:
                    img = tuple(sorted(img))
                if img not in seen:
                    assert img in item_set, "group does not preserve the pattern"
                    seen.add(img)
                    stack.append(img)
    return reps, len(items)


def _homogeneity_check(g: Graph, group: PermGroup, k: int, *,
                       connected_only: bool, setwise: bool, mode: str) -> CHReport:
    if k < 1:
        raise InputError("k must be >= 1")
    check_group_acts(g, group)
    report = CHReport(mode=mode, k=k, verdict=True,
                      graph_order=g.n, group_order=group.order)
    for pattern in pattern_catalog(min(k, PATTERN_ORDER_BOUND), connected_only):
        if pattern.order > k:
            continue
        embs = embeddings(pattern, g)
        if not embs:
            report.patterns.append(
                {"pattern": pattern.name, "embeddings": 0, "orbits": 0})
            continue
        reps, total = _orbit_reps_on_tuples(group, embs, setwise)
        report.patterns.append(
            {"pattern": pattern.name, "embeddings": total, "orbits": len(reps)})
        if len(reps) > 1 and report.verdict:
            report.verdict = False
            report.witness = Witness(pattern.name, reps[0], reps[1])
    return report


def is_kch(g: Graph, group: PermGroup, k: int) -> CHReport:
    """Every isomorphism between connected induced subgraphs of order <= k
    extends to a group element."""
    return _homogeneity_check(g, group, k, connected_only=True, setwise=False,
                              mode="ch")


def is_kcsh(g: Graph, group: PermGroup, k: int) -> CHReport:
    """Any two isomorphic connected induced subgraphs of order <= k lie in a
    common orbit (setwise)."""
    return _homogeneity_check(g, group, k, connected_only=True, setwise=True,
                              mode="csh")


def is_k_homogeneous(g: Graph, group: PermGroup, k: int) -> CHReport:
    return _homogeneity_check(g, group, k, connected_only=False, setwise=False,
                              mode="homogeneous")


def is_k_set_homogeneous(g: Graph, group: PermGroup, k: int) -> CHReport:
    return _homogeneity_check(g, group, k, connected_only=False, setwise=True,
                              mode="set-homogeneous")


def revalidate_witness(g: Graph, group: PermGroup, report: CHReport) -> bool:
    """Independently confirm a failing witness: both tuples induce the same
    pattern and no group element carries one to the other."""
    w = report.witness
    if w is None:
        return False
    src, dst = w.source, w.target
    order = len(src)
    same_pattern = all(
        g.adjacent(src[i], src[j]) == g.adjacent(dst[i], dst[j])
        for i, j in combinations(range(order), 2))
    if not same_pattern:
        return False
    if report.mode in ("ch", "homogeneous"):
        return group.transporter(src, dst) is None
    # setwise: no ordering of dst is reachable
    return all(group.transporter(src, perm) is None
               for perm in permutations(dst))


def _orbit_set(group: PermGroup, start: tuple) -> set:
    """Plain generator closure of a tuple (no witnesses kept)."""
    seen = {start}
    stack = [start]
    while stack:
        t = stack.pop()
        for p in group.generators:
            img = p.apply(t)
            if img not in seen:
                seen.add(img)
                stack.append(img)
    return seen


def definitional_oracle_kch(g: Graph, group: PermGroup, k: int) -> CHReport:
    """Anti-bug cross-check straight from the definition: enumerate all pairs
    of connected induced subgraphs of order <= k, list every isomorphism
    between them exhaustively, and test each for extension."""
    if g.n > ORACLE_VERTEX_BOUND:
        raise CapabilityError(f"oracle capped at {ORACLE_VERTEX_BOUND} vertices")
    if group.order > ORACLE_ORDER_BOUND:
        raise CapabilityError(f"oracle capped at group order {ORACLE_ORDER_BOUND}")
    check_group_acts(g, group)
    report = CHReport(mode="ch-oracle", k=k, verdict=True,
                      graph_order=g.n, group_order=group.order)
    classes: dict = {}
    for m in range(1, min(k, PATTERN_ORDER_BOUND) + 1):
        for vs in combinations(range(g.n), m):
            sub, _ = induced_subgraph(g, vs)
            if not is_connected(sub):
                continue
            canon = _canonical_edges(m, sub.edges)
            classes.setdefault((m, canon), []).append((vs, sub))
    for (m, canon), members in sorted(classes.items()):
        pattern = Graph(m, canon)
        emb_lists = []
        for vs, sub in members:
            isos = small_isomorphisms(pattern, sub)
            emb_lists.append([tuple(vs[i] for i in iso) for iso in isos])
        bad = None
        for src_list in emb_lists:
            e1 = src_list[0]
            orbit = _orbit_set(group, e1)
            for dst_list in emb_lists:
                for e2 in dst_list:
                    if e2 not in orbit:
                        bad = (e1, e2)
                        break
                if bad:
                    break
            if bad:
                break
        name = LabeledPattern(m, canon).name
        report.patterns.append({"pattern": name,
                                "embeddings": sum(len(l) for l in emb_lists),
                                "orbits": 1 if bad is None else 2})
        if bad and report.verdict:
            report.verdict = False
            report.witness = Witness(name, bad[0], bad[1])
    return report


# ---------------------------------------------------------------------------
# Local actions and the order-3 criterion
# ---------------------------------------------------------------------------

def local_action(g: Graph, group: PermGroup, v: int) -> LocalActionReport:
    if not 0 <= v < g.n:
        raise InputError(f"vertex {v} out of range")
    nbrs = g.neighbors(v)
    if not nbrs:
        raise InputError(f"vertex {v} is isolated")
    check_group_acts(g, group)
    stab = group.point_stabilizer(v)
    act = Action(stab, nbrs, points=True)
    nbhd_graph, _ = induced_subgraph(g, nbrs)
    transitive = act.is_transitive()
    rank = act.rank() if transitive else None
    suborbit_sizes = sorted(len(o) for o in act.suborbits(nbrs[0])) if transitive else \
        sorted(len(o) for o in act.image.orbits())
    systems = act.minimal_block_systems() if transitive else []
    return LocalActionReport(
        base_vertex=v,
        neighborhood=nbrs,
        transitive=transitive,
        rank=rank,
        suborbit_sizes=suborbit_sizes,
        primitive=(not systems) if transitive else None,
        block_systems=[sys.blocks for sys in systems],
        shape=shape_of(nbhd_graph),
        kernel_order=act.kernel.order,
    )


def ch3_local_criterion(g: Graph, group: PermGroup) -> CriterionReport:
    """Order-3 connected-homogeneity by local structure alone: the group is
    vertex-transitive and the local action is 2-transitive, or has rank 3
    while the graph has girth 3."""
    if not is_connected(g):
        raise InputError("criterion requires a connected graph")
    check_group_acts(g, group)
    vt = group.is_transitive()
    local = local_action(g, group, 0)
    gir = girth(g)
    branch = None
    verdict = False
    if vt and local.transitive:
        two_transitive = (len(local.neighborhood) == 1 or
                          local.rank == 2)
        if two_transitive:
            verdict, branch = True, "locally-2-transitive"
        elif local.rank == 3 and gir == 3:
            verdict, branch = True, "rank3-girth3"
    return CriterionReport(verdict=verdict, branch=branch, vertex_transitive=vt,
                           girth=gir, local=local)


# ---------------------------------------------------------------------------
# Arc and geodesic transitivity
# ---------------------------------------------------------------------------

def _s_arcs(g: Graph, s: int) -> list:
    arcs = [(v,) for v in range(g.n)]
    for step in range(s):
        nxt = []
        for walk in arcs:
            prev = walk[-2] if len(walk) >= 2 else None
            for w in g.adj[walk[-1]]:
                if w != prev:
                    nxt.append(walk + (w,))
        arcs = nxt
    return arcs


def is_s_arc_transitive(g: Graph, group: PermGroup, s: int) -> bool:
    """Single orbit on walks (v_0..v_s) with consecutive vertices adjacent and
    no immediate backtracking."""
    if not 1 <= s <= 3:
        raise InputError("s must be 1..3")
    check_group_acts(g, group)
    arcs = _s_arcs(g, s)
    if not arcs:
        raise InputError(f"graph has no {s}-arcs")
    orbit = group.tuple_orbit(arcs[0])
    return len(orbit) == len(arcs)


def is_2_geodesic_transitive(g: Graph, group: PermGroup) -> bool:
    """Single orbit on 2-arcs whose endpoints are at distance 2."""
    check_group_acts(g, group)
    geos = [t for t in _s_arcs(g, 2)
            if t[0] != t[2] and not g.adjacent(t[0], t[2])]
    if not geos:
        raise InputError("graph has no 2-geodesics")
    orbit = group.tuple_orbit(geos[0])
    return len(orbit) == len(geos)


# ---------------------------------------------------------------------------
# Structure classification for CH graphs
# ---------------------------------------------------------------------------

def classify_ch_structure(g: Graph, group: PermGroup, k: int) -> ClassifyReport:
    """Which of the five structural cases a (G,k)-CH graph falls into."""
    if k < 3:
        raise InputError("classification applies for k >= 3")
    ch = is_kch(g, group, k)
    if not ch.verdict:
        return ClassifyReport(k=k, ch=False, case="not-ch",
                              evidence={"witness": ch.witness.to_dict()})
    n_complete = detect_complete(g)
    if n_complete is not None and g.n >= 2:
        t = min(k, g.n)
        return ClassifyReport(k=k, ch=True, case="complete",
                              evidence={"n": n_complete,
                                        "k_transitive": group.is_k_transitive(t),
                                        "transitivity_checked": t})
    mb = detect_complete_multipartite(g)
    if mb is not None:
        return ClassifyReport(k=k, ch=True, case="complete-multipartite",
                              evidence={"parts": mb[0], "part_size": mb[1]})
    gir = girth(g)
    if gir is math.inf or gir >= 4:
        return ClassifyReport(
            k=k, ch=True, case="two-arc-transitive",
            evidence={"girth": None if gir is math.inf else gir,
                      "two_arc_transitive": is_s_arc_transitive(g, group, 2)})
    local = local_action(g, group, 0)
    if local.shape["kind"] == "disjoint-cliques" and \
            local.shape["cliques"] > 1 and local.shape["clique_size"] > 1:
        return ClassifyReport(
            k=k, ch=True, case="locally-disconnected",
            evidence={"r": local.shape["cliques"], "b": local.shape["clique_size"],
                      "local_rank": local.rank, "local_primitive": local.primitive})
    if local.primitive and local.rank == 3 and local.shape["kind"] == "connected-other":
        evidence = {"local_rank": 3, "local_primitive": True,
                    "locally_connected": True}
        if k >= 5:
            evidence["note"] = ("local graph identification at k=5 "
                                "(Schlaefli graph or complement) not verified")
        return ClassifyReport(k=k, ch=True, case="locally-primitive", evidence=evidence)
    return ClassifyReport(k=k, ch=True, case="unclassified",
                          evidence={"local_shape": local.shape,
                                    "local_rank": local.rank,
                                    "girth": gir})
