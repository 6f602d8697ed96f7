"""Finite simple graphs: metrics, decompositions, isomorphism at desk scale.

Graphs are immutable, vertices are 0..n-1, adjacency is kept both as sorted
neighbor tuples and as bitset rows so membership tests are O(1).
"""

from __future__ import annotations

import json
import math
from itertools import combinations, permutations
from typing import Iterable, Optional, Sequence

from .errors import CapabilityError, InputError
from .permgroup import PermGroup, Permutation

AUTOMORPHISM_VERTEX_BOUND = 64
SMALL_ISO_BOUND = 6


class Graph:
    """Simple undirected graph on {0..n-1}."""

    __slots__ = ("n", "edges", "adj", "rows")

    def __init__(self, n: int, edges: Iterable[Sequence[int]]):
        if n < 0:
            raise InputError("vertex count must be nonnegative")
        seen = set()
        for e in edges:
            u, v = e
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge {e!r} out of range for n={n}")
            if u == v:
                raise InputError(f"loop at vertex {u}")
            seen.add((min(u, v), max(u, v)))
        self.n = n
        self.edges = tuple(sorted(seen))
        nbrs = [[] for _ in range(n)]
        rows = [0] * n
        for u, v in self.edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        self.adj = tuple(tuple(sorted(a)) for a in nbrs)
        self.rows = tuple(rows)

    def adjacent(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def neighbors(self, v: int) -> tuple:
        return self.adj[v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def degrees(self) -> tuple:
        return tuple(len(a) for a in self.adj)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def valency(self) -> Optional[int]:
        """Common degree if the graph is regular, else None."""
        degs = set(self.degrees())
        return degs.pop() if len(degs) == 1 else None

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.edge_count})"


def complete_graph(n: int) -> Graph:
    return Graph(n, combinations(range(n), 2))


def cycle_graph(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


# ---------------------------------------------------------------------------
# Basic structure
# ---------------------------------------------------------------------------

def induced_subgraph(g: Graph, vertices: Iterable[int]):
    """Induced subgraph plus the list mapping new index -> old vertex."""
    vs = sorted(set(vertices))
    if not vs:
        raise InputError("empty vertex set")
    for v in vs:
        if not 0 <= v < g.n:
            raise InputError(f"vertex {v} out of range")
    index = {v: i for i, v in enumerate(vs)}
    edges = [(index[u], index[v]) for u, v in g.edges if u in index and v in index]
    return Graph(len(vs), edges), vs


def components(g: Graph) -> list:
    seen = set()
    comps = []
    for start in range(g.n):
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for w in g.adj[u]:
                if w not in comp:
                    comp.add(w)
                    stack.append(w)
        seen |= comp
        comps.append(tuple(sorted(comp)))
    return comps


def is_connected(g: Graph) -> bool:
    return g.n <= 1 or len(components(g)) == 1


def distance_layers(g: Graph, v: int):
    """BFS layers from v plus the tuple of unreached vertices."""
    if not 0 <= v < g.n:
        raise InputError(f"vertex {v} out of range")
    dist = {v: 0}
    queue = [v]
    layers = [[v]]
    while queue:
        nxt = []
        for u in queue:
            for w in g.adj[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    nxt.append(w)
        if nxt:
            layers.append(sorted(nxt))
        queue = nxt
    unreached = tuple(sorted(set(range(g.n)) - set(dist)))
    return [tuple(layer) for layer in layers], unreached


def girth(g: Graph):
    """Length of a shortest cycle; math.inf for forests (BFS from every vertex)."""
    best = math.inf
    for src in range(g.n):
        dist = {src: 0}
        parent = {src: -1}
        queue = [src]
        while queue:
            u = queue.pop(0)
            if 2 * dist[u] >= best - 1:
                continue
            for w in g.adj[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif parent[u] != w:
                    best = min(best, dist[u] + dist[w] + 1)
    return best


def complement(g: Graph) -> Graph:
    edges = [(u, v) for u, v in combinations(range(g.n), 2) if not g.adjacent(u, v)]
    return Graph(g.n, edges)


def line_graph(g: Graph):
    """Line graph plus the edge list giving the vertex labeling."""
    if not g.edges:
        raise InputError("line graph of an edgeless graph")
    edges = list(g.edges)
    out = []
    for i, j in combinations(range(len(edges)), 2):
        if set(edges[i]) & set(edges[j]):
            out.append((i, j))
    return Graph(len(edges), out), edges


# ---------------------------------------------------------------------------
# Shape detectors
# ---------------------------------------------------------------------------

def _is_clique(g: Graph, comp: Sequence[int]) -> bool:
    return all(g.adjacent(u, v) for u, v in combinations(comp, 2))


def detect_complete(g: Graph) -> Optional[int]:
    """n if the graph is K_n (n >= 1), else None."""
    if g.n >= 1 and g.edge_count == g.n * (g.n - 1) // 2:
        return g.n
    return None


def detect_rkb(g: Graph) -> Optional[tuple]:
    """(r, b): r disjoint cliques of the common order b, else None."""
    comps = components(g)
    if not comps:
        return None
    sizes = {len(c) for c in comps}
    if len(sizes) != 1:
        return None
    if not all(_is_clique(g, c) for c in comps):
        return None
    return len(comps), sizes.pop()


def detect_complete_multipartite(g: Graph) -> Optional[tuple]:
    """(m, b): complete multipartite with m parts of the common size b."""
    comp_shape = detect_rkb(complement(g))
    if comp_shape is None:
        return None
    m, b = comp_shape
    if m < 2:
        return None
    return m, b


def shape_of(g: Graph) -> dict:
    """Coarse structural tag used in local-structure reports."""
    if g.n == 0:
        return {"kind": "empty"}
    kn = detect_complete(g)
    if kn is not None and g.n >= 2:
        return {"kind": "complete", "n": kn}
    mb = detect_complete_multipartite(g)
    if mb is not None:
        return {"kind": "complete-multipartite", "parts": mb[0], "part_size": mb[1]}
    rb = detect_rkb(g)
    if rb is not None:
        return {"kind": "disjoint-cliques", "cliques": rb[0], "clique_size": rb[1]}
    if is_connected(g):
        return {"kind": "connected-other"}
    return {"kind": "disconnected-other"}


# ---------------------------------------------------------------------------
# Small-graph isomorphisms
# ---------------------------------------------------------------------------

def small_isomorphisms(a: Graph, b: Graph) -> list:
    """All isomorphisms a -> b as image tuples; exhaustive, order <= 6."""
    if a.n > SMALL_ISO_BOUND or b.n > SMALL_ISO_BOUND:
        raise CapabilityError(f"exhaustive isomorphism capped at order {SMALL_ISO_BOUND}")
    if a.n != b.n or a.edge_count != b.edge_count:
        return []
    out = []
    for p in permutations(range(b.n)):
        if all(b.adjacent(p[u], p[v]) for u, v in a.edges) and \
           all(a.adjacent(u, v) == b.adjacent(p[u], p[v]) for u, v in combinations(range(a.n), 2)):
            out.append(p)
    return out


# ---------------------------------------------------------------------------
# Automorphism group
# ---------------------------------------------------------------------------

def _stable_colors(g: Graph) -> tuple:
    colors = list(g.degrees())
    while True:
        sig = [(colors[v], tuple(sorted(colors[w] for w in g.adj[v])))
               for v in range(g.n)]
        relabel = {s: i for i, s in enumerate(sorted(set(sig)))}
        new = [relabel[s] for s in sig]
        if new == colors:
            return tuple(colors)
        colors = new


def _search_automorphism(g: Graph, colors, fixed: int, target: int):
    """One automorphism fixing 0..fixed-1 pointwise with fixed -> target."""
    n = g.n
    full = (1 << n) - 1
    color_mask = [0] * (max(colors) + 1)
    for v, c in enumerate(colors):
        color_mask[c] |= 1 << v

    def candidates(v: int, images: list, used: int) -> int:
        mask = color_mask[colors[v]] & ~used
        for u, x in enumerate(images):
            if x is None:
                continue
            mask &= g.rows[x] if g.adjacent(u, v) else ~g.rows[x] & full
        return mask

    images = [None] * n
    used = 0
    for v in range(fixed):
        images[v] = v
        used |= 1 << v
    if colors[fixed] != colors[target] or not (candidates(fixed, images, used) >> target & 1):
        return None
    images[fixed] = target
    used |= 1 << target

    def rec(used: int):
        rest = [v for v in range(n) if images[v] is None]
        if not rest:
            return True
        best_v, best_mask, best_cnt = None, 0, n + 1
        for v in rest:
            mask = candidates(v, images, used)
            cnt = bin(mask).count("1")
            if cnt == 0:
                return False
            if cnt < best_cnt:
                best_v, best_mask, best_cnt = v, mask, cnt
        m = best_mask
        while m:
            w = (m & -m).bit_length() - 1
            m &= m - 1
            images[best_v] = w
            if rec(used | (1 << w)):
                return True
            images[best_v] = None
        return False

    if rec(used):
        return Permutation(tuple(images))
    return None


def automorphism_group(g: Graph) -> PermGroup:
    """Full automorphism group by color-refined backtracking (n <= 64)."""
    if g.n > AUTOMORPHISM_VERTEX_BOUND:
        raise CapabilityError(
            f"automorphism search capped at {AUTOMORPHISM_VERTEX_BOUND} vertices")
    if g.n == 0:
        return PermGroup.trivial(0)
    colors = _stable_colors(g)
    gens: list = []

    def orbit_of(v: int, level: int) -> set:
        level_gens = [p for p in gens if all(p(u) == u for u in range(level))]
        orb = {v}
        stack = [v]
        while stack:
            a = stack.pop()
            for p in level_gens:
                b = p(a)
                if b not in orb:
                    orb.add(b)
                    stack.append(b)
        return orb

    for i in range(g.n - 1):
        for w in range(g.n):
            if w == i or colors[w] != colors[i]:
                continue
            if w in orbit_of(i, i):
                continue
            p = _search_automorphism(g, colors, i, w)
            if p is not None:
                gens.append(p)
    group = PermGroup(g.n, gens)
    for p in group.generators:
        for u, v in g.edges:
            assert g.adjacent(p(u), p(v))
    return group


# ---------------------------------------------------------------------------
# Interchange formats: graph6, DOT, JSON edge lists
# ---------------------------------------------------------------------------

def graph6_encode(g: Graph) -> str:
    n = g.n
    if n > 258047:
        raise CapabilityError("graph6 size cap exceeded")
    if n <= 62:
        head = [n + 63]
    else:
        head = [126, (n >> 12) + 63, ((n >> 6) & 63) + 63, (n & 63) + 63]
    bits = []
    for v in range(1, n):
        for u in range(v):
            bits.append(1 if g.adjacent(u, v) else 0)
    while len(bits) % 6:
        bits.append(0)
    body = []
    for i in range(0, len(bits), 6):
        val = 0
        for b in bits[i:i + 6]:
            val = (val << 1) | b
        body.append(val + 63)
    return "".join(chr(c) for c in head + body)


def graph6_decode(text: str) -> Graph:
    s = text.strip()
    if not s:
        raise InputError("empty graph6 string")
    data = [ord(c) - 63 for c in s]
    for off, d in enumerate(data):
        if not 0 <= d <= 63:
            raise InputError(f"invalid graph6 character at offset {off}: {s[off]!r}")
    if data[0] == 63:
        if len(data) < 4:
            raise InputError("truncated graph6 header")
        n = (data[1] << 12) | (data[2] << 6) | data[3]
        body = data[4:]
    else:
        n = data[0]
        body = data[1:]
    need = n * (n - 1) // 2
    if len(body) != (need + 5) // 6:
        raise InputError(
            f"graph6 body length {len(body)} does not match n={n} (offset {len(s) - len(body)})")
    bits = []
    for d in body:
        for k in range(5, -1, -1):
            bits.append(d >> k & 1)
    edges = []
    i = 0
    for v in range(1, n):
        for u in range(v):
            if bits[i]:
                edges.append((u, v))
            i += 1
    if any(bits[need:]):
        raise InputError("nonzero padding bits in graph6 string")
    return Graph(n, edges)


def to_dot(g: Graph, labels: Optional[Sequence[str]] = None) -> str:
    lines = ["graph G {"]
    for v in range(g.n):
        label = f' [label="{labels[v]}"]' if labels else ""
        lines.append(f"  {v}{label};")
    for u, v in g.edges:
        lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_json(g: Graph) -> str:
    return json.dumps({"n": g.n, "edges": [list(e) for e in g.edges]})


def from_json(text: str) -> Graph:
    try:
        data = json.loads(text)
        return Graph(int(data["n"]), [tuple(e) for e in data["edges"]])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad JSON graph: {exc}") from None
