"""Independent brute-force oracles for the test suite.

Everything here works on raw image tuples and plain breadth-first closure so
that expected values are computed by a path that shares no code with the
library under test.
"""

from itertools import combinations, permutations


def mult(p, q):
    """Apply p then q."""
    return tuple(q[x] for x in p)


def inverse(p):
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def mulclose(gens, cap=2_000_000):
    """All elements of the group generated by raw image tuples."""
    gens = [tuple(g) for g in gens]
    if not gens:
        return set()
    ident = tuple(range(len(gens[0])))
    els = {ident}
    frontier = [ident]
    while frontier:
        new = []
        for a in frontier:
            for g in gens:
                c = mult(a, g)
                if c not in els:
                    els.add(c)
                    new.append(c)
                    if len(els) > cap:
                        raise RuntimeError("mulclose cap exceeded")
        frontier = new
    return els


def tuple_orbit_brute(elements, tup):
    """Orbit of a tuple under an explicit element list."""
    return {tuple(g[x] for x in tup) for g in elements}


def graph_adj(n, edges):
    adj = [set() for _ in range(n)]
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    return adj


def brute_automorphisms(n, edges):
    """All automorphisms of a graph on at most 8 vertices, by full filtering."""
    assert n <= 8
    adj = graph_adj(n, edges)
    out = []
    for p in permutations(range(n)):
        if all({p[x] for x in adj[u]} == adj[p[u]] for u in range(n)):
            out.append(p)
    return out


def brute_girth(n, edges):
    """Shortest cycle length by the delete-edge-and-BFS oracle."""
    adj = graph_adj(n, edges)
    best = None
    for u, v in edges:
        dist = {u: 0}
        queue = [u]
        while queue:
            x = queue.pop(0)
            for w in adj[x]:
                if (x, w) in ((u, v), (v, u)):
                    continue
                if w not in dist:
                    dist[w] = dist[x] + 1
                    queue.append(w)
        if v in dist:
            cyc = dist[v] + 1
            if best is None or cyc < best:
                best = cyc
    return best


def brute_isomorphism(n_a, edges_a, n_b, edges_b):
    """Some isomorphism a -> b (as an image tuple), or None; backtracking."""
    if n_a != n_b or len(edges_a) != len(edges_b):
        return None
    adj_a = graph_adj(n_a, edges_a)
    adj_b = graph_adj(n_b, edges_b)

    def extend(mapping):
        i = len(mapping)
        if i == n_a:
            return tuple(mapping)
        for w in range(n_b):
            if w in mapping:
                continue
            ok = True
            for j in range(i):
                if (j in adj_a[i]) != (mapping[j] in adj_b[w]):
                    ok = False
                    break
            if ok:
                res = extend(mapping + [w])
                if res is not None:
                    return res
        return None

    return extend([])


def petersen_edges():
    """Kneser graph on the 2-subsets of a 5-set (disjointness adjacency)."""
    verts = list(combinations(range(5), 2))
    idx = {v: i for i, v in enumerate(verts)}
    edges = []
    for a, b in combinations(verts, 2):
        if not set(a) & set(b):
            edges.append((idx[a], idx[b]))
    return 10, edges


def icosahedron_edges():
    """The icosahedron via the circulant construction C12(1,3,4)? No:
    explicit coordinates; each vertex adjacent to its five nearest."""
    # standard adjacency list (12 vertices, 30 edges)
    adj = {
        0: [1, 2, 3, 4, 5],
        1: [0, 2, 5, 6, 7],
        2: [0, 1, 3, 7, 8],
        3: [0, 2, 4, 8, 9],
        4: [0, 3, 5, 9, 10],
        5: [0, 1, 4, 6, 10],
        6: [1, 5, 7, 10, 11],
        7: [1, 2, 6, 8, 11],
        8: [2, 3, 7, 9, 11],
        9: [3, 4, 8, 10, 11],
        10: [4, 5, 6, 9, 11],
        11: [6, 7, 8, 9, 10],
    }
    edges = sorted({(min(u, v), max(u, v)) for u, vs in adj.items() for v in vs})
    assert len(edges) == 30
    return 12, edges


def orbital_graphs_connected(degree, gen_images):
    """Primitivity oracle: every nontrivial orbital graph connected.

    Uses the undirected closure of each orbital (pairing an orbital with its
    reverse does not change connectivity of the union).
    """
    els = mulclose(gen_images)
    stab0_orbits = {}
    seen = set()
    for x in range(1, degree):
        if x in seen:
            continue
        orb = {x}
        stack = [x]
        while stack:
            a = stack.pop()
            for g in gen_images:
                if g[0] == 0 and g[a] not in orb:
                    orb.add(g[a])
                    stack.append(g[a])
        # closure under the stabilizer, via full element list
        orb = {g[x] for g in els if g[0] == 0}
        seen |= orb
        stab0_orbits[x] = orb
    for x, orb in stab0_orbits.items():
        edges = {frozenset((g[0], g[x])) for g in els}
        adj = [set() for _ in range(degree)]
        for e in edges:
            u, v = tuple(e)
            adj[u].add(v)
            adj[v].add(u)
        comp = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in comp:
                    comp.add(w)
                    stack.append(w)
        if len(comp) != degree:
            return False
    return True
