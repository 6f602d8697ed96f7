"""Graph families with their companion groups.

Every constructor returns a FamilyInstance whose group generators are checked
to be automorphisms of the graph.  Vertex order is always the lexicographic
order of the structured labels, so outputs are reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterable, Optional, Sequence

from .errors import CapabilityError, InputError
from .graphcore import Graph, automorphism_group, complement, line_graph
from .permgroup import PermGroup, Permutation


# ---------------------------------------------------------------------------
# Finite groups: multiplication table or elementary abelian vector space
# ---------------------------------------------------------------------------

class TableGroup:
    """Group given by a multiplication table over 0..n-1 with identity 0."""

    def __init__(self, table: Sequence[Sequence[int]]):
        n = len(table)
        self.table = tuple(tuple(row) for row in table)
        for i, row in enumerate(self.table):
            if len(row) != n or set(row) != set(range(n)):
                raise InputError(f"row {i} is not a permutation of 0..{n - 1}")
            if self.table[0][i] != i or row[0] != i:
                raise InputError("element 0 is not an identity")
        cols = list(zip(*self.table))
        for j, col in enumerate(cols):
            if set(col) != set(range(n)):
                raise InputError(f"column {j} is not a permutation of 0..{n - 1}")
        if n <= 128:
            for a in range(n):
                for b in range(n):
                    ab = self.table[a][b]
                    for c in range(n):
                        if self.table[ab][c] != self.table[a][self.table[b][c]]:
                            raise InputError(f"multiplication not associative at ({a},{b},{c})")
        self._inv = [0] * n
        for a in range(n):
            for b in range(n):
                if self.table[a][b] == 0:
                    self._inv[a] = b

    @property
    def order(self) -> int:
        return len(self.table)

    @property
    def identity(self) -> int:
        return 0

    def mult(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self._inv[a]

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.mult(x, a)
            k += 1
        return k

    def conjugate(self, a: int, g: int) -> int:
        return self.mult(self.mult(self.inv(g), a), g)

    def subgroup_generated(self, gens: Iterable[int]) -> frozenset:
        els = {0}
        frontier = list(set(gens))
        els.update(frontier)
        while frontier:
            new = []
            for a in frontier:
                for g in list(els):
                    for c in (self.mult(a, g), self.mult(g, a)):
                        if c not in els:
                            els.add(c)
                            new.append(c)
            frontier = new
        return frozenset(els)

    def is_abelian(self) -> bool:
        n = self.order
        return all(self.table[a][b] == self.table[b][a]
                   for a in range(n) for b in range(a))


class VectorGroup:
    """Elementary abelian group F_p^n; elements are indices whose base-p
    digits, most significant first, are the coordinates."""

    def __init__(self, p: int, n: int):
        if p < 2 or n < 1:
            raise InputError("need p >= 2 and n >= 1")
        if p ** n > 1024:
            raise CapabilityError("vector group capped at 1024 elements")
        if any(p % d == 0 for d in range(2, p)):
            raise InputError(f"{p} is not prime")
        self.p = p
        self.n = n

    @property
    def order(self) -> int:
        return self.p ** self.n

    @property
    def identity(self) -> int:
        return 0

    def vector(self, index: int) -> tuple:
        digits = []
        for _ in range(self.n):
            digits.append(index % self.p)
            index //= self.p
        return tuple(reversed(digits))

    def index(self, vector: Sequence[int]) -> int:
        out = 0
        for d in vector:
            out = out * self.p + d % self.p
        return out

    def basis(self) -> tuple:
        return tuple(self.index([1 if j == i else 0 for j in range(self.n)])
                     for i in range(self.n))

    def mult(self, a: int, b: int) -> int:
        va, vb = self.vector(a), self.vector(b)
        return self.index([(x + y) % self.p for x, y in zip(va, vb)])

    def inv(self, a: int) -> int:
        return self.index([(-x) % self.p for x in self.vector(a)])

    def element_order(self, a: int) -> int:
        return 1 if a == 0 else self.p

    def conjugate(self, a: int, g: int) -> int:
        return a

    def subgroup_generated(self, gens: Iterable[int]) -> frozenset:
        els = {0}
        frontier = list(set(gens))
        els.update(frontier)
        while frontier:
            new = []
            for a in frontier:
                for g in list(els):
                    c = self.mult(a, g)
                    if c not in els:
                        els.add(c)
                        new.append(c)
            frontier = new
        return frozenset(els)

    def is_abelian(self) -> bool:
        return True

    def linear_map_permutation(self, images_of_basis: Sequence[int]) -> Permutation:
        """The permutation of group elements induced by a linear map given by
        the images of the basis vectors (must be invertible)."""
        imgs = []
        basis_imgs = [self.vector(x) for x in images_of_basis]
        for a in range(self.order):
            va = self.vector(a)
            out = [0] * self.n
            for coeff, bimg in zip(va, basis_imgs):
                out = [(o + coeff * x) % self.p for o, x in zip(out, bimg)]
            imgs.append(self.index(out))
        if set(imgs) != set(range(self.order)):
            raise InputError("linear map is not invertible")
        return Permutation(imgs)


def cyclic_table(n: int) -> TableGroup:
    return TableGroup([[(i + j) % n for j in range(n)] for i in range(n)])


# ---------------------------------------------------------------------------
# Cayley graphs
# ---------------------------------------------------------------------------

@dataclass
class CayleySpec:
    group: object  # TableGroup or VectorGroup
    connection: tuple

    def __post_init__(self):
        h = self.group
        s = tuple(sorted(set(self.connection)))
        object.__setattr__(self, "connection", s)
        for x in s:
            if not 0 <= x < h.order:
                raise InputError(f"connection element {x} out of range")
        if h.identity in s:
            raise InputError("connection set contains the identity")
        sset = set(s)
        for x in s:
            if h.inv(x) not in sset:
                raise InputError(f"connection set is not inverse-closed at {x}")

    @property
    def generates(self) -> bool:
        return len(self.group.subgroup_generated(self.connection)) == self.group.order


@dataclass
class FamilyInstance:
    name: str
    graph: Graph
    group: PermGroup
    vertex_labels: list
    cayley: Optional[CayleySpec] = None
    right_regular: Optional[PermGroup] = None
    aut_hs: Optional[PermGroup] = None
    notes: dict = field(default_factory=dict)

    def label_index(self, label) -> int:
        return self.vertex_labels.index(label)


def _check_instance(inst: FamilyInstance) -> FamilyInstance:
    g = inst.graph
    for p in inst.group.generators:
        for u, v in g.edges:
            if not g.adjacent(p(u), p(v)):
                raise AssertionError(
                    f"{inst.name}: generator {p} is not a graph automorphism")
    return inst


def right_regular_group(h) -> PermGroup:
    """Right-multiplication permutations, generated by a small generating set."""
    gens = []
    generated = {0}
    for x in range(1, h.order):
        if x in generated:
            continue
        gens.append(x)
        generated = h.subgroup_generated(gens)
        if len(generated) == h.order:
            break
    perms = [Permutation([h.mult(g, x) for g in range(h.order)]) for x in gens]
    return PermGroup(h.order, perms)


def right_translation(h, x: int) -> Permutation:
    return Permutation([h.mult(g, x) for g in range(h.order)])


def cayley_graph(spec: CayleySpec, name: str = "cayley",
                 aut_hs_gens: Sequence[Permutation] = ()) -> FamilyInstance:
    h = spec.group
    edges = []
    for g in range(h.order):
        for s in spec.connection:
            edges.append((g, h.mult(s, g)))
    graph = Graph(h.order, edges)
    h_r = right_regular_group(h)
    assert h_r.order == h.order and h_r.is_regular()
    gens = list(h_r.generators) + list(aut_hs_gens)
    group = PermGroup(h.order, gens)
    inst = FamilyInstance(name, graph, group, list(range(h.order)),
                          cayley=spec, right_regular=h_r)
    if aut_hs_gens:
        inst.aut_hs = PermGroup(h.order, list(aut_hs_gens))
        s_set = set(spec.connection)
        for p in inst.aut_hs.generators:
            if p(0) != 0 or {p(s) for s in spec.connection} != s_set:
                raise AssertionError(f"{name}: {p} does not stabilize the connection set")
            conj = [p.inverse() * t * p for t in h_r.generators]
            if any(c not in h_r for c in conj):
                raise AssertionError(f"{name}: {p} does not normalize the translations")
    # connectivity matches <S> = H
    from .graphcore import is_connected
    assert is_connected(graph) == spec.generates
    return _check_instance(inst)


# ---------------------------------------------------------------------------
# Wreath products
# ---------------------------------------------------------------------------

def wreath_product_generators(inner: PermGroup, outer: PermGroup,
                              mode: str = "imprimitive") -> PermGroup:
    """Wreath product inner wr outer, as permutations.

    imprimitive: on r*b points in r blocks; product_action: on b^r tuples.
    """
    b, r = inner.degree, outer.degree
    if mode == "imprimitive":
        gens = []
        for i in range(r):
            for g in inner.generators:
                images = list(range(r * b))
                for x in range(b):
                    images[i * b + x] = i * b + g(x)
                gens.append(Permutation(images))
        for t in outer.generators:
            images = [t(i) * b + x for i in range(r) for x in range(b)]
            gens.append(Permutation(images))
        group = PermGroup(r * b, gens)
    elif mode == "product_action":
        n = b ** r
        def index(tup):
            out = 0
            for x in tup:
                out = out * b + x
            return out
        tuples = list(product(range(b), repeat=r))
        gens = []
        for i in range(r):
            for g in inner.generators:
                images = [index(t[:i] + (g(t[i]),) + t[i + 1:]) for t in tuples]
                gens.append(Permutation(images))
        for t in outer.generators:
            tinv = t.inverse()
            images = [index(tuple(tup[tinv(i)] for i in range(r))) for tup in tuples]
            gens.append(Permutation(images))
        group = PermGroup(n, gens)
    else:
        raise InputError(f"unknown wreath mode {mode!r}")
    assert group.order == inner.order ** r * outer.order
    return group


# ---------------------------------------------------------------------------
# GL(l, 2) generators for the affine clique-union family
# ---------------------------------------------------------------------------

def _gl2_generator_maps(l: int) -> list:
    """Basis-image lists generating GL(l, 2)."""
    if l == 1:
        return []
    cycle = [[1 if j == (i + 1) % l else 0 for j in range(l)] for i in range(l)]
    transvection = [[1 if j == i else 0 for j in range(l)] for i in range(l)]
    transvection[0][1] = 1
    return [cycle, transvection]


def gl_order(l: int, p: int = 2) -> int:
    out = 1
    for i in range(l):
        out *= p ** l - p ** i
    return out


# ---------------------------------------------------------------------------
# The family catalog
# ---------------------------------------------------------------------------

def affine_clique_union(r: int, l: int) -> FamilyInstance:
    """Cayley graph of Z_2^{r*l} whose connection set is the union of the
    nonidentity elements of r coordinate blocks; the companion group is the
    translations extended by GL(l,2) wr S_r.  CLI family ``ex82:r,l``."""
    if r < 2 or l < 2:
        raise InputError("need r >= 2 and l >= 2")
    h = VectorGroup(2, r * l)
    s = []
    for i in range(r):
        for x in range(1, h.order):
            vec = h.vector(x)
            if all(v == 0 for j, v in enumerate(vec) if not i * l <= j < (i + 1) * l) \
               and any(vec[i * l:(i + 1) * l]):
                s.append(x)
    spec = CayleySpec(h, tuple(s))
    aut_gens = []
    basis = h.basis()
    for m in _gl2_generator_maps(l):
        images = list(basis)
        for bi in range(l):
            vec = [0] * (r * l)
            vec[:l] = m[bi]
            images[bi] = h.index(vec)
        aut_gens.append(h.linear_map_permutation(images))
    # block r-cycle and block swap
    for sigma in _block_perms(r):
        images = [basis[sigma[j // l] * l + j % l] for j in range(r * l)]
        aut_gens.append(h.linear_map_permutation(images))
    inst = cayley_graph(spec, f"ex82:{r},{l}", aut_gens)
    assert inst.aut_hs.order == gl_order(l) ** r * _factorial(r)
    assert inst.group.order == h.order * inst.aut_hs.order
    return inst


def _block_perms(r: int) -> list:
    out = []
    if r >= 2:
        out.append([1, 0] + list(range(2, r)))
    if r >= 3:
        out.append(list(range(1, r)) + [0])
    return out


def _factorial(n: int) -> int:
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def affine_ternary_cube(r: int) -> FamilyInstance:
    """Cayley graph of Z_3^r with the signed standard basis as connection set;
    companion group is the translations extended by S_2 wr S_r.  CLI family
    ``ex83:r``."""
    if r < 2:
        raise InputError("need r >= 2")
    h = VectorGroup(3, r)
    basis = h.basis()
    s = tuple(sorted({*basis, *(h.inv(b) for b in basis)}))
    aut_gens = []
    negate_first = list(basis)
    negate_first[0] = h.inv(basis[0])
    aut_gens.append(h.linear_map_permutation(negate_first))
    for sigma in _block_perms(r):
        aut_gens.append(h.linear_map_permutation([basis[sigma[i]] for i in range(r)]))
    inst = cayley_graph(CayleySpec(h, s), f"ex83:{r}", aut_gens)
    assert inst.aut_hs.order == 2 ** r * _factorial(r)
    assert inst.group.order == 3 ** r * inst.aut_hs.order
    return inst


def hamming(d: int, k: int) -> FamilyInstance:
    """Hamming graph H(d, k) with S_k wr S_d in product action."""
    if d < 2 or k < 2:
        raise InputError("need d >= 2 and k >= 2")
    labels = list(product(range(k), repeat=d))
    index = {t: i for i, t in enumerate(labels)}
    edges = []
    for t in labels:
        for pos in range(d):
            for val in range(t[pos] + 1, k):
                edges.append((index[t], index[t[:pos] + (val,) + t[pos + 1:]]))
    graph = Graph(len(labels), edges)
    group = wreath_product_generators(PermGroup.symmetric(k),
                                      PermGroup.symmetric(d), "product_action")
    assert graph.valency() == d * (k - 1)
    return _check_instance(FamilyInstance(f"hamming:{d},{k}", graph, group, labels))


def hamming_complement(d: int, k: int) -> FamilyInstance:
    inst = hamming(d, k)
    return _check_instance(FamilyInstance(
        f"hamming-c:{d},{k}", complement(inst.graph), inst.group, inst.vertex_labels))


def johnson(n: int, k: int) -> FamilyInstance:
    """Johnson graph J(n, k) with the induced symmetric group."""
    if not 1 <= k <= n - 1:
        raise InputError("need 1 <= k <= n-1")
    labels = [frozenset(c) for c in combinations(range(n), k)]
    index = {s: i for i, s in enumerate(labels)}
    edges = [(index[a], index[b]) for a, b in combinations(labels, 2)
             if len(a & b) == k - 1]
    graph = Graph(len(labels), edges)
    gens = []
    for sn_gen in PermGroup.symmetric(n).generators:
        gens.append(Permutation([index[frozenset(sn_gen(x) for x in s)] for s in labels]))
    group = PermGroup(len(labels), gens)
    assert graph.valency() == k * (n - k)
    assert group.order == _factorial(n)
    return _check_instance(FamilyInstance(f"johnson:{n},{k}", graph, group, labels))


def johnson_complement(n: int, k: int) -> FamilyInstance:
    inst = johnson(n, k)
    return _check_instance(FamilyInstance(
        f"johnson-c:{n},{k}", complement(inst.graph), inst.group, inst.vertex_labels))


def _folded_group_gens(h: VectorGroup, n: int) -> list:
    """Linear maps permuting {e_1..e_{n-1}, e_1+..+e_{n-1}} as the symmetric
    group of degree n does."""
    basis = h.basis()
    all_ones = h.index([1] * (n - 1))
    transpose_last = list(basis)
    transpose_last[-1] = all_ones
    cycle = [basis[i + 1] for i in range(n - 2)] + [all_ones]
    return [h.linear_map_permutation(transpose_last),
            h.linear_map_permutation(cycle)]


def folded_cube(n: int) -> FamilyInstance:
    """The folded cube: Cayley graph of Z_2^{n-1} over the basis plus the
    all-ones vector, with the translations extended by the full symmetric
    group permuting that connection set (n odd, n >= 3)."""
    if n < 3 or n % 2 == 0:
        raise InputError("need odd n >= 3")
    h = VectorGroup(2, n - 1)
    omega = tuple(sorted({*h.basis(), h.index([1] * (n - 1))}))
    aut_gens = _folded_group_gens(h, n)
    inst = cayley_graph(CayleySpec(h, omega), f"folded:{n}", aut_gens)
    assert inst.aut_hs.order == _factorial(n)
    return inst


def folded_cube_rank3(n: int) -> FamilyInstance:
    """Cayley graph of Z_2^{n-1} whose connection set is all products of n-2
    distinct elements of the folded-cube connection set (n odd, n >= 3); the
    locally connected rank-3 companion of the folded cube."""
    if n < 3 or n % 2 == 0:
        raise InputError("need odd n >= 3")
    h = VectorGroup(2, n - 1)
    omega = sorted({*h.basis(), h.index([1] * (n - 1))})
    s = set()
    for excluded in combinations(range(n), 2):
        acc = 0
        for i, x in enumerate(omega):
            if i not in excluded:
                acc = h.mult(acc, x)
        s.add(acc)
    assert len(s) == n * (n - 1) // 2
    aut_gens = _folded_group_gens(h, n)
    inst = cayley_graph(CayleySpec(h, tuple(sorted(s))), f"folded-rank3:{n}", aut_gens)
    assert inst.aut_hs.order == _factorial(n)
    return inst


def hypercube(n: int) -> FamilyInstance:
    """Q_n with its full automorphism group (backtracking search)."""
    if not 1 <= n <= 6:
        raise InputError("need 1 <= n <= 6")
    size = 1 << n
    edges = [(u, u ^ (1 << b)) for u in range(size) for b in range(n)]
    graph = Graph(size, edges)
    group = automorphism_group(graph)
    assert group.order == _factorial(n) * 2 ** n
    return _check_instance(FamilyInstance(f"cube:{n}", graph, group, list(range(size))))


def halved_cube(n: int) -> FamilyInstance:
    """Even-weight vertices of Q_n, adjacent at Hamming distance 2, with the
    full automorphism group."""
    if not 2 <= n <= 7:
        raise InputError("need 2 <= n <= 7")
    labels = [u for u in range(1 << n) if bin(u).count("1") % 2 == 0]
    index = {u: i for i, u in enumerate(labels)}
    edges = [(index[u], index[v]) for u, v in combinations(labels, 2)
             if bin(u ^ v).count("1") == 2]
    graph = Graph(len(labels), edges)
    group = automorphism_group(graph)
    return _check_instance(FamilyInstance(f"halfcube:{n}", graph, group, labels))


def complete(n: int) -> FamilyInstance:
    if n < 1:
        raise InputError("need n >= 1")
    graph = Graph(n, combinations(range(n), 2))
    return _check_instance(FamilyInstance(
        f"complete:{n}", graph, PermGroup.symmetric(n), list(range(n))))


def complete_multipartite(m: int, b: int) -> FamilyInstance:
    """K_{m[b]} with the imprimitive wreath group permuting parts."""
    if m < 2 or b < 1:
        raise InputError("need m >= 2 and b >= 1")
    n = m * b
    edges = [(u, v) for u, v in combinations(range(n), 2) if u // b != v // b]
    graph = Graph(n, edges)
    group = wreath_product_generators(PermGroup.symmetric(b),
                                      PermGroup.symmetric(m), "imprimitive")
    return _check_instance(FamilyInstance(
        f"multipartite:{m},{b}", graph, group, list(range(n))))


def petersen() -> FamilyInstance:
    """The Petersen graph as the disjointness graph on 2-subsets of a 5-set."""
    labels = [frozenset(c) for c in combinations(range(5), 2)]
    index = {s: i for i, s in enumerate(labels)}
    edges = [(index[a], index[b]) for a, b in combinations(labels, 2) if not a & b]
    graph = Graph(10, edges)
    group = automorphism_group(graph)
    assert group.order == 120
    return _check_instance(FamilyInstance("petersen", graph, group, labels))


def line_graph_instance(inst: FamilyInstance) -> FamilyInstance:
    """Line graph with the group action lifted to edges."""
    lg, edge_labels = line_graph(inst.graph)
    index = {e: i for i, e in enumerate(edge_labels)}
    gens = []
    for p in inst.group.generators:
        images = []
        for u, v in edge_labels:
            pu, pv = p(u), p(v)
            images.append(index[(min(pu, pv), max(pu, pv))])
        gens.append(Permutation(images))
    group = PermGroup(lg.n, gens)
    assert group.order == inst.group.order, "line-graph lift must stay faithful"
    return _check_instance(FamilyInstance(
        f"linegraph:{inst.name}", lg, group, list(edge_labels)))


# ---------------------------------------------------------------------------
# Family spec grammar (CLI-facing)
# ---------------------------------------------------------------------------

_FAMILIES = {
    "hamming": (hamming, 2),
    "hamming-c": (hamming_complement, 2),
    "johnson": (johnson, 2),
    "johnson-c": (johnson_complement, 2),
    "ex82": (affine_clique_union, 2),
    "ex83": (affine_ternary_cube, 1),
    "folded": (folded_cube, 1),
    "folded-rank3": (folded_cube_rank3, 1),
    "cube": (hypercube, 1),
    "halfcube": (halved_cube, 1),
    "petersen": (petersen, 0),
    "complete": (complete, 1),
    "multipartite": (complete_multipartite, 2),
}


def family_names() -> list:
    return sorted(_FAMILIES) + ["linegraph:<family>"]


def build_family(spec: str) -> FamilyInstance:
    """Build a family instance from a spec string like ``hamming:2,4``."""
    spec = spec.strip()
    if spec.startswith("linegraph:"):
        return line_graph_instance(build_family(spec[len("linegraph:"):]))
    name, _, args = spec.partition(":")
    entry = _FAMILIES.get(name)
    if entry is None:
        raise InputError(f"unknown family {name!r}; known: {', '.join(family_names())}")
    fn, arity = entry
    params = [a for a in args.replace(" ", "").split(",") if a] if args else []
    if len(params) != arity:
        raise InputError(f"family {name!r} takes {arity} parameter(s), got {len(params)}")
    try:
        values = [int(a) for a in params]
    except ValueError:
        raise InputError(f"non-integer parameter in {spec!r}") from None
    return fn(*values)
