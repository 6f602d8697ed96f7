"""Exact permutation-group arithmetic and search.

Permutations are bijections of {0..degree-1} stored as image tuples.  Groups
carry deterministic stabilizer chains (fixed base order: requested prefix,
then ascending points), so orders, membership tests, stabilizers, transporters
and witnesses are all reproducible.  Everything is immutable after
construction; chain construction is synchronized and happens once per base
prefix.
"""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

from .errors import CapabilityError, InputError, ENUMERATION_BOUND


# ---------------------------------------------------------------------------
# Permutation
# ---------------------------------------------------------------------------

class Permutation:
    """A bijection of {0..degree-1}; composition applies left factor first."""

    __slots__ = ("images",)

    def __init__(self, images: Iterable[int]):
        imgs = tuple(images)
        self.images = imgs
        if set(imgs) != set(range(len(imgs))):
            raise InputError(f"not a permutation of 0..{len(imgs) - 1}: {imgs!r}")

    @property
    def degree(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls(range(degree))

    @classmethod
    def from_cycles(cls, degree: int, cycles: Sequence[Sequence[int]]) -> "Permutation":
        imgs = list(range(degree))
        for cycle in cycles:
            if len(set(cycle)) != len(cycle):
                raise InputError(f"repeated point in cycle {cycle!r}")
            for a, b in zip(cycle, cycle[1:]):
                imgs[a] = b
            if cycle:
                imgs[cycle[-1]] = cycle[0]
        return cls(imgs)

    def __mul__(self, other: "Permutation") -> "Permutation":
        # x^(self*other) = (x^self)^other
        o = other.images
        return Permutation(tuple(o[x] for x in self.images))

    def inverse(self) -> "Permutation":
        out = [0] * len(self.images)
        for i, j in enumerate(self.images):
            out[j] = i
        return Permutation(out)

    def __pow__(self, n: int) -> "Permutation":
        if n < 0:
            return self.inverse() ** (-n)
        result = Permutation.identity(self.degree)
        p = self
        while n:
            if n & 1:
                result = result * p
            p = p * p
            n >>= 1
        return result

    def __call__(self, point: int) -> int:
        return self.images[point]

    def apply(self, points: Iterable[int]) -> tuple:
        imgs = self.images
        return tuple(imgs[x] for x in points)

    @property
    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def order(self) -> int:
        n = 1
        for c in self.cycles():
            k = len(c)
            g = _gcd(n, k)
            n = n // g * k
        return n

    def moved_points(self) -> tuple:
        return tuple(i for i, j in enumerate(self.images) if i != j)

    def cycles(self) -> list:
        seen = set()
        out = []
        for i in range(len(self.images)):
            if i in seen or self.images[i] == i:
                continue
            cyc = [i]
            j = self.images[i]
            while j != i:
                seen.add(j)
                cyc.append(j)
                j = self.images[j]
            out.append(tuple(cyc))
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __lt__(self, other: "Permutation") -> bool:
        return self.images < other.images

    def __str__(self) -> str:
        cycs = self.cycles()
        if not cycs:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cycs)

    def __repr__(self) -> str:
        return f"Permutation({self})"


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


_CYCLE_RE = re.compile(r"\(\s*((?:\d+[\s,]*)*)\)")
_IMAGE_RE = re.compile(r"\[([\d\s,]*)\]")


def parse_permutation(text: str, degree: Optional[int] = None) -> Permutation:
    """Parse cycle notation ``(0 1 2)(3 4)`` or image-list notation ``[1,2,0]``.

    The degree defaults to the largest point mentioned plus one.
    """
    text = text.strip()
    if not text:
        raise InputError("empty permutation string")
    m = _IMAGE_RE.fullmatch(text)
    if m:
        body = m.group(1).replace(",", " ").split()
        imgs = [int(tok) for tok in body]
        if degree is not None:
            if len(imgs) > degree:
                raise InputError(f"image list longer than degree {degree}: {text!r}")
            imgs.extend(range(len(imgs), degree))
        return Permutation(imgs)
    cycles = []
    pos = 0
    for m in _CYCLE_RE.finditer(text):
        if text[pos:m.start()].strip():
            raise InputError(f"could not parse permutation at offset {pos}: {text!r}")
        body = m.group(1).replace(",", " ").split()
        cycles.append([int(tok) for tok in body])
        pos = m.end()
    if pos == 0 or text[pos:].strip():
        raise InputError(f"could not parse permutation: {text!r}")
    maxpt = max((max(c) for c in cycles if c), default=-1)
    if degree is None:
        degree = maxpt + 1
    elif maxpt >= degree:
        raise InputError(f"point {maxpt} exceeds degree {degree}: {text!r}")
    return Permutation.from_cycles(degree, cycles)


def parse_group_file(text: str) -> "PermGroup":
    """Parse a group file: a ``degree:`` header then one generator per line."""
    degree = None
    gens = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.lower().startswith("degree:"):
            if degree is not None:
                raise InputError(f"line {lineno}: duplicate degree header")
            degree = int(line.split(":", 1)[1])
            continue
        if degree is None:
            raise InputError(f"line {lineno}: generator before degree header")
        try:
            gens.append(parse_permutation(line, degree))
        except InputError as exc:
            raise InputError(f"line {lineno}: {exc}") from None
    if degree is None:
        raise InputError("missing degree header")
    return PermGroup(degree, gens)


def format_group_file(group: "PermGroup") -> str:
    lines = [f"degree: {group.degree}"]
    lines.extend(str(g) for g in group.generators)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Stabilizer chains (deterministic Schreier-Sims)
# ---------------------------------------------------------------------------

class _Level:
    __slots__ = ("point", "gens", "orbit")

    def __init__(self, point: int):
        self.point = point
        self.gens: list = []
        # orbit maps point b to a representative u with self.point^u = b
        self.orbit: dict = {}


class StabilizerChain:
    """Base and strong generating set with the base starting at a given prefix."""

    def __init__(self, degree: int, generators: Sequence[Permutation], prefix: Sequence[int] = ()):
        self.degree = degree
        self.base: list = []
        self.levels: list = []
        self._strong: list = []
        for b in prefix:
            self._append_base_point(b)
        for g in generators:
            if not g.is_identity:
                self._strong.append(g)
        for g in self._strong:
            if all(g(b) == b for b in self.base):
                moved = g.moved_points()
                if moved:
                    self._append_base_point(moved[0])
        self._rebuild_through(len(self.base) - 1)
        self._complete()

    # -- construction ------------------------------------------------------

    def _append_base_point(self, b: int) -> None:
        if b in self.base:
            return
        self.base.append(b)
        self.levels.append(_Level(b))

    def _rebuild_through(self, deepest: int) -> None:
        """Recompute levels 0..deepest (a generator added at level j lies in
        every T_i with i <= j, so all shallower orbits may grow)."""
        for i in range(0, min(deepest, len(self.base) - 1) + 1):
            lvl = self.levels[i]
            prefix = self.base[:i]
            lvl.gens = [g for g in self._strong
                        if all(g(p) == p for p in prefix)]
            lvl.orbit = self._orbit_transversal(lvl.point, lvl.gens)

    def _orbit_transversal(self, point: int, gens: Sequence[Permutation]) -> dict:
        orbit = {point: Permutation.identity(self.degree)}
        queue = [point]
        while queue:
            a = queue.pop(0)
            ua = orbit[a]
            for g in gens:
                b = g(a)
                if b not in orbit:
                    orbit[b] = ua * g
                    queue.append(b)
        return orbit

    def _strip_from(self, p: Permutation, start: int):
        for i in range(start, len(self.base)):
            lvl = self.levels[i]
            b = p(lvl.point)
            if b not in lvl.orbit:
                return p, i
            p = p * lvl.orbit[b].inverse()
        return p, len(self.base)

    def _complete(self) -> None:
        i = len(self.base) - 1
        while i >= 0:
            lvl = self.levels[i]
            added = self._check_level(i, lvl)
            if added is None:
                i -= 1
            else:
                i = added

    def _check_level(self, i: int, lvl: _Level):
        """Sift all Schreier generators of level ``i``; return restart level."""
        for a in sorted(lvl.orbit):
            ua = lvl.orbit[a]
            for g in lvl.gens:
                ub = lvl.orbit[g(a)]
                schreier = ua * g * ub.inverse()
                if schreier.is_identity:
                    continue
                residue, j = self._strip_from(schreier, i + 1)
                if residue.is_identity:
                    continue
                self._strong.append(residue)
                if j == len(self.base):
                    self._append_base_point(residue.moved_points()[0])
                self._rebuild_through(j)
                return j
        return None

    # -- queries -----------------------------------------------------------

    @property
    def order(self) -> int:
        n = 1
        for lvl in self.levels:
            n *= len(lvl.orbit)
        return n

    def contains(self, p: Permutation) -> bool:
        if p.degree != self.degree:
            return False
        residue, _ = self._strip_from(p, 0)
        return residue.is_identity

    def level_generators(self, i: int) -> list:
        """Strong generators fixing the first ``i`` base points pointwise."""
        if i >= len(self.base):
            return []
        return list(self.levels[i].gens)

    def transporter_along_base(self, src: Sequence[int], dst: Sequence[int]) -> Optional[Permutation]:
        """Element mapping src -> dst pointwise; requires base[:len(src)] == src."""
        assert list(self.base[:len(src)]) == list(src)
        uinv = Permutation.identity(self.degree)
        parts = []
        for i in range(len(src)):
            target = uinv(dst[i])
            lvl = self.levels[i]
            if target not in lvl.orbit:
                return None
            r = lvl.orbit[target]
            parts.append(r)
            uinv = uinv * r.inverse()
        g = Permutation.identity(self.degree)
        for r in reversed(parts):
            g = g * r
        return g


# ---------------------------------------------------------------------------
# PermGroup
# ---------------------------------------------------------------------------

class PermGroup:
    """A finitely generated permutation group on {0..degree-1}."""

    def __init__(self, degree: int, generators: Iterable[Permutation] = ()):
        if degree < 0:
            raise InputError("degree must be nonnegative")
        gens = []
        seen = set()
        for g in generators:
            if not isinstance(g, Permutation):
                g = Permutation(g)
            if g.degree != degree:
                raise InputError(
                    f"degree mismatch: generator {g} has degree {g.degree}, expected {degree}")
            if g.is_identity or g.images in seen:
                continue
            seen.add(g.images)
            gens.append(g)
        self.degree = degree
        self.generators = tuple(gens)
        self._chains: dict = {}
        self._elements: Optional[tuple] = None
        self._tuple_orbits: dict = {}
        self._lock = threading.Lock()

    # -- factories ---------------------------------------------------------

    @classmethod
    def trivial(cls, degree: int) -> "PermGroup":
        return cls(degree, ())

    @classmethod
    def symmetric(cls, n: int, degree: Optional[int] = None) -> "PermGroup":
        degree = n if degree is None else degree
        gens = []
        if n >= 2:
            gens.append(Permutation.from_cycles(degree, [(0, 1)]))
        if n >= 3:
            gens.append(Permutation.from_cycles(degree, [tuple(range(n))]))
        return cls(degree, gens)

    @classmethod
    def cyclic(cls, n: int, degree: Optional[int] = None) -> "PermGroup":
        degree = n if degree is None else degree
        gens = [Permutation.from_cycles(degree, [tuple(range(n))])] if n >= 2 else []
        return cls(degree, gens)

    @classmethod
    def dihedral(cls, n: int) -> "PermGroup":
        """Symmetries of an n-gon on n points (order 2n)."""
        rot = Permutation.from_cycles(n, [tuple(range(n))])
        ref = Permutation(tuple((n - i) % n for i in range(n)))
        return cls(n, [rot, ref])

    # -- chains and basic structure -----------------------------------------

    def chain(self, prefix: Sequence[int] = ()) -> StabilizerChain:
        key = tuple(prefix)
        with self._lock:
            ch = self._chains.get(key)
            if ch is None:
                ch = StabilizerChain(self.degree, self.generators, key)
                self._chains[key] = ch
            return ch

    @property
    def order(self) -> int:
        return self.chain().order

    @property
    def is_trivial(self) -> bool:
        return not self.generators

    def __contains__(self, p: Permutation) -> bool:
        if p.degree != self.degree:
            raise InputError(
                f"degree mismatch: element degree {p.degree}, group degree {self.degree}")
        return self.chain().contains(p)

    def contains(self, p: Permutation) -> bool:
        return p in self

    def elements(self, bound: int = ENUMERATION_BOUND) -> tuple:
        """All elements, by closure; CapabilityError above ``bound``."""
        if self._elements is not None:
            return self._elements
        if self.order > bound:
            raise CapabilityError(
                f"group order {self.order} exceeds enumeration bound {bound}")
        ident = Permutation.identity(self.degree)
        els = {ident.images: ident}
        frontier = [ident]
        while frontier:
            new = []
            for a in frontier:
                for g in self.generators:
                    c = a * g
                    if c.images not in els:
                        els[c.images] = c
                        new.append(c)
            frontier = new
        out = tuple(els[k] for k in sorted(els))
        self._elements = out
        return out

    # -- orbits, stabilizers, transporters -----------------------------------

    def orbit(self, point: int) -> tuple:
        if not 0 <= point < self.degree:
            raise InputError(f"point {point} out of range 0..{self.degree - 1}")
        seen = {point}
        queue = [point]
        while queue:
            a = queue.pop()
            for g in self.generators:
                b = g(a)
                if b not in seen:
                    seen.add(b)
                    queue.append(b)
        return tuple(sorted(seen))

    def orbits(self) -> list:
        seen = set()
        out = []
        for p in range(self.degree):
            if p not in seen:
                orb = self.orbit(p)
                seen.update(orb)
                out.append(orb)
        return out

    def point_stabilizer(self, point: int) -> "PermGroup":
        if not 0 <= point < self.degree:
            raise InputError(f"point {point} out of range 0..{self.degree - 1}")
        return PermGroup(self.degree, self.chain((point,)).level_generators(1))

    def pointwise_stabilizer(self, points: Sequence[int]) -> "PermGroup":
        pts = tuple(points)
        return PermGroup(self.degree, self.chain(pts).level_generators(len(pts)))

    def tuple_orbit(self, tup: Sequence[int]) -> dict:
        """Orbit of an ordered tuple, mapping each image tuple to a witness."""
        start = tuple(tup)
        cached = self._tuple_orbits.get(start)
        if cached is not None:
            return cached
        ident = Permutation.identity(self.degree)
        orbit = {start: ident}
        queue = [start]
        while queue:
            t = queue.pop()
            w = orbit[t]
            for g in self.generators:
                t2 = g.apply(t)
                if t2 not in orbit:
                    orbit[t2] = w * g
                    queue.append(t2)
        self._tuple_orbits[start] = orbit
        return orbit

    def transporter(self, src: Sequence[int], dst: Sequence[int]) -> Optional[Permutation]:
        """Some element mapping src to dst pointwise, or None if there is none."""
        src = tuple(src)
        dst = tuple(dst)
        if len(src) != len(dst):
            raise InputError("transporter tuples must have equal length")
        if len(set(src)) != len(src) or len(set(dst)) != len(dst):
            raise InputError("transporter tuples must have distinct entries")
        for x in (*src, *dst):
            if not 0 <= x < self.degree:
                raise InputError(f"point {x} out of range 0..{self.degree - 1}")
        if src in self._tuple_orbits:
            return self._tuple_orbits[src].get(dst)
        if len(src) <= 3 and self.order <= 500_000:
            return self.tuple_orbit(src).get(dst)
        return self.chain(src).transporter_along_base(src, dst)

    # -- transitivity, rank, blocks ------------------------------------------

    def is_transitive(self) -> bool:
        return self.degree <= 1 or len(self.orbit(0)) == self.degree

    def is_k_transitive(self, k: int) -> bool:
        if not 1 <= k <= self.degree:
            raise InputError(f"k must be in 1..{self.degree}, got {k}")
        ch = self.chain(tuple(range(k)))
        for i in range(k):
            if len(ch.levels[i].orbit) != self.degree - i:
                return False
        return True

    def rank(self) -> int:
        """Number of orbits of a point stabilizer (transitive groups only)."""
        if not self.is_transitive():
            raise InputError("rank is defined here only for transitive groups")
        return len(self.point_stabilizer(0).orbits())

    def suborbits(self, base_point: int = 0) -> list:
        """Orbits of the stabilizer of ``base_point`` (includes the fixed point)."""
        if not self.is_transitive():
            raise InputError("suborbits are defined here only for transitive groups")
        return self.point_stabilizer(base_point).orbits()

    def minimal_block_systems(self) -> list:
        """All minimal nontrivial block systems of a transitive group."""
        if not self.is_transitive():
            raise InputError("block systems are defined here only for transitive groups")
        n = self.degree
        if n <= 2:
            return []
        systems = {}
        for beta in range(1, n):
            part = self._pair_closure(0, beta)
            size = len(part[0])
            if 1 < size < n:
                key = tuple(sorted(tuple(sorted(b)) for b in part))
                systems[key] = part
        minimal = []
        for key, part in sorted(systems.items()):
            blk0 = set(key[0])
            if any(set(o[0]) < blk0 for o in systems if o != key):
                continue
            minimal.append(BlockSystem(tuple(tuple(sorted(b)) for b in sorted(part, key=min))))
        return minimal

    def _pair_closure(self, alpha: int, beta: int) -> list:
        """Finest G-congruence identifying ``alpha`` and ``beta`` (union-find)."""
        parent = list(range(self.degree))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(x, y):
            rx, ry = find(x), find(y)
            if rx == ry:
                return None
            if rx > ry:
                rx, ry = ry, rx
            parent[ry] = rx
            return rx, ry

        queue = [(alpha, beta)]
        union(alpha, beta)
        while queue:
            u, v = queue.pop()
            for g in self.generators:
                merged = union(g(u), g(v))
                if merged:
                    queue.append(merged)
        blocks = {}
        for x in range(self.degree):
            blocks.setdefault(find(x), []).append(x)
        return list(blocks.values())

    def is_primitive(self) -> bool:
        return not self.minimal_block_systems()

    # -- regularity ----------------------------------------------------------

    def is_semiregular(self) -> bool:
        n = self.order
        return all(len(orb) == n for orb in self.orbits())

    def is_regular(self) -> bool:
        return self.is_transitive() and self.is_semiregular()

    # -- enumeration-scale searches -------------------------------------------

    def centralizer(self, other: Union["PermGroup", Permutation],
                    bound: int = ENUMERATION_BOUND) -> "PermGroup":
        """Elements commuting with ``other`` (a subgroup or a single element)."""
        targets = [other] if isinstance(other, Permutation) else list(other.generators)
        for t in targets:
            if t.degree != self.degree:
                raise InputError("degree mismatch in centralizer")
        found = [g for g in self.elements(bound)
                 if all(g * t == t * g for t in targets)]
        return PermGroup(self.degree, found)

    def normalizer(self, sub: "PermGroup", bound: int = ENUMERATION_BOUND) -> "PermGroup":
        if sub.degree != self.degree:
            raise InputError("degree mismatch in normalizer")
        found = []
        for g in self.elements(bound):
            ginv = g.inverse()
            if all((ginv * h * g) in sub for h in sub.generators):
                found.append(g)
        return PermGroup(self.degree, found)

    def conjugacy_classes(self, bound: int = ENUMERATION_BOUND) -> list:
        els = self.elements(bound)
        inv_gens = [(g, g.inverse()) for g in self.generators]
        seen = set()
        classes = []
        for e in els:
            if e.images in seen:
                continue
            cls = {e.images: e}
            queue = [e]
            while queue:
                x = queue.pop()
                for g, ginv in inv_gens:
                    y = ginv * x * g
                    if y.images not in cls:
                        cls[y.images] = y
                        queue.append(y)
            seen.update(cls)
            classes.append(tuple(cls[k] for k in sorted(cls)))
        return classes

    def normal_closure(self, elements: Sequence[Permutation],
                       bound: int = ENUMERATION_BOUND) -> "PermGroup":
        """Smallest normal subgroup containing ``elements`` (enumeration scale)."""
        gens = list(elements)
        closed = False
        while not closed:
            closed = True
            sub = PermGroup(self.degree, gens)
            for g in self.generators:
                ginv = g.inverse()
                for h in list(gens):
                    c = ginv * h * g
                    if c not in sub:
                        gens.append(c)
                        closed = False
            if sub.order > bound:
                raise CapabilityError("normal closure exceeds enumeration bound")
        return PermGroup(self.degree, gens)

    def normal_subgroups(self, bound: int = ENUMERATION_BOUND) -> list:
        """All normal subgroups, as joins of conjugacy-class closures."""
        closures = []
        seen_orders = {}
        for cls in self.conjugacy_classes(bound):
            if cls[0].is_identity and len(cls) == 1:
                continue
            sub = self.normal_closure(list(cls), bound)
            key = frozenset(e.images for e in sub.elements(bound))
            if key not in seen_orders:
                seen_orders[key] = sub
        pool = dict(seen_orders)
        trivial = PermGroup.trivial(self.degree)
        pool[frozenset({Permutation.identity(self.degree).images})] = trivial
        changed = True
        while changed:
            changed = False
            items = list(pool.items())
            for i in range(len(items)):
                for j in range(i + 1, len(items)):
                    gens = list(items[i][1].generators) + list(items[j][1].generators)
                    join = PermGroup(self.degree, gens)
                    if join.order > bound:
                        raise CapabilityError("normal subgroup join exceeds enumeration bound")
                    key = frozenset(e.images for e in join.elements(bound))
                    if key not in pool:
                        pool[key] = join
                        changed = True
        return sorted(pool.values(), key=lambda h: (h.order, [g.images for g in h.generators]))

    def minimal_normal_subgroups(self, bound: int = ENUMERATION_BOUND) -> list:
        """Inclusion-minimal nontrivial normal subgroups."""
        nontrivial = [h for h in self.normal_subgroups(bound) if h.order > 1]
        elsets = [(h, frozenset(e.images for e in h.elements(bound)))
                  for h in nontrivial]
        minimal = []
        for h, hs in elsets:
            if not any(other < hs for _, other in elsets):
                minimal.append(h)
        return minimal

    def is_quasiprimitive(self) -> bool:
        """Every nontrivial normal subgroup transitive (needs enumeration scale)."""
        if not self.is_transitive():
            return False
        if self.order == 1:
            return self.degree <= 1
        return all(m.is_transitive() for m in self.minimal_normal_subgroups())

    def regular_subgroups(self, bound: int = ENUMERATION_BOUND) -> list:
        """Subgroups acting regularly on {0..degree-1}, up to conjugacy."""
        n = self.degree
        if self.order % n != 0 or not self.is_transitive():
            return []
        els = self.elements(bound)
        ident = Permutation.identity(n)
        # candidates[v]: fixed-point-free elements mapping 0 to v
        candidates = {v: [] for v in range(1, n)}
        for e in els:
            if e.is_identity:
                continue
            if all(e(i) != i for i in range(n)):
                candidates[e(0)].append(e)
        found = []

        def extend(chosen: dict):
            if len(chosen) == n:
                found.append(frozenset(p.images for p in chosen.values()))
                return
            v = min(u for u in range(n) if u not in chosen)
            for cand in candidates[v]:
                new = dict(chosen)
                new[v] = cand
                if _closes_regularly(new, n):
                    extend(new)

        def _closes_regularly(partial: dict, n: int) -> bool:
            # close the partial transversal under products; reject conflicts
            work = dict(partial)
            frontier = list(work.items())
            while frontier:
                v, p = frontier.pop()
                for u, q in list(work.items()):
                    for prod in (p * q, q * p):
                        w = prod(0)
                        cur = work.get(w)
                        if cur is None:
                            if w != 0 and any(prod(i) == i for i in range(n)):
                                return False
                            if w == 0:
                                if not prod.is_identity:
                                    return False
                                continue
                            work[w] = prod
                            frontier.append((w, prod))
                        elif cur != prod:
                            return False
            partial.clear()
            partial.update(work)
            return True

        extend({0: ident})
        # dedupe up to conjugacy in self
        classes = []
        seen = set()
        for r in sorted(found, key=sorted):
            if r in seen:
                continue
            cls = {r}
            for g in els:
                ginv = g.inverse()
                conj = frozenset((ginv * Permutation(images) * g).images for images in r)
                cls.add(conj)
            seen.update(cls)
            classes.append(PermGroup(n, [Permutation(im) for im in sorted(r)]))
        return classes

    # -- comparisons ----------------------------------------------------------

    def is_subgroup_of(self, other: "PermGroup") -> bool:
        return self.degree == other.degree and all(g in other for g in self.generators)

    def same_group(self, other: "PermGroup") -> bool:
        return (self.degree == other.degree and self.order == other.order
                and self.is_subgroup_of(other))

    def __repr__(self) -> str:
        gens = ", ".join(str(g) for g in self.generators) or "()"
        return f"PermGroup(degree={self.degree}, <{gens}>)"


# ---------------------------------------------------------------------------
# Block systems and actions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BlockSystem:
    blocks: tuple

    @property
    def block_size(self) -> int:
        return len(self.blocks[0])

    @property
    def block_count(self) -> int:
        return len(self.blocks)


class Action:
    """A group together with an action on a relabelled domain.

    Two modes: restriction to an invariant list of points, or an abstract
    domain of labels with ``apply_label(perm, label) -> label``.  The faithful
    image and the kernel are both available; |group| = |image| * |kernel|.
    """

    def __init__(self, group: PermGroup, domain: Sequence, *,
                 points: bool = False, apply_label=None):
        self.group = group
        self.domain = list(domain)
        self._index = {lab: i for i, lab in enumerate(self.domain)}
        if len(self._index) != len(self.domain):
            raise InputError("action domain has repeated labels")
        if points:
            if apply_label is not None:
                raise InputError("points mode does not take apply_label")
            apply_label = lambda g, p: g(p)
        elif apply_label is None:
            raise InputError("need apply_label for a labelled domain")
        self._apply = apply_label
        induced = []
        for g in group.generators:
            images = []
            for lab in self.domain:
                out = apply_label(g, lab)
                idx = self._index.get(out)
                if idx is None:
                    raise InputError(
                        f"domain is not invariant: {lab!r} maps outside under {g}")
                images.append(idx)
            induced.append(Permutation(images))
        self.image = PermGroup(len(self.domain), induced)
        # keep the raw per-generator images: PermGroup drops identity
        # generators, which would misalign the pairing
        self._induced_pairs = list(zip(group.generators, induced))
        self._kernel: Optional[PermGroup] = None

    def induced(self, g: Permutation) -> Permutation:
        """Image of an arbitrary element of the group on the domain."""
        images = []
        for lab in self.domain:
            images.append(self._index[self._apply(g, lab)])
        return Permutation(images)

    @property
    def kernel(self) -> PermGroup:
        if self._kernel is None:
            n = self.group.degree
            m = len(self.domain)
            combined = []
            for g, gi in self._induced_pairs:
                combined.append(Permutation(g.images + tuple(n + x for x in gi.images)))
            big = PermGroup(n + m, combined)
            fixing = big.chain(tuple(range(n, n + m))).level_generators(m)
            self._kernel = PermGroup(n, [Permutation(p.images[:n]) for p in fixing])
        return self._kernel

    # Delegations to the induced permutation group (plus regularity, which is
    # a property of the original group's action, not of the image alone).

    def is_transitive(self) -> bool:
        return self.image.is_transitive() if self.domain else True

    def is_k_transitive(self, k: int) -> bool:
        return self.image.is_k_transitive(k)

    def rank(self) -> int:
        return self.image.rank()

    def suborbits(self, base=None) -> list:
        idx = 0 if base is None else self._index[base]
        return [tuple(self.domain[i] for i in orb)
                for orb in self.image.suborbits(idx)]

    def minimal_block_systems(self) -> list:
        out = []
        for sys in self.image.minimal_block_systems():
            out.append(BlockSystem(tuple(tuple(self.domain[i] for i in blk)
                                         for blk in sys.blocks)))
        return out

    def is_primitive(self) -> bool:
        return self.image.is_primitive()

    def is_semiregular(self) -> bool:
        n = self.group.order
        return all(len(orb) == n for orb in self.image.orbits())

    def is_regular(self) -> bool:
        return self.is_transitive() and self.is_semiregular()

    def is_quasiprimitive(self) -> bool:
        if len(self.domain) > 1 and self.kernel.order > 1:
            return False
        return self.image.is_quasiprimitive()


def action_on_points(group: PermGroup, points: Sequence[int]) -> Action:
    return Action(group, points, points=True)
