"""Brauer trees with an exceptional vertex: enumeration up to isomorphism,
their Cartan matrices, and the defect-one classification they induce.

A tree with e edges and exceptional multiplicity m describes a basic
algebra with l = e simple modules, k = e + m ordinary characters, and
dimension sum(w(u) + w(v)) over edges uv, where w is m on the exceptional
vertex and 1 elsewhere. Equivalently the dimension is sum of w(v) deg(v)^2.
The parameter constraint for a block with cyclic defect of order p is
e * m = p - 1.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

from .intmat import IntMatrix, canonical_perm_form
from .cartan import is_prime

DEFAULT_EDGE_BOUND = 8


class BrauerTreeError(ValueError):
    pass


@dataclass(frozen=True)
class BrauerTree:
    """Tree on vertices 0..e with a marked exceptional vertex."""

    edges: tuple[tuple[int, int], ...]
    exceptional: int
    multiplicity: int

    def __post_init__(self):
        e = len(self.edges)
        verts = {v for ed in self.edges for v in ed}
        if e == 0 or verts != set(range(e + 1)):
            raise BrauerTreeError("edges must form a tree on vertices 0..e")
        if self.exceptional not in verts:
            raise BrauerTreeError("exceptional vertex not in tree")
        if self.multiplicity < 1:
            raise BrauerTreeError("multiplicity must be at least 1")
        # acyclic + connected follows from |E| = |V| - 1 + connectivity
        seen = {0}
        frontier = [0]
        adj = self.adjacency()
        while frontier:
            v = frontier.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    frontier.append(w)
        if len(seen) != e + 1:
            raise BrauerTreeError("edge set is not connected")

    def adjacency(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {v: [] for v in range(len(self.edges) + 1)}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def weight(self, v: int) -> int:
        return self.multiplicity if v == self.exceptional else 1

    def degree(self, v: int) -> int:
        return len(self.adjacency()[v])


@dataclass(frozen=True)
class TreeInvariants:
    l: int
    k: int
    p: int | None
    dim_a: int


def cartan_of_tree(t: BrauerTree) -> IntMatrix:
    """Cartan matrix indexed by edges: diagonal w(u) + w(v), off-diagonal
    the weight of the shared endpoint (0 when edges are disjoint)."""
    e = t.edge_count
    rows = [[0] * e for _ in range(e)]
    for i, (u1, v1) in enumerate(t.edges):
        rows[i][i] = t.weight(u1) + t.weight(v1)
        for j in range(i + 1, e):
            shared = set(t.edges[i]) & set(t.edges[j])
            if shared:
                w = t.weight(shared.pop())
                rows[i][j] = w
                rows[j][i] = w
    return IntMatrix.from_rows(rows)


def dim_of_tree(t: BrauerTree) -> int:
    """Dimension of the basic algebra, via vertex degrees (independent of
    the Cartan entry sum, which must agree with it)."""
    return sum(t.weight(v) * t.degree(v) ** 2 for v in range(t.edge_count + 1))


def invariants_of_tree(t: BrauerTree) -> TreeInvariants:
    e, m = t.edge_count, t.multiplicity
    p = e * m + 1
    return TreeInvariants(
        l=e,
        k=e + m,
        p=p if is_prime(p) else None,
        dim_a=dim_of_tree(t),
    )


def _rooted_code(adj: dict[int, list[int]], root: int, parent: int) -> str:
    subcodes = sorted(
        _rooted_code(adj, w, root) for w in adj[root] if w != parent
    )
    return "(" + "".join(subcodes) + ")"


def _marked_code(edges, marked: int) -> str:
    """Canonical code of the tree rooted at the marked vertex; equal codes
    mean the marked trees are isomorphic."""
    adj: dict[int, list[int]] = {}
    for u, v in edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    return _rooted_code(adj, marked, -1)


def _free_code(edges) -> str:
    """Canonical code of the unmarked tree: root at the centroid, or at the
    centroid edge when there are two."""
    verts = {v for ed in edges for v in ed}
    n = len(verts)
    adj: dict[int, list[int]] = {v: [] for v in verts}
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    # peel leaves to find the centroid(s)
    deg = {v: len(adj[v]) for v in verts}
    layer = [v for v in verts if deg[v] <= 1]
    alive = dict.fromkeys(verts, True)
    remaining = n
    while remaining > 2:
        nxt = []
        for v in layer:
            alive[v] = False
            remaining -= 1
            for w in adj[v]:
                if alive[w]:
                    deg[w] -= 1
                    if deg[w] == 1:
                        nxt.append(w)
        layer = nxt
    centers = [v for v in verts if alive[v]]
    if len(centers) == 1:
        return _rooted_code(adj, centers[0], -1)
    a, b = centers
    return "|".join(sorted([_rooted_code(adj, a, b), _rooted_code(adj, b, a)]))


def _free_trees(e: int) -> list[tuple[tuple[int, int], ...]]:
    """Free trees with e edges, one representative per isomorphism class,
    grown by attaching leaves."""
    if e < 1:
        raise BrauerTreeError("need at least one edge")
    current: dict[str, tuple[tuple[int, int], ...]] = {
        _free_code(((0, 1),)): ((0, 1),)
    }
    for size in range(2, e + 1):
        grown: dict[str, tuple[tuple[int, int], ...]] = {}
        for edges in current.values():
            for v in range(size):
                new = edges + ((v, size),)
                grown.setdefault(_free_code(new), new)
        current = grown
    return list(current.values())


def enumerate_trees(
    e: int, multiplicity: int = 1, bound: int = DEFAULT_EDGE_BOUND
) -> list[BrauerTree]:
    """Marked trees with e edges, one per isomorphism class of the pair
    (tree, exceptional vertex), vertex choices identified under tree
    automorphisms. The marking is enumerated even for multiplicity 1, where
    it does not affect the Cartan matrix."""
    if e > bound:
        raise BrauerTreeError(f"edge count {e} exceeds bound {bound}")
    out = []
    for edges in _free_trees(e):
        seen = set()
        for v in range(e + 1):
            code = _marked_code(edges, v)
            if code in seen:
                continue
            seen.add(code)
            out.append(BrauerTree(edges, exceptional=v, multiplicity=multiplicity))
    return out


def _is_path(t: BrauerTree) -> bool:
    return all(t.degree(v) <= 2 for v in range(t.edge_count + 1))


def _is_star(t: BrauerTree) -> bool:
    return any(t.degree(v) == t.edge_count for v in range(t.edge_count + 1))


def shape_name(t: BrauerTree) -> str:
    """Readable shape label: edge, path/star families for small e, a
    canonical-code tag otherwise."""
    e = t.edge_count
    if e == 1:
        return "edge"
    marked = t.multiplicity > 1
    if _is_path(t):
        base = f"path{e}"
        if not marked:
            return base
        ends = [v for v in range(e + 1) if t.degree(v) == 1]
        dist = _distance(t, t.exceptional, ends)
        if e == 2:
            return base + ("_center" if dist == 1 else "_end")
        if e == 3:
            return base + ("_inner" if dist == 1 else "_end")
        return f"{base}_pos{dist}"
    if _is_star(t):
        base = f"star{e}" if e > 3 else "star"
        if not marked:
            return base
        center = max(range(e + 1), key=t.degree)
        return base + ("_center" if t.exceptional == center else "_leaf")
    tag = _marked_code(t.edges, t.exceptional) if marked else _free_code(t.edges)
    digest = hashlib.sha256(tag.encode()).hexdigest()[:4]
    return f"tree_e{e}_{digest}"


def _distance(t: BrauerTree, v: int, targets) -> int:
    adj = t.adjacency()
    frontier = [(v, 0)]
    seen = {v}
    while frontier:
        u, d = frontier.pop(0)
        if u in targets:
            return d
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                frontier.append((w, d + 1))
    raise BrauerTreeError("disconnected tree")


@dataclass(frozen=True)
class DefectOneMatch:
    shape: str
    tree: BrauerTree
    multiplicity: int
    p: int
    cartan: IntMatrix

    def to_obj(self) -> dict:
        return {
            "shape": self.shape,
            "edges": [list(ed) for ed in self.tree.edges],
            "exceptional_vertex": self.tree.exceptional,
            "multiplicity": self.multiplicity,
            "p": self.p,
            "cartan": self.cartan.to_lists(),
        }


def classify_defect1(
    dim: int, bound: int = DEFAULT_EDGE_BOUND
) -> list[DefectOneMatch]:
    """All Brauer tree algebras of the given dimension whose parameters fit
    a block with defect one: e * m = p - 1 for a prime p.

    Cartan matrices are reported in canonical permutation form. Duplicate
    parameter sets arising from collapsed markings are removed.
    """
    if dim < 1:
        raise BrauerTreeError("dimension must be positive")
    out = []
    seen = set()
    e = 1
    while e <= bound and (e == 1 or 4 * e - 2 <= dim):
        m = 1
        while True:
            trees = enumerate_trees(e, multiplicity=m, bound=bound)
            dims = [dim_of_tree(t) for t in trees]
            if min(dims) > dim:
                break
            p = e * m + 1
            if is_prime(p):
                for t, d in zip(trees, dims):
                    if d != dim:
                        continue
                    cartan = canonical_perm_form(cartan_of_tree(t))
                    key = (cartan, m, p)
                    if key in seen:
                        continue
                    seen.add(key)
                    out.append(
                        DefectOneMatch(
                            shape=shape_name(t),
                            tree=t,
                            multiplicity=m,
                            p=p,
                            cartan=cartan,
                        )
                    )
            m += 1
        e += 1
    out.sort(key=lambda r: (r.cartan.row_count, r.cartan.rows, r.multiplicity))
    return out
