"""Single-target shortest-path instances and pivot primitives.

An Instance is a weighted directed graph with integer edge costs and a
designated target vertex.  Costs may be negative; negative-cost cycles
are rejected by validate_instance.  A TreePolicy chooses one outgoing
edge per non-target vertex such that every vertex reaches the target.
Replacing one chosen edge by a strictly shorter alternative (a pivot)
is the improvement step that all higher-level machinery counts.

All values are immutable after construction and safe to share across
threads.  Distances are exact integers throughout; there is no
floating-point path anywhere in this module.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

from .errors import (
    DanglingVertex,
    NegativeCycle,
    NoTreeInSubset,
    NotATree,
    NotImproving,
    TargetHasOutEdges,
)

EdgeId = int
DistanceMap = dict[str, int]


@dataclass(frozen=True)
class Edge:
    """Directed edge with a dense integer id.

    Parallel edges (same tail and head) are allowed and are told apart
    by id only.
    """

    id: EdgeId
    tail: str
    head: str
    cost: int


@dataclass(frozen=True)
class Instance:
    """Weighted directed graph with a designated target vertex."""

    target: str
    edges: tuple[Edge, ...]
    vertices: frozenset[str]

    @staticmethod
    def build(
        target: str,
        edges: Iterable[Edge],
        extra_vertices: Iterable[str] = (),
    ) -> "Instance":
        """Create an instance, inferring vertices from edge endpoints.

        Edge ids must be exactly 0..m-1, unique and dense; this keeps
        them stable across serialization round trips.
        """
        es = tuple(sorted(edges, key=lambda e: e.id))
        if [e.id for e in es] != list(range(len(es))):
            raise ValueError("edge ids must be dense 0..m-1 without duplicates")
        vs = {target, *extra_vertices}
        for e in es:
            vs.add(e.tail)
            vs.add(e.head)
        return Instance(target=target, edges=es, vertices=frozenset(vs))

    @property
    def n(self) -> int:
        """Number of non-target vertices."""
        return len(self.vertices) - 1

    @property
    def m(self) -> int:
        return len(self.edges)

    def edge(self, eid: EdgeId) -> Edge:
        return self.edges[eid]

    def all_edges(self) -> frozenset[EdgeId]:
        return frozenset(range(self.m))

    @cached_property
    def out_edges(self) -> dict[str, tuple[Edge, ...]]:
        """Outgoing edges per vertex, sorted by id; every vertex has a key."""
        out: dict[str, list[Edge]] = {v: [] for v in self.vertices}
        for e in self.edges:
            out[e.tail].append(e)
        return {v: tuple(es) for v, es in out.items()}

    @cached_property
    def _index(self) -> "_Index":
        return _Index(self)


class TreePolicy:
    """Immutable choice of one outgoing edge id per non-target vertex.

    Equality and hashing are structural on the vertex-to-edge mapping.
    """

    __slots__ = ("_choice", "_ids", "_mask", "_hash")

    def __init__(self, choice: Mapping[str, EdgeId]):
        self._choice = dict(choice)
        ids = frozenset(self._choice.values())
        if len(ids) != len(self._choice):
            raise ValueError("tree policy maps two vertices to the same edge id")
        self._ids = ids
        mask = 0
        for eid in ids:
            mask |= 1 << eid
        self._mask = mask
        self._hash = hash(frozenset(self._choice.items()))

    @classmethod
    def from_edge_ids(cls, inst: Instance, ids: Iterable[EdgeId]) -> "TreePolicy":
        """Build a policy from edge ids, one per non-target vertex of inst."""
        mapping: dict[str, EdgeId] = {}
        for eid in ids:
            e = inst.edge(eid)
            if e.tail in mapping:
                raise ValueError(f"two chosen edges leave vertex {e.tail!r}")
            mapping[e.tail] = eid
        missing = {v for v in inst.vertices if v != inst.target} - mapping.keys()
        if missing:
            raise ValueError(f"no chosen edge for vertices {sorted(missing)}")
        return cls(mapping)

    def edge_at(self, vertex: str) -> EdgeId:
        return self._choice[vertex]

    @property
    def choices(self) -> dict[str, EdgeId]:
        return dict(self._choice)

    @property
    def edge_ids(self) -> frozenset[EdgeId]:
        return self._ids

    @property
    def mask(self) -> int:
        return self._mask

    def __contains__(self, eid: EdgeId) -> bool:
        return eid in self._ids

    def __eq__(self, other) -> bool:
        if not isinstance(other, TreePolicy):
            return NotImplemented
        return self._choice == other._choice

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        inner = ", ".join(f"{v}->{e}" for v, e in sorted(self._choice.items()))
        return f"TreePolicy({inner})"


class _Index:
    """Dense integer view of an instance plus a per-tree distance cache.

    Vertices are numbered 0..n-1 in sorted name order; the target is -1.
    Facet subsets and trees travel as bit masks over edge ids, which is
    what the runners and exact engines key their caches on.
    """

    def __init__(self, inst: Instance):
        self.inst = inst
        self.order = sorted(v for v in inst.vertices if v != inst.target)
        self.pos = {v: i for i, v in enumerate(self.order)}
        self.pos[inst.target] = -1
        m = inst.m
        self.tail = [self.pos[e.tail] for e in inst.edges]
        self.head = [self.pos[e.head] for e in inst.edges]
        self.cost = [e.cost for e in inst.edges]
        self.out: list[list[EdgeId]] = [[] for _ in self.order]
        for e in inst.edges:
            if e.tail != inst.target:
                self.out[self.pos[e.tail]].append(e.id)
        self.out_mask = [sum(1 << eid for eid in ids) for ids in self.out]
        self.full_mask = (1 << m) - 1
        self._dists: dict[int, tuple[int, ...] | None] = {}
        self._bits: dict[int, list[EdgeId]] = {}

    def edge_bits(self, mask: int) -> list[EdgeId]:
        """Edge ids in a mask, ascending; cached, callers must not mutate."""
        hit = self._bits.get(mask)
        if hit is not None:
            return hit
        ids = []
        rest = mask
        eid = 0
        while rest:
            if rest & 1:
                ids.append(eid)
            rest >>= 1
            eid += 1
        self._bits[mask] = ids
        return ids

    def choice_of_mask(self, mask: int) -> list[EdgeId] | None:
        """Per-vertex chosen edge for a tree mask; None if not one-per-vertex."""
        choice = [-1] * len(self.order)
        for eid in self.edge_bits(mask):
            v = self.tail[eid]
            if v < 0 or choice[v] != -1:
                return None
            choice[v] = eid
        if any(c == -1 for c in choice):
            return None
        return choice

    def tree_distances(self, mask: int) -> tuple[int, ...] | None:
        """Exact distances to the target along the tree; None if not a tree.

        Resolved by following choice chains once per vertex, which is a
        reverse-topological pass in disguise; results are cached per mask
        so repeated runs on the same instance stay cheap.
        """
        if mask in self._dists:
            return self._dists[mask]
        choice = self.choice_of_mask(mask)
        result: tuple[int, ...] | None
        if choice is None:
            result = None
        else:
            dist: list[int | None] = [None] * len(self.order)
            ok = True
            for start in range(len(self.order)):
                if dist[start] is not None:
                    continue
                path: list[int] = []
                on_path: set[int] = set()
                v = start
                while v >= 0 and dist[v] is None and v not in on_path:
                    on_path.add(v)
                    path.append(v)
                    v = self.head[choice[v]]
                if v >= 0 and v in on_path:
                    ok = False
                    break
                acc = 0 if v < 0 else dist[v]
                for u in reversed(path):
                    acc = self.cost[choice[u]] + acc  # type: ignore[operator]
                    dist[u] = acc
                    acc = dist[u]
            result = tuple(dist) if ok else None  # type: ignore[arg-type]
        self._dists[mask] = result
        return result

    def dget(self, dist, v: int) -> int:
        return 0 if v < 0 else dist[v]

    def subgraph_shortest(self, fmask: int):
        """Bellman-Ford distances and per-vertex tight edges within a subset.

        Raises NoTreeInSubset when some vertex cannot reach the target
        using only edges of the subset.
        """
        n = len(self.order)
        ids = self.edge_bits(fmask)
        dist: list[int | None] = [None] * n
        for _ in range(n):
            changed = False
            for eid in ids:
                u = self.tail[eid]
                h = self.head[eid]
                dh = 0 if h < 0 else dist[h]
                if dh is None:
                    continue
                cand = self.cost[eid] + dh
                if dist[u] is None or cand < dist[u]:
                    dist[u] = cand
                    changed = True
            if not changed:
                break
        for v in range(n):
            if dist[v] is None:
                raise NoTreeInSubset(
                    f"vertex {self.order[v]!r} cannot reach the target within the subset"
                )
        tight: list[list[EdgeId]] = [[] for _ in range(n)]
        for eid in ids:
            u = self.tail[eid]
            h = self.head[eid]
            dh = 0 if h < 0 else dist[h]
            if dh is not None and self.cost[eid] + dh == dist[u]:
                tight[u].append(eid)
        return tuple(dist), tuple(tuple(t) for t in tight)

    def resolve_tree(self, tight) -> list[EdgeId]:
        """Deterministic shortest-path tree from tight edges.

        Vertices are resolved in rounds against a snapshot of the already
        resolved set, each picking its smallest-id tight edge into it; on
        a generic subset every vertex has a single tight edge and the
        tie-break never fires.
        """
        n = len(self.order)
        choice = [-1] * n
        resolved = [False] * n
        remaining = n
        while remaining:
            newly: list[tuple[int, EdgeId]] = []
            for v in range(n):
                if resolved[v]:
                    continue
                for eid in tight[v]:
                    h = self.head[eid]
                    if h < 0 or resolved[h]:
                        newly.append((v, eid))
                        break
            if not newly:
                raise NoTreeInSubset("tight edges do not span a tree")
            for v, eid in newly:
                choice[v] = eid
                resolved[v] = True
            remaining -= len(newly)
        return choice

    def count_optimal_trees(self, tight, limit: int = 2) -> int:
        """Number of distinct optimal trees, counted up to `limit`.

        With zero-cost cycles a combination of tight edges may fail to be
        a tree, so candidates are enumerated and checked rather than
        multiplied out.
        """
        n = len(self.order)
        if all(len(t) == 1 for t in tight):
            return 1

        def is_tree(choice) -> bool:
            seen_ok = [False] * n
            for start in range(n):
                path = []
                v = start
                while v >= 0 and not seen_ok[v]:
                    if v in path:
                        return False
                    path.append(v)
                    v = self.head[choice[v]]
                for u in path:
                    seen_ok[u] = True
            return True

        count = 0
        choice = [-1] * n

        def rec(v: int) -> bool:
            nonlocal count
            if v == n:
                if is_tree(choice):
                    count += 1
                return count >= limit
            for eid in tight[v]:
                choice[v] = eid
                if rec(v + 1):
                    return True
            choice[v] = -1
            return False

        rec(0)
        return count

    def policy_from_choice(self, choice) -> TreePolicy:
        return TreePolicy({self.order[v]: choice[v] for v in range(len(choice))})


def facet_mask(inst: Instance, facets: Iterable[EdgeId] | None) -> int:
    """Bit mask for a facet set; None means all edges."""
    if facets is None:
        return inst._index.full_mask
    mask = 0
    for eid in facets:
        if not 0 <= eid < inst.m:
            raise ValueError(f"unknown edge id {eid}")
        mask |= 1 << eid
    return mask


def validate_instance(inst: Instance) -> Instance:
    """Return inst unchanged iff all instance invariants hold.

    Checks that every non-target vertex has an outgoing edge, that the
    target has none, and that no negative-cost cycle exists.  Cycles are
    detected by a relaxation fixpoint over all vertices with an
    iteration bound of n; a witness cycle is reported on failure.
    """
    for v in sorted(inst.vertices):
        if v != inst.target and not inst.out_edges[v]:
            raise DanglingVertex(v)
    if inst.out_edges[inst.target]:
        raise TargetHasOutEdges(
            f"target {inst.target!r} has outgoing edges "
            f"{[e.id for e in inst.out_edges[inst.target]]}"
        )
    dist = {v: 0 for v in inst.vertices}
    pred: dict[str, Edge] = {}
    for _ in range(inst.n):
        changed = False
        for e in inst.edges:
            if dist[e.tail] > e.cost + dist[e.head]:
                dist[e.tail] = e.cost + dist[e.head]
                pred[e.tail] = e
                changed = True
        if not changed:
            break
    for e in inst.edges:
        if dist[e.tail] > e.cost + dist[e.head]:
            pred[e.tail] = e
            raise NegativeCycle(_extract_cycle(inst, pred, e.tail))
    return inst


def _extract_cycle(inst: Instance, pred: dict[str, Edge], start: str) -> list[str]:
    # walk n steps to make sure we are on the cycle, then collect it
    v = start
    for _ in range(inst.n):
        v = pred[v].head
    cycle = [v]
    u = pred[v].head
    while u != v:
        cycle.append(u)
        u = pred[u].head
    cycle.reverse()
    return cycle


def tree_distances(inst: Instance, policy: TreePolicy) -> DistanceMap:
    """Exact integer distance to the target for every vertex along the tree."""
    _check_policy_shape(inst, policy)
    dt = inst._index.tree_distances(policy.mask)
    if dt is None:
        raise NotATree("the policy's choices do not all reach the target")
    out = {inst._index.order[i]: dt[i] for i in range(len(dt))}
    out[inst.target] = 0
    return out


def improves(inst: Instance, policy: TreePolicy, eid: EdgeId) -> bool:
    """True iff pivoting eid in strictly shortens the path at its tail.

    Ties are not improvements; an edge equal to the current choice at
    its tail therefore never improves.
    """
    d = tree_distances(inst, policy)
    e = inst.edge(eid)
    return e.cost + d[e.head] < d[e.tail]


def pivot(inst: Instance, policy: TreePolicy, eid: EdgeId) -> TreePolicy:
    """Exchange the chosen edge at tail(eid) for eid.

    Requires improves(); this guard is what keeps the result a valid
    tree on instances without negative cycles.
    """
    if not improves(inst, policy, eid):
        raise NotImproving(f"edge {eid} does not improve the tree")
    e = inst.edge(eid)
    mapping = policy.choices
    mapping[e.tail] = eid
    return TreePolicy(mapping)


def optimal_tree(inst: Instance, facets: Iterable[EdgeId] | None = None) -> TreePolicy:
    """Shortest-path tree of the subgraph restricted to `facets`.

    Deterministic: ties are broken toward the smallest edge id, so the
    oracle is a function of its inputs.  On generic subsets the
    tie-break is never exercised.
    """
    idx = inst._index
    fmask = facet_mask(inst, facets)
    _, tight = idx.subgraph_shortest(fmask)
    return idx.policy_from_choice(idx.resolve_tree(tight))


def optimal_is_unique(inst: Instance, facets: Iterable[EdgeId] | None = None) -> bool:
    """True iff the subgraph restricted to `facets` has a single optimal tree."""
    idx = inst._index
    _, tight = idx.subgraph_shortest(facet_mask(inst, facets))
    return idx.count_optimal_trees(tight, limit=2) == 1


def subgraph_distances(
    inst: Instance, facets: Iterable[EdgeId] | None = None
) -> DistanceMap:
    """Optimal distances within a facet subset, including the target."""
    idx = inst._index
    dist, _ = idx.subgraph_shortest(facet_mask(inst, facets))
    out = {idx.order[i]: dist[i] for i in range(len(dist))}
    out[inst.target] = 0
    return out


def edge_names(inst: Instance) -> dict[str, EdgeId]:
    """Symbolic edge names of the form <tail><ordinal>.

    The ordinal counts a vertex's outgoing edges in ascending id order,
    so the cheaper of a pair typically gets suffix 0.  Returns an empty
    mapping when the generated names would collide.
    """
    names: dict[str, EdgeId] = {}
    for v in sorted(inst.vertices):
        for k, e in enumerate(inst.out_edges[v]):
            name = f"{v}{k}"
            if name in names:
                return {}
            names[name] = e.id
    return names


def _check_policy_shape(inst: Instance, policy: TreePolicy) -> None:
    expected = {v for v in inst.vertices if v != inst.target}
    if policy.choices.keys() != expected:
        raise ValueError("policy does not choose exactly one edge per vertex")
    for v, eid in policy.choices.items():
        if not 0 <= eid < inst.m or inst.edge(eid).tail != v:
            raise ValueError(f"edge {eid} does not leave vertex {v!r}")
