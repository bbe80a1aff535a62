"""Probability-annotated computation trees for both pivoting rules.

A computation tree unrolls every decision branch of one run.  Nodes are
events: a `pick` removes one facet at a choice point, a `pivot` records
an improving exchange, and a `leaf` ends a complete execution with its
total pivot count.  Every root-to-leaf path is one possible execution,
so leaf probabilities sum to one and the probability-weighted leaf
pivot counts reproduce the exact expectations.

For the randomized rule each choice point branches uniformly over the
removable facets.  For the permutation-driven rule all |F|! orderings
are partitioned by the execution path they induce; a branch probability
is the number of orderings consistent with the history and choosing
that facet next, divided by the number consistent with the history.
Facets that can never re-enter a tree (the edge displaced by a pivot)
are kept in the tree rather than merged away; queries such as
pick_order_after_pivot marginalize over them on demand.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from .algorithms import RF, RF_STAR
from .errors import EnumerationBoundExceeded
from .exact import DEFAULT_ENUMERATION_BOUND
from .graph import EdgeId, Instance, TreePolicy, edge_names, facet_mask

import itertools
import math


@dataclass
class CompNode:
    """One event in the computation tree.

    kind is "root", "pick", "pivot" or "leaf".  `prob` is conditional
    on reaching the parent; pivot and leaf nodes always carry 1.
    `facets` and `tree` are edge-id masks of the state at the event
    (after the pivot, for pivot nodes).
    """

    kind: str
    prob: Fraction
    facets: int = 0
    tree: int = 0
    edge: EdgeId | None = None
    entering: EdgeId | None = None
    leaving: EdgeId | None = None
    depth: int | None = None
    pivots: int | None = None
    children: list["CompNode"] = field(default_factory=list)


@dataclass
class CompTree:
    """Computation tree of one rule from a start tree within a facet set."""

    rule: str
    instance: Instance
    facets: frozenset[EdgeId]
    start: TreePolicy
    root: CompNode

    def paths(self) -> Iterator[tuple[Fraction, tuple[CompNode, ...]]]:
        """All root-to-leaf event paths with their probabilities."""

        def walk(node: CompNode, prob: Fraction, prefix: tuple[CompNode, ...]):
            here = prefix + (node,)
            if node.kind == "leaf":
                yield prob, here
                return
            for child in node.children:
                yield from walk(child, prob * child.prob, here)

        yield from walk(self.root, Fraction(1), ())

    def leaf_distribution(self) -> dict[int, Fraction]:
        """Probability mass of the total pivot count."""
        pmf: dict[int, Fraction] = {}
        for prob, nodes in self.paths():
            k = nodes[-1].pivots
            pmf[k] = pmf.get(k, Fraction(0)) + prob
        return pmf

    def expectation(self) -> Fraction:
        """Probability-weighted total pivot count over all leaves."""
        total = Fraction(0)
        for prob, nodes in self.paths():
            total += prob * nodes[-1].pivots
        return total

    def root_distribution(self) -> dict[EdgeId, Fraction]:
        """Probability of each facet being removed first."""
        return {c.edge: c.prob for c in self.root.children if c.kind == "pick"}

    def pick_order_after_pivot(
        self,
        pivot_edge: EdgeId,
        candidates: frozenset[EdgeId] | None = None,
        *,
        pivot_depth: int = 0,
    ) -> tuple[Fraction, dict[EdgeId | None, Fraction]]:
        """Which of `candidates` is removed first after a given pivot.

        Conditions on executions containing a pivot of `pivot_edge`
        performed at recursion depth `pivot_depth`, then classifies each
        by the first later pick among `candidates`.  When `candidates`
        is None it defaults to the facets outside the pivoted tree other
        than the displaced edge, which can never re-enter.  Returns the
        probability of the conditioning region and the conditional
        distribution; class None collects executions that never pick a
        candidate.
        """
        region = Fraction(0)
        buckets: dict[EdgeId | None, Fraction] = {}
        for prob, nodes in self.paths():
            at = None
            for i, node in enumerate(nodes):
                if (
                    node.kind == "pivot"
                    and node.entering == pivot_edge
                    and node.depth == pivot_depth
                ):
                    at = i
                    break
            if at is None:
                continue
            region += prob
            cands = candidates
            if cands is None:
                pv = nodes[at]
                cands = frozenset(
                    eid
                    for eid in _bits(pv.facets & ~pv.tree)
                    if eid != pv.leaving
                )
            chosen: EdgeId | None = None
            for node in nodes[at + 1 :]:
                if node.kind == "pick" and node.edge in cands:
                    chosen = node.edge
                    break
            buckets[chosen] = buckets.get(chosen, Fraction(0)) + prob
        if region == 0:
            return Fraction(0), {}
        return region, {e: p / region for e, p in buckets.items()}

    def to_text(self) -> str:
        """Structured text: one node per line, plus comment metadata.

        Columns: id, parent id, kind, edge label, probability p/q, leaf
        pivot count.  Trailing comments summarize, for every pivot made
        at depth 0, which facet is removed first afterwards.
        """
        names = _name_map(self.instance)
        lines = [
            f"# comptree rule={self.rule} facets={{{_set_str(self.facets, names)}}} "
            f"tree={{{_set_str(self.start.edge_ids, names)}}}",
            "# columns: id parent kind label prob pivots",
        ]
        counter = itertools.count()

        def emit(node: CompNode, parent: int | None):
            nid = next(counter)
            if node.kind == "pick":
                label = names.get(node.edge, str(node.edge))
            elif node.kind == "pivot":
                label = (
                    f"{names.get(node.entering, str(node.entering))}"
                    f":{names.get(node.leaving, str(node.leaving))}"
                )
            else:
                label = "-"
            pivots = str(node.pivots) if node.kind == "leaf" else "-"
            parent_s = "-" if parent is None else str(parent)
            lines.append(
                f"{nid} {parent_s} {node.kind} {label} {_frac(node.prob)} {pivots}"
            )
            for child in node.children:
                emit(child, nid)

        emit(self.root, None)
        for entering in self._root_level_pivot_edges():
            region, dist = self.pick_order_after_pivot(entering)
            ename = names.get(entering, str(entering))
            for cand, p in sorted(
                dist.items(), key=lambda kv: (kv[0] is None, kv[0])
            ):
                cname = names.get(cand, str(cand)) if cand is not None else "none"
                lines.append(
                    f"# after-pivot {ename} pick {cname} = {_frac(p)} "
                    f"(region {_frac(region)})"
                )
        return "\n".join(lines) + "\n"

    def to_dot(self) -> str:
        """Graphviz rendering: squares for picks, labelled with the state."""
        names = _name_map(self.instance)
        out = ["digraph comptree {", "  node [fontname=monospace];"]
        counter = itertools.count()

        def emit(node: CompNode, parent: int | None):
            nid = next(counter)
            if node.kind in ("root", "pick"):
                avail = _set_str(node.facets & ~node.tree, names, mask=True)
                if node.kind == "root":
                    label = f"F\\\\B = {{{avail}}}"
                    shape = "ellipse"
                else:
                    ename = names.get(node.edge, str(node.edge))
                    label = f"{ename}  {_frac(node.prob)}\\nF\\\\B = {{{avail}}}"
                    shape = "box"
            elif node.kind == "pivot":
                label = (
                    f"pivot {names.get(node.entering, str(node.entering))} "
                    f"(out {names.get(node.leaving, str(node.leaving))})"
                )
                shape = "diamond"
            else:
                label = f"pivots = {node.pivots}"
                shape = "ellipse"
            out.append(f'  n{nid} [shape={shape}, label="{label}"];')
            if parent is not None:
                out.append(f"  n{parent} -> n{nid};")
            for child in node.children:
                emit(child, nid)

        emit(self.root, None)
        out.append("}")
        return "\n".join(out) + "\n"

    def _root_level_pivot_edges(self) -> list[EdgeId]:
        found: list[EdgeId] = []

        def walk(node: CompNode):
            if node.kind == "pivot" and node.depth == 0 and node.entering not in found:
                found.append(node.entering)
            for child in node.children:
                walk(child)

        walk(self.root)
        return sorted(found)


def comptree(
    inst: Instance,
    facets,
    start: TreePolicy,
    rule: str,
    *,
    enumeration_bound: int | None = None,
) -> CompTree:
    """Build the full computation tree for one rule."""
    idx = inst._index
    fmask = facet_mask(inst, facets)
    if start.mask & ~fmask:
        raise ValueError("start tree is not contained in the facet set")
    choice = idx.choice_of_mask(start.mask)
    if choice is None or idx.tree_distances(start.mask) is None:
        raise ValueError("start tree is not a valid tree policy")
    root = CompNode(kind="root", prob=Fraction(1), facets=fmask, tree=start.mask)
    if rule == RF:
        root.children = _build_rf(idx, fmask, choice, start.mask)
    elif rule == RF_STAR:
        bound = (
            DEFAULT_ENUMERATION_BOUND if enumeration_bound is None else enumeration_bound
        )
        ids = idx.edge_bits(fmask)
        if len(ids) > bound:
            raise EnumerationBoundExceeded(
                f"{len(ids)} facets exceed the enumeration bound {bound} "
                f"({math.factorial(len(ids))} permutations)"
            )
        root.children = _build_rf_star(idx, fmask, choice, start.mask)
    else:
        raise ValueError(f"unknown rule {rule!r}")
    return CompTree(
        rule=rule,
        instance=inst,
        facets=frozenset(idx.edge_bits(fmask)),
        start=start,
        root=root,
    )


def _build_rf(idx, fmask0: int, choice0, bmask0: int) -> list[CompNode]:
    """All decision branches of the randomized rule, uniform per choice."""

    def advance(fmask, choice, bmask, stack, pivots, depth) -> list[CompNode]:
        cands = idx.edge_bits(fmask & ~bmask)
        if cands:
            share = Fraction(1, len(cands))
            nodes = []
            for e in cands:
                node = CompNode(
                    kind="pick", prob=share, facets=fmask, tree=bmask, edge=e
                )
                node.children = advance(
                    fmask & ~(1 << e),
                    choice,
                    bmask,
                    stack + [(fmask, e, depth)],
                    pivots,
                    depth + 1,
                )
                nodes.append(node)
            return nodes
        return finish(choice, bmask, stack, pivots)

    def finish(choice, bmask, stack, pivots) -> list[CompNode]:
        if not stack:
            return [CompNode(kind="leaf", prob=Fraction(1), pivots=pivots)]
        fmask, e, d = stack[-1]
        rest = stack[:-1]
        dist = idx.tree_distances(bmask)
        u = idx.tail[e]
        if idx.cost[e] + idx.dget(dist, idx.head[e]) < dist[u]:
            leaving = choice[u]
            nchoice = list(choice)
            nchoice[u] = e
            nmask = (bmask & ~(1 << leaving)) | (1 << e)
            node = CompNode(
                kind="pivot",
                prob=Fraction(1),
                facets=fmask,
                tree=nmask,
                entering=e,
                leaving=leaving,
                depth=d,
            )
            node.children = advance(fmask, nchoice, nmask, rest, pivots + 1, d + 1)
            return [node]
        return finish(choice, bmask, rest, pivots)

    return advance(fmask0, choice0, bmask0, [], 0, 0)


def _build_rf_star(idx, fmask0: int, choice0, bmask0: int) -> list[CompNode]:
    """Partition all |F|! orderings by the execution path they induce."""
    ids = idx.edge_bits(fmask0)
    trie: dict = {"count": 0, "children": {}}
    for order in itertools.permutations(ids):
        rank = {eid: i for i, eid in enumerate(order)}
        events = _star_events(idx, fmask0, choice0, bmask0, rank)
        node = trie
        node["count"] += 1
        for ev in events:
            node = node["children"].setdefault(ev, {"count": 0, "children": {}})
            node["count"] += 1
    return _trie_to_nodes(trie)


def _star_events(idx, fmask, choice, bmask, rank):
    """Event sequence of one deterministic run: picks, pivots, final leaf."""
    events = []
    stack = []
    depth = 0
    pivots = 0
    while True:
        cands = idx.edge_bits(fmask & ~bmask)
        if cands:
            e = min(cands, key=rank.__getitem__)
            events.append(("pick", fmask, bmask, e))
            stack.append((fmask, e, depth))
            fmask &= ~(1 << e)
            depth += 1
            continue
        pivoted = False
        while stack:
            caller_fmask, e, caller_depth = stack.pop()
            dist = idx.tree_distances(bmask)
            u = idx.tail[e]
            if idx.cost[e] + idx.dget(dist, idx.head[e]) < dist[u]:
                leaving = choice[u]
                choice = list(choice)
                choice[u] = e
                bmask = (bmask & ~(1 << leaving)) | (1 << e)
                fmask = caller_fmask
                depth = caller_depth + 1
                pivots += 1
                events.append(("pivot", e, leaving, caller_depth, fmask, bmask))
                pivoted = True
                break
        if pivoted:
            continue
        events.append(("leaf", pivots))
        return events


def _trie_to_nodes(trie) -> list[CompNode]:
    total = trie["count"]
    children = trie["children"]
    kinds = {ev[0] for ev in children}
    if kinds - {"pick"}:
        # non-pick events are deterministic given the history
        assert len(children) == 1, "ambiguous non-choice event"
    nodes = []
    for ev in sorted(children):
        sub = children[ev]
        prob = Fraction(sub["count"], total)
        if ev[0] == "pick":
            _, fmask, bmask, e = ev
            node = CompNode(kind="pick", prob=prob, facets=fmask, tree=bmask, edge=e)
        elif ev[0] == "pivot":
            _, entering, leaving, d, fmask, bmask = ev
            assert prob == 1
            node = CompNode(
                kind="pivot",
                prob=prob,
                facets=fmask,
                tree=bmask,
                entering=entering,
                leaving=leaving,
                depth=d,
            )
        else:
            assert prob == 1
            node = CompNode(kind="leaf", prob=prob, pivots=ev[1])
        node.children = _trie_to_nodes(sub)
        nodes.append(node)
    return nodes


def _bits(mask: int) -> list[EdgeId]:
    ids = []
    eid = 0
    while mask:
        if mask & 1:
            ids.append(eid)
        mask >>= 1
        eid += 1
    return ids


def _name_map(inst: Instance) -> dict[EdgeId, str]:
    return {eid: name for name, eid in edge_names(inst).items()}


def _set_str(mask_or_set, names, *, mask: bool = False) -> str:
    ids = _bits(mask_or_set) if mask or isinstance(mask_or_set, int) else sorted(mask_or_set)
    return ",".join(names.get(e, str(e)) for e in ids)


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"
