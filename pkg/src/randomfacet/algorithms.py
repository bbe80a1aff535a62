"""Executable pivoting recursions with full trace recording.

Two variants of the same recursion are provided.  run_random_facet
draws a fresh uniformly random facet at every choice point;
run_random_facet_star is deterministic and always removes the facet
ranked first by a fixed permutation.  Both count one pivot per
exchange and record it as a PivotEvent.

RNG contract: run_random_facet consumes exactly one bounded draw per
choice point, via rng.randrange(k) indexed into the candidates of
F minus B enumerated in ascending edge id order.  Any object exposing
randrange works, which is what the exhaustive branch enumeration in
the test suite relies on.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import DepthGuardExceeded, PermutationDomainTooSmall
from .graph import EdgeId, Instance, TreePolicy, facet_mask

RF = "rf"
RF_STAR = "rfstar"
RULES = (RF, RF_STAR)

DEFAULT_DEPTH_GUARD = 10**6


class CallKind(str, enum.Enum):
    """How the call performing a pivot was itself invoked."""

    ROOT = "root"
    FIRST = "first"
    SECOND = "second"


@dataclass(frozen=True)
class PivotEvent:
    """One improving exchange: `entering` replaces `leaving` at their tail."""

    entering: EdgeId
    leaving: EdgeId
    depth: int
    call_kind: CallKind


@dataclass(frozen=True)
class RunResult:
    final_tree: TreePolicy
    pivot_count: int
    trace: tuple[PivotEvent, ...]


class Permutation:
    """Total order on edge ids, stored as a bijective rank map 1..k."""

    __slots__ = ("_rank", "_order", "_domain")

    def __init__(self, rank: Mapping[EdgeId, int]):
        self._rank = dict(rank)
        k = len(self._rank)
        if sorted(self._rank.values()) != list(range(1, k + 1)):
            raise ValueError("ranks must be a bijection onto 1..k")
        by_rank = sorted(self._rank, key=self._rank.__getitem__)
        self._order = tuple(by_rank)
        self._domain = frozenset(self._rank)

    @classmethod
    def from_order(cls, order: Iterable[EdgeId]) -> "Permutation":
        ids = list(order)
        return cls({eid: i + 1 for i, eid in enumerate(ids)})

    @property
    def order(self) -> tuple[EdgeId, ...]:
        return self._order

    @property
    def domain(self) -> frozenset[EdgeId]:
        return self._domain

    def rank(self, eid: EdgeId) -> int:
        return self._rank[eid]

    def min_of(self, candidates: Iterable[EdgeId]) -> EdgeId:
        return min(candidates, key=self._rank.__getitem__)

    def __len__(self) -> int:
        return len(self._rank)

    def __repr__(self) -> str:
        return f"Permutation({' < '.join(str(e) for e in self._order)})"


def run_random_facet(
    inst: Instance,
    facets: Iterable[EdgeId] | None,
    start: TreePolicy,
    rng,
    *,
    depth_guard: int = DEFAULT_DEPTH_GUARD,
) -> RunResult:
    """Run the randomized recursion from `start` within `facets`.

    One rng.randrange(len(candidates)) call per choice point, so runs
    are reproducible from a seeded random.Random on any platform.
    """

    def pick(cands: list[EdgeId]) -> EdgeId:
        return cands[rng.randrange(len(cands))]

    return _run(inst, facets, start, pick, depth_guard)


def run_random_facet_star(
    inst: Instance,
    facets: Iterable[EdgeId] | None,
    start: TreePolicy,
    sigma: Permutation,
    *,
    depth_guard: int = DEFAULT_DEPTH_GUARD,
) -> RunResult:
    """Run the permutation-driven recursion; a pure function of its inputs.

    The same permutation is consulted at every choice point; recursive
    calls restrict it implicitly by taking the minimum over the current
    candidate set.
    """
    fmask = facet_mask(inst, facets)
    ids = inst._index.edge_bits(fmask)
    if not sigma.domain.issuperset(ids):
        missing = [eid for eid in ids if eid not in sigma.domain]
        raise PermutationDomainTooSmall(
            f"permutation does not rank facet edges {missing}"
        )
    return _run(inst, facets, start, sigma.min_of, depth_guard)


def _run(inst, facets, start, pick, depth_guard) -> RunResult:
    idx = inst._index
    fmask = facet_mask(inst, facets)
    if start.mask & ~fmask:
        raise ValueError("start tree is not contained in the facet set")
    choice = idx.choice_of_mask(start.mask)
    if choice is None:
        raise ValueError("start tree does not choose one edge per vertex")
    if idx.tree_distances(start.mask) is None:
        raise ValueError("start tree does not reach the target from every vertex")
    bmask = start.mask
    trace: list[PivotEvent] = []
    # stack frames describe enclosing calls waiting for their first
    # recursive call to return: (facet mask, removed edge, depth, kind)
    stack: list[tuple[int, EdgeId, int, CallKind]] = []
    depth = 0
    kind = CallKind.ROOT
    while True:
        if depth > depth_guard:
            raise DepthGuardExceeded(f"recursion deeper than {depth_guard}")
        cands = idx.edge_bits(fmask & ~bmask)
        if cands:
            e = pick(cands)
            stack.append((fmask, e, depth, kind))
            fmask &= ~(1 << e)
            depth += 1
            kind = CallKind.FIRST
            continue
        # base case reached: unwind until a pivot restarts the loop
        pivoted = False
        while stack:
            caller_fmask, e, caller_depth, caller_kind = stack.pop()
            dist = idx.tree_distances(bmask)
            u = idx.tail[e]
            h = idx.head[e]
            if idx.cost[e] + idx.dget(dist, h) < dist[u]:
                leaving = choice[u]
                trace.append(PivotEvent(e, leaving, caller_depth, caller_kind))
                choice = list(choice)
                choice[u] = e
                bmask = (bmask & ~(1 << leaving)) | (1 << e)
                fmask = caller_fmask
                depth = caller_depth + 1
                kind = CallKind.SECOND
                pivoted = True
                break
        if pivoted:
            continue
        final = idx.policy_from_choice(choice)
        return RunResult(final_tree=final, pivot_count=len(trace), trace=tuple(trace))


def format_trace(result: RunResult) -> str:
    """One pivot per line: depth, call kind, entering id, leaving id."""
    lines = [
        f"{ev.depth} {ev.call_kind.value} {ev.entering} {ev.leaving}"
        for ev in result.trace
    ]
    return "\n".join(lines)
