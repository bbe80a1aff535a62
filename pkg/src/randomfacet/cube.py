"""Cube view of instances with exactly two outgoing edges per vertex.

Such an instance has 2^n tree policies, one per binary string: bit j
selects the lower- or higher-id outgoing edge of the j-th vertex in
sorted name order.  Orienting each cube edge between adjacent trees in
the improving direction yields an orientation whose unique full-cube
sink is the optimal tree; on generic instances every face of the cube
has a unique sink and the orientation is acyclic.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

from .errors import NonGenericInstance, NotCubeShaped, RandomFacetError
from .graph import EdgeId, Instance, TreePolicy, improves


@dataclass(frozen=True)
class CubeEncoding:
    """Bijection between tree policies and binary strings."""

    axes: tuple[str, ...]
    pairs: tuple[tuple[EdgeId, EdgeId], ...]

    def bits_of(self, policy: TreePolicy) -> str:
        out = []
        for axis, (zero, one) in zip(self.axes, self.pairs):
            eid = policy.edge_at(axis)
            if eid == zero:
                out.append("0")
            elif eid == one:
                out.append("1")
            else:
                raise ValueError(f"edge {eid} is not an outgoing edge of {axis!r}")
        return "".join(out)

    def tree(self, bits: str) -> TreePolicy:
        if len(bits) != len(self.axes) or set(bits) - {"0", "1"}:
            raise ValueError(f"{bits!r} is not a binary string of length {len(self.axes)}")
        return TreePolicy(
            {
                axis: self.pairs[j][int(bits[j])]
                for j, axis in enumerate(self.axes)
            }
        )

    def all_bits(self) -> Iterator[str]:
        for combo in itertools.product("01", repeat=len(self.axes)):
            yield "".join(combo)


def cube_encoding(inst: Instance) -> CubeEncoding:
    """Encoding for an instance with exactly two outgoing edges per vertex."""
    axes = tuple(sorted(v for v in inst.vertices if v != inst.target))
    pairs = []
    for v in axes:
        out = inst.out_edges[v]
        if len(out) != 2:
            raise NotCubeShaped(
                f"vertex {v!r} has {len(out)} outgoing edges, expected 2"
            )
        pairs.append((out[0].id, out[1].id))
    return CubeEncoding(axes=axes, pairs=tuple(pairs))


@dataclass(frozen=True)
class OrientationView:
    """Improving directions between all pairs of adjacent tree policies."""

    encoding: CubeEncoding
    arrows: frozenset[tuple[str, str]]

    def points(self, src: str, dst: str) -> bool:
        return (src, dst) in self.arrows

    def successors(self, bits: str) -> list[str]:
        return sorted(dst for src, dst in self.arrows if src == bits)

    def sink(self) -> str:
        """The unique vertex of the full cube with no outgoing arrow."""
        sinks = [b for b in self.encoding.all_bits() if not self.successors(b)]
        if len(sinks) != 1:
            raise RandomFacetError(f"expected one sink, found {sinks}")
        return sinks[0]

    def is_acyclic(self) -> bool:
        state: dict[str, int] = {}

        def dfs(b: str) -> bool:
            state[b] = 1
            for nxt in self.successors(b):
                s = state.get(nxt)
                if s == 1:
                    return True
                if s is None and dfs(nxt):
                    return True
            state[b] = 2
            return False

        return not any(
            state.get(b) is None and dfs(b) for b in self.encoding.all_bits()
        )

    def faces(self) -> Iterator[list[str]]:
        """All sub-cubes: every choice of free axes and fixed bit values."""
        n = len(self.encoding.axes)
        for free in itertools.chain.from_iterable(
            itertools.combinations(range(n), r) for r in range(n + 1)
        ):
            fixed = [j for j in range(n) if j not in free]
            for values in itertools.product("01", repeat=len(fixed)):
                assign = dict(zip(fixed, values))
                verts = []
                for combo in itertools.product("01", repeat=len(free)):
                    bits = [""] * n
                    for j, v in assign.items():
                        bits[j] = v
                    for j, v in zip(free, combo):
                        bits[j] = v
                    verts.append("".join(bits))
                yield verts

    def unique_sink_every_face(self) -> bool:
        for verts in self.faces():
            vset = set(verts)
            sinks = [
                b
                for b in verts
                if not any(dst in vset for dst in self.successors(b))
            ]
            if len(sinks) != 1:
                return False
        return True

    def count_paths(self, src: str, dst: str) -> int:
        """Number of directed pivot paths from src to dst."""
        if not self.is_acyclic():
            raise RandomFacetError("orientation has a cycle; path count undefined")
        memo: dict[str, int] = {}

        def walk(b: str) -> int:
            if b == dst:
                return 1
            if b in memo:
                return memo[b]
            memo[b] = sum(walk(nxt) for nxt in self.successors(b))
            return memo[b]

        return walk(src)


def orientation_view(inst: Instance) -> OrientationView:
    """Orient every cube edge between adjacent trees in the improving direction.

    A tie (neither direction improves) means two adjacent trees have
    equal distance at the flipped vertex, which only happens on
    non-generic instances.
    """
    enc = cube_encoding(inst)
    arrows: set[tuple[str, str]] = set()
    trees = {bits: enc.tree(bits) for bits in enc.all_bits()}
    for bits in trees:
        for j in range(len(enc.axes)):
            if bits[j] == "1":
                continue
            other = bits[:j] + "1" + bits[j + 1 :]
            a, b = trees[bits], trees[other]
            entering_b = enc.pairs[j][1]
            entering_a = enc.pairs[j][0]
            a_to_b = improves(inst, a, entering_b)
            b_to_a = improves(inst, b, entering_a)
            if a_to_b == b_to_a:
                raise NonGenericInstance(
                    f"adjacent trees {bits} and {other} have no improving direction"
                )
            arrows.add((bits, other) if a_to_b else (other, bits))
    return OrientationView(encoding=enc, arrows=frozenset(arrows))
