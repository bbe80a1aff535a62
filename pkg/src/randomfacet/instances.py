"""Instance construction, validation helpers, and file I/O.

The centrepiece is derive_errata_instance: a bounded brute-force search
over three-vertex, six-edge candidates that returns the first instance,
in a fixed documented order, reproducing every reference quantity of
the bundled counterexample (expected pivot counts 7/3 and 29/12 from
start tree 001, 11/3 and 43/12 from 111, optimal tree 000, exactly
three pivot paths from each start, genericity on every edge subset).
The found instance is frozen in the repository as
data/errata-cube.instance and loaded by errata_instance().

Text format (UTF-8, '#' starts a comment):

    target <name>
    edge <id> <tail> <head> <integer-cost>

Vertices are implicit from edge endpoints.  save_instance writes the
canonical form: the target line, then edges in ascending id order,
single spaces, trailing newline.  Canonical files round-trip
bit-exactly.
"""
from __future__ import annotations

import importlib.resources
import itertools
import random
from fractions import Fraction
from pathlib import Path
from typing import Iterator

from .cube import cube_encoding, orientation_view
from .errors import (
    GenerationFailedAfterRetries,
    NonGenericInstance,
    NoTreeInSubset,
    ParseError,
    RandomFacetError,
    SearchExhausted,
    TooLargeForExhaustiveCheck,
    WriteError,
)
from .exact import ExactEvaluator
from .graph import Edge, Instance, validate_instance

FIXTURE_NAME = "errata-cube.instance"

# pinned reference quantities the bundled counterexample must reproduce
ERRATA_EXPECTATIONS = {
    ("rf", "001"): Fraction(7, 3),
    ("rfstar", "001"): Fraction(29, 12),
    ("rf", "111"): Fraction(11, 3),
    ("rfstar", "111"): Fraction(43, 12),
}
ERRATA_PATH_COUNTS = {("001", "000"): 3, ("111", "000"): 3}


def loads_instance(text: str, source: str = "<string>") -> Instance:
    """Parse the line-oriented instance format."""
    target: str | None = None
    edges: list[Edge] = []
    seen: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0] == "target":
            if len(tokens) != 2:
                raise ParseError("target line needs exactly one name", source=source, line=lineno)
            if target is not None:
                raise ParseError("duplicate target line", source=source, line=lineno)
            target = tokens[1]
        elif tokens[0] == "edge":
            if len(tokens) != 5:
                raise ParseError(
                    "edge line needs id, tail, head and cost", source=source, line=lineno
                )
            try:
                eid = int(tokens[1])
            except ValueError:
                raise ParseError(f"bad edge id {tokens[1]!r}", source=source, line=lineno) from None
            try:
                cost = int(tokens[4])
            except ValueError:
                raise ParseError(f"bad cost token {tokens[4]!r}", source=source, line=lineno) from None
            if eid in seen:
                raise ParseError(
                    f"duplicate edge id {eid} (first seen on line {seen[eid]})",
                    source=source,
                    line=lineno,
                )
            seen[eid] = lineno
            edges.append(Edge(id=eid, tail=tokens[2], head=tokens[3], cost=cost))
        else:
            raise ParseError(f"unknown directive {tokens[0]!r}", source=source, line=lineno)
    if target is None:
        raise ParseError("missing target line", source=source)
    try:
        return Instance.build(target, edges)
    except ValueError as exc:
        raise ParseError(str(exc), source=source) from None


def load_instance(path) -> Instance:
    p = Path(path)
    return loads_instance(p.read_text(encoding="utf-8"), source=str(p))


def dumps_instance(inst: Instance) -> str:
    lines = [f"target {inst.target}"]
    for e in inst.edges:
        lines.append(f"edge {e.id} {e.tail} {e.head} {e.cost}")
    return "\n".join(lines) + "\n"


def save_instance(inst: Instance, path) -> None:
    try:
        Path(path).write_text(dumps_instance(inst), encoding="utf-8")
    except OSError as exc:
        raise WriteError(f"cannot write {path}: {exc}") from exc


def errata_instance() -> Instance:
    """The bundled counterexample, validated.

    Raises FileNotFoundError when the packaged fixture is missing;
    callers that can afford it may fall back to derive_errata_instance.
    """
    res = importlib.resources.files("randomfacet").joinpath(f"data/{FIXTURE_NAME}")
    if not res.is_file():
        raise FileNotFoundError(f"packaged fixture data/{FIXTURE_NAME} is missing")
    return validate_instance(loads_instance(res.read_text(), source=FIXTURE_NAME))


def genericity_check(inst: Instance, *, max_edges: int = 20) -> bool:
    """True iff every edge subset containing a tree has a unique optimal tree.

    Exhaustive over all 2^m subsets, so the instance must be desk-sized.
    """
    m = inst.m
    if m > max_edges:
        raise TooLargeForExhaustiveCheck(
            f"{m} edges exceed the exhaustive-check bound {max_edges}"
        )
    idx = inst._index
    out_masks = idx.out_mask
    for fmask in range(1, 1 << m):
        if any(not (om & fmask) for om in out_masks):
            continue  # some vertex has no outgoing edge: no tree inside
        try:
            _, tight = idx.subgraph_shortest(fmask)
        except NoTreeInSubset:
            continue
        if idx.count_optimal_trees(tight, limit=2) > 1:
            return False
    return True


def random_instance(
    n: int,
    out_degree: int,
    cost_bound: int,
    seed: int,
    *,
    require_generic: bool = True,
    max_tries: int = 500,
) -> Instance:
    """Seeded random valid instance, generic by rejection sampling.

    Vertices v0..v{n-1} plus target t; every edge points strictly
    downstream (or to t), so any combination of choices is a tree and
    negative costs can never close a cycle.
    """
    if n < 1 or out_degree < 1:
        raise ValueError("need n >= 1 and out_degree >= 1")
    rng = random.Random(seed)
    names = [f"v{i}" for i in range(n)]
    for _ in range(max_tries):
        edges = []
        eid = 0
        for i, v in enumerate(names):
            downstream = names[i + 1 :] + ["t"]
            for _ in range(out_degree):
                head = downstream[rng.randrange(len(downstream))]
                cost = rng.randrange(-cost_bound, cost_bound + 1) if cost_bound else 0
                edges.append(Edge(id=eid, tail=v, head=head, cost=cost))
                eid += 1
        inst = Instance.build("t", edges)
        try:
            validate_instance(inst)
        except RandomFacetError:  # pragma: no cover - impossible for this shape
            continue
        if require_generic and inst.m <= 20 and not genericity_check(inst):
            continue
        return inst
    raise GenerationFailedAfterRetries(
        f"no valid instance after {max_tries} attempts (n={n}, out_degree={out_degree})"
    )


_AXES = ("x", "y", "z")
_TARGET = "t"
# heads may point at any strictly downstream vertex or the target,
# iterated in lexicographic order; this fixes the search order
_DOWNSTREAM = {"x": ("t", "y", "z"), "y": ("t", "z"), "z": ("t",)}


def errata_candidates(max_one_cost: int = 8) -> Iterator[Instance]:
    """Candidate instances in the documented deterministic search order.

    Each of x, y, z has a 0-labelled edge of cost 0 and a 1-labelled
    edge of positive cost at most max_one_cost.  Heads iterate before
    costs, both in ascending (lexicographic) order over the tuples
    (x0, x1, y0, y1, z0, z1) and (cost x1, cost y1, cost z1).
    """
    head_space = [_DOWNSTREAM[v] for v in _AXES for _ in (0, 1)]
    for heads in itertools.product(*head_space):
        for costs in itertools.product(range(1, max_one_cost + 1), repeat=3):
            edges = []
            for k, v in enumerate(_AXES):
                edges.append(Edge(id=2 * k, tail=v, head=heads[2 * k], cost=0))
                edges.append(Edge(id=2 * k + 1, tail=v, head=heads[2 * k + 1], cost=costs[k]))
            yield Instance.build(_TARGET, edges)


def derive_errata_instance(max_one_cost: int = 8) -> Instance:
    """First candidate, in search order, matching every reference quantity.

    The checks, in increasing cost: the full-edge-set optimum is tree
    000; the cube orientation is acyclic with a unique sink on every
    face and exactly three pivot paths from 001 and from 111 to 000;
    the exact expectations equal the four pinned values; every edge
    subset is generic.  Exhausting the space raises SearchExhausted,
    which means the bounds must be widened, never that a weaker
    instance is acceptable.
    """
    for inst in errata_candidates(max_one_cost):
        if _matches_reference(inst):
            return validate_instance(inst)
    raise SearchExhausted(
        "no three-vertex candidate with downstream heads and 1-edge costs "
        f"in 1..{max_one_cost} reproduces the reference quantities; widen the bounds"
    )


def _matches_reference(inst: Instance) -> bool:
    enc = cube_encoding(inst)
    ev = ExactEvaluator(inst)
    full = inst._index.full_mask
    choice, tmask, _, unique = ev.optimal(full)
    if not unique or tmask != enc.tree("000").mask:
        return False
    try:
        view = orientation_view(inst)
    except NonGenericInstance:
        return False
    if not view.is_acyclic() or not view.unique_sink_every_face():
        return False
    for (src, dst), expected in ERRATA_PATH_COUNTS.items():
        if view.count_paths(src, dst) != expected:
            return False
    try:
        for (rule, bits), expected in ERRATA_EXPECTATIONS.items():
            if rule != "rf":
                continue
            if ev.expected_rf(full, enc.tree(bits).mask) != expected:
                return False
    except NonGenericInstance:
        return False
    if not genericity_check(inst):
        return False
    for (rule, bits), expected in ERRATA_EXPECTATIONS.items():
        if rule != "rfstar":
            continue
        if ev.expected_rf_star(None, enc.tree(bits), bound=inst.m) != expected:
            return False
    return True
