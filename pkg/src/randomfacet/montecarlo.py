"""Seeded Monte Carlo estimation of expected pivot counts.

Each trial draws from its own substream derived deterministically from
(seed, trial index) by hashing, so estimates are bit-identical across
platforms and across any partitioning of trials over workers: trial i
always sees the same randomness no matter who runs it.
"""
from __future__ import annotations

import hashlib
import math
import random
from dataclasses import dataclass
from typing import Iterable

from .algorithms import RF, RF_STAR, Permutation, run_random_facet, run_random_facet_star
from .errors import ZeroTrials
from .graph import EdgeId, Instance, TreePolicy


@dataclass(frozen=True)
class Estimate:
    mean: float
    stderr: float
    trials: int
    seed: int

    def format(self) -> str:
        return (
            f"mean={self.mean:.6f} stderr={self.stderr:.6f} "
            f"trials={self.trials} seed={self.seed}"
        )


def trial_rng(seed: int, index: int) -> random.Random:
    """Counter-based substream: hash (seed, index) into a generator seed."""
    digest = hashlib.sha256(f"{seed}:{index}".encode()).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def _random_permutation(rng: random.Random, ids: list[EdgeId]) -> Permutation:
    # Fisher-Yates, one randrange per position, high index first
    order = list(ids)
    for i in range(len(order) - 1, 0, -1):
        j = rng.randrange(i + 1)
        order[i], order[j] = order[j], order[i]
    return Permutation.from_order(order)


def pivot_samples(
    inst: Instance,
    facets: Iterable[EdgeId] | None,
    start: TreePolicy,
    rule: str,
    trials: int,
    seed: int,
) -> list[int]:
    """Per-trial pivot counts; trial i depends only on (seed, i)."""
    if trials < 1:
        raise ZeroTrials("at least one trial is required")
    if rule not in (RF, RF_STAR):
        raise ValueError(f"unknown rule {rule!r}")
    all_ids = sorted(range(inst.m))
    samples = []
    for i in range(trials):
        rng = trial_rng(seed, i)
        if rule == RF:
            result = run_random_facet(inst, facets, start, rng)
        else:
            sigma = _random_permutation(rng, all_ids)
            result = run_random_facet_star(inst, facets, start, sigma)
        samples.append(result.pivot_count)
    return samples


def estimate_expected_pivots(
    inst: Instance,
    facets: Iterable[EdgeId] | None,
    start: TreePolicy,
    rule: str,
    trials: int,
    seed: int,
) -> Estimate:
    """Sample mean and standard error of the pivot count.

    stderr is the sample standard deviation over sqrt(trials); a single
    trial reports stderr 0.0.
    """
    samples = pivot_samples(inst, facets, start, rule, trials, seed)
    n = len(samples)
    mean = sum(samples) / n
    if n > 1:
        var = sum((s - mean) ** 2 for s in samples) / (n - 1)
        stderr = math.sqrt(var / n)
    else:
        stderr = 0.0
    return Estimate(mean=mean, stderr=stderr, trials=n, seed=seed)
