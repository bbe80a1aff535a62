"""Test-only oracles, independent of the library's exact engines."""
from fractions import Fraction

from randomfacet import run_random_facet


class ScriptedRng:
    """Answers randrange from a fixed script, then zeros; logs every draw."""

    def __init__(self, script=()):
        self.script = list(script)
        self.pos = 0
        self.log = []

    def randrange(self, k):
        self.log.append(k)
        value = self.script[self.pos] if self.pos < len(self.script) else 0
        self.pos += 1
        return value


def rf_branches(inst, facets, start):
    """Every decision branch of run_random_facet with its probability.

    Drives the production runner with scripted draws, discovering the
    branch factor of each choice point from the rng log; yields
    (probability, RunResult) pairs whose probabilities sum to one.
    """
    agenda = [()]
    while agenda:
        prefix = agenda.pop()
        rng = ScriptedRng(prefix)
        result = run_random_facet(inst, facets, start, rng)
        prob = Fraction(1)
        for k in rng.log:
            prob /= k
        yield prob, result
        answers = list(prefix) + [0] * (len(rng.log) - len(prefix))
        for i in range(len(prefix), len(rng.log)):
            for alt in range(1, rng.log[i]):
                agenda.append(tuple(answers[:i]) + (alt,))


def rf_expectation_by_branches(inst, facets, start):
    """Probability-weighted pivot count over all decision branches."""
    total = Fraction(0)
    mass = Fraction(0)
    for prob, result in rf_branches(inst, facets, start):
        total += prob * result.pivot_count
        mass += prob
    assert mass == 1
    return total
