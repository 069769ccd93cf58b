"""Independent reference oracles for cross-checking the engine.

Everything here is deliberately written from scratch with plain Python
scalars: worlds are enumerated one by one with itertools, clause evaluation
is re-derived by a local topological pass, and probabilities are summed with
math.fsum. None of the engine's vectorized or factorized machinery is
reused, so agreement between the two routes is meaningful.
"""

import itertools
import math

from causalog import DesugaredProgram, Program


def _as_desugared(program):
    if isinstance(program, Program):
        return program.desugar()
    return program


def _topological_heads(dp: DesugaredProgram) -> list[str]:
    """Order internal propositions so every body atom precedes its head."""
    heads = list(dp.internal_propositions)
    deps = {h: set() for h in heads}
    for clause in dp.clauses:
        for lit in clause.literals:
            deps[clause.head].add(lit.name)
    order = []
    placed = set()
    pending = sorted(heads)
    while pending:
        progress = [h for h in pending if deps[h] <= placed]
        if not progress:
            raise AssertionError("reference oracle needs an acyclic program")
        for h in progress:
            order.append(h)
            placed.add(h)
        pending = [h for h in pending if h not in placed]
    return order


def reference_world(dp: DesugaredProgram, noise: dict) -> dict:
    """Evaluate one external world by a straightforward topological sweep."""
    values = dict(noise)
    by_head = {}
    for clause in dp.clauses:
        by_head.setdefault(clause.head, []).append(clause)
    for head in _topological_heads(dp):
        result = False
        for clause in by_head.get(head, ()):
            body = all(values[l.name] == l.positive for l in clause.literals)
            guards = all(noise[u] for u in clause.noise)
            if body and guards:
                result = True
                break
        values[head] = result
    return values


def world_weights(dp: DesugaredProgram):
    """Yield (noise assignment, weight) over every external world."""
    names = list(dp.noise_names)
    for bits in itertools.product((False, True), repeat=len(names)):
        noise = dict(zip(names, bits))
        weight = 1.0
        for name, value in noise.items():
            p = dp.noise_probability(name)
            weight *= p if value else 1.0 - p
        yield noise, weight


def reference_probability(program, phi) -> float:
    """Scalar brute-force P(phi) by full enumeration of external worlds."""
    dp = _as_desugared(program)
    masses = []
    for noise, weight in world_weights(dp):
        env = reference_world(dp, noise)
        if phi.evaluate(env):
            masses.append(weight)
    return math.fsum(masses)


def reference_conditional(program, phi, evidence) -> float:
    dp = _as_desugared(program)
    joint = []
    given = []
    for noise, weight in world_weights(dp):
        env = reference_world(dp, noise)
        if evidence.evaluate(env):
            given.append(weight)
            if phi.evaluate(env):
                joint.append(weight)
    denominator = math.fsum(given)
    if denominator <= 0.0:
        raise ZeroDivisionError("evidence has zero probability")
    return math.fsum(joint) / denominator


def noisy_or(probabilities) -> float:
    """Closed-form chance that at least one independent cause fires."""
    miss = 1.0
    for p in probabilities:
        miss *= 1.0 - p
    return 1.0 - miss
