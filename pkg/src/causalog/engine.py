"""Exact inference over acyclic programs.

The probability of a formula is, by definition, the total weight of the noise
assignments whose induced structure satisfies it, each assignment weighed by
the product of its fact probabilities. Two exact evaluation strategies
compute that sum:

* noise enumeration walks the noise assignments directly, solving the Boolean
  equation system for each one. It is always applicable and is the natural
  choice for twin programs, where a noise fact feeds clauses of both copies.

* factor enumeration walks assignments of the internal propositions instead.
  When every noise fact feeds at most one clause, distinct heads have
  disjoint noise, so the joint distribution factorizes per head given its
  parents, with P(head true | parents) = 1 - prod(1 - fire(c)) over the
  clauses whose body the parent assignment satisfies. Programs written in the
  surface syntax always qualify. This is usually exponentially cheaper
  because only ancestors of the queried atoms need enumerating.

Both strategies restrict enumeration to the ancestral closure of the atoms
mentioned by the query; everything else marginalizes out exactly. Whichever
is valid and cheaper runs, in fixed-size chunks so memory stays flat, and the
number of enumerated assignments is reported back. A query that would need
more assignments than the cap (``CAUSALOG_MAX_WORLDS``, default 2**26) is
refused rather than silently truncated.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import (
    CausalogError,
    CyclicProgramError,
    EnumerationCapError,
    TableSizeError,
    WorldError,
    ZeroEvidenceError,
)
from .formula import Formula, check_atoms
from .model import DesugaredProgram, LogicalClause, Program

DEFAULT_MAX_WORLDS = 1 << 26
MAX_WORLDS_ENV = "CAUSALOG_MAX_WORLDS"
_CHUNK_BITS = 16


@dataclass(frozen=True)
class QueryResult:
    """An exact probability plus how it was obtained.

    ``worlds_evaluated`` counts the assignments the chosen strategy walked;
    ``conditioning_mass`` is the probability of the evidence (1.0 when the
    query was unconditional)."""

    probability: float
    worlds_evaluated: int
    conditioning_mass: float = 1.0


def resolved_max_worlds(max_worlds: int | None) -> int:
    if max_worlds is not None:
        return int(max_worlds)
    env = os.environ.get(MAX_WORLDS_ENV)
    if env:
        try:
            value = int(env)
        except ValueError:
            raise CausalogError(
                f"{MAX_WORLDS_ENV} must be a positive integer, got {env!r}"
            ) from None
        if value > 0:
            return value
    return DEFAULT_MAX_WORLDS


def _as_desugared(program: Program | DesugaredProgram) -> DesugaredProgram:
    if isinstance(program, Program):
        return program.desugar()
    return program


def evaluate_world(program: Program | DesugaredProgram,
                   world: Mapping[str, bool]) -> dict[str, bool]:
    """Solve the Boolean equation system for one total noise assignment.

    Returns the full structure: the given noise values plus the uniquely
    determined value of every internal proposition. Internal propositions
    with no clause come out false."""
    dp = _as_desugared(program)
    known = set(dp.noise_names)
    missing = sorted(known - world.keys())
    if missing:
        raise WorldError(f"noise assignment missing {', '.join(missing)}")
    extra = sorted(set(world.keys()) - known)
    if extra:
        raise WorldError(f"assignment names unknown noise propositions {', '.join(extra)}")
    values: dict[str, bool] = {u: bool(world[u]) for u in known}
    by_head = dp.clauses_by_head
    for name in dp.topological_order():
        result = False
        for clause in by_head.get(name, ()):
            if all(values[lit.name] == lit.positive for lit in clause.literals) and \
                    all(values[u] for u in clause.noise):
                result = True
                break
        values[name] = result
    return values


# ---------------------------------------------------------------------------
# strategy selection


def _clause_fire_probability(dp: DesugaredProgram, clause: LogicalClause) -> float:
    fire = 1.0
    for u in clause.noise:
        fire *= dp.noise_probability(u)
    return fire


def _query_masses(dp: DesugaredProgram, formulas: Sequence[Formula],
                  max_worlds: int | None) -> tuple[list[float], int]:
    """Exact mass of each formula, computed in one shared enumeration."""
    cap = resolved_max_worlds(max_worlds)
    graph = dp.dependency_graph()
    if not graph.is_acyclic():
        cycle = graph.find_cycle()
        raise CyclicProgramError(
            "exact inference needs an acyclic program; cycle: "
            + " -> ".join(cycle or ())
        )
    atoms: set[str] = set()
    for f in formulas:
        atoms |= f.atoms()
    relevant = graph.ancestors(atoms)
    order = [n for n in dp.topological_order() if n in relevant]
    clauses = [c for c in dp.clauses if c.head in relevant]

    noise_use: dict[str, int] = {}
    for c in clauses:
        for u in c.noise:
            noise_use[u] = noise_use.get(u, 0) + 1
    shared_noise = any(count > 1 for count in noise_use.values())
    random_noise = [u for u in dp.noise_names
                    if u in noise_use and 0.0 < dp.noise_probability(u) < 1.0]

    factor_bits = None if shared_noise else len(order)
    noise_bits = len(random_noise)

    candidates: list[tuple[int, str]] = [(noise_bits, "noise")]
    if factor_bits is not None:
        candidates.append((factor_bits, "factor"))
    bits, strategy = min(candidates, key=lambda c: (c[0], c[1] != "factor"))
    if (1 << bits) > cap:
        raise EnumerationCapError(1 << bits, cap)

    if strategy == "factor":
        masses = _run_factor(dp, order, clauses, formulas, bits)
    else:
        masses = _run_noise(dp, order, clauses, formulas, random_noise)
    return masses, 1 << bits


def _bit_columns(start: int, count: int, names: Sequence[str]) -> dict[str, np.ndarray]:
    idx = np.arange(start, start + count, dtype=np.uint64)
    return {
        name: ((idx >> np.uint64(j)) & np.uint64(1)).astype(bool)
        for j, name in enumerate(names)
    }


def _formula_masses(formulas: Sequence[Formula], env: dict[str, np.ndarray],
                    weight: np.ndarray, masses: list[float]) -> None:
    for i, f in enumerate(formulas):
        mask = np.broadcast_to(np.asarray(f.evaluate(env), dtype=bool), weight.shape)
        masses[i] += float(weight[mask].sum())


def _run_factor(dp: DesugaredProgram, order: list[str],
                clauses: list[LogicalClause], formulas: Sequence[Formula],
                bits: int) -> list[float]:
    by_head: dict[str, list[tuple[LogicalClause, float]]] = {}
    for c in clauses:
        by_head.setdefault(c.head, []).append((c, _clause_fire_probability(dp, c)))
    total = 1 << bits
    chunk = 1 << min(bits, _CHUNK_BITS)
    masses = [0.0] * len(formulas)
    for start in range(0, total, chunk):
        count = min(chunk, total - start)
        env = _bit_columns(start, count, order)
        weight = np.ones(count, dtype=np.float64)
        for name in order:
            miss = np.ones(count, dtype=np.float64)
            for clause, fire in by_head.get(name, ()):
                if fire == 0.0:
                    continue
                sat = np.ones(count, dtype=bool)
                for lit in clause.literals:
                    sat &= env[lit.name] == lit.positive
                miss = np.where(sat, miss * (1.0 - fire), miss)
            weight *= np.where(env[name], 1.0 - miss, miss)
        _formula_masses(formulas, env, weight, masses)
    return masses


def _run_noise(dp: DesugaredProgram, order: list[str],
               clauses: list[LogicalClause], formulas: Sequence[Formula],
               random_noise: list[str]) -> list[float]:
    by_head: dict[str, list[LogicalClause]] = {}
    for c in clauses:
        by_head.setdefault(c.head, []).append(c)
    probs = {u: dp.noise_probability(u) for u in random_noise}
    bits = len(random_noise)
    total = 1 << bits
    chunk = 1 << min(bits, _CHUNK_BITS)
    masses = [0.0] * len(formulas)
    for start in range(0, total, chunk):
        count = min(chunk, total - start)
        noise_env = _bit_columns(start, count, random_noise)
        weight = np.ones(count, dtype=np.float64)
        for u in random_noise:
            p = probs[u]
            weight *= np.where(noise_env[u], p, 1.0 - p)
        env: dict[str, np.ndarray] = {}
        for name in order:
            value = np.zeros(count, dtype=bool)
            for clause in by_head.get(name, ()):
                sat = np.ones(count, dtype=bool)
                for lit in clause.literals:
                    sat &= env[lit.name] == lit.positive
                for u in clause.noise:
                    if u in noise_env:
                        sat &= noise_env[u]
                    elif dp.noise_probability(u) < 1.0:
                        sat &= False
                value |= sat
            env[name] = value
        _formula_masses(formulas, env, weight, masses)
    return masses


# ---------------------------------------------------------------------------
# public queries


def probability(program: Program | DesugaredProgram, phi: Formula,
                max_worlds: int | None = None) -> QueryResult:
    """Exact probability that a random structure satisfies ``phi``."""
    dp = _as_desugared(program)
    check_atoms(phi, dp)
    masses, worlds = _query_masses(dp, [phi], max_worlds)
    return QueryResult(_clamp_unit(masses[0]), worlds)


def conditional(program: Program | DesugaredProgram, phi: Formula,
                evidence: Formula, max_worlds: int | None = None) -> QueryResult:
    """Exact conditional probability of ``phi`` given an evidence formula.

    Numerator and denominator come from one shared enumeration. Evidence of
    probability zero raises ZeroEvidenceError."""
    dp = _as_desugared(program)
    check_atoms(phi, dp)
    check_atoms(evidence, dp)
    from .formula import And

    masses, worlds = _query_masses(dp, [And(phi, evidence), evidence], max_worlds)
    joint, mass = masses
    if mass <= 0.0:
        raise ZeroEvidenceError(
            f"evidence '{evidence.to_text()}' has probability zero"
        )
    return QueryResult(_clamp_unit(joint / mass), worlds, _clamp_unit(mass))


@dataclass(frozen=True)
class JointTable:
    """The full joint distribution over the internal propositions.

    Keys of ``cells`` are tuples of booleans aligned with ``columns``."""

    columns: tuple[str, ...]
    cells: Mapping[tuple[bool, ...], float]

    def probability_of(self, assignment: Mapping[str, bool]) -> float:
        key = tuple(bool(assignment[c]) for c in self.columns)
        return self.cells[key]

    def total(self) -> float:
        return math.fsum(self.cells.values())


def joint_table(program: Program, max_propositions: int = 20) -> JointTable:
    """Exact joint table over all internal propositions (at most
    ``max_propositions`` of them; the table is exponential in that count)."""
    dp = _as_desugared(program)
    columns = dp.internal_propositions
    if len(columns) > max_propositions:
        raise TableSizeError(
            f"joint table over {len(columns)} propositions exceeds the limit "
            f"of {max_propositions}"
        )
    order = list(dp.topological_order())
    clauses = list(dp.clauses)
    noise_use: dict[str, int] = {}
    for c in clauses:
        for u in c.noise:
            noise_use[u] = noise_use.get(u, 0) + 1
    cells: dict[tuple[bool, ...], float] = {}
    k = len(columns)
    if any(n > 1 for n in noise_use.values()):
        # shared noise: accumulate the joint by noise enumeration
        random_noise = [u for u in dp.noise_names
                        if 0.0 < dp.noise_probability(u) < 1.0]
        total = 1 << len(random_noise)
        if total > resolved_max_worlds(None):
            raise EnumerationCapError(total, resolved_max_worlds(None))
        for start in range(0, total, 1 << _CHUNK_BITS):
            count = min(1 << _CHUNK_BITS, total - start)
            noise_env = _bit_columns(start, count, random_noise)
            weight = np.ones(count)
            for u in random_noise:
                p = dp.noise_probability(u)
                weight *= np.where(noise_env[u], p, 1.0 - p)
            env: dict[str, np.ndarray] = {}
            by_head = dp.clauses_by_head
            for name in order:
                value = np.zeros(count, dtype=bool)
                for clause in by_head.get(name, ()):
                    sat = np.ones(count, dtype=bool)
                    for lit in clause.literals:
                        sat &= env[lit.name] == lit.positive
                    for u in clause.noise:
                        if u in noise_env:
                            sat &= noise_env[u]
                        elif dp.noise_probability(u) < 1.0:
                            sat &= False
                    value |= sat
                env[name] = value
            codes = np.zeros(count, dtype=np.uint64)
            for j, c in enumerate(columns):
                codes |= env[c].astype(np.uint64) << np.uint64(j)
            for code in np.unique(codes):
                key = tuple(bool((int(code) >> j) & 1) for j in range(k))
                cells[key] = cells.get(key, 0.0) + float(weight[codes == code].sum())
        for code in range(1 << k):
            key = tuple(bool((code >> j) & 1) for j in range(k))
            cells.setdefault(key, 0.0)
        return JointTable(columns, cells)

    by_head: dict[str, list[tuple[LogicalClause, float]]] = {}
    for c in clauses:
        by_head.setdefault(c.head, []).append((c, _clause_fire_probability(dp, c)))
    total = 1 << k
    chunk = 1 << min(k, _CHUNK_BITS)
    for start in range(0, total, chunk):
        count = min(chunk, total - start)
        env = _bit_columns(start, count, columns)
        weight = np.ones(count, dtype=np.float64)
        for name in order:
            miss = np.ones(count, dtype=np.float64)
            for clause, fire in by_head.get(name, ()):
                if fire == 0.0:
                    continue
                sat = np.ones(count, dtype=bool)
                for lit in clause.literals:
                    sat &= env[lit.name] == lit.positive
                miss = np.where(sat, miss * (1.0 - fire), miss)
            weight *= np.where(env[name], 1.0 - miss, miss)
        for offset in range(count):
            key = tuple(bool((start + offset) >> j & 1) for j in range(k))
            cells[key] = float(weight[offset])
    return JointTable(columns, cells)


def _clamp_unit(x: float) -> float:
    if x < 0.0:
        return 0.0
    if x > 1.0:
        return 1.0
    return float(x)
