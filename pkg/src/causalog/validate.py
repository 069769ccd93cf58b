"""Structural checks on programs.

Three properties are reported:

* acyclic: the dependency graph has no directed cycle,
* positive: no clause body contains a negated atom,
* proper normal form: every probability lies strictly between 0 and 1 and
  every sink of the dependency graph has an unconditional clause. Duplicate
  effect/body pairs also break the form but cannot be constructed, the model
  layer rejects them outright.

Reconstruction guarantees hold for acyclic positive programs in proper normal
form. The sink rule matters there: a sink without an unconditional clause can
encode distributions whose reconstruction is ambiguous at the margins. When
``strict`` is false the sink check is still reported in the diagnostics but
does not fail the flag, which is convenient when inspecting derived programs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .model import Program


@dataclass(frozen=True)
class ValidationReport:
    acyclic: bool
    positive: bool
    proper_normal_form: bool
    diagnostics: tuple[str, ...]

    @property
    def all_ok(self) -> bool:
        return self.acyclic and self.positive and self.proper_normal_form

    def to_json_dict(self) -> dict:
        return {
            "acyclic": self.acyclic,
            "positive": self.positive,
            "proper_normal_form": self.proper_normal_form,
            "diagnostics": list(self.diagnostics),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)

    def to_text(self) -> str:
        lines = [
            f"acyclic: {'yes' if self.acyclic else 'no'}",
            f"positive: {'yes' if self.positive else 'no'}",
            f"proper normal form: {'yes' if self.proper_normal_form else 'no'}",
        ]
        for d in self.diagnostics:
            lines.append(f"  note: {d}")
        return "\n".join(lines) + "\n"


def validate(program: Program, strict: bool = False) -> ValidationReport:
    """Check the three structural properties; findings never raise."""
    diagnostics: list[str] = []
    graph = program.dependency_graph()

    cycle = graph.find_cycle()
    acyclic = cycle is None
    if cycle:
        diagnostics.append("cycle: " + " -> ".join(cycle))

    positive = True
    for clause in program.clauses:
        negs = sorted(lit.name for lit in clause.causes if not lit.positive)
        if negs:
            positive = False
            diagnostics.append(
                f"clause '{clause.text()}' negates {', '.join(negs)}"
            )

    proper = True
    for clause in program.clauses:
        if not (0.0 < clause.probability < 1.0):
            proper = False
            diagnostics.append(
                f"clause '{clause.text()}' has boundary probability "
                f"{clause.probability}"
            )

    unconditional = {c.effect for c in program.clauses if not c.causes}
    for sink in sorted(graph.sinks()):
        if sink not in unconditional:
            diagnostics.append(f"sink {sink} has no unconditional clause")
            if strict:
                proper = False

    return ValidationReport(acyclic, positive, proper, tuple(diagnostics))
