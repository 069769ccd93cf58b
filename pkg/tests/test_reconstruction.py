import json

import pytest

from causalog import (
    DependencyGraph,
    ExactOracle,
    NonMonotoneTableError,
    OracleAnswer,
    OracleError,
    ReconstructionError,
    StarvedPatternError,
    SuccessTable,
    detect_and_solve,
    joint_table,
    parse_program,
    reconstruct,
    success_table,
)

TR_GRAPH = DependencyGraph.build(
    ["treatment", "recovery"], [("treatment", "recovery")])


class TableOracle:
    """Scripted oracle for exercising the detector directly."""

    def __init__(self, tables, tolerance=1e-9):
        self._tables = tables
        self._tolerance = tolerance

    @property
    def nodes(self):
        return frozenset(self._tables)

    def success_given_parents(self, target, pattern):
        subset = frozenset(n for n, v in pattern.items() if v)
        return OracleAnswer(self._tables[target][subset], self._tolerance)


def make_table(target, parents, values, tol=1e-9):
    keyed = {frozenset(k): v for k, v in values.items()}
    return SuccessTable(target, tuple(parents), keyed,
                        {s: tol for s in keyed})


# --- success tables -----------------------------------------------------------


def test_success_table_from_exact_oracle(boost_program):
    oracle = ExactOracle(boost_program)
    table = success_table(oracle, "recovery", ["treatment"])
    assert table.values[frozenset()] == pytest.approx(0.5, abs=1e-12)
    assert table.values[frozenset({"treatment"})] == pytest.approx(0.7, abs=1e-12)


def test_success_table_parent_cap(boost_program):
    oracle = ExactOracle(boost_program)
    with pytest.raises(ReconstructionError, match="parents"):
        success_table(oracle, "recovery", [f"x{i}" for i in range(13)])


def test_incomplete_table_rejected():
    with pytest.raises(ReconstructionError, match="incomplete"):
        SuccessTable("a", ("b",), {frozenset(): 0.5}, {frozenset(): 1e-9})


# --- detection and solving ------------------------------------------------------


def test_detect_boost_table():
    table = make_table("recovery", ["treatment"],
                       {(): 0.5, ("treatment",): 0.7})
    assert detect_and_solve(table) == [
        (frozenset(), pytest.approx(0.5, abs=1e-9)),
        (frozenset({"treatment"}), pytest.approx(0.4, abs=1e-9)),
    ]


def test_detect_rejects_explained_interaction():
    # 0.44 = 1 - (1-0.3)(1-0.2): the pair pattern is exactly what the two
    # single clauses predict, so no two-cause clause may be introduced.
    table = make_table("c", ["a", "b"],
                       {(): 0.0, ("a",): 0.3, ("b",): 0.2, ("a", "b"): 0.44})
    solved = detect_and_solve(table)
    assert [s for s, _ in solved] == [frozenset({"a"}), frozenset({"b"})]


def test_detect_finds_real_interaction():
    # now the pair pattern exceeds the noisy-OR prediction: genuine clause
    value = 1 - (1 - 0.3) * (1 - 0.2) * (1 - 0.5)
    table = make_table("c", ["a", "b"],
                       {(): 0.0, ("a",): 0.3, ("b",): 0.2, ("a", "b"): value})
    solved = dict(detect_and_solve(table))
    assert solved[frozenset({"a", "b"})] == pytest.approx(0.5, abs=1e-9)


def test_detect_non_monotone_table():
    table = make_table("c", ["a"], {(): 0.5, ("a",): 0.3})
    with pytest.raises(NonMonotoneTableError):
        detect_and_solve(table)


def test_detector_ignores_noise_below_tolerance():
    # the bump at the pair pattern is inside the statistical tolerance, so
    # it must be attributed to noise, not to a clause
    table = make_table("c", ["a", "b"],
                       {(): 0.0, ("a",): 0.3, ("b",): 0.2, ("a", "b"): 0.449},
                       tol=0.02)
    solved = detect_and_solve(table)
    assert frozenset({"a", "b"}) not in dict(solved)


def test_threshold_widens_with_solved_uncertainty():
    # each solved parameter carries ~tol/miss of uncertainty; at the pair
    # pattern those uncertainties add to the raw tolerance, so a bump that a
    # naive comparison would accept is still attributed to noise
    tol = 0.02
    bump = 0.44 + tol + 0.015  # above raw tol, below propagated threshold
    table = make_table("c", ["a", "b"],
                       {(): 0.0, ("a",): 0.3, ("b",): 0.2, ("a", "b"): bump},
                       tol=tol)
    solved = detect_and_solve(table)
    assert frozenset({"a", "b"}) not in dict(solved)


def test_solved_probability_clamped_near_one():
    table = make_table("c", ["a"], {(): 0.0, ("a",): 1.0})
    solved = dict(detect_and_solve(table))
    assert solved[frozenset({"a"})] == pytest.approx(1.0, abs=1e-8)
    assert solved[frozenset({"a"})] < 1.0


# --- whole-program reconstruction ----------------------------------------------


def test_round_trip_from_own_oracle(boost_program):
    result = reconstruct(ExactOracle(boost_program), TR_GRAPH)
    assert result.ok
    want = {(c.effect, c.causes): c.probability for c in boost_program.clauses}
    got = {(c.effect, c.causes): c.probability for c in result.program.clauses}
    assert set(want) == set(got)
    for key, value in want.items():
        assert got[key] == pytest.approx(value, abs=1e-9)


def test_switch_oracle_reconstructs_boost(switch_program, boost_program):
    # the positive member of the distribution's equivalence class is the
    # boost program, so that is what comes back from the switch's oracle
    result = reconstruct(ExactOracle(switch_program), TR_GRAPH)
    assert result.ok
    want = {(c.effect, c.causes): c.probability for c in boost_program.clauses}
    got = {(c.effect, c.causes): c.probability for c in result.program.clauses}
    assert set(want) == set(got)
    for key, value in want.items():
        assert got[key] == pytest.approx(value, abs=1e-9)


def test_reconstruct_requires_acyclic_graph(boost_program):
    loop = DependencyGraph.build(["treatment", "recovery"],
                                 [("treatment", "recovery"),
                                  ("recovery", "treatment")])
    with pytest.raises(ReconstructionError, match="cycle"):
        reconstruct(ExactOracle(boost_program), loop)


def test_reconstruct_requires_oracle_coverage(boost_program):
    wider = DependencyGraph.build(["treatment", "recovery", "zeal"], [])
    with pytest.raises(ReconstructionError, match="zeal"):
        reconstruct(ExactOracle(boost_program), wider)


def test_single_node_graph(boost_program):
    lone = DependencyGraph.build(["treatment"], [])
    result = reconstruct(ExactOracle(boost_program), lone)
    assert result.ok
    assert result.program.to_text() == "0.5 :: treatment.\n"


def test_failures_are_collected_per_node():
    # b is pinned true, so the pattern b=false cannot be conditioned on and
    # the node that depends on it fails; the other nodes still come back
    program = parse_program("1 :: b.\n0.5 :: a.\n0.3 :: c :- b.\n0.2 :: c :- a.\n")
    graph = program.dependency_graph()
    result = reconstruct(ExactOracle(program), graph)
    assert not result.ok
    assert set(result.failures) == {"c"}
    assert isinstance(result.failures["c"], OracleError)
    recovered = {c.effect for c in result.program.clauses}
    assert recovered == {"a", "b"}


def test_starved_patterns_aggregate():
    class Starver:
        nodes = frozenset({"a", "t"})

        def success_given_parents(self, target, pattern):
            if any(pattern.values()):
                raise StarvedPatternError(
                    "pattern too rare", target=target,
                    patterns=((frozenset(k for k, v in pattern.items() if v), 3),))
            return OracleAnswer(0.5, 1e-3)

    with pytest.raises(StarvedPatternError) as err:
        success_table(Starver(), "t", ["a", "b"])
    assert err.value.target == "t"
    assert len(err.value.patterns) == 3  # {a}, {b}, {a,b}


def test_report_json_shape(boost_program):
    result = reconstruct(ExactOracle(boost_program), TR_GRAPH)
    payload = json.loads(result.to_json())
    assert payload["ok"] is True
    assert set(payload) == {"ok", "program", "nodes"}
    recovery = payload["nodes"]["recovery"]
    assert recovery["parents"] == ["treatment"]
    assert {tuple(c["causes"]) for c in recovery["clauses"]} == {(), ("treatment",)}
    patterns = [r["pattern"] for r in recovery["residuals"]]
    assert patterns == [[], ["treatment"]]
    assert all(r["accepted"] for r in recovery["residuals"])


def test_reconstructed_program_matches_oracle_program_distribution(boost_program):
    result = reconstruct(ExactOracle(boost_program), TR_GRAPH)
    ours = joint_table(result.program)
    theirs = joint_table(boost_program)
    for t in (False, True):
        for r in (False, True):
            key = {"treatment": t, "recovery": r}
            assert ours.probability_of(key) == pytest.approx(
                theirs.probability_of(key), abs=1e-12)
