import pytest

from cascor.sat import (
    Clause,
    Cnf,
    DimacsError,
    GenerationError,
    Literal,
    MixedSatSpec,
    emit_dimacs,
    evaluate,
    generate_mixed_sat,
    parse_dimacs,
)

from conftest import brute_force_solutions, random_small_cnf


def test_parse_basic():
    cnf = parse_dimacs("p cnf 3 2\n1 -2 0\n2 3 0\n")
    assert cnf.num_vars == 3
    assert cnf.clauses == (Clause.of(1, -2), Clause.of(2, 3))


def test_parse_comments_and_multiline_clauses():
    text = "c a comment\nc another\np cnf 4 2\n1 2\n-3 0\n4 0\n"
    cnf = parse_dimacs(text)
    assert cnf.clauses == (Clause.of(1, 2, -3), Clause.of(4,))


@pytest.mark.parametrize(
    "text",
    [
        "p cnf 2 1\n0\n",  # empty clause
        "p cnf 2 1\n1 3 0\n",  # var out of range
        "1 2 0\n",  # missing header
        "p cnf 2 1\np cnf 2 1\n1 0\n",  # duplicate header
        "p cnf 2 2\n1 0\n",  # clause count mismatch
        "p cnf 2 1\n1 x 0\n",  # non-integer token
        "p cnf 2 1\n1 2\n",  # unterminated clause
        "p cnf 2 1\n1 1 0\n",  # repeated variable
    ],
)
def test_parse_errors(text):
    with pytest.raises(DimacsError):
        parse_dimacs(text)


def test_emit_single_clause():
    assert emit_dimacs(Cnf.of(1, [[1]])) == "p cnf 1 1\n1 0\n"


def test_emit_no_clauses():
    assert emit_dimacs(Cnf(2)) == "p cnf 2 0\n"


def test_roundtrip_random(rng):
    for _ in range(50):
        cnf = random_small_cnf(rng, n=int(rng.integers(1, 9)), m=int(rng.integers(0, 10)))
        assert parse_dimacs(emit_dimacs(cnf)) == cnf


def test_evaluate_examples():
    cnf = Cnf.of(3, [[1, -2], [2, 3]])
    assert evaluate(cnf, (True, True, True)) is True
    assert evaluate(cnf, (False, True, False)) is False
    assert evaluate(Cnf(3), (False, False, False)) is True  # vacuous conjunction


def test_evaluate_length_mismatch():
    with pytest.raises(ValueError):
        evaluate(Cnf.of(2, [[1, 2]]), (True,))


def test_evaluate_agrees_with_truth_table(rng):
    for _ in range(30):
        n = int(rng.integers(1, 5))
        cnf = random_small_cnf(rng, n=n, m=int(rng.integers(1, 7)))
        expected = brute_force_solutions(cnf)
        for mask in range(1 << n):
            a = tuple(bool((mask >> i) & 1) for i in range(n))
            assert evaluate(cnf, a) == (a in expected)


def test_literal_and_clause_invariants():
    with pytest.raises(ValueError):
        Literal(0)
    with pytest.raises(ValueError):
        Clause(())
    with pytest.raises(ValueError):
        Clause.of(1, -1)  # same variable twice
    with pytest.raises(ValueError):
        Cnf.of(1, [[2]])


def test_spec_validation():
    with pytest.raises(ValueError):
        MixedSatSpec(4, 2, {}, seed=1, solution_cap=4)
    with pytest.raises(ValueError):
        MixedSatSpec(4, 2, {5: 1.0}, seed=1, solution_cap=4)  # k > n
    with pytest.raises(ValueError):
        MixedSatSpec(4, 2, {2: 0.0}, seed=1, solution_cap=4)  # zero total weight
    with pytest.raises(ValueError):
        MixedSatSpec(4, 2, {2: 1.0}, seed=1, solution_cap=0)


def test_spec_json_roundtrip():
    spec = MixedSatSpec(6, 4, {2: 1.0, 3: 2.0}, seed=11, solution_cap=64)
    assert MixedSatSpec.from_json_text(
        __import__("json").dumps(spec.to_json())
    ) == spec


def test_generation_deterministic():
    spec = MixedSatSpec(6, 4, {2: 1.0, 3: 1.0}, seed=123, solution_cap=64)
    assert generate_mixed_sat(spec) == generate_mixed_sat(spec)


def test_generation_length_support():
    spec = MixedSatSpec(8, 6, {2: 0.5, 4: 0.5}, seed=7, solution_cap=256)
    cnf = generate_mixed_sat(spec)
    assert all(len(c) in (2, 4) for c in cnf.clauses)
    for clause in cnf.clauses:
        variables = [lit.var for lit in clause.literals]
        assert len(set(variables)) == len(variables)


def test_generation_respects_cap():
    spec = MixedSatSpec(4, 2, {2: 1.0, 3: 1.0}, seed=5, solution_cap=16)
    cnf = generate_mixed_sat(spec)
    count = len(brute_force_solutions(cnf))
    assert 1 <= count <= 16


def test_generation_retry_exhaustion():
    # Two clauses over 2 vars cannot pin down to a single solution reliably;
    # force failure with an unreachable one-solution cap on a tautology-rich family.
    spec = MixedSatSpec(6, 1, {2: 1.0}, seed=3, solution_cap=1)
    with pytest.raises(GenerationError):
        generate_mixed_sat(spec, max_attempts=20)
