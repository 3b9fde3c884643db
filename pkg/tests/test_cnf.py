import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fccgrid.balls import b_ball, tetra_D0
from fccgrid.cnf import (
    CNF,
    DimacsFormatError,
    brute_force_sat,
    decode_assignment,
    encode,
    export_dimacs,
    read_dimacs,
    replay_dimacs,
    solve_external,
)
from fccgrid.colorings import explicit, verify_window
from fccgrid.lattice import Region, box_region
from fccgrid.search import Distinct, Equal, SearchProblem, k_colorable


def test_tetra_encoding_is_bit_exact():
    cnf = encode(SearchProblem(tetra_D0(), 1, 3, anchor=None))
    lines = [l for l in cnf.text().splitlines() if not l.startswith("c ")]
    # 4 sites x (1 ALO + 3 AMO) + 6 edges x 3 colors
    assert lines[0] == "p cnf 12 34"
    assert lines[1:5] == ["1 2 3 0", "-1 -2 0", "-1 -3 0", "-2 -3 0"]
    assert lines[5] == "4 5 6 0"
    assert lines[17:20] == ["-1 -4 0", "-2 -5 0", "-3 -6 0"]
    assert len(lines) == 35


def test_anchor_units_follow_the_edges():
    cnf = encode(SearchProblem(tetra_D0(), 1, 4))
    assert cnf.clauses[-4:] == [(1,), (6,), (11,), (16,)]
    too_small = encode(SearchProblem(tetra_D0(), 1, 3))
    assert () in too_small.clauses


def test_variable_count_of_the_tetra_ball():
    cnf = encode(SearchProblem(b_ball(1), 3, 28, anchor=None))
    assert cnf.nvars == 784
    # the tetra ball is a clique: 378 edges
    assert len(cnf.clauses) == 28 * (1 + 28 * 27 // 2) + 378 * 28


def test_round_trip_through_a_file(tmp_path):
    problem = SearchProblem(tetra_D0(), 1, 4)
    cnf = export_dimacs(problem, tmp_path / "d0.cnf")
    back = read_dimacs(tmp_path / "d0.cnf")
    assert (back.nvars, back.clauses) == (cnf.nvars, cnf.clauses)
    assert back.text() == cnf.text()


@pytest.mark.parametrize("text, message", [
    ("1 2 0\n", "before header"),
    ("p cnf 2 1\n1 3 0\n", "variable 3"),
    ("p cnf 2 2\n1 2 0\n", "found 1"),
    ("p cnf 2 1\n1 2\n", "terminated"),
    ("p cnf 2 1\n1 x 0\n", "integer"),
    ("p cnf two 1\n", "header"),
    ("c nothing\n", "missing header"),
])
def test_read_dimacs_rejects_bad_input(text, message):
    with pytest.raises(DimacsFormatError, match=message):
        read_dimacs(text)


def test_replay_of_the_tetra_instances():
    unsat = replay_dimacs(encode(SearchProblem(tetra_D0(), 1, 3)), 3)
    sat = replay_dimacs(encode(SearchProblem(tetra_D0(), 1, 4)), 4)
    assert (unsat.verdict, sat.verdict) == ("UNSAT", "SAT")
    assert sorted(sat.colors) == [0, 1, 2, 3]


def test_replay_rejects_foreign_clauses():
    with pytest.raises(DimacsFormatError):
        replay_dimacs(CNF(4, [(1, 2), (3, 4), (1, 3, 4)]), 2)
    with pytest.raises(DimacsFormatError):
        replay_dimacs(CNF(5, [(1,)]), 2)
    with pytest.raises(DimacsFormatError):
        replay_dimacs(CNF(4, [(1, 2)]), 2)  # the second site has no ALO clause


def test_decoded_models_are_proper_colorings():
    region = box_region(-2, 2, -2, 2, 0, 1)
    problem = SearchProblem(region, 1, 4)
    cnf = encode(problem)
    model = solve_external(cnf) if _have_pysat() else None
    if model is None:
        cert = k_colorable(problem)
        model = [i * 4 + cert.witness(s) + 1 for i, s in enumerate(region)]
    assert cnf.satisfied_by(model)
    coloring = decode_assignment(model, region, 4)
    assert verify_window(explicit(coloring), region, 1).valid


def _have_pysat():
    try:
        import pysat  # noqa: F401
    except ImportError:
        return False
    return True


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_engine_replay_and_brute_force_agree(seed):
    rng = random.Random(seed)
    pool = box_region(-4, 4, -4, 4, 0, 1).sites
    k = rng.randint(1, 3)
    n = rng.randint(2, 7 if k == 3 else 10)
    region = Region(tuple(rng.sample(pool, n)))
    d = rng.randint(1, 2)
    extras = []
    for _ in range(rng.randint(0, 2)):
        a, b = rng.sample(region.sites, 2)
        extras.append(rng.choice([Equal, Distinct])(a, b))
    problem = SearchProblem(region, d, k, anchor=None, extra_constraints=extras)
    expected = k_colorable(problem).colorable
    cnf = encode(problem)
    assert (replay_dimacs(cnf, k).satisfiable) == expected
    if cnf.nvars <= 22:
        model = brute_force_sat(cnf)
        assert (model is not None) == expected
        if model is not None:
            assert cnf.satisfied_by(model)


def test_brute_force_limits():
    with pytest.raises(ValueError):
        brute_force_sat(CNF(40, [(1,)]))
    assert brute_force_sat(CNF(1, [(1,), (-1,)])) is None
