from fractions import Fraction

import pytest

from fracmatch.golden import Rat
from fracmatch.lp import (
    GE,
    LE,
    LinearProgram,
    build_integral_deg3_lp,
    build_minindex_lp,
    check_assignment,
    enumerate_vertices,
    lp_text,
    simplex_max,
)


def make_lp(variables, objective, lower=None, upper=None):
    return LinearProgram(
        name="test",
        variables=variables,
        objective=objective,
        lower=lower or {},
        upper=upper or {},
    )


def test_single_bound():
    lp = make_lp(["g"], {"g": 1})
    lp.add("cap", {"g": 1}, LE, 1)
    sol = simplex_max(lp)
    assert sol.status == "optimal"
    assert sol.value == 1


def test_chained_bound_with_free_objective_var():
    lp = make_lp(["g", "x"], {"g": 1}, lower={"g": None})
    lp.add("g_below_x", {"g": 1, "x": -1}, LE, 0)
    lp.add("x_cap", {"x": 1}, LE, Rat(3, 4))
    sol = simplex_max(lp)
    assert sol.status == "optimal"
    assert sol.value == Rat(3, 4)
    assert sol.assignment["x"] == Rat(3, 4)


def test_unbounded():
    lp = make_lp(["x"], {"x": 1})
    lp.add("floor", {"x": 1}, GE, 2)
    assert simplex_max(lp).status == "unbounded"


def test_infeasible():
    lp = make_lp(["x"], {"x": 1}, upper={"x": 1})
    lp.add("too_high", {"x": 1}, GE, 2)
    assert simplex_max(lp).status == "infeasible"


def test_equality_and_negative_rhs():
    lp = make_lp(["x", "y"], {"x": 1, "y": 1}, upper={"x": 5, "y": 5})
    lp.add("link", {"x": 1, "y": -1}, "==", -2)
    sol = simplex_max(lp)
    assert sol.status == "optimal"
    assert sol.value == 8
    assert sol.assignment == {"x": 3, "y": 5}


def test_free_variable_can_go_negative():
    lp = make_lp(["x"], {"x": -1}, lower={"x": None})
    lp.add("floor", {"x": 1}, GE, -7)
    sol = simplex_max(lp)
    assert sol.status == "optimal"
    assert sol.value == 7
    assert sol.assignment["x"] == -7


def test_degenerate_cycling_guard():
    # classic Beale-style degeneracy; Bland's rule must terminate
    lp = make_lp(
        ["x1", "x2", "x3", "x4"],
        {"x1": Fraction(3, 4), "x2": -150, "x3": Fraction(1, 50), "x4": -6},
    )
    lp.add("r1", {"x1": Fraction(1, 4), "x2": -60, "x3": Fraction(-1, 25), "x4": 9}, LE, 0)
    lp.add("r2", {"x1": Fraction(1, 2), "x2": -90, "x3": Fraction(-1, 50), "x4": 3}, LE, 0)
    lp.add("r3", {"x3": 1}, LE, 1)
    sol = simplex_max(lp)
    assert sol.status == "optimal"
    assert sol.value == Fraction(1, 20)


def test_solution_is_exactly_feasible():
    lp = build_integral_deg3_lp()
    sol = simplex_max(lp)
    assert sol.status == "optimal"
    assert check_assignment(lp, sol.assignment)


def test_minindex_lp_optimum():
    lp = build_minindex_lp()
    sol = simplex_max(lp)
    assert sol.status == "optimal"
    assert sol.value == Rat(5, 9)
    witness = {
        "gamma": Rat(5, 9),
        "p1": Rat(5, 9),
        "p2": Rat(3, 9),
        "p3": Rat(1, 9),
        "p4": Rat(0),
    }
    assert check_assignment(lp, witness)
    assert sol.assignment == witness


def test_minindex_lp_relaxation():
    lp = build_minindex_lp()
    lp.constraints = [c for c in lp.constraints if c.name != "gadget_family"]
    sol = simplex_max(lp)
    assert sol.status == "optimal"
    assert sol.value >= Rat(5, 9)


def test_integral_lp_optimum_decimal():
    sol = simplex_max(build_integral_deg3_lp())
    assert sol.status == "optimal"
    assert abs(Fraction(int(sol.value.numerator), int(sol.value.denominator)) - Fraction(58065, 100000)) <= Fraction(1, 100000)


def test_enumeration_confirms_minindex():
    lp = build_minindex_lp()
    best, assignment, count = enumerate_vertices(lp)
    assert best == Rat(5, 9)
    assert count > 0
    assert check_assignment(lp, assignment)


def test_enumeration_confirms_integral():
    lp = build_integral_deg3_lp()
    sol = simplex_max(lp)
    best, assignment, _ = enumerate_vertices(lp)
    assert best == sol.value
    assert check_assignment(lp, assignment)


def test_variable_count_integral():
    lp = build_integral_deg3_lp()
    assert len(lp.variables) == 6
    assert len(lp.constraints) == 10  # box bounds live in the bounds table


def test_text_dump_roundtrippable_tokens():
    text = lp_text(build_minindex_lp())
    assert "maximize" in text and "gamma" in text and "5/9" not in text
    assert "total_probability" in text


def test_undeclared_variable_rejected():
    lp = make_lp(["x"], {"x": 1})
    with pytest.raises(ValueError):
        lp.add("bad", {"zz": 1}, LE, 1)
