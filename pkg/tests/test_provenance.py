"""The bound programs must be re-derivable from the instance modules.

The ratio constraints of the portfolio program are the symbolic n -> infinity
limits of the family size formulas; the integral program's rows are prefix
sums of the per-edge probability expressions read off the two instance
options.
"""

from fracmatch.golden import Rat
from fracmatch.instances import integral_hard_instance, minindex_family1, minindex_family2
from fracmatch.lp import build_integral_deg3_lp, build_minindex_lp
from fracmatch.minindex import minindex_new, minindex_run

UNIFORM4 = [Rat(1, 4)] * 4


def fit_line(samples):
    """Fit k*n + d through integer samples {n: value}; verify every point."""
    (n1, v1), (n2, v2) = list(samples.items())[:2]
    k = Rat(v2 - v1, n2 - n1)
    d = v1 - k * n1
    assert all(k * n + d == v for n, v in samples.items())
    return k, d


def family1_size_lines():
    sizes_by_n = {}
    for n in (2, 5, 9):
        state = minindex_new(4, UNIFORM4)
        minindex_run(state, minindex_family1(n).arrivals)
        sizes_by_n[n] = state.sizes()
    return [
        fit_line({n: sizes[i] for n, sizes in sizes_by_n.items()})
        for i in range(4)
    ]


def test_family1_limits_match_gadget_constraint():
    # optimum is 6n + 2, so the limit of (k*n + d)/(6n + 2) is k/6
    lines = family1_size_lines()
    limits = [Rat(k, 6) for k, _ in lines]
    lp = build_minindex_lp()
    con = next(c for c in lp.constraints if c.name == "gadget_family")
    assert limits == [con.coeffs[f"p{i}"] for i in range(1, 5)]
    assert con.coeffs["gamma"] == -1 and con.rel == ">=" and con.rhs == 0


def test_family2_limits_match_reordered_constraint():
    sizes_by_n = {}
    for n in (4, 8, 12):
        state = minindex_new(3, [Rat(1, 3)] * 3)
        minindex_run(state, minindex_family2(n).arrivals)
        sizes_by_n[n] = state.sizes()
    lines = [
        fit_line({n: sizes[i] for n, sizes in sizes_by_n.items()}) for i in range(3)
    ]
    # optimum is 2n - 2; the slope ratio k/2 is the limiting coefficient
    limits = [Rat(k, 2) for k, _ in lines]
    lp = build_minindex_lp()
    con = next(c for c in lp.constraints if c.name == "reordered_family")
    assert limits == [con.coeffs[f"p{i}"] for i in range(1, 4)]
    assert "p4" not in con.coeffs


def test_tiny_instances_give_first_two_constraints():
    lp = build_minindex_lp()
    # one edge: it lands in M1, optimum 1
    state = minindex_new(4, UNIFORM4)
    minindex_run(state, [("a", "b")])
    assert state.sizes() == (1, 0, 0, 0)
    con = next(c for c in lp.constraints if c.name == "single_round")
    assert con.coeffs == {"p1": Rat(1), "gamma": Rat(-1)}
    # two rounds: sizes (1, 2), optimum 2 -> p1/2 + p2 >= gamma
    state = minindex_new(4, UNIFORM4)
    from fracmatch.instances import consistent_instance

    minindex_run(state, consistent_instance(2).arrivals)
    assert state.sizes() == (1, 2, 0, 0)
    con = next(c for c in lp.constraints if c.name == "two_rounds")
    assert con.coeffs == {"p1": Rat(1, 2), "p2": Rat(1), "gamma": Rat(-1)}


# -- integral program provenance ---------------------------------------------


def expr(**terms):
    out = {"const": Rat(terms.pop("const", 0))}
    out.update({k: Rat(v) for k, v in terms.items()})
    return out


def add(a, b):
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, Rat(0)) + v
    return out


def first_option_expressions():
    one_minus_12 = expr(const=1, x1=-1, x2=-1)
    return {
        ("u1", "u2"): expr(x1=1),
        ("d1", "d2"): expr(x1=1),
        ("u1", "u3"): expr(x2=1),
        ("d1", "d3"): expr(x2=1),
        ("u1", "us_pendant"): one_minus_12,
        ("u3", "u2"): one_minus_12,
        ("d1", "ds_pendant"): one_minus_12,
        ("d3", "d2"): one_minus_12,
    }


def second_option_expressions():
    return {
        ("u1", "u2"): expr(x1=1),
        ("d1", "d2"): expr(x1=1),
        ("u1", "u3"): expr(x2=1),
        ("d1", "d3"): expr(x2=1),
        ("u2", "u4"): expr(x3u=1),
        ("d2", "d4"): expr(x3d=1),
        ("u2", "us1"): expr(const=1, x1=-1, x3u=-1),
        ("d2", "ds1"): expr(const=1, x1=-1, x3d=-1),
        ("u4", "d4"): expr(x4=1),
        ("u4", "us2"): expr(const=1, x3u=-1, x4=-1),
        ("d4", "ds2"): expr(const=1, x3d=-1, x4=-1),
    }


def assert_prefix_constraint(con, expressions, stream, upto, mu):
    total = expr()
    for u, v in stream.arrivals[:upto]:
        total = add(total, expressions[(u, v)])
    expected = {k: v for k, v in total.items() if k != "const" and v != 0}
    expected["gamma"] = Rat(-mu)
    assert con.rel == ">="
    assert dict(con.coeffs) == expected
    assert con.rhs == -total["const"]


def test_integral_rows_are_prefix_sums_of_option_expressions():
    lp = build_integral_deg3_lp()
    by_name = {c.name: c for c in lp.constraints}
    first = integral_hard_instance("first")
    second = integral_hard_instance("second")
    f_expr = first_option_expressions()
    s_expr = second_option_expressions()

    assert_prefix_constraint(by_name["round1"], f_expr, first, 2, 2)
    assert_prefix_constraint(by_name["first_option"], f_expr, first, 8, 4)
    assert_prefix_constraint(by_name["second_solid"], s_expr, second, 6, 4)
    assert_prefix_constraint(by_name["second_wavy"], s_expr, second, 9, 5)
    assert_prefix_constraint(by_name["second_dashed"], s_expr, second, 11, 6)


def test_integral_caps_are_bound_nonnegativity():
    # each boxed upper-bound expression must be kept nonnegative by a row
    lp = build_integral_deg3_lp()
    by_name = {c.name: c for c in lp.constraints}
    bounds = {
        "center_capacity": expr(const=1, x1=-1, x2=-1),
        "upper_wavy_cap": expr(const=1, x1=-1, x3u=-1),
        "lower_wavy_cap": expr(const=1, x1=-1, x3d=-1),
        "upper_dashed_cap": expr(const=1, x3u=-1, x4=-1),
        "lower_dashed_cap": expr(const=1, x3d=-1, x4=-1),
    }
    for name, bound in bounds.items():
        con = by_name[name]
        assert con.rel == "<="
        vars_only = {k: -v for k, v in bound.items() if k != "const"}
        assert dict(con.coeffs) == vars_only
        assert con.rhs == bound["const"]
