"""Exact rational linear programming and the upper-bound program builders.

A small two-phase simplex over exact rationals (Bland's rule, so no cycling)
solves the three programs that cap the achievable guarantees: the
least-index-portfolio program with optimum 5/9, the integral-matching
program at maximum degree three, and the batch program for the
maximum-degree-four instance.  A brute-force vertex enumeration double-checks
the small programs.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .golden import Rat

LE, GE, EQ = "<=", ">=", "=="


@dataclass
class Constraint:
    name: str
    coeffs: dict[str, object]
    rel: str
    rhs: object

    def __post_init__(self):
        self.coeffs = {v: Rat(c) for v, c in self.coeffs.items()}
        self.rhs = Rat(self.rhs)
        if self.rel not in (LE, GE, EQ):
            raise ValueError(f"bad relation {self.rel!r}")


@dataclass
class LinearProgram:
    name: str
    variables: list[str]
    objective: dict[str, object]
    constraints: list[Constraint] = field(default_factory=list)
    lower: dict[str, object] = field(default_factory=dict)  # missing -> 0, None -> free
    upper: dict[str, object] = field(default_factory=dict)  # missing -> unbounded

    def __post_init__(self):
        self.objective = {v: Rat(c) for v, c in self.objective.items()}
        self.lower = {v: (None if b is None else Rat(b)) for v, b in self.lower.items()}
        self.upper = {v: (None if b is None else Rat(b)) for v, b in self.upper.items()}
        declared = set(self.variables)
        for con in self.constraints:
            unknown = set(con.coeffs) - declared
            if unknown:
                raise ValueError(f"constraint {con.name} uses undeclared {sorted(unknown)}")

    def add(self, name: str, coeffs: dict, rel: str, rhs) -> None:
        con = Constraint(name, coeffs, rel, rhs)
        unknown = set(con.coeffs) - set(self.variables)
        if unknown:
            raise ValueError(f"constraint {name} uses undeclared {sorted(unknown)}")
        self.constraints.append(con)

    def bound_of(self, var: str):
        return self.lower.get(var, Rat(0)), self.upper.get(var, None)


@dataclass
class LpSolution:
    status: str  # optimal | unbounded | infeasible
    value: object | None
    assignment: dict[str, object]


def _pivot(rows, obj, basis, r, c):
    pivot = rows[r][c]
    rows[r] = [x / pivot for x in rows[r]]
    prow = rows[r]
    for i, row in enumerate(rows):
        if i != r and row[c] != 0:
            factor = row[c]
            rows[i] = [x - factor * y for x, y in zip(row, prow)]
    if obj[c] != 0:
        factor = obj[c]
        for j in range(len(obj)):
            obj[j] -= factor * prow[j]
    basis[r] = c


def _reduced_costs(rows, basis, cost, width):
    obj = [Rat(0)] * width
    for j in range(width):
        obj[j] = cost[j] if j < len(cost) else Rat(0)
    # subtract c_B * row for each basic variable
    for i, b in enumerate(basis):
        cb = cost[b] if b < len(cost) else Rat(0)
        if cb != 0:
            for j in range(width):
                obj[j] -= cb * rows[i][j]
    return obj


def _run_simplex(rows, obj, basis, allowed):
    """Bland's rule max-simplex loop; obj holds negated reduced costs layout.

    Entering column: smallest index with positive reduced cost (obj[c] < 0 in
    the maintained representation below means cost row value; see caller).
    """
    m = len(rows)
    width = len(rows[0])
    while True:
        enter = -1
        for j in range(width - 1):
            if j in allowed and obj[j] < 0:
                enter = j
                break
        if enter < 0:
            return "optimal"
        leave = -1
        best = None
        for i in range(m):
            a = rows[i][enter]
            if a > 0:
                ratio = rows[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave < 0:
            return "unbounded"
        _pivot(rows, obj, basis, leave, enter)


def simplex_max(lp: LinearProgram) -> LpSolution:
    """Exact optimum of a finite LP via two-phase simplex with Bland's rule."""
    # 1. rewrite variables to nonnegative internal columns
    columns: list[tuple[str, int]] = []  # (var, +1/-1) pairs; value = sum sign*col
    shift: dict[str, object] = {}
    for var in lp.variables:
        lo, up = lp.bound_of(var)
        if lo is None:
            columns.append((var, 1))
            columns.append((var, -1))
            shift[var] = Rat(0)
        else:
            columns.append((var, 1))
            shift[var] = lo
    col_index: dict[tuple[str, int], int] = {pair: i for i, pair in enumerate(columns)}
    nvars = len(columns)

    def expand(coeffs: dict) -> list:
        row = [Rat(0)] * nvars
        for var, coeff in coeffs.items():
            row[col_index[(var, 1)]] += coeff
            if (var, -1) in col_index:
                row[col_index[(var, -1)]] -= coeff
        return row

    raw_rows: list[tuple[list, str, object]] = []
    for con in lp.constraints:
        adjust = sum(
            (coeff * shift[var] for var, coeff in con.coeffs.items()), Rat(0)
        )
        raw_rows.append((expand(con.coeffs), con.rel, con.rhs - adjust))
    for var in lp.variables:
        lo, up = lp.bound_of(var)
        if up is not None:
            raw_rows.append((expand({var: Rat(1)}), LE, up - (lo if lo is not None else Rat(0))))

    # 2. standard form with slacks and artificials
    m = len(raw_rows)
    slack_cols = sum(1 for _, rel, _ in raw_rows if rel != EQ)
    width = nvars + slack_cols + m + 1  # worst case one artificial per row
    rows: list[list] = []
    basis: list[int] = []
    artificial: set[int] = set()
    next_slack = nvars
    next_art = nvars + slack_cols
    for coeffs, rel, rhs in raw_rows:
        row = list(coeffs) + [Rat(0)] * (width - nvars - 1)
        if rhs < 0:
            row = [-x for x in row]
            rhs = -rhs
            rel = {LE: GE, GE: LE, EQ: EQ}[rel]
        if rel == LE:
            row[next_slack] = Rat(1)
            basic = next_slack
            next_slack += 1
        elif rel == GE:
            row[next_slack] = Rat(-1)
            next_slack += 1
            row[next_art] = Rat(1)
            basic = next_art
            artificial.add(next_art)
            next_art += 1
        else:
            row[next_art] = Rat(1)
            basic = next_art
            artificial.add(next_art)
            next_art += 1
        if rel == GE and rhs == 0:
            # surplus alone could serve, but keep the artificial for uniformity
            pass
        row.append(rhs)
        rows.append(row)
        basis.append(basic)

    total_cols = width - 1

    # phase 1: maximize -sum(artificials)
    if artificial:
        cost1 = [Rat(0)] * total_cols
        for j in artificial:
            cost1[j] = Rat(-1)
        obj = _neg_reduced(rows, basis, cost1, width)
        allowed = set(range(total_cols))
        status = _run_simplex(rows, obj, basis, allowed)
        assert status == "optimal", "phase 1 cannot be unbounded"
        if obj[-1] != 0:  # maximized value of -sum(art) stored negated
            return LpSolution("infeasible", None, {})
        # drive remaining artificials out of the basis
        for i in range(m):
            if basis[i] in artificial:
                target = next(
                    (
                        j
                        for j in range(total_cols)
                        if j not in artificial and rows[i][j] != 0
                    ),
                    None,
                )
                if target is not None:
                    _pivot(rows, obj, basis, i, target)

    # phase 2
    cost2 = [Rat(0)] * total_cols
    for var, coeff in lp.objective.items():
        cost2[col_index[(var, 1)]] += coeff
        if (var, -1) in col_index:
            cost2[col_index[(var, -1)]] -= coeff
    obj = _neg_reduced(rows, basis, cost2, width)
    allowed = set(range(total_cols)) - artificial
    status = _run_simplex(rows, obj, basis, allowed)
    if status == "unbounded":
        return LpSolution("unbounded", None, {})

    values = [Rat(0)] * total_cols
    for i, b in enumerate(basis):
        values[b] = rows[i][-1]
    assignment: dict[str, object] = {}
    for var in lp.variables:
        val = values[col_index[(var, 1)]] + shift[var]
        if (var, -1) in col_index:
            val -= values[col_index[(var, -1)]]
        assignment[var] = val
    value = sum(
        (coeff * assignment[var] for var, coeff in lp.objective.items()), Rat(0)
    )
    return LpSolution("optimal", value, assignment)


def _neg_reduced(rows, basis, cost, width):
    """Cost row in 'minimize' orientation: entry < 0 means improving column."""
    obj = [-cost[j] for j in range(width - 1)] + [Rat(0)]
    for i, b in enumerate(basis):
        cb = cost[b]
        if cb != 0:
            for j in range(width):
                obj[j] += cb * rows[i][j]
    # keep objective value in the last slot (negated bookkeeping cancels out)
    obj[-1] = sum((cost[b] * rows[i][-1] for i, b in enumerate(basis)), Rat(0))
    return obj


def check_assignment(lp: LinearProgram, assignment: dict) -> bool:
    """Exact feasibility of an assignment for every constraint and bound."""
    for con in lp.constraints:
        lhs = sum((c * assignment[v] for v, c in con.coeffs.items()), Rat(0))
        if con.rel == LE and lhs > con.rhs:
            return False
        if con.rel == GE and lhs < con.rhs:
            return False
        if con.rel == EQ and lhs != con.rhs:
            return False
    for var in lp.variables:
        lo, up = lp.bound_of(var)
        if lo is not None and assignment[var] < lo:
            return False
        if up is not None and assignment[var] > up:
            return False
    return True


# -- brute-force vertex enumeration (small programs only) --------------------


def _halfspace_rows(lp: LinearProgram):
    """All constraints and finite bounds in `a . x <= b` normal form."""
    n = len(lp.variables)
    index = {v: i for i, v in enumerate(lp.variables)}
    rows: list[tuple[list, object]] = []
    equalities: list[int] = []
    for con in lp.constraints:
        vec = [Rat(0)] * n
        for var, coeff in con.coeffs.items():
            vec[index[var]] = coeff
        if con.rel in (LE, EQ):
            rows.append((vec, con.rhs))
        if con.rel in (GE, EQ):
            rows.append(([-c for c in vec], -con.rhs))
        if con.rel == EQ:
            equalities.extend([len(rows) - 2, len(rows) - 1])
    for var in lp.variables:
        lo, up = lp.bound_of(var)
        i = index[var]
        if lo is not None:
            vec = [Rat(0)] * n
            vec[i] = Rat(-1)
            rows.append((vec, -lo))
        if up is not None:
            vec = [Rat(0)] * n
            vec[i] = Rat(1)
            rows.append((vec, up))
    return rows, equalities


def _solve_exact(rows, rhs):
    """Gaussian elimination over exact rationals; None if singular."""
    n = len(rhs)
    a = [list(r) + [rhs[i]] for i, r in enumerate(rows)]
    for col in range(n):
        pivot_row = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot_row is None:
            return None
        a[col], a[pivot_row] = a[pivot_row], a[col]
        inv = a[col][col]
        a[col] = [x / inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[i][n] for i in range(n)]


def enumerate_vertices(lp: LinearProgram, max_variables: int = 6):
    """Best objective over all basic feasible points, by explicit enumeration.

    Every n-subset of active constraints is solved; a vectorized float pass
    discards clearly infeasible or singular subsets (row data is scaled to
    integers first, so the float determinant and slack tests have provable
    margins), and all surviving candidates are re-verified exactly.
    """
    n = len(lp.variables)
    if n > max_variables:
        raise ValueError("vertex enumeration capped at small programs")
    rows, _ = _halfspace_rows(lp)
    scaled: list[tuple[list, object]] = []
    for vec, rhs in rows:
        denom = 1
        for x in list(vec) + [rhs]:
            denom = denom * x.denominator // math.gcd(denom, x.denominator)
        scaled.append(([x * denom for x in vec], rhs * denom))
    m = len(scaled)
    a_f = np.array([[float(x) for x in vec] for vec, _ in scaled])
    b_f = np.array([float(rhs) for _, rhs in scaled])
    combos = np.array(list(itertools.combinations(range(m), n)))
    mats = a_f[combos]
    dets = np.linalg.det(mats)
    usable = np.abs(dets) > 0.5  # integer determinants: zero means singular
    solutions = np.full((len(combos), n), np.nan)
    if usable.any():
        solutions[usable] = np.linalg.solve(
            mats[usable], b_f[combos][usable][..., None]
        )[..., 0]
    slack = b_f[None, :] - solutions @ a_f.T
    feasible = usable & np.all(slack >= -1e-9, axis=1) & np.isfinite(solutions).all(axis=1)

    obj_vec = np.array(
        [float(lp.objective.get(v, 0)) for v in lp.variables]
    )
    best_value = None
    best_assignment = None
    exact_count = 0
    for k in np.flatnonzero(feasible):
        combo = combos[k]
        exact = _solve_exact(
            [scaled[i][0] for i in combo], [scaled[i][1] for i in combo]
        )
        if exact is None:
            continue
        ok = all(
            sum((c * x for c, x in zip(vec, exact)), Rat(0)) <= rhs
            for vec, rhs in scaled
        )
        if not ok:
            continue
        exact_count += 1
        assignment = dict(zip(lp.variables, exact))
        value = sum(
            (coeff * assignment[var] for var, coeff in lp.objective.items()), Rat(0)
        )
        if best_value is None or value > best_value:
            best_value = value
            best_assignment = assignment
    del obj_vec
    return best_value, best_assignment, exact_count


# -- program builders ---------------------------------------------------------


def build_minindex_lp() -> LinearProgram:
    """Portfolio-ratio program; its optimum 5/9 caps the least-index policy."""
    lp = LinearProgram(
        name="minindex",
        variables=["gamma", "p1", "p2", "p3", "p4"],
        objective={"gamma": 1},
        lower={"gamma": None},  # probabilities default to >= 0
    )
    lp.add("single_round", {"p1": 1, "gamma": -1}, GE, 0)
    lp.add("two_rounds", {"p1": Rat(1, 2), "p2": 1, "gamma": -1}, GE, 0)
    lp.add(
        "reordered_family",
        {"p1": Rat(1, 2), "p2": Rat(1, 2), "p3": 1, "gamma": -1},
        GE,
        0,
    )
    lp.add(
        "gadget_family",
        {"p1": Rat(1, 2), "p2": Rat(2, 3), "p3": Rat(1, 2), "p4": Rat(1, 3), "gamma": -1},
        GE,
        0,
    )
    lp.add("total_probability", {"p1": 1, "p2": 1, "p3": 1, "p4": 1}, LE, 1)
    return lp


def build_integral_deg3_lp() -> LinearProgram:
    """Integral upper-bound program at maximum degree three (optimum ~0.58065)."""
    lp = LinearProgram(
        name="integral-deg3",
        variables=["gamma", "x1", "x2", "x3u", "x3d", "x4"],
        objective={"gamma": 1},
        lower={"gamma": None, "x1": 0, "x2": 0, "x3u": 0, "x3d": 0, "x4": 0},
        upper={"x1": 1, "x2": 1, "x3u": 1, "x3d": 1, "x4": 1},
    )
    lp.add("round1", {"x1": 2, "gamma": -2}, GE, 0)
    # 2x1 + 2x2 + 4(1 - x1 - x2) >= 4 gamma
    lp.add("first_option", {"x1": -2, "x2": -2, "gamma": -4}, GE, -4)
    lp.add("center_capacity", {"x1": 1, "x2": 1}, LE, 1)
    lp.add("second_solid", {"x1": 2, "x2": 2, "x3u": 1, "x3d": 1, "gamma": -4}, GE, 0)
    # ... + x4 + (1 - x1 - x3u) + (1 - x1 - x3d) >= 5 gamma
    lp.add("second_wavy", {"x2": 2, "x4": 1, "gamma": -5}, GE, -2)
    # ... + (1 - x3u - x4) + (1 - x3d - x4) >= 6 gamma
    lp.add(
        "second_dashed",
        {"x2": 2, "x3u": -1, "x3d": -1, "x4": -1, "gamma": -6},
        GE,
        -4,
    )
    lp.add("upper_wavy_cap", {"x1": 1, "x3u": 1}, LE, 1)
    lp.add("lower_wavy_cap", {"x1": 1, "x3d": 1}, LE, 1)
    lp.add("upper_dashed_cap", {"x3u": 1, "x4": 1}, LE, 1)
    lp.add("lower_dashed_cap", {"x3d": 1, "x4": 1}, LE, 1)
    return lp


def build_deg4_lp(stream) -> LinearProgram:
    """Batch program for a stream with per-batch optima: one value variable
    per edge, a prefix constraint per batch, a capacity constraint per vertex."""
    if stream.batch_marks is None or stream.expected_opt_per_batch is None:
        raise ValueError("stream needs batch marks and per-batch optima")
    edge_vars = [f"y{i}" for i in range(len(stream.arrivals))]
    lp = LinearProgram(
        name="deg4-batches",
        variables=["gamma"] + edge_vars,
        objective={"gamma": 1},
        lower={"gamma": None},
    )
    for b, (mark, mu) in enumerate(
        zip(stream.batch_marks, stream.expected_opt_per_batch), start=1
    ):
        coeffs = {f"y{i}": Rat(1) for i in range(mark)}
        coeffs["gamma"] = Rat(-mu)
        lp.add(f"batch{b}", coeffs, GE, 0)
    incident: dict[str, list[int]] = {}
    for i, (u, v) in enumerate(stream.arrivals):
        incident.setdefault(u, []).append(i)
        incident.setdefault(v, []).append(i)
    for vertex, eids in sorted(incident.items()):
        lp.add(
            f"capacity_{vertex}",
            {f"y{i}": Rat(1) for i in eids},
            LE,
            1,
        )
    return lp


def lp_text(lp: LinearProgram) -> str:
    """Plain-text dump of a program for external auditing."""
    lines = [f"\\ program {lp.name}", "maximize"]
    lines.append(
        "  obj: "
        + " + ".join(f"{c} {v}" for v, c in lp.objective.items() if c != 0)
    )
    lines.append("subject to")
    for con in lp.constraints:
        terms = " + ".join(f"{c} {v}" for v, c in con.coeffs.items() if c != 0)
        lines.append(f"  {con.name}: {terms} {con.rel} {con.rhs}")
    lines.append("bounds")
    for var in lp.variables:
        lo, up = lp.bound_of(var)
        if lo is None:
            lines.append(f"  {var} free")
        elif up is None:
            lines.append(f"  {var} >= {lo}")
        else:
            lines.append(f"  {lo} <= {var} <= {up}")
    lines.append("end")
    return "\n".join(lines) + "\n"
