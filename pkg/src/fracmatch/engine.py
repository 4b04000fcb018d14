"""Online state machine for fractional matching at maximum degree three.

Each arriving edge is classified as a path edge, a spoke, or one of four
bridge shapes, given an irrevocable fractional value, and paired with exact
updates to a fractional vertex cover.  The dual cover certifies the
guarantee: after every arrival the total cover equals the total matching
value, every edge is covered by at least the guarantee, and no vertex is
overloaded.  All arithmetic is exact in Q(sqrt(5)).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum

from .golden import GUARANTEE, ONE, ZERO, GoldenNumber, Rat, ideal_path_value

TypeVector = tuple[int, int, int]

PATH = "path"
SPOKE = "spoke"
BRIDGE = "bridge"

#: Degree-2 neighborhoods exempt from monotone cover growth: a vertex whose
#: other incident edges are two spokes, or a path edge plus a spoke, may see
#: its cover value decrease on arrival.
EXEMPT_TYPES: frozenset[TypeVector] = frozenset({(0, 2, 0), (1, 1, 0)})

#: Endpoint neighborhoods that can only arise from corrupted state: a vertex
#: cannot be incident to bridges alone.
GREY_TYPES: frozenset[TypeVector] = frozenset({(0, 0, 1), (0, 0, 2)})


class BridgeCase(IntEnum):
    """The four recognized bridge shapes, keyed by endpoint neighborhoods."""

    PATH_PATH = 1  # both endpoints previously carried a single path edge
    PATH_SPOKE = 2  # a single path edge on one side, a single spoke on the other
    TWO_SPOKES = 3  # two spokes on one side, a single path edge on the other
    PATH_PLUS_SPOKE = 4  # path edge + spoke on one side, a single path edge on the other


_BRIDGE_SIGNATURES: dict[frozenset[TypeVector], BridgeCase] = {
    frozenset({(1, 0, 0)}): BridgeCase.PATH_PATH,
    frozenset({(1, 0, 0), (0, 1, 0)}): BridgeCase.PATH_SPOKE,
    frozenset({(0, 2, 0), (1, 0, 0)}): BridgeCase.TWO_SPOKES,
    frozenset({(1, 1, 0), (1, 0, 0)}): BridgeCase.PATH_PLUS_SPOKE,
}

# Data-encoded classification table: rows/columns are the possible endpoint
# neighborhoods (excluding the arriving edge), entries are the assigned kind.
# "!" marks cells where both endpoints have degree three after the arrival;
# there the row is read as the residual-poorer endpoint.  None cells are
# unreachable on legal streams.
_TV_ORDER: tuple[TypeVector, ...] = (
    (0, 0, 0),
    (1, 0, 0),
    (0, 1, 0),
    (0, 0, 1),
    (1, 1, 0),
    (1, 0, 1),
    (0, 1, 1),
    (2, 0, 0),
    (0, 2, 0),
    (0, 0, 2),
)

_TABLE_ROWS: dict[TypeVector, tuple[str | None, ...]] = {
    (0, 0, 0): ("1", "1", "1", None, "1", "2", "2", "2", "1", None),
    (1, 0, 0): ("1", "3", "3", None, "3", "2", "2", "2", "3", None),
    (0, 1, 0): ("1", "3", "1", None, "1", "2", "2", "2", "1", None),
    (0, 0, 1): (None,) * 10,
    (1, 1, 0): ("1", "3", "1", None, "1", "1!", "1!", "1!", "1", None),
    (1, 0, 1): ("2", "2", "2", None, "2!", "2", "2", "2", "2!", None),
    (0, 1, 1): ("2", "2", "2", None, "2!", "2", "2", "2", "2!", None),
    (2, 0, 0): ("2", "2", "2", None, "2!", "2", "2", "2", "2!", None),
    (0, 2, 0): ("1", "3", "1", None, "1", "1!", "1!", "1!", "1", None),
    (0, 0, 2): (None,) * 10,
}


def table_entry(row: TypeVector, col: TypeVector) -> tuple[int, bool] | None:
    """Entry of the classification table: (kind number, both-degree-three flag)."""
    cell = _TABLE_ROWS[row][_TV_ORDER.index(col)]
    if cell is None:
        return None
    return int(cell[0]), cell.endswith("!")


class StreamError(Exception):
    """Base class for rejected arrivals; state is left untouched."""


class SelfLoop(StreamError):
    pass


class DuplicateEdge(StreamError):
    pass


class DegreeViolation(StreamError):
    pass


class ImpossibleCombination(StreamError):
    """Endpoint neighborhoods hit an unreachable table cell: corrupted state."""


@dataclass
class EdgeRecord:
    eid: int
    u: object
    v: object
    kind: str
    y: GoldenNumber
    case: BridgeCase | None = None
    n: int | None = None
    z: object = None
    w: object = None

    def endpoints(self) -> frozenset:
        return frozenset((self.u, self.v))


@dataclass
class VertexRecord:
    vid: object
    order: int
    x: GoldenNumber = ZERO
    incident: list[int] = field(default_factory=list)


@dataclass
class ArrivalOutcome:
    step: int
    edge: EdgeRecord
    x_deltas: dict
    pre_types: dict
    violations: list = field(default_factory=list)


@dataclass
class InvariantReport:
    verdicts: dict
    failures: dict

    @property
    def ok(self) -> bool:
        return all(self.verdicts.values())


PROPERTIES = ("P1", "P2", "P3", "P4", "P5", "P6", "P7", "x_nonnegative", "y_nonnegative")


class MatchState:
    """Single-owner mutable state of one online run (maximum degree three)."""

    MAX_DEGREE = 3

    def __init__(self):
        self.vertices: dict[object, VertexRecord] = {}
        self.edges: dict[int, EdgeRecord] = {}
        self.step = 0
        self.sum_x = ZERO
        self.sum_y = ZERO
        self._edge_set: set[frozenset] = set()
        self.first_violation: tuple[int, str, str] | None = None
        self.violation_count = 0
        self._p5_failure: str | None = None

    # -- queries ----------------------------------------------------------

    def degree(self, v) -> int:
        rec = self.vertices.get(v)
        return len(rec.incident) if rec else 0

    def has_edge(self, u, v) -> bool:
        return frozenset((u, v)) in self._edge_set

    def incident_edges(self, v) -> list[EdgeRecord]:
        rec = self.vertices.get(v)
        if rec is None:
            return []
        return [self.edges[eid] for eid in rec.incident]

    def alg_value(self) -> GoldenNumber:
        return self.sum_y

    def vertex_x(self, v) -> GoldenNumber:
        rec = self.vertices.get(v)
        return rec.x if rec else ZERO


def type_vector(state: MatchState, v, excluding: int | None = None) -> TypeVector:
    """Counts of (path, spoke, bridge) edges at v, minus an optional edge id."""
    t1 = t2 = t3 = 0
    for rec in state.incident_edges(v):
        if rec.eid == excluding:
            continue
        if rec.kind == PATH:
            t1 += 1
        elif rec.kind == SPOKE:
            t2 += 1
        else:
            t3 += 1
    return (t1, t2, t3)


def residual(state: MatchState, v, excluding: int | None = None) -> GoldenNumber:
    """1 minus the matching value already incident to v."""
    total = ZERO
    for rec in state.incident_edges(v):
        if rec.eid != excluding:
            total = total + rec.y
    return ONE - total


def orient(state: MatchState, u, v):
    """Distinguish the endpoints of a non-bridge arrival uv.

    Precondition: endpoints already ordered so deg(v) <= deg(u), degrees
    counted with the new edge.  The second endpoint is promoted only when it
    also has degree three and strictly less residual capacity.
    """
    if state.degree(v) + 1 == 3 and (residual(state, v) - residual(state, u)).sign() < 0:
        return v, u
    return u, v


def _normalize(state: MatchState, a, b):
    """Order endpoints by degree (with the new edge), ties by first-seen."""
    da, db = state.degree(a) + 1, state.degree(b) + 1
    if da != db:
        return (a, b) if da > db else (b, a)
    oa = state.vertices[a].order if a in state.vertices else len(state.vertices)
    ob = state.vertices[b].order if b in state.vertices else len(state.vertices) + 1
    return (a, b) if oa <= ob else (b, a)


def classify(state: MatchState, a, b):
    """Kind (and bridge shape) the arriving edge ab would receive.

    Raises ImpossibleCombination when an endpoint neighborhood could only
    come from corrupted state.
    """
    ta = type_vector(state, a)
    tb = type_vector(state, b)
    if ta in GREY_TYPES or tb in GREY_TYPES:
        raise ImpossibleCombination(f"unreachable neighborhoods {ta} x {tb} at {a}-{b}")
    case = _BRIDGE_SIGNATURES.get(frozenset((ta, tb)))
    if case is not None:
        return BRIDGE, case
    u, v = _normalize(state, a, b)
    z, _ = orient(state, u, v)
    if state.degree(z) + 1 == 3 and type_vector(state, z) not in EXEMPT_TYPES:
        return SPOKE, None
    return PATH, None


def _single_edge(state: MatchState, v, kind: str) -> EdgeRecord:
    found = [rec for rec in state.incident_edges(v) if rec.kind == kind]
    if len(found) != 1:
        raise ImpossibleCombination(f"expected one {kind} edge at {v}, found {len(found)}")
    return found[0]


_HALF_G = GUARANTEE * Rat(1, 2)
_TWO_G_MINUS_1 = GUARANTEE * 2 - ONE


def _bridge_assignment(state: MatchState, u, v, case: BridgeCase):
    """Value and cover deltas for a bridge, per its shape."""
    g = GUARANTEE
    tu = type_vector(state, u)
    if case is BridgeCase.PATH_PATH:
        fu = _single_edge(state, u, PATH)
        fv = _single_edge(state, v, PATH)
        tu_next = ideal_path_value(fu.n + 1)
        tv_next = ideal_path_value(fv.n + 1)
        if (tu_next - tv_next).sign() <= 0:
            z, w, fz, ideal_z, ideal_w = u, v, fu, tu_next, tv_next
        else:
            z, w, fz, ideal_z, ideal_w = v, u, fv, tv_next, tu_next
        y = ideal_z - (g - ideal_w)
        slack = ONE - fz.y - y
        dz = ideal_z - min(_HALF_G, slack)
        dw = ideal_w - max(_HALF_G, g - slack)
        return y, {z: dz, w: dw}, z, w
    if case is BridgeCase.PATH_SPOKE:
        z, w = (u, v) if type_vector(state, u) == (1, 0, 0) else (v, u)
        f1 = _single_edge(state, z, PATH)
        f2 = _single_edge(state, w, SPOKE)
        y = max(ideal_path_value(f1.n + 1) - f2.y, ZERO)
        dw = max(_TWO_G_MINUS_1 - f2.y, ZERO)
        return y, {z: y - dw, w: dw}, z, w
    if case is BridgeCase.TWO_SPOKES:
        side, other = (u, v) if tu == (0, 2, 0) else (v, u)
        fv = _single_edge(state, other, PATH)
        spoke_max = max((rec.y for rec in state.incident_edges(side)), default=ZERO)
        y = max(ideal_path_value(fv.n + 1) - spoke_max, ZERO)
        return y, {other: y}, None, None
    # PATH_PLUS_SPOKE
    side, other = (u, v) if tu == (1, 1, 0) else (v, u)
    f1 = _single_edge(state, side, PATH)
    f2 = _single_edge(state, side, SPOKE)
    f3 = _single_edge(state, other, PATH)
    ideal3 = ideal_path_value(f3.n + 1)
    y = max(ideal3 - f2.y - min(g - ideal_path_value(f1.n + 1), f2.y), ZERO)
    dv = max(ideal3 - f2.y, ZERO)
    return y, {side: y - dv, other: dv}, None, None


def arrive(state: MatchState, a, b, strict: bool = True) -> ArrivalOutcome:
    """Process the arrival of edge ab: classify, assign y, update the cover.

    Rejected arrivals (self-loop, duplicate, degree overflow) raise and leave
    the state untouched.  With strict=True the invariants are re-verified on
    the affected neighborhood after the update; failures are recorded on the
    state, never raised.
    """
    if a == b:
        raise SelfLoop(f"self-loop at {a}")
    if state.has_edge(a, b):
        raise DuplicateEdge(f"edge {a}-{b} already present")
    for t in (a, b):
        if state.degree(t) >= MatchState.MAX_DEGREE:
            raise DegreeViolation(f"vertex {t} already has degree {MatchState.MAX_DEGREE}")

    kind, case = classify(state, a, b)  # raises ImpossibleCombination pre-mutation

    for t in (a, b):
        if t not in state.vertices:
            state.vertices[t] = VertexRecord(vid=t, order=len(state.vertices))

    u, v = _normalize(state, a, b)
    pre_types = {u: type_vector(state, u), v: type_vector(state, v)}
    g = GUARANTEE
    eid = state.step

    if kind == BRIDGE:
        y, deltas, z, w = _bridge_assignment(state, u, v, case)
        record = EdgeRecord(eid, a, b, BRIDGE, y, case=case, z=z, w=w)
    else:
        z, w = orient(state, u, v)
        if kind == SPOKE:
            y = g - state.vertices[z].x
            deltas = {w: y}
            record = EdgeRecord(eid, a, b, SPOKE, y, z=z, w=w)
        else:
            n = max(
                [rec.n + 1 for rec in state.incident_edges(z) if rec.kind == PATH],
                default=1,
            )
            y = min(ideal_path_value(n), residual(state, z))
            hold_back = g - ideal_path_value(n + 1)
            deltas = {z: y - hold_back, w: hold_back}
            record = EdgeRecord(eid, a, b, PATH, y, n=n, z=z, w=w)

    spread = ZERO
    for dv in deltas.values():
        spread = spread + dv
    if spread != y:
        raise AssertionError(f"cover deltas {deltas} do not sum to y at step {eid}")

    state.edges[eid] = record
    state._edge_set.add(frozenset((a, b)))
    for t in (a, b):
        state.vertices[t].incident.append(eid)
    for t, dv in deltas.items():
        state.vertices[t].x = state.vertices[t].x + dv
    state.sum_x = state.sum_x + spread
    state.sum_y = state.sum_y + y
    state.step += 1

    outcome = ArrivalOutcome(step=eid, edge=record, x_deltas=deltas, pre_types=pre_types)

    if state._p5_failure is None:
        for t, dv in deltas.items():
            if dv.sign() < 0 and pre_types[t] not in EXEMPT_TYPES:
                state._p5_failure = (
                    f"x decreased at {t} (step {eid}) with neighborhood {pre_types[t]}"
                )
                break

    if strict:
        outcome.violations = _check_neighborhood(state, a, b, record)
        for prop, detail in outcome.violations:
            state.violation_count += 1
            if state.first_violation is None:
                state.first_violation = (eid, prop, detail)
    return outcome


def _check_neighborhood(state: MatchState, a, b, new_edge: EdgeRecord):
    """Verify every invariant that the arrival of ab could have disturbed.

    Cover values change only at the endpoints, so P2/P4/P6/P7 need rechecking
    only on edges and vertices touching a or b; P1 uses the running sums.
    """
    g = GUARANTEE
    out = []
    if state.sum_x != state.sum_y:
        out.append(("P1", f"total cover {state.sum_x} != total value {state.sum_y}"))
    seen = set()
    for t in (a, b):
        for rec in state.incident_edges(t):
            if rec.eid in seen:
                continue
            seen.add(rec.eid)
            out.extend(_check_edge(state, rec))
        out.extend(_check_vertex(state, t))
    if new_edge.y.sign() < 0:
        out.append(("y_nonnegative", f"edge {new_edge.eid} has y < 0"))
    return out


def _check_edge(state: MatchState, rec: EdgeRecord):
    g = GUARANTEE
    out = []
    xu = state.vertices[rec.u].x
    xv = state.vertices[rec.v].x
    if (xu + xv - g).sign() < 0:
        out.append(("P2", f"edge {rec.eid} ({rec.u}-{rec.v}) uncovered: x_u+x_v < guarantee"))
    if rec.kind == PATH:
        ideal_next = ideal_path_value(rec.n + 1)
        xz = state.vertices[rec.z].x
        xw = state.vertices[rec.w].x
        if (xz - ideal_next).sign() < 0:
            out.append(("P6", f"path edge {rec.eid}: x at {rec.z} below ideal successor value"))
        if (xw - (g - ideal_next)).sign() < 0:
            out.append(("P6", f"path edge {rec.eid}: x at {rec.w} below guarantee residual"))
        if state.degree(rec.w) == 1 and xw != g - ideal_next:
            out.append(("P6", f"path edge {rec.eid}: leaf {rec.w} not at exact residual"))
    elif rec.kind == SPOKE:
        if (state.vertices[rec.w].x - rec.y).sign() < 0:
            out.append(("P7", f"spoke {rec.eid}: x at {rec.w} below its value"))
    return out


def _check_vertex(state: MatchState, t):
    g = GUARANTEE
    out = []
    rec = state.vertices[t]
    load = ZERO
    for e in state.incident_edges(t):
        load = load + e.y
    if (ONE - load).sign() < 0:
        out.append(("P3", f"vertex {t} overloaded: incident value exceeds 1"))
    if rec.x.sign() < 0:
        out.append(("x_nonnegative", f"vertex {t} has x < 0"))
    if len(rec.incident) == 2 and type_vector(state, t) not in EXEMPT_TYPES:
        lo = g * 2 - ONE
        hi = (g * 5 - GoldenNumber(2)) * Rat(1, 2)
        if (rec.x - lo).sign() < 0 or (hi - rec.x).sign() < 0:
            out.append(("P4", f"degree-2 vertex {t}: x outside [2g-1, (5g-2)/2]"))
        if (rec.x - (g - ONE + load)).sign() < 0:
            out.append(("P4", f"degree-2 vertex {t}: x below g - 1 + incident value"))
    return out


def check_invariants(state: MatchState) -> InvariantReport:
    """Full scan of every invariant against the current state."""
    g = GUARANTEE
    verdicts = {prop: True for prop in PROPERTIES}
    failures: dict[str, str] = {}

    def fail(prop, detail):
        if verdicts[prop]:
            verdicts[prop] = False
            failures[prop] = detail

    if state.sum_x != state.sum_y:
        fail("P1", f"total cover {state.sum_x} != total value {state.sum_y}")
    total_x = ZERO
    total_y = ZERO
    for vrec in state.vertices.values():
        total_x = total_x + vrec.x
    for erec in state.edges.values():
        total_y = total_y + erec.y
    if total_x != total_y:
        fail("P1", "recomputed totals disagree")

    for rec in state.edges.values():
        for prop, detail in _check_edge(state, rec):
            fail(prop, detail)
        if rec.y.sign() < 0:
            fail("y_nonnegative", f"edge {rec.eid} has y < 0")
    for t in state.vertices:
        for prop, detail in _check_vertex(state, t):
            fail(prop, detail)
    if state._p5_failure is not None:
        fail("P5", state._p5_failure)
    return InvariantReport(verdicts=verdicts, failures=failures)


def run_stream(arrivals, strict: bool = True, on_arrival=None) -> MatchState:
    """Replay a sequence of (u, v) arrivals through a fresh state."""
    state = MatchState()
    for u, v in arrivals:
        outcome = arrive(state, u, v, strict=strict)
        if on_arrival is not None:
            on_arrival(state, outcome)
    return state


def arrival_event(outcome: ArrivalOutcome) -> dict:
    """JSON-serializable trace event for one arrival."""
    rec = outcome.edge
    event = {
        "step": outcome.step,
        "edge": [rec.u, rec.v],
        "kind": rec.kind,
        "y": {
            "a": str(rec.y.a),
            "b": str(rec.y.b),
            "decimal": rec.y.decimal(6),
        },
        "x_deltas": [
            {"vertex": t, "a": str(dv.a), "b": str(dv.b)}
            for t, dv in outcome.x_deltas.items()
        ],
        "invariants": "pass"
        if not outcome.violations
        else f"{outcome.violations[0][0]}: {outcome.violations[0][1]}",
    }
    if rec.kind == BRIDGE:
        event["case"] = int(rec.case)
    if rec.kind == PATH:
        event["n"] = rec.n
    return event
