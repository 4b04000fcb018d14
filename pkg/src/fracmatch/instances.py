"""Adversarial instance generators, random legal streams, and instance files.

The generators cover the constructions used to pin down the achievable
guarantees: the twin-path family with pendant spokes on which the optimal
values are forced, the prefix graphs behind the integral upper bound, the
30-batch maximum-degree-four construction, and the two families that limit
the MinIndex meta-algorithm.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace

from .engine import MatchState

Arrival = tuple[str, str]


class InstanceError(Exception):
    """Malformed instance file or stream that violates its declared contract."""


@dataclass(frozen=True)
class ArrivalStream:
    """An ordered edge-arrival sequence with optional batch structure."""

    arrivals: tuple[Arrival, ...]
    batch_marks: tuple[int, ...] | None = None
    max_degree: int = 3
    expected_opt_per_batch: tuple[int, ...] | None = None
    name: str = ""

    def __post_init__(self):
        if self.batch_marks is not None:
            marks = self.batch_marks
            if list(marks) != sorted(set(marks)) or (marks and marks[-1] != len(self.arrivals)):
                raise InstanceError("batch marks must strictly increase and end the stream")
            if self.expected_opt_per_batch is not None and len(
                self.expected_opt_per_batch
            ) != len(marks):
                raise InstanceError("one expected optimum per batch required")
        elif self.expected_opt_per_batch is not None:
            raise InstanceError("expected optima require batch marks")

    def batches(self) -> list[list[Arrival]]:
        if self.batch_marks is None:
            return [list(self.arrivals)]
        out, start = [], 0
        for mark in self.batch_marks:
            out.append(list(self.arrivals[start:mark]))
            start = mark
        return out

    def validate_degrees(self) -> None:
        degree: dict[str, int] = {}
        seen: set[frozenset] = set()
        for u, v in self.arrivals:
            if u == v:
                raise InstanceError(f"self-loop at {u}")
            key = frozenset((u, v))
            if key in seen:
                raise InstanceError(f"duplicate edge {u}-{v}")
            seen.add(key)
            for t in (u, v):
                degree[t] = degree.get(t, 0) + 1
                if degree[t] > self.max_degree:
                    raise InstanceError(
                        f"vertex {t} exceeds declared maximum degree {self.max_degree}"
                    )


def consistent_instance(n: int) -> ArrivalStream:
    """Twin growing paths joined at a root edge, then pendant spokes.

    Round i appends one edge to each path; after round n the first n - 2
    vertices of each path receive a pendant spoke.  On these instances any
    algorithm meeting the guarantee is forced to the ideal value sequence.
    """
    if n < 2:
        raise ValueError("need at least two rounds")
    arrivals: list[Arrival] = [("v_l_1", "v_r_1")]
    for i in range(2, n + 1):
        arrivals.append((f"v_l_{i - 1}", f"v_l_{i}"))
        arrivals.append((f"v_r_{i - 1}", f"v_r_{i}"))
    for i in range(1, n - 1):
        arrivals.append((f"v_l_{i}", f"vhat_l_{i}"))
        arrivals.append((f"v_r_{i}", f"vhat_r_{i}"))
    return ArrivalStream(tuple(arrivals), name=f"consistent:{n}")


def integral_hard_instance(option: str) -> ArrivalStream:
    """The three arrival scenarios behind the integral upper bound.

    'start' is the common four-edge prefix (two disjoint two-edge paths);
    'first' extends it with four wavy edges closing a triangle plus pendant
    on each half; 'second' grows each half into a longer path and then adds
    wavy and dashed edges in two further phases.
    """
    up = {0: "u1", 1: "u2", 2: "u3", 3: "u4"}
    dn = {0: "d1", 1: "d2", 2: "d3", 3: "d4"}
    prefix = [
        (up[0], up[1]),  # e1 upper
        (dn[0], dn[1]),  # e1 lower
        (up[0], up[2]),  # e2 upper
        (dn[0], dn[2]),  # e2 lower
    ]
    if option == "start":
        return ArrivalStream(
            tuple(prefix),
            batch_marks=(2, 4),
            expected_opt_per_batch=(2, 2),
            name="integral:start",
        )
    if option == "first":
        wavy = [
            (up[0], "us_pendant"),
            (up[2], up[1]),
            (dn[0], "ds_pendant"),
            (dn[2], dn[1]),
        ]
        return ArrivalStream(
            tuple(prefix + wavy),
            batch_marks=(2, 4, 8),
            expected_opt_per_batch=(2, 2, 4),
            name="integral:first",
        )
    if option == "second":
        solid = [(up[1], up[3]), (dn[1], dn[3])]
        wavy = [(up[1], "us1"), (dn[1], "ds1"), (up[3], dn[3])]
        dashed = [(up[3], "us2"), (dn[3], "ds2")]
        return ArrivalStream(
            tuple(prefix + solid + wavy + dashed),
            batch_marks=(2, 4, 6, 9, 11),
            expected_opt_per_batch=(2, 2, 4, 5, 6),
            name="integral:second",
        )
    raise ValueError("option must be start, first or second")


def degree4_instance() -> ArrivalStream:
    """Thirty-batch maximum-degree-four construction (reconstructed topology).

    A six-round twin-path instance arrives with its spokes interleaved.  Four
    root edges f_1..f_4 then join the k-th pendant tips of the two sides,
    turning each tip pair into the root of a fresh twin-path copy; each f_k
    is escorted by one extra pendant spoke on each main path vertex k, which
    is what pushes those vertices to degree four.  The copies then grow
    exactly like the base instance (their roots also reach degree four).
    The drawing for this construction is not recoverable, so callers must
    gate on the per-batch optimum sequence.
    """
    arrivals: list[Arrival] = []
    marks: list[int] = []

    def close_batch():
        marks.append(len(arrivals))

    def copy_vertex(k: int, side: str, i: int) -> str:
        # vertex 1 of copy k is the k-th pendant tip of the base instance
        return f"vhat_{side}_{k}" if i == 1 else f"c{k}_{side}_{i}"

    arrivals.append(("v_l_1", "v_r_1"))
    close_batch()
    arrivals.append(("v_l_1", "v_l_2"))
    arrivals.append(("v_r_1", "v_r_2"))
    close_batch()
    for i in range(3, 7):
        arrivals.append((f"v_l_{i - 1}", f"v_l_{i}"))
        arrivals.append((f"v_r_{i - 1}", f"v_r_{i}"))
        arrivals.append((f"v_l_{i - 2}", f"vhat_l_{i - 2}"))
        arrivals.append((f"v_r_{i - 2}", f"vhat_r_{i - 2}"))
        close_batch()
    for k in range(1, 5):
        arrivals.append((copy_vertex(k, "l", 1), copy_vertex(k, "r", 1)))  # f_k
        arrivals.append((f"v_l_{k}", f"fw_l_{k}"))
        arrivals.append((f"v_r_{k}", f"fw_r_{k}"))
        close_batch()
    for k in range(1, 5):
        arrivals.append((copy_vertex(k, "l", 1), copy_vertex(k, "l", 2)))
        arrivals.append((copy_vertex(k, "r", 1), copy_vertex(k, "r", 2)))
        close_batch()
    for i in range(3, 7):
        for k in range(1, 5):
            arrivals.append((copy_vertex(k, "l", i - 1), copy_vertex(k, "l", i)))
            arrivals.append((copy_vertex(k, "r", i - 1), copy_vertex(k, "r", i)))
            arrivals.append((copy_vertex(k, "l", i - 2), f"c{k}hat_l_{i - 2}"))
            arrivals.append((copy_vertex(k, "r", i - 2), f"c{k}hat_r_{i - 2}"))
            close_batch()

    mu = [1, 2] + [4, 6, 8, 10] + list(range(11, 19)) + list(range(20, 51, 2))
    return ArrivalStream(
        tuple(arrivals),
        batch_marks=tuple(marks),
        max_degree=4,
        expected_opt_per_batch=tuple(mu),
        name="degree4",
    )


def minindex_family1(n: int) -> ArrivalStream:
    """Long path in three interleaved batches, then per-vertex gadgets.

    The path e_1..e_{3n+3} arrives residue-class by residue-class; every
    interior path vertex then grows a small gadget whose shape depends on
    which batch is missing at that vertex.  Overall the least-index greedy
    matchings end up with sizes (3n+1, 4n+2, 3n, 2n) against an optimum of
    6n+2.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    last = 3 * n + 3

    def path_edge(j: int) -> Arrival:
        return (f"p_{j - 1}", f"p_{j}")

    batch1 = [path_edge(j) for j in range(2, last) if j % 3 == 2]
    batch2 = [path_edge(j) for j in range(1, last) if j % 3 == 1] + [path_edge(last)]
    batch3 = [path_edge(j) for j in range(3, last) if j % 3 == 0 and j <= 3 * n]
    batch4: list[Arrival] = []
    batch5: list[Arrival] = []
    batch6: list[Arrival] = []
    batch7: list[Arrival] = []
    for j in range(2, 3 * n + 2):
        u = f"p_{j}"
        w, v, t, r, q = (f"g{j}_{x}" for x in "wvtrq")
        if j % 3 == 1:  # no batch-3 edge at u
            batch6.append((u, w))
        elif j % 3 == 0:  # no batch-1 edge at u
            batch7.append((u, w))
            batch4.append((w, v))
            batch5.append((v, t))
        else:  # j % 3 == 2: no batch-2 edge at u
            batch7.append((u, w))
            batch5.append((w, v))
            batch4.append((v, t))
            batch5.append((t, r))
            batch6.append((v, q))
    arrivals: list[Arrival] = []
    marks: list[int] = []
    for batch in (batch1, batch2, batch3, batch4, batch5, batch6, batch7):
        arrivals.extend(batch)
        marks.append(len(arrivals))
    return ArrivalStream(tuple(arrivals), batch_marks=tuple(marks), name=f"family1:{n}")


def minindex_family2(n: int) -> ArrivalStream:
    """Twin-path edge set reordered into three batches by index parity."""
    if n < 2 or n % 2:
        raise ValueError("need even n >= 2")
    batch1: list[Arrival] = [("v_l_1", "v_r_1")]
    batch2: list[Arrival] = []
    for i in range(2, n + 1):
        target = batch1 if i % 2 == 1 else batch2
        target.append((f"v_l_{i - 1}", f"v_l_{i}"))
        target.append((f"v_r_{i - 1}", f"v_r_{i}"))
    batch3: list[Arrival] = []
    for i in range(1, n - 1):
        batch3.append((f"v_l_{i}", f"vhat_l_{i}"))
        batch3.append((f"v_r_{i}", f"vhat_r_{i}"))
    arrivals: list[Arrival] = []
    marks: list[int] = []
    for batch in (batch1, batch2, batch3):
        if batch:  # n = 2 has no spokes, so its third batch vanishes
            arrivals.extend(batch)
            marks.append(len(arrivals))
    return ArrivalStream(tuple(arrivals), batch_marks=tuple(marks), name=f"family2:{n}")


def random_stream(seed: int, edges: int, max_degree: int = 3) -> ArrivalStream:
    """Deterministic pseudo-random simple stream respecting the degree cap.

    Candidate endpoint pairs are rejection-sampled from a slowly growing
    vertex pool; a fresh vertex is opened when sampling stalls, so the
    stream always reaches the requested length.
    """
    if edges < 1:
        raise ValueError("need at least one edge")
    rng = random.Random(seed)
    degree: dict[int, int] = {0: 0, 1: 0, 2: 0, 3: 0}
    seen: set[frozenset] = set()
    arrivals: list[Arrival] = []
    while len(arrivals) < edges:
        if rng.random() < 0.12:
            degree.setdefault(len(degree), 0)
        open_vertices = [v for v, d in degree.items() if d < max_degree]
        placed = False
        for _ in range(40):
            if len(open_vertices) < 2:
                break
            u, v = rng.sample(open_vertices, 2)
            if frozenset((u, v)) in seen:
                continue
            seen.add(frozenset((u, v)))
            degree[u] += 1
            degree[v] += 1
            arrivals.append((f"n{u}", f"n{v}"))
            placed = True
            break
        if not placed:
            degree.setdefault(len(degree), 0)
            degree.setdefault(len(degree), 0)
    return ArrivalStream(tuple(arrivals), max_degree=max_degree, name=f"random:{seed}")


def replay_degrees_ok(stream: ArrivalStream) -> bool:
    try:
        stream.validate_degrees()
    except InstanceError:
        return False
    return True


# -- instance files ---------------------------------------------------------
#
# Line-oriented text format:
#     # comment
#     maxdeg 3
#     edges 11            (optional count, validated)
#     edge v_l_1 v_r_1
#     batch               (ends the current batch)
#     opt 1 2 4           (optional, one optimum per batch)
# A trailing unterminated batch is closed at end of file.


def save_instance(stream: ArrivalStream, path) -> None:
    lines = [f"# instance {stream.name}" if stream.name else "# instance"]
    lines.append(f"maxdeg {stream.max_degree}")
    lines.append(f"edges {len(stream.arrivals)}")
    marks = set(stream.batch_marks or ())
    for idx, (u, v) in enumerate(stream.arrivals, start=1):
        lines.append(f"edge {u} {v}")
        if idx in marks and idx != len(stream.arrivals):
            lines.append("batch")
    if stream.batch_marks is not None:
        lines.append("batch")
    if stream.expected_opt_per_batch is not None:
        lines.append("opt " + " ".join(str(m) for m in stream.expected_opt_per_batch))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def load_instance(path, name: str = "") -> ArrivalStream:
    max_degree = 3
    declared_edges: int | None = None
    arrivals: list[Arrival] = []
    marks: list[int] = []
    opt: tuple[int, ...] | None = None
    batched = False
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            try:
                if parts[0] == "maxdeg" and len(parts) == 2:
                    max_degree = int(parts[1])
                elif parts[0] == "edges" and len(parts) == 2:
                    declared_edges = int(parts[1])
                elif parts[0] == "edge" and len(parts) == 3:
                    arrivals.append((parts[1], parts[2]))
                elif parts[0] == "batch" and len(parts) == 1:
                    batched = True
                    if not arrivals or (marks and marks[-1] == len(arrivals)):
                        raise ValueError("empty batch")
                    marks.append(len(arrivals))
                elif parts[0] == "opt":
                    opt = tuple(int(tok) for tok in parts[1:])
                else:
                    raise ValueError(f"unknown directive {parts[0]!r}")
            except ValueError as exc:
                raise InstanceError(f"{path}:{lineno}: {exc}") from exc
    if declared_edges is not None and declared_edges != len(arrivals):
        raise InstanceError(f"{path}: declared {declared_edges} edges, found {len(arrivals)}")
    if batched and (not marks or marks[-1] != len(arrivals)):
        marks.append(len(arrivals))
    stream = ArrivalStream(
        tuple(arrivals),
        batch_marks=tuple(marks) if batched else None,
        max_degree=max_degree,
        expected_opt_per_batch=opt,
        name=name,
    )
    stream.validate_degrees()
    return stream


_BUILTIN_GENERATORS = {
    "consistent": lambda arg: consistent_instance(int(arg)),
    "integral": integral_hard_instance,
    "degree4": lambda arg: degree4_instance(),
    "family1": lambda arg: minindex_family1(int(arg)),
    "family2": lambda arg: minindex_family2(int(arg)),
}


def builtin_instance(spec: str) -> ArrivalStream:
    """Resolve 'consistent:4', 'integral:second', 'degree4', 'family1:2'."""
    kind, _, arg = spec.partition(":")
    try:
        generator = _BUILTIN_GENERATORS[kind]
    except KeyError:
        raise InstanceError(f"unknown builtin instance {kind!r}") from None
    try:
        return generator(arg)
    except (TypeError, ValueError) as exc:
        raise InstanceError(f"bad parameter for {kind}: {exc}") from exc
