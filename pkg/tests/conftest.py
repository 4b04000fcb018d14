"""Shared stream builders and the classification audit used by several suites."""

from collections import Counter

from fracmatch.engine import (
    BRIDGE,
    PATH,
    SPOKE,
    MatchState,
    arrive,
    table_entry,
)
from fracmatch.instances import consistent_instance, random_stream

KIND_NUMBER = {PATH: 1, SPOKE: 2, BRIDGE: 3}


def rare_cell_stream():
    """Arrivals driving a two-spoke vertex to strictly smaller residual.

    Two gadgets each deliver a maximum-value spoke (1 - g) onto a shared hub:
    a minimum spoke followed by a bridge lifts the gadget vertex's cover to
    2g - 1, so its outgoing spoke carries g - (2g - 1).  The hub then meets a
    two-path-edge vertex whose residual is larger, which is the one endpoint
    pairing the fuzzer essentially never produces.
    """
    arrivals = []
    for prefix in ("g1", "g2"):
        arrivals += [
            (f"{prefix}_s0", f"{prefix}_s1"),
            (f"{prefix}_s1", f"{prefix}_s2"),
            (f"{prefix}_s1", f"{prefix}_t"),
            (f"{prefix}_a0", f"{prefix}_a1"),
            (f"{prefix}_a1", f"{prefix}_t"),
            (f"{prefix}_t", "hub"),
        ]
    arrivals += [("p0", "p1"), ("p1", "p2"), ("p2", "p3"), ("hub", "p2")]
    return arrivals


def _min_spoke_onto(prefix, target):
    # a chain interior's spoke carries the minimum value 1 - 3g/2
    return [
        (f"{prefix}_s0", f"{prefix}_s1"),
        (f"{prefix}_s1", f"{prefix}_s2"),
        (f"{prefix}_s1", target),
    ]


def _spoke_bridge_vertex(prefix):
    # leaves f"{prefix}_t" carrying one spoke and one bridge
    return _min_spoke_onto(prefix, f"{prefix}_t") + [
        (f"{prefix}_a0", f"{prefix}_a1"),
        (f"{prefix}_a1", f"{prefix}_t"),
    ]


def spoke_bridge_meets_light_hub():
    """Both endpoints degree three; the spoke+bridge side has less residual."""
    arrivals = _min_spoke_onto("h1", "hub") + _min_spoke_onto("h2", "hub")
    arrivals += _spoke_bridge_vertex("g")
    arrivals.append(("hub", "g_t"))
    return arrivals


def spoke_bridge_meets_heavy_hub():
    """Mirror pairing: the two-spoke hub carries maximum spokes instead."""
    arrivals = []
    for prefix in ("g1", "g2"):
        arrivals += _spoke_bridge_vertex(prefix)
        arrivals.append((f"{prefix}_t", "hub"))
    arrivals += _spoke_bridge_vertex("g3")
    arrivals.append(("hub", "g3_t"))
    return arrivals


def audit_classification(arrival_lists):
    """Replay streams, comparing every decision against the encoded table.

    Returns (cell hit counter, mismatch list); grey cells raise inside the
    engine, so reaching one would surface as an exception.
    """
    hits = Counter()
    mismatches = []
    for arrivals in arrival_lists:
        state = MatchState()
        for u, v in arrivals:
            outcome = arrive(state, u, v)
            (a, ta), (b, tb) = outcome.pre_types.items()
            entry = table_entry(ta, tb)
            if entry is None:
                mismatches.append((ta, tb, "grey", outcome.step))
                continue
            number, boxed = entry
            observed = KIND_NUMBER[outcome.edge.kind]
            if boxed:
                z = outcome.edge.z
                tz = outcome.pre_types[z]
                tw = outcome.pre_types[a if z == b else b]
                oriented = table_entry(tz, tw)
                if oriented is None or not oriented[1] or oriented[0] != observed:
                    mismatches.append((ta, tb, outcome.edge.kind, outcome.step))
                hits[(tz, tw)] += 1
            else:
                if number != observed:
                    mismatches.append((ta, tb, outcome.edge.kind, outcome.step))
                hits[(ta, tb)] += 1
                if ta != tb:
                    hits[(tb, ta)] += 1
    return hits, mismatches


def fuzz_corpus(count, max_edges=40):
    for seed in range(count):
        yield random_stream(seed, 5 + seed % (max_edges - 4)).arrivals


def targeted_corpus():
    yield rare_cell_stream()
    yield spoke_bridge_meets_light_hub()
    yield spoke_bridge_meets_heavy_hub()
    for n in (2, 3, 4, 8):
        yield consistent_instance(n).arrivals
