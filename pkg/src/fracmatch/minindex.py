"""Least-index greedy portfolio of matchings with an exact expectation.

The meta-algorithm keeps k matchings; every arriving edge goes into the
lowest-indexed matching that stays vertex-disjoint, or is dropped.  The
output is matching i with probability p_i, so the expected size is the exact
rational sum of |M_i| * p_i.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .golden import Rat


class ProbabilityError(ValueError):
    pass


@dataclass
class MinIndexState:
    probabilities: tuple
    matchings: list[list[tuple]] = field(default_factory=list)
    used: list[set] = field(default_factory=list)
    placements: list[tuple] = field(default_factory=list)
    rejected: int = 0

    @property
    def k(self) -> int:
        return len(self.probabilities)

    def sizes(self) -> tuple[int, ...]:
        return tuple(len(m) for m in self.matchings)


def minindex_new(k: int, probabilities) -> MinIndexState:
    """Fresh state with k empty matchings; probabilities must sum to one."""
    if k < 1:
        raise ProbabilityError("need at least one matching")
    probs = tuple(Rat(p) if not isinstance(p, str) else Rat(p) for p in probabilities)
    if len(probs) != k:
        raise ProbabilityError(f"expected {k} probabilities, got {len(probs)}")
    if any(p < 0 for p in probs):
        raise ProbabilityError("probabilities must be nonnegative")
    if sum(probs) != 1:
        raise ProbabilityError("probabilities must sum to one")
    state = MinIndexState(probabilities=probs)
    state.matchings = [[] for _ in range(k)]
    state.used = [set() for _ in range(k)]
    return state


def minindex_feed(state: MinIndexState, u, v) -> int | None:
    """Place edge uv into the least-index feasible matching; None if rejected."""
    for i in range(state.k):
        if u not in state.used[i] and v not in state.used[i]:
            state.matchings[i].append((u, v))
            state.used[i].update((u, v))
            state.placements.append((len(state.placements), (u, v), i))
            return i
    state.placements.append((len(state.placements), (u, v), None))
    state.rejected += 1
    return None


def minindex_run(state: MinIndexState, arrivals) -> MinIndexState:
    for u, v in arrivals:
        minindex_feed(state, u, v)
    return state


def minindex_expected(state: MinIndexState):
    """Exact expected cardinality sum_i p_i * |M_i|."""
    total = Rat(0)
    for p, matching in zip(state.probabilities, state.matchings):
        total += p * len(matching)
    return total


def placement_events(state: MinIndexState) -> list[dict]:
    return [
        {
            "step": step,
            "edge": list(edge),
            "placed_index": index if index is not None else "rejected",
        }
        for step, edge, index in state.placements
    ]
