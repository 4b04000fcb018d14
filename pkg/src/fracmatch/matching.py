"""Offline maximum matching and competitive-ratio evaluation.

The benchmark for every online run is the cardinality of a maximum matching
in the arrived graph.  Matchings are computed with an augmenting-path search
that contracts odd cycles (blossoms), so general graphs are handled; an
exhaustive search acts as the independent cross-check at small sizes.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .engine import MatchState, arrive
from .golden import GUARANTEE, GoldenNumber, ZERO

UNMATCHED = -1


class _Blossom:
    """Alternating-forest search state over an adjacency list."""

    def __init__(self, n: int, adj: list[list[int]], match: list[int]):
        self.n = n
        self.adj = adj
        self.match = match

    def phase(self) -> bool:
        """Grow a forest from every exposed vertex; augment once if possible."""
        n, adj, match = self.n, self.adj, self.match
        self.parent = parent = [UNMATCHED] * n
        self.base = base = list(range(n))
        self.root = root = [UNMATCHED] * n
        self.outer = outer = [False] * n
        queue = deque()
        for v in range(n):
            if match[v] == UNMATCHED:
                root[v] = v
                outer[v] = True
                queue.append(v)
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if base[v] == base[w] or match[v] == w:
                    continue
                if outer[w]:
                    if root[base[w]] != root[base[v]]:
                        self._augment(v, w)
                        return True
                    self._contract(v, w, queue)
                elif parent[w] == UNMATCHED:
                    # w is unlabeled and necessarily matched
                    parent[w] = v
                    root[w] = root[base[v]]
                    mw = match[w]
                    outer[mw] = True
                    root[mw] = root[base[v]]
                    queue.append(mw)
        return False

    def _even_ancestors(self, v: int) -> list[int]:
        base, match, parent = self.base, self.match, self.parent
        chain = []
        a = base[v]
        while True:
            chain.append(a)
            if match[a] == UNMATCHED:
                return chain
            a = base[parent[match[a]]]

    def _contract(self, v: int, w: int, queue) -> None:
        base, parent, match = self.base, self.parent, self.match
        on_v = set(self._even_ancestors(v))
        b = base[w]
        while b not in on_v:
            b = base[parent[match[b]]]
        in_blossom = [False] * self.n

        def mark_path(x, child):
            while base[x] != b:
                in_blossom[base[x]] = True
                in_blossom[base[match[x]]] = True
                parent[x] = child
                child = match[x]
                x = parent[match[x]]

        mark_path(v, w)
        mark_path(w, v)
        tree_root = self.root[b]
        for i in range(self.n):
            if in_blossom[base[i]]:
                base[i] = b
                if not self.outer[i]:
                    self.outer[i] = True
                    self.root[i] = tree_root
                    queue.append(i)

    def _augment(self, v: int, w: int) -> None:
        match = self.match
        old_v, old_w = match[v], match[w]
        match[v] = w
        match[w] = v
        self._cascade(old_v)
        self._cascade(old_w)

    def _cascade(self, o: int) -> None:
        # o just lost its partner; re-match it upward along parent links
        match, parent = self.match, self.parent
        while o != UNMATCHED:
            e = parent[o]
            prev = match[e]
            match[e] = o
            match[o] = e
            o = prev


class IncrementalMatching:
    """Maximum matching maintained under edge insertions.

    Adding one edge raises the optimum by at most one, so a single forest
    phase after each insertion keeps the matching maximum.
    """

    def __init__(self):
        self.index: dict[object, int] = {}
        self.adj: list[list[int]] = []
        self.match: list[int] = []
        self.size = 0

    def _vertex(self, v) -> int:
        i = self.index.get(v)
        if i is None:
            i = len(self.adj)
            self.index[v] = i
            self.adj.append([])
            self.match.append(UNMATCHED)
        return i

    def add_edge(self, u, v) -> None:
        a, b = self._vertex(u), self._vertex(v)
        self.adj[a].append(b)
        self.adj[b].append(a)
        if self.match[a] == UNMATCHED and self.match[b] == UNMATCHED:
            self.match[a] = b
            self.match[b] = a
            self.size += 1
        elif _Blossom(len(self.adj), self.adj, self.match).phase():
            self.size += 1


def max_matching(edges) -> list[int]:
    """Indices of a maximum-cardinality matching in a simple graph."""
    index: dict[object, int] = {}
    for u, v in edges:
        index.setdefault(u, len(index))
        index.setdefault(v, len(index))
    n = len(index)
    adj: list[list[int]] = [[] for _ in range(n)]
    pair_to_eid: dict[frozenset, int] = {}
    for eid, (u, v) in enumerate(edges):
        a, b = index[u], index[v]
        adj[a].append(b)
        adj[b].append(a)
        pair_to_eid.setdefault(frozenset((a, b)), eid)
    match = [UNMATCHED] * n
    for a in range(n):  # greedy warm start
        if match[a] == UNMATCHED:
            for b in adj[a]:
                if match[b] == UNMATCHED:
                    match[a] = b
                    match[b] = a
                    break
    solver = _Blossom(n, adj, match)
    while solver.phase():
        pass
    chosen = []
    for a in range(n):
        b = match[a]
        if b != UNMATCHED and a < b:
            chosen.append(pair_to_eid[frozenset((a, b))])
    return sorted(chosen)


def is_matching(edges, chosen) -> bool:
    used = set()
    for eid in chosen:
        u, v = edges[eid]
        if u in used or v in used or u == v:
            return False
        used.add(u)
        used.add(v)
    return True


def max_matching_bruteforce(edges) -> int:
    """Exhaustive maximum over independent edge subsets (at most 20 edges)."""
    if len(edges) > 20:
        raise ValueError("brute force capped at 20 edges")
    order = sorted(range(len(edges)), key=lambda i: edges[i])
    best = 0

    def extend(pos: int, used: frozenset, size: int):
        nonlocal best
        remaining = len(order) - pos
        if size + remaining <= best:
            return
        if pos == len(order):
            best = max(best, size)
            return
        u, v = edges[order[pos]]
        if u not in used and v not in used:
            extend(pos + 1, used | {u, v}, size + 1)
        extend(pos + 1, used, size)

    extend(0, frozenset(), 0)
    return best


# -- competitive evaluation ---------------------------------------------------


@dataclass
class RatioRecord:
    step: int
    alg_value: GoldenNumber
    opt: int
    ratio_decimal: str


@dataclass
class RatioTrace:
    records: list[RatioRecord]
    min_ratio: GoldenNumber | None
    min_step: int | None
    meets_guarantee: bool
    state: MatchState

    def to_events(self) -> list[dict]:
        return [
            {
                "step": rec.step,
                "alg": {"a": str(rec.alg_value.a), "b": str(rec.alg_value.b)},
                "opt": rec.opt,
                "ratio": rec.ratio_decimal,
            }
            for rec in self.records
        ]


def competitive_trace(stream, checkpoints: str = "arrival") -> RatioTrace:
    """Run the online matcher over a stream, scoring each prefix exactly.

    The minimum prefix ratio is tracked as an exact field element; the
    guarantee flag is the exact comparison alg >= GUARANTEE * opt at the
    worst checkpoint.
    """
    if checkpoints not in ("arrival", "batch"):
        raise ValueError("checkpoints must be 'arrival' or 'batch'")
    marks = set(stream.batch_marks or ()) if checkpoints == "batch" else None
    state = MatchState()
    oracle = IncrementalMatching()
    records: list[RatioRecord] = []
    best_alg: GoldenNumber | None = None
    best_opt = 0
    best_step = None
    last_opt = 0
    for step, (u, v) in enumerate(stream.arrivals, start=1):
        arrive(state, u, v, strict=True)
        oracle.add_edge(u, v)
        if marks is not None and step not in marks:
            continue
        opt = oracle.size
        assert opt >= last_opt, "optimum must be non-decreasing"
        last_opt = opt
        alg = state.alg_value()
        ratio = alg / opt if opt else ZERO
        records.append(RatioRecord(step, alg, opt, ratio.decimal(6)))
        if opt and (
            best_alg is None or (alg * best_opt - best_alg * opt).sign() < 0
        ):
            best_alg, best_opt, best_step = alg, opt, step
    if best_alg is None:
        return RatioTrace(records, None, None, True, state)
    meets = (best_alg - GUARANTEE * best_opt).sign() >= 0
    return RatioTrace(records, best_alg / best_opt, best_step, meets, state)
