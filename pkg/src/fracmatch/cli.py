"""Command-line front end: replay, fuzz, bounds, portfolio runs, oracle.

Every subcommand prints a human-readable summary on stdout; the run and fuzz
subcommands can additionally write a JSON-lines trace.  Exit codes: 0 success,
2 instance or configuration error, 3 invariant or guarantee failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from .engine import MatchState, arrive, arrival_event, check_invariants
from .golden import GUARANTEE, Rat, decimal_str
from .instances import (
    ArrivalStream,
    InstanceError,
    builtin_instance,
    load_instance,
    random_stream,
)
from .lp import (
    build_deg4_lp,
    build_integral_deg3_lp,
    build_minindex_lp,
    lp_text,
    simplex_max,
)
from .matching import IncrementalMatching, competitive_trace, max_matching
from .minindex import (
    ProbabilityError,
    minindex_expected,
    minindex_new,
    minindex_run,
    placement_events,
)

OK, CONFIG_ERROR, INVARIANT_FAILURE = 0, 2, 3


@dataclass
class RunConfig:
    instance: str
    checkpoints: str = "arrival"
    strict: bool = True
    output: str | None = None


def _resolve_instance(spec: str) -> ArrivalStream:
    if spec.startswith("file:"):
        return load_instance(spec[5:], name=spec)
    return builtin_instance(spec)


def _emit(lines: list[str], output: str | None) -> None:
    if output is None:
        return
    text = "\n".join(lines) + ("\n" if lines else "")
    if output == "-":
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)


def _rational_decimal(q, places: int = 4) -> str:
    from .golden import GoldenNumber

    return decimal_str(GoldenNumber(q, 0), places)


def cmd_run(config: RunConfig) -> int:
    try:
        stream = _resolve_instance(config.instance)
        if stream.max_degree > 3:
            raise InstanceError(
                "online replay requires maximum degree three; "
                "use the bounds/oracle subcommands for this instance"
            )
        stream.validate_degrees()
    except (InstanceError, OSError) as exc:
        print(f"instance error: {exc}", file=sys.stderr)
        return CONFIG_ERROR
    lines: list[str] = []
    state = MatchState()
    oracle = IncrementalMatching()
    marks = set(stream.batch_marks or ())
    best = None  # (alg, opt, step)
    for step, (u, v) in enumerate(stream.arrivals, start=1):
        outcome = arrive(state, u, v, strict=config.strict)
        event = arrival_event(outcome)
        oracle.add_edge(u, v)
        checkpoint = config.checkpoints == "arrival" or step in marks
        if checkpoint and oracle.size:
            alg = state.alg_value()
            event["opt"] = oracle.size
            event["ratio"] = (alg / oracle.size).decimal(6)
            if best is None or (alg * best[1] - best[0] * oracle.size).sign() < 0:
                best = (alg, oracle.size, step)
        lines.append(json.dumps(event, sort_keys=True))
    report = check_invariants(state)
    alg = state.alg_value()
    meets = best is None or (best[0] - GUARANTEE * best[1]).sign() >= 0
    summary = {
        "summary": True,
        "instance": stream.name or config.instance,
        "edges": len(stream.arrivals),
        "alg": {"a": str(alg.a), "b": str(alg.b), "decimal": alg.decimal(6)},
        "opt": oracle.size,
        "min_ratio": (best[0] / best[1]).decimal(6) if best else None,
        "min_ratio_step": best[2] if best else None,
        "invariants": "pass" if report.ok and not state.first_violation else "fail",
        "meets_guarantee": bool(meets),
    }
    lines.append(json.dumps(summary, sort_keys=True))
    _emit(lines, config.output)
    print(
        f"{summary['instance']}: value {alg.decimal(6)} opt {oracle.size} "
        f"min-ratio {summary['min_ratio']} invariants {summary['invariants']} "
        f"guarantee {'met' if meets else 'VIOLATED'}"
    )
    if state.first_violation is not None or not report.ok:
        where = state.first_violation or next(iter(report.failures.items()), None)
        print(f"invariant failure: {where}", file=sys.stderr)
        return INVARIANT_FAILURE
    if not meets:
        return INVARIANT_FAILURE
    return OK


def cmd_fuzz(seed: int, count: int, edges: int, output: str | None) -> int:
    lines: list[str] = []
    failures = 0
    first_bad_seed = None
    for offset in range(count):
        s = seed + offset
        stream = random_stream(s, edges)
        trace = competitive_trace(stream)
        state = trace.state
        ok = (
            state.first_violation is None
            and check_invariants(state).ok
            and trace.meets_guarantee
        )
        if not ok:
            failures += 1
            if first_bad_seed is None:
                first_bad_seed = s
            lines.append(
                json.dumps(
                    {
                        "seed": s,
                        "violation": state.first_violation,
                        "min_ratio": trace.min_ratio.decimal(6)
                        if trace.min_ratio
                        else None,
                    },
                    sort_keys=True,
                )
            )
    lines.append(json.dumps({"runs": count, "failures": failures}, sort_keys=True))
    _emit(lines, output)
    if failures:
        print(
            f"fuzz: {failures}/{count} runs failed; replay with --seed {first_bad_seed}",
            file=sys.stderr,
        )
        return INVARIANT_FAILURE
    print(f"fuzz: {count} runs clean (seed {seed}, {edges} edges each)")
    return OK


def cmd_bounds(dump: str | None) -> int:
    from .instances import degree4_instance

    paper = {"minindex": "0.5556", "integral-deg3": "0.58065", "degree4": "0.58884"}
    programs = {
        "minindex": build_minindex_lp(),
        "integral-deg3": build_integral_deg3_lp(),
    }
    stream = degree4_instance()
    prefix: list = []
    mu = []
    for batch in stream.batches():
        prefix.extend(batch)
        mu.append(len(max_matching(prefix)))
    if tuple(mu) == stream.expected_opt_per_batch:
        programs["degree4"] = build_deg4_lp(stream)
    else:
        print(
            "degree4: blocked (reconstructed batch optima "
            f"{mu} differ from expected {list(stream.expected_opt_per_batch)})"
        )
    for name, lp in programs.items():
        sol = simplex_max(lp)
        if sol.status != "optimal":
            print(f"{name}: {sol.status}")
            return INVARIANT_FAILURE
        print(
            f"{name}: {sol.value} = {_rational_decimal(sol.value)} "
            f"(reported {paper[name]})"
        )
        if dump:
            path = f"{dump.rstrip('/')}/{name}.lp"
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(lp_text(lp))
            print(f"  wrote {path}")
    return OK


def cmd_minindex(family: int, n: int, probs: str, output: str | None) -> int:
    from .instances import minindex_family1, minindex_family2

    try:
        stream = minindex_family1(n) if family == 1 else minindex_family2(n)
        values = [Rat(tok) for tok in probs.split(",")] if probs else None
        if values is None:
            values = [Rat(5, 9), Rat(3, 9), Rat(1, 9), Rat(0)]
        state = minindex_new(len(values), values)
    except (ValueError, ProbabilityError, ZeroDivisionError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return CONFIG_ERROR
    minindex_run(state, stream.arrivals)
    opt = len(max_matching(list(stream.arrivals)))
    expected = minindex_expected(state)
    ratio = expected / opt if opt else Rat(0)
    _emit([json.dumps(e, sort_keys=True) for e in placement_events(state)], output)
    print(
        f"family {family} n={n}: sizes {list(state.sizes())} "
        f"E[|M|] = {expected} opt = {opt} ratio = {ratio} "
        f"= {_rational_decimal(ratio)} rejected = {state.rejected}"
    )
    return OK


def cmd_oracle(instance: str, output: str | None) -> int:
    try:
        stream = _resolve_instance(instance)
        stream.validate_degrees()
    except (InstanceError, OSError) as exc:
        print(f"instance error: {exc}", file=sys.stderr)
        return CONFIG_ERROR
    lines = []
    prefix: list = []
    mu = []
    for index, batch in enumerate(stream.batches(), start=1):
        prefix.extend(batch)
        size = len(max_matching(prefix))
        mu.append(size)
        lines.append(json.dumps({"batch": index, "edges": len(prefix), "opt": size}))
    _emit(lines, output)
    print(f"{stream.name or instance}: opt {mu[-1]} per-batch {mu}")
    if stream.expected_opt_per_batch is not None:
        expected = list(stream.expected_opt_per_batch)
        verdict = "match" if mu == expected else f"MISMATCH (expected {expected})"
        print(f"declared optima: {verdict}")
        if mu != expected:
            return INVARIANT_FAILURE
    return OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fracmatch",
        description="online fractional matching workbench (exact arithmetic)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="replay an instance through the online matcher")
    run.add_argument("--instance", required=True, help="builtin spec or file:PATH")
    run.add_argument("--checkpoints", choices=("arrival", "batch"), default="arrival")
    run.add_argument("--no-strict", action="store_true", help="skip per-arrival checks")
    run.add_argument("--output", help="write JSON-lines trace to this path ('-' stdout)")

    fuzz = sub.add_parser("fuzz", help="run many random degree-3 streams strictly")
    fuzz.add_argument("--seed", type=int, default=0)
    fuzz.add_argument("--count", type=int, required=True)
    fuzz.add_argument("--edges", type=int, default=40)
    fuzz.add_argument("--output", help="write JSON-lines report to this path")

    bounds = sub.add_parser("bounds", help="build and solve the three bound programs")
    bounds.add_argument("--dump", help="directory for LP text dumps")

    mi = sub.add_parser("minindex", help="replay a hard family through the portfolio")
    mi.add_argument("--family", type=int, choices=(1, 2), required=True)
    mi.add_argument("--n", type=int, required=True)
    mi.add_argument("--p", default="", help="comma-separated probabilities, e.g. 5/9,3/9,1/9,0")
    mi.add_argument("--output", help="write JSON-lines placements to this path")

    oracle = sub.add_parser("oracle", help="offline optimum of an instance, per batch")
    oracle.add_argument("--instance", required=True)
    oracle.add_argument("--output", help="write JSON-lines optima to this path")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "run":
        config = RunConfig(
            instance=args.instance,
            checkpoints=args.checkpoints,
            strict=not args.no_strict,
            output=args.output,
        )
        return cmd_run(config)
    if args.command == "fuzz":
        if args.count < 0 or args.edges < 1:
            print("configuration error: bad fuzz parameters", file=sys.stderr)
            return CONFIG_ERROR
        return cmd_fuzz(args.seed, args.count, args.edges, args.output)
    if args.command == "bounds":
        return cmd_bounds(args.dump)
    if args.command == "minindex":
        return cmd_minindex(args.family, args.n, args.p, args.output)
    return cmd_oracle(args.instance, args.output)


def entry() -> None:  # console-script hook
    raise SystemExit(main())
