"""Command-line entry point: ``iptree infer|oracle|wlln|score|markov|bench|selfcheck``.

Results go to stdout, diagnostics to stderr. Exit codes: 0 ok, 2 parse or
validation error, 3 carrier mismatch, 4 enumeration cap exceeded, 5 invalid
plan.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from fractions import Fraction

from . import serialize as io
from ._numeric import fmt
from .errors import (
    CarrierMismatch,
    EnumerationCapExceeded,
    EpsilonOutOfRange,
    InvalidPlan,
    IPTreeError,
    RealizedNotInHorizon,
    SizeCapExceeded,
)

log = logging.getLogger("iptree")

EXIT_OK, EXIT_PARSE, EXIT_CARRIER, EXIT_CAP, EXIT_PLAN = 0, 2, 3, 4, 5


def _exit_code(exc: Exception) -> int:
    if isinstance(exc, CarrierMismatch):
        return EXIT_CARRIER
    if isinstance(exc, (EnumerationCapExceeded, SizeCapExceeded)):
        return EXIT_CAP
    if isinstance(exc, (InvalidPlan, RealizedNotInHorizon)):
        return EXIT_PLAN
    return EXIT_PARSE


def _number(text: str, exact: bool):
    return io.parse_number(text, exact, "command line")


def _load_tree(args):
    return io.parse_tree(io.load_file(args.tree), exact=args.exact)


def _load_gamble(args, tdoc=None):
    return io.parse_gamble(io.load_file(args.gamble), exact=args.exact, tree_doc=tdoc)


def _emit_json(obj):
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


# ---------------------------------------------------------------------------
# commands


def cmd_infer(args) -> int:
    from .inference import optimal_selection, predictive_lower, predictive_upper

    tdoc = _load_tree(args)
    f = _load_gamble(args, tdoc)
    t = args.at or tdoc.tree.root
    tdoc.tree.check(t)
    value = predictive_upper(tdoc.ipt, f, t) if args.upper else predictive_lower(tdoc.ipt, f, t)
    if args.witness:
        if args.upper:
            sigma = optimal_selection(tdoc.ipt, -f, t)
        else:
            sigma = optimal_selection(tdoc.ipt, f, t)
        _emit_json({"value": fmt(value, args.exact), "upper": bool(args.upper), "witness": io.dump_selection(sigma)})
    else:
        print(fmt(value, args.exact))
    return EXIT_OK


def cmd_oracle(args) -> int:
    from .oracle import credal_enumeration_lower

    tdoc = _load_tree(args)
    f = _load_gamble(args, tdoc)
    t = args.at or tdoc.tree.root
    tdoc.tree.check(t)
    res = credal_enumeration_lower(tdoc.ipt, f, t, cap=args.cap)
    print(fmt(res.value, args.exact))
    for s, i in res.assignment.items():
        print(f"{s}\t{i}")
    log.info("enumerated %d assignments", res.count)
    return EXIT_OK


def cmd_wlln(args) -> int:
    from .laws import verify_wlln, witness_slack, wlln_witness_selection

    tdoc = _load_tree(args)
    plan = io.parse_plan(io.load_file(args.plan), tdoc, exact=args.exact)
    eps = _number(args.epsilon, args.exact)
    rep = verify_wlln(tdoc.ipt, plan, eps, oracle=args.oracle, cap=args.cap)
    out = {
        "exact_lower": fmt(rep.exact_lower, args.exact),
        "bound": fmt(rep.bound),
        "holds": bool(rep.holds),
        "N_U": rep.N,
        "B": fmt(rep.B, args.exact),
        "witness_alpha": None,
        "witness_slack": None,
    }
    if rep.oracle_lower is not None:
        out["oracle_lower"] = fmt(rep.oracle_lower, args.exact)
    try:
        _, alpha = wlln_witness_selection(tdoc.ipt, plan, eps)
        out["witness_alpha"] = fmt(alpha)
        out["witness_slack"] = fmt(witness_slack(tdoc.ipt, plan, eps))
    except EpsilonOutOfRange as exc:
        log.info("%s", exc)
    _emit_json(out)
    return EXIT_OK


def cmd_score(args) -> int:
    from .laws import gain_gamble, prequential_score

    tdoc = _load_tree(args)
    plan = io.parse_plan(io.load_file(args.plan), tdoc, exact=args.exact)
    score = prequential_score(tdoc.ipt, plan, args.realized)
    g = gain_gamble(tdoc.ipt, plan)[args.realized]
    log.info("average gain at %s: %s", args.realized, fmt(g, args.exact))
    print(fmt(score))
    return EXIT_OK


def _horizons(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            a, b = part.split("..", 1)
            out.extend(range(int(a), int(b) + 1))
        elif part:
            out.append(int(part))
    if not out:
        raise ValueError("empty horizon list")
    return out


def _write_bench(rows):
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["n", "t_operator_ms", "t_enum_ms", "value_operator", "value_enum"])
    for r in rows:
        w.writerow([
            r["n"],
            f"{r['t_operator_ms']:.6g}",
            "" if r["t_enum_ms"] is None else f"{r['t_enum_ms']:.6g}",
            fmt(r["value_operator"]),
            "" if r["value_enum"] is None else fmt(r["value_enum"]),
        ])


def cmd_markov(args) -> int:
    from .markov import benchmark_scaling, state_lower_prevision, state_upper_prevision

    chain = io.parse_chain(io.load_file(args.chain), exact=args.exact)
    f = _load_gamble(args)
    if args.bench:
        try:
            hs = _horizons(args.bench)
        except ValueError as exc:
            log.error("bad --bench list: %s", exc)
            return EXIT_PARSE
        _write_bench(benchmark_scaling(chain, hs, f, cap=args.cap))
        return EXIT_OK
    if args.n is None:
        log.error("give -n N or --bench LIST")
        return EXIT_PARSE
    fn = state_upper_prevision if args.upper else state_lower_prevision
    print(fmt(fn(chain, f, args.n), args.exact))
    return EXIT_OK


def cmd_bench(args) -> int:
    """Scaling study on the built-in two-state chain, or a large random chain."""
    import time

    from .gambles import Gamble
    from .markov import benchmark_scaling, scale_chain, state_lower_prevision, two_state_chain

    if args.scale:
        chain = scale_chain(args.states, args.vertices, seed=args.seed)
        f = Gamble({x: float(i) for i, x in enumerate(chain.states)})
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(["n", "t_operator_ms", "value_operator"])
        for n in _horizons(args.horizons or "10,100,1000,10000,100000"):
            t0 = time.perf_counter()
            v = state_lower_prevision(chain, f, n)
            w.writerow([n, f"{(time.perf_counter() - t0) * 1e3:.6g}", fmt(v)])
        return EXIT_OK
    chain = two_state_chain()
    _write_bench(benchmark_scaling(chain, _horizons(args.horizons or "1..6"), cap=args.cap))
    return EXIT_OK


def cmd_selfcheck(args) -> int:
    """Recompute the worked examples; print one line per check."""
    from .desirability import conditional_lower, conditional_lower_on_partition, lower_prevision
    from .fixtures import URN_SPACE, coins, urn_assessment, urn_tree
    from .gambles import Gamble
    from .inference import predictive_lower, predictive_upper
    from .markov import unroll_to_tree, two_state_chain
    from .oracle import credal_enumeration_lower

    checks = []
    a = urn_assessment()
    Ig = Gamble.indicator(URN_SPACE, ["g"])
    checks.append(("urn lower prevision of {g} is 1/4", lower_prevision(a, Ig) == Fraction(1, 4)))
    checks.append(("urn conditional on {r,g} is 1/3", conditional_lower(a, Ig, ["r", "g"]) == Fraction(1, 3)))
    checks.append(("urn conditional on {b} is 0", conditional_lower(a, Ig, ["b"]) == 0))
    cond = conditional_lower_on_partition(a, Ig, [["r", "g"], ["b"]])
    checks.append(("urn iterated lower prevision is 1/6", lower_prevision(a, cond) == Fraction(1, 6)))
    checks.append(("urn tree agrees with the assessment", predictive_lower(urn_tree(), Ig) == Fraction(1, 4)))
    d = Fraction(1, 10)
    ok = True
    for n in range(1, 8):
        ipt = coins(n, d)
        f = Gamble.indicator(ipt.tree.terminals, [f"h{n}"])
        for k in range(n):
            ok &= predictive_lower(ipt, f, f"h{k}") == (Fraction(1, 2) - d) ** (n - k)
            ok &= predictive_upper(ipt, f, f"h{k}") == (Fraction(1, 2) + d) ** (n - k)
    checks.append(("coins lower and upper probabilities of h_n", ok))
    ipt = coins(3, d)
    f = Gamble.indicator(ipt.tree.terminals, ["h3"])
    checks.append(("coins oracle equals recursion", credal_enumeration_lower(ipt, f).value == predictive_lower(ipt, f)))
    checks.append(("two-state chain unrolls to 15 situations at N=3", len(unroll_to_tree(two_state_chain(), 3).ipt.tree) == 15))
    failed = 0
    for name, passed in checks:
        print(f"{'PASS' if passed else 'FAIL'}  {name}")
        failed += not passed
    return 1 if failed else EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="iptree", description="Inference in imprecise probability trees.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, exact=True):
        if exact:
            sp.add_argument("--exact", action="store_true", help="rational arithmetic; print p/q")

    sp = sub.add_parser("infer", help="predictive lower (or upper) prevision")
    sp.add_argument("tree")
    sp.add_argument("gamble")
    sp.add_argument("--at", help="situation to condition on (default: root)")
    sp.add_argument("--upper", action="store_true")
    sp.add_argument("--witness", action="store_true", help="also emit an optimal selection")
    common(sp)
    sp.set_defaults(func=cmd_infer)

    sp = sub.add_parser("oracle", help="brute-force credal enumeration")
    sp.add_argument("tree")
    sp.add_argument("gamble")
    sp.add_argument("--at")
    sp.add_argument("--cap", type=int, default=None, help="maximum number of vertex assignments")
    common(sp)
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("wlln", help="check the weak law bound for a commitment plan")
    sp.add_argument("tree")
    sp.add_argument("plan")
    sp.add_argument("--epsilon", required=True)
    sp.add_argument("--oracle", action="store_true", help="cross-check with credal enumeration")
    sp.add_argument("--cap", type=int, default=None)
    common(sp)
    sp.set_defaults(func=cmd_wlln)

    sp = sub.add_parser("score", help="prequential score of a realized horizon situation")
    sp.add_argument("tree")
    sp.add_argument("plan")
    sp.add_argument("--realized", required=True)
    common(sp)
    sp.set_defaults(func=cmd_score)

    sp = sub.add_parser("markov", help="imprecise Markov chain lower prevision or timing")
    sp.add_argument("chain")
    sp.add_argument("gamble")
    sp.add_argument("-n", type=int)
    sp.add_argument("--upper", action="store_true")
    sp.add_argument("--bench", help="horizons, e.g. 2,3,4 or 2..12; writes CSV")
    sp.add_argument("--cap", type=int, default=None)
    common(sp)
    sp.set_defaults(func=cmd_markov)

    sp = sub.add_parser("bench", help="built-in scaling study (CSV)")
    sp.add_argument("--horizons")
    sp.add_argument("--cap", type=int, default=None)
    sp.add_argument("--scale", action="store_true", help="operator only, on a larger random chain")
    sp.add_argument("--states", type=int, default=10)
    sp.add_argument("--vertices", type=int, default=4)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_bench)

    sp = sub.add_parser("selfcheck", help="recompute the worked examples")
    sp.set_defaults(func=cmd_selfcheck)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="iptree: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except IPTreeError as exc:
        print(f"iptree: error: {exc}", file=sys.stderr)
        return _exit_code(exc)
    except (ValueError, TypeError) as exc:
        print(f"iptree: error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
