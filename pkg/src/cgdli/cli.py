"""Command-line frontend.

Exit codes: 0 success, 1 property refuted or strategy losing, 2 input
error, 3 enumeration cap exceeded. ``solve`` exits 0 exactly when Player A
wins at the initial state. All inputs and machine outputs are JSON.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from typing import Any, Callable

from . import __version__, catalog, oracles
from .acceptance import CRITERIA
from .arena import (
    ConcurrentArena,
    arena_from_dict,
    arena_to_dict,
    classify,
    non_determined_states,
    undetermined_witness,
)
from .exact import format_fraction
from .gadgets import (
    build_open_counterexample,
    build_two_tail_gadget,
    parse_lasso,
    refute_winning_up_to_memory,
    strong_reach,
)
from .gameform import (
    I3,
    I4,
    I5,
    MATCHING_PENNIES,
    GameForm,
    ValidationError,
    find_similar_tree,
    form_from_dict,
    sim_check,
    tree_from_obj,
    tree_to_gameform,
    tree_to_obj,
    undetermined_valuation,
)
from .generate import random_det_arena, random_form, random_nfa, random_stochastic_arena, random_tree
from .nash import PriorityPartition, find_positional_ne, prefs_from_dict
from .semantics import CapExceeded, DEFAULT_CAP, bruteforce_value, certify_winning
from .solve import solve_concurrent, threshold_objective, zielonka
from .strategy import par_strategy, seq_strategy, strategy_from_dict
from .transform import (
    ParityObjective,
    monitor_from_dict,
    monitor_product,
    nfa_from_dict,
    nfa_lift,
    nfa_project,
    objective_from_dict,
    seq_objective,
    sequentialize,
)


class InputError(Exception):
    """Unreadable or malformed input file."""


def _load(path: str) -> Any:
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


def _emit(args: argparse.Namespace, doc: dict, human: Callable[[], list[str]] | None = None) -> None:
    if args.json or human is None:
        print(json.dumps(doc, sort_keys=True, indent=2))
    else:
        for line in human():
            print(line)


def _arena(args: argparse.Namespace) -> ConcurrentArena:
    if not args.arena:
        raise InputError("--arena is required")
    return arena_from_dict(_load(args.arena))


def _game(args: argparse.Namespace) -> tuple[ConcurrentArena, ParityObjective]:
    """Arena with its objective, taken from --parity or from a --monitor product."""
    arena = _arena(args)
    if getattr(args, "monitor", None):
        return monitor_product(arena, monitor_from_dict(_load(args.monitor)))
    if getattr(args, "parity", None):
        obj = objective_from_dict(_load(args.parity))
        obj.check(arena)
        return arena, obj
    raise InputError("give --parity or --monitor")


def _bool(x: bool) -> str:
    return "true" if x else "false"


# ---------------------------------------------------------------------------
# gf

NAMED_FORMS = {"matching-pennies": MATCHING_PENNIES, "i3": I3, "i4": I4, "i5": I5}


def _form_doc(form: GameForm) -> dict:
    return {"cols": list(form.cols), "outcomes": list(form.outcomes), "rows": list(form.rows),
            "table": [list(r) for r in form.table]}


def cmd_gf_analyze(args: argparse.Namespace) -> int:
    form = form_from_dict(_load(args.file))
    witness = undetermined_valuation(form)
    doc = {"determined": witness is None, "witness": None if witness is None else sorted(witness)}

    def human() -> list[str]:
        lines = [f"determined: {_bool(witness is None)}"]
        if witness is not None:
            lines.append(f"no winner when A wants: {{{', '.join(sorted(witness))}}}")
        return lines

    _emit(args, doc, human)
    return 0


def cmd_gf_sim(args: argparse.Namespace) -> int:
    f = form_from_dict(_load(args.left))
    g = form_from_dict(_load(args.right))
    ok = sim_check(f, g, args.relation)
    _emit(args, {"relation": args.relation, "similar": ok}, lambda: [f"similar ({args.relation}): {_bool(ok)}"])
    return 0 if ok else 1


def cmd_gf_tree(args: argparse.Namespace) -> int:
    form = tree_to_gameform(tree_from_obj(_load(args.file)), args.mode)
    _emit(args, _form_doc(form))
    return 0


def cmd_gf_find_tree(args: argparse.Namespace) -> int:
    form = form_from_dict(_load(args.file))
    tree = find_similar_tree(form, args.relation, args.depth, args.leaves, cap=args.cap)
    _emit(args, {"tree": None if tree is None else tree_to_obj(tree)})
    return 0 if tree is not None else 1


def cmd_gf_export(args: argparse.Namespace) -> int:
    _emit(args, _form_doc(NAMED_FORMS[args.name]))
    return 0


# ---------------------------------------------------------------------------
# arena

NAMED_ARENAS: dict[str, Callable[[], ConcurrentArena]] = {
    "avoid-y": catalog.avoid_y_turn_based,
    "retry-with-nature": catalog.retry_with_nature,
    "matching-pennies": catalog.matching_pennies_arena,
    "hide-or-run": catalog.hide_or_run,
    "avoid-z": catalog.avoid_z_three_rows,
    "mismatch-loop": catalog.mismatch_loop,
}


def cmd_arena_check(args: argparse.Namespace) -> int:
    arena = _arena(args)
    cls = classify(arena)
    bad = non_determined_states(arena)
    doc = {
        "deterministic": cls.deterministic,
        "locally_determined": cls.locally_determined,
        "non_determined_states": {q: sorted(undetermined_witness(arena, q) or ()) for q in bad},
        "turn_based": cls.turn_based,
    }

    def human() -> list[str]:
        lines = [f"deterministic: {_bool(cls.deterministic)}", f"turn-based: {_bool(cls.turn_based)}",
                 f"locally determined: {_bool(cls.locally_determined)}"]
        lines += [f"state {q}: local interaction not determined" for q in bad]
        return lines

    _emit(args, doc, human)
    return 0


def cmd_arena_export(args: argparse.Namespace) -> int:
    if args.name == "seen-y":
        _emit(args, catalog.seen_y().to_dict())
    else:
        _emit(args, arena_to_dict(NAMED_ARENAS[args.name]()))
    return 0


# ---------------------------------------------------------------------------
# transform


def cmd_transform_seq(args: argparse.Namespace) -> int:
    arena = _arena(args)
    seq = sequentialize(arena)
    doc: dict[str, Any] = {
        "arena": arena_to_dict(seq.arena),
        "kc": seq.kc,
        "vb": {f"{q},{a}": v for (q, a), v in seq.v_b.items()},
    }
    if args.parity:
        obj = objective_from_dict(_load(args.parity))
        obj.check(arena)
        doc["parity"] = seq_objective(obj, seq.kc).to_dict()
    _emit(args, doc)
    return 0


def cmd_transform_product(args: argparse.Namespace) -> int:
    arena = _arena(args)
    game, obj = monitor_product(arena, monitor_from_dict(_load(args.monitor)))
    _emit(args, {"arena": arena_to_dict(game), "parity": obj.to_dict()})
    return 0


def cmd_transform_threshold(args: argparse.Namespace) -> int:
    obj = objective_from_dict(_load(args.parity))
    h = [int(k) for k in args.set.split(",") if k.strip()]
    _emit(args, threshold_objective(obj, h, args.n).to_dict())
    return 0


def cmd_transform_nfa(args: argparse.Namespace) -> int:
    n = nfa_from_dict(_load(args.nfa))
    out = nfa_project(n, args.kc) if args.which == "project" else nfa_lift(n, args.kc)
    _emit(args, out.to_dict())
    return 0


# ---------------------------------------------------------------------------
# solve, value, strategy


def cmd_solve(args: argparse.Namespace) -> int:
    arena, obj = _game(args)
    cls = classify(arena)
    if args.via_seq or not cls.turn_based:
        sol = solve_concurrent(arena, obj)
        winner, strategy, route = sol.winner, sol.strategy, "seq"
    else:
        res = zielonka(arena, obj)
        winner = res.winner[arena.q0]
        strategy, route = res.strategies[winner], "zielonka"
    verified = None
    if args.verify:
        verified = certify_winning(arena, strategy, obj)
    doc = {"route": route, "strategy": strategy.to_dict(), "verified": verified, "winner": winner}

    def human() -> list[str]:
        lines = [f"winner: {winner}"]
        lines += [f"  {q}: {strategy.action(strategy.skeleton.m_init, q)}" for q in arena.states]
        if verified is not None:
            lines.append(f"verified: {_bool(verified)}")
        return lines

    _emit(args, doc, human)
    # scripts can branch on the exit code: 0 when A wins at q0
    return 0 if winner == "A" and verified is not False else 1


def cmd_value(args: argparse.Namespace) -> int:
    arena, obj = _game(args)
    report = bruteforce_value(arena, obj, args.cap)

    def human() -> list[str]:
        if report.equal:
            return [format_fraction(report.maximin)]
        return [f"maximin: {format_fraction(report.maximin)}", f"minimax: {format_fraction(report.minimax)}"]

    _emit(args, report.to_dict(), human)
    return 0


def cmd_strategy_certify(args: argparse.Namespace) -> int:
    arena, obj = _game(args)
    s = strategy_from_dict(_load(args.strategy), arena)
    ok = certify_winning(arena, s, obj)
    _emit(args, {"player": s.player, "winning": ok}, lambda: [f"winning for {s.player}: {_bool(ok)}"])
    return 0 if ok else 1


def cmd_strategy_transfer(args: argparse.Namespace) -> int:
    arena = _arena(args)
    seq = sequentialize(arena)
    if args.direction == "seq":
        out = seq_strategy(strategy_from_dict(_load(args.strategy), arena), seq)
    else:
        out = par_strategy(strategy_from_dict(_load(args.strategy), seq.arena), seq)
    _emit(args, out.to_dict())
    return 0


def cmd_nash(args: argparse.Namespace) -> int:
    arena = _arena(args)
    obj = objective_from_dict(_load(args.parity))
    obj.check(arena)
    part = PriorityPartition(obj.max, obj)
    witness = find_positional_ne(arena, part, prefs_from_dict(_load(args.prefs)), args.cap)
    _emit(args, witness.to_dict())
    return 0


# ---------------------------------------------------------------------------
# gadget


def cmd_gadget_two_tail(args: argparse.Namespace) -> int:
    form = form_from_dict(_load(args.form))
    arena, monitor = build_two_tail_gadget(form, parse_lasso(args.win), parse_lasso(args.lose))
    _emit(args, {"arena": arena_to_dict(arena), "monitor": monitor.to_dict()})
    return 0


def cmd_gadget_open(args: argparse.Namespace) -> int:
    arena, monitor = build_open_counterexample(_arena(args), args.state)
    _emit(args, {"arena": arena_to_dict(arena), "monitor": monitor.to_dict()})
    return 0


def cmd_gadget_levels(args: argparse.Namespace) -> int:
    levels = strong_reach(_arena(args), args.state)
    doc = {q: {"level": i, "player": p} for q, (i, p) in sorted(levels.levels.items())}
    _emit(args, doc, lambda: [f"{q}: {levels.label(q)}" for q in sorted(levels.levels)])
    return 0


def cmd_gadget_refute(args: argparse.Namespace) -> int:
    arena = _arena(args)
    monitor = monitor_from_dict(_load(args.monitor)) if args.monitor else None
    obj = objective_from_dict(_load(args.parity)) if args.parity else None
    if monitor is None and obj is None:
        raise InputError("give --parity or --monitor")
    results = {p: refute_winning_up_to_memory(arena, monitor, p, args.mem, obj, args.cap) for p in args.player}
    _emit(args, {"max_mem": args.mem, "refuted": results},
          lambda: [f"no winning strategy for {p} with memory <= {args.mem}: {_bool(r)}" for p, r in results.items()])
    return 0 if all(results.values()) else 1


# ---------------------------------------------------------------------------
# oracle


def cmd_oracle_value(args: argparse.Namespace) -> int:
    arena, obj = _game(args)
    if classify(arena).deterministic:
        winner = oracles.positional_winner(arena, obj)
        _emit(args, {"winner": winner}, lambda: [f"winner: {winner}"])
    else:
        report = bruteforce_value(arena, obj, args.cap)
        _emit(args, report.to_dict())
    return 0


def cmd_oracle_gf(args: argparse.Namespace) -> int:
    form = form_from_dict(_load(args.file))
    ok = oracles.determined_by_quantifiers(form)
    _emit(args, {"determined": ok}, lambda: [f"determined: {_bool(ok)}"])
    return 0


def gen_instance(kind: str, seed: int) -> dict:
    """Instance number ``seed`` of a family: random.Random(seed) fed to the
    generator with its default size bounds."""
    rng = random.Random(seed)
    if kind == "form":
        return _form_doc(random_form(rng))
    if kind == "tree":
        return {"tree": tree_to_obj(random_tree(rng, 3, ("x", "y", "z")))}
    if kind == "nfa":
        return random_nfa(rng, ("x", "y", "kC")).to_dict()
    if kind in ("det-arena", "stoch-arena"):
        make = random_det_arena if kind == "det-arena" else random_stochastic_arena
        arena, obj = make(rng)
        return {"arena": arena_to_dict(arena), "parity": obj.to_dict()}
    raise InputError(f"unknown instance family {kind!r}")


def cmd_oracle_gen(args: argparse.Namespace) -> int:
    _emit(args, gen_instance(args.kind, args.seed))
    return 0


# ---------------------------------------------------------------------------
# repro


def cmd_repro(args: argparse.Namespace) -> int:
    chosen = args.only or list(range(1, len(CRITERIA) + 1))
    results = [CRITERIA[i - 1](args.seed) for i in chosen]
    if args.json:
        print(json.dumps([
            {"criterion": r.number, "detail": r.detail, "limit": r.limit, "ok": r.ok,
             "seconds": round(r.seconds, 3), "title": r.title}
            for r in results
        ], indent=2))
    else:
        for r in results:
            print(r.line())
        print(f"{sum(r.ok for r in results)}/{len(results)} criteria passed")
    return 0 if all(r.ok for r in results) else 1


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")

    def game_flags(p: argparse.ArgumentParser, monitor: bool = True) -> None:
        p.add_argument("--arena", required=True)
        p.add_argument("--parity")
        if monitor:
            p.add_argument("--monitor")

    parser = argparse.ArgumentParser(prog="cgdli", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    gf = sub.add_parser("gf", help="game forms").add_subparsers(dest="op", required=True)
    p = gf.add_parser("analyze", parents=[common])
    p.add_argument("file")
    p.set_defaults(func=cmd_gf_analyze)
    p = gf.add_parser("sim", parents=[common])
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--relation", choices=("d", "offer", "w"), default="w")
    p.set_defaults(func=cmd_gf_sim)
    p = gf.add_parser("tree", parents=[common])
    p.add_argument("file")
    p.add_argument("--mode", choices=("minimalist", "complete"), default="minimalist")
    p.set_defaults(func=cmd_gf_tree)
    p = gf.add_parser("find-tree", parents=[common])
    p.add_argument("file")
    p.add_argument("--relation", choices=("d", "offer", "w"), default="offer")
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--leaves", type=int, default=8)
    p.add_argument("--cap", type=int, default=200_000)
    p.set_defaults(func=cmd_gf_find_tree)
    p = gf.add_parser("export", parents=[common])
    p.add_argument("name", choices=sorted(NAMED_FORMS))
    p.set_defaults(func=cmd_gf_export)

    ar = sub.add_parser("arena", help="arenas").add_subparsers(dest="op", required=True)
    p = ar.add_parser("check", parents=[common])
    p.add_argument("--arena", required=True)
    p.set_defaults(func=cmd_arena_check)
    p = ar.add_parser("export", parents=[common])
    p.add_argument("name", choices=sorted(NAMED_ARENAS) + ["seen-y"])
    p.set_defaults(func=cmd_arena_export)

    tr = sub.add_parser("transform", help="sequentialization and products").add_subparsers(dest="op", required=True)
    p = tr.add_parser("seq", parents=[common])
    game_flags(p, monitor=False)
    p.set_defaults(func=cmd_transform_seq)
    p = tr.add_parser("product", parents=[common])
    p.add_argument("--arena", required=True)
    p.add_argument("--monitor", required=True)
    p.set_defaults(func=cmd_transform_product)
    p = tr.add_parser("threshold", parents=[common])
    p.add_argument("--parity", required=True)
    p.add_argument("--set", required=True, help="comma-separated priorities")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_transform_threshold)
    p = tr.add_parser("nfa", parents=[common])
    p.add_argument("which", choices=("project", "lift"))
    p.add_argument("--nfa", required=True)
    p.add_argument("--kc", default="kC")
    p.set_defaults(func=cmd_transform_nfa)

    p = sub.add_parser("solve", parents=[common], help="winner and winning strategy")
    game_flags(p)
    p.add_argument("--via-seq", action="store_true", help="always go through Seq(C)")
    p.add_argument("--verify", action="store_true", help="re-certify the strategy")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("value", parents=[common], help="exact value over positional profiles")
    game_flags(p)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.set_defaults(func=cmd_value)

    st = sub.add_parser("strategy", help="finite-memory strategies").add_subparsers(dest="op", required=True)
    p = st.add_parser("certify", parents=[common])
    game_flags(p)
    p.add_argument("--strategy", required=True)
    p.set_defaults(func=cmd_strategy_certify)
    p = st.add_parser("transfer", parents=[common])
    p.add_argument("direction", choices=("seq", "par"))
    p.add_argument("--arena", required=True, help="the concurrent arena C")
    p.add_argument("--strategy", required=True)
    p.set_defaults(func=cmd_strategy_transfer)

    p = sub.add_parser("nash", parents=[common], help="positional Nash equilibrium")
    p.add_argument("--arena", required=True)
    p.add_argument("--parity", required=True, help="priorities 0..n of the colors")
    p.add_argument("--prefs", required=True)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.set_defaults(func=cmd_nash)

    ga = sub.add_parser("gadget", help="counterexample constructions").add_subparsers(dest="op", required=True)
    p = ga.add_parser("two-tail", parents=[common])
    p.add_argument("--form", required=True)
    p.add_argument("--win", required=True, help='lasso such as "x y|z"')
    p.add_argument("--lose", required=True)
    p.set_defaults(func=cmd_gadget_two_tail)
    p = ga.add_parser("open", parents=[common])
    p.add_argument("--arena", required=True)
    p.add_argument("--state", required=True)
    p.set_defaults(func=cmd_gadget_open)
    p = ga.add_parser("levels", parents=[common])
    p.add_argument("--arena", required=True)
    p.add_argument("--state", required=True)
    p.set_defaults(func=cmd_gadget_levels)
    p = ga.add_parser("refute", parents=[common])
    game_flags(p)
    p.add_argument("--player", nargs="+", choices=("A", "B"), default=["A", "B"])
    p.add_argument("--mem", type=int, default=3)
    p.add_argument("--cap", type=int, default=2_000_000)
    p.set_defaults(func=cmd_gadget_refute)

    orc = sub.add_parser("oracle", help="brute-force backends").add_subparsers(dest="op", required=True)
    p = orc.add_parser("value", parents=[common])
    game_flags(p)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.set_defaults(func=cmd_oracle_value)
    p = orc.add_parser("gf", parents=[common])
    p.add_argument("file")
    p.set_defaults(func=cmd_oracle_gf)
    p = orc.add_parser("gen", parents=[common])
    p.add_argument("kind", choices=("form", "tree", "nfa", "det-arena", "stoch-arena"))
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_oracle_gen)

    p = sub.add_parser("repro", parents=[common], help="run the acceptance suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--only", type=int, nargs="+", choices=range(1, len(CRITERIA) + 1))
    p.set_defaults(func=cmd_repro)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (CapExceeded, OverflowError) as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return 3
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
