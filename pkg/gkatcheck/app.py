#!/usr/bin/env python3
# -*- coding: utf-8 -*-
# gkatcheck/app.py - command-line front end

"""
gkatcheck: decide propositional equivalence of (G)KAT programs.

Exit status: 0 equivalent / inclusion holds / all laws pass,
1 inequivalent / a law failed, 2 usage, parse or format error,
3 resource limit (too many tests, state or string ceilings).
"""

import argparse
import dataclasses
import json
import logging
import sys
from typing import List, Optional, Sequence

from .core.automata import build_gkat
from .core.config import Config, Limits, get_config, set_config
from .core.equivalence import Mode, Pipeline, check, explain, verdict_to_json
from .core.errors import AtomBlowup, GkatError, ResourceLimitExceeded, UsageError
from .core.export import to_dot, to_json
from .core.generators import loop_tower, random_corpus
from .core.kat_automata import build_kat
from .core.laws import (
    DEFAULT_LAW_UNIVERSE, Family, catalogue_to_json, get_law_registry, list_laws, run_law,
)
from .core.semantics import lang_bounded, rel_sem, rel_sem_gkat, relation_to_json
from .core.syntax import Universe, size
from .utils.file_utils import (
    load_automaton, load_interpretation_file, load_program,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_DIFFERENT = 1
EXIT_USAGE = 2
EXIT_LIMIT = 3


# ===== ARGUMENTS =====

def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH",
                        help="config file (default: $GKATCHECK_CONFIG or ~/.config/gkatcheck/config.json)")
    common.add_argument("-v", "--verbose", action="count", default=0,
                        help="log to stderr: -v info, -vv debug")
    common.add_argument("--max-tests", type=int, metavar="N",
                        help="atom cap: refuse universes with more than N tests (default 12, hard max 20)")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog="gkatcheck",
        description="Decide equivalence of KAT and GKAT programs on guarded strings.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="compare two program files")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--mode", choices=[m.value for m in Mode],
                   help="lang (default), bisim, or incl (left included in right)")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--via-embedding", action="store_true",
                   help="allow comparing a .gkat file with a .kat file through the KAT embedding")
    p.add_argument("--pipeline", choices=[x.value for x in Pipeline], default=Pipeline.AUTO.value,
                   help="automaton construction (default auto: GKAT when both sides are GKAT)")
    p.add_argument("--stats", action="store_true", help="include exploration counts in JSON output")
    p.set_defaults(handler=cmd_check)

    p = sub.add_parser("dot", parents=[common], help="automaton of a program or fixture")
    p.add_argument("file", help=".gkat, .kat or automaton .json")
    p.add_argument("--format", choices=["dot", "json"], default="dot")
    p.set_defaults(handler=cmd_dot)

    p = sub.add_parser("lang", parents=[common], help="guarded strings up to a number of actions")
    p.add_argument("file")
    p.add_argument("--bound", type=int, metavar="N", help="maximum number of actions (default 3)")
    p.set_defaults(handler=cmd_lang)

    p = sub.add_parser("run", parents=[common], help="relational semantics under an interpretation")
    p.add_argument("file")
    p.add_argument("--interp", required=True, metavar="JSON", help="interpretation file")
    p.set_defaults(handler=cmd_run)

    p = sub.add_parser("laws", help="axiom catalogue")
    laws_sub = p.add_subparsers(dest="laws_command", required=True)
    lp = laws_sub.add_parser("list", parents=[common], help="print the catalogue")
    lp.add_argument("--family", choices=["kat", "gkat", "all"], default="all")
    lp.add_argument("--format", choices=["text", "json"], default="text")
    lp.set_defaults(handler=cmd_laws_list)
    lc = laws_sub.add_parser("check", parents=[common], help="check random instances")
    lc.add_argument("--family", choices=["kat", "gkat", "all"], default="all")
    lc.add_argument("--law", action="append", metavar="ID", help="only this law (repeatable)")
    lc.add_argument("--samples", type=int, metavar="N", help="instances per law (default 200)")
    lc.add_argument("--seed", type=int, metavar="S", help="random seed (default 0)")
    lc.add_argument("--depth", type=int, default=4, help="maximum expression depth")
    lc.set_defaults(handler=cmd_laws_check)

    p = sub.add_parser("stats", parents=[common],
                       help="automaton size and exploration counts on generated inputs")
    p.add_argument("--corpus", type=int, default=500, metavar="N", help="random expressions")
    p.add_argument("--seed", type=int, metavar="S")
    p.add_argument("--towers", default="50,100,200", metavar="K,K,...",
                   help="nested-loop depths")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(handler=cmd_stats)
    return parser


def _setup(args: argparse.Namespace) -> Limits:
    config = Config(args.config) if args.config else get_config()
    set_config(config)
    if args.verbose >= 2:
        level = logging.DEBUG
    elif args.verbose == 1:
        level = logging.INFO
    else:
        level = config.get_log_level()
    logging.basicConfig(level=level, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s", force=True)
    limits = config.get_limits()
    if args.max_tests is not None:
        if args.max_tests < 0:
            raise UsageError(f"--max-tests must be non-negative, got {args.max_tests}")
        limits = dataclasses.replace(limits, max_tests=args.max_tests)
    return limits


def _emit(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


# ===== COMMANDS =====

def cmd_check(args: argparse.Namespace, limits: Limits) -> int:
    left, right = load_program(args.left), load_program(args.right)
    pipeline = Pipeline(args.pipeline)
    if left.kind != right.kind:
        if not args.via_embedding:
            raise UsageError(f"cannot compare a .{left.kind} file with a .{right.kind} file "
                             f"(use --via-embedding)")
        pipeline = Pipeline.KAT
    universe = left.universe.merge(right.universe)
    mode = Mode(args.mode or get_config().get("default_mode", "lang"))
    verdict = check(left.expr, right.expr, mode, universe, pipeline, limits)

    if args.format == "json":
        _emit(verdict_to_json(verdict, with_stats=args.stats))
    else:
        if mode is Mode.INCL:
            headline = "included" if verdict.equivalent else "not included"
        else:
            headline = "equivalent" if verdict.equivalent else "inequivalent"
        _emit(f"{headline} ({mode.value})")
        if not verdict.equivalent:
            _emit(explain(verdict))
    return EXIT_OK if verdict.equivalent else EXIT_DIFFERENT


def cmd_dot(args: argparse.Namespace, limits: Limits) -> int:
    if args.file.lower().endswith(".json"):
        automaton = load_automaton(args.file)
    else:
        program = load_program(args.file)
        if program.kind == "gkat":
            automaton = build_gkat(program.expr, program.universe, limits)
        else:
            automaton = build_kat(program.expr, program.universe, limits)
    _emit(to_dot(automaton) if args.format == "dot" else to_json(automaton))
    return EXIT_OK


def cmd_lang(args: argparse.Namespace, limits: Limits) -> int:
    program = load_program(args.file)
    bound = args.bound if args.bound is not None else int(get_config().get("default_bound", 3))
    if bound < 0:
        raise UsageError("--bound must be non-negative")
    language = lang_bounded(program.expr, bound, program.universe, limits)
    lines = [w.format(program.universe) for w in language.sorted(program.universe)]
    if lines:
        _emit("\n".join(lines))
    return EXIT_OK


def cmd_run(args: argparse.Namespace, limits: Limits) -> int:
    program = load_program(args.file)
    interp = load_interpretation_file(args.interp)
    if program.kind == "gkat":
        relation = rel_sem_gkat(program.expr, interp)
    else:
        relation = rel_sem(program.expr, interp)
    _emit(relation_to_json(relation, interp.functional))
    return EXIT_OK


def _families(choice: str) -> List[Family]:
    return [Family.KAT, Family.GKAT] if choice == "all" else [Family(choice)]


def cmd_laws_list(args: argparse.Namespace, limits: Limits) -> int:
    if args.format == "json":
        _emit(catalogue_to_json(None if args.family == "all" else args.family))
        return EXIT_OK
    for family in _families(args.family):
        for law in list_laws(family):
            flags = []
            if not law.sound:
                flags.append("UNSOUND")
            if law.family is Family.GKAT and not law.bisim:
                flags.append("language only")
            suffix = f"  [{', '.join(flags)}]" if flags else ""
            _emit(f"{law.id:28} {law.render()}{suffix}")
    return EXIT_OK


def cmd_laws_check(args: argparse.Namespace, limits: Limits) -> int:
    config = get_config()
    samples = args.samples if args.samples is not None else int(config.get("law_samples", 200))
    seed = args.seed if args.seed is not None else int(config.get("default_seed", 0))
    if args.law:
        laws = [get_law_registry().get(law_id) for law_id in args.law]
    else:
        laws = [law for family in _families(args.family) for law in list_laws(family)]

    failed = 0
    for law in laws:
        report = run_law(law, samples, seed, DEFAULT_LAW_UNIVERSE, args.depth, limits)
        status = "ok" if report.ok else "FAIL"
        note = " (refuted as expected)" if not law.sound and report.ok else ""
        _emit(f"{status:4} {law.id}: {report.samples} instances, {report.vacuous} vacuous{note}")
        for failure in report.failures[:3]:
            _emit(f"     {failure}")
        for failure in report.bisim_failures[:3]:
            _emit(f"     bisim: {failure}")
        failed += not report.ok
    return EXIT_DIFFERENT if failed else EXIT_OK


def cmd_stats(args: argparse.Namespace, limits: Limits) -> int:
    seed = args.seed if args.seed is not None else int(get_config().get("default_seed", 0))
    corpus = random_corpus(DEFAULT_LAW_UNIVERSE, seed, args.corpus)
    max_ratio, violations = 0.0, 0
    for e in corpus:
        states = len(build_gkat(e, DEFAULT_LAW_UNIVERSE, limits, with_labels=False).reachable)
        max_ratio = max(max_ratio, states / size(e))
        violations += states > size(e) + 1

    try:
        depths = [int(k) for k in args.towers.split(",") if k.strip()]
    except ValueError:
        raise UsageError(f"--towers expects comma-separated integers, got {args.towers!r}") from None
    tower_universe = Universe(("b",), ("p",))
    towers = []
    for k in depths:
        e = loop_tower(k)
        verdict = check(e, e, Mode.BISIM, tower_universe, Pipeline.GKAT, limits)
        stats = verdict.stats
        towers.append({"depth": k, "size": size(e), "states": stats.left_states,
                       "pair_explorations": stats.pair_explorations})

    if args.format == "json":
        _emit(json.dumps({
            "corpus": {"expressions": len(corpus), "seed": seed,
                       "max_states_per_node": round(max_ratio, 4),
                       "bound_violations": violations},
            "towers": towers,
        }, indent=2))
    else:
        _emit(f"corpus: {len(corpus)} expressions (seed {seed}), "
              f"max states/size {max_ratio:.4f}, {violations} over size+1")
        for row in towers:
            _emit(f"tower k={row['depth']}: size {row['size']}, {row['states']} states, "
                  f"{row['pair_explorations']} pair explorations")
    return EXIT_OK if violations == 0 else EXIT_DIFFERENT


# ===== ENTRY =====

def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        limits = _setup(args)
        return args.handler(args, limits)
    except (AtomBlowup, ResourceLimitExceeded) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_LIMIT
    except (GkatError, KeyError) as e:
        message = e.args[0] if isinstance(e, KeyError) and e.args else e
        print(f"error: {message}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
