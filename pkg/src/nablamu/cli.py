"""Batch command-line surface over model, formula, and automaton files.

Every command reads the textual file formats, runs one library operation,
and prints either a human-readable report or one line of canonical JSON
(``--format structured``).  Outputs are deterministic: identical inputs and
flags produce byte-identical structured output.

Exit codes: 0 success / semantic yes; 1 semantic no; 2 parse, file, or
argument error; 3 formula outside the translatable fragment.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from .automata import normalize, parse_automaton, render_automaton
from .automata import accepts as automaton_accepts
from .coalgebra import (
    ColoredModel,
    PointedModel,
    greatest_bisimulation,
    parse_model,
    render_model,
)
from .functors import DEFAULT_CAP, CapExceeded, functor_tag, parse_functor
from .interpolation import entails_bounded, uniform_interpolant
from .laxcheck import check_lax_axioms, check_support_restriction
from .logic import eval_formula, free_props, parse_formula, render_formula
from .parsing import ParseError
from .projection import project_automaton
from .translation import UnsupportedFragment, automaton_to_formula, formula_to_automaton


@dataclass(frozen=True)
class RunConfig:
    """Bounds and output mode shared by every command."""

    functor: str = "powerset"
    fmt: str = "human"
    witness_bound: int = 3
    max_model_size: int = 3
    cap: int = DEFAULT_CAP


def _emit(cfg: RunConfig, data: dict, human: str) -> None:
    if cfg.fmt == "structured":
        print(json.dumps(data, sort_keys=True, separators=(",", ":")))
    else:
        print(human)


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _load_model(path: str):
    """Returns (model, point); the point defaults to the first declared state."""
    parsed = parse_model(_read(path))
    if isinstance(parsed, PointedModel):
        return parsed.model, parsed.point
    return parsed, parsed.states[0]


def _formula_text(args) -> str:
    if args.formula is not None and args.formula_file is not None:
        raise ValueError("give the formula inline or with --formula-file, not both")
    if args.formula is not None:
        return args.formula
    if args.formula_file is not None:
        return _read(args.formula_file)
    raise ValueError("no formula given; pass it inline or with --formula-file")


# --------------------------------------------------------------------------
# Commands


def cmd_check(cfg: RunConfig, args) -> int:
    M, point = _load_model(args.model)
    f = parse_formula(_formula_text(args), M.functor)
    extension = eval_formula(M, f)
    ext = sorted(extension)
    sat = point in extension
    verdict = "satisfied" if sat else "not satisfied"
    _emit(
        cfg,
        {"command": "check", "extension": ext, "point": point, "satisfied": sat},
        "extension {" + ", ".join(ext) + "}" + f"\npoint {point}: {verdict}",
    )
    return 0 if sat else 1


def cmd_bisim(cfg: RunConfig, args) -> int:
    A, pa = _load_model(args.model_a)
    B, pb = _load_model(args.model_b)
    if A.functor != B.functor:
        raise ValueError("the two models live over different functors")
    Q = frozenset(A.props) | frozenset(B.props)
    if args.disregard is not None:
        Q = Q - {args.disregard}
    R = greatest_bisimulation(A, B, Q)
    pairs = sorted(R.pairs)
    related = (pa, pb) in R.pairs
    human = "\n".join(f"{x} ~ {y}" for x, y in pairs) or "(empty relation)"
    human += f"\npoints {pa}, {pb}: " + ("related" if related else "not related")
    _emit(
        cfg,
        {
            "command": "bisim",
            "relation": [[x, y] for x, y in pairs],
            "points": [pa, pb],
            "related": related,
            "disregard": args.disregard,
        },
        human,
    )
    return 0 if related else 1


def cmd_automaton(cfg: RunConfig, args) -> int:
    aut = parse_automaton(_read(args.automaton))
    if args.sub == "accept":
        M, pt = _load_model(args.model)
        ok = automaton_accepts(aut, PointedModel(M, pt))
        _emit(
            cfg,
            {"command": "automaton.accept", "point": pt, "accepted": ok},
            f"point {pt}: " + ("accepted" if ok else "rejected"),
        )
        return 0 if ok else 1
    if args.sub == "to-formula":
        text = render_formula(automaton_to_formula(aut))
        _emit(cfg, {"command": "automaton.to-formula", "formula": text}, text)
        return 0
    if args.sub == "project":
        out = render_automaton(project_automaton(aut, args.prop, cfg.witness_bound))
        _emit(
            cfg,
            {"command": "automaton.project", "prop": args.prop, "automaton": out},
            out.rstrip("\n"),
        )
        return 0
    # normalize
    out = render_automaton(normalize(aut, cfg.witness_bound))
    _emit(cfg, {"command": "automaton.normalize", "automaton": out}, out.rstrip("\n"))
    return 0


def cmd_to_automaton(cfg: RunConfig, args) -> int:
    F = parse_functor(cfg.functor)
    f = parse_formula(_formula_text(args), F)
    out = render_automaton(formula_to_automaton(f, functor=F))
    _emit(cfg, {"command": "to-automaton", "automaton": out}, out.rstrip("\n"))
    return 0


def _parse_keep(text: str):
    text = text.strip()
    if text.startswith("{") and text.endswith("}"):
        text = text[1:-1]
    return tuple(sorted({w.strip() for w in text.split(",") if w.strip()}))


def cmd_interpolate(cfg: RunConfig, args) -> int:
    F = parse_functor(cfg.functor)
    f = parse_formula(_formula_text(args), F)
    keep = _parse_keep(args.keep)
    g = uniform_interpolant(f, keep, bound=cfg.witness_bound, functor=F)
    ok, cm = entails_bounded(f, g, cfg.max_model_size, functor=F)
    text = render_formula(g)
    vocab = sorted(free_props(g))
    human = (
        f"interpolant: {text}\nvocabulary: {{{', '.join(vocab)}}}\n"
        f"input entails interpolant up to {cfg.max_model_size} states: "
        + ("yes" if ok else "NO")
    )
    _emit(
        cfg,
        {
            "command": "interpolate",
            "interpolant": text,
            "vocabulary": vocab,
            "keep": list(keep),
            "entailment_verified": ok,
            "max_model_size": cfg.max_model_size,
        },
        human,
    )
    return 0 if ok else 1


def cmd_entails(cfg: RunConfig, args) -> int:
    F = parse_functor(cfg.functor)
    a = parse_formula(args.formula_a, F)
    b = parse_formula(args.formula_b, F)
    ok, cm = entails_bounded(a, b, cfg.max_model_size, functor=F)
    counter = None if ok else render_model(cm)
    human = (
        f"entailment holds on all models with at most {cfg.max_model_size} states"
        if ok
        else "countermodel:\n" + counter.rstrip("\n")
    )
    _emit(
        cfg,
        {
            "command": "entails",
            "holds": ok,
            "countermodel": counter,
            "max_model_size": cfg.max_model_size,
        },
        human,
    )
    return 0 if ok else 1


def cmd_selftest(cfg: RunConfig, args) -> int:
    F = parse_functor(cfg.functor)
    axioms = check_lax_axioms(F, args.carrier_bound, cfg.cap)
    support = check_support_restriction(F, args.carrier_bound, cfg.cap)
    ok = axioms.ok and support.ok
    _emit(
        cfg,
        {
            "command": "selftest",
            "functor": functor_tag(F),
            "carrier_bound": args.carrier_bound,
            "axioms": {name: passed for name, (passed, _) in axioms.checks.items()},
            "support": {name: passed for name, (passed, _) in support.checks.items()},
            "ok": ok,
        },
        str(axioms) + "\n" + str(support),
    )
    return 0 if ok else 1


# --------------------------------------------------------------------------
# Parser


def _positive(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--functor",
        default="powerset",
        help="functor tag for formula parsing (default: powerset)",
    )
    common.add_argument(
        "--format",
        choices=("human", "structured"),
        default="human",
        help="output mode (structured = one line of canonical JSON)",
    )
    common.add_argument(
        "--witness-bound",
        type=_positive,
        default=3,
        metavar="K",
        help="model size bound for realizability checks (default: 3)",
    )
    common.add_argument(
        "--max-model-size",
        type=_positive,
        default=3,
        metavar="N",
        help="model size bound for entailment sweeps (default: 3)",
    )
    common.add_argument(
        "--cap",
        type=_positive,
        default=DEFAULT_CAP,
        metavar="C",
        help="enumeration cardinality cap (default: 10^6)",
    )

    parser = argparse.ArgumentParser(
        prog="nablamu",
        description="Coalgebraic fixpoint logic: models, automata, interpolants.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="evaluate a formula on a model")
    p.add_argument("model", help="model file")
    p.add_argument("formula", nargs="?", help="formula text")
    p.add_argument("--formula-file", help="read the formula from a file")
    p.set_defaults(handler=cmd_check)

    p = sub.add_parser(
        "bisim", parents=[common], help="greatest bisimulation of two models"
    )
    p.add_argument("model_a", help="first model file")
    p.add_argument("model_b", help="second model file")
    p.add_argument("--disregard", metavar="P", help="ignore this proposition")
    p.set_defaults(handler=cmd_bisim)

    p = sub.add_parser("automaton", help="operate on an automaton file")
    asub = p.add_subparsers(dest="sub", required=True)
    q = asub.add_parser("accept", parents=[common], help="run the acceptance game")
    q.add_argument("automaton", help="automaton file")
    q.add_argument("model", help="model file")
    q.set_defaults(handler=cmd_automaton, sub="accept")
    q = asub.add_parser(
        "to-formula", parents=[common], help="translate to an equivalent formula"
    )
    q.add_argument("automaton", help="automaton file")
    q.set_defaults(handler=cmd_automaton, sub="to-formula")
    q = asub.add_parser(
        "project", parents=[common], help="hide a proposition existentially"
    )
    q.add_argument("automaton", help="automaton file")
    q.add_argument("prop", help="proposition to hide")
    q.set_defaults(handler=cmd_automaton, sub="project")
    q = asub.add_parser(
        "normalize",
        parents=[common],
        help="adjoin a true state and prune unrealizable elements",
    )
    q.add_argument("automaton", help="automaton file")
    q.set_defaults(handler=cmd_automaton, sub="normalize")

    p = sub.add_parser(
        "to-automaton", parents=[common], help="translate a formula to an automaton"
    )
    p.add_argument("formula", nargs="?", help="formula text")
    p.add_argument("--formula-file", help="read the formula from a file")
    p.set_defaults(handler=cmd_to_automaton)

    p = sub.add_parser(
        "interpolate", parents=[common], help="uniform interpolant of a formula"
    )
    p.add_argument("formula", nargs="?", help="formula text")
    p.add_argument("--formula-file", help="read the formula from a file")
    p.add_argument(
        "--keep",
        required=True,
        metavar="{q,...}",
        help="propositions the interpolant may use",
    )
    p.set_defaults(handler=cmd_interpolate)

    p = sub.add_parser(
        "entails", parents=[common], help="bounded entailment between two formulas"
    )
    p.add_argument("formula_a", help="antecedent formula text")
    p.add_argument("formula_b", help="consequent formula text")
    p.set_defaults(handler=cmd_entails)

    p = sub.add_parser(
        "selftest", parents=[common], help="exhaustive lax-extension axiom sweep"
    )
    p.add_argument(
        "--carrier-bound",
        type=_positive,
        default=2,
        metavar="N",
        help="carrier size bound for the sweep (default: 2)",
    )
    p.set_defaults(handler=cmd_selftest)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    cfg = RunConfig(
        functor=args.functor,
        fmt=args.format,
        witness_bound=args.witness_bound,
        max_model_size=args.max_model_size,
        cap=args.cap,
    )
    try:
        return args.handler(cfg, args)
    except UnsupportedFragment as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ParseError, CapExceeded, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
