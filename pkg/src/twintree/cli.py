"""Command-line front end: ``twintree <command> [expressions...]``.

Expressions are read from the arguments, or one per line from stdin when
none are given.  Exit codes: 0 success, 1 failed check, 2 usage or parse
error, 3 resource cap.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence

from .expr import ParseError, parse
from .germs import DEFAULT_MAX_DEPTH, GermEvaluator
from .tree_core import DEFAULT_MAX_CLOSURE, ResourceCapExceeded, SelfSimilarGroup, get_group
from . import verify

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class CliConfig:
    group: str = "twin"
    max_depth: int = DEFAULT_MAX_DEPTH
    max_closure: int = DEFAULT_MAX_CLOSURE
    seed: int = 42
    output: str = "text"

    def make_group(self) -> SelfSimilarGroup:
        base = get_group(self.group)
        return SelfSimilarGroup(base.spec, max_closure=self.max_closure)


def _words(cfg: CliConfig, g: SelfSimilarGroup, exprs: Iterable[str]) -> List[tuple]:
    return [(e, g.check_word(parse(e, g.letters))) for e in exprs]


def _vertex(text: str) -> str:
    if text in ("", "-"):
        return ""
    if set(text) - {"0", "1"}:
        raise UsageError(f"vertex must be a bit string, got {text!r}")
    return text


def cmd_eval(cfg, g, args):
    out = []
    for e, w in _words(cfg, g, args.exprs):
        l, r, s = g.decompose(w)
        out.append({"expr": e, "reduced": w, "active": s, "states": [l, r]})
    return out, lambda x: f"{x['expr']}: {x['reduced'] or '1'} active={x['active']} states=({x['states'][0] or '1'}, {x['states'][1] or '1'})"


def cmd_istrivial(cfg, g, args):
    out = [{"expr": e, "trivial": g.is_trivial(w)} for e, w in _words(cfg, g, args.exprs)]
    return out, lambda x: f"{x['expr']}: {str(x['trivial']).lower()}"


def cmd_equal(cfg, g, args):
    pairs = []
    if args.exprs:
        if len(args.exprs) != 2:
            raise UsageError("equal takes exactly two expressions (or 'g = h' lines on stdin)")
        pairs.append(tuple(args.exprs))
    for line in args.stdin_lines:
        if "=" not in line:
            raise UsageError(f"expected 'g = h', got {line!r}")
        lhs, rhs = line.split("=", 1)
        pairs.append((lhs.strip(), rhs.strip()))
    out = []
    for lhs, rhs in pairs:
        (_, u), (_, v) = _words(cfg, g, (lhs, rhs))
        out.append({"lhs": lhs, "rhs": rhs, "equal": g.equals(u, v)})
    return out, lambda x: f"{x['lhs']} = {x['rhs']}: {str(x['equal']).lower()}"


def cmd_order(cfg, g, args):
    out = []
    for e, w in _words(cfg, g, args.exprs):
        o = g.element_order(w, cap=args.cap)
        out.append({"expr": e, "order": o})
    return out, lambda x: f"{x['expr']}: {x['order'] if x['order'] is not None else 'unknown (cap 2^%d)' % args.cap}"


def cmd_state(cfg, g, args):
    v = _vertex(args.vertex)
    out = [{"expr": e, "vertex": v, "state": g.state(w, v), "image": g.act_on_vertex(w, v)}
           for e, w in _words(cfg, g, args.exprs)]
    return out, lambda x: f"{x['expr']}|{x['vertex'] or 'root'} = {x['state'] or '1'} (vertex maps to {x['image'] or 'root'})"


def cmd_portrait(cfg, g, args):
    if args.depth > cfg.max_depth:
        raise UsageError(f"depth {args.depth} exceeds --max-depth {cfg.max_depth}")
    out = [{"expr": e, "portrait": g.portrait(w, args.depth).to_dict()} for e, w in _words(cfg, g, args.exprs)]
    return out, lambda x: f"{x['expr']}: {json.dumps(x['portrait'])}"


def cmd_levelperm(cfg, g, args):
    if args.level > min(cfg.max_depth, 14):
        raise UsageError(f"level {args.level} too large")
    out = [{"expr": e, "level": args.level, "perm": list(g.level_permutation(w, args.level))}
           for e, w in _words(cfg, g, args.exprs)]
    return out, lambda x: f"{x['expr']}: {' '.join(map(str, x['perm']))}"


def cmd_nucleus(cfg, g, args):
    out = [{"element": s} for s in g.nucleus()]
    return out, lambda x: x["element"] or "1"


def cmd_germ(cfg, g, args):
    if cfg.group != "twin":
        raise UsageError("germ functionals are defined for the twin only")
    ev = GermEvaluator(g, max_depth=cfg.max_depth)
    out = []
    for e, w in _words(cfg, g, args.exprs):
        if args.level is None:
            x = ev.pi(w)
            out.append({"expr": e, "bits": x.to_bits(), "element": str(x), "order": x.order()})
        else:
            out.append({"expr": e, "level": args.level, "value": ev.pi_n(w, args.level).to_dict()})
    if args.level is None:
        return out, lambda x: f"{x['expr']}: {x['bits']} = {x['element']} (order {x['order']})"
    return out, lambda x: f"{x['expr']}: {json.dumps(x['value'])}"


def run_suites(cfg: CliConfig, name: str) -> List[verify.SuiteReport]:
    names = list(verify.SUITES) if name == "all" else [name]
    if cfg.group != "twin":
        refused = [n for n in names if n in verify.TWIN_ONLY]
        if name != "all" and refused:
            raise UsageError(f"suite {name!r} is specific to the twin and cannot run with --group {cfg.group}")
        names = [n for n in names if n not in verify.TWIN_ONLY]
    out = []
    for n in names:
        if n == "germs":
            out.append(verify.SUITES[n](seed=cfg.seed))
        elif n == "torsion":
            out.append(verify.suite_torsion(seed=cfg.seed, group=cfg.make_group()))
        else:
            out.append(verify.SUITES[n]())
    return out


COMMANDS = {
    "eval": (cmd_eval, "reduce a word and show its first-level decomposition"),
    "istrivial": (cmd_istrivial, "decide whether a word is the identity"),
    "equal": (cmd_equal, "decide whether two words are equal"),
    "order": (cmd_order, "order of an element (2-power, capped)"),
    "state": (cmd_state, "section of a word at a vertex"),
    "portrait": (cmd_portrait, "activity portrait down to a depth"),
    "levelperm": (cmd_levelperm, "permutation induced on a level"),
    "nucleus": (cmd_nucleus, "list the nucleus"),
    "germ": (cmd_germ, "image in the order-64 germ group (or its wreath lift)"),
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="twintree", description="Exact computations in the twisted twin of the Grigorchuk group.")
    p.add_argument("--group", choices=("twin", "grigorchuk"), default="twin")
    p.add_argument("--max-depth", type=int, default=DEFAULT_MAX_DEPTH)
    p.add_argument("--max-closure", type=int, default=None,
                   help="word-problem closure cap (default: $TWINTREE_MAX_CLOSURE or %d)" % DEFAULT_MAX_CLOSURE)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--output", choices=("text", "json"), default="text")
    sub = p.add_subparsers(dest="command", required=True)
    for name, (_, help_) in COMMANDS.items():
        sp = sub.add_parser(name, help=help_)
        if name == "state":
            sp.add_argument("vertex", help="bit string, e.g. 011 ('-' for the root)")
        if name == "portrait":
            sp.add_argument("--depth", type=int, default=3)
        if name == "levelperm":
            sp.add_argument("--level", type=int, default=3)
        if name == "order":
            sp.add_argument("--cap", type=int, default=10, help="give up above 2^cap")
        if name == "germ":
            sp.add_argument("--level", type=int, default=None, help="show pi_n instead of pi")
        if name != "nucleus":
            sp.add_argument("exprs", nargs="*", metavar="EXPR")
    sv = sub.add_parser("verify", help="run verification suites")
    sv.add_argument("suite", choices=list(verify.SUITES) + ["all"])
    return p


def _config(args) -> CliConfig:
    import os
    closure = args.max_closure
    if closure is None:
        raw = os.environ.get("TWINTREE_MAX_CLOSURE")
        closure = int(raw) if raw else DEFAULT_MAX_CLOSURE
    return CliConfig(args.group, args.max_depth, closure, args.seed, args.output)


def main(argv: Optional[Sequence[str]] = None, stdin=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    cfg = _config(args)
    try:
        if args.command == "verify":
            reports = run_suites(cfg, args.suite)
            if cfg.output == "json":
                data = [r.to_dict() for r in reports]
                print(json.dumps(data if args.suite == "all" else data[0], indent=2))
            else:
                print("\n".join(r.to_text() for r in reports))
            return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL

        g = cfg.make_group()
        args.stdin_lines = []
        if args.command != "nucleus" and not args.exprs:
            lines = [ln.strip() for ln in (stdin or sys.stdin).read().splitlines()]
            lines = [ln for ln in lines if ln and not ln.startswith("#")]
            if args.command == "equal":
                args.stdin_lines = lines
            else:
                args.exprs = lines
        fn = COMMANDS[args.command][0]
        records, fmt = fn(cfg, g, args)
        if cfg.output == "json":
            print(json.dumps(records, indent=2))
        else:
            for r in records:
                print(fmt(r))
        return EXIT_OK
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceCapExceeded as exc:
        print(f"error: resource cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
