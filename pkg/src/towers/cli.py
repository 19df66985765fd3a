"""Command-line front end: ``tower VERB [options]``.

Results go to standard output as compact JSON (``--pretty`` prints a table).
Files are only written below ``--out DIR``.  Exit status is 0 on success,
including infinite verdicts, 2 on usage errors, 3 when an input cannot be
parsed and 4 when an analysis runs out of budget.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import constructions
from .automata import (
    Automaton,
    AutomatonError,
    automaton_to_dict,
    determinize,
    downward_closure,
    minimize,
    parse_automaton,
    prefix_closure,
    product,
    to_dot,
    trim,
)
from .prefix import (
    find_pattern,
    prefix_bound_dfa,
    prefix_bound_nfa,
    prefix_height,
    prefix_height_dfa,
    prefix_height_fixpoint,
)
from .results import INFINITE, UNDECIDED
from .subseq import has_infinite_subseq_tower, subseq_bound, subseq_height, used_letters
from .verify import ORDERS, PREFIX, SUBSEQUENCE, Tower, verify_tower

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_UNDECIDED = 4

BUDGET_ENV = "TOWER_BUDGET"


class InputError(Exception):
    """An input file is missing or malformed."""


class Output:
    """Collects the JSON document and any files destined for ``--out``."""

    def __init__(self, doc=None, files: dict[str, str] | None = None, status: int = EXIT_OK):
        self.doc = doc
        self.files = files or {}
        self.status = status


# --------------------------------------------------------------------------
# input helpers


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from exc


def load_automaton(path: str) -> Automaton:
    try:
        return parse_automaton(_read(path))
    except (AutomatonError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def load_tower(path: str) -> Tower:
    try:
        return Tower.from_dict(json.loads(_read(path)))
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _automaton_doc(a: Automaton, name: str = "automaton") -> Output:
    text = json.dumps(automaton_to_dict(a), indent=2) + "\n"
    return Output(automaton_to_dict(a), {f"{name}.json": text})


def _value(text: str):
    """Parameter values: JSON literals, or comma lists of integers."""
    try:
        return json.loads(text)
    except ValueError:
        pass
    if "," in text:
        try:
            return [int(x) for x in text.split(",") if x]
        except ValueError:
            pass
    return text


_ALIASES = {"mA": "m_a", "mB": "m_b", "ma": "m_a", "mb": "m_b"}


def parse_params(pairs: list[str]) -> dict:
    params = {}
    for item in pairs:
        if "=" not in item:
            raise ValueError(f"parameter {item!r} is not of the form key=value")
        key, text = item.split("=", 1)
        params[_ALIASES.get(key, key)] = _value(text)
    return params


def _extra_params(extra: list[str]) -> list[str]:
    """Turn ``--n 3 --d 1,1`` into ``["n=3", "d=1,1"]``."""
    out, i = [], 0
    while i < len(extra):
        token = extra[i]
        if not token.startswith("--"):
            raise ValueError(f"unexpected argument {token!r}")
        key = token[2:]
        if "=" in key:
            out.append(key)
            i += 1
            continue
        if i + 1 >= len(extra):
            raise ValueError(f"missing value for {token}")
        out.append(f"{key}={extra[i + 1]}")
        i += 2
    return out


# --------------------------------------------------------------------------
# bounds report


def report_bounds(a: Automaton, b: Automaton) -> dict:
    """All three height bounds for a pair, with the depth surrogate used."""
    ta, tb = trim(a), trim(b)
    n1, n2 = len(ta.states), len(tb.states)
    doc = {
        "states": [n1, n2],
        "n": max(n1, n2),
        "alphabet": len(used_letters(ta) | used_letters(tb)),
        "depth": "trimmed state count",
        "subseq_bound": subseq_bound(a, b),
        "prefix_bound_dfa": None,
        "prefix_bound_nfa": None,
    }
    if ta.deterministic and tb.deterministic and n1 and n2:
        doc["prefix_bound_dfa"] = prefix_bound_dfa(n1, n2)
    try:
        doc["prefix_bound_nfa"] = prefix_bound_nfa(max(n1, 1), max(n2, 1))
    except ValueError:
        pass
    return doc


# --------------------------------------------------------------------------
# verbs


def cmd_validate(args) -> Output:
    a = load_automaton(args.file)
    return Output({
        "valid": True,
        "states": len(a.states),
        "letters": len(a.alphabet),
        "transitions": len(a.transitions),
        "deterministic": a.deterministic,
    })


def cmd_product(args) -> Output:
    return _automaton_doc(product(load_automaton(args.k), load_automaton(args.l)), "product")


def cmd_determinize(args) -> Output:
    return _automaton_doc(determinize(load_automaton(args.file)), "determinized")


def cmd_minimize(args) -> Output:
    a = load_automaton(args.file)
    if not a.deterministic:
        a = determinize(a)
    return _automaton_doc(minimize(a), "minimized")


def cmd_closure(args) -> Output:
    close = downward_closure if args.kind == "down" else prefix_closure
    return _automaton_doc(close(load_automaton(args.file)), f"{args.kind}_closure")


def _budget(args) -> int | None:
    if args.budget is not None:
        return args.budget
    env = os.environ.get(BUDGET_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise ValueError(f"{BUDGET_ENV} must be an integer, got {env!r}") from None
    return None


def cmd_height(args) -> Output:
    k, l = load_automaton(args.k), load_automaton(args.l)
    if args.order == SUBSEQUENCE:
        result = subseq_height(k, l, budget=_budget(args))
    elif args.algorithm == "fixpoint":
        result = prefix_height_fixpoint(k, l)
    elif args.algorithm == "dfa":
        result = prefix_height_dfa(k, l)
    else:
        result = prefix_height(k, l)
    doc = result.to_dict(witness=args.witness)
    files = {"height.json": json.dumps(doc, indent=2) + "\n"}
    return Output(doc, files, EXIT_UNDECIDED if result.verdict == UNDECIDED else EXIT_OK)


def cmd_infinite(args) -> Output:
    k, l = load_automaton(args.k), load_automaton(args.l)
    if args.order == PREFIX:
        pattern = find_pattern(k, l)
        verdict = INFINITE if pattern is not None else "finite-only"
        doc = {"verdict": verdict, "pattern": pattern.to_dict() if pattern else None}
    else:
        verdict = INFINITE if has_infinite_subseq_tower(k, l) else "finite-only"
        doc = {"verdict": verdict, "pattern": None}
    return Output(doc)


def cmd_pattern(args) -> Output:
    pattern = find_pattern(load_automaton(args.k), load_automaton(args.l))
    if pattern is None:
        return Output({"pattern": None})
    return Output({"pattern": pattern.to_dict()}, {"pattern.dot": pattern.to_dot()})


def cmd_generate(args) -> Output:
    if (args.family is None) == (args.preset is None):
        raise ValueError("give exactly one of --family and --preset")
    table = constructions.FAMILIES if args.family else constructions.PRESETS
    name = args.family or args.preset
    if name not in table:
        raise ValueError(f"unknown {'family' if args.family else 'preset'} {name!r}; choose from {', '.join(table)}")
    params = parse_params(args.params + args.extra)
    try:
        inst = table[name](**params)
    except TypeError as exc:
        raise ValueError(f"bad parameters for {name}: {exc}") from None
    files = {
        "A.json": json.dumps(automaton_to_dict(inst.A), indent=2) + "\n",
        "B.json": json.dumps(automaton_to_dict(inst.B), indent=2) + "\n",
        "witness.json": json.dumps(inst.witness.to_dict(), indent=2) + "\n",
        "predictions.json": json.dumps(inst.predictions(), indent=2) + "\n",
    }
    if args.dot:
        files["A.dot"] = to_dot(inst.A, "A")
        files["B.dot"] = to_dot(inst.B, "B")
    doc = {
        "A": automaton_to_dict(inst.A),
        "B": automaton_to_dict(inst.B),
        "witness": inst.witness.to_dict(),
        "predictions": inst.predictions(),
    }
    return Output(doc, files)


def cmd_verify(args) -> Output:
    tower = load_tower(args.tower)
    if args.order is not None:
        tower = Tower(tower.words, args.order, tower.start_side)
    report = verify_tower(load_automaton(args.k), load_automaton(args.l), tower)
    return Output(report.to_dict())


def cmd_transform(args) -> Output:
    k, l = load_automaton(args.k), load_automaton(args.l)
    codes = None
    if args.kind == "det1":
        a, b = constructions.determinize_preserving_v1(k, l)
    elif args.kind == "det2":
        a, b = constructions.determinize_preserving_v2(k, l)
    else:
        a, b, codes = constructions.binarize(k, l)
    doc = {"A": automaton_to_dict(a), "B": automaton_to_dict(b)}
    files = {
        "A.json": json.dumps(doc["A"], indent=2) + "\n",
        "B.json": json.dumps(doc["B"], indent=2) + "\n",
    }
    if codes is not None:
        doc["codes"] = {x: "".join(c) for x, c in codes.items()}
        files["codes.json"] = json.dumps(doc["codes"], indent=2) + "\n"
    return Output(doc, files)


def cmd_bound(args) -> Output:
    return Output(report_bounds(load_automaton(args.k), load_automaton(args.l)))


def cmd_dot(args) -> Output:
    text = to_dot(load_automaton(args.file), args.name)
    return Output(text, {f"{args.name}.dot": text})


# --------------------------------------------------------------------------
# argument table


def _file(p):
    p.add_argument("file", help="automaton JSON file")


def _pair(p):
    p.add_argument("--k", required=True, metavar="FILE", help="automaton for K")
    p.add_argument("--l", required=True, metavar="FILE", help="automaton for L")


def _order(p, required=True, default=None):
    p.add_argument("--order", choices=ORDERS, required=required, default=default, help="tower order")


def _height(p):
    _order(p)
    _pair(p)
    p.add_argument("--budget", type=int, metavar="N", help=f"closure iteration budget (default ${BUDGET_ENV})")
    p.add_argument("--witness", action="store_true", help="include a witness tower")
    p.add_argument("--algorithm", choices=("graph", "dfa", "fixpoint"), default="graph",
                   help="prefix-order algorithm (default graph)")


def _infinite(p):
    _order(p)
    _pair(p)


def _closure(p):
    p.add_argument("--kind", choices=("down", "prefix"), required=True, help="closure to compute")
    _file(p)


def _generate(p):
    p.add_argument("--family", choices=sorted(constructions.FAMILIES), help="construction family")
    p.add_argument("--preset", choices=sorted(constructions.PRESETS), help="named preset")
    p.add_argument("--params", nargs="*", default=[], metavar="KEY=VALUE",
                   help="generator parameters; --KEY VALUE also works")
    p.add_argument("--dot", action="store_true", help="also write A.dot and B.dot")


def _verify(p):
    p.add_argument("--tower", required=True, metavar="FILE", help="tower JSON file")
    _pair(p)
    _order(p, required=False)


def _transform(p):
    p.add_argument("--kind", choices=("det1", "det2", "binarize"), required=True, help="transform to apply")
    _pair(p)


def _dot(p):
    _file(p)
    p.add_argument("--name", default="automaton", help="graph name")


VERBS = {
    "validate": ("check that an automaton file parses", _file, cmd_validate),
    "product": ("synchronous product of two automata", _pair, cmd_product),
    "determinize": ("subset construction", _file, cmd_determinize),
    "minimize": ("canonical minimal DFA", _file, cmd_minimize),
    "closure": ("downward or prefix closure", _closure, cmd_closure),
    "height": ("maximal tower height", _height, cmd_height),
    "infinite": ("decide whether an infinite tower exists", _infinite, cmd_infinite),
    "pattern": ("search the infinite prefix tower pattern", _pair, cmd_pattern),
    "generate": ("build a construction family instance", _generate, cmd_generate),
    "verify": ("check a tower against two automata", _verify, cmd_verify),
    "transform": ("tower-preserving transforms", _transform, cmd_transform),
    "bound": ("height bounds for a pair", _pair, cmd_bound),
    "dot": ("Graphviz rendering of an automaton", _dot, cmd_dot),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tower", description="Towers of words between regular languages.", allow_abbrev=False
    )
    sub = parser.add_subparsers(dest="verb", required=True, metavar="VERB")
    for name, (help_text, configure, _) in VERBS.items():
        p = sub.add_parser(name, help=help_text, description=help_text, allow_abbrev=False)
        configure(p)
        p.add_argument("--pretty", action="store_true", help="print a readable table instead of JSON")
        p.add_argument("--out", metavar="DIR", help="also write result files into DIR")
    return parser


# --------------------------------------------------------------------------
# output


def _table(doc, indent: str = "") -> list[str]:
    lines = []
    width = max((len(str(k)) for k in doc), default=0)
    for key, value in doc.items():
        if isinstance(value, dict) and value:
            lines.append(f"{indent}{key}:")
            lines += _table(value, indent + "  ")
        else:
            shown = value if isinstance(value, str) else json.dumps(value)
            lines.append(f"{indent}{str(key).ljust(width)}  {shown}")
    return lines


def render(doc, pretty: bool) -> str:
    if isinstance(doc, str):
        return doc if doc.endswith("\n") else doc + "\n"
    if pretty and isinstance(doc, dict):
        return "\n".join(_table(doc)) + "\n"
    return json.dumps(doc, separators=(",", ":")) + "\n"


def write_files(directory: str, files: dict[str, str]) -> None:
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    for name, text in files.items():
        (out / name).write_text(text)


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args, extra = parser.parse_known_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if extra and args.verb != "generate":
        print(f"tower: unrecognized arguments: {' '.join(extra)}", file=stderr)
        return EXIT_USAGE
    args.extra = []
    try:
        if args.verb == "generate":
            args.extra = _extra_params(extra)
        result = VERBS[args.verb][2](args)
    except InputError as exc:
        print(f"tower: {exc}", file=stderr)
        return EXIT_PARSE
    except ValueError as exc:
        print(f"tower: {exc}", file=stderr)
        return EXIT_USAGE
    stdout.write(render(result.doc, args.pretty))
    if args.out:
        write_files(args.out, result.files)
    return result.status


def main(argv: list[str] | None = None) -> int:
    sys.exit(run(argv))
