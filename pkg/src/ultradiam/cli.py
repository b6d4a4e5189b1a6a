"""Command-line front end.

Exit status is 0 on success, 1 when a mathematical check fails or a
construction's precondition is not met, and 2 for unreadable or malformed
input. Failures print ``{"error": ..., "witness": {...}}`` on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib.metadata import PackageNotFoundError, version

from . import dendro
from .chains import GraphChain, realize_spectrum, ultrametric_from_chain
from .core import (
    DEFAULT_EPSILON,
    Partition,
    UltrametricSpace,
    certify_ultrametric,
    format_scalar,
    parse_matrix,
    parse_scalar,
    spectrum,
)
from .diamfn import DiameterFunction, check_axioms, check_ball_dichotomy, synthesize_ultrametric
from .dipgraph import dip_graph, dip_report, extend_with_apex, to_dot, ultrametric_from_partition
from .errors import DomainError, InputError, NotUltrametricError, ParseError, UltradiamError
from .oracle import random_ultrametric


class CheckFailed(DomainError):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _json_input(path: str):
    try:
        return json.loads(_read(path), parse_float=str)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None


def _matrix_format(args, path: str | None) -> str:
    if args.format:
        return args.format
    if path and path.lower().endswith(".csv"):
        return "csv"
    return "json"


def _epsilon(args):
    if args.epsilon is not None:
        return parse_scalar(args.epsilon)
    return DEFAULT_EPSILON if args.float_input else None


def _load_space(args) -> UltrametricSpace:
    m = parse_matrix(_read(args.input), _matrix_format(args, args.input), epsilon=_epsilon(args))
    s = certify_ultrametric(m)
    if not isinstance(s, UltrametricSpace):
        raise NotUltrametricError(s)
    return s


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _space_out(args, s: UltrametricSpace) -> str:
    if _matrix_format(args, args.output if args.output != "-" else None) == "csv":
        return s.matrix.to_csv()
    return s.matrix.to_json()


# ---------------------------------------------------------------------------
# verbs; each returns (stdout text, optional error to report)
# ---------------------------------------------------------------------------

def cmd_validate(args):
    m = parse_matrix(_read(args.input), _matrix_format(args, args.input), epsilon=_epsilon(args))
    s = certify_ultrametric(m)
    if isinstance(s, UltrametricSpace):
        return _dump({"ultrametric": True, "n": m.n, "triples_checked": s.triples_checked}), None
    err = NotUltrametricError(s)
    return _dump({"ultrametric": False, "n": m.n, "violation": s.to_json()}), err


def cmd_spectrum(args):
    s = _load_space(args)
    return _dump({"spectrum": [format_scalar(v) for v in spectrum(s)]}), None


def cmd_dip(args):
    s = _load_space(args)
    out = dip_report(s).to_json()
    out["edges"] = [list(e) for e in dip_graph(s).sorted_edges()]
    return _dump(out), None


def cmd_dendrogram(args):
    s = _load_space(args)
    return _dump(dendro.to_json_obj(dendro.dendrogram_from_ultrametric(s))), None


def cmd_newick(args):
    s = _load_space(args)
    d = dendro.dendrogram_from_ultrametric(s)
    return dendro.to_newick(d, s.labels, branch_lengths=args.branch_lengths) + "\n", None


def cmd_dot(args):
    s = _load_space(args)
    rep = dip_report(s)
    return to_dot(dip_graph(s), s.labels, rep.parts), None


def cmd_synth_tau(args):
    t = DiameterFunction.from_json_obj(_json_input(args.input))
    return _space_out(args, synthesize_ultrametric(t, seed=args.seed)), None


def cmd_synth_partition(args):
    obj = _json_input(args.input)
    parts = obj.get("parts") if isinstance(obj, dict) else obj
    try:
        p = Partition.of(parts)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad partition: {exc}") from None
    return _space_out(args, ultrametric_from_partition(p, args.inner, args.outer)), None


def cmd_synth_chain(args):
    c = GraphChain.from_json_obj(_json_input(args.input))
    return _space_out(args, ultrametric_from_chain(c)), None


def cmd_synth_spectrum(args):
    obj = _json_input(args.input)
    values = obj.get("values") if isinstance(obj, dict) else obj
    if not isinstance(values, list):
        raise ParseError('expected a list of values or {"values": [...]}')
    return _space_out(args, realize_spectrum(values)), None


def cmd_extend_apex(args):
    if args.apex_level is None:
        raise InputError("--apex-level is required")
    s = _load_space(args)
    return _space_out(args, extend_with_apex(s, args.apex_level)), None


def cmd_check_axioms(args):
    t = DiameterFunction.from_json_obj(_json_input(args.input))
    rep = check_axioms(t, seed=args.seed)
    err = None
    if not rep.ok:
        err = CheckFailed(f"condition {rep.witness.clause} fails", rep.witness.to_json())
    return _dump(rep.to_json()), err


def cmd_check_balls(args):
    t = DiameterFunction.from_json_obj(_json_input(args.input))
    rep = check_ball_dichotomy(t)
    err = None if rep.ok else CheckFailed("ball dichotomy fails", rep.counterexample)
    return _dump(rep.to_json()), err


def cmd_gen(args):
    if args.n is None:
        raise InputError("--n is required")
    s = random_ultrametric(args.n, args.depth, args.seed)
    return _space_out(args, s), None


VERBS = {
    "validate": (cmd_validate, "certify a distance matrix as ultrametric"),
    "spectrum": (cmd_spectrum, "list the distinct distances"),
    "dip": (cmd_dip, "diametrical pairs, parts and the minimal-count test"),
    "dendrogram": (cmd_dendrogram, "dendrogram as nested JSON"),
    "newick": (cmd_newick, "dendrogram as Newick text"),
    "dot": (cmd_dot, "diametrical-pair graph as Graphviz DOT"),
    "synth-tau": (cmd_synth_tau, "ultrametric from a diameter-function table"),
    "synth-partition": (cmd_synth_partition, "two-level ultrametric from a partition"),
    "synth-chain": (cmd_synth_chain, "ultrametric from a nested graph chain"),
    "synth-spectrum": (cmd_synth_spectrum, "ultrametric realising a set of distances"),
    "extend-apex": (cmd_extend_apex, "add one point far from all others"),
    "check-axioms": (cmd_check_axioms, "check a diameter-function table"),
    "check-balls": (cmd_check_balls, "check ball recentering and nesting"),
    "gen": (cmd_gen, "random ultrametric for fixtures"),
}


def build_parser() -> argparse.ArgumentParser:
    try:
        ver = version("ultradiam")
    except PackageNotFoundError:  # pragma: no cover
        ver = "unknown"
    parser = argparse.ArgumentParser(prog="ultradiam", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {ver}")
    sub = parser.add_subparsers(dest="verb", required=True)
    for name, (_, help_text) in VERBS.items():
        p = sub.add_parser(name, help=help_text)
        if name != "gen":
            p.add_argument("input", help="input file, or - for stdin")
        p.add_argument("--format", choices=("csv", "json"),
                       help="matrix format (default: from file extension, else json)")
        p.add_argument("--output", "-o", default="-", help="output file (default stdout)")
        p.add_argument("--epsilon", help="snap input values closer than this")
        p.add_argument("--float-input", action="store_true",
                       help=f"snap input values within {format_scalar(DEFAULT_EPSILON)}")
        p.add_argument("--inner", default="1/2")
        p.add_argument("--outer", default="1")
        p.add_argument("--apex-level")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--n", type=int)
        p.add_argument("--depth", type=int, default=3)
        p.add_argument("--branch-lengths", action="store_true")
    return parser


def _report(err: UltradiamError) -> None:
    sys.stderr.write(json.dumps({"error": err.name, "message": str(err),
                                 "witness": err.witness}, sort_keys=True) + "\n")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = VERBS[args.verb][0]
    try:
        text, err = handler(args)
    except InputError as exc:
        _report(exc)
        return 2
    except OSError as exc:
        sys.stderr.write(json.dumps({"error": "IOError", "message": str(exc), "witness": {}}) + "\n")
        return 2
    except DomainError as exc:
        _report(exc)
        return 1
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    if err is not None:
        _report(err)
        return 1
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
