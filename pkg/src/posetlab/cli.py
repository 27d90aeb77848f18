"""``posetlab`` command line.

Every command builds a JSON-ready dict first; ``--json`` prints it and the
default text output is rendered from the same dict.  Exit codes: 0 success,
1 a domain precondition failed, 2 unreadable or malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections.abc import Callable, Sequence
from pathlib import Path

from .diagram import expand_diagram, parse_diagram
from .errors import FieldMismatch, NonCommutativeModule, ParseError, PosetLabError
from .formats import format_module, format_poset, parse_module, parse_poset, to_dot
from .interior import interior_system
from .intres import (
    default_threads,
    formula_gldim,
    gldim_report,
    gldim_via_contraction,
    interval_cover,
    interval_resolution,
)
from .linalg import GF
from .pmod import PersistenceModule, check_commutativity, coinduct, first_noncommuting_pair, contract, induct, restrict, split_interval_summands
from .poset import Poset
from .segments import contract_all, contract_segment, make_segment, reflect

SCHEMA_VERSION = 1


# input helpers -----------------------------------------------------------------


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def _poset(path: str) -> Poset:
    return parse_poset(_read(path))


def _module(path: str, poset: Poset, args: argparse.Namespace, aliases: tuple[str, ...] = (), validate: bool = True):
    module = parse_module(_read(path), poset, aliases)
    bad = first_noncommuting_pair(module) if validate else None
    if bad is not None:
        a, b = bad
        raise NonCommutativeModule(f"NonCommutativeModule: paths from {poset.labels[a]} to {poset.labels[b]} disagree")
    if args.field is not None and args.field != module.field.p:
        raise FieldMismatch(f"FieldMismatch: module is over GF({module.field.p}), --field asks for GF({args.field})")
    return module


def _labels_arg(poset: Poset, text: str) -> list[int]:
    return [poset.id_of(lab) for lab in text.split(",") if lab]


def _mask_arg(poset: Poset, text: str) -> int:
    return poset.mask_of(lab for lab in text.split(",") if lab)


def _system(poset: Poset, text: str):
    return interior_system(poset, _mask_arg(poset, text))


def _field(args: argparse.Namespace) -> GF:
    return GF(args.field or 2)


def _mask_labels(poset: Poset, mask: int) -> list[str]:
    return poset.label_list(mask)


def _terms(poset: Poset, term: dict[int, int]) -> list[dict]:
    return [{"S": _mask_labels(poset, s), "mult": m} for s, m in sorted(term.items(), key=lambda kv: poset.interval_index.get(kv[0], 0))]


# commands ------------------------------------------------------------------------


def cmd_check(args):
    poset = _poset(args.poset)
    stats = poset.degree_stats()
    out = {
        "poset": poset.name,
        "elements": poset.n,
        "covers": len(poset.covers),
        "connected": poset.is_connected(),
        "sources": stats["sources"],
        "sinks": stats["sinks"],
        "leaves": stats["leaves"],
    }
    if args.module:
        module = _module(args.module, poset, args, validate=False)
        out["module"] = {"field": module.field.p, "total_dim": module.total_dim, "commutative": check_commutativity(module)}
    return out


def cmd_intervals(args):
    poset = _poset(args.poset)
    return {"poset": poset.name, "count": len(poset.intervals), "intervals": [_mask_labels(poset, s) for s in poset.intervals]}


def _gldim_payload(poset: Poset, args) -> dict:
    field = _field(args)
    if args.via == "formula":
        return {"poset": poset.name, "gldim": formula_gldim(poset), "via": "formula"}
    if args.via == "contract":
        value, trace = gldim_via_contraction(poset, field, args.threads)
        return {"poset": poset.name, "gldim": value, "via": "contract", "removed": trace}
    report = gldim_report(poset, field, args.threads)
    out = {
        "poset": poset.name,
        "gldim": report.gldim,
        "witness_interval": _mask_labels(poset, report.witness),
        "per_interval": [{"S": _mask_labels(poset, s), "intresdim": d} for s, d in report.per_interval],
    }
    if args.timings:
        out["timings_ms"] = report.timings_ms
    return out


def cmd_gldim(args):
    poset = _poset(args.poset)
    out = _gldim_payload(poset, args)
    if args.op:
        dual = _gldim_payload(poset.op, args)
        out["op"] = dual
        if dual["gldim"] != out["gldim"]:
            raise PosetLabError(f"DualityViolated: gldim {out['gldim']} but opposite gives {dual['gldim']}")
    return out


def cmd_cover(args):
    poset = _poset(args.poset)
    module = _module(args.module, poset, args)
    cov = interval_cover(module)
    return {
        "poset": poset.name,
        "cover": _terms(poset, cov.multiplicities),
        "kernel_dims": dict(zip(poset.labels, cov.kernel.dims)),
    }


def cmd_resolve(args):
    poset = _poset(args.poset)
    module = _module(args.module, poset, args)
    res = interval_resolution(module, args.max_len)
    return {"poset": poset.name, "intresdim": res.dim, "terms": [_terms(poset, t) for t in res.terms]}


def cmd_functor(args):
    poset = _poset(args.poset)
    system = _system(poset, args.sub)
    q = system.qposet
    if args.kind in ("ind", "coind"):
        module = _module(args.module, q, args, aliases=(poset.name,))
        result = (induct if args.kind == "ind" else coinduct)(system, module)
    else:
        module = _module(args.module, poset, args)
        if args.kind == "cont":
            result = contract(system, module)
        else:
            result = restrict(module, system.sub)
            result = PersistenceModule(q, result.dims, result.maps, result.field)
    return {"functor": args.kind, "poset": result.poset.name, "dims": dict(zip(result.poset.labels, result.dims)), "module": format_module(result)}


def cmd_interior(args):
    poset = _poset(args.poset)
    system = _system(poset, args.sub)
    out = {
        "poset": poset.name,
        "Q": _mask_labels(poset, system.sub),
        "floor": {poset.labels[x]: poset.labels[y] for x, y in enumerate(system.floor)},
        "fibers": {poset.labels[y]: _mask_labels(poset, f) for y, f in system.fibers.items()},
        "aligned": system.aligned,
    }
    if system.nu is not None:
        out["nu"] = {poset.labels[y]: poset.labels[t] for y, t in system.nu.items()}
    return out


def cmd_aligned(args):
    poset = _poset(args.poset)
    system = _system(poset, args.sub)
    return {"poset": poset.name, "Q": _mask_labels(poset, system.sub), "aligned": system.aligned}


def cmd_contract(args):
    poset = _poset(args.poset)
    if args.segment:
        seg = make_segment(poset, tuple(_labels_arg(poset, args.segment)))
        result = contract_segment(poset, seg)
        trace = [[poset.labels[i] for i in seg.elements[3:]]]
    else:
        result, trace = contract_all(poset)
    return {"poset": result.name, "removed": trace, "result": format_poset(result)}


def cmd_reflect(args):
    poset = _poset(args.poset)
    return {"poset": poset.name, "at": args.at, "result": format_poset(reflect(poset, poset.id_of(args.at)))}


def cmd_decompose(args):
    poset = _poset(args.poset)
    module = _module(args.module, poset, args)
    split = split_interval_summands(module)
    return {
        "poset": poset.name,
        "summands": _terms(poset, split.summands),
        "residual_dim": split.residual.total_dim,
        "interval_decomposable": split.residual.is_zero(),
    }


def cmd_dot(args):
    poset = _poset(args.poset)
    mark = _mask_arg(poset, args.sub)
    return {"poset": poset.name, "dot": to_dot(poset, mark)}


def cmd_expand(args):
    diagram = parse_diagram(_read(args.diagram))
    lengths = {k: args.length for k in diagram.double_edges() if diagram.edges[k].length is None} if args.length else {}
    poset = expand_diagram(diagram, lengths, default_orientation=args.orientation)
    return {"poset": poset.name, "result": format_poset(poset)}


# text rendering ------------------------------------------------------------------------


def _render(command: str, out: dict) -> str:
    if command == "gldim":
        if "op" in out:
            return f"{out['poset']} {out['gldim']}\n{out['poset']}^op {out['op']['gldim']}\n"
        return f"{out['gldim']}\n"
    if command in ("contract", "reflect", "expand"):
        return out["result"]
    if command == "functor":
        return out["module"]
    if command == "dot":
        return out["dot"]
    if command == "aligned":
        return f"{'aligned' if out['aligned'] else 'not aligned'}\n"
    if command == "intervals":
        return "".join(" ".join(s) + "\n" for s in out["intervals"])
    if command == "resolve":
        lines = [f"intresdim {out['intresdim']}"]
        for k, term in enumerate(out["terms"]):
            lines.append(f"V{k}: " + " + ".join(_term_text(t) for t in term))
        return "\n".join(lines) + "\n"
    if command == "cover":
        return " + ".join(_term_text(t) for t in out["cover"]) + "\n"
    if command == "decompose":
        parts = [_term_text(t) for t in out["summands"]]
        if out["residual_dim"]:
            parts.append(f"R(dim {out['residual_dim']})")
        return (" + ".join(parts) or "0") + "\n"
    return "".join(f"{k}: {v}\n" for k, v in out.items() if k != "schema")


def _term_text(term: dict) -> str:
    base = "I{" + ",".join(term["S"]) + "}"
    return base if term["mult"] == 1 else f"{base}^{term['mult']}"


# argument parsing ----------------------------------------------------------------------------


COMMANDS: dict[str, Callable] = {
    "check": cmd_check,
    "intervals": cmd_intervals,
    "gldim": cmd_gldim,
    "cover": cmd_cover,
    "resolve": cmd_resolve,
    "functor": cmd_functor,
    "interior": cmd_interior,
    "aligned": cmd_aligned,
    "contract": cmd_contract,
    "reflect": cmd_reflect,
    "decompose": cmd_decompose,
    "dot": cmd_dot,
    "expand": cmd_expand,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--field", type=int, default=None, metavar="P", help="prime field (default 2)")
    common.add_argument("--threads", type=int, default=None, help="worker processes (default $POSETLAB_THREADS or 1)")
    common.add_argument("--seed", type=int, default=0, help="seed for randomised helpers")
    common.add_argument("--max-len", type=int, default=None, help="resolution length guard")

    parser = argparse.ArgumentParser(prog="posetlab", description="Interval resolutions of persistence modules over finite posets.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="validate a poset (and optionally a module)")
    p.add_argument("poset")
    p.add_argument("module", nargs="?")

    p = sub.add_parser("intervals", parents=[common], help="list intervals in canonical order")
    p.add_argument("poset")

    p = sub.add_parser("gldim", parents=[common], help="interval global dimension")
    p.add_argument("poset")
    p.add_argument("--via", choices=["engine", "formula", "contract"], default="engine")
    p.add_argument("--op", action="store_true", help="also compute for the opposite poset and compare")
    p.add_argument("--timings", action="store_true", help="include wall-clock timings in the output")

    for name, text in (("cover", "minimal interval cover"), ("resolve", "interval resolution"), ("decompose", "split off interval summands")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("poset")
        p.add_argument("module")

    p = sub.add_parser("functor", parents=[common], help="apply Res, Ind, Cont or Coind")
    p.add_argument("kind", choices=["res", "ind", "cont", "coind"])
    p.add_argument("poset")
    p.add_argument("module")
    p.add_argument("--sub", required=True, help="comma-separated elements of Q")

    for name, text in (("interior", "floor map and fibers of Q"), ("aligned", "is Q an aligned interior system")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("poset")
        p.add_argument("--sub", required=True)

    p = sub.add_parser("contract", parents=[common], help="shorten an A_n segment to three elements")
    p.add_argument("poset")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--segment", help="comma-separated path l1,...,ln")
    group.add_argument("--auto", action="store_true", help="contract every qualifying segment")

    p = sub.add_parser("reflect", parents=[common], help="reverse the arrows at a sink or source")
    p.add_argument("poset")
    p.add_argument("--at", required=True)

    p = sub.add_parser("dot", parents=[common], help="Graphviz export of the Hasse diagram")
    p.add_argument("poset")
    p.add_argument("--sub", default="", help="elements to highlight")

    p = sub.add_parser("expand", parents=[common], help="expand a diagram file into a poset")
    p.add_argument("diagram")
    p.add_argument("--length", type=int, default=None, help="length for double edges without one")
    p.add_argument("--orientation", choices=["<", ">"], default=None, help="direction for unoriented lines")
    return parser


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    if args.threads is None:
        args.threads = default_threads()
    try:
        out = COMMANDS[args.command](args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=stderr)
        return 2
    except (PosetLabError, ValueError) as exc:
        msg = str(exc)
        name = type(exc).__name__
        if isinstance(exc, PosetLabError) and not msg.startswith(name) and type(exc) is not PosetLabError:
            msg = f"{name}: {msg}"
        print(f"error: {msg}", file=stderr)
        return 1
    payload = {"schema": SCHEMA_VERSION, **out}
    if args.json:
        stdout.write(json.dumps(payload, indent=2, sort_keys=False) + "\n")
    else:
        stdout.write(_render(args.command, payload))
    return 0


def main() -> None:
    sys.exit(run())


__all__ = ["SCHEMA_VERSION", "build_parser", "main", "run"]
