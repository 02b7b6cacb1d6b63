"""sphere: command-line front end.

Exit codes: 0 success, 1 validation failure, 2 malformed input,
3 ambiguous maximum or unresolved decomposition leaf.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass, field
from typing import Optional

from . import catalog, decomp
from .patterns import format_root
from .root_engine import RootSystem, root_system
from .sigma_engine import AmbiguousMaximum, attach_spherical_system
from .sphsys import ColourError, SphericalSystem, build_colours, validate_axioms
from .weight_monoid import (ORACLE_MAX_RANK, NotFree, NotSaturated, WeightTuple, check_free,
                            compute_sp, is_saturated, saturation_oracle)

OK, INVALID, MALFORMED, AMBIGUOUS = 0, 1, 2, 3


class InputError(ValueError):
    pass


@dataclass
class JobConfig:
    diagram: str
    weights: list[list[int]]
    command: str
    format: str = "text"
    oracle_bound: Optional[int] = None
    trace: bool = False
    verbosity: int = 0
    extra: dict = field(default_factory=dict)


def parse_weight(text: str, rank: int) -> list[int]:
    if re.search(r"[a-zA-Z]", text):
        raise InputError(f"weight {text!r}: give fundamental-weight coordinates such as 1,0,2; "
                         "root coordinates are not accepted")
    try:
        w = [int(x) for x in text.replace(" ", "").split(",") if x != ""]
    except ValueError:
        raise InputError(f"weight {text!r} is not a comma-separated list of integers") from None
    if len(w) != rank:
        raise InputError(f"weight {text!r} has {len(w)} coordinates, the diagram has rank {rank}")
    if any(x < 0 for x in w):
        raise InputError(f"weight {text!r} is not dominant (negative coordinate)")
    if not any(w):
        raise InputError("zero weight")
    return w


def _root_system(text: str) -> RootSystem:
    try:
        return root_system(text)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _tuple(cfg: JobConfig) -> WeightTuple:
    rs = _root_system(cfg.diagram)
    if not cfg.weights:
        raise InputError("at least one weight is required")
    order = rs.diagram.input_order()
    weights = []
    for text in cfg.weights:
        w = parse_weight(text, rs.rank)
        canon = [0] * rs.rank
        for pos, c in zip(order, w):
            canon[pos] = c
        weights.append(tuple(canon))
    return WeightTuple(rs, tuple(weights))


def _nodes(nodes) -> list[str]:
    return [f"a{a + 1}" for a in sorted(nodes)]


def emit(data: dict, fmt: str, text_lines: list[str]) -> None:
    if fmt == "json":
        print(json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False))
    else:
        print("\n".join(text_lines))


# -- validate ------------------------------------------------------------------

def cmd_validate(cfg: JobConfig) -> int:
    t = _tuple(cfg)
    out: dict = {"diagram": str(t.rs.diagram), "weights": [list(w) for w in t.weights]}
    lines = [f"diagram: {t.rs.diagram}"]
    free = check_free(t)
    out["free"] = free
    lines.append(f"free: {str(free).lower()}")
    code = OK
    if free:
        sat = is_saturated(t)
        out["saturated"] = sat.ok
        lines.append(f"saturated: {str(sat.ok).lower()}")
        if sat.ok:
            out["witnesses"] = [k + 1 for k in sat.witnesses]
            lines.append("witnesses: " + ", ".join(f"a{k + 1}" for k in sat.witnesses))
        else:
            out["offending_weight"] = sat.offending + 1
            lines.append(f"no witness for weight {sat.offending + 1}")
            code = INVALID
        if t.rs.rank <= ORACLE_MAX_RANK:
            orc = saturation_oracle(t, cfg.oracle_bound)
            out["oracle"] = {"bound": orc.bound, "saturated_in_box": orc.ok,
                             "counterexample": list(orc.counterexample) if orc.counterexample else None}
            lines.append(f"oracle (box {orc.bound}): "
                         + ("no counterexample" if orc.ok else f"counterexample {list(orc.counterexample)}"))
        sp = compute_sp(t)
        out["sp"] = [a + 1 for a in sorted(sp)]
        lines.append("S^p: {" + ", ".join(_nodes(sp)) + "}")
    else:
        lines.append("weights are linearly dependent")
        code = INVALID
    emit(out, cfg.format, lines)
    return code


# -- sigma ---------------------------------------------------------------------

def cmd_sigma(cfg: JobConfig) -> int:
    t = _tuple(cfg)
    try:
        res, system = attach_spherical_system(t)
    except NotFree:
        emit({"error": "not free"}, cfg.format, ["weights are linearly dependent"])
        return INVALID
    except NotSaturated as exc:
        emit({"error": "not saturated", "offending_weight": exc.index + 1}, cfg.format,
             [f"not saturated: no witness for weight {exc.index + 1}"])
        return INVALID
    except AmbiguousMaximum as exc:
        emit({"error": "ambiguous", "maxima": [[list(c.vector) for c in m] for m in exc.maxima]},
             cfg.format, [str(exc)])
        return AMBIGUOUS
    out = {
        "system": system.to_json(),
        "sigma": [{"root": list(c.vector), "label": c.label(), "type": c.support_type} for c in res.sigma],
        "dimension": res.dimension,
        "colours": [c.to_json() for c in build_colours(system)],
    }
    if cfg.trace:
        out["trace"] = res.trace_json()
        out["notes"] = list(res.notes)
    lines = [system.describe(), f"dimension: {res.dimension}"]
    if cfg.trace:
        for o in res.trace:
            status = "pass" if o.passed else "fail (" + ",".join(o.failed_rules()) + ")"
            lines.append(f"  {o.candidate.label():<24} {o.candidate.support_type:<14} {status}")
        lines.extend(f"  note: {n}" for n in res.notes)
    emit(out, cfg.format, lines)
    return OK


# -- decompose -----------------------------------------------------------------

def read_system(text: str) -> SphericalSystem:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"system file is not JSON: {exc}") from None
    if isinstance(data, dict) and "system" in data:
        data = data["system"]
    if not isinstance(data, dict) or "diagram" not in data:
        raise InputError('system JSON needs "diagram", "sp" and "sigma"')
    try:
        return SphericalSystem.from_json(data)
    except (ValueError, TypeError, KeyError) as exc:
        raise InputError(f"bad system: {exc}") from None


def _tree_lines(tree: decomp.DecompositionTree, depth: int = 0) -> list[str]:
    pad = "  " * depth
    if tree.kind == "leaf":
        extra = "" if not tree.params else " " + ",".join(f"{k}={v}" for k, v in sorted(tree.params.items()))
        return [f"{pad}{tree.system.describe()}  -> {tree.leaf}{extra}"]
    lines = [f"{pad}{tree.system.describe()}  [{tree.kind}]"]
    for c in tree.children:
        lines.extend(_tree_lines(c, depth + 1))
    return lines


def cmd_decompose(cfg: JobConfig) -> int:
    if cfg.weights:
        t = _tuple(cfg)
        try:
            system = attach_spherical_system(t)[1]
        except (NotFree, NotSaturated) as exc:
            emit({"error": str(exc)}, cfg.format, [str(exc)])
            return INVALID
        except AmbiguousMaximum as exc:
            emit({"error": "ambiguous"}, cfg.format, [str(exc)])
            return AMBIGUOUS
    else:
        path = cfg.extra.get("file") or "-"
        if path == "-":
            text = sys.stdin.read()
        else:
            try:
                with open(path, encoding="utf-8") as fh:
                    text = fh.read()
            except OSError as exc:
                raise InputError(str(exc)) from None
        system = read_system(text)
    rep = validate_axioms(system)
    if not rep.ok:
        emit({"error": "axioms", "failures": {k: v for k, v in rep.failures.items() if v}},
             cfg.format, ["system violates axioms: " + ", ".join(rep.failed_axioms())])
        return INVALID
    try:
        build_colours(system)
        tree = decomp.decompose(system)
    except ColourError as exc:
        emit({"error": f"colours: {exc}"}, cfg.format, [f"colours: {exc}"])
        return INVALID
    except decomp.Unresolved as exc:
        emit({"error": "unresolved", "system": exc.system.to_json(), "reason": exc.reason},
             cfg.format, [str(exc)])
        return AMBIGUOUS
    out = {"tree": tree.to_json(), "leaves": [l.leaf for l in tree.leaves()]}
    emit(out, cfg.format, _tree_lines(tree))
    return OK


# -- catalog -------------------------------------------------------------------

PARAM_NAMES = ("n", "n1", "n2", "p", "q")


def cmd_catalog(cfg: JobConfig) -> int:
    x = cfg.extra
    if x.get("self_test"):
        reps = catalog.self_test()
        ids = sorted({r.entry_id for r in reps}, key=lambda i: [e.id for e in catalog.load()].index(i))
        failed = [r for r in reps if not r.ok]
        out = {"entries": len(ids), "instances": len(reps), "passed": len(reps) - len(failed),
               "failures": [r.to_json() for r in failed]}
        lines = [f"{len(ids)} entries, {len(reps)} instances, {len(reps) - len(failed)} pass"]
        for r in failed:
            params = ",".join(f"{k}={v}" for k, v in sorted(r.params.items()))
            lines.append(f"  FAIL {r.entry_id} ({params}): " + "; ".join(r.details))
        emit(out, cfg.format, lines)
        return INVALID if failed else OK
    if x.get("show"):
        try:
            entry = catalog.get(x["show"])
        except KeyError:
            raise InputError(f"unknown catalog id {x['show']!r}") from None
        params = {k: v for k, v in x.get("params", {}).items() if v is not None}
        if not params:
            params = entry.minimal_params()
        try:
            inst = catalog.instantiate(entry, params)
        except catalog.CatalogError as exc:
            raise InputError(str(exc)) from None
        out = inst.to_json()
        out["colours"] = [c.to_json() for c in build_colours(inst.system)]
        lines = [f"{entry.id}: {inst.system.describe()}", f"K = {inst.subgroup.get('K')}"]
        if "S_prime" in inst.subgroup:
            lines.append(f"S' = {inst.subgroup['S_prime']}, m = {inst.subgroup.get('m')}")
        lines.extend(f"note: {n}" for n in entry.normalizations)
        emit(out, cfg.format, lines)
        return OK
    es = catalog.entries(x.get("family"))
    out = {"version": catalog.catalog_version(),
           "entries": [{"id": e.id, "family": e.family, "diagram": e.diagram, "params": e.params,
                        "normalized": bool(e.normalizations)} for e in es]}
    lines = [f"{e.id:<5} {e.diagram:<12} " + ", ".join(f"{k}>={v.get('min', v.get('values'))}"
                                                     for k, v in e.params.items()) for e in es]
    emit(out, cfg.format, lines)
    return OK


# -- argument parsing ----------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sphere", description="Spherical systems of free saturated weight monoids.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, weights_required=True):
        sp.add_argument("-d", "--diagram", required=weights_required, help='diagram such as "A3" or "A3xB2"')
        sp.add_argument("-w", "--weight", action="append", default=[],
                        help="dominant weight in fundamental-weight coordinates, e.g. 1,0,2 (repeatable)")
        sp.add_argument("--format", choices=("text", "json"), default="text")
        sp.add_argument("-v", "--verbose", action="count", default=0)

    v = sub.add_parser("validate", help="freeness, saturation and S^p")
    common(v)
    v.add_argument("--oracle-bound", type=int, default=None)
    s = sub.add_parser("sigma", help="attach the spherical system")
    common(s)
    s.add_argument("--trace", action="store_true")
    d = sub.add_parser("decompose", help="decompose a system file (or stdin, or -d/-w)")
    common(d, weights_required=False)
    d.add_argument("file", nargs="?", default=None)
    c = sub.add_parser("catalog", help="list, show and self-test primitive entries")
    c.add_argument("action", nargs="?", choices=("list", "show"), default="list")
    c.add_argument("entry", nargs="?")
    c.add_argument("--family")
    c.add_argument("--self-test", action="store_true")
    c.add_argument("--format", choices=("text", "json"), default="text")
    for name in PARAM_NAMES:
        c.add_argument(f"--{name}", type=int)
    return p


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return MALFORMED if exc.code else OK
    cfg = JobConfig(diagram=getattr(args, "diagram", None) or "", weights=getattr(args, "weight", []) or [],
                    command=args.command, format=args.format,
                    oracle_bound=getattr(args, "oracle_bound", None), trace=getattr(args, "trace", False),
                    verbosity=getattr(args, "verbose", 0))
    try:
        if args.command == "validate":
            return cmd_validate(cfg)
        if args.command == "sigma":
            return cmd_sigma(cfg)
        if args.command == "decompose":
            if cfg.weights and not cfg.diagram:
                raise InputError("-w needs -d")
            cfg.extra["file"] = args.file
            return cmd_decompose(cfg)
        if args.action == "show" and not args.entry:
            raise InputError("catalog show needs an entry id")
        cfg.extra.update(self_test=args.self_test, family=args.family,
                         show=args.entry if args.action == "show" else None,
                         params={k: getattr(args, k) for k in PARAM_NAMES})
        return cmd_catalog(cfg)
    except InputError as exc:
        print(f"sphere: error: {exc}", file=sys.stderr)
        return MALFORMED


if __name__ == "__main__":
    sys.exit(main())
