"""Primitive spherical systems of rank at least three, with subgroup data.

Entries live in data/catalog.json. Root templates use a[i] for nodes of the
first component and b[i] for the second, 1-based, with ranges a[i..j] and
stepped ranges a[i..j:k].
"""
from __future__ import annotations

import ast
import itertools
import json
import operator
import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Any, Iterator, Optional, Union

from .patterns import format_root
from .root_engine import RootSystem, RootVector, embeddings, root_system
from .sphsys import ColourError, SphericalSystem, build_colours, check_no_doubling, validate_axioms


class CatalogError(ValueError):
    pass


# -- safe arithmetic on parameters ---------------------------------------------

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.FloorDiv: operator.floordiv, ast.Mod: operator.mod}
_CMPOPS = {ast.Eq: operator.eq, ast.NotEq: operator.ne, ast.Lt: operator.lt,
           ast.LtE: operator.le, ast.Gt: operator.gt, ast.GtE: operator.ge}


def evaluate(expr: Union[str, int], env: dict[str, int]) -> int:
    """Integer expression over parameter names; no calls or attributes."""
    if isinstance(expr, int):
        return expr

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return node.value
        if isinstance(node, ast.Name):
            if node.id not in env:
                raise CatalogError(f"unknown parameter {node.id!r}")
            return env[node.id]
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            return -ev(node.operand)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.Not):
            return not ev(node.operand)
        if isinstance(node, ast.BoolOp):
            vals = [ev(v) for v in node.values]
            return all(vals) if isinstance(node.op, ast.And) else any(vals)
        if isinstance(node, ast.Compare):
            left = ev(node.left)
            for op, right in zip(node.ops, node.comparators):
                r = ev(right)
                if type(op) not in _CMPOPS or not _CMPOPS[type(op)](left, r):
                    return False
                left = r
            return True
        raise CatalogError(f"unsupported expression {ast.dump(node)}")

    return ev(ast.parse(str(expr), mode="eval"))


_TERM = re.compile(r"\s*(?:(\d+)\s*\*\s*)?([ab])\[([^\]]+)\]\s*")


def _split_terms(text: str) -> list[str]:
    out, depth, cur = [], 0, ""
    for ch in text:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch == "+" and depth == 0:
            out.append(cur)
            cur = ""
        else:
            cur += ch
    out.append(cur)
    return out


def _index_range(spec: str, env) -> list[int]:
    if ".." not in spec:
        return [evaluate(spec, env)]
    lo, rest = spec.split("..", 1)
    step = 1
    if ":" in rest:
        rest, st = rest.split(":", 1)
        step = evaluate(st, env)
    return list(range(evaluate(lo, env), evaluate(rest, env) + 1, step))


def parse_terms(text: str, env: dict[str, int]) -> list[tuple[str, int, int]]:
    """(component letter, 1-based index, coefficient) for each node term."""
    out = []
    for term in _split_terms(text):
        m = _TERM.fullmatch(term)
        if not m:
            raise CatalogError(f"bad root term {term!r} in {text!r}")
        coef = int(m.group(1) or 1)
        for i in _index_range(m.group(3), env):
            out.append((m.group(2), i, coef))
    return out


# -- entries -------------------------------------------------------------------

@dataclass(frozen=True)
class PrimitiveEntry:
    id: str
    family: str
    diagram: str
    params: dict
    let: dict
    sp: tuple
    sigma: tuple
    subgroup: tuple
    normalizations: tuple = ()

    @classmethod
    def from_json(cls, d: dict) -> "PrimitiveEntry":
        return cls(d["id"], d["family"], d["diagram"], d.get("params", {}), d.get("let", {}),
                   tuple(d.get("sp", [])), tuple(d.get("sigma", [])), tuple(d.get("subgroup", [])),
                   tuple(d.get("normalizations", [])))

    def admissible(self, name: str, limit: int) -> list[int]:
        spec = self.params[name]
        if "values" in spec:
            return [v for v in spec["values"] if v <= limit]
        return list(range(spec["min"], limit + 1, spec.get("step", 1)))

    def minimal_params(self) -> dict[str, int]:
        return {k: self.admissible(k, 10 ** 6)[0] if "values" in v else v["min"]
                for k, v in self.params.items()}

    def next_params(self) -> list[dict[str, int]]:
        """Minimal parameters with one parameter moved to its next admissible value."""
        base = self.minimal_params()
        out = []
        for k, spec in self.params.items():
            vals = spec["values"] if "values" in spec else [spec["min"], spec["min"] + spec.get("step", 1)]
            if len(vals) > 1:
                out.append({**base, k: vals[1]})
        return out

    def environment(self, params: dict[str, int]) -> dict[str, int]:
        missing = set(self.params) - set(params)
        extra = set(params) - set(self.params) - set(self.let)
        if missing or extra:
            raise CatalogError(f"{self.id}: expected parameters {sorted(self.params)}, got {sorted(params)}")
        env = {k: int(params[k]) for k in self.params}
        for k, spec in self.params.items():
            v = env[k]
            if "values" in spec:
                ok = v in spec["values"]
            else:
                ok = v >= spec["min"] and (v - spec["min"]) % spec.get("step", 1) == 0
            if not ok:
                raise CatalogError(f"{self.id}: parameter {k}={v} is not admissible")
        for k, e in self.let.items():
            v = evaluate(e, env)
            if k in params and int(params[k]) != v:
                raise CatalogError(f"{self.id}: {k} must equal {e}")
            env[k] = v
        return env


@dataclass(frozen=True)
class Instance:
    entry: PrimitiveEntry
    params: dict
    system: SphericalSystem
    subgroup: dict

    def to_json(self) -> dict:
        out = {"id": self.entry.id, "params": dict(sorted(self.params.items())),
               "system": self.system.to_json(), "subgroup": self.subgroup}
        if self.entry.normalizations:
            out["normalizations"] = list(self.entry.normalizations)
        return out


def _node(rs: RootSystem, comp: str, index: int) -> int:
    c = "ab".index(comp)
    if c >= len(rs.diagram.components) or not 1 <= index <= rs.diagram.components[c][1]:
        raise CatalogError(f"node {comp}[{index}] outside {rs.diagram}")
    return rs.diagram.canonical_node(c, index - 1)


def _root(rs: RootSystem, text: str, env) -> RootVector:
    v = [0] * rs.rank
    for comp, i, coef in parse_terms(text, env):
        v[_node(rs, comp, i)] += coef
    return RootVector(v)


def _active(item, env) -> bool:
    return not isinstance(item, dict) or "when" not in item or bool(evaluate(item["when"], env))


def instantiate(entry: Union[PrimitiveEntry, str], params: Optional[dict] = None) -> Instance:
    if isinstance(entry, str):
        entry = get(entry)
    params = dict(params or {})
    env = entry.environment(params)
    rs = root_system(entry.diagram.format(**env))
    sp: set[int] = set()
    for item in entry.sp:
        if not _active(item, env):
            continue
        text = item["nodes"] if isinstance(item, dict) else item
        sp.update(_node(rs, c, i) for c, i, _ in parse_terms(text, env))
    sigma = []
    for item in entry.sigma:
        if not _active(item, env):
            continue
        if isinstance(item, str):
            sigma.append(_root(rs, item, env))
        elif "for" in item:
            var, lo, hi, step = item["for"]
            for x in range(evaluate(lo, env), evaluate(hi, env) + 1, step):
                sigma.append(_root(rs, item["root"], {**env, var: x}))
        else:
            sigma.append(_root(rs, item["root"], env))
    branch = next((b for b in entry.subgroup if _active(b, env)), None)
    if branch is None:
        raise CatalogError(f"{entry.id}: no subgroup data for {params}")
    sub = {k: v for k, v in branch.items() if k not in ("when", "factors", "S_prime_removed", "center_correction")}
    sub["factors"] = [[name, evaluate(size, env)] for name, size in branch.get("factors", [])]
    if "S_prime_removed" in branch:
        removed = sorted(_node(rs, c, i) + 1 for t in branch["S_prime_removed"] for c, i, _ in parse_terms(t, env))
        sub["S_prime_removed"] = removed
    if "center_correction" in branch:
        sub["center_correction"] = branch["center_correction"]
    return Instance(entry, env, SphericalSystem(rs, frozenset(sp), tuple(sigma)), sub)


# -- loading -------------------------------------------------------------------

@lru_cache(maxsize=1)
def load() -> tuple[PrimitiveEntry, ...]:
    data = json.loads(resources.files("sphere").joinpath("data/catalog.json").read_text(encoding="utf-8"))
    return tuple(PrimitiveEntry.from_json(d) for d in data["entries"])


def catalog_version() -> int:
    return json.loads(resources.files("sphere").joinpath("data/catalog.json").read_text(encoding="utf-8"))["version"]


def get(entry_id: str) -> PrimitiveEntry:
    for e in load():
        if e.id == entry_id:
            return e
    raise KeyError(entry_id)


def entries(family: Optional[str] = None) -> list[PrimitiveEntry]:
    return [e for e in load() if family is None or e.family == family.upper()]


def parameter_grid(entry: PrimitiveEntry, max_rank: int) -> Iterator[dict[str, int]]:
    """All admissible assignments whose diagram has total rank <= max_rank."""
    names = list(entry.params)
    for vals in itertools.product(*(entry.admissible(k, max_rank) for k in names)):
        p = dict(zip(names, vals))
        if _template_rank(entry.diagram, entry.environment(p)) <= max_rank:
            yield p


def _template_rank(template: str, env) -> int:
    text = template.format(**env)
    return sum(int(re.sub(r"^[A-Ga-g]", "", part)) for part in text.split("x"))


# -- diagram automorphisms and matching ---------------------------------------

@lru_cache(maxsize=None)
def automorphisms(rs: RootSystem) -> tuple[tuple[int, ...], ...]:
    return tuple(embeddings(rs.cartan, rs.cartan))


def relabel(sys: SphericalSystem, perm: tuple[int, ...]) -> SphericalSystem:
    """Image of the system under node i -> perm[i]."""
    sigma = []
    for g in sys.sigma:
        v = [0] * len(g)
        for i, c in enumerate(g):
            v[perm[i]] = c
        sigma.append(RootVector(v))
    return SphericalSystem(sys.rs, frozenset(perm[a] for a in sys.sp), tuple(sigma))


def canonical_key(sys: SphericalSystem) -> tuple:
    return min(relabel(sys, p).key() for p in automorphisms(sys.rs))


@dataclass(frozen=True)
class MatchResult:
    entry_id: str
    params: dict
    relabeling: tuple[int, ...]      # instance node i goes to query node relabeling[i]
    instance: Instance

    def __bool__(self):
        return True

    def to_json(self) -> dict:
        return {"id": self.entry_id, "params": dict(sorted(self.params.items())),
                "relabeling": [a + 1 for a in self.relabeling]}


@dataclass(frozen=True)
class NoMatch:
    reason: str

    def __bool__(self):
        return False


EXTERNAL_LOW_RANK = "external: rank <= 2"


def match(sys: SphericalSystem) -> Union[MatchResult, NoMatch]:
    if sys.rank <= 2:
        return NoMatch(EXTERNAL_LOW_RANK)
    target = str(sys.rs.diagram)
    for e in load():
        for p in parameter_grid(e, sys.rs.rank):
            env = e.environment(p)
            if e.diagram.format(**env) != target:
                continue
            inst = instantiate(e, p)
            for perm in automorphisms(sys.rs):
                if relabel(inst.system, perm) == sys:
                    return MatchResult(e.id, env, perm, inst)
    if any(f == "G" for f, _ in sys.rs.diagram.components):
        return NoMatch("no primitive systems of type G with rank greater than two")
    return NoMatch("no catalog entry matches")


# -- checks --------------------------------------------------------------------

_EXCEPTIONAL_DIM = {"G2": 14, "F4": 52, "E6": 78, "E7": 133, "E8": 248}


def group_dimension(name: str, n: int) -> int:
    if name == "SL":
        return n * n - 1
    if name == "GL":
        return n * n
    if name == "Sp":
        return n * (n + 1) // 2
    if name == "SO":
        return n * (n - 1) // 2
    if name == "E":
        return _EXCEPTIONAL_DIM[f"E{n}"]
    return _EXCEPTIONAL_DIM[name]


def expected_dimension(sys: SphericalSystem) -> int:
    """dim G/H from the system: |Phi+| - |Phi+ of S^p| + |Sigma|."""
    rs = sys.rs
    levi = sum(1 for r in rs.positive_roots if all(c == 0 or i in sys.sp for i, c in enumerate(r)))
    return len(rs.positive_roots) - levi + sys.rank


def reductive_dimension_check(inst: Instance) -> Optional[tuple[int, int]]:
    """(dim G - dim K, expected dimension) when K is the whole subgroup, else None."""
    if "S_prime" in inst.subgroup:
        return None
    rs = inst.system.rs
    dim_k = sum(group_dimension(n, k) for n, k in inst.subgroup["factors"])
    dim_k += inst.subgroup.get("center_correction", 0)
    dim_g = rs.rank + 2 * len(rs.positive_roots)
    return dim_g - dim_k, expected_dimension(inst.system)


@dataclass
class InstanceReport:
    entry_id: str
    params: dict
    checks: dict[str, bool]
    details: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        return {"id": self.entry_id, "params": dict(sorted(self.params.items())),
                "ok": self.ok, "checks": self.checks, "details": self.details}


def check_instance(inst: Instance) -> InstanceReport:
    sys = inst.system
    details = []
    rep = validate_axioms(sys)
    if not rep.ok:
        details.extend(f"{a}: {m}" for a in rep.failed_axioms() for m in rep.failures[a])
    try:
        build_colours(sys)
        colours_ok = True
    except ColourError as exc:
        colours_ok = False
        details.append(f"colours: {exc}")
    cusp = sys.support() == frozenset(range(sys.rs.rank))
    if not cusp:
        details.append("support of Sigma is not the whole diagram")
    nd, bad = check_no_doubling(sys)
    if not nd:
        details.append("no-doubling: " + ", ".join(format_root(g) for g in bad))
    return InstanceReport(inst.entry.id, inst.params,
                          {"axioms": rep.ok, "colours": colours_ok, "cuspidal": cusp, "no_doubling": nd},
                          details)


def self_test_instances() -> list[Instance]:
    out = []
    for e in load():
        for p in [e.minimal_params()] + e.next_params():
            out.append(instantiate(e, p))
    return out


def self_test() -> list[InstanceReport]:
    """Minimal and next-to-minimal instances of every entry."""
    return [check_instance(i) for i in self_test_instances()]
