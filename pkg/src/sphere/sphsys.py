"""Spherical systems (S^p, Sigma, A) with A empty: axioms, colours, Gamma checks."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from . import lattice
from .patterns import CandidateRoot, format_root, recognize
from .root_engine import RootSystem, RootVector, Weight, root_system, sub
from .weight_monoid import WeightTuple, in_lattice

AXIOMS = ("sigma_cap_S", "spherical_roots", "independent", "Sigma1", "Sigma2", "S")


def canonical_sigma(sigma: Iterable[Sequence[int]]) -> tuple[RootVector, ...]:
    return tuple(sorted({RootVector(g) for g in sigma}, reverse=True))


@dataclass(frozen=True, eq=False)
class SphericalSystem:
    rs: RootSystem
    sp: frozenset[int]
    sigma: tuple[RootVector, ...]

    def __post_init__(self):
        n = self.rs.rank
        if any(not 0 <= a < n for a in self.sp):
            raise ValueError("S^p node out of range")
        if any(len(g) != n for g in self.sigma):
            raise ValueError("spherical root of wrong length")
        object.__setattr__(self, "sp", frozenset(self.sp))
        object.__setattr__(self, "sigma", canonical_sigma(self.sigma))

    @property
    def A(self) -> frozenset:
        return frozenset()

    @property
    def rank(self) -> int:
        return len(self.sigma)

    def key(self) -> tuple:
        return (str(self.rs.diagram), tuple(sorted(self.sp)), self.sigma)

    def __eq__(self, other):
        return isinstance(other, SphericalSystem) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def support(self) -> frozenset[int]:
        return frozenset(i for g in self.sigma for i, c in enumerate(g) if c)

    def to_json(self) -> dict:
        return {
            "diagram": str(self.rs.diagram),
            "sp": [a + 1 for a in sorted(self.sp)],
            "sigma": [list(g) for g in self.sigma],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data: dict) -> "SphericalSystem":
        rs = root_system(data["diagram"])
        order = rs.diagram.input_order()          # C2 and D3 inputs are renumbered
        sigma = []
        for g in data.get("sigma", []):
            if len(g) != rs.rank:
                raise ValueError("spherical root of wrong length")
            v = [0] * rs.rank
            for pos, c in zip(order, g):
                v[pos] = int(c)
            sigma.append(RootVector(v))
        sp_in = [int(a) for a in data.get("sp", [])]
        if any(not 1 <= a <= rs.rank for a in sp_in):
            raise ValueError("S^p node out of range")
        sp = frozenset(order[a - 1] for a in sp_in)
        return cls(rs, sp, tuple(sigma))

    def describe(self) -> str:
        sp = ", ".join(f"a{a + 1}" for a in sorted(self.sp)) or "-"
        sig = ", ".join(format_root(g) for g in self.sigma) or "-"
        return f"{self.rs.diagram}: S^p = {{{sp}}}, Sigma = {{{sig}}}"


@dataclass
class AxiomReport:
    failures: dict[str, list[str]] = field(default_factory=lambda: {a: [] for a in AXIOMS})
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not any(self.failures.values())

    def __bool__(self):
        return self.ok

    def failed_axioms(self) -> list[str]:
        return [a for a in AXIOMS if self.failures[a]]


def doubled_node(g: Sequence[int]) -> Optional[int]:
    """alpha when g = 2 alpha."""
    nz = [i for i, c in enumerate(g) if c]
    return nz[0] if len(nz) == 1 and g[nz[0]] == 2 else None


def orthogonal_pair(rs: RootSystem, g: Sequence[int]) -> Optional[tuple[int, int]]:
    """(alpha, alpha') when g = alpha + alpha' with orthogonal simple roots."""
    nz = [i for i, c in enumerate(g) if c]
    if len(nz) == 2 and g[nz[0]] == g[nz[1]] == 1 and rs.cartan[nz[0]][nz[1]] == 0:
        return nz[0], nz[1]
    return None


def s_axiom_problems(rs: RootSystem, sp: frozenset[int], cand: CandidateRoot) -> list[str]:
    """Compatibility of one spherical root with S^p (lower/upper sandwich)."""
    g = cand.vector
    supp = [i for i, c in enumerate(g) if c]
    probs = []
    for a in supp:
        if rs.pairing(g, a) == 0 and not rs.is_root(sub(g, rs.simple_root(a))) and a not in sp:
            probs.append(f"a{a + 1} must lie in S^p for {format_root(g)}")
    for a in sorted(sp):
        if rs.pairing(g, a) != 0:
            probs.append(f"a{a + 1} in S^p is not orthogonal to {format_root(g)}")
    if cand.support_type == "F4":
        want = set(cand.nodes[:3])
        have = set(sp) & set(supp)
        if have != want:
            probs.append(f"type-F special rule: S^p on the support of {format_root(g)} must be "
                         + "{" + ", ".join(f"a{a + 1}" for a in sorted(want)) + "}")
    return probs


def validate_axioms(sys: SphericalSystem) -> AxiomReport:
    rs = sys.rs
    rep = AxiomReport()
    cands: dict[RootVector, CandidateRoot] = {}
    for g in sys.sigma:
        if sum(g) == 1 and all(c >= 0 for c in g):
            rep.failures["sigma_cap_S"].append(f"{format_root(g)} is simple")
            continue
        c = recognize(rs, g)
        if c is None:
            rep.failures["spherical_roots"].append(f"{format_root(g)} is not a spherical root shape")
        else:
            cands[g] = c
    if sys.sigma and lattice.rank(sys.sigma) < len(sys.sigma):
        rep.failures["independent"].append("Sigma is linearly dependent")
    for g in sys.sigma:
        a = doubled_node(g)
        if a is None:
            continue
        for h in sys.sigma:
            if h == g:
                continue
            val = Fraction(rs.pairing(h, a), 2)
            if val.denominator != 1 or val > 0:
                rep.failures["Sigma1"].append(
                    f"1/2<a{a + 1}^vee, {format_root(h)}> = {val} for 2a{a + 1} in Sigma")
    for g in sys.sigma:
        pr = orthogonal_pair(rs, g)
        if pr is None:
            continue
        a, b = pr
        for h in sys.sigma:
            if rs.pairing(h, a) != rs.pairing(h, b):
                rep.failures["Sigma2"].append(
                    f"<a{a + 1}^vee, {format_root(h)}> != <a{b + 1}^vee, {format_root(h)}>")
    for g, c in cands.items():
        rep.failures["S"].extend(s_axiom_problems(rs, sys.sp, c))
        if c.support_type == "F4":
            rep.notes.append("type-F special rule applied")
    return rep


# -- colours -------------------------------------------------------------------

@dataclass(frozen=True)
class Colour:
    id: str
    kind: str                     # "a'" or "b"
    nodes: tuple[int, ...]
    sigma_weight: Weight
    rho: tuple[Fraction, ...]     # values on sys.sigma, in order

    def to_json(self) -> dict:
        return {
            "id": self.id, "kind": self.kind, "nodes": [a + 1 for a in self.nodes],
            "sigma_weight": list(self.sigma_weight),
            "rho": [str(x) for x in self.rho],
        }


class ColourError(ValueError):
    pass


def build_colours(sys: SphericalSystem) -> tuple[Colour, ...]:
    rs = sys.rs
    n = rs.rank
    doubled = {doubled_node(g) for g in sys.sigma} - {None}
    partner: dict[int, int] = {}
    for g in sys.sigma:
        pr = orthogonal_pair(rs, g)
        if pr:
            a, b = pr
            for x, y in ((a, b), (b, a)):
                if partner.get(x, y) != y:
                    raise ColourError(f"a{x + 1} is paired twice")
                partner[x] = y
    out: list[Colour] = []
    done: set[int] = set()
    for a in range(n):
        if a in sys.sp or a in done:
            continue
        if a in doubled:
            if a in partner:
                raise ColourError(f"a{a + 1} is both doubled and paired")
            w = [0] * n
            w[a] = 2
            rho = tuple(Fraction(rs.pairing(g, a), 2) for g in sys.sigma)
            out.append(Colour(f"D{a + 1}", "a'", (a,), Weight(w), rho))
            done.add(a)
            continue
        nodes = (a,) if a not in partner else tuple(sorted((a, partner[a])))
        w = [0] * n
        for x in nodes:
            w[x] += 1
        rhos = [tuple(Fraction(rs.pairing(g, x)) for g in sys.sigma) for x in nodes]
        if any(r != rhos[0] for r in rhos):
            raise ColourError(f"identified colours at {nodes} have different functionals")
        ident = "D" + ",".join(str(x + 1) for x in nodes)
        out.append(Colour(ident, "b", nodes, Weight(w), rhos[0]))
        done.update(nodes)
    return tuple(out)


def colour_of_node(colours: Sequence[Colour], a: int) -> Optional[Colour]:
    """The colour moved by alpha (None for alpha in S^p)."""
    for c in colours:
        if a in c.nodes:
            return c
    return None


@dataclass
class CompatReport:
    ok: bool
    coefficients: Optional[list[list[int]]]
    reasons: list[str]

    def __bool__(self):
        return self.ok


def check_gamma_compat(sys: SphericalSystem, t: WeightTuple) -> CompatReport:
    """Each lambda_i is a nonnegative integral combination of colour weights, every
    colour occurs, and Sigma lies in the lattice of Gamma."""
    colours = build_colours(sys)
    reasons: list[str] = []
    coeffs: list[list[int]] = []
    cols = [c.sigma_weight for c in colours]
    for i, lam in enumerate(t.weights):
        x = lattice.solve(cols, list(lam)) if cols else (None if any(lam) else [])
        if x is None or any(v.denominator != 1 or v < 0 for v in x):
            reasons.append(f"weight {i + 1} is not in N Delta")
            coeffs.append([])
        else:
            coeffs.append([int(v) for v in x])
    if not reasons:
        for j, c in enumerate(colours):
            if all(row[j] == 0 for row in coeffs):
                reasons.append(f"colour {c.id} occurs in no weight")
    for g in sys.sigma:
        if not in_lattice(t, sys.rs.root_to_weight(g)):
            reasons.append(f"{format_root(g)} is not in Z Gamma")
    return CompatReport(not reasons, coeffs if len(coeffs) == t.s and all(coeffs) else None, reasons)


def colour_conditions_for_root(rs: RootSystem, t: WeightTuple, g: Sequence[int]) -> list[str]:
    """Per-root part of Gamma in N Delta: doubled roots need even coordinates and
    paired roots equal coordinates in every weight."""
    probs = []
    a = doubled_node(g)
    if a is not None:
        for i, lam in enumerate(t.weights):
            if lam[a] % 2:
                probs.append(f"weight {i + 1} has odd coordinate at a{a + 1}")
    pr = orthogonal_pair(rs, g)
    if pr is not None:
        x, y = pr
        for i, lam in enumerate(t.weights):
            if lam[x] != lam[y]:
                probs.append(f"weight {i + 1} differs at a{x + 1}, a{y + 1}")
    return probs


def check_no_doubling(sys: SphericalSystem) -> tuple[bool, list[RootVector]]:
    """Chains a1+...+an on B_n support must not have the short end in S^p."""
    bad = []
    for g in sys.sigma:
        c = recognize(sys.rs, g)
        if c is not None and c.support_type == "B_n" and c.nodes[-1] in sys.sp:
            bad.append(g)
    return not bad, bad
