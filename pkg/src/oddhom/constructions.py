"""Odd tetrahedra built from subdivided ``K_4`` and their counterexample blow-ups."""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction

from .budget import BudgetExceeded
from .cycles import odd_girth
from .graph import Graph, blow_up, blow_up_classes, make_graph, min_degree_ratio
from .homomorphism import (Homomorphism, TetraSpec, hom_to_andrasfai, recognize_tetra,
                           verify_homomorphism)
from .report import CertificateReport

K4_EDGES = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
# least perfect matching of K_4; these two edges become the long paths
LONG_EDGES = [(0, 1), (2, 3)]

ENDPOINT_RULES = ("canonical", "alternate", "either")


@dataclass
class SubdividedK4:
    graph: Graph
    paths: dict[tuple[int, int], list[int]]


def subdivided_k4(k: int) -> SubdividedK4:
    """``K_4`` with the matching edges replaced by paths of length ``2k-5`` and the rest by
    paths of length 3. Corners keep ids 0..3."""
    if k < 4:
        raise ValueError(f"the construction needs k >= 4, got {k}")
    nxt = 4
    edges = []
    paths = {}
    for a, b in K4_EDGES:
        length = 2 * k - 5 if (a, b) in LONG_EDGES else 3
        inner = list(range(nxt, nxt + length - 1))
        nxt += length - 1
        path = [a] + inner + [b]
        paths[(a, b)] = path
        edges.extend(zip(path, path[1:]))
    return SubdividedK4(make_graph(nxt, edges), paths)


def tetra_star(k: int) -> tuple[Graph, TetraSpec]:
    base = subdivided_k4(k)
    tet = recognize_tetra(base.graph, k)
    if tet is None:
        raise RuntimeError(f"subdivided K_4 for k={k} is not recognised as a tetrahedron")
    return base.graph, tet


@dataclass
class BlowupPlan:
    parity: str
    k: int
    f: int
    weights: tuple[int, ...]
    endpoint_rule: str

    @property
    def order(self) -> int:
        return sum(self.weights)


def _marked(base: SubdividedK4, residue: int, rule: str) -> set[int]:
    marked = set()
    for edge in LONG_EDGES:
        path = base.paths[edge]
        last = len(path) - 1
        for p in range(1, last):
            near = p % 4 == residue
            far = (last - p) % 4 == residue
            if (rule == "canonical" and near) or (rule == "alternate" and far) \
                    or (rule == "either" and (near or far)):
                marked.add(path[p])
    return marked


def expected_order(parity: str, k: int, f: int) -> int:
    return (6 * k - 4) * f if parity == "even" else (f + 1) * (2 * k - 2) + 4


def expected_min_degree(parity: str, k: int, f: int) -> int:
    return 3 * f if parity == "even" else f + 1


def blowup_plan(k: int, f: int, parity: str) -> BlowupPlan:
    """Weights for the even or odd blow-up of the subdivided ``K_4``.

    Long-path vertices are selected by their distance mod 4 to an end of the path.
    Measuring from the smaller corner, from the larger one, or from either end are
    tried in that order; the first that reproduces the closed-form order and degree
    is kept and recorded in the plan.
    """
    if f < 1:
        raise ValueError(f"f must be positive, got {f}")
    if parity == "even":
        if k < 4 or k % 2:
            raise ValueError(f"even blow-up needs even k >= 4, got {k}")
        residue, heavy, light = 0, 2 * f, f
    elif parity == "odd":
        if k < 5 or k % 2 == 0:
            raise ValueError(f"odd blow-up needs odd k >= 5, got {k}")
        residue, heavy, light = 1, f, 1
    else:
        raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")
    base = subdivided_k4(k)
    for rule in ENDPOINT_RULES:
        marked = _marked(base, residue, rule) | {0, 1, 2, 3}
        weights = tuple(heavy if v in marked else light for v in range(base.graph.n))
        g = blow_up(base.graph, weights)
        ok = g.n == expected_order(parity, k, f) and g.min_degree() == expected_min_degree(parity, k, f)
        if parity == "even":
            ok = ok and g.is_regular()
        if ok:
            return BlowupPlan(parity, k, f, weights, rule)
    raise RuntimeError(f"no endpoint rule reproduces the {parity} blow-up numbers for k={k}, f={f}")


def blowup_even(k: int, f: int) -> Graph:
    plan = blowup_plan(k, f, "even")
    return blow_up(subdivided_k4(k).graph, plan.weights)


def blowup_odd(k: int, f: int) -> Graph:
    plan = blowup_plan(k, f, "odd")
    return blow_up(subdivided_k4(k).graph, plan.weights)


def parity_of(k: int) -> str:
    return "even" if k % 2 == 0 else "odd"


def max_eps(parity: str, k: int, f: int) -> Fraction:
    """Largest ``eps`` with ``delta/n >= 1/(2k-1) + eps``; non-positive means none works."""
    ratio = Fraction(expected_min_degree(parity, k, f), expected_order(parity, k, f))
    return ratio - Fraction(1, 2 * k - 1)


def certify_counterexample(k: int, f: int, r_max: int, eps: Fraction,
                           budget: int | None = None) -> CertificateReport:
    """Build the blow-up for ``k``'s parity and certify it as a counterexample instance."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    parity = parity_of(k)
    plan = blowup_plan(k, f, parity)
    base, tet = tetra_star(k)
    g = blow_up(base, plan.weights)
    room = max_eps(parity, k, f)
    rep = CertificateReport(f"T^{parity[0]}_{f}(k={k})", params={
        "k": k, "f": f, "r_max": r_max, "eps": eps, "parity": parity,
        "endpoint_rule": plan.endpoint_rule,
        "closed_form_order": expected_order(parity, k, f),
        "closed_form_min_degree": expected_min_degree(parity, k, f),
        "max_eps": room,
    })
    rep.digest("blowup", g)
    rep.digest("tetra_star", base)
    t0 = time.perf_counter()
    rep.add("tetra_star.order", "|V(T*)| = 4k", base.n == 4 * k, witness=base.n)
    rep.add("tetra_star.member", "T* is a (2k+1)-tetrahedron", tet is not None,
            witness={"center": tet.center, "branches": tet.branches, "spokes": tet.spoke_lengths})
    rep.add("order", "blow-up order matches the closed form", g.n == expected_order(parity, k, f),
            witness=g.n)
    if parity == "even":
        rep.add("degree", "T^e_f is 3f-regular", g.is_regular() and g.min_degree() == 3 * f,
                witness=sorted(set(g.degrees())))
    else:
        rep.add("degree", "T^o_f has minimum degree f+1", g.min_degree() == f + 1,
                witness=g.min_degree())
    og = odd_girth(g)
    rep.add("odd_girth", "blow-up has odd girth 2k+1 (no odd cycle of length <= 2k-1)",
            og == 2 * k + 1, witness=og)
    ratio = min_degree_ratio(g)
    rep.add("min_degree_ratio", "delta/n >= 1/(2k-1) + eps", ratio >= Fraction(1, 2 * k - 1) + eps,
            witness=ratio, detail=f"max eps for this instance is {room}")
    collapse = Homomorphism(g, base, blow_up_classes(base, plan.weights))
    rep.add("collapse", "blow-up maps onto T* by collapsing classes", verify_homomorphism(collapse))
    rep.runtimes["structure"] = time.perf_counter() - t0
    if r_max >= 1:
        for label, graph in (("tetra_star", base), ("blowup", g)):
            t0 = time.perf_counter()
            try:
                results = hom_to_andrasfai(graph, k, r_max, budget)
            except BudgetExceeded as exc:
                rep.abort(f"{label}.no_hom", "no homomorphism into A_{k,r}", str(exc))
                continue
            for res in results:
                claim = f"{label} is not homomorphic to A_{{k,{res.r}}}"
                if res.status == "abort":
                    rep.abort(f"{label}.no_hom.r{res.r}", claim, res.reason)
                else:
                    rep.add(f"{label}.no_hom.r{res.r}", claim, res.status == "none",
                            witness=res.map, detail=f"{res.reason}; nodes={res.nodes}")
            rep.runtimes[f"hom.{label}"] = time.perf_counter() - t0
    return rep
