"""Batch runs that reproduce every instance check in one aggregated report."""

from __future__ import annotations

import math
import time
from fractions import Fraction

from .andrasfai import AndrasfaiParams, andrasfai_graph, verify_andrasfai
from .cycles import check_lemma_N, check_prop_CD, odd_girth
from .constructions import (blowup_plan, certify_counterexample, expected_min_degree,
                            expected_order, max_eps, parity_of, subdivided_k4, tetra_star)
from .graph import blow_up, complete_bipartite, min_degree_ratio
from .homomorphism import hom_to_andrasfai
from .reduction import ReductionError, ReductionParams, reduce
from .report import CertificateReport

COUNTEREXAMPLE_GRID = [(4, 1), (4, 2), (6, 1), (5, 3), (5, 8), (7, 2)]


def andrasfai_grid(k_max: int = 6, r_max: int = 6) -> CertificateReport:
    rep = CertificateReport("preset:andrasfai-grid", params={"k": [2, k_max], "r": [1, r_max]})
    t0 = time.perf_counter()
    for k in range(2, k_max + 1):
        for r in range(1, r_max + 1):
            rep.extend(verify_andrasfai(AndrasfaiParams(k, r)), prefix=f"A{k},{r}.")
    rep.runtimes["total"] = time.perf_counter() - t0
    return rep


def smallest_f_with_room(k: int, f_max: int = 64) -> int | None:
    parity = parity_of(k)
    for f in range(1, f_max + 1):
        if max_eps(parity, k, f) > 0:
            return f
    return None


def tetra_grid(r_max: int = 3, budget: int | None = None) -> CertificateReport:
    rep = CertificateReport("preset:tetra-grid", params={"r_max": r_max})
    t0 = time.perf_counter()
    for k in (4, 5, 6, 7):
        g, tet = tetra_star(k)
        rep.add(f"T*{k}.order", "|V(T*)| = 4k", g.n == 4 * k, witness=g.n)
        rep.add(f"T*{k}.spokes", "spokes have length >= 2", min(tet.spoke_lengths) >= 2,
                witness=tet.spoke_lengths)
        og = odd_girth(g)
        rep.add(f"T*{k}.odd_girth", "T* has odd girth 2k+1", og == 2 * k + 1, witness=og)
        for res in hom_to_andrasfai(g, k, r_max, budget):
            name = f"T*{k}.no_hom.r{res.r}"
            claim = "no tetrahedron maps into A_{k,r}"
            if res.status == "abort":
                rep.abort(name, claim, res.reason)
            else:
                rep.add(name, claim, res.status == "none", witness=res.map, detail=res.reason)
    for k, f in COUNTEREXAMPLE_GRID:
        parity = parity_of(k)
        room = max_eps(parity, k, f)
        if room > 0:
            rep.extend(certify_counterexample(k, f, min(r_max, 2), room, budget), prefix=f"T{parity[0]}({k},{f}).")
            continue
        plan = blowup_plan(k, f, parity)
        g = blow_up(subdivided_k4(k).graph, plan.weights)
        pre = f"T{parity[0]}({k},{f})."
        rep.add(pre + "order", "blow-up order matches the closed form", g.n == expected_order(parity, k, f),
                witness=g.n)
        rep.add(pre + "degree", "minimum degree matches the closed form",
                g.min_degree() == expected_min_degree(parity, k, f), witness=g.min_degree())
        og = odd_girth(g)
        rep.add(pre + "odd_girth", "blow-up has odd girth 2k+1", og == 2 * k + 1, witness=og)
        rep.add(pre + "eps_room", "some eps > 0 fits below delta/n - 1/(2k-1)", None,
                witness=min_degree_ratio(g),
                detail=f"max eps {room} <= 0; smallest f with room is {smallest_f_with_room(k)}")
    rep.runtimes["total"] = time.perf_counter() - t0
    return rep


def andrasfai_blowup_factor(k: int) -> int:
    """Least uniform weight making ``A_{k,r}`` blow-ups reach ``n >= 4k/eps`` at maximal eps."""
    return math.ceil(Fraction(4 * k * (2 * k - 1), 2 * k - 3))


def reduction_demo() -> CertificateReport:
    rep = CertificateReport("preset:reduction-demo")
    t0 = time.perf_counter()
    runs = [
        ("K50,50", complete_bipartite(50, 50), ReductionParams(3, Fraction(1, 10), 24, class_min=20)),
        ("A3,4x20", blow_up(andrasfai_graph(AndrasfaiParams(3, 4)), 20),
         ReductionParams(3, Fraction(1, 30), 60, class_min=20)),
    ]
    for name, g, p in runs:
        try:
            res = reduce(g, p)
            rep.extend(res.report, prefix=f"{name}.")
            rep.params[f"{name}.|V(H)|"] = res.reduced.H.n
        except ReductionError as exc:
            if exc.report is not None:
                rep.extend(exc.report, prefix=f"{name}.")
            rep.add(f"{name}.stage", "pipeline completes", False, detail=str(exc))
    rep.runtimes["total"] = time.perf_counter() - t0
    return rep


def lemma_audit(k_values=(2, 3, 4, 5), r_values=(2, 3)) -> CertificateReport:
    rep = CertificateReport("preset:lemma-audit", params={"k": list(k_values), "r": list(r_values)})
    t0 = time.perf_counter()
    for k in k_values:
        w = andrasfai_blowup_factor(k)
        for r in r_values:
            base = andrasfai_graph(AndrasfaiParams(k, r))
            g = blow_up(base, w)
            eps = min_degree_ratio(g) - Fraction(1, 2 * k - 1)
            tag = f"A{k},{r}x{w}."
            rep.params[tag + "eps"] = eps
            rep.extend(check_lemma_N(g, k, eps), prefix=tag)
            rep.extend(check_prop_CD(g, k), prefix=tag)
    rep.runtimes["total"] = time.perf_counter() - t0
    return rep


PRESETS = {
    "andrasfai-grid": andrasfai_grid,
    "tetra-grid": tetra_grid,
    "reduction-demo": reduction_demo,
    "lemma-audit": lemma_audit,
}
