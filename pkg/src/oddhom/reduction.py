"""Bounded homomorphic images of dense graphs without short odd cycles.

Pipeline: choose a cover set ``X``, group vertices by a fixed ``4k``-subset of their
``X``-neighbours, profile every vertex by quantised neighbourhood densities into those
groups, then refine the profile partition by neighbourhood signatures and take the
quotient.
"""

from __future__ import annotations

import math
import random
import time
from collections import defaultdict
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from .cycles import ParityDistanceTable, contains_cycle, odd_girth, odd_path_at_most
from .graph import Graph, iter_bits, mask_of, min_degree_ratio, quotient_graph
from .homomorphism import Homomorphism, first_violation
from .report import CertificateReport


class ReductionError(RuntimeError):
    """A pipeline stage failed; ``report`` holds the checks made so far."""

    def __init__(self, stage: str, message: str, report: CertificateReport | None = None):
        super().__init__(f"{stage}: {message}")
        self.stage = stage
        self.report = report


@dataclass(frozen=True)
class ReductionParams:
    k: int
    eps: Fraction
    m: int
    rounds: int | None = None
    class_min: int | None = None
    seed: int = 0
    random_tries: int = 200

    def __post_init__(self):
        object.__setattr__(self, "eps", Fraction(self.eps))
        if self.k < 3:
            raise ValueError(f"k must be at least 3, got {self.k}")
        if not 0 < self.eps <= 2 or (2 / self.eps).denominator != 1:
            raise ValueError(f"2/eps must be a positive integer, got eps={self.eps}")
        if self.m < 4 * self.k:
            raise ValueError(f"m must be at least 4k={4 * self.k}, got {self.m}")
        if self.rounds is None:
            object.__setattr__(self, "rounds", 2 * self.k)
        if self.rounds < 1:
            raise ValueError("rounds must be at least 1")
        if self.class_min is None:
            object.__setattr__(self, "class_min", math.ceil(8 * self.k / self.eps))

    @property
    def quanta(self) -> int:
        """``2/eps``: the number of steps of size ``eps/2`` in ``[0, 1]``."""
        return int(2 / self.eps)

    @property
    def need(self) -> int:
        return 4 * self.k


def theory_constants(k: int, eps: Fraction) -> dict:
    """The conservative cover-set size and the iterated-exponential bound on ``|V(H)|``.

    The bound is astronomically large, so it is described by its parts instead of
    evaluated.
    """
    eps = Fraction(eps)
    m = max(math.ceil(2 * math.log(3 / eps) / float(eps) ** 2), 8 * k * k)
    return {
        "m": m,
        "K": {
            "map": "x -> x * 2**x",
            "iterations": 2 * k,
            "start": f"({int(2 / eps) + 1})**C({m},{4 * k})",
            "start_exponent": math.comb(m, 4 * k),
        },
        "min_class_size": math.ceil(8 * k / eps),
        "lemma_order": math.ceil(20 * k**3 / eps),
    }


# -- stage 1: cover set -----------------------------------------------------

@dataclass
class CoverSet:
    X: list[int]
    Y: list[int]
    assignment: dict[int, tuple[int, ...]]
    deficiency: int
    ok: bool
    strategy: str


def _cover_from(g: Graph, X: Sequence[int], p: ReductionParams, strategy: str) -> CoverSet:
    xmask = mask_of(X)
    need = p.need
    Y, assignment = [], {}
    for v in range(g.n):
        hits = g.adj[v] & xmask
        if hits.bit_count() >= need:
            Y.append(v)
            chosen = []
            for x in iter_bits(hits):
                chosen.append(x)
                if len(chosen) == need:
                    break
            assignment[v] = tuple(chosen)
    deficiency = g.n - len(Y)
    ok = 3 * deficiency <= p.eps * g.n
    return CoverSet(sorted(X), Y, assignment, deficiency, ok, strategy)


def select_cover_set(g: Graph, p: ReductionParams) -> CoverSet:
    """Greedy choice of ``m`` vertices so that almost every vertex has ``4k`` neighbours among them.

    Each step adds the vertex adjacent to the most still-unsatisfied vertices (least id
    on ties). If that leaves more than ``eps n/3`` vertices short, seeded random
    ``m``-sets are tried; the best set found is returned either way.
    """
    if p.m > g.n:
        raise ValueError(f"m={p.m} exceeds n={g.n}")
    need = p.need
    count = [0] * g.n
    unsat = g.all_mask
    chosen = 0
    X = []
    for _ in range(p.m):
        best, best_gain = -1, -1
        for x in iter_bits(g.all_mask & ~chosen):
            gain = (g.adj[x] & unsat).bit_count()
            if gain > best_gain:
                best, best_gain = x, gain
        X.append(best)
        chosen |= 1 << best
        for v in iter_bits(g.adj[best]):
            count[v] += 1
            if count[v] == need:
                unsat &= ~(1 << v)
    cover = _cover_from(g, X, p, "greedy")
    if cover.ok:
        return cover
    rng = random.Random(p.seed)
    for _ in range(p.random_tries):
        trial = _cover_from(g, rng.sample(range(g.n), p.m), p, "random")
        if trial.deficiency < cover.deficiency:
            cover = trial
        if cover.ok:
            break
    return cover


# -- stage 2: groups by assigned X-subset ------------------------------------

@dataclass
class QPartition:
    classes: list[list[int]]
    keys: list[tuple[int, ...]]
    dropped: int
    covered: int

    def __len__(self) -> int:
        return len(self.classes)


def build_q_partition(cs: CoverSet, p: ReductionParams) -> QPartition:
    groups: dict[tuple[int, ...], list[int]] = defaultdict(list)
    for y in cs.Y:
        groups[cs.assignment[y]].append(y)
    classes, keys, dropped = [], [], 0
    for key in sorted(groups):
        members = groups[key]
        if len(members) < p.class_min:
            dropped += len(members)
            continue
        classes.append(sorted(members))
        keys.append(key)
    return QPartition(classes, keys, dropped, sum(len(c) for c in classes))


# -- stage 3: quantised density profiles --------------------------------------

def mu_numerators(g: Graph, v: int, q: QPartition, quanta: int) -> tuple[int, ...]:
    """``floor(|N(v) & Q_i| / |Q_i| * quanta)`` per class; the profile entry is that over ``quanta``."""
    row = []
    for cls in q.classes:
        hits = (g.adj[v] & mask_of(cls)).bit_count()
        row.append(hits * quanta // len(cls))
    return tuple(row)


def mu_vector(g: Graph, v: int, q: QPartition, eps: Fraction) -> list[Fraction]:
    eps = Fraction(eps)
    quanta = 2 / eps
    if quanta.denominator != 1:
        raise ValueError("2/eps must be an integer")
    if any(not c for c in q.classes):
        raise ValueError("classes must be non-empty")
    return [Fraction(a, int(quanta)) for a in mu_numerators(g, v, q, int(quanta))]


def mu_value(hits: int, size: int, eps: Fraction) -> Fraction:
    """One profile entry from the raw count, for callers without a partition object."""
    quanta = 2 / Fraction(eps)
    return Fraction(math.floor(Fraction(hits, size) * quanta)) / quanta


# -- stage 4: refinement --------------------------------------------------------

def _check_partition(n: int, partition: Sequence[Sequence[int]]) -> list[int]:
    cls = [-1] * n
    for i, part in enumerate(partition):
        if not part:
            raise ValueError(f"class {i} is empty")
        for v in part:
            if not 0 <= v < n:
                raise ValueError(f"vertex {v} out of range")
            if cls[v] != -1:
                raise ValueError(f"vertex {v} lies in two classes")
            cls[v] = i
    if -1 in cls:
        raise ValueError(f"vertex {cls.index(-1)} is in no class")
    return cls


def refine_once(g: Graph, partition: Sequence[Sequence[int]]) -> list[list[int]]:
    """Split each class by which classes a vertex has neighbours in.

    Output classes are ordered by parent class, then least vertex.
    """
    cls = _check_partition(g.n, partition)
    masks = [mask_of(part) for part in partition]
    buckets: dict[tuple[int, int], list[int]] = {}
    for v in range(g.n):
        sig = 0
        nb = g.adj[v]
        for i, m in enumerate(masks):
            if nb & m:
                sig |= 1 << i
        buckets.setdefault((cls[v], sig), []).append(v)
    return sorted(buckets.values(), key=lambda part: (cls[part[0]], part[0]))


def canonical(partition: Sequence[Sequence[int]]) -> list[list[int]]:
    return sorted((sorted(p) for p in partition), key=lambda p: p[0])


def refines(finer: Sequence[Sequence[int]], coarser: Sequence[Sequence[int]], n: int) -> bool:
    cls = _check_partition(n, coarser)
    return all(len({cls[v] for v in part}) == 1 for part in finer)


@dataclass
class RefinementTrace:
    graph: Graph
    levels: list[list[list[int]]]
    rounds: int
    fixed_point: int | None = None
    cover: CoverSet | None = None
    q: QPartition | None = None
    mu: list[tuple[int, ...]] = field(default_factory=list)

    def __post_init__(self):
        self._member = [_check_partition(self.graph.n, lvl) for lvl in self.levels]

    def level(self, i: int) -> list[list[int]]:
        """``R^i``; levels past an early fixed point equal the last one computed."""
        return self.levels[min(i, len(self.levels) - 1)]

    def class_index(self, i: int, v: int) -> int:
        return self._member[min(i, len(self._member) - 1)][v]

    def class_of(self, i: int, v: int) -> list[int]:
        return self.level(i)[self.class_index(i, v)]

    @property
    def final(self) -> list[list[int]]:
        return self.levels[-1]


def refinement_chain(g: Graph, start: Sequence[Sequence[int]], rounds: int) -> tuple[list[list[list[int]]], int | None]:
    levels = [canonical(start)]
    fixed = None
    for r in range(rounds):
        nxt = refine_once(g, levels[-1])
        if len(nxt) == len(levels[-1]):
            fixed = r
            break
        levels.append(nxt)
    return levels, fixed


@dataclass
class ReducedGraph:
    H: Graph
    quotient: list[int]
    classes: list[list[int]]


def lift_walk(trace: RefinementTrace, walk: Sequence[int], start: int | None = None) -> list[int]:
    """Lift a walk of reduced-graph vertices (final class indices) to a walk in ``G``.

    The ``i``-th lifted vertex (0-based) lies in the level ``rounds - i`` class
    containing final class ``walk[i]``, found by taking the least suitable neighbour.
    """
    if not walk:
        raise ValueError("empty walk")
    if len(walk) - 1 > trace.rounds:
        raise ValueError(f"walk of length {len(walk) - 1} exceeds the {trace.rounds} refinement rounds")
    g = trace.graph
    final = trace.final
    top = trace.rounds
    first_cls = final[walk[0]]
    if start is None:
        w = first_cls[0]
    elif start in first_cls:
        w = start
    else:
        raise ValueError(f"start vertex {start} is not in class {walk[0]}")
    out = [w]
    for i, h in enumerate(walk[1:], start=1):
        if not any(g.adj[u] & mask_of(final[h]) for u in final[walk[i - 1]]):
            raise ValueError(f"classes {walk[i - 1]} and {h} are not adjacent in H")
        level = top - i
        target = mask_of(trace.class_of(level, final[h][0]))
        cand = g.adj[out[-1]] & target
        if not cand:
            raise RuntimeError(f"no neighbour of {out[-1]} in level-{level} class of {h}")
        out.append((cand & -cand).bit_length() - 1)
    return out


# -- the pipeline -------------------------------------------------------------

@dataclass
class ReductionResult:
    reduced: ReducedGraph
    trace: RefinementTrace
    report: CertificateReport


def reduce(g: Graph, p: ReductionParams) -> ReductionResult:
    """Run the whole pipeline and verify the quotient.

    Raises :class:`ReductionError` when a precondition or stage fails, including when a
    final class is not independent (the quotient would not be a homomorphism).
    """
    k, eps = p.k, p.eps
    n = g.n
    rep = CertificateReport("reduce", params={
        "user": {"k": k, "eps": eps, "m": p.m, "rounds": p.rounds, "class_min": p.class_min,
                 "seed": p.seed},
        "theory": theory_constants(k, eps),
    })
    rep.digest("graph", g)
    clock = time.perf_counter()

    def lap(stage: str) -> None:
        nonlocal clock
        now = time.perf_counter()
        rep.runtimes[stage] = now - clock
        rep.params.setdefault("stages", []).append(stage)
        clock = now

    if n == 0:
        raise ValueError("empty graph")
    free = contains_cycle(g, 2 * k - 1)
    rep.add("pre.c2k-1_free", "input has no C_{2k-1}", free is None, witness=free)
    ratio = min_degree_ratio(g)
    rep.add("pre.min_degree", "delta/n >= 1/(2k-1) + eps", ratio >= Fraction(1, 2 * k - 1) + eps,
            witness=ratio)
    rep.add("pre.order", "n >= m", n >= p.m, witness=n)
    rep.params["meets_theory_order"] = n >= theory_constants(k, eps)["lemma_order"]
    lap("preconditions")
    if not rep.passed:
        raise ReductionError("preconditions", "input violates the hypotheses", rep)

    cover = select_cover_set(g, p)
    rep.add("cover", "all but eps*n/3 vertices have 4k neighbours in X", cover.ok,
            witness={"X": cover.X, "deficiency": cover.deficiency, "strategy": cover.strategy})
    lap("cover")
    if not cover.ok:
        raise ReductionError("cover", f"{cover.deficiency} vertices lack 4k neighbours in X", rep)

    q = build_q_partition(cover, p)
    rep.add("q.nonempty", "some class keeps at least class_min vertices", len(q) > 0,
            witness={"classes": len(q), "dropped": q.dropped})
    rep.add("q.covered", "|union Q| > n - eps*n/2", q.covered > n - eps * n / 2,
            witness=q.covered)
    lap("q_partition")
    if not len(q):
        raise ReductionError("q_partition", "every class is below class_min", rep)

    quanta = p.quanta
    sizes = [len(c) for c in q.classes]
    mu = [mu_numerators(g, v, q, quanta) for v in range(n)]
    qmasks = [mask_of(c) for c in q.classes]
    low_support = [(v, i) for v in range(n) for i in range(len(q))
                   if mu[v][i] and (g.adj[v] & qmasks[i]).bit_count() < p.need]
    rep.add("mu.support", "mu_i(v) > 0 implies |N(v) & Q_i| >= 4k", not low_support,
            witness=low_support[0] if low_support else None)
    groups: dict[tuple[int, ...], list[int]] = defaultdict(list)
    for v in range(n):
        groups[mu[v]].append(v)
    r0 = list(groups.values())
    lap("mu")

    levels, fixed = refinement_chain(g, r0, p.rounds)
    trace = RefinementTrace(g, levels, p.rounds, fixed, cover, q, mu)
    rep.params["levels"] = [len(lvl) for lvl in levels]
    rep.params["fixed_point_round"] = fixed
    lap("refinement")

    final = trace.final
    bad = None
    for idx, cls in enumerate(final):
        m = mask_of(cls)
        for v in cls:
            if g.adj[v] & m:
                u = next(iter_bits(g.adj[v] & m))
                bad = {"class": idx, "edge": (min(u, v), max(u, v)), "size": len(cls)}
                break
        if bad:
            break
    rep.add("a.independent", "final classes are independent", bad is None, witness=bad)
    if bad:
        raise ReductionError("independence", f"class {bad['class']} contains edge {bad['edge']}", rep)

    H, quotient = quotient_graph(g, final)
    reduced = ReducedGraph(H, quotient, final)
    rep.digest("H", H)
    rep.params["|V(H)|"] = H.n
    viol = first_violation(g, H, quotient)
    rep.add("b.homomorphism", "class map G -> H is a homomorphism", viol is None, witness=viol)
    cyc = contains_cycle(H, 2 * k - 1)
    rep.add("c.c2k-1_free", "H has no C_{2k-1}", cyc is None, witness=cyc)
    og_g = odd_girth(g)
    if og_g >= 2 * k + 1:
        og_h = odd_girth(H)
        rep.add("d.odd_girth", "G without odd cycles <= 2k-1 gives H without them", og_h >= 2 * k + 1,
                witness=og_h)
    else:
        rep.add("d.odd_girth", "G without odd cycles <= 2k-1 gives H without them", None,
                detail=f"G has odd girth {og_g}")
    lap("quotient")

    rep.add("e.no_short_odd_paths", "mu_i(v), mu_i(v') > 0 forbids an odd v-v' path of length <= 2k-5",
            *_support_paths(g, mu, k))
    total_ok, worst = True, None
    for v in range(n):
        s = Fraction(sum(a * size for a, size in zip(mu[v], sizes)), quanta)
        if s * (2 * k - 1) <= n:
            total_ok, worst = False, {"vertex": v, "sum": s}
            break
    rep.add("f.profile_mass", "sum_i mu_i(v)|Q_i| > n/(2k-1) for every v", total_ok, witness=worst)
    lap("checks")
    return ReductionResult(reduced, trace, rep)


def _support_paths(g: Graph, mu: list[tuple[int, ...]], k: int) -> tuple[bool, dict | None]:
    limit = 2 * k - 5
    if limit < 1 or not mu or not mu[0]:
        return True, None
    table = ParityDistanceTable(g)
    for i in range(len(mu[0])):
        support = mask_of(v for v in range(g.n) if mu[v][i])
        for u in iter_bits(support):
            close = table.within(u, 1, limit) & support & ~((1 << (u + 1)) - 1)
            for v in iter_bits(close):
                path = odd_path_at_most(g, u, v, limit)
                if path is not None:
                    return False, {"class": i, "path": path}
    return True, None


def quotient_homomorphism(g: Graph, reduced: ReducedGraph) -> Homomorphism:
    return Homomorphism(g, reduced.H, reduced.quotient)
