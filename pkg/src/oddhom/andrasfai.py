"""Andrasfai graphs ``A_{k,r}`` on the corners of a regular polygon."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .budget import Budget
from .cycles import INF, odd_girth, parity_layers
from .graph import Graph, is_cycle, iter_bits, min_degree_ratio
from .report import CertificateReport


@dataclass(frozen=True)
class AndrasfaiParams:
    k: int
    r: int

    def __post_init__(self):
        if self.k < 2:
            raise ValueError(f"k must be at least 2, got {self.k}")
        if self.r < 1:
            raise ValueError(f"r must be at least 1, got {self.r}")

    @property
    def n(self) -> int:
        return (2 * self.k - 1) * (self.r - 1) + 2

    @property
    def step(self) -> int:
        """Index offset of the closest clockwise neighbour."""
        return (self.k - 1) * (self.r - 1) + 1


def is_adjacent_offset(p: AndrasfaiParams, d: int) -> bool:
    """Whether vertices ``d`` positions apart are adjacent.

    Circular distance ``min(d, n-d)/n`` must lie strictly between ``(k-1)/(2k-1)`` and
    ``k/(2k-1)``; compared after cross-multiplying.
    """
    n, k = p.n, p.k
    dd = min(d % n, n - d % n)
    return (k - 1) * n < (2 * k - 1) * dd < k * n


def andrasfai_graph(p: AndrasfaiParams) -> Graph:
    n = p.n
    offsets = [d for d in range(1, n) if is_adjacent_offset(p, d)]
    adj = []
    for i in range(n):
        row = 0
        for d in offsets:
            row |= 1 << ((i + d) % n)
        adj.append(row)
    return Graph(n, adj)


def neighbor_indices(p: AndrasfaiParams) -> range:
    return range((p.k - 1) * (p.r - 1) + 1, p.k * (p.r - 1) + 2)


def hamiltonian_cycle(p: AndrasfaiParams, g: Graph | None = None) -> list[int]:
    """``u_j = j * step mod n``, checked to be a Hamiltonian cycle.

    Also checks that ``u_1, u_{(2k-1)+1}, ..., u_{(r-1)(2k-1)+1}`` are exactly the
    neighbours of ``u_0``.
    """
    if p.r < 2:
        raise ValueError("A_{k,1} is K_2 and has no Hamiltonian cycle")
    g = g or andrasfai_graph(p)
    n = p.n
    seq = [(j * p.step) % n for j in range(n)]
    if math.gcd(n, p.step) != 1 or not is_cycle(g, seq):
        raise RuntimeError(f"step sequence is not a Hamiltonian cycle for {p}")
    marked = {seq[s * (2 * p.k - 1) + 1] for s in range(p.r)}
    if marked != set(g.neighbors(seq[0])):
        raise RuntimeError(f"neighbours of u_0 are not every (2k-1)-th cycle vertex for {p}")
    return seq


def rotation_is_automorphism(g: Graph) -> bool:
    n = g.n
    return all(g.has_edge((u + 1) % n, (v + 1) % n) for u, v in g.edges())


def cycle_through(g: Graph, u: int, v: int, length: int, budget: Budget | None = None) -> list[int] | None:
    """A cycle of exactly ``length`` vertices through both ``u`` and ``v``, starting at ``u``."""
    budget = budget or Budget(what="cycle through a pair")
    adj = g.adj
    cum = [list(itertools.accumulate(layers, lambda a, b: a | b)) for layers in parity_layers(g, u)]

    def back_to_u(rem: int) -> int:
        seq = cum[rem & 1]
        idx = (rem - (rem & 1)) // 2
        return seq[min(idx, len(seq) - 1)] if seq and idx >= 0 else 0

    dist_v = _bfs_dist(g, v)
    duv = dist_v[u]
    path = [u]

    def extend(x: int, used: int, seen_v: bool) -> bool:
        budget.tick()
        rem = length - (len(path) - 1)
        if rem == 1:
            return seen_v and bool(adj[x] >> u & 1)
        cand = adj[x] & ~used & back_to_u(rem - 1)
        for y in iter_bits(cand):
            hit = seen_v or y == v
            if not hit and dist_v[y] + duv > rem - 1:
                continue
            path.append(y)
            if extend(y, used | 1 << y, hit):
                return True
            path.pop()
        return False

    return path if u != v and extend(u, 1 << u, False) else None


def _bfs_dist(g: Graph, s: int) -> list[float]:
    dist = [INF] * g.n
    dist[s] = 0
    frontier, seen, d = 1 << s, 1 << s, 0
    while frontier:
        d += 1
        reach = 0
        for x in iter_bits(frontier):
            reach |= g.adj[x]
        frontier = reach & ~seen
        seen |= frontier
        for x in iter_bits(frontier):
            dist[x] = d
    return dist


def verify_andrasfai(p: AndrasfaiParams, pairs: bool = True) -> CertificateReport:
    """Regularity, odd girth, the neighbour formula, the Hamiltonian cycle and pairwise
    ``C_{2k+1}`` coverage for one ``A_{k,r}``."""
    k, r = p.k, p.r
    rep = CertificateReport(f"A_{{{k},{r}}}", params={"k": k, "r": r, "n": p.n, "step": p.step})
    g = andrasfai_graph(p)
    rep.digest("graph", g)
    rep.add("order", "|V(A_{k,r})| = (2k-1)(r-1)+2", g.n == (2 * k - 1) * (r - 1) + 2, witness=g.n)
    degs = set(g.degrees())
    rep.add("regular", "A_{k,r} is r-regular", degs == {r}, witness=sorted(degs))
    rep.add("neighbour_formula", "N(v_0) = {v_i : (k-1)(r-1)+1 <= i <= k(r-1)+1}",
            set(g.neighbors(0)) == set(neighbor_indices(p)), witness=g.neighbors(0))
    rep.add("rotation", "i -> i+1 mod n is an automorphism", rotation_is_automorphism(g))
    og = odd_girth(g)
    rep.add("c2k-1_free", "A_{k,r} has no odd cycle of length <= 2k-1", og > 2 * k - 1,
            witness=og)
    rep.add("min_degree_ratio", "delta/n > 1/(2k-1)", min_degree_ratio(g) > Fraction(1, 2 * k - 1),
            witness=min_degree_ratio(g))
    if r < 2:
        rep.add("odd_girth", "odd girth is 2k+1 when r >= 2", None, detail="r=1")
        rep.add("hamiltonian", "closest-clockwise walk is a Hamiltonian cycle", None, detail="r=1")
        rep.add("pairs_on_c2k+1", "any two vertices lie on a common C_{2k+1}", None, detail="r=1")
        return rep
    rep.add("odd_girth", "odd girth is 2k+1 when r >= 2", og == 2 * k + 1, witness=og)
    try:
        seq = hamiltonian_cycle(p, g)
        rep.add("hamiltonian", "closest-clockwise walk is a Hamiltonian cycle", True, witness=seq)
    except RuntimeError as exc:
        rep.add("hamiltonian", "closest-clockwise walk is a Hamiltonian cycle", False, detail=str(exc))
    if pairs:
        missing = None
        for u in range(g.n):
            for v in range(u + 1, g.n):
                if cycle_through(g, u, v, 2 * k + 1) is None:
                    missing = (u, v)
                    break
            if missing:
                break
        rep.add("pairs_on_c2k+1", "any two vertices lie on a common C_{2k+1}", missing is None,
                witness=missing)
    return rep
