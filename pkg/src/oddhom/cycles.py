"""Parity distances, odd girth, and exhaustive searches for short odd structures."""

from __future__ import annotations

import itertools
import math
import random
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from .budget import Budget
from .graph import Graph, iter_bits, mask_of, min_degree_ratio
from .report import CertificateReport

INF = math.inf


def parity_layers(g: Graph, source: int, allowed: int | None = None) -> tuple[list[int], list[int]]:
    """BFS on the parity-doubled graph from ``(source, even)``.

    Returns ``(even, odd)`` where ``even[i]`` is the mask of vertices whose shortest
    even walk from ``source`` has length ``2i`` (and ``odd[i]`` length ``2i+1``).
    Walks stay inside ``allowed`` when given.
    """
    adj = g.adj
    allowed = g.all_mask if allowed is None else allowed
    seen = [1 << source, 0]
    layers: tuple[list[int], list[int]] = ([1 << source], [])
    frontier = 1 << source
    d = 0
    while frontier:
        d += 1
        p = d & 1
        reach = 0
        for v in iter_bits(frontier):
            reach |= adj[v]
        frontier = reach & allowed & ~seen[p]
        if frontier:
            seen[p] |= frontier
            layers[p].append(frontier)
    return layers[0], layers[1]


class ParityDistanceTable:
    """Shortest even and odd walk lengths between all vertex pairs."""

    def __init__(self, g: Graph):
        self.graph = g
        self._layers = [parity_layers(g, s) for s in range(g.n)]
        self._cum: list[tuple[list[int], list[int]] | None] = [None] * g.n

    def dist(self, u: int, v: int, parity: int) -> float:
        bit = 1 << v
        for i, layer in enumerate(self._layers[u][parity]):
            if layer & bit:
                return 2 * i + parity
        return INF

    def even(self, u: int, v: int) -> float:
        return self.dist(u, v, 0)

    def odd(self, u: int, v: int) -> float:
        return self.dist(u, v, 1)

    def within(self, u: int, parity: int, length: float) -> int:
        """Mask of ``v`` with a walk of ``parity`` from ``u`` of length at most ``length``."""
        if length < parity:
            return 0
        cum = self._cum[u]
        if cum is None:
            cum = tuple(list(itertools.accumulate(layers, lambda a, b: a | b))
                        for layers in self._layers[u])
            self._cum[u] = cum
        seq = cum[parity]
        if not seq:
            return 0
        idx = (length - parity) // 2 if length != INF else len(seq) - 1
        return seq[min(int(idx), len(seq) - 1)]

    def row(self, u: int, parity: int) -> list[float]:
        out = [INF] * self.graph.n
        for i, layer in enumerate(self._layers[u][parity]):
            for v in iter_bits(layer):
                out[v] = 2 * i + parity
        return out


def parity_distances(g: Graph) -> ParityDistanceTable:
    return ParityDistanceTable(g)


def odd_girth(g: Graph) -> float:
    """Length of a shortest odd cycle, ``inf`` for bipartite graphs."""
    best = INF
    for s in range(g.n):
        even, odd = parity_layers(g, s)
        bit = 1 << s
        for i, layer in enumerate(odd):
            if layer & bit:
                best = min(best, 2 * i + 1)
                break
    return best


def shortest_odd_cycle(g: Graph) -> list[int] | None:
    og = odd_girth(g)
    if og == INF:
        return None
    return contains_cycle(g, int(og))


def is_bipartite(g: Graph) -> bool:
    return odd_girth(g) == INF


# -- cycles ---------------------------------------------------------------

def iter_cycles(g: Graph, length: int, budget: Budget | None = None) -> Iterator[list[int]]:
    """Every cycle of the given length exactly once.

    A cycle is reported starting at its least vertex and with second vertex smaller
    than its last, so the enumeration order is lexicographic.
    """
    if length < 3:
        raise ValueError(f"cycle length must be at least 3, got {length}")
    budget = budget or Budget(what=f"C_{length} search")
    adj = g.adj
    for s in range(g.n):
        allowed = g.all_mask & ~((1 << s) - 1)
        if (adj[s] & allowed).bit_count() < 2:
            continue
        even, odd = parity_layers(g, s, allowed)
        cum = [list(itertools.accumulate(even, lambda a, b: a | b)),
               list(itertools.accumulate(odd, lambda a, b: a | b))]

        def ball(rem: int) -> int:
            seq = cum[rem & 1]
            idx = (rem - (rem & 1)) // 2
            if not seq or idx < 0:
                return 0
            return seq[min(idx, len(seq) - 1)]

        # a closing walk of odd length must exist at the root, else no cycle through s
        if not ball(length) >> s & 1:
            continue
        path = [s]
        used = 1 << s

        def extend(v: int) -> Iterator[list[int]]:
            nonlocal used
            budget.tick()
            rem = length - (len(path) - 1)
            if rem == 1:
                if adj[v] >> s & 1 and path[1] < path[-1]:
                    yield list(path)
                return
            cand = adj[v] & allowed & ~used & ball(rem - 1)
            for u in iter_bits(cand):
                path.append(u)
                used |= 1 << u
                yield from extend(u)
                used &= ~(1 << u)
                path.pop()

        yield from extend(s)


def contains_cycle(g: Graph, length: int, budget: int | Budget | None = None) -> list[int] | None:
    """Lexicographically least cycle of exactly ``length`` vertices, or ``None``.

    ``None`` is only returned after exhausting the search; budget exhaustion raises
    :class:`~oddhom.budget.BudgetExceeded`.
    """
    b = budget if isinstance(budget, Budget) else Budget(budget, f"C_{length} search")
    return next(iter_cycles(g, length, b), None)


def has_odd_cycle_at_most(g: Graph, length: int) -> bool:
    return odd_girth(g) <= length


@dataclass
class DWitness:
    first: list[int]
    second: list[int]
    path: list[int]

    @property
    def vertices(self) -> set[int]:
        return set(self.first) | set(self.second) | set(self.path)


def contains_D(g: Graph, length: int, k: int | None = None,
               budget: int | Budget | None = None) -> DWitness | None:
    """Two disjoint ``length``-cycles joined by a path of length 4 internally avoiding both.

    ``k`` is accepted for interface symmetry with the freeness ranges; the search does
    not depend on it.
    """
    if length < 3 or length % 2 == 0:
        raise ValueError(f"D_l is defined here for odd l >= 3, got {length}")
    b = budget if isinstance(budget, Budget) else Budget(budget, f"D_{length} search")
    cycles = list(iter_cycles(g, length, b))
    masks = [mask_of(c) for c in cycles]
    adj = g.adj
    for i, j in itertools.combinations(range(len(cycles)), 2):
        b.tick()
        if masks[i] & masks[j]:
            continue
        both = masks[i] | masks[j]
        near_second = 0
        for y in cycles[j]:
            near_second |= adj[y]
        for x in cycles[i]:
            for p1 in iter_bits(adj[x] & ~both):
                for p2 in iter_bits(adj[p1] & ~both & ~(1 << x)):
                    b.tick()
                    for p3 in iter_bits(adj[p2] & ~both & near_second & ~(1 << p1)):
                        y = next(iter_bits(adj[p3] & masks[j]))
                        return DWitness(cycles[i], cycles[j], [x, p1, p2, p3, y])
    return None


def is_D_witness(g: Graph, w: DWitness, length: int) -> bool:
    from .graph import is_cycle, is_path
    return (len(w.first) == length and len(w.second) == length
            and is_cycle(g, w.first) and is_cycle(g, w.second)
            and not set(w.first) & set(w.second)
            and len(w.path) == 5 and is_path(g, w.path)
            and w.path[0] in w.first and w.path[-1] in w.second
            and not set(w.path[1:-1]) & (set(w.first) | set(w.second)))


# -- paths ----------------------------------------------------------------

def find_path_on_vertices(g: Graph, t: int, budget: int | Budget | None = None) -> list[int] | None:
    """A path with ``t`` vertices, or ``None`` after exhaustive search."""
    if t < 1:
        raise ValueError("path must have at least one vertex")
    if t > g.n:
        return None
    if t == 1:
        return [0] if g.n else None
    b = budget if isinstance(budget, Budget) else Budget(budget, f"path on {t} vertices")
    adj = g.adj
    order = sorted(range(g.n), key=lambda v: (g.degree(v), v))
    path: list[int] = []

    def extend(v: int, used: int) -> bool:
        b.tick()
        if len(path) == t:
            return True
        for u in iter_bits(adj[v] & ~used):
            path.append(u)
            if extend(u, used | 1 << u):
                return True
            path.pop()
        return False

    for s in order:
        if not adj[s]:
            continue
        path[:] = [s]
        if extend(s, 1 << s):
            return path
    return None


def find_even_path_bipartite(g: Graph, A: Sequence[int], B: Sequence[int], t: int,
                             budget: int | Budget | None = None) -> list[int] | None:
    """A path of even length ``t`` inside ``G[A, B]`` with both ends in ``A``."""
    amask, bmask = mask_of(A), mask_of(B)
    if amask & bmask:
        raise ValueError("A and B must be disjoint")
    if t % 2:
        raise ValueError(f"path length must be even, got {t}")
    for v in iter_bits(amask):
        if g.adj[v] & amask:
            raise ValueError(f"vertex {v} of A has a neighbour in A")
    for v in iter_bits(bmask):
        if g.adj[v] & bmask:
            raise ValueError(f"vertex {v} of B has a neighbour in B")
    b = budget if isinstance(budget, Budget) else Budget(budget, "bipartite even path")
    adj = g.adj
    path: list[int] = []

    def extend(v: int, used: int) -> bool:
        b.tick()
        if len(path) == t + 1:
            return True
        side = bmask if len(path) % 2 else amask
        for u in iter_bits(adj[v] & side & ~used):
            path.append(u)
            if extend(u, used | 1 << u):
                return True
            path.pop()
        return False

    for s in iter_bits(amask):
        path[:] = [s]
        if extend(s, 1 << s):
            return path
    return None


def odd_path_at_most(g: Graph, u: int, v: int, length: int,
                     budget: int | Budget | None = None) -> list[int] | None:
    """A simple ``u``-``v`` path of odd length at most ``length``."""
    b = budget if isinstance(budget, Budget) else Budget(budget, "odd path search")
    adj = g.adj
    path = [u]

    def extend(x: int, used: int) -> bool:
        b.tick()
        steps = len(path) - 1
        if x == v:
            return steps % 2 == 1
        if steps == length:
            return False
        for y in iter_bits(adj[x] & ~used):
            path.append(y)
            if extend(y, used | 1 << y):
                return True
            path.pop()
        return False

    return path if u != v and extend(u, 1 << u) else None


# -- walk decomposition -----------------------------------------------------

@dataclass
class WalkDecomposition:
    """Either an odd path between the walk's endpoints or an odd cycle inside it.

    ``indices`` are positions in the input walk. For a cycle they are strictly
    increasing with ``walk[indices[0]] == walk[indices[-1]]``.
    """

    kind: str
    vertices: list[int]
    indices: list[int]

    @property
    def length(self) -> int:
        return len(self.indices) - 1


def decompose_walk(walk: Sequence[int]) -> WalkDecomposition:
    """Loop-erase an odd walk, stopping at the first odd loop.

    Even loops are erased, which keeps the parity of what remains; the first odd
    loop met is a cycle whose vertices occur in the walk in order.
    """
    if len(walk) < 2:
        raise ValueError("walk must have at least one edge")
    if (len(walk) - 1) % 2 == 0:
        raise ValueError(f"walk length {len(walk) - 1} is even")
    if walk[0] == walk[-1]:
        raise ValueError("walk is closed")
    for a, b in zip(walk, walk[1:]):
        if a == b:
            raise ValueError(f"walk repeats vertex {a} on consecutive steps")
    stack: list[int] = []
    pos: dict[int, int] = {}
    for j, w in enumerate(walk):
        if w in pos:
            p = pos[w]
            loop = len(stack) - p
            if loop % 2:
                idx = stack[p:] + [j]
                return WalkDecomposition("cycle", [walk[i] for i in idx[:-1]], idx)
            for i in stack[p + 1:]:
                del pos[walk[i]]
            del stack[p + 1:]
        else:
            pos[w] = len(stack)
            stack.append(j)
    return WalkDecomposition("path", [walk[i] for i in stack], stack)


# -- lemma checkers ---------------------------------------------------------

def _densest_subset_exhaustive(g: Graph, nbhd: list[int]) -> tuple[Fraction, list[int]]:
    """Max of ``2e(M)/|M|`` over non-empty ``M`` subsets of ``nbhd`` (all ``2^|nbhd|``)."""
    m = len(nbhd)
    local = [0] * m
    index = {v: i for i, v in enumerate(nbhd)}
    for i, v in enumerate(nbhd):
        for u in iter_bits(g.adj[v]):
            if u in index:
                local[i] |= 1 << index[u]
    edges = [0] * (1 << m)
    best, arg = Fraction(0), 1
    for s in range(1, 1 << m):
        low = (s & -s).bit_length() - 1
        rest = s & (s - 1)
        edges[s] = edges[rest] + (local[low] & rest).bit_count()
        d = Fraction(2 * edges[s], s.bit_count())
        if d > best:
            best, arg = d, s
    return best, [nbhd[i] for i in iter_bits(arg)]


def lemma_preconditions(g: Graph, k: int, eps: Fraction, size_factor: int) -> dict:
    """Hypotheses shared by the local lemmas: freeness, order and minimum degree."""
    ratio = min_degree_ratio(g)
    return {
        "c2k-1_free": contains_cycle(g, 2 * k - 1) is None,
        "order": g.n * eps >= size_factor,
        "min_degree": ratio >= Fraction(1, 2 * k - 1) + eps,
    }


def check_lemma_N(g: Graph, k: int, eps: Fraction, force: bool = False, seed: int = 0,
                  exhaustive_limit: int = 16, samples: int = 64) -> CertificateReport:
    """Audit the neighbourhood-density and common-neighbour bounds on ``g``.

    Subsets of neighbourhoods up to ``exhaustive_limit`` vertices are enumerated
    completely; larger neighbourhoods are probed with ``N(v)`` itself plus random
    subsets, and the report says which regime was used.
    """
    eps = Fraction(eps)
    rep = CertificateReport("lemma-N", params={"k": k, "eps": eps, "force": force, "seed": seed})
    rep.digest("graph", g)
    pre = lemma_preconditions(g, k, eps, 4 * k)
    rep.add("pre.c2k-1_free", "input has no cycle of length 2k-1", pre["c2k-1_free"])
    rep.add("pre.order", "n >= 4k/eps", pre["order"], detail=f"n={g.n}, 4k/eps={4 * k / eps}")
    rep.add("pre.min_degree", "delta(G) >= (1/(2k-1) + eps) n", pre["min_degree"],
            detail=f"delta/n={min_degree_ratio(g)}")
    if not all(pre.values()) and not force:
        rep.add("density", "2e(M)/|M| < 2k for all M in N(v)", None, detail="preconditions failed")
        rep.add("common_neighbours", "odd path <= 2k-3 implies < 5k^2 common neighbours", None,
                detail="preconditions failed")
        return rep

    rng = random.Random(seed)
    worst: tuple[Fraction, int, list[int]] | None = None
    regimes = {"exhaustive": 0, "sampled": 0}
    for v in range(g.n):
        nb = g.neighbors(v)
        if not nb:
            continue
        if len(nb) <= exhaustive_limit:
            regimes["exhaustive"] += 1
            d, arg = _densest_subset_exhaustive(g, nb)
        else:
            regimes["sampled"] += 1
            probes = [nb] + [rng.sample(nb, rng.randint(1, len(nb))) for _ in range(samples)]
            d, arg = Fraction(0), nb
            for m in probes:
                dm = Fraction(2 * g.edges_within(mask_of(m)), len(m))
                if dm > d:
                    d, arg = dm, m
        if worst is None or d > worst[0]:
            worst = (d, v, sorted(arg))
    ok = worst is None or worst[0] < 2 * k
    rep.add("density", "2e(M)/|M| < 2k for all M in N(v)", ok,
            witness=None if worst is None else {"vertex": worst[1], "M": worst[2], "density": worst[0]},
            detail=f"regimes={regimes}")

    table = ParityDistanceTable(g)
    bound = 5 * k * k
    violations = []
    checked = 0
    max_common = 0
    for u in range(g.n):
        close = table.within(u, 1, 2 * k - 3) & ~((1 << (u + 1)) - 1)
        for v in iter_bits(close):
            checked += 1
            common = (g.adj[u] & g.adj[v]).bit_count()
            max_common = max(max_common, common)
            if common >= bound:
                # a short odd walk need not contain a short odd path; confirm before flagging
                p = odd_path_at_most(g, u, v, 2 * k - 3)
                if p is not None:
                    violations.append({"u": u, "v": v, "common": common, "path": p})
    rep.add("common_neighbours", "odd path <= 2k-3 implies < 5k^2 common neighbours",
            not violations, witness=violations[0] if violations else None,
            detail=f"pairs={checked}, max_common={max_common}, bound={bound}")
    return rep


@dataclass
class DisjointNeighborhoodSystem:
    cycle: list[int]
    M: list[list[int]]
    m: list[int | None]
    L: list[list[int]]
    threshold: Fraction
    shortfall: str | None = None
    sizes: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.shortfall is None


def build_disjoint_system(g: Graph, k: int, eps: Fraction, cycle: Sequence[int]) -> DisjointNeighborhoodSystem:
    """Greedily carve disjoint first and second neighbourhoods around a short odd cycle.

    Common neighbours are discarded in vertex-id order and ``m_i`` is the least
    surviving vertex of ``M_i``. The result names the first set that fell below
    ``n/(2k-1)`` if any did.
    """
    from .graph import is_cycle
    ell = len(cycle)
    if ell % 2 == 0:
        raise ValueError(f"cycle length {ell} is even")
    if ell >= 2 * k - 1:
        raise ValueError(f"cycle length {ell} is not below 2k-1={2 * k - 1}")
    if not is_cycle(g, list(cycle)):
        raise ValueError("given vertices do not form a cycle of the graph")
    adj = g.adj
    on_cycle = mask_of(cycle)
    nc = [adj[c] & ~on_cycle for c in cycle]
    M = []
    for i in range(ell):
        others = 0
        for j in range(ell):
            if j != i:
                others |= nc[j]
        M.append(nc[i] & ~others)
    m = [next(iter_bits(Mi), None) for Mi in M]
    Lp = []
    for i in range(ell):
        if m[i] is None:
            Lp.append(0)
            continue
        others = 0
        for j in range(ell):
            if j != i and m[j] is not None:
                others |= adj[m[j]]
        Lp.append(adj[m[i]] & ~on_cycle & ~others)
    near_cycle = 0
    for c in cycle:
        near_cycle |= adj[c]
    L = [x & ~near_cycle for x in Lp]

    threshold = Fraction(g.n, 2 * k - 1)
    shortfall = None
    sizes = {}
    for name, sets in (("M", M), ("L", L)):
        for i, s in enumerate(sets):
            sizes[f"{name}_{i + 1}"] = s.bit_count()
            if shortfall is None and s.bit_count() < threshold:
                shortfall = f"{name}_{i + 1}"
    return DisjointNeighborhoodSystem(
        list(cycle), [list(iter_bits(x)) for x in M], m, [list(iter_bits(x)) for x in L],
        threshold, shortfall, sizes)


def check_short_cycle_systems(g: Graph, k: int, eps: Fraction) -> CertificateReport:
    """Build a disjoint system around one short odd cycle of each length below 2k-1."""
    rep = CertificateReport("short-cycle-systems", params={"k": k, "eps": Fraction(eps)})
    rep.digest("graph", g)
    found = False
    for ell in range(3, 2 * k - 1, 2):
        c = contains_cycle(g, ell)
        if c is None:
            continue
        found = True
        sys_ = build_disjoint_system(g, k, eps, c)
        rep.add(f"system.C{ell}", "short odd cycles have large disjoint neighbourhood systems",
                sys_.ok, witness={"cycle": c, "sizes": sys_.sizes},
                detail="" if sys_.ok else f"{sys_.shortfall} below n/(2k-1)={sys_.threshold}")
    if not found:
        rep.add("system.vacuous", "short odd cycles have large disjoint neighbourhood systems",
                True, detail=f"no odd cycle shorter than {2 * k - 1}")
    return rep


def check_prop_CD(g: Graph, k: int, budget: int | None = None) -> CertificateReport:
    """Freeness of odd ``C_l`` for ``k <= l <= 2k-1`` and of ``D_l`` for ``max(3,2k-7) <= l <= 2k-1``."""
    rep = CertificateReport("cycle-and-D-freeness", params={"k": k})
    rep.digest("graph", g)
    for ell in range(k + (k % 2 == 0), 2 * k, 2):
        c = contains_cycle(g, ell, budget)
        rep.add(f"C{ell}_free", "no odd C_l for k <= l <= 2k-1", c is None, witness=c)
    for ell in range(max(3, 2 * k - 7), 2 * k, 2):
        d = contains_D(g, ell, k, budget)
        rep.add(f"D{ell}_free", "no D_l for max(3,2k-7) <= l <= 2k-1", d is None, witness=d)
    return rep
