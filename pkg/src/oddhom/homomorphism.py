"""Graph homomorphism search, certificate checking and tetrahedron recognition."""

from __future__ import annotations

from collections.abc import Iterator, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .andrasfai import AndrasfaiParams, andrasfai_graph, rotation_is_automorphism
from .budget import Budget, BudgetExceeded
from .cycles import INF, ParityDistanceTable, odd_girth
from .graph import Graph, iter_bits


@dataclass(frozen=True)
class Homomorphism:
    source: Graph
    target: Graph
    map: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "map", tuple(self.map))


def first_violation(source: Graph, target: Graph, mapping: Sequence[int]) -> tuple[int, int] | None:
    """First source edge (lexicographic) whose image is not a target edge."""
    if len(mapping) != source.n:
        raise ValueError(f"map covers {len(mapping)} of {source.n} source vertices")
    for x in mapping:
        if not 0 <= x < target.n:
            raise ValueError(f"image {x} is not a target vertex")
    for u, v in source.edges():
        if not target.has_edge(mapping[u], mapping[v]):
            return (u, v)
    return None


def verify_homomorphism(h: Homomorphism) -> bool:
    return first_violation(h.source, h.target, h.map) is None


def compose(first: Homomorphism, second: Homomorphism) -> Homomorphism:
    if first.target != second.source:
        raise ValueError("maps do not compose")
    return Homomorphism(first.source, second.target, [second.map[x] for x in first.map])


def search_order(g: Graph) -> list[int]:
    """Highest degree first, growing a connected region before starting a new component."""
    degs = g.degrees()
    order: list[int] = []
    placed = 0
    frontier = 0
    while len(order) < g.n:
        pool = frontier & ~placed
        if not pool:
            pool = g.all_mask & ~placed
        v = max(iter_bits(pool), key=lambda x: (degs[x], -x))
        order.append(v)
        placed |= 1 << v
        frontier |= g.adj[v]
    return order


class HomomorphismSearch:
    """Backtracking over a fixed vertex order with parity-distance forward checking.

    Assigning ``u -> x`` restricts every other source vertex ``w`` to target vertices
    within even distance ``d_even(u, w)`` and odd distance ``d_odd(u, w)`` of ``x``:
    homomorphisms map walks to walks of the same length. For neighbours this is the
    usual adjacency constraint.
    """

    def __init__(self, source: Graph, target: Graph, budget: int | Budget | None = None,
                 first_values: Sequence[int] | None = None):
        if source.n == 0 or target.n == 0:
            raise ValueError("source and target must be non-empty")
        self.source = source
        self.target = target
        self.budget = budget if isinstance(budget, Budget) else Budget(budget, "homomorphism search")
        self.first_values = first_values
        self.obstruction: str | None = None
        self.order = search_order(source)
        self._ready = False

    def _prepare(self) -> bool:
        if self._ready:
            return True
        g, h = self.source, self.target
        if g.num_edges and not h.num_edges:
            self.obstruction = "source has an edge but target has none"
            return False
        og, oh = odd_girth(g), odd_girth(h)
        if oh > og:
            self.obstruction = (f"odd girth of target ({oh}) exceeds odd girth of source ({og}); "
                                "odd closed walks map to odd closed walks of the same length")
            return False
        gt = ParityDistanceTable(g)
        self._ht = ParityDistanceTable(h)
        pos = {v: i for i, v in enumerate(self.order)}
        # per position i: list of (later position j, even distance, odd distance)
        self._links = []
        for i, u in enumerate(self.order):
            ev, od = gt.row(u, 0), gt.row(u, 1)
            links = []
            for w in range(g.n):
                j = pos[w]
                if j > i and (ev[w] != INF or od[w] != INF):
                    links.append((j, ev[w], od[w]))
            self._links.append(links)
        self._ready = True
        return True

    def _reach(self, x: int, even: float, odd: float) -> int:
        m = self.target.all_mask
        if even != INF:
            m &= self._ht.within(x, 0, even)
        if odd != INF:
            m &= self._ht.within(x, 1, odd)
        return m

    def __iter__(self) -> Iterator[Homomorphism]:
        if not self._prepare():
            return
        n = self.source.n
        order = self.order
        full = self.target.all_mask
        first = full
        if self.first_values is not None:
            first = 0
            for x in self.first_values:
                first |= 1 << x
        domains = [full] * n
        domains[0] = first
        image = [0] * n
        tick = self.budget.tick
        links = self._links
        reach = self._reach
        cache: dict[tuple[int, float, float], int] = {}

        def assign(i: int, doms: list[int]) -> Iterator[list[int]]:
            if i == n:
                yield image
                return
            for x in iter_bits(doms[i]):
                tick()
                image[i] = x
                nd = doms
                ok = True
                for j, ev, od in links[i]:
                    key = (x, ev, od)
                    m = cache.get(key)
                    if m is None:
                        m = cache[key] = reach(x, ev, od)
                    d = nd[j] & m
                    if not d:
                        ok = False
                        break
                    if d != nd[j]:
                        if nd is doms:
                            nd = list(doms)
                        nd[j] = d
                if ok:
                    yield from assign(i + 1, nd)

        for img in assign(0, domains):
            mapping = [0] * n
            for i, v in enumerate(order):
                mapping[v] = img[i]
            yield Homomorphism(self.source, self.target, mapping)

    def first(self) -> Homomorphism | None:
        return next(iter(self), None)


def find_homomorphism(source: Graph, target: Graph, budget: int | None = None,
                      first_values: Sequence[int] | None = None, jobs: int = 1) -> Homomorphism | None:
    """A homomorphism ``source -> target``, or ``None`` once the search is exhausted.

    With ``jobs > 1`` the values of the first search variable are split across worker
    processes; the witness with the least first value wins, so the answer equals the
    sequential one.
    """
    if jobs <= 1:
        return HomomorphismSearch(source, target, budget, first_values).first()
    values = list(range(target.n)) if first_values is None else sorted(first_values)
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        results = list(pool.map(_search_one, [(source, target, budget, x) for x in values]))
    aborted = None
    for res in results:
        if isinstance(res, BudgetExceeded):
            aborted = aborted or res
        elif res is not None:
            return res
    if aborted:
        raise aborted
    return None


def _search_one(args):
    source, target, budget, x = args
    try:
        return HomomorphismSearch(source, target, budget, [x]).first()
    except BudgetExceeded as exc:
        return exc


def why_none(source: Graph, target: Graph) -> str | None:
    """Obstruction that settles non-existence before any search, if there is one."""
    s = HomomorphismSearch(source, target)
    s._prepare()
    return s.obstruction


@dataclass
class AndrasfaiHomResult:
    r: int
    status: str
    map: tuple[int, ...] | None = None
    reason: str = ""
    nodes: int = 0


def hom_to_andrasfai(g: Graph, k: int, r_max: int, budget: int | None = None) -> list[AndrasfaiHomResult]:
    """Decide ``G -> A_{k,r}`` independently for every ``1 <= r <= r_max``.

    The first search variable is pinned to vertex 0 once the rotation ``i -> i+1`` is
    checked to be an automorphism of the target.
    """
    if k < 2 or r_max < 1:
        raise ValueError("need k >= 2 and r_max >= 1")
    out = []
    for r in range(1, r_max + 1):
        target = andrasfai_graph(AndrasfaiParams(k, r))
        pin = [0] if rotation_is_automorphism(target) else None
        search = HomomorphismSearch(g, target, budget, pin)
        try:
            h = search.first()
        except BudgetExceeded as exc:
            out.append(AndrasfaiHomResult(r, "abort", reason=str(exc), nodes=search.budget.used))
            continue
        if h is None:
            out.append(AndrasfaiHomResult(r, "none", reason=search.obstruction or "search exhausted",
                                          nodes=search.budget.used))
        else:
            out.append(AndrasfaiHomResult(r, "exists", h.map, nodes=search.budget.used))
    return out


# -- tetrahedra -------------------------------------------------------------

@dataclass
class TetraSpec:
    k: int
    cycle: list[int]
    branches: tuple[int, int, int]
    center: int
    spokes: list[list[int]] = field(default_factory=list)

    @property
    def spoke_lengths(self) -> list[int]:
        return [len(p) - 1 for p in self.spokes]


def _arc(cycle: list[int], a: int, b: int, avoid: int) -> list[int]:
    """The arc of ``cycle`` from ``a`` to ``b`` not passing through ``avoid``."""
    n = len(cycle)
    ia, ib = cycle.index(a), cycle.index(b)
    fwd = [cycle[(ia + t) % n] for t in range((ib - ia) % n + 1)]
    if avoid not in fwd:
        return fwd
    return [cycle[(ia - t) % n] for t in range((ia - ib) % n + 1)]


def tetra_cycles(tet: TetraSpec) -> list[list[int]]:
    """The three cycles through the center and exactly two branch vertices."""
    out = []
    for i, j in ((0, 1), (1, 2), (0, 2)):
        third = tet.branches[3 - i - j]
        arc = _arc(tet.cycle, tet.branches[i], tet.branches[j], third)
        out.append(tet.spokes[i][::-1][:-1] + arc + tet.spokes[j][1:-1])
    return out


def validate_tetra(g: Graph, tet: TetraSpec) -> bool:
    """Check every defining condition, including that ``g`` is exactly the union of parts."""
    from .graph import is_cycle, is_path
    k = tet.k
    if not is_cycle(g, tet.cycle):
        return False
    if len(set(tet.branches)) != 3 or not set(tet.branches) <= set(tet.cycle):
        return False
    if tet.center in tet.cycle or len(tet.spokes) != 3:
        return False
    interiors: set[int] = set()
    for b, p in zip(tet.branches, tet.spokes):
        if p[0] != b or p[-1] != tet.center or len(p) < 3 or not is_path(g, p):
            return False
        inner = set(p[1:-1])
        if inner & interiors or inner & set(tet.cycle):
            return False
        interiors |= inner
    edges = set()
    cyc = tet.cycle
    for a, b in zip(cyc, cyc[1:] + cyc[:1]):
        edges.add((min(a, b), max(a, b)))
    for p in tet.spokes:
        for a, b in zip(p, p[1:]):
            edges.add((min(a, b), max(a, b)))
    covered = set(cyc) | interiors | {tet.center}
    if edges != set(g.edges()) or covered != set(range(g.n)):
        return False
    return all(len(c) == 2 * k + 1 and is_cycle(g, c) for c in tetra_cycles(tet))


def recognize_tetra(g: Graph, k: int) -> TetraSpec | None:
    """Find a center, three spokes and a rim cycle that make ``g`` a ``(2k+1)``-tetrahedron."""
    if k < 2:
        raise ValueError("k must be at least 2")
    degs = g.degrees()
    hubs = [v for v in range(g.n) if degs[v] == 3]
    if len(hubs) != 4 or any(d not in (2, 3) for d in degs):
        return None
    for z in hubs:
        spokes = []
        for first in g.neighbors(z):
            path = [z, first]
            while degs[path[-1]] == 2:
                nxt = [u for u in g.neighbors(path[-1]) if u != path[-2]]
                path.append(nxt[0])
            spokes.append(path[::-1])
        ends = [p[0] for p in spokes]
        if len(set(ends)) != 3 or z in ends:
            continue
        spoke_vertices = {v for p in spokes for v in p[1:]}
        rim = [v for v in range(g.n) if v not in spoke_vertices]
        cycle = _trace_cycle(g, rim, ends[0])
        if cycle is None:
            continue
        tet = TetraSpec(k, cycle, tuple(ends), z, spokes)
        if validate_tetra(g, tet):
            return tet
    return None


def _trace_cycle(g: Graph, vertices: list[int], start: int) -> list[int] | None:
    allowed = set(vertices)
    if start not in allowed:
        return None
    cycle = [start]
    prev = None
    while True:
        nxt = [u for u in g.neighbors(cycle[-1]) if u in allowed and u != prev]
        if not nxt:
            return None
        step = min(nxt)
        if step == start:
            break
        if step in cycle:
            return None
        prev = cycle[-1]
        cycle.append(step)
    return cycle if len(cycle) == len(allowed) else None


def andrasfai_position_claim(k: int, r: int, d: int) -> set[int]:
    """Hamiltonian-cycle positions allowed for the image of a vertex at distance ``d`` from
    a vertex mapped to ``u_0``, along an embedded ``C_{2k+1}``."""
    out = set()
    for i in range(r - 1):
        out.add(i * (2 * k - 1) + d)
        out.add(i * (2 * k - 1) + (2 * k + 1 - d))
    return out


def all_homomorphisms(source: Graph, target: Graph, pinned: dict[int, int] | None = None,
                      budget: int | None = None) -> list[Homomorphism]:
    """Every homomorphism, optionally with some vertices pinned (filtered after search)."""
    out = []
    for h in HomomorphismSearch(source, target, budget):
        if pinned and any(h.map[v] != x for v, x in pinned.items()):
            continue
        out.append(h)
    return out
