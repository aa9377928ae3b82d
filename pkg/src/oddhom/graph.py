"""Bitset-backed simple undirected graphs, blow-ups and serialization."""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping, Sequence
from fractions import Fraction

MAX_VERTICES = 4096


class GraphFormatError(ValueError):
    """Malformed serialized graph; ``offset`` is the byte position of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


class Graph:
    """Immutable simple graph on vertices ``0..n-1``.

    ``adj[v]`` is an int whose bit ``u`` is set iff ``uv`` is an edge.
    """

    __slots__ = ("n", "adj", "_hash")

    def __init__(self, n: int, adj: Sequence[int]):
        if len(adj) != n:
            raise ValueError("adjacency length differs from n")
        self.n = n
        self.adj = tuple(adj)
        self._hash = None

    # -- queries -------------------------------------------------------
    def neighbors(self, v: int) -> list[int]:
        return list(iter_bits(self.adj[v]))

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def degrees(self) -> list[int]:
        return [a.bit_count() for a in self.adj]

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def edges(self) -> list[tuple[int, int]]:
        """Edges ``(u, v)`` with ``u < v`` in lexicographic order."""
        out = []
        for u in range(self.n):
            for v in iter_bits(self.adj[u] >> (u + 1)):
                out.append((u, u + 1 + v))
        return out

    @property
    def num_edges(self) -> int:
        return sum(self.degrees()) // 2

    def min_degree(self) -> int:
        return min(self.degrees())

    def max_degree(self) -> int:
        return max(self.degrees())

    @property
    def all_mask(self) -> int:
        return (1 << self.n) - 1

    def edges_within(self, mask: int) -> int:
        return sum((self.adj[v] & mask).bit_count() for v in iter_bits(mask)) // 2

    def induced(self, vertices: Sequence[int]) -> "Graph":
        """Induced subgraph, relabelled to ``0..len(vertices)-1`` in the given order."""
        index = {v: i for i, v in enumerate(vertices)}
        adj = []
        for v in vertices:
            adj.append(mask_of(index[u] for u in iter_bits(self.adj[v]) if u in index))
        return Graph(len(vertices), adj)

    def is_independent(self, vertices: Iterable[int]) -> bool:
        m = mask_of(vertices)
        return all(not (self.adj[v] & m) for v in iter_bits(m))

    def is_regular(self) -> bool:
        d = self.degrees()
        return not d or min(d) == max(d)

    # -- dunder --------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, self.adj))
        return self._hash

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, e={self.num_edges})"


def make_graph(n: int, edges: Iterable[Sequence[int]], max_vertices: int = MAX_VERTICES) -> Graph:
    """Build a graph, rejecting loops and out-of-range endpoints. Duplicate edges collapse."""
    if n < 0:
        raise ValueError(f"vertex count must be non-negative, got {n}")
    if n > max_vertices:
        raise ValueError(f"n={n} exceeds the vertex cap {max_vertices}")
    adj = [0] * n
    for e in edges:
        u, v = e
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
        if u == v:
            raise ValueError(f"self-loop ({u}, {v}) is not allowed")
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    return Graph(n, adj)


def cycle_graph(n: int) -> Graph:
    return make_graph(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return make_graph(n, [(i, i + 1) for i in range(n - 1)])


def complete_graph(n: int) -> Graph:
    return make_graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def complete_bipartite(a: int, b: int) -> Graph:
    return make_graph(a + b, [(u, a + v) for u in range(a) for v in range(b)])


def disjoint_union(*graphs: Graph) -> Graph:
    edges, off = [], 0
    for g in graphs:
        edges.extend((u + off, v + off) for u, v in g.edges())
        off += g.n
    return make_graph(off, edges)


def blow_up(g: Graph, weights: Sequence[int] | Mapping[int, int] | int) -> Graph:
    """Replace vertex ``v`` by an independent set of ``weights[v]`` copies.

    Copies of ``v`` get the consecutive ids ``offset[v] .. offset[v]+weights[v]-1``;
    copies of adjacent base vertices are completely joined.
    """
    w = _weights(g, weights)
    offsets = [0] * g.n
    total = 0
    for v in range(g.n):
        offsets[v] = total
        total += w[v]
    if total > MAX_VERTICES:
        raise ValueError(f"blow-up has {total} vertices, above the cap {MAX_VERTICES}")
    block = [((1 << w[v]) - 1) << offsets[v] for v in range(g.n)]
    adj = [0] * total
    for v in range(g.n):
        row = 0
        for u in iter_bits(g.adj[v]):
            row |= block[u]
        for i in range(w[v]):
            adj[offsets[v] + i] = row
    return Graph(total, adj)


def blow_up_classes(g: Graph, weights: Sequence[int] | Mapping[int, int] | int) -> list[int]:
    """Base vertex of each blow-up vertex (the class-collapse map)."""
    w = _weights(g, weights)
    return [v for v in range(g.n) for _ in range(w[v])]


def _weights(g: Graph, weights) -> list[int]:
    if isinstance(weights, int):
        w = [weights] * g.n
    elif isinstance(weights, Mapping):
        missing = [v for v in range(g.n) if v not in weights]
        if missing:
            raise ValueError(f"weighting undefined on vertices {missing}")
        w = [weights[v] for v in range(g.n)]
    else:
        w = list(weights)
        if len(w) != g.n:
            raise ValueError("weighting length differs from vertex count")
    for v, x in enumerate(w):
        if x < 1:
            raise ValueError(f"weight of vertex {v} must be positive, got {x}")
    return w


def merge_vertices(g: Graph, x: int, y: int) -> tuple[Graph, list[int]]:
    """Identify two non-adjacent vertices. Returns the quotient and the vertex map."""
    if x == y or g.has_edge(x, y):
        raise ValueError("can only merge two distinct non-adjacent vertices")
    keep, drop = min(x, y), max(x, y)
    image = [v if v < drop else v - 1 for v in range(g.n)]
    image[drop] = keep if keep < drop else keep - 1
    edges = {(min(image[u], image[v]), max(image[u], image[v])) for u, v in g.edges()}
    return make_graph(g.n - 1, edges), image


def quotient_graph(g: Graph, classes: Sequence[Iterable[int]]) -> tuple[Graph, list[int]]:
    """Graph on the classes, adjacent iff some crossing edge exists. Loops are dropped."""
    member = [-1] * g.n
    for i, cls in enumerate(classes):
        for v in cls:
            member[v] = i
    if -1 in member:
        raise ValueError("classes do not cover every vertex")
    edges = {(min(member[u], member[v]), max(member[u], member[v]))
             for u, v in g.edges() if member[u] != member[v]}
    return make_graph(len(classes), edges), member


def min_degree_ratio(g: Graph) -> Fraction:
    if g.n == 0:
        raise ValueError("minimum degree ratio of the empty graph is undefined")
    return Fraction(g.min_degree(), g.n)


def is_walk(g: Graph, vertices: Sequence[int]) -> bool:
    return all(g.has_edge(a, b) for a, b in zip(vertices, vertices[1:]))


def is_path(g: Graph, vertices: Sequence[int]) -> bool:
    return len(set(vertices)) == len(vertices) and is_walk(g, vertices)


def is_cycle(g: Graph, vertices: Sequence[int]) -> bool:
    """``vertices`` lists a cycle without repeating the start."""
    return (len(vertices) >= 3 and is_path(g, vertices)
            and g.has_edge(vertices[-1], vertices[0]))


# -- serialization ---------------------------------------------------------

def encode(g: Graph, fmt: str = "edgelist") -> bytes:
    if fmt == "edgelist":
        lines = [str(g.n)] + [f"{u} {v}" for u, v in g.edges()]
        return ("\n".join(lines) + "\n").encode()
    if fmt == "graph6":
        return _to_graph6(g)
    raise ValueError(f"unknown format {fmt!r}")


def encode_edges(n: int, edges: Iterable[Sequence[int]]) -> bytes:
    """Edge-list text with edges in the given order (``encode`` sorts them)."""
    return ("\n".join([str(n)] + [f"{u} {v}" for u, v in edges]) + "\n").encode()


def decode(data: bytes | str, fmt: str = "edgelist") -> Graph:
    if isinstance(data, str):
        data = data.encode()
    if fmt == "edgelist":
        return _from_edgelist(data)
    if fmt == "graph6":
        return _from_graph6(data)
    raise ValueError(f"unknown format {fmt!r}")


def sniff_format(data: bytes) -> str:
    """Guess between edge-list text and graph6."""
    head = data.lstrip()
    if head.startswith(b">>graph6<<"):
        return "graph6"
    first = head.split(b"\n", 1)[0].strip()
    return "edgelist" if first.isdigit() else "graph6"


def _from_edgelist(data: bytes) -> Graph:
    pos = 0
    n = None
    edges = []
    for line in data.split(b"\n"):
        stripped = line.split(b"#", 1)[0].strip()
        if stripped:
            parts = stripped.split()
            try:
                nums = [int(p) for p in parts]
            except ValueError:
                raise GraphFormatError(f"non-integer token in line {line!r}", pos) from None
            if n is None:
                if len(nums) != 1 or nums[0] < 0:
                    raise GraphFormatError("first line must hold the vertex count", pos)
                n = nums[0]
            else:
                if len(nums) != 2:
                    raise GraphFormatError(f"expected 'u v', got {line!r}", pos)
                u, v = nums
                if not (0 <= u < n and 0 <= v < n) or u == v:
                    raise GraphFormatError(f"invalid edge ({u}, {v}) for n={n}", pos)
                edges.append((u, v))
        pos += len(line) + 1
    if n is None:
        raise GraphFormatError("missing vertex count", 0)
    return make_graph(n, edges)


def _to_graph6(g: Graph) -> bytes:
    n = g.n
    if n < 63:
        head = [n]
    elif n < 258048:
        head = [63, (n >> 12) & 63, (n >> 6) & 63, n & 63]
    else:
        head = [63, 63] + [(n >> s) & 63 for s in (30, 24, 18, 12, 6, 0)]
    bits = []
    for j in range(1, n):
        aj = g.adj[j]
        for i in range(j):
            bits.append(aj >> i & 1)
    bits.extend([0] * (-len(bits) % 6))
    body = []
    for i in range(0, len(bits), 6):
        x = 0
        for b in bits[i:i + 6]:
            x = (x << 1) | b
        body.append(x)
    return bytes(c + 63 for c in head + body)


def _from_graph6(data: bytes) -> Graph:
    s = data.strip()
    base = len(data) - len(data.lstrip())
    if s.startswith(b">>graph6<<"):
        s = s[10:]
        base += 10
    if b"\n" in s:
        raise GraphFormatError("graph6 input holds more than one graph", base + s.index(b"\n"))
    for i, c in enumerate(s):
        if not 63 <= c <= 126:
            raise GraphFormatError(f"byte {c} outside the graph6 range 63..126", base + i)
    vals = [c - 63 for c in s]
    if not vals:
        raise GraphFormatError("empty graph6 string", base)
    if vals[0] < 63:
        n, pos = vals[0], 1
    elif len(vals) >= 2 and vals[1] == 63:
        if len(vals) < 8:
            raise GraphFormatError("truncated 8-byte graph6 header", base + len(vals))
        n = 0
        for x in vals[2:8]:
            n = (n << 6) | x
        pos = 8
    else:
        if len(vals) < 4:
            raise GraphFormatError("truncated 4-byte graph6 header", base + len(vals))
        n = (vals[1] << 12) | (vals[2] << 6) | vals[3]
        pos = 4
    if n > MAX_VERTICES:
        raise GraphFormatError(f"n={n} exceeds the vertex cap {MAX_VERTICES}", base)
    need = (n * (n - 1) // 2 + 5) // 6
    body = vals[pos:]
    if len(body) != need:
        raise GraphFormatError(f"expected {need} data bytes for n={n}, got {len(body)}",
                               base + pos + min(len(body), need))
    adj = [0] * n
    k = 0
    for j in range(1, n):
        for i in range(j):
            if body[k // 6] >> (5 - k % 6) & 1:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
            k += 1
    return Graph(n, adj)
