"""Hardware connectivity graphs.

Provides the standard topologies used in the benchmarks (linear, grid, Y),
all-pairs hop distances, and enumeration of minimal (chordless) paths
between node pairs, cached per unordered pair.  A path is minimal when no
subset of its nodes can be removed and still leave a valid path, i.e. no
hardware edge joins two non-consecutive path nodes.
"""

from __future__ import annotations

import json
import re
from collections import deque


class HardwareError(ValueError):
    pass


class HardwareGraph:
    """Undirected connected graph over nodes 1..num_nodes.

    Immutable after construction except the minimal-path cache, which is
    filled lazily and idempotently.
    """

    def __init__(self, num_nodes: int, edges, max_paths_per_pair: int = 10000):
        if num_nodes < 1:
            raise HardwareError("graph needs at least one node")
        self.num_nodes = num_nodes
        canon = set()
        for v, w in edges:
            if v == w:
                raise HardwareError(f"self-loop at node {v}")
            if not (1 <= v <= num_nodes and 1 <= w <= num_nodes):
                raise HardwareError(f"edge ({v},{w}) out of range")
            canon.add((min(v, w), max(v, w)))
        self.edges: tuple[tuple[int, int], ...] = tuple(sorted(canon))
        self.max_paths_per_pair = max_paths_per_pair
        self._adj: dict[int, list[int]] = {v: [] for v in range(1, num_nodes + 1)}
        for v, w in self.edges:
            self._adj[v].append(w)
            self._adj[w].append(v)
        for v in self._adj:
            self._adj[v].sort()
        self._edge_set = frozenset(self.edges)
        self.dist = self._all_pairs_distance()
        self._path_cache: dict[tuple[int, int], list[tuple[int, ...]] | None] = {}

    def neighbors(self, v: int) -> list[int]:
        return self._adj[v]

    def has_edge(self, v: int, w: int) -> bool:
        return (min(v, w), max(v, w)) in self._edge_set

    def _all_pairs_distance(self) -> dict[int, dict[int, int]]:
        dist: dict[int, dict[int, int]] = {}
        for s in range(1, self.num_nodes + 1):
            d = {s: 0}
            queue = deque([s])
            while queue:
                v = queue.popleft()
                for w in self._adj[v]:
                    if w not in d:
                        d[w] = d[v] + 1
                        queue.append(w)
            if len(d) != self.num_nodes:
                raise HardwareError("hardware graph must be connected")
            dist[s] = d
        return dist

    def minimal_paths(self, v: int, w: int):
        """All chordless simple paths from v to w as node tuples.

        Returns None if the enumeration exceeded max_paths_per_pair; callers
        using the result inside a lower bound must then skip the pair
        (truncating the set would raise the bound and break admissibility).
        """
        if v == w:
            raise HardwareError("minimal_paths requires distinct endpoints")
        key = (min(v, w), max(v, w))
        if key not in self._path_cache:
            self._path_cache[key] = self._enumerate_chordless(*key)
        cached = self._path_cache[key]
        if cached is None:
            return None
        if v == key[0]:
            return cached
        return [tuple(reversed(p)) for p in cached]

    def _enumerate_chordless(self, v: int, w: int):
        results: list[tuple[int, ...]] = []
        path = [v]
        on_path = {v}

        def extend(last: int) -> bool:
            for x in self._adj[last]:
                if x in on_path:
                    continue
                # Chordless: x may touch no earlier path node except `last`.
                if any(self.has_edge(x, u) for u in path[:-1]):
                    continue
                if x == w:
                    results.append(tuple(path) + (w,))
                    if len(results) > self.max_paths_per_pair:
                        return False
                    continue
                path.append(x)
                on_path.add(x)
                ok = extend(x)
                path.pop()
                on_path.remove(x)
                if not ok:
                    return False
            return True

        if not extend(v):
            return None
        results.sort()
        return results


def build_topology(kind: str, params) -> HardwareGraph:
    """Build one of the standard topologies.

    linear: params = n, path graph 1-2-...-n.
    grid: params = (rows, cols), 4-neighbor lattice, row-major node ids.
    y: params = n >= 4, node 1 is the center; the remaining nodes are
       distributed round-robin over three arms, each arm a chain off the
       center (n=4 gives the 3-star).
    """
    if kind == "linear":
        n = int(params)
        if n < 2:
            raise HardwareError("linear topology needs n >= 2")
        return HardwareGraph(n, [(i, i + 1) for i in range(1, n)])
    if kind == "grid":
        rows, cols = params
        if rows < 1 or cols < 1:
            raise HardwareError("grid dimensions must be positive")
        def node(r, c):
            return r * cols + c + 1
        edges = []
        for r in range(rows):
            for c in range(cols):
                if c + 1 < cols:
                    edges.append((node(r, c), node(r, c + 1)))
                if r + 1 < rows:
                    edges.append((node(r, c), node(r + 1, c)))
        return HardwareGraph(rows * cols, edges)
    if kind == "y":
        n = int(params)
        if n < 4:
            raise HardwareError("y topology needs n >= 4")
        arms: list[list[int]] = [[], [], []]
        for i, v in enumerate(range(2, n + 1)):
            arms[i % 3].append(v)
        edges = []
        for arm in arms:
            prev = 1
            for v in arm:
                edges.append((prev, v))
                prev = v
        return HardwareGraph(n, edges)
    raise HardwareError(f"unknown topology kind {kind!r}")


_TOPOLOGY_RE = re.compile(r"^(linear|grid|y):(\d+)(?:x(\d+))?$")


def parse_topology(spec: str) -> HardwareGraph:
    """Parse a CLI topology descriptor: linear:4 | grid:2x3 | y:6."""
    m = _TOPOLOGY_RE.match(spec)
    if not m:
        raise HardwareError(f"bad topology spec {spec!r}")
    kind, a, b = m.group(1), int(m.group(2)), m.group(3)
    if kind == "grid":
        if b is None:
            raise HardwareError("grid spec must be grid:RxC")
        return build_topology("grid", (a, int(b)))
    if b is not None:
        raise HardwareError(f"{kind} spec takes a single size")
    return build_topology(kind, a)


def parse_graph(text: str) -> HardwareGraph:
    """Parse a graph file: JSON with `num_nodes` and `edges` ([v, w] pairs)."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise HardwareError(f"malformed graph file: {e}") from e
    if not isinstance(data, dict):
        raise HardwareError("graph file must be a JSON object")
    unknown = set(data) - {"num_nodes", "edges"}
    if unknown:
        raise HardwareError(f"unknown fields: {sorted(unknown)}")
    try:
        n = data["num_nodes"]
        edges = data["edges"]
    except KeyError as e:
        raise HardwareError(f"missing field {e}") from e
    if not isinstance(n, int) or not isinstance(edges, list):
        raise HardwareError("num_nodes must be int and edges a list")
    pairs = []
    for e in edges:
        if not isinstance(e, list) or len(e) != 2:
            raise HardwareError(f"bad edge entry {e!r}")
        pairs.append((e[0], e[1]))
    return HardwareGraph(n, pairs)
