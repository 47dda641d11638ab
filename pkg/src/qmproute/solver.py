"""Branch-and-bound search for the qubit mapping problem.

Best-first tree search over partial schedules.  Each node schedules one
more operation (a minimal circuit gate or a SWAP) on a hardware edge, as
early as possible.  Nodes sharing an (assignment, progress) state are kept
in a Pareto front of non-dominated per-node depth vectors (and SWAP counts
when the objective weighs SWAPs); dominated nodes are pruned.  An
admissible lower bound drives the expansion order, so the first complete
node popped is optimal.  A beam width converts the search into a heuristic.
"""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .circuit import Circuit, PrecedenceInfo, analyze, minimal_unscheduled
from .hardware import HardwareGraph
from .schedule import SWAP, Schedule, ScheduledOp

DEFAULT_SWAP_DURATION = 15


class SolverError(ValueError):
    pass


@dataclass
class SolverConfig:
    w_depth: Fraction = Fraction(1)
    w_swaps: Fraction = Fraction(0)
    layered: bool = False
    beam_width: int | None = None       # None = exact search
    time_limit: float | None = None     # seconds
    swap_duration: int = DEFAULT_SWAP_DURATION
    track_swaps_in_front: bool | None = None  # None: auto (on iff w_swaps > 0)
    use_pareto: bool = True

    def __post_init__(self):
        self.w_depth = Fraction(self.w_depth)
        self.w_swaps = Fraction(self.w_swaps)
        if self.w_depth < 0 or self.w_swaps < 0 or self.w_depth + self.w_swaps == 0:
            raise SolverError("weights must be nonnegative with positive sum")
        if self.beam_width is not None and self.beam_width < 1:
            raise SolverError("beam width must be >= 1")

    @property
    def swaps_in_front(self) -> bool:
        if self.track_swaps_in_front is None:
            return self.w_swaps > 0
        return self.track_swaps_in_front or self.w_swaps > 0


class SearchNode:
    __slots__ = ("parent", "gate_index", "edge", "start", "duration",
                 "depth_map", "assignment", "occupant", "progress",
                 "swap_count", "num_scheduled", "layer_remaining",
                 "bound", "removed", "order")

    def __init__(self, parent, gate_index, edge, start, duration, depth_map,
                 assignment, occupant, progress, swap_count, num_scheduled,
                 layer_remaining):
        self.parent = parent
        self.gate_index = gate_index
        self.edge = edge
        self.start = start
        self.duration = duration
        self.depth_map = depth_map          # tuple over nodes 1..|V| (index 0 unused)
        self.assignment = assignment        # tuple over qubits 1..n, 0 = unassigned
        self.occupant = occupant            # tuple over nodes 1..|V|, 0 = empty
        self.progress = progress            # tuple over qubits 1..n
        self.swap_count = swap_count
        self.num_scheduled = num_scheduled
        self.layer_remaining = layer_remaining
        self.bound = None
        self.removed = False
        self.order = 0

    @property
    def state_key(self):
        return (self.assignment, self.progress)


@dataclass
class SolveStats:
    nodes_expanded: int = 0
    nodes_inserted: int = 0
    nodes_pruned: int = 0
    fronts_replaced: int = 0
    wall_time: float = 0.0
    restarts: int = 0


@dataclass
class SolveResult:
    schedule: Schedule | None
    objective_value: Fraction | None
    proven_optimal: bool
    status: str                 # optimal | incumbent | none
    stats: SolveStats = field(default_factory=SolveStats)
    makespan: int | None = None
    swap_count: int | None = None


def bound_depth(node: SearchNode, info: PrecedenceInfo, graph: HardwareGraph,
                swap_duration: int) -> int:
    """Admissible lower bound on the achievable makespan from this node."""
    gates = info.circuit.gates
    n = info.circuit.num_virtual_qubits
    h_q = 0
    for q in range(1, n + 1):
        a = node.assignment[q]
        dq = node.depth_map[a] if a else 0
        seq = info.per_qubit[q]
        frontier = node.progress[q]
        if frontier < len(seq):
            dq += info.delta[seq[frontier]]
        h_q = max(h_q, dq)

    d_s = swap_duration
    h_g = 0
    for pair, ids in info.pair_gates.items():
        first = None
        for i in ids:
            g = gates[i - 1]
            if info.pos[i][g.qubits[0]] >= node.progress[g.qubits[0]]:
                first = i
                break
        if first is None:
            continue
        p, q = gates[first - 1].qubits
        ap, aq = node.assignment[p], node.assignment[q]
        if not ap or not aq:
            continue
        dqp = node.depth_map[ap]
        dqq = node.depth_map[aq]
        # Circuit work on each wire before this gate (from the frontier gate
        # up to, excluding, this gate).
        lam_p = (info.tail_sums[p][node.progress[p]]
                 - info.tail_sums[p][info.pos[first][p]])
        lam_q = (info.tail_sums[q][node.progress[q]]
                 - info.tail_sums[q][info.pos[first][q]])
        paths = graph.minimal_paths(ap, aq)
        if paths is None:
            continue  # enumeration capped; skipping keeps the bound admissible
        best = None
        for path in paths:
            n_pi = len(path)
            for j in range(1, n_pi):
                terms = [dqp + lam_p + (j - 1) * d_s,
                         dqq + lam_q + (n_pi - j - 1) * d_s]
                for k in range(2, j + 1):
                    terms.append(node.depth_map[path[k - 1]] + (j + 1 - k) * d_s)
                for k in range(j + 1, n_pi):
                    terms.append(node.depth_map[path[k - 1]] + (k - j) * d_s)
                h = max(terms)
                if best is None or h < best:
                    best = h
        if best is not None:
            h_g = max(h_g, info.delta[first] + best)
    return max(h_q, h_g)


def bound_swaps(node: SearchNode, info: PrecedenceInfo, graph: HardwareGraph) -> int:
    """Admissible lower bound on the total SWAP count from this node."""
    worst = 0
    for g in info.circuit.gates:
        p, q = g.qubits
        if info.pos[g.id][p] < node.progress[p]:
            continue  # already scheduled
        ap, aq = node.assignment[p], node.assignment[q]
        if ap and aq:
            worst = max(worst, graph.dist[ap][aq] - 1)
    return node.swap_count + worst


class _Search:
    def __init__(self, circuit: Circuit, graph: HardwareGraph, config: SolverConfig):
        if circuit.num_virtual_qubits > graph.num_nodes:
            raise SolverError("more virtual qubits than hardware nodes")
        self.circuit = circuit
        self.graph = graph
        self.config = config
        self.info = analyze(circuit)
        self.stats = SolveStats()
        num_layers = max(self.info.layer.values(), default=-1) + 1
        self.layer_totals = [0] * num_layers
        for i in range(1, circuit.num_gates + 1):
            self.layer_totals[self.info.layer[i]] += 1

    def bound(self, node: SearchNode) -> Fraction:
        c = self.config
        h = Fraction(0)
        if c.w_depth:
            h += c.w_depth * bound_depth(node, self.info, self.graph, c.swap_duration)
        if c.w_swaps:
            h += c.w_swaps * bound_swaps(node, self.info, self.graph)
        return h

    def objective(self, node: SearchNode) -> Fraction:
        """Exact objective of a complete node."""
        return (self.config.w_depth * max(node.depth_map)
                + self.config.w_swaps * node.swap_count)

    def root(self) -> SearchNode:
        n = self.circuit.num_virtual_qubits
        node = SearchNode(
            parent=None, gate_index=None, edge=None, start=0, duration=0,
            depth_map=(0,) * (self.graph.num_nodes + 1),
            assignment=(0,) * (n + 1),
            occupant=(0,) * (self.graph.num_nodes + 1),
            progress=(0,) * (n + 1),
            swap_count=0, num_scheduled=0,
            layer_remaining=tuple(self.layer_totals))
        node.bound = self.bound(node)
        return node

    def make_child(self, node: SearchNode, gate_index: int, edge) -> SearchNode:
        v, w = edge
        start = max(node.depth_map[v], node.depth_map[w])
        dm = list(node.depth_map)
        if gate_index == SWAP:
            duration = self.config.swap_duration
            occ = list(node.occupant)
            asg = list(node.assignment)
            occ[v], occ[w] = occ[w], occ[v]
            if occ[v]:
                asg[occ[v]] = v
            if occ[w]:
                asg[occ[w]] = w
            dm[v] = dm[w] = start + duration
            return SearchNode(node, SWAP, edge, start, duration, tuple(dm),
                              tuple(asg), tuple(occ), node.progress,
                              node.swap_count + 1, node.num_scheduled,
                              node.layer_remaining)
        gate = self.circuit.gates[gate_index - 1]
        duration = gate.duration
        p, q = gate.qubits
        occ = list(node.occupant)
        asg = list(node.assignment)
        occ[v], occ[w] = p, q
        asg[p], asg[q] = v, w
        prog = list(node.progress)
        prog[p] += 1
        prog[q] += 1
        layer_rem = list(node.layer_remaining)
        layer_rem[self.info.layer[gate_index]] -= 1
        dm[v] = dm[w] = start + duration
        return SearchNode(node, gate_index, edge, start, duration, tuple(dm),
                          tuple(asg), tuple(occ), tuple(prog),
                          node.swap_count, node.num_scheduled + 1,
                          tuple(layer_rem))

    def gate_children_edges(self, node: SearchNode):
        """Yield (gate_index, edge) placements for minimal unscheduled gates."""
        frontier_layer = 0
        if self.config.layered:
            for l, rem in enumerate(node.layer_remaining):
                if rem:
                    frontier_layer = l
                    break
        for i in minimal_unscheduled(self.info, node.progress):
            if self.config.layered and self.info.layer[i] > frontier_layer:
                continue
            p, q = self.circuit.gates[i - 1].qubits
            ap, aq = node.assignment[p], node.assignment[q]
            if ap and aq:
                if self.graph.has_edge(ap, aq):
                    yield i, (ap, aq)
            elif ap:
                for w in self.graph.neighbors(ap):
                    if not node.occupant[w]:
                        yield i, (ap, w)
            elif aq:
                for v in self.graph.neighbors(aq):
                    if not node.occupant[v]:
                        yield i, (v, aq)
            else:
                for v, w in self.graph.edges:
                    if not node.occupant[v] and not node.occupant[w]:
                        yield i, (v, w)
                        yield i, (w, v)

    def swap_children_edges(self, node: SearchNode):
        for v, w in self.graph.edges:
            if node.occupant[v] or node.occupant[w]:
                yield SWAP, (v, w)


class _Front:
    """Pareto store: state key -> non-dominated (depth_map, swap_count) records."""

    def __init__(self, track_swaps: bool):
        self.track_swaps = track_swaps
        self.store: dict = {}

    def dominates(self, a: SearchNode, b: SearchNode) -> bool:
        if self.track_swaps and a.swap_count > b.swap_count:
            return False
        return all(x <= y for x, y in zip(a.depth_map, b.depth_map))

    def try_insert(self, node: SearchNode, stats: SolveStats) -> bool:
        records = self.store.setdefault(node.state_key, [])
        for r in records:
            if self.dominates(r, node):
                stats.nodes_pruned += 1
                return False
        kept = []
        evicted = False
        for r in records:
            if self.dominates(node, r):
                r.removed = True
                evicted = True
            else:
                kept.append(r)
        if evicted:
            stats.fronts_replaced += 1
        kept.append(node)
        self.store[node.state_key] = kept
        return True


def solve(circuit: Circuit, graph: HardwareGraph, config: SolverConfig | None = None) -> SolveResult:
    """Solve the mapping problem; exact unless a beam width or time limit cuts
    the search.  In beam mode a dead-ended search is deterministically
    restarted with twice the beam width until a solution is found."""
    config = config or SolverConfig()
    t0 = time.monotonic()
    search = _Search(circuit, graph, config)
    restarts = 0
    beam = config.beam_width
    while True:
        result = _run(search, config, beam, t0)
        result.stats.restarts = restarts
        if result.status != "none" or beam is None:
            result.stats.wall_time = time.monotonic() - t0
            return result
        if config.time_limit is not None and time.monotonic() - t0 > config.time_limit:
            result.stats.wall_time = time.monotonic() - t0
            return result
        beam *= 2
        restarts += 1


def _run(search: _Search, config: SolverConfig, beam: int | None, t0: float) -> SolveResult:
    stats = search.stats = SolveStats()
    front = _Front(config.swaps_in_front)
    root = search.root()
    counter = 0

    def entry(node: SearchNode):
        nonlocal counter
        counter += 1
        node.order = counter
        return (node.bound, -node.num_scheduled, node.swap_count, counter, node)

    open_heap = [entry(root)]
    front.try_insert(root, stats)
    stats.nodes_inserted += 1
    num_gates = search.circuit.num_gates
    incumbent: SearchNode | None = None
    incumbent_obj: Fraction | None = None
    timed_out = False

    while open_heap:
        if config.time_limit is not None and time.monotonic() - t0 > config.time_limit:
            timed_out = True
            break
        _, _, _, _, node = heapq.heappop(open_heap)
        if node.removed:
            continue
        if node.num_scheduled == num_gates:
            return _result(search, config, node, stats, beam, timed_out=False)
        stats.nodes_expanded += 1
        children = list(search.gate_children_edges(node))
        children.extend(search.swap_children_edges(node))
        for gate_index, edge in children:
            child = search.make_child(node, gate_index, edge)
            child.bound = search.bound(child)
            if child.num_scheduled == num_gates:
                obj = search.objective(child)
                if incumbent_obj is None or obj < incumbent_obj:
                    incumbent, incumbent_obj = child, obj
            if config.use_pareto:
                if front.try_insert(child, stats):
                    stats.nodes_inserted += 1
                    heapq.heappush(open_heap, entry(child))
            else:
                stats.nodes_inserted += 1
                heapq.heappush(open_heap, entry(child))
        if beam is not None:
            alive = [e for e in open_heap if not e[4].removed]
            if len(alive) > beam:
                alive.sort(key=lambda e: e[:4])
                for e in alive[beam:]:
                    e[4].removed = True
                open_heap = alive[:beam]
                heapq.heapify(open_heap)

    if incumbent is not None:
        return _result(search, config, incumbent, stats, beam,
                       timed_out=timed_out, incumbent_only=True)
    return SolveResult(schedule=None, objective_value=None, proven_optimal=False,
                       status="none", stats=stats)


def _result(search: _Search, config: SolverConfig, node: SearchNode,
            stats: SolveStats, beam, timed_out: bool,
            incumbent_only: bool = False) -> SolveResult:
    ops = []
    cur = node
    while cur.parent is not None:
        ops.append(ScheduledOp(kind=cur.gate_index, edge=cur.edge,
                               start=cur.start, duration=cur.duration))
        cur = cur.parent
    ops.reverse()
    ops.sort(key=lambda op: op.start)
    schedule = Schedule(ops=tuple(ops), swap_duration=config.swap_duration)
    proven = beam is None and not timed_out and not incumbent_only
    return SolveResult(schedule=schedule,
                       objective_value=search.objective(node),
                       proven_optimal=proven,
                       status="optimal" if proven else "incumbent",
                       stats=stats,
                       makespan=max(node.depth_map),
                       swap_count=node.swap_count)
