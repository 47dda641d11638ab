"""Schedule model, feasibility validation and metrics.

A schedule is a time-ordered list of placed operations (circuit gates or
SWAPs) on hardware edges.  Validation simulates the flow of virtual qubits
through the hardware: the first gate touching a physical node binds the
virtual qubit, which also derives the initial assignment.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .circuit import Circuit
from .hardware import HardwareGraph

SWAP = 0


class ScheduleError(ValueError):
    pass


@dataclass(frozen=True)
class ScheduledOp:
    kind: int                # circuit gate id (> 0) or SWAP (0)
    edge: tuple[int, int]    # ordered pair of hardware nodes
    start: int
    duration: int

    @property
    def end(self) -> int:
        return self.start + self.duration

    @property
    def is_swap(self) -> bool:
        return self.kind == SWAP


@dataclass(frozen=True)
class Metrics:
    depth: int
    swaps: int
    unweighted_depth: int


@dataclass(frozen=True)
class Schedule:
    ops: tuple[ScheduledOp, ...]
    swap_duration: int


@dataclass(frozen=True)
class Violation:
    category: str            # assignment | routing | precedence | overlap
    op_index: int
    message: str


@dataclass(frozen=True)
class ValidationResult:
    ok: bool
    violation: Violation | None = None
    initial_assignment: dict[int, int] = field(default_factory=dict)


def validate(schedule: Schedule, circuit: Circuit, graph: HardwareGraph) -> ValidationResult:
    """Check a schedule against the assignment, routing, precedence and
    overlap constraints; on success also return the derived initial
    assignment (virtual -> physical)."""
    ops = schedule.ops
    for k in range(1, len(ops)):
        if ops[k].start < ops[k - 1].start:
            raise ScheduleError("schedule ops must be sorted by start time")

    occupant: dict[int, int] = {}        # physical node -> virtual qubit
    placed: dict[int, int] = {}          # virtual qubit -> physical node
    # origin[node]: the time-0 node whose content currently resides at node;
    # binding a qubit late still yields its true initial position.
    origin: dict[int, int] = {v: v for v in range(1, graph.num_nodes + 1)}
    initial: dict[int, int] = {}
    seen_gates: set[int] = set()
    gate_start: dict[int, ScheduledOp] = {}

    def fail(category, idx, msg):
        return ValidationResult(ok=False, violation=Violation(category, idx, msg))

    for idx, op in enumerate(ops):
        v, w = op.edge
        if not graph.has_edge(v, w):
            return fail("assignment", idx,
                        f"edge ({v},{w}) does not exist in the hardware graph")
        if op.is_swap:
            ov, ow = occupant.get(v), occupant.get(w)
            if ov is not None:
                placed[ov] = w
            if ow is not None:
                placed[ow] = v
            occupant[v], occupant[w] = ow, ov
            occupant = {k2: q for k2, q in occupant.items() if q is not None}
            origin[v], origin[w] = origin[w], origin[v]
        else:
            if not 1 <= op.kind <= circuit.num_gates:
                return fail("routing", idx, f"unknown gate id {op.kind}")
            if op.kind in seen_gates:
                return fail("routing", idx, f"gate {op.kind} scheduled twice")
            seen_gates.add(op.kind)
            gate_start[op.kind] = op
            p, q = circuit.gates[op.kind - 1].qubits
            bound = None
            for a, b in (((p, v), (q, w)), ((p, w), (q, v))):
                ok = True
                for virt, node in (a, b):
                    if node in occupant:
                        if occupant[node] != virt:
                            ok = False
                    elif virt in placed:
                        ok = False
                if ok:
                    bound = (a, b)
                    break
            if bound is None:
                return fail("routing", idx,
                            f"physical qubits {v} and {w} do not contain the "
                            f"virtual qubits {p} and {q} of gate {op.kind}")
            for virt, node in bound:
                if node not in occupant:
                    occupant[node] = virt
                    placed[virt] = node
                    initial[virt] = origin[node]

    missing = set(range(1, circuit.num_gates + 1)) - seen_gates
    if missing:
        return fail("routing", len(ops),
                    f"circuit gates never scheduled: {sorted(missing)}")

    # Per-qubit precedence: circuit order must be respected in time.
    last_end: dict[int, tuple[int, int]] = {}
    for g in circuit.gates:
        op = gate_start[g.id]
        for q in g.qubits:
            if q in last_end:
                prev_id, prev_end = last_end[q]
                if op.start < prev_end:
                    return fail("precedence", ops.index(op),
                                f"gate {g.id} starts at {op.start} before gate "
                                f"{prev_id} ends at {prev_end} on qubit {q}")
            last_end[q] = (g.id, op.end)

    # No temporal overlap per hardware node.
    busy: dict[int, list[tuple[int, int, int]]] = {}
    for idx, op in enumerate(ops):
        for node in op.edge:
            for (s, e, j) in busy.get(node, ()):
                if op.start < e and s < op.end:
                    return fail("overlap", idx,
                                f"ops {j} and {idx} overlap on node {node}")
            busy.setdefault(node, []).append((op.start, op.end, idx))

    return ValidationResult(ok=True, initial_assignment=initial)


def compute_metrics(schedule: Schedule, swap_unit_cost: int = 1) -> Metrics:
    """Depth (makespan), SWAP count and unweighted depth.

    The unweighted depth re-times the same op sequence greedily with every
    op duration set to 1 (SWAP counted as `swap_unit_cost` unit ops).
    """
    depth = max((op.end for op in schedule.ops), default=0)
    swaps = sum(1 for op in schedule.ops if op.is_swap)
    free: dict[int, int] = {}
    unweighted = 0
    for op in schedule.ops:
        v, w = op.edge
        start = max(free.get(v, 0), free.get(w, 0))
        d = swap_unit_cost if op.is_swap else 1
        free[v] = free[w] = start + d
        unweighted = max(unweighted, start + d)
    return Metrics(depth=depth, swaps=swaps, unweighted_depth=unweighted)


def parse_schedule(text: str, circuit: Circuit) -> Schedule:
    """Parse a schedule file: JSON with `swap_duration` and `ops`, an array
    of `{"gate": id-or-0, "edge": [v, w], "t": start}`.  Durations are
    recovered from the circuit and swap_duration."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScheduleError(f"malformed schedule file: {e}") from e
    if not isinstance(data, dict):
        raise ScheduleError("schedule file must be a JSON object")
    unknown = set(data) - {"swap_duration", "ops"}
    if unknown:
        raise ScheduleError(f"unknown fields: {sorted(unknown)}")
    try:
        swap_duration = data["swap_duration"]
        raw_ops = data["ops"]
    except KeyError as e:
        raise ScheduleError(f"missing field {e}") from e
    ops = []
    for i, item in enumerate(raw_ops):
        unknown = set(item) - {"gate", "edge", "t"}
        if unknown:
            raise ScheduleError(f"op {i}: unknown fields {sorted(unknown)}")
        gate = item["gate"]
        edge = item["edge"]
        t = item["t"]
        if gate == SWAP:
            d = swap_duration
        elif 1 <= gate <= circuit.num_gates:
            d = circuit.gates[gate - 1].duration
        else:
            raise ScheduleError(f"op {i}: unknown gate id {gate}")
        ops.append(ScheduledOp(kind=gate, edge=(edge[0], edge[1]), start=t, duration=d))
    return Schedule(ops=tuple(ops), swap_duration=swap_duration)


def schedule_to_json(schedule: Schedule) -> str:
    data = {
        "swap_duration": schedule.swap_duration,
        "ops": [{"gate": op.kind, "edge": list(op.edge), "t": op.start}
                for op in schedule.ops],
    }
    return json.dumps(data, indent=2)
