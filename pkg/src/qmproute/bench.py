"""Seeded instance generation, experiment matrix and report metrics.

Circuits are generated natively with a seeded RNG (Python's `random`
module, Mersenne Twister, stable across platforms): each round draws a
uniformly random two-qubit gate preceded by 0-2 single-qubit ops per
involved wire.  Single-qubit ops are folded into the duration of the next
two-qubit gate touching their wire (ECR base 4, +1 per folded single op,
summed over both wires); trailing singles are dropped.
"""

from __future__ import annotations

import csv
import io
import json
import random
import time
from dataclasses import dataclass, fields

from .circuit import Circuit, GateSpec
from .hardware import parse_topology
from .schedule import compute_metrics
from .solver import SolverConfig, solve

ECR_DURATION = 4
SINGLE_DURATION = 1


class BenchError(ValueError):
    pass


@dataclass(frozen=True)
class InstanceSpec:
    topology: str        # e.g. "linear:4", "grid:2x3", "y:6"
    num_qubits: int
    depth_param: int     # number of two-qubit gate rounds emitted
    seed: int

    @property
    def instance_id(self) -> str:
        return f"{self.topology}-q{self.num_qubits}-d{self.depth_param}-s{self.seed}"


@dataclass
class ResultRow:
    instance_id: str
    topology: str
    qubits: int
    depth_param: int
    seed: int
    mode: str           # layered | non-layered
    objective: str      # depth | swaps
    depth: int | None
    swaps: int | None
    unweighted_depth: int | None
    status: str         # optimal | timeout | incumbent
    wall_time_ms: int


CSV_COLUMNS = [f.name for f in fields(ResultRow)]


def gen_random_circuit(spec: InstanceSpec) -> Circuit:
    if spec.num_qubits < 2:
        raise BenchError("need at least 2 qubits")
    if spec.depth_param < 1:
        raise BenchError("depth_param must be >= 1")
    rng = random.Random(spec.seed)
    pending = [0] * (spec.num_qubits + 1)   # folded single-op count per wire
    gates = []
    for _ in range(spec.depth_param):
        p = rng.randrange(1, spec.num_qubits + 1)
        q = rng.randrange(1, spec.num_qubits)
        if q >= p:
            q += 1
        for wire in (p, q):
            pending[wire] += rng.randrange(3) * SINGLE_DURATION
        d = ECR_DURATION + pending[p] + pending[q]
        pending[p] = pending[q] = 0
        gates.append(GateSpec(id=len(gates) + 1, qubits=(p, q), duration=d))
    return Circuit(num_virtual_qubits=spec.num_qubits, gates=tuple(gates))


def parse_matrix(text: str) -> dict:
    """Matrix file: JSON with `instances` (list of {topology, qubits,
    depth_param, seeds}), `modes`, `objectives`, and optional `time_limit`
    (seconds) and `swap_duration`."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise BenchError(f"malformed matrix file: {e}") from e
    allowed = {"instances", "modes", "objectives", "time_limit", "swap_duration"}
    unknown = set(data) - allowed
    if unknown:
        raise BenchError(f"unknown fields: {sorted(unknown)}")
    for key in ("instances", "modes", "objectives"):
        if key not in data:
            raise BenchError(f"missing field '{key}'")
    return data


def objective_config(objective: str, layered: bool, time_limit, swap_duration) -> SolverConfig:
    if objective == "depth":
        w_d, w_s = 1, 0
    elif objective == "swaps":
        w_d, w_s = 0, 1
    else:
        raise BenchError(f"unknown objective {objective!r}")
    return SolverConfig(w_depth=w_d, w_swaps=w_s, layered=layered,
                        time_limit=time_limit, swap_duration=swap_duration)


def run_matrix(matrix: dict, progress=None) -> list[ResultRow]:
    rows: list[ResultRow] = []
    time_limit = matrix.get("time_limit", 30.0)
    swap_duration = matrix.get("swap_duration", 15)
    specs: list[InstanceSpec] = []
    for entry in matrix["instances"]:
        for seed in entry["seeds"]:
            specs.append(InstanceSpec(topology=entry["topology"],
                                      num_qubits=entry["qubits"],
                                      depth_param=entry["depth_param"],
                                      seed=seed))
    for spec in specs:
        graph = parse_topology(spec.topology)
        circuit = gen_random_circuit(spec)
        for objective in matrix["objectives"]:
            for mode in matrix["modes"]:
                layered = mode == "layered"
                config = objective_config(objective, layered, time_limit, swap_duration)
                t0 = time.monotonic()
                try:
                    result = solve(circuit, graph, config)
                except Exception:
                    result = None
                ms = int((time.monotonic() - t0) * 1000)
                if result is None or result.schedule is None:
                    row = ResultRow(spec.instance_id, spec.topology, spec.num_qubits,
                                    spec.depth_param, spec.seed, mode, objective,
                                    None, None, None, "timeout", ms)
                else:
                    m = compute_metrics(result.schedule)
                    status = "optimal" if result.proven_optimal else "incumbent"
                    row = ResultRow(spec.instance_id, spec.topology, spec.num_qubits,
                                    spec.depth_param, spec.seed, mode, objective,
                                    m.depth, m.swaps, m.unweighted_depth, status, ms)
                rows.append(row)
                if progress:
                    progress(row)
    return rows


def rows_to_csv(rows: list[ResultRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow([getattr(row, c) if getattr(row, c) is not None else ""
                         for c in CSV_COLUMNS])
    return buf.getvalue()


def rows_from_csv(text: str) -> list[ResultRow]:
    reader = csv.DictReader(io.StringIO(text))
    rows = []
    for rec in reader:
        def num(key):
            return int(rec[key]) if rec[key] != "" else None
        rows.append(ResultRow(rec["instance_id"], rec["topology"], int(rec["qubits"]),
                              int(rec["depth_param"]), int(rec["seed"]), rec["mode"],
                              rec["objective"], num("depth"), num("swaps"),
                              num("unweighted_depth"), rec["status"],
                              int(rec["wall_time_ms"])))
    return rows


def _pairs(rows: list[ResultRow], metric: str):
    """Per-instance (non-layered value, layered value) pairs where both runs
    are proven optimal, sorted by instance id."""
    attr = {"depth": "depth", "swaps": "swaps", "unweighted": "unweighted_depth"}
    if metric not in attr:
        raise BenchError(f"unknown metric {metric!r}")
    by_instance: dict[str, dict[str, ResultRow]] = {}
    for row in rows:
        by_instance.setdefault(row.instance_id, {})[row.mode] = row
    pairs = []
    for iid in sorted(by_instance):
        modes = by_instance[iid]
        nl, lay = modes.get("non-layered"), modes.get("layered")
        if nl is None or lay is None:
            continue
        if nl.status != "optimal" or lay.status != "optimal":
            continue
        pairs.append((iid, getattr(nl, attr[metric]), getattr(lay, attr[metric])))
    return pairs


def rmd(rows: list[ResultRow], metric: str = "depth") -> dict:
    """Relative mean deviation over instance pairs solved to optimality in
    both modes: mean of (layered - non_layered) / layered, as a percentage.
    RMD_neq restricts to pairs with differing values.  Pairs with a zero
    layered value are excluded and counted separately."""
    pairs = _pairs(rows, metric)
    devs = []
    n_eq = 0
    excluded = 0
    for _, y_nl, y_l in pairs:
        if y_l == y_nl:
            n_eq += 1
            devs.append(0.0)
        elif y_l == 0:
            excluded += 1   # cannot divide; impossible for consistent optima
        else:
            devs.append((y_l - y_nl) / y_l)
    n_s = len(pairs) - excluded
    neq_devs = [d for d in devs if d != 0]
    return {
        "N": len(pairs),
        "N_S": n_s,
        "N_eq": n_eq,
        "excluded_zero": excluded,
        "RMD": 100.0 * sum(devs) / n_s if n_s else 0.0,
        "RMD_neq": 100.0 * sum(neq_devs) / len(neq_devs) if neq_devs else 0.0,
    }


def parity_export(rows: list[ResultRow], metric: str = "depth") -> str:
    """Two-column CSV (non_layered, layered) of paired optimal values."""
    pairs = _pairs(rows, metric)
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["non_layered", "layered"])
    for _, y_nl, y_l in pairs:
        writer.writerow([y_nl, y_l])
    return buf.getvalue()
