import json
from fractions import Fraction

import pytest

from qmproute.circuit import analyze, parse_circuit
from qmproute.hardware import build_topology
from qmproute.oracle import oracle_fixpoint
from qmproute.schedule import compute_metrics, validate
from qmproute.solver import (SolveStats, SolverConfig, SolverError, _Front,
                             _Search, bound_depth, bound_swaps, solve)

from conftest import tiny_instances


def depth_config(**kw):
    return SolverConfig(w_depth=1, w_swaps=0, **kw)


def swaps_config(**kw):
    return SolverConfig(w_depth=0, w_swaps=1, **kw)


class TestSolveBasics:
    def test_example_optimum(self, example_circuit, linear4):
        r = solve(example_circuit, linear4, depth_config())
        assert r.proven_optimal
        assert r.objective_value == 4
        assert r.swap_count == 0
        assert validate(r.schedule, example_circuit, linear4).ok

    def test_single_gate(self, linear4):
        c = parse_circuit(json.dumps({"num_qubits": 2,
                                      "gates": [{"q": [1, 2], "d": 4}]}))
        r = solve(c, linear4, depth_config())
        assert r.objective_value == 4
        assert r.schedule.ops[0].start == 0

    def test_empty_circuit(self, linear4):
        c = parse_circuit(json.dumps({"num_qubits": 2, "gates": []}))
        r = solve(c, linear4, depth_config())
        assert r.objective_value == 0
        assert r.schedule.ops == ()

    def test_too_many_virtual_qubits(self, linear4):
        c = parse_circuit(json.dumps({"num_qubits": 5,
                                      "gates": [{"q": [1, 5], "d": 4}]}))
        with pytest.raises(SolverError):
            solve(c, linear4, depth_config())

    def test_objective_matches_metrics(self, example_circuit, linear4):
        r = solve(example_circuit, linear4, depth_config())
        assert compute_metrics(r.schedule).depth == r.objective_value


class TestExpand:
    def test_root_children(self, example_circuit, linear4):
        search = _Search(example_circuit, linear4, depth_config())
        root = search.root()
        gate_children = list(search.gate_children_edges(root))
        # g1 and g2 on all 3 edges, both orientations each.
        assert len(gate_children) == 12
        assert list(search.swap_children_edges(root)) == []

    def test_swap_children_when_occupied(self, example_circuit, linear4):
        search = _Search(example_circuit, linear4, depth_config())
        node = search.root()
        node = search.make_child(node, 1, (1, 2))
        node = search.make_child(node, 2, (3, 4))
        swaps = list(search.swap_children_edges(node))
        assert len(swaps) == 3   # every edge has an assigned endpoint

    def test_layered_filter(self, example_circuit, linear4):
        search = _Search(example_circuit, linear4, depth_config(layered=True))
        node = search.root()
        node = search.make_child(node, 1, (1, 2))
        # g2 (layer 0) still unscheduled, so g3 (layer 1) must not appear.
        ids = {i for i, _ in search.gate_children_edges(node)}
        assert 3 not in ids
        assert 2 in ids


class TestTryInsert:
    def make_node(self, search, depth_map, swaps=0):
        n = search.root()
        n.depth_map = depth_map
        n.swap_count = swaps
        return n

    def test_equal_dominates(self, example_circuit, linear4):
        search = _Search(example_circuit, linear4, depth_config())
        front = _Front(track_swaps=False)
        stats = SolveStats()
        a = self.make_node(search, (0, 5, 5, 0, 0))
        b = self.make_node(search, (0, 5, 5, 0, 0))
        assert front.try_insert(a, stats)
        assert not front.try_insert(b, stats)
        assert stats.nodes_pruned == 1

    def test_strict_improvement_evicts(self, example_circuit, linear4):
        search = _Search(example_circuit, linear4, depth_config())
        front = _Front(track_swaps=False)
        stats = SolveStats()
        old = self.make_node(search, (0, 5, 5, 0, 0))
        new = self.make_node(search, (0, 4, 5, 0, 0))
        front.try_insert(old, stats)
        assert front.try_insert(new, stats)
        assert old.removed
        assert stats.fronts_replaced == 1

    def test_incomparable_both_retained(self, example_circuit, linear4):
        search = _Search(example_circuit, linear4, depth_config())
        front = _Front(track_swaps=False)
        stats = SolveStats()
        a = self.make_node(search, (0, 4, 6, 0, 0))
        b = self.make_node(search, (0, 5, 5, 0, 0))
        assert front.try_insert(a, stats)
        assert front.try_insert(b, stats)
        assert not a.removed and not b.removed

    def test_swap_dimension(self, example_circuit, linear4):
        search = _Search(example_circuit, linear4, swaps_config())
        front = _Front(track_swaps=True)
        stats = SolveStats()
        a = self.make_node(search, (0, 5, 5, 0, 0), swaps=1)
        b = self.make_node(search, (0, 4, 4, 0, 0), swaps=2)
        assert front.try_insert(a, stats)
        assert front.try_insert(b, stats)   # better depth, worse swaps
        assert not a.removed

    def test_store_health(self, example_circuit, linear4):
        search = _Search(example_circuit, linear4, depth_config())
        front = _Front(track_swaps=False)
        stats = SolveStats()
        import random
        rng = random.Random(7)
        for _ in range(50):
            dm = (0,) + tuple(rng.randint(0, 4) for _ in range(4))
            front.try_insert(self.make_node(search, dm), stats)
        for records in front.store.values():
            for a in records:
                for b in records:
                    if a is not b:
                        assert not front.dominates(a, b)


class TestBounds:
    def test_root_depth_bound(self, example_circuit, linear4):
        search = _Search(example_circuit, linear4, depth_config())
        root = search.root()
        assert bound_depth(root, search.info, linear4, 15) == 4

    def test_adjacent_pair_no_swap_needed(self, linear4):
        c = parse_circuit(json.dumps({"num_qubits": 2,
                                      "gates": [{"q": [1, 2], "d": 4},
                                                {"q": [1, 2], "d": 4}]}))
        search = _Search(c, linear4, depth_config())
        node = search.make_child(search.root(), 1, (1, 2))
        # Second gate adjacent at depth 4: bound is 4 + delta(2) = 8.
        assert bound_depth(node, search.info, linear4, 15) == 8

    def test_after_g1_bound(self, example_circuit, linear4):
        search = _Search(example_circuit, linear4, depth_config())
        node = search.make_child(search.root(), 1, (1, 2))
        h = bound_depth(node, search.info, linear4, 15)
        assert h >= 2 + search.info.delta[3]
        assert h >= 4   # still at least the root bound for unscheduled g2

    def test_swap_bound_root(self, example_circuit, linear4):
        search = _Search(example_circuit, linear4, swaps_config())
        assert bound_swaps(search.root(), search.info, linear4) == 0

    def test_swap_bound_distance(self, linear4):
        c = parse_circuit(json.dumps({"num_qubits": 4,
                                      "gates": [{"q": [1, 2], "d": 4},
                                                {"q": [3, 4], "d": 4},
                                                {"q": [1, 4], "d": 4}]}))
        search = _Search(c, linear4, swaps_config())
        node = search.make_child(search.root(), 1, (1, 2))
        node = search.make_child(node, 2, (3, 4))
        # Virtual 1 at node 1, virtual 4 at node 4: distance 3 -> 2 SWAPs.
        assert bound_swaps(node, search.info, linear4) == 2

    def test_weighted_bound(self, example_circuit, linear4):
        config = SolverConfig(w_depth=1, w_swaps=10)
        search = _Search(example_circuit, linear4, config)
        root = search.root()
        h_d = bound_depth(root, search.info, linear4, config.swap_duration)
        h_s = bound_swaps(root, search.info, linear4)
        assert search.bound(root) == h_d + 10 * h_s

    def test_admissibility_at_root(self, linear4, y4):
        for graph in (linear4, y4):
            for spec, circuit in tiny_instances(8, seed_base=100):
                for config, objective in ((depth_config(), "depth"),
                                          (swaps_config(), "swaps")):
                    search = _Search(circuit, graph, config)
                    root_h = search.bound(search.root())
                    r = solve(circuit, graph, config)
                    assert r.proven_optimal
                    assert root_h <= r.objective_value


class TestModesAndProperties:
    def test_layered_not_better(self, linear4):
        for spec, circuit in tiny_instances(6, seed_base=200):
            plain = solve(circuit, linear4, depth_config())
            layered = solve(circuit, linear4, depth_config(layered=True))
            assert plain.objective_value <= layered.objective_value

    def test_pruning_soundness(self, linear4):
        for spec, circuit in tiny_instances(4, seed_base=300, depth_params=(3, 4)):
            for layered in (False, True):
                a = solve(circuit, linear4, depth_config(layered=layered))
                b = solve(circuit, linear4, depth_config(layered=layered,
                                                         use_pareto=False))
                assert a.objective_value == b.objective_value

    def test_beam_returns_valid_upper_bound(self, linear4):
        for spec, circuit in tiny_instances(4, seed_base=400):
            exact = solve(circuit, linear4, depth_config())
            for width in (1, 8):
                r = solve(circuit, linear4, depth_config(beam_width=width))
                assert not r.proven_optimal
                assert validate(r.schedule, circuit, linear4).ok
                assert r.objective_value >= exact.objective_value

    def test_beam_unbounded_matches_exact(self, example_circuit, linear4):
        exact = solve(example_circuit, linear4, depth_config())
        wide = solve(example_circuit, linear4, depth_config(beam_width=10000))
        assert wide.objective_value == exact.objective_value

    def test_determinism(self, linear4):
        for spec, circuit in tiny_instances(3, seed_base=500):
            a = solve(circuit, linear4, depth_config())
            b = solve(circuit, linear4, depth_config())
            assert a.schedule == b.schedule
            assert a.stats.nodes_expanded == b.stats.nodes_expanded
            assert a.stats.nodes_inserted == b.stats.nodes_inserted

    def test_solver_times_are_greedy(self, linear4):
        # Re-deriving start times as-early-as-possible from the op order
        # must reproduce the solver's recorded times exactly.
        for spec, circuit in tiny_instances(5, seed_base=700):
            r = solve(circuit, linear4, depth_config())
            free = {}
            for op in r.schedule.ops:
                v, w = op.edge
                assert op.start == max(free.get(v, 0), free.get(w, 0))
                free[v] = free[w] = op.start + op.duration

    def test_oracle_equivalence_spotcheck(self, linear4, y4):
        for graph in (linear4, y4):
            for spec, circuit in tiny_instances(3, seed_base=600,
                                                depth_params=(3, 4)):
                for config, objective in ((depth_config(), "depth"),
                                          (swaps_config(), "swaps")):
                    r = solve(circuit, graph, config)
                    o = oracle_fixpoint(circuit, graph, objective)
                    assert r.objective_value == o.value
