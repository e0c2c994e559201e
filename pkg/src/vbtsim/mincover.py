"""Greedy backbone with as few tree nodes as possible.

Classic degree-greedy cover over the sensor-only reachability graph:
seed with the best-connected node, then repeatedly promote the covered
node that reaches the most still-uncovered nodes. covered values:
0 uncovered, 1 covered by a tree node, 2 tree node.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Optional

from .model import (
    SINK,
    ConstructionFailed,
    NodeStatus,
    ReachabilityGraph,
    Scenario,
    build_reachability,
)


@dataclass
class CoverState:
    covered: dict[int, int] = dc_field(default_factory=dict)
    wd: dict[int, int] = dc_field(default_factory=dict)
    flag: bool = True


def build_min_cover(scenario: Scenario, th: float,
                    graph: Optional[ReachabilityGraph] = None
                    ) -> tuple[set[int], CoverState]:
    """Pick tree nodes greedily until every live node is covered.

    The sink plays no part here; only sensor-to-sensor adjacency counts
    and only live nodes need covering. The seed is the node with the most
    live neighbors regardless of its energy; every later pick must hold
    at least th joules. Score ties go to the smaller id. Raises
    ConstructionFailed with the still-uncovered ids when no eligible
    pick makes progress (disconnected layout).
    """
    if graph is None:
        graph = build_reachability(scenario)
    live = [n.id for n in scenario.nodes if n.status is not NodeStatus.FAILED]
    live_set = set(live)
    adj = {i: [v for v in graph.neighbors(i) if v != SINK and v in live_set]
           for i in live}

    state = CoverState(covered={i: 0 for i in live})
    tree_nodes: set[int] = set()
    if not live:
        state.flag = False
        return tree_nodes, state

    seed = max(live, key=lambda i: (len(adj[i]), -i))
    _promote(seed, adj, state, tree_nodes)

    while any(v == 0 for v in state.covered.values()):
        state.wd = {}
        for i in live:
            if state.covered[i] == 1 and scenario.node(i).energy >= th:
                state.wd[i] = sum(1 for v in adj[i] if state.covered[v] == 0)
        best = -1
        best_wd = 0
        for i in sorted(state.wd):
            if state.wd[i] > best_wd:  # strict: first max wins, smallest id
                best_wd = state.wd[i]
                best = i
        if best < 0:
            state.flag = False
            raise ConstructionFailed(
                i for i, v in state.covered.items() if v == 0)
        _promote(best, adj, state, tree_nodes)

    state.flag = False
    return tree_nodes, state


def _promote(node_id: int, adj: dict[int, list[int]], state: CoverState,
             tree_nodes: set[int]) -> None:
    state.covered[node_id] = 2
    tree_nodes.add(node_id)
    for v in adj[node_id]:
        if state.covered[v] == 0:
            state.covered[v] = 1
