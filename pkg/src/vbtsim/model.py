"""Domain types, field geometry, seeded deployment and unit-disk reachability."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field as dc_field
from enum import Enum
from typing import Iterable, Optional

import numpy as np

from .energy import DEFAULT_E_FAIL

E_INIT = 2.0               # default initial battery per node, joules
DEFAULT_TH = 0.1 * E_INIT  # relay-eligibility threshold, joules

# Distinguished vertex id for the sink.  The sink is not a Node: it has
# unlimited power, never drains, and may be moved.
SINK = -1


class ConstructionFailed(RuntimeError):
    """A backbone construction attempt left live nodes without a route."""

    def __init__(self, unreachable: Iterable[int]):
        self.unreachable = sorted(unreachable)
        super().__init__(f"no route to sink for nodes {self.unreachable}")


class NodeStatus(Enum):
    TREE = "tree"
    CANDIDATE_NON_TREE = "candidate_non_tree"
    PERMANENT_NON_TREE = "permanent_non_tree"
    FAILED = "failed"


def classify_status(energy: float, children: int, th: float,
                    e_fail: float = DEFAULT_E_FAIL) -> NodeStatus:
    """Four-way node status from residual energy and current child count."""
    if energy >= th:
        return NodeStatus.TREE if children > 0 else NodeStatus.CANDIDATE_NON_TREE
    if energy >= e_fail:
        return NodeStatus.PERMANENT_NON_TREE
    return NodeStatus.FAILED


@dataclass
class Node:
    id: int
    x: float
    y: float
    energy: float
    status: NodeStatus = NodeStatus.CANDIDATE_NON_TREE

    @property
    def pos(self) -> tuple[float, float]:
        return (self.x, self.y)

    def is_alive(self) -> bool:
        return self.status is not NodeStatus.FAILED


@dataclass
class Field:
    width: float = 200.0
    height: float = 200.0
    sink_x: float = 100.0
    sink_y: float = 100.0

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError("field dimensions must be positive")
        if not self.contains(self.sink_x, self.sink_y):
            raise ValueError("sink position outside the field")

    def contains(self, x: float, y: float) -> bool:
        return 0.0 <= x <= self.width and 0.0 <= y <= self.height

    @property
    def sink_pos(self) -> tuple[float, float]:
        return (self.sink_x, self.sink_y)


@dataclass
class Scenario:
    field: Field
    nodes: list[Node]
    sensing_range: float
    rng_seed: int = 0

    def __post_init__(self):
        if self.sensing_range <= 0:
            raise ValueError("sensing range must be positive")
        ids = [n.id for n in self.nodes]
        if ids != list(range(len(ids))):
            raise ValueError("node ids must be dense from 0 in order")
        for n in self.nodes:
            if not self.field.contains(n.x, n.y):
                raise ValueError(f"node {n.id} outside the field")

    def node(self, node_id: int) -> Node:
        return self.nodes[node_id]

    def positions(self) -> dict[int, tuple[float, float]]:
        """Positions of every vertex, the sink included under id SINK."""
        pos = {n.id: (n.x, n.y) for n in self.nodes}
        pos[SINK] = self.field.sink_pos
        return pos

    def live_ids(self) -> list[int]:
        return [n.id for n in self.nodes if n.status is not NodeStatus.FAILED]


@dataclass
class ReachabilityGraph:
    """Unit-disk adjacency: edge iff euclidean distance <= range (inclusive)."""

    adjacency: dict[int, list[int]] = dc_field(default_factory=dict)
    range: float = 0.0

    def neighbors(self, vertex: int) -> list[int]:
        return self.adjacency[vertex]


def distance(a: tuple[float, float], b: tuple[float, float]) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def deploy_uniform(field: Field, n: int, seed: int, e_init: float = E_INIT,
                   th: float = DEFAULT_TH,
                   e_fail: float = DEFAULT_E_FAIL) -> list[Node]:
    """Drop n nodes i.i.d. uniform over the field; same seed, same layout."""
    if n < 1:
        raise ValueError("need at least one node")
    rng = np.random.default_rng(seed)
    xs = rng.uniform(0.0, field.width, n)
    ys = rng.uniform(0.0, field.height, n)
    status = classify_status(e_init, 0, th, e_fail)
    return [Node(i, float(xs[i]), float(ys[i]), e_init, status) for i in range(n)]


def build_reachability(scenario: Scenario) -> ReachabilityGraph:
    """All-pairs unit-disk adjacency over the nodes plus the sink vertex."""
    n = len(scenario.nodes)
    pts = np.empty((n + 1, 2))
    for i, nd in enumerate(scenario.nodes):
        pts[i] = (nd.x, nd.y)
    pts[n] = scenario.field.sink_pos
    d2 = ((pts[:, None, :] - pts[None, :, :]) ** 2).sum(axis=2)
    within = d2 <= scenario.sensing_range**2
    np.fill_diagonal(within, False)

    def vid(row: int) -> int:
        return SINK if row == n else row

    adjacency = {}
    for row in range(n + 1):
        adjacency[vid(row)] = sorted(vid(int(c))
                                     for c in np.nonzero(within[row])[0])
    return ReachabilityGraph(adjacency, scenario.sensing_range)


def is_connected_to_sink(graph: ReachabilityGraph,
                         alive: Optional[Iterable[int]] = None) -> bool:
    """True iff every (alive) node sits in the sink's connected component.

    Only alive nodes may be traversed; by default all nodes count as alive.
    """
    node_ids = [v for v in graph.adjacency if v != SINK]
    live = set(node_ids) if alive is None else set(alive)
    seen = {SINK}
    queue = deque([SINK])
    while queue:
        v = queue.popleft()
        for u in graph.adjacency[v]:
            if u in live and u not in seen:
                seen.add(u)
                queue.append(u)
    return live <= seen
