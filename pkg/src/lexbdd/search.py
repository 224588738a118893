"""Image computation over disjunctive transition relations and layered BFS.

The transition relation is kept as one BDD per action and never built
monolithically unless asked for.  An image distributes over both the
action relations and an optional partition of the source set, computes
one relational product per (action, part) pair and merges the subimages
as a size-balanced binary disjunction tree.  The breadth-first search
stores each depth layer as its own BDD and subtracts everything seen
before, so layers are disjoint and layer index equals BFS depth.
"""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass

from .bdd import FALSE, BddStore
from .counting import precompute_counts
from .partition import LexPartition, SplitPair, disj_var, fold_states_lex, states_lex_bounded

STRATEGY_KINDS = ("none", "fold-states-lex", "states-lex", "disj-var")


@dataclass(frozen=True)
class Relation:
    """One action's transition relation over current and next variables."""
    name: str
    edge: int
    player: int | None = None


@dataclass(frozen=True)
class TransitionSystem:
    store: BddStore
    current: tuple[int, ...]
    nxt: tuple[int, ...]
    relations: tuple[Relation, ...]

    def __post_init__(self):
        if len(self.current) != len(self.nxt):
            raise ValueError("current and next variable lists differ in length")
        allowed = set(self.current) | set(self.nxt)
        for rel in self.relations:
            support = self.store.support_levels(rel.edge)
            if not support <= allowed:
                raise ValueError(
                    f"relation {rel.name} mentions non-state levels "
                    f"{sorted(support - allowed)}")

    @property
    def to_next(self) -> dict[int, int]:
        return dict(zip(self.current, self.nxt))

    @property
    def to_current(self) -> dict[int, int]:
        return dict(zip(self.nxt, self.current))

    def monolithic_relation(self) -> int:
        """The disjunction of all action relations, built on demand."""
        edges = [rel.edge for rel in self.relations]
        result, _ = _balanced_or(self.store, edges)
        return result


@dataclass(frozen=True)
class PartitionStrategy:
    """How to partition a state set before computing its image."""
    kind: str = "none"
    param: int | None = None

    def __post_init__(self):
        if self.kind not in STRATEGY_KINDS:
            raise ValueError(f"unknown strategy {self.kind!r}, expected {STRATEGY_KINDS}")
        if self.kind in ("fold-states-lex", "states-lex"):
            if self.param is None or self.param < 1:
                raise ValueError(f"strategy {self.kind} needs a parameter >= 1")
        elif self.param is not None:
            raise ValueError(f"strategy {self.kind} takes no parameter")

    @classmethod
    def parse(cls, text: str) -> "PartitionStrategy":
        kind, sep, param = text.partition(":")
        if not sep:
            return cls(kind)
        return cls(kind, int(param))

    def __str__(self) -> str:
        if self.param is None:
            return self.kind
        return f"{self.kind}:{self.param}"

    def parts_of(self, store: BddStore, f: int,
                 levels: tuple[int, ...]) -> list[int]:
        """Partition ``f`` (a state set over ``levels``) into disjoint parts."""
        if self.kind == "none" or f == FALSE:
            return [f]
        if self.kind == "disj-var":
            pair = disj_var(store, f, levels)
            return [pair.left, pair.right]
        table = precompute_counts(store, f, levels)
        if self.kind == "fold-states-lex":
            return list(fold_states_lex(table, self.param).parts)
        return list(states_lex_bounded(table, self.param).parts)


NO_PARTITION = PartitionStrategy("none")


@dataclass(frozen=True)
class SearchLimits:
    """Wall-clock and store-size budget for one exploration."""
    time_s: float | None = None
    max_nodes: int | None = None

    def deadline(self) -> float | None:
        if self.time_s is None:
            return None
        return time.perf_counter() + self.time_s

    def nodes_exceeded(self, store: BddStore) -> bool:
        return self.max_nodes is not None and store.node_count() > self.max_nodes


@dataclass
class LayerStat:
    """Per-layer measurements of one search direction."""
    direction: str
    index: int
    time_ms: float
    total_nodes: int
    max_image_nodes: int
    states: int


@dataclass
class LayerSequence:
    """Breadth-first layers plus their metrics; ``reached`` is the union."""
    layers: list[int]
    stats: list[LayerStat]
    reached: int
    complete: bool


def _normalize_parts(parts) -> list[int] | None:
    if parts is None:
        return None
    if isinstance(parts, LexPartition):
        return list(parts.parts)
    if isinstance(parts, SplitPair):
        return [parts.left, parts.right]
    return list(parts)


def _balanced_or(store: BddStore, edges: list[int]) -> tuple[int, int]:
    """Disjoin edges pairwise, always merging the two smallest diagrams.

    Returns the result and the largest intermediate size seen.
    """
    edges = [e for e in edges if e != FALSE]
    if not edges:
        return FALSE, 0
    heap = [(store.size(e), i, e) for i, e in enumerate(edges)]
    heapq.heapify(heap)
    tiebreak = len(edges)
    peak = max(size for size, _, _ in heap)
    while len(heap) > 1:
        size_a, _, a = heapq.heappop(heap)
        size_b, _, b = heapq.heappop(heap)
        merged = store.apply("or", a, b)
        size = store.size(merged)
        peak = max(peak, size)
        heapq.heappush(heap, (size, tiebreak, merged))
        tiebreak += 1
    return heap[0][2], peak


def _subimages(ts: TransitionSystem, parts: list[int], forward: bool,
               relations: tuple[Relation, ...] | None = None) -> tuple[int, int]:
    """Per-action, per-part relational products merged into one set.

    Forward quantifies the current variables and renames the result back
    from next to current; backward renames the sources first and
    quantifies the next variables.  Returns the image and the largest
    intermediate diagram.
    """
    store = ts.store
    if relations is None:
        relations = ts.relations
    quantified = set(ts.current) if forward else set(ts.nxt)
    rename_map = ts.to_current if forward else ts.to_next
    peak = 0
    pieces = []
    for part in parts:
        if part == FALSE:
            continue
        source = part if forward else store.rename(part, rename_map)
        for rel in relations:
            sub = store.and_exists(quantified, rel.edge, source)
            if forward:
                sub = store.rename(sub, rename_map)
            peak = max(peak, store.size(sub))
            if sub != FALSE:
                pieces.append(sub)
    result, merge_peak = _balanced_or(store, pieces)
    return result, max(peak, merge_peak)


def image(ts: TransitionSystem, s: int, parts=None) -> int:
    """One-step successors of the state set ``s`` (over current variables)."""
    part_list = _normalize_parts(parts)
    result, _ = _subimages(ts, part_list if part_list is not None else [s], forward=True)
    return result


def preimage(ts: TransitionSystem, s: int, parts=None) -> int:
    """One-step predecessors of the state set ``s`` (over current variables)."""
    part_list = _normalize_parts(parts)
    result, _ = _subimages(ts, part_list if part_list is not None else [s], forward=False)
    return result


def layered_bfs(ts: TransitionSystem, init: int,
                strategy: PartitionStrategy = NO_PARTITION,
                limits: SearchLimits | None = None) -> LayerSequence:
    """Explore forward from ``init``, one disjoint BDD per depth layer.

    Each new layer is the image of the previous one minus every state
    seen so far; the search stops at the fix point or when a budget runs
    out, in which case the sequence is flagged incomplete.
    """
    if init == FALSE:
        raise ValueError("initial state set is empty")
    store = ts.store
    limits = limits or SearchLimits()
    deadline = limits.deadline()

    def states_of(e: int) -> int:
        return precompute_counts(store, e, ts.current).root_count

    layers = [init]
    stats = [LayerStat("forward", 0, 0.0, store.node_count(), 0, states_of(init))]
    reached = init
    while True:
        if deadline is not None and time.perf_counter() > deadline:
            return LayerSequence(layers, stats, reached, complete=False)
        if limits.nodes_exceeded(store):
            return LayerSequence(layers, stats, reached, complete=False)
        t0 = time.perf_counter()
        parts = strategy.parts_of(store, layers[-1], ts.current)
        successors, peak = _subimages(ts, parts, forward=True)
        frontier = store.apply("and", successors, -reached)
        elapsed_ms = (time.perf_counter() - t0) * 1000.0
        if frontier == FALSE:
            return LayerSequence(layers, stats, reached, complete=True)
        layers.append(frontier)
        reached = store.apply("or", reached, frontier)
        stats.append(LayerStat("forward", len(layers) - 1, elapsed_ms,
                               store.node_count(), peak, states_of(frontier)))
