"""Lexicographic splitting of a BDD and the partitioning schemes on top.

``split`` cuts a satisfying set at an arbitrary assignment ``s`` into
the part at or below ``s`` (lexicographically) and the part above it,
in one pass along the path of ``s``.  Combined with ``unrank`` this
gives cuts at exact satisfying-set counts, and by repeating them a
partition of a BDD into lexicographically contiguous parts of equal
state counts.  A variable-balanced two-way decomposition is included as
the baseline scheme.
"""

from __future__ import annotations

from dataclasses import dataclass
from collections.abc import Sequence

from .bdd import FALSE, TRUE, BddStore
from .counting import CountTable
from .ranking import unrank


@dataclass(frozen=True)
class SplitPair:
    """Left gets the assignments at or below the cut, right all others."""
    left: int
    right: int


@dataclass(frozen=True)
class LexPartition:
    """Disjoint lexicographically contiguous cover of one function.

    ``parts[i]`` holds exactly the satisfying assignments in the window
    ``(cuts[i-1], cuts[i]]``; the last cut is the all-ones assignment so
    the windows cover the whole cube.
    """
    cuts: tuple[tuple[int, ...], ...]
    parts: tuple[int, ...]

    def __post_init__(self):
        if len(self.cuts) != len(self.parts):
            raise ValueError("cuts and parts must pair up")

    def __len__(self) -> int:
        return len(self.parts)


def split(store: BddStore, f: int, bits: Sequence,
          levels: Sequence[int] | None = None) -> SplitPair:
    """Split ``f`` at the cut assignment ``bits``.

    Descends the path of ``bits`` once.  At a node on the path the
    off-path child moves wholly to one side (a 0-cofactor is entirely
    below a cut with a 1 there, and vice versa) and the on-path child is
    split recursively.  A position skipped by reduction behaves like a
    node whose both children are the current function.  Every created
    node goes through the unique table, so both results are reduced and
    at most two nodes per position are added to the shared store.

    The cut may be any assignment; membership in the satisfying set is
    not required.
    """
    pair, _ = _split_with_depth(store, f, bits, levels)
    return pair


def _split_with_depth(store: BddStore, f: int, bits: Sequence,
                      levels: Sequence[int] | None) -> tuple[SplitPair, int]:
    if levels is None:
        levels = range(store.n)
    levels = tuple(sorted(set(levels)))
    m = len(levels)
    if len(bits) != m:
        raise ValueError(f"cut has {len(bits)} bits, universe has {m}")
    support = store.support_levels(f)
    if not support <= set(levels):
        raise ValueError(
            f"support {sorted(support)} not within split universe {list(levels)}")
    pos_by_level = {lvl: i for i, lvl in enumerate(levels)}

    def pos_of(e: int) -> int:
        return m if e == 1 or e == -1 else pos_by_level[store.level_of_edge(e)]

    max_depth = 0

    def aux(e: int, pos: int) -> tuple[int, int]:
        nonlocal max_depth
        if pos > max_depth:
            max_depth = pos
        if pos < pos_of(e):
            # position skipped by reduction: both cofactors equal e
            below_left, below_right = aux(e, pos + 1)
            v = levels[pos]
            if bits[pos]:
                return (store.mk_node(v, below_left, e),
                        store.mk_node(v, below_right, FALSE))
            return (store.mk_node(v, FALSE, below_left),
                    store.mk_node(v, e, below_right))
        if e == 1 or e == -1:
            # the cut's own suffix lands in the left part
            return e, FALSE
        lvl, t, el = store.node(e)
        if e < 0:
            t, el = -t, -el
        if bits[pos]:
            t_left, t_right = aux(t, pos + 1)
            return (store.mk_node(lvl, t_left, el),
                    store.mk_node(lvl, t_right, FALSE))
        e_left, e_right = aux(el, pos + 1)
        return (store.mk_node(lvl, FALSE, e_left),
                store.mk_node(lvl, t, e_right))

    left, right = aux(f, 0)
    return SplitPair(left, right), max_depth + 1


def split_at_count(table: CountTable, m: int) -> SplitPair:
    """Split so that the left part holds exactly the ``m`` smallest members.

    Cutting at the assignment of rank ``m - 1`` puts ranks ``0..m-1``
    (and nothing else) at or below the cut.  ``m`` must lie in
    ``1 .. root_count``.
    """
    if not 1 <= m <= table.root_count:
        raise ValueError(f"count {m} out of range 1..{table.root_count}")
    cut = unrank(table, m - 1)
    return split(table.store, table.root, cut, table.levels)


def _partition_at_positions(table: CountTable, positions: Sequence[int]) -> LexPartition:
    """Cut at the given strictly increasing 1-based member positions.

    The last position must equal the root count; its cut is replaced by
    the all-ones assignment so the final window reaches the top of the
    cube.
    """
    store = table.store
    all_ones = (1,) * table.n
    cuts = [unrank(table, p - 1) for p in positions[:-1]]
    cuts.append(all_ones)
    parts = []
    remainder = table.root
    for cut in cuts:
        pair = split(store, remainder, cut, table.levels)
        parts.append(pair.left)
        remainder = pair.right
    assert remainder == FALSE
    return LexPartition(cuts=tuple(cuts), parts=tuple(parts))


def fold_states_lex(table: CountTable, k: int) -> LexPartition:
    """Partition into ``k`` lex-contiguous folds of near-equal state count.

    Fold ``i`` ends at the member in position ``ceil(i * count / k)``,
    so fold sizes differ by at most one.  When the set has fewer than
    ``k`` members the duplicate cut positions collapse and fewer,
    single-member folds are returned.
    """
    if k < 1:
        raise ValueError(f"fold count must be >= 1, got {k}")
    c = table.root_count
    if c == 0:
        return LexPartition(cuts=((1,) * table.n,), parts=(table.root,))
    positions = []
    for i in range(1, k + 1):
        p = -(-i * c // k)
        if not positions or p > positions[-1]:
            positions.append(p)
    return _partition_at_positions(table, positions)


def states_lex_bounded(table: CountTable, bound: int) -> LexPartition:
    """Partition into as many lex-contiguous parts as needed.

    Every part holds at most ``bound`` members; all but the last hold
    exactly ``bound``.
    """
    if bound < 1:
        raise ValueError(f"state bound must be >= 1, got {bound}")
    c = table.root_count
    if c == 0:
        return LexPartition(cuts=((1,) * table.n,), parts=(table.root,))
    positions = list(range(bound, c, bound))
    positions.append(c)
    return _partition_at_positions(table, positions)


def disj_var(store: BddStore, f: int,
             levels: Sequence[int] | None = None) -> SplitPair:
    """Two-way decomposition on the best single variable.

    Returns ``(f and not x, f and x)`` for the variable ``x`` that
    minimizes the larger of the two diagram sizes; ties go to the
    earliest variable in the order.  A constant ``f`` has nothing to
    decompose on and comes back as ``(f, false)``.
    """
    if f == TRUE or f == FALSE:
        return SplitPair(f, FALSE)
    if levels is None:
        levels = range(store.n)
    best = None
    best_size = None
    for lvl in sorted(set(levels)):
        x = store.var(lvl)
        neg_part = store.apply("and", f, -x)
        pos_part = store.apply("and", f, x)
        worst = max(store.size(neg_part), store.size(pos_part))
        if best_size is None or worst < best_size:
            best = SplitPair(neg_part, pos_part)
            best_size = worst
    return best
