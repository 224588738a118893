"""Model counts per signed edge, cached for ranking and splitting.

Counts are computed once per root by a depth-first pass and stored per
*signed* edge, so a node reached both regularly and complemented gets
two independent entries.  Keying by the signed edge (instead of storing
one value and complementing on demand) keeps every cached value bounded
by the root's own count, which is what makes the cache safe to reuse as
the weight table of the rank/unrank walks.

A count table can be restricted to a subset of the store's variables
(the ``levels`` argument).  That subset is the assignment universe:
counts, ranks and cut assignments are all taken over those positions
only.  This is how state-set operations ignore the interleaved
next-state variables of a transition-relation store.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from collections.abc import Sequence

from .bdd import FALSE, TRUE, BddStore


@dataclass
class CountTable:
    """Satisfying-assignment counts for one root edge.

    ``counts`` maps signed edges visited by the precompute pass to the
    number of satisfying assignments of the sub-function over the
    variable positions strictly below the edge's own position.
    ``root_count`` is the total over the full universe.  Instances are
    immutable after construction and safe to share across threads.
    """

    store: BddStore
    root: int
    levels: tuple[int, ...]
    counts: dict[int, int]
    root_count: int
    _pos: dict[int, int] = field(repr=False, default_factory=dict)

    def __post_init__(self):
        if not self._pos:
            self._pos = {lvl: i for i, lvl in enumerate(self.levels)}

    @property
    def n(self) -> int:
        """Number of variable positions in the universe."""
        return len(self.levels)

    def position_of_edge(self, e: int) -> int:
        """Universe position of the edge's target; sinks sit at ``n``."""
        if e == 1 or e == -1:
            return len(self.levels)
        return self._pos[self.store.level_of_edge(e)]

    def lookup(self, e: int) -> int:
        """Cached count for a signed edge seen during the precompute.

        Asking for an edge the precompute never visited is a contract
        violation and raises ``KeyError``.
        """
        try:
            return self.counts[e]
        except KeyError:
            raise KeyError(f"edge {e} was not visited when counting root {self.root}") from None


def precompute_counts(store: BddStore, f: int,
                      levels: Sequence[int] | None = None) -> CountTable:
    """Count satisfying assignments of ``f`` and of every sub-function.

    Returns a :class:`CountTable` whose root count is the number of
    satisfying assignments over the (possibly restricted) universe.
    Reduction gaps are paid for here: a child sitting ``g`` positions
    below its parent contributes its count times ``2**(g-1)`` free
    choices for the skipped variables.  Complement marks are pushed into
    the recursion, so they resolve only at the sinks.
    """
    if levels is None:
        levels = range(store.n)
    levels = tuple(sorted(set(levels)))
    store.validate_levels(levels)
    support = store.support_levels(f)
    if not support <= set(levels):
        raise ValueError(
            f"support {sorted(support)} not within counting universe {list(levels)}")

    pos = {lvl: i for i, lvl in enumerate(levels)}
    m = len(levels)
    counts: dict[int, int] = {TRUE: 1, FALSE: 0}

    def pos_of(e: int) -> int:
        return m if e == 1 or e == -1 else pos[store.level_of_edge(e)]

    def aux(e: int) -> int:
        c = counts.get(e)
        if c is not None:
            return c
        lvl, t, el = store.node(e)
        if e < 0:
            t, el = -t, -el
        i = pos[lvl]
        c = (aux(t) << (pos_of(t) - i - 1)) + (aux(el) << (pos_of(el) - i - 1))
        counts[e] = c
        return c

    root_count = aux(f) << pos_of(f)
    # the sink seeds are exempt: for the constant-false root the 1-sink
    # entry (1) legitimately exceeds the root count (0)
    assert all(c <= root_count for e, c in counts.items() if abs(e) != 1), \
        "internal count exceeds root count"
    return CountTable(store=store, root=f, levels=levels,
                      counts=counts, root_count=root_count)
