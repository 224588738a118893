"""Shared reduced ordered BDD store with complement edges.

Edges are signed integers: ``abs(e)`` is a node slot and a negative sign
means the pointed-to function is complemented.  Slot 1 is the only
physical sink, so ``+1`` is the constant true function and ``-1`` the
constant false one.  Stored nodes never carry a complemented Then-edge;
together with the two classic reduction rules this keeps the
representation canonical, so two edges denote the same function exactly
when they are the same integer.

All BDDs in one store share a single fixed variable order.  Variables
are identified by their level (position in that order); names are
cosmetic and only used for display and DOT export.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence

TRUE = 1
FALSE = -1

_APPLY_OPS = ("and", "or", "xor")


class BddStore:
    """Append-only shared node store with a unique table.

    The store is single-writer: every operation that may create nodes
    needs exclusive access.  A store that is no longer mutated can be
    read (``evaluate``, ``size``, traversals) from any number of
    threads.  There is no garbage collection; throw the store away and
    build a fresh one between independent workloads.
    """

    def __init__(self, variables: int | Iterable[str]):
        if isinstance(variables, int):
            names = [f"x{i}" for i in range(variables)]
        else:
            names = [str(v) for v in variables]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        self._names = names
        self._level_by_name = {v: i for i, v in enumerate(names)}
        # slot 0 is unused, slot 1 is the sink sentinel
        self._nodes: list[tuple[int, int, int] | None] = [None, None]
        self._unique: dict[tuple[int, int, int], int] = {}
        self._ite_cache: dict[tuple[int, int, int], int] = {}
        self._op_cache: dict[tuple, int] = {}
        self._varset_tokens: dict[frozenset[int], int] = {}

    # ------------------------------------------------------------------
    # introspection

    @property
    def n(self) -> int:
        """Number of variables in the fixed order."""
        return len(self._names)

    @property
    def var_names(self) -> tuple[str, ...]:
        return tuple(self._names)

    def level_of(self, name: str) -> int:
        return self._level_by_name[name]

    def name_of(self, level: int) -> str:
        return self._names[level]

    def node_count(self) -> int:
        """Number of internal nodes ever created (the store never shrinks)."""
        return len(self._nodes) - 2

    def node(self, slot: int) -> tuple[int, int, int]:
        """Return ``(level, then_edge, else_edge)`` for a slot."""
        t = self._nodes[abs(slot)]
        if t is None:
            raise ValueError(f"{slot} is not a node slot")
        return t

    def level_of_edge(self, e: int) -> int:
        """Level of the edge's target node; sinks sit at level ``n``."""
        if e == 1 or e == -1:
            return len(self._names)
        return self._nodes[e if e > 0 else -e][0]

    # ------------------------------------------------------------------
    # construction

    def mk_node(self, level: int, then_edge: int, else_edge: int) -> int:
        """Return the canonical edge for ``(level ? then : else)``.

        Applies both reduction rules and normalizes complement marks so
        that the stored Then-edge is always regular.  Raises
        ``ValueError`` when the children do not lie strictly below
        ``level`` in the variable order.
        """
        n = len(self._names)
        if not 0 <= level < n:
            raise ValueError(f"level {level} out of range 0..{n - 1}")
        if self.level_of_edge(then_edge) <= level or self.level_of_edge(else_edge) <= level:
            raise ValueError(
                f"ordering violation: node at level {level} may not point to "
                f"levels {self.level_of_edge(then_edge)} / {self.level_of_edge(else_edge)}")
        if then_edge == else_edge:
            return then_edge
        if then_edge < 0:
            sign = -1
            then_edge = -then_edge
            else_edge = -else_edge
        else:
            sign = 1
        key = (level, then_edge, else_edge)
        slot = self._unique.get(key)
        if slot is None:
            slot = len(self._nodes)
            self._nodes.append(key)
            self._unique[key] = slot
        return sign * slot

    @staticmethod
    def negate(e: int) -> int:
        """Complement a function; constant time, never allocates."""
        return -e

    def var(self, which: int | str) -> int:
        """Edge for the single-variable function at a level (or by name)."""
        level = self._level_by_name[which] if isinstance(which, str) else which
        return self.mk_node(level, TRUE, FALSE)

    def cube(self, literals: Mapping[int, bool]) -> int:
        """Conjunction of literals given as ``{level: polarity}``."""
        e = TRUE
        for level in sorted(literals, reverse=True):
            if literals[level]:
                e = self.mk_node(level, e, FALSE)
            else:
                e = self.mk_node(level, FALSE, e)
        return e

    def from_truth_table(self, table: Sequence) -> int:
        """Build the canonical BDD of a full truth table.

        ``table[i]`` is the value of the function on the assignment
        whose bits (level 0 first, most significant) encode ``i``.
        """
        n = len(self._names)
        if len(table) != 1 << n:
            raise ValueError(f"need {1 << n} entries, got {len(table)}")

        def build(level: int, lo: int, hi: int) -> int:
            if level == n:
                return TRUE if table[lo] else FALSE
            mid = (lo + hi) // 2
            e0 = build(level + 1, lo, mid)
            e1 = build(level + 1, mid, hi)
            return self.mk_node(level, e1, e0)

        return build(0, 0, 1 << n)

    # ------------------------------------------------------------------
    # boolean operations

    def _top_cofactors(self, e: int, level: int) -> tuple[int, int]:
        """(then, else) cofactors of ``e`` with respect to ``level``."""
        a = -e if e < 0 else e
        if a == 1:
            return e, e
        lvl, t, el = self._nodes[a]
        if lvl != level:
            return e, e
        if e < 0:
            return -t, -el
        return t, el

    def ite(self, f: int, g: int, h: int) -> int:
        """If-then-else: ``(f and g) or (not f and h)``."""
        if f == 1:
            return g
        if f == -1:
            return h
        if g == h:
            return g
        if g == 1 and h == -1:
            return f
        if g == -1 and h == 1:
            return -f
        key = (f, g, h)
        r = self._ite_cache.get(key)
        if r is not None:
            return r
        top = min(self.level_of_edge(f), self.level_of_edge(g), self.level_of_edge(h))
        f1, f0 = self._top_cofactors(f, top)
        g1, g0 = self._top_cofactors(g, top)
        h1, h0 = self._top_cofactors(h, top)
        r = self.mk_node(top, self.ite(f1, g1, h1), self.ite(f0, g0, h0))
        self._ite_cache[key] = r
        return r

    def apply(self, op: str, f: int, g: int) -> int:
        """Binary operation ``op`` in {'and', 'or', 'xor'}."""
        # commutative: sort operands so both argument orders share a cache line
        a, b = (f, g) if f <= g else (g, f)
        if op == "and":
            return self.ite(a, b, FALSE)
        if op == "or":
            return self.ite(a, TRUE, b)
        if op == "xor":
            return self.ite(a, -b, b)
        raise ValueError(f"unknown operation {op!r}, expected one of {_APPLY_OPS}")

    def _varset_token(self, levels: frozenset[int]) -> int:
        tok = self._varset_tokens.get(levels)
        if tok is None:
            tok = len(self._varset_tokens)
            self._varset_tokens[levels] = tok
        return tok

    def validate_levels(self, levels: Iterable[int]) -> frozenset[int]:
        """Check that every level names a store variable; returns them frozen."""
        q = frozenset(levels)
        n = len(self._names)
        bad = [lvl for lvl in q if not 0 <= lvl < n]
        if bad:
            raise ValueError(f"levels {sorted(bad)} are not store variables (n={n})")
        return q

    def exists(self, levels: Iterable[int], f: int) -> int:
        """Existentially quantify the given variable levels out of ``f``."""
        q = self.validate_levels(levels)
        if not q:
            return f
        tok = self._varset_token(q)
        return self._exists_rec(q, max(q), tok, f)

    def _exists_rec(self, q: frozenset[int], maxq: int, tok: int, e: int) -> int:
        if e == 1 or e == -1:
            return e
        a = -e if e < 0 else e
        lvl, t, el = self._nodes[a]
        if lvl > maxq:
            return e
        key = ("ex", tok, e)
        r = self._op_cache.get(key)
        if r is not None:
            return r
        if e < 0:
            t, el = -t, -el
        rt = self._exists_rec(q, maxq, tok, t)
        if lvl in q and rt == TRUE:
            r = TRUE
        else:
            re = self._exists_rec(q, maxq, tok, el)
            if lvl in q:
                r = self.ite(rt, TRUE, re)
            else:
                r = self.mk_node(lvl, rt, re)
        self._op_cache[key] = r
        return r

    def and_exists(self, levels: Iterable[int], f: int, g: int) -> int:
        """Relational product: ``exists(levels, f and g)`` without the full conjunction."""
        q = self.validate_levels(levels)
        if not q:
            return self.apply("and", f, g)
        tok = self._varset_token(q)
        return self._and_exists_rec(q, max(q), tok, f, g)

    def _and_exists_rec(self, q: frozenset[int], maxq: int, tok: int, f: int, g: int) -> int:
        if f == -1 or g == -1:
            return FALSE
        if f == 1:
            return TRUE if g == 1 else self._exists_rec(q, maxq, tok, g)
        if g == 1:
            return self._exists_rec(q, maxq, tok, f)
        if f == g:
            return self._exists_rec(q, maxq, tok, f)
        if f == -g:
            return FALSE
        if g < f:
            f, g = g, f
        lf = self.level_of_edge(f)
        lg = self.level_of_edge(g)
        top = lf if lf < lg else lg
        if top > maxq:
            # no quantified variable can occur below this level
            return self.apply("and", f, g)
        key = ("ae", tok, f, g)
        r = self._op_cache.get(key)
        if r is not None:
            return r
        f1, f0 = self._top_cofactors(f, top)
        g1, g0 = self._top_cofactors(g, top)
        if top in q:
            r0 = self._and_exists_rec(q, maxq, tok, f0, g0)
            if r0 == TRUE:
                r = TRUE
            else:
                r1 = self._and_exists_rec(q, maxq, tok, f1, g1)
                r = self.ite(r1, TRUE, r0)
        else:
            r1 = self._and_exists_rec(q, maxq, tok, f1, g1)
            r0 = self._and_exists_rec(q, maxq, tok, f0, g0)
            r = self.mk_node(top, r1, r0)
        self._op_cache[key] = r
        return r

    def rename(self, f: int, mapping: Mapping[int | str, int | str]) -> int:
        """Substitute variables per ``mapping`` (level or name keys).

        The mapping must respect the variable order on the support of
        ``f``; interleaved current/next state variables satisfy this for
        the usual one-position shifts.
        """
        levels: dict[int, int] = {}
        for k, v in mapping.items():
            kl = self._level_by_name[k] if isinstance(k, str) else k
            vl = self._level_by_name[v] if isinstance(v, str) else v
            self.validate_levels((kl, vl))
            levels[kl] = vl
        levels = {k: v for k, v in levels.items() if k != v}
        if len(set(levels.values())) != len(levels):
            raise ValueError("rename mapping is not injective")
        if not levels:
            return f
        support = sorted(self.support_levels(f))
        image = [levels.get(lvl, lvl) for lvl in support]
        if any(a >= b for a, b in zip(image, image[1:])):
            raise ValueError(
                f"rename mapping breaks the variable order on support {support}")
        tok = self._varset_token(frozenset(levels.items()))
        return self._rename_rec(levels, tok, f)

    def _rename_rec(self, levels: dict[int, int], tok: int, e: int) -> int:
        if e == 1 or e == -1:
            return e
        key = ("rn", tok, e)
        r = self._op_cache.get(key)
        if r is not None:
            return r
        a = -e if e < 0 else e
        lvl, t, el = self._nodes[a]
        if e < 0:
            t, el = -t, -el
        r = self.mk_node(levels.get(lvl, lvl),
                         self._rename_rec(levels, tok, t),
                         self._rename_rec(levels, tok, el))
        self._op_cache[key] = r
        return r

    def clear_caches(self) -> None:
        """Drop all memoization tables (results stay valid)."""
        self._ite_cache.clear()
        self._op_cache.clear()

    # ------------------------------------------------------------------
    # read-only queries

    def evaluate(self, e: int, bits: Sequence) -> bool:
        """Evaluate ``e`` on an assignment indexed by level.

        Walks one root-to-sink path, xor-ing complement marks along the
        way.  ``bits`` must cover every level in the support; extra
        entries are ignored.
        """
        nodes = self._nodes
        neg = False
        while e != 1 and e != -1:
            if e < 0:
                neg = not neg
                e = -e
            lvl, t, el = nodes[e]
            e = t if bits[lvl] else el
        return (e == 1) != neg

    def descendants(self, *roots: int) -> set[int]:
        """Slots of all internal nodes reachable from the given edges."""
        seen: set[int] = set()
        stack = [abs(e) for e in roots if abs(e) != 1]
        nodes = self._nodes
        while stack:
            a = stack.pop()
            if a in seen:
                continue
            seen.add(a)
            _, t, el = nodes[a]
            t = abs(t)
            el = abs(el)
            if t != 1 and t not in seen:
                stack.append(t)
            if el != 1 and el not in seen:
                stack.append(el)
        return seen

    def size(self, e: int) -> int:
        """Number of internal nodes of the function's diagram."""
        return len(self.descendants(e))

    def support_levels(self, e: int) -> frozenset[int]:
        """Levels of the variables the function actually depends on."""
        return frozenset(self._nodes[a][0] for a in self.descendants(e))

    def check(self) -> None:
        """Verify the structural store invariants; raises on corruption."""
        n = len(self._names)
        for slot in range(2, len(self._nodes)):
            lvl, t, el = self._nodes[slot]
            if t < 0:
                raise AssertionError(f"slot {slot}: complemented Then-edge {t}")
            if t == el:
                raise AssertionError(f"slot {slot}: redundant node")
            if not (0 <= lvl < n):
                raise AssertionError(f"slot {slot}: bad level {lvl}")
            for child in (t, el):
                if self.level_of_edge(child) <= lvl:
                    raise AssertionError(f"slot {slot}: order violation to {child}")
                if abs(child) != 1 and abs(child) >= len(self._nodes):
                    raise AssertionError(f"slot {slot}: dangling edge {child}")
            if self._unique.get((lvl, t, el)) != slot:
                raise AssertionError(f"slot {slot}: unique table out of sync")
        if len(self._unique) != len(self._nodes) - 2:
            raise AssertionError("duplicate triples in store")

    # ------------------------------------------------------------------
    # export

    def to_dot(self, roots: Mapping[str, int]) -> str:
        """DOT text for the given root edges.

        Solid arrows are Then-edges, dashed ones Else-edges, and a dot
        arrowtail marks a complemented edge.
        """
        lines = [
            "digraph bdd {",
            '  1 [shape=box, label="1"];',
        ]

        def edge_attr(e: int, style: str) -> str:
            attrs = []
            if style == "else":
                attrs.append("style=dashed")
            if e < 0:
                attrs.append("dir=both")
                attrs.append("arrowtail=dot")
            return f" [{', '.join(attrs)}]" if attrs else ""

        for slot in sorted(self.descendants(*roots.values())):
            lvl, t, el = self._nodes[slot]
            lines.append(f'  {slot} [shape=circle, label="{self._names[lvl]}"];')
            lines.append(f"  {slot} -> {abs(t)}{edge_attr(t, 'then')};")
            lines.append(f"  {slot} -> {abs(el)}{edge_attr(el, 'else')};")
        for label, e in roots.items():
            name = f'root_{label}'
            lines.append(f'  "{name}" [shape=plaintext, label="{label}"];')
            lines.append(f'  "{name}" -> {abs(e)}{edge_attr(e, "then")};')
        lines.append("}")
        return "\n".join(lines) + "\n"
