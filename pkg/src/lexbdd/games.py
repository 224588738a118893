"""Declarative game specs, their compilation, and strong solving.

A game file is line oriented UTF-8 text.  Sections:

    name: <word>                         optional, defaults to the file stem
    vars: v1, v2, ...                    may repeat, order is the variable order
    init: v1, v3                         variables listed start true, others false
    player <p> action <name>: pre = <formula>; eff = <var> := <formula>, ...
    terminal: <formula>
    reward <p> <value>: <formula>        value in 0..100

Formulas range over the declared variables with negation (``!`` or
``¬``), conjunction (``&`` or ``∧``), disjunction (``|`` or ``∨``),
implication (``->`` or ``→``), parentheses and the constants ``0`` and
``1``.  Blank lines and ``#`` comments are ignored.  The ``eff`` list
may be empty or absent; unassigned variables keep their value.

Compilation produces one transition relation per action over an
interleaved current/next variable order; terminal states have no
outgoing transitions.  Solving classifies every forward layer by game
value, walking backward from the last layer and assigning each state
the best reward class, in the moving player's preference order, whose
already-classified successors it can reach.
"""

from __future__ import annotations

import re
import time
from dataclasses import dataclass
from collections.abc import Sequence
from importlib import resources

from .bdd import FALSE, TRUE, BddStore
from .counting import precompute_counts
from .search import (LayerSequence, LayerStat, NO_PARTITION, PartitionStrategy,
                     Relation, SearchLimits, TransitionSystem, _subimages)


class GameSpecError(ValueError):
    """Malformed game description; the message carries the line number."""


class GameSolveError(RuntimeError):
    """The layered solver could not classify every reachable state."""


# ----------------------------------------------------------------------
# formulas

_TOKEN_RE = re.compile(r"\s*(->|→|[()!¬&∧|∨]|[A-Za-z_][A-Za-z0-9_]*|[01])")

_NOT = {"!", "¬"}
_AND = {"&", "∧"}
_OR = {"|", "∨"}
_IMP = {"->", "→"}


def _tokenize(text: str, line_no: int) -> list[str]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            if text[pos:].strip():
                raise GameSpecError(f"line {line_no}: cannot read formula at {text[pos:]!r}")
            break
        tokens.append(m.group(1))
        pos = m.end()
    return tokens


def parse_formula(text: str, variables: Sequence[str], line_no: int = 0):
    """Parse a formula into nested tuples.

    Nodes are ``('const', bool)``, ``('var', name)``, ``('not', f)``,
    ``('and', f, g)``, ``('or', f, g)`` and ``('imp', f, g)``.
    """
    tokens = _tokenize(text, line_no)
    known = set(variables)
    index = 0

    def peek():
        return tokens[index] if index < len(tokens) else None

    def take():
        nonlocal index
        tok = peek()
        if tok is None:
            raise GameSpecError(f"line {line_no}: formula ends unexpectedly")
        index += 1
        return tok

    def atom():
        tok = take()
        if tok == "(":
            f = implication()
            if peek() != ")":
                raise GameSpecError(f"line {line_no}: missing closing parenthesis")
            take()
            return f
        if tok in _NOT:
            return ("not", atom())
        if tok == "0":
            return ("const", False)
        if tok == "1":
            return ("const", True)
        if tok in ("true", "false"):
            return ("const", tok == "true")
        if tok in known:
            return ("var", tok)
        raise GameSpecError(f"line {line_no}: unknown variable {tok!r}")

    def conjunction():
        f = atom()
        while peek() in _AND:
            take()
            f = ("and", f, atom())
        return f

    def disjunction():
        f = conjunction()
        while peek() in _OR:
            take()
            f = ("or", f, conjunction())
        return f

    def implication():
        f = disjunction()
        if peek() in _IMP:
            take()
            return ("imp", f, implication())
        return f

    result = implication()
    if peek() is not None:
        raise GameSpecError(f"line {line_no}: trailing tokens after formula: {tokens[index:]}")
    return result


def eval_formula(formula, state) -> bool:
    """Evaluate a formula on a ``{var: bool}`` mapping."""
    op = formula[0]
    if op == "const":
        return formula[1]
    if op == "var":
        return bool(state[formula[1]])
    if op == "not":
        return not eval_formula(formula[1], state)
    if op == "and":
        return eval_formula(formula[1], state) and eval_formula(formula[2], state)
    if op == "or":
        return eval_formula(formula[1], state) or eval_formula(formula[2], state)
    if op == "imp":
        return (not eval_formula(formula[1], state)) or eval_formula(formula[2], state)
    raise ValueError(f"bad formula node {formula!r}")


# ----------------------------------------------------------------------
# game specs

@dataclass(frozen=True)
class GameAction:
    player: int
    name: str
    precondition: tuple
    effects: tuple  # of (variable name, formula)


@dataclass(frozen=True)
class GameSpec:
    name: str
    variables: tuple[str, ...]
    init_true: frozenset[str]
    actions: tuple[GameAction, ...]
    terminal: tuple
    rewards: dict  # player -> tuple of (value, formula)

    @property
    def players(self) -> int:
        ids = {a.player for a in self.actions} | set(self.rewards)
        return 2 if 2 in ids else 1

    def init_bits(self) -> tuple[int, ...]:
        return tuple(1 if v in self.init_true else 0 for v in self.variables)

    def init_state(self) -> dict:
        return {v: v in self.init_true for v in self.variables}


_ACTION_RE = re.compile(r"player\s+([12])\s+action\s+([A-Za-z_][A-Za-z0-9_]*)\s*:\s*(.*)$")
_REWARD_RE = re.compile(r"reward\s+([12])\s+(\d+)\s*:\s*(.*)$")


def parse_game(text: str, name: str = "game") -> GameSpec:
    """Parse a game description; raises :class:`GameSpecError` with line info."""
    variables: list[str] = []
    init_true: set[str] = set()
    actions: list[GameAction] = []
    terminal = None
    rewards: dict[int, list] = {}
    spec_name = name

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("name:"):
            spec_name = line[len("name:"):].strip()
            if not spec_name:
                raise GameSpecError(f"line {line_no}: empty name")
            continue
        if line.startswith("vars:"):
            for v in line[len("vars:"):].split(","):
                v = v.strip()
                if not v:
                    continue
                if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", v) or v in ("true", "false"):
                    raise GameSpecError(f"line {line_no}: bad variable name {v!r}")
                if v in variables:
                    raise GameSpecError(f"line {line_no}: variable {v!r} declared twice")
                variables.append(v)
            continue
        if line.startswith("init:"):
            for v in line[len("init:"):].split(","):
                v = v.strip()
                if not v:
                    continue
                if v not in variables:
                    raise GameSpecError(f"line {line_no}: unknown init variable {v!r}")
                init_true.add(v)
            continue
        if line.startswith("terminal:"):
            terminal = parse_formula(line[len("terminal:"):], variables, line_no)
            continue
        m = _ACTION_RE.match(line)
        if m:
            player, act_name, body = int(m.group(1)), m.group(2), m.group(3)
            pre_part, _, eff_part = body.partition(";")
            pre_part = pre_part.strip()
            if not pre_part.startswith("pre"):
                raise GameSpecError(f"line {line_no}: action body must start with 'pre ='")
            pre = parse_formula(pre_part.split("=", 1)[1], variables, line_no)
            effects = []
            eff_part = eff_part.strip()
            if eff_part:
                if not eff_part.startswith("eff"):
                    raise GameSpecError(f"line {line_no}: expected 'eff =' after ';'")
                eff_body = eff_part.split("=", 1)[1]
                for item in eff_body.split(","):
                    item = item.strip()
                    if not item:
                        continue
                    var, sep, rhs = item.partition(":=")
                    if not sep:
                        raise GameSpecError(f"line {line_no}: effect {item!r} needs ':='")
                    var = var.strip()
                    if var not in variables:
                        raise GameSpecError(f"line {line_no}: unknown effect variable {var!r}")
                    if any(var == seen for seen, _ in effects):
                        raise GameSpecError(f"line {line_no}: variable {var!r} assigned twice")
                    effects.append((var, parse_formula(rhs, variables, line_no)))
            actions.append(GameAction(player, act_name, pre, tuple(effects)))
            continue
        m = _REWARD_RE.match(line)
        if m:
            player, value = int(m.group(1)), int(m.group(2))
            if not 0 <= value <= 100:
                raise GameSpecError(f"line {line_no}: reward {value} outside 0..100")
            formula = parse_formula(m.group(3), variables, line_no)
            rewards.setdefault(player, []).append((value, formula))
            continue
        raise GameSpecError(f"line {line_no}: cannot parse {line!r}")

    if not variables:
        raise GameSpecError("no variables declared")
    if terminal is None:
        raise GameSpecError("no terminal condition declared")
    if not actions:
        raise GameSpecError("no actions declared")
    players = {a.player for a in actions} | set(rewards)
    for p in sorted(players):
        if p not in rewards:
            raise GameSpecError(f"player {p} has no reward declarations")
    if players == {2}:
        raise GameSpecError("player 2 declared without player 1")
    return GameSpec(name=spec_name, variables=tuple(variables),
                    init_true=frozenset(init_true), actions=tuple(actions),
                    terminal=terminal,
                    rewards={p: tuple(v) for p, v in rewards.items()})


def load_game(path) -> GameSpec:
    with open(path, "r", encoding="utf-8") as handle:
        text = handle.read()
    stem = re.sub(r"\.[^.]*$", "", str(path).rsplit("/", 1)[-1])
    return parse_game(text, name=stem)


def bundled_game_path(name: str):
    """Filesystem path of a game shipped with the package."""
    return resources.files("lexbdd") / "data" / "games" / f"{name}.game"


def bundled_game_names() -> tuple[str, ...]:
    base = resources.files("lexbdd") / "data" / "games"
    return tuple(sorted(p.name[:-len(".game")] for p in base.iterdir()
                        if p.name.endswith(".game")))


# ----------------------------------------------------------------------
# compilation to a transition system

def compile_game(spec: GameSpec, store: BddStore | None = None) -> TransitionSystem:
    """Build one transition relation per action.

    Current and next copies of each variable are interleaved in the
    order, which keeps the per-action relations small.  Each relation is
    precondition and effect biconditionals and frame axioms for the
    untouched variables, conjoined with non-termination of the source
    state so that terminal states are sinks.
    """
    names = []
    for v in spec.variables:
        names.append(v)
        names.append(v + "'")
    if store is None:
        store = BddStore(names)
    elif store.var_names != tuple(names):
        raise ValueError("store variable order does not match the game spec")
    cur = {v: 2 * i for i, v in enumerate(spec.variables)}
    nxt = {v: 2 * i + 1 for i, v in enumerate(spec.variables)}

    def to_edge(formula) -> int:
        op = formula[0]
        if op == "const":
            return TRUE if formula[1] else FALSE
        if op == "var":
            return store.var(cur[formula[1]])
        if op == "not":
            return -to_edge(formula[1])
        a = to_edge(formula[1])
        b = to_edge(formula[2])
        if op == "and":
            return store.apply("and", a, b)
        if op == "or":
            return store.apply("or", a, b)
        if op == "imp":
            return store.apply("or", -a, b)
        raise ValueError(f"bad formula node {formula!r}")

    not_terminal = -to_edge(spec.terminal)
    relations = []
    for action in spec.actions:
        effect_map = dict(action.effects)
        trans = store.apply("and", to_edge(action.precondition), not_terminal)
        # conjoin bottom-up: deeper biconditionals first keeps intermediates small
        for v in reversed(spec.variables):
            rhs = to_edge(effect_map[v]) if v in effect_map else store.var(cur[v])
            bicond = store.ite(store.var(nxt[v]), rhs, -rhs)
            trans = store.apply("and", trans, bicond)
        relations.append(Relation(name=action.name, edge=trans, player=action.player))
    return TransitionSystem(store=store,
                            current=tuple(cur[v] for v in spec.variables),
                            nxt=tuple(nxt[v] for v in spec.variables),
                            relations=tuple(relations))


def formula_edge(ts: TransitionSystem, spec: GameSpec, formula) -> int:
    """Compile a formula over the game's variables to a current-state BDD."""
    store = ts.store
    cur = dict(zip(spec.variables, ts.current))

    def rec(f) -> int:
        op = f[0]
        if op == "const":
            return TRUE if f[1] else FALSE
        if op == "var":
            return store.var(cur[f[1]])
        if op == "not":
            return -rec(f[1])
        a, b = rec(f[1]), rec(f[2])
        if op == "and":
            return store.apply("and", a, b)
        if op == "or":
            return store.apply("or", a, b)
        return store.apply("or", -a, b)

    return rec(formula)


def state_edge(ts: TransitionSystem, bits: Sequence) -> int:
    """Characteristic function of a single state given by its bits."""
    return ts.store.cube({lvl: bool(b) for lvl, b in zip(ts.current, bits)})


def initial_edge(ts: TransitionSystem, spec: GameSpec) -> int:
    return state_edge(ts, spec.init_bits())


# ----------------------------------------------------------------------
# strong solving

@dataclass
class SolutionTable:
    """Game value classes per layer; a strong solution when complete."""
    ts: TransitionSystem
    spec: GameSpec
    class_keys: tuple[tuple[int, ...], ...]
    layer_classes: list[dict]
    stats: list[LayerStat]
    complete: bool

    def initial_value(self) -> tuple[int, ...]:
        return self.value_of(self.spec.init_bits())

    def value_of(self, bits: Sequence) -> tuple[int, ...]:
        """Reward vector of a reachable state; raises ``LookupError`` otherwise."""
        full = [0] * self.ts.store.n
        for lvl, b in zip(self.ts.current, bits):
            full[lvl] = 1 if b else 0
        for classes in self.layer_classes:
            for key, edge in classes.items():
                if edge != FALSE and self.ts.store.evaluate(edge, full):
                    return key
        raise LookupError(f"state {tuple(bits)} is not classified (unreachable?)")


def _reward_classes(ts: TransitionSystem, spec: GameSpec):
    """Cross product of the per-player reward formulas as BDD classes."""
    per_player = []
    for p in range(1, spec.players + 1):
        per_player.append([(value, formula_edge(ts, spec, formula))
                           for value, formula in spec.rewards[p]])
    keys: list[tuple[int, ...]] = []
    edges: dict[tuple[int, ...], int] = {}
    if spec.players == 1:
        for value, edge in per_player[0]:
            keys.append((value,))
            edges[(value,)] = edge
    else:
        for v1, e1 in per_player[0]:
            for v2, e2 in per_player[1]:
                key = (v1, v2)
                keys.append(key)
                edges[key] = ts.store.apply("and", e1, e2)
    return tuple(keys), edges


def _preference_order(keys, player: int):
    """Best class first: own reward descending, then the opponent's."""
    own = player - 1
    if len(keys[0]) == 1:
        return sorted(keys, key=lambda k: -k[0])
    other = 1 - own
    return sorted(keys, key=lambda k: (-k[own], -k[other]))


def solve(ts: TransitionSystem, spec: GameSpec, layers: LayerSequence,
          strategy: PartitionStrategy = NO_PARTITION,
          limits: SearchLimits | None = None) -> SolutionTable:
    """Classify every reachable state by its game value.

    Walks the forward layers backward.  Terminal states take the value
    of their reward class directly.  The remaining states of a layer
    belong to the player who can move in them and are classified in that
    player's preference order: each class receives the still-unassigned
    states that can reach an already-classified successor of that class.
    A state left over after all classes is a spec defect and raises
    :class:`GameSolveError` naming the layer.
    """
    if not layers.complete:
        raise ValueError("cannot solve from an incomplete layer sequence")
    store = ts.store
    limits = limits or SearchLimits()
    deadline = limits.deadline()
    class_keys, class_edges = _reward_classes(ts, spec)
    terminal_edge = formula_edge(ts, spec, spec.terminal)
    can_move = {}
    by_player: dict[int, tuple[Relation, ...]] = {}
    for p in range(1, spec.players + 1):
        rels = tuple(r for r in ts.relations if r.player == p)
        by_player[p] = rels
        pres = FALSE
        for action in spec.actions:
            if action.player == p:
                pres = store.apply("or", pres, formula_edge(ts, spec, action.precondition))
        can_move[p] = pres
    prefs = {p: _preference_order(class_keys, p) for p in by_player}

    last = len(layers.layers) - 1
    layer_classes: list[dict] = [dict() for _ in layers.layers]
    stats: list[LayerStat] = []
    complete = True

    for d in range(last, -1, -1):
        if (deadline is not None and time.perf_counter() > deadline) \
                or limits.nodes_exceeded(store):
            complete = False
            break
        t0 = time.perf_counter()
        peak = 0
        layer = layers.layers[d]
        terminal_here = store.apply("and", layer, terminal_edge)
        classes = {key: store.apply("and", terminal_here, class_edges[key])
                   for key in class_keys}
        covered = FALSE
        for key in class_keys:
            covered = store.apply("or", covered, classes[key])
        if covered != terminal_here:
            raise GameSolveError(
                f"layer {d}: terminal states not covered by the reward classes")
        rest = store.apply("and", layer, -terminal_edge)
        if rest != FALSE:
            if d == last:
                raise GameSolveError(
                    f"layer {d}: non-terminal states in the final layer "
                    "(state space is not layer-acyclic)")
            movers = FALSE
            for p, rels in by_player.items():
                mine = store.apply("and", rest, can_move[p])
                if mine == FALSE:
                    continue
                overlap = store.apply("and", mine, movers)
                if overlap != FALSE:
                    raise GameSolveError(
                        f"layer {d}: both players can move in the same state")
                movers = store.apply("or", movers, mine)
                for key in prefs[p]:
                    succ = layer_classes[d + 1].get(key, FALSE)
                    if succ == FALSE or mine == FALSE:
                        continue
                    parts = strategy.parts_of(store, succ, ts.current)
                    pred, sub_peak = _subimages(ts, parts, forward=False, relations=rels)
                    peak = max(peak, sub_peak)
                    newly = store.apply("and", mine, pred)
                    if newly != FALSE:
                        classes[key] = store.apply("or", classes[key], newly)
                        mine = store.apply("and", mine, -pred)
                if mine != FALSE:
                    raise GameSolveError(
                        f"layer {d}: states of player {p} have no classified successor")
            if movers != rest:
                raise GameSolveError(
                    f"layer {d}: non-terminal states where nobody can move")
        layer_classes[d] = classes
        elapsed_ms = (time.perf_counter() - t0) * 1000.0
        layer_states = precompute_counts(store, layer, ts.current).root_count
        stats.append(LayerStat("backward", d, elapsed_ms,
                               store.node_count(), peak, layer_states))

    stats.sort(key=lambda row: row.index)
    return SolutionTable(ts=ts, spec=spec, class_keys=class_keys,
                         layer_classes=layer_classes, stats=stats,
                         complete=complete)
