"""Question-answer search games with a lying answerer, as Kripke models.

One player fixes an element of a finite search space M and may lie up to
n-1 times; the other asks subset questions "is it in Q?".  A state of
knowledge assigns each candidate m the value 1 - r(m)/n, where r(m)
counts the answers refuting m; a candidate at 0 is safely excluded.

A positive answer to Q is the map valued 1 on Q and (n-1)/n off Q; the
negative answer is the positive answer to the complement.  Each answer
updates the state by pointwise strong conjunction, i.e. every refuted
candidate drops by exactly one step, floored at 0.

The induced model has states of knowledge as worlds, one atomic program
per question Q (written Q{...}) whose relation steps to either answer's
update, and one variable p_m per candidate valued f(m) at state f.
Worlds are the states reachable from the initial all-ones state within a
question budget; a flag restores the full (n+1)^|M| space instead.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .kripke import KripkeModel
from .parser import parse_formula
from .syntax import (
    Atomic,
    Box,
    Formula,
    Implies,
    Not,
    Program,
    Seq,
    Star,
    Test,
    Union,
)


class GameError(ValueError):
    pass


@dataclass(frozen=True)
class KnowledgeState:
    """Map from the search space to truth values, kept as numerators."""

    elements: tuple[str, ...]
    values: tuple[int, ...]
    n: int

    def __post_init__(self):
        if len(self.elements) != len(self.values):
            raise GameError("one value per element required")
        if any(not 0 <= v <= self.n for v in self.values):
            raise GameError("state value out of range")

    def value_of(self, element: str) -> int:
        return self.values[self.elements.index(element)]

    def final_candidate(self) -> str | None:
        """The unique element still above 0, if exactly one remains."""
        alive = [m for m, v in zip(self.elements, self.values) if v > 0]
        return alive[0] if len(alive) == 1 else None

    def __str__(self):
        body = ", ".join(f"{m}={v}/{self.n}" for m, v in zip(self.elements, self.values))
        return f"({body})"


@dataclass
class GameConfig:
    elements: tuple[str, ...]
    n: int
    depth: int
    initial: KnowledgeState | None = None
    full_space: bool = False
    state_cap: int = 200_000

    def __post_init__(self):
        self.elements = tuple(self.elements)
        if not self.elements:
            raise GameError("search space must be nonempty")
        if len(set(self.elements)) != len(self.elements):
            raise GameError("duplicate elements in search space")
        if self.n < 1:
            raise GameError("n must be >= 1")
        if self.depth < 0:
            raise GameError("depth must be >= 0")

    def start(self) -> KnowledgeState:
        if self.initial is not None:
            if self.initial.elements != self.elements or self.initial.n != self.n:
                raise GameError("initial state does not match the configuration")
            return self.initial
        return KnowledgeState(self.elements, (self.n,) * len(self.elements), self.n)


def positive_answer(cfg: GameConfig, question: Iterable[str]) -> KnowledgeState:
    """The map valued 1 on the question set and (n-1)/n outside it."""
    q = _as_set(cfg, question)
    vals = tuple(cfg.n if m in q else cfg.n - 1 for m in cfg.elements)
    return KnowledgeState(cfg.elements, vals, cfg.n)


def negative_answer(cfg: GameConfig, question: Iterable[str]) -> KnowledgeState:
    return positive_answer(cfg, set(cfg.elements) - _as_set(cfg, question))


def update_state(
    cfg: GameConfig, state: KnowledgeState, question: Iterable[str], positive: bool
) -> KnowledgeState:
    """Pointwise strong conjunction with the chosen answer map."""
    answer = positive_answer(cfg, question) if positive else negative_answer(cfg, question)
    vals = tuple(
        max(x + y - cfg.n, 0) for x, y in zip(state.values, answer.values)
    )
    return KnowledgeState(cfg.elements, vals, cfg.n)


def _as_set(cfg: GameConfig, question: Iterable[str]) -> frozenset[str]:
    q = frozenset(question)
    unknown = q - set(cfg.elements)
    if unknown:
        raise GameError(f"question names unknown elements: {sorted(unknown)}")
    return q


def question_name(cfg: GameConfig, question: Iterable[str]) -> str:
    """Canonical atomic-program name of a subset question."""
    q = _as_set(cfg, question)
    return "Q{" + ",".join(m for m in cfg.elements if m in q) + "}"


def parse_question(cfg: GameConfig, name: str) -> frozenset[str]:
    """Set named by Q{...} or its complement ~Q{...}."""
    text = name.strip()
    complement = text.startswith("~")
    if complement:
        text = text[1:]
    if not (text.startswith("Q{") and text.endswith("}")):
        raise GameError(f"not a question name: {name!r}")
    body = text[2 : -1].strip()
    members = frozenset(x.strip() for x in body.split(",") if x.strip()) if body else frozenset()
    members = _as_set(cfg, members)
    return frozenset(cfg.elements) - members if complement else members


def all_questions(cfg: GameConfig) -> list[frozenset[str]]:
    """Every subset of the search space, in bitmask order."""
    ms = cfg.elements
    return [
        frozenset(m for i, m in enumerate(ms) if mask >> i & 1)
        for mask in range(1 << len(ms))
    ]


def state_world_name(state: KnowledgeState) -> str:
    return "s" + "_".join(str(v) for v in state.values)


def world_name_state(cfg: GameConfig, name: str) -> KnowledgeState:
    if not name.startswith("s"):
        raise GameError(f"not a state world: {name!r}")
    vals = tuple(int(x) for x in name[1:].split("_"))
    return KnowledgeState(cfg.elements, vals, cfg.n)


def reachable_states(cfg: GameConfig) -> list[KnowledgeState]:
    """States reachable from the initial one within the question budget."""
    start = cfg.start()
    seen = {start}
    order = [start]
    frontier = [start]
    questions = all_questions(cfg)
    for _ in range(cfg.depth):
        nxt = []
        for state in frontier:
            for q in questions:
                for positive in (True, False):
                    succ = update_state(cfg, state, q, positive)
                    if succ not in seen:
                        seen.add(succ)
                        order.append(succ)
                        nxt.append(succ)
                        if len(seen) > cfg.state_cap:
                            raise GameError(f"state budget of {cfg.state_cap} exceeded")
        frontier = nxt
        if not frontier:
            break
    return order


def _all_states(cfg: GameConfig) -> list[KnowledgeState]:
    states = [
        KnowledgeState(cfg.elements, vals, cfg.n)
        for vals in itertools.product(range(cfg.n, -1, -1), repeat=len(cfg.elements))
    ]
    if len(states) > cfg.state_cap:
        raise GameError(f"state budget of {cfg.state_cap} exceeded")
    return states


def build_game_model(cfg: GameConfig) -> KripkeModel:
    """The game as a model: every question is an atomic program, and an
    edge under Q goes from f to f updated by either answer to Q.

    Edges are taken between every pair of worlds that the update equation
    relates, so paths of honest play can be checked against box formulas.

    When the depth budget truncates the space before it closes under
    updates, frontier states keep no outgoing edges and box formulas hold
    there vacuously; specifications should be checked at a saturating
    depth (the exploration stops early once no new states appear) or with
    full_space.
    """
    states = _all_states(cfg) if cfg.full_space else reachable_states(cfg)
    index = {s: state_world_name(s) for s in states}
    present = set(states)
    relations: dict[str, set[tuple[str, str]]] = {}
    for q in all_questions(cfg):
        pairs = set()
        for s in states:
            for positive in (True, False):
                succ = update_state(cfg, s, q, positive)
                if succ in present:
                    pairs.add((index[s], index[succ]))
        relations[question_name(cfg, q)] = pairs
    valuation = {
        f"p_{m}": {index[s]: s.values[i] for s in states}
        for i, m in enumerate(cfg.elements)
    }
    return KripkeModel(cfg.n, [index[s] for s in states], relations, valuation)


def resolve_questions(cfg: GameConfig, f: Formula) -> Formula:
    """Rewrite question atoms in a formula to their canonical names,
    resolving complements against the configured search space."""

    def on_prog(p: Program) -> Program:
        t = type(p)
        if t is Atomic:
            return Atomic(question_name(cfg, parse_question(cfg, p.name)))
        if t is Test:
            return Test(on_formula(p.formula))
        if t is Seq:
            return Seq(on_prog(p.left), on_prog(p.right))
        if t is Union:
            return Union(on_prog(p.left), on_prog(p.right))
        return Star(on_prog(p.sub))

    def on_formula(g: Formula) -> Formula:
        t = type(g)
        if t is Not:
            return Not(on_formula(g.sub))
        if t is Implies:
            return Implies(on_formula(g.lhs), on_formula(g.rhs))
        if t is Box:
            return Box(on_prog(g.prog), on_formula(g.body))
        return g

    return on_formula(f)


def check_spec(
    cfg: GameConfig, spec: Formula | str, model: KripkeModel | None = None
) -> tuple[bool, KnowledgeState | None]:
    """Whether a specification holds at every reachable state.

    Atomic programs in the formula must be question names.  On failure
    the violating state is returned alongside False.
    """
    f = parse_formula(spec) if isinstance(spec, str) else spec
    f = resolve_questions(cfg, f)
    m = model if model is not None else build_game_model(cfg)
    bad = m.falsifying_world(f)
    if bad is None:
        return True, None
    return False, world_name_state(cfg, bad[0])


def run_game(
    cfg: GameConfig,
    questions: Sequence[Iterable[str]],
    answers: Sequence[bool],
) -> list[KnowledgeState]:
    """Trajectory of states from the initial one through the given
    question/answer sequence (True = positive answer)."""
    if len(questions) != len(answers):
        raise GameError("one answer per question required")
    state = cfg.start()
    out = [state]
    for q, positive in zip(questions, answers):
        state = update_state(cfg, state, q, positive)
        out.append(state)
    return out
