"""Abstract syntax for formulas and regular programs.

Formulas have exactly five core constructors (variable, falsum, negation,
implication, box); everything else (lattice and strong connectives, powers,
diamonds) is sugar that expands to core terms at construction time, so
every semantic operation only ever sees the five core shapes.

Programs are atomic names, tests on formulas, sequential composition,
nondeterministic choice and iteration (star).

Trees are immutable, hash-consed enough to share subterms freely, and
compared structurally.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Mapping


class Formula:
    """Base class of the five core formula shapes."""

    __slots__ = ("_hash",)

    def __hash__(self) -> int:
        return self._hash

    def __ne__(self, other):
        return not self.__eq__(other)

    def __repr__(self):
        from .parser import format_formula

        return f"Formula({format_formula(self)!r})"


class Program:
    """Base class of the five program shapes."""

    __slots__ = ("_hash",)

    def __hash__(self) -> int:
        return self._hash

    def __ne__(self, other):
        return not self.__eq__(other)

    def __repr__(self):
        from .parser import format_program

        return f"Program({format_program(self)!r})"


class Var(Formula):
    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name
        self._hash = hash(("var", name))

    def __eq__(self, other):
        return self is other or (type(other) is Var and other.name == self.name)

    __hash__ = Formula.__hash__


class Zero(Formula):
    __slots__ = ()

    def __init__(self):
        self._hash = hash("zero")

    def __eq__(self, other):
        return type(other) is Zero

    __hash__ = Formula.__hash__


class Not(Formula):
    __slots__ = ("sub",)

    def __init__(self, sub: Formula):
        self.sub = sub
        self._hash = hash(("not", sub._hash))

    def __eq__(self, other):
        return self is other or (type(other) is Not and other.sub == self.sub)

    __hash__ = Formula.__hash__


class Implies(Formula):
    __slots__ = ("lhs", "rhs")

    def __init__(self, lhs: Formula, rhs: Formula):
        self.lhs = lhs
        self.rhs = rhs
        self._hash = hash(("imp", lhs._hash, rhs._hash))

    def __eq__(self, other):
        return self is other or (
            type(other) is Implies and other.lhs == self.lhs and other.rhs == self.rhs
        )

    __hash__ = Formula.__hash__


class Box(Formula):
    __slots__ = ("prog", "body")

    def __init__(self, prog: Program, body: Formula):
        self.prog = prog
        self.body = body
        self._hash = hash(("box", prog._hash, body._hash))

    def __eq__(self, other):
        return self is other or (
            type(other) is Box and other.prog == self.prog and other.body == self.body
        )

    __hash__ = Formula.__hash__


class Atomic(Program):
    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name
        self._hash = hash(("atom", name))

    def __eq__(self, other):
        return self is other or (type(other) is Atomic and other.name == self.name)

    __hash__ = Program.__hash__


class Test(Program):
    __slots__ = ("formula",)
    __test__ = False  # not a pytest case, despite the name

    def __init__(self, formula: Formula):
        self.formula = formula
        self._hash = hash(("test", formula._hash))

    def __eq__(self, other):
        return self is other or (type(other) is Test and other.formula == self.formula)

    __hash__ = Program.__hash__


class Seq(Program):
    __slots__ = ("left", "right")

    def __init__(self, left: Program, right: Program):
        self.left = left
        self.right = right
        self._hash = hash(("seq", left._hash, right._hash))

    def __eq__(self, other):
        return self is other or (
            type(other) is Seq and other.left == self.left and other.right == self.right
        )

    __hash__ = Program.__hash__


class Union(Program):
    __slots__ = ("left", "right")

    def __init__(self, left: Program, right: Program):
        self.left = left
        self.right = right
        self._hash = hash(("union", left._hash, right._hash))

    def __eq__(self, other):
        return self is other or (
            type(other) is Union and other.left == self.left and other.right == self.right
        )

    __hash__ = Program.__hash__


class Star(Program):
    __slots__ = ("sub",)

    def __init__(self, sub: Program):
        self.sub = sub
        self._hash = hash(("star", sub._hash))

    def __eq__(self, other):
        return self is other or (type(other) is Star and other.sub == self.sub)

    __hash__ = Program.__hash__


ZERO = Zero()
ONE = Not(ZERO)


# --- sugar ---------------------------------------------------------------
#
# Expansions follow the usual Lukasiewicz abbreviations:
#   a | b   := (a -> b) -> b              (join, pointwise max)
#   a & b   := ~(~a | ~b)                 (meet, pointwise min)
#   a (+) b := ~a -> b                    (strong disjunction, truncated sum)
#   a (.) b := ~(~a (+) ~b)               (strong conjunction)
#   a <-> b := (a -> b) (.) (b -> a)
#   <prog>a := ~[prog]~a
#   a^k     := a (.) ... (.) a  (k times, a^0 = 1)
#   k.a     := a (+) ... (+) a  (k times, 0.a = 0)


def lor(a: Formula, b: Formula) -> Formula:
    return Implies(Implies(a, b), b)


def land(a: Formula, b: Formula) -> Formula:
    return Not(lor(Not(a), Not(b)))


def oplus(a: Formula, b: Formula) -> Formula:
    return Implies(Not(a), b)


def odot(a: Formula, b: Formula) -> Formula:
    return Not(oplus(Not(a), Not(b)))


def iff(a: Formula, b: Formula) -> Formula:
    return odot(Implies(a, b), Implies(b, a))


def diamond(prog: Program, body: Formula) -> Formula:
    return Not(Box(prog, Not(body)))


def power(a: Formula, k: int) -> Formula:
    """k-fold strong conjunction a (.) ... (.) a, with a^0 = 1."""
    if k < 0:
        raise ValueError("negative power")
    if k == 0:
        return ONE
    out = a
    for _ in range(k - 1):
        out = odot(out, a)
    return out


def times(k: int, a: Formula) -> Formula:
    """k-fold strong disjunction a (+) ... (+) a, with 0.a = 0."""
    if k < 0:
        raise ValueError("negative multiplicity")
    if k == 0:
        return ZERO
    out = a
    for _ in range(k - 1):
        out = oplus(out, a)
    return out


def big_meet(parts: Iterable[Formula]) -> Formula:
    """Left fold of &.  The empty meet is 1."""
    out = None
    for p in parts:
        out = p if out is None else land(out, p)
    return ONE if out is None else out


def big_join(parts: Iterable[Formula]) -> Formula:
    """Left fold of |.  The empty join is 0."""
    out = None
    for p in parts:
        out = p if out is None else lor(out, p)
    return ZERO if out is None else out


# --- traversal helpers ---------------------------------------------------


def variables_of(f: Formula | Program) -> set[str]:
    """Names of all propositional variables, including inside tests."""
    out: set[str] = set()
    _walk(f, out, None)
    return out


def atomic_programs_of(f: Formula | Program) -> set[str]:
    """Names of all atomic programs, including under star and tests."""
    out: set[str] = set()
    _walk(f, None, out)
    return out


def _walk(node, vars_out, atoms_out):
    stack = [node]
    while stack:
        x = stack.pop()
        t = type(x)
        if t is Var:
            if vars_out is not None:
                vars_out.add(x.name)
        elif t is Not:
            stack.append(x.sub)
        elif t is Implies:
            stack.append(x.lhs)
            stack.append(x.rhs)
        elif t is Box:
            stack.append(x.prog)
            stack.append(x.body)
        elif t is Atomic:
            if atoms_out is not None:
                atoms_out.add(x.name)
        elif t is Test:
            stack.append(x.formula)
        elif t in (Seq, Union):
            stack.append(x.left)
            stack.append(x.right)
        elif t is Star:
            stack.append(x.sub)


def substitute(f: Formula, sub: Mapping[str, Formula]) -> Formula:
    """Simultaneously replace variables by formulas, also inside tests."""
    if not sub:
        return f
    return _subst_f(f, sub, {})


def substitute_program(p: Program, sub: Mapping[str, Formula]) -> Program:
    if not sub:
        return p
    return _subst_p(p, sub, {})


def _subst_f(f, sub, memo):
    key = id(f)
    got = memo.get(key)
    if got is not None:
        return got
    t = type(f)
    if t is Var:
        out = sub.get(f.name, f)
    elif t is Zero:
        out = f
    elif t is Not:
        out = Not(_subst_f(f.sub, sub, memo))
    elif t is Implies:
        out = Implies(_subst_f(f.lhs, sub, memo), _subst_f(f.rhs, sub, memo))
    else:
        out = Box(_subst_p(f.prog, sub, memo), _subst_f(f.body, sub, memo))
    memo[key] = out
    return out


def _subst_p(p, sub, memo):
    key = id(p)
    got = memo.get(key)
    if got is not None:
        return got
    t = type(p)
    if t is Atomic:
        out = p
    elif t is Test:
        out = Test(_subst_f(p.formula, sub, memo))
    elif t is Seq:
        out = Seq(_subst_p(p.left, sub, memo), _subst_p(p.right, sub, memo))
    elif t is Union:
        out = Union(_subst_p(p.left, sub, memo), _subst_p(p.right, sub, memo))
    else:
        out = Star(_subst_p(p.sub, sub, memo))
    memo[key] = out
    return out


def substitute_atomics(f: Formula, sub: Mapping[str, Program]) -> Formula:
    """Replace atomic programs by programs throughout a formula.

    Used to fill program placeholders in axiom and tautology schemas.
    """
    if not sub:
        return f
    return _psubst_f(f, sub, {})


def substitute_atomics_program(p: Program, sub: Mapping[str, Program]) -> Program:
    if not sub:
        return p
    return _psubst_p(p, sub, {})


def _psubst_f(f, sub, memo):
    key = id(f)
    got = memo.get(key)
    if got is not None:
        return got
    t = type(f)
    if t is Not:
        out = Not(_psubst_f(f.sub, sub, memo))
    elif t is Implies:
        out = Implies(_psubst_f(f.lhs, sub, memo), _psubst_f(f.rhs, sub, memo))
    elif t is Box:
        out = Box(_psubst_p(f.prog, sub, memo), _psubst_f(f.body, sub, memo))
    else:
        out = f
    memo[key] = out
    return out


def _psubst_p(p, sub, memo):
    key = id(p)
    got = memo.get(key)
    if got is not None:
        return got
    t = type(p)
    if t is Atomic:
        out = sub.get(p.name, p)
    elif t is Test:
        out = Test(_psubst_f(p.formula, sub, memo))
    elif t is Seq:
        out = Seq(_psubst_p(p.left, sub, memo), _psubst_p(p.right, sub, memo))
    elif t is Union:
        out = Union(_psubst_p(p.left, sub, memo), _psubst_p(p.right, sub, memo))
    else:
        out = Star(_psubst_p(p.sub, sub, memo))
    memo[key] = out
    return out


# --- decomposition closure -------------------------------------------------


def fl_closure(seed: Formula | Iterable[Formula]) -> list[Formula]:
    """Least formula set containing the seed and closed under decomposition.

    The eight rules: subformulas of ~ and ->; body of a box; [a][b]f from
    [a;b]f; [a]f and [b]f from [a+b]f; [a][a*]f from [a*]f; and test
    formula plus body from [g?]f.  Returns the members in deterministic
    first-reached (breadth-first) order; the seed comes first.
    """
    if isinstance(seed, Formula):
        seeds = [seed]
    else:
        seeds = list(seed)
    out: dict[Formula, None] = {}
    queue: deque[Formula] = deque()

    def add(g: Formula):
        if g not in out:
            out[g] = None
            queue.append(g)

    for s in seeds:
        add(s)
    while queue:
        g = queue.popleft()
        t = type(g)
        if t is Not:
            add(g.sub)
        elif t is Implies:
            add(g.lhs)
            add(g.rhs)
        elif t is Box:
            add(g.body)
            prog = g.prog
            pt = type(prog)
            if pt is Seq:
                add(Box(prog.left, Box(prog.right, g.body)))
            elif pt is Union:
                add(Box(prog.left, g.body))
                add(Box(prog.right, g.body))
            elif pt is Star:
                add(Box(prog.sub, g))
            elif pt is Test:
                add(prog.formula)
    return list(out)


