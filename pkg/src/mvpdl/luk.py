"""Arithmetic of the (n+1)-valued Lukasiewicz truth set.

Values are the fractions i/n for 0 <= i <= n, kept exact as an integer
numerator paired with the step count n.  Negation is 1-x and implication
is min(1-x+y, 1); the strong and lattice connectives derive from those.
Values at different resolutions never mix: the sets of values are
incomparable in general, so a mismatch is an error, not a coercion.

Also provides exhaustive propositional tautology checking and the
synthesis of one-variable threshold formulas (value 1 from i/n upward,
0 below) and point indicators, built only from the doubling maps
x (+) x and x (.) x.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping

from .syntax import (
    Box,
    Formula,
    Implies,
    Not,
    Var,
    Zero,
    land,
    odot,
    oplus,
    variables_of,
)


class ResolutionMismatch(ValueError):
    """Raised when values from different truth sets are combined."""


class UnboundVariable(KeyError):
    """Raised when evaluation meets a variable missing from the assignment."""


@dataclass(frozen=True)
class TruthValue:
    """The value num/n in the (n+1)-element truth set."""

    num: int
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"resolution must be >= 1, got {self.n}")
        if not 0 <= self.num <= self.n:
            raise ValueError(f"numerator {self.num} out of range 0..{self.n}")

    def as_fraction(self) -> Fraction:
        return Fraction(self.num, self.n)

    @property
    def is_top(self) -> bool:
        return self.num == self.n

    @property
    def is_bottom(self) -> bool:
        return self.num == 0

    def __str__(self):
        return f"{self.num}/{self.n}"

    def __le__(self, other: "TruthValue") -> bool:
        _same_resolution(self, other)
        return self.num <= other.num

    def __lt__(self, other: "TruthValue") -> bool:
        _same_resolution(self, other)
        return self.num < other.num


def tv(num: int, n: int) -> TruthValue:
    return TruthValue(num, n)


def top(n: int) -> TruthValue:
    return TruthValue(n, n)


def bottom(n: int) -> TruthValue:
    return TruthValue(0, n)


def all_values(n: int) -> Iterator[TruthValue]:
    for i in range(n + 1):
        yield TruthValue(i, n)


def _same_resolution(x: TruthValue, y: TruthValue) -> int:
    if x.n != y.n:
        raise ResolutionMismatch(f"cannot combine values at /{x.n} and /{y.n}")
    return x.n


# Numerator-level connectives; the hot paths work on plain ints.


def neg_i(x: int, n: int) -> int:
    return n - x


def imp_i(x: int, y: int, n: int) -> int:
    return min(n - x + y, n)


def oplus_i(x: int, y: int, n: int) -> int:
    return min(x + y, n)


def odot_i(x: int, y: int, n: int) -> int:
    return max(x + y - n, 0)


def equiv_i(x: int, y: int, n: int) -> int:
    return n - abs(x - y)


def neg(x: TruthValue) -> TruthValue:
    return TruthValue(x.n - x.num, x.n)


def implies(x: TruthValue, y: TruthValue) -> TruthValue:
    n = _same_resolution(x, y)
    return TruthValue(imp_i(x.num, y.num, n), n)


def strong_or(x: TruthValue, y: TruthValue) -> TruthValue:
    n = _same_resolution(x, y)
    return TruthValue(oplus_i(x.num, y.num, n), n)


def strong_and(x: TruthValue, y: TruthValue) -> TruthValue:
    n = _same_resolution(x, y)
    return TruthValue(odot_i(x.num, y.num, n), n)


def join(x: TruthValue, y: TruthValue) -> TruthValue:
    n = _same_resolution(x, y)
    return TruthValue(max(x.num, y.num), n)


def meet(x: TruthValue, y: TruthValue) -> TruthValue:
    n = _same_resolution(x, y)
    return TruthValue(min(x.num, y.num), n)


def equiv(x: TruthValue, y: TruthValue) -> TruthValue:
    n = _same_resolution(x, y)
    return TruthValue(equiv_i(x.num, y.num, n), n)


# --- propositional evaluation --------------------------------------------


def eval_prop_num(f: Formula, env: Mapping[str, int], n: int) -> int:
    """Evaluate a modality-free formula; env maps names to numerators."""
    memo: dict[int, int] = {}

    def rec(g: Formula) -> int:
        key = id(g)
        got = memo.get(key)
        if got is not None:
            return got
        t = type(g)
        if t is Var:
            try:
                v = env[g.name]
            except KeyError:
                raise UnboundVariable(g.name) from None
        elif t is Zero:
            v = 0
        elif t is Not:
            v = n - rec(g.sub)
        elif t is Implies:
            v = imp_i(rec(g.lhs), rec(g.rhs), n)
        elif t is Box:
            raise ValueError("modal formula passed to propositional evaluation")
        else:
            raise TypeError(f"not a formula: {g!r}")
        memo[key] = v
        return v

    return rec(f)


def eval_prop(f: Formula, assignment: Mapping[str, TruthValue], n: int | None = None) -> TruthValue:
    """Value of a modality-free formula under a total assignment.

    The resolution is taken from the assignment; pass n explicitly for
    formulas without variables.
    """
    if n is None:
        resolutions = {v.n for v in assignment.values()}
        if len(resolutions) > 1:
            raise ResolutionMismatch(f"mixed resolutions in assignment: {sorted(resolutions)}")
        if not resolutions:
            raise ValueError("assignment is empty; pass the resolution n explicitly")
        n = resolutions.pop()
    env = {}
    for name, v in assignment.items():
        if v.n != n:
            raise ResolutionMismatch(f"assignment value {v} is not at /{n}")
        env[name] = v.num
    return TruthValue(eval_prop_num(f, env, n), n)


def prop_counterexample(f: Formula, n: int) -> dict[str, TruthValue] | None:
    """First assignment (in lexicographic order) with value below 1, if any.

    Exhausts the full table, so the cost is (n+1)**#variables.
    """
    names = sorted(variables_of(f))
    for nums in itertools.product(range(n + 1), repeat=len(names)):
        env = dict(zip(names, nums))
        if eval_prop_num(f, env, n) != n:
            return {name: TruthValue(i, n) for name, i in env.items()}
    return None


def is_tautology_prop(f: Formula, n: int) -> bool:
    """Whether f evaluates to 1 under every assignment over the truth set."""
    return prop_counterexample(f, n) is None


def unary_table(f: Formula, n: int, var: str = "p") -> tuple[int, ...]:
    """Value profile of a one-variable formula over all points, as numerators."""
    return tuple(eval_prop_num(f, {var: i}, n) for i in range(n + 1))


# --- threshold and indicator synthesis -----------------------------------

_P = Var("p")

# Constant-1 and constant-0 one-variable formulas: p (+) ~p and p (.) ~p.
TAUT_ONE = oplus(_P, Not(_P))
TAUT_ZERO = odot(_P, Not(_P))

_tau_lock = threading.Lock()
_tau_cache: dict[int, dict[int, Formula]] = {}


def _threshold_family(n: int) -> dict[int, Formula]:
    """Breadth-first search over unary maps reachable from the identity.

    Post-composing x -> x (+) x doubles and truncates; x -> x (.) x doubles
    down and truncates.  The reachable function space on n+1 points is
    finite, so the search terminates; the first formula reaching each
    threshold table is kept, which fixes the synthesized formula per (i, n).
    """
    targets = {
        tuple(n if x >= i else 0 for x in range(n + 1)): i for i in range(1, n + 1)
    }
    found: dict[int, Formula] = {}
    ident = tuple(range(n + 1))
    queue: list[tuple[tuple[int, ...], Formula]] = [(ident, _P)]
    seen = {ident}
    while queue and len(found) < n:
        next_queue: list[tuple[tuple[int, ...], Formula]] = []
        for table, ast in queue:
            i = targets.get(table)
            if i is not None and i not in found:
                found[i] = ast
            for new_table, new_ast in (
                (tuple(min(2 * x, n) for x in table), oplus(ast, ast)),
                (tuple(max(2 * x - n, 0) for x in table), odot(ast, ast)),
            ):
                if new_table not in seen:
                    seen.add(new_table)
                    next_queue.append((new_table, new_ast))
        queue = next_queue
    missing = [i for i in range(1, n + 1) if i not in found]
    if missing:  # unreachable for the doubling maps, kept as a hard guard
        raise RuntimeError(f"threshold synthesis failed for i={missing} at n={n}")
    return found


def synth_tau(i: int, n: int) -> Formula:
    """One-variable formula in p whose value is 1 for x >= i/n and 0 below.

    i = 0 and i = n+1 are accepted and both return the constant-1 formula
    p (+) ~p, the conventional reading of the degenerate thresholds.
    """
    if n < 1:
        raise ValueError("resolution must be >= 1")
    if i in (0, n + 1):
        return TAUT_ONE
    if not 1 <= i <= n:
        raise ValueError(f"threshold index {i} out of range 0..{n + 1}")
    with _tau_lock:
        family = _tau_cache.get(n)
        if family is None:
            family = _threshold_family(n)
            _tau_cache[n] = family
        return family[i]


def synth_indicator(i: int, n: int) -> Formula:
    """One-variable formula whose value is 1 exactly at the point i/n.

    Built as tau_i & ~tau_{i+1}.  The out-of-range upper threshold (i = n)
    uses the constant-0 formula p (.) ~p so that the top indicator is the
    characteristic function of {1}; the constant-1 convention stated for
    degenerate thresholds would collapse it to 0.
    """
    if not 0 <= i <= n:
        raise ValueError(f"indicator index {i} out of range 0..{n}")
    low = synth_tau(i, n) if i >= 1 else TAUT_ONE
    high = synth_tau(i + 1, n) if i + 1 <= n else TAUT_ZERO
    return land(low, Not(high))


# --- algebraic identities -------------------------------------------------


def mv_equation_failures(n: int) -> list[tuple[str, int, int, int]]:
    """Exhaustively check the four defining identities of the value algebra.

    As printed, two of the four need the standard reading: the first is
    checked as 1 -> x = x (not x -> 1 = x, which already fails at x = 0),
    and the third as (x -> y) -> y = (y -> x) -> x.  Returns the list of
    failing (equation, x, y, z) numerator triples; empty means all hold.
    """
    bad: list[tuple[str, int, int, int]] = []
    rng = range(n + 1)
    for x in rng:
        if imp_i(n, x, n) != x:
            bad.append(("1->x=x", x, 0, 0))
        for y in rng:
            if imp_i(imp_i(x, y, n), y, n) != imp_i(imp_i(y, x, n), x, n):
                bad.append(("(x->y)->y=(y->x)->x", x, y, 0))
            if imp_i(imp_i(neg_i(x, n), neg_i(y, n), n), imp_i(y, x, n), n) != n:
                bad.append(("(~x->~y)->(y->x)=1", x, y, 0))
            for z in rng:
                lhs = imp_i(imp_i(x, y, n), imp_i(imp_i(y, z, n), imp_i(x, z, n), n), n)
                if lhs != n:
                    bad.append(("(x->y)->((y->z)->(x->z))=1", x, y, z))
    return bad
