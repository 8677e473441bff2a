"""Quotients of models by value-agreement on a formula's closure.

Two worlds are identified when they give the same value to every member
of the closure of the seed formula.  The quotient keeps an atomic edge
between classes whenever some representatives were related, and values a
variable at a class as the join over the class members.  The class count
is bounded by (n+1) to the closure size, which is what makes the
satisfiability search finite.

Also builds, for any class-saturated world set E, a formula that is true
exactly on E: per class, the meet over the closure of point indicators
composed with the closure formulas; then the join over the classes in E.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .luk import synth_indicator
from .kripke import KripkeModel
from .syntax import Formula, big_join, big_meet, fl_closure, substitute


class NotSaturated(ValueError):
    """Raised when a world set is not a union of equivalence classes."""


@dataclass
class FiltrationResult:
    quotient: KripkeModel
    class_of: dict[str, str]
    seed: Formula
    closure: tuple[Formula, ...]
    class_values: dict[str, tuple[int, ...]]


def _signatures(m: KripkeModel, closure: list[Formula]) -> dict[str, tuple[int, ...]]:
    cols = [list(m.value_profile(g)[w].num for w in m.worlds) for g in closure]
    return {w: tuple(col[i] for col in cols) for i, w in enumerate(m.worlds)}


def equivalence_classes(m: KripkeModel, seed: Formula) -> list[list[str]]:
    """Partition of the worlds by agreement on the closure of the seed.

    Classes come in ascending order of their value tuple over the closure
    (closure members in construction order); members keep world order.
    """
    closure = fl_closure(seed)
    sigs = _signatures(m, closure)
    groups: dict[tuple[int, ...], list[str]] = {}
    for w in m.worlds:
        groups.setdefault(sigs[w], []).append(w)
    return [groups[sig] for sig in sorted(groups)]


def filter_model(m: KripkeModel, seed: Formula) -> FiltrationResult:
    """Quotient of m through the closure of the seed formula."""
    closure = fl_closure(seed)
    sigs = _signatures(m, closure)
    ordered = sorted(set(sigs.values()))
    name_of_sig = {sig: f"c{i}" for i, sig in enumerate(ordered)}
    class_of = {w: name_of_sig[sigs[w]] for w in m.worlds}
    quotient_worlds = [f"c{i}" for i in range(len(ordered))]
    relations = {
        atom: {(class_of[u], class_of[v]) for u, v in pairs}
        for atom, pairs in m.relations.items()
    }
    valuation: dict[str, dict[str, int]] = {}
    for var in m.variables:
        per_class: dict[str, int] = {}
        for w in m.worlds:
            c = class_of[w]
            v = m.atomic_value(w, var).num
            if v > per_class.get(c, -1):
                per_class[c] = v
        valuation[var] = per_class
    quotient = KripkeModel(m.n, quotient_worlds, relations, valuation)
    class_values = {name_of_sig[sig]: sig for sig in ordered}
    return FiltrationResult(quotient, class_of, seed, tuple(closure), class_values)


def characteristic_formula(m: KripkeModel, seed: Formula, world_set: Iterable[str]) -> Formula:
    """Formula true exactly on a class-saturated world set of m.

    Per class, each closure member is forced to its class value by the
    matching point indicator; the meet of those is true exactly on the
    class, and the join over the classes inside the set does the rest.
    The empty set yields the falsum (nowhere true).
    """
    target = set(world_set)
    unknown = target - set(m.worlds)
    if unknown:
        raise NotSaturated(f"unknown worlds: {sorted(unknown)}")
    closure = fl_closure(seed)
    sigs = _signatures(m, closure)
    groups: dict[tuple[int, ...], list[str]] = {}
    for w in m.worlds:
        groups.setdefault(sigs[w], []).append(w)
    parts: list[Formula] = []
    for sig in sorted(groups):
        members = set(groups[sig])
        if members <= target:
            conj = [
                substitute(synth_indicator(v, m.n), {"p": g}) for g, v in zip(closure, sig)
            ]
            parts.append(big_meet(conj))
        elif members & target:
            raise NotSaturated(
                f"set splits a class: contains {sorted(members & target)} "
                f"but not {sorted(members - target)}"
            )
    return big_join(parts)
