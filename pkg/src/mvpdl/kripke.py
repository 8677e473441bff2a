"""Finite (n+1)-valued Kripke models and many-valued model checking.

Worlds carry crisp accessibility relations per atomic program and exact
truth values per propositional variable.  Compound program relations are
induced in the usual regular-operation way (composition, union, test as a
partial identity over fully-true worlds, star as reflexive-transitive
closure); the box takes the minimum of the body over successors, with the
empty minimum equal to 1 so dead ends validate every box.

Models are immutable after construction.  Evaluation computes whole value
columns (one value per world) bottom-up over shared subterms and caches
them per model, so repeated checks against one model stay cheap.
"""

from __future__ import annotations

import random
from typing import Iterable, Mapping, Sequence

from .luk import TruthValue
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
    Var,
    Zero,
)


class ModelError(ValueError):
    """Malformed model or evaluation against undeclared vocabulary."""


class KripkeModel:
    """Finite world set, atomic relations, and an exact atomic valuation.

    relations maps atomic program names to world-name pairs; valuation maps
    variable names to a per-world value (numerator int or TruthValue).  The
    valuation must be total on worlds x declared variables.  Atomic
    programs that were never declared denote the empty relation.
    """

    __slots__ = (
        "n",
        "worlds",
        "variables",
        "relations",
        "_widx",
        "_vcols",
        "_zeros",
        "_succ_cache",
        "_prof",
    )

    def __init__(
        self,
        n: int,
        worlds: Sequence[str],
        relations: Mapping[str, Iterable[tuple[str, str]]],
        valuation: Mapping[str, Mapping[str, int | TruthValue]],
    ):
        if n < 1:
            raise ModelError("resolution must be >= 1")
        self.n = n
        self.worlds = tuple(worlds)
        if not self.worlds:
            raise ModelError("a model needs at least one world")
        if len(set(self.worlds)) != len(self.worlds):
            raise ModelError("duplicate world names")
        self._widx = {w: i for i, w in enumerate(self.worlds)}
        rels = {}
        for atom, pairs in relations.items():
            out = set()
            for u, v in pairs:
                if u not in self._widx or v not in self._widx:
                    raise ModelError(f"relation {atom!r} uses undeclared world in ({u!r}, {v!r})")
                out.add((u, v))
            rels[atom] = frozenset(out)
        self.relations = rels
        self._vcols: dict[str, list[int]] = {}
        for var, per_world in valuation.items():
            col = []
            for w in self.worlds:
                if w not in per_world:
                    raise ModelError(f"valuation of {var!r} is missing world {w!r}")
                v = per_world[w]
                if isinstance(v, TruthValue):
                    if v.n != n:
                        raise ModelError(f"value {v} of {var!r} at {w!r} is not at /{n}")
                    v = v.num
                if not 0 <= v <= n:
                    raise ModelError(f"numerator {v} of {var!r} at {w!r} out of range 0..{n}")
                col.append(v)
            self._vcols[var] = col
        self.variables = tuple(sorted(self._vcols))
        self._zeros = [0] * len(self.worlds)
        self._succ_cache: dict[Program, list[tuple[int, ...]]] = {}
        self._prof: dict[Formula, list[int]] = {}

    # -- evaluation --

    def value(self, world: str, f: Formula) -> TruthValue:
        """Truth value of f at a world."""
        idx = self._widx.get(world)
        if idx is None:
            raise ModelError(f"undeclared world {world!r}")
        return TruthValue(self._profile(f)[idx], self.n)

    def value_profile(self, f: Formula) -> dict[str, TruthValue]:
        """Truth value of f at every world."""
        col = self._profile(f)
        return {w: TruthValue(col[i], self.n) for i, w in enumerate(self.worlds)}

    def satisfies(self, world: str, f: Formula) -> bool:
        """Whether f is true (value 1) at the world."""
        return self.value(world, f).num == self.n

    def globally_true(self, f: Formula) -> bool:
        """Whether f is true at every world."""
        n = self.n
        return all(x == n for x in self._profile(f))

    def falsifying_world(self, f: Formula) -> tuple[str, TruthValue] | None:
        """First world where f is not true, with its value there."""
        col = self._profile(f)
        for i, x in enumerate(col):
            if x != self.n:
                return self.worlds[i], TruthValue(x, self.n)
        return None

    def atomic_value(self, world: str, var: str) -> TruthValue:
        col = self._vcols.get(var)
        if col is None:
            raise ModelError(f"undeclared variable {var!r}")
        idx = self._widx.get(world)
        if idx is None:
            raise ModelError(f"undeclared world {world!r}")
        return TruthValue(col[idx], self.n)

    def relation(self, prog: Program) -> frozenset[tuple[str, str]]:
        """Induced relation of a program, as world-name pairs."""
        succ = self._succ(prog)
        names = self.worlds
        return frozenset((names[u], names[v]) for u in range(len(names)) for v in succ[u])

    # -- internals --

    def _profile(self, f: Formula) -> list[int]:
        got = self._prof.get(f)
        if got is not None:
            return got
        n = self.n
        cols: dict[int, list[int]] = {}
        stack: list[tuple[Formula, bool]] = [(f, False)]
        while stack:
            node, ready = stack.pop()
            nid = id(node)
            if not ready:
                if nid in cols:
                    continue
                cached = self._prof.get(node)
                if cached is not None:
                    cols[nid] = cached
                    continue
                t = type(node)
                if t is Var:
                    col = self._vcols.get(node.name)
                    if col is None:
                        raise ModelError(f"undeclared variable {node.name!r}")
                    cols[nid] = col
                    self._prof[node] = col
                elif t is Zero:
                    cols[nid] = self._zeros
                    self._prof[node] = self._zeros
                elif t is Not:
                    stack.append((node, True))
                    stack.append((node.sub, False))
                elif t is Implies:
                    stack.append((node, True))
                    stack.append((node.lhs, False))
                    stack.append((node.rhs, False))
                elif t is Box:
                    stack.append((node, True))
                    stack.append((node.body, False))
                else:
                    raise ModelError(f"cannot evaluate {node!r}")
            else:
                t = type(node)
                if t is Not:
                    a = cols[id(node.sub)]
                    col = [n - x for x in a]
                elif t is Implies:
                    a = cols[id(node.lhs)]
                    b = cols[id(node.rhs)]
                    col = [n if x <= y else n - x + y for x, y in zip(a, b)]
                else:  # Box
                    body = cols[id(node.body)]
                    succ = self._succ(node.prog)
                    col = []
                    for vs in succ:
                        m = n
                        for v in vs:
                            bv = body[v]
                            if bv < m:
                                m = bv
                                if m == 0:
                                    break
                        col.append(m)
                cols[nid] = col
                self._prof[node] = col
        return self._prof[f]

    def _succ(self, prog: Program) -> list[tuple[int, ...]]:
        got = self._succ_cache.get(prog)
        if got is not None:
            return got
        count = len(self.worlds)
        t = type(prog)
        if t is Atomic:
            pairs = self.relations.get(prog.name, frozenset())
            sets: list[set[int]] = [set() for _ in range(count)]
            for u, v in pairs:
                sets[self._widx[u]].add(self._widx[v])
            succ = [tuple(sorted(s)) for s in sets]
        elif t is Test:
            col = self._profile(prog.formula)
            succ = [(w,) if col[w] == self.n else () for w in range(count)]
        elif t is Seq:
            first = self._succ(prog.left)
            second = self._succ(prog.right)
            succ = [tuple(sorted({x for v in first[w] for x in second[v]})) for w in range(count)]
        elif t is Union:
            left = self._succ(prog.left)
            right = self._succ(prog.right)
            succ = [tuple(sorted(set(left[w]) | set(right[w]))) for w in range(count)]
        elif t is Star:
            base = self._succ(prog.sub)
            succ = []
            for w in range(count):
                seen = {w}
                todo = [w]
                while todo:
                    u = todo.pop()
                    for v in base[u]:
                        if v not in seen:
                            seen.add(v)
                            todo.append(v)
                succ.append(tuple(sorted(seen)))
        else:
            raise ModelError(f"not a program: {prog!r}")
        self._succ_cache[prog] = succ
        return succ


def random_model(
    seed: int,
    n: int,
    world_count: int,
    atom_names: Sequence[str] = ("a", "b"),
    var_names: Sequence[str] = ("p", "q"),
    edge_density: float = 0.3,
) -> KripkeModel:
    """Deterministic pseudo-random model: independent edges, uniform values."""
    if world_count < 1:
        raise ModelError("world_count must be >= 1")
    rng = random.Random(seed)
    worlds = [f"w{i}" for i in range(world_count)]
    relations = {}
    for atom in atom_names:
        pairs = set()
        for u in worlds:
            for v in worlds:
                if rng.random() < edge_density:
                    pairs.add((u, v))
        relations[atom] = pairs
    valuation = {}
    for var in var_names:
        valuation[var] = {w: rng.randint(0, n) for w in worlds}
    return KripkeModel(n, worlds, relations, valuation)


def disjoint_union(models: Sequence[KripkeModel]) -> KripkeModel:
    """One model holding every input side by side, worlds renamed m<i>:<w>.

    No edges are added between parts, so values at a renamed world agree
    with the original model.  All parts must share the resolution and
    declare the same variables.
    """
    if not models:
        raise ModelError("need at least one model")
    n = models[0].n
    variables = set(models[0].variables)
    for m in models[1:]:
        if m.n != n:
            raise ModelError("mixed resolutions in union")
        if set(m.variables) != variables:
            raise ModelError("mixed variable sets in union")
    worlds = []
    relations: dict[str, set[tuple[str, str]]] = {}
    valuation: dict[str, dict[str, int]] = {v: {} for v in variables}
    for i, m in enumerate(models):
        rename = {w: f"m{i}:{w}" for w in m.worlds}
        worlds.extend(rename[w] for w in m.worlds)
        for atom, pairs in m.relations.items():
            relations.setdefault(atom, set()).update((rename[u], rename[v]) for u, v in pairs)
        for var in variables:
            for w in m.worlds:
                valuation[var][rename[w]] = m.atomic_value(w, var).num
    return KripkeModel(n, worlds, relations, valuation)


# --- model file format -----------------------------------------------------
#
#   # comment
#   n = 4
#   worlds: u v
#   rel a: u->v, u->u
#   val p: u=3/4 v=1/4
#
# Every declared variable must list every world, with denominators equal
# to the declared n.


def parse_model(text: str) -> KripkeModel:
    n = None
    worlds: list[str] = []
    relations: dict[str, set[tuple[str, str]]] = {}
    valuation: dict[str, dict[str, int]] = {}

    def err(lineno, msg):
        raise ModelError(f"line {lineno}: {msg}")

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("n") and "=" in line and ":" not in line:
            head, _, tail = line.partition("=")
            if head.strip() != "n":
                err(lineno, f"unrecognized line {line!r}")
            try:
                n = int(tail.strip())
            except ValueError:
                err(lineno, f"bad resolution {tail.strip()!r}")
            continue
        if line.startswith("worlds:"):
            worlds.extend(line[len("worlds:") :].split())
            continue
        if line.startswith("rel "):
            head, sep, tail = line[4:].partition(":")
            if not sep:
                err(lineno, "missing ':' in rel line")
            atom = head.strip()
            pairs = relations.setdefault(atom, set())
            tail = tail.strip()
            if tail:
                for chunk in tail.split(","):
                    u, sep2, v = chunk.partition("->")
                    if not sep2:
                        err(lineno, f"bad edge {chunk.strip()!r}, expected u->v")
                    pairs.add((u.strip(), v.strip()))
            continue
        if line.startswith("val "):
            head, sep, tail = line[4:].partition(":")
            if not sep:
                err(lineno, "missing ':' in val line")
            var = head.strip()
            entries = valuation.setdefault(var, {})
            for chunk in tail.split():
                w, sep2, frac = chunk.partition("=")
                if not sep2:
                    err(lineno, f"bad entry {chunk!r}, expected world=i/n")
                num, sep3, den = frac.partition("/")
                if not sep3:
                    err(lineno, f"bad fraction {frac!r}")
                try:
                    num_i, den_i = int(num), int(den)
                except ValueError:
                    err(lineno, f"bad fraction {frac!r}")
                if n is not None and den_i != n:
                    err(lineno, f"denominator {den_i} does not match n = {n}")
                entries[w.strip()] = (num_i, den_i, lineno)
            continue
        err(lineno, f"unrecognized line {line!r}")
    if n is None:
        raise ModelError("missing 'n = <int>' line")
    cleaned: dict[str, dict[str, int]] = {}
    for var, entries in valuation.items():
        cleaned[var] = {}
        for w, (num_i, den_i, lineno) in entries.items():
            if den_i != n:
                err(lineno, f"denominator {den_i} does not match n = {n}")
            cleaned[var][w] = num_i
    return KripkeModel(n, worlds, relations, cleaned)


def format_model(m: KripkeModel, comments: Sequence[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(f"n = {m.n}")
    lines.append("worlds: " + " ".join(m.worlds))
    order = {w: i for i, w in enumerate(m.worlds)}
    for atom in sorted(m.relations):
        pairs = sorted(m.relations[atom], key=lambda uv: (order[uv[0]], order[uv[1]]))
        body = ", ".join(f"{u}->{v}" for u, v in pairs)
        lines.append(f"rel {atom}: {body}")
    for var in m.variables:
        body = " ".join(f"{w}={m.atomic_value(w, var)}" for w in m.worlds)
        lines.append(f"val {var}: {body}")
    return "\n".join(lines) + "\n"


def load_model(path) -> KripkeModel:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_model(fh.read())
