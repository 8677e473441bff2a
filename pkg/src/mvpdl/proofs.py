"""Hilbert-style derivation checking for the (n+1)-valued dynamic system.

Axiom schemas (over formula metavariables p, q and program metavariables
a, b):

    K       [a](p -> q) -> ([a]p -> [a]q)
    oplus   [a](p (+) p) <-> [a]p (+) [a]p
    odot    [a](p (.) p) <-> [a]p (.) [a]p
    union   [a + b]p <-> [a]p & [b]p
    seq     [a;b]p <-> [a][b]p
    test    [q?]p <-> ~(q^n) | p
    fix     [a*]p <-> p & [a][a*]p
    trans   [a*]p -> [a*][a*]p
    ind     (p & [a*]((p -> [a]p)^n)) -> [a*]p

Deduction rules are modus ponens, necessitation, and uniform substitution
of formulas for variables (also inside tests).  The propositional base is
discharged by the `luk` justification: the line is accepted when, after
replacing each maximal boxed subformula by a fresh variable (identical
subformulas sharing one variable), the remainder is an exhaustive
(n+1)-valued tautology.

A derivation may open with premise lines; theoremhood requires none.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Mapping

from .luk import is_tautology_prop
from .parser import ParseError, format_formula, format_program, parse_formula, parse_program
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
    iff,
    land,
    lor,
    oplus,
    odot,
    power,
    substitute,
    substitute_atomics,
    variables_of,
)

_P = Var("p")
_Q = Var("q")
_A = Atomic("a")
_B = Atomic("b")


class IncompleteSubstitution(ValueError):
    """An axiom instantiation left a schematic symbol unmapped."""


def axiom_ids() -> tuple[str, ...]:
    return ("K", "oplus", "odot", "union", "seq", "test", "fix", "trans", "ind")


def axiom_template(axiom_id: str, n: int) -> Formula:
    p, q, a, b = _P, _Q, _A, _B
    if axiom_id == "K":
        return Implies(Box(a, Implies(p, q)), Implies(Box(a, p), Box(a, q)))
    if axiom_id == "oplus":
        return iff(Box(a, oplus(p, p)), oplus(Box(a, p), Box(a, p)))
    if axiom_id == "odot":
        return iff(Box(a, odot(p, p)), odot(Box(a, p), Box(a, p)))
    if axiom_id == "union":
        return iff(Box(Union(a, b), p), land(Box(a, p), Box(b, p)))
    if axiom_id == "seq":
        return iff(Box(Seq(a, b), p), Box(a, Box(b, p)))
    if axiom_id == "test":
        return iff(Box(Test(q), p), lor(Not(power(q, n)), p))
    if axiom_id == "fix":
        return iff(Box(Star(a), p), land(p, Box(a, Box(Star(a), p))))
    if axiom_id == "trans":
        return Implies(Box(Star(a), p), Box(Star(a), Box(Star(a), p)))
    if axiom_id == "ind":
        return Implies(
            land(p, Box(Star(a), power(Implies(p, Box(a, p)), n))), Box(Star(a), p)
        )
    raise ValueError(f"unknown axiom {axiom_id!r}")


_SCHEMA_PROGS = {
    "K": ("a",),
    "oplus": ("a",),
    "odot": ("a",),
    "union": ("a", "b"),
    "seq": ("a", "b"),
    "test": (),
    "fix": ("a",),
    "trans": ("a",),
    "ind": ("a",),
}


def instantiate_axiom(
    axiom_id: str,
    n: int,
    fsub: Mapping[str, Formula] | None = None,
    psub: Mapping[str, Program] | None = None,
) -> Formula:
    """Fill an axiom schema.  Every schematic symbol must be mapped."""
    template = axiom_template(axiom_id, n)
    fsub = dict(fsub or {})
    psub = dict(psub or {})
    missing_vars = variables_of(template) - set(fsub)
    missing_progs = set(_SCHEMA_PROGS[axiom_id]) - set(psub)
    if missing_vars or missing_progs:
        raise IncompleteSubstitution(
            f"axiom {axiom_id} leaves {sorted(missing_vars | missing_progs)} unmapped"
        )
    out = substitute_atomics(template, psub)
    return substitute(out, fsub)


# --- derivations ------------------------------------------------------------


@dataclass
class Premise:
    pass


@dataclass
class AxiomRef:
    axiom_id: str
    fsub: dict[str, Formula] = field(default_factory=dict)
    psub: dict[str, Program] = field(default_factory=dict)


@dataclass
class Luk:
    pass


@dataclass
class ModusPonens:
    minor: int  # line holding phi
    major: int  # line holding phi -> psi


@dataclass
class Necessitation:
    source: int
    prog: Program


@dataclass
class Substitution:
    source: int
    fsub: dict[str, Formula] = field(default_factory=dict)


Justification = Premise | AxiomRef | Luk | ModusPonens | Necessitation | Substitution


@dataclass
class Line:
    formula: Formula
    justification: Justification


@dataclass
class Derivation:
    """Numbered proof lines at a fixed resolution; references are 1-based."""

    n: int
    lines: list[Line] = field(default_factory=list)

    def add(self, formula: Formula, justification: Justification) -> int:
        self.lines.append(Line(formula, justification))
        return len(self.lines)

    @property
    def premises(self) -> list[Formula]:
        return [ln.formula for ln in self.lines if isinstance(ln.justification, Premise)]

    @property
    def conclusion(self) -> Formula | None:
        return self.lines[-1].formula if self.lines else None


def abstract_boxes(f: Formula) -> Formula:
    """Replace each maximal boxed subformula by a variable; structurally
    equal boxes share one variable."""
    fresh: dict[Formula, Var] = {}

    def rec(g: Formula) -> Formula:
        t = type(g)
        if t is Box:
            v = fresh.get(g)
            if v is None:
                v = Var(f"#b{len(fresh)}")
                fresh[g] = v
            return v
        if t is Not:
            return Not(rec(g.sub))
        if t is Implies:
            return Implies(rec(g.lhs), rec(g.rhs))
        return g

    return rec(f)


def is_modal_luk_tautology(f: Formula, n: int) -> bool:
    """The `luk` acceptance test: abstract the boxes, then truth-table."""
    return is_tautology_prop(abstract_boxes(f), n)


def check_line(d: Derivation, lineno: int) -> str | None:
    """None when the 1-based line is justified; otherwise the violation."""
    if not 1 <= lineno <= len(d.lines):
        return f"no line {lineno}"
    line = d.lines[lineno - 1]
    j = line.justification
    if isinstance(j, Premise):
        return None
    if isinstance(j, AxiomRef):
        try:
            expected = instantiate_axiom(j.axiom_id, d.n, j.fsub, j.psub)
        except (ValueError, IncompleteSubstitution) as exc:
            return str(exc)
        if line.formula != expected:
            return (
                f"axiom instance mismatch: expected {format_formula(expected)}"
            )
        return None
    if isinstance(j, Luk):
        if not is_modal_luk_tautology(line.formula, d.n):
            return "not an instance of an (n+1)-valued propositional tautology"
        return None
    if isinstance(j, ModusPonens):
        bad = _ref_error(d, lineno, j.minor) or _ref_error(d, lineno, j.major)
        if bad:
            return bad
        major = d.lines[j.major - 1].formula
        minor = d.lines[j.minor - 1].formula
        if type(major) is not Implies:
            return "major premise shape: cited line is not an implication"
        if major.lhs != minor:
            return "modus ponens: antecedent does not match the minor premise"
        if major.rhs != line.formula:
            return "modus ponens: consequent does not match this line"
        return None
    if isinstance(j, Necessitation):
        bad = _ref_error(d, lineno, j.source)
        if bad:
            return bad
        expected = Box(j.prog, d.lines[j.source - 1].formula)
        if line.formula != expected:
            return f"necessitation: expected {format_formula(expected)}"
        return None
    if isinstance(j, Substitution):
        bad = _ref_error(d, lineno, j.source)
        if bad:
            return bad
        expected = substitute(d.lines[j.source - 1].formula, j.fsub)
        if line.formula != expected:
            return f"substitution: expected {format_formula(expected)}"
        return None
    return f"unknown justification {j!r}"


def _ref_error(d: Derivation, lineno: int, ref: int) -> str | None:
    if not 1 <= ref <= len(d.lines):
        return f"reference to missing line {ref}"
    if ref >= lineno:
        return f"forward reference to line {ref}"
    return None


def check_derivation(d: Derivation) -> tuple[int, str] | None:
    """First failing (line number, reason), or None when all lines check."""
    for lineno in range(1, len(d.lines) + 1):
        reason = check_line(d, lineno)
        if reason is not None:
            return lineno, reason
    return None


def proves(d: Derivation, f: Formula) -> bool:
    """Whether d is a premise-free checked derivation ending in f."""
    return not d.premises and d.conclusion == f and check_derivation(d) is None


# --- loop invariance --------------------------------------------------------


def derive_loop_invariance(phi: Formula, alpha: Program, n: int) -> Derivation:
    """Checked derivation of phi -> [alpha*]phi from (phi -> [alpha]phi)^n.

    The steps: necessitate the premise under the star; a propositional
    step packs phi with the boxed premise; the induction axiom plus a
    transitivity step then reach the boxed conclusion.
    """
    star = Star(alpha)
    premise = power(Implies(phi, Box(alpha, phi)), n)
    boxed = Box(star, premise)
    packed = land(phi, boxed)
    goal = Box(star, phi)
    d = Derivation(n=n)
    l1 = d.add(premise, Premise())
    l2 = d.add(boxed, Necessitation(l1, star))
    l3 = d.add(Implies(boxed, Implies(phi, packed)), Luk())
    l4 = d.add(Implies(phi, packed), ModusPonens(l2, l3))
    l5 = d.add(
        Implies(
            Implies(phi, packed),
            Implies(Implies(packed, goal), Implies(phi, goal)),
        ),
        Luk(),
    )
    l6 = d.add(Implies(Implies(packed, goal), Implies(phi, goal)), ModusPonens(l4, l5))
    l7 = d.add(
        Implies(packed, goal),
        AxiomRef("ind", fsub={"p": phi}, psub={"a": alpha}),
    )
    d.add(Implies(phi, goal), ModusPonens(l7, l6))
    return d


def derive_loop_invariance_plain(phi: Formula, alpha: Program, n: int) -> Derivation:
    """Variant starting from the unpowered premise phi -> [alpha]phi.

    The jump from the premise to its n-th power is admissible for the
    system (powering preserves theoremhood) but not derivable from the
    rules alone, so the power enters as a second premise line here.
    """
    d = Derivation(n=n)
    d.add(Implies(phi, Box(alpha, phi)), Premise())
    d.add(power(Implies(phi, Box(alpha, phi)), n), Premise())
    rest = derive_loop_invariance(phi, alpha, n)
    offset = 2
    for line in rest.lines[1:]:  # skip the powered premise, already line 2
        j = line.justification
        if isinstance(j, ModusPonens):
            j = ModusPonens(j.minor + offset - 1, j.major + offset - 1)
        elif isinstance(j, Necessitation):
            j = Necessitation(j.source + offset - 1, j.prog)
        elif isinstance(j, Substitution):
            j = Substitution(j.source + offset - 1, j.fsub)
        d.add(line.formula, j)
    return d


# --- derivation files -------------------------------------------------------
#
#   1. (p -> [a]p)^2 ; premise
#   2. [a*](p -> [a]p)^2 ; nec(1, [a*])
#   4. p -> p & [a*](p -> [a]p)^2 ; mp(2, 3)
#   7. ... ; axiom(ind; p := p; a := a)
#   9. ... ; sub(1; p := q (+) q)

_LINE_RE = re.compile(
    r"^\s*(\d+)\s*\.\s*(.*\S)\s*;\s*"
    r"(premise|luk|mp\s*\(.*\)|nec\s*\(.*\)|axiom\s*\(.*\)|sub\s*\(.*\))\s*$"
)
_MP_RE = re.compile(r"^mp\s*\(\s*(\d+)\s*,\s*(\d+)\s*\)$")
_NEC_RE = re.compile(r"^nec\s*\(\s*(\d+)\s*,\s*\[(.*)\]\s*\)$")
_AX_RE = re.compile(r"^axiom\s*\((.*)\)$")
_SUB_RE = re.compile(r"^sub\s*\(\s*(\d+)\s*(?:;(.*))?\)$")
_BIND_SPLIT = re.compile(r";(?=\s*[A-Za-z_]\w*\s*:=)")


class DerivationFormatError(ValueError):
    pass


def _parse_bindings(text: str, progs: tuple[str, ...] = ("a", "b")):
    fsub: dict[str, Formula] = {}
    psub: dict[str, Program] = {}
    if not text or not text.strip():
        return fsub, psub
    for chunk in _BIND_SPLIT.split(text):
        name, sep, value = chunk.partition(":=")
        if not sep:
            raise DerivationFormatError(f"bad binding {chunk.strip()!r}")
        name = name.strip()
        value = value.strip()
        if name in progs:
            psub[name] = parse_program(value)
        else:
            fsub[name] = parse_formula(value)
    return fsub, psub


def parse_derivation(text: str, n: int) -> Derivation:
    d = Derivation(n=n)
    expected = 1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if not stripped:
            continue
        m = _LINE_RE.match(stripped)
        if not m:
            raise DerivationFormatError(f"line {lineno}: cannot parse {stripped!r}")
        index, formula_text, just_text = int(m.group(1)), m.group(2), m.group(3)
        if index != expected:
            raise DerivationFormatError(
                f"line {lineno}: step numbered {index}, expected {expected}"
            )
        expected += 1
        try:
            formula = parse_formula(formula_text)
        except ParseError as exc:
            raise DerivationFormatError(f"line {lineno}: {exc}") from None
        d.add(formula, _parse_justification(just_text, lineno))
    return d


def _parse_justification(text: str, lineno: int) -> Justification:
    text = text.strip()
    if text == "premise":
        return Premise()
    if text == "luk":
        return Luk()
    m = _MP_RE.match(text)
    if m:
        return ModusPonens(int(m.group(1)), int(m.group(2)))
    m = _NEC_RE.match(text)
    if m:
        try:
            prog = parse_program(m.group(2))
        except ParseError as exc:
            raise DerivationFormatError(f"line {lineno}: {exc}") from None
        return Necessitation(int(m.group(1)), prog)
    m = _AX_RE.match(text)
    if m:
        inner = m.group(1)
        head, _, rest = inner.partition(";")
        fsub, psub = _parse_bindings(rest)
        return AxiomRef(head.strip(), fsub, psub)
    m = _SUB_RE.match(text)
    if m:
        fsub, psub = _parse_bindings(m.group(2) or "")
        if psub:
            raise DerivationFormatError(f"line {lineno}: sub only substitutes formulas")
        return Substitution(int(m.group(1)), fsub)
    raise DerivationFormatError(f"line {lineno}: unknown justification {text!r}")


def format_derivation(d: Derivation) -> str:
    out = []
    for i, line in enumerate(d.lines, start=1):
        out.append(f"{i}. {format_formula(line.formula)} ; {_format_justification(line.justification)}")
    return "\n".join(out) + "\n"


def _format_justification(j: Justification) -> str:
    if isinstance(j, Premise):
        return "premise"
    if isinstance(j, Luk):
        return "luk"
    if isinstance(j, ModusPonens):
        return f"mp({j.minor}, {j.major})"
    if isinstance(j, Necessitation):
        return f"nec({j.source}, [{format_program(j.prog)}])"
    if isinstance(j, AxiomRef):
        bits = [j.axiom_id]
        bits += [f"{k} := {format_formula(v)}" for k, v in sorted(j.fsub.items())]
        bits += [f"{k} := {format_program(v)}" for k, v in sorted(j.psub.items())]
        return f"axiom({'; '.join(bits)})"
    if isinstance(j, Substitution):
        bits = [str(j.source)]
        tail = "; ".join(f"{k} := {format_formula(v)}" for k, v in sorted(j.fsub.items()))
        return f"sub({bits[0]}; {tail})" if tail else f"sub({bits[0]})"
    raise TypeError(f"unknown justification {j!r}")
