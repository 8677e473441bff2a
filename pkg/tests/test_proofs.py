"""Axiom instantiation, line checking, the loop-invariance derivation."""

import random

import pytest

from mvpdl.kripke import random_model
from mvpdl.parser import parse_formula, parse_program
from mvpdl.proofs import (
    AxiomRef,
    Derivation,
    DerivationFormatError,
    IncompleteSubstitution,
    Luk,
    ModusPonens,
    Necessitation,
    Premise,
    Substitution,
    abstract_boxes,
    axiom_ids,
    check_derivation,
    check_line,
    derive_loop_invariance,
    derive_loop_invariance_plain,
    format_derivation,
    instantiate_axiom,
    is_modal_luk_tautology,
    parse_derivation,
    proves,
)
from mvpdl.syntax import (
    Atomic,
    Box,
    Implies,
    Not,
    Seq,
    Star,
    Var,
    iff,
    land,
    lor,
    power,
    substitute,
)
from mvpdl.tautologies import random_formula, random_program

P, Q = Var("p"), Var("q")
A = Atomic("a")


def test_axiom_test_schema_instantiation():
    # [q?]p with q := r, p := s at n = 2
    got = instantiate_axiom("test", 2, fsub={"q": Var("r"), "p": Var("s")})
    from mvpdl.syntax import Test

    expected = iff(
        Box(Test(Var("r")), Var("s")),
        lor(Not(power(Var("r"), 2)), Var("s")),
    )
    assert got == expected


def test_axiom_induction_instantiation():
    got = instantiate_axiom("ind", 2, fsub={"p": P}, psub={"a": A})
    expected = Implies(
        land(P, Box(Star(A), power(Implies(P, Box(A, P)), 2))),
        Box(Star(A), P),
    )
    assert got == expected


def test_axiom_seq_instantiation_with_compound_program():
    prog = parse_program("a;b")
    got = instantiate_axiom("seq", 1, fsub={"p": P}, psub={"a": prog, "b": Atomic("c")})
    assert got == iff(
        Box(Seq(prog, Atomic("c")), P), Box(prog, Box(Atomic("c"), P))
    )


def test_incomplete_substitution_is_an_error():
    with pytest.raises(IncompleteSubstitution):
        instantiate_axiom("K", 2, fsub={"p": P})
    with pytest.raises(IncompleteSubstitution):
        instantiate_axiom("union", 2, fsub={"p": P}, psub={"a": A})
    with pytest.raises(ValueError):
        instantiate_axiom("nope", 2)


def test_axiom_instances_are_valid_in_random_models():
    rng = random.Random(64)
    for n in (1, 2):
        models = [
            random_model(seed=40 + j, n=n, world_count=1 + j % 3, var_names=("p", "q", "r"))
            for j in range(12)
        ]
        for axiom_id in axiom_ids():
            for _ in range(4):
                f = instantiate_axiom(
                    axiom_id,
                    n,
                    fsub={"p": random_formula(rng, 1), "q": random_formula(rng, 1)},
                    psub={"a": random_program(rng, 1), "b": random_program(rng, 1)},
                )
                for m in models:
                    assert m.globally_true(f), (axiom_id, n)


def test_modal_abstraction():
    f = Implies(Box(A, P), Box(A, P))
    g = abstract_boxes(f)
    assert type(g) is Implies and g.lhs == g.rhs  # same box, same variable
    assert is_modal_luk_tautology(f, 2)
    assert not is_modal_luk_tautology(Implies(Box(A, P), P), 2)
    assert not is_modal_luk_tautology(parse_formula("p | ~p"), 2)
    assert is_modal_luk_tautology(parse_formula("p | ~p"), 1)


def test_check_line_modus_ponens():
    d = Derivation(n=2)
    l1 = d.add(P, Premise())
    l2 = d.add(Implies(P, Q), Premise())
    l3 = d.add(Q, ModusPonens(l1, l2))
    assert check_line(d, l3) is None
    # citing a non-implication as the major premise
    d2 = Derivation(n=2)
    a = d2.add(P, Premise())
    b = d2.add(Q, Premise())
    c = d2.add(Q, ModusPonens(a, b))
    assert "major premise shape" in check_line(d2, c)


def test_check_line_necessitation():
    d = Derivation(n=1)
    l1 = d.add(P, Premise())
    l2 = d.add(Box(Star(A), P), Necessitation(l1, Star(A)))
    assert check_line(d, l2) is None
    d.add(Box(A, Q), Necessitation(l1, A))
    assert "necessitation" in check_line(d, 3)


def test_check_line_substitution():
    d = Derivation(n=2)
    l1 = d.add(Implies(P, P), Premise())
    l2 = d.add(Implies(Box(A, Q), Box(A, Q)), Substitution(l1, {"p": Box(A, Q)}))
    assert check_line(d, l2) is None


def test_forward_and_missing_references():
    d = Derivation(n=1)
    d.add(Q, ModusPonens(2, 3))
    assert "forward" in check_derivation(d)[1] or "missing" in check_derivation(d)[1]


def test_empty_derivation_checks_vacuously():
    assert check_derivation(Derivation(n=2)) is None


def test_axiom_line_must_match_instantiation():
    d = Derivation(n=2)
    d.add(P, AxiomRef("K", fsub={"p": P, "q": Q}, psub={"a": A}))
    assert "mismatch" in check_line(d, 1)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_loop_invariance_derivation_checks(n):
    d = derive_loop_invariance(P, A, n)
    assert check_derivation(d) is None
    assert d.conclusion == Implies(P, Box(Star(A), P))
    assert d.premises == [power(Implies(P, Box(A, P)), n)]


def test_loop_invariance_with_compound_parts():
    phi = parse_formula("p (+) q")
    alpha = parse_program("a;b + c*")
    for n in (1, 2):
        d = derive_loop_invariance(phi, alpha, n)
        assert check_derivation(d) is None


def test_loop_invariance_degenerates_classically():
    d = derive_loop_invariance(P, A, 1)
    assert d.premises == [Implies(P, Box(A, P))]  # power 1 is the bare premise


def test_loop_invariance_conclusion_transfers_semantically():
    rng = random.Random(2024)
    hits = 0
    for trial in range(200):
        n = rng.choice((1, 2))
        m = random_model(seed=880 + trial, n=n, world_count=rng.randrange(1, 4), var_names=("p", "q", "r"))
        phi = random_formula(rng, rng.randrange(2))
        d = derive_loop_invariance(phi, A, n)
        if m.globally_true(d.premises[0]):
            hits += 1
            assert m.globally_true(d.conclusion)
    assert hits > 15


def test_loop_invariance_plain_variant():
    d = derive_loop_invariance_plain(P, A, 2)
    assert check_derivation(d) is None
    assert len(d.premises) == 2
    assert d.conclusion == Implies(P, Box(Star(A), P))


def test_theoremhood_requires_no_premises():
    d = derive_loop_invariance(P, A, 2)
    assert not proves(d, d.conclusion)
    d2 = Derivation(n=2)
    d2.add(Implies(P, P), Luk())
    assert proves(d2, Implies(P, P))


def test_derivation_file_round_trip():
    d = derive_loop_invariance(parse_formula("p (.) q"), parse_program("a + b"), 2)
    text = format_derivation(d)
    again = parse_derivation(text, 2)
    assert [ln.formula for ln in again.lines] == [ln.formula for ln in d.lines]
    assert check_derivation(again) is None
    assert format_derivation(again) == text


def test_derivation_file_errors():
    with pytest.raises(DerivationFormatError, match="numbered"):
        parse_derivation("2. p ; premise\n", 1)
    with pytest.raises(DerivationFormatError):
        parse_derivation("1. p q ; premise\n", 1)
    with pytest.raises(DerivationFormatError):
        parse_derivation("1. p ; because\n", 1)
    with pytest.raises(DerivationFormatError, match="formulas"):
        parse_derivation("1. p ; sub(1; a := b)\n", 1)


def test_threshold_box_interchange_semantically():
    # [a]tau_i(p) <-> tau_i([a]p): the alternative reading of the
    # doubling axioms, confirmed on random models per resolution
    from mvpdl.luk import synth_tau

    for n in (1, 2, 3):
        models = [
            random_model(seed=430 + 10 * n + j, n=n, world_count=1 + j % 3, var_names=("p", "q"))
            for j in range(30)
        ]
        for i in range(1, n + 1):
            tau = synth_tau(i, n)
            f = iff(
                Box(A, substitute(tau, {"p": P})),
                substitute(tau, {"p": Box(A, P)}),
            )
            for m in models:
                assert m.globally_true(f), (i, n)


def test_checked_theorems_are_valid_in_random_models():
    # soundness sampling over derivations assembled from axioms and rules
    rng = random.Random(505)
    for n in (1, 2, 3):
        d = Derivation(n=n)
        k_line = d.add(
            instantiate_axiom("K", n, fsub={"p": P, "q": Q}, psub={"a": A}),
            AxiomRef("K", fsub={"p": P, "q": Q}, psub={"a": A}),
        )
        d.add(Box(Star(A), d.lines[k_line - 1].formula), Necessitation(k_line, Star(A)))
        sub = {"p": random_formula(rng, 1), "q": random_formula(rng, 1)}
        d.add(substitute(d.lines[1].formula, sub), Substitution(2, sub))
        assert check_derivation(d) is None
        models = [
            random_model(seed=660 + 10 * n + j, n=n, world_count=1 + j % 3, var_names=("p", "q", "r"))
            for j in range(200)
        ]
        for line in d.lines:
            for m in models:
                assert m.globally_true(line.formula)
