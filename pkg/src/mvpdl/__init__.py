"""Toolkit for finitely-valued propositional dynamic logic.

Parse formulas and regular programs, evaluate them in (n+1)-valued Kripke
models, decide satisfiability and validity at desk scale, check
Hilbert-style derivations, and build question-answer game models.
"""

from .luk import (
    ResolutionMismatch,
    TruthValue,
    eval_prop,
    is_tautology_prop,
    mv_equation_failures,
    prop_counterexample,
    synth_indicator,
    synth_tau,
)
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
    ZERO,
    ONE,
    diamond,
    fl_closure,
    iff,
    land,
    lor,
    odot,
    oplus,
    power,
    substitute,
    times,
)
from .parser import ParseError, format_formula, format_program, parse_formula, parse_program
from .kripke import KripkeModel, ModelError, disjoint_union, format_model, parse_model, random_model
from .filtration import FiltrationResult, characteristic_formula, equivalence_classes, filter_model
from .sat import (
    BudgetExceeded,
    SatResult,
    Satisfiable,
    Unsatisfiable,
    decide_sat,
    decide_valid,
    enumerate_oracle,
    is_validity_verdict,
)
from .proofs import (
    Derivation,
    check_derivation,
    check_line,
    derive_loop_invariance,
    format_derivation,
    instantiate_axiom,
    parse_derivation,
)
from .ulam import GameConfig, KnowledgeState, build_game_model, check_spec, update_state

__version__ = "0.1.0"
