"""Coalgebraic fixpoint logic with the Moss modality over finitary set functors."""

from .functors import (
    DEFAULT_CAP,
    IDENTITY,
    MONOTONE,
    POWERSET,
    CapExceeded,
    FunctorDescriptor,
    Relation,
    base,
    canon_key,
    compose,
    constant,
    coproduct,
    enumerate_t,
    functor_tag,
    lift_member,
    minimal_witnesses,
    parse_functor,
    parse_telem,
    product,
    random_telem,
    render_telem,
    t_map,
)
from .laxcheck import CheckReport, check_lax_axioms, check_support_restriction
from .coalgebra import (
    ColoredModel,
    PointedModel,
    canonical_models,
    canonical_pointed_models,
    greatest_bisimulation,
    is_bisimulation,
    is_morphism,
    parse_model,
    project_model,
    random_model,
    render_model,
    up_to_p_bisimilar,
)
from .coalgebra import coproduct as model_coproduct
from .logic import (
    BOT,
    TOP,
    Atom,
    Formula,
    Mu,
    Nabla,
    Neg,
    Or,
    eval_formula,
    free_props,
    guard,
    is_guarded,
    mk_and,
    mk_atom,
    mk_mu,
    mk_nabla,
    mk_neg,
    mk_nu,
    mk_or,
    parse_formula,
    render_formula,
    satisfies,
    subformulas,
    subst,
    validate_monotone,
)
from .games import Arena, ParitySolution, Strategy, solve_parity
from .automata import (
    Automaton,
    WitnessCoalgebra,
    acceptance_game,
    accepts,
    add_true_state,
    build_arena,
    element_satisfiable,
    find_true_state,
    normalize,
    parse_automaton,
    prune_unsatisfiable,
    render_automaton,
    satisfiability_context,
    winning_pairs,
    witness_coalgebra,
)
from .translation import (
    UnsupportedFragment,
    automaton_to_formula,
    formula_to_automaton,
    nnf_to_formula,
    to_nnf,
)
from .projection import construct_projection_witness, project_automaton, qf_middle
from .interpolation import entails_bounded, exists_p, uniform_interpolant
from .parsing import ParseError

__all__ = [
    "BOT",
    "DEFAULT_CAP",
    "IDENTITY",
    "MONOTONE",
    "POWERSET",
    "TOP",
    "Arena",
    "Atom",
    "Automaton",
    "CapExceeded",
    "CheckReport",
    "ColoredModel",
    "Formula",
    "FunctorDescriptor",
    "Mu",
    "Nabla",
    "Neg",
    "Or",
    "ParitySolution",
    "ParseError",
    "PointedModel",
    "Relation",
    "Strategy",
    "UnsupportedFragment",
    "WitnessCoalgebra",
    "acceptance_game",
    "accepts",
    "add_true_state",
    "automaton_to_formula",
    "build_arena",
    "construct_projection_witness",
    "element_satisfiable",
    "entails_bounded",
    "exists_p",
    "find_true_state",
    "formula_to_automaton",
    "nnf_to_formula",
    "normalize",
    "parse_automaton",
    "project_automaton",
    "prune_unsatisfiable",
    "qf_middle",
    "render_automaton",
    "satisfiability_context",
    "solve_parity",
    "to_nnf",
    "uniform_interpolant",
    "winning_pairs",
    "witness_coalgebra",
    "base",
    "canon_key",
    "canonical_models",
    "canonical_pointed_models",
    "check_lax_axioms",
    "check_support_restriction",
    "compose",
    "constant",
    "coproduct",
    "enumerate_t",
    "eval_formula",
    "free_props",
    "functor_tag",
    "greatest_bisimulation",
    "guard",
    "is_bisimulation",
    "is_guarded",
    "is_morphism",
    "lift_member",
    "minimal_witnesses",
    "mk_and",
    "mk_atom",
    "mk_mu",
    "mk_nabla",
    "mk_neg",
    "mk_nu",
    "mk_or",
    "model_coproduct",
    "parse_formula",
    "parse_functor",
    "parse_model",
    "parse_telem",
    "product",
    "project_model",
    "random_model",
    "random_telem",
    "render_formula",
    "render_model",
    "render_telem",
    "satisfies",
    "subformulas",
    "subst",
    "t_map",
    "up_to_p_bisimilar",
    "validate_monotone",
]
