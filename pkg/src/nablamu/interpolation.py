"""Uniform interpolants by existential projection of automata.

``exists_p`` computes a formula equivalent to "the input holds in some model
that differs only in the proposition p": translate to an automaton, project
the automaton along p, translate back.  ``uniform_interpolant`` folds this
over every proposition outside the vocabulary to keep, yielding the
strongest consequence of the input in that vocabulary.  Both inherit the
guarded-fragment restrictions of the automaton translation and the
realizability ``bound`` of the projection (exact for properties whose models
fit within the bound).

``entails_bounded`` is the desk-scale entailment check used to validate
interpolants: it sweeps all pointed models up to a size bound and returns a
countermodel when one exists.
"""

from __future__ import annotations

from .coalgebra import canonical_pointed_models
from .functors import POWERSET, FunctorDescriptor
from .logic import Formula, free_props, mk_and, mk_neg, satisfies
from .projection import project_automaton
from .translation import automaton_to_formula, formula_to_automaton


def _functor_for(f: Formula, functor=None) -> FunctorDescriptor:
    if functor is not None:
        return functor
    from .translation import _infer_functor

    try:
        return _infer_functor(f)
    except ValueError:
        return POWERSET


def exists_p(
    f: Formula, p: str, bound: int = 3, functor: FunctorDescriptor = None
) -> Formula:
    """A formula over the remaining vocabulary equivalent to ∃p. f.

    Modality-free formulas default to the powerset functor.  Raises
    UnsupportedFragment when ``f`` falls outside the translatable fragment.
    """
    F = _functor_for(f, functor)
    aut = formula_to_automaton(f, functor=F)
    return automaton_to_formula(project_automaton(aut, p, bound))


def uniform_interpolant(
    f: Formula, keep, bound: int = 3, functor: FunctorDescriptor = None
) -> Formula:
    """The strongest consequence of ``f`` using only the propositions in ``keep``."""
    F = _functor_for(f, functor)
    out = f
    for p in sorted(set(free_props(f)) - set(keep)):
        out = exists_p(out, p, bound, functor=F)
    return out


def entails_bounded(
    a: Formula,
    b: Formula,
    max_states: int = 3,
    functor: FunctorDescriptor = None,
):
    """Whether ``a`` entails ``b`` on all pointed models of at most ``max_states``.

    Returns ``(True, None)`` or ``(False, countermodel)``.
    """
    F = _functor_for(mk_and(a, b), functor)
    props = sorted(set(free_props(a)) | set(free_props(b)))
    witness = mk_and(a, mk_neg(b))
    for pm in canonical_pointed_models(F, tuple(props), max_states):
        if satisfies(pm, witness):
            return False, pm
    return True, None
