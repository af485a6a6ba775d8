"""Coalgebra automata with parity acceptance.

An automaton reads a colored model: from a pair (model state s, automaton
state a) the existential player picks a transition element φ ∈ Δ(a, c) for
the current color c, then a relation Z between model states and automaton
states witnessing that the lifting of Z relates σ(s) to φ; the universal
player answers with a pair from Z.  Priorities are announced at the paired
positions and the maximal priority seen infinitely often decides the play.
Restricting the existential player to ⊆-minimal witness relations loses no
generality and keeps the game finite.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .coalgebra import ColoredModel, PointedModel, canonical_models
from .functors import (
    FunctorDescriptor,
    base,
    canon_key,
    enumerate_t,
    functor_tag,
    lift_member,
    minimal_witnesses,
    parse_functor,
    parse_telem,
    render_telem,
    t_map,
)
from .games import Arena, ParitySolution, solve_parity
from .parsing import Cursor


@dataclass(frozen=True)
class Automaton:
    """A coalgebra automaton.

    ``omega`` lists parity priorities aligned with ``states``; ``delta`` is a
    canonically sorted tuple of ``((state, color), elements)`` cells, where a
    color is the frozenset of propositions read and each element lives in
    ``T(states)``.  Missing cells denote empty transition sets.
    """

    functor: FunctorDescriptor
    props: tuple
    states: tuple
    initial: object
    omega: tuple
    delta: tuple

    def __post_init__(self):
        if len(set(self.states)) != len(self.states):
            raise ValueError("duplicate automaton states")
        if self.initial not in self.states:
            raise ValueError("initial state not among the states")
        if len(self.omega) != len(self.states):
            raise ValueError("omega must align with states")
        if any(not isinstance(k, int) or k < 0 for k in self.omega):
            raise ValueError("priorities must be nonnegative integers")
        if list(self.props) != sorted(set(self.props)):
            raise ValueError("props must be sorted and duplicate-free")
        state_set = frozenset(self.states)
        pset = frozenset(self.props)
        seen = set()
        for (a, c), elems in self.delta:
            if a not in state_set:
                raise ValueError(f"transition cell for unknown state {a!r}")
            if not isinstance(c, frozenset) or not c <= pset:
                raise ValueError(f"cell color {c!r} not a subset of the propositions")
            if (a, c) in seen:
                raise ValueError(f"duplicate cell for {(a, c)!r}")
            seen.add((a, c))
            for t in elems:
                if not base(self.functor, t) <= state_set:
                    raise ValueError("transition element leaves the state set")
        object.__setattr__(self, "_delta", dict(self.delta))
        object.__setattr__(
            self, "_omega", {s: k for s, k in zip(self.states, self.omega)}
        )

    @staticmethod
    def make(functor, props, states, initial, omega: dict, delta: dict) -> "Automaton":
        """Build an automaton from dicts, normalizing the cell layout."""
        props = tuple(sorted(set(props)))
        states = tuple(states)
        cells = []
        for (a, c), elems in delta.items():
            elems = tuple(sorted(set(elems), key=canon_key))
            if elems:
                cells.append(((a, frozenset(c)), elems))
        cells.sort(key=lambda cell: (canon_key(cell[0][0]), canon_key(cell[0][1])))
        return Automaton(
            functor,
            props,
            states,
            initial,
            tuple(omega[a] for a in states),
            tuple(cells),
        )

    def delta_of(self, a, c) -> tuple:
        return self._delta.get((a, frozenset(c)), ())

    def omega_of(self, a) -> int:
        return self._omega[a]

    def color_of(self, gamma) -> frozenset:
        """The cell color read from a model state's color set."""
        return frozenset(gamma) & frozenset(self.props)


# --------------------------------------------------------------------------
# Acceptance games


def build_arena(aut: Automaton, M: ColoredModel, pairs=None) -> Arena:
    """The acceptance game arena restricted to positions reachable from
    ``pairs`` (default: every model-state/automaton-state pair).

    Positions: ('state', s, a) owned by E with priority Ω(a); ('elem', τ, φ)
    owned by E where E picks a minimal witness; ('rel', Z) owned by A who
    picks a pair of Z.
    """
    if aut.functor != M.functor:
        raise ValueError("automaton and model live over different functors")
    F = aut.functor
    if pairs is None:
        pairs = [(s, a) for s in M.states for a in aut.states]
    starts = [("state", s, a) for s, a in pairs]
    index = {}
    positions = []
    owner = []
    priority = []
    moves = []

    def intern(pos):
        i = index.get(pos)
        if i is None:
            i = index[pos] = len(positions)
            positions.append(pos)
            if pos[0] == "state":
                owner.append("E")
                priority.append(aut.omega_of(pos[2]))
            elif pos[0] == "elem":
                owner.append("E")
                priority.append(0)
            else:
                owner.append("A")
                priority.append(0)
            moves.append(None)
            todo.append(pos)
        return i

    todo = []
    for pos in starts:
        intern(pos)
    k = 0
    while k < len(todo):
        pos = todo[k]
        k += 1
        i = index[pos]
        if pos[0] == "state":
            _, s, a = pos
            c = aut.color_of(M.gamma_of(s))
            succ = [intern(("elem", M.sigma_of(s), phi)) for phi in aut.delta_of(a, c)]
        elif pos[0] == "elem":
            _, tau, phi = pos
            succ = [
                intern(("rel", Z.pairs)) for Z in minimal_witnesses(F, tau, phi)
            ]
        else:
            succ = [
                intern(("state", t, b))
                for t, b in sorted(pos[1], key=canon_key)
            ]
        moves[i] = tuple(succ)
    return Arena(tuple(positions), tuple(owner), tuple(priority), tuple(moves))


def acceptance_game(aut: Automaton, M: ColoredModel, pairs=None):
    """Build and solve the acceptance game; returns (arena, solution)."""
    arena = build_arena(aut, M, pairs)
    return arena, solve_parity(arena)


def winning_pairs(aut: Automaton, M: ColoredModel) -> frozenset:
    """All pairs (model state, automaton state) won by the existential player."""
    arena, sol = acceptance_game(aut, M)
    return frozenset(
        (pos[1], pos[2])
        for i, pos in enumerate(arena.positions)
        if pos[0] == "state" and i in sol.win_e
    )


def accepts(aut: Automaton, P: PointedModel) -> bool:
    """Whether the automaton accepts the pointed model."""
    arena, sol = acceptance_game(aut, P.model, pairs=[(P.point, aut.initial)])
    return arena.index(("state", P.point, aut.initial)) in sol.win_e


# --------------------------------------------------------------------------
# True state, satisfiability, normalization


def _fresh_state(aut: Automaton, stem: str):
    if stem not in aut.states:
        return stem
    i = 1
    while f"{stem}_{i}" in aut.states:
        i += 1
    return f"{stem}_{i}"


def _colors(props):
    import itertools

    props = tuple(sorted(props))
    for r in range(len(props) + 1):
        yield from (frozenset(c) for c in itertools.combinations(props, r))


def add_true_state(aut: Automaton):
    """Adjoin a state accepting everything; returns (automaton, state).

    The new state has even priority and, for every color, all of
    ``T({state})`` as transition elements, so the existential player can
    always continue and every continuation wins.
    """
    tt = _fresh_state(aut, "att")
    delta = dict(aut.delta)
    elems = enumerate_t(aut.functor, frozenset((tt,)))
    for c in _colors(aut.props):
        delta[(tt, c)] = elems
    omega = dict(zip(aut.states, aut.omega))
    omega[tt] = 0
    return (
        Automaton.make(
            aut.functor,
            aut.props,
            aut.states + (tt,),
            aut.initial,
            omega,
            delta,
        ),
        tt,
    )


def find_true_state(aut: Automaton):
    """A state that accepts everything by construction, if one exists."""
    for a, k in zip(aut.states, aut.omega):
        if k % 2 != 0:
            continue
        want = set(enumerate_t(aut.functor, frozenset((a,))))
        if all(set(aut.delta_of(a, c)) == want for c in _colors(aut.props)):
            return a
    return None


@lru_cache(maxsize=64)
def satisfiability_context(aut: Automaton, bound: int) -> tuple:
    """Winning pairs of the acceptance game on every canonical model with at
    most ``bound`` states over the automaton's vocabulary.

    Cached: normalization and witness construction revisit the same
    automaton repeatedly, and the model sweep dominates their cost.
    """
    out = []
    for n in range(1, bound + 1):
        for M in canonical_models(aut.functor, aut.props, n):
            out.append((M, winning_pairs(aut, M)))
    return tuple(out)


def element_satisfiable(aut: Automaton, phi, bound: int = 3, context=None):
    """A model realization of a transition element, if one exists.

    Returns ``(M, τ, Z)`` with ``M`` a model of at most ``bound`` states,
    ``τ ∈ T(M.states)``, and ``Z`` a minimal witness for ``(τ, φ)`` inside
    the winning pairs of the acceptance game on ``M`` — or ``None``.
    """
    F = aut.functor
    ctx = satisfiability_context(aut, bound) if context is None else context
    for M, W in ctx:
        for tau in enumerate_t(F, M.state_set):
            if lift_member(F, W, tau, phi):
                Z = next(
                    z for z in minimal_witnesses(F, tau, phi) if z.pairs <= W
                )
                return (M, tau, Z)
    return None


def prune_unsatisfiable(aut: Automaton, bound: int = 3) -> Automaton:
    """Drop transition elements with no bounded model realization.

    One pass suffices: a realization's winning strategies only ever use
    elements that are themselves realized over the same model, so pruning
    cannot invalidate surviving elements.
    """
    ctx = satisfiability_context(aut, bound)
    memo = {}

    def keep(phi):
        if phi not in memo:
            memo[phi] = element_satisfiable(aut, phi, bound, context=ctx) is not None
        return memo[phi]

    delta = {}
    for (a, c), elems in aut.delta:
        kept = tuple(phi for phi in elems if keep(phi))
        if kept:
            delta[(a, c)] = kept
    return Automaton.make(
        aut.functor,
        aut.props,
        aut.states,
        aut.initial,
        dict(zip(aut.states, aut.omega)),
        delta,
    )


@lru_cache(maxsize=256)
def normalize(aut: Automaton, bound: int = 3) -> Automaton:
    """Adjoin a universally accepting state (unless one exists already),
    then prune unrealizable elements.  Idempotent."""
    if find_true_state(aut) is None:
        aut, _ = add_true_state(aut)
    return prune_unsatisfiable(aut, bound)


@dataclass(frozen=True)
class WitnessCoalgebra:
    """Bundled model realizations for every transition element of an automaton.

    ``model`` is a coproduct of per-element witness models; ``winning`` pairs
    (model state, automaton state) are won by the existential player; each
    transition element φ is realized by ``tau_of[φ]`` with a witness relation
    inside ``winning``.
    """

    model: ColoredModel
    winning: frozenset
    tau_of: dict


@lru_cache(maxsize=64)
def witness_coalgebra(aut: Automaton, bound: int = 3) -> WitnessCoalgebra:
    """Realize every transition element of a totally satisfiable automaton.

    Raises ValueError if some element has no model of at most ``bound``
    states (run :func:`prune_unsatisfiable` first).
    """
    from .coalgebra import coproduct as model_coproduct

    ctx = satisfiability_context(aut, bound)
    phis = []
    seen = set()
    for (a, c), elems in aut.delta:
        for phi in elems:
            if phi not in seen:
                seen.add(phi)
                phis.append(phi)
    realizations = {}
    used = []
    for phi in phis:
        got = element_satisfiable(aut, phi, bound, context=ctx)
        if got is None:
            raise ValueError("automaton has an unrealizable transition element")
        M, tau, Z = got
        if M not in used:
            used.append(M)
        realizations[phi] = (M, tau, Z)
    if not used:
        M0 = canonical_models(aut.functor, aut.props, 1)[0]
        used.append(M0)
    big, injections = model_coproduct(used)
    inj_of = {id(M): injections[i] for i, M in enumerate(used)}
    tau_of = {}
    winning = set()
    for phi, (M, tau, Z) in realizations.items():
        inj = inj_of[id(M)]
        tau_of[phi] = t_map(aut.functor, inj, tau)
        winning |= {(inj[t], b) for t, b in Z.pairs}
    # the injected pairs must stay winning in the coproduct — acceptance is
    # invariant under the injections, which are embeddings
    W = winning_pairs(aut, big)
    if not winning <= W:
        raise AssertionError("witness pairs lost by the coproduct embedding")
    return WitnessCoalgebra(big, frozenset(W), tau_of)


# --------------------------------------------------------------------------
# Text format


def _ident_set(cur: Cursor) -> frozenset:
    cur.expect("{")
    items = []
    if not cur.take("}"):
        while True:
            items.append(cur.ident("name"))
            if cur.take("}"):
                break
            cur.expect(",")
    return frozenset(items)


def render_automaton(aut: Automaton) -> str:
    """Serialize with canonically renamed states a0, a1, …"""
    ren = {a: f"a{i}" for i, a in enumerate(aut.states)}
    lines = [
        f"functor {functor_tag(aut.functor)};",
        "props {" + ", ".join(aut.props) + "};",
        f"initial {ren[aut.initial]};",
    ]
    for a, k in zip(aut.states, aut.omega):
        lines.append(f"state {ren[a]} priority {k};")
    cells = []
    for (a, c), elems in aut.delta:
        texts = sorted(
            render_telem(aut.functor, t_map(aut.functor, ren, phi)) for phi in elems
        )
        cells.append(
            (
                ren[a],
                "{" + ", ".join(sorted(c)) + "}",
                "[" + ", ".join(texts) + "]",
            )
        )
    cells.sort()
    lines.extend(f"delta {a} {c} : {es};" for a, c, es in cells)
    return "\n".join(lines) + "\n"


def parse_automaton(text: str) -> Automaton:
    cur = Cursor(text)
    cur.expect_word("functor")
    F = parse_functor(cur)
    cur.expect(";")
    cur.expect_word("props")
    props = _ident_set(cur)
    cur.expect(";")
    cur.expect_word("initial")
    initial = cur.ident("state name")
    cur.expect(";")
    states = []
    omega = {}
    delta = {}
    while not cur.at_end():
        if cur.take_word("state"):
            name = cur.ident("state name")
            if name in omega:
                cur.error(f"duplicate state {name!r}")
            cur.expect_word("priority")
            k = cur.int_lit()
            cur.expect(";")
            states.append(name)
            omega[name] = k
        elif cur.take_word("delta"):
            a = cur.ident("state name")
            c = _ident_set(cur)
            cur.expect(":")
            cur.expect("[")
            elems = []
            if not cur.take("]"):
                while True:
                    elems.append(parse_telem(cur, F, lambda cc: cc.ident("state name")))
                    if cur.take("]"):
                        break
                    cur.expect(",")
            cur.expect(";")
            if (a, frozenset(c)) in delta:
                cur.error(f"duplicate cell for state {a!r}")
            delta[(a, frozenset(c))] = elems
        else:
            cur.error("expected 'state' or 'delta'")
    try:
        return Automaton.make(F, props, tuple(states), initial, omega, delta)
    except ValueError as exc:
        cur.error(str(exc))
