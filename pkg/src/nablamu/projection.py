"""Existential projection of automata along a proposition.

``project_automaton`` hides a proposition p: after normalization (adjoining
a universally accepting state and discarding unrealizable transition
elements), the two cells a state has for colors c and c ∪ {p} are merged —
the automaton may now *guess* p at every step.

``construct_projection_witness`` justifies the guesses: from a model the
projected automaton accepts, it constructs a model over the full vocabulary
that the original automaton accepts and that is bisimilar to the input up to
p.  The successor structure of the witness is produced by ``qf_middle``,
which realizes the quasi-functorial factorization property of the lifting:
any pair in the lifting of a composite R;S factors through a middle element
related to both sides.
"""

from __future__ import annotations

from .automata import (
    Automaton,
    acceptance_game,
    accepts,
    find_true_state,
    normalize,
    witness_coalgebra,
)
from .coalgebra import ColoredModel, PointedModel, up_to_p_bisimilar
from .functors import (
    FunctorDescriptor,
    _antichain_min,
    _lift_member,
    _pairset,
    canon_key,
    lift_member,
    t_map,
)


class _FnPairs:
    """A pair container whose membership test is a function call."""

    __slots__ = ("fn",)

    def __init__(self, fn):
        self.fn = fn

    def __contains__(self, pair):
        x, y = pair
        return self.fn(x, y)


def qf_middle(
    F: FunctorDescriptor, R1, R2, tau, rho, dom_witness=None, rng_witness=None
):
    """A middle element for a lifted composite.

    Given ``(tau, rho)`` in the lifting of ``R1 ; R2``, returns ``m`` with
    ``(tau, m)`` in the lifting of ``R1`` and ``(m, rho)`` in the lifting of
    ``R2``.  Lax layers (the monotone lifting) additionally need a
    ``dom_witness`` — an element related to ``tau`` under ``R1`` — and an
    ``rng_witness`` — one related to ``rho`` under ``R2`` — to anchor the
    construction; functorial layers ignore them.
    """
    pairs1 = _pairset(R1)
    pairs2 = _pairset(R2)
    succ2: dict = {}
    for u, y in pairs2:
        succ2.setdefault(u, []).append(y)
    med_map: dict = {}
    for x, u in pairs1:
        for y in succ2.get(u, ()):
            cur = med_map.get((x, y))
            if cur is None or canon_key(u) < canon_key(cur):
                med_map[(x, y)] = u

    def rel1(x, u):
        return (x, u) in pairs1

    def rel2(u, y):
        return (u, y) in pairs2

    def med(x, y):
        return med_map.get((x, y))

    return _qf(F, tau, rho, rel1, rel2, med, dom_witness, rng_witness)


def _qf(F, tau, rho, rel1, rel2, med, dom_w, rng_w):
    kind = F.kind
    if kind == "const":
        if tau != rho:
            raise ValueError("constant payloads of a lifted pair must agree")
        return tau
    if kind == "identity":
        u = med(tau, rho)
        if u is None:
            raise ValueError("no mediator between the identity payloads")
        return u
    if kind == "powerset":
        out = set()
        for x in tau:
            for y in rho:
                u = med(x, y)
                if u is not None:
                    out.add(u)
        return frozenset(out)
    if kind == "monotone":
        return _qf_monotone(tau, rho, rel1, rel2, med, dom_w, rng_w)
    if kind == "product":
        left = _qf(
            F.parts[0], tau[0], rho[0], rel1, rel2, med,
            None if dom_w is None else dom_w[0],
            None if rng_w is None else rng_w[0],
        )
        right = _qf(
            F.parts[1], tau[1], rho[1], rel1, rel2, med,
            None if dom_w is None else dom_w[1],
            None if rng_w is None else rng_w[1],
        )
        return (left, right)
    if kind == "coproduct":
        if tau[0] != rho[0]:
            raise ValueError("mismatched coproduct tags in a lifted pair")
        part = F.parts[0 if tau[0] == "inl" else 1]
        inner = _qf(
            part, tau[1], rho[1], rel1, rel2, med,
            None if dom_w is None else dom_w[1],
            None if rng_w is None else rng_w[1],
        )
        return (tau[0], inner)
    # composite: mediate at the outer level, over elements of the inner layer
    outer, inner = F.parts

    def rel1_lifted(xe, ue):
        return _lift_member(inner, _FnPairs(rel1), xe, ue)

    def rel2_lifted(ue, ye):
        return _lift_member(inner, _FnPairs(rel2), ue, ye)

    def med_lifted(xe, ye):
        composable = _FnPairs(lambda x, y: med(x, y) is not None)
        if not _lift_member(inner, composable, xe, ye):
            return None
        return _qf(inner, xe, ye, rel1, rel2, med, None, None)

    return _qf(outer, tau, rho, rel1_lifted, rel2_lifted, med_lifted, dom_w, rng_w)


def _qf_monotone(tau, rho, rel1, rel2, med, dom_w, rng_w):
    """The constructive middle for the monotone neighborhood lifting.

    Builds one candidate generator per generator of ``tau`` (anchored in the
    domain witness) and per generator of ``rho`` (anchored in the range
    witness), then minimizes.
    """
    if dom_w is None or rng_w is None:
        raise ValueError(
            "the monotone lifting needs domain and range witnesses to mediate"
        )

    def srt(fam):
        return sorted(fam, key=canon_key)

    gens = []
    for A in srt(tau):
        B_A = next(
            (
                H
                for H in srt(rho)
                if all(any(med(x, y) is not None for x in A) for y in H)
            ),
            None,
        )
        U_A = next(
            (H for H in srt(dom_w) if all(any(rel1(x, u) for x in A) for u in H)),
            None,
        )
        if B_A is None or U_A is None:
            raise ValueError("monotone mediation lost a generator witness")
        mids = set()
        for y in srt(B_A):
            x_y = next(x for x in srt(A) if med(x, y) is not None)
            mids.add(med(x_y, y))
        gens.append(frozenset(U_A | mids))
    for B in srt(rho):
        A_B = next(
            (
                G
                for G in srt(tau)
                if all(any(med(x, y) is not None for y in B) for x in G)
            ),
            None,
        )
        V_B = next(
            (G for G in srt(rng_w) if all(any(rel2(u, y) for y in B) for u in G)),
            None,
        )
        if A_B is None or V_B is None:
            raise ValueError("monotone mediation lost a generator witness")
        mids = set()
        for x in srt(A_B):
            y_x = next(y for y in srt(B) if med(x, y) is not None)
            mids.add(med(x, y_x))
        gens.append(frozenset(V_B | mids))
    return _antichain_min(frozenset(gens))


# --------------------------------------------------------------------------
# Projection


def _delta_p_merge(aut: Automaton, p: str) -> Automaton:
    """Merge each pair of cells that differ only in ``p`` and drop ``p``."""
    props = tuple(q for q in aut.props if q != p)
    delta: dict = {}
    for (a, c), elems in aut.delta:
        key = (a, c - frozenset((p,)))
        delta.setdefault(key, set()).update(elems)
    return Automaton.make(
        aut.functor,
        props,
        aut.states,
        aut.initial,
        dict(zip(aut.states, aut.omega)),
        delta,
    )


def project_automaton(aut: Automaton, p: str, bound: int = 3) -> Automaton:
    """The automaton for ∃p: normalize, then let every step guess ``p``.

    Realizability is checked against models of at most ``bound`` states;
    the construction is exact for properties with models that small.
    """
    return _delta_p_merge(normalize(aut, bound), p)


def construct_projection_witness(
    aut: Automaton, P: PointedModel, p: str, bound: int = 3
) -> PointedModel:
    """Rebuild the hidden proposition behind an accepted projection.

    Given ``P`` accepted by ``project_automaton(aut, p, bound)``, returns a
    pointed model over the full vocabulary that ``aut`` (normalized) accepts
    and that is bisimilar to ``P`` up to ``p``.  Raises ValueError if the
    projection rejects ``P``; both claims about the result are re-verified
    and failures raise AssertionError.
    """
    F = aut.functor
    if F != P.functor:
        raise ValueError("automaton and model live over different functors")
    autn = normalize(aut, bound)
    att = find_true_state(autn)
    if att is None:
        raise AssertionError("normalization must leave a universally accepting state")
    E = _delta_p_merge(autn, p)
    M = P.model
    arena, sol = acceptance_game(E, M)
    if arena.index(("state", P.point, E.initial)) not in sol.win_e:
        raise ValueError("the projection automaton rejects this pointed model")
    wc = witness_coalgebra(autn, bound)
    win_pairs = {
        (pos[1], pos[2])
        for i, pos in enumerate(arena.positions)
        if pos[0] == "state" and i in sol.win_e
    }
    strat = sol.strategy_e
    eprops = frozenset(E.props)
    pset = frozenset((p,))
    w_pairs = frozenset((("w", q), b) for q, b in wc.winning)

    sigma: dict = {}
    gamma: dict = {}
    for s in M.states:
        for a in E.states:
            tok = ("m", s, a)
            if (s, a) not in win_pairs:
                sigma[tok] = t_map(F, lambda t: ("m", t, a), M.sigma_of(s))
                gamma[tok] = M.gamma_of(s) - pset
                continue
            i = arena.index(("state", s, a))
            j = strat[i]
            _, _, phi = arena.positions[j]
            Zpairs = arena.positions[strat[j]][1]
            covered = {t for t, _ in Zpairs}
            Zp = set(Zpairs) | {(t, att) for t in M.states if t not in covered}
            R1 = frozenset((t, ("m", t, b)) for t, b in Zp)
            R2 = frozenset((("m", t, b), b) for t, b in Zp) | w_pairs
            tau = M.sigma_of(s)
            choice: dict = {}
            for t, b in sorted(Zp, key=canon_key):
                choice.setdefault(t, ("m", t, b))
            dom_w = t_map(F, choice, tau)
            rng_w = t_map(F, lambda q: ("w", q), wc.tau_of[phi])
            mid = qf_middle(F, R1, R2, tau, phi, dom_w, rng_w)
            if not lift_member(F, R1, tau, mid) or not lift_member(F, R2, mid, phi):
                raise AssertionError(
                    "the quasi-functorial middle failed its defining property"
                )
            sigma[tok] = mid
            c = M.gamma_of(s) & eprops
            colors = M.gamma_of(s) - pset
            if phi in autn.delta_of(a, c | pset):
                colors = colors | pset
            gamma[tok] = colors
    for q in wc.model.states:
        tok = ("w", q)
        sigma[tok] = t_map(F, lambda r: ("w", r), wc.model.sigma_of(q))
        gamma[tok] = wc.model.gamma_of(q)

    props = sorted(set(autn.props) | set(M.props))
    big = ColoredModel.make(
        F, sigma, gamma, props=props, states=tuple(sorted(sigma, key=canon_key))
    )
    out = PointedModel(big, ("m", P.point, E.initial))
    if not up_to_p_bisimilar(P, out, p):
        raise AssertionError(
            "projection witness is distinguishable from the input apart from p"
        )
    if not accepts(autn, out):
        raise AssertionError("projection witness escaped the source automaton")
    return out
