"""Translation between fixpoint formulas and coalgebra automata.

Formulas are first brought into negation normal form (NNF) over a dedicated
AST with structural sharing through frozensets.  A guarded NNF formula
induces a hierarchical equation system — one variable per fixpoint
subformula, priorities by alternation depth — whose one-step unfoldings give
the transition structure of an equivalent automaton.  The converse direction
reads an automaton as an equation system and eliminates variables by
Gaussian substitution.

Conjunctions of modal obligations only distribute over the Moss modality for
the powerset lifting, and negated modalities only have a positive rewriting
there; inputs outside the supported fragment raise
:class:`UnsupportedFragment`.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

from . import logic
from .automata import Automaton
from .functors import FunctorDescriptor, base, canon_key, enumerate_t, t_map
from .logic import (
    Atom,
    Formula,
    Mu,
    Nabla,
    Neg,
    Or,
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
    render_formula,
    subformulas,
    subst,
    validate_monotone,
)


class UnsupportedFragment(Exception):
    """The construction needs an identity this lifting does not provide."""


# --------------------------------------------------------------------------
# Negation normal form


@dataclass(frozen=True)
class NLit:
    prop: str
    pos: bool

    def canon_key(self):
        return ("lit", self.prop, self.pos)


@dataclass(frozen=True)
class NVar:
    var: str

    def canon_key(self):
        return ("var", self.var)


@dataclass(frozen=True)
class NAnd:
    parts: frozenset

    def canon_key(self):
        return ("and", canon_key(self.parts))


@dataclass(frozen=True)
class NOr:
    parts: frozenset

    def canon_key(self):
        return ("or", canon_key(self.parts))


@dataclass(frozen=True)
class NNabla:
    payload: object

    def canon_key(self):
        return ("nabla", canon_key(self.payload))


@dataclass(frozen=True)
class NFix:
    kind: str  # "mu" | "nu"
    var: str
    body: object

    def canon_key(self):
        return ("fix", self.kind, self.var, canon_key(self.body))


TRUE = NAnd(frozenset())
FALSE = NOr(frozenset())


def nand(parts) -> object:
    """Conjunction with flattening, unit and absorption."""
    out = set()
    for p in parts:
        if isinstance(p, NAnd):
            out |= p.parts
        elif isinstance(p, NOr) and not p.parts:
            return FALSE
        else:
            out.add(p)
    if len(out) == 1:
        return next(iter(out))
    return NAnd(frozenset(out))


def nor(parts) -> object:
    """Disjunction with flattening, unit and absorption."""
    out = set()
    for p in parts:
        if isinstance(p, NOr):
            out |= p.parts
        elif isinstance(p, NAnd) and not p.parts:
            return TRUE
        else:
            out.add(p)
    if len(out) == 1:
        return next(iter(out))
    return NOr(frozenset(out))


def _used_names(f: Formula) -> set:
    names = set()
    for g in subformulas(f):
        if isinstance(g, Atom):
            names.add(g.name)
        elif isinstance(g, Mu):
            names.add(g.var)
    return names


def _infer_functor(f: Formula, functor=None) -> FunctorDescriptor:
    for g in subformulas(f):
        if isinstance(g, Nabla):
            if functor is None:
                functor = g.functor
            elif functor != g.functor:
                raise ValueError("formula mixes modalities over different functors")
    if functor is None:
        raise ValueError("no functor given and none inferable from the formula")
    return functor


def to_nnf(f: Formula, functor: FunctorDescriptor = None):
    """Negation normal form with freshly named, pairwise distinct binders.

    Negated modalities are rewritten positively — possible only for the
    powerset lifting, where ¬∇α is a disjunction of box and diamond steps.
    """
    F = _infer_functor(f, functor)
    used = _used_names(f)
    counter = itertools.count()

    def fresh() -> str:
        while True:
            v = f"x{next(counter)}"
            if v not in used:
                used.add(v)
                return v

    def pos(g, env):
        if isinstance(g, Atom):
            if g.name in env:
                return NVar(env[g.name])
            return NLit(g.name, True)
        if isinstance(g, Neg):
            return neg(g.sub, env)
        if isinstance(g, Or):
            return nor(pos(p, env) for p in g.parts)
        if isinstance(g, Nabla):
            return NNabla(t_map(F, lambda h: pos(h, env), g.payload))
        if isinstance(g, Mu):
            v = fresh()
            return NFix("mu", v, pos(g.body, {**env, g.var: v}))
        raise TypeError(f"not a formula node: {g!r}")

    def neg(g, env):
        if isinstance(g, Atom):
            if g.name in env:
                raise ValueError(
                    f"fixpoint variable {g.name!r} occurs negatively"
                )
            return NLit(g.name, False)
        if isinstance(g, Neg):
            return pos(g.sub, env)
        if isinstance(g, Or):
            return nand(neg(p, env) for p in g.parts)
        if isinstance(g, Nabla):
            if F.kind != "powerset":
                raise UnsupportedFragment(
                    "negated modal steps are only expressible over the "
                    "powerset lifting"
                )
            parts = [
                nor((NNabla(frozenset()), NNabla(frozenset((neg(b, env),)))))
                for b in g.payload
            ]
            conj = nand(neg(b, env) for b in g.payload)
            parts.append(NNabla(frozenset((conj, TRUE))))
            return nor(parts)
        if isinstance(g, Mu):
            v = fresh()
            body = subst(g.body, g.var, mk_neg(mk_atom(g.var)))
            return NFix("nu", v, neg(body, {**env, g.var: v}))
        raise TypeError(f"not a formula node: {g!r}")

    return pos(f, {})


_NODES = (NLit, NVar, NAnd, NOr, NNabla, NFix)


def _payload_children(payload):
    """The formulas at the leaves of a modal payload, in canonical order.

    Payloads are built from frozensets, tuples and carrier leaves, so the
    leaf formulas are recoverable without consulting the functor.
    """
    out = []

    def walk(x):
        if isinstance(x, _NODES):
            out.append(x)
        elif isinstance(x, frozenset):
            for e in sorted(x, key=canon_key):
                walk(e)
        elif isinstance(x, tuple):
            for e in x:
                walk(e)

    walk(payload)
    return out


def nnf_free_vars(g) -> frozenset:
    if isinstance(g, NVar):
        return frozenset((g.var,))
    if isinstance(g, (NAnd, NOr)):
        return frozenset().union(*(nnf_free_vars(p) for p in g.parts))
    if isinstance(g, NNabla):
        return frozenset().union(
            *(nnf_free_vars(p) for p in _payload_children(g.payload))
        )
    if isinstance(g, NFix):
        return nnf_free_vars(g.body) - frozenset((g.var,))
    return frozenset()


# --------------------------------------------------------------------------
# Hierarchical equation systems


class _System:
    """One variable per fixpoint subformula, with flattened right-hand sides."""

    def __init__(self, F: FunctorDescriptor, root):
        self.F = F
        self._flat = {}
        fixes = []

        def walk(g, d):
            if isinstance(g, NFix):
                fixes.append((g, d))
                walk(g.body, d + 1)
            elif isinstance(g, (NAnd, NOr)):
                for p in g.parts:
                    walk(p, d)
            elif isinstance(g, NNabla):
                for p in _payload_children(g.payload):
                    walk(p, d)

        walk(root, 0)
        maxd = max((d for _, d in fixes), default=0)
        self.omega = {
            g.var: 2 * (maxd - d) + (1 if g.kind == "mu" else 0) for g, d in fixes
        }
        self.rhs = {g.var: self.flatten(g.body) for g, _ in fixes}
        self.root = self.flatten(root)

    def flatten(self, g):
        """Replace every fixpoint subformula by its variable."""
        got = self._flat.get(g)
        if got is not None:
            return got
        if isinstance(g, NFix):
            res = NVar(g.var)
        elif isinstance(g, NAnd):
            res = nand(self.flatten(p) for p in g.parts)
        elif isinstance(g, NOr):
            res = nor(self.flatten(p) for p in g.parts)
        elif isinstance(g, NNabla):
            res = NNabla(t_map(self.F, self.flatten, g.payload))
        else:
            res = g
        self._flat[g] = res
        return res


def _check_fragment(system: _System):
    """Reject inputs whose conjunctions the one-step construction cannot split.

    Any conjunction may couple at most one subformula containing fixpoint
    variables (priorities of merged traces could not be attributed
    otherwise), and for liftings without a distributive law over the Moss
    modality at most one conjunct may produce a modal obligation.
    """
    F = system.F
    produces: dict = {}

    def producing(g) -> bool:
        if isinstance(g, NNabla):
            return True
        if isinstance(g, (NAnd, NOr)):
            return any(producing(p) for p in g.parts)
        if isinstance(g, NVar):
            if g.var not in produces:
                produces[g.var] = False  # guarded systems unfold acyclically
                produces[g.var] = producing(system.rhs[g.var])
            return produces[g.var]
        return False

    def has_var(g) -> bool:
        return bool(nnf_free_vars(g))

    seen = set()

    def check(g):
        if g in seen:
            return
        seen.add(g)
        if isinstance(g, (NAnd, NOr)):
            if isinstance(g, NAnd):
                busy = [p for p in g.parts if has_var(p)]
                if len(busy) > 1:
                    raise UnsupportedFragment(
                        "a conjunction couples two fixpoint computations: "
                        f"{len(busy)} conjuncts carry bound variables"
                    )
                if F.kind != "powerset":
                    modal = [p for p in g.parts if producing(p)]
                    if len(modal) > 1:
                        raise UnsupportedFragment(
                            "a conjunction of modal obligations needs a "
                            "distributive law available only for the "
                            "powerset lifting"
                        )
            for p in g.parts:
                check(p)
        elif isinstance(g, NNabla):
            for p in _payload_children(g.payload):
                check(p)

    for g in [system.root, *system.rhs.values()]:
        check(g)


def _merge_pair(F: FunctorDescriptor, x, y):
    """All one-step elements covering the conjunction of two obligations."""
    if x == TRUE:
        return (y,)
    if y == TRUE:
        return (x,)
    if F.kind != "powerset":
        raise UnsupportedFragment(
            "conjunction of two modal obligations outside the powerset lifting"
        )
    alpha = sorted(x.payload, key=canon_key)
    beta = sorted(y.payload, key=canon_key)
    grid = list(itertools.product(range(len(alpha)), range(len(beta))))
    out = []
    seen = set()
    for bits in itertools.product((False, True), repeat=len(grid)):
        Z = [ab for ab, keep in zip(grid, bits) if keep]
        if {a for a, _ in Z} != set(range(len(alpha))):
            continue
        if {b for _, b in Z} != set(range(len(beta))):
            continue
        payload = frozenset(nand((alpha[a], beta[b])) for a, b in Z)
        if payload not in seen:
            seen.add(payload)
            out.append(NNabla(payload))
    return tuple(sorted(out, key=canon_key))


class _Decomposer:
    """One-step decomposition of flat formulas under a fixed color."""

    def __init__(self, system: _System):
        self.system = system
        self.memo = {}

    def run(self, g, c) -> frozenset:
        """The disjuncts of ``g`` under color ``c``: pairs ``(ψ, r)`` where
        ``ψ`` is TRUE or a modal obligation and ``r`` the maximal priority of
        the variables unfolded on the way."""
        key = (g, c)
        got = self.memo.get(key)
        if got is not None:
            return got
        sysm = self.system
        if isinstance(g, NLit):
            ok = (g.prop in c) == g.pos
            res = frozenset(((TRUE, 0),)) if ok else frozenset()
        elif isinstance(g, NVar):
            k = sysm.omega[g.var]
            res = frozenset(
                (psi, max(r, k)) for psi, r in self.run(sysm.rhs[g.var], c)
            )
        elif isinstance(g, NOr):
            res = frozenset().union(*(self.run(p, c) for p in g.parts)) if g.parts else frozenset()
        elif isinstance(g, NAnd):
            res = set()
            pools = [sorted(self.run(p, c), key=canon_key) for p in g.parts]
            for combo in itertools.product(*pools):
                cands = (TRUE,)
                for psi, _ in combo:
                    cands = tuple(
                        m for cand in cands for m in _merge_pair(sysm.F, cand, psi)
                    )
                r = max((r for _, r in combo), default=0)
                res.update((cand, r) for cand in cands)
            res = frozenset(res)
        else:  # NNabla
            res = frozenset(((g, 0),))
        self.memo[key] = res
        return res


def _all_colors(props):
    props = tuple(sorted(props))
    for k in range(len(props) + 1):
        yield from (frozenset(c) for c in itertools.combinations(props, k))


def formula_to_automaton(
    f: Formula, functor: FunctorDescriptor = None, props=None
) -> Automaton:
    """An automaton accepting exactly the pointed models of the formula.

    The formula must be monotone; unguarded fixpoints are rewritten by
    :func:`nablamu.logic.guard` first.  Raises :class:`UnsupportedFragment`
    for conjunction or negation patterns the one-step construction cannot
    express over the given lifting.
    """
    validate_monotone(f)
    F = _infer_functor(f, functor)
    if props is None:
        props = tuple(sorted(free_props(f)))
    else:
        props = tuple(sorted(props))
        if not free_props(f) <= set(props):
            raise ValueError("formula mentions propositions outside the vocabulary")
    if not is_guarded(f):
        f = guard(f)
    system = _System(F, to_nnf(f, F))
    _check_fragment(system)
    dec = _Decomposer(system)

    true_state = (TRUE, 0)
    colors = list(_all_colors(props))
    initial = (system.root, 0)
    states = [initial]
    seen = {initial}
    delta = {}
    queue = [initial]
    while queue:
        g, k = queue.pop(0)
        for c in colors:
            elems = set()
            for psi, r in sorted(dec.run(g, c), key=canon_key):
                if psi == TRUE:
                    elems.update(enumerate_t(F, frozenset((true_state,))))
                else:
                    elems.add(t_map(F, lambda h: (h, r), psi.payload))
            if elems:
                delta[((g, k), c)] = elems
            for t in sorted(elems, key=canon_key):
                for q in sorted(base(F, t), key=canon_key):
                    if q not in seen:
                        seen.add(q)
                        states.append(q)
                        queue.append(q)
    if true_state in seen:
        full = enumerate_t(F, frozenset((true_state,)))
        for c in colors:
            delta[(true_state, c)] = full
    omega = {q: q[1] for q in states}
    return Automaton.make(
        F, props, sorted(states, key=canon_key), initial, omega, delta
    )


# --------------------------------------------------------------------------
# Automata back to formulas


def _simp(F: FunctorDescriptor, g, memo=None):
    """Bottom-up simplification: units, absorption, flattening, dead binders."""
    if memo is None:
        memo = {}
    got = memo.get(g)
    if got is not None:
        return got
    if isinstance(g, NAnd):
        res = nand(_simp(F, p, memo) for p in g.parts)
        if isinstance(res, NAnd) and g.parts != res.parts:
            res = _simp(F, res, memo)
    elif isinstance(g, NOr):
        res = nor(_simp(F, p, memo) for p in g.parts)
        if isinstance(res, NOr) and g.parts != res.parts:
            res = _simp(F, res, memo)
    elif isinstance(g, NNabla):
        payload = t_map(F, lambda h: _simp(F, h, memo), g.payload)
        if F.kind == "powerset" and FALSE in payload:
            res = FALSE  # some successor would have to satisfy falsity
        else:
            res = NNabla(payload)
    elif isinstance(g, NFix):
        body = _simp(F, g.body, memo)
        if body == NVar(g.var):
            res = FALSE if g.kind == "mu" else TRUE
        elif g.var not in nnf_free_vars(body):
            res = body
        else:
            res = NFix(g.kind, g.var, body)
    else:
        res = g
    memo[g] = res
    return res


def _nsubst(F: FunctorDescriptor, g, mapping: dict):
    if not mapping:
        return g
    if isinstance(g, NVar):
        return mapping.get(g.var, g)
    if isinstance(g, NAnd):
        return nand(_nsubst(F, p, mapping) for p in g.parts)
    if isinstance(g, NOr):
        return nor(_nsubst(F, p, mapping) for p in g.parts)
    if isinstance(g, NNabla):
        return NNabla(t_map(F, lambda h: _nsubst(F, h, mapping), g.payload))
    if isinstance(g, NFix):
        inner = {v: h for v, h in mapping.items() if v != g.var}
        return NFix(g.kind, g.var, _nsubst(F, g.body, inner))
    return g


def nnf_to_formula(F: FunctorDescriptor, g) -> Formula:
    if isinstance(g, NLit):
        a = mk_atom(g.prop)
        return a if g.pos else mk_neg(a)
    if isinstance(g, NVar):
        return mk_atom(g.var)
    if isinstance(g, NAnd):
        parts = sorted(
            (nnf_to_formula(F, p) for p in g.parts), key=render_formula
        )
        return functools.reduce(mk_and, parts) if parts else logic.TOP
    if isinstance(g, NOr):
        return mk_or(frozenset(nnf_to_formula(F, p) for p in g.parts))
    if isinstance(g, NNabla):
        return mk_nabla(F, t_map(F, lambda h: nnf_to_formula(F, h), g.payload))
    binder = mk_mu if g.kind == "mu" else mk_nu
    return binder(g.var, nnf_to_formula(F, g.body))


def _reachable_states(aut: Automaton):
    seen = {aut.initial}
    queue = [aut.initial]
    while queue:
        a = queue.pop(0)
        for c in _all_colors(aut.props):
            for phi in aut.delta_of(a, c):
                for b in sorted(base(aut.functor, phi), key=canon_key):
                    if b not in seen:
                        seen.add(b)
                        queue.append(b)
    return tuple(a for a in aut.states if a in seen)


def automaton_to_formula(aut: Automaton) -> Formula:
    """A fixpoint formula with the same pointed models as the automaton.

    States become fixpoint variables (μ at odd priority, ν at even), ordered
    innermost-first by ascending priority, and are eliminated by Gaussian
    substitution.
    """
    F = aut.functor
    reach = _reachable_states(aut)
    used = set(aut.props)
    names = {}
    counter = itertools.count()
    for a in reach:
        while True:
            v = f"x{next(counter)}"
            if v not in used:
                names[a] = v
                break
    rhs = {}
    for a in reach:
        choices = []
        for c in _all_colors(aut.props):
            cell = aut.delta_of(a, c)
            if not cell:
                continue
            chi = nand(NLit(p, p in c) for p in aut.props)
            step = nor(
                NNabla(t_map(F, lambda b: NVar(names[b]), phi)) for phi in cell
            )
            choices.append(nand((chi, step)))
        rhs[names[a]] = nor(choices)
    order = sorted(reach, key=lambda a: (aut.omega_of(a), canon_key(a)))
    solved = []
    for a in order:
        v = names[a]
        kind = "mu" if aut.omega_of(a) % 2 else "nu"
        sol = _simp(F, NFix(kind, v, rhs[v]))
        solved.append((v, sol))
        rest = {v: sol}
        for b in order[len(solved):]:
            w = names[b]
            rhs[w] = _simp(F, _nsubst(F, rhs[w], rest))
    closed: dict = {}
    for v, sol in reversed(solved):
        closed[v] = _simp(F, _nsubst(F, sol, closed))
    return nnf_to_formula(F, _simp(F, closed[names[aut.initial]]))
