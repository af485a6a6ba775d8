"""Fixpoint formulas with the Moss modality: syntax, semantics, guarding.

The grammar is deliberately small — propositions, negation, finite
disjunction, the ∇ modality whose argument is a functor element over
formulas, and least fixpoints.  Conjunction, truth constants, and greatest
fixpoints are definable and the printer recognizes their encodings:

    a ::= prop | ~a | \\/{a, …} | (a \\/ b) | (a /\\ b)
        | nabla <element> | mu p. a | nu p. a | true | false

Formula objects are hash-consed: structurally equal formulas are the same
object, so equality and hashing are O(1) even on heavily shared DAGs.
Always build formulas through the ``mk_*`` factories.
"""

from __future__ import annotations

from .functors import FunctorDescriptor, base, lift_member, parse_telem, render_telem, t_map
from .parsing import Cursor

RESERVED = frozenset({"mu", "nu", "nabla", "true", "false", "const", "id", "inl", "inr"})


class Formula:
    """Base class; identity equality (valid thanks to hash-consing)."""

    __slots__ = ("_rendered",)

    def canon_key(self) -> str:
        return render_formula(self)

    def __repr__(self):
        return f"<{type(self).__name__} {render_formula(self)}>"


class Atom(Formula):
    __slots__ = ("name",)

    def __init__(self, name: str):
        self._rendered = None
        self.name = name


class Neg(Formula):
    __slots__ = ("sub",)

    def __init__(self, sub: Formula):
        self._rendered = None
        self.sub = sub


class Or(Formula):
    __slots__ = ("parts",)

    def __init__(self, parts: frozenset):
        self._rendered = None
        self.parts = parts


class Nabla(Formula):
    __slots__ = ("functor", "payload")

    def __init__(self, functor: FunctorDescriptor, payload):
        self._rendered = None
        self.functor = functor
        self.payload = payload


class Mu(Formula):
    __slots__ = ("var", "body")

    def __init__(self, var: str, body: Formula):
        self._rendered = None
        self.var = var
        self.body = body


_intern: dict = {}


def _interned(key, build):
    got = _intern.get(key)
    if got is None:
        got = _intern[key] = build()
    return got


def mk_atom(name: str) -> Atom:
    return _interned(("atom", name), lambda: Atom(name))


def mk_neg(sub: Formula) -> Neg:
    return _interned(("neg", sub), lambda: Neg(sub))


def mk_or(parts) -> Or:
    parts = frozenset(parts)
    return _interned(("or", parts), lambda: Or(parts))


def mk_nabla(functor: FunctorDescriptor, payload) -> Nabla:
    return _interned(("nabla", functor, payload), lambda: Nabla(functor, payload))


def mk_mu(var: str, body: Formula) -> Mu:
    return _interned(("mu", var, body), lambda: Mu(var, body))


BOT = mk_or(frozenset())
TOP = mk_neg(BOT)


def mk_and(a: Formula, b: Formula) -> Formula:
    return mk_neg(mk_or(frozenset((mk_neg(a), mk_neg(b)))))


def mk_nu(var: str, body: Formula) -> Formula:
    inner = mk_neg(subst(body, var, mk_neg(mk_atom(var))))
    return mk_neg(mk_mu(var, inner))


# --------------------------------------------------------------------------
# Structural queries

_free_memo: dict = {}


def free_props(f: Formula) -> frozenset:
    """Atoms not bound by any enclosing fixpoint (propositions and free variables)."""
    got = _free_memo.get(f)
    if got is not None:
        return got
    if isinstance(f, Atom):
        out = frozenset((f.name,))
    elif isinstance(f, Neg):
        out = free_props(f.sub)
    elif isinstance(f, Or):
        out = frozenset().union(*(free_props(p) for p in f.parts)) if f.parts else frozenset()
    elif isinstance(f, Nabla):
        out = frozenset().union(
            frozenset(), *(free_props(b) for b in base(f.functor, f.payload))
        )
    else:
        out = free_props(f.body) - {f.var}
    _free_memo[f] = out
    return out


def subformulas(f: Formula) -> frozenset:
    """All distinct subformula nodes, the formula itself included."""
    seen = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if g in seen:
            continue
        seen.add(g)
        if isinstance(g, Neg):
            stack.append(g.sub)
        elif isinstance(g, Or):
            stack.extend(g.parts)
        elif isinstance(g, Nabla):
            stack.extend(base(g.functor, g.payload))
        elif isinstance(g, Mu):
            stack.append(g.body)
    return frozenset(seen)


def _polarities(f: Formula, x: str, pol: bool, out: set):
    if isinstance(f, Atom):
        if f.name == x:
            out.add(pol)
    elif isinstance(f, Neg):
        _polarities(f.sub, x, not pol, out)
    elif isinstance(f, Or):
        for p in f.parts:
            _polarities(p, x, pol, out)
    elif isinstance(f, Nabla):
        for b in base(f.functor, f.payload):
            _polarities(b, x, pol, out)
    elif f.var != x:
        _polarities(f.body, x, pol, out)


def validate_monotone(f: Formula):
    """Raise ValueError unless every fixpoint variable occurs only positively."""
    for g in subformulas(f):
        if isinstance(g, Mu):
            pols = set()
            _polarities(g.body, g.var, True, pols)
            if False in pols:
                raise ValueError(
                    f"fixpoint variable {g.var!r} occurs negatively in "
                    f"{render_formula(g)}"
                )


def is_guarded(f: Formula) -> bool:
    """Whether every fixpoint variable lies under a modality inside its binder."""

    def walk(g: Formula, pending: frozenset) -> bool:
        if isinstance(g, Atom):
            return g.name not in pending
        if isinstance(g, Neg):
            return walk(g.sub, pending)
        if isinstance(g, Or):
            return all(walk(p, pending) for p in g.parts)
        if isinstance(g, Nabla):
            empty = frozenset()
            return all(walk(b, empty) for b in base(g.functor, g.payload))
        return walk(g.body, pending | {g.var})

    return walk(f, frozenset())


# --------------------------------------------------------------------------
# Substitution


def _fresh(stem: str, avoid) -> str:
    i = 1
    while f"{stem}_{i}" in avoid:
        i += 1
    return f"{stem}_{i}"


def subst(f: Formula, var: str, repl: Formula) -> Formula:
    """Capture-avoiding substitution of ``repl`` for the free atom ``var``."""
    if var not in free_props(f):
        return f
    if isinstance(f, Atom):
        return repl if f.name == var else f
    if isinstance(f, Neg):
        return mk_neg(subst(f.sub, var, repl))
    if isinstance(f, Or):
        return mk_or(frozenset(subst(p, var, repl) for p in f.parts))
    if isinstance(f, Nabla):
        return mk_nabla(
            f.functor, t_map(f.functor, lambda b: subst(b, var, repl), f.payload)
        )
    if f.var == var:
        return f
    if f.var in free_props(repl):
        avoid = free_props(f.body) | free_props(repl) | {var}
        z = _fresh(f.var, avoid)
        body = subst(f.body, f.var, mk_atom(z))
        return mk_mu(z, subst(body, var, repl))
    return mk_mu(f.var, subst(f.body, var, repl))


# --------------------------------------------------------------------------
# Semantics


def eval_formula(M, f: Formula, env=None) -> frozenset:
    """The set of states of ``M`` satisfying ``f``.

    ``env`` optionally overrides the extension of free atoms (used during
    fixpoint iteration; overriding a proposition is also allowed).
    """
    states = frozenset(M.states)
    memo: dict = {}
    env = {k: frozenset(v) for k, v in (env or {}).items()}

    def ev(g: Formula, env: dict) -> frozenset:
        key = (
            g,
            tuple(sorted((v, env[v]) for v in free_props(g) if v in env)),
        )
        got = memo.get(key)
        if got is not None:
            return got
        if isinstance(g, Atom):
            out = env.get(
                g.name,
                frozenset(s for s in M.states if g.name in M.gamma_of(s)),
            )
        elif isinstance(g, Neg):
            out = states - ev(g.sub, env)
        elif isinstance(g, Or):
            out = frozenset()
            for p in g.parts:
                out |= ev(p, env)
        elif isinstance(g, Nabla):
            if g.functor != M.functor:
                raise ValueError("modality functor differs from the model functor")
            sat = frozenset(
                (s, b)
                for b in base(g.functor, g.payload)
                for s in ev(b, env)
            )
            out = frozenset(
                s
                for s in M.states
                if lift_member(g.functor, sat, M.sigma_of(s), g.payload)
            )
        else:
            cur = frozenset()
            while True:
                env2 = dict(env)
                env2[g.var] = cur
                nxt = ev(g.body, env2)
                if nxt == cur:
                    break
                cur = nxt
            out = cur
        memo[key] = out
        return out

    return ev(f, env)


def satisfies(P, f: Formula) -> bool:
    """Whether the pointed model satisfies the formula."""
    return P.point in eval_formula(P.model, f)


eval = eval_formula  # noqa: A001 — the op is conventionally called eval


# --------------------------------------------------------------------------
# Guarding


def _has_unguarded(x: str, f: Formula) -> bool:
    """An occurrence of ``x`` reachable without crossing a modality."""
    if isinstance(f, Atom):
        return f.name == x
    if isinstance(f, Neg):
        return _has_unguarded(x, f.sub)
    if isinstance(f, Or):
        return any(_has_unguarded(x, p) for p in f.parts)
    if isinstance(f, Nabla):
        return False
    return f.var != x and _has_unguarded(x, f.body)


def _has_unguarded_under_binder(x: str, f: Formula, inside: bool = False) -> bool:
    """An unguarded occurrence of ``x`` lying inside some inner fixpoint."""
    if isinstance(f, Atom):
        return inside and f.name == x
    if isinstance(f, Neg):
        return _has_unguarded_under_binder(x, f.sub, inside)
    if isinstance(f, Or):
        return any(_has_unguarded_under_binder(x, p, inside) for p in f.parts)
    if isinstance(f, Nabla):
        return False
    return f.var != x and _has_unguarded_under_binder(x, f.body, True)


def _unfold_inner_binders(x: str, f: Formula) -> Formula:
    """Unfold every modality-free inner fixpoint that holds ``x`` unguarded."""
    if isinstance(f, (Atom, Nabla)):
        return f
    if isinstance(f, Neg):
        return mk_neg(_unfold_inner_binders(x, f.sub))
    if isinstance(f, Or):
        return mk_or(frozenset(_unfold_inner_binders(x, p) for p in f.parts))
    if f.var != x and _has_unguarded(x, f.body):
        return subst(f.body, f.var, f)
    return f


def _dnf(f: Formula, positive: bool):
    """Disjunctive normal form of the propositional skeleton over opaque nodes.

    Literals are (node, polarity) pairs where nodes are atoms, modalities, or
    fixpoints.  Contradictory clauses are dropped.
    """
    if isinstance(f, Neg):
        return _dnf(f.sub, not positive)
    if isinstance(f, Or):
        if positive:
            out = []
            for p in f.parts:
                out.extend(_dnf(p, True))
            return out
        clauses = [frozenset()]
        for p in f.parts:
            sub = _dnf(p, False)
            merged = []
            for c in clauses:
                for d in sub:
                    u = c | d
                    if not any((n, not pol) in u for n, pol in d):
                        merged.append(u)
            clauses = merged
        return clauses
    return [frozenset(((f, positive),))]


def _clause_formula(clause: frozenset) -> Formula:
    lits = sorted(
        (node if pol else mk_neg(node) for node, pol in clause),
        key=lambda g: render_formula(g),
    )
    if not lits:
        return TOP
    out = lits[0]
    for lit in lits[1:]:
        out = mk_and(out, lit)
    return out


def guard(f: Formula) -> Formula:
    """An equivalent guarded formula: every fixpoint variable under a modality.

    Works innermost-first.  For each fixpoint μx.b, unguarded occurrences of
    x inside inner binders are first exposed by unfolding those binders; the
    remaining unguarded occurrences then sit in the boolean skeleton, where
    rewriting to disjunctive normal form and dropping the clauses containing
    x is sound: μx.((x ∧ A) ∨ B) ≡ μx.B by the Knaster–Tarski theorem.
    """
    validate_monotone(f)
    return _guard(f)


def _guard(f: Formula) -> Formula:
    if isinstance(f, Atom):
        return f
    if isinstance(f, Neg):
        return mk_neg(_guard(f.sub))
    if isinstance(f, Or):
        return mk_or(frozenset(_guard(p) for p in f.parts))
    if isinstance(f, Nabla):
        return mk_nabla(f.functor, t_map(f.functor, _guard, f.payload))
    x = f.var
    body = _guard(f.body)
    while _has_unguarded_under_binder(x, body):
        body = _unfold_inner_binders(x, body)
    if _has_unguarded(x, body):
        xa = mk_atom(x)
        clauses = []
        for c in _dnf(body, True):
            if (xa, False) in c:
                raise ValueError(f"fixpoint variable {x!r} occurs negatively")
            if (xa, True) not in c:
                clauses.append(c)
        rebuilt = frozenset(_clause_formula(c) for c in clauses)
        body = next(iter(rebuilt)) if len(rebuilt) == 1 else mk_or(rebuilt)
    if x not in free_props(body):
        return body
    return mk_mu(x, body)


# --------------------------------------------------------------------------
# Printer


def render_formula(f: Formula) -> str:
    if f._rendered is not None:
        return f._rendered
    if isinstance(f, Atom):
        out = f.name
    elif isinstance(f, Or):
        if not f.parts:
            out = "false"
        else:
            out = "\\/{" + ", ".join(sorted(render_formula(p) for p in f.parts)) + "}"
    elif isinstance(f, Nabla):
        out = "nabla " + render_telem(f.functor, f.payload, render_formula)
    elif isinstance(f, Mu):
        out = f"mu {f.var}. " + render_formula(f.body)
    else:
        out = _render_neg(f)
    f._rendered = out
    return out


def _render_neg(f: Neg) -> str:
    g = f.sub
    if g is BOT:
        return "true"
    if isinstance(g, Or) and len(g.parts) == 2:
        a, b = sorted(g.parts, key=render_formula)
        if isinstance(a, Neg) and isinstance(b, Neg):
            left, right = sorted(
                (render_formula(a.sub), render_formula(b.sub))
            )
            return f"({left} /\\ {right})"
    if isinstance(g, Mu) and isinstance(g.body, Neg):
        inner = _strip_one_negation(g.var, g.body.sub)
        if inner is not None and mk_nu(g.var, inner) is f:
            return f"nu {g.var}. " + render_formula(inner)
    return "~" + render_formula(g)


def _strip_one_negation(x: str, f: Formula):
    """Undo the substitution x ↦ ¬x: drop one negation from each chain over x."""
    if isinstance(f, Atom):
        return None if f.name == x else f
    if isinstance(f, Neg):
        if f.sub is mk_atom(x):
            return f.sub
        inner = _strip_one_negation(x, f.sub)
        return None if inner is None else mk_neg(inner)
    if isinstance(f, Or):
        parts = []
        for p in f.parts:
            q = _strip_one_negation(x, p)
            if q is None:
                return None
            parts.append(q)
        return mk_or(frozenset(parts))
    if isinstance(f, Nabla):
        try:
            payload = t_map(f.functor, lambda b: _must_strip(x, b), f.payload)
        except _NotStrippable:
            return None
        return mk_nabla(f.functor, payload)
    if f.var == x:
        return f
    inner = _strip_one_negation(x, f.body)
    return None if inner is None else mk_mu(f.var, inner)


class _NotStrippable(Exception):
    pass


def _must_strip(x: str, f: Formula) -> Formula:
    out = _strip_one_negation(x, f)
    if out is None:
        raise _NotStrippable
    return out


# --------------------------------------------------------------------------
# Parser


def parse_formula(text: str, functor: FunctorDescriptor = None) -> Formula:
    """Parse a formula; ∇ payloads are parsed according to ``functor``."""
    from .functors import POWERSET

    F = POWERSET if functor is None else functor
    cur = Cursor(text)
    f = _parse(cur, F)
    cur.expect_end()
    return f


def _parse(cur: Cursor, F: FunctorDescriptor) -> Formula:
    for word, binder in (("mu", mk_mu), ("nu", mk_nu)):
        if cur.take_word(word):
            var = cur.ident("fixpoint variable")
            if var in RESERVED:
                cur.error(f"{var!r} is a reserved word")
            cur.expect(".")
            return binder(var, _parse(cur, F))
    if cur.take("~"):
        return mk_neg(_parse(cur, F))
    if cur.take_word("true"):
        return TOP
    if cur.take_word("false"):
        return BOT
    if cur.take_word("nabla"):
        payload = parse_telem(cur, F, lambda c: _parse(c, F))
        return mk_nabla(F, payload)
    if cur.take("\\/"):
        cur.expect("{")
        parts = []
        if not cur.take("}"):
            while True:
                parts.append(_parse(cur, F))
                if cur.take("}"):
                    break
                cur.expect(",")
        return mk_or(frozenset(parts))
    if cur.take("("):
        left = _parse(cur, F)
        if cur.take("\\/"):
            op = "or"
        elif cur.take("/\\"):
            op = "and"
        else:
            cur.error("expected '\\/' or '/\\'")
        right = _parse(cur, F)
        cur.expect(")")
        return mk_or(frozenset((left, right))) if op == "or" else mk_and(left, right)
    name = cur.ident("formula")
    if name in RESERVED:
        cur.error(f"{name!r} cannot be used as a proposition")
    return mk_atom(name)
