"""Parity games: arenas, the Zielonka solver, positional strategies.

Conventions: priorities are maximized along plays, even priorities favor the
existential player 'E', odd ones the universal player 'A'; a player stuck at
a position they own loses immediately.  Winning strategies are positional,
and the solver returns one for each player on their winning region.
"""

from __future__ import annotations

import sys
from collections import deque
from dataclasses import dataclass


@dataclass(frozen=True)
class Arena:
    """A finite parity game arena.

    ``positions`` are arbitrary hashable labels; ``owner``, ``priority`` and
    ``moves`` align with them by index, ``moves[i]`` listing successor
    indices.
    """

    positions: tuple
    owner: tuple
    priority: tuple
    moves: tuple

    def __post_init__(self):
        n = len(self.positions)
        if len(set(self.positions)) != n:
            raise ValueError("duplicate positions")
        if not (len(self.owner) == len(self.priority) == len(self.moves) == n):
            raise ValueError("owner/priority/moves must align with positions")
        if any(o not in ("E", "A") for o in self.owner):
            raise ValueError("owners must be 'E' or 'A'")
        if any(p < 0 for p in self.priority):
            raise ValueError("priorities must be nonnegative")
        for succ in self.moves:
            for j in succ:
                if not (0 <= j < n):
                    raise ValueError(f"move target {j} out of range")
        object.__setattr__(
            self, "_index", {p: i for i, p in enumerate(self.positions)}
        )

    def index(self, position) -> int:
        return self._index[position]

    def __len__(self) -> int:
        return len(self.positions)


@dataclass(frozen=True)
class Strategy:
    """A positional strategy: a move choice at each covered position index."""

    player: str
    choice: dict

    def __contains__(self, v) -> bool:
        return v in self.choice

    def __getitem__(self, v) -> int:
        return self.choice[v]


@dataclass(frozen=True)
class ParitySolution:
    arena: Arena
    win_e: frozenset
    win_a: frozenset
    strategy_e: Strategy
    strategy_a: Strategy

    def winner(self, v: int) -> str:
        return "E" if v in self.win_e else "A"


def solve_parity(arena: Arena) -> ParitySolution:
    """Solve the parity game by Zielonka's recursive algorithm.

    Dead ends are handled by routing them to virtual sinks lost by the stuck
    player, so the recursion only ever sees total games.
    """
    n = len(arena.positions)
    # totalize: position n is a sink winning for A (odd self-loop, reached by
    # stuck E positions), position n+1 a sink winning for E.
    owner = list(arena.owner) + ["E", "A"]
    priority = list(arena.priority) + [1, 0]
    moves = [tuple(m) for m in arena.moves] + [(n,), (n + 1,)]
    for v in range(n):
        if not moves[v]:
            moves[v] = (n,) if owner[v] == "E" else ((n + 1),)
    preds = [[] for _ in range(n + 2)]
    for v in range(n + 2):
        for w in moves[v]:
            preds[w].append(v)

    def attractor(target, player, sub):
        """Positions in ``sub`` from which ``player`` forces a visit to target."""
        attr = set(target)
        strat = {}
        cnt = {v: sum(1 for w in moves[v] if w in sub) for v in sub}
        queue = deque(target)
        while queue:
            w = queue.popleft()
            for v in preds[w]:
                if v not in sub or v in attr:
                    continue
                if owner[v] == player:
                    attr.add(v)
                    strat[v] = w
                    queue.append(v)
                else:
                    cnt[v] -= 1
                    if cnt[v] == 0:
                        attr.add(v)
                        queue.append(v)
        return frozenset(attr), strat

    def zielonka(sub: frozenset):
        """Returns (win_e, win_a, strat_e, strat_a) for the total subgame."""
        if not sub:
            return frozenset(), frozenset(), {}, {}
        d = max(priority[v] for v in sub)
        player = "E" if d % 2 == 0 else "A"
        Z = frozenset(v for v in sub if priority[v] == d)
        A, strat_attr = attractor(Z, player, sub)
        we, wa, se, sa = zielonka(sub - A)
        win_mine, win_other = (we, wa) if player == "E" else (wa, we)
        st_mine = se if player == "E" else sa
        st_other = sa if player == "E" else se
        if not win_other:
            # the favored player wins the whole subgame: recurse-region
            # strategy inside sub∖A, attractor strategy on A∖Z, and any
            # in-subgame move on the top-priority positions themselves.
            st = dict(st_mine)
            st.update(strat_attr)
            for v in Z:
                if owner[v] == player:
                    st[v] = next(w for w in moves[v] if w in sub)
            if player == "E":
                return frozenset(sub), frozenset(), st, {}
            return frozenset(), frozenset(sub), {}, st
        other = "A" if player == "E" else "E"
        B, strat_b = attractor(win_other, other, sub)
        we2, wa2, se2, sa2 = zielonka(sub - B)
        st_o = dict(st_other)
        st_o.update(strat_b)
        if player == "E":
            st_o.update(sa2)
            return we2, frozenset(wa2 | B), se2, st_o
        st_o.update(se2)
        return frozenset(we2 | B), wa2, st_o, sa2

    # recursion depth is bounded by the number of positions
    limit = sys.getrecursionlimit()
    if limit < 2 * n + 200:
        sys.setrecursionlimit(2 * n + 200)
    we, wa, se, sa = zielonka(frozenset(range(n + 2)))
    real = set(range(n))
    return ParitySolution(
        arena,
        frozenset(we & real),
        frozenset(wa & real),
        Strategy("E", {v: w for v, w in se.items() if v < n and w < n}),
        Strategy("A", {v: w for v, w in sa.items() if v < n and w < n}),
    )
