"""Explicit (per-vertex) progress measure solver and brute-force dominions.

This is the reference implementation the symbolic solvers are tested
against: a plain work-list least-fixpoint lift over the rank domain. With
the full domain the sub-TOP region is exactly the winning region of the
even player; with a bound h it is a dominion of the even player containing
every even dominion of at most h+1 vertices.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations

from .game import ParityGame, Player, normalize_priorities, subgame, swap_roles_increment
from .ranks import TOP, RankDomain


def best_rank(game: ParityGame, domain: RankDomain, rho, v: int):
    """Most favorable successor rank from v: min for Even's vertices, max for Odd's."""
    return _best(game.owner, game.successors, domain, rho, v)


def lift_rank(game: ParityGame, domain: RankDomain, rho, v: int):
    return domain.incr_at(best_rank(game, domain, rho, v), game.priority[v])


def _best(owners, successors, domain: RankDomain, rho, v: int):
    ranks = [rho[w] for w in successors[v]]
    pick = ranks[0]
    for r in ranks[1:]:
        sign = domain.compare(r, pick)
        if owners[v] is Player.EVEN:
            if sign < 0:
                pick = r
        elif sign > 0:
            pick = r
    return pick


def lift_fixpoint(owners, priorities, successors, domain: RankDomain, order=None):
    """Least simultaneous fixpoint of the lift operator over raw vertex lists.

    Work-list with predecessor re-enqueueing; the result does not depend on
    `order` because the fixpoint is least. Returns (rho, lift evaluations).
    """
    n = len(owners)
    preds: list[list[int]] = [[] for _ in range(n)]
    for v in range(n):
        for w in successors[v]:
            preds[w].append(v)
    rho: list = [domain.zero] * n
    queue = deque(range(n) if order is None else order)
    queued = [False] * n
    for v in queue:
        queued[v] = True
    lifts = 0
    while queue:
        v = queue.popleft()
        queued[v] = False
        new = domain.incr_at(_best(owners, successors, domain, rho, v), priorities[v])
        lifts += 1
        if domain.compare(new, rho[v]) > 0:
            rho[v] = new
            for u in preds[v]:
                if not queued[u]:
                    queued[u] = True
                    queue.append(u)
    return rho, lifts


@dataclass
class ExplicitResult:
    game: ParityGame
    priority_remap: dict[int, int]
    domain: RankDomain
    rho: tuple
    winning_even: frozenset[int]
    lift_count: int


def solve_explicit_pm(
    game: ParityGame,
    bound: int | None = None,
    order=None,
) -> ExplicitResult:
    """Explicit progress measure solve; normalizes first (idempotent)."""
    norm, remap = normalize_priorities(game)
    domain = RankDomain.for_game(norm, bound=bound)
    rho, lifts = lift_fixpoint(norm.owner, norm.priority, norm.successors, domain, order)
    winning = frozenset(v for v in range(norm.vertex_count) if rho[v] is not TOP)
    return ExplicitResult(
        game=norm,
        priority_remap=remap,
        domain=domain,
        rho=tuple(rho),
        winning_even=winning,
        lift_count=lifts,
    )


def _is_trap_for(game: ParityGame, player: Player, vertices: frozenset[int]) -> bool:
    """True when `player` cannot force the play out of `vertices`."""
    for v in vertices:
        succs = game.successors[v]
        if game.owner[v] is player:
            if any(w not in vertices for w in succs):
                return False
        elif all(w not in vertices for w in succs):
            return False
    return True


def _wins_everywhere(game: ParityGame, player: Player, vertices: frozenset[int]) -> bool:
    sub, _ = subgame(game, vertices)
    if player is Player.ODD:
        sub = swap_roles_increment(sub)
    return len(solve_explicit_pm(sub).winning_even) == len(vertices)


def enumerate_dominions_bruteforce(
    game: ParityGame, player: Player, max_size: int
) -> list[frozenset[int]]:
    """All dominions of `player` with at most max_size vertices.

    Exponential; intended for cross-checking on small games only.
    """
    out = []
    n = game.vertex_count
    for size in range(1, min(max_size, n) + 1):
        for combo in combinations(range(n), size):
            cand = frozenset(combo)
            if not _is_trap_for(game, player.opponent(), cand):
                continue
            # The opponent-trap check above also guarantees the subgame is closed.
            if _wins_everywhere(game, player, cand):
                out.append(cand)
    return out


def is_dominion(game: ParityGame, player: Player, vertices) -> bool:
    """Explicit check: nonempty opponent trap on which `player` wins everywhere."""
    cand = frozenset(vertices)
    if not cand:
        return False
    return _is_trap_for(game, player.opponent(), cand) and _wins_everywhere(
        game, player, cand
    )
