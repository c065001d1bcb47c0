"""Parity game structure: vertices, ownership, priorities, edges.

Games are immutable once built. Every vertex must have at least one
successor (infinite plays only). Priorities are naturals; the priority
count c is one past the largest priority in use.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum


class GameError(Exception):
    pass


class VertexWithoutSuccessor(GameError):
    def __init__(self, vertex: int):
        self.vertex = vertex
        super().__init__(f"vertex {vertex} has no successor")


class PriorityOutOfRange(GameError):
    def __init__(self, vertex: int, priority: int):
        self.vertex = vertex
        self.priority = priority
        super().__init__(f"vertex {vertex} has invalid priority {priority}")


class DanglingEdge(GameError):
    def __init__(self, source: int, target: int):
        self.source = source
        self.target = target
        super().__init__(f"edge {source} -> {target} leaves the vertex range")


class NotClosed(GameError):
    def __init__(self, vertex: int):
        self.vertex = vertex
        super().__init__(f"vertex {vertex} has no successor inside the subset")


class Player(IntEnum):
    EVEN = 0
    ODD = 1

    def opponent(self) -> "Player":
        return Player.ODD if self is Player.EVEN else Player.EVEN


@dataclass(frozen=True)
class ParityGame:
    owner: tuple[Player, ...]
    priority: tuple[int, ...]
    successors: tuple[tuple[int, ...], ...]
    names: tuple[str | None, ...] | None = None
    # filled in __post_init__
    predecessors: tuple[tuple[int, ...], ...] = field(default=(), compare=False)

    def __post_init__(self):
        preds: list[list[int]] = [[] for _ in range(len(self.owner))]
        for v, succs in enumerate(self.successors):
            for w in succs:
                preds[w].append(v)
        object.__setattr__(self, "predecessors", tuple(tuple(p) for p in preds))

    @property
    def vertex_count(self) -> int:
        return len(self.owner)

    @property
    def priority_count(self) -> int:
        """c: one past the largest priority present (0 for the empty game)."""
        return max(self.priority) + 1 if self.priority else 0

    def priority_class(self, i: int) -> tuple[int, ...]:
        return tuple(v for v in range(self.vertex_count) if self.priority[v] == i)

    def vertices_of(self, player: Player) -> tuple[int, ...]:
        return tuple(v for v in range(self.vertex_count) if self.owner[v] is player)

    def name_of(self, v: int) -> str:
        if self.names is not None and self.names[v]:
            return self.names[v]  # type: ignore[return-value]
        return str(v)


def build_game(
    owners: list[int] | list[Player],
    priorities: list[int],
    successor_lists: list[list[int]],
    names: list[str | None] | None = None,
) -> ParityGame:
    """Validate and freeze a game.

    Duplicate edges are dropped (first occurrence kept). Raises
    VertexWithoutSuccessor, PriorityOutOfRange or DanglingEdge.
    """
    n = len(owners)
    if not (len(priorities) == len(successor_lists) == n):
        raise GameError("owners, priorities and successor lists must have equal length")
    if names is not None and len(names) != n:
        raise GameError("names must match the vertex count")
    for v, p in enumerate(priorities):
        if p < 0:
            raise PriorityOutOfRange(v, p)
    cleaned: list[tuple[int, ...]] = []
    for v, succs in enumerate(successor_lists):
        seen: set[int] = set()
        keep: list[int] = []
        for w in succs:
            if not 0 <= w < n:
                raise DanglingEdge(v, w)
            if w not in seen:
                seen.add(w)
                keep.append(w)
        if not keep:
            raise VertexWithoutSuccessor(v)
        cleaned.append(tuple(keep))
    return ParityGame(
        owner=tuple(Player(o) for o in owners),
        priority=tuple(priorities),
        successors=tuple(cleaned),
        names=tuple(names) if names is not None else None,
    )


def normalize_priorities(game: ParityGame) -> tuple[ParityGame, dict[int, int]]:
    """Compact priorities so every class strictly between 0 and c-1 is nonempty.

    Repeatedly: drop c to one past the largest present priority, then shift
    everything above the smallest empty interior class down by 2. Parity of
    every vertex is preserved, so winners and strategies are unchanged.
    Returns the new game and the old-priority -> new-priority map. Idempotent.
    """
    current = list(game.priority)
    remap = {p: p for p in set(game.priority)}
    while True:
        c = max(current) + 1 if current else 0
        present = set(current)
        gap = next((i for i in range(1, c) if i not in present), None)
        if gap is None:
            break
        for v, p in enumerate(current):
            if p > gap:
                current[v] = p - 2
        for old, new in list(remap.items()):
            if new > gap:
                remap[old] = new - 2
    if current == list(game.priority):
        return game, remap
    out = ParityGame(
        owner=game.owner,
        priority=tuple(current),
        successors=game.successors,
        names=game.names,
    )
    return out, remap


def swap_roles_increment(game: ParityGame) -> ParityGame:
    """Flip ownership and add 1 to every priority.

    In the shifted game the roles of the players are exchanged: a set is
    winning for one player there exactly when it is winning for the other
    player here.
    """
    return ParityGame(
        owner=tuple(o.opponent() for o in game.owner),
        priority=tuple(p + 1 for p in game.priority),
        successors=game.successors,
        names=game.names,
    )


def subgame(game: ParityGame, vertices) -> tuple[ParityGame, tuple[int, ...]]:
    """Restrict to a vertex subset, remapping ids densely.

    Every kept vertex must keep at least one successor, otherwise NotClosed.
    Returns the subgame and the new-id -> old-id table.
    """
    keep = sorted(set(int(v) for v in vertices))
    for v in keep:
        if not 0 <= v < game.vertex_count:
            raise GameError(f"vertex {v} outside the game")
    new_id = {old: i for i, old in enumerate(keep)}
    succs: list[tuple[int, ...]] = []
    for old in keep:
        inside = tuple(new_id[w] for w in game.successors[old] if w in new_id)
        if not inside:
            raise NotClosed(old)
        succs.append(inside)
    sub = ParityGame(
        owner=tuple(game.owner[old] for old in keep),
        priority=tuple(game.priority[old] for old in keep),
        successors=tuple(succs),
        names=tuple(game.names[old] for old in keep) if game.names else None,
    )
    return sub, tuple(keep)
