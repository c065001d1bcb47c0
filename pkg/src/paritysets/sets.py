"""Counted vertex-set algebra over one fixed game.

A SetSpace owns every VertexSet for one solver run: the universe, the two
ownership sets and one set per priority are materialized up front and stay
pinned; everything else is created by counted operations and must be
released by the code that created it. Live-set accounting feeds the peak
space measurements, so leaks show up as budget violations, not just waste.

Two interchangeable representations sit behind the same interface: plain
int bit masks (default) and a small reduced ordered BDD. Counters record
logical operations, never representation internals; in particular the BDD
controlled-predecessor costs one cpre_op even though it is assembled from
two relational preimages.

count()/ids()/contains() on a VertexSet are uncounted instrumentation for
tests, traces and IO; solver logic sticks to the counted operations.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .game import ParityGame, Player


class UniverseMismatch(Exception):
    pass


@dataclass
class OpCounters:
    unions: int = 0
    intersections: int = 0
    differences: int = 0
    containment_tests: int = 0
    equality_tests: int = 0
    pre_ops: int = 0
    cpre_ops: int = 0
    live_sets: int = 0
    peak_live_sets: int = 0

    @property
    def basic_total(self) -> int:
        return (
            self.unions
            + self.intersections
            + self.differences
            + self.containment_tests
            + self.equality_tests
        )

    def snapshot(self) -> "OpCounters":
        return replace(self)


class VertexSet:
    __slots__ = ("space", "payload", "alive", "pinned")

    def __init__(self, space: "SetSpace", payload, pinned: bool = False):
        self.space = space
        self.payload = payload
        self.alive = True
        self.pinned = pinned

    # Instrumentation; not counted.
    def count(self) -> int:
        return self.space._backend.count(self.payload)

    def ids(self) -> tuple[int, ...]:
        return self.space._backend.ids(self.payload)

    def contains(self, v: int) -> bool:
        return self.space._backend.contains(self.payload, v)

    def __repr__(self) -> str:
        state = "" if self.alive else " (released)"
        return f"VertexSet{{{','.join(map(str, self.ids()))}}}{state}"


class _BitsBackend:
    kind = "bits"

    def __init__(self, game: ParityGame):
        n = game.vertex_count
        self.n = n
        self.full_mask = (1 << n) - 1
        self.succ = [0] * n
        for v, succs in enumerate(game.successors):
            m = 0
            for w in succs:
                m |= 1 << w
            self.succ[v] = m
        self.even_mask = 0
        for v, o in enumerate(game.owner):
            if o is Player.EVEN:
                self.even_mask |= 1 << v

    def empty(self):
        return 0

    def full(self):
        return self.full_mask

    def from_ids(self, ids):
        m = 0
        for v in ids:
            m |= 1 << v
        return m

    def union(self, a, b):
        return a | b

    def intersect(self, a, b):
        return a & b

    def difference(self, a, b):
        return a & ~b

    def is_subset(self, a, b) -> bool:
        return a & ~b == 0

    def equals(self, a, b) -> bool:
        return a == b

    def count(self, a) -> int:
        return a.bit_count()

    def ids(self, a) -> tuple[int, ...]:
        out = []
        while a:
            low = a & -a
            out.append(low.bit_length() - 1)
            a ^= low
        return tuple(out)

    def contains(self, a, v: int) -> bool:
        return bool(a >> v & 1)

    def pre(self, b, within):
        out = 0
        m = within
        succ = self.succ
        while m:
            low = m & -m
            if succ[low.bit_length() - 1] & b:
                out |= low
            m ^= low
        return out

    def cpre(self, for_even: bool, b, within):
        # v of the acting player: some successor inside the view lands in b;
        # v of the opponent: at least one successor stays inside and every
        # one that does lands in b. Vertices with no move inside the view
        # never qualify, matching the relational (BDD) formulation.
        out = 0
        mine = self.even_mask if for_even else self.full_mask ^ self.even_mask
        m = within
        succ = self.succ
        while m:
            low = m & -m
            s = succ[low.bit_length() - 1] & within
            if low & mine:
                if s & b:
                    out |= low
            elif s and s & ~b == 0:
                out |= low
            m ^= low
        return out


class SetSpace:
    """Operation context for one run: counters plus the pinned base sets."""

    def __init__(self, game: ParityGame, backend: str = "bits"):
        self.game = game
        self.counters = OpCounters()
        if backend == "bits":
            self._backend = _BitsBackend(game)
        elif backend == "bdd":
            from .bdd import BddBackend

            self._backend = BddBackend(game)
        else:
            raise ValueError(f"unknown backend {backend!r}")
        self.backend = backend
        self.full = self._pin(self._backend.full())
        self.evens = self._pin(
            self._backend.from_ids(v for v, o in enumerate(game.owner) if o is Player.EVEN)
        )
        self.odds = self._pin(
            self._backend.from_ids(v for v, o in enumerate(game.owner) if o is Player.ODD)
        )
        self.empty = self._pin(self._backend.empty())
        c = game.priority_count
        self.priority_sets = tuple(
            self._pin(self._backend.from_ids(game.priority_class(i))) for i in range(c)
        )

    # -- lifecycle -----------------------------------------------------------

    def _pin(self, payload) -> VertexSet:
        return self._track(VertexSet(self, payload, pinned=True))

    def _track(self, s: VertexSet) -> VertexSet:
        c = self.counters
        c.live_sets += 1
        if c.live_sets > c.peak_live_sets:
            c.peak_live_sets = c.live_sets
        return s

    def _new(self, payload) -> VertexSet:
        return self._track(VertexSet(self, payload))

    def release(self, *sets: VertexSet) -> None:
        c = self.counters
        for s in sets:
            if s.space is not self or s.pinned or not s.alive:
                self._release_error(s)
            s.alive = False
            c.live_sets -= 1

    def _release_error(self, s: VertexSet):
        if s.space is not self:
            raise UniverseMismatch("set belongs to another space")
        if s.pinned:
            raise ValueError("cannot release a pinned base set")
        raise ValueError("double release")

    def _arg(self, s: VertexSet):
        if s.space is not self:
            raise UniverseMismatch("set belongs to another space")
        if not s.alive:
            raise ValueError("operation on a released set")
        return s.payload

    # -- creation ------------------------------------------------------------

    def empty_set(self) -> VertexSet:
        return self._new(self._backend.empty())

    def from_ids(self, ids) -> VertexSet:
        return self._new(self._backend.from_ids(ids))

    def singleton(self, v: int) -> VertexSet:
        return self._new(self._backend.from_ids((v,)))

    def copy(self, s: VertexSet) -> VertexSet:
        if s.space is not self or not s.alive:
            self._arg(s)
        c = self.counters
        out = VertexSet(self, s.payload)
        c.live_sets += 1
        if c.live_sets > c.peak_live_sets:
            c.peak_live_sets = c.live_sets
        return out

    def owned_by(self, player: Player) -> VertexSet:
        return self.evens if player is Player.EVEN else self.odds

    # -- counted operations ----------------------------------------------------
    # The argument checks are folded into one fast test per operand; _arg
    # re-runs them on the slow path purely to raise the precise error.

    def union(self, a: VertexSet, b: VertexSet) -> VertexSet:
        if a.space is not self or not a.alive or b.space is not self or not b.alive:
            self._arg(a)
            self._arg(b)
        c = self.counters
        c.unions += 1
        out = VertexSet(self, self._backend.union(a.payload, b.payload))
        c.live_sets += 1
        if c.live_sets > c.peak_live_sets:
            c.peak_live_sets = c.live_sets
        return out

    def intersect(self, a: VertexSet, b: VertexSet) -> VertexSet:
        if a.space is not self or not a.alive or b.space is not self or not b.alive:
            self._arg(a)
            self._arg(b)
        c = self.counters
        c.intersections += 1
        out = VertexSet(self, self._backend.intersect(a.payload, b.payload))
        c.live_sets += 1
        if c.live_sets > c.peak_live_sets:
            c.peak_live_sets = c.live_sets
        return out

    def difference(self, a: VertexSet, b: VertexSet) -> VertexSet:
        if a.space is not self or not a.alive or b.space is not self or not b.alive:
            self._arg(a)
            self._arg(b)
        c = self.counters
        c.differences += 1
        out = VertexSet(self, self._backend.difference(a.payload, b.payload))
        c.live_sets += 1
        if c.live_sets > c.peak_live_sets:
            c.peak_live_sets = c.live_sets
        return out

    def is_subset(self, a: VertexSet, b: VertexSet) -> bool:
        if a.space is not self or not a.alive or b.space is not self or not b.alive:
            self._arg(a)
            self._arg(b)
        self.counters.containment_tests += 1
        return self._backend.is_subset(a.payload, b.payload)

    def equals(self, a: VertexSet, b: VertexSet) -> bool:
        if a.space is not self or not a.alive or b.space is not self or not b.alive:
            self._arg(a)
            self._arg(b)
        self.counters.equality_tests += 1
        return self._backend.equals(a.payload, b.payload)

    def is_empty(self, s: VertexSet) -> bool:
        return self.equals(s, self.empty)

    def pre(self, b: VertexSet, within: VertexSet | None = None) -> VertexSet:
        if b.space is not self or not b.alive:
            self._arg(b)
        w = self._arg(within) if within is not None else self._backend.full()
        c = self.counters
        c.pre_ops += 1
        out = VertexSet(self, self._backend.pre(b.payload, w))
        c.live_sets += 1
        if c.live_sets > c.peak_live_sets:
            c.peak_live_sets = c.live_sets
        return out

    def cpre(self, player: Player, b: VertexSet, within: VertexSet | None = None) -> VertexSet:
        if b.space is not self or not b.alive:
            self._arg(b)
        w = self._arg(within) if within is not None else self._backend.full()
        c = self.counters
        c.cpre_ops += 1
        out = VertexSet(self, self._backend.cpre(player is Player.EVEN, b.payload, w))
        c.live_sets += 1
        if c.live_sets > c.peak_live_sets:
            c.peak_live_sets = c.live_sets
        return out

    # -- uncounted helpers for debug checks ------------------------------------

    def raw_ids(self, s: VertexSet) -> tuple[int, ...]:
        return self._backend.ids(self._arg(s))
