"""Digitally continuous maps, composition, and homotopy as reachability.

A homotopy with m steps factors into m one-step homotopies, so deciding
whether two maps are homotopic is reachability in the graph whose nodes are
continuous maps and whose edges join maps that are pointwise equal-or-adjacent.
The map space of a finite image is finite, so the search answers are exact.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .lattice import DigitalImage, Point
from .search import SearchProblem, run_search, state_valid, successors


@dataclass(frozen=True)
class DigitalMap:
    """A total function between images, stored as an index table."""

    source: DigitalImage
    target: DigitalImage
    table: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.table) != len(self.source):
            raise ValueError("table must assign a value to every source point")
        n = len(self.target)
        for v in self.table:
            if not 0 <= v < n:
                raise ValueError(f"table entry {v} outside the target index range")

    @classmethod
    def identity(cls, image: DigitalImage) -> "DigitalMap":
        return cls(image, image, tuple(range(len(image))))

    @classmethod
    def constant(cls, source: DigitalImage, target: DigitalImage, value: Point) -> "DigitalMap":
        j = target.index_of(value)
        return cls(source, target, tuple([j] * len(source)))

    @classmethod
    def from_points(
        cls, source: DigitalImage, target: DigitalImage, assignment: dict[Point, Point]
    ) -> "DigitalMap":
        return cls(source, target, tuple(target.index_of(assignment[p]) for p in source.points))

    def __call__(self, p: Iterable[int]) -> Point:
        return self.target.points[self.table[self.source.index_of(p)]]

    def as_points(self) -> dict[Point, Point]:
        return {p: self.target.points[self.table[i]] for i, p in enumerate(self.source.points)}


def is_continuous(f: DigitalMap) -> bool:
    """Adjacent source points must land on equal or adjacent target points."""
    nbr = f.target.neighbor_indices
    for i, nbrs in enumerate(f.source.neighbor_indices):
        a = f.table[i]
        for j in nbrs:
            if j < i:
                continue
            b = f.table[j]
            if a != b and b not in nbr[a]:
                return False
    return True


def compose(g: DigitalMap, f: DigitalMap) -> DigitalMap:
    """g after f."""
    if f.target != g.source:
        raise ValueError("image mismatch: target of f must be source of g")
    return DigitalMap(f.source, g.target, tuple(g.table[v] for v in f.table))


@dataclass(frozen=True)
class StageConstraint:
    """What every stage of a homotopy must preserve."""

    kind: str = "none"
    points: tuple[Point, ...] = ()

    @classmethod
    def none(cls) -> "StageConstraint":
        return cls()

    @classmethod
    def pointed(cls, basepoint: Iterable[int]) -> "StageConstraint":
        return cls("pointed", (tuple(basepoint),))

    @classmethod
    def fixes(cls, points: Iterable[Iterable[int]]) -> "StageConstraint":
        return cls("fixes-set", tuple(sorted(tuple(p) for p in points)))


@dataclass(frozen=True)
class Homotopy:
    """A stage-indexed family of maps; validity is checked, never assumed."""

    stages: tuple[DigitalMap, ...]

    def __post_init__(self) -> None:
        if not self.stages:
            raise ValueError("a homotopy needs at least one stage")
        s0 = self.stages[0]
        for s in self.stages:
            if s.source != s0.source or s.target != s0.target:
                raise ValueError("all stages must share source and target")

    @property
    def from_map(self) -> DigitalMap:
        return self.stages[0]

    @property
    def to_map(self) -> DigitalMap:
        return self.stages[-1]

    @property
    def steps(self) -> int:
        return len(self.stages) - 1

    def reversed(self) -> "Homotopy":
        return Homotopy(tuple(reversed(self.stages)))


def _pointwise_close(target: DigitalImage, a: tuple[int, ...], b: tuple[int, ...]) -> bool:
    nbr = target.neighbor_indices
    return all(x == y or y in nbr[x] for x, y in zip(a, b))


def is_homotopy(F: Homotopy, constraint: StageConstraint = StageConstraint.none()) -> bool:
    """All stages continuous, tracks continuous, and the constraint held."""
    target = F.from_map.target
    if not all(is_continuous(s) for s in F.stages):
        return False
    for a, b in zip(F.stages, F.stages[1:]):
        if not _pointwise_close(target, a.table, b.table):
            return False
    if constraint.kind != "none":
        src = F.from_map.source
        for p in constraint.points:
            i = src.index_of(p)
            want = F.from_map.table[i]
            if any(s.table[i] != want for s in F.stages):
                return False
    return True


def one_step(f: DigitalMap, g: DigitalMap) -> bool:
    """Homotopic in at most one step: both continuous and pointwise close."""
    if f.source != g.source or f.target != g.target:
        raise ValueError("maps must share source and target")
    return (
        is_continuous(f)
        and is_continuous(g)
        and _pointwise_close(f.target, f.table, g.table)
    )


def _constraint_pins(source: DigitalImage, f: DigitalMap, constraint: StageConstraint) -> tuple[int, ...]:
    pins = [-1] * len(source)
    for p in constraint.points:
        i = source.index_of(p)
        pins[i] = f.table[i]
    return tuple(pins)


def _map_problem(source: DigitalImage, target: DigitalImage, pins: tuple[int, ...]) -> SearchProblem:
    edges = []
    for i, nbrs in enumerate(source.neighbor_indices):
        for j in nbrs:
            if i < j:
                edges.append((i, j))
    return SearchProblem(
        n_slots=len(source),
        n_points=len(target),
        neighbors=target.neighbor_indices,
        adjacent_slots=tuple(edges),
        pinned=pins,
    )


def homotopic(
    f: DigitalMap,
    g: DigitalMap,
    constraint: StageConstraint = StageConstraint.none(),
    *,
    max_frontier: int | None = None,
) -> Homotopy | None:
    """Shortest homotopy between f and g, or None when none exists.

    Among shortest witnesses the lexicographically least one (stage tables
    compared in order) is returned, so repeated runs give identical output.
    """
    if f.source != g.source or f.target != g.target:
        raise ValueError("maps must share source and target")
    if not is_continuous(f) or not is_continuous(g):
        raise ValueError("homotopy search needs continuous endpoints")
    for p in constraint.points:
        i = f.source.index_of(p)
        if f.table[i] != g.table[i]:
            raise ValueError(f"constraint violated: maps disagree at {p}")
    if len(f.source) == 0 or f.table == g.table:
        return Homotopy((f,))

    pins = _constraint_pins(f.source, f, constraint)
    problem = _map_problem(f.source, f.target, pins)
    out = run_search(problem, [f.table], [g.table], mode="bfs", max_nodes=max_frontier)
    if out.found is None:
        return None
    m = len(out.witness) - 1  # type: ignore[arg-type]

    # Reverse distances up to depth m, then walk greedily for the lex-least
    # shortest witness.
    dist: dict[tuple[int, ...], int] = {g.table: 0}
    dq = deque([g.table])
    while dq:
        cur = dq.popleft()
        d = dist[cur]
        if d == m:
            continue
        for nxt in successors(problem, cur):
            if nxt not in dist:
                dist[nxt] = d + 1
                dq.append(nxt)
    stages = [f.table]
    cur = f.table
    for step in range(1, m + 1):
        want = m - step
        best = None
        for nxt in successors(problem, cur):
            if dist.get(nxt) == want and (best is None or nxt < best):
                best = nxt
        assert best is not None
        stages.append(best)
        cur = best
    return Homotopy(tuple(DigitalMap(f.source, f.target, t) for t in stages))


def pointed_neighbors_of_identity(X: DigitalImage, x: Iterable[int]) -> list[DigitalMap]:
    """All continuous h with h(x) = x that are one step from the identity."""
    i = X.index_of(x)
    ident = DigitalMap.identity(X)
    pins = [-1] * len(X)
    pins[i] = i
    problem = _map_problem(X, X, tuple(pins))
    tables = {ident.table}
    tables.update(successors(problem, ident.table))
    return [DigitalMap(X, X, t) for t in sorted(tables)]


@dataclass(frozen=True)
class EquivalenceCertificate:
    """Outcome of a homotopy-equivalence check with its two witnesses."""

    equivalent: bool
    on_source: Homotopy | None
    on_target: Homotopy | None


def verify_homotopy_equivalence(f: DigitalMap, g: DigitalMap) -> EquivalenceCertificate:
    """Check g∘f ≃ id and f∘g ≃ id, returning the witnesses."""
    if f.source != g.target or f.target != g.source:
        raise ValueError("need f: X -> Y and g: Y -> X")
    X, Y = f.source, f.target
    h1 = homotopic(compose(g, f), DigitalMap.identity(X))
    h2 = homotopic(compose(f, g), DigitalMap.identity(Y))
    return EquivalenceCertificate(h1 is not None and h2 is not None, h1, h2)


def enumerate_continuous_tables(
    source: DigitalImage, target: DigitalImage, pins: Sequence[int] | None = None
) -> Iterator[tuple[int, ...]]:
    """All continuous map tables, in lexicographic order."""
    n = len(source)
    if n == 0:
        yield ()
        return
    nbr = target.neighbor_indices
    earlier: list[list[int]] = [[] for _ in range(n)]
    for i, nbrs in enumerate(source.neighbor_indices):
        for j in nbrs:
            if j < i:
                earlier[i].append(j)
    buf = [0] * n

    def extend(i: int) -> Iterator[tuple[int, ...]]:
        if i == n:
            yield tuple(buf)
            return
        cands: Iterable[int]
        if pins is not None and pins[i] >= 0:
            cands = (pins[i],)
        else:
            cands = range(len(target))
        for v in cands:
            if all(buf[j] == v or buf[j] in nbr[v] for j in earlier[i]):
                buf[i] = v
                yield from extend(i + 1)

    yield from extend(0)


def _isomorphic(X: DigitalImage, Y: DigitalImage) -> bool:
    """Adjacency-preserving bijection test by backtracking."""
    if len(X) != len(Y):
        return False
    n = len(X)
    degX = [len(nb) for nb in X.neighbor_indices]
    degY = [len(nb) for nb in Y.neighbor_indices]
    if sorted(degX) != sorted(degY):
        return False
    nbrY = [set(nb) for nb in Y.neighbor_indices]
    assign = [-1] * n
    used = [False] * n

    def extend(i: int) -> bool:
        if i == n:
            return True
        for v in range(n):
            if used[v] or degX[i] != degY[v]:
                continue
            ok = True
            for j in X.neighbor_indices[i]:
                if j < i and assign[j] not in nbrY[v]:
                    ok = False
                    break
            if ok:
                for j in range(i):
                    if j not in X.neighbor_indices[i] and assign[j] in nbrY[v]:
                        ok = False
                        break
            if ok:
                assign[i] = v
                used[v] = True
                if extend(i + 1):
                    return True
                used[v] = False
                assign[i] = -1
        return False

    return extend(0)


def _identity_rigid(Z: DigitalImage) -> bool:
    ident = DigitalMap.identity(Z)
    return all(pointed_neighbors_of_identity(Z, p) == [ident] for p in Z.points)


def no_pointed_equivalence(X: DigitalImage, Y: DigitalImage) -> bool:
    """No choice of basepoints admits a pointed homotopy equivalence.

    When both identity maps are rigid (their pointed one-step neighborhood is
    a singleton for every basepoint), pointed-homotopic-to-identity forces
    equality, so a pointed equivalence would be an isomorphism; otherwise an
    exhaustive search over pointed map pairs decides directly.
    """
    if not X.is_connected() or not Y.is_connected():
        raise ValueError("both images must be connected")
    if _identity_rigid(X) and _identity_rigid(Y):
        if len(X) != len(Y):
            return True
        return not _isomorphic(X, Y)

    onex = DigitalMap.identity(X)
    oney = DigitalMap.identity(Y)
    for x in X.points:
        i = X.index_of(x)
        for y in Y.points:
            j = Y.index_of(y)
            pins_f = [-1] * len(X)
            pins_f[i] = j
            pins_g = [-1] * len(Y)
            pins_g[j] = i
            for tf in enumerate_continuous_tables(X, Y, pins_f):
                f = DigitalMap(X, Y, tf)
                for tg in enumerate_continuous_tables(Y, X, pins_g):
                    g = DigitalMap(Y, X, tg)
                    if homotopic(compose(g, f), onex, StageConstraint.pointed(x)) is None:
                        continue
                    if homotopic(compose(f, g), oney, StageConstraint.pointed(y)) is not None:
                        return False
    return True
