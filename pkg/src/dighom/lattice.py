"""Integer-lattice points, c_u adjacency, and finite digital images.

A digital image is a finite set of points of Z^n together with an adjacency
parameter u: two distinct points are adjacent when every coordinate differs
by at most 1 and between 1 and u coordinates differ by exactly 1.  Everything
downstream (maps, paths, homotopies) is built on these values.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

Point = tuple[int, ...]

_I64_MIN = -(2**63)
_I64_MAX = 2**63 - 1


def _as_point(p: Iterable[int]) -> Point:
    pt = tuple(int(c) for c in p)
    if not pt:
        raise ValueError("points must have dimension >= 1")
    for c in pt:
        if not _I64_MIN <= c <= _I64_MAX:
            raise ValueError(f"coordinate {c} outside the 64-bit signed range")
    return pt


@dataclass(frozen=True)
class AdjacencySpec:
    """The parameter u of the c_u relation: how many coordinates may step."""

    u: int

    def __post_init__(self) -> None:
        if self.u < 1:
            raise ValueError(f"adjacency parameter must be >= 1, got {self.u}")


def cu_adjacent(p: Iterable[int], q: Iterable[int], u: int | AdjacencySpec) -> bool:
    """Decide c_u adjacency of two lattice points of equal dimension."""
    if isinstance(u, AdjacencySpec):
        u = u.u
    pp, qq = _as_point(p), _as_point(q)
    if len(pp) != len(qq):
        raise ValueError(f"dimension mismatch: {len(pp)} vs {len(qq)}")
    if not 1 <= u <= len(pp):
        raise ValueError(f"adjacency parameter {u} outside 1..{len(pp)}")
    changed = 0
    for a, b in zip(pp, qq):
        d = a - b
        if d == 0:
            continue
        if d not in (1, -1):
            return False
        changed += 1
    return 1 <= changed <= u


class DigitalImage:
    """A finite set of distinct lattice points under a c_u adjacency.

    Points are kept in lexicographic order; that order fixes the point
    indices used by maps, file formats, and every search, so results are
    reproducible.  Instances are immutable values.
    """

    def __init__(self, points: Iterable[Iterable[int]], u: int, dim: int | None = None):
        pts = sorted(_as_point(p) for p in points)
        if pts:
            n = len(pts[0])
            if any(len(p) != n for p in pts):
                raise ValueError("all points must share one dimension")
            if dim is not None and dim != n:
                raise ValueError(f"declared dimension {dim} != point dimension {n}")
        else:
            if dim is None:
                raise ValueError("empty image needs an explicit dimension")
            n = dim
        if n < 1:
            raise ValueError("dimension must be >= 1")
        for a, b in zip(pts, pts[1:]):
            if a == b:
                raise ValueError(f"duplicate point {a}")
        if not 1 <= u <= n:
            raise ValueError(f"adjacency parameter {u} outside 1..{n}")
        self.points: tuple[Point, ...] = tuple(pts)
        self.dim = n
        self.adjacency = AdjacencySpec(u)
        self._index = {p: i for i, p in enumerate(self.points)}

    @property
    def u(self) -> int:
        return self.adjacency.u

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[Point]:
        return iter(self.points)

    def __contains__(self, p: object) -> bool:
        return p in self._index

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DigitalImage):
            return NotImplemented
        return self.points == other.points and self.dim == other.dim and self.u == other.u

    def __hash__(self) -> int:
        return hash((self.points, self.dim, self.u))

    def __repr__(self) -> str:
        return f"DigitalImage({len(self.points)} points, dim={self.dim}, u={self.u})"

    def index_of(self, p: Iterable[int]) -> int:
        pt = _as_point(p)
        try:
            return self._index[pt]
        except KeyError:
            raise ValueError(f"point {pt} not in image") from None

    def point(self, i: int) -> Point:
        return self.points[i]

    @cached_property
    def neighbor_indices(self) -> tuple[tuple[int, ...], ...]:
        """Per point index, the sorted indices of its adjacent points."""
        u = self.u
        out: list[tuple[int, ...]] = []
        for p in self.points:
            out.append(tuple(j for j, q in enumerate(self.points) if p != q and cu_adjacent(p, q, u)))
        return tuple(out)

    @cached_property
    def distance_matrix(self) -> tuple[tuple[int, ...], ...]:
        """All-pairs hop distances under the adjacency graph; -1 when disconnected."""
        n = len(self.points)
        rows = []
        for s in range(n):
            dist = [-1] * n
            dist[s] = 0
            dq = deque([s])
            while dq:
                v = dq.popleft()
                for w in self.neighbor_indices[v]:
                    if dist[w] < 0:
                        dist[w] = dist[v] + 1
                        dq.append(w)
            rows.append(tuple(dist))
        return tuple(rows)

    @cached_property
    def simple_cycle_order(self) -> tuple[int, ...] | None:
        """Indices in cyclic order when the image is a single simple closed curve.

        Orientation is fixed: start at the least point, step to its least
        neighbor.  None when some point does not have exactly two neighbors
        or the image is not one cycle.
        """
        n = len(self.points)
        if n < 3:
            return None
        if any(len(nb) != 2 for nb in self.neighbor_indices):
            return None
        order = [0, min(self.neighbor_indices[0])]
        while True:
            prev, cur = order[-2], order[-1]
            a, b = self.neighbor_indices[cur]
            nxt = b if a == prev else a
            if nxt == 0:
                break
            order.append(nxt)
            if len(order) > n:
                return None
        return tuple(order) if len(order) == n else None

    def is_connected(self) -> bool:
        return len(self.points) <= 1 or len(components(self)) == 1


def neighbors(image: DigitalImage, p: Iterable[int]) -> list[Point]:
    """All points of the image adjacent to p, in canonical order."""
    i = image.index_of(p)
    return [image.points[j] for j in image.neighbor_indices[i]]


def components(image: DigitalImage) -> tuple[tuple[Point, ...], ...]:
    """Partition into connected components, numbered by least canonical point."""
    n = len(image.points)
    seen = [False] * n
    parts: list[tuple[Point, ...]] = []
    for s in range(n):
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        dq = deque([s])
        while dq:
            v = dq.popleft()
            for w in image.neighbor_indices[v]:
                if not seen[w]:
                    seen[w] = True
                    comp.append(w)
                    dq.append(w)
        parts.append(tuple(image.points[i] for i in sorted(comp)))
    return tuple(parts)


@dataclass(frozen=True)
class DigitalInterval:
    """The integer interval [a, b] with 2-adjacency."""

    a: int
    b: int

    def __post_init__(self) -> None:
        if self.a > self.b:
            raise ValueError(f"need a <= b, got [{self.a}, {self.b}]")

    def __len__(self) -> int:
        return self.b - self.a + 1

    def __iter__(self) -> Iterator[int]:
        return iter(range(self.a, self.b + 1))

    def to_image(self) -> DigitalImage:
        return DigitalImage(((z,) for z in self), u=1)


def digital_interval(a: int, b: int) -> DigitalImage:
    """The digital interval [a, b] as a 1-dimensional image."""
    return DigitalInterval(a, b).to_image()
