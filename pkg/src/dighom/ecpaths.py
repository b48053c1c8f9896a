"""Eventually constant paths: finite data for maps from the naturals.

An eventually constant (EC) path is stored canonically as a prefix that never
ends with the tail value plus the tail itself, so the minimal constancy index
is the prefix length and equality is structural.  EC homotopy with stages of
bounded constancy index is reachability among fixed-length padded paths,
which reuses the loop-space search machinery.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .lattice import DigitalImage, Point
from .paths import (
    FinitePath,
    PathHomotopy,
    constant_path,
    cycle_move_chain,
    is_trivial_extension,
    product,
)
from .search import SearchProblem, run_search


class EcPath:
    """A continuous map from the naturals that is constant beyond some index."""

    __slots__ = ("image", "prefix", "tail")

    def __init__(self, image: DigitalImage, prefix: Iterable[Iterable[int]], tail: Iterable[int]):
        tail_pt = tuple(tail)
        vals = [tuple(p) for p in prefix]
        while vals and vals[-1] == tail_pt:
            vals.pop()
        image.index_of(tail_pt)
        nbr = image.neighbor_indices
        chain = [image.index_of(v) for v in vals] + [image.index_of(tail_pt)]
        for a, b in zip(chain, chain[1:]):
            if a != b and b not in nbr[a]:
                raise ValueError(f"values {image.points[a]} and {image.points[b]} are not adjacent")
        self.image = image
        self.prefix = tuple(vals)
        self.tail = tail_pt

    @property
    def n(self) -> int:
        """The minimal constancy index."""
        return len(self.prefix)

    def value(self, k: int) -> Point:
        if k < 0:
            raise ValueError("indices start at 0")
        return self.prefix[k] if k < len(self.prefix) else self.tail

    @property
    def start(self) -> Point:
        return self.prefix[0] if self.prefix else self.tail

    @property
    def is_loop(self) -> bool:
        return self.start == self.tail

    @property
    def basepoint(self) -> Point:
        if not self.is_loop:
            raise ValueError("not a loop")
        return self.tail

    def padded(self, length: int) -> tuple[Point, ...]:
        if length < self.n:
            raise ValueError(f"cannot pad to {length}: constancy index is {self.n}")
        return tuple(self.value(k) for k in range(length + 1))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EcPath):
            return NotImplemented
        return self.image == other.image and self.prefix == other.prefix and self.tail == other.tail

    def __hash__(self) -> int:
        return hash((self.image, self.prefix, self.tail))

    def __repr__(self) -> str:
        return f"EcPath(prefix={self.prefix}, tail={self.tail})"


def tail_index(f: EcPath) -> int:
    """The least index past which the path is constant."""
    return f.n


def minus(f: EcPath) -> FinitePath:
    """Restriction to [0, N]: the prefix followed by one tail entry."""
    return FinitePath(f.image, f.prefix + (f.tail,))


def infty(f: FinitePath) -> EcPath:
    """Pad a finite path with its final value, in canonical form."""
    return EcPath(f.image, f.values, f.values[-1])


def ec_star(f0: EcPath, f1: EcPath) -> EcPath:
    """Concatenate EC loops: follow f0 up to its constancy index, then f1."""
    if f0.image != f1.image:
        raise ValueError("loops must live in one image")
    if not f0.is_loop or not f1.is_loop:
        raise ValueError("star is defined for EC loops")
    if f0.basepoint != f1.basepoint:
        raise ValueError("basepoint mismatch")
    return EcPath(f0.image, f0.prefix + f1.prefix, f0.tail)


def ec_inverse(f: EcPath) -> EcPath:
    """The reverse loop: n maps to f(N - n) up to N, then the basepoint."""
    if not f.is_loop:
        raise ValueError("inverse is defined for EC loops")
    vals = tuple(f.value(f.n - k) for k in range(f.n + 1))
    return EcPath(f.image, vals, f.tail)


@dataclass(frozen=True)
class EcHomotopy:
    """Stage-indexed family of EC paths over one image."""

    stages: tuple[EcPath, ...]

    def __post_init__(self) -> None:
        if not self.stages:
            raise ValueError("an EC homotopy needs at least one stage")
        img = self.stages[0].image
        if any(s.image != img for s in self.stages):
            raise ValueError("stages must share one image")

    @property
    def from_path(self) -> EcPath:
        return self.stages[0]

    @property
    def to_path(self) -> EcPath:
        return self.stages[-1]

    @property
    def steps(self) -> int:
        return len(self.stages) - 1

    def reversed(self) -> "EcHomotopy":
        return EcHomotopy(tuple(reversed(self.stages)))

    def concat(self, other: "EcHomotopy") -> "EcHomotopy":
        if self.to_path != other.from_path:
            raise ValueError("homotopies do not meet")
        return EcHomotopy(self.stages + other.stages[1:])


def first_pointwise_break(a: EcPath, b: EcPath) -> int | None:
    """Least index where two EC paths are neither equal nor adjacent."""
    nbr = a.image.neighbor_indices
    for k in range(max(a.n, b.n) + 1):
        x, y = a.image.index_of(a.value(k)), b.image.index_of(b.value(k))
        if x != y and y not in nbr[x]:
            return k
    return None


def is_ec_homotopy(H: EcHomotopy | Sequence[EcPath], endpoints_fixed: bool = False) -> bool:
    """Stagewise adjacency at every index, plus fixed endpoints when asked.

    The check up to the larger constancy index is exhaustive: beyond it both
    stages sit at their tails, which the last compared index already pairs.
    """
    stages = H.stages if isinstance(H, EcHomotopy) else tuple(H)
    if not stages:
        return False
    img = stages[0].image
    if any(s.image != img for s in stages):
        return False
    for a, b in zip(stages, stages[1:]):
        if first_pointwise_break(a, b) is not None:
            return False
    if endpoints_fixed:
        s0 = stages[0]
        if any(s.value(0) != s0.value(0) or s.tail != s0.tail for s in stages):
            return False
    return True


@dataclass
class EcReachResult:
    """Three-valued bounded verdict for EC homotopy."""

    kind: str  # "yes" | "no-within-bound" | "exact-no"
    witness: EcHomotopy | None
    visited_count: int
    bound: int
    membership: object | None = None  # contains() over padded index tuples, when saturated
    bound_attained: bool = False

    @property
    def yes(self) -> bool:
        return self.kind == "yes"


def ec_homotopic(
    f: EcPath,
    g: EcPath,
    endpoints_fixed: bool,
    max_prefix: int,
    *,
    max_nodes: int | None = None,
    backend: str | None = None,
) -> EcReachResult:
    """Search for an EC homotopy whose stages all have constancy index <= bound.

    "exact-no" is reported when the saturated reachable set never attains the
    bound, and always for the unfixed relation, where truncating every stage
    at the bound projects any homotopy into the searched space.
    """
    if f.image != g.image:
        raise ValueError("paths must live in one image")
    B = max_prefix
    if B < max(f.n, g.n):
        raise ValueError(f"bound {B} is smaller than a constancy index ({f.n}, {g.n})")
    if endpoints_fixed and (f.value(0) != g.value(0) or f.tail != g.tail):
        raise ValueError("endpoints-fixed search needs matching endpoints")
    if f == g:
        return EcReachResult("yes", EcHomotopy((f,)), 1, B)

    image = f.image
    start = tuple(image.index_of(v) for v in f.padded(B))
    goal = tuple(image.index_of(v) for v in g.padded(B))
    pins = [-1] * (B + 1)
    if endpoints_fixed:
        pins[0] = start[0]
        pins[B] = start[B]

    def to_ec(state: tuple[int, ...]) -> EcPath:
        pts = tuple(image.points[i] for i in state)
        return EcPath(image, pts, pts[-1])

    single = image.simple_cycle_order is not None and len(image) >= 5
    if single:
        chain = cycle_move_chain(image, start, goal, pins)
        if chain is not None:
            return EcReachResult(
                "yes", EcHomotopy(tuple(to_ec(c) for c in chain)), len(chain), B
            )

    problem = SearchProblem(
        n_slots=B + 1,
        n_points=len(image),
        neighbors=image.neighbor_indices,
        adjacent_slots=tuple((t, t + 1) for t in range(B)),
        pinned=tuple(pins),
    )
    dist = image.distance_matrix
    big = 4 * len(image)
    heur = [
        [dist[p][goal[slot]] if dist[p][goal[slot]] >= 0 else big for p in range(len(image))]
        for slot in range(B + 1)
    ]
    out = run_search(
        problem,
        [start],
        [goal],
        mode="best",
        heuristic_costs=heur,
        single_moves=single,
        max_nodes=max_nodes,
        watch_pair=(B - 1, B) if B >= 1 else None,
        backend=backend,
    )
    if out.found is not None:
        assert out.witness is not None
        return EcReachResult(
            "yes", EcHomotopy(tuple(to_ec(s) for s in out.witness)), out.visited_count, B
        )
    kind = "exact-no" if out.saturated and (not endpoints_fixed or not out.bound_attained) else "no-within-bound"
    return EcReachResult(
        kind, None, out.visited_count, B,
        membership=out.contains if out.saturated else None,
        bound_attained=out.bound_attained,
    )


def ec_star_stagewise(stages: Sequence[EcPath], g: EcPath) -> list[EcPath]:
    """Star every stage with g, with no padding; may fail to be a homotopy."""
    return [ec_star(h, g) for h in stages]


def ec_star_with_padding(stages: EcHomotopy | Sequence[EcPath], g: EcPath) -> EcHomotopy:
    """Star a homotopy with a fixed right factor, padded to keep continuity.

    Each stage pauses at the basepoint until the longest stage has passed,
    so the g-part starts at one common index across stages.
    """
    seq = stages.stages if isinstance(stages, EcHomotopy) else tuple(stages)
    if not seq:
        raise ValueError("need at least one stage")
    if not g.is_loop or any(not s.is_loop for s in seq):
        raise ValueError("star is defined for EC loops")
    base = seq[0].basepoint
    if g.basepoint != base or any(s.basepoint != base for s in seq):
        raise ValueError("basepoint mismatch")
    M = max(s.n for s in seq)
    out = []
    for s in seq:
        fin = minus(s)
        if M > s.n:
            fin = product(fin, constant_path(s.image, base, M - s.n))
        fin = product(fin, minus(g))
        out.append(infty(fin))
    H = EcHomotopy(tuple(out))
    if not is_ec_homotopy(H, endpoints_fixed=True):
        raise RuntimeError("padded star failed to produce an EC homotopy")
    return H


def lift_path_homotopy(H: PathHomotopy | Sequence[FinitePath]) -> EcHomotopy:
    """Pad every stage of a finite homotopy with its final value."""
    stages = H.stages if isinstance(H, PathHomotopy) else tuple(H)
    return EcHomotopy(tuple(infty(s) for s in stages))


def restrict_ec_homotopy(H: EcHomotopy) -> PathHomotopy:
    """Truncate every stage at the largest constancy index of the family."""
    M = max(s.n for s in H.stages)
    return PathHomotopy(
        tuple(FinitePath(s.image, tuple(s.value(k) for k in range(M + 1))) for s in H.stages)
    )


def extension_absorption_homotopy(f: FinitePath, extension: FinitePath) -> EcHomotopy:
    """Endpoint-fixed EC homotopy from a loop onto a trivial extension of it.

    Materialises the extension's pauses one entry at a time; each step
    duplicates one value, which is a valid one-step move after padding.
    """
    if not is_trivial_extension(extension, f):
        raise ValueError("second path is not a trivial extension of the first")
    a, b = extension.values, f.values
    keep: list[bool] = [True]
    i = 0
    for t in range(1, len(a)):
        if i + 1 < len(b) and a[t] == b[i + 1]:
            i += 1
            keep.append(True)
        else:
            keep.append(False)
    pauses = [t for t, k in enumerate(keep) if not k]
    stages = []
    for j in range(len(pauses) + 1):
        chosen = set(pauses[:j])
        vals = tuple(v for t, v in enumerate(a) if keep[t] or t in chosen)
        stages.append(infty(FinitePath(f.image, vals)))
    return EcHomotopy(tuple(stages))
