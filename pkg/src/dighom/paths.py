"""Finite paths and loops: products, trivial extensions, tightness, reachability.

A path is a continuous function from a digital interval, stored by its value
sequence.  Endpoint-fixed homotopy between equal-length paths is reachability
under pointwise equal-or-adjacent moves; the searches below run on that space
with optional stage constraints (tight at the basepoint, forbidden patterns).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .lattice import DigitalImage, Point, digital_interval
from .maps import DigitalMap
from .search import SearchProblem, run_search


@dataclass(frozen=True)
class FinitePath:
    """A (2,κ)-continuous sequence of image points indexed by [0, m]."""

    image: DigitalImage
    values: tuple[Point, ...]

    def __post_init__(self) -> None:
        if not self.values:
            raise ValueError("a path has at least one value")
        object.__setattr__(self, "values", tuple(tuple(v) for v in self.values))
        nbr = self.image.neighbor_indices
        idx = [self.image.index_of(v) for v in self.values]
        for a, b in zip(idx, idx[1:]):
            if a != b and b not in nbr[a]:
                raise ValueError(f"values {self.image.points[a]} and {self.image.points[b]} are not adjacent")

    @property
    def length(self) -> int:
        return len(self.values) - 1

    @property
    def start(self) -> Point:
        return self.values[0]

    @property
    def end(self) -> Point:
        return self.values[-1]

    @property
    def is_loop(self) -> bool:
        return self.values[0] == self.values[-1]

    def __call__(self, t: int) -> Point:
        if not 0 <= t <= self.length:
            raise ValueError(f"index {t} outside [0, {self.length}]")
        return self.values[t]

    def __mul__(self, other: "FinitePath") -> "FinitePath":
        return product(self, other)

    def indices(self) -> tuple[int, ...]:
        return tuple(self.image.index_of(v) for v in self.values)


def constant_path(image: DigitalImage, point: Iterable[int], length: int = 0) -> FinitePath:
    p = tuple(point)
    return FinitePath(image, tuple([p] * (length + 1)))


def path_as_map(f: FinitePath) -> DigitalMap:
    """The same path as a map from the digital interval [0, m]."""
    interval = digital_interval(0, f.length)
    return DigitalMap(interval, f.image, tuple(f.image.index_of(v) for v in f.values))


def reverse(F: FinitePath) -> FinitePath:
    return FinitePath(F.image, tuple(reversed(F.values)))


def product(f: FinitePath, g: FinitePath) -> FinitePath:
    """Follow f, then follow g; g must start where f ends."""
    if f.image != g.image:
        raise ValueError("paths must live in one image")
    if f.end != g.start:
        raise ValueError(f"endpoint mismatch: {f.end} vs {g.start}")
    return FinitePath(f.image, f.values + g.values[1:])


def is_trivial_extension(fp: FinitePath, f: FinitePath) -> bool:
    """Whether fp traverses f with extra pauses inserted.

    Decided by the duplication characterisation: f must be recoverable from
    fp by deleting entries that repeat their predecessor, via a greedy
    two-pointer scan.
    """
    if fp.image != f.image:
        return False
    a, b = fp.values, f.values
    if len(a) < len(b) or a[0] != b[0]:
        return False
    i = 0
    for t in range(1, len(a)):
        if i + 1 < len(b) and a[t] == b[i + 1]:
            i += 1
        elif a[t] != b[i]:
            return False
    return i == len(b) - 1


def enumerate_trivial_extensions(f: FinitePath, target_len: int) -> Iterator[FinitePath]:
    """All distinct trivial extensions of f with the given length, in order."""
    if target_len < f.length:
        raise ValueError("target length below the length of the path")
    extra = target_len - f.length
    m = len(f.values)
    seen: set[tuple[Point, ...]] = set()
    out: list[tuple[Point, ...]] = []

    def spread(i: int, remaining: int, acc: list[Point]) -> None:
        if i == m:
            if remaining == 0:
                vals = tuple(acc)
                if vals not in seen:
                    seen.add(vals)
                    out.append(vals)
            return
        for c in range(remaining + 1):
            spread(i + 1, remaining - c, acc + [f.values[i]] * (c + 1))

    spread(0, extra, [])
    for vals in sorted(out):
        yield FinitePath(f.image, vals)


def is_tab(f: FinitePath, x0: Iterable[int]) -> bool:
    """Tight at the basepoint: the loop never rests at x0 for two steps.

    Constant loops count as tight; without that degenerate case no loop
    could contract to a constant through tight stages.
    """
    p = tuple(x0)
    if not f.is_loop or f.start != p:
        raise ValueError("path must be a loop based at the given point")
    if all(v == p for v in f.values):
        return True
    return all(not (a == p and b == p) for a, b in zip(f.values, f.values[1:]))


@dataclass(frozen=True)
class PathHomotopy:
    """Stage-indexed family of equal-length paths in one image."""

    stages: tuple[FinitePath, ...]

    def __post_init__(self) -> None:
        if not self.stages:
            raise ValueError("a path homotopy needs at least one stage")
        s0 = self.stages[0]
        for s in self.stages:
            if s.image != s0.image or s.length != s0.length:
                raise ValueError("stages must share image and length")

    @property
    def from_path(self) -> FinitePath:
        return self.stages[0]

    @property
    def to_path(self) -> FinitePath:
        return self.stages[-1]

    @property
    def steps(self) -> int:
        return len(self.stages) - 1

    def reversed(self) -> "PathHomotopy":
        return PathHomotopy(tuple(reversed(self.stages)))


@dataclass(frozen=True)
class ForbiddenPair:
    """Stages taking the given point at both slots are forbidden."""

    slot_a: int
    slot_b: int
    point: Point


def is_path_homotopy(
    H: PathHomotopy | Sequence[FinitePath],
    *,
    endpoints_fixed: bool = False,
    loop_preserving: bool = False,
    tab_basepoint: Iterable[int] | None = None,
    forbidden: Iterable[ForbiddenPair] = (),
) -> bool:
    """Stagewise validity of a path homotopy plus the requested flags."""
    stages = H.stages if isinstance(H, PathHomotopy) else tuple(H)
    if not stages:
        return False
    s0 = stages[0]
    if any(s.image != s0.image or s.length != s0.length for s in stages):
        return False
    nbr = s0.image.neighbor_indices
    for a, b in zip(stages, stages[1:]):
        ia, ib = a.indices(), b.indices()
        if any(x != y and y not in nbr[x] for x, y in zip(ia, ib)):
            return False
    if endpoints_fixed:
        if any(s.start != s0.start or s.end != s0.end for s in stages):
            return False
    if loop_preserving and any(not s.is_loop for s in stages):
        return False
    if tab_basepoint is not None:
        p = tuple(tab_basepoint)
        if any(not is_tab(s, p) for s in stages):
            return False
    for fp in forbidden:
        for s in stages:
            if s.values[fp.slot_a] == fp.point and s.values[fp.slot_b] == fp.point:
                return False
    return True


@dataclass
class PathReachability:
    """Result of a loop-space search; exact on the explored finite space."""

    reached: bool | None
    found: FinitePath | None
    witness: PathHomotopy | None
    visited_count: int
    saturated: bool
    start_excluded: bool
    _contains: object

    def contains(self, path: FinitePath) -> bool:
        return self._contains(path.indices())  # type: ignore[operator]


def cycle_move_chain(
    image: DigitalImage, start: tuple[int, ...], target: tuple[int, ...], pins: Sequence[int]
) -> list[tuple[int, ...]] | None:
    """Single-move chain between paths on a simple closed curve, or None.

    Lifts both paths to the integer line along the cycle; when the lifts
    agree at every pinned slot, repeatedly moving the worst slot toward the
    target lift yields a valid chain of one-step moves.  Needs length >= 5
    so that lifts of adjacent points are unambiguous.
    """
    order = image.simple_cycle_order
    if order is None or len(order) < 5:
        return None
    L = len(order)
    pos = {p: i for i, p in enumerate(order)}

    def lift(seq: tuple[int, ...], anchor: int) -> list[int] | None:
        out = [anchor]
        for a, b in zip(seq, seq[1:]):
            d = (pos[b] - pos[a]) % L
            if d == 0:
                step = 0
            elif d == 1:
                step = 1
            elif d == L - 1:
                step = -1
            else:
                return None
            out.append(out[-1] + step)
        return out

    s = lift(start, pos[start[0]])
    if s is None:
        return None
    anchor = s[0] + ((pos[target[0]] - pos[start[0]] + L // 2) % L) - L // 2
    g = lift(target, anchor)
    if g is None:
        return None
    for i, pin in enumerate(pins):
        if pin >= 0 and s[i] != g[i]:
            return None

    def to_state(levels: list[int]) -> tuple[int, ...]:
        return tuple(order[v % L] for v in levels)

    chain = [to_state(s)]
    cur = list(s)

    def settle(sign: int) -> None:
        # sign=+1 lowers slots above the target lift, sign=-1 raises.
        while True:
            best = -1
            for t in range(len(cur)):
                if sign * (cur[t] - g[t]) <= 0:
                    continue
                lo_ok = t == 0 or abs(cur[t - 1] - (cur[t] - sign)) <= 1
                hi_ok = t == len(cur) - 1 or abs(cur[t + 1] - (cur[t] - sign)) <= 1
                if not (lo_ok and hi_ok):
                    continue
                if best < 0:
                    best = t
                    continue
                da, db = sign * (cur[t] - g[t]), sign * (cur[best] - g[best])
                if (da, sign * cur[t]) > (db, sign * cur[best]):
                    best = t
            if best < 0:
                return
            cur[best] -= sign
            chain.append(to_state(cur))

    settle(1)
    settle(-1)
    if cur != g:
        return None
    return chain


def loops_reachable(
    start: FinitePath | Sequence[FinitePath],
    *,
    endpoints_fixed: bool = False,
    loop_preserving: bool = False,
    tab_basepoint: Iterable[int] | None = None,
    forbidden: Iterable[ForbiddenPair] | None = None,
    forbidden_fn=None,
    targets: FinitePath | Sequence[FinitePath] | None = None,
    max_nodes: int | None = None,
    backend: str | None = None,
) -> PathReachability:
    """Reachability among fixed-length stages under the given constraints.

    Exact: with no target the reachable set is saturated; with targets the
    search stops at the first one found, and a miss still means saturation.
    Starts that are themselves forbidden are excluded (and reported), since
    no valid stage sequence may contain them.
    """
    starts = [start] if isinstance(start, FinitePath) else list(start)
    if not starts:
        raise ValueError("need at least one start path")
    image = starts[0].image
    k = starts[0].length
    for s in starts:
        if s.image != image or s.length != k:
            raise ValueError("all start paths must share image and length")

    target_list: list[FinitePath] | None = None
    if targets is not None:
        target_list = [targets] if isinstance(targets, FinitePath) else list(targets)
        for t in target_list:
            if t.image != image or t.length != k:
                raise ValueError("targets must share image and length with the starts")

    pins = [-1] * (k + 1)
    if endpoints_fixed:
        pins[0] = image.index_of(starts[0].start)
        pins[k] = image.index_of(starts[0].end)
        for s in starts:
            if s.start != starts[0].start or s.end != starts[0].end:
                raise ValueError("endpoints-fixed search needs a common start and end")

    equal_slots: tuple[tuple[int, int], ...] = ()
    if loop_preserving and not endpoints_fixed:
        equal_slots = ((0, k),)
        for s in starts:
            if not s.is_loop:
                raise ValueError("loop-preserving search needs loops")

    forb_pairs: list[tuple[int, int, int]] = []
    exempt = None
    if tab_basepoint is not None:
        p = tuple(tab_basepoint)
        for s in starts:
            if not is_tab(s, p):
                raise ValueError("start loop is not tight at the basepoint")
        pi = image.index_of(p)
        forb_pairs.extend((t, t + 1, pi) for t in range(k))
        exempt = tuple([pi] * (k + 1))
    for fp in forbidden or ():
        forb_pairs.append((fp.slot_a, fp.slot_b, image.index_of(fp.point)))

    problem = SearchProblem(
        n_slots=k + 1,
        n_points=len(image),
        neighbors=image.neighbor_indices,
        adjacent_slots=tuple((t, t + 1) for t in range(k)),
        equal_slots=equal_slots,
        pinned=tuple(pins),
        forbidden_pairs=tuple(forb_pairs),
        forbidden_fn=forbidden_fn,
        exempt_state=exempt,
    )

    start_states = [s.indices() for s in starts]
    target_states = [t.indices() for t in target_list] if target_list is not None else None

    single = (
        image.simple_cycle_order is not None
        and len(image) >= 5
        and not forb_pairs
        and forbidden_fn is None
        and not equal_slots
    )

    def to_path(state: tuple[int, ...]) -> FinitePath:
        return FinitePath(image, tuple(image.points[i] for i in state))

    if single and target_states is not None and len(start_states) == 1 and len(target_states) == 1:
        chain = cycle_move_chain(image, start_states[0], target_states[0], pins)
        if chain is not None:
            stages = PathHomotopy(tuple(to_path(c) for c in chain))
            return PathReachability(
                reached=True,
                found=to_path(target_states[0]),
                witness=stages,
                visited_count=len(chain),
                saturated=False,
                start_excluded=False,
                _contains=frozenset(chain).__contains__,
            )

    mode = "bfs"
    heur = None
    if target_states is not None:
        mode = "best"
        dist = image.distance_matrix
        big = 4 * len(image)
        heur = []
        for slot in range(k + 1):
            row = []
            for pt in range(len(image)):
                best = min(
                    (dist[pt][t[slot]] for t in target_states if dist[pt][t[slot]] >= 0),
                    default=big,
                )
                row.append(best)
            heur.append(row)

    out = run_search(
        problem,
        start_states,
        target_states,
        mode=mode,
        heuristic_costs=heur,
        single_moves=single,
        max_nodes=max_nodes,
        backend=backend,
    )
    witness = None
    if out.witness is not None:
        witness = PathHomotopy(tuple(to_path(s) for s in out.witness))
    return PathReachability(
        reached=(out.found is not None) if target_states is not None else None,
        found=to_path(out.found) if out.found is not None else None,
        witness=witness,
        visited_count=out.visited_count,
        saturated=out.saturated,
        start_excluded=out.excluded_starts > 0,
        _contains=out.contains,
    )


@dataclass(frozen=True)
class TabResult:
    """Bounded verdict for tightness-preserving equivalence."""

    kind: str  # "yes" | "no-within-bound" | "bound-exhausted"
    extension_from: FinitePath | None = None
    extension_to: FinitePath | None = None
    homotopy: PathHomotopy | None = None
    lengths_checked: tuple[int, ...] = ()


def _tab_extensions(f: FinitePath, x0: Point, length: int) -> list[FinitePath]:
    return [e for e in enumerate_trivial_extensions(f, length) if is_tab(e, x0)]


def tab_equivalent(
    f: FinitePath,
    g: FinitePath,
    x0: Iterable[int],
    max_len: int,
    *,
    max_nodes: int | None = None,
) -> TabResult:
    """Search for tight trivial extensions joined by an all-tight homotopy.

    Monotone in max_len; "no-within-bound" means every extension length up
    to the bound was searched exactly.
    """
    p = tuple(x0)
    if not is_tab(f, p) or not is_tab(g, p):
        raise ValueError("inputs must be tight loops at the basepoint")
    lengths = [L for L in range(max(f.length, g.length), max_len + 1)]
    if not lengths:
        return TabResult("bound-exhausted", lengths_checked=())
    checked: list[int] = []
    for L in lengths:
        from_exts = _tab_extensions(f, p, L)
        to_exts = _tab_extensions(g, p, L)
        if not from_exts or not to_exts:
            checked.append(L)
            continue
        res = loops_reachable(
            from_exts,
            endpoints_fixed=True,
            tab_basepoint=p,
            targets=to_exts,
            max_nodes=max_nodes,
        )
        checked.append(L)
        if res.reached:
            assert res.witness is not None and res.found is not None
            start_stage = res.witness.from_path
            return TabResult(
                "yes",
                extension_from=start_stage,
                extension_to=res.found,
                homotopy=res.witness,
                lengths_checked=tuple(checked),
            )
    return TabResult("no-within-bound", lengths_checked=tuple(checked))


def loop_class_equal_by_extensions(
    f: FinitePath,
    g: FinitePath,
    max_len: int,
    *,
    max_nodes: int | None = None,
) -> TabResult:
    """Loop-class equality decided directly on trivial extensions.

    The cross-check twin of the eventually-constant procedure: for each
    common extension length, search for an endpoint-fixed homotopy between
    some extensions of f and of g.
    """
    if f.image != g.image or not f.is_loop or not g.is_loop or f.start != g.start:
        raise ValueError("inputs must be loops at one basepoint in one image")
    lengths = [L for L in range(max(f.length, g.length), max_len + 1)]
    if not lengths:
        return TabResult("bound-exhausted", lengths_checked=())
    checked: list[int] = []
    for L in lengths:
        from_exts = list(enumerate_trivial_extensions(f, L))
        to_exts = list(enumerate_trivial_extensions(g, L))
        res = loops_reachable(
            from_exts, endpoints_fixed=True, targets=to_exts, max_nodes=max_nodes
        )
        checked.append(L)
        if res.reached:
            assert res.witness is not None and res.found is not None
            return TabResult(
                "yes",
                extension_from=res.witness.from_path,
                extension_to=res.found,
                homotopy=res.witness,
                lengths_checked=tuple(checked),
            )
    return TabResult("no-within-bound", lengths_checked=tuple(checked))


def enumerate_loops(image: DigitalImage, basepoint: Iterable[int], max_len: int) -> Iterator[FinitePath]:
    """All loops at the basepoint of length 0..max_len, in canonical order."""
    p0 = image.index_of(basepoint)
    nbr = image.neighbor_indices
    dist = image.distance_matrix

    def walk(seq: list[int], remaining: int) -> Iterator[tuple[int, ...]]:
        cur = seq[-1]
        if remaining == 0:
            if cur == p0:
                yield tuple(seq)
            return
        for v in sorted((cur, *nbr[cur])):
            if dist[v][p0] < 0 or dist[v][p0] > remaining:
                continue
            seq.append(v)
            yield from walk(seq, remaining - 1)
            seq.pop()

    for L in range(max_len + 1):
        for idx_seq in walk([p0], L):
            yield FinitePath(image, tuple(image.points[i] for i in idx_seq))
