"""Concrete images, maps, loops, and homotopy families for the verifier.

Two image pairs drive most checks: an 11-point ring with a doubled segment
under diagonal adjacency, and a 13-point axis-adjacency counterpart (a
12-cycle with one interior point doubling a corner).  Every fixture is
validated on load; a failing fixture aborts with its name.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from random import Random

from .lattice import DigitalImage, Point, components, neighbors
from .maps import DigitalMap, Homotopy, is_continuous, is_homotopy
from .paths import (
    FinitePath,
    is_path_homotopy,
    is_tab,
    is_trivial_extension,
    product,
    reverse,
)
from .ecpaths import EcPath, ec_star_stagewise, ec_star_with_padding, first_pointwise_break


class FixtureError(ValueError):
    """A fixture failed its validity check on load."""


# The diagonal-adjacency pair: an outer 10-ring plus a center point attached
# to the ring next to the doubled vertex; removing that vertex leaves a
# 10-cycle through the center.
RING_COORDS: tuple[Point, ...] = (
    (2, 0),
    (1, 1),
    (0, 2),
    (-1, 2),
    (-2, 1),
    (-2, 0),
    (-2, -1),
    (-1, -2),
    (0, -2),
    (1, -1),
    (0, 0),
)

# The axis-adjacency pair: the boundary cycle of a 4x4 block plus one
# interior point attached to the two cycle neighbors of the (4,4) corner.
GRID_CYCLE_COORDS: tuple[Point, ...] = (
    (4, 4),
    (3, 4),
    (2, 4),
    (1, 4),
    (1, 3),
    (1, 2),
    (1, 1),
    (2, 1),
    (3, 1),
    (4, 1),
    (4, 2),
    (4, 3),
)
GRID_INNER: Point = (3, 3)


def ring_image() -> DigitalImage:
    return DigitalImage(RING_COORDS, u=2)


def ring_cycle() -> DigitalImage:
    return DigitalImage(RING_COORDS[1:], u=2)


def rv(i: int) -> Point:
    """Ring vertex by its conventional index (0 = doubled outer vertex)."""
    return RING_COORDS[i]


def ring_rotation() -> DigitalMap:
    """Rotate into the cycle through the center: vertex i to vertex i+1."""
    assignment = {rv(i): rv(i + 1) for i in range(10)}
    assignment[rv(10)] = rv(1)
    return DigitalMap.from_points(ring_image(), ring_cycle(), assignment)


def ring_inclusion() -> DigitalMap:
    Y, X = ring_cycle(), ring_image()
    return DigitalMap.from_points(Y, X, {p: p for p in Y.points})


def ring_homotopy() -> Homotopy:
    """One step from the rotated ring back to the identity."""
    X = ring_image()
    comp = DigitalMap(X, X, tuple(X.index_of(ring_rotation()(p)) for p in X.points))
    return Homotopy((comp, DigitalMap.identity(X)))


def cycle_homotopy() -> Homotopy:
    Y = ring_cycle()
    rot = ring_rotation()
    comp = DigitalMap(Y, Y, tuple(Y.index_of(rot(p)) for p in Y.points))
    return Homotopy((comp, DigitalMap.identity(Y)))


def center_loop() -> FinitePath:
    """The rim loop that closes through the center point."""
    return FinitePath(ring_image(), tuple(rv(i) for i in (1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 1)))


def outer_loop() -> FinitePath:
    """The rim loop that closes through the doubled outer vertex."""
    return FinitePath(ring_image(), tuple(rv(i) for i in (1, 2, 3, 4, 5, 6, 7, 8, 9, 0, 1)))


def padded_center_loop() -> FinitePath:
    """The center loop with one rest step appended at the basepoint."""
    return FinitePath(ring_image(), tuple(rv(i) for i in (1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 1, 1)))


def padded_outer_loop() -> FinitePath:
    """The outer loop with one rest step prepended at the basepoint."""
    return FinitePath(ring_image(), tuple(rv(i) for i in (1, 1, 2, 3, 4, 5, 6, 7, 8, 9, 0, 1)))


def composite_loop() -> FinitePath:
    """The center loop followed by the reversed outer loop (21 entries)."""
    return product(center_loop(), reverse(outer_loop()))


def composite_first_stage() -> FinitePath:
    """The first stage of the tight contraction of the composite loop."""
    seq = (1, 2, 3, 4, 5, 6, 7, 8, 9, 9, 0, 0, 9, 8, 7, 6, 5, 4, 3, 2, 1)
    return FinitePath(ring_image(), tuple(rv(i) for i in seq))


def grid_image() -> DigitalImage:
    return DigitalImage(GRID_CYCLE_COORDS + (GRID_INNER,), u=1)


def grid_cycle() -> DigitalImage:
    return DigitalImage(GRID_CYCLE_COORDS[1:] + (GRID_INNER,), u=1)


def grid_rotation() -> DigitalMap:
    cyc = GRID_CYCLE_COORDS
    assignment = {cyc[i]: cyc[i + 1] for i in range(len(cyc) - 1)}
    assignment[cyc[-1]] = GRID_INNER
    assignment[GRID_INNER] = cyc[1]
    return DigitalMap.from_points(grid_image(), grid_cycle(), assignment)


def grid_inclusion() -> DigitalMap:
    Yg, Xg = grid_cycle(), grid_image()
    return DigitalMap.from_points(Yg, Xg, {p: p for p in Yg.points})


def grid_homotopy() -> Homotopy:
    Xg = grid_image()
    rot = grid_rotation()
    comp = DigitalMap(Xg, Xg, tuple(Xg.index_of(rot(p)) for p in Xg.points))
    return Homotopy((comp, DigitalMap.identity(Xg)))


def grid_loops() -> tuple[FinitePath, FinitePath]:
    """Inner-route and outer-route loops around the grid cycle."""
    Xg = grid_image()
    base = GRID_CYCLE_COORDS[1]
    inner = FinitePath(Xg, GRID_CYCLE_COORDS[1:] + (GRID_INNER, base))
    outer = FinitePath(Xg, GRID_CYCLE_COORDS[1:] + (GRID_CYCLE_COORDS[0], base))
    return inner, outer


@dataclass(frozen=True)
class RawTailPath:
    """A map from the naturals given by a finite window plus a tail rule.

    Supports the one family whose middle stage has no constant tail; the
    canonical EC type cannot represent that stage by design.
    """

    image: DigitalImage
    window: tuple[Point, ...]
    tail_kind: str  # "constant" | "alternating"
    tail_pair: tuple[Point, Point] | None = None

    def value(self, n: int) -> Point:
        if n < len(self.window):
            return self.window[n]
        if self.tail_kind == "constant":
            return self.window[-1]
        assert self.tail_pair is not None
        return self.tail_pair[n % 2]

    @property
    def eventually_constant(self) -> bool:
        return self.tail_kind == "constant"

    def truncate(self, upto: int) -> FinitePath:
        return FinitePath(self.image, tuple(self.value(n) for n in range(upto + 1)))


def raw_family_ec_defect(stages: tuple[RawTailPath, ...]) -> int | None:
    """Index of the first stage that is not eventually constant."""
    for i, s in enumerate(stages):
        if not s.eventually_constant:
            return i
    return None


def wobble_family() -> tuple[RawTailPath, ...]:
    """A homotopy of step paths whose middle stage oscillates forever."""
    seg = DigitalImage([(0,), (1,)], u=1)
    flat = RawTailPath(seg, ((0,), (1,)), "constant")
    wobble = RawTailPath(seg, (), "alternating", ((0,), (1,)))
    return (flat, wobble, flat)


WOBBLE_WINDOW = 5


def wobble_family_maps() -> Homotopy:
    """The same family truncated to a finite window, as interval maps."""
    from .lattice import digital_interval

    dom = digital_interval(0, WOBBLE_WINDOW)
    stages = []
    for s in wobble_family():
        tr = s.truncate(WOBBLE_WINDOW)
        stages.append(DigitalMap(dom, tr.image, tuple(tr.image.index_of(v) for v in tr.values)))
    return Homotopy(tuple(stages))


def spike_loop_family() -> tuple[EcPath, ...]:
    """EC self-homotopy of a peak loop whose middle stage grows a late bump."""
    tri = DigitalImage([(0,), (1,), (2,)], u=1)
    f = EcPath(tri, ((0,), (1,), (2,), (1,)), (0,))
    h1 = EcPath(tri, ((0,), (1,), (2,), (1,), (0,), (1,)), (0,))
    return (f, h1, f)


def spike_star_expected() -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Leading terms of the unpadded stagewise products of the peak family."""
    return (
        (0, 1, 2, 1, 0, 1, 2, 1, 0, 0),
        (0, 1, 2, 1, 0, 1, 0, 1, 2, 1, 0, 0),
    )


@dataclass(frozen=True)
class FixtureCatalog:
    """Every concrete object the verification driver replays."""

    ring: DigitalImage
    cycle: DigitalImage
    rotation: DigitalMap
    inclusion: DigitalMap
    ring_homotopy: Homotopy
    cycle_homotopy: Homotopy
    loop_center: FinitePath
    loop_outer: FinitePath
    loop_center_padded: FinitePath
    loop_outer_padded: FinitePath
    loop_composite: FinitePath
    composite_stage: FinitePath
    grid: DigitalImage
    grid_cycle: DigitalImage
    grid_rotation: DigitalMap
    grid_inclusion: DigitalMap
    grid_homotopy: Homotopy
    grid_loop_inner: FinitePath
    grid_loop_outer: FinitePath
    wobble: tuple[RawTailPath, ...]
    wobble_maps: Homotopy
    spike: tuple[EcPath, ...]

    @property
    def basepoint(self) -> Point:
        return rv(1)


def _check(name: str, cond: bool) -> None:
    if not cond:
        raise FixtureError(name)


def validate_catalog(cat: FixtureCatalog) -> None:
    """Cross-checks run on every load; raises FixtureError on the first miss."""
    _check("ring: 11 points", len(cat.ring) == 11)
    _check("ring: one component", len(components(cat.ring)) == 1)
    _check("cycle: ring minus outer vertex", set(cat.cycle.points) == set(cat.ring.points) - {rv(0)})
    _check("cycle: simple closed curve", cat.cycle.simple_cycle_order is not None)
    _check("ring: center attaches next to the doubled vertex",
           set(neighbors(cat.ring, rv(10))) == {rv(1), rv(9)}
           and set(neighbors(cat.ring, rv(0))) == {rv(1), rv(9)})
    _check("rotation: continuous", is_continuous(cat.rotation))
    _check("inclusion: continuous", is_continuous(cat.inclusion))

    from .maps import compose

    gf = compose(cat.inclusion, cat.rotation)
    fg = compose(cat.rotation, cat.inclusion)
    _check("ring homotopy: one step to identity",
           is_homotopy(cat.ring_homotopy)
           and cat.ring_homotopy.steps == 1
           and cat.ring_homotopy.from_map.table == gf.table
           and cat.ring_homotopy.to_map.table == DigitalMap.identity(cat.ring).table)
    _check("cycle homotopy: one step to identity",
           is_homotopy(cat.cycle_homotopy)
           and cat.cycle_homotopy.steps == 1
           and cat.cycle_homotopy.from_map.table == fg.table
           and cat.cycle_homotopy.to_map.table == DigitalMap.identity(cat.cycle).table)

    bp = cat.basepoint
    for name, loop in (("center loop", cat.loop_center), ("outer loop", cat.loop_outer)):
        _check(f"{name}: based loop of length 10", loop.is_loop and loop.start == bp and loop.length == 10)
        _check(f"{name}: tight at basepoint", is_tab(loop, bp))
    _check("padded center loop: trivial extension",
           is_trivial_extension(cat.loop_center_padded, cat.loop_center))
    _check("padded outer loop: trivial extension",
           is_trivial_extension(cat.loop_outer_padded, cat.loop_outer))
    _check("padded loops: one-step homotopy with fixed endpoints",
           is_path_homotopy((cat.loop_center_padded, cat.loop_outer_padded), endpoints_fixed=True))
    _check("composite loop: 21 entries",
           len(cat.loop_composite.values) == 21
           and cat.loop_composite.values == product(cat.loop_center, reverse(cat.loop_outer)).values)
    _check("composite contraction stage: valid tight one-step move",
           is_path_homotopy((cat.loop_composite, cat.composite_stage),
                            endpoints_fixed=True, tab_basepoint=bp))

    _check("grid: 13 points", len(cat.grid) == 13)
    _check("grid cycle: simple closed curve of 12",
           len(cat.grid_cycle) == 12 and cat.grid_cycle.simple_cycle_order is not None)
    _check("grid: doubled corner",
           set(neighbors(cat.grid, GRID_INNER)) == {(3, 4), (4, 3)}
           and set(neighbors(cat.grid, (4, 4))) == {(3, 4), (4, 3)})
    cycle_only = DigitalImage(GRID_CYCLE_COORDS, u=1)
    _check("grid minus inner point: simple closed curve",
           cycle_only.simple_cycle_order is not None and len(cycle_only) == 12)
    _check("grid rotation: continuous", is_continuous(cat.grid_rotation))
    _check("grid homotopy: one step to identity",
           is_homotopy(cat.grid_homotopy) and cat.grid_homotopy.steps == 1)
    for name, loop in (("grid inner loop", cat.grid_loop_inner), ("grid outer loop", cat.grid_loop_outer)):
        _check(f"{name}: based loop", loop.is_loop and loop.length == 12)

    _check("wobble family: finite truncation is a homotopy", is_homotopy(cat.wobble_maps))
    _check("wobble family: middle stage never settles", raw_family_ec_defect(cat.wobble) == 1)

    f, h1, f2 = cat.spike
    _check("spike family: endpoints agree", f == f2 and f.n == 4 and h1.n == 6)
    raw = ec_star_stagewise([f, h1, f2], f)
    want_a, want_b = spike_star_expected()
    got_a = tuple(raw[0].value(n)[0] for n in range(len(want_a)))
    got_b = tuple(raw[1].value(n)[0] for n in range(len(want_b)))
    _check("spike family: unpadded products match the expected sequences",
           got_a == want_a and got_b == want_b)
    _check("spike family: unpadded product breaks at index 6",
           first_pointwise_break(raw[0], raw[1]) == 6)
    padded = ec_star_with_padding(list(cat.spike), f)
    _check("spike family: padded product is an EC homotopy", padded.steps == 2)


def load_fixtures(validate: bool = True) -> FixtureCatalog:
    inner, outer = grid_loops()
    cat = FixtureCatalog(
        ring=ring_image(),
        cycle=ring_cycle(),
        rotation=ring_rotation(),
        inclusion=ring_inclusion(),
        ring_homotopy=ring_homotopy(),
        cycle_homotopy=cycle_homotopy(),
        loop_center=center_loop(),
        loop_outer=outer_loop(),
        loop_center_padded=padded_center_loop(),
        loop_outer_padded=padded_outer_loop(),
        loop_composite=composite_loop(),
        composite_stage=composite_first_stage(),
        grid=grid_image(),
        grid_cycle=grid_cycle(),
        grid_rotation=grid_rotation(),
        grid_inclusion=grid_inclusion(),
        grid_homotopy=grid_homotopy(),
        grid_loop_inner=inner,
        grid_loop_outer=outer,
        wobble=wobble_family(),
        wobble_maps=wobble_family_maps(),
        spike=spike_loop_family(),
    )
    if validate:
        validate_catalog(cat)
    return cat


def corrupted_catalog() -> FixtureCatalog:
    """A deliberately broken catalog for exercising failure reporting."""
    cat = load_fixtures()
    broken = DigitalImage(RING_COORDS[:-1] + ((9, 9),), u=2)
    return replace(cat, ring=broken)


def random_connected_image(rng: Random, max_points: int = 8) -> DigitalImage:
    """A small connected image grown by a lattice walk; adjacency 1 or 2."""
    u = rng.choice((1, 2))
    pts = {(0, 0)}
    cur = (0, 0)
    steps = [(1, 0), (-1, 0), (0, 1), (0, -1)] + ([(1, 1), (1, -1), (-1, 1), (-1, -1)] if u == 2 else [])
    target = rng.randint(1, max_points)
    guard = 0
    while len(pts) < target and guard < 200:
        guard += 1
        step = rng.choice(steps)
        nxt = (cur[0] + step[0], cur[1] + step[1])
        pts.add(nxt)
        cur = nxt if rng.random() < 0.8 else rng.choice(sorted(pts))
    return DigitalImage(sorted(pts), u=u)


def random_loop(rng: Random, image: DigitalImage, basepoint: Point, max_len: int) -> FinitePath:
    """A loop sampled by walking randomly, then returning along its trace."""
    out = rng.randint(0, max(0, max_len // 2))
    seq = [basepoint]
    for _ in range(out):
        cands = [seq[-1], *neighbors(image, seq[-1])]
        seq.append(cands[rng.randrange(len(cands))])
    seq = seq + list(reversed(seq))[1:]
    return FinitePath(image, tuple(seq))


def random_path_from(rng: Random, image: DigitalImage, start: Point, length: int) -> FinitePath:
    seq = [start]
    for _ in range(length):
        cands = [seq[-1], *neighbors(image, seq[-1])]
        seq.append(cands[rng.randrange(len(cands))])
    return FinitePath(image, tuple(seq))
