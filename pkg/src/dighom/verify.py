"""Replay every concrete claim of the fixture suite with machine checks.

Each check returns pass, fail, or bounded-pass (the positive outcome of an
inherently bounded search).  The report is deterministic: check order is
fixed, randomized property sampling is seeded, and searches are exact.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from random import Random
from typing import Callable

from .lattice import DigitalImage
from .maps import (
    DigitalMap,
    is_homotopy,
    no_pointed_equivalence,
    pointed_neighbors_of_identity,
    verify_homotopy_equivalence,
)
from .paths import (
    FinitePath,
    ForbiddenPair,
    PathHomotopy,
    constant_path,
    enumerate_trivial_extensions,
    is_path_homotopy,
    is_tab,
    is_trivial_extension,
    loop_class_equal_by_extensions,
    loops_reachable,
    tab_equivalent,
)
from .ecpaths import (
    EcHomotopy,
    ec_inverse,
    ec_star,
    extension_absorption_homotopy,
    infty,
    is_ec_homotopy,
    lift_path_homotopy,
    minus,
    restrict_ec_homotopy,
)
from .fundamental import class_equal, pi1_sample, unpointed_iso_pipeline, winding_number
from .fixtures import (
    FixtureCatalog,
    FixtureError,
    load_fixtures,
    random_connected_image,
    random_loop,
    raw_family_ec_defect,
    rv,
    validate_catalog,
)
from .search import SearchProblem, successors
from . import fileio

PASS = "pass"
FAIL = "fail"
BOUNDED = "bounded-pass"


@dataclass
class VerifyBounds:
    """Search bounds for the bounded checks; zero disables them honestly."""

    pause_lengths: tuple[int, ...] = (11, 12, 13)
    tab_bound: int = 13
    contraction_bound: int = 22
    class_bound: int = 12
    sample_loop_len: int = 10
    sample_prefix: int = 14
    random_cases: int = 200
    seed: int = 0
    threads: int = 1
    max_nodes: int | None = None


@dataclass
class CheckResult:
    index: int
    name: str
    verdict: str
    detail: str
    seconds: float
    certificate: str | None = None


@dataclass
class VerificationReport:
    results: list[CheckResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.verdict != FAIL for r in self.results)

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def format_text(self) -> str:
        lines = []
        for r in self.results:
            cert = f" cert={r.certificate}" if r.certificate else ""
            lines.append(f"[{r.verdict:>12}] {r.index:02d} {r.name}: {r.detail} ({r.seconds:.2f}s){cert}")
        lines.append(f"result: {'ok' if self.ok else 'FAILURES'} ({len(self.results)} checks)")
        return "\n".join(lines)

    def format_kv(self) -> str:
        lines = []
        for r in self.results:
            key = f"check.{r.index:02d}"
            lines.append(f"{key}.name={r.name}")
            lines.append(f"{key}.verdict={r.verdict}")
            lines.append(f"{key}.detail={r.detail}")
            lines.append(f"{key}.seconds={r.seconds:.3f}")
            if r.certificate:
                lines.append(f"{key}.certificate={r.certificate}")
        lines.append(f"report.ok={'true' if self.ok else 'false'}")
        return "\n".join(lines)


class _Certs:
    def __init__(self, cert_dir: str | None):
        self.dir = cert_dir
        self._img_refs: dict[DigitalImage, str] = {}
        if cert_dir:
            os.makedirs(cert_dir, exist_ok=True)

    def image_ref(self, image: DigitalImage) -> str:
        ref = self._img_refs.get(image)
        if ref is None:
            ref = f"image-{len(self._img_refs):02d}.img"
            fileio.write_image(image, os.path.join(self.dir, ref))  # type: ignore[arg-type]
            self._img_refs[image] = ref
        return ref

    def path_homotopy(self, name: str, H: PathHomotopy) -> str | None:
        if not self.dir:
            return None
        ref = self.image_ref(H.from_path.image)
        fn = f"{name}.pathhomotopy"
        fileio.write_path_homotopy(H, os.path.join(self.dir, fn), ref)
        return fn

    def ec_homotopy(self, name: str, H: EcHomotopy) -> str | None:
        if not self.dir:
            return None
        ref = self.image_ref(H.from_path.image)
        fn = f"{name}.echomotopy"
        fileio.write_ec_homotopy(H, os.path.join(self.dir, fn), ref)
        return fn


Check = Callable[[FixtureCatalog, VerifyBounds, _Certs], tuple[str, str, str | None]]


def _check_fixtures(cat, bounds, certs):
    validate_catalog(cat)
    return PASS, "all fixture validity predicates hold", None


def _check_equivalence(cat, bounds, certs):
    res = verify_homotopy_equivalence(cat.rotation, cat.inclusion)
    if not res.equivalent:
        return FAIL, "round trips are not homotopic to the identities", None
    steps = (res.on_source.steps, res.on_target.steps)
    return PASS, f"homotopy equivalence certified (witness steps {steps})", None


def _check_rigidity(cat, bounds, certs):
    for img, label in ((cat.cycle, "cycle"), (cat.ring, "ring")):
        ident = DigitalMap.identity(img)
        for p in img.points:
            got = pointed_neighbors_of_identity(img, p)
            if got != [ident]:
                return FAIL, f"{label}: {len(got)} pointed one-step maps fix {p}", None
    return PASS, "pointed one-step neighborhood of the identity is a singleton everywhere", None


def _check_ring_not_pointed(cat, bounds, certs):
    if no_pointed_equivalence(cat.ring, cat.cycle):
        return PASS, "no basepoints admit a pointed equivalence", None
    return FAIL, "a pointed equivalence was found", None


def _check_grid_not_pointed(cat, bounds, certs):
    if no_pointed_equivalence(cat.grid, cat.grid_cycle):
        return PASS, "no basepoints admit a pointed equivalence", None
    return FAIL, "a pointed equivalence was found", None


def _check_padded_one_step(cat, bounds, certs):
    if not is_path_homotopy((cat.loop_center_padded, cat.loop_outer_padded), endpoints_fixed=True):
        return FAIL, "padded loops are not one step apart", None
    fe, ge = infty(cat.loop_center), infty(cat.loop_outer)
    if bounds.class_bound < max(fe.n, ge.n):
        return BOUNDED, f"bound-exhausted: class bound {bounds.class_bound} below {max(fe.n, ge.n)}", None
    res = class_equal(fe, ge, bounds.class_bound, max_nodes=bounds.max_nodes, want_witness=True)
    if res.kind != "yes":
        return FAIL, f"class equality search returned {res.kind}", None
    cert = certs.ec_homotopy("06-loop-classes-equal", res.witness) if res.witness else None
    return PASS, f"one-step homotopy valid; classes equal at bound {bounds.class_bound}", cert


def _check_pause_forced(cat, bounds, certs):
    bp = cat.basepoint
    details = []
    for k in bounds.pause_lengths:
        if k < max(cat.loop_center.length, cat.loop_outer.length):
            return BOUNDED, f"bound-exhausted: extension length {k} too small", None
        ext_f = list(enumerate_trivial_extensions(cat.loop_center, k))
        ext_g = list(enumerate_trivial_extensions(cat.loop_outer, k))
        for tag, pair, starts, targets in (
            ("end", ForbiddenPair(k - 1, k, bp), ext_f, ext_g),
            ("start", ForbiddenPair(0, 1, bp), ext_g, ext_f),
        ):
            clean = [
                s for s in starts
                if not (s.values[pair.slot_a] == bp and s.values[pair.slot_b] == bp)
            ]
            res = loops_reachable(
                clean,
                endpoints_fixed=True,
                forbidden=[pair],
                targets=targets,
                max_nodes=bounds.max_nodes,
            )
            if res.reached or not res.saturated:
                return FAIL, f"k={k} {tag}: a pause-free homotopy exists", None
            details.append(f"k={k} {tag}: {res.visited_count} states")
    return PASS, "; ".join(details), None


def _check_tab_inequivalent(cat, bounds, certs):
    bp = cat.basepoint
    if bounds.tab_bound < max(cat.loop_center.length, cat.loop_outer.length):
        return BOUNDED, f"bound-exhausted: tab bound {bounds.tab_bound}", None
    res = tab_equivalent(cat.loop_center, cat.loop_outer, bp, bounds.tab_bound, max_nodes=bounds.max_nodes)
    if res.kind == "yes":
        return FAIL, "loops became tight-equivalent within the bound", None
    return BOUNDED, f"{res.kind} at extension lengths {list(res.lengths_checked)}", None


def _check_tab_contraction(cat, bounds, certs):
    bp = cat.basepoint
    comp = cat.loop_composite
    if not is_tab(comp, bp):
        return FAIL, "composite loop is not tight", None
    if not is_path_homotopy((comp, cat.composite_stage), endpoints_fixed=True, tab_basepoint=bp):
        return FAIL, "displayed first stage is not a tight one-step move", None
    if bounds.contraction_bound < comp.length:
        return BOUNDED, f"bound-exhausted: contraction bound {bounds.contraction_bound}", None
    point = constant_path(comp.image, bp, 0)
    res = tab_equivalent(comp, point, bp, bounds.contraction_bound, max_nodes=bounds.max_nodes)
    if res.kind != "yes":
        return FAIL, f"tight contraction search returned {res.kind}", None
    if not is_path_homotopy(res.homotopy, endpoints_fixed=True, tab_basepoint=bp):
        return FAIL, "contraction witness fails validation", None
    # The displayed stage must itself contract tightly, confirming it lies on
    # a valid tight contraction.
    res2 = tab_equivalent(cat.composite_stage, point, bp, bounds.contraction_bound, max_nodes=bounds.max_nodes)
    if res2.kind != "yes":
        return FAIL, f"displayed stage does not contract tightly ({res2.kind})", None
    cert = certs.path_homotopy("09-tight-contraction", res.homotopy)
    return PASS, f"tight contraction found ({res.homotopy.steps} steps); displayed stage confirmed", cert


def _check_wobble(cat, bounds, certs):
    if not is_homotopy(cat.wobble_maps):
        return FAIL, "truncated family is not a homotopy", None
    defect = raw_family_ec_defect(cat.wobble)
    if defect != 1:
        return FAIL, f"expected stage 1 to oscillate, got {defect}", None
    return PASS, "finite homotopy valid; stage 1 never settles, so the family is not EC", None


def _check_spike(cat, bounds, certs):
    from .fixtures import spike_star_expected
    from .ecpaths import ec_star_stagewise, first_pointwise_break, ec_star_with_padding

    f, h1, _ = cat.spike
    raw = ec_star_stagewise(list(cat.spike), f)
    want_a, want_b = spike_star_expected()
    got_a = tuple(raw[0].value(n)[0] for n in range(len(want_a)))
    got_b = tuple(raw[1].value(n)[0] for n in range(len(want_b)))
    if got_a != want_a or got_b != want_b:
        return FAIL, "stagewise product sequences differ from the expected ones", None
    brk = first_pointwise_break(raw[0], raw[1])
    if brk != 6:
        return FAIL, f"expected the unpadded product to break at 6, got {brk}", None
    padded = ec_star_with_padding(list(cat.spike), f)
    if not is_ec_homotopy(padded, endpoints_fixed=True):
        return FAIL, "padded product is not an EC homotopy", None
    return PASS, "unpadded product breaks at index 6; padded product is a valid EC homotopy", None


def _random_homotopy(rng: Random, loop: FinitePath, moves: int) -> list[FinitePath]:
    image = loop.image
    k = loop.length
    pins = [-1] * (k + 1)
    pins[0] = image.index_of(loop.start)
    pins[k] = image.index_of(loop.end)
    problem = SearchProblem(
        n_slots=k + 1,
        n_points=len(image),
        neighbors=image.neighbor_indices,
        adjacent_slots=tuple((t, t + 1) for t in range(k)),
        pinned=tuple(pins),
    )
    stages = [loop]
    state = loop.indices()
    for _ in range(moves):
        succ = list(successors(problem, state))
        if not succ:
            break
        state = succ[rng.randrange(len(succ))]
        stages.append(FinitePath(image, tuple(image.points[i] for i in state)))
    return stages


def _random_extension(rng: Random, loop: FinitePath, extra: int) -> FinitePath:
    vals = list(loop.values)
    for _ in range(extra):
        i = rng.randrange(len(vals))
        vals.insert(i + 1, vals[i])
    return FinitePath(loop.image, tuple(vals))


def _check_calculus(cat, bounds, certs):
    rng = Random(bounds.seed)
    images = [cat.ring, cat.cycle, cat.grid]
    images += [random_connected_image(Random(bounds.seed * 7 + i)) for i in range(5)]
    failures: list[str] = []
    cases = 0
    while cases < bounds.random_cases and len(failures) < 5:
        img = images[cases % len(images)]
        bp = img.points[rng.randrange(len(img))]
        loop = random_loop(rng, img, bp, 8)
        e = infty(loop)

        if infty(minus(e)) != e:
            failures.append(f"case {cases}: restriction/extension round trip failed")
        back = minus(infty(loop))
        if not is_trivial_extension(loop, back):
            failures.append(f"case {cases}: loop is not an extension of its reduction")
        reduced = loop.length == 0 or loop.values[-2] != loop.values[-1]
        if (back.values == loop.values) != reduced:
            failures.append(f"case {cases}: reduction-equality criterion failed")

        other = random_loop(rng, img, bp, 6)
        oe = infty(other)
        star = ec_star(e, oe)
        if minus(star).values != (minus(e) * minus(oe)).values:
            failures.append(f"case {cases}: restriction does not respect products")
        if ec_star(infty(minus(e)), oe) != infty(minus(e) * minus(oe)):
            failures.append(f"case {cases}: extension does not respect products")

        ext = _random_extension(rng, loop, rng.randrange(4))
        chain = extension_absorption_homotopy(loop, ext)
        if not (
            is_ec_homotopy(chain, endpoints_fixed=True)
            and chain.from_path == e
            and chain.to_path == infty(ext)
        ):
            failures.append(f"case {cases}: pause absorption homotopy invalid")

        stages = _random_homotopy(rng, loop, 2)
        lifted = lift_path_homotopy(stages)
        if not is_ec_homotopy(lifted, endpoints_fixed=True):
            failures.append(f"case {cases}: lifted homotopy invalid")
        back_h = restrict_ec_homotopy(lifted)
        if not is_path_homotopy(back_h, endpoints_fixed=True):
            failures.append(f"case {cases}: restricted homotopy invalid")
        if not is_trivial_extension(back_h.from_path, minus(lifted.from_path)):
            failures.append(f"case {cases}: restriction endpoints are not extensions")
        cases += 1
    if failures:
        return FAIL, "; ".join(failures[:3]), None
    return PASS, f"{cases} randomized cases, zero failures", None


def _check_group_laws(cat, bounds, certs):
    Y = cat.cycle
    bp = cat.basepoint
    gw = pi1_sample(Y, bp, bounds.sample_loop_len, bounds.sample_prefix, max_nodes=bounds.max_nodes)
    reps = [c.representative for c in gw.elements]
    const = infty(constant_path(Y, bp, 0))
    try:
        e_idx = reps.index(const)
    except ValueError:
        return FAIL, "no sampled class has the constant representative", None
    for i in range(len(reps)):
        if gw.table[(i, e_idx)] != i or gw.table[(e_idx, i)] != i:
            return FAIL, f"identity law fails at class {i}", None

    # Inverse law on every sampled loop.
    checked = 0
    from .paths import enumerate_loops

    for loop in enumerate_loops(Y, bp, bounds.sample_loop_len):
        le = infty(loop)
        prod = ec_star(le, ec_inverse(le))
        res = class_equal(prod, const, max(bounds.sample_prefix, prod.n), max_nodes=bounds.max_nodes)
        if res.kind != "yes":
            return FAIL, f"inverse law fails for a loop of length {loop.length} ({res.kind})", None
        checked += 1

    # Congruence: products of equal classes stay equal, on sampled pairs.
    rng = Random(bounds.seed + 1)
    loops = list(enumerate_loops(Y, bp, min(bounds.sample_loop_len, 8)))
    buckets: dict[int, list[FinitePath]] = {}
    for loop in loops[:: max(1, len(loops) // 120)]:
        le = infty(loop)
        for i, rep in enumerate(reps):
            if class_equal(le, rep, max(bounds.sample_prefix, le.n), max_nodes=bounds.max_nodes).yes:
                buckets.setdefault(i, []).append(loop)
                break
    congruence_cases = 0
    for i, members in buckets.items():
        if len(members) < 2:
            continue
        for _ in range(4):
            f1, f2 = rng.choice(members), rng.choice(members)
            g1, g2 = rng.choice(members), rng.choice(members)
            p1 = ec_star(infty(f1), infty(g1))
            p2 = ec_star(infty(f2), infty(g2))
            res = class_equal(p1, p2, max(bounds.sample_prefix, p1.n, p2.n), max_nodes=bounds.max_nodes)
            if res.kind != "yes":
                return FAIL, "product congruence fails on equal-class factors", None
            congruence_cases += 1

    # Agreement of the two decision procedures on sampled pairs.
    small = [l for l in loops if l.length <= 8]
    agreement_cases = 0
    for _ in range(40):
        f1 = small[rng.randrange(len(small))]
        g1 = small[rng.randrange(len(small))]
        te = loop_class_equal_by_extensions(f1, g1, max_len=bounds.sample_loop_len + 2, max_nodes=bounds.max_nodes)
        fe, ge = infty(f1), infty(g1)
        ec = class_equal(fe, ge, max(bounds.sample_prefix, fe.n, ge.n), max_nodes=bounds.max_nodes)
        if (te.kind == "yes") != (ec.kind == "yes"):
            return FAIL, f"procedures disagree: extensions={te.kind}, ec={ec.kind}", None
        agreement_cases += 1

    sizes = dict(zip(range(len(reps)), gw.class_sizes))
    return PASS, (
        f"{gw.sample_size} loops in {len(reps)} classes {sizes}; inverse law on {checked}; "
        f"congruence on {congruence_cases}; procedure agreement on {agreement_cases} pairs"
    ), None


def _pipeline_check(F, G, H, samples, bounds):
    report = unpointed_iso_pipeline(F, G, H.reversed(), samples, max_nodes=bounds.max_nodes)
    if not report.ok:
        bad = [s for s in report.samples if not (s.k_valid and s.identity_certified and s.search_kind == "yes")]
        return FAIL, f"{len(bad)} samples fail the identity check", None
    return PASS, (
        f"identity certified and searched for {len(report.samples)} sample loops; "
        f"connecting path {report.basepoint}->{report.translated_basepoint}"
    ), None


def _check_pipeline_ring(cat, bounds, certs):
    bp = cat.basepoint
    fe = infty(cat.loop_center)
    samples = [
        infty(constant_path(cat.ring, bp, 0)),
        fe,
        infty(cat.loop_outer),
        ec_star(fe, fe),
    ]
    return _pipeline_check(cat.rotation, cat.inclusion, cat.ring_homotopy, samples, bounds)


def _check_pipeline_grid(cat, bounds, certs):
    bp = cat.grid_loop_inner.start
    samples = [
        infty(constant_path(cat.grid, bp, 0)),
        infty(cat.grid_loop_inner),
        infty(cat.grid_loop_outer),
    ]
    return _pipeline_check(cat.grid_rotation, cat.grid_inclusion, cat.grid_homotopy, samples, bounds)


def _check_winding(cat, bounds, certs):
    Y = cat.cycle
    bp = cat.basepoint
    rim = FinitePath(Y, cat.loop_center.values)
    pool: list[FinitePath] = [constant_path(Y, bp, 0), rim, FinitePath(Y, tuple(reversed(rim.values)))]
    pool.append(rim * rim)
    pool.append(FinitePath(Y, (rim * rim).values[::-1]))
    rng = Random(bounds.seed + 2)
    for base in (rim, FinitePath(Y, tuple(reversed(rim.values)))):
        exts = list(enumerate_trivial_extensions(base, base.length + 2))
        pool.append(exts[rng.randrange(len(exts))])
    for _ in range(6):
        pool.append(random_loop(rng, Y, bp, 8))

    pairs = 0
    for i in range(len(pool)):
        for j in range(i + 1, len(pool)):
            a, b = pool[i], pool[j]
            wa, wb = winding_number(a, Y), winding_number(b, Y)
            ea, eb = infty(a), infty(b)
            bound = max(bounds.sample_prefix, ea.n, eb.n)
            res = class_equal(ea, eb, bound, max_nodes=bounds.max_nodes)
            if res.kind == "yes" and wa != wb:
                return FAIL, f"loops with windings {wa} and {wb} declared equal", None
            if wa == wb and res.kind != "yes":
                return FAIL, f"equal windings ({wa}) not recognised as equal", None
            pairs += 1
    return BOUNDED, f"{pairs} pairs consistent with the winding oracle at bound {bounds.sample_prefix}", None


_CHECKS: list[tuple[str, Check]] = [
    ("fixtures validate", _check_fixtures),
    ("ring pair homotopy equivalent", _check_equivalence),
    ("pointed one-step rigidity of identities", _check_rigidity),
    ("ring pair not pointed equivalent", _check_ring_not_pointed),
    ("grid pair not pointed equivalent", _check_grid_not_pointed),
    ("padded loops one step apart and class-equal", _check_padded_one_step),
    ("every equalising homotopy pauses at the basepoint", _check_pause_forced),
    ("rim loops not tight-equivalent within bound", _check_tab_inequivalent),
    ("composite loop contracts through tight stages", _check_tab_contraction),
    ("oscillating family is a homotopy but not EC", _check_wobble),
    ("stagewise product needs padding", _check_spike),
    ("EC calculus randomized properties", _check_calculus),
    ("group laws on the cycle sample", _check_group_laws),
    ("round-trip identity on the ring pair", _check_pipeline_ring),
    ("round-trip identity on the grid pair", _check_pipeline_grid),
    ("class verdicts consistent with winding numbers", _check_winding),
]


def verify_paper(
    bounds: VerifyBounds | None = None,
    catalog: FixtureCatalog | None = None,
    cert_dir: str | None = None,
) -> VerificationReport:
    """Run the full checklist and return the deterministic report."""
    bounds = bounds or VerifyBounds()
    cat = catalog if catalog is not None else load_fixtures(validate=False)
    certs = _Certs(cert_dir)

    def run_one(item: tuple[int, tuple[str, Check]]) -> CheckResult:
        idx, (name, fn) = item
        t0 = time.perf_counter()
        try:
            verdict, detail, cert = fn(cat, bounds, certs)
        except FixtureError as e:
            verdict, detail, cert = FAIL, f"fixture invalid: {e}", None
        except Exception as e:  # noqa: BLE001 - a failing check must not kill the run
            verdict, detail, cert = FAIL, f"{type(e).__name__}: {e}", None
        return CheckResult(idx, name, verdict, detail, time.perf_counter() - t0, cert)

    items = list(enumerate(_CHECKS, start=1))
    if bounds.threads > 1:
        with ThreadPoolExecutor(max_workers=bounds.threads) as pool:
            results = list(pool.map(run_one, items))
    else:
        results = [run_one(it) for it in items]
    results.sort(key=lambda r: r.index)
    return VerificationReport(results)
