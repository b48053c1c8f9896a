"""Loop classes, fundamental-group operations at sample scale, and oracles.

Loop classes are represented by canonical eventually constant loops and
decided by the EC search, which matches the trivial-extension formulation
whenever either procedure reaches an exact answer.  Saturated search results
are cached per (image, basepoint, bound) so repeated class queries are cheap.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Sequence

from .lattice import DigitalImage, Point
from .maps import DigitalMap, Homotopy, compose, is_continuous, is_homotopy
from .paths import FinitePath, enumerate_loops, product, reverse
from .ecpaths import (
    EcHomotopy,
    EcPath,
    EcReachResult,
    ec_homotopic,
    ec_star,
    extension_absorption_homotopy,
    infty,
    is_ec_homotopy,
    minus,
)
from .search import SearchBudgetExceeded

_LADDER = (4_000, 32_000, 256_000)
_DEFAULT_MAX_NODES = 8_000_000


@dataclass(frozen=True)
class LoopClass:
    """A loop class named by a canonical EC representative."""

    representative: EcPath
    bound: int

    def __post_init__(self) -> None:
        if not self.representative.is_loop:
            raise ValueError("a loop class needs an EC loop representative")

    @property
    def image(self) -> DigitalImage:
        return self.representative.image

    @property
    def basepoint(self) -> Point:
        return self.representative.basepoint


class _ClassSpace:
    """Verdict memo plus saturated-component cache for one padded loop space."""

    def __init__(self, image: DigitalImage, basepoint: Point, bound: int):
        self.image = image
        self.basepoint = basepoint
        self.bound = bound
        self.verdicts: dict[tuple, str] = {}
        self.components: list[tuple[Callable[[tuple[int, ...]], bool], bool]] = []

    def encode(self, f: EcPath) -> tuple[int, ...]:
        return tuple(self.image.index_of(v) for v in f.padded(self.bound))

    def component_of(self, enc: tuple[int, ...]) -> int | None:
        for i, (contains, _) in enumerate(self.components):
            if contains(enc):
                return i
        return None


@lru_cache(maxsize=16)
def _class_space(image: DigitalImage, basepoint: Point, bound: int) -> _ClassSpace:
    return _ClassSpace(image, basepoint, bound)


def class_equal(
    f: EcPath,
    g: EcPath,
    bound: int,
    *,
    max_nodes: int | None = None,
    want_witness: bool = False,
) -> EcReachResult:
    """Loop-class equality via endpoint-fixed EC homotopy search.

    Budgets escalate while alternating the search side, so a pair whose
    smaller side saturates quickly is decided without exploring the larger
    component; saturated components are cached for later queries.
    """
    if not f.is_loop or not g.is_loop:
        raise ValueError("class equality is defined for EC loops")
    if f.image != g.image or f.basepoint != g.basepoint:
        raise ValueError("basepoint mismatch")
    if bound < max(f.n, g.n):
        raise ValueError(f"bound {bound} below a constancy index ({f.n}, {g.n})")

    space = _class_space(f.image, f.basepoint, bound)
    key = (f.prefix, g.prefix)
    cached = space.verdicts.get(key)
    if cached is not None and not want_witness:
        return EcReachResult(cached, None, 0, bound)

    def record(kind: str) -> None:
        space.verdicts[key] = kind
        space.verdicts[(g.prefix, f.prefix)] = kind

    if f == g:
        record("yes")
        return EcReachResult("yes", EcHomotopy((f,)), 1, bound)

    fe, ge = space.encode(f), space.encode(g)
    cf, cg = space.component_of(fe), space.component_of(ge)
    if cf is not None and cf == cg and not want_witness:
        record("yes")
        return EcReachResult("yes", None, 0, bound)
    if cf is not None and cg is not None and cf != cg:
        kind = "exact-no" if not space.components[cf][1] else "no-within-bound"
        record(kind)
        return EcReachResult(kind, None, 0, bound)

    cap = max_nodes if max_nodes is not None else _DEFAULT_MAX_NODES
    budgets = [b for b in _LADDER if b < cap] + [cap]
    out: EcReachResult | None = None
    for budget in budgets:
        for a, b in ((f, g), (g, f)):
            try:
                out = ec_homotopic(a, b, True, bound, max_nodes=budget)
            except SearchBudgetExceeded:
                continue
            if out.kind == "yes" and a is g and out.witness is not None:
                out = EcReachResult("yes", out.witness.reversed(), out.visited_count, bound)
            break
        if out is not None:
            break
    if out is None:
        raise SearchBudgetExceeded(f"class query exceeded {cap} states per side")

    record(out.kind)
    if out.kind != "yes" and out.membership is not None:
        space.components.append((out.membership, out.bound_attained))
    return out


def class_product(a: LoopClass, b: LoopClass) -> LoopClass:
    """The class of the concatenated representatives."""
    if a.image != b.image or a.basepoint != b.basepoint:
        raise ValueError("basepoint mismatch")
    rep = ec_star(a.representative, b.representative)
    return LoopClass(rep, max(a.bound, b.bound, rep.n))


def class_inverse(a: LoopClass) -> LoopClass:
    from .ecpaths import ec_inverse

    return LoopClass(ec_inverse(a.representative), a.bound)


def induced_hom(F: DigitalMap, a: LoopClass) -> LoopClass:
    """Push a loop class forward along a continuous map."""
    if not is_continuous(F):
        raise ValueError("induced homomorphism needs a continuous map")
    if a.image != F.source:
        raise ValueError("class does not live in the source of the map")
    rep = a.representative
    moved = EcPath(F.target, tuple(F(v) for v in rep.prefix), F(rep.tail))
    return LoopClass(moved, max(a.bound, moved.n))


def basepoint_change(q: FinitePath, a: LoopClass) -> LoopClass:
    """Conjugate a class by a path from its basepoint to a new one."""
    if q.image != a.image:
        raise ValueError("path must live in the class's image")
    if q.start != a.basepoint:
        raise ValueError("path must start at the class basepoint")
    rep = infty(product(product(reverse(q), minus(a.representative)), q))
    return LoopClass(rep, max(a.bound, rep.n))


def winding_number(f: EcPath | FinitePath, C: DigitalImage) -> int:
    """Signed traversal count of a loop around a simple closed curve.

    Independent of every homotopy search: steps are lifted to -1/0/+1 along
    the fixed orientation of the cycle and summed.
    """
    order = C.simple_cycle_order
    if order is None:
        raise ValueError("winding numbers need a simple closed curve")
    L = len(order)
    pos = {C.points[i]: k for k, i in enumerate(order)}
    values = minus(f).values if isinstance(f, EcPath) else f.values
    if values[0] != values[-1]:
        raise ValueError("winding numbers are defined for loops")
    total = 0
    for a, b in zip(values, values[1:]):
        try:
            d = (pos[b] - pos[a]) % L
        except KeyError as e:
            raise ValueError(f"loop value {e.args[0]} is not on the curve") from None
        if d == 0:
            step = 0
        elif d == 1:
            step = 1
        elif d == L - 1:
            step = -1
        else:
            raise ValueError("consecutive loop values are not adjacent on the curve")
        total += step
    if total % L:
        raise ValueError("net step count is not a whole number of turns")
    return total // L


@dataclass
class GroupWitness:
    """Sampled loop classes with product-table fragments and certificates."""

    elements: list[LoopClass]
    class_sizes: list[int]
    table: dict[tuple[int, int], int | None]
    certificates: dict[tuple[int, int], EcHomotopy]
    sample_size: int
    bound: int


def pi1_sample(
    image: DigitalImage,
    basepoint: Iterable[int],
    max_loop_len: int,
    max_prefix: int,
    *,
    max_nodes: int | None = None,
) -> GroupWitness:
    """Classify every loop up to a length bound and tabulate products.

    Products whose representatives need a larger constancy bound are resolved
    at an enlarged bound; entries that match no sampled class are None.
    """
    bp = tuple(basepoint)
    reps: list[EcPath] = []
    sizes: list[int] = []
    count = 0
    for loop in enumerate_loops(image, bp, max_loop_len):
        count += 1
        e = infty(loop)
        for i, rep in enumerate(reps):
            if class_equal(e, rep, max(max_prefix, e.n, rep.n), max_nodes=max_nodes).yes:
                sizes[i] += 1
                break
        else:
            reps.append(e)
            sizes.append(1)

    elements = [LoopClass(r, max_prefix) for r in reps]
    table: dict[tuple[int, int], int | None] = {}
    certificates: dict[tuple[int, int], EcHomotopy] = {}
    for i, a in enumerate(elements):
        for j, b in enumerate(elements):
            prod = class_product(a, b).representative
            table[(i, j)] = None
            for k, rep in enumerate(reps):
                res = class_equal(
                    prod, rep, max(max_prefix, prod.n, rep.n),
                    max_nodes=max_nodes, want_witness=True,
                )
                if res.yes:
                    table[(i, j)] = k
                    if res.witness is not None:
                        certificates[(i, j)] = res.witness
                    break
    return GroupWitness(elements, sizes, table, certificates, count, max_prefix)


@dataclass
class PipelineSample:
    loop: EcPath
    k_valid: bool
    identity_certified: bool
    search_kind: str
    certificate: EcHomotopy | None


@dataclass
class PipelineReport:
    """Outcome of replaying the corrected unpointed-equivalence argument."""

    basepoint: Point
    translated_basepoint: Point
    connecting_path: FinitePath
    samples: list[PipelineSample]

    @property
    def ok(self) -> bool:
        return all(s.k_valid and s.identity_certified and s.search_kind == "yes" for s in self.samples)


def _apply_stage(stage: DigitalMap, f: FinitePath) -> FinitePath:
    return FinitePath(stage.target, tuple(stage(v) for v in f.values))


def unpointed_iso_pipeline(
    F: DigitalMap,
    G: DigitalMap,
    H: Homotopy,
    samples: Sequence[EcPath],
    *,
    bound: int | None = None,
    max_nodes: int | None = None,
) -> PipelineReport:
    """Replay the corrected argument that the round trip acts as the identity.

    For each sample loop f at p, the stagewise conjugation homotopy K is
    built from the connecting path q(t) = H(p, t) with truncations
    q_s(t) = q(min(s, t)); K plus pause-absorption bridges certifies that the
    class of f equals the conjugated image class, and an independent search
    confirms the same equality.
    """
    if not (is_continuous(F) and is_continuous(G)):
        raise ValueError("the equivalence maps must be continuous")
    if F.source != G.target or F.target != G.source:
        raise ValueError("need F: X -> Y and G: Y -> X")
    X = F.source
    if not is_homotopy(H):
        raise ValueError("H is not a homotopy")
    if H.from_map.table != DigitalMap.identity(X).table or H.to_map.table != compose(G, F).table:
        raise ValueError("H must run from the identity to the round trip")
    if not samples:
        raise ValueError("need at least one sample loop")
    p = samples[0].basepoint
    for s in samples:
        if not s.is_loop or s.image != X or s.basepoint != p:
            raise ValueError("samples must be EC loops at one basepoint of the source")

    m = H.steps
    q = FinitePath(X, tuple(stage(p) for stage in H.stages))
    r = q.end

    out: list[PipelineSample] = []
    for f in samples:
        f_minus = minus(f)
        stages = []
        for t in range(m + 1):
            q_t = FinitePath(X, tuple(q(min(s, t)) for s in range(m + 1)))
            mid = _apply_stage(H.stages[t], f_minus)
            stages.append(infty(product(product(q_t, mid), reverse(q_t))))
        K = EcHomotopy(tuple(stages))
        k_valid = is_ec_homotopy(K, endpoints_fixed=True)

        # Bridge f to the first K stage (which pauses at p before and after f).
        chain = extension_absorption_homotopy(f_minus, minus(K.from_path))
        certificate = chain.concat(K) if chain.to_path == K.from_path else None

        # The conjugated image class, built independently of K.
        gff = induced_hom(G, induced_hom(F, LoopClass(f, max(f.n, 1))))
        conj = infty(product(product(q, minus(gff.representative)), reverse(q)))
        if certificate is not None and certificate.to_path != conj:
            tail_bridge = extension_absorption_homotopy(minus(conj), minus(certificate.to_path))
            certificate = certificate.concat(tail_bridge.reversed())
        identity_certified = (
            certificate is not None
            and certificate.from_path == f
            and certificate.to_path == conj
            and is_ec_homotopy(certificate, endpoints_fixed=True)
        )

        qbound = bound if bound is not None else max(f.n, conj.n) + 2
        res = class_equal(conj, f, max(qbound, f.n, conj.n), max_nodes=max_nodes)
        out.append(PipelineSample(f, k_valid, identity_certified, res.kind, certificate))
    return PipelineReport(p, r, q, out)
