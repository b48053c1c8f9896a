# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled search backend: packed-state breadth-first / best-first reachability.

States pack into two 64-bit words (at most 32 slots over at most 16 points).
Candidate order, queue discipline, and tie-breaking replicate
dighom.search.pure exactly, so the two backends return identical results.
"""

from libc.stdlib cimport free, malloc, realloc
from libc.string cimport memset

ctypedef unsigned long long u64

KERNEL_MAX_SLOTS = 32
KERNEL_MAX_POINTS = 16

DEF MAXSLOTS = 32
DEF MAXPTS = 16


cdef inline u64 _mix(u64 hi, u64 lo) noexcept nogil:
    cdef u64 x = lo ^ (hi * <u64>0x9e3779b97f4a7c15ULL + <u64>0x2545f4914f6cdd1dULL)
    x ^= x >> 33
    x *= <u64>0xff51afd7ed558ccdULL
    x ^= x >> 33
    x *= <u64>0xc4ceb9fe1a85ec53ULL
    x ^= x >> 33
    return x


cdef inline int _getslot(u64 hi, u64 lo, int i) noexcept nogil:
    if i < 16:
        return <int>((lo >> (4 * i)) & 15)
    return <int>((hi >> (4 * (i - 16))) & 15)


cdef inline void _setslot(u64 *hi, u64 *lo, int i, int v) noexcept nogil:
    if i < 16:
        lo[0] = (lo[0] & ~((<u64>15) << (4 * i))) | ((<u64>v) << (4 * i))
    else:
        hi[0] = (hi[0] & ~((<u64>15) << (4 * (i - 16)))) | ((<u64>v) << (4 * (i - 16)))


cdef class PackedVisited:
    """Membership handle over the visited set of one finished search."""

    cdef u64 *hi
    cdef u64 *lo
    cdef int *tab
    cdef Py_ssize_t count
    cdef Py_ssize_t mask
    cdef int n_slots

    def __dealloc__(self):
        if self.hi != NULL:
            free(self.hi)
        if self.lo != NULL:
            free(self.lo)
        if self.tab != NULL:
            free(self.tab)

    cdef int _probe(self, u64 shi, u64 slo) noexcept nogil:
        cdef Py_ssize_t pos = <Py_ssize_t>(_mix(shi, slo) & <u64>self.mask)
        cdef int idx
        while True:
            idx = self.tab[pos]
            if idx < 0:
                return -1
            if self.hi[idx] == shi and self.lo[idx] == slo:
                return idx
            pos = (pos + 1) & self.mask

    def contains(self, state):
        cdef u64 shi = 0, slo = 0
        cdef int i
        if len(state) != self.n_slots:
            return False
        for i in range(self.n_slots):
            _setslot(&shi, &slo, i, <int>state[i])
        return self._probe(shi, slo) >= 0

    @property
    def size(self):
        return self.count


cdef struct Ctx:
    int n_slots
    int n_points
    unsigned int adjeq[MAXPTS]           # bit j: j equal-or-adjacent to row point
    int nbr[MAXPTS][MAXPTS]
    int nbr_n[MAXPTS]
    int pins[MAXSLOTS]
    # flattened earlier-partner lists for the DFS enumeration
    int adj_off[MAXSLOTS + 1]
    int adj_part[2 * MAXSLOTS * MAXSLOTS]
    int eq_off[MAXSLOTS + 1]
    int eq_part[2 * MAXSLOTS * MAXSLOTS]
    int forb_off[MAXSLOTS + 1]
    int forb_part[4 * MAXSLOTS * MAXSLOTS]   # pairs (slot, point)
    # full pair list (for whole-state checks)
    int n_forb
    int forb_i[2 * MAXSLOTS * MAXSLOTS]
    int forb_j[2 * MAXSLOTS * MAXSLOTS]
    int forb_p[2 * MAXSLOTS * MAXSLOTS]
    # all-partner lists (for single moves)
    int all_off[MAXSLOTS + 1]
    int all_part[4 * MAXSLOTS * MAXSLOTS]
    bint has_exempt
    u64 ex_hi
    u64 ex_lo
    int hcost[MAXSLOTS][MAXPTS]
    bint watch
    int watch_a
    int watch_b


cdef struct Store:
    u64 *hi
    u64 *lo
    int *parent
    int *depth
    Py_ssize_t count
    Py_ssize_t cap
    int *tab
    Py_ssize_t mask


cdef int _store_grow_tab(Store *st) except -1:
    cdef Py_ssize_t newmask = st.mask * 2 + 1
    cdef int *ntab = <int *>malloc((newmask + 1) * sizeof(int))
    cdef Py_ssize_t i, pos
    if ntab == NULL:
        raise MemoryError()
    memset(ntab, 0xff, (newmask + 1) * sizeof(int))
    for i in range(st.count):
        pos = <Py_ssize_t>(_mix(st.hi[i], st.lo[i]) & <u64>newmask)
        while ntab[pos] >= 0:
            pos = (pos + 1) & newmask
        ntab[pos] = <int>i
    free(st.tab)
    st.tab = ntab
    st.mask = newmask
    return 0


cdef int _store_insert(Store *st, u64 shi, u64 slo, int parent, int depth) except -2:
    """Return new node index, or -1 when the state was already present."""
    cdef Py_ssize_t pos = <Py_ssize_t>(_mix(shi, slo) & <u64>st.mask)
    cdef int idx
    while True:
        idx = st.tab[pos]
        if idx < 0:
            break
        if st.hi[idx] == shi and st.lo[idx] == slo:
            return -1
        pos = (pos + 1) & st.mask
    if st.count == st.cap:
        st.cap *= 2
        st.hi = <u64 *>realloc(st.hi, st.cap * sizeof(u64))
        st.lo = <u64 *>realloc(st.lo, st.cap * sizeof(u64))
        st.parent = <int *>realloc(st.parent, st.cap * sizeof(int))
        st.depth = <int *>realloc(st.depth, st.cap * sizeof(int))
        if st.hi == NULL or st.lo == NULL or st.parent == NULL or st.depth == NULL:
            raise MemoryError()
    st.hi[st.count] = shi
    st.lo[st.count] = slo
    st.parent[st.count] = parent
    st.depth[st.count] = depth
    st.tab[pos] = <int>st.count
    st.count += 1
    if st.count * 5 > (st.mask + 1) * 3:
        _store_grow_tab(st)
    return <int>(st.count - 1)


cdef int _lookup(Store *st, u64 shi, u64 slo) noexcept nogil:
    cdef Py_ssize_t pos = <Py_ssize_t>(_mix(shi, slo) & <u64>st.mask)
    cdef int idx
    while True:
        idx = st.tab[pos]
        if idx < 0:
            return -1
        if st.hi[idx] == shi and st.lo[idx] == slo:
            return idx
        pos = (pos + 1) & st.mask


cdef inline bint _pair_forbidden(Ctx *cx, u64 shi, u64 slo) noexcept nogil:
    cdef int k
    if cx.has_exempt and shi == cx.ex_hi and slo == cx.ex_lo:
        return False
    for k in range(cx.n_forb):
        if _getslot(shi, slo, cx.forb_i[k]) == cx.forb_p[k] and \
           _getslot(shi, slo, cx.forb_j[k]) == cx.forb_p[k]:
            return True
    return False


cdef inline long long _heur(Ctx *cx, u64 shi, u64 slo) noexcept nogil:
    cdef long long h = 0
    cdef int i
    for i in range(cx.n_slots):
        h += cx.hcost[i][_getslot(shi, slo, i)]
    return h


cdef struct Heap:
    u64 *key       # (priority << 32) | insertion counter
    int *idx
    Py_ssize_t size
    Py_ssize_t cap


cdef int _heap_push(Heap *hp, u64 key, int idx) except -1:
    cdef Py_ssize_t i, par
    if hp.size == hp.cap:
        hp.cap *= 2
        hp.key = <u64 *>realloc(hp.key, hp.cap * sizeof(u64))
        hp.idx = <int *>realloc(hp.idx, hp.cap * sizeof(int))
        if hp.key == NULL or hp.idx == NULL:
            raise MemoryError()
    i = hp.size
    hp.size += 1
    hp.key[i] = key
    hp.idx[i] = idx
    while i > 0:
        par = (i - 1) // 2
        if hp.key[par] <= hp.key[i]:
            break
        hp.key[par], hp.key[i] = hp.key[i], hp.key[par]
        hp.idx[par], hp.idx[i] = hp.idx[i], hp.idx[par]
        i = par
    return 0


cdef int _heap_pop(Heap *hp) noexcept nogil:
    cdef int out = hp.idx[0]
    cdef Py_ssize_t i = 0, child
    hp.size -= 1
    hp.key[0] = hp.key[hp.size]
    hp.idx[0] = hp.idx[hp.size]
    while True:
        child = 2 * i + 1
        if child >= hp.size:
            break
        if child + 1 < hp.size and hp.key[child + 1] < hp.key[child]:
            child += 1
        if hp.key[i] <= hp.key[child]:
            break
        hp.key[i], hp.key[child] = hp.key[child], hp.key[i]
        hp.idx[i], hp.idx[child] = hp.idx[child], hp.idx[i]
        i = child
    return out


cdef _build_ctx(Ctx *cx, int n_slots, int n_points, neighbors, adjacent_slots,
                equal_slots, pinned, forbidden_pairs, exempt_state,
                heuristic_costs, watch_pair):
    cdef int i, j, p, k, c
    if n_slots > MAXSLOTS or n_points > MAXPTS:
        raise ValueError("state space exceeds the compiled kernel limits")
    cx.n_slots = n_slots
    cx.n_points = n_points
    for i in range(n_points):
        cx.adjeq[i] = <unsigned int>(1 << i)
        cx.nbr_n[i] = len(neighbors[i])
        for k in range(cx.nbr_n[i]):
            j = neighbors[i][k]
            cx.nbr[i][k] = j
            cx.adjeq[i] |= <unsigned int>(1 << j)
    for i in range(n_slots):
        cx.pins[i] = pinned[i] if pinned else -1

    # earlier-partner tables (partner slot strictly below the keyed slot)
    cdef list adj_lists = [[] for _ in range(n_slots)]
    for (i, j) in adjacent_slots:
        adj_lists[max(i, j)].append(min(i, j))
    cdef list eq_lists = [[] for _ in range(n_slots)]
    for (i, j) in equal_slots:
        eq_lists[max(i, j)].append(min(i, j))
    cdef list forb_lists = [[] for _ in range(n_slots)]
    cx.n_forb = len(forbidden_pairs)
    for k, (i, j, p) in enumerate(forbidden_pairs):
        cx.forb_i[k] = i
        cx.forb_j[k] = j
        cx.forb_p[k] = p
        forb_lists[max(i, j)].append((min(i, j), p))
    cdef list all_lists = [[] for _ in range(n_slots)]
    for (i, j) in adjacent_slots:
        all_lists[i].append(j)
        all_lists[j].append(i)

    c = 0
    for i in range(n_slots):
        cx.adj_off[i] = c
        for j in adj_lists[i]:
            cx.adj_part[c] = j
            c += 1
    cx.adj_off[n_slots] = c
    c = 0
    for i in range(n_slots):
        cx.eq_off[i] = c
        for j in eq_lists[i]:
            cx.eq_part[c] = j
            c += 1
    cx.eq_off[n_slots] = c
    c = 0
    for i in range(n_slots):
        cx.forb_off[i] = c
        for (j, p) in forb_lists[i]:
            cx.forb_part[c] = j
            cx.forb_part[c + 1] = p
            c += 2
    cx.forb_off[n_slots] = c
    c = 0
    for i in range(n_slots):
        cx.all_off[i] = c
        for j in all_lists[i]:
            cx.all_part[c] = j
            c += 1
    cx.all_off[n_slots] = c

    cx.has_exempt = exempt_state is not None
    cx.ex_hi = 0
    cx.ex_lo = 0
    if cx.has_exempt:
        for i in range(n_slots):
            _setslot(&cx.ex_hi, &cx.ex_lo, i, <int>exempt_state[i])
    for i in range(n_slots):
        for j in range(n_points):
            cx.hcost[i][j] = 0
    if heuristic_costs is not None:
        for i in range(n_slots):
            for j in range(n_points):
                cx.hcost[i][j] = heuristic_costs[i][j]
    cx.watch = watch_pair is not None
    if cx.watch:
        cx.watch_a = watch_pair[0]
        cx.watch_b = watch_pair[1]
    else:
        cx.watch_a = 0
        cx.watch_b = 0


cdef u64 _encode(int n_slots, state, u64 *hi) except? 0:
    cdef u64 shi = 0, slo = 0
    cdef int i
    for i in range(n_slots):
        _setslot(&shi, &slo, i, <int>state[i])
    hi[0] = shi
    return slo


cdef _decode(int n_slots, u64 shi, u64 slo):
    cdef int i
    return tuple(_getslot(shi, slo, i) for i in range(n_slots))


# Emission outcome codes for _emit.
DEF EMIT_OLD = 0
DEF EMIT_NEW = 1
DEF EMIT_TARGET = 2
DEF EMIT_BUDGET = 3


cdef int _emit(Ctx *cx, Store *st, Store *tstore, u64 shi, u64 slo,
               int parent, int depth, Py_ssize_t max_nodes,
               bint *bound_attained) except -1:
    cdef int idx = _store_insert(st, shi, slo, parent, depth)
    if idx < 0:
        return EMIT_OLD
    if cx.watch and _getslot(shi, slo, cx.watch_a) != _getslot(shi, slo, cx.watch_b):
        bound_attained[0] = True
    if max_nodes > 0 and st.count > max_nodes:
        return EMIT_BUDGET
    if tstore != NULL and _lookup(tstore, shi, slo) >= 0:
        return EMIT_TARGET
    return EMIT_NEW


cdef bint _state_ok(Ctx *cx, u64 shi, u64 slo) noexcept nogil:
    """Pins, slot adjacency, and slot equality for a whole state."""
    cdef int slot, o, v
    for slot in range(cx.n_slots):
        v = _getslot(shi, slo, slot)
        if cx.pins[slot] >= 0 and v != cx.pins[slot]:
            return False
        for o in range(cx.adj_off[slot], cx.adj_off[slot + 1]):
            if not (cx.adjeq[v] >> _getslot(shi, slo, cx.adj_part[o])) & 1:
                return False
        for o in range(cx.eq_off[slot], cx.eq_off[slot + 1]):
            if v != _getslot(shi, slo, cx.eq_part[o]):
                return False
    return True


cdef int _expand(Ctx *cx, Store *st, Store *tstore, int cur_idx,
                 bint single_moves, Py_ssize_t max_nodes, Heap *hp,
                 bint best_mode, bint *bound_attained,
                 int *found_idx) except -1:
    """Enumerate successors of node cur_idx, inserting new states.

    Returns 1 when a target was reached (found_idx set), 2 on budget
    exhaustion, 0 otherwise.  BFS mode appends to the store in discovery
    order (the store order doubles as the queue); best mode pushes on hp.
    """
    cdef u64 chi = st.hi[cur_idx], clo = st.lo[cur_idx]
    cdef u64 shi, slo
    cdef int depth = st.depth[cur_idx] + 1
    cdef int slot, k, v, o, r, idx
    cdef int vals[MAXSLOTS]
    cdef int cand[MAXSLOTS][MAXPTS + 1]
    cdef int cand_n[MAXSLOTS]
    cdef int choice[MAXSLOTS]
    cdef int buf[MAXSLOTS]
    cdef bint ok
    cdef int n = cx.n_slots

    for slot in range(n):
        vals[slot] = _getslot(chi, clo, slot)

    if single_moves:
        for slot in range(n):
            if cx.pins[slot] >= 0:
                continue
            for k in range(cx.nbr_n[vals[slot]]):
                v = cx.nbr[vals[slot]][k]
                ok = True
                for o in range(cx.all_off[slot], cx.all_off[slot + 1]):
                    if not (cx.adjeq[v] >> vals[cx.all_part[o]]) & 1:
                        ok = False
                        break
                if not ok:
                    continue
                shi, slo = chi, clo
                _setslot(&shi, &slo, slot, v)
                if _pair_forbidden(cx, shi, slo):
                    continue
                r = _store_emit_step(cx, st, tstore, shi, slo, cur_idx, depth,
                                     max_nodes, hp, best_mode, bound_attained,
                                     found_idx)
                if r:
                    return r
        return 0

    # Multi-slot enumeration: depth-first over per-slot candidate lists with
    # incremental constraint checks against already-chosen earlier slots.
    for slot in range(n):
        if cx.pins[slot] >= 0:
            cand[slot][0] = vals[slot]
            cand_n[slot] = 1
        else:
            cand[slot][0] = vals[slot]
            for k in range(cx.nbr_n[vals[slot]]):
                cand[slot][k + 1] = cx.nbr[vals[slot]][k]
            cand_n[slot] = cx.nbr_n[vals[slot]] + 1

    cdef int sp = 0
    choice[0] = 0
    while sp >= 0:
        if choice[sp] == cand_n[sp]:
            sp -= 1
            if sp >= 0:
                choice[sp] += 1
            continue
        v = cand[sp][choice[sp]]
        ok = True
        for o in range(cx.adj_off[sp], cx.adj_off[sp + 1]):
            if not (cx.adjeq[v] >> buf[cx.adj_part[o]]) & 1:
                ok = False
                break
        if ok:
            for o in range(cx.eq_off[sp], cx.eq_off[sp + 1]):
                if buf[cx.eq_part[o]] != v:
                    ok = False
                    break
        if ok:
            o = cx.forb_off[sp]
            while o < cx.forb_off[sp + 1]:
                if v == cx.forb_part[o + 1] and buf[cx.forb_part[o]] == cx.forb_part[o + 1]:
                    ok = False
                    break
                o += 2
        if not ok:
            choice[sp] += 1
            continue
        buf[sp] = v
        if sp + 1 < n:
            sp += 1
            choice[sp] = 0
            continue
        # leaf
        shi = 0
        slo = 0
        for k in range(n):
            _setslot(&shi, &slo, k, buf[k])
        if shi != chi or slo != clo:
            r = _store_emit_step(cx, st, tstore, shi, slo, cur_idx, depth,
                                 max_nodes, hp, best_mode, bound_attained,
                                 found_idx)
            if r:
                return r
        choice[sp] += 1

    # The exempt state is invisible to forbidden-pair pruning; when pruning
    # would have dropped it, test and emit it explicitly (mirrors pure).
    if cx.has_exempt and not (cx.ex_hi == chi and cx.ex_lo == clo):
        shi, slo = cx.ex_hi, cx.ex_lo
        ok = False
        for k in range(cx.n_forb):
            if _getslot(shi, slo, cx.forb_i[k]) == cx.forb_p[k] and \
               _getslot(shi, slo, cx.forb_j[k]) == cx.forb_p[k]:
                ok = True
                break
        if ok:
            for slot in range(n):
                if not (cx.adjeq[_getslot(shi, slo, slot)] >> vals[slot]) & 1:
                    ok = False
                    break
        if ok and _state_ok(cx, shi, slo):
            r = _store_emit_step(cx, st, tstore, shi, slo, cur_idx, depth,
                                 max_nodes, hp, best_mode, bound_attained,
                                 found_idx)
            if r:
                return r
    return 0


cdef int _store_emit_step(Ctx *cx, Store *st, Store *tstore, u64 shi, u64 slo,
                          int parent, int depth, Py_ssize_t max_nodes,
                          Heap *hp, bint best_mode, bint *bound_attained,
                          int *found_idx) except -1:
    cdef int r = _emit(cx, st, tstore, shi, slo, parent, depth, max_nodes,
                       bound_attained)
    cdef int idx
    if r == EMIT_BUDGET:
        return 2
    if r == EMIT_TARGET:
        found_idx[0] = <int>(st.count - 1)
        return 1
    if r == EMIT_NEW and best_mode:
        idx = <int>(st.count - 1)
        _heap_push(hp, ((<u64>(depth + 3 * _heur(cx, shi, slo))) << 32) | <u64>idx, idx)
    return 0


def run(int n_slots, int n_points, neighbors, adjacent_slots, equal_slots,
        pinned, forbidden_pairs, exempt_state, starts, targets, str mode,
        heuristic_costs, bint single_moves, max_nodes, bint want_witness,
        watch_pair):
    """Run one search; starts must already be valid and non-forbidden."""
    cdef Ctx cx
    _build_ctx(&cx, n_slots, n_points, neighbors, adjacent_slots, equal_slots,
               pinned, forbidden_pairs, exempt_state, heuristic_costs,
               watch_pair)

    cdef Py_ssize_t budget = -1 if max_nodes is None else <Py_ssize_t>max_nodes
    cdef bint best_mode = mode == "best"
    if not best_mode and mode != "bfs":
        raise ValueError(f"unknown search mode {mode!r}")

    cdef Store st
    st.cap = 1024
    st.count = 0
    st.hi = <u64 *>malloc(st.cap * sizeof(u64))
    st.lo = <u64 *>malloc(st.cap * sizeof(u64))
    st.parent = <int *>malloc(st.cap * sizeof(int))
    st.depth = <int *>malloc(st.cap * sizeof(int))
    st.mask = 4095
    st.tab = <int *>malloc((st.mask + 1) * sizeof(int))
    memset(st.tab, 0xff, (st.mask + 1) * sizeof(int))

    cdef Store tst
    cdef Store *tptr = NULL
    tst.hi = NULL
    tst.lo = NULL
    tst.parent = NULL
    tst.depth = NULL
    tst.tab = NULL

    cdef Heap hp
    hp.cap = 1024
    hp.size = 0
    hp.key = <u64 *>malloc(hp.cap * sizeof(u64))
    hp.idx = <int *>malloc(hp.cap * sizeof(int))

    cdef u64 shi, slo
    cdef int i, r, idx
    cdef int found_idx = -1
    cdef bint bound_attained = False
    cdef bint budget_hit = False
    cdef int qhead = 0

    try:
        if targets is not None:
            tst.cap = max(16, 2 * len(targets))
            tst.count = 0
            tst.hi = <u64 *>malloc(tst.cap * sizeof(u64))
            tst.lo = <u64 *>malloc(tst.cap * sizeof(u64))
            tst.parent = <int *>malloc(tst.cap * sizeof(int))
            tst.depth = <int *>malloc(tst.cap * sizeof(int))
            tst.mask = 255
            while (tst.mask + 1) * 3 < len(targets) * 5:
                tst.mask = tst.mask * 2 + 1
            tst.tab = <int *>malloc((tst.mask + 1) * sizeof(int))
            memset(tst.tab, 0xff, (tst.mask + 1) * sizeof(int))
            for t in targets:
                slo = _encode(n_slots, t, &shi)
                _store_insert(&tst, shi, slo, -1, 0)
            tptr = &tst

        for s in starts:
            slo = _encode(n_slots, s, &shi)
            idx = _store_insert(&st, shi, slo, -1, 0)
            if idx >= 0:
                if cx.watch and _getslot(shi, slo, cx.watch_a) != _getslot(shi, slo, cx.watch_b):
                    bound_attained = True
                if best_mode:
                    _heap_push(&hp, ((<u64>(3 * _heur(&cx, shi, slo))) << 32) | <u64>idx, idx)
        if tptr != NULL:
            for i in range(<int>st.count):
                if _lookup(tptr, st.hi[i], st.lo[i]) >= 0:
                    found_idx = i
                    break

        if best_mode:
            while found_idx < 0 and hp.size > 0:
                i = _heap_pop(&hp)
                r = _expand(&cx, &st, tptr, i, single_moves, budget, &hp,
                            True, &bound_attained, &found_idx)
                if r == 2:
                    budget_hit = True
                    break
        else:
            while found_idx < 0 and qhead < st.count:
                i = qhead
                qhead += 1
                r = _expand(&cx, &st, tptr, i, single_moves, budget, &hp,
                            False, &bound_attained, &found_idx)
                if r == 2:
                    budget_hit = True
                    break

        if budget_hit:
            from dighom.search.problem import SearchBudgetExceeded
            raise SearchBudgetExceeded(f"visited more than {max_nodes} states")

        found_state = None
        witness = None
        if found_idx >= 0:
            found_state = _decode(n_slots, st.hi[found_idx], st.lo[found_idx])
            if want_witness:
                chain = []
                i = found_idx
                while i >= 0:
                    chain.append(_decode(n_slots, st.hi[i], st.lo[i]))
                    i = st.parent[i]
                witness = chain[::-1]

        saturated = found_idx < 0 and (hp.size == 0 if best_mode else qhead >= st.count)

        visited = PackedVisited()
        visited.hi = st.hi
        visited.lo = st.lo
        visited.tab = st.tab
        visited.count = st.count
        visited.mask = st.mask
        visited.n_slots = n_slots
        st.hi = NULL
        st.lo = NULL
        st.tab = NULL
        return found_state, witness, visited.count, saturated, bound_attained, visited
    finally:
        if st.hi != NULL:
            free(st.hi)
        if st.lo != NULL:
            free(st.lo)
        if st.parent != NULL:
            free(st.parent)
        if st.depth != NULL:
            free(st.depth)
        if st.tab != NULL:
            free(st.tab)
        free(hp.key)
        free(hp.idx)
        if tst.hi != NULL:
            free(tst.hi)
        if tst.lo != NULL:
            free(tst.lo)
        if tst.parent != NULL:
            free(tst.parent)
        if tst.depth != NULL:
            free(tst.depth)
        if tst.tab != NULL:
            free(tst.tab)


def successors_of(int n_slots, int n_points, neighbors, adjacent_slots,
                  equal_slots, pinned, forbidden_pairs, exempt_state, state,
                  bint single_moves):
    """Successor enumeration in kernel order, for parity tests."""
    cdef Ctx cx
    _build_ctx(&cx, n_slots, n_points, neighbors, adjacent_slots, equal_slots,
               pinned, forbidden_pairs, exempt_state, None, None)
    cdef Store st
    st.cap = 64
    st.count = 0
    st.hi = <u64 *>malloc(st.cap * sizeof(u64))
    st.lo = <u64 *>malloc(st.cap * sizeof(u64))
    st.parent = <int *>malloc(st.cap * sizeof(int))
    st.depth = <int *>malloc(st.cap * sizeof(int))
    st.mask = 1023
    st.tab = <int *>malloc((st.mask + 1) * sizeof(int))
    memset(st.tab, 0xff, (st.mask + 1) * sizeof(int))
    cdef u64 shi, slo
    slo = _encode(n_slots, state, &shi)
    cdef int found_idx = -1
    cdef bint bound = False
    cdef Py_ssize_t before
    out = []
    try:
        _store_insert(&st, shi, slo, -1, 0)
        before = st.count
        _expand(&cx, &st, NULL, 0, single_moves, -1, NULL, False,
                &bound, &found_idx)
        for i in range(before, st.count):
            out.append(_decode(n_slots, st.hi[i], st.lo[i]))
        return out
    finally:
        free(st.hi)
        free(st.lo)
        free(st.parent)
        free(st.depth)
        free(st.tab)
