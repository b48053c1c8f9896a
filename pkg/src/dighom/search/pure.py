"""Pure-Python search backend; the reference semantics for the kernel.

Successor order is fixed (slots ascending; per slot the current value first,
then neighbors ascending) so breadth-first results, witnesses, and therefore
every verdict are deterministic and must match the compiled backend exactly.
"""

from __future__ import annotations

import heapq
from collections import deque
from typing import Iterator, Sequence

from .problem import (
    SearchBudgetExceeded,
    SearchOutcome,
    SearchProblem,
    State,
    adjacency_ok,
    state_forbidden,
    state_valid,
)


def _adjeq(problem: SearchProblem) -> list[set[int]]:
    rows = []
    for p in range(problem.n_points):
        rows.append({p, *problem.neighbors[p]})
    return rows


def successors(problem: SearchProblem, state: State, *, single_moves: bool = False) -> Iterator[State]:
    """All one-step moves from state, in canonical order, excluding state itself."""
    if single_moves:
        yield from _single_successors(problem, state)
    else:
        yield from _multi_successors(problem, state)


def _single_successors(problem: SearchProblem, state: State) -> Iterator[State]:
    if problem.equal_slots:
        raise ValueError("single moves cannot respect equality constraints")
    adjeq = _adjeq(problem)
    pins = problem.pins
    partners: list[list[int]] = [[] for _ in range(problem.n_slots)]
    for i, j in problem.adjacent_slots:
        partners[i].append(j)
        partners[j].append(i)
    for slot in range(problem.n_slots):
        if pins[slot] >= 0:
            continue
        cur = state[slot]
        for v in problem.neighbors[cur]:
            if any(state[o] not in adjeq[v] for o in partners[slot]):
                continue
            nxt = state[:slot] + (v,) + state[slot + 1 :]
            if state_forbidden(problem, nxt):
                continue
            yield nxt


def _multi_successors(problem: SearchProblem, state: State) -> Iterator[State]:
    n = problem.n_slots
    adjeq = _adjeq(problem)
    pins = problem.pins
    earlier_adj: list[list[int]] = [[] for _ in range(n)]
    for i, j in problem.adjacent_slots:
        lo, hi = min(i, j), max(i, j)
        earlier_adj[hi].append(lo)
    earlier_eq: list[list[int]] = [[] for _ in range(n)]
    for i, j in problem.equal_slots:
        lo, hi = min(i, j), max(i, j)
        earlier_eq[hi].append(lo)
    earlier_forb: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for i, j, p in problem.forbidden_pairs:
        lo, hi = min(i, j), max(i, j)
        earlier_forb[hi].append((lo, p))

    cand: list[list[int]] = []
    for slot in range(n):
        cur = state[slot]
        cand.append([cur] if pins[slot] >= 0 else [cur, *problem.neighbors[cur]])

    buf = [0] * n
    out: list[State] = []

    def extend(slot: int) -> Iterator[State]:
        if slot == n:
            st = tuple(buf)
            if st != state:
                if problem.forbidden_fn is None or st == problem.exempt_state or not problem.forbidden_fn(st):
                    yield st
            return
        for v in cand[slot]:
            ok = True
            for o in earlier_adj[slot]:
                if buf[o] not in adjeq[v]:
                    ok = False
                    break
            if ok:
                for o in earlier_eq[slot]:
                    if buf[o] != v:
                        ok = False
                        break
            if ok:
                for o, p in earlier_forb[slot]:
                    if v == p and buf[o] == p:
                        ok = False
                        break
            if ok:
                buf[slot] = v
                yield from extend(slot + 1)

    yield from extend(0)
    # The exempt state is invisible to the forbidden-pair pruning above, so
    # when pruning would have dropped it, test and emit it explicitly.
    ex = problem.exempt_state
    if ex is not None and ex != state:
        if any(ex[i] == p and ex[j] == p for i, j, p in problem.forbidden_pairs):
            if all(ex[i] in adjeq[state[i]] for i in range(n)) and state_valid(
                problem, ex, ignore_forbidden=True
            ):
                yield ex


def run_search(
    problem: SearchProblem,
    starts: Sequence[State],
    targets: Sequence[State] | None = None,
    *,
    mode: str = "bfs",
    heuristic_costs: Sequence[Sequence[int]] | None = None,
    single_moves: bool = False,
    max_nodes: int | None = None,
    want_witness: bool = True,
    watch_pair: tuple[int, int] | None = None,
) -> SearchOutcome:
    """Explore the move graph from starts; stop at a target or saturate."""
    for s in starts:
        if not state_valid(problem, s, ignore_forbidden=True):
            raise ValueError(f"start state {s} violates the space constraints")
    valid_starts = [s for s in starts if not state_forbidden(problem, s)]
    excluded = len(starts) - len(valid_starts)
    target_set = set(targets) if targets is not None else None

    visited: dict[State, State | None] = {}
    bound_attained = False
    found: State | None = None

    def note(st: State) -> None:
        nonlocal bound_attained
        if watch_pair is not None and st[watch_pair[0]] != st[watch_pair[1]]:
            bound_attained = True

    if mode == "bfs":
        queue: deque[State] = deque()
        for s in valid_starts:
            if s not in visited:
                visited[s] = None
                note(s)
                queue.append(s)
        for s in valid_starts:
            if target_set is not None and s in target_set:
                found = s
                break
        while found is None and queue:
            cur = queue.popleft()
            for nxt in successors(problem, cur, single_moves=single_moves):
                if nxt in visited:
                    continue
                visited[nxt] = cur
                note(nxt)
                if max_nodes is not None and len(visited) > max_nodes:
                    raise SearchBudgetExceeded(f"visited more than {max_nodes} states")
                if target_set is not None and nxt in target_set:
                    found = nxt
                    break
                queue.append(nxt)
            if found is not None:
                break
        saturated = found is None and not queue
    elif mode == "best":
        if heuristic_costs is None:
            raise ValueError("best-first mode needs heuristic costs")

        def h(st: State) -> int:
            return sum(heuristic_costs[i][v] for i, v in enumerate(st))

        counter = 0
        heap: list[tuple[int, int, State, int]] = []
        for s in valid_starts:
            if s not in visited:
                visited[s] = None
                note(s)
                heapq.heappush(heap, (3 * h(s), counter, s, 0))
                counter += 1
        for s in valid_starts:
            if target_set is not None and s in target_set:
                found = s
                break
        while found is None and heap:
            _, _, cur, depth = heapq.heappop(heap)
            for nxt in successors(problem, cur, single_moves=single_moves):
                if nxt in visited:
                    continue
                visited[nxt] = cur
                note(nxt)
                if max_nodes is not None and len(visited) > max_nodes:
                    raise SearchBudgetExceeded(f"visited more than {max_nodes} states")
                if target_set is not None and nxt in target_set:
                    found = nxt
                    break
                heapq.heappush(heap, (depth + 1 + 3 * h(nxt), counter, nxt, depth + 1))
                counter += 1
            if found is not None:
                break
        saturated = found is None and not heap
    else:
        raise ValueError(f"unknown search mode {mode!r}")

    witness = None
    if found is not None and want_witness:
        chain = [found]
        while visited[chain[-1]] is not None:
            chain.append(visited[chain[-1]])  # type: ignore[arg-type]
        witness = list(reversed(chain))

    frozen = frozenset(visited)
    return SearchOutcome(
        found=found,
        witness=witness,
        visited_count=len(visited),
        saturated=saturated,
        excluded_starts=excluded,
        bound_attained=bound_attained,
        _contains=frozen.__contains__,
    )
